//! Dense symmetric eigensolver (cyclic Jacobi), used as the ground truth that
//! every analytic prediction is checked against.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matrix::SymMatrix;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_GROUP_REL_TOL: f64 = 1e-8;
pub const MAX_SWEEPS: usize = 100;
const SKIP_BELOW: f64 = 1e-300;

/// A run of (nearly) equal eigenvalues in the descending-sorted spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub value: f64,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Column-major `n × n`; column `k` pairs with `eigenvalues[k]`.
    vectors: Vec<f64>,
    pub groups: Vec<Group>,
    pub sweeps: usize,
    pub off_norm: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self
                    .eigenvector(a)
                    .iter()
                    .zip(self.eigenvector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |M V - V diag(λ)|`.
    pub fn reconstruction_residual(&self, m: &SymMatrix) -> f64 {
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvector(k);
                let mv = m.mul_vec(v);
                mv.iter()
                    .zip(v)
                    .map(|(a, b)| (a - self.eigenvalues[k] * b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Number of eigenvalues within `tol` of `value`.
    pub fn count_near(&self, value: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| (l - value).abs() <= tol)
            .count()
    }

    /// Number of eigenvalues in the open interval `(lo, hi)`.
    pub fn count_in_open(&self, lo: f64, hi: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| l > lo && l < hi)
            .count()
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps over all pairs `(p, q)` in row order until the off-diagonal
/// Frobenius norm drops below `tol`. Eigenvalues come back sorted descending,
/// each eigenvector with its largest-magnitude component made positive.
pub fn eig_sym(m: &SymMatrix, tol: f64) -> Result<Spectrum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain("tol", tol, "tol > 0"));
    }
    m.check_symmetric(0.0)?;
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    // Scaled by the largest entry so tiny off-diagonals do not underflow.
    let off_norm = |a: &[f64]| -> f64 {
        let mut big = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                big = big.max(a[i * n + j].abs());
            }
        }
        if big == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let x = a[i * n + j] / big;
                s += x * x;
            }
        }
        big * (2.0 * s).sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < SKIP_BELOW {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                // A <- Jᵀ A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                // V <- V J, V row-major here
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &col in &order {
        let mut column: Vec<f64> = (0..n).map(|k| v[k * n + col]).collect();
        fix_sign(&mut column);
        vectors.extend(column);
    }
    let groups = group_multiplicities(&eigenvalues, DEFAULT_GROUP_REL_TOL);
    Ok(Spectrum {
        eigenvalues,
        vectors,
        groups,
        sweeps,
        off_norm: off,
    })
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Clusters a descending-sorted array: neighbours within
/// `rel_tol · max(1, |value|)` of each other share a group.
pub fn group_multiplicities(evals: &[f64], rel_tol: f64) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (i, &x) in evals.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (evals[i - 1] - x).abs() <= rel_tol * x.abs().max(1.0) => {
                g.value = (g.value * g.len as f64 + x) / (g.len + 1) as f64;
                g.len += 1;
            }
            _ => groups.push(Group {
                value: x,
                start: i,
                len: 1,
            }),
        }
    }
    groups
}

/// `‖M v − λ v‖_max / ‖v‖_max`.
pub fn residual(m: &SymMatrix, lambda: f64, v: &[f64]) -> Result<f64> {
    if v.len() != m.dim() {
        return Err(Error::Dimension {
            expected: m.dim(),
            got: v.len(),
        });
    }
    let scale = v.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mv = m.mul_vec(v);
    let r = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).abs())
        .fold(0.0, f64::max);
    Ok(r / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_single_chain, build_two_chain, laplacian};

    fn complete(p: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(p);
        for i in 0..p {
            for j in 0..p {
                m.set(i, j, if i == j { (p - 1) as f64 } else { -1.0 });
            }
        }
        m
    }

    #[test]
    fn published_k6_c4_spectrum() {
        let l = laplacian(&build_single_chain(6, 4).unwrap());
        let s = eig_sym(&l, DEFAULT_TOL).unwrap();
        let expected = [7.0355, 6., 6., 6., 6., 3.1832, 1.5163, 0.26503, 0.];
        for (got, want) in s.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
        let sizes: Vec<usize> = s.groups.iter().map(|g| g.len).collect();
        assert_eq!(sizes, vec![1, 4, 1, 1, 1, 1]);
        assert!(s.reconstruction_residual(&l) <= 10.0 * DEFAULT_TOL * l.max_abs());
    }

    #[test]
    fn complete_graph_spectrum() {
        for p in 3..=12 {
            let s = eig_sym(&complete(p), DEFAULT_TOL).unwrap();
            for &l in &s.eigenvalues[..p - 1] {
                assert!((l - p as f64).abs() < 1e-10);
            }
            assert!(s.eigenvalues[p - 1].abs() < 1e-10);
        }
    }

    #[test]
    fn one_by_one_zero() {
        let s = eig_sym(&SymMatrix::zeros(1), DEFAULT_TOL).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0]);
        assert_eq!(s.eigenvector(0), &[1.0]);
        assert_eq!(s.sweeps, 0);
    }

    #[test]
    fn clique_plateau_group_for_k8_c5() {
        let l = laplacian(&build_single_chain(8, 5).unwrap());
        let s = eig_sym(&l, DEFAULT_TOL).unwrap();
        let g = s
            .groups
            .iter()
            .find(|g| (g.value - 8.0).abs() < 1e-6)
            .unwrap();
        assert_eq!(g.len, 6);
    }

    #[test]
    fn grouping_of_separated_values() {
        let groups = group_multiplicities(&[5.0, 4.0, 3.5, 1.0, 0.0], 1e-8);
        assert_eq!(groups.len(), 5);
        let groups = group_multiplicities(&[7.0355, 6.0, 6.0 - 1e-12, 6.0, 6.0, 3.1832], 1e-8);
        assert_eq!(
            groups.iter().map(|g| g.len).collect::<Vec<_>>(),
            vec![1, 4, 1]
        );
        assert!(group_multiplicities(&[], 1e-8).is_empty());
    }

    #[test]
    fn residual_cases() {
        let g = build_single_chain(6, 4).unwrap();
        let l = laplacian(&g);
        let mut v = vec![0.0; 9];
        v[4] = 1.0;
        v[0] = -1.0;
        assert_eq!(residual(&l, 6.0, &v).unwrap(), 0.0);
        assert_eq!(residual(&l, 0.0, &[1.0; 9]).unwrap(), 0.0);
        assert_eq!(residual(&l, 1.0, &[0.0; 9]), Err(Error::ZeroVector));
        assert!(matches!(
            residual(&l, 1.0, &[1.0; 3]),
            Err(Error::Dimension { .. })
        ));
        let s = eig_sym(&l, DEFAULT_TOL).unwrap();
        for k in 0..9 {
            assert!(residual(&l, s.eigenvalues[k], s.eigenvector(k)).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn invariants_on_test_graphs() {
        let graphs = [
            build_single_chain(6, 4).unwrap(),
            build_single_chain(12, 10).unwrap(),
            build_two_chain(5, 8, 7).unwrap(),
            build_single_chain(3, 60).unwrap(),
        ];
        for g in &graphs {
            let l = laplacian(g);
            let s = eig_sym(&l, DEFAULT_TOL).unwrap();
            assert!(s.orthonormality_error() <= 1e-10);
            let sum: f64 = s.eigenvalues.iter().sum();
            assert!((sum - l.trace()).abs() <= 1e-9 * l.trace());
            assert!(s.eigenvalues.iter().all(|&x| x >= -1e-10));
            assert_eq!(s.count_near(0.0, 1e-8), 1);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn sign_convention_is_deterministic() {
        let l = laplacian(&build_two_chain(4, 6, 4).unwrap());
        let s = eig_sym(&l, DEFAULT_TOL).unwrap();
        for k in 0..s.dim() {
            let v = s.eigenvector(k);
            let big = v
                .iter()
                .cloned()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(big > 0.0);
        }
        assert_eq!(s, eig_sym(&l, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            eig_sym(&SymMatrix::zeros(2), 0.0),
            Err(Error::Domain { name: "tol", .. })
        ));
    }

    #[test]
    fn reports_non_convergence_with_off_norm() {
        // Entries below the rotation threshold are never annihilated, so a
        // tolerance beneath them exhausts the sweep budget.
        let m = SymMatrix::from_rows(&[vec![1.0, 1e-305], vec![1e-305, 2.0]]).unwrap();
        match eig_sym(&m, 1e-310) {
            Err(Error::NoConvergence { sweeps, off_norm }) => {
                assert_eq!(sweeps, MAX_SWEEPS);
                assert!(off_norm >= 1e-305);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
