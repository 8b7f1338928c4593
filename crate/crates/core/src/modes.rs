//! Explicit eigenvectors: clique modes (eigenvalue `p`), edge modes
//! (decaying along the chains) and chain modes (oscillating on the chain).

use serde::{Deserialize, Serialize};

use crate::characteristic::{EdgeFamily, EdgeFamilyKind};
use crate::error::{domain, Error, Result};
use crate::graph::{build_single_chain, build_two_chain, laplacian, GraphSpec, Role};
use crate::oracle::residual;
use crate::transfer::{sigma_plus, step, step_back, ChainState};

/// Reconstructed modes whose relative residual exceeds this are rejected.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-6;

/// `|1 - λ|` below this is treated as `λ = 1`.
const UNIT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueMode {
    pub clique: usize,
    /// `+1` entry.
    pub anchor: usize,
    /// `-1` entry.
    pub other: usize,
    pub vector: Vec<i64>,
}

impl CliqueMode {
    pub fn to_f64(&self) -> Vec<f64> {
        self.vector.iter().map(|&x| x as f64).collect()
    }
}

/// `e_anchor - e_k` for every pair of non-junction vertices of each clique,
/// with the anchor fixed to the clique's last non-junction vertex. A clique
/// with `J` distinct junction vertices contributes `p - J - 1` modes.
pub fn clique_modes(g: &GraphSpec) -> Vec<CliqueMode> {
    let mut out = Vec::new();
    for c in 0..g.cliques.len() {
        let interior = g.interior_clique_vertices(c);
        let Some((&anchor, rest)) = interior.split_last() else {
            continue;
        };
        for &k in rest.iter().rev() {
            let mut v = vec![0i64; g.n];
            v[anchor] = 1;
            v[k] = -1;
            out.push(CliqueMode {
                clique: c,
                anchor,
                other: k,
                vector: v,
            });
        }
    }
    out
}

/// Whether every clique mode satisfies `L v = p v` exactly.
pub fn clique_modes_exact(g: &GraphSpec, modes: &[CliqueMode]) -> bool {
    modes.iter().all(|m| {
        let p = g.cliques[m.clique].vertices.len() as i64;
        let lv = g.laplacian_apply_int(&m.vector);
        lv.iter().zip(&m.vector).all(|(a, b)| *a == p * b)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeMode {
    pub lambda: f64,
    pub family: EdgeFamily,
    pub sigma_plus: f64,
    /// Plateau value on the non-junction clique vertices.
    pub c0: f64,
    /// Junction value where the (right) chain attaches; `v_0` of that chain.
    pub c1: f64,
    /// Left junction value, two-chain families only.
    pub c_minus1: Option<f64>,
    /// `(a, b)` with `v_n = a σ₊ⁿ + b σ₋ⁿ` on the (right) chain.
    pub coeffs: [f64; 2],
    /// `σ₊^{2q-1}`, the value `b / a` should take for a finite chain.
    pub expected_b_over_a: Option<f64>,
    /// Explicit vector; empty for an infinite family without truncation.
    pub profile: Vec<f64>,
    /// Signed labels aligned with `profile`.
    pub labels: Vec<i64>,
    /// Relative residual of the eigenvalue equation. For infinite families
    /// the rows at the truncation cut are excluded.
    pub residual: f64,
}

impl EdgeMode {
    pub fn b_over_a(&self) -> f64 {
        self.coeffs[1] / self.coeffs[0]
    }

    /// Values on the (right) chain, `v_0` first.
    pub fn chain_values(&self, g: &GraphSpec) -> Vec<f64> {
        let ch = g.chains.last().expect("edge families have a chain");
        std::iter::once(self.profile[ch.from])
            .chain(ch.vertices.iter().map(|&v| self.profile[v]))
            .collect()
    }
}

/// Values `v_0 .. v_len` on a free-ended chain of `len` vertices, built
/// backwards from the far end and scaled to `v_0 = 1`.
fn free_chain(lambda: f64, len: usize) -> Result<Vec<f64>> {
    let mut vals = vec![0.0; len + 1];
    let mut z = ChainState::new(1.0 - lambda, 1.0);
    vals[len] = 1.0;
    vals[len - 1] = z.v_j;
    for j in (0..len - 1).rev() {
        z = step_back(lambda, z);
        vals[j] = z.v_j;
    }
    let v0 = vals[0];
    let scale = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if v0.abs() <= 1e-300 || v0.abs() < 1e-14 * scale {
        return Err(Error::NotARoot {
            lambda,
            residual: f64::INFINITY,
        });
    }
    Ok(vals.iter().map(|x| x / v0).collect())
}

fn geometric(sigma: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut x = 1.0;
    for _ in 0..=len {
        out.push(x);
        x *= sigma;
    }
    out
}

/// Solves `v_0 = a + b`, `v_1 = a σ₊ + b σ₋`.
fn split_coeffs(v0: f64, v1: f64, sigma: f64) -> [f64; 2] {
    let sm = 1.0 / sigma;
    let b = (v1 - sigma * v0) / (sm - sigma);
    [v0 - b, b]
}

/// Fills interior clique vertices of clique 0 with `c0`, sets junction values
/// and chain values (`chains[c][k]` on the `k`-th vertex of chain `c`).
fn assemble(g: &GraphSpec, c0: f64, junctions: &[(usize, f64)], chains: &[&[f64]]) -> Vec<f64> {
    let mut v = vec![0.0; g.n];
    for &i in &g.cliques[0].vertices {
        if matches!(g.roles[i], Role::Clique { .. }) {
            v[i] = c0;
        }
    }
    for &(i, x) in junctions {
        v[i] = x;
    }
    for (ch, vals) in g.chains.iter().zip(chains) {
        for (&i, &x) in ch.vertices.iter().zip(vals.iter()) {
            v[i] = x;
        }
    }
    v
}

/// Relative residual skipping the given rows.
fn residual_except(g: &GraphSpec, lambda: f64, v: &[f64], skip: &[usize]) -> f64 {
    let lv = laplacian(g).mul_vec(v);
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    lv.iter()
        .zip(v)
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, (a, b))| (a - lambda * b).abs())
        .fold(0.0, f64::max)
        / scale
}

fn check_residual(lambda: f64, r: f64) -> Result<()> {
    if r.is_finite() && r <= ROOT_RESIDUAL_TOL {
        Ok(())
    } else {
        Err(Error::NotARoot {
            lambda,
            residual: r,
        })
    }
}

/// Junction values `(C_{-1}, C_1, C_0)` from the null vector of the 3×3
/// junction system, scaled to `C_1 = 1` where possible.
fn junction_null_vector(lambda: f64, p: usize, r1: f64, r2: f64) -> [f64; 3] {
    let pf = p as f64;
    let q1 = r1 - (pf - lambda);
    let q2 = r2 - (pf - lambda);
    let rows = [
        [1.0, 1.0, -(2.0 - lambda)],
        [1.0, q2, pf - 2.0],
        [q1, 1.0, pf - 2.0],
    ];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let norm = |x: [f64; 3]| x.iter().map(|t| t * t).sum::<f64>();
    let mut best = cross(rows[0], rows[1]);
    for (i, j) in [(0, 2), (1, 2)] {
        let c = cross(rows[i], rows[j]);
        if norm(c) > norm(best) {
            best = c;
        }
    }
    let s = if best[1].abs() > 1e-8 * norm(best).sqrt() {
        best[1]
    } else {
        best.iter()
            .copied()
            .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m })
    };
    [best[0] / s, best[1] / s, best[2] / s]
}

/// Eigenvector for an edge eigenvalue `lambda` of `family`.
///
/// Single-chain modes are normalized to `v_0 = 1` (so `C_0 = 1/(1-λ)`),
/// symmetric two-chain modes to `C_1 = C_{-1} = 1`, antisymmetric ones to
/// `C_1 = -C_{-1} = 1`. For infinite families `truncation` gives the number
/// of chain vertices kept in the explicit profile.
pub fn edge_mode(family: &EdgeFamily, lambda: f64, truncation: Option<usize>) -> Result<EdgeMode> {
    family.validate()?;
    let s = sigma_plus(lambda)?;
    let p = family.p;
    let pf = p as f64;
    if truncation == Some(0) {
        return Err(domain("truncation", 0.0, "truncation >= 1"));
    }

    match family.kind {
        EdgeFamilyKind::OneChainFinite { q } => {
            let g = build_single_chain(p, q)?;
            let chain = free_chain(lambda, q - 1)?;
            let c0 = 1.0 / (1.0 - lambda);
            let junction = g.chains[0].from;
            let profile = assemble(&g, c0, &[(junction, 1.0)], &[&chain[1..]]);
            let r = residual(&laplacian(&g), lambda, &profile)?;
            check_residual(lambda, r)?;
            Ok(EdgeMode {
                lambda,
                family: *family,
                sigma_plus: s,
                c0,
                c1: 1.0,
                c_minus1: None,
                coeffs: split_coeffs(chain[0], chain[1], s),
                expected_b_over_a: Some(s.powi(2 * q as i32 - 1)),
                labels: g.labels.clone(),
                profile,
                residual: r,
            })
        }
        EdgeFamilyKind::OneChainInfinite => {
            let c0 = 1.0 / (1.0 - lambda);
            // Junction row: p v0 - (p-1) C0 - v1 = λ v0 with v0 = 1, v1 = σ₊.
            let junction_res = (pf - (pf - 1.0) * c0 - s - lambda).abs() / c0.abs().max(1.0);
            check_residual(lambda, junction_res)?;
            let (profile, labels, r) = match truncation {
                Some(t) => {
                    let g = build_single_chain(p, t + 1)?;
                    let chain = geometric(s, t);
                    let prof = assemble(&g, c0, &[(g.chains[0].from, 1.0)], &[&chain[1..]]);
                    let cut = *g.chains[0].vertices.last().expect("t >= 1");
                    let r = residual_except(&g, lambda, &prof, &[cut]);
                    (prof, g.labels.clone(), r)
                }
                None => (Vec::new(), Vec::new(), junction_res),
            };
            Ok(EdgeMode {
                lambda,
                family: *family,
                sigma_plus: s,
                c0,
                c1: 1.0,
                c_minus1: None,
                coeffs: [1.0, 0.0],
                expected_b_over_a: None,
                profile,
                labels,
                residual: r,
            })
        }
        EdgeFamilyKind::TwoChainInfiniteSym | EdgeFamilyKind::TwoChainInfiniteAnti => {
            let sign = if family.kind == EdgeFamilyKind::TwoChainInfiniteSym {
                1.0
            } else {
                -1.0
            };
            let (cm1, c1) = (sign, 1.0);
            let c0 = (c1 + cm1) / (2.0 - lambda);
            // Right junction row with w_1 = σ₊ C_1.
            let junction_res =
                (pf * c1 - (pf - 2.0) * c0 - cm1 - s * c1 - lambda * c1).abs() / c0.abs().max(1.0);
            check_residual(lambda, junction_res)?;
            let (profile, labels, r) = match truncation {
                Some(t) => {
                    let g = build_two_chain(t + 1, p, t + 1)?;
                    let right = geometric(s, t);
                    let left: Vec<f64> = right.iter().map(|x| sign * x).collect();
                    let prof = assemble(
                        &g,
                        c0,
                        &[(g.chains[0].from, cm1), (g.chains[1].from, c1)],
                        &[&left[1..], &right[1..]],
                    );
                    let cuts: Vec<usize> = g
                        .chains
                        .iter()
                        .map(|c| *c.vertices.last().expect("t >= 1"))
                        .collect();
                    let r = residual_except(&g, lambda, &prof, &cuts);
                    (prof, g.labels.clone(), r)
                }
                None => (Vec::new(), Vec::new(), junction_res),
            };
            Ok(EdgeMode {
                lambda,
                family: *family,
                sigma_plus: s,
                c0,
                c1,
                c_minus1: Some(cm1),
                coeffs: [1.0, 0.0],
                expected_b_over_a: None,
                profile,
                labels,
                residual: r,
            })
        }
        EdgeFamilyKind::TwoChainFinite { q1, q2 } => {
            two_chain_finite_mode(family, lambda, s, q1, q2, None)
        }
        EdgeFamilyKind::TwoChainFiniteSym { q } => {
            two_chain_finite_mode(family, lambda, s, q, q, Some(1.0))
        }
        EdgeFamilyKind::TwoChainFiniteAnti { q } => {
            two_chain_finite_mode(family, lambda, s, q, q, Some(-1.0))
        }
    }
}

fn two_chain_finite_mode(
    family: &EdgeFamily,
    lambda: f64,
    s: f64,
    q1: usize,
    q2: usize,
    sign: Option<f64>,
) -> Result<EdgeMode> {
    let p = family.p;
    let g = build_two_chain(q1, p, q2)?;
    let left = free_chain(lambda, q1 - 1)?;
    let right = free_chain(lambda, q2 - 1)?;
    let (cm1, c1, c0) = match sign {
        Some(sg) => (sg, 1.0, (1.0 + sg) / (2.0 - lambda)),
        None => {
            let [a, b, c] = junction_null_vector(lambda, p, left[1], right[1]);
            (a, b, c)
        }
    };
    let lv: Vec<f64> = left[1..].iter().map(|x| cm1 * x).collect();
    let rv: Vec<f64> = right[1..].iter().map(|x| c1 * x).collect();
    let profile = assemble(
        &g,
        c0,
        &[(g.chains[0].from, cm1), (g.chains[1].from, c1)],
        &[&lv, &rv],
    );
    let r = residual(&laplacian(&g), lambda, &profile)?;
    check_residual(lambda, r)?;
    Ok(EdgeMode {
        lambda,
        family: *family,
        sigma_plus: s,
        c0,
        c1,
        c_minus1: Some(cm1),
        coeffs: split_coeffs(c1 * right[0], c1 * right[1], s),
        expected_b_over_a: Some(s.powi(2 * q2 as i32 - 1)),
        labels: g.labels.clone(),
        profile,
        residual: r,
    })
}

/// `v_1 / v_0` the free far end imposes; equals
/// [`chain_ratio`](crate::characteristic::chain_ratio) at `σ₊(λ)`.
pub fn free_end_ratio(lambda: f64, q: usize) -> Result<f64> {
    let vals = free_chain(lambda, q - 1)?;
    Ok(vals[1] / vals[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainMode {
    pub lambda: f64,
    pub c0: f64,
    /// Junction value `v_0 = (1 - λ) C_0`.
    pub junction: f64,
    /// `C_0 / v_0 = 1/(1-λ)`; absent at `λ = 1`, where `v_0 = 0`.
    pub ratio: Option<f64>,
    pub profile: Vec<f64>,
    pub labels: Vec<i64>,
    pub residual: f64,
}

impl ChainMode {
    /// Unit 2-norm with the largest-magnitude entry positive.
    pub fn normalized(&self) -> Vec<f64> {
        normalize(&self.profile)
    }
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let big = v
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let s = if big < 0.0 { -n } else { n };
    v.iter().map(|x| x / s).collect()
}

/// Eigenvector of `K_p ⊕ C_q` for a chain eigenvalue `lambda ∈ (0, 4)`,
/// propagated from the junction along the chain.
pub fn chain_mode(p: usize, q: usize, lambda: f64) -> Result<ChainMode> {
    if !(lambda > 0.0 && lambda < 4.0) {
        return Err(domain("lambda", lambda, "0 < lambda < 4"));
    }
    let g = build_single_chain(p, q)?;
    let pf = p as f64;
    let (c0, v0, ratio) = if (1.0 - lambda).abs() < UNIT_EPS {
        (1.0, 0.0, None)
    } else {
        (1.0 / (1.0 - lambda), 1.0, Some(1.0 / (1.0 - lambda)))
    };
    // Junction row: p v0 - (p-1) C0 - v1 = λ v0.
    let v1 = (pf - lambda) * v0 - (pf - 1.0) * c0;
    let mut chain = vec![v1];
    let mut z = ChainState::new(v0, v1);
    for _ in 1..q - 1 {
        z = step(lambda, z);
        chain.push(z.v_jplus1);
    }
    let profile = assemble(&g, c0, &[(g.chains[0].from, v0)], &[&chain]);
    let r = residual(&laplacian(&g), lambda, &profile)?;
    check_residual(lambda, r)?;
    Ok(ChainMode {
        lambda,
        c0,
        junction: v0,
        ratio,
        labels: g.labels.clone(),
        profile,
        residual: r,
    })
}

/// Reflection `j ↔ -p+1-j` of a two-chain profile, as an index permutation.
pub fn reflection(g: &GraphSpec, p: usize) -> Option<Vec<usize>> {
    (0..g.n)
        .map(|i| g.index_of_label(-(p as i64) + 1 - g.labels[i]))
        .collect()
}
