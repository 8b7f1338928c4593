//! Bracketing root finders for the edge window `(p, p+2]` and the chain band
//! `(0, 4)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::characteristic::{f_phase_at, phase_poles, EdgeFamily};
use crate::error::{domain, Result};

pub const EDGE_SAMPLES: usize = 4000;
pub const MAX_BISECTIONS: usize = 200;
pub const DEFAULT_GRID_PER_UNIT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub lambda: f64,
    /// Final bracket in `λ`.
    pub bracket: [f64; 2],
    pub iterations: usize,
    /// Root sits on the closed right endpoint `p + 2`.
    pub at_boundary: bool,
    /// Root where numerator and denominator of the phase form vanish
    /// together, so no sign change is visible.
    pub pole_cancelled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    /// Sorted ascending.
    pub roots: Vec<f64>,
    pub details: Vec<Root>,
    /// `λ` values where the phase form's denominator vanishes.
    pub pole_locations: Vec<f64>,
    /// Intervals where a root could not be separated from a pole.
    pub unresolved: Vec<[f64; 2]>,
    pub expected: usize,
    pub hypotheses_met: bool,
    pub anomalies: Vec<String>,
}

impl RootReport {
    pub fn brackets(&self) -> Vec<[f64; 2]> {
        self.details.iter().map(|r| r.bracket).collect()
    }

    pub fn iterations(&self) -> Vec<usize> {
        self.details.iter().map(|r| r.iterations).collect()
    }

    pub fn count_matches(&self) -> bool {
        self.roots.len() == self.expected
    }

    fn finish(mut details: Vec<Root>) -> (Vec<f64>, Vec<Root>) {
        details.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        (details.iter().map(|r| r.lambda).collect(), details)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(domain("tol", tol, "tol > 0"))
    }
}

/// Bisection on `[a, b]` with `f(a)`, `f(b)` of opposite sign. `width` maps
/// the current interval to the width that `tol` is compared against.
fn bisect<F, W>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    tol: f64,
    width: W,
) -> Result<(f64, [f64; 2], usize)>
where
    F: FnMut(f64) -> Result<f64>,
    W: Fn(f64, f64) -> f64,
{
    let mut it = 0;
    while it < MAX_BISECTIONS && width(a, b) > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        it += 1;
        if fm == 0.0 {
            return Ok((m, [m, m], it));
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b), [a, b], it))
}

/// Intervals `[x_k, x_{k+1}]` of a uniform grid on `[a, b]` across which
/// `f` changes sign. Grid points where `f` is exactly zero are returned as
/// degenerate intervals.
pub fn sign_changes<F>(mut f: F, a: f64, b: f64, samples: usize) -> Result<Vec<[f64; 2]>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    let x_at = |k: usize| a + (b - a) * k as f64 / samples as f64;
    let mut prev = f(a)?;
    if prev == 0.0 {
        out.push([a, a]);
    }
    for k in 1..=samples {
        let x = x_at(k);
        let v = f(x)?;
        if v == 0.0 {
            out.push([x, x]);
        } else if prev != 0.0 && (v < 0.0) != (prev < 0.0) {
            out.push([x_at(k - 1), x]);
        }
        prev = v;
    }
    Ok(out)
}

/// All roots of the family's characteristic function in `(p, p+2]`.
///
/// For `p ≤ 4` the scan starts just above the band edge `4`, where the
/// functions are defined.
pub fn find_edge_roots(family: &EdgeFamily, tol: f64) -> Result<RootReport> {
    family.validate()?;
    check_tol(tol)?;
    let p = family.p as f64;
    let hi = p + 2.0;
    let lo = p.max(4.0);
    let f = |l: f64| family.evaluate(l);

    let x_at = |k: usize| lo + (hi - lo) * k as f64 / EDGE_SAMPLES as f64;
    let first = if lo > 4.0 { 0 } else { 1 };
    let mut details = Vec::new();
    let mut prev = (x_at(first), f(x_at(first))?);
    for k in (first + 1)..=EDGE_SAMPLES {
        let x = x_at(k);
        let v = f(x)?;
        if v == 0.0 {
            details.push(Root {
                lambda: x,
                bracket: [x, x],
                iterations: 0,
                at_boundary: k == EDGE_SAMPLES,
                pole_cancelled: false,
            });
        } else if prev.1 != 0.0 && (v < 0.0) != (prev.1 < 0.0) {
            let (r, br, it) = bisect(f, prev.0, x, prev.1, tol, |a, b| b - a)?;
            details.push(Root {
                lambda: r,
                bracket: br,
                iterations: it,
                at_boundary: false,
                pole_cancelled: false,
            });
        }
        prev = (x, v);
    }

    let (roots, details) = RootReport::finish(details);
    let expected = family.expected_roots();
    let mut anomalies = Vec::new();
    if roots.len() != expected {
        anomalies.push(format!(
            "{family}: expected {expected} root(s) in ({p}, {hi}], found {} {:?}",
            roots.len(),
            roots
        ));
    }
    if details.iter().any(|r| r.at_boundary) {
        anomalies.push(format!("{family}: root at the closed endpoint λ = {hi}"));
    }
    Ok(RootReport {
        roots,
        details,
        pole_locations: Vec::new(),
        unresolved: Vec::new(),
        expected,
        hypotheses_met: family.hypotheses_met(),
        anomalies,
    })
}

/// Whether `λ = 1` (`φ = π/3`) is a pole of the phase form at which the
/// factor `1 - λ` cancels the singularity, leaving a genuine eigenvalue with
/// zero junction value.
pub fn has_cancelled_pole(q: usize) -> bool {
    (2 * q - 1).is_multiple_of(3)
}

/// Zeros of the phase form of `F_q` in `(0, 4)`: the nonzero chain
/// eigenvalues of `K_p ⊕ C_q`.
///
/// The scan runs in `φ ∈ (0, π)` with `grid_per_unit · (2q - 1)` samples.
/// Sign changes across an analytic pole are not roots; an interval containing
/// a pole is split at `pole ± δ` and each side is checked separately.
pub fn find_chain_roots(p: usize, q: usize, grid_per_unit: usize) -> Result<RootReport> {
    find_chain_roots_tol(p, q, grid_per_unit, crate::oracle::DEFAULT_TOL)
}

pub fn find_chain_roots_tol(
    p: usize,
    q: usize,
    grid_per_unit: usize,
    tol: f64,
) -> Result<RootReport> {
    if p < 3 {
        return Err(domain("p", p as f64, "p >= 3"));
    }
    if q < 2 {
        return Err(domain("q", q as f64, "q >= 2"));
    }
    if grid_per_unit == 0 {
        return Err(domain("grid_per_unit", 0.0, "grid_per_unit >= 1"));
    }
    check_tol(tol)?;

    let cancelled = has_cancelled_pole(q);
    let third = PI / 3.0;
    let poles: Vec<f64> = phase_poles(q)
        .into_iter()
        .filter(|&ph| !(cancelled && (ph - third).abs() < 1e-12))
        .collect();
    let lam = |ph: f64| 2.0 - 2.0 * ph.cos();
    let width = |a: f64, b: f64| lam(b) - lam(a);
    let fv = |ph: f64| f_phase_at(ph, p, q).value();
    let fr = |ph: f64| -> Result<f64> {
        fv(ph).ok_or_else(|| domain("phi", ph, "phi away from a pole"))
    };

    let n = grid_per_unit * (2 * q - 1);
    let phi_at = |k: usize| PI * k as f64 / n as f64;
    let mut details = Vec::new();
    let mut unresolved = Vec::new();

    let try_bracket = |a: f64, fa: f64, b: f64, fb: f64, details: &mut Vec<Root>| -> Result<()> {
        if (fa < 0.0) != (fb < 0.0) {
            let (r, br, it) = bisect(fr, a, b, fa, tol, width)?;
            details.push(Root {
                lambda: lam(r),
                bracket: [lam(br[0]), lam(br[1])],
                iterations: it,
                at_boundary: false,
                pole_cancelled: false,
            });
        }
        Ok(())
    };

    let mut prev: Option<(f64, f64)> = None;
    for k in 1..n {
        let ph = phi_at(k);
        // Poles fall on grid points; the interval around them is split below.
        let Some(v) = fv(ph) else {
            continue;
        };
        if v == 0.0 {
            details.push(Root {
                lambda: lam(ph),
                bracket: [lam(ph), lam(ph)],
                iterations: 0,
                at_boundary: false,
                pole_cancelled: false,
            });
            prev = None;
            continue;
        }
        if let Some((a, fa)) = prev {
            let inside: Vec<f64> = poles.iter().copied().filter(|&x| x > a && x < ph).collect();
            if inside.is_empty() {
                try_bracket(a, fa, ph, v, &mut details)?;
            } else {
                // Pieces between consecutive poles, approached as closely as
                // the pole test allows.
                let mut left = (a, fa);
                for (i, &pole) in inside.iter().enumerate() {
                    match approach(&fv, pole, left.0) {
                        Some((r, fr_)) => try_bracket(left.0, left.1, r, fr_, &mut details)?,
                        None => unresolved.push([lam(left.0), lam(pole)]),
                    }
                    let next = if i + 1 < inside.len() {
                        inside[i + 1]
                    } else {
                        ph
                    };
                    match approach(&fv, pole, next) {
                        Some(pt) => left = pt,
                        None => {
                            unresolved.push([lam(pole), lam(next)]);
                            left = (next, v);
                        }
                    }
                }
                if left.0 < ph {
                    try_bracket(left.0, left.1, ph, v, &mut details)?;
                }
            }
        }
        prev = Some((ph, v));
    }

    if cancelled {
        details.push(Root {
            lambda: 1.0,
            bracket: [1.0, 1.0],
            iterations: 0,
            at_boundary: false,
            pole_cancelled: true,
        });
    }

    let (roots, details) = RootReport::finish(details);
    let expected = q - 1;
    let mut anomalies = Vec::new();
    if roots.len() != expected {
        anomalies.push(format!(
            "K_{p} ⊕ C_{q}: expected {expected} chain root(s) in (0, 4), found {}",
            roots.len()
        ));
    }
    if !unresolved.is_empty() {
        anomalies.push(format!(
            "K_{p} ⊕ C_{q}: {} interval(s) next to a pole left unresolved",
            unresolved.len()
        ));
    }
    let mut pole_locations: Vec<f64> = phase_poles(q).into_iter().map(lam).collect();
    pole_locations.sort_by(f64::total_cmp);
    Ok(RootReport {
        roots,
        details,
        pole_locations,
        unresolved,
        expected,
        hypotheses_met: p >= 6,
        anomalies,
    })
}

/// Last point on the way from `from` towards `pole` (shrinking the gap by 4
/// each time) where `f` is still defined.
fn approach<F: Fn(f64) -> Option<f64>>(f: &F, pole: f64, from: f64) -> Option<(f64, f64)> {
    let mut gap = 0.25 * (from - pole);
    let mut best = None;
    while gap.abs() > 1e-15 {
        match f(pole + gap) {
            Some(v) => best = Some((pole + gap, v)),
            None => break,
        }
        gap *= 0.25;
    }
    best
}

/// Sign-change intervals of the family's function on `(4, p]` with the given
/// step. Empty when the function keeps one sign below the edge window.
pub fn roots_below_window(family: &EdgeFamily, step: f64) -> Result<Vec<[f64; 2]>> {
    family.validate()?;
    let p = family.p as f64;
    if p <= 4.0 {
        return Ok(Vec::new());
    }
    let a = 4.0 + step;
    let samples = ((p - a) / step).ceil().max(1.0) as usize;
    sign_changes(|l| family.evaluate(l), a, p, samples)
}
