//! Courant–Weyl interval bounds, closed-form path spectra and large-`p`
//! estimates for edge eigenvalues.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Laplacian eigenvalues of a chain `C_q` (`q - 1` vertices), descending.
pub fn chain_eigenvalues_closed(q: usize) -> Vec<f64> {
    let m = q.saturating_sub(1);
    if m == 0 {
        return Vec::new();
    }
    (1..=m)
        .map(|j| {
            let s = (PI * (m - j) as f64 / (2.0 * m as f64)).sin();
            4.0 * s * s
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylEntry {
    /// 1-based inclusive index range into the descending spectrum.
    pub first: usize,
    pub last: usize,
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl WeylEntry {
    fn closed(first: usize, last: usize, lower: f64, upper: f64) -> Self {
        WeylEntry {
            first,
            last,
            lower,
            upper,
            lower_closed: true,
            upper_closed: true,
        }
    }

    /// Signed distance of `x` to the nearer endpoint, negative outside.
    pub fn margin(&self, x: f64) -> f64 {
        (x - self.lower).min(self.upper - x)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        let lo_ok = if self.lower_closed {
            x >= self.lower - tol
        } else {
            x > self.lower - tol
        };
        let hi_ok = if self.upper_closed {
            x <= self.upper + tol
        } else {
            x < self.upper + tol
        };
        lo_ok && hi_ok
    }

    pub fn describe(&self) -> String {
        let idx = if self.first == self.last {
            format!("λ_{}", self.first)
        } else {
            format!("λ_{}..λ_{}", self.first, self.last)
        };
        if self.lower == self.upper {
            return format!("{idx} = {}", self.lower);
        }
        format!(
            "{idx} ∈ {}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylBounds {
    pub n: usize,
    pub entries: Vec<WeylEntry>,
    pub within_hypotheses: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylViolation {
    pub index: usize,
    pub value: f64,
    pub bound: String,
}

impl WeylBounds {
    pub fn entry_for(&self, index: usize) -> Option<&WeylEntry> {
        self.entries
            .iter()
            .find(|e| e.first <= index && index <= e.last)
    }

    /// Eigenvalues (descending) that fall outside their interval by more
    /// than `tol`.
    pub fn violations(&self, eigenvalues: &[f64], tol: f64) -> Vec<WeylViolation> {
        eigenvalues
            .iter()
            .enumerate()
            .filter_map(|(k, &x)| {
                let e = self.entry_for(k + 1)?;
                (!e.contains(x, tol)).then(|| WeylViolation {
                    index: k + 1,
                    value: x,
                    bound: e.describe(),
                })
            })
            .collect()
    }

    /// Smallest margin over all entries; negative when something is outside.
    /// Entries that pin a value exactly (`lower == upper`) contribute
    /// `-|x - value|`.
    pub fn min_margin(&self, eigenvalues: &[f64]) -> f64 {
        eigenvalues
            .iter()
            .enumerate()
            .filter_map(|(k, &x)| self.entry_for(k + 1).map(|e| e.margin(x)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn one_chain_entries(p: usize, q: usize) -> Vec<WeylEntry> {
    let pf = p as f64;
    let n = p + q - 1;
    let top = chain_eigenvalues_closed(q).first().copied().unwrap_or(0.0);
    let mut e = vec![WeylEntry::closed(1, 1, pf, pf + 2.0)];
    if p >= 3 {
        e.push(WeylEntry::closed(2, p - 1, pf, pf));
    }
    e.push(WeylEntry {
        first: p,
        last: p,
        lower: 0.0,
        upper: (top + 2.0).min(pf),
        lower_closed: false,
        upper_closed: false,
    });
    if n > p {
        e.push(WeylEntry {
            first: p + 1,
            last: n,
            lower: 0.0,
            upper: 4.0,
            lower_closed: true,
            upper_closed: false,
        });
    }
    e
}

fn two_chain_entries(q1: usize, p: usize, q2: usize) -> Vec<WeylEntry> {
    let pf = p as f64;
    let n = p + q1 + q2 - 2;
    let top = chain_eigenvalues_closed(q1)
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(chain_eigenvalues_closed(q2).first().copied().unwrap_or(0.0));
    let mut e = vec![WeylEntry::closed(1, 2, pf, pf + 2.0)];
    if p >= 4 {
        e.push(WeylEntry::closed(3, p - 1, pf, pf));
    }
    e.push(WeylEntry {
        first: p,
        last: p + 1,
        lower: 0.0,
        upper: (top + 2.0).min(pf),
        lower_closed: false,
        upper_closed: false,
    });
    if n > p + 1 {
        e.push(WeylEntry {
            first: p + 2,
            last: n,
            lower: 0.0,
            upper: 4.0,
            lower_closed: true,
            upper_closed: false,
        });
    }
    e
}

/// Bounds for `K_p ⊕ C_q`; requires `p ≥ 4`, `q ≥ 4`.
pub fn weyl_one(p: usize, q: usize) -> Result<WeylBounds> {
    if p < 4 || q < 4 {
        return Err(Error::Hypothesis(format!(
            "one-chain Weyl bounds need p >= 4 and q >= 4 (got p = {p}, q = {q})"
        )));
    }
    weyl_one_relaxed(p, q)
}

/// [`weyl_one`] without the hypothesis check; the result records whether
/// the hypotheses held.
pub fn weyl_one_relaxed(p: usize, q: usize) -> Result<WeylBounds> {
    if p < 3 || q < 2 {
        return Err(Error::Hypothesis(format!(
            "K_{p} ⊕ C_{q} is not a valid graph (p >= 3, q >= 2)"
        )));
    }
    Ok(WeylBounds {
        n: p + q - 1,
        entries: one_chain_entries(p, q),
        within_hypotheses: p >= 4 && q >= 4,
    })
}

/// Bounds for `C_{q1} ⊕ K_p ⊕ C_{q2}`; requires `p ≥ 6`, `q1, q2 ≥ 4`.
pub fn weyl_two(q1: usize, p: usize, q2: usize) -> Result<WeylBounds> {
    if p < 6 || q1 < 4 || q2 < 4 {
        return Err(Error::Hypothesis(format!(
            "two-chain Weyl bounds need p >= 6 and q1, q2 >= 4 (got q1 = {q1}, p = {p}, q2 = {q2})"
        )));
    }
    weyl_two_relaxed(q1, p, q2)
}

pub fn weyl_two_relaxed(q1: usize, p: usize, q2: usize) -> Result<WeylBounds> {
    if p < 3 || q1 < 2 || q2 < 2 {
        return Err(Error::Hypothesis(format!(
            "C_{q1} ⊕ K_{p} ⊕ C_{q2} is not a valid graph (p >= 3, q1, q2 >= 2)"
        )));
    }
    Ok(WeylBounds {
        n: p + q1 + q2 - 2,
        entries: two_chain_entries(q1, p, q2),
        within_hypotheses: p >= 6 && q1 >= 4 && q2 >= 4,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticFamily {
    OneChain,
    TwoChainAnti,
    TwoChainSym,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEstimate {
    pub family: AsymptoticFamily,
    pub p: usize,
    pub lambda_hat: f64,
    /// `-1/(λ̂ - 2)`.
    pub sigma_hat: f64,
    pub c0_hat: f64,
}

/// Leading large-`p` estimates. The two-chain plateau is given with the
/// junction values normalized to `C_1 = ±1`.
pub fn asymptotic_edge(family: AsymptoticFamily, p: usize) -> AsymptoticEstimate {
    let pf = p as f64;
    let (lambda_hat, c0_hat) = match family {
        AsymptoticFamily::OneChain => (pf + 1.0, -1.0 / pf),
        AsymptoticFamily::TwoChainAnti => (pf + 1.0 + 1.0 / pf, 0.0),
        AsymptoticFamily::TwoChainSym => {
            let l = pf + 1.0 - 2.0 / (pf + 1.0);
            (l, 2.0 / (2.0 - l))
        }
    };
    AsymptoticEstimate {
        family,
        p,
        lambda_hat,
        sigma_hat: -1.0 / (lambda_hat - 2.0),
        c0_hat,
    }
}

/// Least-squares fit of `y = C x^{-k}` in log–log space; returns `(k, C)`.
pub fn fit_power_decay(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((-slope, (my - slope * mx).exp()))
}
