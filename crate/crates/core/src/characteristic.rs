//! Characteristic functions whose zeros are the edge eigenvalues (`λ > 4`)
//! or chain eigenvalues (`λ ∈ (0, 4)`) of the clique–chain families.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::transfer::{phase, sigma_plus};

/// `|1 + cos((2q-1)φ)|` below this counts as a pole of the phase form.
pub const POLE_EPS: f64 = 1e-9;

/// `σ (1 + σ^{2q-3}) / (1 + σ^{2q-1})`: the ratio `v_1 / v_0` imposed on a
/// finite chain of `q - 1` vertices by its free far end.
pub fn chain_ratio(sigma: f64, q: usize) -> f64 {
    let e = 2 * q as i32;
    sigma * (1.0 + sigma.powi(e - 3)) / (1.0 + sigma.powi(e - 1))
}

/// One clique, one infinite chain.
pub fn f_one_inf(lambda: f64, p: usize) -> Result<f64> {
    let s = sigma_plus(lambda)?;
    let p = p as f64;
    Ok((1.0 - lambda) * s - (p - lambda) * (1.0 - lambda) + (p - 1.0))
}

/// One clique, chain of `q - 1` vertices.
pub fn f_one_fin(lambda: f64, p: usize, q: usize) -> Result<f64> {
    let s = sigma_plus(lambda)?;
    let pf = p as f64;
    Ok((1.0 - lambda) * chain_ratio(s, q) - (pf - lambda) * (1.0 - lambda) + (pf - 1.0))
}

/// Value of the phase form, or a marker when the denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseValue {
    Value(f64),
    Pole,
}

impl PhaseValue {
    pub fn value(self) -> Option<f64> {
        match self {
            PhaseValue::Value(v) => Some(v),
            PhaseValue::Pole => None,
        }
    }
}

/// `F_q` written through the phase `φ` of `σ = e^{iφ}` on `(0, 4)`:
///
/// ```text
/// F_q = (1-λ) (cos φ + cos(2(q-1)φ)) / (1 + cos((2q-1)φ)) - (p-λ)(1-λ) + p - 1
/// ```
pub fn f_one_fin_phase(lambda: f64, p: usize, q: usize) -> Result<PhaseValue> {
    let phi = phase(lambda)?;
    Ok(f_phase_at(phi, p, q))
}

/// Same as [`f_one_fin_phase`] but parameterized directly by `φ ∈ (0, π)`.
pub fn f_phase_at(phi: f64, p: usize, q: usize) -> PhaseValue {
    let lambda = 2.0 - 2.0 * phi.cos();
    let qf = q as f64;
    let den = 1.0 + ((2.0 * qf - 1.0) * phi).cos();
    if den.abs() < POLE_EPS {
        return PhaseValue::Pole;
    }
    let num = phi.cos() + (2.0 * (qf - 1.0) * phi).cos();
    let pf = p as f64;
    PhaseValue::Value((1.0 - lambda) * num / den - (pf - lambda) * (1.0 - lambda) + pf - 1.0)
}

/// Poles `φ_k = (2k+1)π/(2q-1)` of the phase form inside `(0, π)`.
pub fn phase_poles(q: usize) -> Vec<f64> {
    let m = (2 * q - 1) as f64;
    (0..q.saturating_sub(1))
        .map(|k| (2 * k + 1) as f64 * std::f64::consts::PI / m)
        .collect()
}

/// `Q_q = σ₊ (1 + σ₊^{2q-3}) / (1 + σ₊^{2q-1}) - (p - λ)`.
pub fn q_factor(lambda: f64, p: usize, q: usize) -> Result<f64> {
    let s = sigma_plus(lambda)?;
    Ok(chain_ratio(s, q) - (p as f64 - lambda))
}

/// `(F_S, F_A)` for a clique between two infinite chains.
pub fn two_chain_inf(lambda: f64, p: usize) -> Result<(f64, f64)> {
    let s = sigma_plus(lambda)?;
    let pf = p as f64;
    let fs = (2.0 - lambda) * s - (pf - 1.0 - lambda) * (2.0 - lambda) + 2.0 * (pf - 2.0);
    let fa = s - (pf + 1.0 - lambda);
    Ok((fs, fa))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoChainFinite {
    pub d: f64,
    /// `F_{S,q}`, only when both chains have the same length.
    pub f_sym: Option<f64>,
    /// `F_{A,q} = Q_q - 1`, only when both chains have the same length.
    pub f_anti: Option<f64>,
}

/// Determinant `D_{q1,p,q2}` of the reduced 3×3 junction system, plus the
/// symmetric/antisymmetric factors when `q1 = q2`, for which
/// `D = -F_{A,q} F_{S,q}`.
pub fn two_chain_fin(lambda: f64, q1: usize, p: usize, q2: usize) -> Result<TwoChainFinite> {
    let a = q_factor(lambda, p, q1)?;
    let b = q_factor(lambda, p, q2)?;
    let pf = p as f64;
    let d = (pf - 2.0) * (2.0 - a - b) - (2.0 - lambda) * (a * b - 1.0);
    let (f_sym, f_anti) = if q1 == q2 {
        (
            Some((2.0 - lambda) * (a + 1.0) + 2.0 * (pf - 2.0)),
            Some(a - 1.0),
        )
    } else {
        (None, None)
    };
    Ok(TwoChainFinite { d, f_sym, f_anti })
}

// ---------------------------------------------------------------------------

/// Which characteristic equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeFamilyKind {
    OneChainInfinite,
    OneChainFinite { q: usize },
    TwoChainInfiniteSym,
    TwoChainInfiniteAnti,
    TwoChainFinite { q1: usize, q2: usize },
    TwoChainFiniteSym { q: usize },
    TwoChainFiniteAnti { q: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeFamily {
    #[serde(flatten)]
    pub kind: EdgeFamilyKind,
    pub p: usize,
}

impl EdgeFamily {
    pub fn new(kind: EdgeFamilyKind, p: usize) -> Result<Self> {
        let f = EdgeFamily { kind, p };
        f.validate()?;
        Ok(f)
    }

    pub fn one_infinite(p: usize) -> Result<Self> {
        Self::new(EdgeFamilyKind::OneChainInfinite, p)
    }

    pub fn one_finite(p: usize, q: usize) -> Result<Self> {
        Self::new(EdgeFamilyKind::OneChainFinite { q }, p)
    }

    pub fn two_finite(q1: usize, p: usize, q2: usize) -> Result<Self> {
        Self::new(EdgeFamilyKind::TwoChainFinite { q1, q2 }, p)
    }

    /// Structural validity: the graph exists.
    pub fn validate(&self) -> Result<()> {
        if self.p < 3 {
            return Err(domain("p", self.p as f64, "p >= 3"));
        }
        let check_q = |name: &'static str, q: usize| {
            if q < 2 {
                Err(domain(name, q as f64, "q >= 2"))
            } else {
                Ok(())
            }
        };
        match self.kind {
            EdgeFamilyKind::OneChainFinite { q }
            | EdgeFamilyKind::TwoChainFiniteSym { q }
            | EdgeFamilyKind::TwoChainFiniteAnti { q } => check_q("q", q),
            EdgeFamilyKind::TwoChainFinite { q1, q2 } => {
                check_q("q1", q1)?;
                check_q("q2", q2)
            }
            _ => Ok(()),
        }
    }

    /// Whether the parameters satisfy the hypotheses under which the root
    /// count is proven.
    pub fn hypotheses_met(&self) -> bool {
        let p = self.p;
        match self.kind {
            EdgeFamilyKind::OneChainInfinite
            | EdgeFamilyKind::TwoChainInfiniteSym
            | EdgeFamilyKind::TwoChainInfiniteAnti => p >= 5,
            EdgeFamilyKind::OneChainFinite { q }
            | EdgeFamilyKind::TwoChainFiniteSym { q }
            | EdgeFamilyKind::TwoChainFiniteAnti { q } => p >= 6 && q >= 3,
            EdgeFamilyKind::TwoChainFinite { q1, q2 } => p >= 6 && q1 >= 3 && q2 >= 3,
        }
    }

    pub fn hypotheses(&self) -> &'static str {
        match self.kind {
            EdgeFamilyKind::OneChainInfinite
            | EdgeFamilyKind::TwoChainInfiniteSym
            | EdgeFamilyKind::TwoChainInfiniteAnti => "p >= 5",
            EdgeFamilyKind::TwoChainFinite { .. } => "p >= 6, q1 >= 3, q2 >= 3",
            _ => "p >= 6, q >= 3",
        }
    }

    /// Number of roots expected in `(p, p+2]`.
    pub fn expected_roots(&self) -> usize {
        match self.kind {
            EdgeFamilyKind::TwoChainFinite { .. } => 2,
            _ => 1,
        }
    }

    /// Whether the family's interval is closed at `p + 2`.
    pub fn closed_right(&self) -> bool {
        !matches!(
            self.kind,
            EdgeFamilyKind::OneChainInfinite
                | EdgeFamilyKind::TwoChainInfiniteSym
                | EdgeFamilyKind::TwoChainInfiniteAnti
        )
    }

    pub fn evaluate(&self, lambda: f64) -> Result<f64> {
        let p = self.p;
        match self.kind {
            EdgeFamilyKind::OneChainInfinite => f_one_inf(lambda, p),
            EdgeFamilyKind::OneChainFinite { q } => f_one_fin(lambda, p, q),
            EdgeFamilyKind::TwoChainInfiniteSym => two_chain_inf(lambda, p).map(|(s, _)| s),
            EdgeFamilyKind::TwoChainInfiniteAnti => two_chain_inf(lambda, p).map(|(_, a)| a),
            EdgeFamilyKind::TwoChainFinite { q1, q2 } => {
                two_chain_fin(lambda, q1, p, q2).map(|r| r.d)
            }
            EdgeFamilyKind::TwoChainFiniteSym { q } => {
                two_chain_fin(lambda, q, p, q).map(|r| r.f_sym.expect("equal lengths"))
            }
            EdgeFamilyKind::TwoChainFiniteAnti { q } => {
                two_chain_fin(lambda, q, p, q).map(|r| r.f_anti.expect("equal lengths"))
            }
        }
    }

    pub fn name(&self) -> String {
        let p = self.p;
        match self.kind {
            EdgeFamilyKind::OneChainInfinite => format!("K_{p} ⊕ C_∞"),
            EdgeFamilyKind::OneChainFinite { q } => format!("K_{p} ⊕ C_{q}"),
            EdgeFamilyKind::TwoChainInfiniteSym => format!("C_∞ ⊕ K_{p} ⊕ C_∞ (symmetric)"),
            EdgeFamilyKind::TwoChainInfiniteAnti => format!("C_∞ ⊕ K_{p} ⊕ C_∞ (antisymmetric)"),
            EdgeFamilyKind::TwoChainFinite { q1, q2 } => format!("C_{q1} ⊕ K_{p} ⊕ C_{q2}"),
            EdgeFamilyKind::TwoChainFiniteSym { q } => format!("C_{q} ⊕ K_{p} ⊕ C_{q} (symmetric)"),
            EdgeFamilyKind::TwoChainFiniteAnti { q } => {
                format!("C_{q} ⊕ K_{p} ⊕ C_{q} (antisymmetric)")
            }
        }
    }
}

impl std::fmt::Display for EdgeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_one_inf_closed_form_values() {
        let s = -2.0 + 3f64.sqrt();
        let v = f_one_inf(6.0, 6).unwrap();
        assert!((v - 5.0 * (3.0 - 3f64.sqrt())).abs() < 1e-12);
        assert!((v - 5.0 * (1.0 - s)).abs() < 1e-12);
        assert!((v - 6.339_745_962_155_614).abs() < 1e-12);

        let s = -3.0 + 2.0 * 2f64.sqrt();
        let v = f_one_inf(8.0, 6).unwrap();
        assert!((v - (-6.0 * (1.0 + s) - (3.0 + s))).abs() < 1e-12);
        assert!((v + 7.798_989_873_223_33).abs() < 1e-9, "{v}");
    }

    #[test]
    fn domain_errors_below_band_edge() {
        assert!(f_one_inf(4.0, 6).is_err());
        assert!(f_one_fin(3.0, 6, 4).is_err());
        assert!(q_factor(2.0, 6, 4).is_err());
        assert!(two_chain_inf(4.0, 6).is_err());
        assert!(two_chain_fin(1.0, 3, 6, 3).is_err());
        assert!(f_one_fin_phase(4.5, 6, 4).is_err());
        assert!(f_one_fin_phase(0.0, 6, 4).is_err());
    }

    #[test]
    fn finite_chain_limit_underflows_to_infinite() {
        let a = f_one_fin(6.5, 6, 500).unwrap();
        let b = f_one_inf(6.5, 6).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn q_factor_values() {
        // q → ∞ at λ = 7, p = 6: σ₊ + 1 with σ₊ = (-5 + √21)/2.
        let s7 = (-5.0 + 21f64.sqrt()) / 2.0;
        let q = q_factor(7.0, 6, 400).unwrap();
        assert!((q - (s7 + 1.0)).abs() < 1e-12);
        assert!((q - 0.7913).abs() < 1e-4);

        // Negative at λ = 7 for p = 8, q = 5.
        let q = q_factor(7.0, 8, 5).unwrap();
        assert!(q < 0.0);

        // q = 3, λ = 9, p = 6 against the hand evaluation.
        let s = (-7.0 + 3.0 * 5f64.sqrt()) / 2.0;
        let hand = s * (1.0 + s.powi(3)) / (1.0 + s.powi(5)) - (6.0 - 9.0);
        assert!((q_factor(9.0, 6, 3).unwrap() - hand).abs() < 1e-14);
    }

    #[test]
    fn antisymmetric_infinite_closed_form_root() {
        let (_, fa) = two_chain_inf(7.2, 6).unwrap();
        assert!(fa.abs() < 1e-14);
        assert!((sigma_plus(7.2).unwrap() + 0.2).abs() < 1e-15);
    }

    #[test]
    fn antisymmetric_sign_change_across_interval() {
        for p in 5..=12 {
            let pf = p as f64;
            let (_, lo) = two_chain_inf(pf, p).unwrap();
            let (_, hi) = two_chain_inf(pf + 2.0, p).unwrap();
            assert!(lo < 0.0 && hi > 0.0);
        }
    }

    #[test]
    fn factorization_on_grid() {
        for q in 3..=7 {
            for p in 6..=9 {
                for k in 1..=200 {
                    let l = 4.0 + (p as f64 - 2.0) * k as f64 / 200.0;
                    let r = two_chain_fin(l, q, p, q).unwrap();
                    let prod = -r.f_anti.unwrap() * r.f_sym.unwrap();
                    assert!(
                        (r.d - prod).abs() <= 1e-10 * (1.0 + r.d.abs()),
                        "{l} {}",
                        r.d - prod
                    );
                }
            }
        }
        assert!(two_chain_fin(7.0, 3, 6, 4).unwrap().f_sym.is_none());
    }

    #[test]
    fn anti_factor_tends_to_infinite_antisymmetric() {
        let r = two_chain_fin(7.1, 300, 6, 300).unwrap();
        let (fs, fa) = two_chain_inf(7.1, 6).unwrap();
        assert!((r.f_anti.unwrap() - fa).abs() < 1e-12);
        assert!((r.f_sym.unwrap() - fs).abs() < 1e-12);
    }

    #[test]
    fn phase_form_matches_sigma_form_away_from_band() {
        // Both forms are the same rational function of σ; compare through the
        // analytic value at λ = 0 (σ = 1), where F_q = 0.
        match f_phase_at(1e-9, 6, 4) {
            PhaseValue::Value(v) => assert!(v.abs() < 1e-9),
            PhaseValue::Pole => panic!("no pole at φ → 0"),
        }
    }

    #[test]
    fn phase_pole_for_q4() {
        // 1 + cos(7φ) = 0 at φ = π/7, λ = 2 - 2cos(π/7).
        let poles = phase_poles(4);
        assert_eq!(poles.len(), 3);
        let phi = std::f64::consts::PI / 7.0;
        assert!((poles[0] - phi).abs() < 1e-15);
        let l = 2.0 - 2.0 * phi.cos();
        assert!((l - 0.198_062).abs() < 1e-6);
        assert_eq!(f_phase_at(phi, 6, 4), PhaseValue::Pole);
        assert_eq!(f_one_fin_phase(l, 6, 4).unwrap(), PhaseValue::Pole);
        assert!(f_one_fin_phase(l + 1e-3, 6, 4).unwrap().value().is_some());
    }

    #[test]
    fn family_metadata() {
        let f = EdgeFamily::one_finite(6, 4).unwrap();
        assert!(f.hypotheses_met());
        assert_eq!(f.expected_roots(), 1);
        assert!(f.closed_right());
        let f = EdgeFamily::two_finite(3, 5, 3).unwrap();
        assert!(!f.hypotheses_met());
        assert_eq!(f.expected_roots(), 2);
        assert!(EdgeFamily::one_finite(6, 1).is_err());
        assert!(EdgeFamily::one_infinite(2).is_err());
        assert!(!EdgeFamily::one_infinite(6).unwrap().closed_right());
    }
}
