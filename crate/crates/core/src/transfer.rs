//! Transfer-matrix algebra for the uniform chain.
//!
//! On a chain the eigenvalue equation `-v_{j-1} + 2 v_j - v_{j+1} = λ v_j`
//! advances the pair `z_j = (v_j, v_{j+1})` by
//!
//! ```text
//! M_λ = [  0      1    ]
//!       [ -1   2 - λ   ]
//! ```
//!
//! whose eigenvalues `σ±` solve `σ² - (2 - λ) σ + 1 = 0`. For `λ > 4` both are
//! real and negative with `σ₊ ∈ (-1, 0)`; for `λ ∈ (0, 4)` they sit on the unit
//! circle at angle `±φ` with `λ = 2 - 2 cos φ`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferPair {
    pub lambda: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

/// Consecutive chain values `(v_j, v_{j+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub v_j: f64,
    pub v_jplus1: f64,
}

impl ChainState {
    pub fn new(v_j: f64, v_jplus1: f64) -> Self {
        ChainState { v_j, v_jplus1 }
    }
}

/// `σ₊` and `σ₋` in the hyperbolic regime `λ > 4`.
///
/// `σ₊ = -2 / ((λ-2) + sqrt((λ-2)² - 4))` avoids the cancellation in the
/// textbook root for large `λ`.
pub fn sigma_pair(lambda: f64) -> Result<TransferPair> {
    if !lambda.is_finite() || lambda <= 4.0 {
        return Err(domain(
            "lambda",
            lambda,
            "lambda > 4 (use phase() for lambda in (0, 4))",
        ));
    }
    let x = lambda - 2.0;
    // (x-2)(x+2) keeps precision near the band edge
    let root = ((x - 2.0) * (x + 2.0)).sqrt();
    let sigma_plus = -2.0 / (x + root);
    Ok(TransferPair {
        lambda,
        sigma_plus,
        sigma_minus: 1.0 / sigma_plus,
    })
}

/// `σ₊(λ)` for `λ > 4`.
pub fn sigma_plus(lambda: f64) -> Result<f64> {
    sigma_pair(lambda).map(|p| p.sigma_plus)
}

/// Angle `φ ∈ (0, π)` with `λ = 2 - 2 cos φ`, for `λ ∈ (0, 4)`.
pub fn phase(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 4.0) {
        return Err(domain("lambda", lambda, "0 < lambda < 4"));
    }
    let c = 2.0 - lambda;
    Ok((lambda * (4.0 - lambda)).sqrt().atan2(c))
}

/// Inverse of [`phase`].
pub fn lambda_of_phase(phi: f64) -> f64 {
    2.0 - 2.0 * phi.cos()
}

/// One step `z ↦ M_λ z`.
#[inline]
pub fn step(lambda: f64, z: ChainState) -> ChainState {
    ChainState {
        v_j: z.v_jplus1,
        v_jplus1: -z.v_j + (2.0 - lambda) * z.v_jplus1,
    }
}

/// One step backwards, `z ↦ M_λ⁻¹ z`: `(v_j, v_{j+1}) ↦ (v_{j-1}, v_j)`.
#[inline]
pub fn step_back(lambda: f64, z: ChainState) -> ChainState {
    ChainState {
        v_j: (2.0 - lambda) * z.v_j - z.v_jplus1,
        v_jplus1: z.v_j,
    }
}

/// `M_λⁿ z0`, by repeated multiplication.
pub fn propagate(lambda: f64, z0: ChainState, n: usize) -> ChainState {
    (0..n).fold(z0, |z, _| step(lambda, z))
}

/// Discrete Wronskian `v_j w_{j+1} - v_{j+1} w_j`; conserved because
/// `det M_λ = 1`.
pub fn wronskian(v: ChainState, w: ChainState) -> f64 {
    v.v_j * w.v_jplus1 - v.v_jplus1 * w.v_j
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sigma_at_six() {
        let t = sigma_pair(6.0).unwrap();
        let s3 = 3f64.sqrt();
        assert!((t.sigma_plus - (-2.0 + s3)).abs() < 1e-15);
        assert!((t.sigma_minus - (-2.0 - s3)).abs() < 1e-14);
    }

    #[test]
    fn sigma_near_band_edge_tends_to_minus_one() {
        let t = sigma_pair(4.0 + 1e-12).unwrap();
        assert!((t.sigma_plus + 1.0).abs() < 1e-5);
        assert!(t.sigma_plus > -1.0);
    }

    #[test]
    fn sigma_published_edge_value() {
        let s = sigma_plus(7.03).unwrap();
        assert!((s + 0.205).abs() < 5e-3, "{s}");
    }

    #[test]
    fn sigma_rejects_elliptic_regime() {
        for l in [4.0, 2.0, 0.0, -1.0, f64::NAN] {
            assert!(sigma_pair(l).is_err());
        }
    }

    #[test]
    fn phase_values() {
        assert!((phase(2.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((phase(1.0).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((phase(3.0).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        for l in [0.0, 4.0, -0.5, 4.5] {
            assert!(phase(l).is_err());
        }
    }

    #[test]
    fn phase_inverts_and_increases() {
        let mut prev = 0.0;
        for k in 1..4000 {
            let l = k as f64 * 1e-3;
            let phi = phase(l).unwrap();
            assert!(phi > prev && phi < PI);
            assert!((lambda_of_phase(phi) - l).abs() < 1e-12);
            prev = phi;
        }
    }

    #[test]
    fn propagate_cases() {
        let z = ChainState::new(0.3, -1.7);
        assert_eq!(propagate(6.0, z, 0), z);
        let s = sigma_plus(6.0).unwrap();
        let z1 = propagate(6.0, ChainState::new(1.0, s), 1);
        assert!((z1.v_j - s).abs() < 1e-15 && (z1.v_jplus1 - s * s).abs() < 1e-15);
        let exact = -2.0 + 3f64.sqrt();
        let z5 = propagate(6.0, ChainState::new(1.0, s), 5);
        assert!((z5.v_j - exact.powi(5)).abs() < 1e-12);
        assert!((z5.v_jplus1 - exact.powi(6)).abs() < 1e-12);
    }

    #[test]
    fn step_back_undoes_step() {
        let z = ChainState::new(0.25, 0.5);
        let back = step_back(5.3, step(5.3, z));
        assert!((back.v_j - z.v_j).abs() < 1e-15 && (back.v_jplus1 - z.v_jplus1).abs() < 1e-15);
    }

    #[test]
    fn wronskian_conserved_over_100_steps() {
        for &l in &[0.5, 2.7, 3.9, 4.5, 6.0] {
            let mut v = ChainState::new(1.0, 0.3);
            let mut w = ChainState::new(-0.2, 0.9);
            let w0 = wronskian(v, w);
            for _ in 0..100 {
                v = step(l, v);
                w = step(l, w);
                let scale = (v.v_j.abs() + v.v_jplus1.abs()) * (w.v_j.abs() + w.v_jplus1.abs());
                let rel = (wronskian(v, w) - w0).abs() / scale.max(1.0);
                assert!(rel <= 1e-10, "lambda {l}: {rel}");
            }
        }
    }

    #[test]
    fn product_is_one_on_grid() {
        let mut l = 4.01;
        while l <= 40.0 {
            let t = sigma_pair(l).unwrap();
            assert!((t.sigma_plus * t.sigma_minus - 1.0).abs() < 1e-12);
            assert!(t.sigma_plus > -1.0 && t.sigma_plus < 0.0 && t.sigma_minus < -1.0);
            l += 0.01;
        }
    }

    #[test]
    fn large_lambda_asymptotics() {
        // |σ₊ + 1/(λ-2)| ≤ C/(λ-2)³; fit C on [20, 200] and check it is O(1).
        let c_fit = (20..=200)
            .map(|l| {
                let x = l as f64 - 2.0;
                (sigma_plus(l as f64).unwrap() + 1.0 / x).abs() * x.powi(3)
            })
            .fold(0.0, f64::max);
        assert!(c_fit > 0.9 && c_fit < 1.1, "{c_fit}");
    }
}
