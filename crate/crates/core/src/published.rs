//! Published reference values for `K_6 ⊕ C_4` (nine vertices, chain of three).

/// Table 1: full spectrum, descending.
pub const TABLE1_EIGENVALUES: [f64; 9] = [7.0355, 6.0, 6.0, 6.0, 6.0, 3.1832, 1.5163, 0.26503, 0.0];

/// Table 1: multiplicity of the clique eigenvalue 6.
pub const TABLE1_CLIQUE_MULTIPLICITY: usize = 4;

/// Table 1: top eigenvector `v¹`, clique vertices first, junction, then chain.
pub const TABLE1_V1: [f64; 9] = [
    0.1524, 0.1524, 0.1524, 0.1524, 0.1524, -0.9198, 0.19043, -0.039105, 0.0064791,
];

/// Table 2, numerical row: `(λ, σ₊, C_0)`.
pub const TABLE2_NUMERICAL: [f64; 3] = [7.03, -0.205, -0.166];

/// Table 2, theory row: `(λ, σ₊, C_0)`.
pub const TABLE2_THEORY: [f64; 3] = [7.02, -0.2, -0.167];

/// Table 3: zeros of the phase-form characteristic function.
pub const TABLE3_ZEROS: [f64; 3] = [0.265033, 1.51622, 3.1832];

/// Table 3: matching oracle eigenvalues.
pub const TABLE3_EIGENVALUES: [f64; 3] = [0.26503, 1.5163, 3.1832];

/// Table 3: `C_0 = 1/(1-λ_n)` at the zeros.
pub const TABLE3_RATIOS: [f64; 3] = [1.360, -1.9365, -0.4580];

/// Table 3: plateau-to-junction ratio read off the eigenvectors.
pub const TABLE3_VECTOR_RATIOS: [f64; 3] = [1.361, -1.9368, -0.4580];

/// Two-chain asymptotic edge eigenvalues quoted for `p = 6`.
pub const ASYMPTOTIC_ANTI_P6: f64 = 7.16;
pub const ASYMPTOTIC_SYM_P6: f64 = 6.71;

/// Antisymmetric edge eigenvalue quoted for the `K_10` three-chain network.
pub const K10_ANTISYMMETRIC: f64 = 11.11;

pub const TABLE1_TOL: f64 = 1e-3;
pub const TABLE2_TOL: f64 = 1e-2;
pub const TABLE3_ZERO_TOL: f64 = 1e-4;
pub const TABLE3_RATIO_TOL: f64 = 1e-3;
