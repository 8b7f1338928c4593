//! Spectra of graph Laplacians built from cliques joined by chains.
//!
//! Graphs are assembled in [`graph`], diagonalized by the dense Jacobi
//! solver in [`oracle`], and compared with the transfer-matrix
//! characteristic equations in [`characteristic`] and [`roots`]. Explicit
//! eigenvectors live in [`modes`], the labeled spectrum in [`classify`], and
//! interval bounds and large-`p` estimates in [`bounds`].

pub mod bounds;
pub mod characteristic;
pub mod classify;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod modes;
pub mod oracle;
pub mod published;
pub mod reproduce;
pub mod roots;
pub mod transfer;

pub use bounds::{
    asymptotic_edge, chain_eigenvalues_closed, weyl_one, weyl_one_relaxed, weyl_two,
    weyl_two_relaxed, AsymptoticEstimate, AsymptoticFamily, WeylBounds,
};
pub use characteristic::{
    f_one_fin, f_one_fin_phase, f_one_inf, q_factor, two_chain_fin, two_chain_inf, EdgeFamily,
    EdgeFamilyKind, PhaseValue,
};
pub use classify::{classify_spectrum, Anomaly, ModeKind, Severity, SpectralClassification};
pub use error::{Error, Result};
pub use graph::{
    build_network, build_single_chain, build_two_chain, laplacian, CliqueNetworkSpec, GraphSpec,
};
pub use matrix::SymMatrix;
pub use modes::{chain_mode, clique_modes, edge_mode, ChainMode, CliqueMode, EdgeMode};
pub use oracle::{eig_sym, residual, Spectrum};
pub use roots::{find_chain_roots, find_edge_roots, RootReport};
pub use transfer::{phase, propagate, sigma_pair, ChainState, TransferPair};
