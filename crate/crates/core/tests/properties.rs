use cliquechain::characteristic::{f_one_fin, f_one_inf, two_chain_fin};
use cliquechain::classify::{classify_spectrum, ModeKind, DEFAULT_MATCH_TOL};
use cliquechain::graph::{
    build_network, build_single_chain, build_two_chain, laplacian, Attachment, CliqueDecl,
    CliqueNetworkSpec, LinkDecl, LinkEnd, OpenEnd,
};
use cliquechain::modes::{clique_modes, clique_modes_exact, edge_mode, reflection};
use cliquechain::oracle::eig_sym;
use cliquechain::roots::find_edge_roots;
use cliquechain::transfer::{propagate, sigma_pair, wronskian, ChainState};
use cliquechain::{EdgeFamily, EdgeFamilyKind};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn single_chain_counts_and_row_sums(p in 3usize..=12, q in 2usize..=10) {
        let g = build_single_chain(p, q).unwrap();
        prop_assert_eq!(g.n, p + q - 1);
        prop_assert_eq!(g.edge_count(), p * (p - 1) / 2 + q - 1);
        let ones = vec![1i64; g.n];
        prop_assert!(g.laplacian_apply_int(&ones).iter().all(|&x| x == 0));
        let l = laplacian(&g);
        for (i, d) in g.degrees().iter().enumerate() {
            prop_assert_eq!(l.get(i, i), *d as f64);
        }
    }

    #[test]
    fn two_chain_counts(q1 in 2usize..=10, p in 3usize..=12, q2 in 2usize..=10) {
        let g = build_two_chain(q1, p, q2).unwrap();
        prop_assert_eq!(g.n, p + q1 + q2 - 2);
        prop_assert_eq!(g.edge_count(), p * (p - 1) / 2 + q1 - 1 + q2 - 1);
        prop_assert!(laplacian(&g).row_sums().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_chain_equals_network(p in 3usize..=12, q in 2usize..=10) {
        let spec = CliqueNetworkSpec {
            cliques: vec![CliqueDecl { id: "A".into(), p }],
            links: vec![LinkDecl {
                from: Attachment { clique: "A".into(), vertex: p - 1 },
                to: LinkEnd::Open(OpenEnd::Open),
                length: q - 1,
            }],
        };
        let a = laplacian(&build_single_chain(p, q).unwrap());
        let b = laplacian(&build_network(&spec).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clique_modes_are_exact(p in 3usize..=12, q1 in 2usize..=8, q2 in 2usize..=8) {
        for g in [build_single_chain(p, q1).unwrap(), build_two_chain(q1, p, q2).unwrap()] {
            let m = clique_modes(&g);
            prop_assert!(clique_modes_exact(&g, &m));
        }
        prop_assert_eq!(clique_modes(&build_single_chain(p, q1).unwrap()).len(), p - 2);
        prop_assert_eq!(clique_modes(&build_two_chain(q1, p, q2).unwrap()).len(), p - 3);
    }

    #[test]
    fn sigma_product_is_one(l in 4.0001f64..200.0) {
        let t = sigma_pair(l).unwrap();
        prop_assert!((t.sigma_plus * t.sigma_minus - 1.0).abs() < 1e-12);
        prop_assert!(t.sigma_plus > -1.0 && t.sigma_plus < 0.0);
    }

    #[test]
    fn wronskian_is_conserved(l in 0.01f64..8.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let v = ChainState::new(1.0, a);
        let w = ChainState::new(b, 1.0);
        let w0 = wronskian(v, w);
        let (v2, w2) = (propagate(l, v, 100), propagate(l, w, 100));
        let scale = (v2.v_j.abs() + v2.v_jplus1.abs()) * (w2.v_j.abs() + w2.v_jplus1.abs());
        prop_assert!((wronskian(v2, w2) - w0).abs() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn factorization_identity(q in 3usize..=10, p in 5usize..=12, t in 0.0f64..1.0) {
        let l = 4.0 + 1e-6 + t * (p as f64 - 2.0);
        let r = two_chain_fin(l, q, p, q).unwrap();
        let prod = -r.f_anti.unwrap() * r.f_sym.unwrap();
        prop_assert!((r.d - prod).abs() <= 1e-10 * (1.0 + r.d.abs()));
    }

    #[test]
    fn f_one_inf_decreasing_on_window(p in 5usize..=30, t in 0.001f64..0.999) {
        let l = p as f64 + 2.0 * t;
        let h = 1e-4;
        prop_assert!(f_one_inf(l + h, p).unwrap() < f_one_inf(l, p).unwrap());
    }

    #[test]
    fn finite_tends_to_infinite(p in 5usize..=12, q in 3usize..=60, t in 0.0f64..1.0) {
        let l = p as f64 + 2.0 * t + 1e-9;
        let s = sigma_pair(l).unwrap().sigma_plus;
        let d = (f_one_fin(l, p, q).unwrap() - f_one_inf(l, p).unwrap()).abs();
        prop_assert!(d <= 2.0 * (l - 1.0) * s.abs().powi(2 * q as i32 - 3));
    }

    #[test]
    fn edge_root_is_oracle_top(p in 6usize..=12, q in 3usize..=8) {
        let r = find_edge_roots(&EdgeFamily::one_finite(p, q).unwrap(), 1e-13).unwrap();
        prop_assert_eq!(r.roots.len(), 1);
        let top = eig_sym(&laplacian(&build_single_chain(p, q).unwrap()), 1e-12)
            .unwrap()
            .eigenvalues[0];
        prop_assert!((r.roots[0] - top).abs() < 1e-9);
        let m = edge_mode(&EdgeFamily::one_finite(p, q).unwrap(), r.roots[0], None).unwrap();
        prop_assert!(m.residual < 1e-9);
    }

    #[test]
    fn equal_chain_modes_reflect(q in 3usize..=7, p in 6usize..=10) {
        let g = build_two_chain(q, p, q).unwrap();
        let perm = reflection(&g, p).unwrap();
        for (kind, sign) in [
            (EdgeFamilyKind::TwoChainFiniteSym { q }, 1.0),
            (EdgeFamilyKind::TwoChainFiniteAnti { q }, -1.0),
        ] {
            let f = EdgeFamily::new(kind, p).unwrap();
            let l = find_edge_roots(&f, 1e-13).unwrap().roots[0];
            let m = edge_mode(&f, l, None).unwrap();
            for i in 0..g.n {
                prop_assert_eq!(m.profile[perm[i]], sign * m.profile[i]);
            }
        }
    }

    #[test]
    fn oracle_spectrum_invariants(p in 3usize..=9, q1 in 2usize..=6, q2 in 2usize..=6) {
        let m = laplacian(&build_two_chain(q1, p, q2).unwrap());
        let s = eig_sym(&m, 1e-12).unwrap();
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.eigenvalues.iter().all(|&x| x >= -1e-12));
        prop_assert!(s.orthonormality_error() < 1e-10);
        prop_assert!(s.reconstruction_residual(&m) <= 10.0 * 1e-12 * m.max_abs());
        prop_assert_eq!(s.count_near(0.0, 1e-9), 1);
    }

    #[test]
    fn classification_is_complete(p in 3usize..=10, q1 in 2usize..=6, q2 in 2usize..=6) {
        for g in [build_single_chain(p, q1).unwrap(), build_two_chain(q1, p, q2).unwrap()] {
            let c = classify_spectrum(&g, DEFAULT_MATCH_TOL).unwrap();
            let total: usize = [ModeKind::Clique, ModeKind::Edge, ModeKind::Chain, ModeKind::Zero]
                .iter()
                .map(|&k| c.count(k))
                .sum();
            prop_assert_eq!(total, g.n);
        }
    }
}
