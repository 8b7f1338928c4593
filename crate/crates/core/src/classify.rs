//! Labels every oracle eigenvalue as clique, edge, chain or zero and checks
//! the labels against the analytic predictions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bounds::{weyl_one_relaxed, weyl_two_relaxed, WeylBounds, WeylViolation};
use crate::characteristic::{EdgeFamily, EdgeFamilyKind};
use crate::error::Result;
use crate::graph::{laplacian, Family, GraphSpec, Role};
use crate::modes::clique_modes;
use crate::oracle::{eig_sym, DEFAULT_TOL};
use crate::roots::{find_chain_roots, find_edge_roots, DEFAULT_GRID_PER_UNIT};

/// Default tolerance for matching analytic values to oracle eigenvalues.
pub const DEFAULT_MATCH_TOL: f64 = 1e-8;

/// Edge eigenvalues closer than this are reported as near-degenerate.
pub const NEAR_DEGENERATE_GAP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Clique,
    Edge,
    Chain,
    Zero,
}

impl ModeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Clique => "clique",
            ModeKind::Edge => "edge",
            ModeKind::Chain => "chain",
            ModeKind::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledEigenvalue {
    /// 1-based position in the descending spectrum.
    pub index: usize,
    pub value: f64,
    pub kind: ModeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<Symmetry>,
    /// Analytic value this eigenvalue was matched to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueEigenvalue {
    pub value: f64,
    pub multiplicity: usize,
    /// Number of independent clique modes the structure provides.
    pub expected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    /// `p = 3`: the clique eigenvalue lies inside `[0, 4]`.
    Interior,
    /// `p = 4`: the clique eigenvalue is the band edge.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedFlag {
    pub clique: usize,
    pub p: usize,
    pub embedding: Embedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearDegeneracy {
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// Expected or informational (hypotheses not met, published counting
    /// formula off, near-degeneracy).
    Warning,
    /// Analytic prediction and oracle disagree.
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anomaly {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

impl Anomaly {
    fn new(severity: Severity, code: &str, message: String) -> Self {
        Anomaly {
            severity,
            code: code.to_string(),
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralClassification {
    pub graph: String,
    pub n: usize,
    pub eigenvalues: Vec<LabeledEigenvalue>,
    pub clique_eigenvalues: Vec<CliqueEigenvalue>,
    pub edge_eigenvalues: Vec<LabeledEigenvalue>,
    /// Descending.
    pub chain_eigenvalues: Vec<f64>,
    pub zero_mode: bool,
    pub embedded: Vec<EmbeddedFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylBounds>,
    pub weyl_violations: Vec<WeylViolation>,
    pub near_degenerate: Vec<NearDegeneracy>,
    pub anomalies: Vec<Anomaly>,
}

impl SpectralClassification {
    pub fn has_mismatch(&self) -> bool {
        self.anomalies
            .iter()
            .any(|a| a.severity == Severity::Mismatch)
    }

    pub fn count(&self, kind: ModeKind) -> usize {
        self.eigenvalues.iter().filter(|e| e.kind == kind).count()
    }

    pub fn clique_multiplicity(&self, value: f64) -> usize {
        self.clique_eigenvalues
            .iter()
            .filter(|c| c.value == value)
            .map(|c| c.multiplicity)
            .sum()
    }
}

/// Distinct junction vertices per clique.
fn junction_count(g: &GraphSpec, c: usize) -> usize {
    g.cliques[c]
        .vertices
        .iter()
        .filter(|&&v| matches!(g.roles[v], Role::Junction { .. }))
        .count()
}

/// Classifies the spectrum of `g`, matching analytic values to oracle
/// eigenvalues within `tol`.
pub fn classify_spectrum(g: &GraphSpec, tol: f64) -> Result<SpectralClassification> {
    let spectrum = eig_sym(&laplacian(g), DEFAULT_TOL)?;
    let evals = &spectrum.eigenvalues;
    let n = evals.len();
    let mut anomalies = Vec::new();

    // Clique values and how many modes each provides.
    let modes = clique_modes(g);
    let mut expected_at: Vec<(f64, usize)> = Vec::new();
    for (c, block) in g.cliques.iter().enumerate() {
        let p = block.vertices.len() as f64;
        let k = modes.iter().filter(|m| m.clique == c).count();
        match expected_at.iter_mut().find(|(v, _)| *v == p) {
            Some(e) => e.1 += k,
            None => expected_at.push((p, k)),
        }
    }

    let mut kinds = vec![None; n];
    if let Some(last) = kinds.last_mut() {
        if evals[n - 1].abs() <= tol.max(1e-9) {
            *last = Some(ModeKind::Zero);
        }
    }
    let mut clique_eigenvalues = Vec::new();
    for &(p, expected) in &expected_at {
        let idx: Vec<usize> = (0..n)
            .filter(|&i| kinds[i].is_none() && (evals[i] - p).abs() <= tol)
            .collect();
        for &i in idx.iter().take(expected) {
            kinds[i] = Some(ModeKind::Clique);
        }
        if expected > 0 || !idx.is_empty() {
            clique_eigenvalues.push(CliqueEigenvalue {
                value: p,
                multiplicity: idx.len(),
                expected,
            });
        }
        if idx.len() != expected {
            anomalies.push(Anomaly::new(
                Severity::Mismatch,
                "clique_multiplicity",
                format!(
                    "eigenvalue {p}: oracle multiplicity {}, clique modes {expected}",
                    idx.len()
                ),
            ));
        }
    }
    let mut labeled: Vec<LabeledEigenvalue> = evals
        .iter()
        .enumerate()
        .map(|(i, &x)| LabeledEigenvalue {
            index: i + 1,
            value: x,
            kind: kinds[i].unwrap_or(if x > 4.0 {
                ModeKind::Edge
            } else {
                ModeKind::Chain
            }),
            symmetry: None,
            analytic: None,
        })
        .collect();

    // Embedded clique eigenvalues.
    let mut embedded = Vec::new();
    for (c, block) in g.cliques.iter().enumerate() {
        let p = block.vertices.len();
        if p <= 4 && modes.iter().any(|m| m.clique == c) {
            let embedding = if p == 4 {
                Embedding::Boundary
            } else {
                Embedding::Interior
            };
            anomalies.push(Anomaly::new(
                Severity::Warning,
                "embedded_eigenvalue",
                format!(
                    "clique {} (p = {p}): clique eigenvalue {p} is {} the band [0, 4]",
                    block.id,
                    if p == 4 { "on the edge of" } else { "inside" }
                ),
            ));
            embedded.push(EmbeddedFlag {
                clique: c,
                p,
                embedding,
            });
        }
    }

    // Analytic predictions per family.
    let mut weyl = None;
    match &g.family {
        Family::SingleChain { p, q } => {
            let fam = EdgeFamily::one_finite(*p, *q)?;
            let edge = find_edge_roots(&fam, 1e-13)?;
            match_values(
                &mut labeled,
                ModeKind::Edge,
                &edge.roots,
                tol,
                &mut anomalies,
                &fam.name(),
            );
            let chain = find_chain_roots(*p, *q, DEFAULT_GRID_PER_UNIT)?;
            match_values(
                &mut labeled,
                ModeKind::Chain,
                &chain.roots,
                tol,
                &mut anomalies,
                &format!("{} chain band", fam.name()),
            );
            weyl = Some(weyl_one_relaxed(*p, *q)?);
        }
        Family::TwoChain { q1, p, q2 } => {
            let fam = EdgeFamily::two_finite(*q1, *p, *q2)?;
            let edge = find_edge_roots(&fam, 1e-13)?;
            match_values(
                &mut labeled,
                ModeKind::Edge,
                &edge.roots,
                tol,
                &mut anomalies,
                &fam.name(),
            );
            if q1 == q2 {
                for (kind, sym) in [
                    (
                        EdgeFamilyKind::TwoChainFiniteSym { q: *q1 },
                        Symmetry::Symmetric,
                    ),
                    (
                        EdgeFamilyKind::TwoChainFiniteAnti { q: *q1 },
                        Symmetry::Antisymmetric,
                    ),
                ] {
                    let r = find_edge_roots(&EdgeFamily::new(kind, *p)?, 1e-13)?;
                    for root in r.roots {
                        if let Some(e) = labeled
                            .iter_mut()
                            .find(|e| e.kind == ModeKind::Edge && (e.value - root).abs() <= tol)
                        {
                            e.symmetry = Some(sym);
                        }
                    }
                }
            }
            weyl = Some(weyl_two_relaxed(*q1, *p, *q2)?);
        }
        Family::Network { spec } => {
            for (c, decl) in spec.cliques.iter().enumerate() {
                let p = decl.p;
                let d = spec.degree(&decl.id);
                let j = junction_count(g, c);
                let formula = p as i64 - d as i64 - 2;
                let oracle = spectrum.count_near(p as f64, tol) as i64;
                if spec.distinct_attachments(&decl.id) && d > 0 && oracle != formula {
                    anomalies.push(Anomaly::new(
                        Severity::Warning,
                        "clique_count_formula",
                        format!(
                            "clique {} (p = {p}, d = {d}): p - d - 2 = {formula} but the oracle \
                             multiplicity at {p} is {oracle}; {j} junction vertices leave \
                             p - {j} - 1 = {} clique modes",
                            decl.id,
                            p - j - 1
                        ),
                    ));
                }
                let window = evals
                    .iter()
                    .filter(|&&x| x > p as f64 + tol && x < p as f64 + 2.0)
                    .count();
                if window != d {
                    anomalies.push(Anomaly::new(
                        Severity::Mismatch,
                        "edge_count_conjecture",
                        format!(
                            "clique {} (p = {p}): {window} eigenvalues in ({p}, {}), degree {d}",
                            decl.id,
                            p + 2
                        ),
                    ));
                }
            }
        }
    }

    let mut weyl_violations = Vec::new();
    if let Some(b) = &weyl {
        weyl_violations = b.violations(evals, 1e-9);
        if !weyl_violations.is_empty() {
            let severity = if b.within_hypotheses {
                Severity::Mismatch
            } else {
                Severity::Warning
            };
            anomalies.push(Anomaly::new(
                severity,
                "weyl_bounds",
                format!(
                    "{} eigenvalue(s) outside their interval",
                    weyl_violations.len()
                ),
            ));
        }
    }

    // Edge eigenvalues below the clique value.
    let pmax = g
        .cliques
        .iter()
        .map(|c| c.vertices.len())
        .max()
        .unwrap_or(0) as f64;
    if !matches!(g.family, Family::Network { .. }) {
        for e in labeled
            .iter()
            .filter(|e| e.kind == ModeKind::Edge && e.value <= pmax)
        {
            anomalies.push(Anomaly::new(
                Severity::Warning,
                "edge_below_window",
                format!("edge eigenvalue {} lies in (4, {pmax}]", e.value),
            ));
        }
    }

    let edge_eigenvalues: Vec<LabeledEigenvalue> = labeled
        .iter()
        .filter(|e| e.kind == ModeKind::Edge)
        .cloned()
        .collect();
    let mut near_degenerate = Vec::new();
    for w in edge_eigenvalues.windows(2) {
        let gap = w[0].value - w[1].value;
        if gap < NEAR_DEGENERATE_GAP {
            near_degenerate.push(NearDegeneracy {
                lower: w[1].value,
                upper: w[0].value,
                gap,
            });
            anomalies.push(Anomaly::new(
                Severity::Warning,
                "near_degenerate",
                format!(
                    "edge eigenvalues {:.10} and {:.10} differ by {gap:.3e}",
                    w[1].value, w[0].value
                ),
            ));
        }
    }

    let chain_eigenvalues = labeled
        .iter()
        .filter(|e| e.kind == ModeKind::Chain)
        .map(|e| e.value)
        .collect();
    let zero_mode = labeled.iter().any(|e| e.kind == ModeKind::Zero);
    if !zero_mode {
        anomalies.push(Anomaly::new(
            Severity::Mismatch,
            "zero_mode",
            "no eigenvalue at 0 for a connected graph".to_string(),
        ));
    }
    anomalies.sort_by(|a, b| b.severity.cmp(&a.severity).then(a.code.cmp(&b.code)));

    Ok(SpectralClassification {
        graph: g.describe(),
        n,
        eigenvalues: labeled,
        clique_eigenvalues,
        edge_eigenvalues,
        chain_eigenvalues,
        zero_mode,
        embedded,
        weyl,
        weyl_violations,
        near_degenerate,
        anomalies,
    })
}

/// Pairs analytic values with oracle eigenvalues of the given kind; count or
/// value disagreements become mismatches.
fn match_values(
    labeled: &mut [LabeledEigenvalue],
    kind: ModeKind,
    analytic: &[f64],
    tol: f64,
    anomalies: &mut Vec<Anomaly>,
    what: &str,
) {
    let idx: Vec<usize> = (0..labeled.len())
        .filter(|&i| labeled[i].kind == kind)
        .collect();
    if idx.len() != analytic.len() {
        anomalies.push(Anomaly::new(
            Severity::Mismatch,
            "count",
            format!(
                "{what}: {} analytic {} value(s), {} oracle",
                analytic.len(),
                kind.as_str(),
                idx.len()
            ),
        ));
    }
    let mut used = BTreeSet::new();
    for &a in analytic {
        let best = idx
            .iter()
            .copied()
            .filter(|i| !used.contains(i))
            .min_by(|&i, &j| {
                (labeled[i].value - a)
                    .abs()
                    .total_cmp(&(labeled[j].value - a).abs())
            });
        match best {
            Some(i) if (labeled[i].value - a).abs() <= tol => {
                used.insert(i);
                labeled[i].analytic = Some(a);
            }
            Some(i) => anomalies.push(Anomaly::new(
                Severity::Mismatch,
                "value",
                format!(
                    "{what}: analytic {a} vs nearest oracle {} (|Δ| = {:.3e})",
                    labeled[i].value,
                    (labeled[i].value - a).abs()
                ),
            )),
            None => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_network, build_single_chain, build_two_chain, CliqueNetworkSpec};

    fn k10() -> GraphSpec {
        let spec = CliqueNetworkSpec::from_json(
            r#"{"cliques":[{"id":"K","p":10}],"links":[
                {"from":{"clique":"K","vertex":9},"to":"open","length":5},
                {"from":{"clique":"K","vertex":4},"to":"open","length":4},
                {"from":{"clique":"K","vertex":0},"to":"open","length":3}]}"#,
        )
        .unwrap();
        build_network(&spec).unwrap()
    }

    #[test]
    fn table_one_graph() {
        let c = classify_spectrum(&build_single_chain(6, 4).unwrap(), DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(c.clique_multiplicity(6.0), 4);
        assert_eq!(c.edge_eigenvalues.len(), 1);
        assert!((c.edge_eigenvalues[0].value - 7.0355).abs() < 1e-3);
        let want = [3.1832, 1.5163, 0.26503];
        assert_eq!(c.chain_eigenvalues.len(), 3);
        for (a, b) in c.chain_eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-3);
        }
        assert!(c.zero_mode);
        assert!(c.anomalies.is_empty(), "{:?}", c.anomalies);
        assert!(c
            .eigenvalues
            .iter()
            .filter(|e| e.kind != ModeKind::Clique && e.kind != ModeKind::Zero)
            .all(|e| e.analytic.is_some()));
    }

    #[test]
    fn p3_embedded() {
        let c = classify_spectrum(&build_single_chain(3, 6).unwrap(), DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(c.embedded.len(), 1);
        assert_eq!(c.embedded[0].embedding, Embedding::Interior);
        assert_eq!(c.clique_multiplicity(3.0), 1);
        assert!(!c.has_mismatch(), "{:?}", c.anomalies);
        assert!(c.anomalies.iter().any(|a| a.code == "embedded_eigenvalue"));
    }

    #[test]
    fn p4_boundary() {
        let c = classify_spectrum(&build_single_chain(4, 5).unwrap(), DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(c.embedded[0].embedding, Embedding::Boundary);
    }

    #[test]
    fn two_chain_symmetric_labels() {
        let c = classify_spectrum(&build_two_chain(4, 6, 4).unwrap(), DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(c.clique_multiplicity(6.0), 3);
        assert_eq!(c.edge_eigenvalues.len(), 2);
        assert_eq!(
            c.edge_eigenvalues[0].symmetry,
            Some(Symmetry::Antisymmetric)
        );
        assert_eq!(c.edge_eigenvalues[1].symmetry, Some(Symmetry::Symmetric));
        assert!(c
            .edge_eigenvalues
            .iter()
            .all(|e| e.value > 6.0 && e.value <= 8.0));
        assert!(!c.has_mismatch(), "{:?}", c.anomalies);
    }

    #[test]
    fn k10_network() {
        let c = classify_spectrum(&k10(), DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(c.n, 22);
        assert_eq!(c.clique_multiplicity(10.0), 6);
        let window: Vec<f64> = c
            .eigenvalues
            .iter()
            .map(|e| e.value)
            .filter(|&x| x > 10.0 + 1e-8 && x < 12.0)
            .collect();
        assert_eq!(window.len(), 3);
        assert_eq!(c.near_degenerate.len(), 1);
        assert!(c.near_degenerate[0].gap < 0.05);
        assert!(c.anomalies.iter().any(|a| a.code == "clique_count_formula"));
        assert!(!c.has_mismatch(), "{:?}", c.anomalies);
    }

    #[test]
    fn classification_is_complete() {
        for g in [
            build_single_chain(6, 4).unwrap(),
            build_single_chain(9, 7).unwrap(),
            build_two_chain(3, 7, 5).unwrap(),
            k10(),
        ] {
            let c = classify_spectrum(&g, DEFAULT_MATCH_TOL).unwrap();
            assert_eq!(c.eigenvalues.len(), g.n);
            let total = c.count(ModeKind::Clique)
                + c.count(ModeKind::Edge)
                + c.count(ModeKind::Chain)
                + c.count(ModeKind::Zero);
            assert_eq!(total, g.n);
        }
    }

    #[test]
    fn sweep_has_no_mismatch() {
        for p in 6..=9 {
            for q in 3..=7 {
                let c = classify_spectrum(&build_single_chain(p, q).unwrap(), DEFAULT_MATCH_TOL)
                    .unwrap();
                assert!(!c.has_mismatch(), "({p},{q}) {:?}", c.anomalies);
            }
        }
    }
}
