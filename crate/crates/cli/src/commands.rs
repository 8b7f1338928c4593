//! Single-graph commands and table reproduction.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cliquechain::bounds::{
    asymptotic_edge, weyl_one_relaxed, weyl_two_relaxed, AsymptoticFamily, WeylBounds,
};
use cliquechain::classify::{classify_spectrum, Severity, DEFAULT_MATCH_TOL};
use cliquechain::modes::ROOT_RESIDUAL_TOL;
use cliquechain::modes::{chain_mode, clique_modes, clique_modes_exact, edge_mode, normalize};
use cliquechain::oracle::{eig_sym, Spectrum, DEFAULT_TOL};
use cliquechain::reproduce::{edge_curve, phase_form_curve, reproduce_table};
use cliquechain::roots::{find_chain_roots, find_edge_roots, DEFAULT_GRID_PER_UNIT};
use cliquechain::{laplacian, EdgeFamily, EdgeFamilyKind};
use serde_json::{json, Value};

use crate::report::{cell, csv_string, fmt_float, write_two_column, RunReport};
use crate::{Common, GraphArgs, Output, Target};

/// Default tolerance for Weyl interval membership.
const WEYL_TOL: f64 = 1e-9;
/// Bisection tolerance for edge roots.
const ROOT_TOL: f64 = 1e-13;
/// Eigenvalue gap below which an oracle eigenvector is not unique enough to
/// compare against.
const ISOLATION_GAP: f64 = 1e-6;

fn with_field(mut v: Value, key: &str, x: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert(key.to_string(), x);
    }
    v
}

fn label(v: impl serde::Serialize) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn spectrum(g: &GraphArgs, common: &Common, argv: &[String]) -> Result<Output> {
    let target = g.target()?;
    let graph = target.build()?;
    let tol = common.tol.unwrap_or(DEFAULT_MATCH_TOL);
    let params = with_field(target.parameters(), "tol", json!(tol));
    let mut report = RunReport::new("spectrum", argv, params);
    let c = classify_spectrum(&graph, tol)?;
    report.anomalies = c.anomalies.clone();
    let rows: Vec<Vec<String>> = c
        .eigenvalues
        .iter()
        .map(|e| {
            vec![
                e.index.to_string(),
                fmt_float(e.value),
                e.kind.as_str().to_string(),
                e.symmetry.map(label).unwrap_or_default(),
                cell(e.analytic),
            ]
        })
        .collect();
    report.payload = serde_json::to_value(&c)?;
    let csv = csv_string(&["index", "value", "kind", "symmetry", "analytic"], &rows)?;
    Ok(Output {
        report,
        csv: Some(csv),
    })
}

pub fn reproduce(
    table: u8,
    plot_data: Option<&Path>,
    _common: &Common,
    argv: &[String],
) -> Result<Output> {
    let mut report = RunReport::new("reproduce", argv, json!({ "table": table }));
    let t = reproduce_table(table)?;
    for r in t.rows.iter().filter(|r| !r.pass) {
        report.push(
            Severity::Mismatch,
            "published_tolerance",
            format!(
                "{}: computed {} vs published {} (|diff| {} >= {})",
                r.quantity,
                fmt_float(r.computed),
                fmt_float(r.published),
                fmt_float(r.abs_diff),
                cell(r.tol)
            ),
        );
    }
    let mut files = Vec::new();
    if let Some(dir) = plot_data {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("edge_window_p6_q4.csv");
        write_two_column(&path, ["lambda", "F"], &edge_curve(6, 4, 400)?)?;
        files.push(path);
        if table == 3 {
            let path = dir.join("phase_form_p6_q4.csv");
            write_two_column(
                &path,
                ["lambda", "F"],
                &phase_form_curve(6, 4, 7 * 200, 20.0),
            )?;
            files.push(path);
        }
    }
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.quantity.clone(),
                fmt_float(r.computed),
                fmt_float(r.published),
                fmt_float(r.abs_diff),
                cell(r.tol),
                r.pass.to_string(),
            ]
        })
        .collect();
    report.payload = json!({
        "table": t,
        "max_gated_diff": t.max_gated_diff(),
        "plot_files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    let csv = csv_string(
        &[
            "quantity",
            "computed",
            "published",
            "abs_diff",
            "tol",
            "pass",
        ],
        &rows,
    )?;
    Ok(Output {
        report,
        csv: Some(csv),
    })
}

fn chain_target(g: &GraphArgs, command: &str) -> Result<Target> {
    let t = g.target()?;
    if matches!(t, Target::Network(_)) {
        bail!("{command} supports one- and two-chain graphs (--p --q or --p --q1 --q2)");
    }
    Ok(t)
}

fn weyl_for(t: &Target) -> Result<(WeylBounds, Vec<AsymptoticFamily>)> {
    Ok(match *t {
        Target::Single { p, q } => (weyl_one_relaxed(p, q)?, vec![AsymptoticFamily::OneChain]),
        Target::Two { q1, p, q2 } => (
            weyl_two_relaxed(q1, p, q2)?,
            vec![
                AsymptoticFamily::TwoChainSym,
                AsymptoticFamily::TwoChainAnti,
            ],
        ),
        Target::Network(_) => unreachable!("rejected by chain_target"),
    })
}

fn clique_size(t: &Target) -> usize {
    match *t {
        Target::Single { p, .. } | Target::Two { p, .. } => p,
        Target::Network(_) => 0,
    }
}

pub fn bounds(g: &GraphArgs, common: &Common, argv: &[String]) -> Result<Output> {
    let target = chain_target(g, "bounds")?;
    let graph = target.build()?;
    let tol = common.tol.unwrap_or(WEYL_TOL);
    let params = with_field(target.parameters(), "tol", json!(tol));
    let mut report = RunReport::new("bounds", argv, params);
    let (w, families) = weyl_for(&target)?;
    let evals = eig_sym(&laplacian(&graph), DEFAULT_TOL)?.eigenvalues;
    if !w.within_hypotheses {
        report.push(
            Severity::Warning,
            "hypotheses",
            "parameters are outside the Weyl-interval hypotheses; intervals computed anyway",
        );
    }
    let severity = if w.within_hypotheses {
        Severity::Mismatch
    } else {
        Severity::Warning
    };
    for v in w.violations(&evals, tol) {
        report.push(
            severity,
            "weyl_violation",
            format!(
                "lambda_{} = {} outside {}",
                v.index,
                fmt_float(v.value),
                v.bound
            ),
        );
    }
    let mut rows = Vec::new();
    let entries: Vec<Value> = w
        .entries
        .iter()
        .map(|e| {
            let inside: Vec<f64> = evals[e.first - 1..e.last.min(evals.len())].to_vec();
            let margin = inside
                .iter()
                .map(|&x| e.margin(x))
                .fold(f64::INFINITY, f64::min);
            let ok = inside.iter().all(|&x| e.contains(x, tol));
            rows.push(vec![
                e.first.to_string(),
                e.last.to_string(),
                fmt_float(e.lower),
                fmt_float(e.upper),
                e.lower_closed.to_string(),
                e.upper_closed.to_string(),
                fmt_float(margin),
                ok.to_string(),
            ]);
            json!({
                "interval": e,
                "describe": e.describe(),
                "oracle": inside,
                "min_margin": margin,
                "ok": ok,
            })
        })
        .collect();
    let p = clique_size(&target);
    let asymptotic: Vec<_> = families
        .into_iter()
        .map(|f| asymptotic_edge(f, p))
        .collect();
    report.payload = json!({
        "n": w.n,
        "within_hypotheses": w.within_hypotheses,
        "entries": entries,
        "min_margin": w.min_margin(&evals),
        "asymptotic": asymptotic,
    });
    let csv = csv_string(
        &[
            "first",
            "last",
            "lower",
            "upper",
            "lower_closed",
            "upper_closed",
            "min_margin",
            "ok",
        ],
        &rows,
    )?;
    Ok(Output {
        report,
        csv: Some(csv),
    })
}

/// `|<v, u>|` for the oracle eigenvector `u` nearest `lambda`, when that
/// eigenvalue is isolated.
fn oracle_overlap(sp: &Spectrum, lambda: f64, profile: &[f64]) -> Option<f64> {
    let (i, _) = sp
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - lambda).abs().total_cmp(&(b.1 - lambda).abs()))?;
    let isolated = sp
        .eigenvalues
        .iter()
        .enumerate()
        .all(|(j, &x)| j == i || (x - sp.eigenvalues[i]).abs() > ISOLATION_GAP);
    if !isolated || profile.len() != sp.dim() {
        return None;
    }
    let v = normalize(profile);
    Some(
        v.iter()
            .zip(sp.eigenvector(i))
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs(),
    )
}

fn edge_families(t: &Target) -> Result<Vec<EdgeFamily>> {
    Ok(match *t {
        Target::Single { p, q } => vec![EdgeFamily::one_finite(p, q)?],
        Target::Two { q1, p, q2 } if q1 == q2 => vec![
            EdgeFamily::new(EdgeFamilyKind::TwoChainFiniteSym { q: q1 }, p)?,
            EdgeFamily::new(EdgeFamilyKind::TwoChainFiniteAnti { q: q1 }, p)?,
        ],
        Target::Two { q1, p, q2 } => vec![EdgeFamily::two_finite(q1, p, q2)?],
        Target::Network(_) => unreachable!("rejected by chain_target"),
    })
}

pub fn modes(g: &GraphArgs, common: &Common, argv: &[String]) -> Result<Output> {
    let target = chain_target(g, "modes")?;
    let graph = target.build()?;
    let tol = common.tol.unwrap_or(ROOT_RESIDUAL_TOL);
    let params = with_field(target.parameters(), "tol", json!(tol));
    let mut report = RunReport::new("modes", argv, params);
    let sp = eig_sym(&laplacian(&graph), DEFAULT_TOL)?;
    let mut rows = Vec::new();

    let cm = clique_modes(&graph);
    let exact = clique_modes_exact(&graph, &cm);
    if !exact {
        report.push(
            Severity::Mismatch,
            "clique_mode",
            "a clique mode has nonzero residual",
        );
    }
    let p = clique_size(&target) as f64;
    for _ in &cm {
        rows.push(vec![
            "clique".to_string(),
            fmt_float(p),
            "0.0".to_string(),
            String::new(),
        ]);
    }

    let mut edge = Vec::new();
    for fam in edge_families(&target)? {
        let roots = find_edge_roots(&fam, ROOT_TOL)?;
        if !roots.count_matches() {
            let severity = if roots.hypotheses_met {
                Severity::Mismatch
            } else {
                Severity::Warning
            };
            report.push(
                severity,
                "root_count",
                format!(
                    "{fam}: {} roots, expected {}",
                    roots.roots.len(),
                    roots.expected
                ),
            );
        }
        for &l in &roots.roots {
            match edge_mode(&fam, l, None) {
                Ok(m) => {
                    let overlap = oracle_overlap(&sp, l, &m.profile);
                    if m.residual > tol {
                        report.push(
                            Severity::Mismatch,
                            "edge_residual",
                            format!(
                                "{fam} at {}: residual {}",
                                fmt_float(l),
                                fmt_float(m.residual)
                            ),
                        );
                    }
                    rows.push(vec![
                        "edge".to_string(),
                        fmt_float(l),
                        fmt_float(m.residual),
                        cell(overlap),
                    ]);
                    edge.push(
                        json!({ "mode": m, "b_over_a": m.b_over_a(), "oracle_overlap": overlap }),
                    );
                }
                Err(e) => report.push(
                    Severity::Mismatch,
                    "edge_mode",
                    format!("{fam} at {}: {e}", fmt_float(l)),
                ),
            }
        }
    }

    let mut chain = Vec::new();
    if let Target::Single { p, q } = target {
        let roots = find_chain_roots(p, q, DEFAULT_GRID_PER_UNIT)?;
        for a in &roots.anomalies {
            report.push(Severity::Warning, "chain_roots", a.clone());
        }
        for &l in &roots.roots {
            match chain_mode(p, q, l) {
                Ok(m) => {
                    let overlap = oracle_overlap(&sp, l, &m.profile);
                    if m.residual > tol {
                        report.push(
                            Severity::Mismatch,
                            "chain_residual",
                            format!(
                                "lambda {}: residual {}",
                                fmt_float(l),
                                fmt_float(m.residual)
                            ),
                        );
                    }
                    rows.push(vec![
                        "chain".to_string(),
                        fmt_float(l),
                        fmt_float(m.residual),
                        cell(overlap),
                    ]);
                    chain.push(json!({ "mode": m, "oracle_overlap": overlap }));
                }
                Err(e) => report.push(
                    Severity::Mismatch,
                    "chain_mode",
                    format!("lambda {}: {e}", fmt_float(l)),
                ),
            }
        }
    }

    report.payload = json!({
        "graph": graph.describe(),
        "labels": graph.labels,
        "clique_modes": { "count": cm.len(), "exact": exact, "modes": cm },
        "edge_modes": edge,
        "chain_modes": chain,
    });
    let csv = csv_string(&["kind", "lambda", "residual", "oracle_overlap"], &rows)?;
    Ok(Output {
        report,
        csv: Some(csv),
    })
}
