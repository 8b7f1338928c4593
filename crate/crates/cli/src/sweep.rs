//! Parameter sweeps over one family, run in parallel and reported in
//! parameter order.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use cliquechain::bounds::{
    asymptotic_edge, fit_power_decay, weyl_one_relaxed, weyl_two_relaxed, AsymptoticFamily,
    WeylBounds,
};
use cliquechain::classify::Severity;
use cliquechain::oracle::{eig_sym, DEFAULT_TOL};
use cliquechain::roots::{find_edge_roots, roots_below_window};
use cliquechain::{build_single_chain, build_two_chain, laplacian, EdgeFamily, EdgeFamilyKind};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::report::{cell, cells, csv_string, RunReport};
use crate::{Common, Output};

/// Chain length standing in for an infinite chain in the oracle. The
/// difference from the infinite root is of order `σ₊^{2·40-2}`.
pub const PROXY_Q: usize = 40;
/// Default analytic-vs-oracle tolerance.
const SWEEP_TOL: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-13;
/// Grid step for the sign scan below the edge window.
const BELOW_WINDOW_STEP: f64 = 1e-3;
const WEYL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepFamily {
    /// `K_p ⊕ C_q` over `--p` and `--q`.
    OneFinite,
    /// `K_p ⊕ C_∞` over `--p`.
    OneInfinite,
    /// `C_{q1} ⊕ K_p ⊕ C_{q2}` over `--q1`, `--p`, `--q2`.
    TwoFinite,
    /// `C_q ⊕ K_p ⊕ C_q`, symmetric and antisymmetric roots, over `--p`, `--q`.
    TwoFiniteEqual,
    /// `C_∞ ⊕ K_p ⊕ C_∞`, symmetric and antisymmetric roots, over `--p`.
    TwoInfinite,
}

/// Inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("not a non-negative integer: {t:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange { lo, hi })
    }
}

impl IntRange {
    fn values(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    family: SweepFamily,
    /// Clique sizes, e.g. `6..12`.
    #[arg(long)]
    p: IntRange,
    #[arg(long)]
    q: Option<IntRange>,
    #[arg(long)]
    q1: Option<IntRange>,
    #[arg(long)]
    q2: Option<IntRange>,
    /// Fit `|λ - (p+1)| ≈ C p^{-k}` over the rows (one-chain families).
    #[arg(long)]
    fit_decay: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
struct Instance {
    p: usize,
    q: Option<usize>,
    q1: Option<usize>,
    q2: Option<usize>,
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p={}", self.p)?;
        for (name, v) in [("q", self.q), ("q1", self.q1), ("q2", self.q2)] {
            if let Some(v) = v {
                write!(f, " {name}={v}")?;
            }
        }
        Ok(())
    }
}

/// One sweep row. Roots and oracle values are ascending and paired.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(flatten)]
    instance: Instance,
    hypotheses_met: bool,
    analytic_roots: Vec<f64>,
    oracle_values: Vec<f64>,
    max_abs_diff: Option<f64>,
    root_count_ok: bool,
    /// No sign change in `(4, p]`.
    below_window_clear: bool,
    weyl_min_margin: Option<f64>,
    weyl_within_hypotheses: Option<bool>,
    /// Leading-order estimates paired with `analytic_roots`.
    lambda_hat: Vec<f64>,
    asymptotic_error: Vec<f64>,
    /// Antisymmetric minus symmetric root, two-chain families.
    anti_minus_sym: Option<f64>,
    anomalies: Vec<String>,
    notes: Vec<String>,
}

impl SweepRow {
    fn new(instance: Instance) -> Self {
        SweepRow {
            instance,
            hypotheses_met: true,
            analytic_roots: Vec::new(),
            oracle_values: Vec::new(),
            max_abs_diff: None,
            root_count_ok: false,
            below_window_clear: false,
            weyl_min_margin: None,
            weyl_within_hypotheses: None,
            lambda_hat: Vec::new(),
            asymptotic_error: Vec::new(),
            anti_minus_sym: None,
            anomalies: Vec::new(),
            notes: Vec::new(),
        }
    }
}

fn instances(a: &SweepArgs) -> Result<Vec<Instance>> {
    let name = a
        .family
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let need = |r: Option<IntRange>, flag: &str| {
        r.with_context(|| format!("--family {name} needs {flag}"))
    };
    let reject = |r: Option<IntRange>, flag: &str| -> Result<()> {
        if r.is_some() {
            bail!("--family {name} does not take {flag}");
        }
        Ok(())
    };
    let mut out = Vec::new();
    match a.family {
        SweepFamily::OneFinite | SweepFamily::TwoFiniteEqual => {
            let q = need(a.q, "--q")?;
            reject(a.q1, "--q1")?;
            reject(a.q2, "--q2")?;
            for p in a.p.values() {
                for q in q.values() {
                    out.push(Instance {
                        p,
                        q: Some(q),
                        q1: None,
                        q2: None,
                    });
                }
            }
        }
        SweepFamily::TwoFinite => {
            let (r1, r2) = (need(a.q1, "--q1")?, need(a.q2, "--q2")?);
            reject(a.q, "--q")?;
            for p in a.p.values() {
                for q1 in r1.values() {
                    for q2 in r2.values() {
                        out.push(Instance {
                            p,
                            q: None,
                            q1: Some(q1),
                            q2: Some(q2),
                        });
                    }
                }
            }
        }
        SweepFamily::OneInfinite | SweepFamily::TwoInfinite => {
            reject(a.q, "--q")?;
            reject(a.q1, "--q1")?;
            reject(a.q2, "--q2")?;
            out.extend(a.p.values().map(|p| Instance {
                p,
                q: None,
                q1: None,
                q2: None,
            }));
        }
    }
    if a.fit_decay && !matches!(a.family, SweepFamily::OneFinite | SweepFamily::OneInfinite) {
        bail!("--fit-decay applies to one-finite and one-infinite");
    }
    Ok(out)
}

/// Families whose roots make up the row, in ascending root order, with the
/// matching asymptotic estimate.
fn row_families(
    family: SweepFamily,
    i: Instance,
) -> cliquechain::Result<Vec<(EdgeFamily, Option<AsymptoticFamily>)>> {
    let p = i.p;
    Ok(match family {
        SweepFamily::OneFinite => vec![(
            EdgeFamily::one_finite(p, i.q.unwrap_or_default())?,
            Some(AsymptoticFamily::OneChain),
        )],
        SweepFamily::OneInfinite => {
            vec![(
                EdgeFamily::one_infinite(p)?,
                Some(AsymptoticFamily::OneChain),
            )]
        }
        SweepFamily::TwoFinite => vec![(
            EdgeFamily::two_finite(i.q1.unwrap_or_default(), p, i.q2.unwrap_or_default())?,
            None,
        )],
        SweepFamily::TwoFiniteEqual => {
            let q = i.q.unwrap_or_default();
            vec![
                (
                    EdgeFamily::new(EdgeFamilyKind::TwoChainFiniteSym { q }, p)?,
                    Some(AsymptoticFamily::TwoChainSym),
                ),
                (
                    EdgeFamily::new(EdgeFamilyKind::TwoChainFiniteAnti { q }, p)?,
                    Some(AsymptoticFamily::TwoChainAnti),
                ),
            ]
        }
        SweepFamily::TwoInfinite => vec![
            (
                EdgeFamily::new(EdgeFamilyKind::TwoChainInfiniteSym, p)?,
                Some(AsymptoticFamily::TwoChainSym),
            ),
            (
                EdgeFamily::new(EdgeFamilyKind::TwoChainInfiniteAnti, p)?,
                Some(AsymptoticFamily::TwoChainAnti),
            ),
        ],
    })
}

/// Oracle graph and Weyl bounds for the row; infinite chains use
/// [`PROXY_Q`].
fn row_graph(
    family: SweepFamily,
    i: Instance,
) -> cliquechain::Result<(cliquechain::GraphSpec, Option<WeylBounds>)> {
    let p = i.p;
    Ok(match family {
        SweepFamily::OneFinite => {
            let q = i.q.unwrap_or_default();
            (build_single_chain(p, q)?, Some(weyl_one_relaxed(p, q)?))
        }
        SweepFamily::OneInfinite => (build_single_chain(p, PROXY_Q)?, None),
        SweepFamily::TwoFinite => {
            let (q1, q2) = (i.q1.unwrap_or_default(), i.q2.unwrap_or_default());
            (
                build_two_chain(q1, p, q2)?,
                Some(weyl_two_relaxed(q1, p, q2)?),
            )
        }
        SweepFamily::TwoFiniteEqual => {
            let q = i.q.unwrap_or_default();
            (build_two_chain(q, p, q)?, Some(weyl_two_relaxed(q, p, q)?))
        }
        SweepFamily::TwoInfinite => (build_two_chain(PROXY_Q, p, PROXY_Q)?, None),
    })
}

fn compute_row(family: SweepFamily, i: Instance, tol: f64) -> SweepRow {
    let mut row = SweepRow::new(i);
    if let Err(e) = fill_row(family, i, tol, &mut row) {
        row.anomalies.push(format!("error: {e}"));
    }
    row
}

fn fill_row(
    family: SweepFamily,
    i: Instance,
    tol: f64,
    row: &mut SweepRow,
) -> cliquechain::Result<()> {
    let fams = row_families(family, i)?;
    row.hypotheses_met = fams.iter().all(|(f, _)| f.hypotheses_met());
    if !row.hypotheses_met {
        row.notes
            .push(format!("outside hypotheses ({})", fams[0].0.hypotheses()));
    }
    let mut count_ok = true;
    let mut clear = true;
    for (f, asym) in &fams {
        let r = find_edge_roots(f, ROOT_TOL)?;
        if !r.count_matches() {
            count_ok = false;
            let msg = format!(
                "{f}: {} roots in window, expected {}",
                r.roots.len(),
                r.expected
            );
            if r.hypotheses_met {
                row.anomalies.push(msg);
            } else {
                row.notes.push(msg);
            }
        }
        for n in &r.anomalies {
            row.notes.push(n.clone());
        }
        let below = roots_below_window(f, BELOW_WINDOW_STEP)?;
        if !below.is_empty() {
            clear = false;
            let msg = format!("{f}: sign change below the window at {below:?}");
            if f.hypotheses_met() {
                row.anomalies.push(msg);
            } else {
                row.notes.push(msg);
            }
        }
        row.analytic_roots.extend(&r.roots);
        if let Some(a) = asym {
            let est = asymptotic_edge(*a, i.p);
            for &l in &r.roots {
                row.lambda_hat.push(est.lambda_hat);
                row.asymptotic_error.push((l - est.lambda_hat).abs());
            }
        }
    }
    row.root_count_ok = count_ok;
    row.below_window_clear = clear;
    if fams.len() == 2 && row.analytic_roots.len() == 2 {
        let d = row.analytic_roots[1] - row.analytic_roots[0];
        row.anti_minus_sym = Some(d);
        if d <= 0.0 {
            row.anomalies
                .push(format!("antisymmetric root not above symmetric (diff {d})"));
        }
    }

    let (g, weyl) = row_graph(family, i)?;
    let evals = eig_sym(&laplacian(&g), DEFAULT_TOL)?.eigenvalues;
    let k = row.analytic_roots.len().min(evals.len());
    row.oracle_values = evals[..k].iter().rev().copied().collect();
    let mut sorted = row.analytic_roots.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted != row.analytic_roots {
        row.notes
            .push("roots reordered ascending for oracle pairing".to_string());
    }
    let diff = sorted
        .iter()
        .zip(&row.oracle_values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if k > 0 {
        row.max_abs_diff = Some(diff);
        if diff > tol {
            row.anomalies
                .push(format!("analytic vs oracle |diff| {diff:e} > {tol:e}"));
        }
    }
    if let Some(w) = weyl {
        row.weyl_min_margin = Some(w.min_margin(&evals));
        row.weyl_within_hypotheses = Some(w.within_hypotheses);
        for v in w.violations(&evals, WEYL_TOL) {
            let msg = format!("lambda_{} = {} outside {}", v.index, v.value, v.bound);
            if w.within_hypotheses {
                row.anomalies.push(msg);
            } else {
                row.notes.push(msg);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct DecayFit {
    exponent: f64,
    constant: f64,
    points: usize,
}

pub fn run(a: &SweepArgs, common: &Common, argv: &[String]) -> Result<Output> {
    let list = instances(a)?;
    let tol = common.tol.unwrap_or(SWEEP_TOL);
    let params = json!({
        "family": a.family,
        "p": a.p,
        "q": a.q,
        "q1": a.q1,
        "q2": a.q2,
        "fit_decay": a.fit_decay,
        "tol": tol,
    });
    let mut report = RunReport::new("sweep", argv, params);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .context("building worker pool")?;
    let family = a.family;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        list.par_iter()
            .map(|&i| compute_row(family, i, tol))
            .collect()
    });
    rows.sort_by_key(|r| r.instance);

    for r in &rows {
        for m in &r.anomalies {
            report.push(
                Severity::Mismatch,
                "sweep_row",
                format!("{}: {m}", r.instance),
            );
        }
    }
    let fit = if a.fit_decay {
        let (xs, ys): (Vec<f64>, Vec<f64>) = rows
            .iter()
            .filter_map(|r| {
                r.analytic_roots
                    .first()
                    .map(|l| (r.instance.p as f64, l - (r.instance.p as f64 + 1.0)))
            })
            .map(|(p, d)| (p, d.abs()))
            .unzip();
        let fit = fit_power_decay(&xs, &ys).map(|(k, c)| DecayFit {
            exponent: k,
            constant: c,
            points: xs.len(),
        });
        if fit.is_none() {
            report.push(
                Severity::Warning,
                "fit_decay",
                "fewer than two usable points",
            );
        }
        fit
    } else {
        None
    };
    let anomalous = rows.iter().filter(|r| !r.anomalies.is_empty()).count();
    report.payload = json!({
        "rows": rows,
        "summary": { "rows": rows.len(), "anomalous_rows": anomalous, "fit": fit },
    });

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            vec![
                r.instance.p.to_string(),
                opt(r.instance.q),
                opt(r.instance.q1),
                opt(r.instance.q2),
                r.hypotheses_met.to_string(),
                cells(&r.analytic_roots),
                cells(&r.oracle_values),
                cell(r.max_abs_diff),
                r.root_count_ok.to_string(),
                r.below_window_clear.to_string(),
                cell(r.weyl_min_margin),
                r.weyl_within_hypotheses
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                cells(&r.lambda_hat),
                cells(&r.asymptotic_error),
                cell(r.anti_minus_sym),
                r.anomalies.join(" | "),
            ]
        })
        .collect();
    let csv = csv_string(&CSV_COLUMNS, &csv_rows)?;
    Ok(Output {
        report,
        csv: Some(csv),
    })
}

/// Stable CSV header. Multi-valued cells are `;`-separated and ascending.
pub const CSV_COLUMNS: [&str; 16] = [
    "p",
    "q",
    "q1",
    "q2",
    "hypotheses_met",
    "analytic_roots",
    "oracle_values",
    "max_abs_diff",
    "root_count_ok",
    "below_window_clear",
    "weyl_min_margin",
    "weyl_within_hypotheses",
    "lambda_hat",
    "asymptotic_error",
    "anti_minus_sym",
    "anomalies",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!(
            "6..12".parse::<IntRange>().unwrap(),
            IntRange { lo: 6, hi: 12 }
        );
        assert_eq!(
            "6..=12".parse::<IntRange>().unwrap(),
            IntRange { lo: 6, hi: 12 }
        );
        assert_eq!("7".parse::<IntRange>().unwrap(), IntRange { lo: 7, hi: 7 });
        assert!("9..3".parse::<IntRange>().is_err());
        assert!("a..3".parse::<IntRange>().is_err());
    }

    #[test]
    fn one_finite_row_is_clean() {
        let i = Instance {
            p: 6,
            q: Some(4),
            q1: None,
            q2: None,
        };
        let r = compute_row(SweepFamily::OneFinite, i, SWEEP_TOL);
        assert!(r.anomalies.is_empty(), "{:?}", r.anomalies);
        assert!(r.root_count_ok && r.below_window_clear);
        assert!((r.analytic_roots[0] - 7.0355).abs() < 1e-3);
        assert!(r.weyl_min_margin.unwrap() >= -1e-9);
    }

    #[test]
    fn two_infinite_row_orders_sym_below_anti() {
        let i = Instance {
            p: 8,
            q: None,
            q1: None,
            q2: None,
        };
        let r = compute_row(SweepFamily::TwoInfinite, i, SWEEP_TOL);
        assert!(r.anomalies.is_empty(), "{:?}", r.anomalies);
        assert!(r.anti_minus_sym.unwrap() > 0.0);
        assert!((r.analytic_roots[1] - (9.0 + 1.0 / 7.0)).abs() < 1e-10);
    }
}
