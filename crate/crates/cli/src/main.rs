//! Command-line frontend: one subcommand per library operation, with
//! text, JSON, and CSV renderings.
//!
//! Exit codes: 0 on success, 1 on domain or resource errors (reported on
//! stderr), 2 on usage errors. Identical invocations produce byte-identical
//! output; sampled estimates depend only on `--seed`.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use lattice_scope_core::arith::{totient_partial_sum, SieveTable};
use lattice_scope_core::cover::{
    blind_spot, exact_min_cover, greedy_cover, CoverSolution, Grid, BLIND_SPOT_MAX_POINTS,
};
use lattice_scope_core::explicit_cover::{
    build_plan, exceptional_scan_with_budget, omega_inequality_check,
    sampled_exceptional_estimate, DEFAULT_SCAN_BUDGET,
};
use lattice_scope_core::hidden_forest::{
    hidden_grid_witness, search_hidden_grid_with_cap, DEFAULT_SEARCH_LIMIT_CAP,
};
use lattice_scope_core::visibility::{density_nd_with_budget, DensityReport, DEFAULT_WORK_BUDGET};
use lattice_scope_core::{Error, LatticePoint, Point};
use output::{emit, fmt_f64, render_csv, render_json, render_text};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lattice-scope",
    version,
    about = "Lattice visibility toolkit: totient sums, visibility densities, \
             hidden grids, blind spots, and visibility covers"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for sampled estimates (default 0).
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Work budget for scans, searches, and sieves.
    #[arg(long, global = true, value_name = "INT", value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GMode {
    /// g = 2 ln ln n
    Loglog,
    /// g = 2 ln n / ln ln n
    Ratio,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    /// Visibility density over [1, n]^2 against 6/pi^2.
    #[value(name = "density2d")]
    Density2d,
    /// Coprime-triple density over [1, n]^3 against 1/zeta(3).
    #[value(name = "density3d")]
    Density3d,
    /// Totient partial sum against its quadratic main term.
    #[value(name = "phi_sum_error")]
    PhiSumError,
}

impl SeriesKind {
    fn as_str(self) -> &'static str {
        match self {
            SeriesKind::Density2d => "density2d",
            SeriesKind::Density3d => "density3d",
            SeriesKind::PhiSumError => "phi_sum_error",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sum of Euler's totient over 1..=x, next to 3x^2/pi^2.
    TotientSum {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
    },
    /// Fraction of [1, n]^2 visible from the origin.
    Density {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Fraction of [1, n]^d with coprime coordinates, d in 2..=4.
    DensityNd {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        d: u32,
    },
    /// Corner of a k-by-k grid hidden from the origin, by construction.
    HiddenWitness {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Smallest hidden k-by-k grid corner below a search limit.
    HiddenSearch {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=5))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Greedy observer set covering the (n+1)-by-(n+1) corner grid.
    CoverGreedy {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Minimum observer set by exhaustive search (n at most 8).
    CoverExact {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Point invisible from every listed observer, by CRT construction.
    BlindSpot {
        /// Observer as "x,y"; repeat the flag per observer (at most 12).
        #[arg(long = "point", value_name = "X,Y", required = true)]
        points: Vec<String>,
        /// Box size to check the containment guarantee against.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
    },
    /// Block-structured cover plan with its exceptional-set accounting.
    ExplicitCover {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Explicit threshold; overrides --g-mode.
        #[arg(long, value_parser = parse_positive_f64, conflicts_with = "g_mode")]
        g: Option<f64>,
        /// Threshold profile in terms of n (default loglog).
        #[arg(long = "g-mode", value_enum)]
        g_mode: Option<GMode>,
    },
    /// Count points of A_n invisible from every plan observer.
    ExceptionalScan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Explicit threshold; overrides --g-mode.
        #[arg(long, value_parser = parse_positive_f64, conflicts_with = "g_mode")]
        g: Option<f64>,
        /// Threshold profile in terms of n (default loglog).
        #[arg(long = "g-mode", value_enum)]
        g_mode: Option<GMode>,
        /// Sample size for a seeded estimate instead of the full scan.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        sample: Option<u64>,
    },
    /// List m up to the limit whose distinct-prime count reaches
    /// 2 ln m / ln ln m (expected empty).
    OmegaCheck {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Gap-to-target series over ascending n values.
    Convergence {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        /// Comma-separated strictly ascending list, e.g. 10,100,1000.
        #[arg(long = "n-values", value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
        n_values: Vec<u64>,
    },
}

fn parse_positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(format!("cannot write output: {e}"))
    }
}

fn csv_unsupported() -> Failure {
    Failure::Usage(
        "--format csv is only available for tabular subcommands \
         (convergence, omega-check); use text or json"
            .into(),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    let budget = cli.budget;
    let seed = cli.seed.unwrap_or(0);

    let body = match cli.command {
        Cmd::TotientSum { x } => {
            let cap = budget.unwrap_or(DEFAULT_WORK_BUDGET);
            if x > cap {
                return Err(Failure::Domain(format!(
                    "budget exceeded: sieving up to x = {x} passes the work budget {cap}"
                )));
            }
            let table = SieveTable::build(x)?;
            let r = totient_partial_sum(x, &table)?;
            let phi_sum = u64::try_from(r.phi_sum).expect("phi sum fits u64 at sieve scale");
            match format {
                Format::Json => render_json(json!({
                    "x": r.x,
                    "phi_sum": phi_sum,
                    "main_term": r.main_term,
                    "abs_error": r.abs_error,
                    "normalized_error": r.normalized_error,
                })),
                Format::Text => render_text(&[
                    ("x".into(), r.x.to_string()),
                    ("phi_sum".into(), phi_sum.to_string()),
                    ("main_term".into(), fmt_f64(r.main_term)),
                    ("abs_error".into(), fmt_f64(r.abs_error)),
                    ("normalized_error".into(), fmt_f64(r.normalized_error)),
                ]),
                Format::Csv => return Err(csv_unsupported()),
            }
        }

        Cmd::Density { n } => {
            let r = density_nd_with_budget(n, 2, budget.unwrap_or(DEFAULT_WORK_BUDGET))?;
            density_body(&r, format)?
        }

        Cmd::DensityNd { n, d } => {
            let r = density_nd_with_budget(n, d, budget.unwrap_or(DEFAULT_WORK_BUDGET))?;
            density_body(&r, format)?
        }

        Cmd::HiddenWitness { k } => {
            let w = hidden_grid_witness(k)?;
            match format {
                Format::Json => render_json(w.to_json()),
                Format::Text => render_text(&[
                    ("k".into(), w.k.to_string()),
                    ("a".into(), w.a.to_string()),
                    ("b".into(), w.b.to_string()),
                    ("modulus".into(), w.modulus.to_string()),
                    ("verified".into(), w.verified.to_string()),
                ]),
                Format::Csv => return Err(csv_unsupported()),
            }
        }

        Cmd::HiddenSearch { k, limit } => {
            let cap = budget.unwrap_or(DEFAULT_SEARCH_LIMIT_CAP);
            let found = search_hidden_grid_with_cap(k, limit, cap)?;
            match format {
                Format::Json => {
                    let mut v = json!({
                        "k": k,
                        "limit": limit,
                        "found": found.is_some(),
                    });
                    if let Some(p) = &found {
                        v["a"] = json!(p.x);
                        v["b"] = json!(p.y);
                    }
                    render_json(v)
                }
                Format::Text => {
                    let mut lines = vec![
                        ("k".into(), k.to_string()),
                        ("limit".into(), limit.to_string()),
                        ("found".into(), found.is_some().to_string()),
                    ];
                    if let Some(p) = &found {
                        lines.push(("a".into(), p.x.to_string()));
                        lines.push(("b".into(), p.y.to_string()));
                    }
                    render_text(&lines)
                }
                Format::Csv => return Err(csv_unsupported()),
            }
        }

        Cmd::CoverGreedy { n } => {
            let sol = greedy_cover(&Grid::new(n)?)?;
            cover_body(&sol, format)?
        }

        Cmd::CoverExact { n } => {
            let sol = exact_min_cover(&Grid::new(n)?)?;
            cover_body(&sol, format)?
        }

        Cmd::BlindSpot { points, n } => {
            if points.len() > BLIND_SPOT_MAX_POINTS {
                return Err(Failure::Usage(format!(
                    "at most {BLIND_SPOT_MAX_POINTS} observers are supported, got {}",
                    points.len()
                )));
            }
            let observers = points
                .iter()
                .map(|s| parse_point(s))
                .collect::<Result<Vec<_>, _>>()?;
            let bs = blind_spot(&observers)?;
            match format {
                Format::Json => {
                    let mut v = json!({
                        "point": {
                            "x": bs.point.x.to_string(),
                            "y": bs.point.y.to_string(),
                        },
                        "modulus": bs.modulus.to_string(),
                        "shift": bs.shift,
                        "containment_bound": bs.containment_bound.to_string(),
                    });
                    if let Some(n) = n {
                        v["n"] = json!(n);
                        v["guaranteed_within"] = json!(bs.guaranteed_within(n));
                    }
                    render_json(v)
                }
                Format::Text => {
                    let mut lines = vec![
                        ("point".into(), bs.point.to_string()),
                        ("modulus".into(), bs.modulus.to_string()),
                        ("shift".into(), bs.shift.to_string()),
                        ("containment_bound".into(), bs.containment_bound.to_string()),
                    ];
                    if let Some(n) = n {
                        lines.push(("n".into(), n.to_string()));
                        lines.push((
                            "guaranteed_within".into(),
                            bs.guaranteed_within(n).to_string(),
                        ));
                    }
                    render_text(&lines)
                }
                Format::Csv => return Err(csv_unsupported()),
            }
        }

        Cmd::ExplicitCover { n, g, g_mode } => {
            let table = SieveTable::build(n)?;
            let plan = build_plan(n, resolve_g(n, g, g_mode), &table)?;
            match format {
                Format::Json => render_json(plan.to_json()),
                Format::Text => render_text(&[
                    ("n".into(), plan.n().to_string()),
                    ("g_value".into(), fmt_f64(plan.g_value())),
                    ("s".into(), plan.s().to_string()),
                    ("t".into(), plan.t().to_string()),
                    ("t0".into(), plan.t0().to_string()),
                    ("en_count".into(), plan.en_count().to_string()),
                    ("index_count".into(), plan.index_set().len().to_string()),
                    ("b_size".into(), plan.b_size().to_string()),
                ]),
                Format::Csv => return Err(csv_unsupported()),
            }
        }

        Cmd::ExceptionalScan {
            n,
            g,
            g_mode,
            sample,
        } => {
            let table = SieveTable::build(n)?;
            let plan = build_plan(n, resolve_g(n, g, g_mode), &table)?;
            match sample {
                Some(size) => {
                    let est = sampled_exceptional_estimate(&plan, size, seed)?;
                    match format {
                        Format::Json => render_json(est.to_json()),
                        Format::Text => render_text(&[
                            ("n".into(), est.n.to_string()),
                            ("sample_size".into(), est.sample_size.to_string()),
                            ("seed".into(), est.seed.to_string()),
                            ("invisible_hits".into(), est.invisible_hits.to_string()),
                            ("fraction".into(), fmt_f64(est.fraction)),
                            ("ci_low".into(), fmt_f64(est.ci_low)),
                            ("ci_high".into(), fmt_f64(est.ci_high)),
                        ]),
                        Format::Csv => return Err(csv_unsupported()),
                    }
                }
                None => {
                    let rep = exceptional_scan_with_budget(
                        &plan,
                        budget.unwrap_or(DEFAULT_SCAN_BUDGET),
                    )?;
                    match format {
                        Format::Json => render_json(rep.to_json()),
                        Format::Text => render_text(&[
                            ("n".into(), rep.n.to_string()),
                            ("g_value".into(), fmt_f64(rep.g_value)),
                            ("s".into(), rep.s.to_string()),
                            ("t".into(), rep.t.to_string()),
                            ("t0".into(), rep.t0.to_string()),
                            ("en_count".into(), rep.en_count.to_string()),
                            ("b_size".into(), rep.b_size.to_string()),
                            ("exceptional_count".into(), rep.exceptional_count.to_string()),
                            ("bound_quadratic".into(), rep.bound_quadratic.to_string()),
                            ("bound_linear".into(), rep.bound_linear.to_string()),
                            ("cardinality_bound".into(), fmt_f64(rep.cardinality_bound)),
                            (
                                "within_quadratic_bound".into(),
                                rep.within_quadratic_bound.to_string(),
                            ),
                        ]),
                        Format::Csv => return Err(csv_unsupported()),
                    }
                }
            }
        }

        Cmd::OmegaCheck { limit } => {
            let table = SieveTable::build(limit)?;
            let violations = omega_inequality_check(limit, &table)?;
            match format {
                Format::Json => render_json(json!({
                    "limit": limit,
                    "count": violations.len(),
                    "violations": violations,
                })),
                Format::Text => {
                    let list = if violations.is_empty() {
                        "none".to_string()
                    } else {
                        violations
                            .iter()
                            .map(|m| m.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    render_text(&[
                        ("limit".into(), limit.to_string()),
                        ("count".into(), violations.len().to_string()),
                        ("violations".into(), list),
                    ])
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> =
                        violations.iter().map(|m| vec![m.to_string()]).collect();
                    render_csv(&["m"], &rows)
                }
            }
        }

        Cmd::Convergence { kind, n_values } => {
            for w in n_values.windows(2) {
                if w[1] <= w[0] {
                    return Err(Failure::Usage(
                        "--n-values must be strictly ascending".into(),
                    ));
                }
            }
            convergence_body(kind, &n_values, budget.unwrap_or(DEFAULT_WORK_BUDGET), format)?
        }
    };

    emit(&body, &cli.out)?;
    Ok(())
}

/// Threshold in terms of n when no explicit --g was given.
fn resolve_g(n: u64, g: Option<f64>, mode: Option<GMode>) -> f64 {
    if let Some(v) = g {
        return v;
    }
    let x = (n as f64).ln();
    match mode.unwrap_or(GMode::Loglog) {
        GMode::Loglog => 2.0 * x.ln(),
        GMode::Ratio => 2.0 * x / x.ln(),
    }
}

fn parse_point(s: &str) -> Result<LatticePoint, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "invalid point '{s}': expected two comma-separated integers like 3,5"
        ))
    };
    let (xs, ys) = s.split_once(',').ok_or_else(bad)?;
    let x: i64 = xs.trim().parse().map_err(|_| bad())?;
    let y: i64 = ys.trim().parse().map_err(|_| bad())?;
    Ok(Point::new(x, y))
}

fn density_body(r: &DensityReport, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => render_json(json!({
            "n": r.n,
            "d": r.d,
            "visible_count": r.visible_count,
            "total_count": r.total_count,
            "ratio": r.ratio,
            "target": r.target,
            "abs_gap": r.abs_gap,
        })),
        Format::Text => render_text(&[
            ("n".into(), r.n.to_string()),
            ("d".into(), r.d.to_string()),
            ("visible_count".into(), r.visible_count.to_string()),
            ("total_count".into(), r.total_count.to_string()),
            ("ratio".into(), fmt_f64(r.ratio)),
            ("target".into(), fmt_f64(r.target)),
            ("abs_gap".into(), fmt_f64(r.abs_gap)),
        ]),
        Format::Csv => return Err(csv_unsupported()),
    })
}

fn cover_body(sol: &CoverSolution, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => render_json(sol.to_json()),
        Format::Text => {
            let points = sol
                .points
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            render_text(&[
                ("n".into(), sol.n.to_string()),
                ("method".into(), sol.method.to_string()),
                ("size".into(), sol.size().to_string()),
                ("complete".into(), sol.complete.to_string()),
                ("points".into(), points),
            ])
        }
        Format::Csv => return Err(csv_unsupported()),
    })
}

struct SeriesRow {
    n: u64,
    value: Value,
    value_text: String,
    target: f64,
    abs_gap: f64,
}

/// Work estimate per row: gcd evaluations for the density kinds, sieve
/// cells for the totient kind. None means u64 overflow, always over budget.
fn row_work(kind: SeriesKind, n: u64) -> Option<u64> {
    match kind {
        SeriesKind::Density2d => n.checked_mul(n),
        SeriesKind::Density3d => n.checked_mul(n)?.checked_mul(n),
        SeriesKind::PhiSumError => Some(n),
    }
}

fn convergence_body(
    kind: SeriesKind,
    n_values: &[u64],
    cap: u64,
    format: Format,
) -> Result<String, Failure> {
    // Values ascend, so everything past the first over-budget row is too.
    let kept: Vec<u64> = n_values
        .iter()
        .copied()
        .take_while(|&n| row_work(kind, n).is_some_and(|w| w <= cap))
        .collect();
    let truncated = n_values.len() - kept.len();
    if truncated > 0 {
        eprintln!(
            "warning: work budget {cap} truncated {truncated} of {} rows",
            n_values.len()
        );
    }

    let mut rows = Vec::with_capacity(kept.len());
    match kind {
        SeriesKind::Density2d | SeriesKind::Density3d => {
            let d = if matches!(kind, SeriesKind::Density2d) { 2 } else { 3 };
            for &n in &kept {
                let r = density_nd_with_budget(n, d, cap)?;
                rows.push(SeriesRow {
                    n,
                    value: json!(r.ratio),
                    value_text: fmt_f64(r.ratio),
                    target: r.target,
                    abs_gap: r.abs_gap,
                });
            }
        }
        SeriesKind::PhiSumError => {
            if let Some(&max_n) = kept.last() {
                let table = SieveTable::build(max_n)?;
                for &n in &kept {
                    let r = totient_partial_sum(n, &table)?;
                    let phi_sum =
                        u64::try_from(r.phi_sum).expect("phi sum fits u64 at sieve scale");
                    rows.push(SeriesRow {
                        n,
                        value: json!(phi_sum),
                        value_text: phi_sum.to_string(),
                        target: r.main_term,
                        abs_gap: r.abs_error,
                    });
                }
            }
        }
    }

    Ok(match format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.value_text.clone(),
                        fmt_f64(r.target),
                        fmt_f64(r.abs_gap),
                    ]
                })
                .collect();
            render_csv(&["n", "value", "target", "abs_gap"], &table)
        }
        Format::Json => render_json(json!({
            "kind": kind.as_str(),
            "rows": rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "value": r.value,
                        "target": r.target,
                        "abs_gap": r.abs_gap,
                    })
                })
                .collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::from("n value target abs_gap\n");
            for r in &rows {
                out.push_str(&format!(
                    "{} {} {} {}\n",
                    r.n,
                    r.value_text,
                    fmt_f64(r.target),
                    fmt_f64(r.abs_gap)
                ));
            }
            out
        }
    })
}
