//! Subcommand bodies. Each returns its tables in sweep order.

use rayon::prelude::*;

use godel_c60::causality::{classify, GodelClassParams};
use godel_c60::error::Error;
use godel_c60::observables::persistent_current;
use godel_c60::oracle::{eigenfunction_residual_with, locate_eigenvalue, SecondOrderForm, ShootingConfig};
use godel_c60::spectrum::{solve_spectrum, Branch};
use godel_c60::verify::{run_all, VerifyReport};

use crate::config::{ModelConfig, RunConfig};
use crate::table::{format_float, Cell, Table};
use crate::CliError;

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

/// Checks every sweep point up front so bad input fails before any work.
fn model_points(cfg: &RunConfig) -> Result<Vec<ModelConfig>, CliError> {
    cfg.validate()?;
    let points = cfg.sweep_points();
    for m in &points {
        m.geometry()?;
    }
    Ok(points)
}

/// Runs `f` on every point in parallel and concatenates rows in order.
fn collect_rows<F>(points: &[ModelConfig], f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(&ModelConfig) -> Result<Vec<Vec<Cell>>, CliError> + Sync,
{
    let parts: Vec<Result<Vec<Vec<Cell>>, CliError>> = points.par_iter().map(&f).collect();
    let mut rows = Vec::new();
    for p in parts {
        rows.extend(p?);
    }
    Ok(rows)
}

pub const SPECTRUM_COLUMNS: [&str; 16] = [
    "n",
    "m",
    "alpha",
    "omega",
    "g",
    "phi_b",
    "radius",
    "eps_plus",
    "eps_plus_im",
    "eps_minus",
    "eps_minus_im",
    "valid",
    "discriminant",
    "residual_plus",
    "residual_minus",
    "status",
];

pub fn spectrum(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let points = model_points(cfg)?;
    let states = cfg.levels.level_set()?.states();
    let rows = collect_rows(&points, |m| {
        let p = m.geometry()?;
        let (f, c) = (m.flux(), m.monopole());
        let mut rows = Vec::with_capacity(states.len());
        for q in &states {
            let head = vec![
                Cell::from(q.n),
                Cell::from(q.m()),
                Cell::from(m.alpha),
                Cell::from(m.omega),
                Cell::from(c.charge()),
                Cell::from(m.flux),
                Cell::from(m.radius),
            ];
            let tail = match solve_spectrum(q, &p, &f, &c) {
                Ok(s) => vec![
                    Cell::from(s.eps_plus.re),
                    Cell::from(s.eps_plus.im),
                    Cell::from(s.eps_minus.re),
                    Cell::from(s.eps_minus.im),
                    Cell::from(s.valid),
                    Cell::from(s.discriminant),
                    Cell::from(s.residual_plus),
                    Cell::from(s.residual_minus),
                    Cell::from("ok"),
                ],
                Err(e @ Error::RotationSingular { .. }) => {
                    let mut t = vec![Cell::Empty; 8];
                    t[4] = Cell::from(false);
                    t.push(Cell::from(e.to_string()));
                    t
                }
                Err(e) => return Err(e.into()),
            };
            rows.push([head, tail].concat());
        }
        Ok(rows)
    })?;
    let mut t = Table::new("spectrum", SPECTRUM_COLUMNS.to_vec());
    rows.into_iter().for_each(|r| t.push(r));
    Ok(vec![t])
}

pub const CURRENT_COLUMNS: [&str; 11] = [
    "phi_b",
    "alpha",
    "omega",
    "radius",
    "i_analytic",
    "i_printed",
    "i_fd",
    "n_levels_used",
    "skipped",
    "warnings",
    "status",
];

pub fn current(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let points = model_points(cfg)?;
    let ls = cfg.levels.level_set()?;
    let rows = collect_rows(&points, |m| {
        let p = m.geometry()?;
        let head = vec![
            Cell::from(m.flux),
            Cell::from(m.alpha),
            Cell::from(m.omega),
            Cell::from(m.radius),
        ];
        let tail = match persistent_current(&ls, &p, &m.flux(), &m.monopole()) {
            Ok(r) => vec![
                Cell::from(r.i_analytic),
                Cell::from(r.i_printed),
                Cell::from(r.i_fd),
                Cell::from(r.levels_used()),
                Cell::from(r.skipped),
                Cell::from(r.warnings.join("; ")),
                Cell::from("ok"),
            ],
            Err(e @ Error::RotationSingular { .. }) => {
                let mut t = vec![Cell::Empty; 6];
                t.push(Cell::from(e.to_string()));
                t
            }
            Err(e) => return Err(e.into()),
        };
        Ok(vec![[head, tail].concat()])
    })?;
    let mut t = Table::new("current", CURRENT_COLUMNS.to_vec());
    rows.into_iter().for_each(|r| t.push(r));
    Ok(vec![t])
}

pub const CAUSALITY_COLUMNS: [&str; 7] = [
    "omega",
    "l2",
    "causal_class",
    "curvature_class",
    "r_max",
    "n_critical",
    "critical_radii",
];

pub fn causality(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    cfg.validate()?;
    let points = cfg.sweep_points();
    let mut params = Vec::with_capacity(points.len());
    for m in &points {
        params.push(
            GodelClassParams::new(m.omega, m.l2)
                .map_err(|e| CliError::Config(format!("causality needs omega > 0 and a finite l2: {e}")))?,
        );
    }
    let reports: Vec<_> = params.par_iter().map(classify).collect();
    let mut t = Table::new("causality", CAUSALITY_COLUMNS.to_vec());
    for (gp, rep) in params.iter().zip(reports) {
        let rep = rep?;
        let radii: Vec<String> = rep.critical_radii.iter().map(|&r| format_float(r)).collect();
        t.push(vec![
            Cell::from(gp.omega),
            Cell::from(gp.l2),
            Cell::from(format!("{:?}", rep.causal_class)),
            Cell::from(format!("{:?}", rep.curvature_class)),
            Cell::from(rep.r_max),
            Cell::from(rep.critical_radii.len()),
            Cell::from(radii.join(";")),
        ]);
    }
    Ok(vec![t])
}

pub const ORACLE_COLUMNS: [&str; 16] = [
    "n",
    "m",
    "alpha",
    "omega",
    "g",
    "phi_b",
    "branch",
    "lambda_formula",
    "lambda_oracle",
    "delta",
    "match_residual",
    "node_count",
    "residual_printed",
    "residual_eliminated",
    "valid",
    "status",
];

pub fn oracle(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let points = model_points(cfg)?;
    let states = cfg.levels.level_set()?.states();
    let shooting = ShootingConfig::default();
    let mut jobs = Vec::new();
    for (i, _) in points.iter().enumerate() {
        for q in &states {
            for b in [Branch::Plus, Branch::Minus] {
                jobs.push((i, *q, b));
            }
        }
    }
    let rows: Vec<Result<Vec<Cell>, CliError>> = jobs
        .par_iter()
        .map(|&(i, q, b)| {
            let m = &points[i];
            let p = m.geometry()?;
            let (f, c) = (m.flux(), m.monopole());
            let head = vec![
                Cell::from(q.n),
                Cell::from(q.m()),
                Cell::from(m.alpha),
                Cell::from(m.omega),
                Cell::from(c.charge()),
                Cell::from(m.flux),
                Cell::from(branch_name(b)),
            ];
            let s = match solve_spectrum(&q, &p, &f, &c) {
                Ok(s) => s,
                Err(e @ Error::RotationSingular { .. }) => {
                    let mut t = vec![Cell::Empty; 7];
                    t.push(Cell::from(false));
                    t.push(Cell::from(e.to_string()));
                    return Ok([head, t].concat());
                }
                Err(e) => return Err(e.into()),
            };
            let target = s.lambda(b).re;
            let tail = if !s.valid {
                let mut t = vec![Cell::Empty; 7];
                t.push(Cell::from(false));
                t.push(Cell::from("complex spectrum"));
                t
            } else {
                match locate_eigenvalue(&q, &p, &f, &c, &shooting, b) {
                    Ok(e) => vec![
                        Cell::from(target),
                        Cell::from(e.lambda),
                        Cell::from((e.lambda - target).abs()),
                        Cell::from(e.match_residual),
                        Cell::from(e.node_count),
                        Cell::from(eigenfunction_residual_with(
                            &q,
                            &p,
                            &f,
                            &c,
                            e.lambda,
                            SecondOrderForm::Printed,
                        )?),
                        Cell::from(eigenfunction_residual_with(
                            &q,
                            &p,
                            &f,
                            &c,
                            e.lambda,
                            SecondOrderForm::Eliminated,
                        )?),
                        Cell::from(true),
                        Cell::from("ok"),
                    ],
                    Err(e @ Error::NoBracket { .. }) => {
                        let mut t = vec![Cell::from(target)];
                        t.extend(vec![Cell::Empty; 6]);
                        t.push(Cell::from(true));
                        t.push(Cell::from(e.to_string()));
                        t
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            Ok([head, tail].concat())
        })
        .collect();
    let mut t = Table::new("oracle", ORACLE_COLUMNS.to_vec());
    for r in rows {
        t.push(r?);
    }
    Ok(vec![t])
}

pub fn verify_tables(report: &VerifyReport) -> Vec<Table> {
    let mut checks = Table::new("checks", vec!["id", "name", "passed", "metric", "tolerance", "detail"]);
    for c in &report.checks {
        checks.push(vec![
            Cell::from(c.id),
            Cell::from(c.name.as_str()),
            Cell::from(c.passed),
            Cell::from(c.metric),
            Cell::from(c.tolerance),
            Cell::from(c.detail.as_str()),
        ]);
    }
    let mut oracle = Table::new(
        "oracle_discrepancy",
        vec![
            "omega",
            "alpha",
            "phi_frac",
            "m",
            "n",
            "branch",
            "lambda_formula",
            "lambda_oracle",
            "delta",
            "match_residual",
            "node_count",
            "residual_printed",
            "residual_eliminated",
            "agrees",
        ],
    );
    for r in &report.oracle {
        oracle.push(vec![
            Cell::from(r.omega),
            Cell::from(r.alpha),
            Cell::from(r.phi_frac),
            Cell::from(r.twice_m as f64 / 2.0),
            Cell::from(r.n),
            Cell::from(branch_name(r.branch)),
            Cell::from(r.lambda_formula),
            Cell::from(r.lambda_oracle),
            Cell::from(r.delta),
            Cell::from(r.match_residual),
            Cell::from(r.node_count),
            Cell::from(r.printed_equation_residual),
            Cell::from(r.eliminated_equation_residual),
            Cell::from(r.agrees()),
        ]);
    }
    let mut printed = Table::new(
        "printed_discrepancy",
        vec![
            "omega",
            "alpha",
            "phi_frac",
            "n",
            "m",
            "lambda_printed_plus",
            "lambda_printed_minus",
            "lambda_plus",
            "lambda_minus",
            "q_residual",
        ],
    );
    for r in &report.printed.rows {
        printed.push(vec![
            Cell::from(r.omega),
            Cell::from(r.alpha),
            Cell::from(r.phi_frac),
            Cell::from(r.n),
            Cell::from(r.twice_m as f64 / 2.0),
            Cell::from(r.lambda_printed_plus),
            Cell::from(r.lambda_printed_minus),
            Cell::from(r.lambda_plus),
            Cell::from(r.lambda_minus),
            Cell::from(r.q_residual),
        ]);
    }
    vec![checks, oracle, printed]
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    Ok(run_all(cfg.seed)?)
}
