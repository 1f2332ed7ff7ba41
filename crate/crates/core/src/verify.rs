//! Verification suites behind the `verify` command: closed-form limits,
//! oracle agreement, published-formula discrepancies, expansion order,
//! Byers–Yang consistency, geometry, causality and flux periodicity.
//!
//! Every randomized suite draws from its own ChaCha stream derived from the
//! run seed, so reports are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::causality::{classify_within, default_range, g_function, CausalClass, GodelClassParams};
use crate::error::Result;
use crate::gauge::{FluxConfig, KPoint, MonopoleConfig};
use crate::geometry::{
    maurer_cartan_residual, metric_at, structure_residual, tetrad_at, torsion_free_connection_at, GeometryParams,
};
use crate::observables::{persistent_current, LevelSet};
use crate::oracle::{
    eigenfunction_residual_with, fallback_span, scan_eigenvalues, OracleEigenvalue, SecondOrderForm, ShootingConfig,
};
use crate::spectrum::{
    printed_spectrum, quantization_residual, slow_rotation_spectrum, solve_spectrum, Branch, QuantumNumbers, TwiceM,
};

pub const REPORT_VERSION: &str = concat!("godel-c60-verify/", env!("CARGO_PKG_VERSION"), "/1");
pub const DEFAULT_SEED: u64 = 60;

pub const TOL_CLOSED_FORM: f64 = 1e-12;
pub const TOL_ORACLE: f64 = 1e-6;
pub const TOL_PRINTED_AT_REST: f64 = 1e-10;
/// `|Q(λ_printed)|` above this counts as a genuine residual, not roundoff.
pub const PRINTED_RESIDUAL_FLOOR: f64 = 1e-8;
pub const TOL_SLOPE: f64 = 0.1;
pub const TOL_BYERS_YANG: f64 = 1e-6;
pub const TOL_ZERO_CURRENT: f64 = 1e-10;
pub const TOL_ORTHONORMAL: f64 = 1e-12;
pub const TOL_ORDER: f64 = 0.1;
pub const TOL_GODEL_RADIUS: f64 = 1e-10;
pub const TOL_PERIODICITY: f64 = 1e-12;

fn stream(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

fn c60_at(alpha: f64, omega: f64, radius: f64) -> Result<GeometryParams> {
    GeometryParams::new(alpha, omega, radius)
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOutcome {
    pub states: usize,
    pub max_rel_error: f64,
    /// States whose validity flag disagrees with the expected sub-gap rule.
    pub flag_mismatches: usize,
}

/// Inertial defect spectrum, `ε = ±√((n+|m|+1/2)² - 9/4)` for `n ≤ 4`,
/// `|m| ≤ 7/2`, with sub-gap states flagged.
pub fn inertial_defect_spectrum() -> Result<LimitOutcome> {
    let p = c60_at(1.0, 0.0, 1.0)?;
    let f = FluxConfig::new(0.0);
    let c = MonopoleConfig::c60();
    let mut out = LimitOutcome {
        states: 0,
        max_rel_error: 0.0,
        flag_mismatches: 0,
    };
    for n in 0..=4 {
        for tm in (-7..=7).step_by(2) {
            let q = QuantumNumbers::new(n, tm, KPoint::Plus);
            let s = solve_spectrum(&q, &p, &f, &c)?;
            let a = n as f64 + q.m().abs() + 0.5;
            let subgap = a < 1.5;
            out.states += 1;
            if s.valid == subgap {
                out.flag_mismatches += 1;
            }
            if !subgap {
                let want = (a * a - 2.25).sqrt();
                out.max_rel_error = out
                    .max_rel_error
                    .max(rel(s.eps_plus.re, want))
                    .max(rel(s.eps_minus.re, -want));
            }
        }
    }
    Ok(out)
}

/// Monopole-free limit `ε = ±(n + |m| + 1/2)/R` at several radii.
pub fn topological_insulator_limit() -> Result<LimitOutcome> {
    let f = FluxConfig::new(0.0);
    let c = MonopoleConfig { defects: 0 };
    let mut out = LimitOutcome {
        states: 0,
        max_rel_error: 0.0,
        flag_mismatches: 0,
    };
    for radius in [1.0, 0.5, 2.5] {
        let p = c60_at(1.0, 0.0, radius)?;
        for n in 0..=4 {
            for tm in (-7..=7).step_by(2) {
                let q = QuantumNumbers::new(n, tm, KPoint::Plus);
                let s = solve_spectrum(&q, &p, &f, &c)?;
                let want = (n as f64 + q.m().abs() + 0.5) / radius;
                out.states += 1;
                if !s.valid {
                    out.flag_mismatches += 1;
                }
                out.max_rel_error = out
                    .max_rel_error
                    .max(rel(s.eps_plus.re, want))
                    .max(rel(s.eps_minus.re, -want));
            }
        }
    }
    Ok(out)
}

pub const ORACLE_OMEGAS: [f64; 5] = [0.0, 0.02, 0.05, 0.1, 0.2];
pub const ORACLE_ALPHAS: [f64; 2] = [0.8, 1.0];
pub const ORACLE_FLUX_FRACS: [f64; 2] = [0.0, 0.3];
pub const ORACLE_TWICE_M: [i32; 4] = [-3, -1, 1, 3];
pub const ORACLE_N: [u32; 3] = [1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub omega: f64,
    pub alpha: f64,
    pub phi_frac: f64,
    pub twice_m: i32,
    pub n: u32,
    pub branch: Branch,
    pub lambda_formula: f64,
    /// Nearest shooting eigenvalue of the same sign.
    pub lambda_oracle: Option<f64>,
    pub delta: f64,
    pub match_residual: f64,
    pub node_count: Option<usize>,
    /// Printed second-order equation evaluated on the oracle eigenfunction.
    pub printed_equation_residual: f64,
    /// Eliminated second-order equation on the same eigenfunction.
    pub eliminated_equation_residual: f64,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.lambda_oracle.is_some() && self.delta < TOL_ORACLE
    }
}

fn oracle_cell(omega: f64, alpha: f64, frac: f64, tm: i32) -> Result<Vec<OracleRow>> {
    let p = c60_at(alpha, omega, 1.0)?;
    let f = FluxConfig::new(2.0 * PI * frac);
    let c = MonopoleConfig::c60();
    let cfg = ShootingConfig::default();
    // the first-order system does not involve n, so one scan serves every n
    let top = QuantumNumbers::new(*ORACLE_N.last().unwrap_or(&3), tm, KPoint::Plus);
    let span = fallback_span(&top, &f);
    let found: Vec<OracleEigenvalue> = scan_eigenvalues(&top, &p, &f, &c, &cfg, -span, span, 320)?;
    let mut rows = Vec::new();
    for n in ORACLE_N {
        let q = QuantumNumbers::new(n, tm, KPoint::Plus);
        let s = solve_spectrum(&q, &p, &f, &c)?;
        if !s.valid {
            continue;
        }
        for branch in [Branch::Plus, Branch::Minus] {
            let target = s.lambda(branch).re;
            let nearest = found
                .iter()
                .filter(|e| e.lambda != 0.0 && e.lambda.signum() == branch.sign())
                .min_by(|a, b| (a.lambda - target).abs().total_cmp(&(b.lambda - target).abs()));
            let (lambda_oracle, delta, match_residual, node_count, pr, el) = match nearest {
                Some(e) => (
                    Some(e.lambda),
                    (e.lambda - target).abs(),
                    e.match_residual,
                    Some(e.node_count),
                    eigenfunction_residual_with(&q, &p, &f, &c, e.lambda, SecondOrderForm::Printed)?,
                    eigenfunction_residual_with(&q, &p, &f, &c, e.lambda, SecondOrderForm::Eliminated)?,
                ),
                None => (None, f64::INFINITY, f64::NAN, None, f64::NAN, f64::NAN),
            };
            rows.push(OracleRow {
                omega,
                alpha,
                phi_frac: frac,
                twice_m: tm,
                n,
                branch,
                lambda_formula: target,
                lambda_oracle,
                delta,
                match_residual,
                node_count,
                printed_equation_residual: pr,
                eliminated_equation_residual: el,
            });
        }
    }
    Ok(rows)
}

/// Closed-form roots against the shooting oracle over the full grid.
pub fn oracle_grid() -> Result<Vec<OracleRow>> {
    let mut cells = Vec::new();
    for omega in ORACLE_OMEGAS {
        for alpha in ORACLE_ALPHAS {
            for frac in ORACLE_FLUX_FRACS {
                for tm in ORACLE_TWICE_M {
                    cells.push((omega, alpha, frac, tm));
                }
            }
        }
    }
    let parts: Vec<Result<Vec<OracleRow>>> = cells
        .par_iter()
        .map(|&(w, a, fr, tm)| oracle_cell(w, a, fr, tm))
        .collect();
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedRow {
    pub omega: f64,
    pub alpha: f64,
    pub phi_frac: f64,
    pub n: u32,
    pub twice_m: i32,
    pub lambda_printed_plus: f64,
    pub lambda_printed_minus: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `max |Q(λ_printed)|` over both branches (real roots only).
    pub q_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedOutcome {
    /// Largest `|λ_printed - λ|` over the `Ω = 0` grid, complex roots included.
    pub max_rest_deviation: f64,
    /// Largest `|Q(λ_printed)|` over the `Ω = 0.1` grid.
    pub max_rotating_residual: f64,
    pub rows: Vec<PrintedRow>,
}

/// Published closed form against the roots of the quantization polynomial.
pub fn printed_formula_report() -> Result<PrintedOutcome> {
    let c = MonopoleConfig::c60();
    let mut out = PrintedOutcome {
        max_rest_deviation: 0.0,
        max_rotating_residual: 0.0,
        rows: Vec::new(),
    };
    for omega in [0.0, 0.1] {
        for alpha in ORACLE_ALPHAS {
            for frac in ORACLE_FLUX_FRACS {
                let p = c60_at(alpha, omega, 1.0)?;
                let f = FluxConfig::new(2.0 * PI * frac);
                for n in 0..=4 {
                    for tm in (-7..=7).step_by(2) {
                        let q = QuantumNumbers::new(n, tm, KPoint::Plus);
                        let pr = printed_spectrum(&q, &p, &f, &c)?;
                        let s = solve_spectrum(&q, &p, &f, &c)?;
                        if omega == 0.0 {
                            let d = (pr.lambda_plus - s.lambda_plus)
                                .norm()
                                .max((pr.lambda_minus - s.lambda_minus).norm());
                            out.max_rest_deviation = out.max_rest_deviation.max(d);
                            continue;
                        }
                        if pr.lambda_plus.im != 0.0 || !s.valid {
                            continue;
                        }
                        let qr = quantization_residual(pr.lambda_plus.re, &q, &p, &f, &c)
                            .abs()
                            .max(quantization_residual(pr.lambda_minus.re, &q, &p, &f, &c).abs());
                        out.max_rotating_residual = out.max_rotating_residual.max(qr);
                        out.rows.push(PrintedRow {
                            omega,
                            alpha,
                            phi_frac: frac,
                            n,
                            twice_m: tm,
                            lambda_printed_plus: pr.lambda_plus.re,
                            lambda_printed_minus: pr.lambda_minus.re,
                            lambda_plus: s.lambda_plus.re,
                            lambda_minus: s.lambda_minus.re,
                            q_residual: qr,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowRotationTuple {
    pub n: u32,
    pub twice_m: i32,
    pub alpha: f64,
    pub phi_frac: f64,
    /// Least-squares slope of `log |λ - λ_slow|` against `log Ω`.
    pub slope: f64,
}

/// Ω values of the expansion-order fit, log-spaced over `[1e-4, 1e-2]`.
pub fn slow_rotation_omegas() -> Vec<f64> {
    (0..9).map(|i| 10f64.powf(-4.0 + 2.0 * i as f64 / 8.0)).collect()
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn slow_rotation_order(seed: u64) -> Result<Vec<SlowRotationTuple>> {
    let mut rng = stream(seed, 5);
    let c = MonopoleConfig::c60();
    let omegas = slow_rotation_omegas();
    let mut out = Vec::new();
    while out.len() < 10 {
        let n = rng.gen_range(0..=4u32);
        let tm = 2 * rng.gen_range(-4..=3i32) + 1;
        let alpha = rng.gen_range(0.7..1.3);
        let frac = rng.gen_range(0.0..1.0);
        let q = QuantumNumbers::new(n, tm, KPoint::Plus);
        let rest = solve_spectrum(&q, &c60_at(alpha, 0.0, 1.0)?, &FluxConfig::new(2.0 * PI * frac), &c)?;
        if rest.discriminant < 0.5 {
            continue;
        }
        let f = FluxConfig::new(2.0 * PI * frac);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &w in &omegas {
            let p = c60_at(alpha, w, 1.0)?;
            let exact = solve_spectrum(&q, &p, &f, &c)?;
            let slow = slow_rotation_spectrum(&q, &p, &f, &c);
            let err = (exact.lambda_plus.re - slow.lambda_plus.re)
                .abs()
                .max((exact.lambda_minus.re - slow.lambda_minus.re).abs());
            xs.push(w.ln());
            ys.push(err.ln());
        }
        out.push(SlowRotationTuple {
            n,
            twice_m: tm,
            alpha,
            phi_frac: frac,
            slope: fit_slope(&xs, &ys),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ByersYangRow {
    pub alpha: f64,
    pub omega: f64,
    pub radius: f64,
    pub phi_b: f64,
    pub levels: LevelSet,
    pub i_analytic: f64,
    pub i_fd: f64,
    pub i_printed: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ByersYangOutcome {
    pub rows: Vec<ByersYangRow>,
    pub max_rel_error: f64,
    /// Largest `|I(Φ_B = 0)|` over symmetric windows at rest.
    pub max_zero_flux_current: f64,
    /// Same for the finite-difference current, limited by roundoff.
    pub max_zero_flux_current_fd: f64,
}

/// Smallest reduced discriminant tolerated in a random current
/// configuration; closer to threshold the finite difference loses accuracy.
const SMOOTH_DISCRIMINANT: f64 = 0.05;

fn smooth(ls: &LevelSet, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig) -> Result<bool> {
    for q in ls.states() {
        let s = solve_spectrum(&q, p, f, c)?;
        if s.discriminant.abs() < SMOOTH_DISCRIMINANT || q.m() == f.phi_frac() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn byers_yang(seed: u64) -> Result<ByersYangOutcome> {
    let mut rng = stream(seed, 6);
    let c = MonopoleConfig::c60();
    let mut out = ByersYangOutcome {
        rows: Vec::new(),
        max_rel_error: 0.0,
        max_zero_flux_current: 0.0,
        max_zero_flux_current_fd: 0.0,
    };
    while out.rows.len() < 30 {
        let alpha = rng.gen_range(0.7..1.3);
        let omega = rng.gen_range(0.0..0.2);
        let radius = rng.gen_range(0.5..2.0);
        let frac: f64 = rng.gen_range(0.0..1.0);
        let n_max = rng.gen_range(1..=4u32);
        let m_max = TwiceM([3, 5, 7][rng.gen_range(0..3usize)]);
        let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        if (frac - 0.5).abs() < 0.02 {
            continue;
        }
        let p = c60_at(alpha, omega, radius)?;
        let f = FluxConfig::new(2.0 * PI * frac);
        let ls = LevelSet::new(n_max, m_max, branch);
        if !smooth(&ls, &p, &f, &c)? {
            continue;
        }
        let r = persistent_current(&ls, &p, &f, &c)?;
        let e = (r.i_analytic - r.i_fd).abs() / r.i_fd.abs().max(1.0);
        out.max_rel_error = out.max_rel_error.max(e);
        out.rows.push(ByersYangRow {
            alpha,
            omega,
            radius,
            phi_b: f.phi_b,
            levels: ls,
            i_analytic: r.i_analytic,
            i_fd: r.i_fd,
            i_printed: r.i_printed,
            rel_error: e,
        });
    }
    for alpha in [0.8, 1.0] {
        let p = c60_at(alpha, 0.0, 1.0)?;
        for (n_max, tm) in [(2, 5), (3, 7), (4, 11)] {
            for branch in [Branch::Plus, Branch::Minus] {
                let ls = LevelSet::new(n_max, TwiceM(tm), branch);
                let r = persistent_current(&ls, &p, &FluxConfig::new(0.0), &c)?;
                out.max_zero_flux_current = out.max_zero_flux_current.max(r.i_analytic.abs());
                out.max_zero_flux_current_fd = out.max_zero_flux_current_fd.max(r.i_fd.abs());
            }
        }
    }
    Ok(out)
}

pub const GEOMETRY_ALPHAS: [f64; 3] = [0.8, 1.0, 1.2];
pub const GEOMETRY_OMEGAS: [f64; 3] = [0.0, 0.05, 0.1];
/// Step pair of the convergence-order estimate.
pub const GEOMETRY_STEPS: (f64, f64) = (8e-3, 4e-3);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryRow {
    pub alpha: f64,
    pub omega: f64,
    pub theta: f64,
    pub orthonormality_defect: f64,
    pub residual_printed: f64,
    pub order_printed: f64,
    pub residual_torsion_free: f64,
    pub order_torsion_free: f64,
}

pub fn geometry_suite(seed: u64) -> Result<Vec<GeometryRow>> {
    let mut rng = stream(seed, 7);
    let (h1, h2) = GEOMETRY_STEPS;
    let mut rows = Vec::new();
    for alpha in GEOMETRY_ALPHAS {
        for omega in GEOMETRY_OMEGAS {
            let p = c60_at(alpha, omega, 1.0)?;
            for _ in 0..20 {
                let theta = rng.gen_range(0.2..PI - 0.2);
                let t = tetrad_at(&p, theta)?;
                let g = metric_at(&p, theta)?.g;
                let defect = (t.induced_metric() - g).amax().max(t.inverse_defect());
                let a = maurer_cartan_residual(&p, theta, h1)?;
                let b = maurer_cartan_residual(&p, theta, h2)?;
                let ta = structure_residual(&p, theta, h1, torsion_free_connection_at)?;
                let tb = structure_residual(&p, theta, h2, torsion_free_connection_at)?;
                let order = |x: f64, y: f64| (x / y).ln() / (h1 / h2).ln();
                rows.push(GeometryRow {
                    alpha,
                    omega,
                    theta,
                    orthonormality_defect: defect,
                    residual_printed: b,
                    order_printed: order(a, b),
                    residual_torsion_free: tb,
                    order_torsion_free: order(ta, tb),
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausalityRow {
    pub omega: f64,
    pub l2: f64,
    pub class: CausalClass,
    pub sampled_sign_changes: usize,
    pub reported_radii: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalityOutcome {
    pub rows: Vec<CausalityRow>,
    pub mismatches: usize,
    /// `max |l r_c - artanh(1/√2)|` over several Gödel points.
    pub godel_radius_error: f64,
}

const CAUSALITY_GRID: usize = 20_000;

fn sampled_sign_changes(gp: &GodelClassParams, r_max: f64) -> (usize, bool) {
    let mut changes = 0;
    let mut any_negative = false;
    let mut last = 0.0f64;
    for i in 1..=CAUSALITY_GRID {
        let g = g_function(gp, r_max * i as f64 / CAUSALITY_GRID as f64);
        if g < 0.0 {
            any_negative = true;
        }
        if g != 0.0 {
            if last != 0.0 && g.signum() != last.signum() {
                changes += 1;
            }
            last = g;
        }
    }
    (changes, any_negative)
}

pub fn causality_suite(seed: u64) -> Result<CausalityOutcome> {
    let mut rng = stream(seed, 8);
    let mut out = CausalityOutcome {
        rows: Vec::new(),
        mismatches: 0,
        godel_radius_error: 0.0,
    };
    for _ in 0..200 {
        let omega = rng.gen_range(0.2..3.0);
        let l2 = omega * omega * rng.gen_range(-3.0..3.0);
        let gp = GodelClassParams::new(omega, l2)?;
        let r_max = default_range(&gp);
        let rep = classify_within(&gp, r_max, 2)?;
        let (changes, negative) = sampled_sign_changes(&gp, r_max);
        let sampled = match (changes, negative) {
            (0, false) => Some(CausalClass::NoCTC),
            (1, true) => Some(CausalClass::OneNoncausalRegion),
            (c, true) if c >= 2 => Some(CausalClass::AlternatingRegions),
            _ => None,
        };
        let agrees = sampled == Some(rep.causal_class) && rep.critical_radii.len() == changes;
        if !agrees {
            out.mismatches += 1;
        }
        out.rows.push(CausalityRow {
            omega,
            l2,
            class: rep.causal_class,
            sampled_sign_changes: changes,
            reported_radii: rep.critical_radii.len(),
            agrees,
        });
    }
    let want = (0.5f64.sqrt()).atanh();
    for omega in [0.5, 1.0, 2.0] {
        let gp = GodelClassParams::godel(omega);
        let rep = classify_within(&gp, default_range(&gp), 2)?;
        let err = match rep.critical_radii.as_slice() {
            [r] => (gp.l_abs() * r - want).abs(),
            _ => f64::INFINITY,
        };
        out.godel_radius_error = out.godel_radius_error.max(err);
    }
    Ok(out)
}

/// Largest elementwise gap between the spectra at `Φ_B` and `Φ_B + 2π`
/// (window shifted by one) over random parameter points.
pub fn flux_periodicity(seed: u64) -> Result<f64> {
    let mut rng = stream(seed, 9);
    let c = MonopoleConfig::c60();
    let ls = LevelSet::new(3, TwiceM(11), Branch::Minus);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = c60_at(
            rng.gen_range(0.7..1.3),
            rng.gen_range(0.0..0.3),
            rng.gen_range(0.5..2.0),
        )?;
        let phi = rng.gen_range(0.0..2.0 * PI);
        let here = FluxConfig::new(phi);
        let there = FluxConfig::new(phi + 2.0 * PI);
        for (a, b) in ls.states().iter().zip(ls.shifted_states(1)) {
            let s = solve_spectrum(a, &p, &here, &c)?;
            let t = solve_spectrum(&b, &p, &there, &c)?;
            worst = worst
                .max((s.eps_plus - t.eps_plus).norm())
                .max((s.eps_minus - t.eps_minus).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub version: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub oracle: Vec<OracleRow>,
    pub printed: PrintedOutcome,
    pub slow_rotation: Vec<SlowRotationTuple>,
    pub byers_yang: ByersYangOutcome,
    pub geometry: Vec<GeometryRow>,
    pub causality: CausalityOutcome,
    pub flux_periodicity_gap: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(id: u32, name: &str, passed: bool, metric: f64, tolerance: f64, detail: String) -> Check {
    Check {
        id,
        name: name.to_string(),
        passed,
        metric,
        tolerance,
        detail,
    }
}

/// Runs every suite and collects one check per acceptance criterion.
pub fn run_all(seed: u64) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    let c1 = inertial_defect_spectrum()?;
    checks.push(check(
        1,
        "inertial defect spectrum",
        c1.max_rel_error < TOL_CLOSED_FORM && c1.flag_mismatches == 0,
        c1.max_rel_error,
        TOL_CLOSED_FORM,
        format!("{} states, {} sub-gap flag mismatches", c1.states, c1.flag_mismatches),
    ));

    let c2 = topological_insulator_limit()?;
    checks.push(check(
        2,
        "topological insulator limit",
        c2.max_rel_error < TOL_CLOSED_FORM && c2.flag_mismatches == 0,
        c2.max_rel_error,
        TOL_CLOSED_FORM,
        format!("{} states", c2.states),
    ));

    let oracle = oracle_grid()?;
    let rest: Vec<&OracleRow> = oracle.iter().filter(|r| r.omega == 0.0).collect();
    let rest_fail = rest.iter().filter(|r| !r.agrees()).count();
    let rotating_fail = oracle.iter().filter(|r| r.omega != 0.0 && !r.agrees()).count();
    let rest_worst = rest.iter().map(|r| r.delta).fold(0.0, f64::max);
    checks.push(check(
        3,
        "oracle agreement",
        rest_fail == 0,
        rest_worst,
        TOL_ORACLE,
        format!(
            "{} rows; at rest {rest_fail}/{} disagree; rotating {rotating_fail}/{} itemized",
            oracle.len(),
            rest.len(),
            oracle.len() - rest.len()
        ),
    ));

    let printed = printed_formula_report()?;
    checks.push(check(
        4,
        "printed formula discrepancy",
        printed.max_rest_deviation < TOL_PRINTED_AT_REST && printed.max_rotating_residual > PRINTED_RESIDUAL_FLOOR,
        printed.max_rest_deviation,
        TOL_PRINTED_AT_REST,
        format!(
            "max |Q(lambda_printed)| at Omega=0.1: {:e}",
            printed.max_rotating_residual
        ),
    ));

    let slow = slow_rotation_order(seed)?;
    let worst_slope = slow.iter().map(|t| (t.slope - 2.0).abs()).fold(0.0, f64::max);
    checks.push(check(
        5,
        "slow rotation order",
        worst_slope <= TOL_SLOPE,
        worst_slope,
        TOL_SLOPE,
        format!("{} tuples, |slope - 2| max", slow.len()),
    ));

    let by = byers_yang(seed)?;
    checks.push(check(
        6,
        "Byers-Yang consistency",
        by.max_rel_error < TOL_BYERS_YANG && by.max_zero_flux_current < TOL_ZERO_CURRENT,
        by.max_rel_error,
        TOL_BYERS_YANG,
        format!(
            "max |I(Phi_B=0)| = {:e} (finite difference {:e})",
            by.max_zero_flux_current, by.max_zero_flux_current_fd
        ),
    ));

    let geometry = geometry_suite(seed)?;
    let ortho = geometry.iter().map(|r| r.orthonormality_defect).fold(0.0, f64::max);
    let order_dev = geometry
        .iter()
        .map(|r| (r.order_printed - 2.0).abs())
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    let order_fail = geometry
        .iter()
        .filter(|r| !((r.order_printed - 2.0).abs() <= TOL_ORDER))
        .count();
    let tf_dev = geometry
        .iter()
        .map(|r| (r.order_torsion_free - 2.0).abs())
        .fold(0.0, f64::max);
    checks.push(check(
        7,
        "geometry suite",
        ortho < TOL_ORTHONORMAL && order_fail == 0,
        order_dev,
        TOL_ORDER,
        format!(
            "orthonormality {ortho:e}; {order_fail}/{} points off order 2; torsion-free connection |order - 2| max {tf_dev:.3}",
            geometry.len()
        ),
    ));

    let causality = causality_suite(seed)?;
    checks.push(check(
        8,
        "causality classification",
        causality.mismatches == 0 && causality.godel_radius_error < TOL_GODEL_RADIUS,
        causality.godel_radius_error,
        TOL_GODEL_RADIUS,
        format!("{} pairs, {} mismatches", causality.rows.len(), causality.mismatches),
    ));

    let gap = flux_periodicity(seed)?;
    checks.push(check(
        9,
        "flux periodicity",
        gap < TOL_PERIODICITY,
        gap,
        TOL_PERIODICITY,
        "n <= 3, |m| <= 11/2, 5 parameter points".to_string(),
    ));

    Ok(VerifyReport {
        version: REPORT_VERSION.to_string(),
        seed,
        checks,
        oracle,
        printed,
        slow_rotation: slow,
        byers_yang: by,
        geometry,
        causality,
        flux_periodicity_gap: gap,
    })
}
