//! Independent eigenvalue oracle: two-sided shooting on the coupled
//! first-order system
//!
//! ```text
//! ψ_k' = -[(1/2 + k g/α) cotθ - (k/(α sinθ))(m̃ + 4αΩλ sin²(θ/2))] ψ_k + iλ ψ_{-k}
//! ```
//!
//! Writing `ψ₋ = i φ₋` makes the system real in `(ψ₊, φ₋)`, which is the
//! state carried by the integrator. The regular solution is seeded at each
//! pole from its leading Frobenius terms, both sides are integrated to the
//! matching angle, and `λ` is located as a zero of the 2×2 matching
//! determinant. Because `λ` also sits inside the rotation coupling, every
//! trial `λ` re-integrates the system.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauge::{FluxConfig, KPoint, MonopoleConfig};
use crate::geometry::GeometryParams;
use crate::ode::{dopri_step, find_root, integrate, Tolerances};
use crate::spectrum::{solve_spectrum, Branch, QuantumNumbers};

/// Pole cutoff used when no configuration is supplied.
pub const DEFAULT_THETA_MIN: f64 = 1e-6;

/// Spacing of the fixed steps taken either side of a stencil centre.
pub const FD_STEP: f64 = 1e-4;

/// Largest matching determinant accepted at a converged eigenvalue.
pub const ACCEPT_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub theta_min: f64,
    pub theta_max: f64,
    pub tol: Tolerances,
    pub match_angle: f64,
    /// Search interval for `λ`. `None` derives one from the closed-form
    /// root of the plus branch.
    pub bracket: Option<(f64, f64)>,
    pub max_iter: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            theta_min: DEFAULT_THETA_MIN,
            theta_max: PI - DEFAULT_THETA_MIN,
            tol: Tolerances::default(),
            match_angle: PI / 2.0,
            bracket: None,
            max_iter: 200,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.theta_min
            && self.theta_min < self.match_angle - 2.0 * FD_STEP
            && self.match_angle + 2.0 * FD_STEP < self.theta_max
            && self.theta_max < PI;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "shooting",
                reason: format!(
                    "need 0 < theta_min < match_angle < theta_max < pi, got {} / {} / {}",
                    self.theta_min, self.match_angle, self.theta_max
                ),
            })
        }
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = Some((lo.min(hi), lo.max(hi)));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEigenvalue {
    pub lambda: f64,
    /// `|det[Ψ_left | Ψ_right]|` of the unit-normalized matching vectors.
    pub match_residual: f64,
    /// Sign changes of `ψ₊` over the glued eigenfunction.
    pub node_count: usize,
}

/// Model constants that enter the first-order system.
#[derive(Debug, Clone, Copy)]
struct System {
    mtilde: f64,
    g_over_alpha: f64,
    alpha: f64,
    omega: f64,
    lambda: f64,
}

impl System {
    fn new(q: &QuantumNumbers, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig, lambda: f64) -> Self {
        Self {
            mtilde: q.m() - f.phi_frac(),
            g_over_alpha: c.charge() / p.alpha,
            alpha: p.alpha,
            omega: p.omega,
            lambda,
        }
    }

    /// Diagonal coefficient `c_k(θ)`, so that `ψ_k' = -c_k ψ_k + ...`.
    fn coupling(&self, k: f64, theta: f64) -> f64 {
        let (s, co) = theta.sin_cos();
        let half = (0.5 * theta).sin();
        let drag = 4.0 * self.alpha * self.omega * self.lambda * half * half;
        (0.5 + k * self.g_over_alpha) * co / s - k / (self.alpha * s) * (self.mtilde + drag)
    }

    /// Real form of the derivative for the state `(ψ₊, φ₋)`.
    fn rhs(&self, theta: f64, y: &[f64; 2]) -> [f64; 2] {
        let cp = self.coupling(1.0, theta);
        let cm = self.coupling(-1.0, theta);
        [-cp * y[0] - self.lambda * y[1], -cm * y[1] + self.lambda * y[0]]
    }

    /// Own exponents `(e₊, e₋)` of the two components at the north pole.
    fn north_exponents(&self) -> [f64; 2] {
        let kp = 0.5 + self.g_over_alpha - self.mtilde / self.alpha;
        [-kp, kp - 1.0]
    }

    /// Own exponents in `s = π - θ` at the south pole.
    fn south_exponents(&self) -> [f64; 2] {
        let mp = 0.5 + self.g_over_alpha + self.mtilde / self.alpha + 4.0 * self.omega * self.lambda;
        [-mp, mp - 1.0]
    }
}

/// Index of the component carrying the regular leading power. Ties go to
/// `φ₋`, which keeps `ψ₊` vanishing at the pole.
fn leading(exps: [f64; 2]) -> usize {
    if exps[0] > exps[1] {
        0
    } else {
        1
    }
}

/// First two Frobenius terms `v₀ + t v₁` (the common `t^e` factor dropped)
/// for `y' = (diag(exps)/t + B) y` with off-diagonal `B`.
fn frobenius_seed(exps: [f64; 2], b: [[f64; 2]; 2], t: f64) -> [f64; 2] {
    let lead = leading(exps);
    let other = 1 - lead;
    let e = exps[lead];
    let mut y = [0.0; 2];
    y[lead] = 1.0;
    y[other] = t * b[other][lead] / (e + 1.0 - exps[other]);
    y
}

/// Regular-solution exponents of component `q.k` at the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialExponents {
    pub north: f64,
    pub south: f64,
}

/// Growth exponents of `ψ_k` for the regular solution near `θ = 0`
/// (power of `θ`) and `θ = π` (power of `π - θ`). With `Ω ≠ 0` the south
/// exponent depends on `λ`.
pub fn indicial_exponents(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    lambda: f64,
) -> IndicialExponents {
    let sys = System::new(q, p, f, c, lambda);
    let idx = match q.k {
        KPoint::Plus => 0,
        KPoint::Minus => 1,
    };
    let pick = |exps: [f64; 2]| {
        let lead = leading(exps);
        if lead == idx {
            exps[lead]
        } else {
            exps[lead] + 1.0
        }
    };
    IndicialExponents {
        north: pick(sys.north_exponents()),
        south: pick(sys.south_exponents()),
    }
}

/// Derivative of `(ψ₊, ψ₋)` under the first-order system.
pub fn rhs_first_order(
    theta: f64,
    psi: [Complex64; 2],
    lambda: f64,
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<[Complex64; 2]> {
    if !(DEFAULT_THETA_MIN..=PI - DEFAULT_THETA_MIN).contains(&theta) {
        return Err(Error::Domain {
            what: "theta",
            value: theta,
            domain: "[theta_min, theta_max]",
        });
    }
    let sys = System::new(q, p, f, c, lambda);
    let i = Complex64::new(0.0, 1.0);
    let cp = sys.coupling(1.0, theta);
    let cm = sys.coupling(-1.0, theta);
    Ok([-psi[0] * cp + i * lambda * psi[1], -psi[1] * cm + i * lambda * psi[0]])
}

/// One side of a shot: values at the matching angle and one FD step short
/// of it (on the side of the integration), plus optional samples.
struct Side {
    at: [f64; 2],
    near: [f64; 2],
    samples: Vec<(f64, f64)>,
}

/// Integrates the regular solution from a pole to `target` and then takes
/// two fixed steps so the endpoint sits on an exact stencil.
fn integrate_side(sys: &System, cfg: &ShootingConfig, north: bool, target: f64, record: bool) -> Result<Side> {
    let lam = sys.lambda;
    let (start, y0, dir) = if north {
        let t0 = cfg.theta_min;
        let seed = frobenius_seed(sys.north_exponents(), [[0.0, -lam], [lam, 0.0]], t0);
        (t0, seed, 1.0)
    } else {
        let s0 = PI - cfg.theta_max;
        let seed = frobenius_seed(sys.south_exponents(), [[0.0, lam], [-lam, 0.0]], s0);
        (cfg.theta_max, seed, -1.0)
    };
    let rhs = |t: f64, y: &[f64; 2]| sys.rhs(t, y);
    let mut samples = Vec::new();
    let stop = target - dir * 2.0 * FD_STEP;
    let y = integrate(rhs, start, y0, stop, &cfg.tol, |t, y| {
        if record {
            samples.push((t, y[0]));
        }
    })?;
    let (near, _) = dopri_step(&rhs, stop, &y, dir * FD_STEP);
    let (at, _) = dopri_step(&rhs, stop + dir * FD_STEP, &near, dir * FD_STEP);
    if record {
        samples.push((stop + dir * FD_STEP, near[0]));
        samples.push((target, at[0]));
    }
    Ok(Side { at, near, samples })
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    if n == 0.0 || !n.is_finite() {
        v
    } else {
        [v[0] / n, v[1] / n]
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Matching determinant of the unit-normalized left and right solutions.
pub fn matching_determinant(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    lambda: f64,
    cfg: &ShootingConfig,
) -> Result<f64> {
    let sys = System::new(q, p, f, c, lambda);
    let l = integrate_side(&sys, cfg, true, cfg.match_angle, false)?;
    let r = integrate_side(&sys, cfg, false, cfg.match_angle, false)?;
    Ok(cross(unit(l.at), unit(r.at)))
}

fn count_nodes(sys: &System, cfg: &ShootingConfig) -> Result<usize> {
    let l = integrate_side(sys, cfg, true, cfg.match_angle, true)?;
    let r = integrate_side(sys, cfg, false, cfg.match_angle, true)?;
    let (lv, rv) = (l.at, r.at);
    let scale = if rv[0].abs() > 1e-8 * rv[0].abs().max(rv[1].abs()) {
        lv[0] / rv[0]
    } else {
        lv[1] / rv[1]
    };
    // global phase: ψ₊ positive at the matching angle
    let phase = if lv[0] < 0.0 { -1.0 } else { 1.0 };
    let mut pts: Vec<(f64, f64)> = l.samples.iter().map(|&(t, v)| (t, phase * v)).collect();
    pts.extend(r.samples.iter().map(|&(t, v)| (t, phase * scale * v)));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let peak = pts.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    let floor = 1e-9 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &(_, v) in &pts {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    Ok(nodes)
}

/// Closed-form root of the requested branch padded by 20% either side.
pub fn padded_bracket(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    branch: Branch,
) -> Result<(f64, f64)> {
    let s = solve_spectrum(q, p, f, c)?;
    let target = s.lambda(branch).re;
    let pad = 0.2 * target.abs() + 1e-3;
    Ok((target - pad, target + pad))
}

fn refine(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    cfg: &ShootingConfig,
    lo: f64,
    hi: f64,
) -> Result<OracleEigenvalue> {
    let det = |lam: f64| matching_determinant(q, p, f, c, lam, cfg);
    let lambda = find_root(det, lo, hi, 0.0, cfg.max_iter)?;
    let match_residual = det(lambda)?.abs();
    if !(match_residual < ACCEPT_RESIDUAL) {
        // sign change came from a jump, not a zero
        return Err(Error::NoBracket { lo, hi });
    }
    let node_count = count_nodes(&System::new(q, p, f, c, lambda), cfg)?;
    Ok(OracleEigenvalue {
        lambda,
        match_residual,
        node_count,
    })
}

/// Root of the matching determinant inside `cfg.bracket` (or the padded
/// plus-branch bracket when none is set).
pub fn shoot_eigenvalue(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    cfg: &ShootingConfig,
) -> Result<OracleEigenvalue> {
    cfg.validate()?;
    let (lo, hi) = match cfg.bracket {
        Some(b) => b,
        None => padded_bracket(q, p, f, c, Branch::Plus)?,
    };
    refine(q, p, f, c, cfg, lo, hi)
}

/// All accepted eigenvalues found by sampling the determinant on
/// `points` equally spaced values of `[lo, hi]`.
pub fn scan_eigenvalues(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    cfg: &ShootingConfig,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<OracleEigenvalue>> {
    cfg.validate()?;
    let points = points.max(2);
    let grid: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(points);
    for &lam in &grid {
        values.push(matching_determinant(q, p, f, c, lam, cfg)?);
    }
    let mut found = Vec::new();
    for i in 0..points - 1 {
        if values[i] == 0.0 {
            if let Ok(e) = refine(q, p, f, c, cfg, grid[i], grid[i]) {
                found.push(e);
            }
        } else if values[i].signum() != values[i + 1].signum() && values[i + 1] != 0.0 {
            match refine(q, p, f, c, cfg, grid[i], grid[i + 1]) {
                Ok(e) => found.push(e),
                Err(Error::NoBracket { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(found)
}

/// Half-width of the fallback scan, `n + |m̃| + 3`.
pub fn fallback_span(q: &QuantumNumbers, f: &FluxConfig) -> f64 {
    q.n as f64 + (q.m() - f.phi_frac()).abs() + 3.0
}

/// Oracle eigenvalue nearest to the closed-form root of `branch`: the padded
/// bracket is tried first, then a coarse scan of the fallback window.
pub fn locate_eigenvalue(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    cfg: &ShootingConfig,
    branch: Branch,
) -> Result<OracleEigenvalue> {
    cfg.validate()?;
    let target = solve_spectrum(q, p, f, c)?.lambda(branch).re;
    if let Ok((lo, hi)) = padded_bracket(q, p, f, c, branch) {
        if let Ok(e) = refine(q, p, f, c, cfg, lo, hi) {
            return Ok(e);
        }
    }
    let span = fallback_span(q, f);
    let found = scan_eigenvalues(q, p, f, c, cfg, -span, span, 240)?;
    found
        .into_iter()
        .filter(|e| e.lambda.signum() == branch.sign() || e.lambda == 0.0)
        .min_by(|a, b| (a.lambda - target).abs().total_cmp(&(b.lambda - target).abs()))
        .ok_or(Error::NoBracket { lo: -span, hi: span })
}

/// Which second-order equation `eigenfunction_residual_with` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderForm {
    /// The published combined equation.
    Printed,
    /// `ψ_k'' + cotθ ψ_k' + (c_k' + c_k c_{-k} + λ²) ψ_k = 0`, obtained by
    /// eliminating `ψ_{-k}` from the first-order system.
    Eliminated,
}

/// Second-order operator applied to component `k` at `θ` from a
/// three-point stencil `(y(θ-h), y(θ), y(θ+h))`.
fn second_order_operator(sys: &System, form: SecondOrderForm, k: f64, theta: f64, stencil: [f64; 3], h: f64) -> f64 {
    let [ym, y0, yp] = stencil;
    let d2 = (yp - 2.0 * y0 + ym) / (h * h);
    let d1 = (yp - ym) / (2.0 * h);
    let (s, co) = theta.sin_cos();
    let lam = sys.lambda;
    let potential = match form {
        SecondOrderForm::Printed => {
            let ga = sys.g_over_alpha;
            let ma = sys.mtilde / sys.alpha;
            let angular = ma * ma - (k + 2.0 * ga) * ma * co + ga * (ga + k) + 0.25;
            let half = (0.5 * theta).sin().powi(2);
            let w = sys.omega;
            let rot = 4.0 * w * lam * half / s
                * (k + 2.0 / sys.alpha * (sys.mtilde - sys.g_over_alpha * sys.alpha * co) + 4.0 * w * lam * half);
            -angular / (s * s) + lam * lam - 0.25 + ga * ga - rot
        }
        SecondOrderForm::Eliminated => {
            let half = (0.5 * theta).sin().powi(2);
            let drag = 4.0 * sys.alpha * sys.omega * lam * half;
            let ddrag = 2.0 * sys.alpha * sys.omega * lam * s;
            let dc = -(0.5 + k * sys.g_over_alpha) / (s * s)
                - k / sys.alpha * (ddrag * s - (sys.mtilde + drag) * co) / (s * s);
            dc + sys.coupling(k, theta) * sys.coupling(-k, theta) + lam * lam
        }
    };
    d2 + co / s * d1 + potential * y0
}

/// Stencil values of one side around `centre`.
fn stencil_from(sys: &System, cfg: &ShootingConfig, north: bool, centre: f64) -> Result<[[f64; 2]; 3]> {
    let dir = if north { 1.0 } else { -1.0 };
    let side = integrate_side(sys, cfg, north, centre, false)?;
    let rhs = |t: f64, y: &[f64; 2]| sys.rhs(t, y);
    let (beyond, _) = dopri_step(&rhs, centre, &side.at, dir * FD_STEP);
    // ordered by increasing θ
    Ok(if north {
        [side.near, side.at, beyond]
    } else {
        [beyond, side.at, side.near]
    })
}

/// Residual of the printed second-order equation for component `q.k` on
/// the glued shooting solution, relative to the largest sampled `|ψ_k|`.
/// Stencils span the interior and the matching angle, where the glue of a
/// non-eigenvalue shows up as a slope jump.
pub fn eigenfunction_residual(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    lambda: f64,
) -> Result<f64> {
    eigenfunction_residual_with(q, p, f, c, lambda, SecondOrderForm::Printed)
}

pub fn eigenfunction_residual_with(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    lambda: f64,
    form: SecondOrderForm,
) -> Result<f64> {
    let cfg = ShootingConfig::default();
    let sys = System::new(q, p, f, c, lambda);
    let comp = match q.k {
        KPoint::Plus => 0,
        KPoint::Minus => 1,
    };
    let k = q.k.sign();
    let tm = cfg.match_angle;

    let left = integrate_side(&sys, &cfg, true, tm, false)?;
    let right = integrate_side(&sys, &cfg, false, tm, false)?;
    // scale the right piece so component k is continuous
    let other = 1 - comp;
    let scale = if right.at[comp].abs() > 1e-10 * right.at[other].abs() {
        left.at[comp] / right.at[comp]
    } else {
        left.at[other] / right.at[other]
    };

    let mut stencils: Vec<(f64, [f64; 3])> = Vec::new();
    stencils.push((tm, [left.near[comp], left.at[comp], scale * right.near[comp]]));
    for i in 1..=9 {
        let theta = 0.4 + (PI - 0.8) * i as f64 / 10.0;
        if (theta - tm).abs() < 0.1 {
            continue;
        }
        let north = theta < tm;
        let st = stencil_from(&sys, &cfg, north, theta)?;
        let s = if north { 1.0 } else { scale };
        stencils.push((theta, [s * st[0][comp], s * st[1][comp], s * st[2][comp]]));
    }

    let peak = stencils
        .iter()
        .flat_map(|(_, v)| v.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let worst = stencils
        .iter()
        .map(|&(theta, v)| second_order_operator(&sys, form, k, theta, v, FD_STEP).abs())
        .fold(0.0f64, f64::max);
    Ok(if peak > 0.0 { worst / peak } else { worst })
}
