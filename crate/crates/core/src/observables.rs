//! Zero-temperature persistent current `I = -Σ ∂ε/∂Φ_B` over an explicit
//! set of occupied levels, in three forms that cross-check each other.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauge::{FluxConfig, KPoint, MonopoleConfig};
use crate::geometry::GeometryParams;
use crate::spectrum::{
    solve_spectrum, spectrum_flux_derivative, Branch, FluxDerivative, QuantumNumbers, ReducedAngular, TwiceM,
};

/// Flux step of the central difference behind `i_fd`.
pub const FD_FLUX_STEP: f64 = 1e-5;

/// Which values of `m` the window enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MLattice {
    #[default]
    HalfInteger,
    Integer,
}

/// Occupied levels: every `n ≤ n_max` and every lattice `m` with
/// `|m| ≤ m_max`, on one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSet {
    pub n_max: u32,
    pub m_max: TwiceM,
    pub lattice: MLattice,
    pub branch: Branch,
    pub skip_invalid: bool,
}

impl Default for LevelSet {
    fn default() -> Self {
        Self {
            n_max: 3,
            m_max: TwiceM(5),
            lattice: MLattice::HalfInteger,
            branch: Branch::Minus,
            skip_invalid: true,
        }
    }
}

impl LevelSet {
    pub fn new(n_max: u32, m_max: TwiceM, branch: Branch) -> Self {
        Self {
            n_max,
            m_max,
            branch,
            ..Self::default()
        }
    }

    /// Allowed `2m` values in ascending order.
    pub fn twice_m_values(&self) -> Vec<i32> {
        let top = self.m_max.0.abs();
        let parity = match self.lattice {
            MLattice::HalfInteger => 1,
            MLattice::Integer => 0,
        };
        (-top..=top).filter(|t| t.rem_euclid(2) == parity).collect()
    }

    /// States in enumeration order: `n` ascending, then `m` ascending.
    pub fn states(&self) -> Vec<QuantumNumbers> {
        let ms = self.twice_m_values();
        (0..=self.n_max)
            .flat_map(|n| ms.iter().map(move |&t| QuantumNumbers::new(n, t, KPoint::Plus)))
            .collect()
    }

    /// Same window shifted by `shift` in `m`, used for flux-period checks.
    pub fn shifted_states(&self, shift: i32) -> Vec<QuantumNumbers> {
        self.states()
            .into_iter()
            .map(|q| QuantumNumbers {
                m: TwiceM(q.m.0 + 2 * shift),
                ..q
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelContribution {
    pub n: u32,
    pub twice_m: i32,
    pub eps: f64,
    /// `∂ε/∂Φ_B`; at a cusp the mean of the one-sided values.
    pub deps_dphi: f64,
    /// `(left, right)` derivatives when `m̃ = 0`.
    pub one_sided: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentResult {
    pub i_analytic: f64,
    pub i_printed: f64,
    pub i_fd: f64,
    pub per_level: Vec<LevelContribution>,
    /// States dropped because their spectrum is complex.
    pub skipped: usize,
    pub warnings: Vec<String>,
}

impl CurrentResult {
    pub fn has_cusp(&self) -> bool {
        self.per_level.iter().any(|l| l.one_sided.is_some())
    }

    pub fn levels_used(&self) -> usize {
        self.per_level.len()
    }
}

fn branch_eps(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
    b: Branch,
) -> Result<Option<f64>> {
    let s = solve_spectrum(q, p, f, c)?;
    Ok(if s.valid { Some(s.eps(b).re) } else { None })
}

/// Per-level term of the published rotating current (without prefactor).
fn printed_term(q: &QuantumNumbers, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig) -> f64 {
    let r = ReducedAngular::new(q, p, f, c);
    let g_a = c.charge() / p.alpha;
    let a = p.rotation_factor();
    let w = p.omega;
    let root = (2.0 * r.b * r.b * w * w - a * (g_a * g_a - r.a * r.a)).sqrt();
    2.0 * w + (a * r.a + 2.0 * w * w * r.b) / root
}

fn prefactor(p: &GeometryParams) -> f64 {
    p.energy_scale() / (2.0 * PI * p.alpha)
}

/// Byers–Yang current of `ls` at flux `f`.
pub fn persistent_current(
    ls: &LevelSet,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<CurrentResult> {
    p.validate()?;
    let states = ls.states();
    let below = FluxConfig::new(f.phi_b - FD_FLUX_STEP);
    let above = FluxConfig::new(f.phi_b + FD_FLUX_STEP);

    type Row = Option<(LevelContribution, f64, f64, f64)>;
    let rows: Vec<Result<Row>> = states
        .par_iter()
        .map(|q| {
            let Some(eps) = branch_eps(q, p, f, c, ls.branch)? else {
                return Ok(None);
            };
            let (Some(lo), Some(hi)) = (
                branch_eps(q, p, &below, c, ls.branch)?,
                branch_eps(q, p, &above, c, ls.branch)?,
            ) else {
                return Ok(None);
            };
            let (deps, one_sided) = match spectrum_flux_derivative(q, p, f, c)? {
                FluxDerivative::Smooth { plus, minus } => (if ls.branch == Branch::Plus { plus } else { minus }, None),
                FluxDerivative::Cusp { left, right } => {
                    let pick = |t: (f64, f64)| if ls.branch == Branch::Plus { t.0 } else { t.1 };
                    let (l, r) = (pick(left), pick(right));
                    (0.5 * (l + r), Some((l, r)))
                }
            };
            let level = LevelContribution {
                n: q.n,
                twice_m: q.m.0,
                eps,
                deps_dphi: deps,
                one_sided,
            };
            Ok(Some((level, lo, hi, printed_term(q, p, f, c))))
        })
        .collect();

    let mut out = CurrentResult {
        i_analytic: 0.0,
        i_printed: 0.0,
        i_fd: 0.0,
        per_level: Vec::with_capacity(states.len()),
        skipped: 0,
        warnings: Vec::new(),
    };
    let (mut e_lo, mut e_hi, mut printed) = (0.0, 0.0, 0.0);
    for (q, row) in states.iter().zip(rows) {
        match row? {
            Some((level, lo, hi, term)) => {
                out.i_analytic -= level.deps_dphi;
                e_lo += lo;
                e_hi += hi;
                printed += term;
                if let Some((l, r)) = level.one_sided {
                    out.warnings
                        .push(format!("cusp at n={} m={}: one-sided dε/dΦ {l:e} / {r:e}", q.n, q.m()));
                }
                out.per_level.push(level);
            }
            None if ls.skip_invalid => {
                out.skipped += 1;
            }
            None => {
                return Err(Error::InvalidParameter {
                    name: "levels",
                    reason: format!("complex spectrum at n={} m={}", q.n, q.m()),
                })
            }
        }
    }
    if out.skipped > 0 {
        out.warnings
            .push(format!("{} states without a real spectrum skipped", out.skipped));
    }
    out.i_fd = -(e_hi - e_lo) / (2.0 * FD_FLUX_STEP);
    out.i_printed = prefactor(p) * printed;
    Ok(out)
}

/// Slow-rotation current: per level `(ħ/2παR)[2Ω + A/√(A² - g²/α²)]`.
/// Levels with `A² ≤ g²/α²` are left out and counted in the second value.
pub fn slow_rotation_current(
    ls: &LevelSet,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<(f64, usize)> {
    p.validate()?;
    let g_a = c.charge() / p.alpha;
    let mut sum = 0.0;
    let mut excluded = 0;
    for q in ls.states() {
        let r = ReducedAngular::new(&q, p, f, c);
        let gap = r.a * r.a - g_a * g_a;
        if gap <= 0.0 {
            excluded += 1;
            continue;
        }
        sum += 2.0 * p.omega + r.a / gap.sqrt();
    }
    Ok((prefactor(p) * sum, excluded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(alpha: f64, omega: f64) -> GeometryParams {
        GeometryParams::new(alpha, omega, 1.0).unwrap()
    }

    #[test]
    fn enumeration_order() {
        let ls = LevelSet::new(1, TwiceM(3), Branch::Minus);
        let s = ls.states();
        let labels: Vec<(u32, i32)> = s.iter().map(|q| (q.n, q.m.0)).collect();
        assert_eq!(
            labels,
            vec![(0, -3), (0, -1), (0, 1), (0, 3), (1, -3), (1, -1), (1, 1), (1, 3)]
        );
        let ls = LevelSet {
            lattice: MLattice::Integer,
            ..LevelSet::new(0, TwiceM(4), Branch::Minus)
        };
        assert_eq!(ls.twice_m_values(), vec![-4, -2, 0, 2, 4]);
    }

    #[test]
    fn single_level_topological_insulator() {
        // ε = (n + |m̃| + 1/2)/R, so -∂ε/∂Φ_B = 1/(2πR) for m̃ > 0
        let ls = LevelSet {
            n_max: 1,
            m_max: TwiceM(1),
            ..LevelSet::new(1, TwiceM(1), Branch::Plus)
        };
        let free = MonopoleConfig { defects: 0 };
        let r = persistent_current(&ls, &p(1.0, 0.0), &FluxConfig::new(0.0), &free).unwrap();
        let only = r.per_level.iter().filter(|l| l.n == 1 && l.twice_m == 1).count();
        assert_eq!(only, 1);
        let lvl = r.per_level.iter().find(|l| l.n == 1 && l.twice_m == 1).unwrap();
        assert_relative_eq!(-lvl.deps_dphi, 1.0 / (2.0 * PI), max_relative = 1e-14);
    }

    #[test]
    fn symmetric_window_cancels_at_zero_flux() {
        let ls = LevelSet::new(3, TwiceM(7), Branch::Minus);
        let r = persistent_current(&ls, &p(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig::c60()).unwrap();
        assert!(r.i_analytic.abs() < 1e-10, "{}", r.i_analytic);
        assert!(r.i_fd.abs() < 1e-10, "{}", r.i_fd);
        assert!(r.skipped > 0);
    }

    #[test]
    fn analytic_matches_finite_difference() {
        let ls = LevelSet::new(3, TwiceM(5), Branch::Minus);
        let r = persistent_current(&ls, &p(0.9, 0.07), &FluxConfig::new(1.3), &MonopoleConfig::c60()).unwrap();
        assert!(!r.has_cusp());
        let rel = (r.i_analytic - r.i_fd).abs() / r.i_fd.abs().max(1.0);
        assert!(rel < 1e-6, "{r:?}");
    }

    #[test]
    fn flux_antisymmetry_at_rest() {
        let ls = LevelSet::new(2, TwiceM(5), Branch::Minus);
        let c = MonopoleConfig::c60();
        let a = persistent_current(&ls, &p(1.0, 0.0), &FluxConfig::new(0.8), &c).unwrap();
        let b = persistent_current(&ls, &p(1.0, 0.0), &FluxConfig::new(-0.8), &c).unwrap();
        assert_relative_eq!(a.i_analytic, -b.i_analytic, max_relative = 1e-12);
    }

    #[test]
    fn cusp_reports_both_sides() {
        let ls = LevelSet {
            lattice: MLattice::Integer,
            ..LevelSet::new(1, TwiceM(2), Branch::Plus)
        };
        let r = persistent_current(&ls, &p(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig { defects: 0 }).unwrap();
        assert!(r.has_cusp());
        assert!(!r.warnings.is_empty());
        let (l, rr) = r.per_level.iter().find_map(|l| l.one_sided).unwrap();
        assert_relative_eq!(l - rr, -1.0 / PI, max_relative = 1e-12);
    }

    #[test]
    fn printed_matches_analytic_on_upper_branch_at_rest() {
        let ls = LevelSet {
            m_max: TwiceM(7),
            ..LevelSet::new(3, TwiceM(7), Branch::Plus)
        };
        // positive-m̃ states only: shift the window by the flux below
        let f = FluxConfig::new(-2.0 * PI * 5.0);
        let r = persistent_current(&ls, &p(1.0, 0.0), &f, &MonopoleConfig::c60()).unwrap();
        assert!(r.skipped == 0);
        assert_relative_eq!(r.i_printed, r.i_analytic, max_relative = 1e-10);
        let (slow, excluded) = slow_rotation_current(&ls, &p(1.0, 0.0), &f, &MonopoleConfig::c60()).unwrap();
        assert_eq!(excluded, 0);
        assert_relative_eq!(slow, r.i_analytic, max_relative = 1e-10);
    }

    #[test]
    fn slow_rotation_linear_term() {
        let ls = LevelSet::new(2, TwiceM(5), Branch::Plus);
        let f = FluxConfig::new(0.0);
        let c = MonopoleConfig::c60();
        let (i0, x0) = slow_rotation_current(&ls, &p(1.0, 0.0), &f, &c).unwrap();
        let (i1, x1) = slow_rotation_current(&ls, &p(1.0, 0.01), &f, &c).unwrap();
        assert_eq!(x0, x1);
        let used = (ls.states().len() - x0) as f64;
        assert_relative_eq!(i1 - i0, 0.01 * used / PI, max_relative = 1e-10);
    }
}
