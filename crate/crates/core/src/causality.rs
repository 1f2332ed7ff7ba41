//! Causal structure of the cylindrical Gödel-type family
//!
//! ```text
//! ds² = -[dt + H(r) dφ]² + D²(r) dφ² + dr² + dz²
//! H = (Ω/l²) sinh²(lr),  D = sinh(2lr)/(2l)
//! ```
//!
//! Closed timelike curves live where `G = D² - H²` is negative.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GodelClassParams {
    /// Vorticity, strictly positive.
    pub omega: f64,
    /// `l²`, any sign.
    pub l2: f64,
}

impl GodelClassParams {
    pub fn new(omega: f64, l2: f64) -> Result<Self> {
        let gp = Self { omega, l2 };
        gp.validate()?;
        Ok(gp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParameter {
                name: "Omega",
                reason: format!("must be positive, got {}", self.omega),
            });
        }
        if !self.l2.is_finite() {
            return Err(Error::InvalidParameter {
                name: "l2",
                reason: format!("must be finite, got {}", self.l2),
            });
        }
        Ok(())
    }

    /// The original rotating solution, `l² = Ω²/2`.
    pub fn godel(omega: f64) -> Self {
        Self {
            omega,
            l2: 0.5 * omega * omega,
        }
    }

    /// `√|l²|`.
    pub fn l_abs(&self) -> f64 {
        self.l2.abs().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    NoCTC,
    AlternatingRegions,
    OneNoncausalRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureClass {
    Flat,
    Spherical,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausalitySample {
    pub r: f64,
    pub h: f64,
    pub d: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalityReport {
    pub params: GodelClassParams,
    pub causal_class: CausalClass,
    pub curvature_class: CurvatureClass,
    pub r_max: f64,
    /// Sign changes of `G` in `(0, r_max]`, ascending.
    pub critical_radii: Vec<f64>,
    pub samples: Vec<CausalitySample>,
}

/// `(H(r), D(r))`. For `l² < 0` the continuation is written with real
/// trigonometric functions, `H = Ω sin²(Lr)/L²` and `D = sin(2Lr)/(2L)`
/// where `L² = -l²`.
pub fn metric_functions(gp: &GodelClassParams, r: f64) -> (f64, f64) {
    let w = gp.omega;
    if gp.l2 > 0.0 {
        let l = gp.l2.sqrt();
        let s = (l * r).sinh();
        (w * s * s / gp.l2, (2.0 * l * r).sinh() / (2.0 * l))
    } else if gp.l2 < 0.0 {
        let l = (-gp.l2).sqrt();
        let s = (l * r).sin();
        (w * s * s / (-gp.l2), (2.0 * l * r).sin() / (2.0 * l))
    } else {
        (w * r * r, r)
    }
}

/// `(H', D')` in closed form.
fn metric_derivatives(gp: &GodelClassParams, r: f64) -> (f64, f64) {
    let w = gp.omega;
    if gp.l2 > 0.0 {
        let l = gp.l2.sqrt();
        ((2.0 * l * r).sinh() * w / l, (2.0 * l * r).cosh())
    } else if gp.l2 < 0.0 {
        let l = (-gp.l2).sqrt();
        ((2.0 * l * r).sin() * w / l, (2.0 * l * r).cos())
    } else {
        (2.0 * w * r, 1.0)
    }
}

/// `G = D² - H²`, evaluated as `(D - H)(D + H)`.
pub fn g_function(gp: &GodelClassParams, r: f64) -> f64 {
    let (h, d) = metric_functions(gp, r);
    (d - h) * (d + h)
}

fn g_derivative(gp: &GodelClassParams, r: f64) -> f64 {
    let (h, d) = metric_functions(gp, r);
    let (dh, dd) = metric_derivatives(gp, r);
    2.0 * (d * dd - h * dh)
}

pub fn causal_class(gp: &GodelClassParams) -> CausalClass {
    if gp.l2 >= gp.omega * gp.omega {
        CausalClass::NoCTC
    } else if gp.l2 < 0.0 {
        CausalClass::AlternatingRegions
    } else {
        CausalClass::OneNoncausalRegion
    }
}

pub fn curvature_class(gp: &GodelClassParams) -> CurvatureClass {
    if gp.l2 == 0.0 {
        CurvatureClass::Flat
    } else if gp.l2 < 0.0 {
        CurvatureClass::Spherical
    } else {
        CurvatureClass::Hyperbolic
    }
}

/// Closed-form boundary of the single non-causal region, `tanh(lr) = l/Ω`
/// (or `r = 1/Ω` when `l = 0`).
pub fn single_region_radius(gp: &GodelClassParams) -> Option<f64> {
    if causal_class(gp) != CausalClass::OneNoncausalRegion {
        return None;
    }
    if gp.l2 == 0.0 {
        return Some(1.0 / gp.omega);
    }
    let l = gp.l2.sqrt();
    Some((l / gp.omega).atanh() / l)
}

/// Default search range: three trigonometric periods for `l² < 0`,
/// otherwise three times the CTC boundary (or `3/l` when there is none).
pub fn default_range(gp: &GodelClassParams) -> f64 {
    match causal_class(gp) {
        CausalClass::AlternatingRegions => 3.0 * PI / gp.l_abs(),
        CausalClass::OneNoncausalRegion => 3.0 * single_region_radius(gp).unwrap_or(1.0 / gp.omega),
        CausalClass::NoCTC => 3.0 / gp.l_abs(),
    }
}

const ROOT_GRID: usize = 4096;

/// Bisection on a sign change of `G`, then one Newton step kept only when
/// it lowers `|G|`.
fn refine_root(gp: &GodelClassParams, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g_function(gp, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g_function(gp, mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let r = if g_function(gp, lo).abs() <= g_function(gp, hi).abs() {
        lo
    } else {
        hi
    };
    let dg = g_derivative(gp, r);
    if dg != 0.0 {
        let polished = r - g_function(gp, r) / dg;
        if g_function(gp, polished).abs() < g_function(gp, r).abs() {
            return polished;
        }
    }
    r
}

/// Sign changes of `G` on `(0, r_max]`.
pub fn critical_radii(gp: &GodelClassParams, r_max: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    // G vanishes quadratically at r = 0; start just off the origin
    let r0 = r_max * 1e-9;
    let step = (r_max - r0) / ROOT_GRID as f64;
    let mut prev_r = r0;
    let mut prev_g = g_function(gp, r0);
    for i in 1..=ROOT_GRID {
        let r = r0 + step * i as f64;
        let g = g_function(gp, r);
        if g == 0.0 {
            // exact hit; keep it only if the sign flips across it
            let after = g_function(gp, r + 0.5 * step);
            if after.signum() != prev_g.signum() && prev_g != 0.0 {
                roots.push(r);
            }
        } else if prev_g != 0.0 && g.signum() != prev_g.signum() {
            roots.push(refine_root(gp, prev_r, r));
        }
        if g != 0.0 {
            prev_g = g;
        }
        prev_r = r;
    }
    roots
}

pub fn classify(gp: &GodelClassParams) -> Result<CausalityReport> {
    classify_within(gp, default_range(gp), 64)
}

/// Classification with an explicit search range and sample count.
pub fn classify_within(gp: &GodelClassParams, r_max: f64, samples: usize) -> Result<CausalityReport> {
    gp.validate()?;
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r_max",
            reason: format!("must be positive, got {r_max}"),
        });
    }
    let table = (0..samples)
        .map(|i| {
            let r = r_max * i as f64 / (samples.max(2) - 1) as f64;
            let (h, d) = metric_functions(gp, r);
            CausalitySample {
                r,
                h,
                d,
                g: g_function(gp, r),
            }
        })
        .collect();
    Ok(CausalityReport {
        params: *gp,
        causal_class: causal_class(gp),
        curvature_class: curvature_class(gp),
        r_max,
        critical_radii: critical_radii(gp, r_max),
        samples: table,
    })
}

/// `(R, θ)` on the sphere that carries the `l² < 0` metric: `R = 1/(2L)`,
/// `θ = r/R`.
pub fn spherical_chart(gp: &GodelClassParams, r: f64) -> Option<(f64, f64)> {
    if gp.l2 >= 0.0 {
        return None;
    }
    let big_r = 0.5 / gp.l_abs();
    Some((big_r, r / big_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{metric_at, GeometryParams};
    use approx::assert_abs_diff_eq;

    #[test]
    fn flat_limit_functions() {
        let gp = GodelClassParams::new(0.7, 0.0).unwrap();
        for r in [0.0, 0.3, 2.0] {
            let (h, d) = metric_functions(&gp, r);
            assert_eq!(h, 0.7 * r * r);
            assert_eq!(d, r);
        }
        assert_eq!(metric_functions(&GodelClassParams::godel(1.0), 0.0), (0.0, 0.0));
        assert_eq!(g_function(&GodelClassParams::godel(1.0), 0.0), 0.0);
    }

    #[test]
    fn small_radius_series() {
        let gp = GodelClassParams::godel(1.3);
        let r: f64 = 1e-4;
        let (h, d) = metric_functions(&gp, r);
        assert!((h / (1.3 * r * r) - 1.0).abs() < 1e-8);
        assert!((d / r - 1.0).abs() < 1e-8);
    }

    #[test]
    fn godel_radius() {
        let gp = GodelClassParams::godel(1.0);
        let rep = classify(&gp).unwrap();
        assert_eq!(rep.causal_class, CausalClass::OneNoncausalRegion);
        assert_eq!(rep.curvature_class, CurvatureClass::Hyperbolic);
        assert_eq!(rep.critical_radii.len(), 1);
        let l = gp.l2.sqrt();
        assert_abs_diff_eq!(l * rep.critical_radii[0], 0.881373587019543, epsilon = 1e-10);
        assert!(g_function(&gp, rep.critical_radii[0]).abs() < 1e-12);
    }

    #[test]
    fn no_ctc_and_alternating() {
        let rep = classify(&GodelClassParams::new(1.0, 2.0).unwrap()).unwrap();
        assert_eq!(rep.causal_class, CausalClass::NoCTC);
        assert!(rep.critical_radii.is_empty());
        let gp = GodelClassParams::new(1.0, -1.0).unwrap();
        let rep = classify(&gp).unwrap();
        assert_eq!(rep.causal_class, CausalClass::AlternatingRegions);
        assert_eq!(rep.curvature_class, CurvatureClass::Spherical);
        // Lr = kπ ± atan(L/Ω) with L = Ω = 1
        let want: Vec<f64> = (0..3)
            .flat_map(|k| [k as f64 * PI + PI / 4.0, (k + 1) as f64 * PI - PI / 4.0])
            .collect();
        assert_eq!(rep.critical_radii.len(), want.len());
        for (r, w) in rep.critical_radii.iter().zip(&want) {
            assert_abs_diff_eq!(*r, *w, epsilon = 1e-10);
            assert!(g_function(&gp, *r).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_boundary() {
        let gp = GodelClassParams::new(2.0, 0.0).unwrap();
        let rep = classify(&gp).unwrap();
        assert_eq!(rep.curvature_class, CurvatureClass::Flat);
        assert_eq!(rep.critical_radii.len(), 1);
        assert_abs_diff_eq!(rep.critical_radii[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn homogeneity_conditions() {
        let h = 1e-4;
        for gp in [
            GodelClassParams::new(1.1, 0.4).unwrap(),
            GodelClassParams::new(0.6, 0.0).unwrap(),
            GodelClassParams::new(0.9, -0.7).unwrap(),
        ] {
            for r in [0.3, 0.8, 1.4] {
                let (hp, dp) = metric_functions(&gp, r + h);
                let (hm, dm) = metric_functions(&gp, r - h);
                let (_, d0) = metric_functions(&gp, r);
                let h1 = (hp - hm) / (2.0 * h);
                let d2 = (dp - 2.0 * d0 + dm) / (h * h);
                assert!((h1 / (2.0 * d0) - gp.omega).abs() < 1e-8);
                assert!((d2 / (4.0 * d0) - gp.l2).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn spherical_chart_matches_rotating_sphere() {
        let gp = GodelClassParams::new(0.3, -0.8).unwrap();
        for r in [0.2, 0.9, 1.5] {
            let (big_r, theta) = spherical_chart(&gp, r).unwrap();
            let p = GeometryParams::new(1.0, gp.omega, big_r).unwrap();
            let m = metric_at(&p, theta).unwrap();
            let (h, d) = metric_functions(&gp, r);
            assert_abs_diff_eq!(m.g[(0, 2)], -h, epsilon = 1e-10);
            assert_abs_diff_eq!(m.g[(2, 2)], d * d - h * h, epsilon = 1e-10);
            // dr² = R² dθ²
            assert_abs_diff_eq!(m.g[(1, 1)], big_r * big_r, epsilon = 1e-12);
        }
        assert!(spherical_chart(&GodelClassParams::godel(1.0), 1.0).is_none());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GodelClassParams::new(0.0, 1.0).is_err());
        assert!(GodelClassParams::new(1.0, f64::NAN).is_err());
    }
}
