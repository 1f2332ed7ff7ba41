//! Closed-form eigenvalue machinery.
//!
//! Everything is expressed through the dimensionless eigenvalue
//! `λ = εR/ħ` (with `v_F` folded into the energy scale). The quantization
//! polynomial is
//!
//! ```text
//! Q(λ) = (1 - 8Ω²) λ² - 2Ω [1 + (2/α)(m̃ + g)] λ - A² + g²/α²
//! ```
//!
//! with `m̃ = m - Φ_B/2π` and `A = n + |m̃|/α + 1/2`. Its two roots, found by
//! [`solve_spectrum`], are the authoritative spectrum. [`printed_spectrum`]
//! keeps the published closed form (whose discriminant carries `2B²Ω²`
//! instead of `4B²Ω²`) for comparison only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gauge::{FluxConfig, KPoint, MonopoleConfig};
use crate::geometry::GeometryParams;

/// Angular quantum number stored as `2m` so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwiceM(pub i32);

impl TwiceM {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_half_integer(self) -> bool {
        self.0 % 2 != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    /// Truncation index of the hypergeometric series.
    pub n: u32,
    pub m: TwiceM,
    pub k: KPoint,
}

impl QuantumNumbers {
    pub fn new(n: u32, twice_m: i32, k: KPoint) -> Self {
        Self {
            n,
            m: TwiceM(twice_m),
            k,
        }
    }

    pub fn m(&self) -> f64 {
        self.m.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Flux-shifted angular combinations entering the quantization condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedAngular {
    /// `m - Φ_B/2π`
    pub mtilde: f64,
    /// `n + |m̃|/α + 1/2`
    pub a: f64,
    /// `(m̃ + g)/α + 1/2`
    pub b: f64,
}

impl ReducedAngular {
    pub fn new(q: &QuantumNumbers, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig) -> Self {
        let mtilde = q.m() - f.phi_frac();
        Self {
            mtilde,
            a: q.n as f64 + mtilde.abs() / p.alpha + 0.5,
            b: (mtilde + c.charge()) / p.alpha + 0.5,
        }
    }
}

/// Exponents `C±` of the `x^{C+} (1-x)^{C-}` factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzExponents {
    pub c_plus: f64,
    pub c_minus: f64,
}

pub fn ansatz_exponents(q: &QuantumNumbers, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig) -> AnsatzExponents {
    let g = c.charge();
    let mt = q.m() - f.phi_frac();
    let base = mt / p.alpha;
    let spin = 0.5 * (q.k.sign() + 2.0 * g / p.alpha);
    let rot = p.omega / (2.0 * p.alpha) * (mt + g);
    AnsatzExponents {
        c_plus: 0.5 * (base + spin - rot).abs(),
        c_minus: 0.5 * (base - spin + rot).abs(),
    }
}

/// Coefficients `(a, b, c)` of `Q(λ) = aλ² + bλ + c`.
fn quadratic(q: &QuantumNumbers, p: &GeometryParams, f: &FluxConfig, c: &MonopoleConfig) -> [f64; 3] {
    let r = ReducedAngular::new(q, p, f, c);
    let g_a = c.charge() / p.alpha;
    [p.rotation_factor(), -4.0 * p.omega * r.b, g_a * g_a - r.a * r.a]
}

/// `Q(λ)`; vanishes on the spectrum.
pub fn quantization_residual(
    lambda: f64,
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> f64 {
    let [a, b, cc] = quadratic(q, p, f, c);
    (a * lambda + b) * lambda + cc
}

fn quantization_residual_complex(lambda: Complex64, coeffs: [f64; 3]) -> f64 {
    let [a, b, c] = coeffs;
    ((lambda * a + b) * lambda + c).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumResult {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
    /// Reduced discriminant `b²/4 - ac` of `Q`.
    pub discriminant: f64,
    /// Real roots and `1 - 8Ω² > 0`.
    pub valid: bool,
    pub residual_plus: f64,
    pub residual_minus: f64,
}

impl SpectrumResult {
    fn assemble(lp: Complex64, lm: Complex64, disc: f64, p: &GeometryParams, coeffs: [f64; 3]) -> Self {
        let scale = p.energy_scale();
        Self {
            lambda_plus: lp,
            lambda_minus: lm,
            eps_plus: lp * scale,
            eps_minus: lm * scale,
            discriminant: disc,
            valid: disc >= 0.0 && p.rotation_regular(),
            residual_plus: quantization_residual_complex(lp, coeffs),
            residual_minus: quantization_residual_complex(lm, coeffs),
        }
    }

    pub fn is_complex(&self) -> bool {
        self.discriminant < 0.0
    }

    pub fn lambda(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Plus => self.lambda_plus,
            Branch::Minus => self.lambda_minus,
        }
    }

    pub fn eps(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Plus => self.eps_plus,
            Branch::Minus => self.eps_minus,
        }
    }
}

fn require_nondegenerate(p: &GeometryParams) -> Result<()> {
    if p.rotation_factor().abs() <= 4.0 * f64::EPSILON {
        Err(Error::RotationSingular { omega: p.omega })
    } else {
        Ok(())
    }
}

/// Roots of `Q(λ) = 0`. The larger-magnitude root is formed first and the
/// other one recovered from the product of roots.
pub fn solve_spectrum(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<SpectrumResult> {
    require_nondegenerate(p)?;
    let coeffs = quadratic(q, p, f, c);
    let [a, b, cc] = coeffs;
    let half_b = 0.5 * b;
    let disc = half_b * half_b - a * cc;

    let (lp, lm) = if disc >= 0.0 && half_b == 0.0 {
        let s = disc.sqrt() / a.abs();
        (Complex64::from(s), Complex64::from(-s))
    } else if disc >= 0.0 {
        let s = disc.sqrt();
        let big = -(half_b + s.copysign(if half_b == 0.0 { 1.0 } else { half_b }));
        let (r1, r2) = if big == 0.0 { (0.0, 0.0) } else { (big / a, cc / big) };
        (Complex64::from(r1.max(r2)), Complex64::from(r1.min(r2)))
    } else {
        let re = -half_b / a;
        let im = (-disc).sqrt() / a.abs();
        (Complex64::new(re, im), Complex64::new(re, -im))
    };
    Ok(SpectrumResult::assemble(lp, lm, disc, p, coeffs))
}

/// The published closed form, kept verbatim:
///
/// `ε = ħ/(2R(1-8Ω²)) {4ΩB ± 2√(2B²Ω² - (1-8Ω²)(g²/α² - A²))}`.
pub fn printed_spectrum(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<SpectrumResult> {
    require_nondegenerate(p)?;
    let r = ReducedAngular::new(q, p, f, c);
    let g_a = c.charge() / p.alpha;
    let a = p.rotation_factor();
    let w = p.omega;
    let disc = 2.0 * r.b * r.b * w * w - a * (g_a * g_a - r.a * r.a);
    let root = Complex64::from(disc).sqrt();
    let lp = (root * 2.0 + 4.0 * w * r.b) / (2.0 * a);
    let lm = (-root * 2.0 + 4.0 * w * r.b) / (2.0 * a);
    Ok(SpectrumResult::assemble(lp, lm, disc, p, quadratic(q, p, f, c)))
}

/// First-order expansion in Ω: `ε = ħ/(2R) {4ΩB ± 2√(A² - g²/α²)}`.
pub fn slow_rotation_spectrum(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> SpectrumResult {
    let r = ReducedAngular::new(q, p, f, c);
    let g_a = c.charge() / p.alpha;
    let disc = r.a * r.a - g_a * g_a;
    let root = Complex64::from(disc).sqrt();
    let shift = 2.0 * p.omega * r.b;
    let lp = root + shift;
    let lm = -root + shift;
    let mut out = SpectrumResult::assemble(lp, lm, disc, p, quadratic(q, p, f, c));
    out.valid = disc >= 0.0;
    out
}

/// `∂ε/∂Φ_B` of each branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxDerivative {
    Smooth {
        plus: f64,
        minus: f64,
    },
    /// At `m̃ = 0` the `|m̃|` kink makes the derivative one-sided.
    Cusp {
        left: (f64, f64),
        right: (f64, f64),
    },
}

impl FluxDerivative {
    pub fn branch(&self, branch: Branch) -> Option<f64> {
        match (self, branch) {
            (FluxDerivative::Smooth { plus, .. }, Branch::Plus) => Some(*plus),
            (FluxDerivative::Smooth { minus, .. }, Branch::Minus) => Some(*minus),
            _ => None,
        }
    }
}

/// Implicit differentiation of `Q(λ(Φ_B), Φ_B) = 0` at the authoritative roots.
pub fn spectrum_flux_derivative(
    q: &QuantumNumbers,
    p: &GeometryParams,
    f: &FluxConfig,
    c: &MonopoleConfig,
) -> Result<FluxDerivative> {
    let s = solve_spectrum(q, p, f, c)?;
    if !s.valid {
        return Err(Error::InvalidParameter {
            name: "spectrum",
            reason: format!("no real spectrum for {q:?} (discriminant {})", s.discriminant),
        });
    }
    let r = ReducedAngular::new(q, p, f, c);
    let a_coef = p.rotation_factor();
    let dm_dphi = -1.0 / (2.0 * PI);
    let scale = p.energy_scale();
    let d = |lambda: f64, sign_m: f64| {
        let dq_dm = -4.0 * p.omega * lambda / p.alpha - 2.0 * r.a * sign_m / p.alpha;
        let dq_dl = 2.0 * a_coef * lambda - 4.0 * p.omega * r.b;
        -(dq_dm * dm_dphi) / dq_dl * scale
    };
    let lp = s.lambda_plus.re;
    let lm = s.lambda_minus.re;
    if r.mtilde == 0.0 {
        // Φ_B below the kink has m̃ > 0.
        Ok(FluxDerivative::Cusp {
            left: (d(lp, 1.0), d(lm, 1.0)),
            right: (d(lp, -1.0), d(lm, -1.0)),
        })
    } else {
        let sm = r.mtilde.signum();
        Ok(FluxDerivative::Smooth {
            plus: d(lp, sm),
            minus: d(lm, sm),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(alpha: f64, omega: f64) -> GeometryParams {
        GeometryParams::new(alpha, omega, 1.0).unwrap()
    }

    #[test]
    fn exponents() {
        let q = QuantumNumbers::new(0, 1, KPoint::Plus);
        let e = ansatz_exponents(&q, &params(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig::c60());
        assert_abs_diff_eq!(e.c_plus, 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(e.c_minus, 0.75, epsilon = 1e-15);

        let q = QuantumNumbers::new(0, 0, KPoint::Plus);
        let e = ansatz_exponents(
            &q,
            &params(1.0, 0.0),
            &FluxConfig::new(0.0),
            &MonopoleConfig { defects: 0 },
        );
        assert_abs_diff_eq!(e.c_plus, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(e.c_minus, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn exponents_swap_with_k_at_rest() {
        let p = params(0.9, 0.0);
        let f = FluxConfig::new(0.7);
        let c = MonopoleConfig::c60();
        for tm in [-5, -1, 1, 3] {
            let ep = ansatz_exponents(&QuantumNumbers::new(1, tm, KPoint::Plus), &p, &f, &c);
            let em = ansatz_exponents(&QuantumNumbers::new(1, tm, KPoint::Minus), &p, &f, &c);
            // k → -k flips the sign of the k-term only
            let mt = tm as f64 / 2.0 - f.phi_frac();
            let g = c.charge() / p.alpha;
            assert_abs_diff_eq!(
                em.c_plus,
                0.5 * (mt / p.alpha + 0.5 * (-1.0 + 2.0 * g)).abs(),
                epsilon = 1e-15
            );
            assert!(ep.c_plus >= 0.0 && ep.c_minus >= 0.0);
        }
    }

    #[test]
    fn residual_roots() {
        let free = MonopoleConfig { defects: 0 };
        let q = QuantumNumbers::new(2, 3, KPoint::Plus);
        let r = quantization_residual(2.0 + 1.5 + 0.5, &q, &params(1.0, 0.0), &FluxConfig::new(0.0), &free);
        assert_eq!(r, 0.0);
        let q = QuantumNumbers::new(1, 1, KPoint::Plus);
        let r = quantization_residual(
            1.75f64.sqrt(),
            &q,
            &params(1.0, 0.0),
            &FluxConfig::new(0.0),
            &MonopoleConfig::c60(),
        );
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn inertial_c60_level() {
        let q = QuantumNumbers::new(1, 1, KPoint::Plus);
        let s = solve_spectrum(&q, &params(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig::c60()).unwrap();
        assert!(s.valid);
        assert_abs_diff_eq!(s.eps_plus.re, 1.3228756555322954, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eps_minus.re, -1.3228756555322954, epsilon = 1e-14);
        assert_eq!(s.eps_plus.re, -s.eps_minus.re);
    }

    #[test]
    fn sub_gap_is_flagged() {
        let q = QuantumNumbers::new(0, 1, KPoint::Plus);
        let s = solve_spectrum(&q, &params(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig::c60()).unwrap();
        assert!(!s.valid);
        assert!(s.is_complex());
        assert!(s.discriminant < 0.0);
        assert!(s.residual_plus < 1e-12);
    }

    #[test]
    fn degenerate_rotation_rejected() {
        let p = GeometryParams {
            omega: (1.0f64 / 8.0).sqrt(),
            ..GeometryParams::default()
        };
        {
            let q = QuantumNumbers::new(1, 1, KPoint::Plus);
            assert!(matches!(
                solve_spectrum(&q, &p, &FluxConfig::new(0.0), &MonopoleConfig::c60()),
                Err(Error::RotationSingular { .. })
            ));
        }
    }

    #[test]
    fn rotation_beyond_limit_is_invalid() {
        let q = QuantumNumbers::new(1, 1, KPoint::Plus);
        let s = solve_spectrum(
            &q,
            &params(1.0, 0.4),
            &FluxConfig::new(0.0),
            &MonopoleConfig { defects: 0 },
        )
        .unwrap();
        assert!(!s.valid);
    }

    #[test]
    fn printed_matches_at_rest_and_differs_when_rotating() {
        let q = QuantumNumbers::new(1, 1, KPoint::Plus);
        let c = MonopoleConfig::c60();
        let f = FluxConfig::new(0.0);
        let a = solve_spectrum(&q, &params(1.0, 0.0), &f, &c).unwrap();
        let b = printed_spectrum(&q, &params(1.0, 0.0), &f, &c).unwrap();
        assert_abs_diff_eq!(a.lambda_plus.re, b.lambda_plus.re, epsilon = 1e-14);
        let b = printed_spectrum(&q, &params(1.0, 0.1), &f, &c).unwrap();
        assert!(b.residual_plus > 1e-3, "{}", b.residual_plus);
    }

    #[test]
    fn slow_rotation_at_rest() {
        let q = QuantumNumbers::new(2, -3, KPoint::Minus);
        let p = params(0.8, 0.0);
        let f = FluxConfig::new(0.4);
        let c = MonopoleConfig::c60();
        let a = solve_spectrum(&q, &p, &f, &c).unwrap();
        let b = slow_rotation_spectrum(&q, &p, &f, &c);
        assert_abs_diff_eq!(a.lambda_plus.re, b.lambda_plus.re, epsilon = 1e-14);
        assert_abs_diff_eq!(a.lambda_minus.re, b.lambda_minus.re, epsilon = 1e-14);
    }

    #[test]
    fn slow_rotation_linear_term() {
        let q = QuantumNumbers::new(1, 3, KPoint::Plus);
        let p = params(1.0, 0.01);
        let f = FluxConfig::new(0.0);
        let c = MonopoleConfig::c60();
        let s = slow_rotation_spectrum(&q, &p, &f, &c);
        let shift = 0.5 * (s.eps_plus.re + s.eps_minus.re);
        let r = ReducedAngular::new(&q, &p, &f, &c);
        assert_abs_diff_eq!(
            shift,
            2.0 * p.omega * ((r.mtilde + 1.5) / p.alpha + 0.5),
            epsilon = 1e-15
        );
    }

    #[test]
    fn flux_derivative_inertial_free() {
        let q = QuantumNumbers::new(1, 1, KPoint::Plus);
        let p = params(1.0, 0.0);
        let c = MonopoleConfig { defects: 0 };
        let d = spectrum_flux_derivative(&q, &p, &FluxConfig::new(0.3), &c).unwrap();
        assert_abs_diff_eq!(d.branch(Branch::Plus).unwrap(), -1.0 / (2.0 * PI), epsilon = 1e-15);

        let q = QuantumNumbers::new(1, 0, KPoint::Plus);
        match spectrum_flux_derivative(&q, &p, &FluxConfig::new(0.0), &c).unwrap() {
            FluxDerivative::Cusp { left, right } => {
                assert_abs_diff_eq!(right.0 - left.0, 1.0 / PI, epsilon = 1e-15);
            }
            other => panic!("expected cusp, got {other:?}"),
        }
    }

    #[test]
    fn flux_derivative_invalid_spectrum() {
        let q = QuantumNumbers::new(0, 1, KPoint::Plus);
        assert!(
            spectrum_flux_derivative(&q, &params(1.0, 0.0), &FluxConfig::new(0.0), &MonopoleConfig::c60()).is_err()
        );
    }
}
