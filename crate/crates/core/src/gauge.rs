//! Fictitious monopole replacing the conical singularities, its K-space
//! diagonalization, and the Aharonov–Bohm string potential.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Coefficient of σ₃ in the frame holonomy around one pentagonal defect.
pub const DISCLINATION_FRAME_HOLONOMY: f64 = -PI / 6.0;

/// Coefficient of τ₂ in the K-spin holonomy around one pentagonal defect.
pub const KSPIN_HOLONOMY: f64 = PI / 2.0;

/// Number of conical singularities of the truncated icosahedron.
pub const C60_DEFECTS: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonopoleConfig {
    /// Count of conical singularities.
    pub defects: u64,
}

impl MonopoleConfig {
    pub fn c60() -> Self {
        Self { defects: C60_DEFECTS }
    }

    /// Monopole charge `N/8`. Exact for `N ≤ 2⁵³`.
    pub fn charge(&self) -> f64 {
        self.defects as f64 / 8.0
    }
}

/// Monopole charge from summing the K-spin fluxes of `n` defects.
pub fn monopole_charge(n: i64) -> Result<MonopoleConfig> {
    if n < 0 {
        return Err(Error::InvalidParameter {
            name: "defects",
            reason: format!("count must be non-negative, got {n}"),
        });
    }
    Ok(MonopoleConfig { defects: n as u64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FluxConfig {
    /// Flux of the string threading the poles.
    pub phi_b: f64,
}

impl FluxConfig {
    pub fn new(phi_b: f64) -> Self {
        Self { phi_b }
    }

    /// `Φ_B / 2π`.
    pub fn phi_frac(&self) -> f64 {
        self.phi_b / (2.0 * PI)
    }
}

/// Diagonal K-spin label after rotating τ₂ to diagonal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KPoint {
    Plus,
    Minus,
}

impl KPoint {
    pub fn sign(self) -> f64 {
        match self {
            KPoint::Plus => 1.0,
            KPoint::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            KPoint::Plus => KPoint::Minus,
            KPoint::Minus => KPoint::Plus,
        }
    }

    pub fn from_sign(k: i32) -> Result<Self> {
        match k {
            1 => Ok(KPoint::Plus),
            -1 => Ok(KPoint::Minus),
            _ => Err(Error::InvalidParameter {
                name: "k",
                reason: format!("must be +1 or -1, got {k}"),
            }),
        }
    }
}

/// Diagonalized monopole potential `A_φ^k = k g cosθ`.
pub fn monopole_potential(c: &MonopoleConfig, k: KPoint, theta: f64) -> f64 {
    k.sign() * c.charge() * theta.cos()
}

/// `∮ A_φ^k dφ` around the circle of constant polar angle `theta`.
pub fn monopole_holonomy(c: &MonopoleConfig, k: KPoint, theta: f64) -> f64 {
    2.0 * PI * monopole_potential(c, k, theta)
}

/// `A_φ = Φ_B / 2π`, independent of θ.
pub fn ab_potential(f: &FluxConfig) -> f64 {
    f.phi_frac()
}

/// Second Pauli matrix acting on the K± doublet.
pub fn tau2() -> Matrix2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    Matrix2::new(o, -i, i, o)
}

/// `U = (1/√2) [[1, 1], [i, -i]]`, with `U† τ₂ U = diag(+1, -1)`.
pub fn diagonalizing_rotation() -> Matrix2<Complex64> {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let is = Complex64::new(0.0, FRAC_1_SQRT_2);
    Matrix2::new(s, s, is, -is)
}
