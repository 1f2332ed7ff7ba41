//! Spherical Gödel-type background: metric, tetrads, connection one-forms
//! and spinorial connections in (2+1) dimensions.
//!
//! Coordinates are always ordered `(t, θ, φ)` and frame indices `(0, 1, 2)`
//! with `η = diag(-1, 1, 1)`.
//!
//! The spinor connection follows `Γ_μ = (i/4) ω_{μab} Σ^{ab}` with
//! `Σ^{ab} = (i/2)[γ^a, γ^b]` and `γ = (-σ₃, σ₁, σ₂)`. That fixes
//! `Σ^{01} = σ₂`, `Σ^{02} = -σ₁`, `Σ^{12} = -σ₃`.

use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Minkowski metric in the local frame.
pub const ETA: [f64; 3] = [-1.0, 1.0, 1.0];

/// Largest finite-difference step accepted by [`maurer_cartan_residual`].
pub const MAX_FD_STEP: f64 = 1e-2;

/// Model configuration for the rotating sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    /// Disclination parameter; `0 < α ≤ 1` removes a sector, `α > 1` inserts one.
    pub alpha: f64,
    /// Angular velocity of the rotating frame.
    pub omega: f64,
    /// Sphere radius.
    pub radius: f64,
    pub hbar: f64,
    /// Fermi velocity.
    pub vf: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            omega: 0.0,
            radius: 1.0,
            hbar: 1.0,
            vf: 1.0,
        }
    }
}

impl GeometryParams {
    pub fn new(alpha: f64, omega: f64, radius: f64) -> Result<Self> {
        let p = Self {
            alpha,
            omega,
            radius,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive and finite, got {}", self.alpha),
            });
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: format!("must be positive and finite, got {}", self.radius),
            });
        }
        if !self.omega.is_finite() {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be finite".into(),
            });
        }
        if !(self.hbar > 0.0 && self.vf > 0.0) {
            return Err(Error::InvalidParameter {
                name: "hbar/vf",
                reason: "scales must be positive".into(),
            });
        }
        Ok(())
    }

    /// `1 - 8Ω²`, the leading coefficient of the quantization polynomial.
    pub fn rotation_factor(&self) -> f64 {
        1.0 - 8.0 * self.omega * self.omega
    }

    pub fn rotation_regular(&self) -> bool {
        self.rotation_factor() > 0.0
    }

    /// Energy unit `ħ v_F / R`; energies are `λ` times this.
    pub fn energy_scale(&self) -> f64 {
        self.hbar * self.vf / self.radius
    }

    /// `4αΩR² sin²(θ/2)`, the t–φ cross term of the line element.
    fn frame_drag(&self, theta: f64) -> f64 {
        let s = (0.5 * theta).sin();
        4.0 * self.alpha * self.omega * self.radius * self.radius * s * s
    }

    fn azimuthal_scale(&self, theta: f64) -> f64 {
        self.alpha * self.radius * theta.sin()
    }
}

fn check_open_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "theta",
            value: theta,
            domain: "(0, pi)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub theta: f64,
    pub phi: f64,
    /// Components `g_μν` in the order `(t, θ, φ)`.
    pub g: Matrix3<f64>,
}

impl MetricSample {
    pub fn is_symmetric(&self) -> bool {
        self.g == self.g.transpose()
    }

    /// Counts of (negative, positive) eigenvalues.
    pub fn signature(&self) -> (usize, usize) {
        let eig = SymmetricEigen::new(self.g).eigenvalues;
        let neg = eig.iter().filter(|v| **v < 0.0).count();
        let pos = eig.iter().filter(|v| **v > 0.0).count();
        (neg, pos)
    }
}

/// Line element at polar angle `theta`. The metric does not depend on φ,
/// so the sample records φ = 0.
pub fn metric_at(p: &GeometryParams, theta: f64) -> Result<MetricSample> {
    check_open_theta(theta)?;
    let f = p.frame_drag(theta);
    let h = p.azimuthal_scale(theta);
    let r2 = p.radius * p.radius;
    #[rustfmt::skip]
    let g = Matrix3::new(
        -1.0, 0.0, -f,
        0.0,  r2,  0.0,
        -f,   0.0, h * h - f * f,
    );
    Ok(MetricSample { theta, phi: 0.0, g })
}

/// Frame `e^a_μ` (rows: frame index, columns: coordinate) and its inverse
/// `e^μ_a` (rows: coordinate, columns: frame index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub e: Matrix3<f64>,
    pub einv: Matrix3<f64>,
}

impl Tetrad {
    /// `η_ab e^a_μ e^b_ν`.
    pub fn induced_metric(&self) -> Matrix3<f64> {
        let eta = Matrix3::from_diagonal(&ETA.into());
        self.e.transpose() * eta * self.e
    }

    /// Largest deviation of `e·einv` and `einv·e` from the identity.
    pub fn inverse_defect(&self) -> f64 {
        let id = Matrix3::identity();
        let a = (self.e * self.einv - id).abs().max();
        let b = (self.einv * self.e - id).abs().max();
        a.max(b)
    }
}

pub fn tetrad_at(p: &GeometryParams, theta: f64) -> Result<Tetrad> {
    if theta == 0.0 || theta == PI || theta.sin() == 0.0 {
        return Err(Error::SingularTetrad { theta });
    }
    check_open_theta(theta)?;
    let f = p.frame_drag(theta);
    let h = p.azimuthal_scale(theta);
    let r = p.radius;
    #[rustfmt::skip]
    let e = Matrix3::new(
        1.0, 0.0, f,
        0.0, r,   0.0,
        0.0, 0.0, h,
    );
    #[rustfmt::skip]
    let einv = Matrix3::new(
        1.0, 0.0,     -f / h,
        0.0, 1.0 / r, 0.0,
        0.0, 0.0,     1.0 / h,
    );
    Ok(Tetrad { e, einv })
}

/// The three independent connection components quoted in closed form.
/// All other components follow from `ω_μ^a_b = -ω_μ^b_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConnection {
    /// `ω_φ^0_1 = 2αΩR sin θ`
    pub omega_phi_01: f64,
    /// `ω_φ^2_1 = α cos θ`
    pub omega_phi_21: f64,
    /// `ω_θ^0_2 = 2ΩR`
    pub omega_theta_02: f64,
}

impl SpinConnection {
    /// Full set of mixed-index forms, completed so that `ω_{ab} = -ω_{ba}`.
    pub fn forms(&self) -> ConnectionForms {
        let mut w = [[[0.0; 3]; 3]; 3];
        w[2][0][1] = self.omega_phi_01;
        w[2][1][0] = self.omega_phi_01;
        w[2][2][1] = self.omega_phi_21;
        w[2][1][2] = -self.omega_phi_21;
        w[1][0][2] = self.omega_theta_02;
        w[1][2][0] = self.omega_theta_02;
        ConnectionForms { w }
    }

    /// Frame-lowered components `ω_{μab} = η_aa ω_μ^a_b`, indexed `[μ][a][b]`.
    pub fn lowered(&self) -> [[[f64; 3]; 3]; 3] {
        let mixed = self.forms().w;
        let mut low = [[[0.0; 3]; 3]; 3];
        for mu in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    low[mu][a][b] = ETA[a] * mixed[mu][a][b];
                }
            }
        }
        low
    }
}

/// Mixed-index connection one-forms `ω^a_b = w[μ][a][b] dx^μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionForms {
    pub w: [[[f64; 3]; 3]; 3],
}

pub fn spin_connection_at(p: &GeometryParams, theta: f64) -> Result<SpinConnection> {
    check_open_theta(theta)?;
    Ok(SpinConnection {
        omega_phi_01: 2.0 * p.alpha * p.omega * p.radius * theta.sin(),
        omega_phi_21: p.alpha * theta.cos(),
        omega_theta_02: 2.0 * p.omega * p.radius,
    })
}

/// Torsion-free (Levi-Civita) connection of the tetrad, obtained by solving
/// the first structure equation with `ω_{ab} = -ω_{ba}`:
///
/// `ω_{01} = -αΩR sinθ dφ`, `ω_{02} = ΩR dθ`,
/// `ω_{12} = Ω dt + (4αΩ²R² sin²(θ/2) - α cosθ) dφ`.
pub fn torsion_free_connection_at(p: &GeometryParams, theta: f64) -> Result<ConnectionForms> {
    check_open_theta(theta)?;
    let boost_phi = p.alpha * p.omega * p.radius * theta.sin();
    let boost_theta = p.omega * p.radius;
    let rot_t = p.omega;
    let rot_phi = p.omega * p.frame_drag(theta) - p.alpha * theta.cos();
    let mut w = [[[0.0; 3]; 3]; 3];
    // ω^0_1 = -ω_{01}, ω^1_0 = ω_{10} = -ω_{01}
    w[2][0][1] = boost_phi;
    w[2][1][0] = boost_phi;
    // ω^0_2 = -ω_{02}, ω^2_0 = -ω_{02}
    w[1][0][2] = -boost_theta;
    w[1][2][0] = -boost_theta;
    // ω^1_2 = ω_{12}, ω^2_1 = -ω_{12}
    w[0][1][2] = rot_t;
    w[0][2][1] = -rot_t;
    w[2][1][2] = rot_phi;
    w[2][2][1] = -rot_phi;
    Ok(ConnectionForms { w })
}

/// Largest component of `dθ^a + ω^a_b ∧ θ^b` for arbitrary connection forms,
/// with `dθ^a` taken by central differences of step `h`.
pub fn structure_residual<F>(p: &GeometryParams, theta: f64, h: f64, forms: F) -> Result<f64>
where
    F: Fn(&GeometryParams, f64) -> Result<ConnectionForms>,
{
    if !(h > 0.0) || h > MAX_FD_STEP {
        return Err(Error::StepTooLarge { h, max: MAX_FD_STEP });
    }
    check_open_theta(theta - h)?;
    check_open_theta(theta + h)?;
    let e = tetrad_at(p, theta)?.e;
    let de = (tetrad_at(p, theta + h)?.e - tetrad_at(p, theta - h)?.e) / (2.0 * h);
    let w = forms(p, theta)?.w;

    // Only ∂_θ is non-zero, so (dθ^a)_{μν} = δ_μθ ∂_θ e^a_ν - δ_νθ ∂_θ e^a_μ.
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for mu in 0..3 {
            for nu in (mu + 1)..3 {
                let mut c = 0.0;
                if mu == 1 {
                    c += de[(a, nu)];
                }
                if nu == 1 {
                    c -= de[(a, mu)];
                }
                for b in 0..3 {
                    c += w[mu][a][b] * e[(b, nu)] - w[nu][a][b] * e[(b, mu)];
                }
                worst = worst.max(c.abs());
            }
        }
    }
    Ok(worst)
}

/// Structure-equation residual of the closed-form connections returned by
/// [`spin_connection_at`].
pub fn maurer_cartan_residual(p: &GeometryParams, theta: f64, h: f64) -> Result<f64> {
    structure_residual(p, theta, h, |p, th| Ok(spin_connection_at(p, th)?.forms()))
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(o, one, one, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(one, o, o, -one),
    ]
}

/// Reduced Dirac matrices `γ^a` fixing the `Σ^{ab}` convention.
pub fn gamma() -> [Matrix2<Complex64>; 3] {
    let [s1, s2, s3] = pauli();
    [-s3, s1, s2]
}

/// `Σ^{ab} = (i/2)[γ^a, γ^b]`.
pub fn sigma_ab(a: usize, b: usize) -> Matrix2<Complex64> {
    let g = gamma();
    let comm = g[a] * g[b] - g[b] * g[a];
    comm * Complex64::new(0.0, 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorConnection {
    pub gamma_phi: Matrix2<Complex64>,
    pub gamma_theta: Matrix2<Complex64>,
}

/// Closed-form spinorial connections
/// `Γ_φ = (i/2)(α cosθ σ₃ - 2αΩR sinθ σ₂)`, `Γ_θ = iΩR σ₁`.
pub fn spinor_connection_at(p: &GeometryParams, theta: f64) -> SpinorConnection {
    let [s1, s2, s3] = pauli();
    let half_i = Complex64::new(0.0, 0.5);
    let a = p.alpha * theta.cos();
    let b = 2.0 * p.alpha * p.omega * p.radius * theta.sin();
    SpinorConnection {
        gamma_phi: (s3 * Complex64::from(a) - s2 * Complex64::from(b)) * half_i,
        gamma_theta: s1 * Complex64::new(0.0, p.omega * p.radius),
    }
}

/// `(i/4) ω_{μab} Σ^{ab}` assembled from the connection components.
pub fn contract_spinor_connection(w: &SpinConnection) -> SpinorConnection {
    let low = w.lowered();
    let quarter_i = Complex64::new(0.0, 0.25);
    let build = |mu: usize| {
        let mut m = Matrix2::zeros();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    m += sigma_ab(a, b) * Complex64::from(low[mu][a][b]);
                }
            }
        }
        m * quarter_i
    };
    SpinorConnection {
        gamma_phi: build(2),
        gamma_theta: build(1),
    }
}
