//! Dirac quasiparticles on a rotating spherical fullerene: frame geometry,
//! monopole and string gauge fields, the closed-form spectrum, a shooting
//! oracle, persistent currents and causality of Gödel-type metrics.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments,
    clippy::needless_range_loop
)]

pub mod causality;
pub mod error;
pub mod gauge;
pub mod geometry;
pub mod observables;
pub mod ode;
pub mod oracle;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use gauge::{FluxConfig, KPoint, MonopoleConfig};
pub use geometry::GeometryParams;
pub use spectrum::{Branch, QuantumNumbers, SpectrumResult, TwiceM};
