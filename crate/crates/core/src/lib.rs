//! Models of an electromagnetically-induced-transparency signal beam deflected by a
//! transverse magnetic field gradient.
//!
//! Two independent descriptions of the same deflection live side by side:
//!
//! - [`beamprop`] propagates the signal beam through the cell in the wave-optics picture.
//!   The Zeeman shift of the two-photon detuning varies across the beam, so the refractive
//!   index of the medium varies across the beam, and the beam bends like light in a prism.
//! - [`polariton`] treats the light inside the medium as a dark-state polariton carrying a
//!   magnetic moment `2 g_F μ_B sin²Θ` and pushes it with the Stern-Gerlach force for the
//!   time `L / v_g` it spends in the cell.
//!
//! [`pulse`] measures the group velocity the way an experiment would (pulse delay and a
//! Gaussian fit), and [`analysis`] ties everything into group-velocity sweeps and
//! magnetic-moment extraction.
//!
//! All angular frequencies are rad/s and all other quantities SI.
//!
//! # `no_std` support
//!
//! The crate is `no_std` and needs only `alloc`. The `std` feature is reserved for
//! integrations that want `std::error::Error` on older toolchains; nothing in the models
//! depends on it.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(any(feature = "std", test))]
extern crate std;

pub mod analysis;
pub mod beamprop;
pub mod constants;
mod error;
pub mod fft;
pub mod fields;
pub mod fit;
pub mod medium;
pub mod polariton;
pub mod pulse;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;
