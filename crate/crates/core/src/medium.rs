//! Linear response of the Λ-type three-level medium to the weak signal field.
//!
//! The signal sees the standard weak-probe susceptibility
//!
//! ```text
//! χ(δ) = A (δ + iγ_c) / [ Ω²/4 − (δ + iγ_c)(δ + Δ + iΓ/2) ]
//! ```
//!
//! with the coupling strength `A = (g√N)² / (2 ω_s)`. That normalisation makes the
//! group index on two-photon resonance equal `1 + (g√N/Ω)²` when `γ_c = Δ = 0`, i.e. the
//! group velocity is `c cos²Θ` with `tan Θ = g√N / Ω`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{C, RB_D1_GAMMA};
use crate::{Error, Result};

/// Bounds on the dimensionless resonant susceptibility `2A/Γ` accepted by calibration.
pub const STRENGTH_BOUNDS: (f64, f64) = (1e-12, 1e2);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Signal wavelength, m.
    pub lambda_s: f64,
    /// Cell length L, m.
    pub cell_length: f64,
    /// Control Rabi frequency Ω, rad/s.
    pub rabi_control: f64,
    /// Collective coupling g√N, rad/s.
    pub coupling_collective: f64,
    /// Excited-state decay rate Γ, rad/s.
    pub gamma_e: f64,
    /// Ground-state coherence decay rate γ_c, rad/s.
    pub gamma_c: f64,
    /// One-photon detuning Δ of the control field, rad/s.
    pub delta_one_photon: f64,
    /// Hyperfine g-factor g_F.
    pub g_factor: f64,
}

impl Default for MediumParams {
    fn default() -> Self {
        let rabi_control = 2.0 * PI * 1.0e6;
        Self {
            lambda_s: 795e-9,
            cell_length: 0.050,
            rabi_control,
            // v_g = 290 m/s in the lossless limit
            coupling_collective: rabi_control * libm::sqrt(C / 290.0 - 1.0),
            gamma_e: RB_D1_GAMMA,
            gamma_c: 2.0 * PI * 1.0e3,
            delta_one_photon: 0.0,
            g_factor: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSusceptibility {
    pub chi: Complex64,
    /// Two-photon detuning at which `chi` was evaluated, rad/s.
    pub delta: f64,
}

/// Refractive index and intensity absorption coefficient at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractiveIndex {
    pub n: f64,
    /// `n − 1`, kept separately because it is far below f64 resolution of `n`.
    pub excess: f64,
    /// Intensity absorption coefficient κ_abs, 1/m.
    pub absorption: f64,
}

impl MediumParams {
    pub fn omega_s(&self) -> f64 {
        2.0 * PI * C / self.lambda_s
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.lambda_s
    }

    /// Coupling strength `A = (g√N)² / (2 ω_s)`, rad/s.
    pub fn coupling_strength(&self) -> f64 {
        self.coupling_collective * self.coupling_collective / (2.0 * self.omega_s())
    }

    /// Dimensionless resonant susceptibility `2A/Γ` of the bare two-level line.
    pub fn resonant_strength(&self) -> f64 {
        2.0 * self.coupling_strength() / self.gamma_e
    }

    /// Width of the transparency window, `Ω²/Γ`, rad/s.
    pub fn eit_window(&self) -> f64 {
        if self.gamma_e > 0.0 {
            self.rabi_control * self.rabi_control / self.gamma_e
        } else {
            f64::INFINITY
        }
    }

    pub fn with_coupling_strength(mut self, strength: f64) -> Self {
        self.coupling_collective = libm::sqrt(2.0 * self.omega_s() * strength);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, bool, &'static str); 7] = [
            ("lambda_s", self.lambda_s > 0.0, "must be positive"),
            ("cell_length", self.cell_length > 0.0, "must be positive"),
            (
                "rabi_control",
                self.rabi_control >= 0.0,
                "must be non-negative",
            ),
            (
                "coupling_collective",
                self.coupling_collective >= 0.0,
                "must be non-negative",
            ),
            ("gamma_e", self.gamma_e >= 0.0, "must be non-negative"),
            ("gamma_c", self.gamma_c >= 0.0, "must be non-negative"),
            (
                "gamma_c",
                self.gamma_c < self.gamma_e || self.gamma_e == 0.0,
                "must be below gamma_e",
            ),
        ];
        for (name, ok, reason) in checks {
            if !ok {
                return Err(Error::InvalidParameter { name, reason });
            }
        }
        let finite = [
            self.lambda_s,
            self.cell_length,
            self.rabi_control,
            self.coupling_collective,
            self.gamma_e,
            self.gamma_c,
            self.delta_one_photon,
            self.g_factor,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter {
                name: "medium",
                reason: "all parameters must be finite",
            });
        }
        if self.gamma_c == 0.0 && self.gamma_e == 0.0 {
            return Err(Error::LosslessSingular);
        }
        Ok(())
    }

    fn response(&self, delta: f64) -> Result<(Complex64, Complex64)> {
        let u = Complex64::new(delta, self.gamma_c);
        let w = Complex64::new(delta + self.delta_one_photon, 0.5 * self.gamma_e);
        let denominator = Complex64::new(0.25 * self.rabi_control * self.rabi_control, 0.0) - u * w;
        if denominator.norm_sqr() == 0.0 {
            return Err(Error::LosslessSingular);
        }
        Ok((u, denominator))
    }
}

pub fn susceptibility(p: &MediumParams, delta: f64) -> Result<ComplexSusceptibility> {
    p.validate()?;
    let (u, denominator) = p.response(delta)?;
    Ok(ComplexSusceptibility {
        chi: u * p.coupling_strength() / denominator,
        delta,
    })
}

/// `dχ/dδ = A (Ω²/4 + u²) / D²` with `u = δ + iγ_c`.
pub fn susceptibility_slope(p: &MediumParams, delta: f64) -> Result<Complex64> {
    p.validate()?;
    let (u, denominator) = p.response(delta)?;
    let quarter = 0.25 * p.rabi_control * p.rabi_control;
    Ok((u * u + quarter) * p.coupling_strength() / (denominator * denominator))
}

/// Analytic `dn/dδ`, s/rad.
pub fn index_slope(p: &MediumParams, delta: f64) -> Result<f64> {
    Ok(0.5 * susceptibility_slope(p, delta)?.re)
}

impl RefractiveIndex {
    /// Dilute-medium index `n = 1 + Re χ / 2` and `κ_abs = k Im χ`.
    pub fn from_susceptibility(chi: Complex64, wavenumber: f64) -> Self {
        let excess = 0.5 * chi.re;
        Self {
            n: 1.0 + excess,
            excess,
            absorption: wavenumber * chi.im,
        }
    }
}

pub fn refractive_index(p: &MediumParams, delta: f64) -> Result<RefractiveIndex> {
    let chi = susceptibility(p, delta)?.chi;
    if chi.norm() > 0.1 {
        log::warn!(
            "|χ| = {:.3} at δ = {delta:e} rad/s; dilute-medium index is unreliable",
            chi.norm()
        );
    }
    Ok(RefractiveIndex::from_susceptibility(chi, p.wavenumber()))
}

/// Group velocity on two-photon resonance from `c / (n + ω dn/dω)`, with `dn/dω` taken by
/// central finite differences. The step starts at `10⁻³` of the transparency window and is
/// halved until two successive estimates agree to 0.1 %.
pub fn group_velocity(p: &MediumParams) -> Result<f64> {
    // above Γ the window saturates at the Autler-Townes splitting, so cap the step at Ω
    group_velocity_from_step(p, 1e-3 * p.eit_window().min(p.rabi_control))
}

/// [`group_velocity`] starting the step-halving at `initial_step` (rad/s).
pub fn group_velocity_from_step(p: &MediumParams, initial_step: f64) -> Result<f64> {
    if !(initial_step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "initial_step",
            reason: "must be positive",
        });
    }
    if p.rabi_control <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "rabi_control",
            reason: "EIT window closed (Ω = 0)",
        });
    }
    let centre = refractive_index(p, 0.0)?;
    let omega = p.omega_s();
    let estimate = |h: f64| -> Result<f64> {
        let up = refractive_index(p, h)?.excess;
        let down = refractive_index(p, -h)?.excess;
        let slope = (up - down) / (2.0 * h);
        Ok(C / (centre.n + omega * slope))
    };
    let mut h = initial_step;
    let mut previous = estimate(h)?;
    for _ in 0..48 {
        h *= 0.5;
        let next = estimate(h)?;
        if libm::fabs(next - previous) <= 1e-3 * libm::fabs(next) {
            if !(next > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "medium",
                    reason: "anomalous dispersion on resonance (no slow light)",
                });
            }
            return Ok(next.min(C));
        }
        previous = next;
    }
    Err(Error::WindowTooNarrow)
}

/// Returns a copy of `p` with g√N chosen so that [`group_velocity`] hits `target_vg`.
///
/// The group index on resonance is affine in `A`, so the solve is direct; one secant
/// correction against the finite-difference group velocity absorbs its truncation error.
pub fn calibrate_to_vg(p: &MediumParams, target_vg: f64) -> Result<MediumParams> {
    if !(target_vg > 0.0 && target_vg <= C) {
        return Err(Error::InvalidParameter {
            name: "target_vg",
            reason: "must lie in (0, c]",
        });
    }
    if target_vg == C {
        return Ok(p.with_coupling_strength(0.0));
    }
    let unit = p.with_coupling_strength(1.0);
    let per_strength =
        0.5 * susceptibility(&unit, 0.0)?.chi.re + unit.omega_s() * index_slope(&unit, 0.0)?;
    let needed = C / target_vg - 1.0;
    let unreachable = |strength: f64| Error::UnreachableVelocity {
        target: target_vg,
        strength,
    };
    if !(per_strength > 0.0) {
        return Err(unreachable(f64::NAN));
    }
    let mut strength = needed / per_strength;
    let in_bounds = |s: f64| {
        let dimensionless = 2.0 * s / p.gamma_e;
        (STRENGTH_BOUNDS.0..=STRENGTH_BOUNDS.1).contains(&dimensionless)
    };
    if !in_bounds(strength) {
        return Err(unreachable(2.0 * strength / p.gamma_e));
    }
    let measured = group_velocity(&p.with_coupling_strength(strength))?;
    let achieved = C / measured - 1.0;
    if achieved > 0.0 {
        strength *= needed / achieved;
    }
    if !in_bounds(strength) {
        return Err(unreachable(2.0 * strength / p.gamma_e));
    }
    Ok(p.with_coupling_strength(strength))
}
