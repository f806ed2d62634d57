use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("lossless-singular medium: susceptibility denominator vanishes for real detuning")]
    LosslessSingular,
    #[error("EIT window too narrow: group velocity finite difference did not converge")]
    WindowTooNarrow,
    #[error(
        "unreachable velocity {target} m/s: coupling strength {strength:e} outside [1e-12, 1e2]"
    )]
    UnreachableVelocity { target: f64, strength: f64 },
    #[error("fully atomic limit: control Rabi frequency must be positive")]
    FullyAtomic,
    #[error("deflection {angle:e} rad leaves the small-angle regime")]
    LargeAngle { angle: f64 },
    #[error("moment extraction undefined: {0}")]
    UndefinedExtraction(&'static str),
    #[error("grid too coarse: {samples_per_waist:.1} samples per waist, need at least 32")]
    GridTooCoarse { samples_per_waist: f64 },
    #[error("grid window {window:e} m is smaller than 4 beam diameters ({needed:e} m)")]
    WindowTooSmall { window: f64, needed: f64 },
    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("magnetic field changes sign inside the simulated window")]
    FieldSignChange,
    #[error("split-step propagation not converged at {n_steps} steps")]
    StepNotConverged { n_steps: usize },
    #[error("no transmitted power")]
    ZeroPower,
    #[error("pulse spectral width exceeds the EIT window ({ratio:.2}x)")]
    PulseExceedsWindow { ratio: f64 },
    #[error("no peak: peak-to-median ratio {ratio:.2} below 3")]
    NoPeak { ratio: f64 },
    #[error("poor fit: residual rms {relative_rms:.3} of peak exceeds 0.05")]
    PoorFit { relative_rms: f64 },
    #[error("empty sweep")]
    EmptySweep,
}
