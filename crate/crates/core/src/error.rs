use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Error type shared by every module. Numeric payloads are stored as `f64`
/// regardless of the working scalar type so the enum stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its domain constraint.
    #[error("parameter domain: {parameter} {message}")]
    Domain {
        parameter: &'static str,
        message: String,
    },

    /// A picture translation is not defined for the given input.
    #[error("picture translation: {0}")]
    Mapping(String),

    /// Normal-mode analysis requires equal natural frequencies.
    #[error("oscillators are not degenerate: omega1^2 = {omega1_sq}, omega2^2 = {omega2_sq}")]
    NonDegenerate { omega1_sq: f64, omega2_sq: f64 },

    /// The lower normal mode would not be oscillatory.
    #[error("lower normal mode not oscillatory: omega^2 = {omega_sq} <= Omega_r^2 = {omega_r_sq}")]
    OverdampedMode { omega_sq: f64, omega_r_sq: f64 },

    /// An undamped system was driven exactly at a normal mode.
    #[error("singular response at omega_s = {omega_s}: driving the undamped mode at {mode_omega}")]
    Singularity { omega_s: f64, mode_omega: f64 },

    /// The integration state became non-finite.
    #[error("time-domain state diverged (non-finite) at t = {t}")]
    Divergence { t: f64 },

    /// The time step does not resolve the fastest oscillation.
    #[error("resolution guard: dt * max(omega, omega_s) = {dt_omega} must be < 0.1")]
    ResolutionGuard { dt_omega: f64 },

    /// The trajectory does not cover transient plus demodulation window.
    #[error("trajectory covers {covered} drive periods, demodulation needs {needed}")]
    WindowTooShort { needed: f64, covered: f64 },

    /// The demodulation residual exceeds the steady-state threshold.
    #[error("not steady: demodulation residual {residual} exceeds threshold {threshold}")]
    NotSteady { residual: f64, threshold: f64 },

    /// The spectrum contains flagged singular holes.
    #[error("spectrum has {count} singular hole(s) in the scanned range")]
    Holes { count: usize },

    /// The spectrum is too short for feature extraction.
    #[error("spectrum has {points} points, need at least {min}")]
    TooFewPoints { points: usize, min: usize },

    /// Phase input still carries 2-pi wraps.
    #[error("phase input wraps at index {index}; unwrap before feature extraction")]
    WrappedPhase { index: usize },

    /// The observable is not defined for the given parameter picture.
    #[error("observable {observable} is not defined for the {picture} picture")]
    IncompatibleObservable {
        observable: &'static str,
        picture: &'static str,
    },

    /// An internal iterative solver failed to converge.
    #[error("no convergence: {0}")]
    NoConvergence(&'static str),
}

impl Error {
    pub(crate) fn domain(parameter: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            parameter,
            message: message.into(),
        }
    }
}
