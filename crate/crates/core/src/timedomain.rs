//! Fixed-step RK4 integration of the real coupled equations of motion with a
//! sinusoidal drive, plus steady-state extraction by quadrature demodulation.
//!
//! This module is the numerical oracle for the closed forms in [`response`]:
//! the complex drive convention there corresponds to a real `cos(omega_s t)`
//! drive here, and the complex amplitude is recovered by projecting the
//! settled trajectory onto `cos(omega_s t)` and `sin(omega_s t)` over an
//! integer number of drive periods (a least-squares fit of the two
//! quadratures, which is exact for a pure sinusoid at any step size).
//!
//! Transients matter: a nearly undamped pump rings for `~1/gamma` time units,
//! so the default `20/gamma_slow`-period heuristic can be prohibitively long.
//! [`IntegrationConfig::settled`] instead estimates the slowest decay rate
//! from the characteristic quartic of the coupled system and integrates just
//! long enough for the requested tolerance; the demodulation residual guards
//! the result either way.
//!
//! [`response`]: crate::response

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{steady_amplitudes, DrivenPair, Params, Picture};
use crate::response::{driven_amplitude, ComplexResponse};
use crate::scalar::{lit, Scalar};

/// Default number of drive periods used for demodulation.
pub const DEFAULT_DEMOD_PERIODS: u32 = 10;

/// Default ceiling on the demodulation residual (RMS fit error over
/// amplitude) above which the trajectory is rejected as not steady.
pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 1e-2;

/// Margin factor applied to amplitude estimates in settling times.
const SETTLE_SAFETY: f64 = 10.0;

/// Resolution guard: `dt * max(omega, omega_s)` must stay below this.
const RESOLUTION_LIMIT: f64 = 0.1;

/// Instantaneous state. In the mechanical picture the coordinates are the
/// displacements `x1` (driven), `x2` (pump) and their velocities; in the
/// electrical picture they are the charges `q1` (pump), `q2` (driven) and the
/// mesh currents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState<T> {
    pub t: T,
    pub x1: T,
    pub v1: T,
    pub x2: T,
    pub v2: T,
}

impl<T: Scalar> OscState<T> {
    /// All-zero state at `t = 0` (the steady-state-from-rest protocol).
    pub fn zero() -> Self {
        OscState {
            t: T::zero(),
            x1: T::zero(),
            v1: T::zero(),
            x2: T::zero(),
            v2: T::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.x1.is_finite()
            && self.v1.is_finite()
            && self.x2.is_finite()
            && self.v2.is_finite()
    }
}

/// Fixed-step integration plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig<T> {
    /// Time step (> 0, `dt * max(omega, omega_s) < 0.1`).
    pub dt: T,
    /// Integration span measured from the initial state's time.
    pub t_end: T,
    /// Drive periods discarded before demodulation (may be fractional).
    pub transient_periods: T,
    /// Drive periods used for demodulation (>= 1).
    pub demod_periods: u32,
}

impl<T: Scalar> IntegrationConfig<T> {
    /// Validates the plan against the fastest frequency present.
    pub fn validate(&self, omega_max: T) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(Error::domain("dt", "must be finite and > 0"));
        }
        if !(self.t_end.is_finite() && self.t_end > self.dt) {
            return Err(Error::domain("t_end", "must be finite and > dt"));
        }
        if !(self.transient_periods.is_finite() && self.transient_periods >= T::zero()) {
            return Err(Error::domain("transient_periods", "must be finite and >= 0"));
        }
        if self.demod_periods < 1 {
            return Err(Error::domain("demod_periods", "must be >= 1"));
        }
        let dt_omega = self.dt * omega_max;
        if !(dt_omega < lit::<T>(RESOLUTION_LIMIT)) {
            return Err(Error::ResolutionGuard {
                dt_omega: dt_omega.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Conservative plan with the `max(20/gamma_slow, 50)`-period transient
    /// heuristic, `gamma_slow` being the smallest positive damping rate.
    /// Beware: for a nearly undamped pump this is enormous; prefer
    /// [`IntegrationConfig::settled`].
    pub fn heuristic(pair: &DrivenPair<T>, omega_s: T) -> Result<Self> {
        let mut gamma_slow = T::infinity();
        for g in [pair.gamma_d, pair.gamma_p] {
            if g > T::zero() {
                gamma_slow = gamma_slow.min(g);
            }
        }
        if !gamma_slow.is_finite() {
            return Err(Error::domain(
                "gamma1",
                "transient heuristic requires at least one positive damping rate",
            ));
        }
        let transient_periods = (lit::<T>(20.0) / gamma_slow).max(lit::<T>(50.0));
        Self::from_periods(pair, omega_s, transient_periods, lit::<T>(1e-3))
    }

    /// Plan whose transient length comes from the slowest decay rate of the
    /// coupled system and the analytic amplitude scales, targeting a relative
    /// demodulation bias of `rel_tol` on the driven coordinate.
    pub fn settled(pair: &DrivenPair<T>, omega_s: T, rel_tol: T) -> Result<Self> {
        if !(rel_tol > T::zero() && rel_tol < T::one()) {
            return Err(Error::domain("rel_tol", "must lie in (0, 1)"));
        }
        let rate = slow_decay_rate(pair)?;
        let (n_driven, n_pump) = steady_magnitudes(pair, omega_s)?;
        let static_scale = pair.accel / pair.omega_d_sq;
        let amp0 = n_driven.max(n_pump).max(static_scale);
        let target_amp = if n_driven > T::zero() {
            n_driven
        } else {
            static_scale * rel_tol
        };
        let target = rel_tol * target_amp;
        let ratio = (lit::<T>(SETTLE_SAFETY) * amp0 / target).max(lit::<T>(10.0));
        let t_settle = ratio.ln() / rate;
        let period = lit::<T>(2.0) * T::PI() / omega_s;
        let transient_periods = (t_settle / period).max(lit::<T>(2.0));
        Self::from_periods(pair, omega_s, transient_periods, rel_tol)
    }

    fn from_periods(
        pair: &DrivenPair<T>,
        omega_s: T,
        transient_periods: T,
        rel_tol: T,
    ) -> Result<Self> {
        let period = lit::<T>(2.0) * T::PI() / omega_s;
        let demod_periods = DEFAULT_DEMOD_PERIODS;
        let cfg = IntegrationConfig {
            dt: suggested_dt(pair, omega_s, rel_tol),
            t_end: (transient_periods + lit::<T>(f64::from(demod_periods))) * period,
            transient_periods,
            demod_periods,
        };
        cfg.validate(pair.omega_max().max(omega_s))?;
        Ok(cfg)
    }
}

/// Step size for a target relative accuracy of the demodulated amplitude.
///
/// The base step resolves the fastest oscillation (`0.04 / omega_max`,
/// comfortably inside the resolution guard). Near the transparency zero the
/// demodulated amplitude is dominated by the pump numerator
/// `omega_p^2 - omega_s^2 - i gamma_p omega_s`, and the RK4 frequency error
/// `delta_omega ~ omega^5 dt^4 / 120` shifts that zero; the step is reduced
/// until the shift is a small fraction of the numerator magnitude.
pub fn suggested_dt<T: Scalar>(pair: &DrivenPair<T>, omega_s: T, rel_tol: T) -> T {
    let omega_max = pair.omega_max().max(omega_s);
    let base = lit::<T>(0.04) / omega_max;
    if pair.coupling_d * pair.coupling_p <= T::zero() {
        return base;
    }
    let num = Complex::new(
        pair.omega_p_sq - omega_s * omega_s,
        -pair.gamma_p * omega_s,
    )
    .norm();
    if !(num > T::zero()) {
        return base;
    }
    let omega_p6 = pair.omega_p_sq.powi(3);
    let dt_zero = (lit::<T>(20.0) * rel_tol * num / omega_p6)
        .powf(lit::<T>(0.25))
        .max(base / lit::<T>(64.0));
    base.min(dt_zero)
}

/// Analytic steady magnitudes of the driven and pump coordinates, used to
/// size transients.
fn steady_magnitudes<T: Scalar>(pair: &DrivenPair<T>, omega_s: T) -> Result<(T, T)> {
    let (d_pump, den, _) = steady_amplitudes(pair, omega_s);
    let den_norm = den.norm();
    if den_norm < T::denominator_floor() {
        // reuse the response-side singularity reporting
        driven_amplitude(pair, omega_s, T::denominator_floor())?;
    }
    let n_driven = pair.accel * d_pump.norm() / den_norm;
    let n_pump = pair.accel * pair.coupling_p / den_norm;
    Ok((n_driven, n_pump))
}

/// Slowest decay rate (smallest `-Re lambda`) of the homogeneous coupled
/// system, from the characteristic quartic
/// `(l^2 + gd l + wd^2)(l^2 + gp l + wp^2) - cd cp = 0`.
///
/// For an uncoupled pair only the driven factor matters (the pump is never
/// excited from rest). Errors if the system has an undamped surviving mode.
pub fn slow_decay_rate<T: Scalar>(pair: &DrivenPair<T>) -> Result<T> {
    let coupling = pair.coupling_d * pair.coupling_p;
    let rate = if coupling == T::zero() {
        quadratic_slow_rate(pair.gamma_d, pair.omega_d_sq)
    } else {
        let a3 = pair.gamma_d + pair.gamma_p;
        let a2 = pair.omega_d_sq + pair.omega_p_sq + pair.gamma_d * pair.gamma_p;
        let a1 = pair.gamma_d * pair.omega_p_sq + pair.gamma_p * pair.omega_d_sq;
        let a0 = pair.omega_d_sq * pair.omega_p_sq - coupling;
        let scale = pair
            .omega_max()
            .max(pair.gamma_d)
            .max(pair.gamma_p)
            .max(T::min_positive_value());
        let b = [
            a0 / scale.powi(4),
            a1 / scale.powi(3),
            a2 / scale.powi(2),
            a3 / scale,
        ];
        let roots = quartic_roots(b)?;
        let mut slowest = T::infinity();
        for r in roots {
            slowest = slowest.min(-(r.re) * scale);
        }
        slowest
    };
    if rate > T::zero() && rate.is_finite() {
        Ok(rate)
    } else {
        Err(Error::domain(
            "gamma1",
            "system has an undamped surviving mode; settling time is unbounded",
        ))
    }
}

fn quadratic_slow_rate<T: Scalar>(gamma: T, omega_sq: T) -> T {
    let half = gamma * lit::<T>(0.5);
    let disc = half * half - omega_sq;
    if disc < T::zero() {
        half
    } else {
        half - disc.sqrt()
    }
}

/// Durand-Kerner on a monic quartic with real coefficients
/// `x^4 + b[3] x^3 + b[2] x^2 + b[1] x + b[0]`.
fn quartic_roots<T: Scalar>(b: [T; 4]) -> Result<[Complex<T>; 4]> {
    let eval = |x: Complex<T>| {
        (((x + b[3]) * x + b[2]) * x + b[1]) * x + b[0]
    };
    let seed = Complex::new(lit::<T>(0.4), lit::<T>(0.9));
    let mut roots = [seed, seed * seed, seed * seed * seed, seed * seed * seed * seed];
    let tol = lit::<T>(1e-13);
    for _ in 0..200 {
        let mut max_step = T::zero();
        for k in 0..4 {
            let mut denom = Complex::new(T::one(), T::zero());
            for j in 0..4 {
                if j != k {
                    denom = denom * (roots[k] - roots[j]);
                }
            }
            if denom.norm() == T::zero() {
                // nudge coincident estimates apart
                roots[k] = roots[k] + Complex::new(tol, tol);
                continue;
            }
            let step = eval(roots[k]) / denom;
            roots[k] = roots[k] - step;
            max_step = max_step.max(step.norm() / (T::one() + roots[k].norm()));
        }
        if max_step < tol {
            return Ok(roots);
        }
    }
    Err(Error::NoConvergence("characteristic quartic root finding"))
}

/// A stored trajectory; states are in picture order (see [`OscState`]) and
/// `driven` indexes the coordinate carrying the drive (0 for mechanical,
/// 1 for electrical).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub states: Vec<OscState<T>>,
    pub dt: T,
    pub driven: usize,
    pub picture: Picture,
}

/// Demodulation outcome: the complex amplitude with `x(t) ~ Re(N e^{-i w t})`
/// and the relative RMS of the fit residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demod<T> {
    pub response: ComplexResponse<T>,
    pub residual: T,
}

/// One point of an oracle comparison between the closed-form amplitude and
/// the demodulated RK4 amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint<T> {
    pub omega_s: T,
    pub analytic: Complex<T>,
    pub demodulated: Complex<T>,
    pub rel_err: T,
    pub residual: T,
}

/// Picture-ordered coefficients for the first-order system.
struct Coeffs<T> {
    gamma: [T; 2],
    omega_sq: [T; 2],
    cross: [T; 2],
    accel: [T; 2],
    omega_s: T,
    phase: T,
}

impl<T: Scalar> Coeffs<T> {
    fn from_params(params: &Params<T>, omega_s: T) -> Result<(Self, usize)> {
        let pair = params.driven_pair()?;
        match params.picture() {
            Picture::Mechanical => Ok((Self::canonical(&pair, omega_s), 0)),
            Picture::Electrical => {
                // picture order: coordinate 0 is the pump mesh charge q1
                Ok((
                    Coeffs {
                        gamma: [pair.gamma_p, pair.gamma_d],
                        omega_sq: [pair.omega_p_sq, pair.omega_d_sq],
                        cross: [pair.coupling_p, pair.coupling_d],
                        accel: [T::zero(), pair.accel],
                        omega_s,
                        phase: pair.phase,
                    },
                    1,
                ))
            }
        }
    }

    fn canonical(pair: &DrivenPair<T>, omega_s: T) -> Self {
        Coeffs {
            gamma: [pair.gamma_d, pair.gamma_p],
            omega_sq: [pair.omega_d_sq, pair.omega_p_sq],
            cross: [pair.coupling_d, pair.coupling_p],
            accel: [pair.accel, T::zero()],
            omega_s,
            phase: pair.phase,
        }
    }

    #[inline]
    fn deriv(&self, drive: T, y: &[T; 4]) -> [T; 4] {
        [
            y[1],
            -self.gamma[0] * y[1] - self.omega_sq[0] * y[0] + self.cross[0] * y[2]
                + self.accel[0] * drive,
            y[3],
            -self.gamma[1] * y[3] - self.omega_sq[1] * y[2] + self.cross[1] * y[0]
                + self.accel[1] * drive,
        ]
    }

    #[inline]
    fn drive(&self, t: T) -> T {
        (self.omega_s * t + self.phase).cos()
    }
}

/// Classic RK4 over `steps` fixed steps, visiting every state including the
/// initial one. Aborts with the failure time if the state goes non-finite.
fn rk4_run<T: Scalar>(
    co: &Coeffs<T>,
    start: T,
    y0: [T; 4],
    dt: T,
    steps: usize,
    mut visit: impl FnMut(T, &[T; 4]),
) -> Result<[T; 4]> {
    let half = lit::<T>(0.5);
    let sixth = lit::<T>(6.0).recip();
    let two = lit::<T>(2.0);
    let mut y = y0;
    let mut t = start;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::Divergence {
            t: t.to_f64().unwrap_or(f64::NAN),
        });
    }
    visit(t, &y);
    for k in 0..steps {
        let t_mid = t + dt * half;
        let t_next = start + dt * T::from_usize(k + 1).expect("step count fits scalar");
        let d0 = co.drive(t);
        let d_mid = co.drive(t_mid);
        let d1 = co.drive(t_next);

        let k1 = co.deriv(d0, &y);
        let y2 = add_scaled(&y, &k1, dt * half);
        let k2 = co.deriv(d_mid, &y2);
        let y3 = add_scaled(&y, &k2, dt * half);
        let k3 = co.deriv(d_mid, &y3);
        let y4 = add_scaled(&y, &k3, dt);
        let k4 = co.deriv(d1, &y4);

        for i in 0..4 {
            y[i] = y[i] + dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        t = t_next;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence {
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        visit(t, &y);
    }
    Ok(y)
}

#[inline]
fn add_scaled<T: Scalar>(y: &[T; 4], k: &[T; 4], s: T) -> [T; 4] {
    [
        y[0] + s * k[0],
        y[1] + s * k[1],
        y[2] + s * k[2],
        y[3] + s * k[3],
    ]
}

/// Integrates the coupled equations with a `cos(omega_s t + phi)` drive,
/// storing the state at every step.
pub fn integrate<T: Scalar>(
    params: &Params<T>,
    drive_omega: T,
    cfg: &IntegrationConfig<T>,
    initial: OscState<T>,
) -> Result<Trajectory<T>> {
    let (co, driven) = Coeffs::from_params(params, drive_omega)?;
    let pair = params.driven_pair()?;
    cfg.validate(pair.omega_max().max(drive_omega))?;
    if !initial.is_finite() {
        return Err(Error::Divergence {
            t: initial.t.to_f64().unwrap_or(f64::NAN),
        });
    }
    let steps = (cfg.t_end / cfg.dt).ceil().to_usize().ok_or(Error::domain(
        "t_end",
        "integration span overflows the step counter",
    ))?;
    let mut states = Vec::with_capacity(steps + 1);
    rk4_run(
        &co,
        initial.t,
        [initial.x1, initial.v1, initial.x2, initial.v2],
        cfg.dt,
        steps,
        |t, y| {
            states.push(OscState {
                t,
                x1: y[0],
                v1: y[1],
                x2: y[2],
                v2: y[3],
            })
        },
    )?;
    Ok(Trajectory {
        states,
        dt: cfg.dt,
        driven,
        picture: params.picture(),
    })
}

/// Quadrature accumulator for the two-basis least-squares fit
/// `x(t) ~ A cos(w t) + B sin(w t)`.
struct DemodAccum<T> {
    omega_s: T,
    s_cc: T,
    s_cs: T,
    s_ss: T,
    b_c: T,
    b_s: T,
    s_xx: T,
    n: usize,
}

impl<T: Scalar> DemodAccum<T> {
    fn new(omega_s: T) -> Self {
        DemodAccum {
            omega_s,
            s_cc: T::zero(),
            s_cs: T::zero(),
            s_ss: T::zero(),
            b_c: T::zero(),
            b_s: T::zero(),
            s_xx: T::zero(),
            n: 0,
        }
    }

    #[inline]
    fn add(&mut self, t: T, x: T) {
        let (s, c) = (self.omega_s * t).sin_cos();
        self.s_cc = self.s_cc + c * c;
        self.s_cs = self.s_cs + c * s;
        self.s_ss = self.s_ss + s * s;
        self.b_c = self.b_c + x * c;
        self.b_s = self.b_s + x * s;
        self.s_xx = self.s_xx + x * x;
        self.n += 1;
    }

    fn solve(&self, threshold: T) -> Result<Demod<T>> {
        if self.n < 4 {
            return Err(Error::WindowTooShort {
                needed: 1.0,
                covered: 0.0,
            });
        }
        let det = self.s_cc * self.s_ss - self.s_cs * self.s_cs;
        if det <= T::zero() {
            return Err(Error::NoConvergence("demodulation normal equations"));
        }
        let a = (self.b_c * self.s_ss - self.b_s * self.s_cs) / det;
        let b = (self.b_s * self.s_cc - self.b_c * self.s_cs) / det;
        // Re(N e^{-iwt}) = Re(N) cos + Im(N) sin
        let value = Complex::new(a, b);
        let two = lit::<T>(2.0);
        let rss = self.s_xx - two * (a * self.b_c + b * self.b_s)
            + a * a * self.s_cc
            + two * a * b * self.s_cs
            + b * b * self.s_ss;
        let rms = (rss.max(T::zero()) / T::from_usize(self.n).unwrap()).sqrt();
        let residual = rms / value.norm().max(T::min_positive_value());
        if residual > threshold {
            return Err(Error::NotSteady {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                threshold: threshold.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Demod {
            response: ComplexResponse {
                omega_s: self.omega_s,
                value,
            },
            residual,
        })
    }
}

/// Demodulates the driven coordinate of a stored trajectory over the last
/// `cfg.demod_periods` drive periods.
pub fn steady_state_amplitude<T: Scalar>(
    trajectory: &Trajectory<T>,
    drive_omega: T,
    cfg: &IntegrationConfig<T>,
) -> Result<Demod<T>> {
    steady_state_amplitude_with_threshold(
        trajectory,
        drive_omega,
        cfg,
        lit::<T>(DEFAULT_RESIDUAL_THRESHOLD),
    )
}

/// [`steady_state_amplitude`] with an explicit residual ceiling.
pub fn steady_state_amplitude_with_threshold<T: Scalar>(
    trajectory: &Trajectory<T>,
    drive_omega: T,
    cfg: &IntegrationConfig<T>,
    threshold: T,
) -> Result<Demod<T>> {
    if !(drive_omega.is_finite() && drive_omega > T::zero()) {
        return Err(Error::domain("omega_s", "must be finite and > 0"));
    }
    let period = lit::<T>(2.0) * T::PI() / drive_omega;
    let (first, last) = match (trajectory.states.first(), trajectory.states.last()) {
        (Some(f), Some(l)) => (f.t, l.t),
        _ => {
            return Err(Error::WindowTooShort {
                needed: 0.0,
                covered: 0.0,
            })
        }
    };
    let covered = (last - first) / period;
    let needed = cfg.transient_periods + lit::<T>(f64::from(cfg.demod_periods));
    if covered + lit::<T>(1e-9) < needed {
        return Err(Error::WindowTooShort {
            needed: needed.to_f64().unwrap_or(f64::NAN),
            covered: covered.to_f64().unwrap_or(f64::NAN),
        });
    }
    let window_start =
        last - lit::<T>(f64::from(cfg.demod_periods)) * period - trajectory.dt * lit::<T>(0.5);
    let mut acc = DemodAccum::new(drive_omega);
    for s in &trajectory.states {
        if s.t >= window_start {
            let x = if trajectory.driven == 0 { s.x1 } else { s.x2 };
            acc.add(s.t, x);
        }
    }
    acc.solve(threshold)
}

/// Integrates from rest and demodulates in one streaming pass, without
/// storing the trajectory. Same stepper and same window arithmetic as
/// [`integrate`] followed by [`steady_state_amplitude`].
pub fn demodulated_response<T: Scalar>(
    params: &Params<T>,
    drive_omega: T,
    cfg: &IntegrationConfig<T>,
) -> Result<Demod<T>> {
    let (co, driven) = Coeffs::from_params(params, drive_omega)?;
    let pair = params.driven_pair()?;
    cfg.validate(pair.omega_max().max(drive_omega))?;
    let period = lit::<T>(2.0) * T::PI() / drive_omega;
    let steps = (cfg.t_end / cfg.dt).ceil().to_usize().ok_or(Error::domain(
        "t_end",
        "integration span overflows the step counter",
    ))?;
    let t_last = cfg.dt * T::from_usize(steps).unwrap();
    let covered = t_last / period;
    let needed = cfg.transient_periods + lit::<T>(f64::from(cfg.demod_periods));
    if covered + lit::<T>(1e-9) < needed {
        return Err(Error::WindowTooShort {
            needed: needed.to_f64().unwrap_or(f64::NAN),
            covered: covered.to_f64().unwrap_or(f64::NAN),
        });
    }
    let window_start =
        t_last - lit::<T>(f64::from(cfg.demod_periods)) * period - cfg.dt * lit::<T>(0.5);
    let mut acc = DemodAccum::new(drive_omega);
    rk4_run(&co, T::zero(), [T::zero(); 4], cfg.dt, steps, |t, y| {
        if t >= window_start {
            acc.add(t, if driven == 0 { y[0] } else { y[2] });
        }
    })?;
    acc.solve(lit::<T>(DEFAULT_RESIDUAL_THRESHOLD))
}

/// Runs the oracle at each listed frequency: integrates from rest with a
/// settling plan for `rel_tol`, demodulates, and compares against the
/// closed-form amplitude. Relative errors are normalized by
/// `max(|N|, 1e-9 * max_grid |N|)` so isolated transparency zeros do not
/// blow up the report.
pub fn compare_with_analytic<T: Scalar>(
    params: &Params<T>,
    omegas: &[T],
    rel_tol: T,
) -> Result<Vec<OraclePoint<T>>> {
    let pair = params.driven_pair()?;
    let analytic: Vec<Complex<T>> = omegas
        .iter()
        .map(|&w| driven_amplitude(&pair, w, T::denominator_floor()))
        .collect::<Result<_>>()?;
    let scale = analytic
        .iter()
        .fold(T::zero(), |m, n| m.max(n.norm()));
    let floor = lit::<T>(1e-9) * scale;
    let settle_tol = rel_tol * lit::<T>(0.1);
    let mut points = Vec::with_capacity(omegas.len());
    for (&omega_s, &n_ref) in omegas.iter().zip(&analytic) {
        let cfg = IntegrationConfig::settled(&pair, omega_s, settle_tol)?;
        let demod = demodulated_response(params, omega_s, &cfg)?;
        let err = (demod.response.value - n_ref).norm();
        points.push(OraclePoint {
            omega_s,
            analytic: n_ref,
            demodulated: demod.response.value,
            rel_err: err / n_ref.norm().max(floor),
            residual: demod.residual,
        });
    }
    Ok(points)
}
