//! Frequency sweeps and extraction of the transparency phenomenology:
//! absorption dip, Autler-Townes doublet, dispersion slope and phase-jump
//! structure.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{Params, Picture};
use crate::response::{
    circuit_power_closed, circuit_power_open, probe_amplitude, probe_power,
};
use crate::scalar::{lit, Scalar};
use crate::MechanicalParams;

/// Uniform angular-frequency grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<T> {
    pub start: T,
    pub stop: T,
    pub points: usize,
}

impl<T: Scalar> FrequencyGrid<T> {
    pub fn new(start: T, stop: T, points: usize) -> Result<Self> {
        let grid = FrequencyGrid {
            start,
            stop,
            points,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.start > T::zero()) {
            return Err(Error::domain("grid.start", "must be finite and > 0"));
        }
        if !(self.stop.is_finite() && self.stop > self.start) {
            return Err(Error::domain("grid.stop", "must be finite and > start"));
        }
        if self.points < 2 {
            return Err(Error::domain("grid.points", "must be >= 2"));
        }
        Ok(())
    }

    /// Grid spacing `(stop - start)/(points - 1)`.
    pub fn step(&self) -> T {
        (self.stop - self.start) / T::from_usize(self.points - 1).unwrap()
    }

    /// The `i`-th grid frequency; endpoints are reproduced exactly.
    pub fn value(&self, i: usize) -> T {
        let f = T::from_usize(i).unwrap() / T::from_usize(self.points - 1).unwrap();
        self.start * (T::one() - f) + self.stop * f
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

/// Observable evaluated over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// `Re(P_s)`, the absorbed probe power (mechanical picture).
    Absorption,
    /// `Re(N)`, the in-phase amplitude (mechanical picture).
    Dispersion,
    /// Unwrapped `arg(N)` (mechanical picture).
    Phase,
    /// `P2` with the pump branch switched out (electrical picture).
    CircuitPowerOpen,
    /// `P2` with the pump branch switched in (electrical picture).
    CircuitPowerClosed,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Absorption => "absorption",
            Observable::Dispersion => "dispersion",
            Observable::Phase => "phase",
            Observable::CircuitPowerOpen => "power-open",
            Observable::CircuitPowerClosed => "power-closed",
        }
    }

    pub fn picture(self) -> Picture {
        match self {
            Observable::Absorption | Observable::Dispersion | Observable::Phase => {
                Picture::Mechanical
            }
            Observable::CircuitPowerOpen | Observable::CircuitPowerClosed => Picture::Electrical,
        }
    }
}

/// A note attached to one grid point (singular hole or analytic-limit value).
#[derive(Debug, Clone, PartialEq)]
pub struct Advisory {
    pub index: usize,
    pub omega_s: f64,
    pub message: String,
}

/// Sampled spectrum. Singular grid points are flagged holes: their slot in
/// `values` holds a NaN placeholder and their index is listed in `holes`,
/// never a silent NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub grid: FrequencyGrid<T>,
    pub observable: Observable,
    pub values: Vec<T>,
    /// Complex samples where the observable has a quadrature partner
    /// (absorption and dispersion sweeps).
    pub complex_values: Option<Vec<Complex<T>>>,
    pub holes: Vec<usize>,
    pub advisories: Vec<Advisory>,
}

/// A refined extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub omega: T,
    pub value: T,
}

/// Transparency dip: location, depth relative to the tallest maximum, and
/// full width at half depth measured against the interpolated peak envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dip<T> {
    pub omega: T,
    pub depth_ratio: T,
    pub fwhm: T,
}

/// Features extracted from one spectrum. `dispersion_slope_center` and
/// `phase_jump_count` are filled by the dedicated operations, not by
/// [`find_extrema`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFeatures<T> {
    pub maxima: Vec<Extremum<T>>,
    pub minima: Vec<Extremum<T>>,
    pub dip: Option<Dip<T>>,
    /// Distance between the two tallest maxima.
    pub splitting: Option<T>,
    pub dispersion_slope_center: Option<T>,
    pub phase_jump_count: Option<usize>,
}

/// One abrupt phase variation: location and signed phase change across it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseJump<T> {
    pub omega: T,
    pub delta: T,
}

/// Output of [`phase_features`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFeatures<T> {
    pub jumps: Vec<PhaseJump<T>>,
    /// Derivative threshold actually used (five times the median slope).
    pub threshold: T,
}

/// Unwraps principal-value phases by nearest-multiple-of-2-pi continuation
/// along the grid.
pub fn unwrap_phase<T: Scalar>(values: &mut [T]) {
    let two_pi = lit::<T>(2.0) * T::PI();
    for i in 1..values.len() {
        let k = ((values[i - 1] - values[i]) / two_pi).round();
        values[i] = values[i] + two_pi * k;
    }
}

/// Evaluates `observable` pointwise over the grid. Deterministic and
/// order-independent; singularity errors become flagged holes.
pub fn sweep<T: Scalar>(
    params: &Params<T>,
    grid: &FrequencyGrid<T>,
    observable: Observable,
) -> Result<Spectrum<T>> {
    grid.validate()?;
    params.validate()?;
    if observable.picture() != params.picture() {
        return Err(Error::IncompatibleObservable {
            observable: observable.name(),
            picture: params.picture().name(),
        });
    }
    let n = grid.points;
    let mut values = Vec::with_capacity(n);
    let mut complex_values = matches!(
        observable,
        Observable::Absorption | Observable::Dispersion
    )
    .then(|| Vec::with_capacity(n));
    let mut holes = Vec::new();
    let mut advisories = Vec::new();

    enum Sample<T> {
        Value(T, Option<Complex<T>>),
        Limit(T, String),
        Hole(String),
    }

    for i in 0..n {
        let w = grid.value(i);
        let sample = match (observable, params) {
            (Observable::Absorption, Params::Mechanical(m)) => match probe_power(m, w) {
                Ok(r) => Sample::Value(r.value.re, Some(r.value)),
                Err(Error::Singularity { mode_omega, .. }) => {
                    Sample::Hole(format!("singular at undamped mode {mode_omega}"))
                }
                Err(e) => return Err(e),
            },
            (Observable::Dispersion, Params::Mechanical(m)) => match probe_amplitude(m, w) {
                Ok(r) => Sample::Value(r.value.re, Some(r.value)),
                Err(Error::Singularity { mode_omega, .. }) => {
                    Sample::Hole(format!("singular at undamped mode {mode_omega}"))
                }
                Err(e) => return Err(e),
            },
            (Observable::Phase, Params::Mechanical(m)) => match probe_amplitude(m, w) {
                Ok(r) if r.value.norm() > T::zero() => Sample::Value(r.value.arg(), None),
                Ok(_) => Sample::Hole("phase undefined at an exact transparency zero".into()),
                Err(Error::Singularity { mode_omega, .. }) => {
                    Sample::Hole(format!("singular at undamped mode {mode_omega}"))
                }
                Err(e) => return Err(e),
            },
            (Observable::CircuitPowerOpen, Params::Electrical(c)) => {
                match circuit_power_open(c, w) {
                    Ok(v) => Sample::Value(v, None),
                    Err(Error::Singularity { mode_omega, .. }) => {
                        Sample::Hole(format!("singular at lossless resonance {mode_omega}"))
                    }
                    Err(e) => return Err(e),
                }
            }
            (Observable::CircuitPowerClosed, Params::Electrical(c)) => {
                match circuit_power_closed(c, w) {
                    Ok(s) if s.singular_limit => Sample::Limit(
                        s.value,
                        "analytic limit at the lossless pump resonance".into(),
                    ),
                    Ok(s) => Sample::Value(s.value, None),
                    Err(Error::Singularity { mode_omega, .. }) => {
                        Sample::Hole(format!("singular at lossless resonance {mode_omega}"))
                    }
                    Err(e) => return Err(e),
                }
            }
            // picture mismatch was rejected above
            _ => unreachable!(),
        };
        match sample {
            Sample::Value(v, c) => {
                values.push(v);
                if let (Some(cv), Some(c)) = (complex_values.as_mut(), c) {
                    cv.push(c);
                }
            }
            Sample::Limit(v, message) => {
                values.push(v);
                advisories.push(Advisory {
                    index: i,
                    omega_s: w.to_f64().unwrap_or(f64::NAN),
                    message,
                });
            }
            Sample::Hole(message) => {
                values.push(T::nan());
                if let Some(cv) = complex_values.as_mut() {
                    cv.push(Complex::new(T::nan(), T::nan()));
                }
                holes.push(i);
                advisories.push(Advisory {
                    index: i,
                    omega_s: w.to_f64().unwrap_or(f64::NAN),
                    message,
                });
            }
        }
    }

    // unwrap the phase along the grid; holes (if any) keep their placeholder
    if observable == Observable::Phase && holes.is_empty() {
        unwrap_phase(&mut values);
    }

    Ok(Spectrum {
        grid: *grid,
        observable,
        values,
        complex_values,
        holes,
        advisories,
    })
}

/// Parabola through three equispaced samples; returns the vertex offset from
/// the center abscissa (clamped to half a step) and the vertex value.
fn quadratic_refine<T: Scalar>(h: T, vm: T, v0: T, vp: T) -> (T, T) {
    let denom = vm - v0 - v0 + vp;
    if denom == T::zero() {
        return (T::zero(), v0);
    }
    let half = lit::<T>(0.5);
    let offset = (h * (vm - vp) / denom * half).max(-h * half).min(h * half);
    let value = v0 - (vm - vp) * (vm - vp) / (denom * lit::<T>(8.0));
    (offset, value)
}

/// Locates interior extrema by three-point comparison refined with quadratic
/// interpolation, and derives the dip/splitting features.
pub fn find_extrema<T: Scalar>(s: &Spectrum<T>) -> Result<SpectralFeatures<T>> {
    if !s.holes.is_empty() {
        return Err(Error::Holes {
            count: s.holes.len(),
        });
    }
    if s.values.len() < 5 {
        return Err(Error::TooFewPoints {
            points: s.values.len(),
            min: 5,
        });
    }
    let h = s.grid.step();
    let v = &s.values;
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let mut min_indices = Vec::new();
    for i in 1..v.len() - 1 {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            let (off, val) = quadratic_refine(h, v[i - 1], v[i], v[i + 1]);
            maxima.push(Extremum {
                omega: s.grid.value(i) + off,
                value: val,
            });
        } else if v[i] < v[i - 1] && v[i] < v[i + 1] {
            let (off, val) = quadratic_refine(h, v[i - 1], v[i], v[i + 1]);
            minima.push(Extremum {
                omega: s.grid.value(i) + off,
                value: val,
            });
            min_indices.push(i);
        }
    }

    let splitting = (maxima.len() >= 2).then(|| {
        let mut tallest = [&maxima[0], &maxima[1]];
        if tallest[1].value > tallest[0].value {
            tallest.swap(0, 1);
        }
        for m in &maxima[2..] {
            if m.value > tallest[0].value {
                tallest[1] = tallest[0];
                tallest[0] = m;
            } else if m.value > tallest[1].value {
                tallest[1] = m;
            }
        }
        (tallest[0].omega - tallest[1].omega).abs()
    });

    let dip = find_dip(s, &maxima, &minima, &min_indices);

    Ok(SpectralFeatures {
        maxima,
        minima,
        dip,
        splitting,
        dispersion_slope_center: None,
        phase_jump_count: None,
    })
}

/// A dip is the deepest local minimum bracketed by maxima on both sides.
fn find_dip<T: Scalar>(
    s: &Spectrum<T>,
    maxima: &[Extremum<T>],
    minima: &[Extremum<T>],
    min_indices: &[usize],
) -> Option<Dip<T>> {
    let tallest = maxima
        .iter()
        .map(|m| m.value)
        .fold(T::neg_infinity(), T::max);
    if !(tallest > T::zero()) {
        return None;
    }
    let mut best: Option<(usize, &Extremum<T>)> = None;
    for (grid_idx, m) in min_indices.iter().zip(minima) {
        let left = maxima.iter().any(|x| x.omega < m.omega);
        let right = maxima.iter().any(|x| x.omega > m.omega);
        if left && right && best.map_or(true, |(_, b)| m.value < b.value) {
            best = Some((*grid_idx, m));
        }
    }
    let (dip_idx, dip_min) = best?;
    let left_max = maxima
        .iter()
        .filter(|x| x.omega < dip_min.omega)
        .max_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap())?;
    let right_max = maxima
        .iter()
        .filter(|x| x.omega > dip_min.omega)
        .min_by(|a, b| a.omega.partial_cmp(&b.omega).unwrap())?;

    let depth_ratio = (T::one() - dip_min.value / tallest)
        .max(T::zero())
        .min(T::one());

    // half level against the linear envelope between the bracketing maxima
    let envelope = |w: T| {
        let f = (w - left_max.omega) / (right_max.omega - left_max.omega);
        left_max.value * (T::one() - f) + right_max.value * f
    };
    let half = lit::<T>(0.5);
    let level_at = |w: T| (envelope(w) + dip_min.value) * half;
    let v = &s.values;
    let cross = |mut i: usize, step: isize| -> Option<T> {
        loop {
            let j = i.checked_add_signed(step)?;
            if j >= v.len() {
                return None;
            }
            let (wi, wj) = (s.grid.value(i), s.grid.value(j));
            let level = level_at(wj);
            if v[j] >= level {
                let f = (level - v[i]) / (v[j] - v[i]);
                return Some(wi + (wj - wi) * f);
            }
            i = j;
        }
    };
    let fwhm = match (cross(dip_idx, -1), cross(dip_idx, 1)) {
        (Some(l), Some(r)) => r - l,
        _ => return None,
    };

    Some(Dip {
        omega: dip_min.omega,
        depth_ratio,
        fwhm,
    })
}

/// Central-difference slope of the dispersive response `Re(N)` at
/// `omega_center`; positive means normal dispersion.
pub fn dispersion_slope<T: Scalar>(
    p: &MechanicalParams<T>,
    omega_center: T,
    h: T,
) -> Result<T> {
    if !(h.is_finite() && h > T::zero()) {
        return Err(Error::domain("h", "must be finite and > 0"));
    }
    if omega_center - h <= T::zero() {
        return Err(Error::domain(
            "omega_center",
            "omega_center - h must stay positive",
        ));
    }
    let eval = |w: T| match probe_amplitude(p, w) {
        Ok(r) => Ok(r.value.re),
        Err(Error::Singularity { omega_s, .. }) => Err(Error::domain(
            "h",
            format!("finite-difference step spans a singular point at omega_s = {omega_s}"),
        )),
        Err(e) => Err(e),
    };
    let right = eval(omega_center + h)?;
    let left = eval(omega_center - h)?;
    Ok((right - left) / (h + h))
}

/// Counts abrupt variations of an unwrapped phase spectrum.
///
/// A jump is a maximal run of consecutive samples whose phase derivative has
/// one sign and magnitude above five times the median `|d phi / d omega|`;
/// its location is the steepest sample of the run and its `delta` the phase
/// change across the run.
pub fn phase_features<T: Scalar>(s: &Spectrum<T>) -> Result<PhaseFeatures<T>> {
    if s.observable != Observable::Phase {
        return Err(Error::IncompatibleObservable {
            observable: s.observable.name(),
            picture: "phase-feature",
        });
    }
    if !s.holes.is_empty() {
        return Err(Error::Holes {
            count: s.holes.len(),
        });
    }
    let v = &s.values;
    if v.len() < 5 {
        return Err(Error::TooFewPoints {
            points: v.len(),
            min: 5,
        });
    }
    // unwrapped input never steps by more than pi between neighbours
    let step_limit = T::PI() * lit::<T>(1.0 + 1e-9);
    for i in 1..v.len() {
        if (v[i] - v[i - 1]).abs() > step_limit {
            return Err(Error::WrappedPhase { index: i });
        }
    }

    let n = v.len();
    let mut d = vec![T::zero(); n];
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (s.grid.value(i + 1) - s.grid.value(i - 1));
    }
    d[0] = (v[1] - v[0]) / (s.grid.value(1) - s.grid.value(0));
    d[n - 1] = (v[n - 1] - v[n - 2]) / (s.grid.value(n - 1) - s.grid.value(n - 2));

    let mut mags: Vec<T> = d.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if n % 2 == 1 {
        mags[n / 2]
    } else {
        (mags[n / 2 - 1] + mags[n / 2]) * lit::<T>(0.5)
    };
    let threshold = lit::<T>(5.0) * median;

    let mut jumps = Vec::new();
    let mut i = 0;
    while i < n {
        if d[i].abs() > threshold && d[i] != T::zero() {
            let sign_positive = d[i] > T::zero();
            let run_start = i;
            let mut steepest = i;
            let mut j = i;
            while j + 1 < n && d[j + 1].abs() > threshold && (d[j + 1] > T::zero()) == sign_positive
            {
                j += 1;
                if d[j].abs() > d[steepest].abs() {
                    steepest = j;
                }
            }
            let lo = run_start.saturating_sub(1);
            let hi = (j + 1).min(n - 1);
            jumps.push(PhaseJump {
                omega: s.grid.value(steepest),
                delta: v[hi] - v[lo],
            });
            i = j + 1;
        } else {
            i += 1;
        }
    }

    Ok(PhaseFeatures { jumps, threshold })
}
