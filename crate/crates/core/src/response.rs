//! Closed-form steady-state observables under the `exp(-i omega_s t)`
//! convention.
//!
//! For the mechanical picture these are the complex amplitude `N` of the
//! driven coordinate,
//!
//! ```text
//! N = (omega^2 - omega_s^2 - i gamma2 omega_s) F
//!     / (m [ (omega^2 - omega_s^2 - i gamma1 omega_s)
//!            (omega^2 - omega_s^2 - i gamma2 omega_s) - Omega_r^4 ])
//! ```
//!
//! and the period power transfer `P_s = -2 pi i omega_s F N`, whose real part
//! is the absorption observable. For the circuit the power transferred to the
//! driven mesh is evaluated through the reflected-impedance form
//!
//! ```text
//! P2 = p1 / (p1^2 + p2^2) |As|^2          (switch closed)
//! P2 = R2 |As|^2 / (R2^2 + X2^2)          (switch open)
//! ```
//!
//! with `p1 = R2 + (1/(w C))^2 R1 / (R1^2 + X1^2)` and
//! `p2 = X2 - (1/(w C))^2 X1 / (R1^2 + X1^2)`, `X_i = w L_i - 1/(w Ce_i)`.
//!
//! Absolute scales of the mechanical and electrical powers follow different
//! conventions and are never compared; their extremum locations coincide.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{steady_amplitudes, CircuitParams, DrivenPair, MechanicalParams};
use crate::scalar::{lit, Scalar};

/// A complex observable sampled at one drive frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResponse<T> {
    pub omega_s: T,
    pub value: Complex<T>,
}

/// A real power sample. `singular_limit` marks the zero-resistance
/// pump-resonance point where the returned value is the analytic limit
/// rather than a direct evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample<T> {
    pub value: T,
    pub singular_limit: bool,
}

fn check_drive_frequency<T: Scalar>(omega_s: T) -> Result<()> {
    if omega_s.is_finite() && omega_s > T::zero() {
        Ok(())
    } else {
        Err(Error::domain("omega_s", "must be finite and > 0"))
    }
}

/// Complex amplitude of the driven coordinate for an explicit coefficient
/// pair. This is the shared backend of [`probe_amplitude`] and of the
/// electrical steady state used by the oracle comparisons.
pub(crate) fn driven_amplitude<T: Scalar>(
    pair: &DrivenPair<T>,
    omega_s: T,
    floor: T,
) -> Result<Complex<T>> {
    check_drive_frequency(omega_s)?;
    let (d_pump, den, _) = steady_amplitudes(pair, omega_s);
    if den.norm() < floor {
        let (lo, hi) = pair.undamped_modes();
        let ws = omega_s.to_f64().unwrap_or(f64::NAN);
        let (lo, hi) = (lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN));
        let mode = if (ws - lo).abs() <= (ws - hi).abs() { lo } else { hi };
        return Err(Error::Singularity {
            omega_s: ws,
            mode_omega: mode,
        });
    }
    let mut n = d_pump * pair.accel / den;
    if pair.phase != T::zero() {
        n = n * Complex::from_polar(T::one(), -pair.phase);
    }
    Ok(n)
}

/// Steady-state complex amplitude of the driven oscillator (the probe
/// response). The dispersive observable is `Re(N)`.
pub fn probe_amplitude<T: Scalar>(
    p: &MechanicalParams<T>,
    omega_s: T,
) -> Result<ComplexResponse<T>> {
    probe_amplitude_with_floor(p, omega_s, T::denominator_floor())
}

/// [`probe_amplitude`] with an explicit singularity floor on the denominator
/// magnitude.
pub fn probe_amplitude_with_floor<T: Scalar>(
    p: &MechanicalParams<T>,
    omega_s: T,
    floor: T,
) -> Result<ComplexResponse<T>> {
    let pair = p.driven_pair()?;
    Ok(ComplexResponse {
        omega_s,
        value: driven_amplitude(&pair, omega_s, floor)?,
    })
}

/// Complex power absorbed by the driven oscillator over one drive period:
/// `P_s = -2 pi i omega_s F N`. The absorption observable is `Re(P_s)`.
pub fn probe_power<T: Scalar>(p: &MechanicalParams<T>, omega_s: T) -> Result<ComplexResponse<T>> {
    let n = probe_amplitude(p, omega_s)?;
    let two_pi = lit::<T>(2.0) * T::PI();
    let prefactor = Complex::new(T::zero(), -(two_pi * omega_s * p.force));
    Ok(ComplexResponse {
        omega_s,
        value: prefactor * n.value,
    })
}

fn mesh_reactances<T: Scalar>(c: &CircuitParams<T>, omega_s: T) -> (T, T) {
    let x1 = omega_s * c.l1 - (omega_s * c.c_e1()).recip();
    let x2 = omega_s * c.l2 - (omega_s * c.c_e2()).recip();
    (x1, x2)
}

/// Power transferred from the source to the driven mesh with the pump branch
/// switched in.
///
/// At the zero-resistance pump resonance (`R1 = 0`, `X1 = 0`) the expression
/// is indeterminate; the analytic limit is zero — that point is the
/// transparency center — and is returned with `singular_limit` set.
pub fn circuit_power_closed<T: Scalar>(
    c: &CircuitParams<T>,
    omega_s: T,
) -> Result<PowerSample<T>> {
    c.derived()?;
    check_drive_frequency(omega_s)?;
    let (x1, x2) = mesh_reactances(c, omega_s);
    let pump_mag_sq = c.r1 * c.r1 + x1 * x1;
    if pump_mag_sq == T::zero() {
        return Ok(PowerSample {
            value: T::zero(),
            singular_limit: true,
        });
    }
    let reflected = (omega_s * c.coupling).recip().powi(2) / pump_mag_sq;
    let p1 = c.r2 + c.r1 * reflected;
    let p2 = x2 - x1 * reflected;
    let den = p1 * p1 + p2 * p2;
    if den == T::zero() {
        let mode = (c.l2 * c.c_e2()).recip().sqrt();
        return Err(Error::Singularity {
            omega_s: omega_s.to_f64().unwrap_or(f64::NAN),
            mode_omega: mode.to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = c.source_amplitude;
    Ok(PowerSample {
        value: p1 * a * a / den,
        singular_limit: false,
    })
}

/// Power transferred to the driven mesh with the pump branch switched out:
/// a single resonance peaked exactly at `omega_s = 1/sqrt(L2 Ce2)` with value
/// `|As|^2 / R2`.
pub fn circuit_power_open<T: Scalar>(c: &CircuitParams<T>, omega_s: T) -> Result<T> {
    c.derived()?;
    check_drive_frequency(omega_s)?;
    let (_, x2) = mesh_reactances(c, omega_s);
    let den = c.r2 * c.r2 + x2 * x2;
    if den == T::zero() {
        let mode = (c.l2 * c.c_e2()).recip().sqrt();
        return Err(Error::Singularity {
            omega_s: omega_s.to_f64().unwrap_or(f64::NAN),
            mode_omega: mode.to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = c.source_amplitude;
    Ok(c.r2 * a * a / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tuned_mech(omega_r: f64) -> MechanicalParams<f64> {
        MechanicalParams {
            m1: 1.0,
            m2: 1.0,
            k1: 4.0 - omega_r * omega_r,
            k2: 4.0 - omega_r * omega_r,
            coupling: omega_r * omega_r,
            gamma1: 0.04,
            gamma2: 1e-7,
            force: 0.1,
            phase: 0.0,
        }
    }

    fn table2_circuit(coupling: f64) -> CircuitParams<f64> {
        CircuitParams {
            r1: 0.0,
            r2: 51.7,
            l1: 1e-3,
            l2: 1e-3,
            c1: 1e-7,
            c2: 1e-7,
            coupling,
            source_amplitude: 1.0,
            switch_closed: true,
        }
    }

    #[test]
    fn transparency_zero_is_exact() {
        // undamped pump driven at its own resonance: the numerator vanishes
        let mut p = tuned_mech(0.1);
        p.gamma2 = 0.0;
        let n = probe_amplitude(&p, 2.0).unwrap();
        assert_eq!(n.value, Complex::new(0.0, 0.0));
        let ps = probe_power(&p, 2.0).unwrap();
        assert_eq!(ps.value, Complex::new(0.0, 0.0));
    }

    #[test]
    fn uncoupled_resonant_amplitude_is_quadrature() {
        let mut p = tuned_mech(0.0);
        p.k1 = 4.0;
        p.k2 = 4.0;
        // N = F/(m gamma1 omega) * i
        let n = probe_amplitude(&p, 2.0).unwrap();
        assert_relative_eq!(n.value.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(n.value.im, 1.25, max_relative = 1e-13);
    }

    #[test]
    fn uncoupled_resonant_power_simplifies() {
        let mut p = tuned_mech(0.0);
        p.k1 = 4.0;
        p.k2 = 4.0;
        // algebraic simplification at resonance: Re(P_s) = 2 pi F^2/(m gamma1)
        let ps = probe_power(&p, 2.0).unwrap();
        assert_relative_eq!(ps.value.re, PI / 2.0, max_relative = 1e-13);
        assert_relative_eq!(ps.value.im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn power_is_amplitude_times_prefactor() {
        let p = tuned_mech(0.3);
        for omega_s in [1.6, 1.95, 2.0, 2.31] {
            let n = probe_amplitude(&p, omega_s).unwrap().value;
            let ps = probe_power(&p, omega_s).unwrap().value;
            let expect = Complex::new(0.0, -2.0 * PI * omega_s * p.force) * n;
            assert_relative_eq!(ps.re, expect.re, max_relative = 1e-14);
            assert_relative_eq!(ps.im, expect.im, max_relative = 1e-14);
        }
    }

    #[test]
    fn undamped_drive_at_mode_is_singular() {
        let mut p = tuned_mech(0.0);
        p.k1 = 4.0;
        p.k2 = 4.0;
        p.gamma1 = 0.0;
        p.gamma2 = 0.0;
        match probe_amplitude(&p, 2.0).unwrap_err() {
            Error::Singularity { mode_omega, .. } => {
                assert_relative_eq!(mode_omega, 2.0, max_relative = 1e-12)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn drive_phase_rotates_the_amplitude() {
        let mut p = tuned_mech(0.2);
        let base = probe_amplitude(&p, 2.1).unwrap().value;
        p.phase = 0.7;
        let rotated = probe_amplitude(&p, 2.1).unwrap().value;
        let expect = base * Complex::from_polar(1.0, -0.7);
        assert_relative_eq!(rotated.re, expect.re, max_relative = 1e-14);
        assert_relative_eq!(rotated.im, expect.im, max_relative = 1e-14);
    }

    #[test]
    fn open_pump_mesh_reduces_closed_to_open_formula() {
        let mut c = table2_circuit(1.96e-7);
        c.r1 = 1e12;
        let grid: Vec<f64> = (0..200).map(|i| 8e4 + 700.0 * i as f64).collect();
        for ws in grid {
            let closed = circuit_power_closed(&c, ws).unwrap().value;
            let open = circuit_power_open(&c, ws).unwrap();
            assert_relative_eq!(closed, open, max_relative = 1e-9);
        }
    }

    #[test]
    fn zero_resistance_pump_resonance_returns_limit() {
        // exact representable pump resonance: L1 = 1, Ce1 = 1 at omega_s = 1
        let c = CircuitParams {
            r1: 0.0,
            r2: 2.0,
            l1: 1.0,
            l2: 1.0,
            c1: 2.0,
            c2: 2.0,
            coupling: 2.0,
            source_amplitude: 1.0,
            switch_closed: true,
        };
        let s = circuit_power_closed(&c, 1.0).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.singular_limit);
        // off the exact point the evaluation is direct
        let s = circuit_power_closed(&c, 1.01).unwrap();
        assert!(!s.singular_limit && s.value > 0.0);
    }

    #[test]
    fn near_pump_resonance_power_vanishes_continuously() {
        let c = table2_circuit(1.96e-7);
        let pump_res = (c.l1 * c.c_e1()).recip().sqrt();
        let p = circuit_power_closed(&c, pump_res).unwrap();
        let open_peak = 1.0 / c.r2;
        assert!(p.value <= 1e-12 * open_peak, "P2 = {}", p.value);
    }

    #[test]
    fn open_switch_peak_location_and_height() {
        let c = table2_circuit(1.96e-7);
        let res = (c.l2 * c.c_e2()).recip().sqrt();
        let peak = circuit_power_open(&c, res).unwrap();
        assert_relative_eq!(peak, 1.0 / 51.7, max_relative = 1e-9);
        // peak frequency within 5% of the stated 20.0 kHz
        let f = res / (2.0 * PI);
        assert!((f - 20_000.0).abs() / 20_000.0 < 0.05);
        for off in [0.9, 0.95, 1.05, 1.1] {
            assert!(circuit_power_open(&c, res * off).unwrap() < peak);
        }
    }

    #[test]
    fn open_switch_blocks_dc() {
        let c = table2_circuit(1.96e-7);
        assert!(circuit_power_open(&c, 1e-6).unwrap() < 1e-20);
        assert!(circuit_power_open(&c, 0.0).is_err());
    }

    #[test]
    fn zero_r2_at_resonance_is_singular() {
        let mut c = CircuitParams {
            r1: 0.0,
            r2: 0.0,
            l1: 1.0,
            l2: 1.0,
            c1: 2.0,
            c2: 2.0,
            coupling: 2.0,
            source_amplitude: 1.0,
            switch_closed: false,
        };
        assert!(matches!(
            circuit_power_open(&c, 1.0).unwrap_err(),
            Error::Singularity { .. }
        ));
        c.r2 = 0.0;
        // off resonance a lossless mesh simply absorbs nothing
        assert_eq!(circuit_power_open(&c, 1.3).unwrap(), 0.0);
    }
}
