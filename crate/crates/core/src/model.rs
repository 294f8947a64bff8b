//! Parameter sets for the mechanical and electrical pictures, derived
//! frequencies, normal modes, and the role-based translation between the two
//! pictures.
//!
//! Conventions. In the mechanical picture oscillator 1 is the driven (probe)
//! oscillator and oscillator 2 is the pump; in the electrical picture mesh 2
//! is driven by the source and mesh 1 is the pump. All translations map by
//! role, not by index: the driven oscillator corresponds to the driven mesh.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Which physical picture a parameter set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Mechanical,
    Electrical,
}

impl Picture {
    pub fn name(self) -> &'static str {
        match self {
            Picture::Mechanical => "mechanical",
            Picture::Electrical => "electrical",
        }
    }
}

/// Two coupled damped mass-spring oscillators with a harmonic force on
/// oscillator 1.
///
/// Equations of motion (driven coordinate `x1`, pump coordinate `x2`):
///
/// ```text
/// x1'' + gamma1 x1' + omega1^2 x1 - (K/m1) x2 = (F/m1) cos(omega_s t + phi_s)
/// x2'' + gamma2 x2' + omega2^2 x2 - (K/m2) x1 = 0
/// ```
///
/// with `omega_i^2 = (k_i + K)/m_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalParams<T> {
    /// Mass of the driven oscillator (`m1`, > 0).
    pub m1: T,
    /// Mass of the pump oscillator (`m2`, > 0).
    pub m2: T,
    /// Wall spring constant of the driven oscillator (`k1`, >= 0).
    pub k1: T,
    /// Wall spring constant of the pump oscillator (`k2`, >= 0).
    pub k2: T,
    /// Coupling spring constant (`K`, >= 0).
    pub coupling: T,
    /// Damping rate of the driven oscillator (`gamma1`, >= 0).
    pub gamma1: T,
    /// Damping rate of the pump oscillator (`gamma2`, >= 0).
    pub gamma2: T,
    /// Drive force amplitude (`F`, >= 0).
    pub force: T,
    /// Drive phase in radians (`phi_s`).
    pub phase: T,
}

/// Two coupled RLC meshes sharing the coupling capacitor `C`, with a voltage
/// source in mesh 2.
///
/// Mesh equations for the charges (pump mesh `q1`, driven mesh `q2`):
///
/// ```text
/// q1'' + (R1/L1) q1' + q1/(L1 Ce1) - q2/(L1 C) = 0
/// q2'' + (R2/L2) q2' + q2/(L2 Ce2) - q1/(L2 C) = As/L2 cos(omega_s t)
/// ```
///
/// where `Ce_i` is the series combination of `C` and `C_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams<T> {
    /// Pump mesh resistance (`R1`, ohm, >= 0).
    pub r1: T,
    /// Driven mesh resistance (`R2`, ohm, >= 0).
    pub r2: T,
    /// Pump mesh inductance (`L1`, henry, > 0).
    pub l1: T,
    /// Driven mesh inductance (`L2`, henry, > 0).
    pub l2: T,
    /// Pump mesh capacitance (`C1`, farad, > 0).
    pub c1: T,
    /// Driven mesh capacitance (`C2`, farad, > 0).
    pub c2: T,
    /// Coupling capacitance (`C`, farad, > 0; `+inf` is the rigid,
    /// decoupled limit).
    pub coupling: T,
    /// Source voltage amplitude (`As`, volt, >= 0).
    pub source_amplitude: T,
    /// Pump branch switch; open disconnects the pump mesh.
    pub switch_closed: bool,
}

/// Parameter set of either picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params<T> {
    Mechanical(MechanicalParams<T>),
    Electrical(CircuitParams<T>),
}

/// Secondary quantities shared by both pictures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies<T> {
    /// Squared natural frequency of the driven oscillator / driven mesh.
    pub omega1_sq: T,
    /// Squared natural frequency of the pump oscillator / pump mesh.
    pub omega2_sq: T,
    /// Squared coupling frequency `Omega_r^2`.
    pub omega_r_sq: T,
    /// Equivalent capacitance of the pump mesh (electrical picture only).
    pub c_e1: Option<T>,
    /// Equivalent capacitance of the driven mesh (electrical picture only).
    pub c_e2: Option<T>,
}

/// Normal modes of the undamped degenerate system: `omega_pm^2 = omega^2 +- Omega_r^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModes<T> {
    pub omega_minus: T,
    pub omega_plus: T,
    pub splitting: T,
}

/// Coefficients of the coupled system in role order, shared by the closed
/// forms and the integrator.
///
/// ```text
/// xd'' + gamma_d xd' + omega_d_sq xd - coupling_d xp = accel cos(omega_s t + phase)
/// xp'' + gamma_p xp' + omega_p_sq xp - coupling_p xd = 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenPair<T> {
    pub gamma_d: T,
    pub omega_d_sq: T,
    pub coupling_d: T,
    pub gamma_p: T,
    pub omega_p_sq: T,
    pub coupling_p: T,
    /// Drive acceleration amplitude: `F/m1` or `As/L2`.
    pub accel: T,
    /// Drive phase in radians.
    pub phase: T,
}

/// Result of a role-based picture translation. `scale` is the inductance
/// assigned per unit mass; feeding the same scale to the inverse map
/// reproduces the original parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Translation<P, T> {
    pub params: P,
    pub scale: T,
}

/// Relative tolerance for the degeneracy check in [`normal_modes`].
pub const DEGENERACY_RTOL: f64 = 1e-9;

fn check_finite<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, "must be finite"))
    }
}

fn check_positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    check_finite(name, v)?;
    if v > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(name, "must be > 0"))
    }
}

fn check_non_negative<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    check_finite(name, v)?;
    if v >= T::zero() {
        Ok(())
    } else {
        Err(Error::domain(name, "must be >= 0"))
    }
}

impl<T: Scalar> MechanicalParams<T> {
    /// Checks the type invariants.
    pub fn validate(&self) -> Result<()> {
        check_positive("m1", self.m1)?;
        check_positive("m2", self.m2)?;
        check_non_negative("k1", self.k1)?;
        check_non_negative("k2", self.k2)?;
        check_non_negative("K", self.coupling)?;
        if self.k1 + self.coupling <= T::zero() {
            return Err(Error::domain(
                "k1",
                "k1 + K must be > 0 (driven oscillator needs a restoring force)",
            ));
        }
        check_non_negative("gamma1", self.gamma1)?;
        check_non_negative("gamma2", self.gamma2)?;
        check_non_negative("F", self.force)?;
        check_finite("phi_s", self.phase)?;
        Ok(())
    }

    /// Natural and coupling frequencies.
    ///
    /// `omega_i^2 = (k_i + K)/m_i`. The coupling frequency squared is
    /// `K/sqrt(m1 m2)`, the geometric mean of the per-equation coupling
    /// coefficients `K/m1` and `K/m2`; it reduces to `K/m` for equal masses
    /// and is exactly the quantity whose square enters the response
    /// denominators.
    pub fn derived(&self) -> Result<DerivedFrequencies<T>> {
        self.validate()?;
        if self.k2 + self.coupling <= T::zero() {
            return Err(Error::domain(
                "k2",
                "k2 + K must be > 0 (pump oscillator needs a restoring force)",
            ));
        }
        Ok(DerivedFrequencies {
            omega1_sq: (self.k1 + self.coupling) / self.m1,
            omega2_sq: (self.k2 + self.coupling) / self.m2,
            omega_r_sq: self.coupling / (self.m1 * self.m2).sqrt(),
            c_e1: None,
            c_e2: None,
        })
    }

    /// Role-ordered system coefficients (driven oscillator first).
    pub fn driven_pair(&self) -> Result<DrivenPair<T>> {
        let d = self.derived()?;
        Ok(DrivenPair {
            gamma_d: self.gamma1,
            omega_d_sq: d.omega1_sq,
            coupling_d: self.coupling / self.m1,
            gamma_p: self.gamma2,
            omega_p_sq: d.omega2_sq,
            coupling_p: self.coupling / self.m2,
            accel: self.force / self.m1,
            phase: self.phase,
        })
    }
}

impl<T: Scalar> CircuitParams<T> {
    /// Checks the type invariants.
    pub fn validate(&self) -> Result<()> {
        check_non_negative("R1", self.r1)?;
        check_non_negative("R2", self.r2)?;
        check_positive("L1", self.l1)?;
        check_positive("L2", self.l2)?;
        check_positive("C1", self.c1)?;
        check_positive("C2", self.c2)?;
        // +inf is allowed: a rigid short, i.e. no coupling.
        if !(self.coupling > T::zero()) {
            return Err(Error::domain("C", "must be > 0"));
        }
        check_non_negative("As", self.source_amplitude)?;
        Ok(())
    }

    /// Series combination of the coupling capacitor with the pump mesh
    /// capacitor: `Ce1 = C C1/(C + C1)`.
    pub fn c_e1(&self) -> T {
        series_capacitance(self.coupling, self.c1)
    }

    /// Series combination of the coupling capacitor with the driven mesh
    /// capacitor: `Ce2 = C C2/(C + C2)`.
    pub fn c_e2(&self) -> T {
        series_capacitance(self.coupling, self.c2)
    }

    /// Natural and coupling frequencies.
    ///
    /// `gamma_i = R_i/L_i`, `omega_i^2 = 1/(L_i Ce_i)`. The coupling
    /// frequency squared is `1/(C sqrt(L1 L2))`, which reduces to `1/(L2 C)`
    /// for equal inductances.
    pub fn derived(&self) -> Result<DerivedFrequencies<T>> {
        self.validate()?;
        let c_e1 = self.c_e1();
        let c_e2 = self.c_e2();
        for (name, ce, shunt) in [("C1", c_e1, self.c1), ("C2", c_e2, self.c2)] {
            if !(ce > T::zero() && ce.is_finite() && ce <= shunt.min(self.coupling)) {
                return Err(Error::domain(
                    name,
                    "equivalent series capacitance must be positive, finite and no larger \
                     than either series element",
                ));
            }
        }
        Ok(DerivedFrequencies {
            // role order: index 1 = driven mesh 2, index 2 = pump mesh 1
            omega1_sq: (self.l2 * c_e2).recip(),
            omega2_sq: (self.l1 * c_e1).recip(),
            omega_r_sq: (self.coupling * (self.l1 * self.l2).sqrt()).recip(),
            c_e1: Some(c_e1),
            c_e2: Some(c_e2),
        })
    }

    /// Role-ordered system coefficients (driven mesh first).
    pub fn driven_pair(&self) -> Result<DrivenPair<T>> {
        let d = self.derived()?;
        Ok(DrivenPair {
            gamma_d: self.r2 / self.l2,
            omega_d_sq: d.omega1_sq,
            coupling_d: (self.l2 * self.coupling).recip(),
            gamma_p: self.r1 / self.l1,
            omega_p_sq: d.omega2_sq,
            coupling_p: (self.l1 * self.coupling).recip(),
            accel: self.source_amplitude / self.l2,
            phase: T::zero(),
        })
    }
}

/// `1/(1/a + 1/b)`; well defined for `a = +inf` (gives `b`).
fn series_capacitance<T: Scalar>(a: T, b: T) -> T {
    (a.recip() + b.recip()).recip()
}

impl<T: Scalar> Params<T> {
    pub fn picture(&self) -> Picture {
        match self {
            Params::Mechanical(_) => Picture::Mechanical,
            Params::Electrical(_) => Picture::Electrical,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Params::Mechanical(m) => m.validate(),
            Params::Electrical(c) => c.validate(),
        }
    }

    pub fn derived(&self) -> Result<DerivedFrequencies<T>> {
        match self {
            Params::Mechanical(m) => m.derived(),
            Params::Electrical(c) => c.derived(),
        }
    }

    pub fn driven_pair(&self) -> Result<DrivenPair<T>> {
        match self {
            Params::Mechanical(m) => m.driven_pair(),
            Params::Electrical(c) => c.driven_pair(),
        }
    }
}

impl<T: Scalar> DrivenPair<T> {
    /// Largest natural frequency, used by integration resolution guards.
    pub fn omega_max(&self) -> T {
        self.omega_d_sq.max(self.omega_p_sq).sqrt()
    }

    /// Undamped normal-mode frequencies, valid for any detuning: the
    /// eigenfrequencies of the stiffness matrix
    /// `[[omega_d^2, -coupling_d], [-coupling_p, omega_p_sq]]`.
    pub(crate) fn undamped_modes(&self) -> (T, T) {
        let half = lit::<T>(0.5);
        let mean = (self.omega_d_sq + self.omega_p_sq) * half;
        let diff = (self.omega_d_sq - self.omega_p_sq) * half;
        let disc = (diff * diff + self.coupling_d * self.coupling_p).sqrt();
        let lo = (mean - disc).max(T::zero());
        ((lo).sqrt(), (mean + disc).sqrt())
    }
}

/// Derives natural, coupling and (electrical picture) equivalent-capacitance
/// quantities from either parameter set.
pub fn derive_frequencies<T: Scalar>(params: &Params<T>) -> Result<DerivedFrequencies<T>> {
    params.derived()
}

/// Normal modes of the undamped degenerate system.
///
/// Requires `omega1 = omega2` (to [`DEGENERACY_RTOL`]) and `omega^2 >
/// Omega_r^2`; non-degenerate input is rejected rather than silently
/// generalized.
pub fn normal_modes<T: Scalar>(d: &DerivedFrequencies<T>) -> Result<NormalModes<T>> {
    let scale = d.omega1_sq.abs().max(d.omega2_sq.abs());
    let tol = lit::<T>(DEGENERACY_RTOL);
    if (d.omega1_sq - d.omega2_sq).abs() > tol * scale {
        return Err(Error::NonDegenerate {
            omega1_sq: d.omega1_sq.to_f64().unwrap_or(f64::NAN),
            omega2_sq: d.omega2_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    let omega_sq = (d.omega1_sq + d.omega2_sq) * lit::<T>(0.5);
    if omega_sq <= d.omega_r_sq {
        return Err(Error::OverdampedMode {
            omega_sq: omega_sq.to_f64().unwrap_or(f64::NAN),
            omega_r_sq: d.omega_r_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    let omega_minus = (omega_sq - d.omega_r_sq).sqrt();
    let omega_plus = (omega_sq + d.omega_r_sq).sqrt();
    Ok(NormalModes {
        omega_minus,
        omega_plus,
        splitting: omega_plus - omega_minus,
    })
}

/// Complex amplitude of the driven coordinate for the coupled pair under the
/// `exp(-i omega_s t)` convention, without singularity handling. Used by the
/// response module and by settling estimates.
pub(crate) fn steady_amplitudes<T: Scalar>(
    pair: &DrivenPair<T>,
    omega_s: T,
) -> (Complex<T>, Complex<T>, Complex<T>) {
    let ws_sq = omega_s * omega_s;
    let d_d = Complex::new(pair.omega_d_sq - ws_sq, -pair.gamma_d * omega_s);
    let d_p = Complex::new(pair.omega_p_sq - ws_sq, -pair.gamma_p * omega_s);
    let den = d_d * d_p - Complex::from(pair.coupling_d * pair.coupling_p);
    (d_p, den, d_d)
}

/// Translates mechanical parameters to the electrical picture with unit
/// scale (one henry per unit mass). See [`mech_to_circuit_scaled`].
pub fn mech_to_circuit<T: Scalar>(
    m: &MechanicalParams<T>,
) -> Result<Translation<CircuitParams<T>, T>> {
    mech_to_circuit_scaled(m, T::one())
}

/// Role-based translation to the electrical picture.
///
/// The driven oscillator maps to the driven mesh and the pump oscillator to
/// the pump mesh: `L2 = scale m1`, `L1 = scale m2`, `C2 = 1/(scale k1)`,
/// `C1 = 1/(scale k2)`, `C = 1/(scale K)`, `R2 = gamma1 L2`, `R1 = gamma2 L1`
/// and `As = scale F`. Angular frequencies are preserved exactly for any
/// positive scale. The drive phase has no electrical image and must be zero;
/// zero spring constants have no finite capacitance image.
pub fn mech_to_circuit_scaled<T: Scalar>(
    m: &MechanicalParams<T>,
    scale: T,
) -> Result<Translation<CircuitParams<T>, T>> {
    m.validate()?;
    check_positive("scale", scale)?;
    if m.phase != T::zero() {
        return Err(Error::Mapping(format!(
            "drive phase phi_s = {} has no electrical image; set phi_s = 0",
            m.phase
        )));
    }
    for (name, k) in [("k1", m.k1), ("k2", m.k2), ("K", m.coupling)] {
        if k <= T::zero() {
            return Err(Error::Mapping(format!(
                "{name} = 0 maps to an infinite capacitance; no finite electrical image"
            )));
        }
    }
    let l2 = scale * m.m1;
    let l1 = scale * m.m2;
    Ok(Translation {
        params: CircuitParams {
            r1: m.gamma2 * l1,
            r2: m.gamma1 * l2,
            l1,
            l2,
            c1: (scale * m.k2).recip(),
            c2: (scale * m.k1).recip(),
            coupling: (scale * m.coupling).recip(),
            source_amplitude: scale * m.force,
            switch_closed: true,
        },
        scale,
    })
}

/// Translates circuit parameters to the mechanical picture with unit scale.
/// See [`circuit_to_mech_scaled`].
pub fn circuit_to_mech<T: Scalar>(
    c: &CircuitParams<T>,
) -> Result<Translation<MechanicalParams<T>, T>> {
    circuit_to_mech_scaled(c, T::one())
}

/// Inverse of [`mech_to_circuit_scaled`] under the same role convention.
///
/// An open switch clamps the pump mesh, which the two-oscillator mechanical
/// model cannot express, so open-switch input is rejected. `C = +inf`
/// translates to `K = 0` (decoupled oscillators).
pub fn circuit_to_mech_scaled<T: Scalar>(
    c: &CircuitParams<T>,
    scale: T,
) -> Result<Translation<MechanicalParams<T>, T>> {
    c.validate()?;
    check_positive("scale", scale)?;
    if !c.switch_closed {
        return Err(Error::Mapping(
            "an open switch clamps the pump mesh and has no two-oscillator mechanical \
             image; close the switch"
                .into(),
        ));
    }
    Ok(Translation {
        params: MechanicalParams {
            m1: c.l2 / scale,
            m2: c.l1 / scale,
            k1: (scale * c.c2).recip(),
            k2: (scale * c.c1).recip(),
            coupling: (scale * c.coupling).recip(),
            gamma1: c.r2 / c.l2,
            gamma2: c.r1 / c.l1,
            force: c.source_amplitude / scale,
            phase: T::zero(),
        },
        scale,
    })
}
