//! Built-in parameter sets for the canonical transparency measurements.
//!
//! The `fig3` family is the mechanical picture with the equation frequency
//! pinned at `omega = 2.0` (so `k = 4 - Omega_r^2`, `K = Omega_r^2`, `m = 1`)
//! and drive `F/m = 0.1`. The damping assignment puts 0.04 on the driven
//! oscillator and 1e-7 on the pump — the pump must dissipate much less than
//! the probe for the dip to survive; `fig3-literal` keeps the opposite
//! assignment for comparison and shows no transparency.
//!
//! The `fig6` family is the electrical picture with the component table
//! `R1 = 0`, `R2 = 51.7`, `L = 1000 uH`, `C1 = C2 = 0.1 uF` and four coupling
//! capacitors stepping from the dip regime into the resolved doublet.

use eitsim_core::{CircuitParams64, FrequencyGrid64, MechanicalParams64, Params64};

use crate::config::Preset;

fn fig3(name: &str, omega_r: f64, gamma_driven: f64, gamma_pump: f64, notes: &str) -> Preset {
    Preset {
        name: name.into(),
        params: Params64::Mechanical(MechanicalParams64 {
            m1: 1.0,
            m2: 1.0,
            k1: 4.0 - omega_r * omega_r,
            k2: 4.0 - omega_r * omega_r,
            coupling: omega_r * omega_r,
            gamma1: gamma_driven,
            gamma2: gamma_pump,
            force: 0.1,
            phase: 0.0,
        }),
        grid: FrequencyGrid64 {
            start: 1.5,
            stop: 2.5,
            points: 2001,
        },
        notes: notes.into(),
    }
}

fn fig6(name: &str, coupling: f64, stop: f64, notes: &str) -> Preset {
    Preset {
        name: name.into(),
        params: Params64::Electrical(CircuitParams64 {
            r1: 0.0,
            r2: 51.7,
            l1: 1e-3,
            l2: 1e-3,
            c1: 1e-7,
            c2: 1e-7,
            coupling,
            source_amplitude: 1.0,
            switch_closed: true,
        }),
        grid: FrequencyGrid64 {
            start: 80_000.0,
            stop,
            points: 2001,
        },
        notes: notes.into(),
    }
}

/// All built-in presets.
pub fn builtin() -> Vec<Preset> {
    vec![
        fig3(
            "fig3a",
            0.0,
            0.04,
            1e-7,
            "uncoupled reference: single absorption peak at omega_s = 2.0",
        ),
        fig3(
            "fig3b",
            0.1,
            0.04,
            1e-7,
            "transparency regime: narrow dip at omega_s = 2.0; damping 0.04 on the \
             driven oscillator, 1e-7 on the pump (swapped relative to the literal \
             listing, which kills the dip; see fig3-literal)",
        ),
        fig3("fig3c", 0.2, 0.04, 1e-7, "coupling 0.2: dip widening"),
        fig3("fig3d", 0.3, 0.04, 1e-7, "coupling 0.3: doublet forming"),
        fig3("fig3e", 0.4, 0.04, 1e-7, "coupling 0.4: doublet nearly resolved"),
        fig3(
            "fig3f",
            0.5,
            0.04,
            1e-7,
            "resolved doublet: peaks at sqrt(4 +- 0.25), splitting ~ 0.1251",
        ),
        fig3(
            "fig3-literal",
            0.1,
            1e-7,
            0.04,
            "literal damping assignment (driven 1e-7, pump 0.04); violates \
             gamma_pump << gamma_driven and shows no transparency dip",
        ),
        fig6(
            "fig6a",
            0.196e-6,
            220_000.0,
            "C = 0.196 uF: open-switch resonance computed 19.56 kHz (stated 20.0 kHz); \
             closed switch shows the transparency dip",
        ),
        fig6(
            "fig6b",
            0.150e-6,
            220_000.0,
            "C = 0.150 uF: open-switch resonance computed 20.55 kHz (stated 19.5 kHz)",
        ),
        fig6(
            "fig6c",
            0.096e-6,
            220_000.0,
            "C = 0.096 uF: open-switch resonance computed 22.74 kHz (stated 21.5 kHz)",
        ),
        fig6(
            "fig6d",
            0.050e-6,
            260_000.0,
            "C = 0.050 uF: open-switch resonance computed 27.57 kHz (stated 26.5 kHz); \
             closed switch shows the resolved doublet",
        ),
    ]
}

/// Looks up a built-in preset by name.
pub fn find(name: &str) -> Option<Preset> {
    builtin().into_iter().find(|p| p.name == name)
}
