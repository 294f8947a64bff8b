//! Acceptance suite. One test per criterion; every checked clause prints a
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them all), and the
//! test fails if any clause does.
//!
//! Known red: two of the four reference resonance frequencies in criterion 4
//! sit 5.4% and 5.8% away from what the nominal component values predict, so
//! that criterion fails by construction of the reference data. See the
//! preset notes and README.

use std::time::Instant;

use eitsim::presets::find;
use eitsim_core::{
    circuit_power_closed, dispersion_slope, find_extrema, normal_modes, phase_features,
    probe_amplitude, probe_power, sweep, timedomain, CircuitParams64, FrequencyGrid64,
    IntegrationConfig, Observable, Params64,
};

struct Checker {
    name: &'static str,
    failures: Vec<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, label: &str, ok: bool, detail: String) {
        println!(
            "[{}] {} / {}: {}",
            if ok { "PASS" } else { "FAIL" },
            self.name,
            label,
            detail
        );
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "{}: failing checks: {:?}",
            self.name,
            self.failures
        );
    }
}

fn mech_of(name: &str) -> eitsim_core::MechanicalParams64 {
    match find(name).unwrap().params {
        Params64::Mechanical(m) => m,
        _ => panic!("{name} is not mechanical"),
    }
}

fn circuit_of(name: &str) -> CircuitParams64 {
    match find(name).unwrap().params {
        Params64::Electrical(c) => c,
        _ => panic!("{name} is not electrical"),
    }
}

#[test]
fn criterion_1_exact_transparency() {
    let mut c = Checker::new("criterion 1 exact transparency");

    // mechanical: lossless pump driven at its resonance
    let mut m = mech_of("fig3b");
    m.gamma2 = 0.0;
    let n = probe_amplitude(&m, 2.0).unwrap().value;
    let ps = probe_power(&m, 2.0).unwrap().value;
    let resonant_amp = 0.1 / (0.04 * 2.0); // uncoupled resonant |N|
    let resonant_pow = std::f64::consts::FRAC_PI_2; // uncoupled resonant Re(P_s)
    c.check(
        "N(omega) = 0 for gamma2 = 0",
        n.norm() <= 1e-12 * resonant_amp,
        format!("|N| = {:.3e}", n.norm()),
    );
    c.check(
        "Re(P_s)(omega) = 0 for gamma2 = 0",
        ps.re.abs() <= 1e-12 * resonant_pow,
        format!("Re(P_s) = {:.3e}", ps.re),
    );

    // electrical: R1 = 0 at the pump-mesh resonance returns the limit zero
    let exact = CircuitParams64 {
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
    let s = circuit_power_closed(&exact, 1.0).unwrap();
    c.check(
        "P2 limit 0 at the exact pump resonance",
        s.value == 0.0 && s.singular_limit,
        format!("value = {}, limit flag = {}", s.value, s.singular_limit),
    );
    let fig6a = circuit_of("fig6a");
    let pump_res = (fig6a.l1 * fig6a.c_e1()).recip().sqrt();
    let p = circuit_power_closed(&fig6a, pump_res).unwrap();
    let open_peak = 1.0 / fig6a.r2;
    c.check(
        "P2 vanishes at the table-component pump resonance",
        p.value <= 1e-12 * open_peak,
        format!("P2 = {:.3e} W", p.value),
    );

    c.finish();
}

#[test]
fn criterion_2_fig3_regimes() {
    let started = Instant::now();
    let mut c = Checker::new("criterion 2 fig3 regimes");

    let sweep_of = |name: &str| {
        let p = find(name).unwrap();
        sweep(&p.params, &p.grid, Observable::Absorption).unwrap()
    };

    let f = find_extrema(&sweep_of("fig3a")).unwrap();
    c.check(
        "Omega_r = 0: single maximum at omega_s = 2.0",
        f.maxima.len() == 1 && (f.maxima[0].omega - 2.0).abs() < 2.5e-4,
        format!(
            "{} maxima, first at {:.6}",
            f.maxima.len(),
            f.maxima[0].omega
        ),
    );

    let f = find_extrema(&sweep_of("fig3b")).unwrap();
    let dip = f.dip.expect("fig3b dip");
    c.check(
        "Omega_r = 0.1: dip at omega_s = 2.0 with depth_ratio >= 0.99",
        (dip.omega - 2.0).abs() < 2.5e-4 && dip.depth_ratio >= 0.99,
        format!("dip at {:.6}, depth {:.6}", dip.omega, dip.depth_ratio),
    );

    let f = find_extrema(&sweep_of("fig3f")).unwrap();
    let split = f.splitting.expect("fig3f splitting");
    let reference = 0.12506113970512178; // sqrt(4.25) - sqrt(3.75)
    c.check(
        "Omega_r = 0.5: two maxima split by the normal-mode value within 2%",
        f.maxima.len() == 2 && (split - reference).abs() / reference < 0.02,
        format!("{} maxima, splitting {:.6}", f.maxima.len(), split),
    );

    let elapsed = started.elapsed().as_secs_f64();
    c.check("runtime under 1 s", elapsed < 1.0, format!("{elapsed:.3} s"));
    c.finish();
}

#[test]
fn criterion_3_oracle_equivalence() {
    let started = Instant::now();
    let mut c = Checker::new("criterion 3 oracle equivalence");

    for name in ["fig3a", "fig3b", "fig3f"] {
        let p = find(name).unwrap();
        let grid = FrequencyGrid64 {
            start: 1.5,
            stop: 2.5,
            points: 21,
        };
        let pts =
            timedomain::compare_with_analytic(&p.params, &grid.values(), 1e-3).unwrap();
        let max_err = pts.iter().fold(0.0f64, |m, p| m.max(p.rel_err));
        c.check(
            &format!("{name}: demodulated RK4 matches the closed form at 21 points"),
            max_err <= 1e-3,
            format!("max rel err {max_err:.3e}"),
        );
    }

    // fourth-order convergence on the uncoupled resonant case
    let mut m = mech_of("fig3a");
    m.k1 = 4.0;
    m.k2 = 4.0;
    let pair = m.driven_pair().unwrap();
    let analytic = probe_amplitude(&m, 2.0).unwrap().value;
    let mut cfg = IntegrationConfig::settled(&pair, 2.0, 1e-8).unwrap();
    let mut errs = Vec::new();
    for dt in [0.04, 0.02] {
        cfg.dt = dt;
        let d = timedomain::demodulated_response(&Params64::Mechanical(m), 2.0, &cfg).unwrap();
        errs.push((d.response.value - analytic).norm());
    }
    let ratio = errs[0] / errs[1];
    c.check(
        "dt halving shrinks the error ~16x (fourth order)",
        (12.0..=20.0).contains(&ratio),
        format!("e(dt)/e(dt/2) = {ratio:.2}"),
    );

    let elapsed = started.elapsed().as_secs_f64();
    c.check("runtime under 60 s", elapsed < 60.0, format!("{elapsed:.1} s"));
    c.finish();
}

#[test]
fn criterion_4_fig6_resonances() {
    let mut c = Checker::new("criterion 4 fig6 resonances");

    // open-switch peak frequencies against the published reference values;
    // nominal components put fig6b at +5.4% and fig6c at +5.8%, so those two
    // checks are red with the criterion's 5% gate
    let stated = [
        ("fig6a", 20.0e3),
        ("fig6b", 19.5e3),
        ("fig6c", 21.5e3),
        ("fig6d", 26.5e3),
    ];
    for (name, f_ref) in stated {
        let cp = circuit_of(name);
        let f = (cp.l2 * cp.c_e2()).recip().sqrt() / (2.0 * std::f64::consts::PI);
        let dev = (f - f_ref).abs() / f_ref;
        c.check(
            &format!("{name}: open-switch peak within 5% of {} kHz", f_ref / 1e3),
            dev <= 0.05,
            format!("computed {:.1} Hz, deviation {:.2}%", f, dev * 100.0),
        );
    }

    // closed switch: dip regime evolving into the resolved doublet
    let closed_features = |name: &str| {
        let p = find(name).unwrap();
        find_extrema(&sweep(&p.params, &p.grid, Observable::CircuitPowerClosed).unwrap()).unwrap()
    };
    let gamma2 = 51.7 / 1e-3; // driven-mesh linewidth

    let fa = closed_features("fig6a");
    let dip = fa.dip.expect("fig6a closed dip");
    c.check(
        "fig6a closed: transparency dip, splitting below the linewidth",
        dip.depth_ratio > 0.99 && fa.splitting.unwrap() < gamma2,
        format!(
            "depth {:.4}, splitting {:.0} vs gamma2 {:.0}",
            dip.depth_ratio,
            fa.splitting.unwrap(),
            gamma2
        ),
    );

    let fd = closed_features("fig6d");
    let split = fd.splitting.expect("fig6d splitting");
    let nm = normal_modes(&circuit_of("fig6d").derived().unwrap()).unwrap();
    c.check(
        "fig6d closed: resolved doublet at the normal-mode splitting",
        fd.maxima.len() == 2 && split > 2.0 * gamma2 && (split - nm.splitting).abs() / nm.splitting < 0.02,
        format!("splitting {:.0} vs modes {:.0}", split, nm.splitting),
    );

    let mut last = 0.0;
    let mut monotone = true;
    for name in ["fig6a", "fig6b", "fig6c", "fig6d"] {
        let s = closed_features(name).splitting.unwrap();
        monotone &= s > last;
        last = s;
    }
    c.check(
        "splitting grows as the coupling capacitor shrinks",
        monotone,
        format!("largest {last:.0} rad/s"),
    );

    c.finish();
}

#[test]
fn criterion_5_picture_equivalence() {
    let mut c = Checker::new("criterion 5 picture equivalence");

    for name in ["fig6a", "fig6b", "fig6c", "fig6d"] {
        let preset = find(name).unwrap();
        let circuit = circuit_of(name);
        let mech = eitsim_core::circuit_to_mech(&circuit).unwrap().params;
        let grid = FrequencyGrid64 {
            start: preset.grid.start,
            stop: preset.grid.stop,
            points: 10_001,
        };
        let elec_extrema = find_extrema(
            &sweep(&Params64::Electrical(circuit), &grid, Observable::CircuitPowerClosed)
                .unwrap(),
        )
        .unwrap();
        let mech_extrema = find_extrema(
            &sweep(&Params64::Mechanical(mech), &grid, Observable::Absorption).unwrap(),
        )
        .unwrap();
        let step = grid.step();
        let mut ok = elec_extrema.maxima.len() == mech_extrema.maxima.len()
            && elec_extrema.minima.len() == mech_extrema.minima.len();
        let mut worst: f64 = 0.0;
        if ok {
            for (a, b) in elec_extrema
                .maxima
                .iter()
                .chain(&elec_extrema.minima)
                .zip(mech_extrema.maxima.iter().chain(&mech_extrema.minima))
            {
                worst = worst.max((a.omega - b.omega).abs());
            }
            ok = worst <= step;
        }
        c.check(
            &format!("{name}: extrema of Re(P_s) and P2 coincide within one grid step"),
            ok,
            format!(
                "{} maxima / {} minima, worst offset {:.3} of a step",
                elec_extrema.maxima.len(),
                elec_extrema.minima.len(),
                worst / step
            ),
        );
    }

    c.finish();
}

#[test]
fn criterion_6_dispersion_and_phase() {
    let mut c = Checker::new("criterion 6 dispersion and phase");
    let preset = find("fig3b").unwrap();
    let m = mech_of("fig3b");

    // h from the measured dip width, per the slope operation's default
    let f = find_extrema(&sweep(&preset.params, &preset.grid, Observable::Absorption).unwrap())
        .unwrap();
    let h = f.dip.expect("fig3b dip").fwhm / 10.0;
    let center = dispersion_slope(&m, 2.0, h).unwrap();
    let left = dispersion_slope(&m, 1.7, h).unwrap();
    let right = dispersion_slope(&m, 2.3, h).unwrap();
    c.check(
        "normal dispersion at the dip center",
        center > 0.0,
        format!("slope {center:.3e}"),
    );
    c.check(
        "center slope at least 10x the slope at delta = -0.3",
        center >= 10.0 * left.abs(),
        format!("ratio {:.0}", center / left.abs()),
    );
    c.check(
        "center slope at least 10x the slope at delta = +0.3",
        center >= 10.0 * right.abs(),
        format!("ratio {:.0}", center / right.abs()),
    );

    let phase = sweep(&preset.params, &preset.grid, Observable::Phase).unwrap();
    let jumps = phase_features(&phase).unwrap().jumps;
    let pattern_ok = jumps.len() == 3
        && jumps[0].delta > 0.0
        && jumps[1].delta < 0.0
        && jumps[2].delta > 0.0;
    c.check(
        "three abrupt phase variations, middle one opposite",
        pattern_ok,
        format!(
            "{} jumps, deltas {:?}",
            jumps.len(),
            jumps.iter().map(|j| j.delta).collect::<Vec<_>>()
        ),
    );

    c.finish();
}

#[test]
fn criterion_7_property_suite() {
    let mut c = Checker::new("criterion 7 property suite");

    // Lorentzian limit identity over 1001 points
    let m = mech_of("fig3a");
    let grid = FrequencyGrid64 {
        start: 1.5,
        stop: 2.5,
        points: 1001,
    };
    let mut worst = 0.0f64;
    for w in grid.values() {
        let ps = probe_power(&m, w).unwrap().value.re;
        let d = m.derived().unwrap();
        let x = d.omega1_sq - w * w;
        let closed = 2.0 * std::f64::consts::PI * m.force * m.force * m.gamma1 * w * w
            / (m.m1 * (x * x + m.gamma1 * m.gamma1 * w * w));
        worst = worst.max((ps - closed).abs() / closed);
    }
    c.check(
        "Omega_r = 0 absorption equals the single-oscillator form to 1e-12",
        worst <= 1e-12,
        format!("worst rel dev {worst:.3e}"),
    );

    // P_s = -2 pi i omega_s F N over 1001 points
    let m = mech_of("fig3c");
    let mut worst = 0.0f64;
    for w in grid.values() {
        let n = probe_amplitude(&m, w).unwrap().value;
        let ps = probe_power(&m, w).unwrap().value;
        let expect =
            num_complex_mul_i(-2.0 * std::f64::consts::PI * w * m.force, n);
        worst = worst.max((ps - expect).norm() / expect.norm());
    }
    c.check(
        "P_s = -2 pi i omega_s F N to 1e-12",
        worst <= 1e-12,
        format!("worst rel dev {worst:.3e}"),
    );

    // oracle linearity in F to 1e-9
    let mut m = mech_of("fig3a");
    m.k1 = 4.0;
    m.k2 = 4.0;
    let pair = m.driven_pair().unwrap();
    let cfg = IntegrationConfig::settled(&pair, 2.1, 1e-6).unwrap();
    let one = timedomain::demodulated_response(&Params64::Mechanical(m), 2.1, &cfg)
        .unwrap()
        .response
        .value;
    let mut m5 = m;
    m5.force = 5.0 * m.force;
    let five = timedomain::demodulated_response(&Params64::Mechanical(m5), 2.1, &cfg)
        .unwrap()
        .response
        .value;
    let dev = (five - one * 5.0).norm() / (one * 5.0).norm();
    c.check(
        "demodulated amplitude is linear in F to 1e-9",
        dev <= 1e-9,
        format!("rel dev {dev:.3e}"),
    );

    // CSV round-trip exactness
    let preset = find("fig3b").unwrap();
    let s = sweep(&preset.params, &preset.grid, Observable::Absorption).unwrap();
    let text = eitsim::csv::spectrum_csv_string(&s, preset.picture());
    let back = eitsim::csv::read_spectrum_csv(&text).unwrap();
    let exact = (0..s.values.len()).all(|i| {
        back.omegas[i] == s.grid.value(i)
            && back.re[i] == Some(s.values[i])
            && back.im[i] == Some(s.complex_values.as_ref().unwrap()[i].im)
    });
    c.check(
        "CSV write/read round-trip is bit-exact",
        exact,
        format!("{} rows", s.values.len()),
    );

    // deterministic reruns
    let again = eitsim::csv::spectrum_csv_string(
        &sweep(&preset.params, &preset.grid, Observable::Absorption).unwrap(),
        preset.picture(),
    );
    c.check(
        "identical runs produce byte-identical CSV",
        text == again,
        format!("{} bytes", text.len()),
    );

    c.finish();
}

/// `scale * i * n` without pulling a complex literal into every call site.
fn num_complex_mul_i(
    scale: f64,
    n: num_complex::Complex<f64>,
) -> num_complex::Complex<f64> {
    num_complex::Complex::new(0.0, scale) * n
}
