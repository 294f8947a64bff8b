//! Structured run outcome, rendered as the human-readable stdout block.

use std::fmt;
use std::path::PathBuf;

use eitsim_core::{Observable, PhaseFeatures, Picture, SpectralFeatures};

/// Everything a subcommand produced: echoes, written files, extracted
/// features, oracle outcome and advisories.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub preset_name: String,
    pub picture: Option<Picture>,
    pub observable: Option<Observable>,
    /// The resolved parameters as a self-hosting config document.
    pub config_echo: String,
    /// `(label, path)` of every file written.
    pub outputs: Vec<(String, PathBuf)>,
    pub features: Option<SpectralFeatures<f64>>,
    pub phase_jumps: Option<PhaseFeatures<f64>>,
    /// Demodulated amplitude of a time-domain run: `(re, im, residual)`.
    pub demod: Option<(f64, f64, f64)>,
    /// Largest relative error of an oracle comparison.
    pub oracle_max_rel_err: Option<f64>,
    pub advisories: Vec<String>,
    /// Free-form body lines (verify tables, preset lists, translations).
    pub body: Vec<String>,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.preset_name.is_empty() {
            match self.picture {
                Some(p) => writeln!(f, "preset: {} ({})", self.preset_name, p.name())?,
                None => writeln!(f, "preset: {}", self.preset_name)?,
            }
        }
        if let Some(obs) = self.observable {
            writeln!(f, "observable: {}", obs.name())?;
        }
        if !self.config_echo.is_empty() {
            writeln!(f, "config:")?;
            for line in self.config_echo.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        for (label, path) in &self.outputs {
            writeln!(f, "wrote {label}: {}", path.display())?;
        }
        if let Some(feat) = &self.features {
            writeln!(f, "features:")?;
            writeln!(f, "  maxima: {}", fmt_extrema(&feat.maxima))?;
            writeln!(f, "  minima: {}", fmt_extrema(&feat.minima))?;
            match &feat.dip {
                Some(d) => writeln!(
                    f,
                    "  dip: omega = {:.9e}, depth_ratio = {:.6}, fwhm = {:.6e}",
                    d.omega, d.depth_ratio, d.fwhm
                )?,
                None => writeln!(f, "  dip: none")?,
            }
            match feat.splitting {
                Some(s) => writeln!(f, "  splitting: {s:.9e}")?,
                None => writeln!(f, "  splitting: none")?,
            }
            if let Some(slope) = feat.dispersion_slope_center {
                writeln!(f, "  dispersion slope at center: {slope:.6e}")?;
            }
            if let Some(n) = feat.phase_jump_count {
                writeln!(f, "  phase jumps: {n}")?;
            }
        }
        if let Some(pj) = &self.phase_jumps {
            for j in &pj.jumps {
                writeln!(
                    f,
                    "  phase jump at omega = {:.9e}, delta = {:+.4} rad",
                    j.omega, j.delta
                )?;
            }
        }
        if let Some((re, im, residual)) = self.demod {
            writeln!(
                f,
                "demodulated amplitude: {re:.9e} {im:+.9e}i (residual {residual:.3e})"
            )?;
        }
        if let Some(err) = self.oracle_max_rel_err {
            writeln!(f, "oracle comparison: max relative error {err:.3e}")?;
        }
        for line in &self.body {
            writeln!(f, "{line}")?;
        }
        for adv in &self.advisories {
            writeln!(f, "advisory: {adv}")?;
        }
        Ok(())
    }
}

fn fmt_extrema(list: &[eitsim_core::Extremum<f64>]) -> String {
    if list.is_empty() {
        return "none".into();
    }
    let items: Vec<String> = list
        .iter()
        .map(|e| format!("(omega = {:.9e}, value = {:.6e})", e.omega, e.value))
        .collect();
    items.join(", ")
}
