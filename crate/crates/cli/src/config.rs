//! Line-oriented `key = value` configuration documents.
//!
//! One assignment per line, `#` starts a comment, keys are case-sensitive.
//! Mechanical keys: `picture, m1, m2, k1, k2, K, gamma1, gamma2, F, phi_s,
//! grid`; electrical keys: `picture, R1, R2, L1, L2, C1, C2, C, As, switch,
//! grid`. `grid = start:stop:points`. `phi_s` defaults to 0 and `switch` to
//! `closed`; everything else is required. Unknown keys are rejected.

use std::collections::BTreeMap;

use eitsim_core::{
    CircuitParams64, FrequencyGrid64, MechanicalParams64, Params64, Picture,
};
use thiserror::Error;

/// A named parameter set plus sweep grid; built-ins carry provenance notes.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub params: Params64,
    pub grid: FrequencyGrid64,
    pub notes: String,
}

impl Preset {
    pub fn picture(&self) -> Picture {
        self.params.picture()
    }

    /// Serializes the preset as a config document that parses back to the
    /// same parameters (presets are self-hosting).
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        match &self.params {
            Params64::Mechanical(m) => {
                out.push_str("picture = mechanical\n");
                for (k, v) in [
                    ("m1", m.m1),
                    ("m2", m.m2),
                    ("k1", m.k1),
                    ("k2", m.k2),
                    ("K", m.coupling),
                    ("gamma1", m.gamma1),
                    ("gamma2", m.gamma2),
                    ("F", m.force),
                    ("phi_s", m.phase),
                ] {
                    out.push_str(&format!("{k} = {v}\n"));
                }
            }
            Params64::Electrical(c) => {
                out.push_str("picture = electrical\n");
                for (k, v) in [
                    ("R1", c.r1),
                    ("R2", c.r2),
                    ("L1", c.l1),
                    ("L2", c.l2),
                    ("C1", c.c1),
                    ("C2", c.c2),
                    ("C", c.coupling),
                    ("As", c.source_amplitude),
                ] {
                    out.push_str(&format!("{k} = {v}\n"));
                }
                out.push_str(&format!(
                    "switch = {}\n",
                    if c.switch_closed { "closed" } else { "open" }
                ));
            }
        }
        out.push_str(&format!(
            "grid = {}:{}:{}\n",
            self.grid.start, self.grid.stop, self.grid.points
        ));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key: {key}")]
    UnknownKey { line: usize, key: String },

    #[error("missing required key: {key}")]
    MissingKey { key: String },

    #[error("{name}: {message}")]
    Domain { name: String, message: String },
}

struct Entry {
    line: usize,
    value: String,
}

/// Parses and fully validates a config document.
pub fn parse_config(text: &str) -> Result<Preset, ConfigError> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        if entries.contains_key(key) {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("duplicate key: {key}"),
            });
        }
        entries.insert(
            key.to_string(),
            Entry {
                line: line_no,
                value: value.to_string(),
            },
        );
    }

    let picture = entries
        .remove("picture")
        .ok_or(ConfigError::MissingKey {
            key: "picture".into(),
        })?;
    let picture = match picture.value.as_str() {
        "mechanical" => Picture::Mechanical,
        "electrical" => Picture::Electrical,
        other => {
            return Err(ConfigError::Syntax {
                line: picture.line,
                message: format!("picture must be `mechanical` or `electrical`, got `{other}`"),
            })
        }
    };

    fn take_number(
        entries: &mut BTreeMap<String, Entry>,
        key: &'static str,
    ) -> Result<f64, ConfigError> {
        let e = entries.remove(key).ok_or(ConfigError::MissingKey {
            key: key.into(),
        })?;
        e.value.parse::<f64>().map_err(|_| ConfigError::Syntax {
            line: e.line,
            message: format!("{key}: not a number: `{}`", e.value),
        })
    }

    let params = match picture {
        Picture::Mechanical => {
            let m = MechanicalParams64 {
                m1: take_number(&mut entries, "m1")?,
                m2: take_number(&mut entries, "m2")?,
                k1: take_number(&mut entries, "k1")?,
                k2: take_number(&mut entries, "k2")?,
                coupling: take_number(&mut entries, "K")?,
                gamma1: take_number(&mut entries, "gamma1")?,
                gamma2: take_number(&mut entries, "gamma2")?,
                force: take_number(&mut entries, "F")?,
                phase: match entries.remove("phi_s") {
                    Some(e) => e.value.parse::<f64>().map_err(|_| ConfigError::Syntax {
                        line: e.line,
                        message: format!("phi_s: not a number: `{}`", e.value),
                    })?,
                    None => 0.0,
                },
            };
            Params64::Mechanical(m)
        }
        Picture::Electrical => {
            let switch_closed = match entries.remove("switch") {
                Some(e) => match e.value.as_str() {
                    "closed" => true,
                    "open" => false,
                    other => {
                        return Err(ConfigError::Syntax {
                            line: e.line,
                            message: format!("switch must be `open` or `closed`, got `{other}`"),
                        })
                    }
                },
                None => true,
            };
            let c = CircuitParams64 {
                r1: take_number(&mut entries, "R1")?,
                r2: take_number(&mut entries, "R2")?,
                l1: take_number(&mut entries, "L1")?,
                l2: take_number(&mut entries, "L2")?,
                c1: take_number(&mut entries, "C1")?,
                c2: take_number(&mut entries, "C2")?,
                coupling: take_number(&mut entries, "C")?,
                source_amplitude: take_number(&mut entries, "As")?,
                switch_closed,
            };
            Params64::Electrical(c)
        }
    };

    let grid_entry = entries.remove("grid").ok_or(ConfigError::MissingKey {
        key: "grid".into(),
    })?;
    let grid = parse_grid(&grid_entry.value).map_err(|message| ConfigError::Syntax {
        line: grid_entry.line,
        message,
    })?;

    if let Some((key, e)) = entries.into_iter().next() {
        return Err(ConfigError::UnknownKey { line: e.line, key });
    }

    // enforce the model invariants at parse time
    params.validate().map_err(map_core_error)?;
    params.derived().map_err(map_core_error)?;
    grid.validate().map_err(map_core_error)?;

    Ok(Preset {
        name: "config".into(),
        params,
        grid,
        notes: String::new(),
    })
}

/// Parses `start:stop:points`.
pub fn parse_grid(text: &str) -> Result<FrequencyGrid64, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be `start:stop:points`, got `{text}`"));
    }
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("grid start is not a number: `{}`", parts[0]))?;
    let stop: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("grid stop is not a number: `{}`", parts[1]))?;
    let points: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("grid points is not an integer: `{}`", parts[2]))?;
    Ok(FrequencyGrid64 {
        start,
        stop,
        points,
    })
}

fn map_core_error(e: eitsim_core::Error) -> ConfigError {
    match e {
        eitsim_core::Error::Domain { parameter, message } => ConfigError::Domain {
            name: parameter.into(),
            message,
        },
        other => ConfigError::Domain {
            name: "parameters".into(),
            message: other.to_string(),
        },
    }
}
