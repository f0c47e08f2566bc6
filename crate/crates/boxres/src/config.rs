//! Run configuration: a plain `key=value` file, one entry per line, `#`
//! comments. Unknown keys are errors, not warnings, so a typoed key cannot
//! silently fall back to a default.

use std::path::PathBuf;

use crate::error::{Error, Result};

/// What the driver should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Box-size scans, stable points and widths.
    Stabilize,
    /// Phase-shift sweeps and Breit-Wigner fits only.
    Oracle,
    /// Both, with a side-by-side comparison in the summary.
    Both,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "stabilize" => Ok(Mode::Stabilize),
            "oracle" => Ok(Mode::Oracle),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "mode must be stabilize, oracle or both, got `{other}`"
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Stabilize => "stabilize",
            Mode::Oracle => "oracle",
            Mode::Both => "both",
        })
    }
}

/// Validated driver configuration. Defaults reproduce the reference model:
/// v0 = 7.5, z = −1, s/p/d waves, δr = 1e-4, boxes from 3 to 21.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub v0: f64,
    pub z: f64,
    pub partial_waves: Vec<u32>,
    pub r_range: (f64, f64),
    pub r_scan_step: f64,
    pub dr: f64,
    pub e_max: f64,
    pub out_dir: PathBuf,
    pub mode: Mode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            v0: 7.5,
            z: -1.0,
            partial_waves: vec![0, 1, 2],
            r_range: (3.0, 21.0),
            r_scan_step: crate::stabilization::DEFAULT_SCAN_STEP,
            dr: 1e-4,
            e_max: 6.0,
            out_dir: PathBuf::from("out"),
            mode: Mode::Stabilize,
        }
    }
}

/// Parse and range-check a config file body.
pub fn validate_config(raw: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let err = |line: usize, message: String| Error::Config { line, message };

    for (idx, line_raw) in raw.lines().enumerate() {
        let line_no = idx + 1;
        let line = match line_raw.find('#') {
            Some(p) => &line_raw[..p],
            None => line_raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected key=value, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());

        let parse_f64 = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| err(line_no, format!("`{v}` is not a number (key {key})")))
        };

        match key {
            "v0" => cfg.v0 = parse_f64(value)?,
            "z" => cfg.z = parse_f64(value)?,
            "l" => {
                let mut waves = Vec::new();
                for part in value.split(',') {
                    let l: u32 = part.trim().parse().map_err(|_| {
                        err(line_no, format!("`{part}` is not a partial wave index"))
                    })?;
                    waves.push(l);
                }
                if waves.is_empty() {
                    return Err(err(line_no, "l needs at least one entry".into()));
                }
                cfg.partial_waves = waves;
            }
            "r_min" => cfg.r_range.0 = parse_f64(value)?,
            "r_max" => cfg.r_range.1 = parse_f64(value)?,
            "r_step" => cfg.r_scan_step = parse_f64(value)?,
            "dr" => cfg.dr = parse_f64(value)?,
            "e_max" => cfg.e_max = parse_f64(value)?,
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "mode" => cfg.mode = value.parse().map_err(|m| err(line_no, m))?,
            other => {
                return Err(err(line_no, format!("unknown key `{other}`")));
            }
        }
    }
    check_ranges(&cfg)?;
    Ok(cfg)
}

fn check_ranges(cfg: &RunConfig) -> Result<()> {
    let bad = |message: String| Error::Config { line: 0, message };
    if !(cfg.r_range.0 >= 2.0) {
        return Err(bad(format!(
            "r_min must be at least 2, got {}",
            cfg.r_range.0
        )));
    }
    if !(cfg.r_range.1 <= 40.0) {
        return Err(bad(format!(
            "r_max must be at most 40, got {}",
            cfg.r_range.1
        )));
    }
    if !(cfg.r_range.0 < cfg.r_range.1) {
        return Err(bad(format!(
            "r_min {} must be below r_max {}",
            cfg.r_range.0, cfg.r_range.1
        )));
    }
    if !(cfg.dr >= 1e-5 && cfg.dr <= 1e-3) {
        return Err(bad(format!(
            "dr must lie in [1e-5, 1e-3], got {}",
            cfg.dr
        )));
    }
    if !(cfg.r_scan_step > 0.0 && cfg.r_scan_step <= cfg.r_range.1 - cfg.r_range.0) {
        return Err(bad(format!("r_step {} is unusable", cfg.r_scan_step)));
    }
    if !(cfg.e_max > 0.0 && cfg.e_max.is_finite()) {
        return Err(bad(format!("e_max must be positive, got {}", cfg.e_max)));
    }
    if !cfg.v0.is_finite() || !cfg.z.is_finite() {
        return Err(bad("v0 and z must be finite".into()));
    }
    Ok(())
}
