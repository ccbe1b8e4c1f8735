//! Run configuration: defaults reproduce the figure regime (hbar = 0.1,
//! c = 1, Y = (0, 1), 256^2 grids), overridable from a `key = value` config
//! file and per-flag on the command line (flags win).

use std::path::{Path, PathBuf};

use phasespace::states::Displacement;
use phasespace::{Error, Result};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub hbar: f64,
    pub coupling: f64,
    pub y: Displacement,
    pub grid_n: usize,
    /// Explicit half-width override; `None` applies the domain rule.
    pub half_width: Option<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 0.1,
            coupling: 1.0,
            y: Displacement::new(0.0, 1.0),
            grid_n: 256,
            half_width: None,
            seed: 1,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Positivity threshold t0 = 1/(2 c^2) for the configured coupling.
    pub fn t0(&self) -> f64 {
        1.0 / (2.0 * self.coupling * self.coupling)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: idx + 1,
                msg: format!("expected key = value, got {raw:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |msg: String| Error::Parse {
                line: idx + 1,
                msg,
            };
            match key {
                "hbar" => self.hbar = value.parse().map_err(|e| bad(format!("hbar: {e}")))?,
                "c" => self.coupling = value.parse().map_err(|e| bad(format!("c: {e}")))?,
                "y" => self.y = parse_point(value).map_err(|e| bad(format!("y: {e}")))?,
                "grid_n" => {
                    self.grid_n = value.parse().map_err(|e| bad(format!("grid_n: {e}")))?
                }
                "half_width" => {
                    self.half_width =
                        Some(value.parse().map_err(|e| bad(format!("half_width: {e}")))?)
                }
                "seed" => self.seed = value.parse().map_err(|e| bad(format!("seed: {e}")))?,
                "out_dir" => self.out_dir = PathBuf::from(value),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(())
    }
}

/// Parse "P,Q" into a phase-space point.
pub fn parse_point(s: &str) -> std::result::Result<Displacement, String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected P,Q, got {s:?}"))?;
    let p: f64 = p.trim().parse().map_err(|e| format!("bad P: {e}"))?;
    let q: f64 = q.trim().parse().map_err(|e| format!("bad Q: {e}"))?;
    Ok(Displacement::new(p, q))
}

/// Parse a time argument: a plain float, or a multiple of the threshold time
/// written as "t0", "2t0", "0.5t0".
pub fn parse_time(s: &str, t0: f64) -> std::result::Result<f64, String> {
    let trimmed = s.trim();
    if let Some(prefix) = trimmed.strip_suffix("t0") {
        let factor: f64 = if prefix.is_empty() {
            1.0
        } else {
            prefix
                .parse()
                .map_err(|e| format!("bad t0 multiple {trimmed:?}: {e}"))?
        };
        return Ok(factor * t0);
    }
    trimmed
        .parse()
        .map_err(|e| format!("bad time {trimmed:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_arguments() {
        assert_eq!(parse_time("t0", 0.5).unwrap(), 0.5);
        assert_eq!(parse_time("2t0", 0.5).unwrap(), 1.0);
        assert_eq!(parse_time("0.5t0", 0.5).unwrap(), 0.25);
        assert_eq!(parse_time("0.75", 0.5).unwrap(), 0.75);
        assert!(parse_time("abc", 0.5).is_err());
    }

    #[test]
    fn point_arguments() {
        let y = parse_point("0.3,-0.2").unwrap();
        assert_eq!((y.p, y.q), (0.3, -0.2));
        assert!(parse_point("1.0").is_err());
    }

    #[test]
    fn config_file_overrides() {
        let dir = std::env::temp_dir().join("phasespace-cli-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\nhbar = 0.2\ny = 1.0, 0.0\ngrid_n = 128\n").unwrap();
        let mut config = RunConfig::default();
        config.apply_file(&path).unwrap();
        assert_eq!(config.hbar, 0.2);
        assert_eq!((config.y.p, config.y.q), (1.0, 0.0));
        assert_eq!(config.grid_n, 128);
        // untouched keys keep their defaults
        assert_eq!(config.coupling, 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = std::env::temp_dir().join("phasespace-cli-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "hbar = 0.2\nbogus = 1\n").unwrap();
        let mut config = RunConfig::default();
        assert!(config.apply_file(&path).is_err());
    }
}
