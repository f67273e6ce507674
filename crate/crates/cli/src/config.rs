//! Run configuration: a flat sectioned key-value file merged with command
//! line overrides. Grids are written as `start:stop:count`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use upb_core::{DimerParams, DriveSpec};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Fully resolved run configuration (defaults, then config file, then flags).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: DimerParams<f64>,
    pub drive: DriveSpec<f64>,
    pub n_cut: usize,
    pub grids: BTreeMap<String, Grid>,
    pub out: Option<String>,
    /// Parallelism cap from `UPB_THREADS`.
    pub threads: Option<usize>,
    /// Whether U / Delta were given explicitly (otherwise operating points
    /// fall back to the locus values at the configured J).
    pub explicit_u: bool,
    pub explicit_delta: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }

    fn parse(text: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError(format!(
                "grid {text:?} is not of the form start:stop:count"
            )));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|e| ConfigError(format!("bad grid start {:?}: {e}", parts[0])))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|e| ConfigError(format!("bad grid stop {:?}: {e}", parts[1])))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|e| ConfigError(format!("bad grid count {:?}: {e}", parts[2])))?;
        if count < 1 {
            return Err(ConfigError(format!("grid {text:?} must have count >= 1")));
        }
        if stop < start {
            return Err(ConfigError(format!("grid {text:?} must have stop >= start")));
        }
        Ok(Self { start, stop, count })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: DimerParams::symmetric(0.07746, 0.05164, 0.4, 1.0),
            drive: DriveSpec::quadrature(0.01),
            n_cut: 7,
            grids: BTreeMap::new(),
            out: None,
            threads: None,
            explicit_u: false,
            explicit_delta: false,
        }
    }
}

impl RunConfig {
    /// Parse the sectioned key-value file and fold it into `self`.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(ConfigError(format!("line {}: bad section header", lineno + 1)));
                }
                section = line[1..line.len() - 1].trim().to_owned();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            self.apply_kv(&section, key, value)
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        self.validate()
    }

    fn apply_kv(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let num = |v: &str| -> Result<f64, ConfigError> {
            v.parse()
                .map_err(|e| ConfigError(format!("bad number {v:?}: {e}")))
        };
        match (section, key) {
            ("params", "J") => self.params.hopping = num(value)?,
            ("params", "U") => {
                self.params.kerr = num(value)?;
                self.explicit_u = true;
            }
            ("params", "Delta") => {
                self.params.detuning = num(value)?;
                self.explicit_delta = true;
            }
            ("params", "gamma") => self.params.gamma = num(value)?,
            ("params", "Ux") => self.params.cross_kerr = num(value)?,
            ("params", "delta_Delta") => self.params.detuning_mismatch = num(value)?,
            ("params", "delta_gamma") => self.params.gamma_mismatch = num(value)?,
            ("params", "delta_U") => self.params.kerr_mismatch = num(value)?,
            ("drive", "F1") => self.drive.f1 = num(value)?,
            ("drive", "phi") => self.drive.phi = num(value)?.to_radians(),
            ("drive", "ratio") => self.drive.ratio = num(value)?,
            ("drive", "sigma") => self.drive.pulse_sigma = Some(num(value)?),
            ("numerics", "Ncut") => {
                self.n_cut = value
                    .parse()
                    .map_err(|e| ConfigError(format!("bad Ncut {value:?}: {e}")))?
            }
            ("grids", name) => {
                self.grids.insert(name.to_owned(), Grid::parse(value)?);
            }
            ("output", "out") => self.out = Some(value.to_owned()),
            _ => {
                return Err(ConfigError(format!(
                    "unknown key {key:?} in section [{section}]"
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.params.gamma <= 0.0 {
            return Err(ConfigError("gamma must be positive".into()));
        }
        if self.n_cut < 1 || self.n_cut > 30 {
            return Err(ConfigError("Ncut must lie in 1..=30".into()));
        }
        Ok(())
    }

    /// Grid by name, with a fallback default.
    pub fn grid_or(&self, name: &str, default: Grid) -> Vec<f64> {
        self.grids
            .get(name)
            .copied()
            .unwrap_or(default)
            .values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_and_values() {
        let g = Grid::parse("0:1:5").unwrap();
        assert_eq!(g.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = Grid::parse("0.4:0.4:1").unwrap();
        assert_eq!(g.values(), vec![0.4]);
        assert!(Grid::parse("1:0:5").is_err());
        assert!(Grid::parse("0:1:0").is_err());
        assert!(Grid::parse("0:1").is_err());
    }

    #[test]
    fn config_file_roundtrip() {
        let dir = std::env::temp_dir().join("upb-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(
            &path,
            "# comment\n[params]\nJ = 0.6\nU = 0.034\n[drive]\nphi = 120 # degrees\n[grids]\ntau = 0:10:5\n[output]\nout = x.csv\n",
        )
        .unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.params.hopping, 0.6);
        assert_eq!(cfg.params.kerr, 0.034);
        assert!((cfg.drive.phi.to_degrees() - 120.0).abs() < 1e-12);
        assert_eq!(cfg.grids["tau"].count, 5);
        assert_eq!(cfg.out.as_deref(), Some("x.csv"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = std::env::temp_dir().join("upb-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.cfg");
        std::fs::write(&path, "[params]\nbogus = 1\n").unwrap();
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_file(&path).is_err());
    }
}
