use std::path::{Path, PathBuf};

use hypersurf::pipeline::{Fixtures, StrategyChoice, FIXTURES_ENV};
use hypersurf_geometry::Thresholds;
use serde::Deserialize;

/// Settings read from `--config`. Every field is optional; command-line
/// flags take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub fixtures: Option<PathBuf>,
    pub strategy: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub eps_beta: Option<f64>,
    pub blow_up: Option<f64>,
    pub h_min: Option<f64>,
    pub strict_sequential: Option<bool>,
    pub thresholds: Option<Thresholds>,
    pub certificate_out: Option<PathBuf>,
    pub trajectory_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
}

/// Resolved configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub fixtures: PathBuf,
    pub strategy: StrategyChoice,
    pub seed: u64,
    pub tol: f64,
    pub eps_beta: f64,
    pub blow_up: f64,
    pub h_min: f64,
    pub strict_sequential: bool,
    pub thresholds: Thresholds,
    pub certificate_out: Option<PathBuf>,
    pub trajectory_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ConfigError {
    Missing(PathBuf),
    Invalid(String),
}

impl Config {
    /// Fixtures directory precedence: `--fixtures`, then the environment
    /// variable, then the config file, then the bundled copy.
    pub fn resolve(path: Option<&Path>, fixtures_flag: Option<PathBuf>) -> Result<Config, ConfigError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| match e.kind() {
                    std::io::ErrorKind::NotFound => ConfigError::Missing(p.to_path_buf()),
                    _ => ConfigError::Invalid(format!("{}: {e}", p.display())),
                })?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| ConfigError::Invalid(format!("{}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let env = std::env::var_os(FIXTURES_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        let fixtures = fixtures_flag.or(env).or(file.fixtures).unwrap_or_else(Fixtures::bundled_dir);
        let strategy = match file.strategy {
            Some(s) => s.parse().map_err(ConfigError::Invalid)?,
            None => StrategyChoice::Both,
        };
        let cfg = Config {
            fixtures,
            strategy,
            seed: file.seed.unwrap_or(20240229),
            tol: file.tol.unwrap_or(1e-10),
            eps_beta: file.eps_beta.unwrap_or(1e-6),
            blow_up: file.blow_up.unwrap_or(1e8),
            h_min: file.h_min.unwrap_or(1e-12),
            strict_sequential: file.strict_sequential.unwrap_or(false),
            thresholds: file.thresholds.unwrap_or_default(),
            certificate_out: file.certificate_out,
            trajectory_out: file.trajectory_out,
            report_out: file.report_out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in
            [("tol", self.tol), ("eps_beta", self.eps_beta), ("blow_up", self.blow_up), ("h_min", self.h_min)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invalid(format!("`{name}` must be positive (got {v})")));
            }
        }
        self.thresholds.validate().map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = Config::resolve(None, Some(PathBuf::from("/tmp/fx"))).unwrap();
        assert_eq!(cfg.fixtures, PathBuf::from("/tmp/fx"));
        assert_eq!(cfg.strategy, StrategyChoice::Both);
        assert_eq!(cfg.thresholds, Thresholds::default());
    }

    #[test]
    fn file_values_and_validation() {
        let dir = std::env::temp_dir().join(format!("hypersurf-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let good = dir.join("good.toml");
        std::fs::write(
            &good,
            "tol = 1e-9\nstrategy = \"interp\"\n[thresholds]\nideal = 1e-7\ncodazzi = 1e-7\ngauss = 1e-7\n",
        )
        .unwrap();
        let cfg = Config::resolve(Some(&good), Some(PathBuf::from("x"))).unwrap();
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.strategy, StrategyChoice::Interp);
        assert_eq!(cfg.thresholds.ideal, 1e-7);

        let bad = dir.join("bad.toml");
        std::fs::write(&bad, "tol = -1\n").unwrap();
        assert!(matches!(Config::resolve(Some(&bad), None), Err(ConfigError::Invalid(_))));
        std::fs::write(&bad, "colour = 3\n").unwrap();
        assert!(matches!(Config::resolve(Some(&bad), None), Err(ConfigError::Invalid(_))));
        assert!(matches!(Config::resolve(Some(&dir.join("none.toml")), None), Err(ConfigError::Missing(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
