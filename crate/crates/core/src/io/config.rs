//! Run configuration as flat `key = value` text.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are
//! comma-separated. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA_GRID: [f64; 14] = [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0];

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub seed: u64,
    pub iterations: usize,
    pub folds: usize,
    /// Grey levels used by quantization and histogram binning.
    pub levels: usize,
    /// Displacements applied to each of the 13 canonical directions.
    pub distances: Vec<usize>,
    /// Inclusive F1 cut of the classification path.
    pub f1_threshold: f64,
    /// Exclusive F1 cut of the survival path.
    pub f1_threshold_survival: f64,
    pub p_threshold: f64,
    pub alpha_grid: Vec<f64>,
    pub permutations: usize,
    /// Majority rows drawn per iteration; `None` matches the minority count.
    pub majority_sample: Option<usize>,
    pub window: usize,
    pub scales: Vec<usize>,
    pub features_path: Option<PathBuf>,
    pub volume_path: Option<PathBuf>,
    pub mask_path: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            iterations: 1000,
            folds: 5,
            levels: 32,
            distances: vec![1, 2, 3],
            f1_threshold: 0.6,
            f1_threshold_survival: 0.7,
            p_threshold: 0.05,
            alpha_grid: DEFAULT_ALPHA_GRID.to_vec(),
            permutations: 1000,
            majority_sample: None,
            window: 11,
            scales: vec![1, 2, 4],
            features_path: None,
            volume_path: None,
            mask_path: None,
            out_dir: None,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.iterations < 1 {
            return bad("iterations must be >= 1");
        }
        if self.folds < 2 {
            return bad("folds must be >= 2");
        }
        if self.levels < 2 {
            return bad("levels must be >= 2");
        }
        if self.permutations < 1 {
            return bad("permutations must be >= 1");
        }
        if self.distances.is_empty() || self.distances.contains(&0) {
            return bad("distances must be non-empty and positive");
        }
        if self.alpha_grid.is_empty() || self.alpha_grid.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return bad("alpha grid must be non-empty and non-negative");
        }
        if self.window % 2 == 0 || self.window < 5 {
            return bad("window must be odd and >= 5");
        }
        if self.scales.len() < 3 || self.scales.windows(2).any(|w| w[0] >= w[1]) || self.scales[0] == 0 {
            return bad("scales must be at least 3 strictly increasing positive integers");
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("{key}: expected a number, got {v:?}")))
        };
        let int = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("{key}: expected an integer, got {v:?}")))
        };
        fn list(v: &str) -> Vec<&str> {
            v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
        }
        match key {
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("seed: expected an integer, got {value:?}")))?
            }
            "iterations" => self.iterations = int(value)?,
            "folds" => self.folds = int(value)?,
            "levels" => self.levels = int(value)?,
            "distances" => self.distances = list(value).into_iter().map(int).collect::<Result<_>>()?,
            "f1_threshold" => self.f1_threshold = num(value)?,
            "f1_threshold_survival" => self.f1_threshold_survival = num(value)?,
            "p_threshold" => self.p_threshold = num(value)?,
            "alpha_grid" => self.alpha_grid = list(value).into_iter().map(num).collect::<Result<_>>()?,
            "permutations" => self.permutations = int(value)?,
            "majority_sample" => {
                self.majority_sample = if value.is_empty() { None } else { Some(int(value)?) }
            }
            "window" => self.window = int(value)?,
            "scales" => self.scales = list(value).into_iter().map(int).collect::<Result<_>>()?,
            "features" => self.features_path = Some(PathBuf::from(value)),
            "volume" => self.volume_path = Some(PathBuf::from(value)),
            "mask" => self.mask_path = Some(PathBuf::from(value)),
            "out" => self.out_dir = Some(PathBuf::from(value)),
            other => return Err(Error::InvalidParameter(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("config line {}: expected key=value", n + 1)))?;
            cfg.set(k.trim(), v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let joinf = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        s += &format!("seed = {}\n", self.seed);
        s += &format!("iterations = {}\n", self.iterations);
        s += &format!("folds = {}\n", self.folds);
        s += &format!("levels = {}\n", self.levels);
        s += &format!("distances = {}\n", join(&self.distances));
        s += &format!("f1_threshold = {}\n", self.f1_threshold);
        s += &format!("f1_threshold_survival = {}\n", self.f1_threshold_survival);
        s += &format!("p_threshold = {}\n", self.p_threshold);
        s += &format!("alpha_grid = {}\n", joinf(&self.alpha_grid));
        s += &format!("permutations = {}\n", self.permutations);
        s += &format!(
            "majority_sample = {}\n",
            self.majority_sample.map(|m| m.to_string()).unwrap_or_default()
        );
        s += &format!("window = {}\n", self.window);
        s += &format!("scales = {}\n", join(&self.scales));
        for (k, p) in [
            ("features", &self.features_path),
            ("volume", &self.volume_path),
            ("mask", &self.mask_path),
            ("out", &self.out_dir),
        ] {
            if let Some(p) = p {
                s += &format!("{k} = {}\n", p.display());
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_study_design() {
        let c = StudyConfig::default();
        assert_eq!((c.iterations, c.folds, c.permutations), (1000, 5, 1000));
        assert_eq!(c.alpha_grid.last(), Some(&18.0));
        c.validate().unwrap();
    }

    #[test]
    fn parse_and_round_trip() {
        let c = StudyConfig::parse("# run\nseed=7\nfolds = 3\nalpha_grid = 0, 2, 18\nmajority_sample=20\nout=res\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.folds, 3);
        assert_eq!(c.alpha_grid, vec![0.0, 2.0, 18.0]);
        assert_eq!(c.majority_sample, Some(20));
        assert_eq!(StudyConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_invalid() {
        assert!(StudyConfig::parse("folds=1").is_err());
        assert!(StudyConfig::parse("levels=1").is_err());
        assert!(StudyConfig::parse("permutations=0").is_err());
        assert!(StudyConfig::parse("colour=blue").is_err());
        assert!(StudyConfig::parse("seed").is_err());
    }
}
