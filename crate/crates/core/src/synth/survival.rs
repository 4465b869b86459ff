//! Survival and censoring times joined by a Clayton copula.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::io::FeatureTable;
use crate::survival::SurvivalRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureDist {
    Uniform01,
    StandardNormal,
}

#[derive(Debug, Clone)]
pub struct SimSpec {
    pub n: usize,
    pub alpha: f64,
    /// Death-hazard coefficient per feature; its length sets the number of
    /// features.
    pub beta: Vec<f64>,
    /// Censoring-hazard coefficient per feature.
    pub gamma: Vec<f64>,
    /// Baseline death hazard per day.
    pub lambda_t: f64,
    /// Baseline censoring hazard per day.
    pub lambda_u: f64,
    pub features: FeatureDist,
    pub seed: u64,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            n: 300,
            alpha: 0.0,
            beta: vec![1.0],
            gamma: vec![0.5],
            lambda_t: 1.0 / 365.0,
            lambda_u: 0.85 / 365.0,
            features: FeatureDist::Uniform01,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimDataset {
    /// Features `x1..xp` plus `time_days` and `event`.
    pub table: FeatureTable,
    pub records: Vec<SurvivalRecord>,
    pub latent_t: Vec<f64>,
    pub latent_u: Vec<f64>,
}

impl SimSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.lambda_t > 0.0 && self.lambda_u > 0.0) {
            return Err(Error::InvalidParameter("baseline rates must be positive".into()));
        }
        if self.beta.len() != self.gamma.len() {
            return Err(Error::InvalidParameter(format!(
                "{} death coefficients but {} censoring coefficients",
                self.beta.len(),
                self.gamma.len()
            )));
        }
        Ok(())
    }
}

/// Conditional-inversion draw from the Clayton copula: `v1` uniform and
/// `v2 = [(w^(-a/(1+a)) - 1) v1^-a + 1]^(-1/a)`.
pub fn clayton_pair<R: Rng>(alpha: f64, rng: &mut R) -> (f64, f64) {
    let v1: f64 = 1.0 - rng.random::<f64>();
    let w: f64 = 1.0 - rng.random::<f64>();
    if alpha == 0.0 {
        return (v1, w);
    }
    // log(a b) with a = w^(-a/(1+a)) - 1 and b = v1^-a
    let s = (-alpha / (1.0 + alpha) * w.ln()).exp_m1().ln() - alpha * v1.ln();
    let log1p_ab = if s > 0.0 { s + (-s).exp().ln_1p() } else { s.exp().ln_1p() };
    let v2 = (-log1p_ab / alpha).exp();
    (v1, v2.clamp(f64::MIN_POSITIVE, 1.0))
}

/// Cox-exponential margins `T = -ln V1 / (lambda_T e^(beta.x))` and
/// `U = -ln V2 / (lambda_U e^(gamma.x))`, observed as `t = min(T, U)`,
/// `event = T <= U`. Record `i` draws from its own stream.
pub fn simulate_dependent(spec: &SimSpec) -> Result<SimDataset> {
    spec.validate()?;
    let p = spec.beta.len();
    let width = spec.n.to_string().len().max(4);
    let ids: Vec<String> = (1..=spec.n).map(|i| format!("S{i:0width$}")).collect();
    let mut cols = vec![Vec::with_capacity(spec.n); p];
    let (mut latent_t, mut latent_u) = (Vec::with_capacity(spec.n), Vec::with_capacity(spec.n));
    for i in 0..spec.n {
        let mut rng = crate::rng::stream(spec.seed, i as u64);
        let x: Vec<f64> = (0..p)
            .map(|_| match spec.features {
                FeatureDist::Uniform01 => rng.random::<f64>(),
                FeatureDist::StandardNormal => StandardNormal.sample(&mut rng),
            })
            .collect();
        let (v1, v2) = clayton_pair(spec.alpha, &mut rng);
        let lin_t: f64 = x.iter().zip(&spec.beta).map(|(a, b)| a * b).sum();
        let lin_u: f64 = x.iter().zip(&spec.gamma).map(|(a, b)| a * b).sum();
        latent_t.push((-v1.ln()).max(f64::MIN_POSITIVE) / (spec.lambda_t * lin_t.exp()));
        latent_u.push((-v2.ln()).max(f64::MIN_POSITIVE) / (spec.lambda_u * lin_u.exp()));
        for (c, v) in cols.iter_mut().zip(x) {
            c.push(v);
        }
    }
    let mut table = FeatureTable::new(ids.clone())?;
    for (j, c) in cols.iter().enumerate() {
        table.add_dense(format!("x{}", j + 1), c)?;
    }
    let records: Vec<SurvivalRecord> = ids
        .into_iter()
        .zip(latent_t.iter().zip(&latent_u))
        .map(|(id, (&t, &u))| SurvivalRecord::new(id, t.min(u), t <= u))
        .collect::<Result<_>>()?;
    table.set_time_days(records.iter().map(|r| Some(r.time)).collect())?;
    table.set_event(records.iter().map(|r| Some(u8::from(r.event))).collect())?;
    Ok(SimDataset {
        table,
        records,
        latent_t,
        latent_u,
    })
}

/// Sample Kendall's tau by pair enumeration.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let p = (a[i] - a[j]) * (b[i] - b[j]);
            s += if p > 0.0 {
                1
            } else if p < 0.0 {
                -1
            } else {
                0
            };
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}
