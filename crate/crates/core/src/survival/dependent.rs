//! Semiparametric Cox regression under Clayton-dependent censoring.
//!
//! Death time `T` and censoring time `U` have Cox marginals
//! `S_T = exp(-Lambda0(t) e^(beta x))` and `S_U = exp(-Gamma0(u) e^(gamma x))`
//! joined by a Clayton copula with known `alpha`. Writing `L`, `G` for the
//! two cumulative hazards at the observed time and
//! `E = e^(aL) + e^(aG) - 1`, a death contributes
//! `log dLambda0 + beta x + aL - (1 + 1/a) log E` and a censoring the mirror
//! image. Both baselines are step functions whose log jumps are estimated
//! jointly with `(beta, gamma)`. At `a = 0` the likelihood separates into
//! two Breslow-Cox likelihoods.

use nalgebra::DMatrix;

use super::copula::check_alpha;
use super::cox::{breslow_baseline, cox_univariate, wald_p};
use super::optim::{minimize, Settings};
use super::record::{check_lengths, check_nonconstant, processing_order, SurvivalRecord};
use crate::error::{Error, Result};

/// Non-decreasing step function starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeHazard {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl CumulativeHazard {
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.times.partition_point(|&s| s <= t);
        if k == 0 {
            0.0
        } else {
            self.values[k - 1]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DependentCoxEstimate {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// NaN when standard errors were not requested or the information is
    /// singular.
    pub beta_se: f64,
    pub gamma_se: f64,
    /// Wald p-value for `beta = 0`.
    pub wald_p: f64,
    pub baseline_event: CumulativeHazard,
    pub baseline_censor: CumulativeHazard,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    theta: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DependentCoxOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Also start from `(beta, gamma)` at `(0, 0)`, `(0.5, 0.5)` and
    /// `(-0.5, -0.5)` and keep the best likelihood.
    pub multi_start: bool,
    pub standard_errors: bool,
}

impl Default for DependentCoxOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            grad_tol: 1e-6,
            multi_start: true,
            standard_errors: true,
        }
    }
}

pub fn dependent_cox(records: &[SurvivalRecord], x: &[f64], alpha: f64) -> Result<DependentCoxEstimate> {
    dependent_cox_with(records, x, alpha, &DependentCoxOptions::default(), None)
}

/// [`dependent_cox`] with explicit options and an optional warm start, which
/// must come from a fit on the same records and covariate.
pub fn dependent_cox_with(
    records: &[SurvivalRecord],
    x: &[f64],
    alpha: f64,
    opts: &DependentCoxOptions,
    warm: Option<&DependentCoxEstimate>,
) -> Result<DependentCoxEstimate> {
    check_alpha(alpha)?;
    check_lengths(records, x)?;
    check_nonconstant(x)?;
    let deaths = records.iter().filter(|r| r.event).count();
    if deaths == 0 {
        return Err(Error::NoEvents);
    }
    if deaths < 2 || records.len() - deaths < 2 {
        return Err(Error::Degenerate(format!(
            "dependent Cox needs at least 2 deaths and 2 censorings, got {deaths} and {}",
            records.len() - deaths
        )));
    }
    let problem = Problem::new(records, x, alpha);
    let settings = Settings {
        memory: 12,
        max_iter: opts.max_iter,
        grad_tol: opts.grad_tol,
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    match warm {
        Some(w) if w.theta.len() == problem.n_params() => starts.push(w.theta.clone()),
        _ => {
            let naive_t = cox_univariate(records, x).map(|c| c.beta).unwrap_or(0.0);
            let flipped: Vec<SurvivalRecord> = records
                .iter()
                .map(|r| SurvivalRecord {
                    event: !r.event,
                    ..r.clone()
                })
                .collect();
            let naive_u = cox_univariate(&flipped, x).map(|c| c.beta).unwrap_or(0.0);
            starts.push(problem.start(records, x, naive_t, naive_u)?);
        }
    }
    if opts.multi_start {
        for (b, g) in [(0.0, 0.0), (0.5, 0.5), (-0.5, -0.5)] {
            starts.push(problem.start(records, x, b, g)?);
        }
    }

    let mut best: Option<super::optim::Outcome> = None;
    for s in starts {
        let out = minimize(|th, g| problem.neg_loglik(th, g), s, &settings);
        let better = match &best {
            None => true,
            Some(b) => out.value < b.value - 1e-9 || (out.value <= b.value + 1e-9 && out.converged && !b.converged),
        };
        if better {
            best = Some(out);
        }
    }
    let mut out = best.expect("at least one start");
    if !out.converged {
        problem.newton_polish(&mut out, opts.grad_tol);
    }
    if !out.converged {
        let gmax = out.grad.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        log::debug!("dependent Cox at alpha={alpha} stopped after {} iterations, max|g|={gmax:.2e}", out.iterations);
    }

    let (beta_se, gamma_se) = if opts.standard_errors {
        problem.standard_errors(&out.x)
    } else {
        (f64::NAN, f64::NAN)
    };
    let (baseline_event, baseline_censor) = problem.baselines(&out.x);
    Ok(DependentCoxEstimate {
        alpha,
        beta: out.x[0],
        gamma: out.x[1],
        beta_se,
        gamma_se,
        wald_p: if opts.standard_errors { wald_p(out.x[0], beta_se) } else { f64::NAN },
        baseline_event,
        baseline_censor,
        loglik: -out.value,
        converged: out.converged,
        iterations: out.iterations,
        theta: out.x,
    })
}

/// Records in processing order with their baseline-jump indices.
struct Problem {
    alpha: f64,
    x: Vec<f64>,
    death: Vec<bool>,
    /// Number of distinct death times `<=` the record's time.
    ke: Vec<usize>,
    /// Number of distinct censoring times `<=` the record's time.
    kc: Vec<usize>,
    death_times: Vec<f64>,
    death_counts: Vec<f64>,
    censor_times: Vec<f64>,
    censor_counts: Vec<f64>,
    sum_x_death: f64,
    sum_x_censor: f64,
}

fn distinct_times(records: &[SurvivalRecord], order: &[usize], event: bool) -> (Vec<f64>, Vec<f64>) {
    let mut times: Vec<f64> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    for &i in order.iter().filter(|&&i| records[i].event == event) {
        if times.last() == Some(&records[i].time) {
            *counts.last_mut().unwrap() += 1.0;
        } else {
            times.push(records[i].time);
            counts.push(1.0);
        }
    }
    (times, counts)
}

impl Problem {
    fn new(records: &[SurvivalRecord], x: &[f64], alpha: f64) -> Self {
        let order = processing_order(records);
        let (death_times, death_counts) = distinct_times(records, &order, true);
        let (censor_times, censor_counts) = distinct_times(records, &order, false);
        let xs: Vec<f64> = order.iter().map(|&i| x[i]).collect();
        let death: Vec<bool> = order.iter().map(|&i| records[i].event).collect();
        let times: Vec<f64> = order.iter().map(|&i| records[i].time).collect();
        let ke = times.iter().map(|&t| death_times.partition_point(|&s| s <= t)).collect();
        let kc = times.iter().map(|&t| censor_times.partition_point(|&s| s <= t)).collect();
        let sum_x_death = xs.iter().zip(&death).filter(|p| *p.1).map(|p| p.0).sum();
        let sum_x_censor = xs.iter().zip(&death).filter(|p| !*p.1).map(|p| p.0).sum();
        Self {
            alpha,
            x: xs,
            death,
            ke,
            kc,
            death_times,
            death_counts,
            censor_times,
            censor_counts,
            sum_x_death,
            sum_x_censor,
        }
    }

    fn n_params(&self) -> usize {
        2 + self.death_times.len() + self.censor_times.len()
    }

    /// Breslow-type baselines for the given coefficients.
    fn start(&self, records: &[SurvivalRecord], x: &[f64], beta: f64, gamma: f64) -> Result<Vec<f64>> {
        let mut theta = vec![beta, gamma];
        let flipped: Vec<SurvivalRecord> = records
            .iter()
            .map(|r| SurvivalRecord {
                event: !r.event,
                ..r.clone()
            })
            .collect();
        for (recs, coef) in [(records, beta), (&flipped[..], gamma)] {
            let mut prev = 0.0;
            for (_, cum) in breslow_baseline(recs, x, coef)? {
                theta.push((cum - prev).max(1e-300).ln());
                prev = cum;
            }
        }
        debug_assert_eq!(theta.len(), self.n_params());
        Ok(theta)
    }

    /// Per-record term `phi(L, G)` and its partial derivatives.
    fn phi(&self, death: bool, l: f64, g: f64) -> (f64, f64, f64) {
        let a = self.alpha;
        if a == 0.0 {
            return (-l - g, -1.0, -1.0);
        }
        let (al, ag) = (a * l, a * g);
        let m = al.max(ag);
        let (log_e, wl, wg) = if m < 30.0 {
            let (el, eg) = (al.exp_m1(), ag.exp_m1());
            let e = 1.0 + el + eg;
            ((el + eg).ln_1p(), (1.0 + el) / e, (1.0 + eg) / e)
        } else {
            let log_e = m + ((al - m).exp() + (ag - m).exp() - (-m).exp()).ln();
            (log_e, (al - log_e).exp(), (ag - log_e).exp())
        };
        let d = if death { 1.0 } else { 0.0 };
        let value = a * (d * l + (1.0 - d) * g) - (1.0 + 1.0 / a) * log_e;
        (value, a * d - (1.0 + a) * wl, a * (1.0 - d) - (1.0 + a) * wg)
    }

    fn neg_loglik(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let (beta, gamma) = (theta[0], theta[1]);
        let k_e = self.death_times.len();
        let (a, b) = theta[2..].split_at(k_e);
        let ja: Vec<f64> = a.iter().map(|v| v.exp()).collect();
        let jb: Vec<f64> = b.iter().map(|v| v.exp()).collect();
        let mut cum_a = vec![0.0; ja.len() + 1];
        for (k, j) in ja.iter().enumerate() {
            cum_a[k + 1] = cum_a[k] + j;
        }
        let mut cum_b = vec![0.0; jb.len() + 1];
        for (k, j) in jb.iter().enumerate() {
            cum_b[k + 1] = cum_b[k] + j;
        }

        let mut ll = beta * self.sum_x_death + gamma * self.sum_x_censor;
        ll += a.iter().zip(&self.death_counts).map(|(v, d)| v * d).sum::<f64>();
        ll += b.iter().zip(&self.censor_counts).map(|(v, d)| v * d).sum::<f64>();
        let mut g_beta = self.sum_x_death;
        let mut g_gamma = self.sum_x_censor;
        // per-jump-index accumulators of phi_L e^(beta x) and phi_G e^(gamma x)
        let mut ra = vec![0.0; ja.len() + 1];
        let mut rb = vec![0.0; jb.len() + 1];
        for i in 0..self.x.len() {
            let xi = self.x[i];
            let (wb, wg) = ((beta * xi).exp(), (gamma * xi).exp());
            let l = wb * cum_a[self.ke[i]];
            let g = wg * cum_b[self.kc[i]];
            let (p, pl, pg) = self.phi(self.death[i], l, g);
            ll += p;
            g_beta += pl * l * xi;
            g_gamma += pg * g * xi;
            ra[self.ke[i]] += pl * wb;
            rb[self.kc[i]] += pg * wg;
        }
        grad[0] = -g_beta;
        grad[1] = -g_gamma;
        let mut suffix = 0.0;
        for k in (0..ja.len()).rev() {
            suffix += ra[k + 1];
            grad[2 + k] = -(self.death_counts[k] + ja[k] * suffix);
        }
        let mut suffix = 0.0;
        for k in (0..jb.len()).rev() {
            suffix += rb[k + 1];
            grad[2 + k_e + k] = -(self.censor_counts[k] + jb[k] * suffix);
        }
        if ll.is_finite() {
            -ll
        } else {
            f64::INFINITY
        }
    }

    /// Damped Newton steps on a quasi-Newton result that stopped short of the
    /// gradient tolerance.
    fn newton_polish(&self, out: &mut super::optim::Outcome, grad_tol: f64) {
        let p = out.x.len();
        let mut g_new = vec![0.0; p];
        for _ in 0..20 {
            let h = self.hessian(&out.x);
            let g = nalgebra::DVector::from_column_slice(&out.grad);
            let mut mu = 0.0;
            let mut moved = false;
            for _ in 0..12 {
                let shifted = &h + DMatrix::<f64>::identity(p, p) * mu;
                if let Some(chol) = shifted.cholesky() {
                    let step = chol.solve(&g);
                    let cand: Vec<f64> = out.x.iter().zip(step.iter()).map(|(x, d)| x - d).collect();
                    let f = self.neg_loglik(&cand, &mut g_new);
                    if f.is_finite() && f <= out.value + 1e-12 * out.value.abs() {
                        out.x = cand;
                        out.value = f;
                        out.grad.copy_from_slice(&g_new);
                        moved = true;
                        break;
                    }
                }
                mu = if mu == 0.0 { 1e-6 } else { mu * 10.0 };
            }
            out.iterations += 1;
            out.converged = out.grad.iter().all(|v| v.abs() < grad_tol);
            if out.converged || !moved {
                break;
            }
        }
    }

    /// Central-difference Hessian of the analytic gradient, symmetrized.
    fn hessian(&self, theta: &[f64]) -> DMatrix<f64> {
        let p = theta.len();
        let mut h = DMatrix::<f64>::zeros(p, p);
        let mut th = theta.to_vec();
        let (mut gp, mut gm) = (vec![0.0; p], vec![0.0; p]);
        for j in 0..p {
            let step = 1e-5 * theta[j].abs().max(1.0);
            th[j] = theta[j] + step;
            self.neg_loglik(&th, &mut gp);
            th[j] = theta[j] - step;
            self.neg_loglik(&th, &mut gm);
            th[j] = theta[j];
            for i in 0..p {
                h[(i, j)] = (gp[i] - gm[i]) / (2.0 * step);
            }
        }
        (&h + h.transpose()) * 0.5
    }

    /// Wald standard errors of `(beta, gamma)` from the inverse Hessian.
    fn standard_errors(&self, theta: &[f64]) -> (f64, f64) {
        let h = self.hessian(theta);
        let inv = match h.clone().cholesky() {
            Some(c) => Some(c.inverse()),
            None => h.try_inverse(),
        };
        match inv {
            Some(v) => {
                let se = |k: usize| if v[(k, k)] > 0.0 { v[(k, k)].sqrt() } else { f64::NAN };
                (se(0), se(1))
            }
            None => (f64::NAN, f64::NAN),
        }
    }

    fn baselines(&self, theta: &[f64]) -> (CumulativeHazard, CumulativeHazard) {
        let k_e = self.death_times.len();
        let build = |times: &[f64], logs: &[f64]| {
            let mut c = 0.0;
            CumulativeHazard {
                times: times.to_vec(),
                values: logs
                    .iter()
                    .map(|v| {
                        c += v.exp();
                        c
                    })
                    .collect(),
            }
        };
        (
            build(&self.death_times, &theta[2..2 + k_e]),
            build(&self.censor_times, &theta[2 + k_e..]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::survival::{simulate_dependent, SimSpec};

    fn data(alpha: f64, seed: u64, n: usize) -> (Vec<SurvivalRecord>, Vec<f64>) {
        let spec = SimSpec {
            n,
            alpha,
            beta: vec![1.0],
            gamma: vec![0.5],
            seed,
            ..SimSpec::default()
        };
        let sim = simulate_dependent(&spec).unwrap();
        let x = sim.table.feature_complete("x1").unwrap();
        (sim.records, x)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (r, x) = data(4.0, 1, 40);
        for alpha in [0.0, 0.7, 6.0, 40.0] {
            let p = Problem::new(&r, &x, alpha);
            let theta = p.start(&r, &x, 0.3, -0.2).unwrap();
            let mut g = vec![0.0; theta.len()];
            p.neg_loglik(&theta, &mut g);
            let mut scratch = g.clone();
            for j in 0..theta.len() {
                let mut t = theta.clone();
                t[j] += 1e-6;
                let fp = p.neg_loglik(&t, &mut scratch);
                t[j] -= 2e-6;
                let fm = p.neg_loglik(&t, &mut scratch);
                let fd = (fp - fm) / 2e-6;
                assert!((fd - g[j]).abs() < 1e-5 * g[j].abs().max(1.0), "alpha {alpha} param {j}: {fd} vs {}", g[j]);
            }
        }
    }

    #[test]
    fn independence_reduces_to_cox() {
        for seed in 0..5 {
            let (r, x) = data(3.0, seed, 120);
            let dep = dependent_cox(&r, &x, 0.0).unwrap();
            let cox = cox_univariate(&r, &x).unwrap();
            assert!(dep.converged);
            assert!((dep.beta - cox.beta).abs() < 1e-3, "{} vs {}", dep.beta, cox.beta);
            assert!((dep.beta_se - cox.se).abs() < 1e-3 * cox.se.max(1.0));
        }
    }

    #[test]
    fn baselines_are_monotone_from_zero() {
        let (r, x) = data(6.0, 9, 80);
        let est = dependent_cox(&r, &x, 6.0).unwrap();
        for h in [&est.baseline_event, &est.baseline_censor] {
            assert_eq!(h.value_at(0.0), 0.0);
            assert!(h.values.windows(2).all(|w| w[1] >= w[0]));
        }
        assert!(est.wald_p > 0.0 && est.wald_p <= 1.0);
        assert!(est.beta_se > 0.0);
    }

    #[test]
    fn needs_both_outcomes() {
        let (r, x) = data(1.0, 2, 30);
        let all_dead: Vec<_> = r.iter().map(|s| SurvivalRecord { event: true, ..s.clone() }).collect();
        assert!(matches!(dependent_cox(&all_dead, &x, 1.0), Err(Error::Degenerate(_))));
    }
}
