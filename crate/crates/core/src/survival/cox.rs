//! Univariate proportional hazards fits.

use statrs::function::erf::erfc;

use super::record::{check_lengths, check_nonconstant, processing_order, SurvivalRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoxEstimate {
    pub beta: f64,
    pub se: f64,
    pub wald_p: f64,
    pub converged: bool,
    pub iterations: usize,
}

const MAX_ITER: usize = 100;
const SCORE_TOL: f64 = 1e-8;

/// Two-sided p-value of a Wald statistic `estimate / se`.
pub fn wald_p(estimate: f64, se: f64) -> f64 {
    if !(se > 0.0 && se.is_finite()) {
        return 1.0;
    }
    erfc((estimate / se).abs() / std::f64::consts::SQRT_2).clamp(f64::MIN_POSITIVE, 1.0)
}

/// Breslow log partial likelihood with its first two derivatives in `beta`.
pub fn cox_partial_loglik(records: &[SurvivalRecord], x: &[f64], beta: f64) -> Result<(f64, f64, f64)> {
    check_lengths(records, x)?;
    let order = processing_order(records);
    Ok(breslow(records, x, &order, beta))
}

fn breslow(records: &[SurvivalRecord], x: &[f64], order: &[usize], beta: f64) -> (f64, f64, f64) {
    // Walk from the latest time backwards, adding whole tied blocks to the
    // risk set before scoring their events.
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    let (mut ll, mut score, mut info) = (0.0, 0.0, 0.0);
    let mut end = order.len();
    while end > 0 {
        let t = records[order[end - 1]].time;
        let mut start = end;
        while start > 0 && records[order[start - 1]].time == t {
            start -= 1;
        }
        let mut d = 0.0;
        let mut xsum = 0.0;
        for &i in &order[start..end] {
            let w = (beta * x[i]).exp();
            s0 += w;
            s1 += w * x[i];
            s2 += w * x[i] * x[i];
            if records[i].event {
                d += 1.0;
                xsum += x[i];
            }
        }
        if d > 0.0 {
            let mean = s1 / s0;
            ll += beta * xsum - d * s0.ln();
            score += xsum - d * mean;
            info += d * (s2 / s0 - mean * mean);
        }
        end = start;
    }
    (ll, score, info)
}

/// Newton-Raphson fit of `h(t | x) = h0(t) exp(beta x)` with step halving.
/// A fit that fails to reach `|score| < 1e-8` within 100 iterations is
/// returned with `converged = false`.
pub fn cox_univariate(records: &[SurvivalRecord], x: &[f64]) -> Result<CoxEstimate> {
    check_lengths(records, x)?;
    if records.iter().filter(|r| r.event).count() < 2 {
        return Err(Error::NoEvents);
    }
    check_nonconstant(x)?;
    let order = processing_order(records);
    let mut beta = 0.0;
    let (mut ll, mut score, mut info) = breslow(records, x, &order, beta);
    let mut iterations = 0;
    let mut converged = score.abs() < SCORE_TOL;
    while !converged && iterations < MAX_ITER {
        iterations += 1;
        if !(info > 0.0) {
            break;
        }
        let mut step = (score / info).clamp(-5.0, 5.0);
        loop {
            let cand = breslow(records, x, &order, beta + step);
            if cand.0 >= ll - 1e-12 * ll.abs() || step.abs() < 1e-12 {
                beta += step;
                (ll, score, info) = cand;
                break;
            }
            step /= 2.0;
        }
        converged = score.abs() < SCORE_TOL;
    }
    let se = if info > 0.0 { info.sqrt().recip() } else { f64::NAN };
    if !converged {
        log::warn!("cox fit stopped after {iterations} iterations with score {score:.3e}");
    }
    Ok(CoxEstimate {
        beta,
        se,
        wald_p: wald_p(beta, se),
        converged,
        iterations,
    })
}

/// Breslow baseline cumulative hazard at `beta`, as `(event time, Lambda0)`
/// at each distinct event time.
pub fn breslow_baseline(records: &[SurvivalRecord], x: &[f64], beta: f64) -> Result<Vec<(f64, f64)>> {
    check_lengths(records, x)?;
    let order = processing_order(records);
    let n = order.len();
    let mut risk = vec![0.0; n + 1];
    for p in (0..n).rev() {
        risk[p] = risk[p + 1] + (beta * x[order[p]]).exp();
    }
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut cum = 0.0;
    let mut p = 0;
    while p < n {
        let t = records[order[p]].time;
        let mut q = p;
        let mut d = 0.0;
        while q < n && records[order[q]].time == t {
            d += f64::from(u8::from(records[order[q]].event));
            q += 1;
        }
        if d > 0.0 {
            cum += d / risk[p];
            out.push((t, cum));
        }
        p = q;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn exponential_data(n: usize, beta: f64, seed: u64) -> (Vec<SurvivalRecord>, Vec<f64>) {
        let mut rng = stream(seed, 0);
        let mut recs = Vec::new();
        let mut xs = Vec::new();
        for i in 0..n {
            let x: f64 = rng.random();
            let t = -rng.random::<f64>().ln() / (beta * x).exp();
            let c = -rng.random::<f64>().ln() / 0.45;
            recs.push(SurvivalRecord::new(format!("p{i}"), t.min(c), t <= c).unwrap());
            xs.push(x);
        }
        (recs, xs)
    }

    #[test]
    fn matches_grid_search_maximizer() {
        let (r, x) = exponential_data(200, 0.8, 11);
        let fit = cox_univariate(&r, &x).unwrap();
        assert!(fit.converged);
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..=6000 {
            let b = -3.0 + k as f64 * 1e-3;
            let ll = cox_partial_loglik(&r, &x, b).unwrap().0;
            if ll > best.0 {
                best = (ll, b);
            }
        }
        assert!((fit.beta - best.1).abs() < 1e-3, "{} vs {}", fit.beta, best.1);
        let (ll, score, _) = cox_partial_loglik(&r, &x, fit.beta).unwrap();
        assert!(score.abs() < 1e-6);
        for d in [-0.01, 0.01] {
            assert!(ll >= cox_partial_loglik(&r, &x, fit.beta + d).unwrap().0);
        }
    }

    #[test]
    fn recovers_beta_on_average() {
        let mean: f64 = (0..20)
            .map(|s| {
                let (r, x) = exponential_data(200, 0.8, 100 + s);
                cox_univariate(&r, &x).unwrap().beta
            })
            .sum::<f64>()
            / 20.0;
        assert!((mean - 0.8).abs() < 0.2, "{mean}");
    }

    #[test]
    fn breslow_ties_hand_case() {
        // two tied deaths at t=1 among three at risk with x = (0, 1, 0)
        let r: Vec<_> = [(1.0, true), (1.0, true), (2.0, true)]
            .iter()
            .enumerate()
            .map(|(i, &(t, e))| SurvivalRecord::new(format!("{i}"), t, e).unwrap())
            .collect();
        let x = [0.0, 1.0, 0.0];
        let b = 0.3f64;
        let expect = b - 2.0 * (2.0 + b.exp()).ln() + 0.0;
        assert!((cox_partial_loglik(&r, &x, b).unwrap().0 - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        let (r, _) = exponential_data(20, 0.5, 3);
        assert!(matches!(cox_univariate(&r, &[1.0; 20]), Err(Error::Degenerate(_))));
        let censored: Vec<_> = r.iter().map(|x| SurvivalRecord { event: false, ..x.clone() }).collect();
        assert!(matches!(cox_univariate(&censored, &[0.5; 20]), Err(Error::NoEvents)));
    }
}
