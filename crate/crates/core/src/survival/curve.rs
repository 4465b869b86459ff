//! Copula-graphic and Kaplan-Meier step curves.

use std::io::Write;
use std::path::Path;

use super::copula::check_alpha;
use super::record::{processing_order, SurvivalRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub time: f64,
    /// Survival just after this record.
    pub survival: f64,
    /// Number at risk just before this record.
    pub n_at_risk: usize,
    pub censored: bool,
}

/// Right-continuous step survival curve with one point per record.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSurvivalCurve {
    points: Vec<CurvePoint>,
}

impl StepSurvivalCurve {
    /// Checks that times are positive and ascending and survival is
    /// non-increasing within `[0, 1]`.
    pub fn from_points(points: Vec<CurvePoint>) -> Result<Self> {
        let mut prev = (0.0, 1.0);
        for p in &points {
            if !(p.time > 0.0 && p.time >= prev.0 && p.survival >= 0.0 && p.survival <= prev.1) {
                return Err(Error::Domain(format!("invalid curve point at time {}", p.time)));
            }
            prev = (p.time, p.survival);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// Largest observed time, event or censoring.
    pub fn max_time(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.time)
    }

    /// `S(t)`, equal to 1 before the first record.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.points.partition_point(|p| p.time <= t);
        if k == 0 {
            1.0
        } else {
            self.points[k - 1].survival
        }
    }

    /// `(time, survival after)` at each event time, one entry per distinct time.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for p in self.points.iter().filter(|p| !p.censored) {
            match out.last_mut() {
                Some(last) if last.0 == p.time => last.1 = self.value_at(p.time),
                _ => out.push((p.time, self.value_at(p.time))),
            }
        }
        out
    }

    pub fn censor_marks(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.censored)
            .map(|p| (p.time, self.value_at(p.time)))
            .collect()
    }

    /// `time,survival,n_at_risk,is_censor_mark`, one row per record.
    pub fn write_csv_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time,survival,n_at_risk,is_censor_mark")?;
        for p in &self.points {
            writeln!(w, "{},{},{},{}", p.time, p.survival, p.n_at_risk, u8::from(p.censored))?;
        }
        Ok(())
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut buf = Vec::new();
        self.write_csv_to(&mut buf).map_err(|e| Error::io(path, e))?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }
}

/// Copula-graphic estimate of the survival function of `T` under a Clayton
/// copula with parameter `alpha`; Kaplan-Meier at `alpha = 0`.
///
/// With `n_i` at risk before the i-th ordered record,
/// `S(t) = [1 + sum_{t_i <= t, event} (((n_i - 1)/n)^-a - (n_i/n)^-a)]^(-1/a)`.
/// The curve is 0 after an event with `n_i = 1`.
pub fn cg_curve(records: &[SurvivalRecord], alpha: f64) -> Result<StepSurvivalCurve> {
    check_alpha(alpha)?;
    if records.is_empty() {
        return Err(Error::InvalidParameter("no survival records".into()));
    }
    if alpha == 0.0 {
        return kaplan_meier(records);
    }
    let n = records.len();
    let order = processing_order(records);
    let nf = n as f64;
    let mut sum = 0.0;
    let mut dead = false;
    let points = order
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let r = &records[i];
            let at_risk = n - pos;
            if r.event && !dead {
                if at_risk == 1 {
                    dead = true;
                } else {
                    let a = -alpha * ((at_risk - 1) as f64 / nf).ln();
                    let b = -alpha * (at_risk as f64 / nf).ln();
                    sum += b.exp() * (a - b).exp_m1();
                }
            }
            let survival = if dead { 0.0 } else { (-sum.ln_1p() / alpha).exp() };
            CurvePoint {
                time: r.time,
                survival,
                n_at_risk: at_risk,
                censored: !r.event,
            }
        })
        .collect();
    Ok(StepSurvivalCurve { points })
}

/// Product-limit estimator.
pub fn kaplan_meier(records: &[SurvivalRecord]) -> Result<StepSurvivalCurve> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no survival records".into()));
    }
    let n = records.len();
    let mut s = 1.0;
    let points = processing_order(records)
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let r = &records[i];
            let at_risk = n - pos;
            if r.event {
                s *= 1.0 - 1.0 / at_risk as f64;
            }
            CurvePoint {
                time: r.time,
                survival: s,
                n_at_risk: at_risk,
                censored: !r.event,
            }
        })
        .collect();
    Ok(StepSurvivalCurve { points })
}
