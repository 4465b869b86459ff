use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::io::FeatureTable;

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalRecord {
    pub patient_id: String,
    /// Observed time `min(T, U)` in days.
    pub time: f64,
    /// `true` when death was observed (`T <= U`).
    pub event: bool,
}

impl SurvivalRecord {
    pub fn new(patient_id: impl Into<String>, time: f64, event: bool) -> Result<Self> {
        if !(time > 0.0 && time.is_finite()) {
            return Err(Error::Domain(format!("survival time must be positive and finite, got {time}")));
        }
        Ok(Self {
            patient_id: patient_id.into(),
            time,
            event,
        })
    }
}

/// Records for every row of `table`, which must carry complete `time_days`
/// and `event` columns.
pub fn records_from_table(table: &FeatureTable) -> Result<Vec<SurvivalRecord>> {
    let times = table.time_days().ok_or_else(|| Error::Table("no time_days column".into()))?;
    let events = table.labels(crate::io::table::EVENT)?;
    table
        .patient_ids()
        .iter()
        .zip(times)
        .zip(events)
        .map(|((id, t), e)| {
            let t = t.ok_or_else(|| Error::Table(format!("time_days missing for patient {id}")))?;
            SurvivalRecord::new(id.clone(), t, e == 1)
        })
        .collect()
}

/// Processing order shared by every estimator: ascending time, events before
/// censorings at equal times, then input order. This is the order that
/// rank-scaled jittering of tied times would induce.
pub(crate) fn processing_order(records: &[SurvivalRecord]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..records.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ra, rb) = (&records[a], &records[b]);
        ra.time
            .partial_cmp(&rb.time)
            .unwrap_or(Ordering::Equal)
            .then(rb.event.cmp(&ra.event))
            .then(a.cmp(&b))
    });
    idx
}

pub(crate) fn check_lengths(records: &[SurvivalRecord], x: &[f64]) -> Result<()> {
    if records.len() != x.len() {
        return Err(Error::InvalidParameter(format!(
            "{} records but {} covariate values",
            records.len(),
            x.len()
        )));
    }
    Ok(())
}

pub(crate) fn check_nonconstant(x: &[f64]) -> Result<()> {
    let first = x.first().copied().unwrap_or(0.0);
    if x.iter().all(|&v| v == first) {
        return Err(Error::Degenerate("covariate is constant".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("covariate holds non-finite values".into()));
    }
    Ok(())
}
