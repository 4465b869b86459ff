use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaResult {
    pub f: f64,
    pub df_between: f64,
    pub df_within: f64,
    pub p_value: f64,
}

/// One-way analysis of variance across `groups`.
pub fn one_way_anova(groups: &[&[f64]]) -> Result<AnovaResult> {
    let k = groups.len();
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if k < 2 || groups.iter().any(|g| g.is_empty()) || n <= k {
        return Err(Error::InvalidParameter("ANOVA needs >= 2 non-empty groups and more values than groups".into()));
    }
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n as f64;
    let (mut ssb, mut ssw) = (0.0, 0.0);
    for g in groups {
        let m = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (m - grand).powi(2);
        ssw += g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    let (d1, d2) = ((k - 1) as f64, (n - k) as f64);
    let (f, p_value) = if ssw <= 0.0 {
        if ssb <= 0.0 {
            (f64::NAN, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let f = (ssb / d1) / (ssw / d2);
        let dist = FisherSnedecor::new(d1, d2).map_err(|e| Error::Domain(e.to_string()))?;
        (f, dist.sf(f))
    };
    Ok(AnovaResult {
        f,
        df_between: d1,
        df_within: d2,
        p_value,
    })
}
