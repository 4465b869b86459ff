use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::FeatureTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    Good,
    Bad,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Self::Good => "good",
            Self::Bad => "bad",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrognosticGrouping {
    pub patient_ids: Vec<String>,
    pub pi: Vec<f64>,
    pub groups: Vec<Group>,
    /// Midpoint between the highest good and the lowest bad PI.
    pub threshold: f64,
}

/// `PI_i = sum_j beta_j x_ij` over the named features.
pub fn compute_pi(coefficients: &[(String, f64)], table: &FeatureTable) -> Result<Vec<f64>> {
    let mut pi = vec![0.0; table.n_rows()];
    for (name, beta) in coefficients {
        if table.feature(name).is_none() {
            return Err(Error::Table(format!("no feature column {name:?}")));
        }
        for (p, x) in pi.iter_mut().zip(table.feature_complete(name)?) {
            *p += beta * x;
        }
    }
    Ok(pi)
}

/// Median split: the lower `floor(n/2)` PIs are good, the rest bad. Equal
/// PIs are ordered by patient id.
pub fn split_by_pi(pi: &[f64], patient_ids: &[String]) -> Result<PrognosticGrouping> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 patients to split".into()));
    }
    if patient_ids.len() != n {
        return Err(Error::InvalidParameter(format!("{} ids for {n} PI values", patient_ids.len())));
    }
    if pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite prognostic index".into()));
    }
    if pi.iter().all(|&v| v == pi[0]) {
        return Err(Error::Degenerate("all prognostic index values are identical".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pi[a].total_cmp(&pi[b]).then_with(|| patient_ids[a].cmp(&patient_ids[b])));
    let n_good = n / 2;
    let mut groups = vec![Group::Bad; n];
    for &i in &order[..n_good] {
        groups[i] = Group::Good;
    }
    let threshold = (pi[order[n_good - 1]] + pi[order[n_good]]) / 2.0;
    Ok(PrognosticGrouping {
        patient_ids: patient_ids.to_vec(),
        pi: pi.to_vec(),
        groups,
        threshold,
    })
}

impl PrognosticGrouping {
    pub fn members(&self, g: Group) -> Vec<usize> {
        (0..self.groups.len()).filter(|&i| self.groups[i] == g).collect()
    }

    /// `patient_id,pi,group,rep_label` with an empty label cell when unknown.
    pub fn write_report_to<W: Write>(&self, w: W, rep_labels: Option<&[Option<u8>]>) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        out.write_record(["patient_id", "pi", "group", "rep_label"]).map_err(err)?;
        for i in 0..self.pi.len() {
            let rep = rep_labels.and_then(|r| r[i]).map(|v| v.to_string()).unwrap_or_default();
            out.write_record([self.patient_ids[i].as_str(), &self.pi[i].to_string(), self.groups[i].name(), &rep])
                .map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("prognosis_report.csv", e))
    }

    pub fn write_report(&self, path: impl AsRef<Path>, rep_labels: Option<&[Option<u8>]>) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_report_to(std::io::BufWriter::new(f), rep_labels)
    }
}
