use std::io::Write;
use std::path::Path;

use super::grouping::{Group, PrognosticGrouping};
use crate::error::{Error, Result};
use crate::stats::{two_group_test, Descriptive, GroupTest};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupStats {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub se: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl From<Descriptive> for GroupStats {
    fn from(d: Descriptive) -> Self {
        Self {
            n: d.n,
            mean: d.mean,
            std: d.std,
            se: d.standard_error(),
            median: d.median,
            min: d.min,
            max: d.max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupComparison {
    /// Good group first.
    pub stats: [GroupStats; 2],
    pub test: GroupTest,
    pub p_value: f64,
    pub small_group: bool,
    /// Curve distance and its permutation p-value, when curves were compared.
    pub distance: Option<(f64, f64)>,
}

/// Descriptive statistics per group and the normality-gated two-group test.
pub fn group_comparison(values: &[f64], groups: &[Group]) -> Result<GroupComparison> {
    if values.len() != groups.len() {
        return Err(Error::InvalidParameter(format!("{} values for {} group labels", values.len(), groups.len())));
    }
    let split = |g: Group| -> Vec<f64> { values.iter().zip(groups).filter(|(_, &k)| k == g).map(|(v, _)| *v).collect() };
    let (good, bad) = (split(Group::Good), split(Group::Bad));
    if good.is_empty() || bad.is_empty() {
        return Err(Error::Degenerate("a group has no values".into()));
    }
    let r = two_group_test(&good, &bad)?;
    Ok(GroupComparison {
        stats: [Descriptive::of(&good)?.into(), Descriptive::of(&bad)?.into()],
        test: r.test,
        p_value: r.p_value,
        small_group: r.small_group,
        distance: None,
    })
}

impl GroupComparison {
    /// `metric,group,n,mean,std,se,median,min,max,test,p_value`, then a
    /// `curve_distance` row carrying `D` in the mean column when present.
    pub fn write_csv_to<W: Write>(&self, w: W, metric: &str) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Format(e.to_string());
        out.write_record(["metric", "group", "n", "mean", "std", "se", "median", "min", "max", "test", "p_value"])
            .map_err(err)?;
        for (g, s) in [Group::Good, Group::Bad].iter().zip(&self.stats) {
            out.write_record([
                metric.to_string(),
                g.name().to_string(),
                s.n.to_string(),
                s.mean.to_string(),
                s.std.to_string(),
                s.se.to_string(),
                s.median.to_string(),
                s.min.to_string(),
                s.max.to_string(),
                self.test.name().to_string(),
                self.p_value.to_string(),
            ])
            .map_err(err)?;
        }
        if let Some((d, p)) = self.distance {
            let mut row = vec![String::new(); 11];
            row[0] = "curve_distance".into();
            row[1] = "good_vs_bad".into();
            row[3] = d.to_string();
            row[9] = "permutation".into();
            row[10] = p.to_string();
            out.write_record(&row).map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("comparison.csv", e))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, metric: &str) -> Result<()> {
        let path = path.as_ref();
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(std::io::BufWriter::new(f), metric)
    }
}

/// Counts indexed `[label][group]` (label 0 = non-REP, 1 = REP; group
/// 0 = good, 1 = bad) with row percentages. A row with no patients has
/// undefined (`None`) percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossTab {
    pub counts: [[usize; 2]; 2],
    pub row_percent: [[Option<f64>; 2]; 2],
}

/// Patients with an unknown label are left out.
pub fn cross_tab(grouping: &PrognosticGrouping, rep_labels: &[Option<u8>]) -> Result<CrossTab> {
    if rep_labels.len() != grouping.groups.len() {
        return Err(Error::InvalidParameter(format!(
            "{} labels for {} patients",
            rep_labels.len(),
            grouping.groups.len()
        )));
    }
    let mut counts = [[0usize; 2]; 2];
    for (l, g) in rep_labels.iter().zip(&grouping.groups) {
        if let Some(l) = l {
            if *l > 1 {
                return Err(Error::Domain(format!("label {l} is not 0 or 1")));
            }
            counts[usize::from(*l)][usize::from(*g == Group::Bad)] += 1;
        }
    }
    let row_percent = counts.map(|row| {
        let total = row[0] + row[1];
        row.map(|c| (total > 0).then(|| 100.0 * c as f64 / total as f64))
    });
    Ok(CrossTab { counts, row_percent })
}

impl CrossTab {
    /// `rep_label,good,bad,good_percent,bad_percent`, percentages to two
    /// decimals and empty when undefined.
    pub fn write_csv_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "rep_label,good,bad,good_percent,bad_percent")?;
        for (label, (c, p)) in self.counts.iter().zip(&self.row_percent).enumerate() {
            let fmt = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
            writeln!(w, "{label},{},{},{},{}", c[0], c[1], fmt(p[0]), fmt(p[1]))?;
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
