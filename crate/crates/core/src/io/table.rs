//! Patient-by-feature tables and their CSV form.
//!
//! `patient_id` is required. `time_days`, `event`, `rep_label`, `mgmt_status`
//! and `idh_status` are reserved; every other column is a numeric feature.
//! Empty cells are missing values.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const PATIENT_ID: &str = "patient_id";
pub const TIME_DAYS: &str = "time_days";
pub const EVENT: &str = "event";
pub const REP_LABEL: &str = "rep_label";
pub const MGMT_STATUS: &str = "mgmt_status";
pub const IDH_STATUS: &str = "idh_status";
const RESERVED: [&str; 5] = [TIME_DAYS, EVENT, REP_LABEL, MGMT_STATUS, IDH_STATUS];

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    patient_ids: Vec<String>,
    features: Vec<FeatureColumn>,
    time_days: Option<Vec<Option<f64>>>,
    event: Option<Vec<Option<u8>>>,
    rep_label: Option<Vec<Option<u8>>>,
    mgmt_status: Option<Vec<String>>,
    idh_status: Option<Vec<String>>,
}

impl FeatureTable {
    pub fn new(patient_ids: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for id in &patient_ids {
            if id.is_empty() {
                return Err(Error::Table("empty patient_id".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::Table(format!("duplicate patient_id {id:?}")));
            }
        }
        Ok(Self {
            patient_ids,
            ..Default::default()
        })
    }

    pub fn n_rows(&self) -> usize {
        self.patient_ids.len()
    }

    pub fn patient_ids(&self) -> &[String] {
        &self.patient_ids
    }

    fn check_len(&self, name: &str, len: usize) -> Result<()> {
        if len != self.n_rows() {
            return Err(Error::Table(format!(
                "column {name:?} has {len} values for {} patients",
                self.n_rows()
            )));
        }
        Ok(())
    }

    pub fn add_feature(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) -> Result<()> {
        let name = name.into();
        if name == PATIENT_ID || RESERVED.contains(&name.as_str()) {
            return Err(Error::Table(format!("{name:?} is a reserved column")));
        }
        if self.features.iter().any(|c| c.name == name) {
            return Err(Error::Table(format!("duplicate feature name {name:?}")));
        }
        self.check_len(&name, values.len())?;
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Table(format!("non-finite value in {name:?}")));
        }
        self.features.push(FeatureColumn { name, values });
        Ok(())
    }

    /// Convenience for complete columns.
    pub fn add_dense(&mut self, name: impl Into<String>, values: &[f64]) -> Result<()> {
        self.add_feature(name, values.iter().copied().map(Some).collect())
    }

    pub fn set_time_days(&mut self, values: Vec<Option<f64>>) -> Result<()> {
        self.check_len(TIME_DAYS, values.len())?;
        if let Some(v) = values.iter().flatten().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!("time_days must be positive, got {v}")));
        }
        self.time_days = Some(values);
        Ok(())
    }

    pub fn set_event(&mut self, values: Vec<Option<u8>>) -> Result<()> {
        self.check_len(EVENT, values.len())?;
        check_binary(EVENT, &values)?;
        self.event = Some(values);
        Ok(())
    }

    pub fn set_rep_label(&mut self, values: Vec<Option<u8>>) -> Result<()> {
        self.check_len(REP_LABEL, values.len())?;
        check_binary(REP_LABEL, &values)?;
        self.rep_label = Some(values);
        Ok(())
    }

    pub fn set_mgmt_status(&mut self, values: Vec<String>) -> Result<()> {
        self.check_len(MGMT_STATUS, values.len())?;
        self.mgmt_status = Some(values);
        Ok(())
    }

    pub fn set_idh_status(&mut self, values: Vec<String>) -> Result<()> {
        self.check_len(IDH_STATUS, values.len())?;
        self.idh_status = Some(values);
        Ok(())
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    pub fn feature_names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|c| c.name.as_str())
    }

    pub fn feature(&self, name: &str) -> Option<&[Option<f64>]> {
        self.features.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    /// Feature column with every cell present.
    pub fn feature_complete(&self, name: &str) -> Result<Vec<f64>> {
        let col = self
            .feature(name)
            .ok_or_else(|| Error::Table(format!("missing feature column {name:?}")))?;
        col.iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Table(format!(
                        "feature {name:?} is missing for patient {}",
                        self.patient_ids[i]
                    ))
                })
            })
            .collect()
    }

    pub fn time_days(&self) -> Option<&[Option<f64>]> {
        self.time_days.as_deref()
    }

    pub fn event(&self) -> Option<&[Option<u8>]> {
        self.event.as_deref()
    }

    pub fn rep_label(&self) -> Option<&[Option<u8>]> {
        self.rep_label.as_deref()
    }

    pub fn mgmt_status(&self) -> Option<&[String]> {
        self.mgmt_status.as_deref()
    }

    pub fn idh_status(&self) -> Option<&[String]> {
        self.idh_status.as_deref()
    }

    /// Complete 0/1 labels from `rep_label`, `event`, or a feature column.
    pub fn labels(&self, column: &str) -> Result<Vec<u8>> {
        let values: Vec<Option<u8>> = match column {
            REP_LABEL => self.rep_label.clone().ok_or_else(|| Error::Table("no rep_label column".into()))?,
            EVENT => self.event.clone().ok_or_else(|| Error::Table("no event column".into()))?,
            other => {
                let col = self.feature_complete(other)?;
                col.iter()
                    .map(|&v| match v {
                        v if v == 0.0 => Ok(Some(0)),
                        v if v == 1.0 => Ok(Some(1)),
                        v => Err(Error::Domain(format!("label column {other:?} holds {v}"))),
                    })
                    .collect::<Result<_>>()?
            }
        };
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Table(format!("label missing for patient {}", self.patient_ids[i]))))
            .collect()
    }

    /// Rows `rows` in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> FeatureTable {
        let pick = |v: &Vec<Option<f64>>| rows.iter().map(|&r| v[r]).collect::<Vec<_>>();
        let pick8 = |v: &Vec<Option<u8>>| rows.iter().map(|&r| v[r]).collect::<Vec<_>>();
        let picks = |v: &Vec<String>| rows.iter().map(|&r| v[r].clone()).collect::<Vec<_>>();
        FeatureTable {
            patient_ids: rows.iter().map(|&r| self.patient_ids[r].clone()).collect(),
            features: self
                .features
                .iter()
                .map(|c| FeatureColumn {
                    name: c.name.clone(),
                    values: pick(&c.values),
                })
                .collect(),
            time_days: self.time_days.as_ref().map(pick),
            event: self.event.as_ref().map(pick8),
            rep_label: self.rep_label.as_ref().map(pick8),
            mgmt_status: self.mgmt_status.as_ref().map(picks),
            idh_status: self.idh_status.as_ref().map(picks),
        }
    }

    /// Copy with every feature min-max scaled to [0, 1] over its present cells.
    /// Constant columns map to 0.
    pub fn minmax_scaled(&self) -> FeatureTable {
        let mut out = self.clone();
        for col in &mut out.features {
            let (lo, hi) = col
                .values
                .iter()
                .flatten()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let range = hi - lo;
            for v in col.values.iter_mut().flatten() {
                *v = if range > 0.0 { (*v - lo) / range } else { 0.0 };
            }
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn write_to<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let mut header = vec![PATIENT_ID.to_string()];
        header.extend(self.features.iter().map(|c| c.name.clone()));
        let reserved_present: Vec<&str> = RESERVED
            .iter()
            .copied()
            .filter(|r| match *r {
                TIME_DAYS => self.time_days.is_some(),
                EVENT => self.event.is_some(),
                REP_LABEL => self.rep_label.is_some(),
                MGMT_STATUS => self.mgmt_status.is_some(),
                _ => self.idh_status.is_some(),
            })
            .collect();
        header.extend(reserved_present.iter().map(|s| s.to_string()));
        wtr.write_record(&header)?;
        for (i, id) in self.patient_ids.iter().enumerate() {
            let mut row = vec![id.clone()];
            row.extend(self.features.iter().map(|c| fmt_cell(c.values[i])));
            for r in &reserved_present {
                row.push(match *r {
                    TIME_DAYS => fmt_cell(self.time_days.as_ref().unwrap()[i]),
                    EVENT => fmt_label(self.event.as_ref().unwrap()[i]),
                    REP_LABEL => fmt_label(self.rep_label.as_ref().unwrap()[i]),
                    MGMT_STATUS => self.mgmt_status.as_ref().unwrap()[i].clone(),
                    _ => self.idh_status.as_ref().unwrap()[i].clone(),
                });
            }
            wtr.write_record(&row)?;
        }
        wtr.flush()
    }

    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(r);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        let id_col = header
            .iter()
            .position(|h| h == PATIENT_ID)
            .ok_or_else(|| Error::Table("missing required column patient_id".into()))?;
        let mut seen = HashSet::new();
        for h in &header {
            if !seen.insert(h.as_str()) {
                return Err(Error::Table(format!("duplicate column {h:?}")));
            }
        }
        let mut rows: Vec<Vec<String>> = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| match e.kind() {
                csv::ErrorKind::UnequalLengths { .. } => Error::Table(format!("ragged row at data line {}", line + 1)),
                _ => Error::Table(e.to_string()),
            })?;
            rows.push(rec.iter().map(|s| s.trim().to_string()).collect());
        }
        let column = |c: usize| rows.iter().map(|r| r[c].clone()).collect::<Vec<_>>();
        let mut table = FeatureTable::new(column(id_col))?;
        for (c, name) in header.iter().enumerate() {
            if c == id_col {
                continue;
            }
            let cells = column(c);
            match name.as_str() {
                TIME_DAYS => table.set_time_days(parse_numeric(name, &cells)?)?,
                EVENT => table.set_event(parse_binary(name, &cells)?)?,
                REP_LABEL => table.set_rep_label(parse_binary(name, &cells)?)?,
                MGMT_STATUS => table.set_mgmt_status(cells)?,
                IDH_STATUS => table.set_idh_status(cells)?,
                _ => table.add_feature(name.clone(), parse_numeric(name, &cells)?)?,
            }
        }
        Ok(table)
    }
}

fn check_binary(name: &str, values: &[Option<u8>]) -> Result<()> {
    if let Some(v) = values.iter().flatten().find(|v| **v > 1) {
        return Err(Error::Domain(format!("{name} must be 0 or 1, got {v}")));
    }
    Ok(())
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v}")).unwrap_or_default()
}

fn fmt_label(v: Option<u8>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn parse_numeric(name: &str, cells: &[String]) -> Result<Vec<Option<f64>>> {
    cells
        .iter()
        .map(|c| {
            if c.is_empty() {
                return Ok(None);
            }
            match c.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => Err(Error::Table(format!("non-numeric value {c:?} in column {name:?}"))),
            }
        })
        .collect()
}

fn parse_binary(name: &str, cells: &[String]) -> Result<Vec<Option<u8>>> {
    parse_numeric(name, cells)?
        .into_iter()
        .map(|v| match v {
            None => Ok(None),
            Some(v) if v == 0.0 => Ok(Some(0)),
            Some(v) if v == 1.0 => Ok(Some(1)),
            Some(v) => Err(Error::Domain(format!("{name} must be 0 or 1, got {v}"))),
        })
        .collect()
}

pub fn load_feature_table(path: impl AsRef<Path>) -> Result<FeatureTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    FeatureTable::from_reader(std::io::BufReader::new(file))
}
