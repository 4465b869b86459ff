use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationMetrics {
    pub auc: f64,
    pub accuracy: f64,
    pub ppv: f64,
    pub fpr: f64,
    pub f1: f64,
}

/// Confusion counts and rates at the 0.5 cut. Rates with an empty
/// denominator are 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionMetrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub accuracy: f64,
    pub ppv: f64,
    pub fpr: f64,
    pub f1: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn check(y: &[u8], scores: &[f64]) -> Result<()> {
    if y.len() != scores.len() {
        return Err(Error::InvalidParameter(format!("{} labels but {} scores", y.len(), scores.len())));
    }
    if let Some(v) = y.iter().find(|&&v| v > 1) {
        return Err(Error::Domain(format!("label {v} is not 0 or 1")));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Domain("non-finite score".into()));
    }
    Ok(())
}

/// Area under the ROC curve as the Mann-Whitney statistic, ties counted
/// one half.
pub fn auc(y: &[u8], scores: &[f64]) -> Result<f64> {
    check(y, scores)?;
    let mut idx: Vec<usize> = (0..y.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let (mut rank_sum, mut n1) = (0.0, 0usize);
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            if y[k] == 1 {
                rank_sum += mid;
                n1 += 1;
            }
        }
        i = j + 1;
    }
    let n0 = y.len() - n1;
    if n1 == 0 || n0 == 0 {
        return Err(Error::SingleClass);
    }
    let (f1, f0) = (n1 as f64, n0 as f64);
    Ok((rank_sum - f1 * (f1 + 1.0) / 2.0) / (f1 * f0))
}

/// Class 1 is predicted when the score is at least 0.5.
pub fn confusion_metrics(y: &[u8], scores: &[f64]) -> Result<ConfusionMetrics> {
    check(y, scores)?;
    let pred: Vec<u8> = scores.iter().map(|&s| u8::from(s >= 0.5)).collect();
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&t, &p) in y.iter().zip(&pred) {
        match (t, p) {
            (1, 1) => tp += 1,
            (0, 1) => fp += 1,
            (0, 0) => tn += 1,
            _ => fn_ += 1,
        }
    }
    Ok(ConfusionMetrics {
        tp,
        fp,
        tn,
        fn_,
        accuracy: ratio(tp + tn, y.len()),
        ppv: ratio(tp, tp + fp),
        fpr: ratio(fp, fp + tn),
        f1: ratio(2 * tp, 2 * tp + fp + fn_),
    })
}

/// F1 of class 1 from hard predictions; 0 when there are no true or
/// predicted positives.
pub fn f1_score(y: &[u8], pred: &[u8]) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&t, &p) in y.iter().zip(pred) {
        match (t, p) {
            (1, 1) => tp += 1,
            (0, 1) => fp += 1,
            (1, 0) => fn_ += 1,
            _ => {}
        }
    }
    ratio(2 * tp, 2 * tp + fp + fn_)
}

/// Fails with [`Error::SingleClass`] when `y` has one class; use
/// [`confusion_metrics`] for the threshold metrics alone.
pub fn classification_metrics(y: &[u8], scores: &[f64]) -> Result<ClassificationMetrics> {
    if scores.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::Domain("scores must lie in [0, 1]".into()));
    }
    let c = confusion_metrics(y, scores)?;
    Ok(ClassificationMetrics {
        auc: auc(y, scores)?,
        accuracy: c.accuracy,
        ppv: c.ppv,
        fpr: c.fpr,
        f1: c.f1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_auc(y: &[u8], s: &[f64]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..y.len() {
            for j in 0..y.len() {
                if y[i] == 1 && y[j] == 0 {
                    den += 1.0;
                    num += if s[i] > s[j] {
                        1.0
                    } else if s[i] == s[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        num / den
    }

    #[test]
    fn hand_cases() {
        let m = classification_metrics(&[0, 1], &[0.1, 0.9]).unwrap();
        assert_eq!((m.auc, m.f1, m.accuracy, m.ppv, m.fpr), (1.0, 1.0, 1.0, 1.0, 0.0));
        assert_eq!(auc(&[0, 1, 0, 1], &[0.5; 4]).unwrap(), 0.5);
        assert_eq!(auc(&[0, 0, 1, 1], &[0.2, 0.6, 0.4, 0.8]).unwrap(), 0.75);
        assert!(matches!(classification_metrics(&[1, 1], &[0.2, 0.7]), Err(Error::SingleClass)));
        let c = confusion_metrics(&[1, 1], &[0.2, 0.7]).unwrap();
        assert_eq!((c.tp, c.fn_, c.accuracy), (1, 1, 0.5));
    }

    proptest! {
        #[test]
        fn matches_pair_count_and_is_rank_invariant(
            pairs in prop::collection::vec((0u8..2, 0u32..20), 2..40)
        ) {
            let y: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            prop_assume!(y.contains(&0) && y.contains(&1));
            let s: Vec<f64> = pairs.iter().map(|p| f64::from(p.1) / 20.0).collect();
            let a = auc(&y, &s).unwrap();
            prop_assert!((a - brute_auc(&y, &s)).abs() < 1e-12);
            let t: Vec<f64> = s.iter().map(|v| (3.0 * v).exp() + v * v * v).collect();
            prop_assert!((auc(&y, &t).unwrap() - a).abs() < 1e-12);
            let m = confusion_metrics(&y, &s).unwrap();
            let acc = (m.tp + m.tn) as f64 / y.len() as f64;
            prop_assert_eq!(m.accuracy, acc);
            prop_assert!([m.ppv, m.fpr, m.f1].iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
