use super::record::SurvivalRecord;
use crate::error::{Error, Result};

/// Harrell's concordance index.
///
/// A pair is usable when the shorter observed time ends in death (at equal
/// times, a death against a censoring counts the death as shorter). It is
/// concordant when the shorter-lived patient has the higher risk; risk ties
/// score one half.
pub fn harrell_c(risk: &[f64], records: &[SurvivalRecord]) -> Result<f64> {
    if risk.len() != records.len() {
        return Err(Error::InvalidParameter(format!(
            "{} risk scores but {} records",
            risk.len(),
            records.len()
        )));
    }
    let mut usable = 0u64;
    let mut score2 = 0u64;
    for (i, ri) in records.iter().enumerate() {
        if !ri.event {
            continue;
        }
        for (j, rj) in records.iter().enumerate() {
            if i == j {
                continue;
            }
            let shorter = ri.time < rj.time || (ri.time == rj.time && !rj.event);
            if !shorter {
                continue;
            }
            usable += 1;
            score2 += match risk[i].partial_cmp(&risk[j]) {
                Some(std::cmp::Ordering::Greater) => 2,
                Some(std::cmp::Ordering::Equal) => 1,
                _ => 0,
            };
        }
    }
    if usable == 0 {
        return Err(Error::NoUsablePairs);
    }
    Ok(score2 as f64 / (2 * usable) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn recs(v: &[(f64, bool)]) -> Vec<SurvivalRecord> {
        v.iter()
            .enumerate()
            .map(|(i, &(t, e))| SurvivalRecord::new(format!("p{i}"), t, e).unwrap())
            .collect()
    }

    #[test]
    fn trivial_cases() {
        let r = recs(&[(1.0, true), (2.0, true), (3.0, false), (4.0, true)]);
        assert_eq!(harrell_c(&[4.0, 3.0, 2.0, 1.0], &r).unwrap(), 1.0);
        assert_eq!(harrell_c(&[1.0; 4], &r).unwrap(), 0.5);
        assert!(harrell_c(&[1.0, 2.0], &recs(&[(1.0, false), (2.0, false)])).is_err());
    }

    #[test]
    fn five_record_hand_case() {
        // usable pairs (shorter first): (a,b) (a,c) (a,d) (a,e) (c,d) (c,e) (d,e)
        let r = recs(&[(2.0, true), (3.0, false), (4.0, true), (5.0, true), (6.0, false)]);
        let risk = [0.9, 0.1, 0.4, 0.4, 0.8];
        // a beats all four; c vs d tie; c vs e discordant; d vs e discordant
        let expect = (4.0 + 0.5) / 7.0;
        assert!((harrell_c(&risk, &r).unwrap() - expect).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn invariant_under_increasing_transform(
            data in prop::collection::vec((0.1f64..10.0, any::<bool>(), -3.0f64..3.0), 2..40)
        ) {
            let r = recs(&data.iter().map(|d| (d.0, d.1)).collect::<Vec<_>>());
            let risk: Vec<f64> = data.iter().map(|d| d.2).collect();
            let moved: Vec<f64> = risk.iter().map(|v| v.exp() * 3.0 + 1.0).collect();
            match (harrell_c(&risk, &r), harrell_c(&moved, &r)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false),
            }
        }
    }
}
