use super::{mann_whitney, one_way_anova, shapiro_wilk};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTest {
    Anova,
    MannWhitney,
}

impl GroupTest {
    pub fn name(self) -> &'static str {
        match self {
            Self::Anova => "anova",
            Self::MannWhitney => "wilcoxon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoGroupResult {
    pub test: GroupTest,
    /// In `(0, 1]`.
    pub p_value: f64,
    /// A group had fewer than 3 values, so normality was not assessed.
    pub small_group: bool,
}

/// Shapiro-Wilk on each group; one-way ANOVA when neither rejects
/// normality at 0.05, the rank-sum test otherwise. Groups too small or too
/// flat for the normality test go to the rank-sum test.
pub fn two_group_test(a: &[f64], b: &[f64]) -> Result<TwoGroupResult> {
    let small_group = a.len() < 3 || b.len() < 3;
    let normal = !small_group
        && [a, b]
            .iter()
            .all(|g| shapiro_wilk(g).map(|s| s.p_value >= 0.05).unwrap_or(false));
    let (test, p) = if normal {
        (GroupTest::Anova, one_way_anova(&[a, b])?.p_value)
    } else {
        (GroupTest::MannWhitney, mann_whitney(a, b)?.p_value)
    };
    Ok(TwoGroupResult {
        test,
        p_value: p.clamp(f64::MIN_POSITIVE, 1.0),
        small_group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Exp, StandardNormal};

    #[test]
    fn routes_by_normality() {
        let (mut anova, mut power, mut wilcoxon) = (0, 0, 0);
        for seed in 0..100 {
            let mut rng = crate::rng::stream(seed, 0);
            let a: Vec<f64> = (0..30).map(|_| StandardNormal.sample(&mut rng)).collect();
            let b: Vec<f64> = (0..30).map(|_| 1.0 + Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect();
            let r = two_group_test(&a, &b).unwrap();
            anova += usize::from(r.test == GroupTest::Anova);
            power += usize::from(r.p_value < 0.01);
            let e = Exp::new(1.0).unwrap();
            let c: Vec<f64> = (0..60).map(|_| e.sample(&mut rng)).collect();
            let d: Vec<f64> = (0..60).map(|_| 0.5 + e.sample(&mut rng)).collect();
            wilcoxon += usize::from(two_group_test(&c, &d).unwrap().test == GroupTest::MannWhitney);
        }
        // both groups pass Shapiro-Wilk with probability ~0.90 and the
        // t-test power at d = 1, n = 30, level 0.01 is ~0.89
        assert!(anova >= 80, "{anova}");
        assert!(power >= 80, "{power}");
        assert!(wilcoxon >= 95, "{wilcoxon}");
    }
}
