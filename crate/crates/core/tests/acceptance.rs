//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line,
//! visible without `--nocapture`, and then asserts. Tests share a lock so the wall-clock limits measure one
//! criterion at a time.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use cgrep::fractal::{mbm_map, ptpsa_map};
use cgrep::io::config::DEFAULT_ALPHA_GRID;
use cgrep::io::FeatureTable;
use cgrep::learners::BoostParams;
use cgrep::prognosis::{cross_tab, permutation_pvalue, split_by_pi, Group};
use cgrep::resampling::{evaluate_model, rank_features, threshold_select, ResamplingPlan, ThresholdRule};
use cgrep::stats::ks_uniform_distance;
use cgrep::survival::{cg_curve, cox_univariate, dependent_cox, kaplan_meier, select_alpha, tau_of_alpha, SurvivalRecord};
use cgrep::synth::survival::clayton_pair;
use cgrep::synth::{simulate_classification, simulate_dependent, simulate_phantom, PhantomKind, SimSpec};
use cgrep::texture::directions::offset_table;
use cgrep::texture::glcm::gtsdm_features;
use cgrep::texture::glszm::ZoneSizeMatrix;
use cgrep::texture::ngtdm::{ngtdm_features, NGTDM_EPS};
use cgrep::texture::quantize::QuantizedRegion;
use common::{close, glcm_oracle, glzsm_oracle, ngtdm_oracle, zones, Box3};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, StandardNormal};

static LOCK: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(n: usize, pass: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let ok = pass && elapsed <= limit;
    // written to the handle directly so the line survives output capture
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion {n}: {} ({detail}; {:.1}s of {:.0}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    drop(out);
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(elapsed <= limit, "criterion {n} exceeded {limit:?}: {elapsed:?}");
}

#[test]
fn criterion_01_copula_graphic_reduces_to_kaplan_meier() {
    let _g = serial();
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..200u64 {
        let mut rng = cgrep::rng::stream(2024, k);
        let n = rng.random_range(1..=200usize);
        let censoring = rng.random_range(0.0..=0.5);
        let ties = k % 2 == 0;
        let exp = Exp::new(1.0 / 300.0).unwrap();
        let records: Vec<SurvivalRecord> = (0..n)
            .map(|i| {
                let mut t: f64 = exp.sample(&mut rng);
                if ties {
                    t = t.ceil();
                }
                let event = i == 0 || rng.random::<f64>() >= censoring;
                SurvivalRecord::new(format!("P{i}"), t.max(1e-3), event).unwrap()
            })
            .collect();
        let km = kaplan_meier(&records).unwrap();
        let cg = cg_curve(&records, 1e-8).unwrap();
        for r in &records {
            for t in [r.time, r.time * (1.0 - 1e-9)] {
                worst = worst.max((km.value_at(t) - cg.value_at(t)).abs());
            }
        }
    }
    verdict(1, worst < 1e-6, t0.elapsed(), Duration::from_secs(10), &format!("max |CG - KM| = {worst:.2e}"));
}

#[test]
fn criterion_02_kendall_mapping() {
    let _g = serial();
    let t0 = Instant::now();
    let tau18 = tau_of_alpha(18.0).unwrap();
    let taus: Vec<f64> = DEFAULT_ALPHA_GRID.iter().map(|&a| tau_of_alpha(a).unwrap()).collect();
    let monotone = taus.windows(2).all(|w| w[0] < w[1]);
    verdict(
        2,
        (tau18 - 0.9).abs() <= 1e-12 && monotone,
        t0.elapsed(),
        Duration::from_secs(1),
        &format!("tau(18) = {tau18}, strictly increasing over the grid: {monotone}"),
    );
}

#[test]
fn criterion_03_dependent_cox_reduces_bias() {
    let _g = serial();
    let t0 = Instant::now();
    let (mut naive, mut dep, mut cens) = (0.0, 0.0, 0.0);
    let reps = 100;
    for s in 0..reps {
        let sim = simulate_dependent(&SimSpec {
            n: 300,
            alpha: 6.0,
            beta: vec![1.0],
            gamma: vec![0.5],
            lambda_u: 1.22 / 365.0,
            seed: s,
            ..Default::default()
        })
        .unwrap();
        let x = sim.table.feature_complete("x1").unwrap();
        naive += (cox_univariate(&sim.records, &x).unwrap().beta - 1.0).abs();
        dep += (dependent_cox(&sim.records, &x, 6.0).unwrap().beta - 1.0).abs();
        cens += sim.records.iter().filter(|r| !r.event).count() as f64 / 300.0;
    }
    let r = reps as f64;
    let (naive, dep, cens) = (naive / r, dep / r, cens / r);
    verdict(
        3,
        dep < naive && naive > 0.1,
        t0.elapsed(),
        Duration::from_secs(300),
        &format!("mean |bias| naive {naive:.3}, dependent {dep:.3}; censoring {:.0}%", cens * 100.0),
    );
}

#[test]
fn criterion_04_alpha_selection_direction() {
    let _g = serial();
    let t0 = Instant::now();
    let names: Vec<String> = (1..=3).map(|j| format!("x{j}")).collect();
    let upper_from = DEFAULT_ALPHA_GRID[DEFAULT_ALPHA_GRID.len() / 2];
    let mut upper = [0usize; 2];
    let reps = 50u64;
    for (k, alpha) in [18.0, 0.0].into_iter().enumerate() {
        for s in 0..reps {
            let sim = simulate_dependent(&SimSpec {
                n: 200,
                alpha,
                beta: vec![1.0, -1.0, 0.5],
                gamma: vec![0.5, 1.0, -1.0],
                lambda_u: 1.2 / 365.0,
                seed: 1000 + s,
                ..Default::default()
            })
            .unwrap();
            let sel = select_alpha(&sim.records, &sim.table, &names, &DEFAULT_ALPHA_GRID, 5, s).unwrap();
            upper[k] += usize::from(sel.alpha >= upper_from);
        }
    }
    let dependent_ok = upper[0] * 100 >= 80 * reps as usize;
    let independent_ok = (reps as usize - upper[1]) * 100 >= 80 * reps as usize;
    verdict(
        4,
        dependent_ok && independent_ok,
        t0.elapsed(),
        Duration::from_secs(600),
        &format!(
            "tau 0.9: upper half {}/{reps}; tau 0: lower half {}/{reps}",
            upper[0],
            reps as usize - upper[1]
        ),
    );
}

fn random_box(seed: u64) -> Box3 {
    let mut rng = cgrep::rng::stream(seed, 5);
    let levels = rng.random_range(2..=8usize);
    let mut v: Vec<u16> = (0..64)
        .map(|_| if rng.random::<f64>() < 0.15 { 0 } else { rng.random_range(1..=levels as u16) })
        .collect();
    v[0] = v[0].max(1);
    Box3 { size: [4, 4, 4], v, levels }
}

fn matches(ours: &[(&'static str, f64)], oracle: &BTreeMap<&'static str, f64>, what: &str, bad: &mut Vec<String>) {
    if ours.len() != oracle.len() {
        bad.push(format!("{what}: {} features vs {}", ours.len(), oracle.len()));
    }
    for (name, v) in ours {
        match oracle.get(name) {
            Some(&o) if close(*v, o, 1e-12) => {}
            o => bad.push(format!("{what} {name}: {v} vs {o:?}")),
        }
    }
}

#[test]
fn criterion_05_texture_oracles() {
    let _g = serial();
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..100 {
        let b = random_box(seed);
        let q = QuantizedRegion::from_levels(b.size, b.v.clone(), b.levels).unwrap();
        for off in offset_table(&[1, 2, 3]) {
            match (gtsdm_features(&q, off), glcm_oracle(&b, off)) {
                (Ok(f), Some(o)) => matches(&f, &o, &format!("region {seed} GTSDM {off:?}"), &mut bad),
                (Err(_), None) => {}
                (r, o) => bad.push(format!("region {seed} GTSDM {off:?}: {:?} vs {}", r.is_ok(), o.is_some())),
            }
        }
        matches(&ngtdm_features(&q), &ngtdm_oracle(&b, NGTDM_EPS), &format!("region {seed} NGTDM"), &mut bad);
        let m = ZoneSizeMatrix::build(&q);
        let mut want: BTreeMap<(u16, usize), usize> = BTreeMap::new();
        for z in zones(&b) {
            *want.entry(z).or_default() += 1;
        }
        if m.counts != want {
            bad.push(format!("region {seed} zone decomposition differs"));
        }
        matches(&m.features(), &glzsm_oracle(&b), &format!("region {seed} GLZSM"), &mut bad);
    }
    for line in bad.iter().take(10) {
        println!("  {line}");
    }
    verdict(5, bad.is_empty(), t0.elapsed(), Duration::from_secs(5), &format!("{} mismatches over 100 regions", bad.len()));
}

#[test]
fn criterion_06_fractal_calibration() {
    let _g = serial();
    let t0 = Instant::now();
    let mut fd_dev = 0.0f64;
    for kind in [PhantomKind::Constant, PhantomKind::Ramp] {
        let (g, _) = simulate_phantom(kind, [24, 24, 4], 0.5, 0).unwrap();
        let m = ptpsa_map(&g, 11, &[1, 2, 4]).unwrap();
        fd_dev = m.values.data().iter().fold(fd_dev, |d, &v| d.max((v - 2.0).abs()));
    }
    let hs = [0.3, 0.5, 0.7];
    let mut good = 0;
    let mut worst = 0.0f64;
    for s in 0..40u64 {
        let est: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let (g, _) = simulate_phantom(PhantomKind::Fbm, [32, 32, 32], h, s).unwrap();
                mbm_map(&g, 11, &[1, 2, 4]).unwrap().mean()
            })
            .collect();
        let dev = est.iter().zip(hs).map(|(e, h)| (e - h).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        good += usize::from(dev <= 0.15 && est[0] < est[1] && est[1] < est[2]);
    }
    verdict(
        6,
        fd_dev <= 0.05 && good * 100 >= 95 * 40,
        t0.elapsed(),
        Duration::from_secs(120),
        &format!("PTPSA max |FD - 2| = {fd_dev:.2e}; mBm within 0.15 and monotone in {good}/40 seeds (worst dev {worst:.3})"),
    );
}

fn ranking_table(seed: u64, planted: bool) -> (FeatureTable, Vec<u8>) {
    let (minority, majority) = (30, 90);
    let n = minority + majority;
    let y: Vec<u8> = (0..n).map(|i| u8::from(i < minority)).collect();
    let mut rng = cgrep::rng::stream(seed, 999_999);
    let mut t = FeatureTable::new((0..n).map(|i| format!("P{i:03}")).collect()).unwrap();
    if planted {
        let noise = Normal::new(0.0, 0.1).unwrap();
        let v: Vec<f64> = y.iter().map(|&l| f64::from(l) + noise.sample(&mut rng)).collect();
        t.add_dense("planted", &v).unwrap();
    }
    for j in 0..200 {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        t.add_dense(format!("noise_{j:03}"), &v).unwrap();
    }
    (t, y)
}

#[test]
fn criterion_07_ranking_power() {
    let _g = serial();
    let t0 = Instant::now();
    let (mut first, mut nothing) = (0, 0);
    for s in 0..100u64 {
        let plan = ResamplingPlan {
            iterations: 50,
            folds: 5,
            majority_sample: Some(60),
            seed: s,
        };
        let (t, y) = ranking_table(s, true);
        first += usize::from(rank_features(&t, &y, &plan).unwrap().features[0] == "planted");
        let (t, y) = ranking_table(s + 10_000, false);
        let r = rank_features(&t, &y, &plan).unwrap();
        nothing += usize::from(threshold_select(&r, 0.6, ThresholdRule::Inclusive).is_empty());
    }
    verdict(
        7,
        first >= 95 && nothing >= 90,
        t0.elapsed(),
        Duration::from_secs(300),
        &format!("planted first in {first}/100 seeds; nothing selected under noise in {nothing}/100"),
    );
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn criterion_08_evaluation_sanity() {
    let _g = serial();
    let t0 = Instant::now();
    let plan = ResamplingPlan {
        iterations: 20,
        folds: 5,
        majority_sample: None,
        seed: 3,
    };
    let (t, y) = simulate_classification(200, 3, 5, 3.0, 1).unwrap();
    let all: Vec<String> = t.feature_names().map(String::from).collect();
    let separable = mean(&evaluate_model(&t, &y, &all, &plan, BoostParams::default()).unwrap().auc());

    let (t, mut y) = simulate_classification(2000, 3, 5, 3.0, 2).unwrap();
    y.shuffle(&mut cgrep::rng::stream(7, 0));
    let informative: Vec<String> = (1..=3).map(|k| format!("inf_{k}")).collect();
    let shuffled = mean(&evaluate_model(&t, &y, &informative, &plan, BoostParams::default()).unwrap().auc());

    let (t, y) = simulate_classification(40, 3, 5, 3.0, 1).unwrap();
    let plan = ResamplingPlan { iterations: 1000, ..plan };
    let d = evaluate_model(&t, &y, &informative, &plan, BoostParams::default()).unwrap();
    let lens = [d.auc().len(), d.accuracy().len(), d.ppv().len(), d.fpr().len(), d.f1().len()];
    verdict(
        8,
        separable >= 0.95 && (0.45..=0.55).contains(&shuffled) && lens.iter().all(|&l| l == 5000),
        t0.elapsed(),
        Duration::from_secs(900),
        &format!("separable AUC {separable:.4}; shuffled AUC {shuffled:.4}; metric lengths {lens:?}"),
    );
}

/// Exponential deaths with hazard `HR^g` per patient, Clayton-coupled to
/// exponential censoring. `hr == 1` draws a uniform PI with no effect.
fn permutation_data(n: usize, hr: f64, alpha: f64, seed: u64) -> (Vec<SurvivalRecord>, Vec<f64>, Vec<String>) {
    let mut rng = cgrep::rng::stream(seed, 0);
    let mut recs = Vec::with_capacity(n);
    let mut pi = Vec::with_capacity(n);
    for i in 0..n {
        let g = if hr == 1.0 { rng.random::<f64>() } else { (i % 2) as f64 };
        let (v1, v2) = clayton_pair(alpha, &mut rng);
        let t = -v1.ln() / (hr.powf(g) / 365.0);
        let u = -v2.ln() / (0.5 / 365.0);
        recs.push(SurvivalRecord::new(format!("P{i:04}"), t.min(u), t <= u).unwrap());
        pi.push(g);
    }
    let ids = recs.iter().map(|r| r.patient_id.clone()).collect();
    (recs, pi, ids)
}

#[test]
fn criterion_09_permutation_calibration() {
    let _g = serial();
    let t0 = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for alpha in [0.0, 2.0] {
        let null: Vec<f64> = (0..200u64)
            .map(|r| {
                let (recs, pi, ids) = permutation_data(100, 1.0, alpha, r);
                let g = split_by_pi(&pi, &ids).unwrap();
                permutation_pvalue(&recs, &g, alpha, 200, 1000 + r).unwrap().p_value
            })
            .collect();
        let ks = ks_uniform_distance(&null);
        let hits = (0..200u64)
            .filter(|&r| {
                let (recs, pi, ids) = permutation_data(100, 4.0, alpha, 5000 + r);
                let g = split_by_pi(&pi, &ids).unwrap();
                permutation_pvalue(&recs, &g, alpha, 200, r).unwrap().p_value < 0.01
            })
            .count();
        pass &= ks < 0.1 && hits >= 180;
        detail.push(format!("alpha {alpha}: null KS {ks:.3}, HR 4 power {hits}/200"));
    }
    verdict(9, pass, t0.elapsed(), Duration::from_secs(600), &detail.join("; "));
}

#[test]
fn criterion_10_prognostic_split() {
    let _g = serial();
    let t0 = Instant::now();
    let ids: Vec<String> = (0..67).map(|i| format!("P{i:02}")).collect();
    let mut rng = cgrep::rng::stream(67, 0);
    let pi: Vec<f64> = (0..67).map(|_| rng.random_range(-2.0..2.0)).collect();
    let g = split_by_pi(&pi, &ids).unwrap();
    let sizes = [g.members(Group::Good).len(), g.members(Group::Bad).len()];
    let transformed: Vec<f64> = pi.iter().map(|v| (3.0 * v).exp() + 7.0).collect();
    let invariant = split_by_pi(&transformed, &ids).unwrap().groups == g.groups;

    // 70 patients: 13 REP (2 good, 11 bad) and 57 non-REP (33 good, 24 bad)
    let mut labels = Vec::new();
    labels.extend(std::iter::repeat_n(Some(1u8), 2));
    labels.extend(std::iter::repeat_n(Some(0u8), 33));
    labels.extend(std::iter::repeat_n(Some(1u8), 11));
    labels.extend(std::iter::repeat_n(Some(0u8), 24));
    let ids70: Vec<String> = (0..70).map(|i| format!("Q{i:02}")).collect();
    let pi70: Vec<f64> = (0..70).map(f64::from).collect();
    let ct = cross_tab(&split_by_pi(&pi70, &ids70).unwrap(), &labels).unwrap();
    let bad_pct = ct.row_percent[1][1].unwrap();
    verdict(
        10,
        sizes.contains(&33) && sizes.contains(&34) && invariant && ct.counts[1] == [2, 11] && (bad_pct - 84.62).abs() < 0.005,
        t0.elapsed(),
        Duration::from_secs(5),
        &format!("sizes {sizes:?}; invariant under monotone transform: {invariant}; REP in bad group {bad_pct:.2}%"),
    );
}

fn cgrep(dir: &Path, threads: usize, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_cgrep"))
        .args(["--seed", "11", "--threads", &threads.to_string(), "--out"])
        .arg(dir)
        .args(args)
        .env_remove("CGREP_TEST_MODE")
        .output()
        .unwrap();
    assert!(out.status.success(), "cgrep {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn run_pipelines(dir: &Path, threads: usize) {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    for (id, seed) in [("A", "1"), ("B", "2")] {
        let sub = dir.join(format!("phantom_{id}"));
        let out = Command::new(env!("CARGO_BIN_EXE_cgrep"))
            .args(["--seed", seed, "--out"])
            .arg(&sub)
            .args(["simulate", "--kind", "phantom", "--dims", "16,16,16", "--hurst", "0.4"])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let (va, ma, vb, mb) = (p("phantom_A/volume.json"), p("phantom_A/mask.json"), p("phantom_B/volume.json"), p("phantom_B/mask.json"));
    cgrep(dir, threads, &["extract", "--volume", &va, "--volume", &vb, "--mask", &ma, "--mask", &mb, "--id", "A", "--id", "B", "--dump-maps"]);

    let cls = dir.join("cls");
    let c = |name: &str| cls.join(name).to_string_lossy().into_owned();
    cgrep(&cls, threads, &["simulate", "--kind", "classification", "--n", "80", "--informative", "2", "--noise", "4", "--separation", "2"]);
    cgrep(&cls, threads, &["rank", "--features", &c("features.csv"), "--iterations", "20"]);
    cgrep(&cls, threads, &["classify", "--features", &c("features.csv"), "--ranking", &c("ranking.csv"), "--iterations", "5"]);

    let sv = dir.join("surv");
    let s = |name: &str| sv.join(name).to_string_lossy().into_owned();
    cgrep(&sv, threads, &["simulate", "--kind", "survival", "--n", "150", "--alpha", "2", "--beta", "2,-2", "--gamma", "0.5,0"]);
    cgrep(&sv, threads, &["survival", "--features", &s("features.csv"), "--alpha-grid", "0,2,6", "--folds", "4"]);
    cgrep(&sv, threads, &["prognosis", "--features", &s("features.csv"), "--selected", &s("selected_features.csv"), "--permutations", "100"]);
}

fn artifacts(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_11_cli_determinism() {
    let _g = serial();
    let t0 = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let runs: Vec<BTreeMap<PathBuf, Vec<u8>>> = [(1, "a"), (1, "b"), (3, "c")]
        .iter()
        .map(|&(threads, name)| {
            let dir = tmp.path().join(name);
            run_pipelines(&dir, threads);
            artifacts(&dir)
        })
        .collect();
    let expected = ["features.csv", "cls/ranking.csv", "cls/metrics.csv", "surv/curve.svg", "surv/group_curves.svg", "surv/prognosis_report.csv"];
    let complete = expected.iter().all(|f| runs[0].contains_key(Path::new(f)));
    let differing: Vec<String> = runs[0]
        .iter()
        .filter(|(k, v)| runs[1..].iter().any(|r| r.get(*k) != Some(*v)))
        .map(|(k, _)| k.display().to_string())
        .collect();
    let same_sets = runs[1..].iter().all(|r| r.len() == runs[0].len());
    verdict(
        11,
        complete && same_sets && differing.is_empty(),
        t0.elapsed(),
        Duration::from_secs(300),
        &format!("{} artifacts compared across 3 runs (threads 1, 1, 3); differing: {differing:?}", runs[0].len()),
    );
}
