//! Command-line pipelines.
//!
//! Every subcommand reads files, writes its artifacts under `--out` and is a
//! pure function of its inputs, configuration and seed. Usage errors exit
//! with status 2, data errors with status 1.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fractal::{extract_fractal, FractalConfig, FractalKind};
use crate::io::{load_feature_table, load_mask, load_volume, write_mask, write_volume, FeatureTable, StudyConfig};
use crate::learners::BoostParams;
use crate::prognosis::{compute_pi, cross_tab, group_comparison, permutation_pvalue, split_by_pi, Group};
use crate::resampling::{
    evaluate_model, rank_features, significance_tests, threshold_select, ResamplingPlan, ThresholdRule,
};
use crate::survival::{cg_curve, records_from_table, select_alpha, select_features_dependent, SurvivalRecord};
use crate::synth::survival::FeatureDist;
use crate::synth::{simulate_classification, simulate_dependent, simulate_phantom, PhantomKind, SimSpec};
use crate::texture::{extract_conventional, feature_dictionary, TextureConfig};

/// Set to a non-empty value other than `0` to make `--seed` mandatory.
pub const TEST_MODE_ENV: &str = "CGREP_TEST_MODE";
/// `off`, `error`, `warn`, `info` or `debug`.
pub const LOG_ENV: &str = "CGREP_LOG";

#[derive(Debug, Parser)]
#[command(name = "cgrep", version, about = "Radiomics, resampling-based ranking and copula survival pipelines")]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, created if needed.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Volumes and masks to features.csv.
    Extract(ExtractArgs),
    /// Per-feature F1 ranking to ranking.csv.
    Rank(RankArgs),
    /// Boosted-tree evaluation to metrics.csv.
    Classify(ClassifyArgs),
    /// Copula parameter selection and dependent-censoring feature screen.
    Survival(SurvivalArgs),
    /// Prognostic index, groups, curves and permutation test.
    Prognosis(PrognosisArgs),
    /// Synthetic fixtures.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Volume file (.nii or RAW3D .json); repeat for several patients.
    #[arg(long, required = true)]
    volume: Vec<PathBuf>,
    /// Mask per volume, same order.
    #[arg(long, required = true)]
    mask: Vec<PathBuf>,
    /// Patient id per volume; defaults to the volume file stem.
    #[arg(long)]
    id: Vec<String>,
    /// CSV with patient_id and reserved outcome columns to merge.
    #[arg(long)]
    clinical: Option<PathBuf>,
    /// Skip the fractal maps.
    #[arg(long)]
    conventional_only: bool,
    /// Also write every fractal map as a RAW3D volume under maps/.
    #[arg(long)]
    dump_maps: bool,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    /// Majority rows drawn per iteration (default: minority count).
    #[arg(long)]
    majority_sample: Option<usize>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    /// Target column: rep_label, event or a 0/1 feature column.
    #[arg(long, default_value = "rep_label")]
    label: String,
    #[command(flatten)]
    plan: PlanArgs,
    #[arg(long)]
    f1_threshold: Option<f64>,
    /// Select scores strictly above the threshold (survival path).
    #[arg(long)]
    exclusive: bool,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long, default_value = "rep_label")]
    label: String,
    /// Comma-separated feature names.
    #[arg(long, value_delimiter = ',')]
    select: Vec<String>,
    /// ranking.csv whose flagged features are used.
    #[arg(long)]
    ranking: Option<PathBuf>,
    #[command(flatten)]
    plan: PlanArgs,
    #[arg(long, default_value_t = 100)]
    trees: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
}

#[derive(Debug, Args)]
struct SurvivalArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    /// Comma-separated candidate features (default: all complete columns).
    #[arg(long, value_delimiter = ',')]
    candidates: Vec<String>,
    /// ranking.csv whose flagged features are the candidates.
    #[arg(long)]
    ranking: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    alpha_grid: Vec<f64>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    p_threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct PrognosisArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    /// selected_features.csv from the survival command.
    #[arg(long)]
    selected: PathBuf,
    /// Copula parameter; default read from survival_summary.csv next to
    /// the selected features.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    permutations: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimKind {
    Survival,
    Classification,
    Phantom,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhantomArg {
    Constant,
    Checkerboard,
    Ramp,
    Fbm,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    kind: SimKind,
    #[arg(long, default_value_t = 300)]
    n: usize,
    /// Clayton parameter of the survival/censoring dependence.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Death-hazard coefficients, one per feature.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    beta: Vec<f64>,
    /// Censoring-hazard coefficients, one per feature.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    gamma: Vec<f64>,
    #[arg(long, default_value_t = 1.0 / 365.0)]
    lambda_t: f64,
    #[arg(long, default_value_t = 0.85 / 365.0)]
    lambda_u: f64,
    /// Standard normal instead of uniform features.
    #[arg(long)]
    normal_features: bool,
    #[arg(long, default_value_t = 3)]
    informative: usize,
    #[arg(long, default_value_t = 10)]
    noise: usize,
    #[arg(long, default_value_t = 1.0)]
    separation: f64,
    #[arg(long, value_enum, default_value = "fbm")]
    phantom: PhantomArg,
    #[arg(long, value_delimiter = ',', default_value = "32,32,32")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    hurst: f64,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

/// Parse `args` (program name first), run the subcommand and return the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn init_logging() {
    let level = std::env::var(LOG_ENV).unwrap_or_else(|_| "warn".into());
    let _ = env_logger::Builder::new().parse_filters(&level).format_timestamp(None).try_init();
}

struct Context {
    cfg: StudyConfig,
    out: PathBuf,
}

fn dispatch(cli: Cli) -> Outcome<()> {
    let mut cfg = match &cli.config {
        Some(p) => StudyConfig::load(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None => StudyConfig::default(),
    };
    let test_mode = std::env::var(TEST_MODE_ENV).is_ok_and(|v| !v.is_empty() && v != "0");
    match cli.seed {
        Some(s) => cfg.seed = s,
        None if test_mode => return usage(format!("--seed is required when {TEST_MODE_ENV} is set")),
        None if cli.config.is_none() => cfg.seed = 42,
        None => {}
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage("--threads must be >= 1");
        }
        // a pool built earlier in this process stays in place; results do not
        // depend on the thread count
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out = cli.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let mut ctx = Context { cfg, out };
    match cli.command {
        Command::Extract(a) => extract(&mut ctx, a),
        Command::Rank(a) => rank(&mut ctx, a),
        Command::Classify(a) => classify(&mut ctx, a),
        Command::Survival(a) => survival(&mut ctx, a),
        Command::Prognosis(a) => prognosis(&mut ctx, a),
        Command::Simulate(a) => simulate(&ctx, a),
    }
}

impl Context {
    fn validate(&self) -> Outcome<()> {
        self.cfg.validate().map_err(|e| Failure::Usage(e.to_string()))
    }

    fn table(&self, flag: &Option<PathBuf>) -> Outcome<FeatureTable> {
        match flag.as_ref().or(self.cfg.features_path.as_ref()) {
            Some(p) => Ok(load_feature_table(p)?),
            None => usage("no feature table: pass --features or set `features` in the config"),
        }
    }

    fn apply_plan(&mut self, p: &PlanArgs) {
        if let Some(i) = p.iterations {
            self.cfg.iterations = i;
        }
        if let Some(f) = p.folds {
            self.cfg.folds = f;
        }
        if p.majority_sample.is_some() {
            self.cfg.majority_sample = p.majority_sample;
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn extract(ctx: &mut Context, a: ExtractArgs) -> Outcome<()> {
    if let Some(l) = a.levels {
        ctx.cfg.levels = l;
    }
    if let Some(w) = a.window {
        ctx.cfg.window = w;
    }
    ctx.validate()?;
    if a.volume.len() != a.mask.len() {
        return usage(format!("{} volumes but {} masks", a.volume.len(), a.mask.len()));
    }
    if !a.id.is_empty() && a.id.len() != a.volume.len() {
        return usage(format!("{} ids for {} volumes", a.id.len(), a.volume.len()));
    }
    let ids: Vec<String> = if a.id.is_empty() {
        a.volume
            .iter()
            .map(|p| {
                let name = p.file_name().and_then(|s| s.to_str()).unwrap_or("patient");
                name.split('.').next().unwrap_or(name).to_string()
            })
            .collect()
    } else {
        a.id.clone()
    };
    let tex = TextureConfig::from(&ctx.cfg);
    let frac = FractalConfig::from(&ctx.cfg);
    let mut rows = Vec::with_capacity(ids.len());
    for ((vol, mask), id) in a.volume.iter().zip(&a.mask).zip(&ids) {
        log::info!("extracting {id}");
        let grid = load_volume(vol)?;
        let mask = load_mask(mask, &grid)?;
        let mut row = extract_conventional(&grid, &mask, &tex)?;
        if !a.conventional_only {
            let fr = extract_fractal(&grid, &mask, &tex, &frac)?;
            row.extend(fr.row);
            if a.dump_maps {
                let dir = ctx.path("maps");
                fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                for (kind, map) in FractalKind::ALL.iter().zip(&fr.maps) {
                    write_volume(&map.values, dir.join(format!("{id}_{}.json", kind.tag())))?;
                }
            }
        }
        rows.push(row);
    }
    let mut table = FeatureTable::new(ids.clone())?;
    let names: Vec<String> = rows[0].iter().map(|(n, _)| n.clone()).collect();
    for (j, name) in names.iter().enumerate() {
        table.add_feature(name.clone(), rows.iter().map(|r| r[j].1).collect())?;
    }
    if let Some(path) = &a.clinical {
        merge_clinical(&mut table, &load_feature_table(path)?)?;
    }
    table.write_csv(ctx.path("features.csv"))?;
    write_text(&ctx.path("feature_dictionary.tsv"), &feature_dictionary(names.iter().map(String::as_str)))?;
    Ok(())
}

/// Copy the reserved outcome columns of `clinical` onto `table` by patient id.
fn merge_clinical(table: &mut FeatureTable, clinical: &FeatureTable) -> Result<()> {
    let index: HashMap<&str, usize> = clinical.patient_ids().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let rows: Vec<usize> = table
        .patient_ids()
        .iter()
        .map(|id| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::Table(format!("patient {id} missing from clinical table")))
        })
        .collect::<Result<_>>()?;
    let c = clinical.select_rows(&rows);
    if let Some(v) = c.time_days() {
        table.set_time_days(v.to_vec())?;
    }
    if let Some(v) = c.event() {
        table.set_event(v.to_vec())?;
    }
    if let Some(v) = c.rep_label() {
        table.set_rep_label(v.to_vec())?;
    }
    if let Some(v) = c.mgmt_status() {
        table.set_mgmt_status(v.to_vec())?;
    }
    if let Some(v) = c.idh_status() {
        table.set_idh_status(v.to_vec())?;
    }
    Ok(())
}

fn rank(ctx: &mut Context, a: RankArgs) -> Outcome<()> {
    ctx.apply_plan(&a.plan);
    if let Some(t) = a.f1_threshold {
        if a.exclusive {
            ctx.cfg.f1_threshold_survival = t;
        } else {
            ctx.cfg.f1_threshold = t;
        }
    }
    ctx.validate()?;
    let table = ctx.table(&a.features)?;
    let labels = table.labels(&a.label)?;
    let (threshold, rule) = if a.exclusive {
        (ctx.cfg.f1_threshold_survival, ThresholdRule::Exclusive)
    } else {
        (ctx.cfg.f1_threshold, ThresholdRule::Inclusive)
    };
    let report = rank_features(&table, &labels, &ResamplingPlan::from(&ctx.cfg))?;
    report.write_csv(ctx.path("ranking.csv"), threshold, rule)?;

    let chosen = threshold_select(&report, threshold, rule);
    let tests = significance_tests(&table, &labels, &chosen)?;
    let mut s = String::from("feature,test,p_value,small_group,selected_flag\n");
    for t in &tests {
        s += &format!(
            "{},{},{},{},{}\n",
            t.name,
            t.test.name(),
            t.p_value,
            u8::from(t.small_group),
            u8::from(t.p_value < ctx.cfg.p_threshold)
        );
    }
    write_text(&ctx.path("significance.csv"), &s)?;
    Ok(())
}

/// Feature names flagged in a `ranking.csv` or `significance.csv`.
fn flagged_features(path: &Path) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let headers = r.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format(format!("{}: no {name} column", path.display())))
    };
    let (f, s) = (col("feature")?, col("selected_flag")?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        if &rec[s] == "1" {
            out.push(rec[f].to_string());
        }
    }
    Ok(out)
}

fn classify(ctx: &mut Context, a: ClassifyArgs) -> Outcome<()> {
    ctx.apply_plan(&a.plan);
    ctx.validate()?;
    let table = ctx.table(&a.features)?;
    let labels = table.labels(&a.label)?;
    let selected = match (&a.ranking, a.select.is_empty()) {
        (Some(_), false) => return usage("pass either --select or --ranking, not both"),
        (Some(p), true) => flagged_features(p)?,
        (None, false) => a.select.clone(),
        (None, true) => return usage("no features to evaluate: pass --select or --ranking"),
    };
    if selected.is_empty() {
        return Err(Error::InvalidParameter("the ranking selects no features".into()).into());
    }
    let params = BoostParams {
        n_trees: a.trees,
        max_depth: a.depth,
        learning_rate: a.learning_rate,
        ..Default::default()
    };
    let dist = evaluate_model(&table, &labels, &selected, &ResamplingPlan::from(&ctx.cfg), params)?;
    dist.write_csv(ctx.path("metrics.csv"))?;
    let mut s = String::from("metric,mean,std,n\n");
    for (name, m) in dist.summaries() {
        s += &format!("{name},{},{},{}\n", m.mean, m.std, dist.len());
    }
    write_text(&ctx.path("metrics_summary.csv"), &s)?;
    Ok(())
}

/// The named columns of `table` (all complete ones when `names` is empty).
fn subtable(table: &FeatureTable, names: &[String]) -> Result<FeatureTable> {
    let mut out = FeatureTable::new(table.patient_ids().to_vec())?;
    if names.is_empty() {
        for name in table.feature_names() {
            match table.feature_complete(name) {
                Ok(v) => out.add_dense(name, &v)?,
                Err(_) => log::warn!("feature {name} has missing values and is skipped"),
            }
        }
    } else {
        for name in names {
            out.add_dense(name.clone(), &table.feature_complete(name)?)?;
        }
    }
    Ok(out)
}

fn survival(ctx: &mut Context, a: SurvivalArgs) -> Outcome<()> {
    if !a.alpha_grid.is_empty() {
        ctx.cfg.alpha_grid = a.alpha_grid.clone();
    }
    if let Some(f) = a.folds {
        ctx.cfg.folds = f;
    }
    if let Some(p) = a.p_threshold {
        ctx.cfg.p_threshold = p;
    }
    ctx.validate()?;
    let table = ctx.table(&a.features)?;
    let records = records_from_table(&table)?;
    let names = match (&a.ranking, a.candidates.is_empty()) {
        (Some(_), false) => return usage("pass either --candidates or --ranking, not both"),
        (Some(p), true) => {
            let f = flagged_features(p)?;
            if f.is_empty() {
                return Err(Error::InvalidParameter("the ranking selects no candidates".into()).into());
            }
            f
        }
        (None, _) => a.candidates.clone(),
    };
    let cand = subtable(&table, &names)?.minmax_scaled();
    let cand_names: Vec<String> = cand.feature_names().map(String::from).collect();
    if cand_names.is_empty() {
        return Err(Error::Table("no complete candidate features".into()).into());
    }
    let sel = select_alpha(&records, &cand, &cand_names, &ctx.cfg.alpha_grid, ctx.cfg.folds, ctx.cfg.seed)?;
    let mut s = String::from("alpha,cv_cindex\n");
    for (a, c) in sel.grid.iter().zip(&sel.cv_cindex) {
        s += &format!("{a},{c}\n");
    }
    write_text(&ctx.path("alpha_profile.csv"), &s)?;

    let kept = select_features_dependent(&records, &cand, sel.alpha, ctx.cfg.p_threshold)?;
    let mut s = String::from("feature,coefficient,p_value\n");
    for f in &kept {
        s += &format!("{},{},{}\n", f.name, f.coefficient, f.p_value);
    }
    write_text(&ctx.path("selected_features.csv"), &s)?;
    write_text(
        &ctx.path("survival_summary.csv"),
        &format!(
            "key,value\nalpha,{}\ntau,{}\ncandidates,{}\nselected,{}\n",
            sel.alpha,
            sel.tau,
            cand_names.join(";"),
            kept.len()
        ),
    )?;
    let curve = cg_curve(&records, sel.alpha)?;
    curve.write_csv(ctx.path("curve.csv"))?;
    crate::plot::emit_curve_svg(&[("all patients", &curve)], ctx.path("curve.svg"))?;
    Ok(())
}

fn read_coefficients(path: &Path) -> Result<Vec<(String, f64)>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        let beta: f64 = rec
            .get(1)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Format(format!("{}: bad coefficient row", path.display())))?;
        out.push((rec[0].to_string(), beta));
    }
    Ok(out)
}

fn summary_alpha(selected: &Path) -> Result<f64> {
    let path = selected.with_file_name("survival_summary.csv");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    text.lines()
        .find_map(|l| l.strip_prefix("alpha,"))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Format(format!("{}: no alpha row", path.display())))
}

fn prognosis(ctx: &mut Context, a: PrognosisArgs) -> Outcome<()> {
    if let Some(b) = a.permutations {
        ctx.cfg.permutations = b;
    }
    ctx.validate()?;
    let table = ctx.table(&a.features)?;
    let records = records_from_table(&table)?;
    let coefs = read_coefficients(&a.selected)?;
    if coefs.is_empty() {
        return Err(Error::InvalidParameter("no selected features, so no prognostic index".into()).into());
    }
    let alpha = match a.alpha {
        Some(v) => v,
        None => summary_alpha(&a.selected)?,
    };
    let names: Vec<String> = table.feature_names().map(String::from).collect();
    let needed: Vec<String> = coefs.iter().map(|c| c.0.clone()).collect();
    if let Some(m) = needed.iter().find(|n| !names.contains(n)) {
        return Err(Error::Table(format!("no feature column {m:?}")).into());
    }
    // coefficients were fitted on min-max scaled columns
    let scaled = subtable(&table, &needed)?.minmax_scaled();
    let pi = compute_pi(&coefs, &scaled)?;
    let grouping = split_by_pi(&pi, table.patient_ids())?;
    let rep = table.rep_label();
    grouping.write_report(ctx.path("prognosis_report.csv"), rep)?;

    let pick = |g: Group| -> Vec<SurvivalRecord> { grouping.members(g).into_iter().map(|i| records[i].clone()).collect() };
    let (good, bad) = (cg_curve(&pick(Group::Good), alpha)?, cg_curve(&pick(Group::Bad), alpha)?);
    let dir = ctx.path("group_curves");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    good.write_csv(dir.join("good.csv"))?;
    bad.write_csv(dir.join("bad.csv"))?;
    crate::plot::emit_curve_svg(&[("good prognosis", &good), ("bad prognosis", &bad)], ctx.path("group_curves.svg"))?;

    let perm = permutation_pvalue(&records, &grouping, alpha, ctx.cfg.permutations, ctx.cfg.seed)?;
    let times: Vec<f64> = records.iter().map(|r| r.time).collect();
    let mut cmp = group_comparison(&times, &grouping.groups)?;
    cmp.distance = Some((perm.d_obs, perm.p_value));
    cmp.write_csv(ctx.path("comparison.csv"), "time_days")?;
    if let Some(rep) = rep {
        cross_tab(&grouping, rep)?.write_csv(ctx.path("cross_tab.csv"))?;
    }
    Ok(())
}

fn simulate(ctx: &Context, a: SimulateArgs) -> Outcome<()> {
    let seed = ctx.cfg.seed;
    match a.kind {
        SimKind::Survival => {
            let spec = SimSpec {
                n: a.n,
                alpha: a.alpha,
                beta: a.beta.clone(),
                gamma: a.gamma.clone(),
                lambda_t: a.lambda_t,
                lambda_u: a.lambda_u,
                features: if a.normal_features {
                    FeatureDist::StandardNormal
                } else {
                    FeatureDist::Uniform01
                },
                seed,
            };
            let sim = simulate_dependent(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
            sim.table.write_csv(ctx.path("features.csv"))?;
        }
        SimKind::Classification => {
            let (table, _) = simulate_classification(a.n, a.informative, a.noise, a.separation, seed)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            table.write_csv(ctx.path("features.csv"))?;
        }
        SimKind::Phantom => {
            let dims: [usize; 3] = match a.dims[..] {
                [x, y, z] => [x, y, z],
                _ => return usage("--dims takes three comma-separated sizes"),
            };
            let kind = match a.phantom {
                PhantomArg::Constant => PhantomKind::Constant,
                PhantomArg::Checkerboard => PhantomKind::Checkerboard,
                PhantomArg::Ramp => PhantomKind::Ramp,
                PhantomArg::Fbm => PhantomKind::Fbm,
            };
            let (grid, mask) = simulate_phantom(kind, dims, a.hurst, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            write_volume(&grid, ctx.path("volume.json"))?;
            write_mask(&mask, grid.spacing(), ctx.path("mask.json"))?;
        }
    }
    Ok(())
}
