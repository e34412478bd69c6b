//! `rapid-svdd`: generate data, select samples, train and evaluate SVDD models.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rapid_svdd::evaluation::SuiteResult;
use rapid_svdd::io::{
    read_header, read_indices, reports_to_csv, reports_to_json, summaries_to_csv, trace_to_csv,
    write_indices,
};
use rapid_svdd::kernel::GramMatrix;
use rapid_svdd::sop::PIPELINE_TOLERANCE;
use rapid_svdd::{
    benchmark_suite, check_feasible, gram_matrix, load_csv, mcc, prefilter, random_sample,
    rapid_sample_with, solve_sop_exact, train_svdd_on, CsvOptions, Dataset, DatasetSource,
    EvalConfig, GammaRule, HeaderMode, IndexSet, LabelMapping, LabelVector, MixtureConfig,
    PipelineConfig, RandomSampleConfig, RapidOptions, RunReport, SampleSelection, SamplingMethod,
    SvddModel, ThetaMinScope,
};

const DEFAULT_LABEL_COLUMN: &str = "label";
const DEFAULT_LABEL_MAP: &str = "in=in,out=out";

#[derive(Parser)]
#[command(
    name = "rapid-svdd",
    version,
    about = "Density-based sample selection and SVDD"
)]
#[command(propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Gaussian mixture with uniform outliers as CSV (columns x1..xM, label)
    Gen(GenArgs),
    /// Pre-filter outliers and select a training sample; writes 1-based row indices
    Sample(SampleArgs),
    /// Train a hard-margin SVDD on a sample (or on every row) and write the model as JSON
    Train(TrainArgs),
    /// Score a saved model, or run sampling, training and inference end to end
    Eval(EvalArgs),
    /// Run every method on every data set and report per-run metrics
    Bench(BenchArgs),
    /// Compare the greedy sample with the exhaustive optimum on a tiny data set
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CsvArgs {
    /// Whether the first row is a header [auto: header iff no cell is a number]
    #[arg(long, value_enum, default_value_t = HeaderArg::Auto)]
    header: HeaderArg,
    /// Header name of the ground-truth column [default: `label` when the header has one]
    #[arg(long, value_name = "NAME")]
    label_column: Option<String>,
    /// Raw label values to classes, e.g. `yes=out,no=in` [default: in=in,out=out]
    #[arg(long, value_name = "VALUE=in|out,...")]
    label_map: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeaderArg {
    Auto,
    Present,
    Absent,
}

#[derive(Args)]
struct KernelArgs {
    /// Fixed kernel parameter gamma >= 0 in exp(-gamma * |x - y|^2); implies --gamma-rule fixed
    #[arg(long, value_parser = non_negative)]
    gamma: Option<f64>,
    /// Bandwidth rule [default: scott, or fixed when --gamma is given]
    #[arg(long, value_enum)]
    gamma_rule: Option<RuleArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Scott,
    #[value(name = "modified_mean", alias = "modified-mean")]
    ModifiedMean,
    Fixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Greedy density flattening
    Rapid,
    /// Uniform random draw of round(ratio * |inliers|) inliers
    Rand,
    /// Every inlier
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    /// Minimum density over the sample without the candidate
    Remaining,
    /// Minimum density over the sample including the candidate
    Including,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SamplerArgs {
    /// Sampling method
    #[arg(long, value_enum, default_value_t = MethodArg::Rapid)]
    method: MethodArg,
    /// Fraction of inliers drawn by `rand`, in (0, 1]
    #[arg(long, value_parser = unit_ratio)]
    ratio: Option<f64>,
    /// Seed for `rand`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of least dense observations dropped before sampling, in [0, 1)
    #[arg(long, default_value_t = 0.05, value_parser = probability)]
    p_out: f64,
}

#[derive(Args)]
struct GenArgs {
    /// Number of observations, outliers included (>= 1)
    #[arg(long, value_parser = positive)]
    n: usize,
    /// Number of dimensions (>= 1)
    #[arg(long, value_parser = positive)]
    m: usize,
    /// Number of mixture components, in [1, n]
    #[arg(long, default_value_t = 1, value_parser = positive)]
    components: usize,
    /// Fraction of observations replaced by uniform outliers, in [0, 1)
    #[arg(long, default_value_t = 0.0, value_parser = probability)]
    outlier_ratio: f64,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Input CSV of real-valued features
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Which sample the rapid density rule takes its minimum over
    #[arg(long, value_enum, default_value_t = ScopeArg::Remaining)]
    theta_min_scope: ScopeArg,
    /// Output index file, one 1-based row index per line [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the rapid iteration trace as CSV (iteration,candidate,theta_min,violator)
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Input CSV of real-valued features
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Index file from `sample`; trains on every row when omitted
    #[arg(long, value_name = "FILE")]
    sample: Option<PathBuf>,
    /// Output model JSON [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Labelled input CSV
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    /// Saved model to score; runs the whole pipeline when omitted
    #[arg(long, value_name = "FILE", conflicts_with_all = ["gamma", "gamma_rule", "method", "ratio", "p_out"])]
    model: Option<PathBuf>,
    #[command(flatten)]
    kernel: KernelArgs,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Data set name in the report [default: input file stem]
    #[arg(long, value_name = "NAME")]
    dataset_id: Option<String>,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output report [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write the predicted label (in/out) of every row, one per line
    #[arg(long, value_name = "FILE")]
    predictions: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Labelled input CSV; repeatable
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Synthetic data set `N,M,COMPONENTS,OUTLIER_RATIO,SEED`; repeatable
    #[arg(long, value_name = "SPEC", value_parser = mixture_spec)]
    synthetic: Vec<MixtureConfig>,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Method `rapid`, `full` or `rand_<ratio>`; repeatable [default: rapid]
    #[arg(long, value_name = "METHOD", value_parser = method_id)]
    method: Vec<SamplingMethod>,
    /// Fraction of least dense observations dropped before sampling, in [0, 1)
    #[arg(long, default_value_t = 0.05, value_parser = probability)]
    p_out: f64,
    /// Runs per random method, with seeds seed, seed + 1, ... (>= 1)
    #[arg(long, default_value_t = 5, value_parser = positive)]
    repetitions: usize,
    /// First seed for random methods
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-run report format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Per-run report [default: stdout]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Per-configuration medians and means as CSV
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Input CSV with at most 15 inliers after pre-filtering
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    #[command(flatten)]
    kernel: KernelArgs,
    /// Fraction of least dense observations dropped before sampling, in [0, 1)
    #[arg(long, default_value_t = 0.05, value_parser = probability)]
    p_out: f64,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not finite"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| {
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(format!("must be >= 0, got {v}"))
        }
    })
}

fn probability(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| {
        if (0.0..1.0).contains(&v) {
            Ok(v)
        } else {
            Err(format!("must lie in [0, 1), got {v}"))
        }
    })
}

fn unit_ratio(s: &str) -> Result<f64, String> {
    parse_f64(s).and_then(|v| {
        if v > 0.0 && v <= 1.0 {
            Ok(v)
        } else {
            Err(format!("must lie in (0, 1], got {v}"))
        }
    })
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn method_id(s: &str) -> Result<SamplingMethod, String> {
    match s {
        "rapid" => Ok(SamplingMethod::Rapid),
        "full" => Ok(SamplingMethod::Full),
        _ => match s.strip_prefix("rand_") {
            Some(r) => unit_ratio(r).map(|ratio| SamplingMethod::Random { ratio }),
            None => Err(format!("expected rapid, full or rand_<ratio>, got {s:?}")),
        },
    }
}

fn mixture_spec(s: &str) -> Result<MixtureConfig, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, m, components, outlier_ratio, seed] = parts[..] else {
        return Err(format!(
            "expected N,M,COMPONENTS,OUTLIER_RATIO,SEED, got {s:?}"
        ));
    };
    let config = MixtureConfig {
        n: positive(n)?,
        m: positive(m)?,
        components: positive(components)?,
        outlier_ratio: probability(outlier_ratio)?,
        seed: seed
            .parse()
            .map_err(|_| format!("seed {seed:?} is not a non-negative integer"))?,
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

enum CliError {
    Usage(clap::Error),
    Runtime(String),
}

impl From<rapid_svdd::Error> for CliError {
    fn from(e: rapid_svdd::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(kind: ErrorKind, message: impl std::fmt::Display) -> CliError {
    CliError::Usage(Cli::command().error(kind, message))
}

impl KernelArgs {
    fn rule(&self) -> CliResult<GammaRule> {
        match (self.gamma, self.gamma_rule) {
            (Some(g), None | Some(RuleArg::Fixed)) => Ok(GammaRule::Fixed(g)),
            (None, Some(RuleArg::Fixed)) => Err(usage(
                ErrorKind::MissingRequiredArgument,
                "--gamma-rule fixed needs a value: pass --gamma <GAMMA>",
            )),
            (Some(_), Some(_)) => Err(usage(
                ErrorKind::ArgumentConflict,
                "--gamma fixes the bandwidth and cannot be combined with --gamma-rule scott or modified_mean",
            )),
            (None, None | Some(RuleArg::Scott)) => Ok(GammaRule::Scott),
            (None, Some(RuleArg::ModifiedMean)) => Ok(GammaRule::ModifiedMean),
        }
    }
}

impl CsvArgs {
    /// Options for `path`; a `label` header column is split off even when not named.
    fn options(&self, path: &Path) -> CliResult<CsvOptions> {
        let header = match self.header {
            HeaderArg::Auto => HeaderMode::Auto,
            HeaderArg::Present => HeaderMode::Present,
            HeaderArg::Absent => HeaderMode::Absent,
        };
        let column = match (&self.label_column, &self.label_map) {
            (Some(c), _) => Some(c.clone()),
            (None, Some(_)) => Some(DEFAULT_LABEL_COLUMN.to_string()),
            (None, None) => read_header(path, header)?
                .filter(|names| names.iter().any(|h| h == DEFAULT_LABEL_COLUMN))
                .map(|_| DEFAULT_LABEL_COLUMN.to_string()),
        };
        let labels = match column {
            Some(c) => {
                let map = self.label_map.as_deref().unwrap_or(DEFAULT_LABEL_MAP);
                Some(LabelMapping::parse(&c, map).map_err(|e| usage(ErrorKind::InvalidValue, e))?)
            }
            None => None,
        };
        Ok(CsvOptions { header, labels })
    }

    fn load(&self, path: &Path) -> CliResult<(Dataset, Option<LabelVector>)> {
        Ok(load_csv(path, &self.options(path)?)?)
    }
}

impl SamplerArgs {
    fn method(&self) -> CliResult<SamplingMethod> {
        match (self.method, self.ratio) {
            (MethodArg::Rand, Some(ratio)) => Ok(SamplingMethod::Random { ratio }),
            (MethodArg::Rand, None) => Err(usage(
                ErrorKind::MissingRequiredArgument,
                "--method rand needs --ratio <RATIO>",
            )),
            (_, Some(_)) => Err(usage(
                ErrorKind::ArgumentConflict,
                "--ratio only applies to --method rand",
            )),
            (MethodArg::Rapid, None) => Ok(SamplingMethod::Rapid),
            (MethodArg::Full, None) => Ok(SamplingMethod::Full),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn one_based(set: &IndexSet) -> String {
    set.to_one_based()
        .iter()
        .map(|i| format!("{i}\n"))
        .collect()
}

fn kernel_gram(data: &Dataset, rule: GammaRule) -> CliResult<GramMatrix> {
    let kernel = rule.resolve(data).map_err(|e| e.in_stage("bandwidth"))?;
    Ok(gram_matrix(data, kernel).map_err(|e| e.in_stage("gram matrix"))?)
}

fn gen(args: GenArgs) -> CliResult {
    let config = MixtureConfig {
        n: args.n,
        m: args.m,
        components: args.components,
        outlier_ratio: args.outlier_ratio,
        seed: args.seed,
    };
    config
        .validate()
        .map_err(|e| usage(ErrorKind::ValueValidation, e))?;
    let (data, labels) = rapid_svdd::generate_mixture(&config)?;
    emit(
        args.out.as_deref(),
        &rapid_svdd::io::dataset_to_csv(&data, Some(&labels)),
    )
}

fn sample(args: SampleArgs) -> CliResult {
    let rule = args.kernel.rule()?;
    let method = args.sampler.method()?;
    if args.trace.is_some() && method != SamplingMethod::Rapid {
        return Err(usage(
            ErrorKind::ArgumentConflict,
            "--trace only applies to --method rapid",
        ));
    }
    let (data, _) = args.csv.load(&args.input)?;
    let gram = kernel_gram(&data, rule)?;
    let p_out = args.sampler.p_out;
    let selection: SampleSelection = match method {
        SamplingMethod::Rapid => {
            let options = RapidOptions {
                theta_min_scope: match args.theta_min_scope {
                    ScopeArg::Remaining => ThetaMinScope::RemainingSample,
                    ScopeArg::Including => ThetaMinScope::IncludingCandidate,
                },
                ..RapidOptions::default()
            };
            let (selection, trace) = rapid_sample_with(&gram, p_out, &options)?;
            if let Some(path) = &args.trace {
                emit(Some(path), &trace_to_csv(&trace))?;
            }
            selection
        }
        SamplingMethod::Random { ratio } => {
            let config = RandomSampleConfig::new(ratio, args.sampler.seed)?;
            random_sample(prefilter(&gram, p_out)?, &config)?
        }
        SamplingMethod::Full => {
            let pre = prefilter(&gram, p_out)?;
            SampleSelection {
                sample: pre.inliers.clone(),
                prefilter: pre,
                method,
                seed: None,
                t_samp: 0.0,
            }
        }
    };
    match &args.out {
        Some(path) => write_indices(path, &selection.sample)?,
        None => emit(None, &one_based(&selection.sample))?,
    }
    eprintln!(
        "{}: kept {} of {} inliers ({} observations, gamma {})",
        method.id(),
        selection.sample.len(),
        selection.prefilter.inliers.len(),
        data.n(),
        gram.kernel().gamma()
    );
    Ok(())
}

fn train(args: TrainArgs) -> CliResult {
    let rule = args.kernel.rule()?;
    let (data, _) = args.csv.load(&args.input)?;
    let kernel = rule.resolve(&data).map_err(|e| e.in_stage("bandwidth"))?;
    let rows = match &args.sample {
        Some(path) => read_indices(path, data.n())?,
        None => IndexSet::all(data.n()),
    };
    let model = train_svdd_on(&data, &rows, kernel).map_err(|e| e.in_stage("training"))?;
    emit(args.out.as_deref(), &format!("{}\n", model.to_json()))?;
    eprintln!(
        "trained on {} rows: {} support vectors, R^2 {}",
        rows.len(),
        model.support_indices().len(),
        model.radius_sq()
    );
    Ok(())
}

fn format_reports(reports: &[RunReport], format: FormatArg) -> String {
    match format {
        FormatArg::Csv => reports_to_csv(reports),
        FormatArg::Json if reports.len() == 1 => {
            format!("{}\n", rapid_svdd::io::report_to_json(&reports[0]))
        }
        FormatArg::Json => reports_to_json(reports),
    }
}

fn eval(args: EvalArgs) -> CliResult {
    let (data, truth) = args.csv.load(&args.input)?;
    let truth = truth.ok_or_else(|| {
        CliError::Runtime(format!(
            "{}: no ground-truth column; name one with --label-column",
            args.input.display()
        ))
    })?;
    let id = args.dataset_id.clone().unwrap_or_else(|| {
        args.input.file_stem().map_or_else(
            || args.input.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        )
    });
    let (report, predictions) = match &args.model {
        Some(path) => {
            let model = SvddModel::load(path)?;
            let (predictions, t_inf) = model
                .predict_batch(&data)
                .map_err(|e| e.in_stage("inference"))?;
            let size = model.support_indices().len();
            let report = RunReport {
                dataset: id,
                method: "model".into(),
                t_samp: 0.0,
                t_train: 0.0,
                t_inf,
                size,
                ratio: size as f64 / data.n() as f64,
                mcc: mcc(&truth, &predictions)?,
                gamma: model.kernel().gamma(),
                p_out: 0.0,
                seed: None,
            };
            (report, predictions)
        }
        None => {
            let config = PipelineConfig {
                method: args.sampler.method()?,
                gamma_rule: args.kernel.rule()?,
                p_out: args.sampler.p_out,
                seed: args.sampler.seed,
            };
            let run = rapid_svdd::run_pipeline(&data, &config)?;
            let report = evaluate_report(&id, &truth, &config, &run)?;
            (report, run.predictions)
        }
    };
    if let Some(path) = &args.predictions {
        let text: String = predictions
            .as_slice()
            .iter()
            .map(|l| format!("{l}\n"))
            .collect();
        emit(Some(path), &text)?;
    }
    emit(args.out.as_deref(), &format_reports(&[report], args.format))
}

fn evaluate_report(
    id: &str,
    truth: &LabelVector,
    config: &PipelineConfig,
    run: &rapid_svdd::evaluation::PipelineRun,
) -> CliResult<RunReport> {
    Ok(RunReport {
        dataset: id.to_string(),
        method: config.method.id(),
        t_samp: run.t_samp,
        t_train: run.t_train,
        t_inf: run.t_inf,
        size: run.selection.sample.len(),
        ratio: run.selection.ratio(),
        mcc: mcc(truth, &run.predictions)?,
        gamma: run.kernel.gamma(),
        p_out: config.p_out,
        seed: (!config.method.is_deterministic()).then_some(config.seed),
    })
}

fn bench(args: BenchArgs) -> CliResult {
    if args.inputs.is_empty() && args.synthetic.is_empty() {
        return Err(usage(
            ErrorKind::MissingRequiredArgument,
            "no data sets: pass --in <FILE> or --synthetic <SPEC> at least once",
        ));
    }
    let gamma_rule = args.kernel.rule()?;
    let methods = if args.method.is_empty() {
        vec![SamplingMethod::Rapid]
    } else {
        args.method.clone()
    };
    let mut sources = Vec::new();
    for path in &args.inputs {
        let options = match args.csv.options(path) {
            Ok(options) => options,
            Err(CliError::Runtime(e)) => {
                eprintln!("warning: {e}");
                CsvOptions::default()
            }
            Err(e) => return Err(e),
        };
        sources.push(DatasetSource::Csv {
            path: path.clone(),
            options,
        });
    }
    sources.extend(args.synthetic.iter().copied().map(DatasetSource::Synthetic));
    let configs: Vec<EvalConfig> = sources
        .iter()
        .flat_map(|source| {
            methods.iter().map(move |&method| EvalConfig {
                dataset: source.clone(),
                pipeline: PipelineConfig {
                    method,
                    gamma_rule,
                    p_out: args.p_out,
                    seed: args.seed,
                },
            })
        })
        .collect();
    let SuiteResult {
        runs,
        summaries,
        failures,
    } = benchmark_suite(&configs, args.repetitions)?;
    for f in &failures {
        eprintln!(
            "warning: {} ({}): {}",
            f.dataset,
            configs[f.config_index].pipeline.method.id(),
            f.error
        );
    }
    emit(args.out.as_deref(), &format_reports(&runs, args.format))?;
    if let Some(path) = &args.summary {
        emit(Some(path), &summaries_to_csv(&summaries))?;
    }
    if runs.is_empty() {
        return Err(CliError::Runtime(
            "every benchmark configuration failed".into(),
        ));
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> CliResult {
    let rule = args.kernel.rule()?;
    let (data, _) = args.csv.load(&args.input)?;
    let gram = kernel_gram(&data, rule)?;
    let pre = prefilter(&gram, args.p_out)?;
    let exact = solve_sop_exact(&gram, &pre.inliers)?;
    let (greedy, _) = rapid_sample_with(&gram, args.p_out, &RapidOptions::default())?;
    let fit = check_feasible(&gram, &pre.inliers, &greedy.sample, PIPELINE_TOLERANCE)?;
    let list = |set: &IndexSet| {
        set.to_one_based()
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    writeln!(out, "gamma: {}", gram.kernel().gamma()).unwrap();
    writeln!(out, "inliers: {}", list(&pre.inliers)).unwrap();
    writeln!(out, "exact_sample: {}", list(&exact.sample)).unwrap();
    writeln!(out, "exact_delta_fit: {}", exact.objective).unwrap();
    writeln!(out, "rapid_sample: {}", list(&greedy.sample)).unwrap();
    writeln!(out, "rapid_delta_fit: {}", fit.fit_gap()).unwrap();
    writeln!(out, "rapid_feasible: {}", fit.feasible).unwrap();
    if let Some(v) = fit.violation {
        writeln!(out, "rapid_violation: {v}").unwrap();
    }
    emit(None, &out)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Sample(a) => sample(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(1)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
