//! Classification quality, end-to-end pipeline runs and benchmark sweeps.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use crate::baselines::{random_sample, RandomSampleConfig};
use crate::dataset::{Dataset, Label, LabelVector};
use crate::error::{Error, Result};
use crate::io::{load_csv, CsvOptions};
use crate::kernel::{gram_matrix, GammaRule, KernelSpec};
use crate::prefilter::prefilter;
use crate::rapid::{rapid_sample, SampleSelection, SamplingMethod};
use crate::svdd::{train_svdd_on, SvddModel};
use crate::synthetic::{generate_mixture, MixtureConfig};

/// Confusion counts with `out` as the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn from_labels(truth: &LabelVector, predicted: &LabelVector) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.len(),
                actual: predicted.len(),
            });
        }
        if truth.is_empty() {
            return Err(Error::Empty("label vector"));
        }
        let mut c = ConfusionCounts::default();
        for (t, p) in truth.as_slice().iter().zip(predicted.as_slice()) {
            match (t, p) {
                (Label::Out, Label::Out) => c.tp += 1,
                (Label::In, Label::In) => c.tn += 1,
                (Label::In, Label::Out) => c.fp += 1,
                (Label::Out, Label::In) => c.fn_ += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// Matthews correlation; 0 when any marginal is empty.
    pub fn mcc(&self) -> f64 {
        let (tp, tn, fp, fn_) = (
            self.tp as f64,
            self.tn as f64,
            self.fp as f64,
            self.fn_ as f64,
        );
        let denom = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
        if denom == 0.0 {
            0.0
        } else {
            (tp * tn - fp * fn_) / denom.sqrt()
        }
    }
}

pub fn mcc(truth: &LabelVector, predicted: &LabelVector) -> Result<f64> {
    Ok(ConfusionCounts::from_labels(truth, predicted)?.mcc())
}

/// One row of a benchmark report.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub dataset: String,
    pub method: String,
    /// Seconds for the Gram matrix, pre-filtering and sample selection.
    pub t_samp: f64,
    /// Seconds to train SVDD on the sample.
    pub t_train: f64,
    /// Inference seconds per 1000 observations.
    pub t_inf: f64,
    pub size: usize,
    pub ratio: f64,
    pub mcc: f64,
    pub gamma: f64,
    pub p_out: f64,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineConfig {
    pub method: SamplingMethod,
    pub gamma_rule: GammaRule,
    pub p_out: f64,
    /// Used only by random sampling.
    pub seed: u64,
}

/// Everything a pipeline run produces before scoring.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub kernel: KernelSpec,
    pub selection: SampleSelection,
    pub model: SvddModel,
    pub predictions: LabelVector,
    pub t_samp: f64,
    pub t_train: f64,
    pub t_inf: f64,
}

/// Bandwidth, Gram matrix, pre-filter, sampler, SVDD on the sample, then
/// prediction of every observation.
pub fn run_pipeline(data: &Dataset, config: &PipelineConfig) -> Result<PipelineRun> {
    let kernel = config
        .gamma_rule
        .resolve(data)
        .map_err(|e| e.in_stage("bandwidth"))?;

    let start = Instant::now();
    let gram = gram_matrix(data, kernel).map_err(|e| e.in_stage("gram matrix"))?;
    let selection = match config.method {
        SamplingMethod::Rapid => rapid_sample(&gram, config.p_out),
        SamplingMethod::Random { ratio } => RandomSampleConfig::new(ratio, config.seed)
            .and_then(|rc| prefilter(&gram, config.p_out).and_then(|pre| random_sample(pre, &rc))),
        SamplingMethod::Full => prefilter(&gram, config.p_out).map(|pre| SampleSelection {
            sample: pre.inliers.clone(),
            prefilter: pre,
            method: SamplingMethod::Full,
            seed: None,
            t_samp: 0.0,
        }),
    }
    .map_err(|e| e.in_stage("sampling"))?;
    drop(gram);
    let t_samp = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let model =
        train_svdd_on(data, &selection.sample, kernel).map_err(|e| e.in_stage("training"))?;
    let t_train = start.elapsed().as_secs_f64();

    let (predictions, t_inf) = model
        .predict_batch(data)
        .map_err(|e| e.in_stage("inference"))?;
    Ok(PipelineRun {
        kernel,
        selection,
        model,
        predictions,
        t_samp,
        t_train,
        t_inf,
    })
}

/// Runs the pipeline and scores predictions on the full data set against `truth`.
pub fn evaluate_pipeline(
    dataset_id: &str,
    data: &Dataset,
    truth: &LabelVector,
    config: &PipelineConfig,
) -> Result<RunReport> {
    if truth.len() != data.n() {
        return Err(Error::DimensionMismatch {
            expected: data.n(),
            actual: truth.len(),
        }
        .in_stage("labels"));
    }
    let run = run_pipeline(data, config)?;
    let score = mcc(truth, &run.predictions).map_err(|e| e.in_stage("scoring"))?;
    Ok(RunReport {
        dataset: dataset_id.to_string(),
        method: config.method.id(),
        t_samp: run.t_samp,
        t_train: run.t_train,
        t_inf: run.t_inf,
        size: run.selection.sample.len(),
        ratio: run.selection.ratio(),
        mcc: score,
        gamma: run.kernel.gamma(),
        p_out: config.p_out,
        seed: (!config.method.is_deterministic()).then_some(config.seed),
    })
}

#[derive(Clone, Debug)]
pub enum DatasetSource {
    /// A CSV file; `options.labels` must be set since scoring needs ground truth.
    Csv {
        path: PathBuf,
        options: CsvOptions,
    },
    Synthetic(MixtureConfig),
    InMemory {
        id: String,
        data: Arc<Dataset>,
        labels: Arc<LabelVector>,
    },
}

impl DatasetSource {
    pub fn id(&self) -> String {
        match self {
            DatasetSource::Csv { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            DatasetSource::Synthetic(c) => {
                format!(
                    "gmm_n{}_m{}_c{}_o{}_s{}",
                    c.n, c.m, c.components, c.outlier_ratio, c.seed
                )
            }
            DatasetSource::InMemory { id, .. } => id.clone(),
        }
    }

    pub fn load(&self) -> Result<(Arc<Dataset>, Arc<LabelVector>)> {
        match self {
            DatasetSource::Csv { path, options } => {
                let (data, labels) = load_csv(path, options)?;
                let labels = labels.ok_or_else(|| Error::Format {
                    path: path.clone(),
                    reason: "ground-truth labels are required for evaluation".into(),
                })?;
                Ok((Arc::new(data), Arc::new(labels)))
            }
            DatasetSource::Synthetic(config) => {
                let (data, labels) = generate_mixture(config)?;
                Ok((Arc::new(data), Arc::new(labels)))
            }
            DatasetSource::InMemory { data, labels, .. } => Ok((data.clone(), labels.clone())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub dataset: DatasetSource,
    pub pipeline: PipelineConfig,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metrics {
    pub t_samp: f64,
    pub t_train: f64,
    pub t_inf: f64,
    pub size: f64,
    pub ratio: f64,
    pub mcc: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigSummary {
    pub dataset: String,
    pub method: String,
    pub runs: usize,
    pub median: Metrics,
    pub mean: Metrics,
}

#[derive(Clone, Debug)]
pub struct SuiteFailure {
    pub config_index: usize,
    pub dataset: String,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteResult {
    pub runs: Vec<RunReport>,
    pub summaries: Vec<ConfigSummary>,
    pub failures: Vec<SuiteFailure>,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn summarize(dataset: String, method: String, runs: &[RunReport]) -> ConfigSummary {
    let stat = |f: &dyn Fn(&[f64]) -> f64| {
        let col = |g: fn(&RunReport) -> f64| f(&runs.iter().map(g).collect::<Vec<_>>());
        Metrics {
            t_samp: col(|r| r.t_samp),
            t_train: col(|r| r.t_train),
            t_inf: col(|r| r.t_inf),
            size: col(|r| r.size as f64),
            ratio: col(|r| r.ratio),
            mcc: col(|r| r.mcc),
        }
    };
    ConfigSummary {
        dataset,
        method,
        runs: runs.len(),
        median: stat(&median),
        mean: stat(&|v| v.iter().sum::<f64>() / v.len() as f64),
    }
}

/// Runs every configuration in order on a single worker so that timings do
/// not interfere. Random sampling is repeated `repetitions` times with seeds
/// `seed, seed + 1, ...`; deterministic methods run once. A failing
/// configuration is recorded and the suite moves on.
pub fn benchmark_suite(configs: &[EvalConfig], repetitions: usize) -> Result<SuiteResult> {
    if configs.is_empty() {
        return Err(Error::Empty("benchmark configuration list"));
    }
    let mut result = SuiteResult::default();
    for (index, config) in configs.iter().enumerate() {
        let id = config.dataset.id();
        let outcome = config.dataset.load().and_then(|(data, labels)| {
            let reps = if config.pipeline.method.is_deterministic() {
                1
            } else {
                repetitions.max(1)
            };
            (0..reps)
                .map(|rep| {
                    let pipeline = PipelineConfig {
                        seed: config.pipeline.seed + rep as u64,
                        ..config.pipeline
                    };
                    evaluate_pipeline(&id, &data, &labels, &pipeline)
                })
                .collect::<Result<Vec<_>>>()
        });
        match outcome {
            Ok(runs) => {
                result
                    .summaries
                    .push(summarize(id, config.pipeline.method.id(), &runs));
                result.runs.extend(runs);
            }
            Err(e) => result.failures.push(SuiteFailure {
                config_index: index,
                dataset: id,
                error: e.to_string(),
            }),
        }
    }
    Ok(result)
}
