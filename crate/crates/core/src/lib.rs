//! Density-based sample selection for Support Vector Data Description.
//!
//! The pipeline: estimate an unnormalized kernel density for every
//! observation, drop the `p_out` least dense ones as outliers, greedily thin
//! the remaining inliers toward a flat density with [`rapid_sample`], and
//! train a hard-margin SVDD on what is left.
//!
//! ```
//! use rapid_svdd::{gram_matrix, rapid_sample, train_svdd_on, Dataset, KernelSpec, Label};
//!
//! let rows: Vec<[f64; 2]> = (0..60)
//!     .map(|i| {
//!         let t = i as f64 * 0.3;
//!         [t.cos() * (1.0 + 0.1 * (i % 5) as f64), t.sin()]
//!     })
//!     .collect();
//! let data = Dataset::from_rows(&rows)?;
//! let kernel = KernelSpec::new(2.0)?;
//! let gram = gram_matrix(&data, kernel)?;
//! let selection = rapid_sample(&gram, 0.05)?;
//! assert!(selection.sample.len() < data.n());
//!
//! let model = train_svdd_on(&data, &selection.sample, kernel)?;
//! assert_eq!(model.predict(&[1.05, 0.0])?.label, Label::In);
//! assert_eq!(model.predict(&[5.0, 5.0])?.label, Label::Out);
//! # Ok::<(), rapid_svdd::Error>(())
//! ```

pub mod baselines;
pub mod dataset;
pub mod density;
pub mod error;
pub mod evaluation;
mod format;
pub mod io;
pub mod kernel;
pub mod prefilter;
pub mod rapid;
pub mod sop;
pub mod svdd;
pub mod synthetic;

pub use baselines::{random_sample, random_sample_from_gram, random_subset, RandomSampleConfig};
pub use dataset::{Dataset, IndexSet, Label, LabelVector};
pub use density::{
    boundary_points, boundary_points_among, density_quantile_threshold, empirical_density,
    level_set_classify, BoundarySet, DensityVector,
};
pub use error::{Error, Result};
pub use evaluation::{
    benchmark_suite, evaluate_pipeline, mcc, run_pipeline, ConfusionCounts, DatasetSource,
    EvalConfig, PipelineConfig, RunReport,
};
pub use io::{load_csv, write_report, CsvOptions, HeaderMode, LabelMapping, ReportFormat};
pub use kernel::{
    bandwidth_modified_mean, bandwidth_scott, gaussian_kernel, gram_matrix, GammaRule, GramMatrix,
    KernelSpec,
};
pub use prefilter::{prefilter, PrefilterResult};
pub use rapid::{
    rapid_sample, rapid_sample_traced, rapid_sample_with, RapidOptions, RapidStep, RapidTrace,
    SampleSelection, SamplingMethod, ThetaMinScope,
};
pub use sop::{check_feasible, solve_sop_exact, Feasibility, SopSolution};
pub use svdd::{train_svdd, train_svdd_on, Prediction, SvddModel};
pub use synthetic::{generate_mixture, MixtureConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/prefilter.md")]
    mod prefilter {}
    #[doc = include_str!("../../../book/src/rapid.md")]
    mod rapid {}
    #[doc = include_str!("../../../book/src/sop.md")]
    mod sop {}
    #[doc = include_str!("../../../book/src/svdd.md")]
    mod svdd {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
