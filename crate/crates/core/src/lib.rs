//! Exact and Fourier-analytic computations on δ-discretized subsets of ℝ:
//! sumsets, productsets, additive energy, non-concentration profiles,
//! dilation-set extraction and exponent sweeps.

mod bitset;
mod conv;

pub mod config;
pub mod dset;
pub mod error;
pub mod exponents;
pub mod extraction;
pub mod fourier;
pub mod generators;
pub mod grid;
pub mod kernels;
pub mod numeric;
pub mod profile;

pub use config::{RunConfig, Slack};
pub use dset::{from_dset, to_dset};
pub use error::{Error, Result};
pub use exponents::{
    crossover_sigma, gkz_exponent, sweep, theorem_exponent, ExponentReport, SweepOptions,
};
pub use extraction::{
    energy_mean_over_t, garaev_extract, overlap_matrix_row, sum_product_k, EnergyMeanOptions,
    EnergyMeanReport, ExtractionOptions, ExtractionResult,
};
pub use fourier::{
    bilinear_integral, energy, plancherel_defect, BilinearOptions, BilinearReport, EnergyReport,
};
pub use generators::{generate, GeneratorKind, GeneratorSpec};
pub use grid::{GridScale, GridSet, Net};
pub use kernels::{dilate_sumset, productset, sumset, sumset_with, SumsetKernel};
pub use profile::NonConcentrationProfile;
