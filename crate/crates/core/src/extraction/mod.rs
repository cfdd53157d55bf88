//! Dilation-set extraction and the energy mean over the extracted set.

pub mod energy_mean;
pub mod garaev;
pub mod sum_product;

pub use energy_mean::{energy_mean_bound, energy_mean_over_t, EnergyMeanOptions, EnergyMeanReport};
pub use garaev::{
    garaev_extract, overlap_matrix_row, overlap_matrix_row_cells, CheckRecord, DyadicClass,
    ExtractionOptions, ExtractionResult, Witness,
};
pub use sum_product::{sum_product_k, SumProductEntry};
