//! Fourier analysis of indicator functions: transforms, additive energy by
//! two routes, the Plancherel defect and the bilinear decay integral.

pub mod bilinear;
pub mod energy;
pub mod plancherel;
pub mod quad;
pub mod transform;

pub use bilinear::{bilinear_integral, BilinearOptions, BilinearReport};
pub use energy::{energy, energy_from_counts, fourier_side_energy, interval_energy, EnergyReport};
pub use plancherel::{plancherel_defect, plancherel_tail_bound};
pub use transform::{fourier_indicator, fourier_intervals};
