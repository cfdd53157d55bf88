use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSet;
use crate::kernels::{productset, sumset};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumProductEntry {
    pub n: u64,
    pub delta: f64,
    pub measure_a: f64,
    pub sum_measure: f64,
    pub prod_measure: f64,
    /// `max(|A+A|, |AA|) / |A|`.
    pub k: f64,
}

pub fn sum_product_k(a: &GridSet) -> Result<SumProductEntry> {
    if !a.within(1.0, 2.0) {
        return Err(Error::Hypothesis("sum_product_k needs A ⊆ [1, 2]".into()));
    }
    let sum = sumset(a, a)?.cell_count();
    let prod = productset(a, a)?.cell_count();
    let delta = a.delta();
    Ok(SumProductEntry {
        n: a.scale().n(),
        delta,
        measure_a: a.measure(),
        sum_measure: sum as f64 * delta,
        prod_measure: prod as f64 * delta,
        k: sum.max(prod) as f64 / a.cell_count() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridScale;

    #[test]
    fn interval_and_single_cell() {
        let s = GridScale::new(256).unwrap();
        let a = GridSet::from_intervals(s, &[(1.0, 2.0)]).unwrap();
        let e = sum_product_k(&a).unwrap();
        assert_eq!(e.k, 3.0);
        assert!((e.sum_measure - 2.0).abs() < 1e-12);
        let c = GridSet::from_cells(s, [300]).unwrap();
        let e = sum_product_k(&c).unwrap();
        assert!((e.sum_measure - 2.0 * s.delta()).abs() < 1e-15);
        assert!(e.k <= 3.0);
    }
}
