//! Exact sumsets, productsets and dilated sumsets of grid sets.
//!
//! All outputs are grid covers of the true Minkowski sum/product of the
//! interval unions. The run-pair formulation is exact: the union over cells
//! of two runs of the per-cell images is a single interval, because
//! consecutive cell images overlap.

use crate::bitset::Bits;
use crate::conv;
use crate::error::{Error, Result};
use crate::grid::{GridScale, GridSet};
use crate::numeric::{div_ceil, div_floor};

/// Which convolution backs a boolean sumset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumsetKernel {
    Fft,
    PairLoop,
}

/// Grid cover of `A + B` through the FFT path.
///
/// Cell `m` is occupied iff `m ∈ {k + l, k + l + 1}` for occupied `k ∈ A`,
/// `l ∈ B`, since `[kδ,(k+1)δ) + [lδ,(l+1)δ) = [(k+l)δ, (k+l+2)δ)`.
pub fn sumset(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    sumset_with(a, b, SumsetKernel::Fft)
}

pub fn sumset_with(a: &GridSet, b: &GridSet, kernel: SumsetKernel) -> Result<GridSet> {
    a.scale().ensure_same(&b.scale())?;
    let base = a.offset() + b.offset();
    // one extra slot for the `k + l + 1` cell
    let len = a.span() + b.span();
    let mut hit = Bits::zeros(len);
    match kernel {
        SumsetKernel::Fft => {
            let counts = conv::pair_counts_fft(a.bits(), b.bits())?;
            for (m, &c) in counts.iter().enumerate() {
                if c > 0 {
                    hit.set(m);
                }
            }
        }
        SumsetKernel::PairLoop => {
            for k in a.bits().ones() {
                hit.or_shifted(b.bits(), k);
            }
        }
    }
    let mut out = hit.clone();
    out.or_shifted(&hit, 1);
    a.scale().check_cell(base + len as i64 - 1)?;
    Ok(GridSet::from_bits_trusted(a.scale(), base, out))
}

/// Occupied-pair counts `r[m] = #{(k, l) : k ∈ A, l ∈ B, k + l = m}`, returned
/// with the absolute index of `r[0]`.
pub fn pair_counts(a: &GridSet, b: &GridSet, kernel: SumsetKernel) -> Result<(i64, Vec<u64>)> {
    a.scale().ensure_same(&b.scale())?;
    let counts = match kernel {
        SumsetKernel::Fft => conv::pair_counts_fft(a.bits(), b.bits())?,
        SumsetKernel::PairLoop => conv::pair_counts_direct(a.bits(), b.bits()),
    };
    Ok((a.offset() + b.offset(), counts))
}

/// Grid cover of `A + tA` for real `t ∈ [0.4, 2.1]` and `A ⊆ [0, 2]`.
///
/// For runs `[k0, k1)`, `[l0, l1)` the image is `[k0 + t·l0, k1 + t·l1)` in cell
/// units; every cell meeting it is marked.
pub fn dilate_sumset(a: &GridSet, t: f64) -> Result<GridSet> {
    if !(0.4..=2.1).contains(&t) {
        return Err(Error::param("t", format!("{t} not in [0.4, 2.1]")));
    }
    if !a.within(0.0, 2.0) {
        return Err(Error::Hypothesis("dilate_sumset needs A ⊆ [0, 2]".into()));
    }
    let ranges = pairwise_ranges(a.runs(), a.runs(), |&(k0, k1), &(l0, l1)| {
        let lo = k0 as f64 + t * l0 as f64;
        let hi = k1 as f64 + t * l1 as f64;
        (lo.floor() as i64, hi.ceil() as i64)
    });
    build_from_ranges(a.scale(), &ranges)
}

/// Grid cover of `a·A` for a single real factor `a > 0` given as `num/den`.
pub fn dilate_by_ratio(a: &GridSet, num: i64, den: i64) -> Result<GridSet> {
    if num <= 0 || den <= 0 {
        return Err(Error::param("ratio", "factor must be positive"));
    }
    let ranges: Vec<(i64, i64)> = a
        .runs()
        .iter()
        .map(|&(l0, l1)| (div_floor(num * l0, den), div_ceil(num * l1, den)))
        .collect();
    build_from_ranges(a.scale(), &ranges)
}

/// Grid cover of `AB` for `A, B ⊆ [1/2, 4]`.
///
/// Runs `[k0, k1)`, `[l0, l1)` map to `[k0·l0·δ², k1·l1·δ²)`; the covered cells are
/// `⌊k0·l0/n⌋ ..= ⌈k1·l1/n⌉ - 1`, computed in integers.
pub fn productset(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    check_product_domain(a, b)?;
    let n = a.scale().ni();
    let ranges = pairwise_ranges(a.runs(), b.runs(), |&(k0, k1), &(l0, l1)| {
        (div_floor(k0 * l0, n), div_ceil(k1 * l1, n))
    });
    build_from_ranges(a.scale(), &ranges)
}

/// Cell-pair enumeration of `AB`, the reference for [`productset`].
pub fn productset_pair_loop(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    check_product_domain(a, b)?;
    let n = a.scale().ni();
    let b_cells: Vec<i64> = b.cells().collect();
    let mut ranges = Vec::with_capacity(a.cell_count() as usize * b_cells.len());
    for k in a.cells() {
        for &l in &b_cells {
            ranges.push((div_floor(k * l, n), div_ceil((k + 1) * (l + 1), n)));
        }
    }
    build_from_ranges(a.scale(), &ranges)
}

fn check_product_domain(a: &GridSet, b: &GridSet) -> Result<()> {
    a.scale().ensure_same(&b.scale())?;
    for s in [a, b] {
        if s.offset() <= 0 {
            return Err(Error::Hypothesis("productset needs positive support".into()));
        }
        if !s.within(0.5, 4.0) {
            return Err(Error::Hypothesis("productset needs sets inside [1/2, 4]".into()));
        }
    }
    Ok(())
}

fn pairwise_ranges<F>(xs: &[(i64, i64)], ys: &[(i64, i64)], f: F) -> Vec<(i64, i64)>
where
    F: Fn(&(i64, i64), &(i64, i64)) -> (i64, i64),
{
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(f(x, y));
        }
    }
    out
}

/// Marks all `[s, e)` ranges into one bitset framed by their hull.
pub(crate) fn build_from_ranges(scale: GridScale, ranges: &[(i64, i64)]) -> Result<GridSet> {
    let lo = ranges.iter().map(|r| r.0).min().ok_or(Error::EmptySet)?;
    let hi = ranges.iter().map(|r| r.1).max().ok_or(Error::EmptySet)?;
    if lo >= hi {
        return Err(Error::EmptySet);
    }
    scale.check_cell(lo)?;
    scale.check_cell(hi - 1)?;
    let mut bits = Bits::zeros((hi - lo) as usize);
    for &(s, e) in ranges {
        if s < e {
            bits.set_range((s - lo) as usize, (e - lo) as usize);
        }
    }
    Ok(GridSet::from_bits_trusted(scale, lo, bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: u64) -> GridScale {
        GridScale::new(n).unwrap()
    }

    #[test]
    fn single_cell_sumset() {
        let a = GridSet::from_cells(sc(4), [0]).unwrap();
        let s = sumset(&a, &a).unwrap();
        assert_eq!(s.cells().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(s.measure(), 0.5);
    }

    #[test]
    fn interval_sumset() {
        let a = GridSet::from_intervals(sc(32), &[(1.0, 2.0)]).unwrap();
        let s = sumset(&a, &a).unwrap();
        assert_eq!(s, GridSet::from_intervals(sc(32), &[(2.0, 4.0)]).unwrap());
        assert_eq!(sumset_with(&a, &a, SumsetKernel::PairLoop).unwrap(), s);
    }

    #[test]
    fn scale_mismatch_is_an_error() {
        let a = GridSet::from_cells(sc(4), [1]).unwrap();
        let b = GridSet::from_cells(sc(8), [1]).unwrap();
        assert!(matches!(sumset(&a, &b), Err(Error::ScaleMismatch { .. })));
        assert!(matches!(productset(&a, &b), Err(Error::ScaleMismatch { .. })));
    }

    #[test]
    fn dilate_at_one_is_sumset() {
        let a = GridSet::from_cell_ranges(sc(64), &[(64, 70), (80, 81), (100, 128)]).unwrap();
        assert_eq!(dilate_sumset(&a, 1.0).unwrap(), sumset(&a, &a).unwrap());
    }

    #[test]
    fn dilate_interval_by_two() {
        let a = GridSet::from_intervals(sc(16), &[(1.0, 2.0)]).unwrap();
        let s = dilate_sumset(&a, 2.0).unwrap();
        assert_eq!(s, GridSet::from_intervals(sc(16), &[(3.0, 6.0)]).unwrap());
        assert_eq!(s.measure(), 3.0);
        assert!(dilate_sumset(&a, 0.3).is_err());
        assert!(dilate_sumset(&a, 2.2).is_err());
    }

    #[test]
    fn interval_productset() {
        let a = GridSet::from_intervals(sc(16), &[(1.0, 2.0)]).unwrap();
        let p = productset(&a, &a).unwrap();
        assert_eq!(p, GridSet::from_intervals(sc(16), &[(1.0, 4.0)]).unwrap());
        assert_eq!(p.measure(), 3.0);
    }

    #[test]
    fn tiny_cell_productset() {
        let a = GridSet::from_cells(sc(100), [100]).unwrap();
        let p = productset(&a, &a).unwrap();
        assert_eq!(p.cells().collect::<Vec<_>>(), vec![100, 101, 102]);
        assert!((p.measure() - 0.03).abs() < 1e-15);
        assert_eq!(productset_pair_loop(&a, &a).unwrap(), p);
    }

    #[test]
    fn productset_domain() {
        let a = GridSet::from_cells(sc(8), [0]).unwrap();
        assert!(matches!(productset(&a, &a), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn ratio_dilation_covers_image() {
        let a = GridSet::from_intervals(sc(8), &[(1.0, 1.5)]).unwrap();
        // (9/8)·[1, 1.5) = [1.125, 1.6875) -> cells 9..=13
        let d = dilate_by_ratio(&a, 9, 8).unwrap();
        assert_eq!(d.cells().collect::<Vec<_>>(), vec![9, 10, 11, 12, 13]);
    }
}
