//! δ-discretized sets stored as occupancy bitsets over the grid of half-open
//! cells `[k/n, (k+1)/n)`.

use serde::{Deserialize, Serialize};

use crate::bitset::Bits;
use crate::error::{Error, Result};

/// Occupied cells must satisfy `-BOUND·n <= k` and `k + 1 <= BOUND·n`.
pub const BOUND: i64 = 16;

/// Tolerance used when snapping real endpoints onto grid boundaries.
const SNAP: f64 = 1e-9;

/// Grid resolution `δ = 1/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridScale {
    n: u64,
}

impl GridScale {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidScale(n));
        }
        // keeps every cell product `k·l` for cells in the bounding box inside i64
        if n > 1 << 24 {
            return Err(Error::param("n", format!("{n} exceeds 2^24")));
        }
        Ok(GridScale { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub(crate) fn ni(&self) -> i64 {
        self.n as i64
    }

    pub(crate) fn ensure_same(&self, other: &GridScale) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ScaleMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    fn min_cell(&self) -> i64 {
        -BOUND * self.ni()
    }

    fn max_cell(&self) -> i64 {
        BOUND * self.ni() - 1
    }

    pub(crate) fn check_cell(&self, cell: i64) -> Result<()> {
        if cell < self.min_cell() || cell > self.max_cell() {
            Err(Error::OutOfBounds {
                cell,
                n: self.n,
                bound: BOUND,
            })
        } else {
            Ok(())
        }
    }
}

/// An exact, nonempty, finite union of grid cells.
///
/// The bitset is trimmed: its first and last bits are always set, so `offset`
/// is the index of the leftmost occupied cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridSet {
    scale: GridScale,
    offset: i64,
    bits: Bits,
    runs: Vec<(i64, i64)>,
}

impl GridSet {
    /// Builds a set from half-open cell-index ranges `[start, end)`; ranges may overlap.
    pub fn from_cell_ranges(scale: GridScale, ranges: &[(i64, i64)]) -> Result<Self> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &(s, e) in ranges {
            if s < e {
                lo = lo.min(s);
                hi = hi.max(e);
            }
        }
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
        Ok(Self::from_bits_trusted(scale, lo, bits))
    }

    /// Builds a set from individual occupied cell indices.
    pub fn from_cells(scale: GridScale, cells: impl IntoIterator<Item = i64>) -> Result<Self> {
        let ranges: Vec<(i64, i64)> = cells.into_iter().map(|k| (k, k + 1)).collect();
        Self::from_cell_ranges(scale, &ranges)
    }

    /// Grid cover of a union of real intervals, read as half-open `[lo, hi)`.
    ///
    /// Cell `k` is occupied iff `[k/n, (k+1)/n)` meets some `[lo, hi)`. Endpoints
    /// within `1e-9` cells of a grid boundary snap onto it, so grid-aligned input
    /// reproduces itself exactly.
    pub fn from_intervals(scale: GridScale, intervals: &[(f64, f64)]) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = scale.n as f64;
        let bound = BOUND as f64;
        let mut ranges = Vec::with_capacity(intervals.len());
        for &(lo, hi) in intervals {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(Error::param("intervals", format!("need lo < hi, got ({lo}, {hi})")));
            }
            if lo <= -bound || hi >= bound {
                return Err(Error::param(
                    "intervals",
                    format!("({lo}, {hi}) leaves (-{BOUND}, {BOUND})"),
                ));
            }
            let start = snap_floor(lo * n);
            let end = snap_ceil(hi * n).max(start + 1);
            ranges.push((start, end));
        }
        Self::from_cell_ranges(scale, &ranges)
    }

    pub(crate) fn from_bits_trusted(scale: GridScale, offset: i64, bits: Bits) -> Self {
        let runs: Vec<(i64, i64)> = bits
            .runs()
            .into_iter()
            .map(|(s, e)| (offset + s as i64, offset + e as i64))
            .collect();
        debug_assert!(!runs.is_empty());
        let first = runs[0].0;
        let last = runs[runs.len() - 1].1;
        if first == offset && (last - offset) as usize == bits.len() {
            return GridSet {
                scale,
                offset,
                bits,
                runs,
            };
        }
        // re-trim
        let mut trimmed = Bits::zeros((last - first) as usize);
        for &(s, e) in &runs {
            trimmed.set_range((s - first) as usize, (e - first) as usize);
        }
        GridSet {
            scale,
            offset: first,
            bits: trimmed,
            runs,
        }
    }

    pub fn scale(&self) -> GridScale {
        self.scale
    }

    pub fn delta(&self) -> f64 {
        self.scale.delta()
    }

    /// Index of the leftmost occupied cell.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// One past the rightmost occupied cell.
    pub fn end(&self) -> i64 {
        self.offset + self.bits.len() as i64
    }

    pub fn span(&self) -> usize {
        self.bits.len()
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn cell_count(&self) -> u64 {
        self.bits.count_ones()
    }

    /// Lebesgue measure, `δ · popcount`.
    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 / self.scale.n as f64
    }

    pub fn contains_cell(&self, k: i64) -> bool {
        k >= self.offset && k < self.end() && self.bits.get((k - self.offset) as usize)
    }

    /// Occupied cell indices in increasing order.
    pub fn cells(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits.ones().map(move |i| self.offset + i as i64)
    }

    /// Maximal runs of occupied cells as half-open index ranges.
    pub fn runs(&self) -> &[(i64, i64)] {
        &self.runs
    }

    /// Maximal runs as real intervals `[a, b)`.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let n = self.scale.n as f64;
        self.runs
            .iter()
            .map(|&(s, e)| (s as f64 / n, e as f64 / n))
            .collect()
    }

    /// Longest run, in cells.
    pub fn longest_run(&self) -> u64 {
        self.runs.iter().map(|&(s, e)| (e - s) as u64).max().unwrap_or(0)
    }

    /// True when every occupied cell lies inside the real interval `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        let n = self.scale.n as f64;
        self.offset as f64 >= lo * n - SNAP && self.end() as f64 <= hi * n + SNAP
    }

    pub fn is_subset_of(&self, other: &GridSet) -> bool {
        self.scale == other.scale && self.cells().all(|k| other.contains_cell(k))
    }

    /// Translates by a whole number of cells.
    pub fn translate(&self, cells: i64) -> Result<Self> {
        self.scale.check_cell(self.offset + cells)?;
        self.scale.check_cell(self.end() - 1 + cells)?;
        Ok(GridSet {
            scale: self.scale,
            offset: self.offset + cells,
            bits: self.bits.clone(),
            runs: self.runs.iter().map(|&(s, e)| (s + cells, e + cells)).collect(),
        })
    }

    /// Grid cover of `S + B(0, cδ)` (open ball): every run grows by `⌈c⌉` cells
    /// on each side.
    pub fn fatten(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 10.0) {
            return Err(Error::param("c", format!("fattening radius {c} not in (0, 10)")));
        }
        let grow = c.ceil() as i64;
        let ranges: Vec<(i64, i64)> = self
            .runs
            .iter()
            .map(|&(s, e)| (s - grow, e + grow))
            .collect();
        Self::from_cell_ranges(self.scale, &ranges)
    }

    /// Left endpoints of all occupied cells: a maximal δ-separated subset.
    pub fn delta_net(&self) -> Net {
        Net {
            scale: self.scale,
            cells: self.cells().collect(),
        }
    }
}

fn snap_floor(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < SNAP {
        r as i64
    } else {
        x.floor() as i64
    }
}

fn snap_ceil(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < SNAP {
        r as i64
    } else {
        x.ceil() as i64
    }
}

/// A δ-net `D = {a_1 < … < a_N}` of a grid set, stored as cell indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net {
    scale: GridScale,
    cells: Vec<i64>,
}

impl Net {
    pub fn scale(&self) -> GridScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell index of each net point; the point itself is `cell/n`.
    pub fn cells(&self) -> &[i64] {
        &self.cells
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.scale.n as f64;
        self.cells.iter().map(|&k| k as f64 / n).collect()
    }

    /// `#(D ∩ B(x, r))` for the open ball.
    pub fn count_in_ball(&self, x: f64, r: f64) -> usize {
        let n = self.scale.n as f64;
        self.cells
            .iter()
            .filter(|&&k| (k as f64 / n - x).abs() < r)
            .count()
    }
}
