//! Integer convolutions of 0/1 sequences: a direct pair loop and a zero-padded
//! complex FFT with an explicit rounding check.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bitset::Bits;
use crate::error::{Error, Result};

/// Largest allowed distance from an FFT output to the nearest integer.
pub const ROUNDING_TOLERANCE: f64 = 1e-3;

/// `r[m] = #{(i, j) : a_i = b_j = 1, i + j = m}` by enumerating occupied pairs.
pub(crate) fn pair_counts_direct(a: &Bits, b: &Bits) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let b_ones: Vec<usize> = b.ones().collect();
    for i in a.ones() {
        for &j in &b_ones {
            out[i + j] += 1;
        }
    }
    out
}

/// Same counts as [`pair_counts_direct`] through a power-of-two FFT.
pub(crate) fn pair_counts_fft(a: &Bits, b: &Bits) -> Result<Vec<u64>> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);

    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    for i in a.ones() {
        fa[i].re = 1.0;
    }
    for j in b.ones() {
        fb[j].re = 1.0;
    }
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);

    let scale = 1.0 / size as f64;
    let mut out = Vec::with_capacity(out_len);
    for (index, z) in fa.iter().take(out_len).enumerate() {
        let v = z.re * scale;
        let r = v.round();
        let residue = (v - r).abs();
        if residue > ROUNDING_TOLERANCE || r < 0.0 {
            return Err(Error::Precision { index, residue });
        }
        out.push(r as u64);
    }
    Ok(out)
}
