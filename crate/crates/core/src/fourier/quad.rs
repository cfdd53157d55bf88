//! Quadrature rules and the sine integral.

use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped onto arbitrary panels.
#[derive(Clone, Debug)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        GaussRule { nodes, weights }
    }

    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Composite Simpson over uniformly spaced samples `f[i0..=i1]` with step `h`.
/// An odd number of intervals closes with Simpson's 3/8 rule.
pub fn simpson_samples(f: &[f64], i0: usize, i1: usize, h: f64) -> f64 {
    debug_assert!(i1 < f.len());
    if i1 <= i0 {
        return 0.0;
    }
    let intervals = i1 - i0;
    if intervals == 1 {
        return 0.5 * h * (f[i0] + f[i1]);
    }
    let (even_end, tail) = if intervals.is_multiple_of(2) {
        (i1, 0.0)
    } else {
        let s = i1 - 3;
        (s, 3.0 * h / 8.0 * (f[s] + 3.0 * f[s + 1] + 3.0 * f[s + 2] + f[s + 3]))
    };
    let mut acc = f[i0] + f[even_end];
    for (k, v) in f[i0 + 1..even_end].iter().enumerate() {
        acc += if k % 2 == 0 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0 + tail
}

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt`.
///
/// Power series for `|x| <= 4`; beyond that the continued fraction for
/// `E1(ix)` evaluated by the modified Lentz method.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0usize;
        loop {
            k += 1;
            let a = (2 * k) as f64;
            let b = (2 * k + 1) as f64;
            term *= -x2 / (a * b);
            let add = term / b;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    // E1(ix) = e^{-ix} · 1/(1 + ix - 1²/(3 + ix - 2²/(5 + ix - ...)))
    const TINY: f64 = 1e-300;
    let mut b = (1.0, x);
    let mut c = (1.0 / TINY, 0.0);
    let mut d = cdiv((1.0, 0.0), b);
    let mut h = d;
    for i in 2..100_000 {
        let a = -((i - 1) * (i - 1)) as f64;
        b.0 += 2.0;
        d = cdiv((1.0, 0.0), cadd(cscale(d, a), b));
        c = cadd(b, cscale(cdiv((1.0, 0.0), c), a));
        let del = cmul(c, d);
        h = cmul(h, del);
        if (del.0 - 1.0).abs() + del.1.abs() < 1e-16 {
            break;
        }
    }
    let h = cmul(h, (x.cos(), -x.sin()));
    FRAC_PI_2 + h.1
}

type C = (f64, f64);

fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn cscale(a: C, s: f64) -> C {
    (a.0 * s, a.1 * s)
}

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C, b: C) -> C {
    let den = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / den, (a.1 * b.0 - a.0 * b.1) / den)
}
