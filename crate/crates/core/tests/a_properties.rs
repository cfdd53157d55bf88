use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sumprod_core::exponents::{gkz_exponent_exact, min_branch, theorem_exponent_exact};
use sumprod_core::extraction::overlap_matrix_row_cells;
use sumprod_core::fourier::energy::{energy_from_counts, interval_energy};
use sumprod_core::fourier::plancherel::{plancherel_defect, plancherel_tail_bound};
use sumprod_core::kernels::{pair_counts, productset_pair_loop};
use sumprod_core::*;

/// A set inside `[1, 2)` given by `(start, len)` runs relative to cell `n`.
fn set_in_unit(n: u64) -> impl Strategy<Value = GridSet> {
    prop::collection::vec((0..n as i64, 1..8i64), 1..12).prop_map(move |runs| {
        let s = GridScale::new(n).unwrap();
        let n = n as i64;
        let ranges: Vec<(i64, i64)> = runs
            .into_iter()
            .map(|(st, len)| (n + st, n + (st + len).min(n)))
            .collect();
        GridSet::from_cell_ranges(s, &ranges).unwrap()
    })
}

fn pair_in_unit() -> impl Strategy<Value = (GridSet, GridSet)> {
    prop_oneof![Just(64u64), Just(128), Just(256)]
        .prop_flat_map(|n| (set_in_unit(n), set_in_unit(n)))
}

fn cell_set(a: &GridSet) -> BTreeSet<i64> {
    a.cells().collect()
}

/// Cells of the grid cover of `(k/n)·A`, one cell of `A` at a time.
fn dilation_oracle(a: &GridSet, k: i64) -> BTreeSet<i64> {
    let n = a.scale().n() as i64;
    let mut out = BTreeSet::new();
    for l in a.cells() {
        let lo = (k * l).div_euclid(n);
        let hi = -((-(k * (l + 1))).div_euclid(n));
        out.extend(lo..hi);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_sumset_matches_pair_loop((a, b) in pair_in_unit()) {
        let fft = sumset_with(&a, &b, SumsetKernel::Fft).unwrap();
        let direct = sumset_with(&a, &b, SumsetKernel::PairLoop).unwrap();
        prop_assert_eq!(fft, direct);
    }

    #[test]
    fn sumset_commutes_and_translates((a, b) in pair_in_unit(), shift in -40i64..40) {
        prop_assert_eq!(sumset(&a, &b).unwrap(), sumset(&b, &a).unwrap());
        let moved = sumset(&a.translate(shift).unwrap(), &b).unwrap();
        prop_assert_eq!(moved, sumset(&a, &b).unwrap().translate(shift).unwrap());
    }

    #[test]
    fn sumset_is_monotone((a, b) in pair_in_unit(), (c, _) in pair_in_unit()) {
        prop_assume!(a.scale() == c.scale());
        let mut cells = cell_set(&a);
        cells.extend(c.cells());
        let big = GridSet::from_cells(a.scale(), cells).unwrap();
        prop_assert!(sumset(&a, &b).unwrap().is_subset_of(&sumset(&big, &b).unwrap()));
        prop_assert!(productset(&a, &b).unwrap().is_subset_of(&productset(&big, &b).unwrap()));
    }

    #[test]
    fn productset_matches_cell_pairs((a, b) in pair_in_unit()) {
        let fast = productset(&a, &b).unwrap();
        prop_assert_eq!(&fast, &productset_pair_loop(&a, &b).unwrap());
        prop_assert_eq!(fast, productset(&b, &a).unwrap());
    }

    #[test]
    fn dset_round_trip((a, _) in pair_in_unit(), shift in -60i64..60) {
        let a = a.translate(shift).unwrap();
        let text = to_dset(&a);
        prop_assert_eq!(from_dset(&text).unwrap(), a);
    }

    #[test]
    fn net_identity((a, _) in pair_in_unit()) {
        let net = a.delta_net();
        prop_assert!((net.len() as f64 * a.delta() - a.measure()).abs() < 1e-12);
        prop_assert_eq!(net.len() as u64, a.cell_count());
    }

    #[test]
    fn energy_routes_agree((a, b) in pair_in_unit()) {
        let r = energy(&a, &b).unwrap();
        prop_assert_eq!(r.path_closed_form, r.path_fft);
        prop_assert_eq!(r.energy, energy(&b, &a).unwrap().energy);
        let swept = interval_energy(&a.intervals(), &b.intervals());
        prop_assert!((swept - r.energy).abs() <= 1e-9 * r.energy);
        prop_assert!(r.lower_bound_check);
        let (_, counts) = pair_counts(&a, &b, SumsetKernel::PairLoop).unwrap();
        prop_assert_eq!(energy_from_counts(&counts, a.delta()), r.energy);
    }

    #[test]
    fn plancherel_defect_bounded((a, _) in pair_in_unit(), mult in 1.0f64..50.0) {
        let xi = mult * a.scale().n() as f64;
        let d = plancherel_defect(&a, xi).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert!(d <= plancherel_tail_bound(&a, xi) * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn continuity_of_dilates((a, _) in pair_in_unit(), t in prop_oneof![Just(0.5), Just(1.0), Just(2.0)], x in -1.0f64..1.0) {
        let base = dilate_sumset(&a, t).unwrap().measure();
        let moved = dilate_sumset(&a, t + x * a.delta()).unwrap().measure();
        let ratio = moved / base;
        prop_assert!((1.0 / 9.0..=9.0).contains(&ratio), "ratio {}", ratio);
    }

    #[test]
    fn ruzsa_on_nets(
        (a, b) in pair_in_unit(),
        (c, _) in pair_in_unit(),
    ) {
        prop_assume!(a.scale() == c.scale());
        let count = |x: &GridSet, y: &GridSet| -> u128 {
            let xs: Vec<i64> = x.cells().collect();
            let mut s = BTreeSet::new();
            for k in &xs { for l in y.cells() { s.insert(k + l); } }
            s.len() as u128
        };
        let z = c.cell_count() as u128;
        prop_assert!(count(&a, &b) * z <= count(&a, &c) * count(&c, &b));
    }

    #[test]
    fn overlap_row_matches_oracle((a, _) in pair_in_unit(), pick in any::<prop::sample::Index>()) {
        let net = a.delta_net();
        let j = pick.index(net.len());
        let row = overlap_matrix_row_cells(&a, &net, j).unwrap();
        let uj = dilation_oracle(&a, net.cells()[j]);
        for (i, &k) in net.cells().iter().enumerate() {
            let ui = dilation_oracle(&a, k);
            prop_assert_eq!(row[i], ui.intersection(&uj).count() as u64);
        }
    }

    #[test]
    fn dilation_containment_rational((a, _) in pair_in_unit(), pick in any::<prop::sample::Index>()) {
        // a·A ⊆ U ⊆ a·A + B(0, δ) with a the net point, in exact rationals.
        let n = a.scale().n() as i64;
        let k = a.delta_net().cells()[pick.index(a.cell_count() as usize)];
        let u = dilation_oracle(&a, k);
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        for &(l0, l1) in a.runs() {
            let lo = r(k * l0, n * n);
            let hi = r(k * l1, n * n);
            for c in l0 * k / n..(k * l1 + n - 1) / n {
                let (c0, c1) = (r(c, n), r(c + 1, n));
                if c1 > lo && c0 < hi {
                    prop_assert!(u.contains(&c));
                }
            }
        }
        let one = r(1, n);
        for &c in &u {
            let (c0, c1) = (r(c, n), r(c + 1, n));
            let near = a.runs().iter().any(|&(l0, l1)| {
                c1 > r(k * l0, n * n) - &one && c0 < r(k * l1, n * n) + &one
            });
            prop_assert!(near);
        }
    }

    #[test]
    fn generators_are_deterministic(seed in 0u64..1000, sigma in 0.55f64..0.95) {
        let spec = GeneratorSpec { sigma, seed, ..GeneratorSpec::new(GeneratorKind::RandomTree, 256) };
        let a = generate(&spec).unwrap();
        prop_assert_eq!(&a, &generate(&spec).unwrap());
        prop_assert!(a.within(1.0, 2.0));
    }

    #[test]
    fn theorem_below_min_branch(sigma in 0.5001f64..0.9999) {
        let s = BigRational::from_float(sigma).unwrap();
        let c = theorem_exponent_exact(&s).value;
        let bound = BigRational::from_float(min_branch(sigma)).unwrap();
        prop_assert!(c <= bound);
        prop_assert!(gkz_exponent_exact(&s).in_range);
    }
}

#[test]
fn exponent_difference_changes_sign_once() {
    let mut changes = 0;
    let mut prev = None;
    let mut sigma = 0.5001;
    while sigma < 1.0 {
        let s = BigRational::from_float(sigma).unwrap();
        let d = theorem_exponent_exact(&s).value > gkz_exponent_exact(&s).value;
        if let Some(p) = prev {
            if p != d {
                changes += 1;
            }
        }
        prev = Some(d);
        sigma += 1e-4;
    }
    assert_eq!(changes, 1);
}

#[test]
fn profile_is_monotone_under_inclusion() {
    let s = GridScale::new(512).unwrap();
    let spec = GeneratorSpec { sigma: 0.7, seed: 9, ..GeneratorSpec::new(GeneratorKind::RandomTree, 512) };
    let small = generate(&spec).unwrap();
    let mut cells: BTreeSet<i64> = small.cells().collect();
    cells.extend((600..640).step_by(3));
    let big = GridSet::from_cells(s, cells).unwrap();
    let ps = NonConcentrationProfile::compute(&small);
    let pb = NonConcentrationProfile::compute(&big);
    for (x, y) in ps.scales.iter().zip(&pb.scales) {
        assert!(x.max_mass <= y.max_mass);
    }
}
