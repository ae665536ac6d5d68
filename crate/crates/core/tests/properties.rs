use std::collections::BTreeMap;

use hsp_core::alga::{finite_stage, FiniteStageOptions};
use hsp_core::exact::contfrac::legendre_reconstruct;
use hsp_core::exact::matrix::{IntMatrix, RatMatrix};
use hsp_core::exact::normal_form::{diagonal, hnf, hnf_basis, snf};
use hsp_core::exact::partial::{is_abbreviated_form, is_per_pair_form, partial_fractions};
use hsp_core::exact::rational::{rat, Rat};
use hsp_core::lattice::{
    closest_dual_point, coset_canonical, default_delta, dual_membership, dual_sample_uniform, is_lll_reduced,
    lll_with_transform, Lattice, TorusVec,
};
use hsp_core::oracle::{Predicate, RationalOracle, SparseSimonOracle, SparseVec};
use hsp_core::sieve::{Sieve, SieveConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]))
}

fn small_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| int_matrix(r, c, &e))
    })
}

fn square_matrix(max_n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| prop::collection::vec(-bound..=bound, n * n).prop_map(move |e| int_matrix(n, n, &e)))
}

/// Product of random elementary column operations on n columns.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            u.swap_cols(a, (a + 1) % n);
            continue;
        }
        for i in 0..n {
            let v = u.get(i, a) + BigInt::from(c) * u.get(i, b);
            u.set(i, a, v);
        }
    }
    u
}

fn nonzero_lattice(max_k: usize) -> impl Strategy<Value = Lattice> {
    small_matrix(max_k, max_k, 5)
        .prop_map(|m| Lattice::from_generators(&m))
        .prop_filter("nonzero rank", |l| l.rank() > 0)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hnf_is_idempotent_and_canonical(
        m in small_matrix(4, 5, 9),
        ops in prop::collection::vec((0usize..8, 0usize..8, -3i64..=3), 0..12),
    ) {
        let (h, u) = hnf(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(&m * &u, h.clone());
        let basis = hnf_basis(&m);
        prop_assert_eq!(hnf_basis(&basis), basis.clone());
        let shuffled = &m * &unimodular(m.cols(), &ops);
        prop_assert_eq!(hnf_basis(&shuffled), basis);
    }

    #[test]
    fn snf_diagonal_divides_and_multiplies_to_det(m in square_matrix(4, 9)) {
        let (d, v, w) = snf(&m);
        prop_assert_eq!(&(&v * &m) * &w, d.clone());
        let diag = diagonal(&d);
        let nonzero: Vec<&BigInt> = diag.iter().take_while(|x| !x.is_zero()).collect();
        prop_assert!(diag[nonzero.len()..].iter().all(Zero::is_zero));
        for pair in nonzero.windows(2) {
            prop_assert!(pair[0].is_positive());
            prop_assert!(pair[1].is_multiple_of(pair[0]));
        }
        let prod = diag.iter().fold(BigInt::one(), |acc, x| acc * x);
        prop_assert_eq!(prod, m.det().unwrap().abs());
    }

    #[test]
    fn partial_fractions_round_trip_and_are_unique(n in -10_000_000i64..10_000_000, d in 1i64..=1_000_000, shift in -50i64..50) {
        let x = rat(n, d);
        let pf = partial_fractions(&x).unwrap();
        prop_assert!(is_per_pair_form(&pf));
        prop_assert_eq!(pf.to_rat(), x.clone());
        let ab = pf.abbreviated();
        prop_assert!(is_abbreviated_form(&ab));
        prop_assert_eq!(ab.to_rat(), x.clone());
        // Same value written differently: only the integer part moves under integer shifts.
        let shifted = partial_fractions(&(x + rat(shift, 1))).unwrap();
        prop_assert_eq!(&shifted.terms, &pf.terms);
        prop_assert_eq!(shifted.integer_part, pf.integer_part + shift);
    }

    #[test]
    fn legendre_recovers_close_fractions(a in -100_000i64..100_000, b in 1i64..=4096, r in 4096i64..=65536, num in 0i64..1000) {
        // |e| < 1/(2R²) ≤ 1/(2b²), so a/b is the unique verified convergent of largest denominator.
        let r_big = BigInt::from(r);
        let e = Rat::new(BigInt::from(num), BigInt::from(1000) * BigInt::from(2) * &r_big * &r_big);
        let target = rat(a, b);
        let rec = legendre_reconstruct(&(target.clone() + e), &r_big);
        prop_assert!(rec.verified);
        prop_assert_eq!(rec.value, target);
    }

    #[test]
    fn reciprocal_basis_inverts_and_has_bounded_denominators(l in nonzero_lattice(4)) {
        let m = l.basis().to_rat();
        let r = l.reciprocal_basis().unwrap();
        prop_assert_eq!(&m.transpose() * &r, RatMatrix::identity(l.rank()));
        prop_assert!(r.scale(&Rat::from_integer(l.gram_det().clone())).to_int().is_some());
    }

    #[test]
    fn saturation_is_idempotent_and_obeys_the_index_law(l in nonzero_lattice(4)) {
        let sat = l.saturation();
        prop_assert_eq!(sat.saturation(), sat.clone());
        prop_assert_eq!(sat.rank(), l.rank());
        prop_assert!(sat.contains_lattice(&l));
        let idx = l.component_index();
        prop_assert_eq!(&idx * &idx * sat.gram_det(), l.gram_det().clone());
    }

    #[test]
    fn lll_preserves_the_lattice_and_is_reduced(m in square_matrix(4, 40)) {
        prop_assume!(!m.det().unwrap().is_zero());
        let b = m.to_rat();
        let (r, u) = lll_with_transform(&b, &default_delta()).unwrap();
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(&b * &u.to_rat(), r.clone());
        prop_assert!(is_lll_reduced(&r, &default_delta()));
        prop_assert_eq!(hnf_basis(&r.to_int().unwrap()), hnf_basis(&m));
    }

    #[test]
    fn coset_canonical_is_a_class_function(
        l in nonzero_lattice(3),
        x in prop::collection::vec(-30i64..30, 3),
        c in prop::collection::vec(-4i64..4, 3),
    ) {
        let k = l.k();
        let x = ints(&x[..k]);
        let canon = coset_canonical(&l, &x);
        prop_assert_eq!(coset_canonical(&l, &canon), canon.clone());
        let diff: Vec<BigInt> = x.iter().zip(&canon).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff));
        let v = l.basis().mul_vec(&ints(&c[..l.rank()]));
        let moved: Vec<BigInt> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert_eq!(coset_canonical(&l, &moved), canon);
    }

    #[test]
    fn dual_samples_and_rounding_land_in_the_dual(l in nonzero_lattice(3), seed in any::<u64>(), noise in prop::collection::vec((-50i64..50, 1i64..60), 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = dual_sample_uniform(&l, &BigInt::from(1u64 << 20), &mut rng);
        prop_assert!(dual_membership(&l, &y));
        let z = TorusVec::new(noise[..l.k()].iter().map(|&(n, d)| rat(n, d)));
        prop_assert!(dual_membership(&l, &closest_dual_point(&l, &z)));
    }

    #[test]
    fn rational_oracle_is_idempotent_and_hides_unit_fractions(
        n in -100_000i64..100_000, d in 1i64..=100_000, which in 0usize..3, c in -5i64..5,
    ) {
        let oracle = RationalOracle::new(Predicate::set([2, 3, 5]));
        let x = rat(n, d);
        let canon = oracle.canonical(&x).unwrap();
        prop_assert_eq!(oracle.canonical(&canon).unwrap(), canon.clone());
        let p = [2, 3, 5][which];
        prop_assert_eq!(oracle.canonical(&(x + rat(c, p))).unwrap(), canon);
    }

    #[test]
    fn sparse_oracle_is_idempotent(terms in prop::collection::vec((0u64..40, -3i64..3), 0..10)) {
        let oracle = SparseSimonOracle::new(Predicate::Even);
        let v = SparseVec::new(terms.iter().map(|&(i, c)| (i, BigInt::from(c))));
        let canon = oracle.canonical(&v);
        prop_assert_eq!(oracle.canonical(&canon), canon.clone());
        prop_assert_eq!(oracle.canonical(&v.add(&SparseVec::basis(2 * (terms.len() as u64)))), canon);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_stage_recovers_the_secret_inside_its_saturation(
        l in nonzero_lattice(3),
        scale in 1i64..4,
        seed in any::<u64>(),
    ) {
        let secret = l.scaled(&BigInt::from(scale));
        let h1 = secret.saturation();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = finite_stage(&secret, &h1, &FiniteStageOptions::default(), &mut rng).unwrap();
        prop_assert!(h1.contains_lattice(&out.lattice));
        prop_assert_eq!(out.lattice, secret);
    }

    #[test]
    fn sieve_stages_respect_windows_and_lengths(seed in any::<u64>(), stage in 1u64..=3) {
        let l = Lattice::from_columns(1, &[vec![8]]);
        let cfg = SieveConfig::build(&l, 2, Some(2)).unwrap();
        let j = stage.min(cfg.km());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sieve = Sieve::new(&l, &cfg, &mut rng);
        let pv = sieve.sieve(j, 1, &[0]).unwrap();
        prop_assert!(pv.window_violations().is_empty(), "{:?}", pv.window_violations());
        for len in pv.spot_lens() {
            prop_assert!(cfg.min_len() <= len && len < cfg.max_len(), "length {} at stage {}", len, j);
        }
        prop_assert_eq!(sieve.stats.audit_violations, 0);
    }
}

#[test]
fn dual_samples_are_uniform_over_the_component_group() {
    // 2ℤ × 3ℤ has six dual classes; chi-squared with five degrees of freedom.
    let l = Lattice::from_columns(2, &[vec![2, 0], vec![0, 3]]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 6000;
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..n {
        *counts.entry(dual_sample_uniform(&l, &BigInt::from(64), &mut rng).to_text()).or_default() += 1;
    }
    assert_eq!(counts.len(), 6, "{counts:?}");
    let e = n as f64 / 6.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
    assert!(chi2 < 20.52, "chi2 = {chi2}");
}
