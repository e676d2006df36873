//! Property tests for the structural invariants: measure identities,
//! up-closure laws, FKG on random monotone pairs, Parseval, level-weight
//! symmetry, noise-operator route agreement, Hall monotonicity, and the
//! r(n,t) recursion facts.

use globalcube::cube::{fkg_check, BiasedMeasure, CubeFamily, Restriction, MEASURE_TOL};
use globalcube::embed::{embed_perm, hall_membership, BitMatrix};
use globalcube::families::{agreement, Permutation};
use globalcube::fourier::{
    coupling_expectation, inverse_transform, level_weights, one_sided_noise, transform,
    RealFunctionOnCube,
};
use globalcube::globalness::certify_globalness;
use proptest::prelude::*;

fn family_strategy(n: usize) -> impl Strategy<Value = CubeFamily> {
    prop::collection::vec(0u32..(1 << n), 0..=(1 << n))
        .prop_map(move |masks| CubeFamily::new(n, masks).unwrap())
}

fn monotone_family_strategy(n: usize) -> impl Strategy<Value = CubeFamily> {
    prop::collection::vec(0u32..(1 << n), 0..=8)
        .prop_map(move |masks| CubeFamily::new(n, masks).unwrap().up_closure())
}

fn bias_strategy() -> impl Strategy<Value = f64> {
    (0.05f64..0.95).prop_map(|p| p)
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut img: Vec<u8> = (1..=n as u8).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            img.swap(i, j);
        }
        Permutation::new(img).unwrap()
    })
}

proptest! {
    #[test]
    fn measure_additive_and_normalized(f in family_strategy(7), p in bias_strategy()) {
        let m = BiasedMeasure::new(p).unwrap();
        let full = CubeFamily::full(7).unwrap();
        let complement = CubeFamily::new(
            7,
            (0u32..1 << 7).filter(|x| !f.contains(*x)).collect(),
        ).unwrap();
        let total = f.measure(&m) + complement.measure(&m);
        prop_assert!((total - full.measure(&m)).abs() < 1e-10);
        prop_assert!((full.measure(&m) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn restriction_measure_identity(
        f in family_strategy(6),
        coords in 0u32..(1 << 6),
        values_seed in 0u32..(1 << 6),
        p in bias_strategy(),
    ) {
        prop_assume!(coords != (1 << 6) - 1); // keep at least one free coordinate
        let values = values_seed & coords;
        let r = Restriction::new(coords, values).unwrap();
        let m = BiasedMeasure::new(p).unwrap();
        // mu^n(F cap {agrees on S}) = mu(x on S) * mu^(n-|S|)(restrict(F))
        let agreeing = CubeFamily::new(
            6,
            f.members().iter().copied().filter(|&x| x & coords == values).collect(),
        ).unwrap();
        let lhs = agreeing.measure(&m);
        let ones = values.count_ones() as i32;
        let fixed = coords.count_ones() as i32;
        let point_mass = p.powi(ones) * (1.0 - p).powi(fixed - ones);
        let rhs = point_mass * f.restrict(&r).unwrap().measure(&m);
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn up_closure_laws(f in family_strategy(7)) {
        let up = f.up_closure();
        prop_assert!(up.is_monotone());
        for &x in f.members() {
            prop_assert!(up.contains(x));
        }
        prop_assert_eq!(up.up_closure(), up.clone());
        // minimality: every closure point dominates some original member, so
        // any monotone superset of f must contain all of up(f)
        for &y in up.members() {
            prop_assert!(f.members().iter().any(|&x| x & !y == 0));
        }
    }

    #[test]
    fn monotone_measure_increases_with_bias(
        f in monotone_family_strategy(7),
        p in 0.02f64..(1.0 / 3.0),
    ) {
        let low = BiasedMeasure::new(p).unwrap();
        let third = BiasedMeasure::new(1.0 / 3.0).unwrap();
        prop_assert!(f.measure(&low) <= f.measure(&third) + 1e-12);
    }

    #[test]
    fn fkg_holds_on_random_monotone_pairs(
        f in monotone_family_strategy(7),
        g in monotone_family_strategy(7),
        p in bias_strategy(),
    ) {
        let m = BiasedMeasure::new(p).unwrap();
        let out = fkg_check(&f, &g, &m).unwrap();
        prop_assert!(out.holds, "lhs={} rhs={}", out.lhs, out.rhs);
    }

    #[test]
    fn parseval_and_roundtrip(values in prop::collection::vec(-1.0f64..1.0, 64), p in bias_strategy()) {
        let f = RealFunctionOnCube::new(6, values).unwrap();
        let m = BiasedMeasure::new(p).unwrap();
        let c = transform(&f, &m).unwrap();
        prop_assert!((c.total_weight() - f.second_moment(&m)).abs() < 1e-10);
        let back = inverse_transform(&c).unwrap();
        prop_assert!(f.max_abs_diff(&back).unwrap() < 1e-10);
    }

    #[test]
    fn level_weights_permutation_invariant(
        values in prop::collection::vec(-1.0f64..1.0, 32),
        perm in perm_strategy(5),
        p in bias_strategy(),
    ) {
        let n = 5;
        let f = RealFunctionOnCube::new(n, values).unwrap();
        // relabel coordinates of f by the permutation
        let mut permuted = vec![0.0; 1 << n];
        for mask in 0..1u32 << n {
            let mut to = 0u32;
            for i in 1..=n {
                if mask >> (i - 1) & 1 == 1 {
                    to |= 1 << (perm.apply(i) - 1);
                }
            }
            permuted[to as usize] = f.value_at(mask);
        }
        let g = RealFunctionOnCube::new(n, permuted).unwrap();
        let m = BiasedMeasure::new(p).unwrap();
        let wf = level_weights(&transform(&f, &m).unwrap());
        let wg = level_weights(&transform(&g, &m).unwrap());
        for d in 0..=n {
            prop_assert!((wf[d] - wg[d]).abs() < 1e-10, "level {d}");
        }
    }

    #[test]
    fn noise_routes_agree(
        values in prop::collection::vec(-1.0f64..1.0, 32),
        q in 0.05f64..0.45,
        gap in 0.05f64..0.5,
    ) {
        let p = (q + gap).min(0.95);
        let f = RealFunctionOnCube::new(5, values).unwrap();
        let via_fourier = inverse_transform(
            &one_sided_noise(&transform(&f, &BiasedMeasure::new(q).unwrap()).unwrap(), p).unwrap(),
        ).unwrap();
        let via_coupling = coupling_expectation(&f, q, p).unwrap();
        prop_assert!(via_fourier.max_abs_diff(&via_coupling).unwrap() < 1e-10);
    }

    #[test]
    fn globalness_certificate_is_sound(
        f in monotone_family_strategy(6),
        p in bias_strategy(),
    ) {
        prop_assume!(!f.is_empty());
        let m = BiasedMeasure::new(p).unwrap();
        let cert = certify_globalness(&f, &m).unwrap();
        // every ratio is bounded by g_min^|S|
        for (s, &r) in cert.ratios.iter().enumerate().skip(1) {
            prop_assert!(
                r <= cert.g_min.powi(s as i32) * (1.0 + 1e-9),
                "size {s}: ratio {r} vs bound {}",
                cert.g_min.powi(s as i32)
            );
        }
        // the witness attains the binding ratio
        if !cert.witness.is_empty() {
            let s = cert.witness.size();
            let witness_mu = f.restrict(&cert.witness).unwrap().measure(&m);
            let attained = (witness_mu / cert.mu).powf(1.0 / s as f64);
            prop_assert!((attained - cert.g_min).abs() < 1e-9);
        }
    }

    #[test]
    fn hall_membership_monotone(rows in prop::collection::vec(0u128..(1 << 5), 5), flip in 0usize..25) {
        let x = BitMatrix::new(5, rows.clone()).unwrap();
        let (r, c) = (flip / 5, flip % 5);
        let mut flipped = rows;
        flipped[r] |= 1 << c;
        let y = BitMatrix::new(5, flipped).unwrap();
        if hall_membership(&x) {
            prop_assert!(hall_membership(&y), "flipping 0 to 1 lost the matching");
        }
    }

    #[test]
    fn embedding_preserves_agreement_random(a in perm_strategy(6), b in perm_strategy(6)) {
        let ea = embed_perm(&a).unwrap();
        let eb = embed_perm(&b).unwrap();
        prop_assert_eq!(
            ea.and_weight(&eb).unwrap() as usize,
            agreement(&a, &b).unwrap()
        );
    }

    #[test]
    fn measure_tolerance_is_respected(f in family_strategy(5), p in bias_strategy()) {
        // measure never leaves [0 - tol, 1 + tol]
        let m = BiasedMeasure::new(p).unwrap();
        let mu = f.measure(&m);
        prop_assert!((-MEASURE_TOL..=1.0 + MEASURE_TOL).contains(&mu));
    }
}
