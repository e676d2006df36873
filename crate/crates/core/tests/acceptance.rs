//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p globalcube --test acceptance -- --nocapture` to see
//! the per-criterion lines; every tolerance is pinned in the assertions.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use globalcube::cube::{fkg_check, random_monotone, BiasedMeasure, CubeFamily};
use globalcube::embed::{
    coupling_campaign, embed_perm, embed_perm_family_to_cube, hall_bound, hall_mu_exact,
};
use globalcube::families::{
    agreement, ak_family, ak_measure_exact, counterexample_family,
    is_t_intersecting_cube, max_t_intersecting, max_t_intersecting_cube_exact, stability_family,
    symmetric_group, umvirate, SearchMode, UmvirateSpec,
};
use globalcube::fourier::{
    character, coupling_expectation, inverse_transform, one_sided_noise, transform,
    RealFunctionOnCube,
};
use globalcube::globalness::{certify_globalness, extract_global_restriction};
use globalcube::bump::{audit_bootstrap, audit_bootstrap_grid, audit_claim52, r_of_monotonicity};

fn criterion(number: u32, name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    match outcome {
        Ok(()) => println!("ACCEPTANCE {number} {name}: PASS"),
        Err(e) => {
            println!("ACCEPTANCE {number} {name}: FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn criterion_01_fourier_correctness() {
    criterion(1, "fourier-correctness", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let m = BiasedMeasure::new(0.25).unwrap();
        for &n in &[6usize, 10, 14] {
            for _ in 0..100 {
                let f = RealFunctionOnCube::random(n, &mut rng).unwrap();
                let c = transform(&f, &m).unwrap();
                let back = inverse_transform(&c).unwrap();
                assert!(f.max_abs_diff(&back).unwrap() <= 1e-10, "round trip at n={n}");
                assert!(
                    (c.total_weight() - f.second_moment(&m)).abs() <= 1e-10,
                    "Parseval at n={n}"
                );
            }
        }
        // exhaustive orthonormality at n = 6
        let n = 6usize;
        let p = 0.25f64;
        let mut weights = vec![0.0f64; 1 << n];
        for x in 0..1u32 << n {
            let ones = x.count_ones() as i32;
            weights[x as usize] = p.powi(ones) * (1.0 - p).powi(n as i32 - ones);
        }
        for s in 0..1u32 << n {
            for t in s..1u32 << n {
                let mut inner = 0.0;
                for x in 0..1u32 << n {
                    inner += character(p, s, x) * character(p, t, x) * weights[x as usize];
                }
                let expect = if s == t { 1.0 } else { 0.0 };
                assert!(
                    (inner - expect).abs() <= 1e-12,
                    "orthonormality broke at S={s:#b}, T={t:#b}: {inner}"
                );
            }
        }
        assert!(start.elapsed().as_secs() < 30, "criterion 1 runtime budget");
    });
}

#[test]
fn criterion_02_one_sided_noise() {
    criterion(2, "one-sided-noise", || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        for &(q, p) in &[(0.1, 0.3), (0.25, 0.5)] {
            for trial in 0..50 {
                let n = 4 + (trial % 5); // n ranges over 4..=8
                let f = RealFunctionOnCube::random(n, &mut rng).unwrap();
                let via_fourier = inverse_transform(
                    &one_sided_noise(
                        &transform(&f, &BiasedMeasure::new(q).unwrap()).unwrap(),
                        p,
                    )
                    .unwrap(),
                )
                .unwrap();
                let via_coupling = coupling_expectation(&f, q, p).unwrap();
                let err = via_fourier.max_abs_diff(&via_coupling).unwrap();
                assert!(err <= 1e-10, "q={q} p={p} n={n}: {err}");
            }
        }
    });
}

#[test]
fn criterion_03_fkg_suite() {
    criterion(3, "fkg-suite", || {
        // exhaustive at n = 4 over every monotone family
        let n = 4;
        let monotone: Vec<CubeFamily> = (0u32..1 << (1 << n))
            .filter_map(|subset| {
                let members: Vec<u32> =
                    (0..1u32 << n).filter(|&x| subset >> x & 1 == 1).collect();
                let fam = CubeFamily::new(n, members).unwrap();
                fam.is_monotone().then_some(fam)
            })
            .collect();
        assert_eq!(monotone.len(), 168, "Dedekind count of monotone families on 4 points");
        let m = BiasedMeasure::new(0.3).unwrap();
        for f in &monotone {
            for g in &monotone {
                let out = fkg_check(f, g, &m).unwrap();
                assert!(out.holds, "FKG violation beyond 1e-12: {:?} {:?}", f, g);
            }
        }
        // 1000 random monotone pairs at n = 12
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let m12 = BiasedMeasure::new(0.2).unwrap();
        for i in 0..1000 {
            let f = random_monotone(12, 1 + i % 7, &mut rng).unwrap();
            let g = random_monotone(12, 1 + (i / 7) % 7, &mut rng).unwrap();
            let out = fkg_check(&f, &g, &m12).unwrap();
            assert!(out.holds, "random pair {i} violated FKG");
        }
    });
}

#[test]
fn criterion_04_biased_ak_desk_scale() {
    criterion(4, "biased-ak", || {
        // exhaustive rational max over 1-intersecting families on n = 3
        let third = ratio(1, 3);
        let (max_measure, witness) = max_t_intersecting_cube_exact(3, 1, &third).unwrap();
        assert_eq!(max_measure, third, "max mu_1/3 over 1-intersecting on n=3");
        assert!(is_t_intersecting_cube(&witness, 1));
        // F_{1,1} measure exactly 7/27
        assert_eq!(ak_measure_exact(1, 1, &third).unwrap(), ratio(7, 27));
        let f11 = ak_family(1, 1, 3).unwrap();
        assert_eq!(f11.measure_exact(&third).unwrap(), ratio(7, 27));
        // sweep t <= 10, r <= 5: mu_{1/3}(F_{t,r}) <= (17/20)^t, exactly
        for t in 1..=10usize {
            let mut bound = BigRational::from_integer(1.into());
            for _ in 0..t {
                bound *= ratio(17, 20);
            }
            for r in 0..=5usize {
                let mu = ak_measure_exact(t, r, &third).unwrap();
                assert!(mu <= bound, "t={t} r={r}: mu={mu} > 0.85^t");
            }
        }
    });
}

#[test]
fn criterion_05_deza_frankl_small_scale() {
    criterion(5, "deza-frankl-small", || {
        let start = Instant::now();
        let expects = [(2usize, 1u64), (3, 2), (4, 6), (5, 24)];
        for &(n, expect) in &expects {
            let r = max_t_intersecting(n, 1, SearchMode::Single).unwrap();
            assert_eq!(r.max_size, expect, "max intersecting size in S_{n}");
            if n == 3 || n == 4 {
                assert!(r.all_umvirates, "witnesses at n={n} include a non-dictatorship");
            }
        }
        assert!(start.elapsed().as_secs() < 60, "criterion 5 runtime budget");
    });
}

#[test]
fn criterion_06_counterexample_reproduction() {
    criterion(6, "counterexample", || {
        let report = counterexample_family(8, 4).unwrap();
        assert_eq!(report.size, 26);
        assert_eq!(report.formula, 26);
        assert!(report.size > report.umvirate_size);
        assert_eq!(report.umvirate_size, 24);
        assert!(report.t_intersecting, "family must be 4-intersecting");
    });
}

#[test]
fn criterion_07_stability_example() {
    criterion(7, "stability", || {
        let ex = stability_family(10, 1).unwrap();
        let target = 1.0 - (-1.0f64).exp();
        assert!(
            (ex.ratio - target).abs() < 0.05,
            "|B|/(n-t)! = {} vs 1-1/e = {target}",
            ex.ratio
        );
        assert!(ex.cross_checked, "(A,B) must verify cross 1-intersecting");
    });
}

#[test]
fn criterion_08_coupling_and_hall_bound() {
    criterion(8, "coupling-hall", || {
        // exact mu_{1/2}(U) at n = 2, against the independent up-closure route
        let exact = hall_mu_exact(2, &ratio(1, 2)).unwrap();
        assert_eq!(exact, ratio(7, 16));
        let embedded = embed_perm_family_to_cube(symmetric_group(2).unwrap().members(), 2).unwrap();
        let up = embedded.up_closure();
        assert_eq!(up.len(), 7, "up-closure of E(S_2) holds 7 points");
        assert_eq!(
            up.measure_exact(&ratio(1, 2)).unwrap(),
            ratio(7, 16),
            "up-closure measure route"
        );
        // Monte Carlo at n in {40, 60, 80} with p = 10 ln n / n
        for &n in &[40usize, 60, 80] {
            let p = (10.0 * (n as f64).ln() / n as f64).min(1.0);
            let hb = hall_bound(n, p, 10_000, 8080 + n as u64).unwrap();
            assert!(
                hb.wilson_low > 0.5,
                "n={n}: Wilson 99% lower bound {} not above 1/2",
                hb.wilson_low
            );
            assert!(
                hb.union_bound_residual <= 0.5,
                "n={n}: union bound sum {}",
                hb.union_bound_residual
            );
        }
        // sigma-marginal chi-square at n = 3, alpha = 0.001 (chi2_5 = 20.515)
        let report = coupling_campaign(3, 0.5, 100_000, 2026).unwrap();
        let stat = report.chi_square.unwrap();
        assert!(report.exact_uniform_sampler);
        assert!(stat < 20.515, "chi-square statistic {stat} significant at 0.001");
    });
}

#[test]
fn criterion_09_globalness_machinery() {
    criterion(9, "globalness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let mut checked = 0;
        while checked < 200 {
            let n = 4 + (checked % 7); // 4..=10
            let p = [0.05, 0.1, 0.2, 0.3][checked % 4];
            let g = [1.5, 2.0, 4.0, 8.0][(checked / 4) % 4];
            let f = random_monotone(n, 1 + checked % 5, &mut rng).unwrap();
            if f.is_empty() {
                continue;
            }
            let m = BiasedMeasure::new(p).unwrap();
            let out = extract_global_restriction(&f, g, &m).unwrap();
            let s = out.restriction.size();
            // Eq-style lower bound, compared exactly as the maximizer did
            assert!(
                out.restricted_measure / g.powi(s as i32) >= out.base_measure,
                "extraction lower bound failed at n={n} p={p} g={g}"
            );
            if s < n {
                let cert = certify_globalness(&out.family, &m).unwrap();
                assert!(
                    cert.g_min <= g * (1.0 + 1e-9),
                    "re-certification failed: g_min={} > g={g}",
                    cert.g_min
                );
            }
            checked += 1;
        }
    });
}

#[test]
fn criterion_10_proof_constant_audits() {
    criterion(10, "constant-audits", || {
        let start = Instant::now();
        let mut grid = Vec::new();
        for t in 1..=20usize {
            let mut n = 500 * t;
            while n <= 10_000 {
                grid.push((n, t));
                n += 500;
            }
        }
        assert_eq!(grid.len(), 210);
        let boots = audit_bootstrap_grid(&grid).unwrap();
        for (&(n, t), boot) in grid.iter().zip(&boots) {
            let c52 = audit_claim52(n, t, 50.0, 2.0 / 3.0).unwrap();
            assert!(c52.all_hold(), "claim52 failed at n={n} t={t}: {:?}", c52.checks);
            assert!(boot.all_hold(), "bootstrap failed at n={n} t={t}: {:?}", boot.checks);
            // spot-check the two named inequalities
            let b15 = boot.check("retention-power").unwrap();
            assert!(b15.lhs >= 0.94);
            let b4 = boot.check("boot4-factor").unwrap();
            assert!(b4.lhs < 2.0 / 3.0);
            if n > 500 * t {
                let (rel_n, rel_both) = r_of_monotonicity(n, t, 500).unwrap();
                assert!(rel_n && rel_both, "r(n,t) recursion facts at n={n} t={t}");
            }
        }
        // the single-point entry agrees with its grid row
        let single = audit_bootstrap(1000, 2).unwrap();
        let row = &boots[grid.iter().position(|&p| p == (1000, 2)).unwrap()];
        assert_eq!(single.checks.len(), row.checks.len());
        for (a, b) in single.checks.iter().zip(&row.checks) {
            assert_eq!(a.holds, b.holds);
        }
        assert!(
            start.elapsed().as_secs() < 10,
            "criterion 10 runtime budget: {:?}",
            start.elapsed()
        );
    });
}

#[test]
fn criterion_11_embedding_fidelity() {
    criterion(11, "embedding-fidelity", || {
        // |E(sigma) and E(tau)| = agreement(sigma, tau), exhaustively on S_4
        let s4 = symmetric_group(4).unwrap();
        for a in s4.members() {
            for b in s4.members() {
                let ea = embed_perm(a).unwrap();
                let eb = embed_perm(b).unwrap();
                assert_eq!(
                    ea.and_weight(&eb).unwrap() as usize,
                    agreement(a, b).unwrap(),
                    "agreement mismatch for {a} vs {b}"
                );
            }
        }
        // t-intersection preserved through the permutation embedding
        let spec = UmvirateSpec::new(vec![(1, 2), (3, 3)]).unwrap();
        let fam = umvirate(&spec, 4).unwrap();
        assert!(fam.is_t_intersecting(2));
        let cube = embed_perm_family_to_cube(fam.members(), 4).unwrap();
        assert!(is_t_intersecting_cube(&cube, 2));
        let counter = counterexample_family(8, 4).unwrap();
        assert!(counter.family.is_t_intersecting(4));
        // n = 8 embeds into 64 coordinates, beyond the flat-cube cap, so
        // check pairwise on the matrices directly
        for a in counter.family.members() {
            for b in counter.family.members() {
                let w = embed_perm(a)
                    .unwrap()
                    .and_weight(&embed_perm(b).unwrap())
                    .unwrap();
                assert!(w >= 4);
            }
        }
        // word embedding: words fixing the first two letters stay
        // 2-intersecting as a set family, and a scattered pair does not
        let words: Vec<u32> = {
            use globalcube::embed::{embed_word, WordPoint};
            let mut masks = Vec::new();
            for c in 1..=3u8 {
                for d in 1..=3u8 {
                    let w = WordPoint::new(vec![1, 2, c, d]).unwrap();
                    let m = embed_word(&w).unwrap().to_cube_point().unwrap().bits();
                    masks.push(m);
                }
            }
            masks
        };
        let word_family = CubeFamily::new(16, words).unwrap();
        assert!(is_t_intersecting_cube(&word_family, 2));
        {
            use globalcube::embed::{embed_word, WordPoint};
            let w1 = embed_word(&WordPoint::new(vec![1, 1, 1, 1]).unwrap())
                .unwrap()
                .to_cube_point()
                .unwrap()
                .bits();
            let w2 = embed_word(&WordPoint::new(vec![2, 2, 2, 2]).unwrap())
                .unwrap()
                .to_cube_point()
                .unwrap()
                .bits();
            let disjoint = CubeFamily::new(16, vec![w1, w2]).unwrap();
            assert!(!is_t_intersecting_cube(&disjoint, 1));
        }
    });
}

/// The derangement identity behind the audits, cross-checked against f64
/// arithmetic where that is exact (small m) and against the counting
/// recurrence itself at tiny m by brute force.
#[test]
fn derangement_floor_oracle() {
    use globalcube::families::{floor_factorial_over_e, for_each_permutation};
    for m in 0..=7usize {
        let mut brute = 0u64;
        for_each_permutation(m, |img| {
            if img.iter().enumerate().all(|(i, &v)| v as usize != i + 1) {
                brute += 1;
            }
        })
        .unwrap();
        assert_eq!(
            globalcube::families::derangement_count(m).to_u64().unwrap(),
            brute,
            "m={m}"
        );
        let fact: f64 = (1..=m as u64).product::<u64>() as f64;
        let expected_floor = (fact / std::f64::consts::E).floor() as u64;
        assert_eq!(
            floor_factorial_over_e(m).to_u64().unwrap(),
            expected_floor,
            "floor identity at m={m}"
        );
    }
}
