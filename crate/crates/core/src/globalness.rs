//! Globalness certification, g-global restriction extraction, the level-d
//! audit, and the sharp-threshold / cross-intersection probes.
//!
//! A family F is g-global when no restriction of |S| coordinates multiplies
//! its relative density by more than g^|S|. Certification scans every
//! restriction pattern: all 3^n free/0/1 patterns up to n = 14, computed in
//! one O(3^n) pass, and the 2^n set-to-1 patterns beyond that, which is
//! lossless for monotone families because fixing a coordinate of a monotone
//! family to 0 never increases its relative density.
//!
//! The constants c1, c2, c3 of the analytic bounds are never pinned by the
//! audits; the level-d rows expose the implied constant instead of a verdict,
//! and the probes report both sides for user-supplied exploratory constants.

use serde::{Deserialize, Serialize};

use crate::cube::{pow_tables, BiasedMeasure, CubeFamily, Restriction};
use crate::error::{Error, Result};
use crate::families::is_cross_t_intersecting_cube;
use crate::fourier::{level_weights, transform, RealFunctionOnCube};

/// Full 3^n restriction enumeration is used up to this dimension; beyond it
/// the monotone set-to-1 shortcut is required.
pub const FULL_PATTERN_CAP: usize = 14;

/// Relative tolerance for score ties when selecting witnesses.
const TIE_REL_TOL: f64 = 1e-12;

/// Certificate that a family is exactly g_min-global.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalnessCertificate {
    /// Smallest g for which the family is g-global (>= 1).
    pub g_min: f64,
    /// Restriction attaining the binding ratio; empty when g_min = 1.
    pub witness: Restriction,
    /// Worst raw density ratio mu(F_{S->x}) / mu(F) per restriction size |S|.
    pub ratios: Vec<f64>,
    /// mu(F) under the measure the certificate was computed for.
    pub mu: f64,
}

/// One row of the level-d audit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LevelDAuditRow {
    pub d: usize,
    /// ||f^{=d}||^2.
    pub lhs: f64,
    /// mu^2 g^{2d} ln^d(1/mu) / d^d: the bound shape without its constant.
    pub frame: f64,
    /// (lhs/frame)^{1/d}, the constant the bound would need at this d.
    pub implied_c2: f64,
}

/// Output of [`extract_global_restriction`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Extraction {
    pub restriction: Restriction,
    pub family: CubeFamily,
    /// mu of the restricted family on its residual cube.
    pub restricted_measure: f64,
    /// mu of the input family.
    pub base_measure: f64,
}

/// Output of [`sharp_threshold_probe`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpProbe {
    pub mu_p: f64,
    pub mu_third: f64,
    /// 0.99^t, the sharp-threshold conclusion to compare mu_third against.
    pub lemma_rhs: f64,
    pub warning: Option<String>,
}

/// Output of [`global_cross_probe`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossProbe {
    pub mu_a: f64,
    pub mu_b: f64,
    pub min_measure: f64,
    /// exp(-c3 t / (p g^2)) for the supplied exploratory c3.
    pub rhs: f64,
}

/// Dense table of mu(F_{S->x}) over every free/0/1 pattern. Patterns are
/// encoded base 3, digit for coordinate i at weight 3^(i-1), with digit
/// 0 = free, 1 = fixed to 0, 2 = fixed to 1.
fn restriction_profile(f: &CubeFamily, p: f64) -> Vec<f64> {
    let n = f.dim();
    let mut table: Vec<f64> = vec![0.0; 1 << n];
    for &m in f.members() {
        table[m as usize] = 1.0;
    }
    // peel coordinates from the top; each pass turns the leading 2-valued
    // axis into a 3-valued pattern axis
    let mut arr = table;
    for coord in (0..n).rev() {
        let half = 1usize << coord;
        let blocks = arr.len() / (2 * half);
        let mut next = vec![0.0; blocks * 3 * half];
        for b in 0..blocks {
            let lo = b * 2 * half;
            let out = b * 3 * half;
            for idx in 0..half {
                let v0 = arr[lo + idx];
                let v1 = arr[lo + half + idx];
                next[out + idx] = (1.0 - p) * v0 + p * v1; // coordinate left free
                next[out + half + idx] = v0; // fixed to 0
                next[out + 2 * half + idx] = v1; // fixed to 1
            }
        }
        arr = next;
    }
    arr
}

/// Decode a base-3 pattern id into (S, x) masks and |S|.
fn decode_pattern(mut id: usize, n: usize) -> (u32, u32, usize) {
    let mut coords = 0u32;
    let mut values = 0u32;
    let mut size = 0usize;
    for i in 0..n {
        match id % 3 {
            0 => {}
            1 => {
                coords |= 1 << i;
                size += 1;
            }
            2 => {
                coords |= 1 << i;
                values |= 1 << i;
                size += 1;
            }
            _ => unreachable!(),
        }
        id /= 3;
    }
    (coords, values, size)
}

/// Tie-break key: smaller |S| first, then lexicographic S as a sorted
/// coordinate list, then lexicographic x along those coordinates.
fn tie_key(coords: u32, values: u32) -> (usize, Vec<u8>, Vec<u8>) {
    let mut cs = Vec::new();
    let mut vs = Vec::new();
    let mut c = coords;
    while c != 0 {
        let i = c.trailing_zeros();
        cs.push(i as u8 + 1);
        vs.push((values >> i & 1) as u8);
        c &= c - 1;
    }
    (cs.len(), cs, vs)
}

/// Superset-sum profile for the monotone shortcut: mu(F_{S->1}) for all S.
fn set_to_one_profile(f: &CubeFamily, p: f64) -> Vec<f64> {
    let n = f.dim();
    let (pp, qq) = pow_tables(p, n);
    let mut arr: Vec<f64> = vec![0.0; 1 << n];
    for &m in f.members() {
        let ones = m.count_ones() as usize;
        arr[m as usize] = pp[ones] * qq[n - ones];
    }
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..arr.len() {
            if mask & bit == 0 {
                arr[mask] += arr[mask | bit];
            }
        }
    }
    // arr[S] now holds sum over members m >= S of their full-cube weight;
    // divide out the p^|S| the fixed coordinates no longer contribute
    for (mask, v) in arr.iter_mut().enumerate() {
        *v /= pp[(mask as u32).count_ones() as usize];
    }
    arr
}

enum PatternScan {
    Full(Vec<f64>),
    SetToOne(Vec<f64>),
}

impl PatternScan {
    fn build(f: &CubeFamily, p: f64, context: &'static str) -> Result<PatternScan> {
        if f.dim() <= FULL_PATTERN_CAP {
            Ok(PatternScan::Full(restriction_profile(f, p)))
        } else if f.is_monotone() {
            Ok(PatternScan::SetToOne(set_to_one_profile(f, p)))
        } else {
            Err(Error::precondition(format!(
                "{context}: n > {FULL_PATTERN_CAP} needs a monotone family (set-to-1 shortcut)"
            )))
        }
    }

    /// Visit (coords, values, size, mu of restriction) for every pattern,
    /// the empty pattern included.
    fn for_each(&self, n: usize, mut visit: impl FnMut(u32, u32, usize, f64)) {
        match self {
            PatternScan::Full(arr) => {
                for (id, &v) in arr.iter().enumerate() {
                    let (coords, values, size) = decode_pattern(id, n);
                    visit(coords, values, size, v);
                }
            }
            PatternScan::SetToOne(arr) => {
                for (mask, &v) in arr.iter().enumerate() {
                    let coords = mask as u32;
                    visit(coords, coords, coords.count_ones() as usize, v);
                }
            }
        }
    }
}

/// Exhaustively certify the smallest g for which F is g-global.
pub fn certify_globalness(f: &CubeFamily, m: &BiasedMeasure) -> Result<GlobalnessCertificate> {
    if f.is_empty() {
        return Err(Error::EmptyFamily("globalness is undefined: the"));
    }
    let n = f.dim();
    let mu = f.measure(m);
    let scan = PatternScan::build(f, m.p(), "certify_globalness")?;

    let mut ratios = vec![0.0_f64; n + 1];
    scan.for_each(n, |_, _, size, v| {
        let r = v / mu;
        if r > ratios[size] {
            ratios[size] = r;
        }
    });
    ratios[0] = 1.0;

    let mut best_score = 1.0_f64; // the empty restriction scores exactly 1
    for (s, &r) in ratios.iter().enumerate().skip(1) {
        let score = r.powf(1.0 / s as f64);
        if score > best_score {
            best_score = score;
        }
    }
    if best_score <= 1.0 + TIE_REL_TOL {
        return Ok(GlobalnessCertificate {
            g_min: 1.0,
            witness: Restriction::empty(),
            ratios,
            mu,
        });
    }
    // second pass: smallest-tie-key pattern whose score ties the maximum
    let threshold = best_score * (1.0 - TIE_REL_TOL);
    let mut witness: Option<(u32, u32)> = None;
    let mut witness_key: Option<(usize, Vec<u8>, Vec<u8>)> = None;
    scan.for_each(n, |coords, values, size, v| {
        if size == 0 {
            return;
        }
        let score = (v / mu).powf(1.0 / size as f64);
        if score >= threshold {
            let key = tie_key(coords, values);
            if witness_key.as_ref().is_none_or(|k| key < *k) {
                witness_key = Some(key);
                witness = Some((coords, values));
            }
        }
    });
    let (coords, values) = witness.expect("a pattern attains the maximum");
    Ok(GlobalnessCertificate {
        g_min: best_score,
        witness: Restriction::new(coords, values)?,
        ratios,
        mu,
    })
}

/// Pick (S, x) maximizing mu(F_{S->x}) / g^|S| (ties broken by smallest |S|,
/// then lexicographic S, then lexicographic x) and restrict. The result is
/// g-global and satisfies mu(F') >= g^|S| mu(F).
#[allow(clippy::neg_cmp_op_on_partial_ord)] // a NaN g must fail validation
pub fn extract_global_restriction(
    f: &CubeFamily,
    g: f64,
    m: &BiasedMeasure,
) -> Result<Extraction> {
    if f.is_empty() {
        return Err(Error::EmptyFamily("extraction input"));
    }
    if !(g > 1.0) {
        return Err(Error::precondition(format!(
            "extraction needs g > 1, got {g}"
        )));
    }
    let n = f.dim();
    let base_measure = f.measure(m);
    let scan = PatternScan::build(f, m.p(), "extract_global_restriction")?;
    let mut g_pow = vec![1.0_f64; n + 1];
    for k in 1..=n {
        g_pow[k] = g_pow[k - 1] * g;
    }

    let mut best = f64::NEG_INFINITY;
    scan.for_each(n, |_, _, size, v| {
        let score = v / g_pow[size];
        if score > best {
            best = score;
        }
    });
    let threshold = best * (1.0 - TIE_REL_TOL);
    let mut chosen: Option<(u32, u32)> = None;
    let mut chosen_key: Option<(usize, Vec<u8>, Vec<u8>)> = None;
    scan.for_each(n, |coords, values, size, v| {
        if v / g_pow[size] >= threshold {
            let key = tie_key(coords, values);
            if chosen_key.as_ref().is_none_or(|k| key < *k) {
                chosen_key = Some(key);
                chosen = Some((coords, values));
            }
        }
    });
    let (coords, values) = chosen.expect("the empty pattern always scores");
    let restriction = Restriction::new(coords, values)?;
    let family = f.restrict(&restriction)?;
    let restricted_measure = if restriction.size() == n {
        // everything fixed: the residual cube is a single point
        if family.len() == 1 {
            1.0
        } else {
            0.0
        }
    } else {
        family.measure(m)
    };
    Ok(Extraction {
        restriction,
        family,
        restricted_measure,
        base_measure,
    })
}

/// Instantiate the level-d bound shape for d = 1..=d_max and report the
/// constant each level would require. No verdict: the constant is not pinned.
pub fn level_d_audit(
    f: &CubeFamily,
    m: &BiasedMeasure,
    g: f64,
    d_max: usize,
) -> Result<Vec<LevelDAuditRow>> {
    let n = f.dim();
    if f.is_empty() || f.len() == 1usize << n {
        return Err(Error::precondition(
            "level-d audit needs 0 < mu(F) < 1; log(1/mu) is degenerate",
        ));
    }
    if d_max == 0 || d_max > n {
        return Err(Error::precondition(format!(
            "d_max must lie in 1..={n}, got {d_max}"
        )));
    }
    let mu = f.measure(m);
    let log_inv = (1.0 / mu).ln();
    let coeffs = transform(&RealFunctionOnCube::indicator(f), m)?;
    let weights = level_weights(&coeffs);
    let mut rows = Vec::with_capacity(d_max);
    for (d, &lhs) in weights.iter().enumerate().take(d_max + 1).skip(1) {
        let frame = mu * mu * g.powi(2 * d as i32) * log_inv.powi(d as i32)
            / (d as f64).powi(d as i32);
        let implied_c2 = if lhs == 0.0 { 0.0 } else { (lhs / frame).powf(1.0 / d as f64) };
        rows.push(LevelDAuditRow {
            d,
            lhs,
            frame,
            implied_c2,
        });
    }
    Ok(rows)
}

/// Report mu_p, mu_{1/3} and the 0.99^t threshold for a monotone family.
/// Warns instead of failing when p > 1/3, since the hypothesis region of the
/// sharp-threshold lemma is not pinned.
pub fn sharp_threshold_probe(f: &CubeFamily, p: f64, t: usize) -> Result<SharpProbe> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone { which: "F" });
    }
    let mp = BiasedMeasure::new(p)?;
    let third = BiasedMeasure::new(1.0 / 3.0)?;
    let warning = (p > 1.0 / 3.0).then(|| {
        format!("p = {p} exceeds 1/3; the probe is meant for p <= 1/3")
    });
    Ok(SharpProbe {
        mu_p: f.measure(&mp),
        mu_third: f.measure(&third),
        lemma_rhs: 0.99_f64.powi(t as i32),
        warning,
    })
}

/// Check the hypotheses (monotone, certified g-global, cross t-intersecting)
/// and report min(mu_p(A), mu_p(B)) against exp(-c3 t / (p g^2)).
pub fn global_cross_probe(
    a: &CubeFamily,
    b: &CubeFamily,
    p: f64,
    g: f64,
    t: usize,
    c3: f64,
) -> Result<CrossProbe> {
    if a.is_empty() {
        return Err(Error::EmptyFamily("A"));
    }
    if b.is_empty() {
        return Err(Error::EmptyFamily("B"));
    }
    let m = BiasedMeasure::new(p)?;
    if !a.is_monotone() {
        return Err(Error::NotMonotone { which: "A" });
    }
    if !b.is_monotone() {
        return Err(Error::NotMonotone { which: "B" });
    }
    for (name, fam) in [("A", a), ("B", b)] {
        let cert = certify_globalness(fam, &m)?;
        if cert.g_min > g * (1.0 + TIE_REL_TOL) {
            return Err(Error::precondition(format!(
                "{name} is not {g}-global: certified g_min = {}",
                cert.g_min
            )));
        }
    }
    if !is_cross_t_intersecting_cube(a, b, t)? {
        return Err(Error::precondition(format!(
            "A and B are not cross {t}-intersecting"
        )));
    }
    let mu_a = a.measure(&m);
    let mu_b = b.measure(&m);
    Ok(CrossProbe {
        mu_a,
        mu_b,
        min_measure: mu_a.min(mu_b),
        rhs: (-c3 * t as f64 / (p * g * g)).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::random_monotone;
    use crate::families::ak_family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_cube_is_one_global() {
        let f = CubeFamily::full(5).unwrap();
        let m = BiasedMeasure::new(0.3).unwrap();
        let cert = certify_globalness(&f, &m).unwrap();
        assert_eq!(cert.g_min, 1.0);
        assert!(cert.witness.is_empty());
    }

    #[test]
    fn dictatorship_globalness_is_inverse_bias() {
        let p = 0.2;
        let f = CubeFamily::dictatorship(6, 1).unwrap();
        let m = BiasedMeasure::new(p).unwrap();
        let cert = certify_globalness(&f, &m).unwrap();
        assert!((cert.g_min - 1.0 / p).abs() < 1e-9);
        assert_eq!(cert.witness.pairs(), vec![(1, true)]);
    }

    #[test]
    fn and_family_globalness() {
        // AND of coordinates 1,2 at p=1/4: both {1}->1 and {1,2}->(1,1) bind;
        // the witness tie-break picks the smaller restriction
        let f = CubeFamily::filter(4, |x| x & 0b11 == 0b11).unwrap();
        let m = BiasedMeasure::new(0.25).unwrap();
        let cert = certify_globalness(&f, &m).unwrap();
        assert!((cert.g_min - 4.0).abs() < 1e-9);
        assert_eq!(cert.witness.pairs(), vec![(1, true)]);
        assert!((cert.ratios[1] - 4.0).abs() < 1e-9);
        assert!((cert.ratios[2] - 16.0).abs() < 1e-9);
    }

    #[test]
    fn empty_family_rejected() {
        let f = CubeFamily::empty(4).unwrap();
        let m = BiasedMeasure::new(0.5).unwrap();
        assert!(certify_globalness(&f, &m).is_err());
    }

    #[test]
    fn extraction_on_and_family() {
        // AND of {1,2} inside n=3 at p=1/4, g=2: fixing both coordinates
        // scores 1/4, beating 1/8 ({1}->1) and 1/16 (empty)
        let f = CubeFamily::filter(3, |x| x & 0b11 == 0b11).unwrap();
        let m = BiasedMeasure::new(0.25).unwrap();
        let out = extract_global_restriction(&f, 2.0, &m).unwrap();
        assert_eq!(out.restriction.pairs(), vec![(1, true), (2, true)]);
        assert_eq!(out.family, CubeFamily::full(1).unwrap());
        assert!((out.restricted_measure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extraction_of_global_family_is_trivial() {
        // the full cube is already g-global for every g > 1
        let f = CubeFamily::full(4).unwrap();
        let m = BiasedMeasure::new(0.3).unwrap();
        let out = extract_global_restriction(&f, 3.0, &m).unwrap();
        assert!(out.restriction.is_empty());
        assert_eq!(out.family, f);
    }

    #[test]
    fn extraction_recertifies_and_satisfies_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = BiasedMeasure::new(0.1).unwrap();
        for _ in 0..30 {
            let f = random_monotone(8, 4, &mut rng).unwrap();
            if f.is_empty() {
                continue;
            }
            let g = 4.0;
            let out = extract_global_restriction(&f, g, &m).unwrap();
            let s = out.restriction.size();
            // the maximizer property, compared the same way it was selected
            assert!(
                out.restricted_measure / g.powi(s as i32) >= out.base_measure,
                "extraction lost the empty-pattern lower bound"
            );
            if s < f.dim() {
                let cert = certify_globalness(&out.family, &m).unwrap();
                assert!(cert.g_min <= g * (1.0 + 1e-9), "not re-certified: {}", cert.g_min);
            }
        }
    }

    #[test]
    fn monotone_extraction_sets_ones_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = BiasedMeasure::new(0.2).unwrap();
        for _ in 0..20 {
            let f = random_monotone(7, 3, &mut rng).unwrap();
            if f.is_empty() {
                continue;
            }
            let out = extract_global_restriction(&f, 3.0, &m).unwrap();
            assert_eq!(
                out.restriction.values(),
                out.restriction.coords(),
                "monotone family extracted a 0-restriction"
            );
        }
    }

    #[test]
    fn level_d_audit_dictator() {
        // p=1/4, g=4, d=1: lhs = 3/16, frame = ln 4, implied c2 ~ 0.135
        let f = CubeFamily::dictatorship(6, 1).unwrap();
        let m = BiasedMeasure::new(0.25).unwrap();
        let rows = level_d_audit(&f, &m, 4.0, 3).unwrap();
        let r1 = rows[0];
        assert_eq!(r1.d, 1);
        assert!((r1.lhs - 3.0 / 16.0).abs() < 1e-12);
        assert!((r1.frame - 4.0_f64.ln()).abs() < 1e-12);
        assert!((r1.implied_c2 - 3.0 / (16.0 * 4.0_f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn level_d_audit_rejects_degenerate_measure() {
        let m = BiasedMeasure::new(0.25).unwrap();
        assert!(level_d_audit(&CubeFamily::full(4).unwrap(), &m, 4.0, 2).is_err());
        assert!(level_d_audit(&CubeFamily::empty(4).unwrap(), &m, 4.0, 2).is_err());
    }

    #[test]
    fn level_d_rows_tie_to_parseval() {
        let f = ak_family(2, 1, 8).unwrap();
        let m = BiasedMeasure::new(0.25).unwrap();
        let rows = level_d_audit(&f, &m, 4.0, 8).unwrap();
        let mu = f.measure(&m);
        let total: f64 = rows.iter().map(|r| r.lhs).sum::<f64>() + mu * mu;
        // for an indicator, E[f^2] = mu
        assert!((total - mu).abs() < 1e-10);
    }

    #[test]
    fn level_d_implied_constant_stable_across_dimension() {
        // the umvirate cube {x >= [t]} has all its Fourier mass on subsets of
        // [t], so the implied constant cannot move with the ambient n
        for t in 2..=4usize {
            let mut seen: Vec<f64> = Vec::new();
            for n in [8usize, 11, 14] {
                let f = ak_family(t, 0, n).unwrap();
                let m = BiasedMeasure::new(0.25).unwrap();
                let rows = level_d_audit(&f, &m, 4.0, t).unwrap();
                let c2 = rows.last().unwrap().implied_c2;
                assert!(c2.is_finite() && c2 > 0.0);
                seen.push(c2);
            }
            let spread = seen.iter().cloned().fold(f64::MIN, f64::max)
                - seen.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread.abs() < 1e-9, "t={t}: {seen:?}");
        }
    }

    #[test]
    fn sharp_probe_full_cube() {
        let f = CubeFamily::full(5).unwrap();
        let probe = sharp_threshold_probe(&f, 0.2, 3).unwrap();
        assert!((probe.mu_p - 1.0).abs() < 1e-12);
        assert!((probe.mu_third - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_probe_umvirate_cube() {
        let t = 3;
        let f = ak_family(t, 0, 8).unwrap();
        let probe = sharp_threshold_probe(&f, 0.25, t).unwrap();
        assert!((probe.mu_p - 0.25_f64.powi(t as i32)).abs() < 1e-12);
        assert!((probe.mu_third - (1.0_f64 / 3.0).powi(t as i32)).abs() < 1e-12);
        assert!((probe.lemma_rhs - 0.99_f64.powi(t as i32)).abs() < 1e-15);
        assert!(probe.warning.is_none());
        let warned = sharp_threshold_probe(&f, 0.5, t).unwrap();
        assert!(warned.warning.is_some());
    }

    #[test]
    fn cross_probe_umvirate_pair() {
        let t = 2;
        let f = ak_family(t, 0, 6).unwrap();
        let p = 0.25;
        let out = global_cross_probe(&f, &f, p, 1.0 / p, t, 0.1).unwrap();
        assert!((out.min_measure - p.powi(t as i32)).abs() < 1e-12);
        assert!(out.rhs > 0.0);
    }

    #[test]
    fn cross_probe_identifies_broken_hypothesis() {
        let t = 2;
        let f = ak_family(t, 0, 6).unwrap();
        let empty = CubeFamily::empty(6).unwrap();
        match global_cross_probe(&f, &empty, 0.25, 4.0, t, 0.1) {
            Err(Error::EmptyFamily(which)) => assert_eq!(which, "B"),
            other => panic!("expected EmptyFamily(B), got {other:?}"),
        }
        let non_monotone = CubeFamily::new(6, vec![0b000011]).unwrap();
        match global_cross_probe(&non_monotone, &f, 0.25, 64.0, t, 0.1) {
            Err(Error::NotMonotone { which }) => assert_eq!(which, "A"),
            other => panic!("expected NotMonotone(A), got {other:?}"),
        }
    }
}
