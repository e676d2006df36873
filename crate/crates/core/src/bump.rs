//! Density bumps in permutation families, the restriction-chain
//! bootstrapper, and numeric audits of the inequality chains behind the
//! dictatorship-concentration and bootstrapping arguments.
//!
//! The audits are pure arithmetic: each check records its label, both sides,
//! and whether it held at the supplied parameters. Factorial-sized quantities
//! are kept as exact big integers until the final ratio, so the truth value
//! of a comparison is never a rounding artifact.

use num_bigint::BigUint;
use num_integer::binomial;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    self, derangement_count, factorial, is_cross_t_intersecting,
    PermFamily,
};

/// Where the density mass of a family sits across dictatorships.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BumpReport {
    pub best_i: usize,
    pub best_j: usize,
    /// |F_{i->j}| n / |F| at the best cell.
    pub ratio: f64,
    /// Full n x n ratio matrix, row-major; entry (i,j) = |F_{i->j}| n / |F|.
    pub table: Vec<Vec<f64>>,
    /// Raw counts |F_{i->j}|, same layout.
    pub counts: Vec<Vec<u64>>,
}

/// Exact dictatorship density table with lexicographic argmax.
pub fn density_bump(f: &PermFamily) -> Result<BumpReport> {
    if f.is_empty() {
        return Err(Error::EmptyFamily("density-bump input"));
    }
    let n = f.n();
    let mut counts = vec![vec![0u64; n]; n];
    for p in f.members() {
        for i in 1..=n {
            counts[i - 1][p.apply(i) - 1] += 1;
        }
    }
    let size = f.len() as f64;
    let table: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 * n as f64 / size).collect())
        .collect();
    let (mut best_i, mut best_j, mut best) = (1usize, 1usize, f64::NEG_INFINITY);
    for (i, row) in table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > best {
                best = v;
                best_i = i + 1;
                best_j = j + 1;
            }
        }
    }
    Ok(BumpReport {
        best_i,
        best_j,
        ratio: best,
        table,
        counts,
    })
}

/// One step of the restriction chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainStep {
    pub i: usize,
    pub j: usize,
    /// Fraction of the current A retained by restricting to i -> j.
    pub retained_a: f64,
    pub retained_b: f64,
}

/// Report of [`restriction_chain`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    /// True iff both families survived every step in full, i.e. A and B are
    /// contained in the t-umvirate the chain discovered.
    pub final_containment: bool,
    /// Whether the inputs were cross t-intersecting to begin with; None when
    /// |A||B| exceeds [`CROSS_CHECK_PAIR_BUDGET`] and the quadratic check was
    /// skipped.
    pub cross_t_ok: Option<bool>,
}

/// Largest |A| |B| for which the chain verifies cross intersection upfront.
pub const CROSS_CHECK_PAIR_BUDGET: u64 = 25_000_000;

/// Greedy t-step restriction chain: at every step pick the constraint
/// (i, j), over positions and values not used yet, maximizing
/// min(retained_a, retained_b), then restrict both families to it. The
/// selection rule instantiates an existential step, so it is documented and
/// deterministic rather than canonical.
pub fn restriction_chain(a: &PermFamily, b: &PermFamily, t: usize) -> Result<ChainReport> {
    if a.is_empty() {
        return Err(Error::EmptyFamily("A"));
    }
    if b.is_empty() {
        return Err(Error::EmptyFamily("B"));
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    let n = a.n();
    if t > n {
        return Err(Error::precondition(format!("t={t} exceeds n={n}")));
    }
    let cross_t_ok = if (a.len() as u64) * (b.len() as u64) <= CROSS_CHECK_PAIR_BUDGET {
        Some(is_cross_t_intersecting(a, b, t)?)
    } else {
        None
    };
    let mut cur_a = a.clone();
    let mut cur_b = b.clone();
    let mut used_i = vec![false; n + 1];
    let mut used_j = vec![false; n + 1];
    let mut steps = Vec::with_capacity(t);
    let mut containment = true;
    for _ in 0..t {
        if cur_a.is_empty() || cur_b.is_empty() {
            containment = false;
            break;
        }
        let count = |fam: &PermFamily| {
            let mut c = vec![vec![0u64; n]; n];
            for p in fam.members() {
                for i in 1..=n {
                    c[i - 1][p.apply(i) - 1] += 1;
                }
            }
            c
        };
        let ca = count(&cur_a);
        let cb = count(&cur_b);
        let mut best: Option<(usize, usize, u64, u64)> = None;
        let mut best_score = -1.0f64;
        for i in 1..=n {
            if used_i[i] {
                continue;
            }
            for j in 1..=n {
                if used_j[j] {
                    continue;
                }
                let ra = ca[i - 1][j - 1] as f64 / cur_a.len() as f64;
                let rb = cb[i - 1][j - 1] as f64 / cur_b.len() as f64;
                let score = ra.min(rb);
                if score > best_score {
                    best_score = score;
                    best = Some((i, j, ca[i - 1][j - 1], cb[i - 1][j - 1]));
                }
            }
        }
        let (i, j, kept_a, kept_b) = best.expect("t <= n leaves a free position");
        let retained_a = kept_a as f64 / cur_a.len() as f64;
        let retained_b = kept_b as f64 / cur_b.len() as f64;
        if kept_a != cur_a.len() as u64 || kept_b != cur_b.len() as u64 {
            containment = false;
        }
        cur_a = cur_a.filter_dictated(i, j);
        cur_b = cur_b.filter_dictated(i, j);
        used_i[i] = true;
        used_j[j] = true;
        steps.push(ChainStep {
            i,
            j,
            retained_a,
            retained_b,
        });
    }
    Ok(ChainReport {
        steps,
        final_containment: containment,
        cross_t_ok,
    })
}

/// One audited comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    /// Short label of the inequality instance being evaluated.
    pub eq: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl CheckRow {
    fn le(name: &str, eq: &str, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            name: name.into(),
            eq: eq.into(),
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    fn ge(name: &str, eq: &str, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            name: name.into(),
            eq: eq.into(),
            lhs,
            rhs,
            holds: lhs >= rhs,
        }
    }

    fn lt(name: &str, eq: &str, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            name: name.into(),
            eq: eq.into(),
            lhs,
            rhs,
            holds: lhs < rhs,
        }
    }

    fn gt(name: &str, eq: &str, lhs: f64, rhs: f64) -> Self {
        CheckRow {
            name: name.into(),
            eq: eq.into(),
            lhs,
            rhs,
            holds: lhs > rhs,
        }
    }
}

/// A bundle of audited checks with the inputs that produced them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantAudit {
    /// Named inputs, echoed for reproducibility.
    pub inputs: Vec<(String, f64)>,
    pub checks: Vec<CheckRow>,
}

impl ConstantAudit {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRow> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Audit the density-concentration arithmetic: the discriminant of the
/// quadratic in the bump factor a, its root regions, and the 7/n chain.
/// The regime is n >= 500 t; a violation is reported as a failing check, not
/// silently accepted.
pub fn audit_claim52(n: usize, t: usize, a: f64, c: f64) -> Result<ConstantAudit> {
    if n <= t {
        return Err(Error::precondition(format!("need n > t, got n={n}, t={t}")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::precondition(format!("need 0 < c < 1, got {c}")));
    }
    let nf = n as f64;
    let tf = t as f64;
    let mut checks = Vec::new();
    checks.push(CheckRow::ge(
        "regime-n-ge-500t",
        "regime",
        nf,
        500.0 * tf,
    ));
    // quadratic in a: (c (n-t)^2 / n) a^2 - (n-t)^2 a + 4 n (n-1) / c <= 0;
    // its discriminant normalizes to Delta = 1 - (16/c) (n-1) / (n-t)^2
    let delta = 1.0 - (16.0 / c) * (nf - 1.0) / ((nf - tf) * (nf - tf));
    checks.push(CheckRow::gt("delta-positive", "delta", delta, 0.0));
    let sqrt_delta = delta.max(0.0).sqrt();
    checks.push(CheckRow::gt(
        "root-bound",
        "a3",
        sqrt_delta,
        1.0 - 100.0 / nf,
    ));
    let lower_root = nf / 2.0 * (1.0 - sqrt_delta);
    let upper_root = nf / 2.0 * (1.0 + sqrt_delta);
    checks.push(CheckRow::lt(
        "lower-root-below-bump",
        "a3",
        lower_root,
        a,
    ));
    checks.push(CheckRow::gt(
        "upper-root-concentrates",
        "a4",
        upper_root,
        nf - 50.0,
    ));
    // (4/c) n (n-1) / ((n-50)(n-t)^2) <= 7/n, the second-family conclusion
    let chain_lhs = (4.0 / c) * nf * (nf - 1.0) / ((nf - 50.0) * (nf - tf) * (nf - tf));
    checks.push(CheckRow::le("seven-over-n", "a4-chain", chain_lhs, 7.0 / nf));
    Ok(ConstantAudit {
        inputs: vec![
            ("n".into(), nf),
            ("t".into(), tf),
            ("a".into(), a),
            ("c".into(), c),
        ],
        checks,
    })
}

/// Audit the bootstrapping inequalities: the (1-7/n)^(2t) floor, the 0.98
/// retention bound, the (100/98)^2 (1-1/e) < 2/3 factor (both in floating
/// point and exactly with big integers), and the derangement floor.
pub fn audit_bootstrap(n: usize, t: usize) -> Result<ConstantAudit> {
    if n <= t {
        return Err(Error::precondition(format!("need n > t, got n={n}, t={t}")));
    }
    let m = n - t;
    let fact = big_factorial(m);
    let d = derangement_count(m);
    Ok(bootstrap_checks(n, t, &fact, &d))
}

/// Grid variant of [`audit_bootstrap`]: one incremental factorial and
/// derangement sweep shared across every point, so a dense grid costs one
/// pass to the largest n - t instead of one pass per point.
pub fn audit_bootstrap_grid(points: &[(usize, usize)]) -> Result<Vec<ConstantAudit>> {
    if let Some(&(n, t)) = points.iter().find(|&&(n, t)| n <= t) {
        return Err(Error::precondition(format!("need n > t, got n={n}, t={t}")));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points[i].0 - points[i].1);
    let mut out: Vec<Option<ConstantAudit>> = vec![None; points.len()];
    let mut m_cur = 0usize;
    let mut fact = BigUint::one();
    let mut d_prev = BigUint::zero(); // D(-1) sentinel, killed by the k=1 factor
    let mut d_cur = BigUint::one(); // D(0)
    for i in order {
        let (n, t) = points[i];
        let m = n - t;
        while m_cur < m {
            m_cur += 1;
            fact *= BigUint::from(m_cur);
            let next = BigUint::from(m_cur - 1) * (&d_cur + &d_prev);
            d_prev = std::mem::replace(&mut d_cur, next);
        }
        out[i] = Some(bootstrap_checks(n, t, &fact, &d_cur));
    }
    Ok(out.into_iter().map(|a| a.expect("filled")).collect())
}

fn bootstrap_checks(n: usize, t: usize, fact: &BigUint, d: &BigUint) -> ConstantAudit {
    let nf = n as f64;
    let tf = t as f64;
    let mut checks = Vec::new();
    checks.push(CheckRow::ge("regime-n-ge-500t", "regime", nf, 500.0 * tf));
    let boot15 = (1.0 - 7.0 / nf).powi(2 * t as i32);
    checks.push(CheckRow::ge("retention-power", "boot1.5", boot15, 0.94));
    checks.push(CheckRow::gt(
        "retention-clears-two-thirds",
        "boot1.5",
        0.94,
        2.0 / 3.0,
    ));
    checks.push(CheckRow::ge(
        "union-retention",
        "boot3",
        1.0 - 7.0 * tf / nf,
        0.98,
    ));
    let factor = (100.0f64 / 98.0).powi(2) * (1.0 - (-1.0f64).exp());
    checks.push(CheckRow::lt("boot4-factor", "boot4", factor, 2.0 / 3.0));

    // exact variant: 10000 m! ceil((1-1/e) m!) < 9604 (m!)^2, with the common
    // m! divided out, and ceil((1-1/e) m!) = m! - floor(m!/e)
    let m = n - t;
    let floor = if m.is_multiple_of(2) {
        d - BigUint::one()
    } else {
        d.clone()
    };
    let ceil_part = fact - &floor;
    let lhs_exact = BigUint::from(10_000u32) * &ceil_part;
    let rhs_exact = BigUint::from(9_604u32) * fact;
    checks.push(CheckRow {
        name: "boot4-exact".into(),
        eq: "boot4".into(),
        lhs: big_ratio_f64(&lhs_exact, &rhs_exact),
        rhs: 1.0,
        holds: lhs_exact < rhs_exact,
    });

    // derangement floor: D(m) >= floor(m!/e), reported as a ratio so the row
    // stays finite at factorial scale
    let (lhs, rhs) = if floor.is_zero() {
        (d.to_f64().unwrap_or(0.0), 0.0)
    } else {
        (big_ratio_f64(d, &floor), 1.0)
    };
    checks.push(CheckRow {
        name: "derangement-floor".into(),
        eq: "derangements".into(),
        lhs,
        rhs,
        holds: *d >= floor,
    });
    ConstantAudit {
        inputs: vec![("n".into(), nf), ("t".into(), tf)],
        checks,
    }
}

fn big_factorial(m: usize) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=m {
        f *= BigUint::from(k);
    }
    f
}

/// a/b as f64 for big integers of any size: align both to 64 high bits.
fn big_ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::INFINITY;
    }
    let bits = a.bits().max(b.bits());
    let shift = bits.saturating_sub(64);
    let a_top = (a >> shift).to_f64().unwrap_or(f64::NAN);
    let b_top = (b >> shift).to_f64().unwrap_or(f64::NAN);
    a_top / b_top
}

/// Instantiate the case-splitting inequalities of the density-bump argument
/// at user-supplied constants, and report the case boundaries. Exponential
/// comparisons are carried out on logarithms (all natural), so the rows stay
/// finite at any n.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN inputs must fail validation
pub fn audit_prop41_cases(n: usize, t: usize, k: usize, c: f64, g: f64) -> Result<ConstantAudit> {
    if n < 3 || t == 0 || k == 0 {
        return Err(Error::precondition(
            "need n >= 3, t >= 1, k >= 1".to_string(),
        ));
    }
    if !(c > 0.0 && c < 1.0) || !(g > 1.0) {
        return Err(Error::precondition(format!(
            "need 0 < c < 1 and g > 1, got c={c}, g={g}"
        )));
    }
    let nf = n as f64;
    let tf = t as f64;
    let kf = k as f64;
    let ln_n = nf.ln();
    let mut checks = Vec::new();

    // case boundaries for the supplied n (reported as trivially-true rows)
    let b_large = 2.0 * nf / ln_n;
    let b_small = nf / (ln_n * ln_n);
    let b_top = nf / (10.0 * kf);
    for (name, v) in [
        ("boundary-large-t", b_large),
        ("boundary-small-t", b_small),
        ("boundary-t-cap", b_top),
    ] {
        checks.push(CheckRow {
            name: name.into(),
            eq: "case-split".into(),
            lhs: v,
            rhs: v,
            holds: true,
        });
    }

    // the exponent balance behind the large-t contradiction: the union bound
    // forces n >= (t/2) ln n (base-free form; equality at t = 2n/ln n)
    checks.push(CheckRow::le(
        "case1-exponent-balance",
        "case1",
        tf / 2.0 * ln_n,
        nf,
    ));
    // the literal binomial form C(n,t) <= 2^n against sqrt(n)^t, in logs
    checks.push(CheckRow::ge(
        "case1-binomial-2n",
        "case1",
        nf * 2.0f64.ln(),
        tf / 2.0 * ln_n,
    ));

    // large-t restriction budget: |S|/n through the sqrt(n)-global bound
    let large_lhs = ((1.0 / c).ln() / nf + 2.0 + 2.0 * tf * ln_n / nf) / (0.5 * ln_n);
    checks.push(CheckRow::le(
        "large-t-density-bump",
        "large-t-density-bump",
        large_lhs,
        1.0 / (2.0 * kf),
    ));

    // medium-t budget: |S| <= (ln(1/c) + 4n + 2t ln n) / ln g against n/(2k)
    let medium_lhs = ((1.0 / c).ln() + 4.0 * nf + 2.0 * tf * ln_n) / g.ln();
    checks.push(CheckRow::le(
        "medium-t-density-bump",
        "medium-t-density-bump",
        medium_lhs,
        nf / (2.0 * kf),
    ));

    // small-t budget with p = 10 ln n / n: |S| <= (ln(8/c) + 2t ln n) / ln g
    // against 1/(2 p g)
    let p_small = 10.0 * ln_n / nf;
    let small_lhs = ((8.0 / c).ln() + 2.0 * tf * ln_n) / g.ln();
    checks.push(CheckRow::le(
        "small-t-density-bump2",
        "small-t-density-bump2",
        small_lhs,
        1.0 / (2.0 * p_small * g),
    ));
    Ok(ConstantAudit {
        inputs: vec![
            ("n".into(), nf),
            ("t".into(), tf),
            ("k".into(), kf),
            ("c".into(), c),
            ("g".into(), g),
        ],
        checks,
    })
}

/// Report of [`induction_basis_bound`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisBound {
    /// #{tau : agreement(tau, id) >= t}, exact by enumeration (n <= 8).
    pub exact_count: u64,
    /// C(n,t) (n-t)!.
    pub binom_bound: u64,
    /// 2^n (n-t)!.
    pub two_n_bound: u64,
}

/// The induction-basis counting bound, all three quantities exact.
pub fn induction_basis_bound(n: usize, t: usize) -> Result<BasisBound> {
    if t > n {
        return Err(Error::precondition(format!("t={t} exceeds n={n}")));
    }
    if n > 8 {
        return Err(Error::ResourceGuard {
            what: "basis enumeration degree",
            cap: 8,
            requested: n,
        });
    }
    let mut exact = 0u64;
    families::for_each_permutation(n, |img| {
        let agree = img
            .iter()
            .enumerate()
            .filter(|(i, &v)| v as usize == i + 1)
            .count();
        if agree >= t {
            exact += 1;
        }
    })?;
    let binom = binomial(BigUint::from(n), BigUint::from(t))
        .to_u64()
        .expect("small binomial");
    Ok(BasisBound {
        exact_count: exact,
        binom_bound: binom * factorial(n - t),
        two_n_bound: (1u64 << n) * factorial(n - t),
    })
}

/// r(n,t) = max(4^(2 floor(c0 t) - n), 1) as a float; use [`r_of_log2`] for
/// the exact value when the power overflows.
pub fn r_of(n: usize, t: usize, c0: usize) -> Result<f64> {
    Ok(2.0f64.powi(r_of_log2(n, t, c0)?.min(i32::MAX as i64) as i32))
}

/// log2 of r(n,t), exact in integers: max(2 (2 floor(c0 t) - n), 0).
pub fn r_of_log2(n: usize, t: usize, c0: usize) -> Result<i64> {
    let base = (c0 * t) as i64;
    if (n as i64) < base {
        return Err(Error::precondition(format!(
            "need n >= floor(c0 t) = {base}, got n={n}"
        )));
    }
    Ok((2 * (2 * base - n as i64)).max(0))
}

/// The two monotonicity relations the induction uses, checked exactly in
/// log2 space: r(n-1,t) <= 4 r(n,t) and r(n-1,t-1) <= r(n,t).
pub fn r_of_monotonicity(n: usize, t: usize, c0: usize) -> Result<(bool, bool)> {
    let log_r = r_of_log2(n, t, c0)?;
    let step_n = r_of_log2(n - 1, t, c0)? <= 2 + log_r;
    let step_both = if t >= 1 {
        r_of_log2(n - 1, t - 1, c0)? <= log_r
    } else {
        true
    };
    Ok((step_n, step_both))
}
