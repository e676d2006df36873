//! Permutations of [n], intersecting-family predicates, the canonical
//! extremal families (umvirates, the fixed-point counterexample, the
//! stability pair), derangement counts, and the biased AK families.
//!
//! Conventions: permutations are 1-indexed in one-line notation. A single
//! family is t-intersecting when every pair of members, the pair (sigma,
//! sigma) included, agrees on at least t points; for permutations the
//! diagonal is vacuous, for cube families it forces every member to have at
//! least t elements.

mod search;

pub use search::{
    max_t_intersecting, max_t_intersecting_cube, max_t_intersecting_cube_exact, SearchMode,
    SearchResult, SearchWitness,
};

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cube::CubeFamily;
use crate::error::{Error, Result};

/// Largest m for which we materialize or stream all m! permutations.
pub const MAX_ENUM_FACTORIAL: usize = 10;

/// A bijection of [n] in one-line notation, 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn new(image: Vec<u8>) -> Result<Self> {
        let n = image.len();
        if n > 128 {
            return Err(Error::ResourceGuard {
                what: "permutation degree",
                cap: 128,
                requested: n,
            });
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::precondition(format!(
                    "not a bijection of [{n}]: {image:?}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n as u8).collect(),
        }
    }

    /// The transposition swapping a and b.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::precondition(format!(
                "invalid transposition ({a} {b}) on [{n}]"
            )));
        }
        let mut image: Vec<u8> = (1..=n as u8).collect();
        image.swap(a - 1, b - 1);
        Ok(Permutation { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// sigma(i), 1-indexed.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    /// Left composition: (self o other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(Permutation {
            image: other.image.iter().map(|&v| self.image[v as usize - 1]).collect(),
        })
    }

    pub fn fixed_points(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|(i, &v)| v as usize == i + 1)
            .count()
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// |{i : sigma(i) = tau(i)}|.
pub fn agreement(sigma: &Permutation, tau: &Permutation) -> Result<usize> {
    if sigma.n() != tau.n() {
        return Err(Error::DimensionMismatch {
            expected: sigma.n(),
            got: tau.n(),
        });
    }
    Ok(sigma
        .image
        .iter()
        .zip(&tau.image)
        .filter(|(a, b)| a == b)
        .count())
}

/// Agreement with early exit once `t` matches are found.
fn agrees_at_least(a: &[u8], b: &[u8], t: usize) -> bool {
    if t == 0 {
        return true;
    }
    let mut count = 0;
    for (x, y) in a.iter().zip(b) {
        if x == y {
            count += 1;
            if count >= t {
                return true;
            }
        }
    }
    false
}

/// A set of permutations of a common [n]. Members kept sorted, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermFamily {
    n: usize,
    members: Vec<Permutation>,
}

impl PermFamily {
    pub fn new(n: usize, mut members: Vec<Permutation>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(PermFamily { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.binary_search(p).is_ok()
    }

    /// Every pair of members (diagonal included) agrees on >= t points.
    pub fn is_t_intersecting(&self, t: usize) -> bool {
        if t > self.n && !self.members.is_empty() {
            return false; // diagonal pairs agree on exactly n points
        }
        for (idx, a) in self.members.iter().enumerate() {
            for b in &self.members[idx + 1..] {
                if !agrees_at_least(&a.image, &b.image, t) {
                    return false;
                }
            }
        }
        true
    }

    /// Members sigma with sigma(i) = j, i and j 1-indexed.
    pub fn filter_dictated(&self, i: usize, j: usize) -> PermFamily {
        PermFamily {
            n: self.n,
            members: self
                .members
                .iter()
                .filter(|p| p.apply(i) == j)
                .cloned()
                .collect(),
        }
    }
}

/// Every ordered pair (sigma in A, tau in B) agrees on >= t points.
pub fn is_cross_t_intersecting(a: &PermFamily, b: &PermFamily, t: usize) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    for x in a.members() {
        for y in b.members() {
            if !agrees_at_least(x.image(), y.image(), t) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cube-family t-intersection: every pair of members, the diagonal included,
/// shares at least t common elements.
pub fn is_t_intersecting_cube(f: &CubeFamily, t: usize) -> bool {
    let t = t as u32;
    let members = f.members();
    for (idx, &a) in members.iter().enumerate() {
        if a.count_ones() < t {
            return false;
        }
        for &b in &members[idx + 1..] {
            if (a & b).count_ones() < t {
                return false;
            }
        }
    }
    true
}

/// Cross version for cube families.
pub fn is_cross_t_intersecting_cube(a: &CubeFamily, b: &CubeFamily, t: usize) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let t = t as u32;
    for &x in a.members() {
        for &y in b.members() {
            if (x & y).count_ones() < t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// t disjoint dictatorship constraints i_k -> j_k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmvirateSpec {
    pairs: Vec<(usize, usize)>,
}

impl UmvirateSpec {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            if i == 0 || j == 0 {
                return Err(Error::precondition("constraint indices are 1-based"));
            }
            for &(i2, j2) in &pairs[idx + 1..] {
                if i == i2 {
                    return Err(Error::precondition(format!("position {i} constrained twice")));
                }
                if j == j2 {
                    return Err(Error::precondition(format!("value {j} used twice")));
                }
            }
        }
        Ok(UmvirateSpec { pairs })
    }

    /// The diagonal spec 1->1, ..., t->t.
    pub fn diagonal(t: usize) -> Self {
        UmvirateSpec {
            pairs: (1..=t).map(|i| (i, i)).collect(),
        }
    }

    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.pairs.iter().any(|&(i, j)| i > n || j > n) {
            return Err(Error::precondition(format!(
                "constraint outside [{n}]: {:?}",
                self.pairs
            )));
        }
        Ok(())
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// All permutations of [n] in lexicographic order, streamed.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u8])) -> Result<()> {
    if n > MAX_ENUM_FACTORIAL {
        return Err(Error::ResourceGuard {
            what: "permutation enumeration degree",
            cap: MAX_ENUM_FACTORIAL,
            requested: n,
        });
    }
    let mut v: Vec<u8> = (1..=n as u8).collect();
    loop {
        visit(&v);
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            return Ok(());
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
    }
}

/// The whole of S_n as a family.
pub fn symmetric_group(n: usize) -> Result<PermFamily> {
    let mut members = Vec::with_capacity(factorial(n) as usize);
    for_each_permutation(n, |img| members.push(Permutation { image: img.to_vec() }))?;
    Ok(PermFamily { n, members })
}

/// The t-umvirate (S_n)_{i_1->j_1,...,i_t->j_t}; size (n-t)!.
pub fn umvirate(spec: &UmvirateSpec, n: usize) -> Result<PermFamily> {
    spec.validate_for(n)?;
    let t = spec.t();
    if n - t > MAX_ENUM_FACTORIAL {
        return Err(Error::ResourceGuard {
            what: "free positions in umvirate enumeration",
            cap: MAX_ENUM_FACTORIAL,
            requested: n - t,
        });
    }
    let mut fixed_pos = vec![false; n + 1];
    let mut fixed_val = vec![false; n + 1];
    for &(i, j) in spec.pairs() {
        fixed_pos[i] = true;
        fixed_val[j] = true;
    }
    let free_pos: Vec<usize> = (1..=n).filter(|&i| !fixed_pos[i]).collect();
    let free_val: Vec<u8> = (1..=n as u8).filter(|&j| !fixed_val[j as usize]).collect();
    let mut members = Vec::with_capacity(factorial(n - t) as usize);
    for_each_permutation(n - t, |perm| {
        let mut image = vec![0u8; n];
        for &(i, j) in spec.pairs() {
            image[i - 1] = j as u8;
        }
        for (slot, &p) in perm.iter().enumerate() {
            image[free_pos[slot] - 1] = free_val[p as usize - 1];
        }
        members.push(Permutation { image });
    })?;
    Ok(PermFamily { n, members })
}

/// Report from [`counterexample_family`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub family: PermFamily,
    pub size: u64,
    pub formula: u64,
    pub umvirate_size: u64,
    pub t_intersecting: bool,
}

/// Permutations with at least t+1 fixed points among {1,...,t+2}. This family
/// is t-intersecting of size (t+2)(n-t-1)! - (t+1)(n-t-2)!, which beats
/// (n-t)! once n >= 8 and t = n/2.
pub fn counterexample_family(n: usize, t: usize) -> Result<CounterexampleReport> {
    if t + 2 > n {
        return Err(Error::precondition(format!(
            "need t+2 <= n, got t={t}, n={n}"
        )));
    }
    let mut members = Vec::new();
    for_each_permutation(n, |img| {
        let fixed = (0..t + 2).filter(|&i| img[i] as usize == i + 1).count();
        if fixed > t {
            members.push(Permutation { image: img.to_vec() });
        }
    })?;
    let family = PermFamily::new(n, members)?;
    let formula =
        (t as u64 + 2) * factorial(n - t - 1) - (t as u64 + 1) * factorial(n - t - 2);
    let size = family.len() as u64;
    let t_intersecting = family.is_t_intersecting(t);
    Ok(CounterexampleReport {
        size,
        formula,
        umvirate_size: factorial(n - t),
        t_intersecting,
        family,
    })
}

/// Report from [`stability_family`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityExample {
    pub a: PermFamily,
    pub b: PermFamily,
    pub ratio: f64,
    pub cross_checked: bool,
}

/// The cross pair showing 1 - 1/e is the right stability constant:
/// A = (S_n)_{1->1,...,t->t} plus the transposition sigma = (1 n), and
/// B = members of the umvirate agreeing with sigma on >= t points.
pub fn stability_family(n: usize, t: usize) -> Result<StabilityExample> {
    if t + 1 >= n {
        return Err(Error::precondition(format!(
            "degenerate stability pair: need t < n-1, got t={t}, n={n}"
        )));
    }
    let spec = UmvirateSpec::diagonal(t);
    let umv = umvirate(&spec, n)?;
    let sigma = Permutation::transposition(n, 1, n)?;
    let b_members: Vec<Permutation> = umv
        .members()
        .iter()
        .filter(|tau| agrees_at_least(tau.image(), sigma.image(), t))
        .cloned()
        .collect();
    let ratio = b_members.len() as f64 / factorial(n - t) as f64;
    let b = PermFamily::new(n, b_members)?;
    let mut a_members = umv.members().to_vec();
    a_members.push(sigma.clone());
    let a = PermFamily::new(n, a_members)?;

    // Cross t-intersection, verified structurally: umvirate members pairwise
    // share the t diagonal constraints, so only sigma-vs-B needs agreement
    // counting. This avoids the |A| x |B| scan, which the diagonal makes
    // redundant.
    let fixes_diagonal = |p: &Permutation| (1..=t).all(|i| p.apply(i) == i);
    let cross_checked = a
        .members()
        .iter()
        .all(|p| p == &sigma || fixes_diagonal(p))
        && b.members().iter().all(fixes_diagonal)
        && b
            .members()
            .iter()
            .all(|tau| agrees_at_least(tau.image(), sigma.image(), t));
    Ok(StabilityExample {
        a,
        b,
        ratio,
        cross_checked,
    })
}

/// Exact number of fixed-point-free permutations of [m].
pub fn derangement_count(m: usize) -> BigUint {
    derangement_pair(m).1
}

/// (D(m-1), D(m)) via D(k) = (k-1)(D(k-1) + D(k-2)).
fn derangement_pair(m: usize) -> (BigUint, BigUint) {
    let mut prev = BigUint::zero(); // stands in for D(-1); the k=1 factor kills it
    let mut cur = BigUint::one(); // D(0) = 1
    for k in 1..=m {
        let next = BigUint::from(k - 1) * (&cur + &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    (prev, cur)
}

/// floor(m!/e), exact for every m. The alternating series for m!/e leaves a
/// remainder strictly inside (0,1) whose sign depends on the parity of m:
/// m!/e = D(m) - r for even m and D(m) + r for odd m.
pub fn floor_factorial_over_e(m: usize) -> BigUint {
    let d = derangement_count(m);
    if m.is_multiple_of(2) {
        d - BigUint::one()
    } else {
        d
    }
}

/// Outcome of [`ak_bound_check`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AkBound {
    pub measure: f64,
    pub within_regime: bool,
}

/// The AK family F_{t,r} = {x : |x cap [t+2r]| >= t+r} on n coordinates.
pub fn ak_family(t: usize, r: usize, n: usize) -> Result<CubeFamily> {
    if t == 0 {
        return Err(Error::precondition("AK family needs t >= 1"));
    }
    if t + 2 * r > n {
        return Err(Error::precondition(format!(
            "need t+2r <= n, got t={t}, r={r}, n={n}"
        )));
    }
    let window = (1u32 << (t + 2 * r)) - 1;
    let need = (t + r) as u32;
    CubeFamily::filter(n, |m| (m & window).count_ones() >= need)
}

/// mu_p(F_{t,r}) as the exact binomial tail (independent of the ambient n),
/// plus whether p sits strictly inside the regime where F_{t,r} is extremal.
pub fn ak_bound_check(t: usize, r: usize, p: f64) -> Result<AkBound> {
    if t == 0 {
        return Err(Error::precondition("AK family needs t >= 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidBias(p));
    }
    let w = t + 2 * r;
    let mut measure = 0.0;
    for j in t + r..=w {
        let c = binomial(BigUint::from(w), BigUint::from(j))
            .to_f64()
            .expect("small binomial");
        measure += c * p.powi(j as i32) * (1.0 - p).powi((w - j) as i32);
    }
    let lower = if r == 0 {
        0.0
    } else {
        r as f64 / (t + 2 * r - 1) as f64
    };
    let upper = (r + 1) as f64 / (t + 2 * r + 1) as f64;
    Ok(AkBound {
        measure,
        within_regime: lower < p && p < upper,
    })
}

/// Exact rational mu_p(F_{t,r}) for rational p.
pub fn ak_measure_exact(t: usize, r: usize, p: &BigRational) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::precondition("AK family needs t >= 1"));
    }
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(Error::InvalidBias(p.to_f64().unwrap_or(f64::NAN)));
    }
    let w = t + 2 * r;
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for j in t + r..=w {
        let c = BigRational::from_integer(binomial(BigUint::from(w), BigUint::from(j)).into());
        let mut term = c;
        for _ in 0..j {
            term *= p;
        }
        for _ in 0..w - j {
            term *= &q;
        }
        total += term;
    }
    Ok(total)
}

/// Write the `perm n=<n>` format: one permutation per line, images separated
/// by spaces.
pub fn write_perm_file(f: &PermFamily, w: &mut impl Write) -> Result<()> {
    writeln!(w, "perm n={}", f.n())?;
    for p in f.members() {
        let images: Vec<String> = p.image().iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", images.join(" "))?;
    }
    Ok(())
}

/// Parse the permutation family format. Blank lines and `#` comments ignored.
pub fn read_perm_file(r: &mut impl BufRead) -> Result<PermFamily> {
    let mut n: Option<usize> = None;
    let mut members = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        match n {
            None => {
                let rest = line.strip_prefix("perm n=").ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("expected header `perm n=<n>`, got `{line}`"),
                })?;
                n = Some(rest.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad degree `{rest}`"),
                })?);
            }
            Some(deg) => {
                let image: Vec<u8> = line
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<u8>().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad image `{tok}`"),
                        })
                    })
                    .collect::<Result<_>>()?;
                if image.len() != deg {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected {deg} images, got {}", image.len()),
                    });
                }
                members.push(Permutation::new(image).map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?);
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `perm n=<n>` header".to_string(),
    })?;
    PermFamily::new(n, members)
}
