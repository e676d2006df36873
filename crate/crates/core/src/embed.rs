//! Embeddings of S_n and [n]^n into {0,1}^(n^2), the matching-based coupling
//! with mu_p, and the Hall-condition bound on the up-closure of E(S_n).
//!
//! A permutation sigma embeds as the 0/1 matrix with row i carrying a single
//! one at column sigma(i); rows are blocks of n coordinates in row-major
//! order. A matrix x dominates some permutation matrix exactly when its
//! bipartite graph (rows vs columns, edges at ones) has a perfect matching,
//! which is what [`hall_membership`] tests with plain augmenting paths.
//!
//! The coupling draws x ~ mu_p and then sigma uniformly among the
//! permutations with E(sigma) <= x. Uniformity among matchings is exact up to
//! n = 8 (counting completions with a subset-mask DP); above that a
//! randomized-order matching stands in, which biases the conditional choice
//! of sigma but leaves the dominated flag and its rate untouched.

use std::io::{BufRead, Write};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{CubeFamily, CubePoint, MAX_EXACT_DIM};
use crate::error::{Error, Result};
use crate::families::{factorial, Permutation};

/// Degree cap for bit matrices (n^2 coordinates, rows as u128 masks).
pub const MAX_MATRIX_N: usize = 128;
/// Exact-uniform matching sampling is available up to this n.
pub const MAX_EXACT_MATCHING_N: usize = 8;
/// Exact enumeration of mu_p(U) is available up to this n (2^(n^2) points).
pub const MAX_EXACT_HALL_N: usize = 3;

/// A word in [n]^n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordPoint {
    letters: Vec<u8>,
}

impl WordPoint {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        let n = letters.len();
        if n > MAX_MATRIX_N {
            return Err(Error::ResourceGuard {
                what: "word length",
                cap: MAX_MATRIX_N,
                requested: n,
            });
        }
        if let Some(&bad) = letters.iter().find(|&&c| c == 0 || c as usize > n) {
            return Err(Error::precondition(format!(
                "letter {bad} outside 1..={n}"
            )));
        }
        Ok(WordPoint { letters })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }
}

/// A point of {0,1}^(n^2), stored as n row masks (column j = bit j-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u128>,
}

impl BitMatrix {
    pub fn new(n: usize, rows: Vec<u128>) -> Result<Self> {
        if n == 0 || n > MAX_MATRIX_N {
            return Err(Error::ResourceGuard {
                what: "matrix degree",
                cap: MAX_MATRIX_N,
                requested: n,
            });
        }
        if rows.len() != n {
            return Err(Error::precondition(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let row_mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        if rows.iter().any(|&r| r & !row_mask != 0) {
            return Err(Error::precondition("row has bits beyond column n"));
        }
        Ok(BitMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.rows[row - 1] >> (col - 1) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// Number of common ones with another matrix of the same degree.
    pub fn and_weight(&self, other: &BitMatrix) -> Result<u32> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| (a & b).count_ones())
            .sum())
    }

    /// Coordinate-wise domination.
    pub fn dominates(&self, other: &BitMatrix) -> bool {
        self.n == other.n
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(big, small)| small & !big == 0)
    }

    /// View as a point of the flat cube {0,1}^(n^2); needs n^2 <= 24.
    pub fn to_cube_point(&self) -> Result<CubePoint> {
        let dim = self.n * self.n;
        if dim > MAX_EXACT_DIM {
            return Err(Error::ResourceGuard {
                what: "flattened matrix dimension",
                cap: MAX_EXACT_DIM,
                requested: dim,
            });
        }
        let mut bits = 0u32;
        for (i, &row) in self.rows.iter().enumerate() {
            bits |= (row as u32) << (i * self.n);
        }
        CubePoint::new(dim, bits)
    }

    pub fn from_cube_point(n: usize, point: CubePoint) -> Result<BitMatrix> {
        if point.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: point.dim(),
            });
        }
        let row_mask = (1u32 << n) - 1;
        let rows = (0..n)
            .map(|i| ((point.bits() >> (i * n)) & row_mask) as u128)
            .collect();
        BitMatrix::new(n, rows)
    }
}

/// E(sigma): row i has its single one at column sigma(i).
pub fn embed_perm(sigma: &Permutation) -> Result<BitMatrix> {
    let n = sigma.n();
    let rows = (1..=n).map(|i| 1u128 << (sigma.apply(i) - 1)).collect();
    BitMatrix::new(n, rows)
}

/// E(w) for a word w in [n]^n; rows may repeat columns.
pub fn embed_word(w: &WordPoint) -> Result<BitMatrix> {
    let rows = w.letters().iter().map(|&c| 1u128 << (c - 1)).collect();
    BitMatrix::new(w.n(), rows)
}

/// Embed a whole family of permutations into the flat cube (n^2 <= 24).
pub fn embed_perm_family_to_cube(members: &[Permutation], n: usize) -> Result<CubeFamily> {
    let masks = members
        .iter()
        .map(|p| Ok(embed_perm(p)?.to_cube_point()?.bits()))
        .collect::<Result<Vec<u32>>>()?;
    CubeFamily::new(n * n, masks)
}

/// Report of [`embedding_measure_factor`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MeasureFactor {
    /// n^n p^n (1-p)^(n^2-n): the mu_p mass of one embedded word relative to
    /// its uniform mass 1/n^n.
    pub point_mass_ratio: f64,
    /// e^{-n}, the floor the ratio must clear at p = 1/n.
    pub bound: f64,
}

pub fn embedding_measure_factor(n: usize, p: f64) -> Result<MeasureFactor> {
    if n == 0 || n > MAX_MATRIX_N {
        return Err(Error::ResourceGuard {
            what: "matrix degree",
            cap: MAX_MATRIX_N,
            requested: n,
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidBias(p));
    }
    let nf = n as f64;
    let log_ratio = nf * nf.ln() + nf * p.ln() + (nf * nf - nf) * (1.0 - p).ln();
    Ok(MeasureFactor {
        point_mass_ratio: log_ratio.exp(),
        bound: (-nf).exp(),
    })
}

/// True iff the bipartite graph of x has a perfect matching, i.e. x lies in
/// the up-closure of E(S_n). Plain augmenting-path search, O(V E).
pub fn hall_membership(x: &BitMatrix) -> bool {
    find_matching(x.rows(), &(0..x.n()).collect::<Vec<_>>(), None).is_some()
}

/// Augmenting-path matching; `order` fixes the row insertion order and
/// `shuffle` optionally randomizes column preference per DFS.
fn find_matching(
    rows: &[u128],
    order: &[usize],
    mut shuffle: Option<&mut ChaCha8Rng>,
) -> Option<Vec<usize>> {
    let n = rows.len();
    let mut col_of_row = vec![usize::MAX; n];
    let mut row_of_col = vec![usize::MAX; n];
    for &r in order {
        let mut seen = vec![false; n];
        if !augment(rows, r, &mut seen, &mut col_of_row, &mut row_of_col, &mut shuffle) {
            return None;
        }
    }
    Some(col_of_row)
}

fn augment(
    rows: &[u128],
    r: usize,
    seen: &mut [bool],
    col_of_row: &mut [usize],
    row_of_col: &mut [usize],
    shuffle: &mut Option<&mut ChaCha8Rng>,
) -> bool {
    if shuffle.is_some() {
        let mut cols: Vec<usize> = Vec::new();
        let mut m = rows[r];
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            cols.push(c);
            m &= m - 1;
        }
        if let Some(rng) = shuffle {
            cols.shuffle(*rng);
        }
        for c in cols {
            if try_column(rows, r, c, seen, col_of_row, row_of_col, shuffle) {
                return true;
            }
        }
        return false;
    }
    let mut m = rows[r];
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        m &= m - 1;
        if try_column(rows, r, c, seen, col_of_row, row_of_col, shuffle) {
            return true;
        }
    }
    false
}

fn try_column(
    rows: &[u128],
    r: usize,
    c: usize,
    seen: &mut [bool],
    col_of_row: &mut [usize],
    row_of_col: &mut [usize],
    shuffle: &mut Option<&mut ChaCha8Rng>,
) -> bool {
    if seen[c] {
        return false;
    }
    seen[c] = true;
    if row_of_col[c] == usize::MAX
        || augment(rows, row_of_col[c], seen, col_of_row, row_of_col, shuffle)
    {
        col_of_row[r] = c;
        row_of_col[c] = r;
        return true;
    }
    false
}

/// One draw of the coupling between mu_p on {0,1}^(n^2) and uniform S_n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingSample {
    pub x: BitMatrix,
    pub sigma: Permutation,
    /// E(sigma) <= x; equivalently, x has a perfect matching.
    pub dominated: bool,
    /// False above [`MAX_EXACT_MATCHING_N`], where the matching sampler is
    /// randomized rather than exactly uniform among prospects.
    pub exact_uniform: bool,
}

/// Draw x ~ mu_p (p = 1 allowed: the all-ones matrix), then sigma uniform
/// among {sigma : E(sigma) <= x}, or uniform on S_n when there are none.
pub fn coupling_sample(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<CouplingSample> {
    if n == 0 || n > MAX_MATRIX_N {
        return Err(Error::ResourceGuard {
            what: "matrix degree",
            cap: MAX_MATRIX_N,
            requested: n,
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidBias(p));
    }
    let row_mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let rows: Vec<u128> = (0..n)
        .map(|_| {
            if p >= 1.0 {
                row_mask
            } else {
                let mut r = 0u128;
                for j in 0..n {
                    if rng.gen_bool(p) {
                        r |= 1 << j;
                    }
                }
                r
            }
        })
        .collect();
    let x = BitMatrix::new(n, rows)?;
    let exact = n <= MAX_EXACT_MATCHING_N;
    let sigma = if exact {
        sample_uniform_matching(x.rows(), rng)?
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        find_matching(x.rows(), &order, Some(rng)).map(|cols| {
            Permutation::new(cols.iter().map(|&c| c as u8 + 1).collect()).expect("matching is a bijection")
        })
    };
    match sigma {
        Some(sigma) => Ok(CouplingSample {
            dominated: true,
            exact_uniform: exact,
            x,
            sigma,
        }),
        None => {
            // no prospects: fall back to a uniform permutation
            let mut image: Vec<u8> = (1..=n as u8).collect();
            image.shuffle(rng);
            Ok(CouplingSample {
                dominated: false,
                exact_uniform: exact,
                x,
                sigma: Permutation::new(image)?,
            })
        }
    }
}

/// Exactly uniform sample among perfect matchings via completion counts:
/// comp[used] = matchings of rows popcount(used).. into the free columns.
fn sample_uniform_matching(rows: &[u128], rng: &mut ChaCha8Rng) -> Result<Option<Permutation>> {
    let n = rows.len();
    debug_assert!(n <= MAX_EXACT_MATCHING_N);
    let full = (1u32 << n) - 1;
    let mut comp = vec![0u64; 1 << n];
    comp[full as usize] = 1;
    for used in (0..full).rev() {
        let k = used.count_ones() as usize; // rows 0..k are matched
        let row = rows[k] as u32;
        let mut free = row & !used & full;
        let mut ways = 0u64;
        while free != 0 {
            let c = free & free.wrapping_neg();
            ways += comp[(used | c) as usize];
            free ^= c;
        }
        comp[used as usize] = ways;
    }
    if comp[0] == 0 {
        return Ok(None);
    }
    let mut used = 0u32;
    let mut image = vec![0u8; n];
    for (k, img) in image.iter_mut().enumerate() {
        let row = rows[k] as u32;
        let mut free = row & !used & full;
        let mut weights: Vec<(u32, u64)> = Vec::new();
        while free != 0 {
            let c = free & free.wrapping_neg();
            let w = comp[(used | c) as usize];
            if w > 0 {
                weights.push((c, w));
            }
            free ^= c;
        }
        let total: u64 = weights.iter().map(|&(_, w)| w).sum();
        let mut draw = rng.gen_range(0..total);
        let mut picked = weights[0].0;
        for &(c, w) in &weights {
            if draw < w {
                picked = c;
                break;
            }
            draw -= w;
        }
        used |= picked;
        *img = picked.trailing_zeros() as u8 + 1;
    }
    Ok(Some(Permutation::new(image)?))
}

/// Result of [`hall_bound`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HallBound {
    pub n: usize,
    pub p: f64,
    /// Exact mu_p(U) for n <= 3, else the Monte Carlo point estimate.
    pub mu_u: f64,
    /// True when mu_u is the exact enumeration.
    pub exact: bool,
    pub samples: u64,
    /// Wilson score interval at the 99% level (matches mu_u when exact).
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// sum_k C(n,k) C(n,k-1) (1-p)^(k(n-k+1)): the union bound on mu_p(U^c).
    pub union_bound_residual: f64,
}

/// Two-sided 99% z.
const Z99: f64 = 2.575_829_303_548_900_4;

fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let nf = trials as f64;
    let phat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = phat + z2 / (2.0 * nf);
    let spread = z * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    (((center - spread) / denom).max(0.0), ((center + spread) / denom).min(1.0))
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// The displayed union-bound sum, evaluated term-by-term in log space.
pub fn hall_union_bound_residual(n: usize, p: f64) -> f64 {
    if p >= 1.0 {
        return 0.0;
    }
    let lf = ln_factorials(n);
    let ln_c = |n: usize, k: usize| lf[n] - lf[k] - lf[n - k];
    let lq = (1.0 - p).ln();
    let mut total = 0.0;
    for k in 1..=n {
        let ln_term = ln_c(n, k) + ln_c(n, k - 1) + (k * (n - k + 1)) as f64 * lq;
        total += ln_term.exp();
    }
    total
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const MC_CHUNK: u64 = 512;

/// mu_p(U): exact enumeration for n <= 3, Monte Carlo with a Wilson interval
/// beyond. Chunked seeding makes the estimate independent of the worker
/// count.
pub fn hall_bound(n: usize, p: f64, samples: u64, seed: u64) -> Result<HallBound> {
    if n == 0 || n > MAX_MATRIX_N {
        return Err(Error::ResourceGuard {
            what: "matrix degree",
            cap: MAX_MATRIX_N,
            requested: n,
        });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidBias(p));
    }
    let residual = hall_union_bound_residual(n, p);
    if n <= MAX_EXACT_HALL_N {
        let mut mu = 0.0;
        let cells = n * n;
        for bits in 0..1u64 << cells {
            let rows: Vec<u128> = (0..n)
                .map(|i| ((bits >> (i * n)) & ((1 << n) - 1)) as u128)
                .collect();
            let x = BitMatrix::new(n, rows)?;
            if hall_membership(&x) {
                let ones = bits.count_ones() as i32;
                mu += p.powi(ones) * (1.0 - p).powi(cells as i32 - ones);
            }
        }
        return Ok(HallBound {
            n,
            p,
            mu_u: mu,
            exact: true,
            samples: 0,
            wilson_low: mu,
            wilson_high: mu,
            union_bound_residual: residual,
        });
    }
    if samples == 0 {
        return Err(Error::precondition("samples must be positive"));
    }
    let chunks: Vec<(u64, u64)> = (0..samples.div_ceil(MC_CHUNK))
        .map(|c| (c, MC_CHUNK.min(samples - c * MC_CHUNK)))
        .collect();
    let hits: u64 = chunks
        .par_iter()
        .map(|&(chunk, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ chunk.wrapping_mul(0x9e37)));
            let mut local = 0u64;
            for _ in 0..count {
                let rows: Vec<u128> = (0..n)
                    .map(|_| {
                        let mut r = 0u128;
                        for j in 0..n {
                            if rng.gen_bool(p) {
                                r |= 1 << j;
                            }
                        }
                        r
                    })
                    .collect();
                if find_matching(&rows, &(0..n).collect::<Vec<_>>(), None).is_some() {
                    local += 1;
                }
            }
            local
        })
        .sum();
    let (lo, hi) = wilson_interval(hits, samples, Z99);
    Ok(HallBound {
        n,
        p,
        mu_u: hits as f64 / samples as f64,
        exact: false,
        samples,
        wilson_low: lo,
        wilson_high: hi,
        union_bound_residual: residual,
    })
}

/// Exact rational mu_p(U) for n <= 3 and rational p.
pub fn hall_mu_exact(n: usize, p: &BigRational) -> Result<BigRational> {
    if n == 0 || n > MAX_EXACT_HALL_N {
        return Err(Error::ResourceGuard {
            what: "exact Hall enumeration degree",
            cap: MAX_EXACT_HALL_N,
            requested: n,
        });
    }
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(Error::InvalidBias(0.0));
    }
    let q = BigRational::one() - p;
    let cells = n * n;
    let mut pow_p = vec![BigRational::one()];
    let mut pow_q = vec![BigRational::one()];
    for k in 1..=cells {
        pow_p.push(&pow_p[k - 1] * p);
        pow_q.push(&pow_q[k - 1] * &q);
    }
    let mut mu = BigRational::zero();
    for bits in 0..1u64 << cells {
        let rows: Vec<u128> = (0..n)
            .map(|i| ((bits >> (i * n)) & ((1 << n) - 1)) as u128)
            .collect();
        if hall_membership(&BitMatrix::new(n, rows)?) {
            let ones = bits.count_ones() as usize;
            mu += &pow_p[ones] * &pow_q[cells - ones];
        }
    }
    Ok(mu)
}

/// Aggregate coupling statistics for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingReport {
    pub n: usize,
    pub p: f64,
    pub samples: u64,
    pub dominated_rate: f64,
    /// Chi-square statistic of the sigma histogram against uniform, when the
    /// full histogram is small enough to keep (n <= 5).
    pub chi_square: Option<f64>,
    pub chi_square_critical: Option<f64>,
    pub degrees_of_freedom: Option<u64>,
    pub exact_uniform_sampler: bool,
}

/// Chi-square critical value via the Wilson-Hilferty approximation.
pub fn chi_square_critical(df: u64, z: f64) -> f64 {
    let d = df as f64;
    let t = 1.0 - 2.0 / (9.0 * d) + z * (2.0 / (9.0 * d)).sqrt();
    d * t * t * t
}

/// z for the upper alpha = 0.001 tail.
pub const Z_ALPHA_001: f64 = 3.090_232_306_167_813_6;

/// Run the coupling repeatedly; reports the dominated rate and, at small n,
/// the chi-square uniformity statistic of the sigma marginal.
pub fn coupling_campaign(n: usize, p: f64, samples: u64, seed: u64) -> Result<CouplingReport> {
    if samples == 0 {
        return Err(Error::precondition("samples must be positive"));
    }
    let track_hist = n <= 5;
    let cells = if track_hist { factorial(n) as usize } else { 0 };
    let mut hist = vec![0u64; cells];
    let mut dominated = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = true;
    for _ in 0..samples {
        let s = coupling_sample(n, p, &mut rng)?;
        exact = s.exact_uniform;
        if s.dominated {
            dominated += 1;
        }
        if track_hist {
            hist[perm_rank(&s.sigma)] += 1;
        }
    }
    let (chi, crit, df) = if track_hist {
        let expected = samples as f64 / cells as f64;
        let stat: f64 = hist
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        let df = cells as u64 - 1;
        (
            Some(stat),
            Some(chi_square_critical(df, Z_ALPHA_001)),
            Some(df),
        )
    } else {
        (None, None, None)
    };
    Ok(CouplingReport {
        n,
        p,
        samples,
        dominated_rate: dominated as f64 / samples as f64,
        chi_square: chi,
        chi_square_critical: crit,
        degrees_of_freedom: df,
        exact_uniform_sampler: exact,
    })
}

/// Lexicographic rank of a permutation, 0-based.
fn perm_rank(p: &Permutation) -> usize {
    let n = p.n();
    let mut rank = 0usize;
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        let v = p.apply(i);
        let smaller = (1..v).filter(|&u| !used[u]).count();
        rank = rank * (n - i + 1) + smaller;
        used[v] = true;
    }
    rank
}

/// Write the `bitmat n=<n>` format: one row per line as an n-char 0/1 string.
pub fn write_bitmat_file(x: &BitMatrix, w: &mut impl Write) -> Result<()> {
    writeln!(w, "bitmat n={}", x.n())?;
    for &row in x.rows() {
        let line: String = (0..x.n())
            .map(|j| if row >> j & 1 == 1 { '1' } else { '0' })
            .collect();
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parse the bit-matrix format. Blank lines and `#` comments ignored.
pub fn read_bitmat_file(r: &mut impl BufRead) -> Result<BitMatrix> {
    let mut n: Option<usize> = None;
    let mut rows: Vec<u128> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        match n {
            None => {
                let rest = line.strip_prefix("bitmat n=").ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("expected header `bitmat n=<n>`, got `{line}`"),
                })?;
                n = Some(rest.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad degree `{rest}`"),
                })?);
            }
            Some(deg) => {
                if line.len() != deg || line.bytes().any(|b| b != b'0' && b != b'1') {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected {deg} characters of 0/1, got `{line}`"),
                    });
                }
                let mut row = 0u128;
                for (j, b) in line.bytes().enumerate() {
                    if b == b'1' {
                        row |= 1 << j;
                    }
                }
                rows.push(row);
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `bitmat n=<n>` header".to_string(),
    })?;
    BitMatrix::new(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{symmetric_group, umvirate, UmvirateSpec};
    use num_bigint::BigInt;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn identity_embedding_bits() {
        let e = embed_perm(&Permutation::identity(2)).unwrap();
        // row-major string 1001
        assert!(e.bit(1, 1) && !e.bit(1, 2) && !e.bit(2, 1) && e.bit(2, 2));
        assert_eq!(e.to_cube_point().unwrap().bits(), 0b1001);
        assert_eq!(e.weight(), 2);
    }

    #[test]
    fn embedding_weight_is_n() {
        for p in symmetric_group(4).unwrap().members() {
            assert_eq!(embed_perm(p).unwrap().weight(), 4);
        }
    }

    #[test]
    fn embedding_preserves_agreement() {
        let s = Permutation::new(vec![2, 3, 1]).unwrap();
        let t = Permutation::new(vec![2, 1, 3]).unwrap();
        let es = embed_perm(&s).unwrap();
        let et = embed_perm(&t).unwrap();
        assert_eq!(es.and_weight(&et).unwrap(), 1);
        assert_eq!(crate::families::agreement(&s, &t).unwrap(), 1);
    }

    #[test]
    fn word_embedding_repeats_columns() {
        let w = WordPoint::new(vec![1, 1]).unwrap();
        let e = embed_word(&w).unwrap();
        assert_eq!(e.to_cube_point().unwrap().bits(), 0b0101);
    }

    #[test]
    fn word_embedding_injective() {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        for a in 1..=3u8 {
            for b in 1..=3u8 {
                for c in 1..=3u8 {
                    let e = embed_word(&WordPoint::new(vec![a, b, c]).unwrap()).unwrap();
                    assert!(seen.insert(e.rows().to_vec()));
                }
            }
        }
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn measure_factor_examples() {
        let f = embedding_measure_factor(2, 0.5).unwrap();
        assert!((f.point_mass_ratio - 0.25).abs() < 1e-12);
        assert!(f.point_mass_ratio >= f.bound);
        let f = embedding_measure_factor(3, 1.0 / 3.0).unwrap();
        assert!((f.point_mass_ratio - (2.0f64 / 3.0).powi(6)).abs() < 1e-12);
        assert!(f.point_mass_ratio >= f.bound);
    }

    #[test]
    fn measure_factor_beats_bound_along_p_one_over_n() {
        for n in 2..=50usize {
            let f = embedding_measure_factor(n, 1.0 / n as f64).unwrap();
            assert!(
                f.point_mass_ratio >= f.bound,
                "n={n}: {} < {}",
                f.point_mass_ratio,
                f.bound
            );
        }
    }

    #[test]
    fn hall_membership_basics() {
        for p in symmetric_group(3).unwrap().members() {
            assert!(hall_membership(&embed_perm(p).unwrap()));
        }
        let zero_row = BitMatrix::new(3, vec![0, 0b111, 0b111]).unwrap();
        assert!(!hall_membership(&zero_row));
    }

    #[test]
    fn hall_count_n2_exhaustive() {
        // exactly 7 of the 16 two-by-two matrices dominate a permutation
        let mut count = 0;
        for bits in 0..16u64 {
            let rows = vec![(bits & 0b11) as u128, (bits >> 2 & 0b11) as u128];
            if hall_membership(&BitMatrix::new(2, rows).unwrap()) {
                count += 1;
            }
        }
        assert_eq!(count, 7);
    }

    #[test]
    fn hall_count_agrees_with_up_closure_route() {
        // independent route: up-closure of E(S_2) inside the flat 4-cube
        let fam = embed_perm_family_to_cube(symmetric_group(2).unwrap().members(), 2).unwrap();
        let up = fam.up_closure();
        assert_eq!(up.len(), 7);
        let exact = hall_mu_exact(2, &ratio(1, 2)).unwrap();
        assert_eq!(exact, ratio(7, 16));
        let hb = hall_bound(2, 0.5, 0, 0).unwrap();
        assert!(hb.exact);
        assert!((hb.mu_u - 7.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn hall_bound_p_one() {
        let hb = hall_bound(3, 1.0, 0, 0).unwrap();
        assert!((hb.mu_u - 1.0).abs() < 1e-12);
        assert_eq!(hb.union_bound_residual, 0.0);
    }

    #[test]
    fn hall_bound_monte_carlo_registers_high_mu() {
        let n = 12;
        let p = 10.0 * (n as f64).ln() / n as f64; // > 1 would be capped by callers
        let p = p.min(1.0);
        let hb = hall_bound(n, p, 2000, 7).unwrap();
        assert!(!hb.exact);
        assert!(hb.wilson_low > 0.5, "wilson lower bound {}", hb.wilson_low);
    }

    #[test]
    fn union_bound_small_p_is_large() {
        // with tiny p the bound is vacuous (residual above 1)
        let r = hall_union_bound_residual(6, 0.05);
        assert!(r > 0.5);
    }

    #[test]
    fn coupling_p_one_always_dominates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let s = coupling_sample(4, 1.0, &mut rng).unwrap();
            assert!(s.dominated);
            assert_eq!(s.x.weight(), 16);
        }
    }

    #[test]
    fn coupling_dominated_iff_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let s = coupling_sample(3, 0.4, &mut rng).unwrap();
            assert_eq!(s.dominated, hall_membership(&s.x));
            if s.dominated {
                assert!(s.x.dominates(&embed_perm(&s.sigma).unwrap()));
            }
        }
    }

    #[test]
    fn coupling_sigma_marginal_uniform_n3() {
        let report = coupling_campaign(3, 0.5, 60_000, 11).unwrap();
        assert!(report.exact_uniform_sampler);
        let stat = report.chi_square.unwrap();
        let crit = report.chi_square_critical.unwrap();
        assert!(stat < crit, "chi2 {stat} >= {crit}");
    }

    #[test]
    fn coupling_larger_n_uses_randomized_sampler() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = coupling_sample(12, 0.9, &mut rng).unwrap();
        assert!(!s.exact_uniform);
        assert_eq!(s.dominated, hall_membership(&s.x));
    }

    #[test]
    fn exact_matching_sampler_counts() {
        // two disjoint 1-options force the identity
        let rows = vec![0b01u128, 0b10u128];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sigma = sample_uniform_matching(&rows, &mut rng).unwrap().unwrap();
        assert_eq!(sigma.image(), &[1, 2]);
        // no matching at all
        let rows = vec![0b01u128, 0b01u128];
        assert!(sample_uniform_matching(&rows, &mut rng).unwrap().is_none());
    }

    #[test]
    fn umvirate_embedding_stays_t_intersecting() {
        let spec = UmvirateSpec::new(vec![(1, 2), (2, 1)]).unwrap();
        let fam = umvirate(&spec, 4).unwrap();
        let cube = embed_perm_family_to_cube(fam.members(), 4).unwrap();
        assert!(crate::families::is_t_intersecting_cube(&cube, 2));
    }

    #[test]
    fn bitmat_file_roundtrip() {
        let x = BitMatrix::new(3, vec![0b101, 0b010, 0b110]).unwrap();
        let mut buf = Vec::new();
        write_bitmat_file(&x, &mut buf).unwrap();
        let got = read_bitmat_file(&mut buf.as_slice()).unwrap();
        assert_eq!(got, x);
        let text = "bitmat n=2\n10\n01\n";
        let m = read_bitmat_file(&mut text.as_bytes()).unwrap();
        assert_eq!(m, embed_perm(&Permutation::identity(2)).unwrap());
    }

    #[test]
    fn wilson_interval_sane() {
        let (lo, hi) = wilson_interval(90, 100, Z99);
        assert!(lo < 0.9 && 0.9 < hi);
        assert!(lo > 0.78 && hi < 0.97);
    }
}
