//! Exact subsets of {0,1}^n under biased product measures.
//!
//! Points are bitmasks with coordinate 1 at the least significant bit, so the
//! point written `1001` (coordinates 1 and 4 set) is the mask `0b1001 = 9`.
//! Exact operations refuse dimensions above [`MAX_EXACT_DIM`]; everything here
//! enumerates, and the cap keeps that enumeration tractable and bit-exact.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by exact-mode cube operations.
pub const MAX_EXACT_DIM: usize = 24;

/// Absolute tolerance for all floating measure comparisons.
pub const MEASURE_TOL: f64 = 1e-12;

fn check_dim(n: usize) -> Result<()> {
    // n = 0 is allowed: a fully-fixing restriction leaves a one-point cube
    if n > MAX_EXACT_DIM {
        return Err(Error::ResourceGuard {
            what: "cube dimension",
            cap: MAX_EXACT_DIM,
            requested: n,
        });
    }
    Ok(())
}

/// A single point of {0,1}^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CubePoint {
    dim: usize,
    bits: u32,
}

impl CubePoint {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        check_dim(dim)?;
        if dim < 32 && bits >> dim != 0 {
            return Err(Error::precondition(format!(
                "point mask {bits:#x} has bits above coordinate {dim}"
            )));
        }
        Ok(CubePoint { dim, bits })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Value of coordinate `i` (1-indexed).
    pub fn coord(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.dim);
        self.bits >> (i - 1) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

/// The biased product measure mu_p on a cube of any dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasedMeasure {
    p: f64,
}

impl BiasedMeasure {
    /// Requires 0 < p < 1; the endpoints are rejected.
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidBias(p));
        }
        Ok(BiasedMeasure { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// mu_p of a single point: p^|x| (1-p)^(n-|x|).
    pub fn point_mass(&self, point: CubePoint) -> f64 {
        let ones = point.weight() as i32;
        self.p.powi(ones) * (1.0 - self.p).powi(point.dim() as i32 - ones)
    }
}

/// Tables of p^k and (1-p)^k for k = 0..=n, shared by the measure loops.
pub(crate) fn pow_tables(p: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pp = Vec::with_capacity(n + 1);
    let mut qq = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (1.0, 1.0);
    for _ in 0..=n {
        pp.push(a);
        qq.push(b);
        a *= p;
        b *= 1.0 - p;
    }
    (pp, qq)
}

/// A finite set of points sharing one dimension. Members are kept sorted and
/// deduplicated, so equality of families is structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeFamily {
    dim: usize,
    members: Vec<u32>,
}

impl CubeFamily {
    pub fn new(dim: usize, mut members: Vec<u32>) -> Result<Self> {
        check_dim(dim)?;
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| dim < 32 && m >> dim != 0) {
            return Err(Error::precondition(format!(
                "member mask {bad:#x} has bits above coordinate {dim}"
            )));
        }
        Ok(CubeFamily { dim, members })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn full(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CubeFamily {
            dim,
            members: (0u32..1 << dim).collect(),
        })
    }

    /// All points of {0,1}^n selected by a predicate on the mask.
    pub fn filter(dim: usize, pred: impl Fn(u32) -> bool) -> Result<Self> {
        check_dim(dim)?;
        Ok(CubeFamily {
            dim,
            members: (0u32..1 << dim).filter(|&m| pred(m)).collect(),
        })
    }

    /// The dictatorship {x : x_i = 1}.
    pub fn dictatorship(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::precondition(format!(
                "dictator coordinate {i} out of range 1..={dim}"
            )));
        }
        Self::filter(dim, |m| m >> (i - 1) & 1 == 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn points(&self) -> impl Iterator<Item = CubePoint> + '_ {
        let dim = self.dim;
        self.members.iter().map(move |&bits| CubePoint { dim, bits })
    }

    /// Membership indicator as a dense table over all 2^n masks.
    pub fn indicator_table(&self) -> Vec<bool> {
        let mut table = vec![false; 1usize << self.dim];
        for &m in &self.members {
            table[m as usize] = true;
        }
        table
    }

    /// mu_p(F) = sum over members of p^|x| (1-p)^(n-|x|).
    pub fn measure(&self, m: &BiasedMeasure) -> f64 {
        let (pp, qq) = pow_tables(m.p(), self.dim);
        self.members
            .iter()
            .map(|&x| {
                let ones = x.count_ones() as usize;
                pp[ones] * qq[self.dim - ones]
            })
            .sum()
    }

    /// Exact rational measure, for rational bias p.
    pub fn measure_exact(&self, p: &BigRational) -> Result<BigRational> {
        if p <= &BigRational::zero() || p >= &BigRational::one() {
            return Err(Error::InvalidBias(0.0));
        }
        let q = BigRational::one() - p;
        let mut pp = vec![BigRational::one()];
        let mut qq = vec![BigRational::one()];
        for k in 1..=self.dim {
            pp.push(&pp[k - 1] * p);
            qq.push(&qq[k - 1] * &q);
        }
        let mut total = BigRational::zero();
        for &x in &self.members {
            let ones = x.count_ones() as usize;
            total += &pp[ones] * &qq[self.dim - ones];
        }
        Ok(total)
    }

    /// Points of F that agree with the restriction, re-indexed to the free
    /// coordinates. Surviving coordinates are relabelled 1..n-|S| in order.
    pub fn restrict(&self, r: &Restriction) -> Result<CubeFamily> {
        r.validate(self.dim)?;
        let coords = r.coords();
        let values = r.values();
        let new_dim = self.dim - coords.count_ones() as usize;
        let members = self
            .members
            .iter()
            .filter(|&&x| x & coords == values)
            .map(|&x| squeeze(x, coords))
            .collect();
        Ok(CubeFamily {
            dim: new_dim,
            members,
        })
    }

    /// Smallest monotone superfamily: every point dominating a member.
    pub fn up_closure(&self) -> CubeFamily {
        let size = 1usize << self.dim;
        let mut marked = self.indicator_table();
        for i in 0..self.dim {
            let bit = 1usize << i;
            for m in 0..size {
                if marked[m] {
                    marked[m | bit] = true;
                }
            }
        }
        CubeFamily {
            dim: self.dim,
            members: (0..size as u32).filter(|&m| marked[m as usize]).collect(),
        }
    }

    /// True iff F is closed under coordinate-wise increase.
    pub fn is_monotone(&self) -> bool {
        let table = self.indicator_table();
        for &m in &self.members {
            for i in 0..self.dim {
                if !table[(m | 1 << i) as usize] {
                    return false;
                }
            }
        }
        true
    }

    pub fn intersection(&self, other: &CubeFamily) -> Result<CubeFamily> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let members = self
            .members
            .iter()
            .copied()
            .filter(|m| other.contains(*m))
            .collect();
        Ok(CubeFamily {
            dim: self.dim,
            members,
        })
    }
}

/// Drop the bits selected by `coords` and compact the rest, preserving order.
fn squeeze(x: u32, coords: u32) -> u32 {
    let mut out = 0u32;
    let mut shift = 0;
    let mut keep = !coords;
    while keep != 0 {
        let i = keep.trailing_zeros();
        out |= (x >> i & 1) << shift;
        shift += 1;
        keep &= keep - 1;
    }
    // bits above the dimension never reach here: masks are validated
    let _ = shift;
    out
}

/// A partial assignment: fix the coordinates in `coords` to the bits of
/// `values` (both in absolute mask positions, values subset of coords).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    coords: u32,
    values: u32,
}

impl Restriction {
    pub fn new(coords: u32, values: u32) -> Result<Self> {
        if values & !coords != 0 {
            return Err(Error::precondition(format!(
                "restriction values {values:#x} assign coordinates outside {coords:#x}"
            )));
        }
        Ok(Restriction { coords, values })
    }

    pub fn empty() -> Self {
        Restriction {
            coords: 0,
            values: 0,
        }
    }

    /// Build from (coordinate, value) pairs, coordinates 1-indexed.
    pub fn from_pairs(pairs: &[(usize, bool)]) -> Result<Self> {
        let mut coords = 0u32;
        let mut values = 0u32;
        for &(i, v) in pairs {
            if i == 0 || i > MAX_EXACT_DIM {
                return Err(Error::precondition(format!("coordinate {i} out of range")));
            }
            let bit = 1u32 << (i - 1);
            if coords & bit != 0 {
                return Err(Error::precondition(format!("coordinate {i} fixed twice")));
            }
            coords |= bit;
            if v {
                values |= bit;
            }
        }
        Ok(Restriction { coords, values })
    }

    pub fn coords(&self) -> u32 {
        self.coords
    }

    pub fn values(&self) -> u32 {
        self.values
    }

    pub fn size(&self) -> usize {
        self.coords.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.coords == 0
    }

    /// (coordinate, value) pairs in increasing coordinate order.
    pub fn pairs(&self) -> Vec<(usize, bool)> {
        let mut out = Vec::with_capacity(self.size());
        let mut c = self.coords;
        while c != 0 {
            let i = c.trailing_zeros();
            out.push((i as usize + 1, self.values >> i & 1 == 1));
            c &= c - 1;
        }
        out
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if dim < 32 && self.coords >> dim != 0 {
            return Err(Error::precondition(format!(
                "restriction touches coordinates above {dim}"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for Restriction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|&(i, v)| format!("{}->{}", i, v as u8))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Outcome of one FKG correlation check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FkgOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// FKG: monotone families are non-negatively correlated. Inputs must be
/// monotone; the error names the offending family.
pub fn fkg_check(f: &CubeFamily, g: &CubeFamily, m: &BiasedMeasure) -> Result<FkgOutcome> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if !f.is_monotone() {
        return Err(Error::NotMonotone { which: "F" });
    }
    if !g.is_monotone() {
        return Err(Error::NotMonotone { which: "G" });
    }
    let lhs = f.intersection(g)?.measure(m);
    let rhs = f.measure(m) * g.measure(m);
    Ok(FkgOutcome {
        lhs,
        rhs,
        holds: lhs >= rhs - MEASURE_TOL,
    })
}

/// A random monotone family: up-closure of a few uniform points. The result
/// may be empty when `seeds` is zero.
pub fn random_monotone(dim: usize, seeds: usize, rng: &mut impl Rng) -> Result<CubeFamily> {
    check_dim(dim)?;
    let mut pts = BTreeSet::new();
    for _ in 0..seeds {
        pts.insert(rng.gen_range(0..1u32 << dim));
    }
    Ok(CubeFamily::new(dim, pts.into_iter().collect())?.up_closure())
}

/// Write the `cube n=<dim>` file format: one lowercase hex mask per line.
pub fn write_cube_file(f: &CubeFamily, w: &mut impl Write) -> Result<()> {
    writeln!(w, "cube n={}", f.dim())?;
    for &m in f.members() {
        writeln!(w, "{m:x}")?;
    }
    Ok(())
}

/// Parse the cube family file format. Blank lines and `#` comments ignored.
pub fn read_cube_file(r: &mut impl BufRead) -> Result<CubeFamily> {
    let mut dim: Option<usize> = None;
    let mut members = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        match dim {
            None => {
                let rest = line.strip_prefix("cube n=").ok_or_else(|| Error::Parse {
                    line: lineno,
                    msg: format!("expected header `cube n=<dim>`, got `{line}`"),
                })?;
                dim = Some(rest.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad dimension `{rest}`"),
                })?);
            }
            Some(_) => {
                let mask = u32::from_str_radix(line, 16).map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad hex mask `{line}`"),
                })?;
                members.push(mask);
            }
        }
    }
    let dim = dim.ok_or(Error::Parse {
        line: 0,
        msg: "missing `cube n=<dim>` header".to_string(),
    })?;
    CubeFamily::new(dim, members)
}
