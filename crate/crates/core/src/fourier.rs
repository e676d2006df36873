//! Biased Fourier expansion and the one-sided noise operator.
//!
//! The character basis for mu_p sets chi_i(x) = sqrt((1-p)/p) when x_i = 1 and
//! -sqrt(p/(1-p)) when x_i = 0; chi_S is the product over S. The transform is
//! a dense in-place butterfly, one pass per coordinate, O(n 2^n). Coefficients
//! are never pruned, however small, so Parseval checks stay exact to rounding.
//!
//! The one-sided noise operator T_{q->p} (0 < q < p < 1) acts on coefficients
//! as multiplication by rho^|S| with rho = sqrt(q(1-p)/(p(1-q))), and equals
//! the expectation over the monotone coupling D(q,p) in which x <= y always.
//! Both routes are implemented independently so each can audit the other.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cube::{BiasedMeasure, CubeFamily, CubePoint, MAX_EXACT_DIM};
use crate::error::{Error, Result};

/// A real-valued function on {0,1}^n, stored densely by point mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealFunctionOnCube {
    dim: usize,
    values: Vec<f64>,
}

impl RealFunctionOnCube {
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim > MAX_EXACT_DIM {
            return Err(Error::ResourceGuard {
                what: "cube dimension",
                cap: MAX_EXACT_DIM,
                requested: dim,
            });
        }
        if values.len() != 1 << dim {
            return Err(Error::precondition(format!(
                "need {} values for n={dim}, got {}",
                1usize << dim,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::precondition("function values must be finite"));
        }
        Ok(RealFunctionOnCube { dim, values })
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Self::new(dim, vec![c; 1 << dim])
    }

    /// 0/1 indicator of a family.
    pub fn indicator(f: &CubeFamily) -> Self {
        let mut values = vec![0.0; 1 << f.dim()];
        for &m in f.members() {
            values[m as usize] = 1.0;
        }
        RealFunctionOnCube {
            dim: f.dim(),
            values,
        }
    }

    pub fn random(dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let values = (0..1usize << dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self::new(dim, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    /// E_{mu_p}[f^2], by direct summation (no Fourier route).
    pub fn second_moment(&self, m: &BiasedMeasure) -> f64 {
        let (pp, qq) = crate::cube::pow_tables(m.p(), self.dim);
        self.values
            .iter()
            .enumerate()
            .map(|(x, v)| {
                let ones = (x as u32).count_ones() as usize;
                v * v * pp[ones] * qq[self.dim - ones]
            })
            .sum()
    }

    pub fn max_abs_diff(&self, other: &RealFunctionOnCube) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Fourier coefficients of a function, tagged with the bias they belong to.
/// Storage is dense: index = subset mask, absent-means-zero holds trivially.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    dim: usize,
    bias: f64,
    coeffs: Vec<f64>,
}

impl FourierCoeffs {
    /// Build coefficients from (subset mask, value) entries; absent subsets
    /// are zero.
    pub fn from_entries(dim: usize, bias: f64, entries: &[(u32, f64)]) -> Result<Self> {
        if dim > MAX_EXACT_DIM {
            return Err(Error::ResourceGuard {
                what: "cube dimension",
                cap: MAX_EXACT_DIM,
                requested: dim,
            });
        }
        BiasedMeasure::new(bias)?;
        let mut coeffs = vec![0.0; 1usize << dim];
        for &(mask, value) in entries {
            if mask as usize >= coeffs.len() {
                return Err(Error::precondition(format!(
                    "subset {mask:#x} out of range for n={dim}"
                )));
            }
            coeffs[mask as usize] = value;
        }
        Ok(FourierCoeffs { dim, bias, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn coeff(&self, subset: u32) -> f64 {
        self.coeffs[subset as usize]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Sum of squared coefficients (equals E[f^2] by Parseval).
    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Noise parameters for T_{q->p}; rho = sqrt(q(1-p)/(p(1-q))).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRho {
    pub q: f64,
    pub p: f64,
    pub rho: f64,
}

impl NoiseRho {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !(q > 0.0 && q < p && p < 1.0) {
            return Err(Error::BiasOrder { q, p });
        }
        let rho = (q * (1.0 - p) / (p * (1.0 - q))).sqrt();
        Ok(NoiseRho { q, p, rho })
    }
}

/// Character value chi_S(x) under bias p.
pub fn character(p: f64, subset: u32, x: u32) -> f64 {
    let hi = ((1.0 - p) / p).sqrt();
    let lo = -(p / (1.0 - p)).sqrt();
    let mut out = 1.0;
    let mut s = subset;
    while s != 0 {
        let i = s.trailing_zeros();
        out *= if x >> i & 1 == 1 { hi } else { lo };
        s &= s - 1;
    }
    out
}

/// Dense biased Walsh transform: f = sum_S fhat(S) chi_S.
pub fn transform(f: &RealFunctionOnCube, m: &BiasedMeasure) -> Result<FourierCoeffs> {
    let p = m.p();
    let n = f.dim();
    let mut a = f.values().to_vec();
    let w = (p * (1.0 - p)).sqrt();
    for i in 0..n {
        let bit = 1usize << i;
        for base in 0..a.len() {
            if base & bit == 0 {
                let lo = a[base];
                let hi = a[base | bit];
                // project onto {1, chi_i}: mean part and character part
                a[base] = (1.0 - p) * lo + p * hi;
                a[base | bit] = w * (hi - lo);
            }
        }
    }
    Ok(FourierCoeffs {
        dim: n,
        bias: p,
        coeffs: a,
    })
}

/// Evaluate sum_S fhat(S) chi_S pointwise; exact inverse of [`transform`].
pub fn inverse_transform(c: &FourierCoeffs) -> Result<RealFunctionOnCube> {
    let p = c.bias();
    BiasedMeasure::new(p)?;
    let n = c.dim();
    let hi = ((1.0 - p) / p).sqrt();
    let lo = -(p / (1.0 - p)).sqrt();
    let mut a = c.coeffs.clone();
    for i in 0..n {
        let bit = 1usize << i;
        for base in 0..a.len() {
            if base & bit == 0 {
                let mean = a[base];
                let chr = a[base | bit];
                a[base] = mean + chr * lo;
                a[base | bit] = mean + chr * hi;
            }
        }
    }
    RealFunctionOnCube::new(n, a)
}

/// ||f^{=d}||^2 = sum of fhat(S)^2 over |S| = d.
pub fn level_weight(c: &FourierCoeffs, d: usize) -> Result<f64> {
    if d > c.dim() {
        return Err(Error::precondition(format!(
            "level {d} out of range 0..={}",
            c.dim()
        )));
    }
    Ok(c.coeffs
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s as u32).count_ones() as usize == d)
        .map(|(_, v)| v * v)
        .sum())
}

/// All level weights at once, index d = 0..=n.
pub fn level_weights(c: &FourierCoeffs) -> Vec<f64> {
    let mut out = vec![0.0; c.dim() + 1];
    for (s, v) in c.coeffs.iter().enumerate() {
        out[(s as u32).count_ones() as usize] += v * v;
    }
    out
}

/// Fourier form of the one-sided noise operator: coefficient on S becomes
/// rho^|S| fhat(S), re-tagged at the target bias p.
pub fn one_sided_noise(c: &FourierCoeffs, p: f64) -> Result<FourierCoeffs> {
    let noise = NoiseRho::new(c.bias(), p)?;
    let mut rho_pow = vec![1.0; c.dim() + 1];
    for k in 1..=c.dim() {
        rho_pow[k] = rho_pow[k - 1] * noise.rho;
    }
    let coeffs = c
        .coeffs
        .iter()
        .enumerate()
        .map(|(s, v)| v * rho_pow[(s as u32).count_ones() as usize])
        .collect();
    Ok(FourierCoeffs {
        dim: c.dim(),
        bias: p,
        coeffs,
    })
}

/// Coupling form of T_{q->p}: for each y, the exact expectation of f(x) where
/// independently per coordinate x_i = 1 with probability q/p if y_i = 1 and
/// x_i = 0 otherwise. Summation over sub-masks of y, O(3^n) total.
pub fn coupling_expectation(
    f: &RealFunctionOnCube,
    q: f64,
    p: f64,
) -> Result<RealFunctionOnCube> {
    NoiseRho::new(q, p)?;
    let n = f.dim();
    let stay = q / p;
    let drop = 1.0 - stay;
    let mut out = vec![0.0; 1 << n];
    for y in 0..1u32 << n {
        let mut acc = 0.0;
        // iterate all x <= y
        let mut x = y;
        loop {
            let kept = x.count_ones() as i32;
            let dropped = (y.count_ones() - x.count_ones()) as i32;
            acc += f.value_at(x) * stay.powi(kept) * drop.powi(dropped);
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
        out[y as usize] = acc;
    }
    RealFunctionOnCube::new(n, out)
}

/// One draw from D(q,p): y ~ mu_p, then x <= y with P(x_i=1 | y_i=1) = q/p.
pub fn sample_coupled_pair(
    n: usize,
    q: f64,
    p: f64,
    rng: &mut impl Rng,
) -> Result<(CubePoint, CubePoint)> {
    NoiseRho::new(q, p)?;
    if n > MAX_EXACT_DIM {
        return Err(Error::ResourceGuard {
            what: "cube dimension",
            cap: MAX_EXACT_DIM,
            requested: n,
        });
    }
    let stay = q / p;
    let mut x = 0u32;
    let mut y = 0u32;
    for i in 0..n {
        if rng.gen_bool(p) {
            y |= 1 << i;
            if rng.gen_bool(stay) {
                x |= 1 << i;
            }
        }
    }
    Ok((CubePoint::new(n, x)?, CubePoint::new(n, y)?))
}

/// Dump coefficients as CSV: a `#` header recording n and p, then
/// subset-bitmask-hex, coefficient rows for every subset.
pub fn write_coeffs_csv(c: &FourierCoeffs, w: &mut impl Write) -> Result<()> {
    writeln!(w, "# n={} p={}", c.dim(), c.bias())?;
    writeln!(w, "subset,coefficient")?;
    for (s, v) in c.coeffs.iter().enumerate() {
        writeln!(w, "{s:x},{v}")?;
    }
    Ok(())
}

/// Parse the coefficient CSV format written by [`write_coeffs_csv`].
pub fn read_coeffs_csv(r: &mut impl BufRead) -> Result<FourierCoeffs> {
    let mut dim = None;
    let mut bias = None;
    let mut entries: Vec<(u32, f64)> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let lineno = idx + 1;
        if line.is_empty() || line == "subset,coefficient" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("n=") {
                    dim = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad n `{v}`"),
                    })?);
                } else if let Some(v) = tok.strip_prefix("p=") {
                    bias = Some(v.parse::<f64>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad p `{v}`"),
                    })?);
                }
            }
            continue;
        }
        let (s, v) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected `subset,coefficient`, got `{line}`"),
        })?;
        let mask = u32::from_str_radix(s.trim(), 16).map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad subset mask `{s}`"),
        })?;
        let val = v.trim().parse::<f64>().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad coefficient `{v}`"),
        })?;
        entries.push((mask, val));
    }
    let dim = dim.ok_or(Error::Parse {
        line: 0,
        msg: "missing `# n=.. p=..` header".into(),
    })?;
    let bias = bias.ok_or(Error::Parse {
        line: 0,
        msg: "missing bias in header".into(),
    })?;
    BiasedMeasure::new(bias)?;
    let mut coeffs = vec![0.0; 1usize << dim];
    for (mask, val) in entries {
        if mask as usize >= coeffs.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("subset {mask:#x} out of range for n={dim}"),
            });
        }
        coeffs[mask as usize] = val;
    }
    Ok(FourierCoeffs { dim, bias, coeffs })
}
