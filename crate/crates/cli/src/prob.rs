//! Probability and grid-range parsing. Probabilities given as `a/b` are kept
//! as exact rationals alongside their float value, which lets the rational
//! code paths report quantities like 7/27 exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

#[derive(Debug, Clone)]
pub struct Prob {
    pub float: f64,
    pub exact: Option<BigRational>,
    /// The original token, echoed into reports.
    pub text: String,
}

impl FromStr for Prob {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim().to_string();
        if let Some((a, b)) = text.split_once('/') {
            let num = BigInt::from_str(a.trim()).map_err(|_| format!("bad numerator `{a}`"))?;
            let den = BigInt::from_str(b.trim()).map_err(|_| format!("bad denominator `{b}`"))?;
            if den == BigInt::from(0) {
                return Err("zero denominator".to_string());
            }
            let exact = BigRational::new(num, den);
            let float = exact.to_f64().ok_or("rational out of float range")?;
            return Ok(Prob {
                float,
                exact: Some(exact),
                text,
            });
        }
        let float: f64 = text.parse().map_err(|_| format!("bad probability `{text}`"))?;
        Ok(Prob {
            float,
            exact: None,
            text,
        })
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// A `var=start..end[:step]` range list, e.g. `n=500..10000:500,t=1..20`.
#[derive(Debug, Clone, Default)]
pub struct GridSpec {
    ranges: BTreeMap<String, (usize, usize, usize)>,
}

impl GridSpec {
    pub fn range(&self, var: &str) -> Option<(usize, usize, usize)> {
        self.ranges.get(var).copied()
    }

    /// Values of `var`, or the fallback singleton when absent.
    pub fn values_or(&self, var: &str, fallback: usize) -> Vec<usize> {
        match self.range(var) {
            Some((start, end, step)) => (start..=end).step_by(step).collect(),
            None => vec![fallback],
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .ranges
            .iter()
            .map(|(var, (start, end, step))| format!("{var}={start}..{end}:{step}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut ranges = BTreeMap::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (var, range) = part
                .split_once('=')
                .ok_or_else(|| format!("expected var=start..end[:step], got `{part}`"))?;
            let (span, step) = match range.split_once(':') {
                Some((span, step)) => {
                    let step: usize = step
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad step in `{part}`"))?;
                    (span, step)
                }
                None => (range, 1),
            };
            if step == 0 {
                return Err(format!("zero step in `{part}`"));
            }
            let (a, b) = span
                .split_once("..")
                .ok_or_else(|| format!("missing `..` in `{part}`"))?;
            let start: usize = a.trim().parse().map_err(|_| format!("bad start in `{part}`"))?;
            let end: usize = b.trim().parse().map_err(|_| format!("bad end in `{part}`"))?;
            if end < start {
                return Err(format!("empty range in `{part}`"));
            }
            ranges.insert(var.trim().to_string(), (start, end, step));
        }
        if ranges.is_empty() {
            return Err("empty grid specification".to_string());
        }
        Ok(GridSpec { ranges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational() {
        let p: Prob = "1/3".parse().unwrap();
        assert!(p.exact.is_some());
        assert!((p.float - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parses_decimal() {
        let p: Prob = "0.25".parse().unwrap();
        assert!(p.exact.is_none());
        assert_eq!(p.float, 0.25);
        assert!("x".parse::<Prob>().is_err());
        assert!("1/0".parse::<Prob>().is_err());
    }

    #[test]
    fn parses_grid() {
        let g: GridSpec = "n=500..2000:500,t=1..3".parse().unwrap();
        assert_eq!(g.values_or("n", 0), vec![500, 1000, 1500, 2000]);
        assert_eq!(g.values_or("t", 0), vec![1, 2, 3]);
        assert_eq!(g.values_or("k", 7), vec![7]);
        assert!("n=5..1".parse::<GridSpec>().is_err());
        assert!("n=1..5:0".parse::<GridSpec>().is_err());
    }
}
