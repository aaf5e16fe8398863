//! Probabilities that stay exact when they start out as fractions.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Absolute tolerance for floating-point normalization checks.
pub const PMF_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Probability {
    Exact(BigRational),
    Float(f64),
}

impl Probability {
    pub fn ratio(numer: u64, denom: u64) -> Self {
        Probability::Exact(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn one() -> Self {
        Probability::Exact(BigRational::one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Probability::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Probability::Exact(r) => r.is_zero(),
            Probability::Float(f) => *f == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Probability::Exact(r) => r.is_negative(),
            Probability::Float(f) => *f < 0.0 || f.is_nan(),
        }
    }
}

impl Mul for &Probability {
    type Output = Probability;

    fn mul(self, rhs: &Probability) -> Probability {
        match (self, rhs) {
            (Probability::Exact(a), Probability::Exact(b)) => Probability::Exact(a * b),
            _ => Probability::Float(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl FromStr for Probability {
    type Err = Error;

    /// Accepts `"a/b"` fractions and integers (kept exact) and decimal literals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad_prob(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad_prob(s))?;
            if d.is_zero() {
                return Err(bad_prob(s));
            }
            return Ok(Probability::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Probability::Exact(BigRational::from_integer(n)));
        }
        s.parse::<f64>().map(Probability::Float).map_err(|_| bad_prob(s))
    }
}

fn bad_prob(s: &str) -> Error {
    Error::Parse(format!("invalid probability {s:?}"))
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Probability::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Probability::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Checks that a list of probabilities is a distribution: exactly when every
/// entry is a fraction, otherwise within [`PMF_TOLERANCE`].
pub fn check_distribution(pmf: &[Probability], what: &str) -> Result<()> {
    if pmf.is_empty() {
        return Err(Error::Model(format!("{what}: empty distribution")));
    }
    if let Some(p) = pmf.iter().find(|p| p.is_negative()) {
        return Err(Error::Model(format!("{what}: invalid probability {p}")));
    }
    let exact: Option<BigRational> = pmf.iter().try_fold(BigRational::zero(), |acc, p| match p {
        Probability::Exact(r) => Some(acc + r),
        Probability::Float(_) => None,
    });
    match exact {
        Some(total) if total.is_one() => Ok(()),
        Some(total) => Err(Error::Model(format!("{what}: probabilities sum to {total}, not 1"))),
        None => {
            let total: f64 = pmf.iter().map(Probability::to_f64).sum();
            if (total - 1.0).abs() <= PMF_TOLERANCE {
                Ok(())
            } else {
                Err(Error::Model(format!("{what}: probabilities sum to {total}, not 1")))
            }
        }
    }
}

/// Shannon entropy in bits of a mass vector; zero masses contribute nothing.
pub fn entropy_bits<I>(masses: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    masses
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_exactly() {
        let p: Probability = "1/4".parse().unwrap();
        assert_eq!(p, Probability::ratio(1, 4));
        assert_eq!(p.to_string(), "1/4");
        let f: Probability = "0.25".parse().unwrap();
        assert_eq!(f, Probability::Float(0.25));
        assert!("1/0".parse::<Probability>().is_err());
        assert!("abc".parse::<Probability>().is_err());
    }

    #[test]
    fn exact_sum_must_be_one() {
        let third = Probability::ratio(1, 3);
        assert!(check_distribution(&[third.clone(), third.clone(), third.clone()], "x").is_ok());
        assert!(check_distribution(&[third.clone(), third], "x").is_err());
    }

    #[test]
    fn float_sum_uses_tolerance() {
        let ps = [Probability::Float(0.1), Probability::Float(0.2), Probability::Float(0.7)];
        assert!(check_distribution(&ps, "x").is_ok());
        assert!(check_distribution(&[Probability::Float(0.5)], "x").is_err());
        assert!(check_distribution(&[Probability::Float(-0.5), Probability::Float(1.5)], "x").is_err());
    }

    #[test]
    fn entropy_of_uniform() {
        assert!((entropy_bits([0.25; 4]) - 2.0).abs() < 1e-12);
        assert_eq!(entropy_bits([1.0, 0.0]), 0.0);
    }
}
