//! Truncated exponential generating functions with exact rational
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum_{k=0}^{N} c_k t^k / k!`, stored as the `c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedEGF {
    coeffs: Vec<BigRational>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Row `n` of Pascal's triangle.
fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

impl TruncatedEGF {
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        TruncatedEGF { coeffs }
    }

    pub fn from_integers<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(values.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![BigRational::zero(); order + 1])
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// The series of `t` itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// `exp(a t)`: coefficients `a^k`.
    pub fn exp_scaled(a: &BigRational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut pow = BigRational::one();
        for _ in 0..=order {
            coeffs.push(pow.clone());
            pow = &pow * a;
        }
        Self::new(coeffs)
    }

    pub fn exp(order: usize) -> Self {
        Self::exp_scaled(&BigRational::one(), order)
    }

    /// `cosh(a t)` for integer `a`.
    pub fn cosh_scaled(a: i64, order: usize) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (&Self::exp_scaled(&rat(a), order) + &Self::exp_scaled(&rat(-a), order)).scale(&half)
    }

    /// `sinh(a t)` for integer `a`.
    pub fn sinh_scaled(a: i64, order: usize) -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (&Self::exp_scaled(&rat(a), order) - &Self::exp_scaled(&rat(-a), order)).scale(&half)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `f(a t)`.
    pub fn dilate(&self, a: &BigRational) -> Self {
        let mut pow = BigRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * &pow;
                pow = &pow * a;
                v
            })
            .collect();
        Self::new(coeffs)
    }

    /// Exact quotient `self / rhs`; needs an invertible constant term.
    pub fn try_div(&self, rhs: &TruncatedEGF) -> Result<TruncatedEGF> {
        if rhs.coeffs[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let order = self.order().min(rhs.order());
        let inv_b0 = rhs.coeffs[0].recip();
        let mut q: Vec<BigRational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let binom = binomial_row(n);
            let mut s = self.coeffs[n].clone();
            for k in 0..n {
                s -= BigRational::from_integer(binom[k].clone()) * &q[k] * &rhs.coeffs[n - k];
            }
            q.push(s * &inv_b0);
        }
        Ok(Self::new(q))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The coefficients as integers, if they all are.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Ordinary power-series coefficient `c_k / k!`.
    pub fn power_coeff(&self, k: usize) -> BigRational {
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        &self.coeffs[k] / BigRational::from_integer(fact)
    }

    /// Exact JSON-friendly representation.
    pub fn to_repr(&self) -> SeriesRepr {
        SeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(RationalRepr::from).collect(),
        }
    }

    pub fn from_repr(repr: &SeriesRepr) -> Result<Self> {
        let coeffs = repr
            .coeffs
            .iter()
            .map(BigRational::try_from)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != repr.order + 1 {
            return Err(Error::InvalidInput(format!(
                "order {} but {} coefficients",
                repr.order,
                coeffs.len()
            )));
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for TruncatedEGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] + O(t^{})", parts.join(", "), self.order() + 1)
    }
}

impl Add for &TruncatedEGF {
    type Output = TruncatedEGF;

    fn add(self, rhs: &TruncatedEGF) -> TruncatedEGF {
        TruncatedEGF::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TruncatedEGF {
    type Output = TruncatedEGF;

    fn sub(self, rhs: &TruncatedEGF) -> TruncatedEGF {
        TruncatedEGF::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TruncatedEGF {
    type Output = TruncatedEGF;

    fn neg(self) -> TruncatedEGF {
        TruncatedEGF::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul for &TruncatedEGF {
    type Output = TruncatedEGF;

    /// Binomial convolution, truncated to the smaller order.
    fn mul(self, rhs: &TruncatedEGF) -> TruncatedEGF {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| {
                let binom = binomial_row(n);
                let mut s = BigRational::zero();
                for k in 0..=n {
                    let (a, b) = (&self.coeffs[k], &rhs.coeffs[n - k]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    s += BigRational::from_integer(binom[k].clone()) * a * b;
                }
                s
            })
            .collect();
        TruncatedEGF::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedEGF {
            type Output = TruncatedEGF;
            fn $m(self, rhs: TruncatedEGF) -> TruncatedEGF {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A rational as decimal numerator/denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalRepr> for BigRational {
    type Error = Error;

    fn try_from(r: &RationalRepr) -> Result<Self> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|e| Error::InvalidInput(format!("bad integer {s:?}: {e}")))
        };
        let den = parse(&r.den)?;
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(BigRational::new(parse(&r.num)?, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub order: usize,
    pub coeffs: Vec<RationalRepr>,
}

impl Serialize for TruncatedEGF {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedEGF {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        TruncatedEGF::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}

/// Largest absolute coefficient, handy for diagnostics.
pub fn max_abs_coeff(s: &TruncatedEGF) -> BigRational {
    s.coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedEGF) -> Vec<i64> {
        s.to_integers()
            .unwrap()
            .into_iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn exp_and_hyperbolics() {
        assert_eq!(ints(&TruncatedEGF::exp(4)), vec![1, 1, 1, 1, 1]);
        assert_eq!(ints(&TruncatedEGF::cosh_scaled(1, 5)), vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(ints(&TruncatedEGF::sinh_scaled(2, 4)), vec![0, 2, 0, 8, 0]);
    }

    #[test]
    fn product_of_exponentials_adds_rates() {
        let a = TruncatedEGF::exp_scaled(&rat(2), 8);
        let b = TruncatedEGF::exp_scaled(&rat(-5), 8);
        assert_eq!(&a * &b, TruncatedEGF::exp_scaled(&rat(-3), 8));
    }

    #[test]
    fn secant_by_division() {
        let sech = TruncatedEGF::one(8).try_div(&TruncatedEGF::cosh_scaled(1, 8)).unwrap();
        assert_eq!(ints(&sech), vec![1, 0, -1, 0, 5, 0, -61, 0, 1385]);
        assert_eq!(
            TruncatedEGF::one(3).try_div(&TruncatedEGF::variable(3)),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn power_coefficients() {
        let e = TruncatedEGF::exp(5);
        assert_eq!(e.power_coeff(4), BigRational::new(BigInt::one(), BigInt::from(24)));
    }

    #[test]
    fn json_keeps_exact_values() {
        let s = TruncatedEGF::new(vec![rat(1), BigRational::new(BigInt::from(-3), BigInt::from(7))]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"order":1,"coeffs":[{"num":"1","den":"1"},{"num":"-3","den":"7"}]}"#
        );
        let back: TruncatedEGF = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series(order: usize) -> impl Strategy<Value = TruncatedEGF> {
            prop::collection::vec(-20i64..20, order + 1).prop_map(TruncatedEGF::from_integers)
        }

        proptest! {
            #[test]
            fn multiplication_commutes_and_distributes(a in series(7), b in series(7), c in series(7)) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            }

            #[test]
            fn division_inverts_multiplication(a in series(6), mut b in series(6)) {
                if b.coeff(0).is_zero() {
                    b = &b + &TruncatedEGF::one(6);
                }
                let q = a.try_div(&b).unwrap();
                prop_assert_eq!(&q * &b, a);
            }
        }
    }
}
