//! Truncated formal power series in `q` with exact integer coefficients.
//!
//! A [`QSeries`] tracks the coefficients of `q^0..=q^order`. Binary operations
//! truncate to the smaller of the two orders, so a result never claims more
//! precision than its least precise operand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::q_pow(0, order)
    }

    /// The monomial `q^k`, which is the zero series when `k > order`.
    pub fn q_pow(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    /// `1 - q^k`; for `k = 0` this is the zero series.
    pub fn one_minus_q_pow(k: usize, order: usize) -> Self {
        let mut s = Self::one(order);
        if k <= order {
            s.coeffs[k] -= 1;
        }
        s
    }

    /// Builds a series from the leading coefficients; missing ones are zero
    /// and extra ones are dropped.
    pub fn from_coeffs<T: Into<BigInt> + Clone>(order: usize, coeffs: &[T]) -> Self {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs.iter()) {
            *slot = c.clone().into();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^d`; zero beyond the truncation order.
    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        QSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Coefficientwise equality on `q^0..=q^order`, treating coefficients past
    /// either operand's own order as unknown (so `order` must not exceed both).
    pub fn eq_up_to(&self, other: &QSeries, order: usize) -> bool {
        let order = order.min(self.order()).min(other.order());
        self.coeffs[..=order] == other.coeffs[..=order]
    }

    /// Largest absolute coefficient difference over the shared order.
    pub fn max_abs_diff(&self, other: &QSeries) -> BigInt {
        let order = self.order().min(other.order());
        (0..=order)
            .map(|d| (&self.coeffs[d] - &other.coeffs[d]).abs())
            .max()
            .unwrap_or_default()
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut s = Self::zero(order);
        if k <= order {
            for d in 0..=order - k {
                s.coeffs[d + k] = self.coeffs[d].clone();
            }
        }
        s
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// The unique `c` with `b * c = a` up to the common order; `b` must have
    /// constant term `±1`.
    pub fn divide_unit(a: &QSeries, b: &QSeries) -> Result<QSeries> {
        let b0 = &b.coeffs[0];
        if !(b0.is_one() || (-b0).is_one()) {
            return Err(Error::NonUnitDenominator(b0.clone()));
        }
        let order = a.order().min(b.order());
        let mut c = vec![BigInt::zero(); order + 1];
        for d in 0..=order {
            let mut acc = a.coeffs[d].clone();
            for k in 1..=d {
                if !b.coeffs[k].is_zero() {
                    acc -= &b.coeffs[k] * &c[d - k];
                }
            }
            // b0 is its own inverse
            c[d] = acc * b0;
        }
        Ok(QSeries { coeffs: c })
    }

    fn zip_with(&self, other: &QSeries, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> QSeries {
        let order = self.order().min(other.order());
        QSeries {
            coeffs: (0..=order).map(|d| f(&self.coeffs[d], &other.coeffs[d])).collect(),
        }
    }
}

/// `(q)_n = (1-q)(1-q^2)...(1-q^n)`; `(q)_0 = 1`.
pub fn pochhammer(n: i64, order: usize) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::NegativePochhammer(n));
    }
    let mut s = QSeries::one(order);
    for k in 1..=n as usize {
        if k > order {
            break;
        }
        // multiply in place by (1 - q^k)
        for d in (k..=order).rev() {
            let t = s.coeffs[d - k].clone();
            s.coeffs[d] -= t;
        }
    }
    Ok(s)
}

/// `1/(q)_n`, computed as the generating function of partitions with parts
/// of size at most `n`.
pub fn inv_pochhammer(n: i64, order: usize) -> Result<QSeries> {
    if n < 0 {
        return Err(Error::NegativePochhammer(n));
    }
    let mut s = QSeries::one(order);
    for part in 1..=(n as usize).min(order) {
        for d in part..=order {
            let t = s.coeffs[d - part].clone();
            s.coeffs[d] += t;
        }
    }
    Ok(s)
}

/// `q^shift * prod (q)_a / prod (q)_b` over the listed indices. Every index
/// must be nonnegative; `shift` may exceed `order` (giving zero).
pub fn pochhammer_ratio(shift: i64, numer: &[i64], denom: &[i64], order: usize) -> Result<QSeries> {
    if shift < 0 {
        return Err(Error::ExponentUnderflow(shift));
    }
    let mut acc = QSeries::q_pow(shift as usize, order);
    if acc.is_zero() {
        return Ok(acc);
    }
    for &a in numer {
        acc = &acc * &pochhammer(a, order)?;
    }
    for &b in denom {
        acc = &acc * &inv_pochhammer(b, order)?;
    }
    Ok(acc)
}

/// `(1 - q^a)(1 - q^b) / (1 - q^c)`, taken as `0` when `c = 0` (which the
/// callers only hit with `a = 0` or `b = 0`).
pub fn binomial_bracket(a: i64, b: i64, c: i64, order: usize) -> Result<QSeries> {
    if a < 0 || b < 0 || c < 0 {
        return Err(Error::NegativePochhammer(a.min(b).min(c)));
    }
    if a == 0 || b == 0 || c == 0 {
        return Ok(QSeries::zero(order));
    }
    let numer = &QSeries::one_minus_q_pow(a as usize, order) * &QSeries::one_minus_q_pow(b as usize, order);
    QSeries::divide_unit(&numer, &QSeries::one_minus_q_pow(c as usize, order))
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: &QSeries) -> QSeries {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = d == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QSeriesRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(D::Error::custom(format!(
                "expected {} coefficients, got {}",
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(order: usize, c: &[i64]) -> QSeries {
        QSeries::from_coeffs(order, c)
    }

    /// Partitions of `d` into parts of size at most `n`, by direct recursion.
    fn count_partitions(d: usize, max_part: usize) -> u64 {
        if d == 0 {
            return 1;
        }
        (1..=max_part.min(d)).map(|p| count_partitions(d - p, p)).sum()
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(4, &[1, 1]) + s(4, &[1, -1]), s(4, &[2]));
        let x = s(5, &[3, 0, -2, 7]);
        assert_eq!(&x + &QSeries::zero(5), x);
        assert_eq!(s(3, &[0, 1, 1]) + s(3, &[0, 0, 1]), s(3, &[0, 1, 2]));
    }

    #[test]
    fn add_takes_min_order() {
        assert_eq!((s(3, &[1]) + s(7, &[1])).order(), 3);
    }

    #[test]
    fn mul_examples() {
        let geo = s(6, &[1; 7]);
        assert_eq!(s(6, &[1, -1]) * geo, QSeries::one(6));
        let x = s(5, &[2, -1, 4]);
        assert_eq!(&x * &QSeries::one(5), x);
        assert_eq!(s(4, &[1, 1]) * s(4, &[1, 1]), s(4, &[1, 2, 1]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(QSeries::one(5).shift(3), s(5, &[0, 0, 0, 1]));
        assert_eq!(s(5, &[1, 1]).shift(0), s(5, &[1, 1]));
        assert_eq!(s(5, &[0, 1]).shift(2), s(5, &[0, 0, 0, 1]));
        assert!(s(3, &[1, 1]).shift(4).is_zero());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0, 6).unwrap(), QSeries::one(6));
        assert_eq!(pochhammer(1, 6).unwrap(), s(6, &[1, -1]));
        assert_eq!(pochhammer(2, 6).unwrap(), s(6, &[1, -1, -1, 1]));
        assert_eq!(pochhammer(-1, 6), Err(Error::NegativePochhammer(-1)));
    }

    #[test]
    fn inv_pochhammer_examples() {
        assert_eq!(inv_pochhammer(0, 4).unwrap(), QSeries::one(4));
        // partitions of 0..4 into parts <= 2
        let expected: Vec<i64> = (0..=4).map(|d| count_partitions(d, 2) as i64).collect();
        assert_eq!(expected, vec![1, 1, 2, 2, 3]);
        assert_eq!(inv_pochhammer(2, 4).unwrap(), s(4, &expected));
    }

    #[test]
    fn inv_pochhammer_counts_partitions() {
        for n in 0..6 {
            let inv = inv_pochhammer(n, 20).unwrap();
            for d in 0..=20 {
                assert_eq!(inv.coeff(d), BigInt::from(count_partitions(d, n as usize)));
            }
        }
    }

    #[test]
    fn pochhammer_inverse_pairs() {
        for n in 0..=12 {
            let p = pochhammer(n, 40).unwrap();
            let inv = inv_pochhammer(n, 40).unwrap();
            assert_eq!(&p * &inv, QSeries::one(40), "n = {n}");
        }
    }

    #[test]
    fn inv_pochhammer_monotone_in_n() {
        let mut prev = inv_pochhammer(0, 30).unwrap();
        for n in 1..=12 {
            let cur = inv_pochhammer(n, 30).unwrap();
            for d in 0..=30 {
                assert!(cur.coeff(d) >= prev.coeff(d));
                assert!(!cur.coeff(d).is_negative());
            }
            prev = cur;
        }
    }

    #[test]
    fn divide_unit_examples() {
        let geo = QSeries::divide_unit(&QSeries::one(6), &s(6, &[1, -1])).unwrap();
        assert_eq!(geo, s(6, &[1; 7]));
        let q = QSeries::divide_unit(&s(6, &[1, 0, -1]), &s(6, &[1, -1])).unwrap();
        assert_eq!(q, s(6, &[1, 1]));
        let err = QSeries::divide_unit(&QSeries::one(6), &s(6, &[0, 1, -1]));
        assert_eq!(err, Err(Error::NonUnitDenominator(BigInt::zero())));
    }

    #[test]
    fn divide_by_negative_unit() {
        let c = QSeries::divide_unit(&s(5, &[2, 1]), &s(5, &[-1, 1])).unwrap();
        assert_eq!(&c * &s(5, &[-1, 1]), s(5, &[2, 1]));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let big = BigInt::from(u64::MAX) * BigInt::from(10);
        let x = QSeries::from_coeffs(2, &[BigInt::from(1), big.clone(), BigInt::from(-3)]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, format!("{{\"order\":2,\"coeffs\":[\"1\",\"{big}\",\"-3\"]}}"));
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<QSeries>("{\"order\":3,\"coeffs\":[\"1\"]}").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(3, &[1, -2, 0, 1]).to_string(), "1 - 2q + q^3 + O(q^4)");
        assert_eq!(QSeries::zero(2).to_string(), "0 + O(q^3)");
    }

    fn small_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec(-5i64..=5, 9).prop_map(|c| QSeries::from_coeffs(8, &c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn divide_unit_inverts_mul(a in small_series(), mut b in small_series(), neg in any::<bool>()) {
            b = QSeries::from_coeffs(8, &[if neg { -1 } else { 1 }]) + (&b - &QSeries::from_coeffs(8, &[b.coeff(0)]));
            let prod = &a * &b;
            prop_assert_eq!(QSeries::divide_unit(&prod, &b).unwrap(), a);
        }
    }
}
