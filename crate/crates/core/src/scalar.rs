//! Arithmetic backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends
//! exist: [`BigRational`] (exact, used as ground truth) and `f64` (fast).
//! The mode is picked at run time by instantiating the generic code with
//! one or the other.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{IglError, Result};
use crate::poly::{self, DistanceKernel};

pub use num_rational::BigRational as Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithMode {
    Exact,
    Float,
}

impl fmt::Display for ArithMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithMode::Exact => f.write_str("exact"),
            ArithMode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for ArithMode {
    type Err = IglError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ArithMode::Exact),
            "float" => Ok(ArithMode::Float),
            other => Err(IglError::invalid(format!("unknown arithmetic mode '{other}'"))),
        }
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    const MODE: ArithMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_exact() -> bool {
        Self::MODE == ArithMode::Exact
    }

    /// Total order; floats never carry NaN inside this crate.
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact value as a reduced fraction, if this backend is exact.
    fn to_fraction(&self) -> Option<String>;

    /// Rounds values in `[0, span]` to the grid `2^(⌈log₂ span⌉ − 50)`, so
    /// that sums and differences of a few of them are exact. Positive values
    /// stay positive. Exact backends leave them alone.
    fn snap_to_grid(_values: &mut [&mut Self], _span: &Self) {}

    /// Polynomial product of coefficient vectors (lowest degree first).
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self>;

    /// `p(x)` at every point, by Horner.
    fn horner_many(coeffs: &[Self], points: &[Self]) -> Vec<Self> {
        points
            .iter()
            .map(|x| {
                let mut acc = Self::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            })
            .collect()
    }

    /// `out[j] = Σ_i kernel(points[j] + weights[i])`, the batched evaluation
    /// every shifted-weight query reduces to.
    fn kernel_sum_eval(
        kernel: DistanceKernel,
        weights: &[Self],
        points: &[Self],
    ) -> Result<Vec<Self>>;
}

impl Scalar for BigRational {
    const MODE: ArithMode = ArithMode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn to_fraction(&self) -> Option<String> {
        Some(format!("{}/{}", self.numer(), self.denom()))
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        poly::karatsuba(a, b)
    }
    // Horner on integer coefficients at x = p/q, homogenized by powers of q:
    // one reduction per point instead of one per step.
    fn horner_many(coeffs: &[Self], points: &[Self]) -> Vec<Self> {
        let Some((top, rest)) = coeffs.split_last() else {
            return vec![Zero::zero(); points.len()];
        };
        let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scale = |c: &BigRational| c.numer() * (&l / c.denom());
        let top = scale(top);
        let rest: Vec<BigInt> = rest.iter().map(scale).collect();
        points
            .iter()
            .map(|x| {
                let (p, q) = (x.numer(), x.denom());
                let mut acc = top.clone();
                let mut qp = BigInt::one();
                for c in rest.iter().rev() {
                    qp *= q;
                    acc = acc * p + c * &qp;
                }
                BigRational::new(acc, &l * qp)
            })
            .collect()
    }
    fn kernel_sum_eval(
        kernel: DistanceKernel,
        weights: &[Self],
        points: &[Self],
    ) -> Result<Vec<Self>> {
        let f = poly::sum_inverse_shifted(weights, kernel);
        poly::multipoint_eval(&f, points)
    }
}

impl Scalar for f64 {
    const MODE: ArithMode = ArithMode::Float;

    fn snap_to_grid(values: &mut [&mut Self], span: &Self) {
        if *span <= 0.0 || !span.is_finite() {
            return;
        }
        let q = 2f64.powi(span.log2().ceil() as i32 - 50);
        for v in values.iter_mut() {
            let k = (**v / q).round();
            **v = if k == 0.0 && **v > 0.0 { q } else { k * q };
        }
    }

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn to_fraction(&self) -> Option<String> {
        None
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        poly::fft_mul(a, b)
    }
    fn kernel_sum_eval(
        kernel: DistanceKernel,
        weights: &[Self],
        points: &[Self],
    ) -> Result<Vec<Self>> {
        poly::expansion::kernel_sum_eval_f64(kernel, weights, points)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale both down before dividing.
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
    ns / ds
}

/// Parses a weight given as an integer, a decimal (`1.25`, `3e-2`) or a
/// fraction `p/q`, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(IglError::invalid("empty number"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| IglError::invalid(format!("bad numerator in '{s}'")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| IglError::invalid(format!("bad denominator in '{s}'")))?;
        if q.is_zero() {
            return Err(IglError::invalid(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| IglError::invalid(format!("bad exponent in '{s}'")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(IglError::invalid(format!("bad number '{s}'")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(IglError::invalid(format!("bad number '{s}'")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).unwrap();
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4000 {
        return Err(IglError::invalid(format!("exponent out of range in '{s}'")));
    }
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Decimal rendering with `sig` significant digits.
pub fn format_decimal(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (sig as i32 - 1 - mag).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", sig - 1, v)
    }
}

/// Shortest-path distance with an explicit infinite variant.
#[derive(Clone, Debug, PartialEq)]
pub enum Dist<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Dist<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Dist::Finite(v) => Some(v),
            Dist::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    /// `kernel(d)`, with the convention that unreachable pairs contribute 0.
    pub fn kernel_value(&self, kernel: DistanceKernel) -> T {
        match self {
            Dist::Finite(d) => kernel.apply(d),
            Dist::Infinite => T::zero(),
        }
    }

    pub fn cmp_dist(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.total_cmp(b),
            (Dist::Finite(_), Dist::Infinite) => Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => Ordering::Equal,
        }
    }
}
