//! Truncated power series over exact rationals or `f64`.
//!
//! A [`TruncatedSeries<S>`] stores `c_0..=c_K`. The scalar type carries the
//! mode, so mixing rational and float series is a type error; the dynamic
//! [`DynSeries`] used for I/O reports it as [`Error::ModeMismatch`].

use std::fmt::{self, Debug};
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

/// Coefficient field of a series.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq {
    const MODE: Mode;

    fn from_int(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact sign: -1, 0 or 1.
    fn signum_i8(&self) -> i8;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn signum_i8(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| Error::invalid(format!("expected a number, got {v}")))
    }

    fn pow(&self, exp: usize) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn signum_i8(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn to_json(&self) -> Value {
        json!(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_int(n.as_i64().unwrap())),
            _ => Err(Error::invalid(format!("expected a \"num/den\" string, got {v}"))),
        }
    }
}

/// Always `num/den`, also for integers, so the JSON form is uniform.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Power series truncated at degree `K`, stored as `c_0..=c_K`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Debug> Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Series with exactly these coefficients; `K = coeffs.len() - 1`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a series needs at least the constant coefficient"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Pads with zeros or truncates so that the result has degree `k`.
    pub fn from_poly(mut coeffs: Vec<S>, k: usize) -> Self {
        coeffs.resize(k + 1, S::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(k: usize) -> Self {
        TruncatedSeries { coeffs: vec![S::zero(); k + 1] }
    }

    pub fn one(k: usize) -> Self {
        let mut s = Self::zero(k);
        s.coeffs[0] = S::one();
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient `k`, zero beyond the truncation degree.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    /// Re-truncates (or zero-pads) to degree `k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::from_poly(self.coeffs.clone(), k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.degree().max(other.degree());
        let coeffs = (0..=k).map(|i| self.coeff(i) + other.coeff(i)).collect();
        TruncatedSeries { coeffs }
    }

    pub fn scale(&self, s: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * s.clone()).collect();
        TruncatedSeries { coeffs }
    }

    /// Cauchy product truncated at degree `k`; operands are zero-padded.
    pub fn mul(&self, other: &Self, k: usize) -> Self {
        let mut out = vec![S::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `exp(self)` truncated at degree `k`, via `n·α_n = Σ_{j=1..n} j·b_j·α_{n−j}`.
    pub fn exp(&self, k: usize) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid("series_exp needs a zero constant term"));
        }
        let mut out = Vec::with_capacity(k + 1);
        out.push(S::one());
        for n in 1..=k {
            let mut acc = S::zero();
            for j in 1..=n.min(self.degree()) {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc + S::from_int(j as i64) * self.coeffs[j].clone() * out[n - j].clone();
            }
            out.push(acc / S::from_int(n as i64));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Formal logarithm of a series with constant term 1, truncated at `k`.
    pub fn log(&self, k: usize) -> Result<Self> {
        if self.coeffs[0] != S::one() {
            return Err(Error::invalid("series log needs constant term 1"));
        }
        let mut out = vec![S::zero(); k + 1];
        for n in 1..=k {
            // n·b_n = n·a_n − Σ_{j=1..n−1} j·b_j·a_{n−j}
            let mut acc = S::from_int(n as i64) * self.coeff(n);
            for j in 1..n {
                acc = acc - S::from_int(j as i64) * out[j].clone() * self.coeff(n - j);
            }
            out[n] = acc / S::from_int(n as i64);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `a(z) ↦ a(s·z)`.
    pub fn scale_arg(&self, s: &S) -> Self {
        let mut pow = S::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.clone() * pow.clone());
            pow = pow * s.clone();
        }
        TruncatedSeries { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn to_f64(&self) -> TruncatedSeries<f64> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": S::MODE.as_str(),
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    /// Rows `k,c_k` under a `k,coeff` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,coeff\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{k},{}\n", scalar_text(c)));
        }
        out
    }
}

pub(crate) fn scalar_text<S: Scalar>(c: &S) -> String {
    match c.to_json() {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

impl TruncatedSeries<f64> {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let k = self.degree().max(other.degree());
        (0..=k)
            .map(|i| (self.coeff(i) - other.coeff(i)).abs())
            .fold(0.0, f64::max)
    }
}

/// A series whose mode is only known at run time (JSON input).
#[derive(Clone, Debug, PartialEq)]
pub enum DynSeries {
    Rational(TruncatedSeries<Rational>),
    Float(TruncatedSeries<f64>),
}

impl DynSeries {
    pub fn mode(&self) -> Mode {
        match self {
            DynSeries::Rational(_) => Mode::Rational,
            DynSeries::Float(_) => Mode::Float,
        }
    }

    pub fn mul(&self, other: &DynSeries, k: usize) -> Result<DynSeries> {
        match (self, other) {
            (DynSeries::Rational(a), DynSeries::Rational(b)) => Ok(DynSeries::Rational(a.mul(b, k))),
            (DynSeries::Float(a), DynSeries::Float(b)) => Ok(DynSeries::Float(a.mul(b, k))),
            _ => Err(Error::ModeMismatch {
                left: self.mode().as_str(),
                right: other.mode().as_str(),
            }),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DynSeries::Rational(s) => s.to_json(),
            DynSeries::Float(s) => s.to_json(),
        }
    }

    pub fn from_json(v: &Value) -> Result<DynSeries> {
        let mode: Mode = serde_json::from_value(v.get("mode").cloned().unwrap_or(Value::Null))
            .map_err(|_| Error::invalid("series JSON needs \"mode\": \"rational\" | \"float\""))?;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("series JSON needs a \"coeffs\" array"))?;
        fn collect<S: Scalar>(items: &[Value]) -> Result<TruncatedSeries<S>> {
            TruncatedSeries::new(items.iter().map(S::from_json).collect::<Result<_>>()?)
        }
        Ok(match mode {
            Mode::Rational => DynSeries::Rational(collect(coeffs)?),
            Mode::Float => DynSeries::Float(collect(coeffs)?),
        })
    }
}

/// Shorthand for building exact coefficients in tests and examples.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(v: &[(i64, i64)]) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn mul_matches_hand_expansion() {
        // (1 − z)(1 + z + z²/2 + z³/6) = 1 − z²/2 − z³/3
        let a = rs(&[(1, 1), (-1, 1)]);
        let b = rs(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        assert_eq!(a.mul(&b, 3), rs(&[(1, 1), (0, 1), (-1, 2), (-1, 3)]));
    }

    #[test]
    fn mul_identity_and_annihilator() {
        let a = rs(&[(3, 2), (-1, 7), (5, 1)]);
        assert_eq!(a.mul(&TruncatedSeries::one(2), 2), a);
        assert_eq!(TruncatedSeries::zero(2).mul(&a, 2), TruncatedSeries::zero(2));
    }

    #[test]
    fn exp_of_z() {
        let z = rs(&[(0, 1), (1, 1)]);
        assert_eq!(
            z.exp(4).unwrap(),
            rs(&[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)])
        );
        assert_eq!(TruncatedSeries::<Rational>::zero(3).exp(3).unwrap(), TruncatedSeries::one(3));
    }

    #[test]
    fn exp_matches_product_oracle() {
        // exp(−z²/2 − z³/3 − z⁴/4) against (1 − z)·e^z by plain polynomial product.
        let b = rs(&[(0, 1), (0, 1), (-1, 2), (-1, 3), (-1, 4)]);
        let oracle = rs(&[(1, 1), (-1, 1)]).mul(&rs(&[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)]), 4);
        assert_eq!(oracle, rs(&[(1, 1), (0, 1), (-1, 2), (-1, 3), (-1, 8)]));
        assert_eq!(b.exp(4).unwrap(), oracle);
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(rs(&[(1, 1), (1, 1)]).exp(3).is_err());
    }

    #[test]
    fn scale_arg_examples() {
        let a = rs(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(a.scale_arg(&rat(2, 1)), rs(&[(1, 1), (2, 1), (4, 1)]));
        assert_eq!(a.scale_arg(&rat(1, 1)), a);
        assert_eq!(a.scale_arg(&rat(0, 1)), rs(&[(1, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn eval_examples() {
        let a = rs(&[(1, 1), (1, 1), (1, 1)]);
        assert_eq!(a.eval(&rat(1, 1)), rat(3, 1));
        assert_eq!(a.eval(&rat(0, 1)), rat(1, 1));

        let one_minus_z = TruncatedSeries::new(vec![1.0, -1.0]).unwrap();
        let ez = TruncatedSeries::new(vec![0.0, 1.0]).unwrap().exp(20).unwrap();
        let f = one_minus_z.mul(&ez, 20);
        assert!(f.eval(&1.0).abs() < 1e-12);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let a = DynSeries::Rational(rs(&[(1, 1)]));
        let b = DynSeries::Float(TruncatedSeries::new(vec![1.0]).unwrap());
        assert!(matches!(a.mul(&b, 0), Err(Error::ModeMismatch { .. })));
        assert!(a.mul(&a, 0).is_ok());
    }

    #[test]
    fn json_and_csv_forms() {
        let a = rs(&[(1, 1), (0, 1), (-1, 4)]);
        let v = a.to_json();
        assert_eq!(v, json!({"mode": "rational", "coeffs": ["1/1", "0/1", "-1/4"]}));
        assert_eq!(DynSeries::from_json(&v).unwrap(), DynSeries::Rational(a.clone()));
        assert_eq!(a.to_csv(), "k,coeff\n0,1/1\n1,0/1\n2,-1/4\n");

        let f = TruncatedSeries::new(vec![1.0, 0.0, -0.25]).unwrap();
        let v = f.to_json();
        assert_eq!(v["mode"], "float");
        assert_eq!(DynSeries::from_json(&v).unwrap(), DynSeries::Float(f));
        assert!(DynSeries::from_json(&json!({"mode": "complex", "coeffs": []})).is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -3/9 ").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_series(k: usize, zero_const: bool) -> impl Strategy<Value = TruncatedSeries<Rational>> {
        proptest::collection::vec(arb_rational(), k + 1).prop_map(move |mut c| {
            if zero_const {
                c[0] = rat(0, 1);
            }
            TruncatedSeries::new(c).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exp_is_a_homomorphism(
            (k, b, c) in (0usize..=12).prop_flat_map(|k| (Just(k), arb_series(k, true), arb_series(k, true)))
        ) {
            let lhs = b.add(&c).exp(k).unwrap();
            let rhs = b.exp(k).unwrap().mul(&c.exp(k).unwrap(), k);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn log_inverts_exp(b in arb_series(10, true)) {
            let a = b.exp(10).unwrap();
            prop_assert_eq!(a.log(10).unwrap(), b);
        }

        #[test]
        fn scale_arg_distributes_over_mul(a in arb_series(8, false), b in arb_series(8, false), s in arb_rational()) {
            let lhs = a.mul(&b, 8).scale_arg(&s);
            let rhs = a.scale_arg(&s).mul(&b.scale_arg(&s), 8);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
