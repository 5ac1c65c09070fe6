//! Exact truncated power series, integer rational functions in `u`, and the
//! generating functions built from them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scheme::{Scheme, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("unknown chain generating function `{0}`")]
    UnknownKind(String),
    #[error("denominator vanishes at u = 0")]
    SingularAtZero,
    #[error("series has a nonzero constant term")]
    NonzeroConstant,
    #[error("series is not invertible")]
    NotInvertible,
    #[error("catalog mixes degrees {0} and {1}")]
    MixedDegrees(usize, usize),
}

/// Coefficients `c_0, …, c_n` of a series truncated after order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        PowerSeries { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I, order: usize) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The indeterminate itself.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `z^n`.
    pub fn shift(&self, n: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); n.min(order + 1)];
        coeffs.extend(self.coeffs.iter().take((order + 1).saturating_sub(n)).cloned());
        PowerSeries { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PowerSeries::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = inv0.clone();
        for m in 1..=n {
            let s: BigRational = (1..=m).map(|j| &self.coeffs[j] * &out[m - j]).sum();
            out[m] = -s * &inv0;
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self(inner)`, for `inner` without constant term.
    pub fn compose(&self, inner: &PowerSeries) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = PowerSeries::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &(&acc * &inner) + &PowerSeries::constant(c.clone(), order);
        }
        Ok(acc)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    /// Value of the truncated polynomial at `x`.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

fn binary<F: Fn(&BigRational, &BigRational) -> BigRational>(a: &PowerSeries, b: &PowerSeries, f: F) -> PowerSeries {
    let order = a.order().min(b.order());
    PowerSeries { coeffs: (0..=order).map(|i| f(&a.coeffs[i], &b.coeffs[i])).collect() }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        binary(self, rhs, |x, y| x + y)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        binary(self, rhs, |x, y| x - y)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }
}

/// Writes a rational as `p` or `p/q`.
pub fn fraction(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let coef = if a.is_one() && n > 0 { String::new() } else { fraction(&a) };
            match n {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}z")?,
                _ => write!(f, "{coef}z^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| c.into()).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `c·u^n`.
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v.push(c);
        Self::new(v)
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> BigInt {
        self.0.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Exact value at `p(s)` as a series.
    pub fn eval_series(&self, s: &PowerSeries) -> PowerSeries {
        let order = s.order();
        let mut acc = PowerSeries::zero(order);
        for c in self.0.iter().rev() {
            acc = &(&acc * s) + &PowerSeries::constant(BigRational::from_integer(c.clone()), order);
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &BigRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut coeffs: Vec<BigRational> = self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut m = 0;
        while coeffs.len() > 1 {
            // synthetic division by (u - r), highest degree first
            let n = coeffs.len() - 1;
            let mut q = vec![BigRational::zero(); n];
            let mut carry = BigRational::zero();
            for i in (0..=n).rev() {
                let v = &coeffs[i] + &carry * r;
                if i == 0 {
                    carry = v;
                } else {
                    q[i - 1] = v.clone();
                    carry = v;
                }
            }
            if !carry.is_zero() {
                break;
            }
            coeffs = q;
            m += 1;
        }
        m
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let z = BigInt::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + rhs.0.get(i).unwrap_or(&z)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let z = BigInt::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - rhs.0.get(i).unwrap_or(&z)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            let coef = if a.is_one() && n > 0 { String::new() } else { a.to_string() };
            match n {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}u")?,
                _ => write!(f, "{coef}u^{n}")?,
            }
        }
        Ok(())
    }
}

/// `num(u) / den(u)` with `den(0) ≠ 0`.
#[derive(Clone, Debug)]
pub struct RationalFunctionU {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunctionU {
    pub fn new(num: Poly, den: Poly) -> Result<Self, SeriesError> {
        if den.constant_term().is_zero() {
            return Err(SeriesError::SingularAtZero);
        }
        Ok(RationalFunctionU { num, den })
    }

    pub fn one() -> Self {
        RationalFunctionU { num: Poly::one(), den: Poly::one() }
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunctionU { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Taylor coefficients at `u = 0`.
    pub fn expand(&self, order: usize) -> PowerSeries {
        self.substitute(&PowerSeries::variable(order)).expect("denominator is a unit")
    }

    /// `num(s) / den(s)` for a series `s` without constant term.
    pub fn substitute(&self, s: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        if !s.coeff(0).is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.num.eval_series(s);
        let d = self.den.eval_series(s).reciprocal()?;
        Ok(&n * &d)
    }

    /// Order of the pole at `r` after cancellation (negative for a zero).
    pub fn pole_order(&self, r: &BigRational) -> i64 {
        self.den.root_multiplicity(r) as i64 - self.num.root_multiplicity(r) as i64
    }
}

impl PartialEq for RationalFunctionU {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunctionU {}

impl Mul for &RationalFunctionU {
    type Output = RationalFunctionU;
    fn mul(self, rhs: &RationalFunctionU) -> RationalFunctionU {
        RationalFunctionU { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl Add for &RationalFunctionU {
    type Output = RationalFunctionU;
    fn add(self, rhs: &RationalFunctionU) -> RationalFunctionU {
        if self.den == rhs.den {
            return RationalFunctionU { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RationalFunctionU { num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den), den: &self.den * &rhs.den }
    }
}

impl Sub for &RationalFunctionU {
    type Output = RationalFunctionU;
    fn sub(self, rhs: &RationalFunctionU) -> RationalFunctionU {
        RationalFunctionU { num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den), den: &self.den * &rhs.den }
    }
}

impl fmt::Display for RationalFunctionU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `C((D+1)k+1, k) / ((D+1)k+1)`, the number of rooted melonic graphs with `2k` vertices.
pub fn fuss_catalan(dim: usize, k: usize) -> BigInt {
    let n = (dim + 1) * k + 1;
    binomial(n, k) / BigInt::from(n)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `T(z)`, the unique series with `T = 1 + z·T^{D+1}`.
pub fn melonic_series(dim: usize, order: usize) -> PowerSeries {
    let z = PowerSeries::variable(order);
    let one = PowerSeries::one(order);
    let mut t = one.clone();
    for _ in 0..=order {
        t = &one + &(&z * &t.pow(dim as u32 + 1));
    }
    t
}

/// `U(z) = z·T(z)^{D+1}`.
pub fn u_series(dim: usize, order: usize) -> PowerSeries {
    let t = melonic_series(dim, order);
    &PowerSeries::variable(order) * &t.pow(dim as u32 + 1)
}

/// The chain generating functions, counted by number of (D−1)-dipoles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainGf {
    /// `C`: any chain with fixed end colors `(i, j)`, length ≥ 1.
    C,
    /// `C⁺`: length ≥ 2.
    CPlus,
    /// `C⁺≠`: proper unbroken chains with distinct end colors.
    CPlusNe,
    /// `C⁺₌`: proper unbroken chains with equal end colors and a fixed secondary color.
    CPlusEq,
    /// `A`: all color sequences from a fixed left color.
    A,
    /// `A⁺`: same, length ≥ 2.
    APlus,
    /// `A₌`: fixed left color, right color equal to it.
    AEq,
    /// `A≠`: fixed left color and a fixed distinct right color.
    ANe,
    /// `B⁺₌`: proper broken chains with equal end colors.
    BPlusEq,
    /// `B⁺≠`: proper broken chains with fixed distinct end colors.
    BPlusNe,
}

impl ChainGf {
    pub const ALL: [ChainGf; 10] = [
        ChainGf::C,
        ChainGf::CPlus,
        ChainGf::CPlusNe,
        ChainGf::CPlusEq,
        ChainGf::A,
        ChainGf::APlus,
        ChainGf::AEq,
        ChainGf::ANe,
        ChainGf::BPlusEq,
        ChainGf::BPlusNe,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ChainGf::C => "C",
            ChainGf::CPlus => "C+",
            ChainGf::CPlusNe => "C+!=",
            ChainGf::CPlusEq => "C+=",
            ChainGf::A => "A",
            ChainGf::APlus => "A+",
            ChainGf::AEq => "A=",
            ChainGf::ANe => "A!=",
            ChainGf::BPlusEq => "B+=",
            ChainGf::BPlusNe => "B+!=",
        }
    }
}

impl FromStr for ChainGf {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .replace('⁺', "+")
            .replace('≠', "!=")
            .replace('₌', "=")
            .replace("ne", "!=")
            .replace("eq", "=")
            .replace("plus", "+")
            .replace(['_', ' '], "");
        ChainGf::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| SeriesError::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for ChainGf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn big(x: usize) -> BigInt {
    BigInt::from(x)
}

/// `1 − D·u`.
fn one_minus_du(dim: usize) -> Poly {
    Poly::new(vec![BigInt::one(), -big(dim)])
}

/// `1 − u²`.
fn one_minus_u2() -> Poly {
    Poly::from_i64(&[1, 0, -1])
}

pub fn chain_gf(kind: ChainGf, dim: usize) -> RationalFunctionU {
    let d = big(dim);
    let u = |n: usize, c: BigInt| Poly::monomial(c, n);
    let (num, den) = match kind {
        ChainGf::C => (u(1, BigInt::one()), Poly::from_i64(&[1, -1])),
        ChainGf::CPlus => (u(2, BigInt::one()), Poly::from_i64(&[1, -1])),
        ChainGf::CPlusNe => (u(3, BigInt::one()), one_minus_u2()),
        ChainGf::CPlusEq => (u(2, BigInt::one()), one_minus_u2()),
        ChainGf::A => (u(1, d.clone()), one_minus_du(dim)),
        ChainGf::APlus => (u(2, &d * &d), one_minus_du(dim)),
        ChainGf::AEq => (u(2, d), &Poly::from_i64(&[1, 1]) * &one_minus_du(dim)),
        ChainGf::ANe => (u(1, BigInt::one()), &Poly::from_i64(&[1, 1]) * &one_minus_du(dim)),
        ChainGf::BPlusEq => (u(3, &d * big(dim - 1)), &one_minus_u2() * &one_minus_du(dim)),
        ChainGf::BPlusNe => (u(2, big(dim - 1)), &one_minus_u2() * &one_minus_du(dim)),
    };
    RationalFunctionU::new(num, den).expect("denominators are units at 0")
}

/// `G_S(u) = u^p·(B⁺₌)^{b₌}·(C⁺₌)^{c₌}·(B⁺≠)^{b≠}·(C⁺≠)^{c≠}`.
pub fn scheme_gf(sig: &Signature, dim: usize) -> RationalFunctionU {
    let up = RationalFunctionU { num: Poly::monomial(BigInt::one(), sig.p), den: Poly::one() };
    let factors = [
        (ChainGf::BPlusEq, sig.broken_equal),
        (ChainGf::CPlusEq, sig.unbroken_equal),
        (ChainGf::BPlusNe, sig.broken_distinct),
        (ChainGf::CPlusNe, sig.unbroken_distinct),
    ];
    factors.iter().fold(up, |acc, &(g, e)| &acc * &chain_gf(g, dim).pow(e as u32))
}

/// `u^p·D^{b₌}(D−1)^b·u^{b₌+c≠+2b+2c} / ((1−Du)^b (1−u²)^{b+c})`.
pub fn scheme_gf_closed(sig: &Signature, dim: usize) -> RationalFunctionU {
    let b = sig.broken();
    let c = sig.unbroken();
    let coef = num::pow(big(dim), sig.broken_equal) * num::pow(big(dim - 1), b);
    let exp = sig.p + sig.broken_equal + sig.unbroken_distinct + 2 * b + 2 * c;
    RationalFunctionU {
        num: Poly::monomial(coef, exp),
        den: &one_minus_du(dim).pow(b as u32) * &one_minus_u2().pow((b + c) as u32),
    }
}

/// `T(z)·Σ_s G_s(U(z))` over a catalog of schemes of one degree, root color 0.
pub fn assemble_degree_series(dim: usize, catalog: &[Scheme], order: usize) -> Result<PowerSeries, SeriesError> {
    if let Some(first) = catalog.first() {
        let d0 = first.degree();
        if let Some(other) = catalog.iter().map(Scheme::degree).find(|&d| d != d0) {
            return Err(SeriesError::MixedDegrees(d0, other));
        }
    }
    let t = melonic_series(dim, order);
    let u = u_series(dim, order);
    let mut total = PowerSeries::zero(order);
    for s in catalog {
        total = &total + &scheme_gf(&s.signature(), dim).substitute(&u)?;
    }
    Ok(&t * &total)
}

/// `T·C(D,2)·U² / ((1 − U²)(1 − D·U))`.
pub fn closed_form_f_dminus2(dim: usize, order: usize) -> PowerSeries {
    let f = RationalFunctionU {
        num: Poly::monomial(binomial(dim, 2), 2),
        den: &one_minus_u2() * &one_minus_du(dim),
    };
    let t = melonic_series(dim, order);
    let u = u_series(dim, order);
    &t * &f.substitute(&u).expect("U has no constant term")
}

/// Exact `gcd`-reduced ratio `a/b` of two integers.
pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Least common multiple of the denominators of a series.
pub fn common_denominator(s: &PowerSeries) -> BigInt {
    s.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.integer_coeffs().unwrap().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn melonic_coefficients() {
        assert_eq!(ints(&melonic_series(3, 4)), vec![1, 1, 4, 22, 140]);
        assert_eq!(melonic_series(4, 2).coeff(2), BigRational::from_integer(5.into()));
        for d in 3..=7 {
            let t = melonic_series(d, 12);
            for k in 0..=12 {
                assert_eq!(t.coeff(k), BigRational::from_integer(fuss_catalan(d, k)));
            }
            let u = u_series(d, 12);
            assert_eq!(&t - &u, PowerSeries::one(12));
        }
    }

    #[test]
    fn chain_gf_identities() {
        let d = 3;
        let g = |k| chain_gf(k, d);
        let dd = RationalFunctionU { num: Poly::from_i64(&[d as i64]), den: Poly::one() };
        assert_eq!(&g(ChainGf::AEq) + &(&dd * &g(ChainGf::ANe)), g(ChainGf::A));
        assert_eq!(&g(ChainGf::BPlusEq) + &(&dd * &g(ChainGf::CPlusEq)), g(ChainGf::AEq));
        let u = RationalFunctionU { num: Poly::from_i64(&[0, 1]), den: Poly::one() };
        assert_eq!(&(&g(ChainGf::ANe) - &u) - &g(ChainGf::CPlusNe), g(ChainGf::BPlusNe));
        assert_eq!(ints(&g(ChainGf::BPlusNe).expand(5)), vec![0, 0, 2, 6, 20, 60]);
        assert_eq!(ints(&g(ChainGf::BPlusEq).expand(4)), vec![0, 0, 0, 6, 18]);
        assert_eq!("B+!=".parse::<ChainGf>(), Ok(ChainGf::BPlusNe));
        assert_eq!("c_plus_eq".parse::<ChainGf>(), Ok(ChainGf::CPlusEq));
        assert!("X".parse::<ChainGf>().is_err());
    }

    #[test]
    fn scheme_gf_examples() {
        let sig = Signature { p: 2, broken_equal: 0, broken_distinct: 0, unbroken_equal: 0, unbroken_distinct: 0 };
        assert_eq!(scheme_gf(&sig, 3), RationalFunctionU { num: Poly::from_i64(&[0, 0, 1]), den: Poly::one() });
        let sig = Signature { p: 1, unbroken_distinct: 1, ..sig };
        assert_eq!(
            scheme_gf(&sig, 3),
            RationalFunctionU { num: Poly::from_i64(&[0, 0, 0, 0, 1]), den: Poly::from_i64(&[1, 0, -1]) }
        );
    }

    #[test]
    fn closed_form_leading_terms() {
        assert_eq!(ints(&closed_form_f_dminus2(3, 3)), vec![0, 0, 3, 36]);
        for d in 3..=6 {
            assert_eq!(closed_form_f_dminus2(d, 2).coeff(2), BigRational::from_integer(binomial(d, 2)));
        }
    }

    #[test]
    fn pole_orders() {
        let r = ratio(1, 3);
        assert_eq!(chain_gf(ChainGf::BPlusNe, 3).pole_order(&r), 1);
        assert_eq!(chain_gf(ChainGf::CPlusNe, 3).pole_order(&r), 0);
        assert_eq!(chain_gf(ChainGf::BPlusNe, 3).pow(3).pole_order(&r), 3);
    }

    #[test]
    fn display() {
        assert_eq!(PowerSeries::from_integers([0, 0, 3, -36], 3).to_string(), "3z^2 - 36z^3 + O(z^4)");
        assert_eq!(fraction(&ratio(6, 4)), "3/2");
    }
}
