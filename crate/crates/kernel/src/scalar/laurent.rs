//! Integer-coefficient Laurent polynomials in q and reduced fractions thereof.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial with BigInt coefficients, sparse, no zero terms stored.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(exp, BigInt::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in it {
            let entry = terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Some(c) when the polynomial is a constant, including zero.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn min_exp(&self) -> i64 {
        *self.terms.keys().next().expect("min_exp of zero polynomial")
    }

    pub fn max_exp(&self) -> i64 {
        *self.terms.keys().next_back().expect("max_exp of zero polynomial")
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.values().next_back().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let entry = terms.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Evaluate at q = 1 or q = -1.
    pub fn eval_pm(&self, at_minus_one: bool) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            if at_minus_one && e.rem_euclid(2) == 1 {
                acc -= c;
            } else {
                acc += c;
            }
        }
        acc
    }

    /// Dense coefficient vector; requires min_exp == 0 (ordinary polynomial).
    fn to_dense(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        assert!(self.min_exp() >= 0, "to_dense on proper Laurent polynomial");
        let deg = self.max_exp() as usize;
        let mut v = vec![BigInt::zero(); deg + 1];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    fn from_dense(v: &[BigInt]) -> Self {
        Self::from_terms(v.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = abs.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{}", abs)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{}*q", abs)?,
                (_, true) => write!(f, "q^{}", e)?,
                (_, false) => write!(f, "{}*q^{}", abs, e)?,
            }
        }
        Ok(())
    }
}

// Dense integer polynomial helpers for gcd computation.

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn dense_degree(v: &[BigInt]) -> isize {
    v.len() as isize - 1
}

fn dense_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
    }
    g
}

fn dense_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = dense_content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

fn dense_mul_scalar(v: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    v.iter().map(|c| c * s).collect()
}

fn dense_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    dense_trim(&mut out);
    out
}

fn dense_shift_mul(v: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); k];
    out.extend(v.iter().cloned());
    out
}

/// Pseudo-remainder of a by b; b nonzero.
fn dense_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = dense_degree(b);
    assert!(db >= 0);
    let lb = b.last().unwrap().clone();
    let mut r = a.to_vec();
    dense_trim(&mut r);
    while dense_degree(&r) >= db {
        let dr = dense_degree(&r) as usize;
        let lr = r.last().unwrap().clone();
        let scaled = dense_mul_scalar(&r, &lb);
        let sub = dense_shift_mul(&dense_mul_scalar(b, &lr), dr - db as usize);
        r = dense_sub(&scaled, &sub);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Gcd in Z[x] including content, leading coefficient positive.
fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    let cg = dense_content(a).gcd(&dense_content(b));
    let mut p = dense_primitive(a);
    let mut q = dense_primitive(b);
    if dense_degree(&p) < dense_degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = dense_prem(&p, &q);
        if r.is_empty() {
            break;
        }
        p = q;
        q = dense_primitive(&r);
    }
    let mut g = dense_mul_scalar(&dense_primitive(&q), &cg);
    if g.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = g.iter().map(|c| -c).collect();
    }
    g
}

fn dense_divexact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return vec![];
    }
    let db = dense_degree(b);
    assert!(db >= 0, "division by zero polynomial");
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    dense_trim(&mut r);
    let mut quo = vec![BigInt::zero(); (dense_degree(&r) - db).max(0) as usize + 1];
    while !r.is_empty() && dense_degree(&r) >= db {
        let dr = dense_degree(&r) as usize;
        let lr = r.last().unwrap();
        let (c, rem) = lr.div_rem(lb);
        assert!(rem.is_zero(), "inexact polynomial division");
        quo[dr - db as usize] = c.clone();
        let sub = dense_shift_mul(&dense_mul_scalar(b, &c), dr - db as usize);
        r = dense_sub(&r, &sub);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    quo
}

/// Reduced fraction of Laurent polynomials.
///
/// Canonical form: denominator is an ordinary polynomial with nonzero constant
/// term, positive leading coefficient, and gcd(num, den) = 1 in Z[q] including
/// contents; any q-power unit lives in the numerator.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return LaurentFraction { num: LaurentPoly::zero(), den: LaurentPoly::one() };
        }
        // Push the denominator's q-power into the numerator.
        let v = den.min_exp();
        let den0 = den.shift(-v);
        let num0 = num.shift(-v);
        let u = num0.min_exp();
        let num_ord = num0.shift(-u);

        let nd = num_ord.to_dense();
        let dd = den0.to_dense();
        let g = dense_gcd(&nd, &dd);
        let (mut nq, mut dq) = if g.len() == 1 && g[0].is_one() {
            (nd, dd)
        } else {
            (dense_divexact(&nd, &g), dense_divexact(&dd, &g))
        };
        if dq.last().map(|c| c.is_negative()).unwrap_or(false) {
            nq = nq.iter().map(|c| -c).collect();
            dq = dq.iter().map(|c| -c).collect();
        }
        LaurentFraction {
            num: LaurentPoly::from_dense(&nq).shift(u),
            den: LaurentPoly::from_dense(&dq),
        }
    }

    pub fn zero() -> Self {
        LaurentFraction { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        LaurentFraction { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        LaurentFraction { num: LaurentPoly::constant(BigInt::from(n)), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        LaurentFraction { num: p, den: LaurentPoly::one() }
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::from_poly(LaurentPoly::q_pow(exp))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn neg(&self) -> Self {
        LaurentFraction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentFraction { num: self.num.shift(k), den: self.den.clone() }
    }

    /// Integer Laurent polynomial test: unit denominator.
    pub fn is_integer_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Integer constant test.
    pub fn is_integer_constant(&self) -> bool {
        self.den.is_one() && self.num.as_constant().is_some()
    }

    /// Value at q = 1 or q = -1 when the denominator does not vanish there.
    pub fn eval_pm(&self, at_minus_one: bool) -> Option<BigRational> {
        let d = self.den.eval_pm(at_minus_one);
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(self.num.eval_pm(at_minus_one), d))
    }
}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 {
                return write!(f, "({})", self.num);
            }
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/")?;
        if self.den.num_terms() > 1 {
            write!(f, "({})", self.den)
        } else {
            write!(f, "{}", self.den)
        }
    }
}
