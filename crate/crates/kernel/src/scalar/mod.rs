//! Exact scalar tower: a + b*sqrt2 with a, b drawn from the rational function
//! field Q(q) (formal mode) or a cyclotomic field Q[q]/(Phi_n) (root mode).
//!
//! Every scalar is canonical on construction, so equality is structural and
//! zero iff both components are zero. Mixing modes panics: a computation fixes
//! its coefficient mode up front and never crosses it.

mod cyclo;
mod laurent;
mod parse;

pub use cyclo::{cyclotomic_poly, totient, CycloElem};
pub use laurent::{LaurentFraction, LaurentPoly};
pub use parse::ParseScalarError;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;
use std::fmt;

/// Coefficient mode for the q-part of the tower.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum QMode {
    /// q transcendental: elements are reduced fractions of integer Laurent
    /// polynomials.
    Formal,
    /// q a primitive n-th root of unity: elements are residues mod Phi_n.
    /// Orders divisible by 8 are rejected at construction because sqrt2 then
    /// already lies in the coefficient field and the tower degenerates.
    RootOfUnity(u32),
}

impl QMode {
    pub fn validate(self) -> Result<Self, String> {
        match self {
            QMode::Formal => Ok(self),
            QMode::RootOfUnity(0) => Err("root-of-unity order must be positive".into()),
            QMode::RootOfUnity(n) if n % 8 == 0 => Err(format!(
                "root-of-unity order {} is divisible by 8; sqrt2 lies in that field and the \
                 scalar tower degenerates",
                n
            )),
            QMode::RootOfUnity(_) => Ok(self),
        }
    }
}

/// One component of the tower: an element of K_q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KqElem {
    Formal(LaurentFraction),
    Cyclo(CycloElem),
}

impl KqElem {
    pub fn zero(mode: QMode) -> Self {
        match mode {
            QMode::Formal => KqElem::Formal(LaurentFraction::zero()),
            QMode::RootOfUnity(n) => KqElem::Cyclo(CycloElem::zero(n)),
        }
    }

    pub fn one(mode: QMode) -> Self {
        match mode {
            QMode::Formal => KqElem::Formal(LaurentFraction::one()),
            QMode::RootOfUnity(n) => KqElem::Cyclo(CycloElem::one(n)),
        }
    }

    pub fn from_int(mode: QMode, k: i64) -> Self {
        match mode {
            QMode::Formal => KqElem::Formal(LaurentFraction::from_int(k)),
            QMode::RootOfUnity(n) => KqElem::Cyclo(CycloElem::from_int(n, k)),
        }
    }

    pub fn from_rational(mode: QMode, r: BigRational) -> Self {
        match mode {
            QMode::Formal => {
                let num = LaurentPoly::constant(r.numer().clone());
                let den = LaurentPoly::constant(r.denom().clone());
                KqElem::Formal(LaurentFraction::new(num, den))
            }
            QMode::RootOfUnity(n) => KqElem::Cyclo(CycloElem::from_rational(n, r)),
        }
    }

    pub fn q_pow(mode: QMode, exp: i64) -> Self {
        match mode {
            QMode::Formal => KqElem::Formal(LaurentFraction::q_pow(exp)),
            QMode::RootOfUnity(n) => KqElem::Cyclo(CycloElem::q_pow(n, exp)),
        }
    }

    pub fn mode(&self) -> QMode {
        match self {
            KqElem::Formal(_) => QMode::Formal,
            KqElem::Cyclo(c) => QMode::RootOfUnity(c.n()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            KqElem::Formal(f) => f.is_zero(),
            KqElem::Cyclo(c) => c.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            KqElem::Formal(f) => f.is_one(),
            KqElem::Cyclo(c) => c.is_one(),
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.mode(), other.mode(), "mixed scalar modes");
    }

    pub fn neg(&self) -> Self {
        match self {
            KqElem::Formal(f) => KqElem::Formal(f.neg()),
            KqElem::Cyclo(c) => KqElem::Cyclo(c.neg()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        match (self, other) {
            (KqElem::Formal(a), KqElem::Formal(b)) => KqElem::Formal(a.add(b)),
            (KqElem::Cyclo(a), KqElem::Cyclo(b)) => KqElem::Cyclo(a.add(b)),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        match (self, other) {
            (KqElem::Formal(a), KqElem::Formal(b)) => KqElem::Formal(a.mul(b)),
            (KqElem::Cyclo(a), KqElem::Cyclo(b)) => KqElem::Cyclo(a.mul(b)),
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            KqElem::Formal(f) => KqElem::Formal(f.inv()),
            KqElem::Cyclo(c) => KqElem::Cyclo(c.inv()),
        }
    }

    /// Multiply by q^exp; in root mode the exponent wraps mod n.
    pub fn mul_q_pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return self.clone();
        }
        match self {
            KqElem::Formal(f) => KqElem::Formal(f.shift(exp)),
            KqElem::Cyclo(c) => KqElem::Cyclo(c.mul(&CycloElem::q_pow(c.n(), exp))),
        }
    }

    /// Integer Laurent test: unit denominator (formal) or all-integer residue
    /// coefficients (root mode).
    pub fn is_laurent_integral(&self) -> bool {
        match self {
            KqElem::Formal(f) => f.is_integer_laurent(),
            KqElem::Cyclo(c) => c.has_integer_coeffs(),
        }
    }

    /// Plain integer test: a q-free integer constant.
    pub fn is_plain_integer(&self) -> bool {
        match self {
            KqElem::Formal(f) => f.is_integer_constant(),
            KqElem::Cyclo(c) => c.as_rational().map(|r| r.is_integer()).unwrap_or(false),
        }
    }

    /// Rational value if the element is q-free.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            KqElem::Formal(f) => {
                if f.is_zero() {
                    return Some(BigRational::zero());
                }
                let n = f.num().as_constant()?;
                let d = f.den().as_constant()?;
                Some(BigRational::new(n, d))
            }
            KqElem::Cyclo(c) => c.as_rational(),
        }
    }

    /// Specialize q to 1 or -1 (formal mode only; None if the denominator
    /// vanishes there).
    pub fn eval_pm(&self, at_minus_one: bool) -> Option<BigRational> {
        match self {
            KqElem::Formal(f) => f.eval_pm(at_minus_one),
            KqElem::Cyclo(_) => panic!("eval_pm in root-of-unity mode"),
        }
    }
}

/// Element of the full tower: `a + b*sqrt2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    a: KqElem,
    b: KqElem,
}

impl Scalar {
    pub fn new(a: KqElem, b: KqElem) -> Self {
        a.check(&b);
        Scalar { a, b }
    }

    pub fn zero(mode: QMode) -> Self {
        Scalar { a: KqElem::zero(mode), b: KqElem::zero(mode) }
    }

    pub fn one(mode: QMode) -> Self {
        Scalar { a: KqElem::one(mode), b: KqElem::zero(mode) }
    }

    pub fn from_int(mode: QMode, k: i64) -> Self {
        Scalar { a: KqElem::from_int(mode, k), b: KqElem::zero(mode) }
    }

    pub fn from_rational(mode: QMode, r: BigRational) -> Self {
        Scalar { a: KqElem::from_rational(mode, r), b: KqElem::zero(mode) }
    }

    pub fn half(mode: QMode) -> Self {
        Self::from_rational(mode, BigRational::new(BigInt::from(1), BigInt::from(2)))
    }

    pub fn sqrt2(mode: QMode) -> Self {
        Scalar { a: KqElem::zero(mode), b: KqElem::one(mode) }
    }

    pub fn q_pow(mode: QMode, exp: i64) -> Self {
        Scalar { a: KqElem::q_pow(mode, exp), b: KqElem::zero(mode) }
    }

    pub fn from_kq(a: KqElem) -> Self {
        let mode = a.mode();
        Scalar { a, b: KqElem::zero(mode) }
    }

    pub fn rational_part(&self) -> &KqElem {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &KqElem {
        &self.b
    }

    pub fn mode(&self) -> QMode {
        self.a.mode()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn neg(&self) -> Self {
        Scalar { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Scalar { a: self.a.add(&other.a), b: self.b.add(&other.b) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Scalar { a: self.a.sub(&other.a), b: self.b.sub(&other.b) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) s
        let two = KqElem::from_int(self.mode(), 2);
        Scalar {
            a: self.a.mul(&other.a).add(&two.mul(&self.b.mul(&other.b))),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.a)),
        }
    }

    /// Inverse via the conjugate: 1/(a + b s) = (a - b s)/(a^2 - 2 b^2).
    /// The norm is nonzero for nonzero elements because sqrt2 is not in K_q
    /// (orders divisible by 8 are rejected at mode validation).
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero scalar");
        let two = KqElem::from_int(self.mode(), 2);
        let norm = self.a.mul(&self.a).sub(&two.mul(&self.b.mul(&self.b)));
        assert!(!norm.is_zero(), "zero norm: sqrt2 degenerate in this mode");
        let ninv = norm.inv();
        Scalar { a: self.a.mul(&ninv), b: self.b.neg().mul(&ninv) }
    }

    pub fn mul_q_pow(&self, exp: i64) -> Self {
        Scalar { a: self.a.mul_q_pow(exp), b: self.b.mul_q_pow(exp) }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&Scalar::from_int(self.mode(), k))
    }

    /// Rational value if the scalar is a plain rational (no q, no sqrt2).
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.b.is_zero() {
            return None;
        }
        self.a.as_rational()
    }

    /// Specialize q to 1 or -1 componentwise (formal mode only).
    pub fn eval_pm(&self, at_minus_one: bool) -> Option<(BigRational, BigRational)> {
        Some((self.a.eval_pm(at_minus_one)?, self.b.eval_pm(at_minus_one)?))
    }
}

// Display and FromStr both live in parse.rs so the grammar stays in one place.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::format_scalar(self, f)
    }
}

/// Target rings for integrality checks on structure constants.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IntegralityRing {
    /// Plain integers.
    Z,
    /// Integer Laurent polynomials in q (integer residues in root mode).
    ZLaurent,
    /// Z[sqrt2]: integer a-part and integer b-part.
    ZSqrt2,
    /// Z[q^!, sqrt2]: Laurent-integral a-part and b-part.
    ZLaurentSqrt2,
}

impl IntegralityRing {
    pub fn is_integral(self, s: &Scalar) -> bool {
        match self {
            IntegralityRing::Z => s.b.is_zero() && s.a.is_plain_integer(),
            IntegralityRing::ZLaurent => s.b.is_zero() && s.a.is_laurent_integral(),
            IntegralityRing::ZSqrt2 => s.a.is_plain_integer() && s.b.is_plain_integer(),
            IntegralityRing::ZLaurentSqrt2 => {
                s.a.is_laurent_integral() && s.b.is_laurent_integral()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntegralityRing::Z => "Z",
            IntegralityRing::ZLaurent => "Z-Laurent",
            IntegralityRing::ZSqrt2 => "Z-sqrt2",
            IntegralityRing::ZLaurentSqrt2 => "Z-Laurent-sqrt2",
        }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "Z" | "z" => Ok(IntegralityRing::Z),
            "Z-Laurent" | "z-laurent" | "zlaurent" => Ok(IntegralityRing::ZLaurent),
            "Z-sqrt2" | "z-sqrt2" | "zsqrt2" => Ok(IntegralityRing::ZSqrt2),
            "Z-Laurent-sqrt2" | "z-laurent-sqrt2" | "zlaurentsqrt2" => {
                Ok(IntegralityRing::ZLaurentSqrt2)
            }
            _ => Err(format!(
                "unknown ring '{}'; expected Z, Z-Laurent, Z-sqrt2, or Z-Laurent-sqrt2",
                s
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn sqrt2_squares_to_two() {
        for mode in [QMode::Formal, QMode::RootOfUnity(3)] {
            let s = Scalar::sqrt2(mode);
            assert_eq!(s.mul(&s), Scalar::from_int(mode, 2));
        }
    }

    #[test]
    fn conjugate_unit() {
        // (1 + sqrt2)(1 - sqrt2) = -1, so 1 + sqrt2 is a unit with inverse
        // -(1 - sqrt2) = sqrt2 - 1.
        let m = QMode::Formal;
        let u = Scalar::one(m).add(&Scalar::sqrt2(m));
        let v = Scalar::one(m).sub(&Scalar::sqrt2(m));
        assert_eq!(u.mul(&v), Scalar::from_int(m, -1));
        assert_eq!(u.inv(), Scalar::sqrt2(m).sub(&Scalar::one(m)));
        assert!(u.mul(&u.inv()).is_one());
    }

    #[test]
    fn sqrt2_inverse() {
        let m = QMode::Formal;
        let s = Scalar::sqrt2(m);
        // 1/sqrt2 = sqrt2/2
        assert_eq!(s.inv(), Scalar::half(m).mul(&Scalar::sqrt2(m)));
        assert_eq!(s.inv(), Scalar::from_str("(1/2)*sqrt2").unwrap());
    }

    #[test]
    fn root_mode_wraps_q() {
        let m = QMode::RootOfUnity(4);
        assert_eq!(Scalar::q_pow(m, 4), Scalar::one(m));
        assert_eq!(Scalar::q_pow(m, 2), Scalar::from_int(m, -1));
        assert_eq!(Scalar::q_pow(m, -1), Scalar::q_pow(m, 3));
        let x = Scalar::q_pow(m, 1);
        assert!(x.mul(&x.inv()).is_one());
    }

    #[test]
    fn mode_validation() {
        assert!(QMode::RootOfUnity(8).validate().is_err());
        assert!(QMode::RootOfUnity(16).validate().is_err());
        assert!(QMode::RootOfUnity(24).validate().is_err());
        assert!(QMode::RootOfUnity(0).validate().is_err());
        for n in [1u32, 2, 3, 4, 5, 6, 7, 9, 12] {
            assert!(QMode::RootOfUnity(n).validate().is_ok(), "n = {}", n);
        }
        assert!(QMode::Formal.validate().is_ok());
    }

    #[test]
    #[should_panic(expected = "mixed scalar modes")]
    fn mixed_modes_panic() {
        let x = Scalar::one(QMode::Formal);
        let y = Scalar::one(QMode::RootOfUnity(3));
        let _ = x.add(&y);
    }

    #[test]
    #[should_panic(expected = "inverse of zero")]
    fn zero_inverse_panics() {
        let _ = Scalar::zero(QMode::Formal).inv();
    }

    #[test]
    fn integrality_rings() {
        let m = QMode::Formal;
        let one = Scalar::one(m);
        let half = Scalar::half(m);
        let q = Scalar::q_pow(m, -2);
        let s2 = Scalar::sqrt2(m);
        assert!(IntegralityRing::Z.is_integral(&one));
        assert!(!IntegralityRing::Z.is_integral(&half));
        assert!(!IntegralityRing::Z.is_integral(&q));
        assert!(IntegralityRing::ZLaurent.is_integral(&q));
        assert!(!IntegralityRing::Z.is_integral(&s2));
        assert!(IntegralityRing::ZSqrt2.is_integral(&s2));
        assert!(!IntegralityRing::ZSqrt2.is_integral(&q.mul(&s2)));
        assert!(IntegralityRing::ZLaurentSqrt2.is_integral(&q.mul(&s2)));
        // Root mode: residues with integer coefficients are Laurent-integral.
        let r = QMode::RootOfUnity(4);
        assert!(IntegralityRing::ZLaurent.is_integral(&Scalar::q_pow(r, 3)));
        assert!(!IntegralityRing::ZLaurent.is_integral(&Scalar::half(r)));
        // (1+q)/2 at order 4 is not integral even though 1+q is.
        let x = Scalar::one(r).add(&Scalar::q_pow(r, 1)).mul(&Scalar::half(r));
        assert!(!IntegralityRing::ZLaurent.is_integral(&x));
    }

    #[test]
    fn formal_specialization() {
        let m = QMode::Formal;
        // (q^2 + q)/2 at q=1 is 1, at q=-1 is 0.
        let x = Scalar::q_pow(m, 2).add(&Scalar::q_pow(m, 1)).mul(&Scalar::half(m));
        let (a1, b1) = x.eval_pm(false).unwrap();
        assert_eq!(a1, BigRational::from(BigInt::from(1)));
        assert!(b1.is_zero());
        let (a2, _) = x.eval_pm(true).unwrap();
        assert!(a2.is_zero());
    }
}
