//! Arithmetic in Q[q]/(Phi_n(q)), the n-th cyclotomic field.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
///
/// Computed by dividing x^n - 1 by the cyclotomic polynomials of the proper
/// divisors of n; results are cached process-wide.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_divexact(&num, &phi_d);
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Euler totient, the residue-vector length for mode n.
pub fn totient(n: u32) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

fn poly_trim(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Exact division of integer polynomials with monic divisor.
fn poly_divexact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor not monic");
    if r.len() <= db {
        assert!(r.is_empty(), "inexact division");
        return vec![];
    }
    let mut quo = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        quo[dr - db] = c.clone();
        for i in 0..=db {
            let idx = dr - db + i;
            let t = &b[i] * &c;
            r[idx] -= t;
        }
        poly_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact division");
    quo
}

/// Residue class in Q[q]/(Phi_n(q)); coefficient vector has length phi(n).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloElem {
    n: u32,
    c: Vec<BigRational>,
}

impl CycloElem {
    pub fn zero(n: u32) -> Self {
        CycloElem { n, c: vec![BigRational::zero(); totient(n)] }
    }

    pub fn one(n: u32) -> Self {
        let mut e = Self::zero(n);
        e.c[0] = BigRational::one();
        e
    }

    pub fn from_rational(n: u32, r: BigRational) -> Self {
        let mut e = Self::zero(n);
        e.c[0] = r;
        e
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        Self::from_rational(n, BigRational::from(BigInt::from(k)))
    }

    /// The class of q^exp; exponent taken mod n since q^n = 1.
    pub fn q_pow(n: u32, exp: i64) -> Self {
        let e = exp.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        Self::reduce(n, coeffs)
    }

    /// Reduce an arbitrary coefficient vector mod Phi_n.
    fn reduce(n: u32, mut coeffs: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(n);
        let d = phi.len() - 1;
        while coeffs.len() > d {
            let top = coeffs.len() - 1;
            let lead = coeffs[top].clone();
            if !lead.is_zero() {
                for i in 0..=d {
                    let idx = top - d + i;
                    let t = BigRational::from(phi[i].clone()) * &lead;
                    coeffs[idx] -= t;
                }
            }
            coeffs.pop();
        }
        coeffs.resize(d, BigRational::zero());
        CycloElem { n, c: coeffs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "mixed cyclotomic orders");
    }

    pub fn neg(&self) -> Self {
        CycloElem { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        CycloElem {
            n: self.n,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = self.c.len();
        if d == 0 {
            return self.clone();
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        Self::reduce(self.n, prod)
    }

    /// Inverse by the extended Euclidean algorithm against Phi_n over Q.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let phi: Vec<BigRational> =
            cyclotomic_poly(self.n).iter().map(|c| BigRational::from(c.clone())).collect();
        let mut a = self.c.clone();
        rat_trim(&mut a);
        // Bezout: s*a + t*phi = gcd; gcd is a nonzero constant since Phi_n is
        // irreducible and a is a nonzero residue.
        let (g, s) = rat_ext_gcd(&a, &phi);
        assert_eq!(g.len(), 1, "residue shares a factor with the modulus");
        let ginv = g[0].recip();
        let inv: Vec<BigRational> = s.iter().map(|c| c * &ginv).collect();
        Self::reduce(self.n, inv)
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }
}

fn rat_trim(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Remainder and quotient over Q.
fn rat_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    rat_trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut quo = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = &r[dr] / &lead;
        quo[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            r[dr - db + i] -= t;
        }
        rat_trim(&mut r);
    }
    (quo, r)
}

/// Returns (gcd, s) with s*a ≡ gcd mod b.
fn rat_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rat_trim(&mut r0);
    rat_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = vec![];
    while !r1.is_empty() {
        let (q, r2) = rat_divmod(&r0, &r1);
        let s2 = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rat_trim(&mut out);
    out
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    rat_trim(&mut out);
    out
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
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
            match (e, unit) {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn totient_matches_degree() {
        for n in 1..=30u32 {
            assert_eq!(totient(n), cyclotomic_poly(n).len() - 1, "n = {}", n);
        }
    }

    #[test]
    fn q_power_order() {
        for n in [1u32, 2, 3, 4, 5, 6] {
            let qn = CycloElem::q_pow(n, n as i64);
            assert!(qn.is_one(), "q^{} != 1 at order {}", n, n);
            // q^-1 * q = 1
            let p = CycloElem::q_pow(n, -1).mul(&CycloElem::q_pow(n, 1));
            assert!(p.is_one());
        }
        // Order 1: q = 1. Order 2: q = -1.
        assert!(CycloElem::q_pow(1, 1).is_one());
        assert_eq!(CycloElem::q_pow(2, 1), CycloElem::from_int(2, -1));
    }

    #[test]
    fn inversion() {
        // In Q(zeta_3): (q)(q^2) = q^3 = 1, and 1 + q + q^2 = 0.
        let q = CycloElem::q_pow(3, 1);
        assert_eq!(q.inv(), CycloElem::q_pow(3, 2));
        let x = CycloElem::one(3).add(&q); // 1 + q = -q^2
        assert_eq!(x.mul(&x.inv()), CycloElem::one(3));
        // Order 4: (1 + q)^-1 sanity via multiply-back.
        let y = CycloElem::one(4).add(&CycloElem::q_pow(4, 1));
        assert_eq!(y.mul(&y.inv()), CycloElem::one(4));
    }

    #[test]
    fn sum_of_all_roots_at_prime_order() {
        // 1 + q + q^2 + q^3 + q^4 = 0 at order 5.
        let mut s = CycloElem::zero(5);
        for k in 0..5 {
            s = s.add(&CycloElem::q_pow(5, k));
        }
        assert!(s.is_zero());
    }
}
