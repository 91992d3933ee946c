//! The three Jordan torus families over the rank-2 lattice, presented
//! uniformly: a support set plus a symmetric multiplication coefficient
//! m(lambda, mu) with x^lambda * x^mu = m(lambda, mu) x^{lambda + mu}.

use crate::lattice::{gamma, LatticeVector, Semilattice};
use crate::scalar::{QMode, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Which torus, with the data that pins down its multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum JordanFamily {
    /// m(lambda, mu) = Gamma of the coset classes; any rank. Scalars carry no
    /// q (mode is the order-1 root, where q collapses to 1).
    Semilattice(Semilattice),
    /// Plus algebra of the quantum torus: m = (eta(l,m) + eta(m,l))/2, rank 2.
    QuantumPlus(QMode),
    /// Hermitian elements of the rank-2 torus with e12 = e21 = sign.
    /// sign +1 is the Laurent torus (identity involution, q = 1, full
    /// support); sign -1 fixes q = -1 and support {lambda : l1*l2 even}.
    Hermitian { sign: i8 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JordanTorusSpec {
    family: JordanFamily,
}

impl JordanTorusSpec {
    pub fn new(family: JordanFamily) -> Result<Self, String> {
        match &family {
            JordanFamily::Semilattice(_) => {}
            JordanFamily::QuantumPlus(mode) => {
                mode.validate()?;
            }
            JordanFamily::Hermitian { sign } => {
                if *sign != 1 && *sign != -1 {
                    return Err(format!("hermitian sign must be +1 or -1, got {}", sign));
                }
            }
        }
        Ok(JordanTorusSpec { family })
    }

    pub fn semilattice(s: Semilattice) -> Self {
        JordanTorusSpec { family: JordanFamily::Semilattice(s) }
    }

    pub fn quantum(mode: QMode) -> Result<Self, String> {
        Self::new(JordanFamily::QuantumPlus(mode))
    }

    pub fn hermitian(sign: i8) -> Result<Self, String> {
        Self::new(JordanFamily::Hermitian { sign })
    }

    /// The Laurent torus, alias for hermitian with sign +1.
    pub fn laurent() -> Self {
        JordanTorusSpec { family: JordanFamily::Hermitian { sign: 1 } }
    }

    pub fn family(&self) -> &JordanFamily {
        &self.family
    }

    pub fn nu(&self) -> usize {
        match &self.family {
            JordanFamily::Semilattice(s) => s.nu(),
            _ => 2,
        }
    }

    /// Coefficient mode for all scalars of this torus.
    pub fn mode(&self) -> QMode {
        match &self.family {
            JordanFamily::Semilattice(_) => QMode::RootOfUnity(1),
            JordanFamily::QuantumPlus(mode) => *mode,
            JordanFamily::Hermitian { sign } => {
                QMode::RootOfUnity(if *sign == 1 { 1 } else { 2 })
            }
        }
    }

    pub fn supports(&self, lambda: &LatticeVector) -> bool {
        match &self.family {
            JordanFamily::Semilattice(s) => s.contains(lambda),
            JordanFamily::QuantumPlus(_) => true,
            JordanFamily::Hermitian { sign } => hermitian_support(lambda, *sign),
        }
    }

    /// Coset-level view of the support, used for root windows and masks.
    pub fn support_semilattice(&self) -> Semilattice {
        match &self.family {
            JordanFamily::Semilattice(s) => s.clone(),
            JordanFamily::QuantumPlus(_) => Semilattice::full(2),
            JordanFamily::Hermitian { sign } => {
                if *sign == 1 {
                    Semilattice::full(2)
                } else {
                    // l1*l2 even: classes 00, 01, 10.
                    let classes = ["00", "01", "10"]
                        .iter()
                        .map(|b| b.parse().unwrap())
                        .collect();
                    Semilattice::new(2, classes).unwrap()
                }
            }
        }
    }

    /// The multiplication coefficient m(lambda, mu); zero when either factor
    /// is outside the support.
    pub fn mult_coeff(&self, lambda: &LatticeVector, mu: &LatticeVector) -> Scalar {
        let mode = self.mode();
        if !self.supports(lambda) || !self.supports(mu) {
            return Scalar::zero(mode);
        }
        match &self.family {
            JordanFamily::Semilattice(s) => {
                Scalar::from_int(mode, gamma(&lambda.coset(), &mu.coset(), s))
            }
            JordanFamily::QuantumPlus(_) | JordanFamily::Hermitian { .. } => {
                let sym = eta(lambda, mu, mode).add(&eta(mu, lambda, mode));
                Scalar::half(mode).mul(&sym)
            }
        }
    }

    /// Family descriptor: `semilattice:S:v=2,cosets=00+10+01`,
    /// `quantum:q=formal`, `quantum:q=root:2`, `hermitian:sign=-1`,
    /// `laurent`; an optional `jordan=` prefix is accepted.
    pub fn parse_descriptor(input: &str) -> Result<Self, String> {
        let body = input.strip_prefix("jordan=").unwrap_or(input).trim();
        if body == "laurent" {
            return Ok(Self::laurent());
        }
        if let Some(rest) = body.strip_prefix("semilattice:") {
            let s = Semilattice::parse_descriptor(rest)?;
            return Ok(Self::semilattice(s));
        }
        if let Some(rest) = body.strip_prefix("quantum:") {
            let q = rest
                .strip_prefix("q=")
                .ok_or_else(|| format!("quantum descriptor '{}' must use q=", body))?;
            let mode = if q == "formal" {
                QMode::Formal
            } else if let Some(n) = q.strip_prefix("root:") {
                let n: u32 =
                    n.parse().map_err(|e| format!("bad root order in '{}': {}", body, e))?;
                QMode::RootOfUnity(n)
            } else {
                return Err(format!("bad quantum mode '{}': expected formal or root:N", q));
            };
            return Self::quantum(mode);
        }
        if let Some(rest) = body.strip_prefix("hermitian:") {
            let sgn = rest
                .strip_prefix("sign=")
                .ok_or_else(|| format!("hermitian descriptor '{}' must use sign=", body))?;
            let sign: i8 = match sgn {
                "1" | "+1" => 1,
                "-1" => -1,
                _ => return Err(format!("bad hermitian sign '{}'", sgn)),
            };
            return Self::hermitian(sign);
        }
        Err(format!(
            "unknown jordan descriptor '{}'; expected semilattice:.., quantum:.., \
             hermitian:sign=.., or laurent",
            body
        ))
    }

    pub fn descriptor(&self) -> String {
        match &self.family {
            JordanFamily::Semilattice(s) => format!("semilattice:{}", s.descriptor()),
            JordanFamily::QuantumPlus(QMode::Formal) => "quantum:q=formal".into(),
            JordanFamily::QuantumPlus(QMode::RootOfUnity(n)) => format!("quantum:q=root:{}", n),
            JordanFamily::Hermitian { sign: 1 } => "laurent".into(),
            JordanFamily::Hermitian { .. } => "hermitian:sign=-1".into(),
        }
    }
}

/// The twisting factor of the quantum torus: q to the power
/// sum over i < j of mu_j * lambda_i; at rank 2 this is q^{mu_2 * lambda_1}.
/// Bi-additive in both arguments.
pub fn eta(lambda: &LatticeVector, mu: &LatticeVector, mode: QMode) -> Scalar {
    assert_eq!(lambda.nu(), mu.nu());
    let nu = lambda.nu();
    let mut exp = 0i64;
    for i in 0..nu {
        for j in (i + 1)..nu {
            exp += mu.0[j] * lambda.0[i];
        }
    }
    Scalar::q_pow(mode, exp)
}

/// Support of the Hermitian torus: everything for sign +1, and for sign -1
/// exactly the monomials with l1*l2 even.
pub fn hermitian_support(lambda: &LatticeVector, sign: i8) -> bool {
    if sign == 1 {
        return true;
    }
    assert_eq!(lambda.nu(), 2);
    (lambda.0[0] * lambda.0[1]) % 2 == 0
}

/// True when f(lambda, .) is identically 1, i.e. q^{cross(lambda, mu)} = 1
/// for every mu. Formal: only lambda = 0. Root of unity order n: n divides
/// every coordinate.
pub fn rad_f_contains(lambda: &LatticeVector, mode: QMode) -> bool {
    match mode {
        QMode::Formal => lambda.is_zero(),
        QMode::RootOfUnity(n) => lambda.0.iter().all(|&c| c.rem_euclid(n as i64) == 0),
    }
}

/// Finitely supported element of the torus; no zero coefficients stored, no
/// support-exterior monomials (they are read as zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JordanElement {
    nu: usize,
    mode: QMode,
    terms: BTreeMap<LatticeVector, Scalar>,
}

impl JordanElement {
    pub fn zero(spec: &JordanTorusSpec) -> Self {
        JordanElement { nu: spec.nu(), mode: spec.mode(), terms: BTreeMap::new() }
    }

    pub fn monomial(spec: &JordanTorusSpec, lambda: &LatticeVector, coeff: Scalar) -> Self {
        assert_eq!(coeff.mode(), spec.mode(), "coefficient in wrong mode");
        let mut e = Self::zero(spec);
        if spec.supports(lambda) && !coeff.is_zero() {
            e.terms.insert(lambda.clone(), coeff);
        }
        e
    }

    pub fn unit(spec: &JordanTorusSpec) -> Self {
        Self::monomial(spec, &LatticeVector::zero(spec.nu()), Scalar::one(spec.mode()))
    }

    pub fn basis(spec: &JordanTorusSpec, lambda: &LatticeVector) -> Self {
        Self::monomial(spec, lambda, Scalar::one(spec.mode()))
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn mode(&self) -> QMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, lambda: &LatticeVector) -> Scalar {
        self.terms.get(lambda).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    /// The coefficient of x^0; the epsilon functional of the form machinery.
    pub fn coeff_at_zero(&self) -> Scalar {
        self.coeff(&LatticeVector::zero(self.nu))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.mode, other.mode);
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let cur = terms.remove(k);
            let s = match cur {
                Some(c) => c.add(v),
                None => v.clone(),
            };
            if !s.is_zero() {
                terms.insert(k.clone(), s);
            }
        }
        JordanElement { nu: self.nu, mode: self.mode, terms }
    }

    pub fn neg(&self) -> Self {
        JordanElement {
            nu: self.nu,
            mode: self.mode,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return JordanElement { nu: self.nu, mode: self.mode, terms: BTreeMap::new() };
        }
        JordanElement {
            nu: self.nu,
            mode: self.mode,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul(s))).collect(),
        }
    }

    /// Degree shift: x^lambda -> x^{lambda + mu}, dropping anything that
    /// leaves the support.
    pub fn shift(&self, spec: &JordanTorusSpec, mu: &LatticeVector) -> Self {
        let mut out = Self::zero(spec);
        for (k, v) in &self.terms {
            let nk = k.add(mu);
            if spec.supports(&nk) {
                out.terms.insert(nk, v.clone());
            }
        }
        out
    }

    /// Part of degree lambda (a monomial or zero).
    pub fn component(&self, lambda: &LatticeVector) -> Self {
        let mut terms = BTreeMap::new();
        if let Some(c) = self.terms.get(lambda) {
            terms.insert(lambda.clone(), c.clone());
        }
        JordanElement { nu: self.nu, mode: self.mode, terms }
    }
}

impl fmt::Display for JordanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if v.is_one() {
                write!(f, "x^{}", k)?;
            } else {
                write!(f, "({})*x^{}", v, k)?;
            }
        }
        Ok(())
    }
}

/// Bilinear extension of the monomial product.
pub fn multiply(spec: &JordanTorusSpec, x: &JordanElement, y: &JordanElement) -> JordanElement {
    let mut out = JordanElement::zero(spec);
    for (lam, a) in x.terms() {
        for (mu, b) in y.terms() {
            let m = spec.mult_coeff(lam, mu);
            if m.is_zero() {
                continue;
            }
            let contrib =
                JordanElement::monomial(spec, &lam.add(mu), a.mul(b).mul(&m));
            out = out.add(&contrib);
        }
    }
    out
}

/// The trace-like pairing (x, y) = sum over lambda of
/// x_lambda * y_{-lambda} * m(lambda, -lambda); the coefficient of x^0 in xy.
pub fn epsilon_pair(spec: &JordanTorusSpec, x: &JordanElement, y: &JordanElement) -> Scalar {
    let mut acc = Scalar::zero(spec.mode());
    for (lam, a) in x.terms() {
        let neg = lam.neg();
        let b = y.coeff(&neg);
        if b.is_zero() {
            continue;
        }
        acc = acc.add(&a.mul(&b).mul(&spec.mult_coeff(lam, &neg)));
    }
    acc
}
