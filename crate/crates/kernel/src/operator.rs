//! Degree-homogeneous operators on a Jordan torus with exactly decidable
//! equality.
//!
//! A coefficient function is stored canonically as a finite sum of terms
//! a * q^{l . gamma} gated by the coset class of gamma. On a fixed class
//! gamma = r + 2*delta, each term is a constant times a character of delta;
//! distinct reduced exponent keys give distinct characters (formal mode:
//! distinct monomial maps; root mode: distinct characters of (Z/M)^nu where
//! M is the order of q^2), which are linearly independent. Hence the zero
//! test "no stored terms" is exact, and equality is structural.

use crate::jordan::{JordanElement, JordanFamily, JordanTorusSpec};
use crate::lattice::{gamma as gamma_table, CosetClass, LatticeVector, Semilattice};
use crate::scalar::{QMode, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Where a raw term applies: everywhere, or on one coset class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mask {
    Any,
    Class(CosetClass),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffFunction {
    mode: QMode,
    nu: usize,
    terms: BTreeMap<(CosetClass, Vec<i64>), Scalar>,
}

impl CoeffFunction {
    pub fn zero(mode: QMode, nu: usize) -> Self {
        CoeffFunction { mode, nu, terms: BTreeMap::new() }
    }

    pub fn constant(mode: QMode, nu: usize, value: &Scalar) -> Self {
        let mut f = Self::zero(mode, nu);
        f.add_term(Mask::Any, 0, &vec![0; nu], value);
        f
    }

    pub fn mode(&self) -> QMode {
        self.mode
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Order of q^2 in this mode; linear keys are reduced mod this.
    fn lin_modulus(&self) -> Option<i64> {
        match self.mode {
            QMode::Formal => None,
            QMode::RootOfUnity(n) => {
                let n = n as i64;
                Some(n / num::Integer::gcd(&2i64, &n))
            }
        }
    }

    /// Fold one term a * q^{l . gamma} on the given class into canonical
    /// form: reduce l mod M componentwise and absorb the difference into the
    /// scalar through the class representative.
    fn insert_canonical(&mut self, coset: CosetClass, lin: Vec<i64>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let (lstar, folded) = match self.lin_modulus() {
            None => (lin, coeff),
            Some(m) => {
                let lstar: Vec<i64> = lin.iter().map(|&x| x.rem_euclid(m)).collect();
                let rep = coset.representative();
                let fold_exp: i64 = lin
                    .iter()
                    .zip(&lstar)
                    .zip(&rep.0)
                    .map(|((&l, &ls), &r)| (l - ls) * r)
                    .sum();
                (lstar, coeff.mul_q_pow(fold_exp))
            }
        };
        let key = (coset, lstar);
        let cur = self.terms.remove(&key);
        let s = match cur {
            Some(c) => c.add(&folded),
            None => folded,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    /// Add a * q^{exp0 + lin . gamma} on the masked classes.
    pub fn add_term(&mut self, mask: Mask, exp0: i64, lin: &[i64], coeff: &Scalar) {
        assert_eq!(lin.len(), self.nu);
        assert_eq!(coeff.mode(), self.mode);
        let base = coeff.mul_q_pow(exp0);
        if base.is_zero() {
            return;
        }
        match mask {
            Mask::Class(c) => {
                assert_eq!(c.nu(), self.nu);
                self.insert_canonical(c, lin.to_vec(), base);
            }
            Mask::Any => {
                for c in CosetClass::all(self.nu) {
                    self.insert_canonical(c, lin.to_vec(), base.clone());
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No nonzero values anywhere on the class.
    pub fn vanishes_on_class(&self, c: &CosetClass) -> bool {
        !self.terms.keys().any(|(k, _)| k == c)
    }

    pub fn eval(&self, gamma: &LatticeVector) -> Scalar {
        assert_eq!(gamma.nu(), self.nu);
        let c = gamma.coset();
        let mut acc = Scalar::zero(self.mode);
        for ((k, lin), a) in &self.terms {
            if *k != c {
                continue;
            }
            let exp: i64 = lin.iter().zip(&gamma.0).map(|(l, g)| l * g).sum();
            acc = acc.add(&a.mul_q_pow(exp));
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.mode, other.mode);
        assert_eq!(self.nu, other.nu);
        let mut out = self.clone();
        for ((c, lin), a) in &other.terms {
            out.insert_canonical(*c, lin.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        CoeffFunction {
            mode: self.mode,
            nu: self.nu,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.mode, self.nu);
        if s.is_zero() {
            return out;
        }
        for ((c, lin), a) in &self.terms {
            out.insert_canonical(*c, lin.clone(), a.mul(s));
        }
        out
    }

    /// Scale by q^k.
    pub fn mul_q_pow(&self, k: i64) -> Self {
        let mut out = Self::zero(self.mode, self.nu);
        for ((c, lin), a) in &self.terms {
            out.insert_canonical(*c, lin.clone(), a.mul_q_pow(k));
        }
        out
    }

    /// The function gamma -> self(gamma + sigma).
    pub fn shift_arg(&self, sigma: &LatticeVector) -> Self {
        assert_eq!(sigma.nu(), self.nu);
        let cs = sigma.coset();
        let mut out = Self::zero(self.mode, self.nu);
        for ((c, lin), a) in &self.terms {
            let exp: i64 = lin.iter().zip(&sigma.0).map(|(l, s)| l * s).sum();
            out.insert_canonical(c.add(&cs), lin.clone(), a.mul_q_pow(exp));
        }
        out
    }

    /// Pointwise product; terms on different classes never overlap.
    pub fn mul_pointwise(&self, other: &Self) -> Self {
        assert_eq!(self.mode, other.mode);
        assert_eq!(self.nu, other.nu);
        let mut out = Self::zero(self.mode, self.nu);
        for ((c1, l1), a1) in &self.terms {
            for ((c2, l2), a2) in &other.terms {
                if c1 != c2 {
                    continue;
                }
                let lin: Vec<i64> = l1.iter().zip(l2).map(|(a, b)| a + b).collect();
                out.insert_canonical(*c1, lin, a1.mul(a2));
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(CosetClass, Vec<i64>), &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &(CosetClass, Vec<i64>)) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for CoeffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((c, lin), a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", a)?;
            if lin.iter().any(|&l| l != 0) {
                write!(f, "*q^[")?;
                for (i, l) in lin.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", l)?;
                }
                write!(f, "].g")?;
            }
            write!(f, "@{}", c)?;
        }
        Ok(())
    }
}

/// Operator of a single degree: op(x^gamma) = c(gamma) * x^{degree + gamma}.
#[derive(Clone, Debug)]
pub struct HomOperator {
    spec: JordanTorusSpec,
    degree: LatticeVector,
    coeff: CoeffFunction,
}

impl HomOperator {
    pub fn zero(spec: &JordanTorusSpec, degree: &LatticeVector) -> Self {
        HomOperator {
            spec: spec.clone(),
            degree: degree.clone(),
            coeff: CoeffFunction::zero(spec.mode(), spec.nu()),
        }
    }

    pub fn from_coeff(spec: &JordanTorusSpec, degree: &LatticeVector, coeff: CoeffFunction) -> Self {
        assert_eq!(coeff.mode(), spec.mode());
        assert_eq!(coeff.nu(), spec.nu());
        HomOperator { spec: spec.clone(), degree: degree.clone(), coeff }
    }

    pub fn spec(&self) -> &JordanTorusSpec {
        &self.spec
    }

    pub fn degree(&self) -> &LatticeVector {
        &self.degree
    }

    pub fn coeff(&self) -> &CoeffFunction {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn eval(&self, gamma: &LatticeVector) -> Scalar {
        self.coeff.eval(gamma)
    }

    pub fn apply(&self, x: &JordanElement) -> JordanElement {
        let mut out = JordanElement::zero(&self.spec);
        for (lam, a) in x.terms() {
            let c = self.coeff.eval(lam);
            if c.is_zero() {
                continue;
            }
            let t = JordanElement::monomial(&self.spec, &self.degree.add(lam), a.mul(&c));
            out = out.add(&t);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec);
        assert_eq!(self.degree, other.degree, "degree mismatch in operator add");
        HomOperator {
            spec: self.spec.clone(),
            degree: self.degree.clone(),
            coeff: self.coeff.add(&other.coeff),
        }
    }

    pub fn neg(&self) -> Self {
        HomOperator {
            spec: self.spec.clone(),
            degree: self.degree.clone(),
            coeff: self.coeff.neg(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        HomOperator {
            spec: self.spec.clone(),
            degree: self.degree.clone(),
            coeff: self.coeff.scale(s),
        }
    }
}

/// Zero operators compare equal regardless of their nominal degree.
impl PartialEq for HomOperator {
    fn eq(&self, other: &Self) -> bool {
        if self.spec != other.spec {
            return false;
        }
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.degree == other.degree && self.coeff == other.coeff
    }
}

impl Eq for HomOperator {}

impl fmt::Display for HomOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg{}[{}]", self.degree, self.coeff)
    }
}

/// Classes where a degree-sigma operator may act without leaving the
/// support: gamma and sigma + gamma both supported.
fn admissible_classes(spec: &JordanTorusSpec, sigma: &LatticeVector) -> Vec<CosetClass> {
    let supp = spec.support_semilattice();
    let cs = sigma.coset();
    supp.classes()
        .iter()
        .filter(|c| supp.contains_class(&c.add(&cs)))
        .cloned()
        .collect()
}

/// Multiplication by x^sigma: degree sigma, coefficient m(sigma, gamma).
/// The zero operator when sigma is outside the support.
pub fn left_mult(spec: &JordanTorusSpec, sigma: &LatticeVector) -> HomOperator {
    let mode = spec.mode();
    let nu = spec.nu();
    let mut coeff = CoeffFunction::zero(mode, nu);
    if !spec.supports(sigma) {
        return HomOperator::from_coeff(spec, sigma, coeff);
    }
    match spec.family() {
        JordanFamily::Semilattice(s) => {
            let csig = sigma.coset();
            for c in CosetClass::all(nu) {
                let g = gamma_table(&csig, &c, s);
                if g != 0 {
                    coeff.add_term(Mask::Class(c), 0, &vec![0; nu], &Scalar::from_int(mode, g));
                }
            }
        }
        JordanFamily::QuantumPlus(_) | JordanFamily::Hermitian { .. } => {
            // m(sigma, gamma) = (eta(sigma, gamma) + eta(gamma, sigma)) / 2
            // eta(sigma, gamma) = q^{sum_{i<j} gamma_j sigma_i}: linear in gamma.
            let mut lin1 = vec![0i64; nu];
            let mut lin2 = vec![0i64; nu];
            for i in 0..nu {
                for j in (i + 1)..nu {
                    lin1[j] += sigma.0[i];
                    lin2[i] += sigma.0[j];
                }
            }
            let half = Scalar::half(mode);
            match spec.family() {
                JordanFamily::QuantumPlus(_) => {
                    coeff.add_term(Mask::Any, 0, &lin1, &half);
                    coeff.add_term(Mask::Any, 0, &lin2, &half);
                }
                _ => {
                    for c in admissible_classes(spec, sigma) {
                        coeff.add_term(Mask::Class(c), 0, &lin1, &half);
                        coeff.add_term(Mask::Class(c), 0, &lin2, &half);
                    }
                }
            }
        }
    }
    HomOperator::from_coeff(spec, sigma, coeff)
}

pub fn identity_op(spec: &JordanTorusSpec) -> HomOperator {
    left_mult(spec, &LatticeVector::zero(spec.nu()))
}

/// Right multiplication in the underlying associative torus:
/// x^gamma -> x^gamma x^sigma = eta(gamma, sigma) x^{sigma + gamma}.
/// Only meaningful for the associative families; the semilattice torus is
/// rejected. sigma may lie outside the Hermitian support: the operator is
/// then the restriction to classes that stay inside it.
pub fn right_translation(
    spec: &JordanTorusSpec,
    sigma: &LatticeVector,
) -> Result<HomOperator, String> {
    let mode = spec.mode();
    let nu = spec.nu();
    let mut lin = vec![0i64; nu];
    for i in 0..nu {
        for j in (i + 1)..nu {
            lin[i] += sigma.0[j];
        }
    }
    let one = Scalar::one(mode);
    let mut coeff = CoeffFunction::zero(mode, nu);
    match spec.family() {
        JordanFamily::Semilattice(_) => {
            return Err("right translation needs an associative torus".into());
        }
        JordanFamily::QuantumPlus(_) => {
            coeff.add_term(Mask::Any, 0, &lin, &one);
        }
        JordanFamily::Hermitian { .. } => {
            for c in admissible_classes(spec, sigma) {
                coeff.add_term(Mask::Class(c), 0, &lin, &one);
            }
        }
    }
    Ok(HomOperator::from_coeff(spec, sigma, coeff))
}

/// f after g: degree adds, coefficient c_g(gamma) * c_f(gamma + deg g).
pub fn op_compose(f: &HomOperator, g: &HomOperator) -> HomOperator {
    assert_eq!(f.spec, g.spec, "composition across different tori");
    let coeff = g.coeff.mul_pointwise(&f.coeff.shift_arg(&g.degree));
    HomOperator {
        spec: f.spec.clone(),
        degree: f.degree.add(&g.degree),
        coeff,
    }
}

pub fn op_commutator(f: &HomOperator, g: &HomOperator) -> HomOperator {
    let fg = op_compose(f, g);
    let gf = op_compose(g, f);
    HomOperator {
        spec: fg.spec.clone(),
        degree: fg.degree.clone(),
        coeff: fg.coeff.sub(&gf.coeff),
    }
}

/// Finitely supported sum of homogeneous operators, keyed by degree; zero
/// coefficient functions are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorSum {
    spec: JordanTorusSpec,
    parts: BTreeMap<LatticeVector, CoeffFunction>,
}

impl OperatorSum {
    pub fn zero(spec: &JordanTorusSpec) -> Self {
        OperatorSum { spec: spec.clone(), parts: BTreeMap::new() }
    }

    pub fn from_hom(op: &HomOperator) -> Self {
        let mut s = Self::zero(&op.spec);
        s.accumulate(&op.degree, &op.coeff);
        s
    }

    pub fn spec(&self) -> &JordanTorusSpec {
        &self.spec
    }

    fn accumulate(&mut self, degree: &LatticeVector, coeff: &CoeffFunction) {
        if coeff.is_zero() {
            return;
        }
        let cur = self.parts.remove(degree);
        let s = match cur {
            Some(c) => c.add(coeff),
            None => coeff.clone(),
        };
        if !s.is_zero() {
            self.parts.insert(degree.clone(), s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&LatticeVector, &CoeffFunction)> {
        self.parts.iter()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn degree_part(&self, degree: &LatticeVector) -> HomOperator {
        match self.parts.get(degree) {
            Some(c) => HomOperator::from_coeff(&self.spec, degree, c.clone()),
            None => HomOperator::zero(&self.spec, degree),
        }
    }

    /// Some(degree) when the sum is concentrated in one degree.
    pub fn single_degree(&self) -> Option<&LatticeVector> {
        if self.parts.len() == 1 {
            self.parts.keys().next()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec);
        let mut out = self.clone();
        for (d, c) in &other.parts {
            out.accumulate(d, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        OperatorSum {
            spec: self.spec.clone(),
            parts: self.parts.iter().map(|(d, c)| (d.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(&self.spec);
        for (d, c) in &self.parts {
            out.accumulate(d, &c.scale(s));
        }
        out
    }

    /// Composition with the normalized degree shift x^g -> x^{g+mu}: every
    /// part's degree moves by mu, coefficients untouched. This is the action
    /// of a centroid shift on operators.
    pub fn shift_degree(&self, mu: &LatticeVector) -> Self {
        let mut out = Self::zero(&self.spec);
        for (d, c) in &self.parts {
            out.accumulate(&d.add(mu), c);
        }
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec);
        let mut out = Self::zero(&self.spec);
        for (df, cf) in &self.parts {
            for (dg, cg) in &other.parts {
                let coeff = cg.mul_pointwise(&cf.shift_arg(dg));
                out.accumulate(&df.add(dg), &coeff);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn apply(&self, x: &JordanElement) -> JordanElement {
        let mut out = JordanElement::zero(&self.spec);
        for (d, c) in &self.parts {
            for (lam, a) in x.terms() {
                let v = c.eval(lam);
                if v.is_zero() {
                    continue;
                }
                out = out.add(&JordanElement::monomial(&self.spec, &d.add(lam), a.mul(&v)));
            }
        }
        out
    }

    /// E(1): the image of the unit, a finitely supported torus element.
    pub fn eval_at_unit(&self) -> JordanElement {
        self.apply(&JordanElement::unit(&self.spec))
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "deg{}[{}]", d, c)?;
        }
        Ok(())
    }
}

/// Multiplication by a general element: sum of scaled left multiplications.
pub fn left_mult_sum(spec: &JordanTorusSpec, x: &JordanElement) -> OperatorSum {
    let mut lx = OperatorSum::zero(spec);
    for (lam, a) in x.terms() {
        let op = left_mult(spec, lam).scale(a);
        lx = lx.add(&OperatorSum::from_hom(&op));
    }
    lx
}

/// Split E = L_x + D with x = E(1) and D = E - L_x. Valid on the span of
/// left multiplications and their commutators: commutators of
/// multiplications kill the unit in a commutative algebra, so D(1) = 0 and
/// the split is the canonical one.
pub fn l_d_split(e: &OperatorSum) -> (JordanElement, OperatorSum) {
    let x = e.eval_at_unit();
    (x.clone(), e.sub(&left_mult_sum(e.spec(), &x)))
}

/// One verified operator identity family: how many concrete instances were
/// checked and which ones failed.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl LemmaCheck {
    fn new(name: &str) -> Self {
        LemmaCheck { name: name.to_string(), instances: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct LemmaReport {
    pub nu: usize,
    pub radius: i64,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn total_instances(&self) -> usize {
        self.checks.iter().map(|c| c.instances).sum()
    }
}

/// Bracket-identity verifier for commutators of left multiplications on a
/// semilattice torus, any rank. Hypotheses are instantiated exhaustively
/// over coset classes; class representatives are sampled from the window
/// with a seeded generator so runs reproduce.
///
/// Identities checked, writing c0 for the class of 2L and K(s,t) for
/// [L_{x^s}, L_{x^t}]:
///   - K(s,t) kills every x^g with g in c0, and is the zero operator as
///     soon as s or t lies in c0 or both lie in one class;
///   - K(s,t)(x^g) is unchanged by shifting s, t, g by vectors of 2L
///     summing to zero; normal form K(s,t) = K(s+t+r, -r), r the
///     representative of t's class;
///   - [L_a, [L_b, L_c]] = 0 whenever the three classes sum to c0;
///   - [L_m, [L_a, L_b]] with m, a in one class collapses to the left
///     multiplication by [L_a, L_b](x^m) up to sign: zero when the classes
///     coincide or either is c0, and L_{x^{m+a+b}} otherwise.
pub fn verify_commutator_laws(
    s: &Semilattice,
    radius: i64,
    reps_per_class: usize,
    seed: u64,
) -> LemmaReport {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let spec = JordanTorusSpec::semilattice(s.clone());
    let nu = s.nu();
    let c0 = CosetClass::zero(nu);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let mut pool: BTreeMap<CosetClass, Vec<LatticeVector>> = BTreeMap::new();
    for v in crate::lattice::vectors_in_window(nu, radius.max(1)) {
        pool.entry(v.coset()).or_default().push(v);
    }
    let mut reps: BTreeMap<CosetClass, Vec<LatticeVector>> = BTreeMap::new();
    for c in s.classes() {
        let mut vs = pool.get(c).cloned().unwrap_or_default();
        vs.shuffle(&mut rng);
        vs.truncate(reps_per_class.max(1));
        let r = c.representative();
        if !vs.contains(&r) {
            vs.pop();
            vs.push(r);
        }
        vs.sort();
        reps.insert(*c, vs);
    }
    let classes: Vec<CosetClass> = s.classes().iter().cloned().collect();
    let lm = |v: &LatticeVector| left_mult(&spec, v);

    let mut kills_zero = LemmaCheck::new("commutator-kills-zero-class-arguments");
    let mut degenerate_zero = LemmaCheck::new("zero-or-equal-class-commutators-vanish");
    let mut shift = LemmaCheck::new("commutator-shift-invariance");
    let mut normal_form = LemmaCheck::new("commutator-normal-form");
    let mut triple = LemmaCheck::new("triple-bracket-vanishes-on-zero-class-sum");
    let mut collapse = LemmaCheck::new("nested-commutator-collapse");

    let shifts2: Vec<LatticeVector> = crate::lattice::vectors_in_window(nu, 1)
        .into_iter()
        .map(|v| v.scale(2))
        .collect();

    for cs in &classes {
        for ct in &classes {
            for sig in &reps[cs] {
                for tau in &reps[ct] {
                    let k = op_commutator(&lm(sig), &lm(tau));

                    kills_zero.record(k.coeff().vanishes_on_class(&c0), || {
                        format!("sigma={} tau={}: nonzero on the zero class", sig, tau)
                    });
                    for g in &reps[&c0] {
                        kills_zero.record(
                            k.apply(&JordanElement::basis(&spec, g)).is_zero(),
                            || format!("sigma={} tau={} gamma={}", sig, tau, g),
                        );
                    }

                    if *cs == c0 || *ct == c0 || cs == ct {
                        degenerate_zero.record(k.is_zero(), || {
                            format!("sigma={} tau={}: commutator {}", sig, tau, k)
                        });
                    }

                    // Shift every slot by an even vector, the three shifts
                    // summing to zero.
                    let l0 = shifts2.choose(&mut rng).unwrap().clone();
                    let l1 = shifts2.choose(&mut rng).unwrap().clone();
                    let l2 = l0.add(&l1).neg();
                    let k_shifted = op_commutator(&lm(&sig.add(&l0)), &lm(&tau.add(&l1)));
                    for cg in &classes {
                        for g in &reps[cg] {
                            let lhs = k.apply(&JordanElement::basis(&spec, g));
                            let rhs =
                                k_shifted.apply(&JordanElement::basis(&spec, &g.add(&l2)));
                            shift.record(lhs == rhs, || {
                                format!(
                                    "sigma={} tau={} gamma={} shifts {} {} {}",
                                    sig, tau, g, l0, l1, l2
                                )
                            });
                        }
                    }

                    let r = ct.representative();
                    let nf = op_commutator(&lm(&sig.add(tau).add(&r)), &lm(&r.neg()));
                    normal_form.record(k == nf, || {
                        format!("sigma={} tau={}: {} vs {}", sig, tau, k, nf)
                    });
                }
            }
        }
    }

    for ca in &classes {
        for cb in &classes {
            for cc in &classes {
                if ca.add(cb).add(cc) != c0 {
                    continue;
                }
                for a in &reps[ca] {
                    for b in &reps[cb] {
                        for c in &reps[cc] {
                            let inner = op_commutator(&lm(b), &lm(c));
                            let outer = op_commutator(&lm(a), &inner);
                            triple.record(outer.is_zero(), || {
                                format!("a={} b={} c={}: {}", a, b, c, outer)
                            });
                        }
                    }
                }
            }
        }
    }

    for ci in &classes {
        for cj in &classes {
            for mu in &reps[ci] {
                for lam_i in &reps[ci] {
                    for lam_j in &reps[cj] {
                        let inner = op_commutator(&lm(lam_i), &lm(lam_j));
                        let nested = op_commutator(&lm(mu), &inner);
                        let want = if ci == cj || *ci == c0 || *cj == c0 {
                            HomOperator::zero(&spec, &LatticeVector::zero(nu))
                        } else {
                            lm(&mu.add(lam_i).add(lam_j))
                        };
                        collapse.record(nested == want, || {
                            format!(
                                "mu={} lambda={} lambda'={}: {} vs {}",
                                mu, lam_i, lam_j, nested, want
                            )
                        });
                    }
                }
            }
        }
    }

    LemmaReport {
        nu,
        radius,
        checks: vec![kills_zero, degenerate_zero, shift, normal_form, triple, collapse],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::multiply;
    use crate::lattice::{vectors_in_window, Semilattice};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_coords(c)
    }

    fn three_coset_spec() -> JordanTorusSpec {
        JordanTorusSpec::parse_descriptor("semilattice:S:v=2,cosets=00+10+01").unwrap()
    }

    fn full_spec() -> JordanTorusSpec {
        JordanTorusSpec::semilattice(Semilattice::full(2))
    }

    fn all_specs() -> Vec<JordanTorusSpec> {
        vec![
            three_coset_spec(),
            full_spec(),
            JordanTorusSpec::quantum(QMode::Formal).unwrap(),
            JordanTorusSpec::quantum(QMode::RootOfUnity(2)).unwrap(),
            JordanTorusSpec::quantum(QMode::RootOfUnity(3)).unwrap(),
            JordanTorusSpec::laurent(),
            JordanTorusSpec::hermitian(-1).unwrap(),
        ]
    }

    /// Naive oracle: apply x^sigma-multiplication through the torus product.
    fn naive_left_mult_eval(
        spec: &JordanTorusSpec,
        sigma: &LatticeVector,
        gamma: &LatticeVector,
    ) -> Scalar {
        spec.mult_coeff(sigma, gamma)
    }

    #[test]
    fn left_mult_semilattice_masks() {
        let js = three_coset_spec();
        let op = left_mult(&js, &lv(&[1, 0]));
        // Acts as 1 on classes 00 and 10, zero elsewhere.
        for g in vectors_in_window(2, 2) {
            let want = match g.coset().to_string().as_str() {
                "00" | "10" => Scalar::one(js.mode()),
                _ => Scalar::zero(js.mode()),
            };
            assert_eq!(op.eval(&g), want, "gamma {}", g);
        }
        // Outside the support: the zero operator.
        assert!(left_mult(&js, &lv(&[1, 1])).is_zero());
    }

    #[test]
    fn left_mult_is_identity_at_zero() {
        for spec in all_specs() {
            let id = identity_op(&spec);
            for g in vectors_in_window(2, 2) {
                let want = if spec.supports(&g) {
                    Scalar::one(spec.mode())
                } else {
                    Scalar::zero(spec.mode())
                };
                assert_eq!(id.eval(&g), want, "{} at {}", spec.descriptor(), g);
            }
        }
    }

    #[test]
    fn left_mult_quantum_closed_form() {
        let kq = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let m = kq.mode();
        let op = left_mult(&kq, &lv(&[1, 0]));
        // c(gamma) = q^{gamma_2}/2 + 1/2.
        for g in vectors_in_window(2, 3) {
            let want = Scalar::half(m).mul(&Scalar::q_pow(m, g.0[1]).add(&Scalar::one(m)));
            assert_eq!(op.eval(&g), want);
        }
    }

    #[test]
    fn left_mult_matches_mult_coeff_everywhere() {
        for spec in all_specs() {
            for sig in vectors_in_window(2, 2) {
                let op = left_mult(&spec, &sig);
                for g in vectors_in_window(2, 2) {
                    assert_eq!(
                        op.eval(&g),
                        naive_left_mult_eval(&spec, &sig, &g),
                        "{} sigma {} gamma {}",
                        spec.descriptor(),
                        sig,
                        g
                    );
                }
            }
        }
    }

    #[test]
    fn right_translation_closed_forms() {
        let kq = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let m = kq.mode();
        let id = right_translation(&kq, &lv(&[0, 0])).unwrap();
        let r10 = right_translation(&kq, &lv(&[1, 0])).unwrap();
        let r01 = right_translation(&kq, &lv(&[0, 1])).unwrap();
        for g in vectors_in_window(2, 3) {
            assert!(id.eval(&g).is_one());
            assert!(r10.eval(&g).is_one());
            assert_eq!(r01.eval(&g), Scalar::q_pow(m, g.0[0]));
        }
        assert!(right_translation(&three_coset_spec(), &lv(&[1, 0])).is_err());
    }

    #[test]
    fn compose_identity_and_degree() {
        for spec in all_specs() {
            let id = identity_op(&spec);
            for sig in [lv(&[1, 0]), lv(&[0, 1]), lv(&[2, -1])] {
                let f = left_mult(&spec, &sig);
                if f.is_zero() {
                    continue;
                }
                assert_eq!(op_compose(&id, &f), f, "{}", spec.descriptor());
                assert_eq!(op_compose(&f, &id), f, "{}", spec.descriptor());
                let g = left_mult(&spec, &lv(&[0, 1]));
                let fg = op_compose(&f, &g);
                assert_eq!(fg.degree(), &sig.add(&lv(&[0, 1])));
            }
        }
    }

    #[test]
    fn compose_full_lattice_vanishing_point() {
        // L_{x^s1} after L_{x^s2} evaluated at s1 multiplies Gamma factors
        // that are both off-diagonal, hence zero.
        let jl = full_spec();
        let f = left_mult(&jl, &lv(&[1, 0]));
        let g = left_mult(&jl, &lv(&[0, 1]));
        let fg = op_compose(&f, &g);
        assert!(fg.eval(&lv(&[1, 0])).is_zero());
    }

    #[test]
    fn right_translations_compose_with_twist() {
        // r_sigma after r_tau = eta(tau, sigma) r_{sigma+tau}.
        let kq = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let m = kq.mode();
        for s in vectors_in_window(2, 2) {
            for t in vectors_in_window(2, 2) {
                let rs = right_translation(&kq, &s).unwrap();
                let rt = right_translation(&kq, &t).unwrap();
                let lhs = op_compose(&rs, &rt);
                let rst = right_translation(&kq, &s.add(&t)).unwrap();
                let tw = crate::jordan::eta(&t, &s, m);
                assert_eq!(lhs, rst.scale(&tw), "s {} t {}", s, t);
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let jl = full_spec();
        let f = left_mult(&jl, &lv(&[1, 0]));
        let g = left_mult(&jl, &lv(&[0, 1]));
        let k = op_commutator(&f, &g);
        // Acting on x^{s1} gives -x^{2s1+s2}.
        let x = JordanElement::basis(&jl, &lv(&[1, 0]));
        let want = JordanElement::monomial(&jl, &lv(&[2, 1]), Scalar::from_int(jl.mode(), -1));
        assert_eq!(k.apply(&x), want);
        // Self commutator is zero; same-class commutators vanish in the
        // three-coset torus.
        assert!(op_commutator(&f, &f).is_zero());
        let js = three_coset_spec();
        let a = left_mult(&js, &lv(&[1, 0]));
        let b = left_mult(&js, &lv(&[3, 2]));
        assert!(op_commutator(&a, &b).is_zero());
    }

    #[test]
    fn rewriting_identity_and_independence() {
        // In the three-coset torus, any commutator normalizes to a shifted
        // one; over the full lattice the commutator is not a left
        // multiplication.
        let js = three_coset_spec();
        let sig = lv(&[1, 0]);
        let tau = lv(&[0, 1]);
        let lhs = op_commutator(&left_mult(&js, &sig), &left_mult(&js, &tau));
        let rhs = op_commutator(
            &left_mult(&js, &sig.add(&tau).add(&lv(&[0, 1]))),
            &left_mult(&js, &lv(&[0, -1])),
        );
        assert_eq!(lhs, rhs);

        let jl = full_spec();
        for lam in [lv(&[1, 1]), lv(&[3, 1]), lv(&[-1, 1])] {
            let comm = op_commutator(
                &left_mult(&jl, &lam.add(&lv(&[0, 1]))),
                &left_mult(&jl, &lv(&[0, -1])),
            );
            assert!(!comm.is_zero());
            assert_ne!(comm, left_mult(&jl, &lam), "lambda {}", lam);
        }
    }

    #[test]
    fn zero_operators_compare_equal() {
        let js = three_coset_spec();
        let z1 = HomOperator::zero(&js, &lv(&[1, 0]));
        let z2 = HomOperator::zero(&js, &lv(&[0, 3]));
        assert_eq!(z1, z2);
        assert_eq!(OperatorSum::from_hom(&z1), OperatorSum::zero(&js));
    }

    #[test]
    fn canonical_equality_matches_pointwise_equality() {
        // Build randomized small operator sums two ways and compare both the
        // canonical equality verdict and windowed evaluation.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for spec in all_specs() {
            for _ in 0..8 {
                let pick = |rng: &mut ChaCha8Rng| {
                    let v = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                    let w = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                    let a = OperatorSum::from_hom(&left_mult(&spec, &v));
                    let b = OperatorSum::from_hom(&left_mult(&spec, &w));
                    a.commutator(&b)
                };
                let f = pick(&mut rng);
                let g = pick(&mut rng);
                let equal = f == g;
                let mut pointwise = true;
                'outer: for v in vectors_in_window(2, 3) {
                    let x = JordanElement::basis(&spec, &v);
                    if f.apply(&x) != g.apply(&x) {
                        pointwise = false;
                        break 'outer;
                    }
                }
                assert_eq!(equal, pointwise, "{}", spec.descriptor());
            }
        }
    }

    #[test]
    fn operator_application_matches_torus_products() {
        // Symbolic commutator application vs naive double multiplication.
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for spec in all_specs() {
            for _ in 0..10 {
                let a = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                let b = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                let g = lv(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
                let xa = JordanElement::basis(&spec, &a);
                let xb = JordanElement::basis(&spec, &b);
                let xg = JordanElement::basis(&spec, &g);
                let k = op_commutator(&left_mult(&spec, &a), &left_mult(&spec, &b));
                let naive = multiply(&spec, &xa, &multiply(&spec, &xb, &xg))
                    .sub(&multiply(&spec, &xb, &multiply(&spec, &xa, &xg)));
                assert_eq!(k.apply(&xg), naive, "{}", spec.descriptor());
            }
        }
    }

    #[test]
    fn compose_associativity_and_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for spec in all_specs() {
            for _ in 0..5 {
                let pick = |rng: &mut ChaCha8Rng| {
                    OperatorSum::from_hom(&left_mult(
                        &spec,
                        &lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]),
                    ))
                };
                let f = pick(&mut rng);
                let g = pick(&mut rng);
                let h = pick(&mut rng);
                assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
                let jac = f
                    .commutator(&g)
                    .commutator(&h)
                    .add(&g.commutator(&h).commutator(&f))
                    .add(&h.commutator(&f).commutator(&g));
                assert!(jac.is_zero(), "{}", spec.descriptor());
            }
        }
    }

    #[test]
    fn unit_split() {
        let js = three_coset_spec();
        let sig = lv(&[1, 0]);
        let l = OperatorSum::from_hom(&left_mult(&js, &sig));
        let (x, d) = l_d_split(&l);
        assert_eq!(x, JordanElement::basis(&js, &sig));
        assert!(d.is_zero());

        let jl = full_spec();
        let comm = OperatorSum::from_hom(&op_commutator(
            &left_mult(&jl, &lv(&[1, 1])),
            &left_mult(&jl, &lv(&[0, -1])),
        ));
        let (x2, d2) = l_d_split(&comm);
        assert!(x2.is_zero());
        assert_eq!(d2, comm);

        let mixed = l.clone();
        let jsum = OperatorSum::from_hom(&op_commutator(
            &left_mult(&js, &lv(&[1, 2])),
            &left_mult(&js, &lv(&[0, 1])),
        ));
        let e = mixed.add(&jsum);
        let (x3, d3) = l_d_split(&e);
        assert_eq!(x3, JordanElement::basis(&js, &sig));
        assert_eq!(d3, jsum);
    }

    #[test]
    fn lemma_suite_passes_rank_two() {
        for s in [
            Semilattice::parse_descriptor("S:v=2,cosets=00+10+01").unwrap(),
            Semilattice::full(2),
        ] {
            let report = verify_commutator_laws(&s, 2, 2, 7);
            assert!(report.all_pass(), "{:?}", report);
            assert!(report.total_instances() > 100);
        }
    }

    #[test]
    fn lemma_suite_passes_rank_three() {
        let report = verify_commutator_laws(&Semilattice::full(3), 2, 1, 7);
        assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn root_mode_folding_collapses_constants() {
        // At q = -1 every coefficient function is coset-constant: all linear
        // keys reduce to zero.
        let kq = JordanTorusSpec::quantum(QMode::RootOfUnity(2)).unwrap();
        let op = left_mult(&kq, &lv(&[1, 2]));
        for ((_, lin), _) in op.coeff().terms() {
            assert!(lin.iter().all(|&l| l == 0));
        }
        // And evaluation still matches the multiplication table.
        for g in vectors_in_window(2, 2) {
            assert_eq!(op.eval(&g), kq.mult_coeff(&lv(&[1, 2]), &g));
        }
    }
}
