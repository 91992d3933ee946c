//! Integral bases for the extended algebras: one labeled generator list per
//! root, coordinate expression of homogeneous elements in that list, and a
//! mechanical check that all bracket structure constants land in a chosen
//! coefficient ring.
//!
//! Root-space generators, with sqrt2 soaking up the short-root form
//! normalization:
//!   Xplus(l) = sqrt2*x^l and Xminus(l) = sqrt2*xbar^l at the nonisotropic
//!   roots; Lop / Comm / Rdiff / Rop operator rows at isotropic degrees,
//!   chosen per family and coset class; Halpha = L_1 with the degree
//!   derivations and their duals at degree zero; ChiDer/Dual rows gated by
//!   the computed centroid test, with suppressions reported rather than
//!   silently dropped.

use crate::eala::{e_bracket, e_form, is_centroidal, CentralKey, DerivationKey, EalaElement};
use crate::jordan::{rad_f_contains, JordanFamily, JordanTorusSpec};
use crate::lattice::{roots_in_window, CosetClass, LatticeVector, Root};
use crate::linalg;
use crate::operator::{left_mult, op_commutator, right_translation, OperatorSum};
use crate::scalar::{IntegralityRing, QMode, Scalar};
use crate::tkk::TkkElement;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Names for basis rows. The lattice vector is the row's degree; Comm also
/// carries its shift.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Label {
    /// sqrt2 * x^lambda at the upper short root.
    Xplus(LatticeVector),
    /// sqrt2 * xbar^lambda at the lower short root.
    Xminus(LatticeVector),
    /// Multiplication operator L_{x^lambda}.
    Lop(LatticeVector),
    /// Commutator [L_{x^{lambda+tau}}, L_{x^{-tau}}] for the shift tau.
    Comm(LatticeVector, LatticeVector),
    /// Twist difference L_{x^lambda} - r_lambda.
    Rdiff(LatticeVector),
    /// Right shift r_lambda alone.
    Rop(LatticeVector),
    /// Coroot direction L_1.
    Halpha,
    /// Coordinate degree derivation.
    DegDer(u8),
    /// Shift-twisted derivation of centroidal degree.
    ChiDer(LatticeVector),
    /// Dual of ChiDer(-lambda).
    Dual(LatticeVector),
    /// Dual of DegDer(i).
    Dual0(u8),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Xplus(l) => write!(f, "Xplus {}", l),
            Label::Xminus(l) => write!(f, "Xminus {}", l),
            Label::Lop(l) => write!(f, "Lop {}", l),
            Label::Comm(l, t) => write!(f, "Comm {} {}", l, t),
            Label::Rdiff(l) => write!(f, "Rdiff {}", l),
            Label::Rop(l) => write!(f, "Rop {}", l),
            Label::Halpha => write!(f, "Halpha"),
            Label::DegDer(i) => write!(f, "DegDer {}", i),
            Label::ChiDer(l) => write!(f, "ChiDer {}", l),
            Label::Dual(l) => write!(f, "Dual {}", l),
            Label::Dual0(i) => write!(f, "Dual0 {}", i),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let vec_arg = |t: &str| LatticeVector::from_str(t);
        let idx_arg = |t: &str| {
            t.parse::<u8>().map_err(|_| format!("bad index '{}'", t)).and_then(|i| {
                if (1..=2).contains(&i) {
                    Ok(i)
                } else {
                    Err(format!("index {} out of range 1..=2", i))
                }
            })
        };
        match toks.as_slice() {
            ["Halpha"] => Ok(Label::Halpha),
            ["DegDer", t] => Ok(Label::DegDer(idx_arg(t)?)),
            ["Dual0", t] => Ok(Label::Dual0(idx_arg(t)?)),
            ["Xplus", t] => Ok(Label::Xplus(vec_arg(t)?)),
            ["Xminus", t] => Ok(Label::Xminus(vec_arg(t)?)),
            ["Lop", t] => Ok(Label::Lop(vec_arg(t)?)),
            ["Rdiff", t] => Ok(Label::Rdiff(vec_arg(t)?)),
            ["Rop", t] => Ok(Label::Rop(vec_arg(t)?)),
            ["ChiDer", t] => Ok(Label::ChiDer(vec_arg(t)?)),
            ["Dual", t] => Ok(Label::Dual(vec_arg(t)?)),
            ["Comm", t, u] => Ok(Label::Comm(vec_arg(t)?, vec_arg(u)?)),
            _ => Err(format!(
                "cannot parse basis label '{}'; expected e.g. 'Halpha', 'DegDer 1', \
                 'Xplus (1,0)', 'Comm (1,1) (0,1)'",
                s
            )),
        }
    }
}

impl Label {
    /// The root this label's element lives at.
    pub fn root(&self) -> Root {
        match self {
            Label::Xplus(l) => Root::new(1, l.clone()),
            Label::Xminus(l) => Root::new(-1, l.clone()),
            Label::Lop(l) | Label::Comm(l, _) | Label::Rdiff(l) | Label::Rop(l) => {
                Root::new(0, l.clone())
            }
            Label::Halpha | Label::DegDer(_) | Label::Dual0(_) => {
                Root::new(0, LatticeVector::zero(2))
            }
            Label::ChiDer(l) | Label::Dual(l) => Root::new(0, l.clone()),
        }
    }

    /// Construct the element the label names. Fails on rows the family does
    /// not admit (non-centroidal twists, shifts in a non-associative torus).
    pub fn realize(&self, spec: &JordanTorusSpec) -> Result<EalaElement, String> {
        let sq2 = Scalar::sqrt2(spec.mode());
        match self {
            Label::Xplus(l) => {
                if !spec.supports(l) {
                    return Err(format!("{} is outside the support of {}", l, spec.descriptor()));
                }
                Ok(EalaElement::from_g(TkkElement::x_plus(spec, l)).scale(&sq2))
            }
            Label::Xminus(l) => {
                if !spec.supports(l) {
                    return Err(format!("{} is outside the support of {}", l, spec.descriptor()));
                }
                Ok(EalaElement::from_g(TkkElement::x_minus(spec, l)).scale(&sq2))
            }
            Label::Lop(l) => Ok(EalaElement::from_g(TkkElement::mid_left_mult(spec, l))),
            Label::Comm(l, t) => Ok(EalaElement::from_g(TkkElement::mid_commutator(
                spec,
                &l.add(t),
                &t.neg(),
            ))),
            Label::Rdiff(l) => {
                let r = right_translation(spec, l)?;
                let diff = OperatorSum::from_hom(&left_mult(spec, l)).sub(&OperatorSum::from_hom(&r));
                Ok(EalaElement::from_g(TkkElement::from_mid(diff)))
            }
            Label::Rop(l) => {
                let r = right_translation(spec, l)?;
                Ok(EalaElement::from_g(TkkElement::from_mid(OperatorSum::from_hom(&r))))
            }
            Label::Halpha => Ok(EalaElement::from_g(TkkElement::mid_left_mult(
                spec,
                &LatticeVector::zero(spec.nu()),
            ))),
            Label::DegDer(i) => Ok(EalaElement::degree_derivation(spec, *i)),
            Label::ChiDer(l) => EalaElement::chi_derivation(spec, l),
            Label::Dual(l) => EalaElement::dual(spec, l),
            Label::Dual0(i) => Ok(EalaElement::dual0(spec, *i)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub root: Root,
    pub label: Label,
    pub value: EalaElement,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SuppressedRow {
    pub root: String,
    pub entry: String,
}

pub struct ChevalleyBasis {
    spec: JordanTorusSpec,
    radius: i64,
    elements: Vec<BasisElement>,
    by_root: BTreeMap<Root, Vec<usize>>,
    suppressed: Vec<SuppressedRow>,
}

/// Coordinate frame shared by basis rows and expression targets: one key
/// per nonzero coefficient slot across the five part species.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum CoordKey {
    Plus(LatticeVector),
    Minus(LatticeVector),
    Mid(LatticeVector, CosetClass, Vec<i64>),
    Central(CentralKey),
    Deriv(DerivationKey),
}

impl CoordKey {
    fn root(&self, nu: usize) -> Root {
        match self {
            CoordKey::Plus(l) => Root::new(1, l.clone()),
            CoordKey::Minus(l) => Root::new(-1, l.clone()),
            CoordKey::Mid(d, _, _) => Root::new(0, d.clone()),
            CoordKey::Central(CentralKey::Dual0(_)) => Root::new(0, LatticeVector::zero(nu)),
            CoordKey::Central(CentralKey::Dual(m)) => Root::new(0, m.clone()),
            CoordKey::Deriv(DerivationKey::Deg(_)) => Root::new(0, LatticeVector::zero(nu)),
            CoordKey::Deriv(DerivationKey::Chi(m)) => Root::new(0, m.clone()),
        }
    }
}

fn coordinates(e: &EalaElement) -> BTreeMap<CoordKey, Scalar> {
    let mut out = BTreeMap::new();
    for (l, s) in e.g_part().plus().terms() {
        out.insert(CoordKey::Plus(l.clone()), s.clone());
    }
    for (l, s) in e.g_part().minus().terms() {
        out.insert(CoordKey::Minus(l.clone()), s.clone());
    }
    for (deg, cf) in e.g_part().mid().parts() {
        for (key, s) in cf.terms() {
            out.insert(CoordKey::Mid(deg.clone(), key.0.clone(), key.1.clone()), s.clone());
        }
    }
    for (k, s) in e.c_part() {
        out.insert(CoordKey::Central(k.clone()), s.clone());
    }
    for (k, s) in e.d_part() {
        out.insert(CoordKey::Deriv(k.clone()), s.clone());
    }
    out
}

/// Canonical odd representatives used by the commutator row shifts.
fn odd_rep_1() -> LatticeVector {
    LatticeVector::from_coords(&[1, 0])
}

fn odd_rep_2() -> LatticeVector {
    LatticeVector::from_coords(&[0, 1])
}

/// Operator-row labels for one isotropic nonzero degree, by family and
/// coset class.
fn operator_rows(spec: &JordanTorusSpec, sigma: &LatticeVector) -> Vec<Label> {
    match spec.family() {
        JordanFamily::Semilattice(s) => {
            let full = s.classes().len() == (1usize << s.nu());
            if full {
                let c = sigma.coset();
                let bits = c.bits();
                if bits == 0 {
                    vec![Label::Lop(sigma.clone())]
                } else if c == CosetClass::of(&odd_rep_2()) {
                    vec![Label::Lop(sigma.clone()), Label::Comm(sigma.clone(), odd_rep_1())]
                } else {
                    vec![Label::Lop(sigma.clone()), Label::Comm(sigma.clone(), odd_rep_2())]
                }
            } else if s.contains(sigma) {
                vec![Label::Lop(sigma.clone())]
            } else {
                // Missing coset: a commutator line, shifted through the
                // largest nonzero support class.
                let shift = s
                    .classes()
                    .iter()
                    .rev()
                    .find(|c| !c.is_zero())
                    .expect("support spans more than the zero class")
                    .representative();
                vec![Label::Comm(sigma.clone(), shift)]
            }
        }
        JordanFamily::QuantumPlus(mode) => {
            if rad_f_contains(sigma, *mode) {
                vec![Label::Lop(sigma.clone())]
            } else {
                vec![Label::Lop(sigma.clone()), Label::Rdiff(sigma.clone())]
            }
        }
        JordanFamily::Hermitian { sign } => {
            if *sign == 1 || spec.supports(sigma) {
                vec![Label::Lop(sigma.clone())]
            } else {
                vec![Label::Rop(sigma.clone())]
            }
        }
    }
}

/// Assemble the per-root generator lists over the window, realize each
/// label, and reject zero or dependent rows.
pub fn build_basis(spec: &JordanTorusSpec, radius: i64) -> Result<ChevalleyBasis, String> {
    assert!(radius >= 1);
    let s_eff = spec.support_semilattice();
    let roots = roots_in_window(&s_eff, radius);
    let mut elements = Vec::new();
    let mut suppressed = Vec::new();

    for root in &roots {
        let mut labels: Vec<Label> = Vec::new();
        match root.m {
            1 => labels.push(Label::Xplus(root.lambda.clone())),
            -1 => labels.push(Label::Xminus(root.lambda.clone())),
            _ => {
                if root.lambda.is_zero() {
                    labels.extend([
                        Label::Halpha,
                        Label::DegDer(1),
                        Label::DegDer(2),
                        Label::Dual0(1),
                        Label::Dual0(2),
                    ]);
                } else {
                    labels.extend(operator_rows(spec, &root.lambda));
                    if is_centroidal(spec, &root.lambda) {
                        labels.push(Label::ChiDer(root.lambda.clone()));
                        labels.push(Label::Dual(root.lambda.clone()));
                    } else {
                        for entry in ["ChiDer", "Dual"] {
                            suppressed.push(SuppressedRow {
                                root: root.to_string(),
                                entry: entry.into(),
                            });
                        }
                    }
                }
            }
        }
        for label in labels {
            let value = label.realize(spec)?;
            if value.is_zero() {
                return Err(format!("basis row {} at root {} is zero", label, root));
            }
            elements.push(BasisElement { root: root.clone(), label, value });
        }
    }

    let mut by_root: BTreeMap<Root, Vec<usize>> = BTreeMap::new();
    for (i, be) in elements.iter().enumerate() {
        by_root.entry(be.root.clone()).or_default().push(i);
    }

    // Independence at every root, in the shared coordinate frame.
    for (root, idxs) in &by_root {
        let coords: Vec<BTreeMap<CoordKey, Scalar>> =
            idxs.iter().map(|&i| coordinates(&elements[i].value)).collect();
        let keys: BTreeSet<&CoordKey> = coords.iter().flat_map(|m| m.keys()).collect();
        let rows: Vec<Vec<Scalar>> = coords
            .iter()
            .map(|m| {
                keys.iter()
                    .map(|k| m.get(*k).cloned().unwrap_or_else(|| Scalar::zero(spec.mode())))
                    .collect()
            })
            .collect();
        if linalg::rank(rows, spec.mode()) != idxs.len() {
            return Err(format!("dependent basis rows at root {}", root));
        }
    }

    Ok(ChevalleyBasis { spec: spec.clone(), radius, elements, by_root, suppressed })
}

impl ChevalleyBasis {
    pub fn spec(&self) -> &JordanTorusSpec {
        &self.spec
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn suppressed(&self) -> &[SuppressedRow] {
        &self.suppressed
    }

    pub fn at_root(&self, root: &Root) -> &[usize] {
        self.by_root.get(root).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn find(&self, label: &Label) -> Option<&BasisElement> {
        self.elements.iter().find(|be| be.label == *label)
    }
}

/// Exact coordinates of a homogeneous element against the basis rows at its
/// root. The element must be supported at that root alone.
pub fn express_in_basis(
    basis: &ChevalleyBasis,
    elem: &EalaElement,
    root: &Root,
) -> Result<Vec<Scalar>, String> {
    let nu = basis.spec.nu();
    let mode = basis.spec.mode();
    let idxs = basis.by_root.get(root).ok_or_else(|| format!("no basis rows at root {}", root))?;
    let target = coordinates(elem);
    for k in target.keys() {
        if k.root(nu) != *root {
            return Err(format!(
                "element is not homogeneous at root {}: stray coefficient at {}",
                root,
                k.root(nu)
            ));
        }
    }
    let cols: Vec<BTreeMap<CoordKey, Scalar>> =
        idxs.iter().map(|&i| coordinates(&basis.elements[i].value)).collect();
    let mut keys: BTreeSet<CoordKey> = target.keys().cloned().collect();
    for c in &cols {
        keys.extend(c.keys().cloned());
    }
    let to_vec = |m: &BTreeMap<CoordKey, Scalar>| -> Vec<Scalar> {
        keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(|| Scalar::zero(mode))).collect()
    };
    let columns: Vec<Vec<Scalar>> = cols.iter().map(&to_vec).collect();
    linalg::solve(&columns, &to_vec(&target), mode)
        .ok_or_else(|| format!("element lies outside the basis span at root {}", root))
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PairFailure {
    pub left: String,
    pub right: String,
    pub coeffs: Vec<String>,
    pub bad: String,
}

#[derive(Debug, serde::Serialize)]
pub struct VerificationReport {
    pub family: String,
    pub radius: i64,
    pub ring: String,
    pub pairs: usize,
    pub skipped: usize,
    pub failures: Vec<PairFailure>,
    pub suppressed_rows: Vec<SuppressedRow>,
    /// Formal mode only: failing pairs after substituting q = 1 / q = -1
    /// and asking for plain integers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_at_one_failures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_at_minus_one_failures: Option<usize>,
    /// Wall time; excluded from reports so repeated runs serialize
    /// identically.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

enum PairOutcome {
    Skipped,
    Checked { q1_ok: bool, qm1_ok: bool },
    Failed(PairFailure),
}

fn rational_integer(r: &num::BigRational) -> bool {
    r.is_integer()
}

fn specializes_to_integer(s: &Scalar, at_minus_one: bool) -> bool {
    match s.eval_pm(at_minus_one) {
        Some((a, b)) => b == num::BigRational::from_integer(0.into()) && rational_integer(&a),
        None => false,
    }
}

/// Bracket every ordered pair of basis rows whose degree sum stays in the
/// window, express the result in the basis, and test every coordinate
/// against the ring. Pairs leaving the window are counted, not checked.
pub fn verify_integrality(basis: &ChevalleyBasis, ring: IntegralityRing) -> VerificationReport {
    let start = Instant::now();
    let n = basis.elements.len();
    let radius = basis.radius;
    let formal = basis.spec.mode() == QMode::Formal;

    let outcomes: Vec<PairOutcome> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (bi, bj) = (&basis.elements[idx / n], &basis.elements[idx % n]);
            let m_sum = bi.root.m + bj.root.m;
            let lam_sum = bi.root.lambda.add(&bj.root.lambda);
            let fail = |coeffs: Vec<String>, bad: String| {
                PairOutcome::Failed(PairFailure {
                    left: bi.label.to_string(),
                    right: bj.label.to_string(),
                    coeffs,
                    bad,
                })
            };
            if m_sum.abs() > 1 {
                let br = e_bracket(&bi.value, &bj.value);
                return if br.is_zero() {
                    PairOutcome::Checked { q1_ok: true, qm1_ok: true }
                } else {
                    fail(vec![], "nonzero bracket beyond the root string".into())
                };
            }
            if lam_sum.norm_inf() > radius {
                return PairOutcome::Skipped;
            }
            let br = e_bracket(&bi.value, &bj.value);
            if br.is_zero() {
                return PairOutcome::Checked { q1_ok: true, qm1_ok: true };
            }
            let root_sum = Root::new(m_sum, lam_sum);
            match express_in_basis(basis, &br, &root_sum) {
                Err(msg) => fail(vec![], msg),
                Ok(coords) => {
                    let strs: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                    if let Some(badc) = coords.iter().find(|c| !ring.is_integral(c)) {
                        return fail(strs, badc.to_string());
                    }
                    let (mut q1_ok, mut qm1_ok) = (true, true);
                    if formal {
                        q1_ok = coords.iter().all(|c| specializes_to_integer(c, false));
                        qm1_ok = coords.iter().all(|c| specializes_to_integer(c, true));
                    }
                    PairOutcome::Checked { q1_ok, qm1_ok }
                }
            }
        })
        .collect();

    let mut pairs = 0;
    let mut skipped = 0;
    let mut failures = Vec::new();
    let (mut q1_bad, mut qm1_bad) = (0usize, 0usize);
    for o in outcomes {
        match o {
            PairOutcome::Skipped => skipped += 1,
            PairOutcome::Checked { q1_ok, qm1_ok } => {
                pairs += 1;
                if !q1_ok {
                    q1_bad += 1;
                }
                if !qm1_ok {
                    qm1_bad += 1;
                }
            }
            PairOutcome::Failed(f) => {
                pairs += 1;
                failures.push(f);
            }
        }
    }

    VerificationReport {
        family: basis.spec.descriptor(),
        radius,
        ring: ring.name().into(),
        pairs,
        skipped,
        failures,
        suppressed_rows: basis.suppressed.clone(),
        q_at_one_failures: if formal { Some(q1_bad) } else { None },
        q_at_minus_one_failures: if formal { Some(qm1_bad) } else { None },
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// The pairing ([x_{a+s}, x_{-a}], [x_{-a-s}, x_a]) at an isotropic shift s
/// in the support, with the lower vector normalized through the
/// multiplication coefficient so opposite root vectors pair to -1. Returns
/// true iff the pairing is exactly -1.
pub fn verify_opposite_pairing(spec: &JordanTorusSpec, sigma: &LatticeVector) -> bool {
    assert!(spec.supports(sigma), "shift {} is outside the support", sigma);
    let mode = spec.mode();
    let zero = LatticeVector::zero(spec.nu());
    let up = EalaElement::from_g(TkkElement::x_plus(spec, sigma));
    let low = EalaElement::from_g(TkkElement::x_minus(spec, &zero));
    let unit_up = EalaElement::from_g(TkkElement::x_plus(spec, &zero));
    let norm = spec.mult_coeff(sigma, &sigma.neg()).inv();
    let down = EalaElement::from_g(TkkElement::x_minus(spec, &sigma.neg())).scale(&norm);
    let lhs = e_bracket(&up, &low);
    let rhs = e_bracket(&down, &unit_up);
    e_form(&lhs, &rhs) == Scalar::from_int(mode, -1)
}

/// Window sweep of the opposite-pairing normalization over all supported
/// shifts.
pub fn verify_opposite_pairing_window(spec: &JordanTorusSpec, radius: i64) -> bool {
    crate::lattice::vectors_in_window(spec.nu(), radius)
        .into_iter()
        .filter(|v| spec.supports(v))
        .all(|v| verify_opposite_pairing(spec, &v))
}

/// For a degree outside the support with a right-shift row, the ratio t
/// with [L_{x^{sigma+tau}}, L_{x^{-tau}}] = t * r_sigma, telling whether
/// the commutator spans the same line as the right shift. Uses the first
/// odd coordinate shift with a nonzero commutator.
pub fn commutator_vs_right_shift_ratio(
    spec: &JordanTorusSpec,
    sigma: &LatticeVector,
) -> Option<Scalar> {
    let r = right_translation(spec, sigma).ok()?;
    if r.is_zero() {
        return None;
    }
    for tau in [odd_rep_1(), odd_rep_2()] {
        let k = op_commutator(&left_mult(spec, &sigma.add(&tau)), &left_mult(spec, &tau.neg()));
        if k.is_zero() {
            continue;
        }
        let (key, kc) = k.coeff().terms().next()?;
        let rc = r.coeff().coefficient(key);
        if rc.is_zero() {
            return None;
        }
        let t = kc.mul(&rc.inv());
        if k.coeff() == &r.coeff().scale(&t) {
            return Some(t);
        }
        return None;
    }
    None
}
