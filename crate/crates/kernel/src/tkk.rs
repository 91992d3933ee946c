//! The Lie algebra J + Instrl(J) + J-bar built from a Jordan torus, with its
//! lattice grading, short grading, and invariant bilinear form.
//!
//! Instrl(J) is the span of left multiplications and their commutators. Its
//! canonical split E = L_x + D fixes x = E(1): commutators kill the unit, so
//! the multiplication part and the derivation part never overlap.

use crate::jordan::{epsilon_pair, multiply, JordanElement, JordanTorusSpec};
use crate::lattice::{vectors_in_window, LatticeVector};
use crate::operator::{l_d_split, left_mult, left_mult_sum, op_commutator, OperatorSum};
use crate::scalar::Scalar;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TkkElement {
    plus: JordanElement,
    mid: OperatorSum,
    minus: JordanElement,
}

impl TkkElement {
    pub fn zero(spec: &JordanTorusSpec) -> Self {
        TkkElement {
            plus: JordanElement::zero(spec),
            mid: OperatorSum::zero(spec),
            minus: JordanElement::zero(spec),
        }
    }

    pub fn from_plus(spec: &JordanTorusSpec, x: JordanElement) -> Self {
        let mut e = Self::zero(spec);
        e.plus = x;
        e
    }

    pub fn from_minus(spec: &JordanTorusSpec, y: JordanElement) -> Self {
        let mut e = Self::zero(spec);
        e.minus = y;
        e
    }

    pub fn from_mid(mid: OperatorSum) -> Self {
        let spec = mid.spec().clone();
        let mut e = Self::zero(&spec);
        e.mid = mid;
        e
    }

    /// Basis monomial in the J part.
    pub fn x_plus(spec: &JordanTorusSpec, lambda: &LatticeVector) -> Self {
        Self::from_plus(spec, JordanElement::basis(spec, lambda))
    }

    /// Basis monomial in the J-bar part.
    pub fn x_minus(spec: &JordanTorusSpec, lambda: &LatticeVector) -> Self {
        Self::from_minus(spec, JordanElement::basis(spec, lambda))
    }

    pub fn mid_left_mult(spec: &JordanTorusSpec, lambda: &LatticeVector) -> Self {
        Self::from_mid(OperatorSum::from_hom(&left_mult(spec, lambda)))
    }

    pub fn mid_commutator(
        spec: &JordanTorusSpec,
        a: &LatticeVector,
        b: &LatticeVector,
    ) -> Self {
        Self::from_mid(OperatorSum::from_hom(&op_commutator(
            &left_mult(spec, a),
            &left_mult(spec, b),
        )))
    }

    pub fn spec(&self) -> &JordanTorusSpec {
        self.mid.spec()
    }

    pub fn plus(&self) -> &JordanElement {
        &self.plus
    }

    pub fn mid(&self) -> &OperatorSum {
        &self.mid
    }

    pub fn minus(&self) -> &JordanElement {
        &self.minus
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.mid.is_zero() && self.minus.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.spec(), other.spec());
        TkkElement {
            plus: self.plus.add(&other.plus),
            mid: self.mid.add(&other.mid),
            minus: self.minus.add(&other.minus),
        }
    }

    pub fn neg(&self) -> Self {
        TkkElement { plus: self.plus.neg(), mid: self.mid.neg(), minus: self.minus.neg() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        TkkElement {
            plus: self.plus.scale(s),
            mid: self.mid.scale(s),
            minus: self.minus.scale(s),
        }
    }

    /// Lattice-degree component: each of the three parts restricted to
    /// degree lambda.
    pub fn grading_component(&self, lambda: &LatticeVector) -> Self {
        TkkElement {
            plus: self.plus.component(lambda),
            mid: OperatorSum::from_hom(&self.mid.degree_part(lambda)),
            minus: self.minus.component(lambda),
        }
    }

    /// Degrees at which any part is nonzero.
    pub fn grading_support(&self) -> BTreeSet<LatticeVector> {
        let mut out = BTreeSet::new();
        for (l, _) in self.plus.terms() {
            out.insert(l.clone());
        }
        for (l, _) in self.mid.parts() {
            out.insert(l.clone());
        }
        for (l, _) in self.minus.terms() {
            out.insert(l.clone());
        }
        out
    }

    /// Short-grading component: +1 the J part, 0 the operator part, -1 the
    /// J-bar part, anything else zero.
    pub fn q_grading_component(&self, m: i64) -> Self {
        let spec = self.spec().clone();
        match m {
            1 => Self::from_plus(&spec, self.plus.clone()),
            0 => Self::from_mid(self.mid.clone()),
            -1 => Self::from_minus(&spec, self.minus.clone()),
            _ => Self::zero(&spec),
        }
    }
}

impl fmt::Display for TkkElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {} | {})", self.plus, self.mid, self.minus)
    }
}

/// The involution on Instrl: L_x + D goes to -L_x + D, computed through the
/// canonical split.
pub fn instrl_bar(e: &OperatorSum) -> OperatorSum {
    let (x, d) = l_d_split(e);
    d.sub(&left_mult_sum(e.spec(), &x))
}

/// x triangle y = L_{xy} + [L_x, L_y], the operator part of a plus-minus
/// bracket.
pub fn triangle(spec: &JordanTorusSpec, x: &JordanElement, y: &JordanElement) -> OperatorSum {
    let lx = left_mult_sum(spec, x);
    let ly = left_mult_sum(spec, y);
    left_mult_sum(spec, &multiply(spec, x, y)).add(&lx.commutator(&ly))
}

pub fn tkk_bracket(a: &TkkElement, b: &TkkElement) -> TkkElement {
    assert_eq!(a.spec(), b.spec(), "bracket across different tori");
    let spec = a.spec().clone();
    let plus = a.mid.apply(&b.plus).sub(&b.mid.apply(&a.plus));
    let minus = instrl_bar(&a.mid).apply(&b.minus).sub(&instrl_bar(&b.mid).apply(&a.minus));
    let mid = triangle(&spec, &a.plus, &b.minus)
        .sub(&triangle(&spec, &b.plus, &a.minus))
        .add(&a.mid.commutator(&b.mid));
    TkkElement { plus, mid, minus }
}

/// Write a pure derivation (a sum of commutators of left multiplications,
/// hence killing the unit) as explicit commutator terms c [L_{x^a}, L_{x^b}].
/// Each degree slice of that span is at most one-dimensional, so a single
/// witness commutator per degree suffices; witnesses are searched in a small
/// window.
fn pure_derivation_terms(d: &OperatorSum) -> Vec<(Scalar, LatticeVector, LatticeVector)> {
    let spec = d.spec().clone();
    let nu = spec.nu();
    let mut out = Vec::new();
    for (sigma, cf) in d.parts() {
        let first = cf.terms().next().expect("stored part must be nonzero");
        let mut found = false;
        'search: for tau in vectors_in_window(nu, 2) {
            if tau.is_zero() {
                continue;
            }
            let w = op_commutator(&left_mult(&spec, &sigma.add(&tau)), &left_mult(&spec, &tau.neg()));
            if w.is_zero() {
                continue;
            }
            let wv = match w.coeff().terms().find(|(k, _)| *k == first.0) {
                Some((_, v)) => v.clone(),
                None => continue,
            };
            let t = first.1.mul(&wv.inv());
            if &w.coeff().scale(&t) == cf {
                out.push((t, sigma.add(&tau), tau.neg()));
                found = true;
                break 'search;
            }
        }
        assert!(
            found,
            "derivation part of degree {} admits no commutator witness; operator outside Instrl",
            sigma
        );
    }
    out
}

/// The invariant form: J pairs with J-bar through epsilon of the product;
/// operator parts split as L_y + D and pair by (y1, y2) plus the derivation
/// pairing (D1, [L_a, L_b]) = (D1 x^a, x^b). The derivation pairing needs a
/// commutator presentation of one side, recovered by witness search; the
/// result is presentation-independent (a tested property).
pub fn tkk_form(a: &TkkElement, b: &TkkElement) -> Scalar {
    assert_eq!(a.spec(), b.spec(), "form across different tori");
    let spec = a.spec().clone();
    let mut s = epsilon_pair(&spec, &a.plus, &b.minus);
    s = s.add(&epsilon_pair(&spec, &b.plus, &a.minus));
    let (y1, d1) = l_d_split(&a.mid);
    let (y2, d2) = l_d_split(&b.mid);
    s = s.add(&epsilon_pair(&spec, &y1, &y2));
    for (c, av, bv) in pure_derivation_terms(&d2) {
        let da = d1.apply(&JordanElement::basis(&spec, &av));
        let p = epsilon_pair(&spec, &da, &JordanElement::basis(&spec, &bv));
        s = s.add(&p.mul(&c));
    }
    s
}

pub fn jacobi_check(a: &TkkElement, b: &TkkElement, c: &TkkElement) -> bool {
    let t1 = tkk_bracket(&tkk_bracket(a, b), c);
    let t2 = tkk_bracket(&tkk_bracket(b, c), a);
    let t3 = tkk_bracket(&tkk_bracket(c, a), b);
    t1.add(&t2).add(&t3).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Semilattice;
    use crate::scalar::QMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_coords(c)
    }

    fn all_specs() -> Vec<JordanTorusSpec> {
        vec![
            JordanTorusSpec::parse_descriptor("semilattice:S:v=2,cosets=00+10+01").unwrap(),
            JordanTorusSpec::semilattice(Semilattice::full(2)),
            JordanTorusSpec::quantum(QMode::Formal).unwrap(),
            JordanTorusSpec::quantum(QMode::RootOfUnity(3)).unwrap(),
            JordanTorusSpec::laurent(),
            JordanTorusSpec::hermitian(-1).unwrap(),
        ]
    }

    fn random_homogeneous(spec: &JordanTorusSpec, rng: &mut ChaCha8Rng, radius: i64) -> TkkElement {
        let pick = |rng: &mut ChaCha8Rng| {
            lv(&[rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)])
        };
        loop {
            let e = match rng.gen_range(0..4) {
                0 => TkkElement::x_plus(spec, &pick(rng)),
                1 => TkkElement::x_minus(spec, &pick(rng)),
                2 => TkkElement::mid_left_mult(spec, &pick(rng)),
                _ => TkkElement::mid_commutator(spec, &pick(rng), &pick(rng)),
            };
            if !e.is_zero() {
                return e;
            }
        }
    }

    #[test]
    fn plus_parts_commute() {
        let spec = JordanTorusSpec::semilattice(Semilattice::full(2));
        let a = TkkElement::x_plus(&spec, &lv(&[1, 0]));
        let b = TkkElement::x_plus(&spec, &lv(&[0, 1]));
        assert!(tkk_bracket(&a, &b).is_zero());
    }

    #[test]
    fn unit_pair_brackets_to_identity_operator() {
        for spec in all_specs() {
            let one_plus = TkkElement::from_plus(&spec, JordanElement::unit(&spec));
            let one_minus = TkkElement::from_minus(&spec, JordanElement::unit(&spec));
            let br = tkk_bracket(&one_plus, &one_minus);
            assert!(br.plus().is_zero() && br.minus().is_zero());
            assert_eq!(
                br.mid(),
                &OperatorSum::from_hom(&crate::operator::identity_op(&spec)),
                "{}",
                spec.descriptor()
            );
        }
    }

    #[test]
    fn identity_operator_acts_on_plus() {
        let spec = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let l1 = TkkElement::mid_left_mult(&spec, &lv(&[0, 0]));
        let x = TkkElement::x_plus(&spec, &lv(&[2, -1]));
        assert_eq!(tkk_bracket(&l1, &x), x);
    }

    #[test]
    fn involution_flips_multiplication_part() {
        let spec = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let l = OperatorSum::from_hom(&left_mult(&spec, &lv(&[1, 1])));
        assert_eq!(instrl_bar(&l), l.neg());
        let d = OperatorSum::from_hom(&op_commutator(
            &left_mult(&spec, &lv(&[1, 0])),
            &left_mult(&spec, &lv(&[0, 1])),
        ));
        assert_eq!(instrl_bar(&d), d);
        assert_eq!(instrl_bar(&instrl_bar(&l.add(&d))), l.add(&d));
    }

    #[test]
    fn form_oracles() {
        let js = JordanTorusSpec::parse_descriptor("semilattice:S:v=2,cosets=00+10+01").unwrap();
        let m = js.mode();
        // J pairs with J-bar through epsilon.
        let a = TkkElement::x_plus(&js, &lv(&[1, 0]));
        let b = TkkElement::x_minus(&js, &lv(&[-1, 0]));
        assert_eq!(tkk_form(&a, &b), Scalar::one(m));
        assert_eq!(tkk_form(&b, &a), Scalar::one(m));
        // Two plus parts pair to zero.
        assert!(tkk_form(&a, &TkkElement::x_plus(&js, &lv(&[-1, 0]))).is_zero());
        // (L_1, L_1) = epsilon(1) = 1.
        let l1 = TkkElement::mid_left_mult(&js, &lv(&[0, 0]));
        assert_eq!(tkk_form(&l1, &l1), Scalar::one(m));
        // (x^lambda, x^{-lambda}-bar) = multiplication coefficient.
        let kq = JordanTorusSpec::quantum(QMode::Formal).unwrap();
        let lam = lv(&[1, 2]);
        let v = tkk_form(
            &TkkElement::x_plus(&kq, &lam),
            &TkkElement::x_minus(&kq, &lam.neg()),
        );
        assert_eq!(v, kq.mult_coeff(&lam, &lam.neg()));
    }

    #[test]
    fn form_well_defined_across_rewriting() {
        // Pair a fixed derivation against both sides of the normal-form
        // rewriting of a commutator; the scalars must agree.
        let js = JordanTorusSpec::parse_descriptor("semilattice:S:v=2,cosets=00+10+01").unwrap();
        let sig = lv(&[1, 0]);
        let tau = lv(&[0, 1]);
        let lhs = TkkElement::mid_commutator(&js, &sig, &tau);
        let rhs = TkkElement::mid_commutator(&js, &sig.add(&tau).add(&lv(&[0, 1])), &lv(&[0, -1]));
        assert_eq!(lhs, rhs);
        for probe in [
            TkkElement::mid_commutator(&js, &lv(&[1, 2]), &lv(&[0, -1])),
            TkkElement::mid_left_mult(&js, &lv(&[-1, -1]).add(&lv(&[0, 0]))),
            TkkElement::mid_commutator(&js, &lv(&[-1, 0]), &lv(&[0, 1])),
        ] {
            assert_eq!(tkk_form(&probe, &lhs), tkk_form(&probe, &rhs));
            assert_eq!(tkk_form(&lhs, &probe), tkk_form(&rhs, &probe));
        }
    }

    #[test]
    fn jacobi_and_form_invariance_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for spec in all_specs() {
            for _ in 0..6 {
                let a = random_homogeneous(&spec, &mut rng, 2);
                let b = random_homogeneous(&spec, &mut rng, 2);
                let c = random_homogeneous(&spec, &mut rng, 2);
                assert!(jacobi_check(&a, &b, &c), "{}", spec.descriptor());
                assert!(jacobi_check(&a, &a, &b));
                // Symmetry and invariance.
                assert_eq!(tkk_form(&a, &b), tkk_form(&b, &a));
                let lhs = tkk_form(&tkk_bracket(&a, &b), &c);
                let rhs = tkk_form(&a, &tkk_bracket(&b, &c));
                assert_eq!(lhs, rhs, "{}", spec.descriptor());
            }
        }
    }

    #[test]
    fn bracket_respects_both_gradings() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for spec in all_specs() {
            for _ in 0..8 {
                let a = random_homogeneous(&spec, &mut rng, 2);
                let b = random_homogeneous(&spec, &mut rng, 2);
                let br = tkk_bracket(&a, &b);
                if br.is_zero() {
                    continue;
                }
                let sa = a.grading_support();
                let sb = b.grading_support();
                assert_eq!(sa.len(), 1);
                assert_eq!(sb.len(), 1);
                let want = sa.first().unwrap().add(sb.first().unwrap());
                assert!(br.grading_support().iter().all(|l| *l == want));
                // Short grading: heights add, clipped to the existing parts.
                let ha: i64 = if !a.plus().is_zero() { 1 } else if !a.minus().is_zero() { -1 } else { 0 };
                let hb: i64 = if !b.plus().is_zero() { 1 } else if !b.minus().is_zero() { -1 } else { 0 };
                let h = ha + hb;
                if h.abs() <= 1 {
                    assert_eq!(br.q_grading_component(h), br);
                } else {
                    assert!(br.is_zero());
                }
            }
        }
    }

    #[test]
    fn short_grading_projections() {
        let spec = JordanTorusSpec::laurent();
        let e = TkkElement::x_plus(&spec, &lv(&[1, 0]))
            .add(&TkkElement::mid_left_mult(&spec, &lv(&[0, 1])))
            .add(&TkkElement::x_minus(&spec, &lv(&[1, 1])));
        assert_eq!(e.q_grading_component(1), TkkElement::x_plus(&spec, &lv(&[1, 0])));
        assert_eq!(e.q_grading_component(0), TkkElement::mid_left_mult(&spec, &lv(&[0, 1])));
        assert_eq!(e.q_grading_component(-1), TkkElement::x_minus(&spec, &lv(&[1, 1])));
        assert!(e.q_grading_component(2).is_zero());
        let total = e
            .q_grading_component(1)
            .add(&e.q_grading_component(0))
            .add(&e.q_grading_component(-1));
        assert_eq!(total, e);
    }

    #[test]
    fn opposite_root_vectors_pair_to_minus_one() {
        // With x_{a+s} realized as x^s in J, x_{-a} as the unit of J-bar,
        // and the opposite vectors normalized by the inverse multiplication
        // coefficient, the two bracket operators pair to -1.
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for spec in all_specs() {
            for _ in 0..4 {
                let sig = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                if !spec.supports(&sig) {
                    continue;
                }
                let e_up = tkk_bracket(
                    &TkkElement::x_plus(&spec, &sig),
                    &TkkElement::from_minus(&spec, JordanElement::unit(&spec)),
                );
                let norm = spec.mult_coeff(&sig, &sig.neg()).inv();
                let x_down = TkkElement::x_minus(&spec, &sig.neg()).scale(&norm);
                let e_down = tkk_bracket(
                    &x_down,
                    &TkkElement::from_plus(&spec, JordanElement::unit(&spec)),
                );
                let pair = tkk_form(&e_up, &e_down);
                assert_eq!(pair, Scalar::from_int(spec.mode(), -1), "{}", spec.descriptor());
            }
        }
    }
}
