//! Rank-nu integer lattice, mod-2 coset classes, semilattices, and the A1
//! root-system window with its axiom checks.

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Element of the free abelian group Z^nu.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(nu: usize) -> Self {
        LatticeVector(vec![0; nu])
    }

    pub fn from_coords(c: &[i64]) -> Self {
        LatticeVector(c.to_vec())
    }

    pub fn nu(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nu(), other.nu());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.nu(), other.nu());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn coset(&self) -> CosetClass {
        CosetClass::of(self)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl FromStr for LatticeVector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| format!("lattice vector '{}' must be parenthesized, like (1,0)", s))?;
        let coords: Result<Vec<i64>, _> =
            inner.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let coords = coords.map_err(|e| format!("bad coordinate in '{}': {}", s, e))?;
        if coords.is_empty() {
            return Err(format!("empty lattice vector '{}'", s));
        }
        Ok(LatticeVector(coords))
    }
}

/// All vectors with sup-norm at most radius, lexicographic order.
pub fn vectors_in_window(nu: usize, radius: i64) -> Vec<LatticeVector> {
    assert!(radius >= 0);
    let mut out = Vec::new();
    let mut cur = vec![-radius; nu];
    loop {
        out.push(LatticeVector(cur.clone()));
        let mut i = nu;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < radius {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

/// Class of a vector mod 2Z^nu, stored as a parity bit per coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct CosetClass {
    nu: u8,
    bits: u32,
}

impl CosetClass {
    pub fn zero(nu: usize) -> Self {
        assert!(nu <= 32);
        CosetClass { nu: nu as u8, bits: 0 }
    }

    pub fn of(v: &LatticeVector) -> Self {
        let mut bits = 0u32;
        for (i, c) in v.0.iter().enumerate() {
            if c.rem_euclid(2) == 1 {
                bits |= 1 << i;
            }
        }
        CosetClass { nu: v.nu() as u8, bits }
    }

    pub fn from_bits(nu: usize, bits: u32) -> Self {
        assert!(nu <= 32 && bits < (1u32 << nu));
        CosetClass { nu: nu as u8, bits }
    }

    pub fn nu(&self) -> usize {
        self.nu as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Class of a sum is the XOR of classes; every class is its own inverse.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nu, other.nu, "coset rank mismatch");
        CosetClass { nu: self.nu, bits: self.bits ^ other.bits }
    }

    /// Smallest representative: each parity bit as a 0/1 coordinate.
    pub fn representative(&self) -> LatticeVector {
        LatticeVector((0..self.nu()).map(|i| ((self.bits >> i) & 1) as i64).collect())
    }

    pub fn all(nu: usize) -> Vec<CosetClass> {
        let mut v: Vec<_> = (0..(1u32 << nu)).map(|b| CosetClass::from_bits(nu, b)).collect();
        v.sort();
        v
    }
}

/// Order by the displayed bit string, so 00 < 01 < 10 < 11.
impl Ord for CosetClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nu.cmp(&other.nu).then_with(|| {
            for i in 0..self.nu() {
                let a = (self.bits >> i) & 1;
                let b = (other.bits >> i) & 1;
                if a != b {
                    return a.cmp(&b);
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PartialOrd for CosetClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nu() {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

impl FromStr for CosetClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t.len() > 32 {
            return Err(format!("bad coset class '{}'", s));
        }
        let mut bits = 0u32;
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(format!("bad coset class '{}': expected bits like 10", s)),
            }
        }
        Ok(CosetClass { nu: t.len() as u8, bits })
    }
}

impl Serialize for CosetClass {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Union of mod-2 cosets containing 0 and spanning the lattice; all
/// membership is decided at coset level, so queries are exact regardless of
/// any enumeration window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Semilattice {
    nu: usize,
    classes: BTreeSet<CosetClass>,
}

impl Semilattice {
    pub fn new(nu: usize, classes: BTreeSet<CosetClass>) -> Result<Self, String> {
        for c in &classes {
            if c.nu() != nu {
                return Err(format!("class {} has rank {}, expected {}", c, c.nu(), nu));
            }
        }
        if !classes.contains(&CosetClass::zero(nu)) {
            return Err("semilattice must contain the zero class".into());
        }
        // Spanning: the parity vectors must span (Z/2)^nu; together with 2*Z^nu
        // (inside the zero class) that generates the whole lattice.
        let mut basis: Vec<u32> = Vec::new();
        for c in &classes {
            let mut b = c.bits();
            for &e in &basis {
                let low = e & e.wrapping_neg();
                if b & low != 0 {
                    b ^= e;
                }
            }
            if b != 0 {
                basis.push(b);
            }
        }
        if basis.len() < nu {
            return Err("semilattice classes do not span the lattice".into());
        }
        Ok(Semilattice { nu, classes })
    }

    pub fn full(nu: usize) -> Self {
        Semilattice { nu, classes: CosetClass::all(nu).into_iter().collect() }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn classes(&self) -> &BTreeSet<CosetClass> {
        &self.classes
    }

    pub fn contains_class(&self, c: &CosetClass) -> bool {
        self.classes.contains(c)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.classes.contains(&v.coset())
    }

    /// Classes of S + S: all pairwise sums, always including zero.
    pub fn sum_classes(&self) -> BTreeSet<CosetClass> {
        let mut out = BTreeSet::new();
        for a in &self.classes {
            for b in &self.classes {
                out.insert(a.add(b));
            }
        }
        out
    }

    /// Descriptor grammar: `S:v=2,cosets=00+10+01` or `S:full,v=2`.
    pub fn parse_descriptor(s: &str) -> Result<Self, String> {
        let body = s.strip_prefix("S:").ok_or_else(|| {
            format!("semilattice descriptor '{}' must start with 'S:'", s)
        })?;
        let parts: Vec<&str> = body.split(',').map(|p| p.trim()).collect();
        let mut nu: Option<usize> = None;
        let mut full = false;
        let mut cosets: Option<Vec<CosetClass>> = None;
        for p in &parts {
            if *p == "full" {
                full = true;
            } else if let Some(v) = p.strip_prefix("v=") {
                nu = Some(v.parse().map_err(|e| format!("bad rank in '{}': {}", s, e))?);
            } else if let Some(cs) = p.strip_prefix("cosets=") {
                let classes: Result<Vec<CosetClass>, String> =
                    cs.split('+').map(|b| b.parse()).collect();
                cosets = Some(classes?);
            } else {
                return Err(format!("unknown descriptor part '{}' in '{}'", p, s));
            }
        }
        let nu = nu.ok_or_else(|| format!("descriptor '{}' missing v=", s))?;
        if full {
            if cosets.is_some() {
                return Err(format!("descriptor '{}' mixes full with cosets=", s));
            }
            return Ok(Semilattice::full(nu));
        }
        let cosets = cosets.ok_or_else(|| format!("descriptor '{}' missing cosets=", s))?;
        Semilattice::new(nu, cosets.into_iter().collect())
    }

    pub fn descriptor(&self) -> String {
        if self.classes.len() == 1 << self.nu {
            return format!("S:full,v={}", self.nu);
        }
        let cs: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        format!("S:v={},cosets={}", self.nu, cs.join("+"))
    }
}

/// Gamma multiplication table on coset classes: 1 iff both classes belong to
/// the semilattice and they are equal or one of them is zero.
pub fn gamma(c1: &CosetClass, c2: &CosetClass, s: &Semilattice) -> i64 {
    if !s.contains_class(c1) || !s.contains_class(c2) {
        return 0;
    }
    if c1 == c2 || c1.is_zero() || c2.is_zero() {
        1
    } else {
        0
    }
}

/// Linear functional with integer coefficients, acting by dot product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct IntegralFunctional(pub Vec<i64>);

impl IntegralFunctional {
    pub fn apply(&self, v: &LatticeVector) -> i64 {
        assert_eq!(self.0.len(), v.nu());
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len());
        IntegralFunctional(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        IntegralFunctional(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// The functional vanishing on sigma: for sigma = (k1, k2) this is
/// k2*theta1 - k1*theta2, applied verbatim with no gcd normalization so that
/// functional addition matches lattice addition of the sigmas.
pub fn theta_sigma(sigma: &LatticeVector) -> IntegralFunctional {
    assert_eq!(sigma.nu(), 2, "theta_sigma is rank-2 only");
    assert!(!sigma.is_zero(), "theta_sigma of zero");
    IntegralFunctional(vec![sigma.0[1], -sigma.0[0]])
}

/// cross(a, b) = a1*b2 - a2*b1; theta_sigma(lambda) = cross(lambda, sigma).
pub fn cross(a: &LatticeVector, b: &LatticeVector) -> i64 {
    assert_eq!(a.nu(), 2);
    assert_eq!(b.nu(), 2);
    a.0[0] * b.0[1] - a.0[1] * b.0[0]
}

/// Root m*alpha + lambda with m in {-1, 0, 1}; (beta, beta) = m^2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Root {
    pub m: i8,
    pub lambda: LatticeVector,
}

impl Root {
    pub fn new(m: i8, lambda: LatticeVector) -> Self {
        assert!((-1..=1).contains(&m));
        Root { m, lambda }
    }

    pub fn is_isotropic(&self) -> bool {
        self.m == 0
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m {
            0 => write!(f, "{}", self.lambda),
            1 => write!(f, "a+{}", self.lambda),
            _ => write!(f, "-a+{}", self.lambda),
        }
    }
}

/// Exact membership test for m*alpha + lambda in R = (S+S) u (+-alpha + S).
pub fn root_in_system(s: &Semilattice, sum: &BTreeSet<CosetClass>, m: i64, lambda: &LatticeVector) -> bool {
    match m {
        0 => sum.contains(&lambda.coset()),
        1 | -1 => s.contains(lambda),
        _ => false,
    }
}

/// All roots with the lattice part inside the sup-norm window, sorted by
/// (m, lambda).
pub fn roots_in_window(s: &Semilattice, radius: i64) -> Vec<Root> {
    assert_eq!(s.nu(), 2, "root window is rank-2 only");
    assert!(radius >= 0);
    let sum = s.sum_classes();
    let mut out = Vec::new();
    for m in [-1i8, 0, 1] {
        for v in vectors_in_window(2, radius) {
            if root_in_system(s, &sum, m as i64, &v) {
                out.push(Root::new(m, v));
            }
        }
    }
    out.sort();
    out
}

/// Outcome of one axiom check over a window.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomStatus {
    pub axiom: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EarsReport {
    pub radius: i64,
    pub roots: usize,
    pub axioms: Vec<AxiomStatus>,
}

impl EarsReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.status != "fail")
    }
}

/// Check the reduced-A1 root-system axioms on the window. Membership queries
/// go through coset arithmetic, so truncation affects which roots and strings
/// get enumerated, never whether a queried point lies in R.
pub fn check_ears_axioms_window(s: &Semilattice, radius: i64) -> EarsReport {
    assert_eq!(s.nu(), 2);
    let sum = s.sum_classes();
    let roots = roots_in_window(s, radius);
    let mut axioms = Vec::new();
    let pass = |name: &str, detail: String| AxiomStatus {
        axiom: name.into(),
        status: "pass".into(),
        detail,
    };
    let fail = |name: &str, detail: String| AxiomStatus {
        axiom: name.into(),
        status: "fail".into(),
        detail,
    };

    // R1: 0 in R.
    let zero = LatticeVector::zero(2);
    axioms.push(if root_in_system(s, &sum, 0, &zero) {
        pass("R1", "0 is a root".into())
    } else {
        fail("R1", "0 missing from R".into())
    });

    // R2: R = -R; negation preserves both the window and the membership rule.
    let mut r2_ok = true;
    for r in &roots {
        if !root_in_system(s, &sum, -(r.m as i64), &r.lambda.neg()) {
            r2_ok = false;
            axioms.push(fail("R2", format!("-({}) not in R", r)));
            break;
        }
    }
    if r2_ok {
        axioms.push(pass("R2", format!("checked {} roots", roots.len())));
    }

    // R3: R spans the (1 + nu)-dimensional ambient space.
    {
        let mut rows: Vec<[i64; 3]> =
            roots.iter().map(|r| [r.m as i64, r.lambda.0[0], r.lambda.0[1]]).collect();
        let mut rank = 0usize;
        for col in 0..3 {
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) {
                rows.swap(rank, p);
                let (pr, rest) = rows.split_at_mut(rank + 1);
                let pivot = pr[rank];
                for row in rest {
                    if row[col] != 0 {
                        let a = pivot[col];
                        let b = row[col];
                        for k in 0..3 {
                            row[k] = row[k] * a - pivot[k] * b;
                        }
                    }
                }
                rank += 1;
            }
        }
        axioms.push(if rank == 3 {
            pass("R3", "window roots span the ambient space".into())
        } else {
            fail("R3", format!("window roots span only rank {}", rank))
        });
    }

    // R4: alpha nonisotropic implies 2*alpha not in R; the alpha-coefficient
    // of 2*alpha is +-2, outside {-1,0,1}, so this holds by construction.
    axioms.push(pass("R4", "2*alpha has alpha-coefficient +-2, never a root".into()));

    // R5: window enumeration cannot decide discreteness.
    axioms.push(AxiomStatus {
        axiom: "R5".into(),
        status: "structural".into(),
        detail: "lattice subset, discrete by construction".into(),
    });

    // R6: root strings. For alpha = e*alphadot + lam (e = +-1) and beta =
    // m*alphadot + mu, beta + i*alpha has alpha-coefficient m + i*e, so only
    // three i values can give roots; the string must be an unbroken interval
    // {-d..u} containing 0 with d - u = (beta, alpha_check) = 2*m*e.
    {
        let mut r6_ok = true;
        'outer: for alpha in roots.iter().filter(|r| r.m != 0) {
            let e = alpha.m as i64;
            for beta in &roots {
                let m = beta.m as i64;
                let members: Vec<i64> = (-2..=2)
                    .filter(|&i| {
                        root_in_system(
                            s,
                            &sum,
                            m + i * e,
                            &beta.lambda.add(&alpha.lambda.scale(i)),
                        )
                    })
                    .collect();
                let lo = *members.first().unwrap_or(&0);
                let hi = *members.last().unwrap_or(&0);
                let contiguous = members.len() as i64 == hi - lo + 1;
                let pairing = 2 * m * e;
                if !contiguous || lo > 0 || hi < 0 || (-lo) - hi != pairing {
                    r6_ok = false;
                    axioms.push(fail(
                        "R6",
                        format!(
                            "string of {} through {}: members {:?}, pairing {}",
                            alpha, beta, members, pairing
                        ),
                    ));
                    break 'outer;
                }
            }
        }
        if r6_ok {
            axioms.push(pass("R6", "all window strings are valid intervals".into()));
        }
    }

    // R7: every isotropic root sigma admits alpha nonisotropic with
    // alpha + sigma in R; decided at coset level.
    {
        let mut r7_ok = true;
        for r in roots.iter().filter(|r| r.m == 0) {
            let c = r.lambda.coset();
            let found = s.classes().iter().any(|cl| s.contains_class(&cl.add(&c)));
            if !found {
                r7_ok = false;
                axioms.push(fail("R7", format!("isotropic root {} is isolated", r)));
                break;
            }
        }
        if r7_ok {
            axioms.push(pass("R7", "no isolated isotropic roots in window".into()));
        }
    }

    // R8: connectedness of the nonisotropic part, by components under the
    // relation (alpha, beta) != 0; here (alpha, beta) = m1*m2.
    {
        let noniso: Vec<&Root> = roots.iter().filter(|r| r.m != 0).collect();
        let n = noniso.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            let mut i = i;
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let pairing = (noniso[i].m as i64) * (noniso[j].m as i64);
                if pairing != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let comps: BTreeSet<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        axioms.push(if comps.len() <= 1 {
            pass("R8", format!("{} nonisotropic roots in one component", n))
        } else {
            fail("R8", format!("{} orthogonal components", comps.len()))
        });
    }

    EarsReport { radius, roots: roots.len(), axioms }
}
