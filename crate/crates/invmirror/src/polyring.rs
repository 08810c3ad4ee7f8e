//! Bivariate polynomials over Q, Groebner bases (degrevlex, x > y) and
//! L-graded pieces of quotient rings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::family::Family;
use crate::grading::{GradingGroup, GroupElement};
use crate::linalg::{rank_of, Q};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };

    pub fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    pub fn total(self) -> u32 {
        self.u + self.v
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.u <= other.u && self.v <= other.v
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial::new(self.u.max(other.u), self.v.max(other.v))
    }

    pub fn degree(self) -> GroupElement {
        GroupElement::monomial(self.u, self.v)
    }
}

/// Degree-reverse-lexicographic order with x > y.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then(other.v.cmp(&self.v))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |name: &str, e: u32| match e {
            0 => String::new(),
            1 => name.to_string(),
            e => format!("{name}^{e}"),
        };
        match (self.u, self.v) {
            (0, 0) => f.write_str("1"),
            (_, 0) => f.write_str(&part("x", self.u)),
            (0, _) => f.write_str(&part("y", self.v)),
            _ => write!(f, "{}*{}", part("x", self.u), part("y", self.v)),
        }
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.u + other.u, self.v + other.v)
    }
}

/// `self / other`; caller guarantees divisibility.
impl std::ops::Div for Monomial {
    type Output = Monomial;

    fn div(self, other: Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial::new(self.u - other.u, self.v - other.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::term(Q::one(), 0, 0)
    }

    pub fn term(c: Q, u: u32, v: u32) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::new(u, v), c);
        p
    }

    pub fn mono(u: u32, v: u32) -> Self {
        Polynomial::term(Q::one(), u, v)
    }

    pub fn from_terms(terms: &[(i128, u32, u32)]) -> Self {
        let mut p = Polynomial::zero();
        for &(c, u, v) in terms {
            p.add_term(Monomial::new(u, v), Q::from(c));
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Q)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        self.terms.get(&m).copied().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<(Monomial, Q)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, *c))
    }

    pub fn scale(&self, c: Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (*m, *x * c)).collect() }
    }

    pub fn mul_term(&self, m: Monomial, c: Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(k, x)| (*k * m, *x * c)).collect() }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in o.terms() {
            r.add_term(m, c);
        }
        r
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in o.terms() {
            r.add_term(m, -c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(-Q::one())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in o.terms() {
                r.add_term(m1 * m2, c1 * c2);
            }
        }
        r
    }

    /// The common L-degree of all terms, if the polynomial is homogeneous.
    /// The zero polynomial has no degree.
    pub fn homogeneous_degree(&self, g: &GradingGroup) -> Option<GroupElement> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| g.equal(m.degree(), d)).then_some(d)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms().map(|(m, c)| to_f64(c) * x.powi(m.u as i32) * y.powi(m.v as i32)).sum()
    }
}

pub fn to_f64(c: Q) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = *c < Q::zero();
            let a = if neg { -*c } else { *c };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if a.is_one() {
                write!(f, "{m}")?;
            } else if *m == Monomial::ONE {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Fully reduce `p` modulo `basis` (each element with a leading term).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let leads: Vec<(Monomial, Q)> = basis.iter().map(|b| b.leading().expect("nonzero basis element")).collect();
    let mut rem = Polynomial::zero();
    let mut work = p.clone();
    while let Some((m, c)) = work.leading() {
        match leads.iter().position(|(lm, _)| lm.divides(m)) {
            Some(k) => {
                let (lm, lc) = leads[k];
                work = work.sub(&basis[k].mul_term(m / lm, c / lc));
            }
            None => {
                rem.add_term(m, c);
                work.terms.remove(&m);
            }
        }
    }
    rem
}

fn s_polynomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (ma, ca) = a.leading().expect("nonzero");
    let (mb, cb) = b.leading().expect("nonzero");
    let l = ma.lcm(mb);
    a.mul_term(l / ma, Q::one() / ca).sub(&b.mul_term(l / mb, Q::one() / cb))
}

/// Reduced Groebner basis (monic, sorted by increasing leading monomial).
pub fn groebner(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut basis: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, _) = basis[i].leading().expect("nonzero");
        let (mj, _) = basis[j].leading().expect("nonzero");
        // coprime leading monomials: S-polynomial reduces to zero
        if mi.lcm(mj) == mi * mj {
            continue;
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r);
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    }
    // minimise
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        let (m, _) = b.leading().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(j, o)| {
            let (mo, _) = o.leading().expect("nonzero");
            j != k && mo.divides(m) && (mo != m || j < k)
        });
        if !redundant {
            minimal.push(b.clone());
        }
    }
    // inter-reduce and normalise
    let mut reduced: Vec<Polynomial> = Vec::new();
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = minimal[k].leading().expect("nonzero");
        let tail = minimal[k].sub(&Polynomial::term(lc, lm.u, lm.v));
        let tail = if others.is_empty() { tail } else { normal_form(&tail, &others) };
        let mut p = tail;
        p.add_term(lm, lc);
        reduced.push(p.scale(Q::one() / lc));
    }
    reduced.sort_by_key(|p| p.leading().expect("nonzero").0);
    reduced
}

/// Requested degree of a graded piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceDegree {
    /// A class in L / Zc, given by any representative.
    Class(GroupElement),
    /// An exact element of L.
    Exact(GroupElement),
}

/// The shifted quotient (S / I)(shift).
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub group: GradingGroup,
    pub gens: Vec<Polynomial>,
    pub gb: Vec<Polynomial>,
    pub shift: GroupElement,
}

impl QuotientRing {
    pub fn new(group: &GradingGroup, gens: Vec<Polynomial>, shift: GroupElement) -> Self {
        let gb = groebner(&gens);
        QuotientRing { group: group.clone(), gens, gb, shift }
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.gb)
    }

    pub fn is_standard(&self, m: Monomial) -> bool {
        !self.gb.iter().any(|g| g.leading().expect("nonzero").0.divides(m))
    }

    /// Exponent bounds (A, B) with every standard monomial satisfying
    /// u < A and v < B, when the quotient is finite-dimensional.
    pub fn staircase(&self) -> Option<(u32, u32)> {
        let mut a = None;
        let mut b = None;
        for g in &self.gb {
            let (m, _) = g.leading().expect("nonzero");
            if m.v == 0 {
                a = Some(a.map_or(m.u, |x: u32| x.min(m.u)));
            }
            if m.u == 0 {
                b = Some(b.map_or(m.v, |x: u32| x.min(m.v)));
            }
        }
        Some((a?, b?))
    }

    /// Standard monomials spanning the piece of exact degree `d` of the
    /// shifted module, that is monomials of degree `d + shift`.
    pub fn exact_piece(&self, d: GroupElement) -> Vec<Monomial> {
        self.group
            .monomials_of_degree(d + self.shift)
            .into_iter()
            .map(|(u, v)| Monomial::new(u, v))
            .filter(|&m| self.is_standard(m))
            .collect()
    }

    /// Basis of a graded piece, each monomial paired with its index m in
    /// `deg = m c + delta` (m = 0 for exact requests).
    pub fn graded_piece_basis(&self, degree: PieceDegree, bound: Option<u32>) -> Result<Vec<(Monomial, i64)>, Error> {
        match degree {
            PieceDegree::Exact(d) => Ok(self.exact_piece(d).into_iter().map(|m| (m, 0)).collect()),
            PieceDegree::Class(delta) => {
                let (ua, vb) = match (self.staircase(), bound) {
                    (Some((a, b)), Some(n)) => (a.min(n + 1), b.min(n + 1)),
                    (Some(ab), None) => ab,
                    (None, Some(n)) => (n + 1, n + 1),
                    (None, None) => return Err(Error::UnboundedPiece),
                };
                let mut out = Vec::new();
                for u in 0..ua {
                    for v in 0..vb {
                        let m = Monomial::new(u, v);
                        if !self.is_standard(m) {
                            continue;
                        }
                        if let Some(k) = self.group.decompose_mod_c(m.degree() - self.shift, delta) {
                            out.push((m, k));
                        }
                    }
                }
                out.sort_by_key(|&(m, k)| (k, m));
                Ok(out)
            }
        }
    }
}

/// Result of the independent monomial-enumeration oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub dim: usize,
    /// False when survivors remain in the highest enumerated degree, so the
    /// bound may not enclose the staircase.
    pub enclosed: bool,
}

/// Dimension of the class-`delta` piece of (S/I)(shift), computed without
/// Groebner bases: for every exact degree whose monomials all have
/// exponents at most `bound`, count dim S_d minus the rank of I_d.
pub fn brute_force_piece_dim(
    group: &GradingGroup,
    gens: &[Polynomial],
    shift: GroupElement,
    delta: GroupElement,
    bound: u32,
) -> BruteForce {
    let gdeg: Vec<(GroupElement, &Polynomial)> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| (g.homogeneous_degree(group).expect("generators must be homogeneous"), g))
        .collect();
    let (wx, wy) = group.weights;
    let cap = Q::from(bound as i128) * wx.min(wy);
    let base = delta + shift;
    // lowest m with non-negative weight
    let w0 = group.weight(base);
    let mut m = (-w0).ceil().to_integer() as i64;
    let mut dim = 0;
    let mut last_survivors = 0;
    loop {
        let d = base + m * GroupElement::C;
        if group.weight(d) > cap {
            break;
        }
        let monos = group.monomials_of_degree(d);
        if !monos.is_empty() {
            let index: BTreeMap<(u32, u32), usize> = monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
            let mut rows = Vec::new();
            for (e, g) in &gdeg {
                for (u, v) in group.monomials_of_degree(d - *e) {
                    let prod = g.mul_term(Monomial::new(u, v), Q::one());
                    let mut row = vec![Q::zero(); monos.len()];
                    for (mm, c) in prod.terms() {
                        row[index[&(mm.u, mm.v)]] = c;
                    }
                    rows.push(row);
                }
            }
            last_survivors = monos.len() - rank_of(monos.len(), &rows);
            dim += last_survivors;
        }
        m += 1;
    }
    BruteForce { dim, enclosed: last_survivors == 0 }
}

/// The polynomials w, f of a family (f is the factor with w = x y f for
/// loop, w = y f for chain; None for bp).
pub fn potential(family: Family, p: u32, q: u32) -> (Polynomial, Option<Polynomial>) {
    match family {
        Family::Loop => (
            Polynomial::from_terms(&[(1, p, 1), (1, 1, q)]),
            Some(Polynomial::from_terms(&[(1, p - 1, 0), (1, 0, q - 1)])),
        ),
        Family::Chain => (
            Polynomial::from_terms(&[(1, p, 1), (1, 0, q)]),
            Some(Polynomial::from_terms(&[(1, p, 0), (1, 0, q - 1)])),
        ),
        Family::Bp => (Polynomial::from_terms(&[(1, p, 0), (1, 0, q)]), None),
    }
}

/// Berglund-Huebsch transpose of the potential.
pub fn transpose_potential(family: Family, p: u32, q: u32) -> Polynomial {
    match family {
        Family::Loop => Polynomial::from_terms(&[(1, p, 1), (1, 1, q)]),
        Family::Chain => Polynomial::from_terms(&[(1, p, 0), (1, 1, q)]),
        Family::Bp => Polynomial::from_terms(&[(1, p, 0), (1, 0, q)]),
    }
}

/// A monomial violating a divisibility lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaViolation {
    pub lemma: &'static str,
    pub a: i64,
    pub b: i64,
    pub u: u32,
    pub v: u32,
}

/// Membership of x^u y^v in (x^ea, y^eb); non-positive exponents give the unit ideal.
fn in_xy(u: u32, v: u32, ea: i64, eb: i64) -> bool {
    u as i64 >= ea || v as i64 >= eb
}

fn class_offset(g: &GradingGroup, u: u32, v: u32, a: i64, b: i64) -> bool {
    g.decompose_mod_c(GroupElement::monomial(u, v), GroupElement::new(a, b, 0)).is_some()
}

/// Exhaustive check of the loop divisibility lemma for degrees a x + b y
/// (mod c), |a| <= p-1, |b| <= q-1, exponents up to `max_exp`.
pub fn check_grading_ideal(g: &GradingGroup, max_exp: u32) -> Vec<LemmaViolation> {
    assert_eq!(g.spec.family, Family::Loop);
    let (p, q) = (g.spec.p as i64, g.spec.q as i64);
    let mut bad = Vec::new();
    for a in -(p - 1)..=(p - 1) {
        for b in -(q - 1)..=(q - 1) {
            for u in 0..=max_exp {
                for v in 0..=max_exp {
                    if !class_offset(g, u, v, a, b) {
                        continue;
                    }
                    let mut push = |lemma| bad.push(LemmaViolation { lemma, a, b, u, v });
                    if !(in_xy(u, v, a, q - 1 + b) && in_xy(u, v, p - 1 + a, b)) {
                        push("grading-ideal-i");
                    }
                    if a <= p - 2 && !in_xy(u, v, a, q + b) {
                        push("grading-ideal-ii");
                    }
                    if b <= q - 2 && !in_xy(u, v, p + a, b) {
                        push("grading-ideal-iii");
                    }
                }
            }
        }
    }
    bad
}

/// Non-constant monomials of degree 0 mod c lie in
/// (x^{pq-1}, x^p y, x y^q, y^{pq-1}).
pub fn check_grading_zero(g: &GradingGroup, max_exp: u32) -> Vec<LemmaViolation> {
    assert_eq!(g.spec.family, Family::Loop);
    let (p, q) = (g.spec.p, g.spec.q);
    let mut bad = Vec::new();
    for u in 0..=max_exp {
        for v in 0..=max_exp {
            if (u, v) == (0, 0) || !class_offset(g, u, v, 0, 0) {
                continue;
            }
            let ok = u >= p * q - 1 || (u >= p && v >= 1) || (u >= 1 && v >= q) || v >= p * q - 1;
            if !ok {
                bad.push(LemmaViolation { lemma: "grading-zero", a: 0, b: 0, u, v });
            }
        }
    }
    bad
}

/// The chain-family analogue: (i) x^a divides, (ii) membership in
/// (x^a y^b, x^{p+a}) when b <= q-1, (iii) degree zero non-constant terms
/// lie in (x^{pq}, x^p y, y^q).
pub fn check_chain_grading(g: &GradingGroup, max_exp: u32) -> Vec<LemmaViolation> {
    assert_eq!(g.spec.family, Family::Chain);
    let (p, q) = (g.spec.p as i64, g.spec.q as i64);
    let mut bad = Vec::new();
    for a in -p..=(p - 1) {
        for b in -q..=(2 * q) {
            for u in 0..=max_exp {
                for v in 0..=max_exp {
                    if !class_offset(g, u, v, a, b) {
                        continue;
                    }
                    let (ui, vi) = (u as i64, v as i64);
                    let mut push = |lemma| bad.push(LemmaViolation { lemma, a, b, u, v });
                    if ui < a {
                        push("chain-grading-i");
                    }
                    if b < q && !((ui >= a && vi >= b) || ui >= p + a) {
                        push("chain-grading-ii");
                    }
                    if a == 0 && b == 0 && (u, v) != (0, 0) {
                        let (pu, qu) = (p as u32, q as u32);
                        if !(u >= pu * qu || (u >= pu && v >= 1) || v >= qu) {
                            push("chain-grading-iii");
                        }
                    }
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilySpec;
    use crate::linalg::q;

    #[test]
    fn order_is_degrevlex() {
        assert!(Monomial::new(2, 0) > Monomial::new(1, 1));
        assert!(Monomial::new(1, 1) > Monomial::new(0, 2));
        assert!(Monomial::new(0, 3) > Monomial::new(2, 0));
    }

    #[test]
    fn groebner_examples() {
        // (x, y (x + y)) = (x, y^2)
        let gb = groebner(&[Polynomial::mono(1, 0), Polynomial::from_terms(&[(1, 1, 1), (1, 0, 2)])]);
        assert_eq!(gb, vec![Polynomial::mono(1, 0), Polynomial::mono(0, 2)]);
        assert_eq!(groebner(&[Polynomial::one(), Polynomial::mono(3, 1)]), vec![Polynomial::one()]);
        // (y, x^3 + y^3) = (y, x^3)
        let gb = groebner(&[Polynomial::mono(0, 1), Polynomial::from_terms(&[(1, 3, 0), (1, 0, 3)])]);
        assert_eq!(gb, vec![Polynomial::mono(0, 1), Polynomial::mono(3, 0)]);
    }

    #[test]
    fn groebner_spolys_reduce_to_zero() {
        let gens = vec![Polynomial::from_terms(&[(1, 2, 1), (-1, 0, 3)]), Polynomial::from_terms(&[(1, 3, 0), (2, 1, 2), (1, 0, 1)])];
        let gb = groebner(&gens);
        for i in 0..gb.len() {
            for j in 0..gb.len() {
                assert!(normal_form(&s_polynomial(&gb[i], &gb[j]), &gb).is_zero());
            }
        }
        for g in &gens {
            assert!(normal_form(g, &gb).is_zero());
        }
    }

    #[test]
    fn piece_examples() {
        let g = GradingGroup::new(Family::Loop, 2, 2).unwrap();
        let qr = QuotientRing::new(&g, vec![Polynomial::mono(1, 0), Polynomial::mono(0, 2)], GroupElement::ZERO);
        let piece = qr.graded_piece_basis(PieceDegree::Class(GroupElement::Y), None).unwrap();
        assert_eq!(piece.iter().map(|x| x.0).collect::<Vec<_>>(), vec![Monomial::new(0, 1)]);
        let one = qr.graded_piece_basis(PieceDegree::Class(GroupElement::ZERO), None).unwrap();
        assert!(one.iter().any(|x| x.0 == Monomial::ONE));
        let bf = brute_force_piece_dim(&g, &[Polynomial::mono(1, 0), Polynomial::mono(0, 2)], GroupElement::ZERO, GroupElement::Y, 6);
        assert_eq!(bf, BruteForce { dim: 1, enclosed: true });
        let unit = brute_force_piece_dim(&g, &[Polynomial::one()], GroupElement::ZERO, GroupElement::X, 6);
        assert_eq!(unit.dim, 0);
        let g3 = GradingGroup::new(Family::Loop, 3, 3).unwrap();
        // 2x = 2y in L, so y^2 survives in degree 2x
        let bf = brute_force_piece_dim(&g3, &[Polynomial::mono(1, 0), Polynomial::mono(0, 3)], GroupElement::ZERO, 2 * GroupElement::X, 10);
        assert_eq!(bf.dim, 1);
        let bf = brute_force_piece_dim(&g3, &[Polynomial::mono(1, 0), Polynomial::mono(0, 3)], GroupElement::ZERO, GroupElement::X, 10);
        assert_eq!(bf.dim, 0);
    }

    #[test]
    fn loop_x_pieces_vanish_in_middle_degrees() {
        for (p, qq) in [(3, 3), (4, 5), (6, 2)] {
            let g = GradingGroup::new(Family::Loop, p, qq).unwrap();
            let qr = QuotientRing::new(&g, vec![Polynomial::mono(1, 0), Polynomial::mono(0, qq)], GroupElement::ZERO);
            for a in 1..=(p as i64 - 2) {
                let piece = qr.graded_piece_basis(PieceDegree::Class(a * GroupElement::X), None).unwrap();
                assert!(piece.is_empty(), "loop({p},{qq}) a={a}");
            }
        }
    }

    #[test]
    fn unbounded_piece_is_an_error() {
        let g = GradingGroup::new(Family::Loop, 3, 3).unwrap();
        let (_, f) = potential(Family::Loop, 3, 3);
        let qr = QuotientRing::new(&g, vec![f.unwrap()], GroupElement::ZERO);
        assert_eq!(qr.graded_piece_basis(PieceDegree::Class(GroupElement::ZERO), None), Err(Error::UnboundedPiece));
        assert!(qr.graded_piece_basis(PieceDegree::Class(GroupElement::ZERO), Some(12)).is_ok());
    }

    #[test]
    fn potentials_are_homogeneous_of_degree_c() {
        for spec in FamilySpec::range(&Family::ALL, 2, 6) {
            let g = crate::grading::make_grading_group(spec).unwrap();
            let (w, f) = potential(spec.family, spec.p, spec.q);
            assert!(g.equal(w.homogeneous_degree(&g).unwrap(), GroupElement::C));
            if let Some(f) = f {
                assert!(f.homogeneous_degree(&g).is_some());
            }
        }
    }

    #[test]
    fn display_round() {
        let p = Polynomial::from_terms(&[(1, 2, 1), (-3, 0, 4), (2, 0, 0)]);
        assert_eq!(p.to_string(), "-3*y^4 + x^2*y + 2");
        assert_eq!(Polynomial::term(q(-1), 1, 0).to_string(), "-x");
    }

    #[test]
    fn divisibility_lemmas_exhaustive() {
        for p in 2..=6u32 {
            for qq in 2..=6u32 {
                let max = 3 * p * qq;
                let g = GradingGroup::new(Family::Loop, p, qq).unwrap();
                assert_eq!(check_grading_ideal(&g, max), vec![], "loop({p},{qq})");
                assert_eq!(check_grading_zero(&g, max), vec![], "loop({p},{qq})");
                let g = GradingGroup::new(Family::Chain, p, qq).unwrap();
                assert_eq!(check_chain_grading(&g, max), vec![], "chain({p},{qq})");
            }
        }
    }
}
