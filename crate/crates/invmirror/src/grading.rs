//! The maximal grading group L = Z<x, y, c> / (family relations) and its
//! quotient L / Zc.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::family::{Family, FamilySpec};
use crate::linalg::{hermite_normal_form, smith_normal_form, Smith, Q};
use crate::Error;

/// Integer coefficient vector over the generators (x, y, c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupElement(pub [i64; 3]);

impl GroupElement {
    pub const ZERO: GroupElement = GroupElement([0, 0, 0]);
    pub const X: GroupElement = GroupElement([1, 0, 0]);
    pub const Y: GroupElement = GroupElement([0, 1, 0]);
    pub const C: GroupElement = GroupElement([0, 0, 1]);

    pub fn new(x: i64, y: i64, c: i64) -> Self {
        GroupElement([x, y, c])
    }

    /// Degree of the monomial x^u y^v.
    pub fn monomial(u: u32, v: u32) -> Self {
        GroupElement([u as i64, v as i64, 0])
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, o: Self) -> Self {
        GroupElement([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, o: Self) -> Self {
        GroupElement([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> Self {
        GroupElement([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<GroupElement> for i64 {
    type Output = GroupElement;
    fn mul(self, e: GroupElement) -> GroupElement {
        GroupElement([self * e.0[0], self * e.0[1], self * e.0[2]])
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (k, name) in self.0.iter().zip(["x", "y", "c"]) {
            match *k {
                0 => {}
                1 => parts.push(name.to_string()),
                -1 => parts.push(format!("-{name}")),
                k => parts.push(format!("{k}{name}")),
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+").replace("+-", "-"))
        }
    }
}

/// Abelian group structure Z^free ⊕ ⊕ Z/t_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStructure {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<i64>,
}

impl GroupStructure {
    fn from_smith(s: &Smith, generators: usize) -> Self {
        let nonzero: Vec<i64> = s.diag.iter().copied().filter(|&d| d != 0).collect();
        GroupStructure {
            free_rank: generators - nonzero.len(),
            torsion: nonzero.into_iter().filter(|&d| d > 1).collect(),
        }
    }

    /// Order when finite.
    pub fn order(&self) -> Option<i64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

#[derive(Clone, Debug)]
pub struct GradingGroup {
    pub spec: FamilySpec,
    /// Rows are relations `a x + b y + k c = 0`.
    pub relations: Vec<[i64; 3]>,
    hnf: Vec<Vec<i64>>,
    pub smith: Smith,
    pub quotient_smith: Smith,
    pub structure: GroupStructure,
    pub quotient_structure: GroupStructure,
    /// Rational weights of x and y under the homomorphism L -> Q sending c to 1.
    pub weights: (Q, Q),
}

pub fn make_grading_group(spec: FamilySpec) -> Result<GradingGroup, Error> {
    let spec = FamilySpec::new(spec.family, spec.p, spec.q)?;
    let (p, q) = (spec.p as i64, spec.q as i64);
    let relations = match spec.family {
        Family::Loop => vec![[p, 1, -1], [1, q, -1]],
        Family::Chain => vec![[p, 1, -1], [0, q, -1]],
        Family::Bp => vec![[p, 0, -1], [0, q, -1]],
    };
    let rows: Vec<Vec<i64>> = relations.iter().map(|r| r.to_vec()).collect();
    let hnf = hermite_normal_form(&rows);
    let smith = smith_normal_form(&rows);
    let mut qrows = rows.clone();
    qrows.push(vec![0, 0, 1]);
    let quotient_smith = smith_normal_form(&qrows);
    let structure = GroupStructure::from_smith(&smith, 3);
    let quotient_structure = GroupStructure::from_smith(&quotient_smith, 3);

    // a wx + b wy = -k for both relation rows
    let [a1, b1, k1] = relations[0];
    let [a2, b2, k2] = relations[1];
    let det = (a1 * b2 - a2 * b1) as i128;
    let wx = Q::new((-k1 * b2 + k2 * b1) as i128, det);
    let wy = Q::new((-a1 * k2 + a2 * k1) as i128, det);

    Ok(GradingGroup { spec, relations, hnf, smith, quotient_smith, structure, quotient_structure, weights: (wx, wy) })
}

impl GradingGroup {
    pub fn new(family: Family, p: u32, q: u32) -> Result<Self, Error> {
        make_grading_group(FamilySpec::new(family, p, q)?)
    }

    /// Canonical coset representative: coordinates at HNF pivots reduced
    /// into `[0, pivot)`.
    pub fn reduce(&self, e: GroupElement) -> GroupElement {
        let mut v = e.0;
        for row in &self.hnf {
            let c = row.iter().position(|&x| x != 0).expect("hnf rows are nonzero");
            let f = num_integer::Integer::div_floor(&v[c], &row[c]);
            if f != 0 {
                for k in 0..3 {
                    v[k] -= f * row[k];
                }
            }
        }
        GroupElement(v)
    }

    pub fn equal(&self, a: GroupElement, b: GroupElement) -> bool {
        self.reduce(a - b) == GroupElement::ZERO
    }

    pub fn is_zero(&self, a: GroupElement) -> bool {
        self.reduce(a) == GroupElement::ZERO
    }

    /// Image under the weight homomorphism L -> Q with c |-> 1.
    pub fn weight(&self, e: GroupElement) -> Q {
        self.weights.0 * Q::from(e.0[0] as i128) + self.weights.1 * Q::from(e.0[1] as i128) + Q::from(e.0[2] as i128)
    }

    /// The integer m with d = m c + l in L, if it exists.
    ///
    /// c has infinite order (its weight is 1), so m is unique.
    pub fn decompose_mod_c(&self, d: GroupElement, l: GroupElement) -> Option<i64> {
        let diff = d - l;
        let w = self.weight(diff);
        if !w.is_integer() {
            return None;
        }
        let m = *w.numer() as i64;
        self.is_zero(diff - m * GroupElement::C).then_some(m)
    }

    /// Order of L / Zc.
    pub fn quotient_order(&self) -> i64 {
        self.quotient_structure.order().expect("L/Zc is finite")
    }

    /// Whether c has infinite order in L.
    pub fn c_has_infinite_order(&self) -> bool {
        !self.weight(GroupElement::C).is_zero()
    }

    /// All monomials x^u y^v of exact degree `d`.
    pub fn monomials_of_degree(&self, d: GroupElement) -> Vec<(u32, u32)> {
        let target = self.weight(d);
        let (wx, wy) = self.weights;
        let mut out = Vec::new();
        if target < Q::zero() {
            return out;
        }
        let umax = (target / wx).floor().to_integer();
        for u in 0..=umax {
            let rest = target - wx * Q::from(u);
            let v = rest / wy;
            if !v.is_integer() {
                continue;
            }
            let v = v.to_integer();
            let (u, v) = (u as u32, v as u32);
            if self.equal(GroupElement::monomial(u, v), d) {
                out.push((u, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn quotient_orders() {
        assert_eq!(GradingGroup::new(Family::Loop, 2, 2).unwrap().quotient_order(), 3);
        assert_eq!(GradingGroup::new(Family::Chain, 3, 4).unwrap().quotient_order(), 12);
        let bp = GradingGroup::new(Family::Bp, 3, 3).unwrap();
        assert_eq!(bp.structure, GroupStructure { free_rank: 1, torsion: vec![3] });
    }

    #[test]
    fn rejects_small_exponents() {
        assert!(GradingGroup::new(Family::Loop, 1, 3).is_err());
        assert!(GradingGroup::new(Family::Bp, 2, 0).is_err());
    }

    #[test]
    fn weights_kill_relations() {
        for spec in FamilySpec::range(&Family::ALL, 2, 6) {
            let g = make_grading_group(spec).unwrap();
            for r in &g.relations {
                assert!(g.weight(GroupElement(*r)).is_zero());
            }
            assert!(g.weights.0 > q(0) && g.weights.1 > q(0));
        }
    }

    #[test]
    fn reduce_examples() {
        let g = GradingGroup::new(Family::Loop, 2, 2).unwrap();
        assert!(g.is_zero(GroupElement::C - 2 * GroupElement::X - GroupElement::Y));
        for (p, qq) in [(2, 2), (3, 5), (6, 4)] {
            let g = GradingGroup::new(Family::Loop, p, qq).unwrap();
            assert!(g.is_zero(GroupElement::new(p as i64 - 1, 1 - qq as i64, 0)));
        }
        let b = GradingGroup::new(Family::Bp, 3, 3).unwrap();
        assert!(b.is_zero(3 * GroupElement::X - GroupElement::C));
    }

    #[test]
    fn decompose_examples() {
        let g = GradingGroup::new(Family::Loop, 2, 2).unwrap();
        let l = GroupElement::new(1, 2, 0);
        assert_eq!(g.decompose_mod_c(l, l), Some(0));
        assert_eq!(g.decompose_mod_c(l + GroupElement::C, l), Some(1));
        // x = y in L when p = q = 2, since (p-1)x = (q-1)y
        assert_eq!(g.decompose_mod_c(GroupElement::X, GroupElement::Y), Some(0));
        assert_eq!(g.decompose_mod_c(GroupElement::X, 2 * GroupElement::Y), None);
        // brute-force oracle: x - 2y is not a multiple of c
        for m in -10..=10 {
            assert!(!g.is_zero(GroupElement::X - 2 * GroupElement::Y - m * GroupElement::C));
        }
    }

    #[test]
    fn monomials_of_degree_are_exact() {
        let g = GradingGroup::new(Family::Loop, 3, 4).unwrap();
        let d = GroupElement::new(2, 3, 1);
        for (u, v) in g.monomials_of_degree(d) {
            assert!(g.equal(GroupElement::monomial(u, v), d));
        }
        // brute force
        let mut brute = Vec::new();
        for u in 0..40 {
            for v in 0..40 {
                if g.equal(GroupElement::monomial(u, v), d) {
                    brute.push((u, v));
                }
            }
        }
        assert_eq!(g.monomials_of_degree(d), brute);
    }
}
