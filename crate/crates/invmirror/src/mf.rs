//! L-graded matrix factorisations, their dg-hom complexes, and Buchweitz
//! complexes into cyclic modules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::family::{Family, FamilySpec};
use crate::grading::{make_grading_group, GradingGroup, GroupElement};
use crate::linalg::{extend_basis, Matrix, Q};
use crate::polyring::{potential, Monomial, Polynomial, QuotientRing};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Polynomial::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn scalar(n: usize, p: &Polynomial) -> Self {
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut r = PolyMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Polynomial::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                r.set(i, j, acc);
            }
        }
        r
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: Q) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Labels of the basic objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasicLabel {
    Kx(u32),
    Ky(u32),
    Kf,
    K0(u32, u32),
}

impl fmt::Display for BasicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicLabel::Kx(i) => write!(f, "Kx({i})"),
            BasicLabel::Ky(j) => write!(f, "Ky({j})"),
            BasicLabel::Kf => f.write_str("Kf"),
            BasicLabel::K0(i, j) => write!(f, "K0({i},{j})"),
        }
    }
}

impl FromStr for BasicLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidLabel(s.to_string());
        let s = s.trim();
        if s == "Kf" {
            return Ok(BasicLabel::Kf);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<u32> = args.split(',').map(|a| a.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match (head, nums.as_slice()) {
            ("Kx", [i]) => Ok(BasicLabel::Kx(*i)),
            ("Ky", [j]) => Ok(BasicLabel::Ky(*j)),
            ("K0", [i, j]) => Ok(BasicLabel::K0(*i, *j)),
            _ => Err(bad()),
        }
    }
}

/// The module R(shift)/I; the ideal is stored in S and w is added when
/// forming the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicModule {
    pub shift: GroupElement,
    pub ideal: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct MatrixFactorisation {
    pub group: GradingGroup,
    pub w: Polynomial,
    /// Shifts a of the summands S(a) of K^0.
    pub even: Vec<GroupElement>,
    /// Shifts of the summands of K^1.
    pub odd: Vec<GroupElement>,
    /// K^0 -> K^1.
    pub d0: PolyMatrix,
    /// K^1 -> K^2 = K^0(c).
    pub d1: PolyMatrix,
    /// Cohomological shift n of K[n]; [2] is identified with (c).
    pub offset: i32,
    pub label: String,
}

impl MatrixFactorisation {
    /// Build from a displayed piece K^{-2} -(a)-> K^{-1} -(b)-> K^0.
    fn from_display(
        group: &GradingGroup,
        w: &Polynomial,
        km2: Vec<GroupElement>,
        km1: Vec<GroupElement>,
        a: PolyMatrix,
        b: PolyMatrix,
        label: String,
    ) -> Self {
        MatrixFactorisation {
            group: group.clone(),
            w: w.clone(),
            even: km2.into_iter().map(|s| s + GroupElement::C).collect(),
            odd: km1.into_iter().map(|s| s + GroupElement::C).collect(),
            d0: a,
            d1: b,
            offset: 0,
            label,
        }
    }

    /// Grading twist K(l).
    pub fn twist(&self, l: GroupElement) -> Self {
        let mut k = self.clone();
        k.even.iter_mut().for_each(|s| *s = *s + l);
        k.odd.iter_mut().for_each(|s| *s = *s + l);
        k
    }

    pub fn with_offset(&self, offset: i32) -> Self {
        MatrixFactorisation { offset, ..self.clone() }
    }

    /// Summand shifts of K^n = K^{n mod 2}(floor(n/2) c).
    pub fn shifts(&self, n: i32) -> Vec<GroupElement> {
        let base = if n.rem_euclid(2) == 0 { &self.even } else { &self.odd };
        let t = n.div_euclid(2) as i64;
        base.iter().map(|s| *s + t * GroupElement::C).collect()
    }

    /// The differential K^n -> K^{n+1}.
    pub fn differential(&self, n: i32) -> &PolyMatrix {
        if n.rem_euclid(2) == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }
}

/// A violation found by `validate_mf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MfViolation {
    Composition { which: &'static str, row: usize, col: usize, found: String },
    Homogeneity { which: &'static str, row: usize, col: usize, expected: GroupElement, found: Option<GroupElement> },
    Shape(String),
}

/// Check d1 d0 = w, d0 d1 = w and homogeneity of every entry; reports the
/// first violation.
pub fn validate_mf(k: &MatrixFactorisation) -> Result<(), MfViolation> {
    let (ne, no) = (k.even.len(), k.odd.len());
    if (k.d0.rows, k.d0.cols) != (no, ne) || (k.d1.rows, k.d1.cols) != (ne, no) {
        return Err(MfViolation::Shape(format!("d0 {}x{}, d1 {}x{}, ranks {ne}/{no}", k.d0.rows, k.d0.cols, k.d1.rows, k.d1.cols)));
    }
    let g = &k.group;
    let checks: [(&'static str, &PolyMatrix, &[GroupElement], Vec<GroupElement>); 2] = [
        ("d0", &k.d0, &k.even, k.odd.clone()),
        ("d1", &k.d1, &k.odd, k.even.iter().map(|s| *s + GroupElement::C).collect()),
    ];
    for (which, m, src, tgt) in checks {
        for r in 0..m.rows {
            for c in 0..m.cols {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let expected = tgt[r] - src[c];
                let found = e.homogeneous_degree(g);
                if found.is_none_or(|d| !g.equal(d, expected)) {
                    return Err(MfViolation::Homogeneity { which, row: r, col: c, expected, found });
                }
            }
        }
    }
    for (which, prod, n) in [("d1*d0", k.d1.mul(&k.d0), ne), ("d0*d1", k.d0.mul(&k.d1), no)] {
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { k.w.clone() } else { Polynomial::zero() };
                if *prod.get(r, c) != want {
                    return Err(MfViolation::Composition { which, row: r, col: c, found: prod.get(r, c).to_string() });
                }
            }
        }
    }
    Ok(())
}

fn pm(rows: Vec<Vec<Polynomial>>) -> PolyMatrix {
    PolyMatrix::from_rows(rows)
}

fn mono(c: i128, u: u32, v: u32) -> Polynomial {
    Polynomial::from_terms(&[(c, u, v)])
}

fn ge(x: i64, y: i64, c: i64) -> GroupElement {
    GroupElement::new(x, y, c)
}

/// One of the closed-form basic factorisations, together with the cyclic
/// module it stabilises. Index ranges: 1 <= i <= p-1, 1 <= j <= q-1.
pub fn build_basic_object(spec: FamilySpec, label: BasicLabel) -> Result<(MatrixFactorisation, CyclicModule), Error> {
    let g = make_grading_group(spec)?;
    let (p, q) = (spec.p, spec.q);
    let (w, f) = potential(spec.family, p, q);
    let (pi, qi) = (p as i64, q as i64);
    let bad = || Error::InvalidLabel(format!("{label} is not a basic object of {spec}"));
    let in_i = |i: u32| (1..p).contains(&i);
    let in_j = |j: u32| (1..q).contains(&j);
    let name = label.to_string();
    let x = || mono(1, 1, 0);
    let y = || mono(1, 0, 1);
    let out = match (spec.family, label) {
        (Family::Loop, BasicLabel::Kx(i)) if in_i(i) => {
            let f = f.expect("loop has f");
            let k = MatrixFactorisation::from_display(&g, &w, vec![-GroupElement::C], vec![-GroupElement::X], pm(vec![vec![y().mul(&f)]]), pm(vec![vec![x()]]), name);
            let t = (i as i64 + 1 - pi) * GroupElement::X;
            (k.twist(t), CyclicModule { shift: t, ideal: vec![x()] })
        }
        (Family::Loop, BasicLabel::Ky(j)) if in_j(j) => {
            let f = f.expect("loop has f");
            let k = MatrixFactorisation::from_display(&g, &w, vec![-GroupElement::C], vec![-GroupElement::Y], pm(vec![vec![x().mul(&f)]]), pm(vec![vec![y()]]), name);
            let t = (j as i64 + 1 - qi) * GroupElement::Y;
            (k.twist(t), CyclicModule { shift: t, ideal: vec![y()] })
        }
        (Family::Loop, BasicLabel::Kf) => {
            let f = f.expect("loop has f");
            let k = MatrixFactorisation::from_display(&g, &w, vec![-GroupElement::C], vec![ge(1, 1, -1)], pm(vec![vec![mono(1, 1, 1)]]), pm(vec![vec![f.clone()]]), name);
            (k, CyclicModule { shift: GroupElement::ZERO, ideal: vec![f] })
        }
        (Family::Loop, BasicLabel::K0(i, j)) if in_i(i) && in_j(j) => {
            let (ii, jj) = (i as i64, j as i64);
            let a = pm(vec![vec![mono(1, 0, j), mono(1, p - i, 1)], vec![mono(-1, i, 0), mono(1, 1, q - j)]]);
            let b = pm(vec![vec![mono(1, 1, q - j), mono(-1, p - i, 1)], vec![mono(1, i, 0), mono(1, 0, j)]]);
            let k = MatrixFactorisation::from_display(
                &g,
                &w,
                vec![ge(1, 1, 0), ge(ii + 1, jj + 1, -1)],
                vec![ge(1, jj + 1, 0), ge(ii + 1, 1, 0)],
                a,
                b,
                name,
            );
            (k, CyclicModule { shift: ge(ii + 1, jj + 1, 0), ideal: vec![mono(1, i, 0), mono(1, 0, j)] })
        }
        (Family::Chain, BasicLabel::Ky(j)) if in_j(j) => {
            let f = f.expect("chain has f");
            let k = MatrixFactorisation::from_display(&g, &w, vec![-GroupElement::C], vec![-GroupElement::Y], pm(vec![vec![f]]), pm(vec![vec![y()]]), name);
            let t = (j as i64 + 1 - qi) * GroupElement::Y;
            (k.twist(t), CyclicModule { shift: t, ideal: vec![y()] })
        }
        (Family::Chain, BasicLabel::Kf) => {
            let f = f.expect("chain has f");
            let k = MatrixFactorisation::from_display(&g, &w, vec![-GroupElement::C], vec![ge(0, 1, -1)], pm(vec![vec![y()]]), pm(vec![vec![f.clone()]]), name);
            (k, CyclicModule { shift: GroupElement::ZERO, ideal: vec![f] })
        }
        (Family::Chain, BasicLabel::K0(i, j)) if in_i(i) && in_j(j) => {
            let (ii, jj) = (i as i64, j as i64);
            let a = pm(vec![vec![mono(1, 0, j), mono(1, p - i, 1)], vec![mono(-1, i, 0), mono(1, 0, q - j)]]);
            let b = pm(vec![vec![mono(1, 0, q - j), mono(-1, p - i, 1)], vec![mono(1, i, 0), mono(1, 0, j)]]);
            let k = MatrixFactorisation::from_display(
                &g,
                &w,
                vec![ge(0, 1, 0), ge(ii, jj + 1, -1)],
                vec![ge(0, jj + 1, 0), ge(ii, 1, 0)],
                a,
                b,
                name,
            );
            (k, CyclicModule { shift: ge(ii, jj + 1, 0), ideal: vec![mono(1, i, 0), mono(1, 0, j)] })
        }
        (Family::Bp, BasicLabel::K0(i, j)) if in_i(i) && in_j(j) => {
            let (ii, jj) = (i as i64, j as i64);
            let a = pm(vec![vec![mono(1, 0, j), mono(1, p - i, 0)], vec![mono(-1, i, 0), mono(1, 0, q - j)]]);
            let b = pm(vec![vec![mono(1, 0, q - j), mono(-1, p - i, 0)], vec![mono(1, i, 0), mono(1, 0, j)]]);
            let k = MatrixFactorisation::from_display(&g, &w, vec![GroupElement::ZERO, ge(ii, jj, -1)], vec![ge(0, jj, 0), ge(ii, 0, 0)], a, b, name);
            (k, CyclicModule { shift: ge(ii, jj, 0), ideal: vec![mono(1, i, 0), mono(1, 0, j)] })
        }
        _ => return Err(bad()),
    };
    Ok(out)
}

/// A degree-n map K -> H of 2-periodic graded modules: f0 : K^0 -> H^n,
/// f1 : K^1 -> H^{n+1} (and f^{e+2} = f^e(c)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFMorphism {
    pub degree: i32,
    pub f0: PolyMatrix,
    pub f1: PolyMatrix,
}

impl MFMorphism {
    pub fn identity(k: &MatrixFactorisation) -> Self {
        MFMorphism { degree: 0, f0: PolyMatrix::scalar(k.even.len(), &Polynomial::one()), f1: PolyMatrix::scalar(k.odd.len(), &Polynomial::one()) }
    }

    /// Component starting at K^e.
    pub fn component(&self, e: i32) -> &PolyMatrix {
        if e.rem_euclid(2) == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }

    /// g . self, with composition componentwise.
    pub fn then(&self, g: &MFMorphism) -> MFMorphism {
        let n = self.degree;
        MFMorphism { degree: n + g.degree, f0: g.component(n).mul(&self.f0), f1: g.component(n + 1).mul(&self.f1) }
    }

    pub fn scale(&self, c: Q) -> MFMorphism {
        MFMorphism { degree: self.degree, f0: self.f0.scale(c), f1: self.f1.scale(c) }
    }
}

/// The dg differential  df = h f - (-1)^n f k.
pub fn dg_differential(k: &MatrixFactorisation, h: &MatrixFactorisation, f: &MFMorphism) -> MFMorphism {
    let n = f.degree;
    let sign = if n.rem_euclid(2) == 0 { -Q::one() } else { Q::one() };
    let g0 = h.differential(n).mul(&f.f0).add(&f.f1.mul(&k.d0).scale(sign));
    let g1 = h.differential(n + 1).mul(&f.f1).add(&f.f0.mul(&k.d1).scale(sign));
    MFMorphism { degree: n + 1, f0: g0, f1: g1 }
}

/// Coordinates of the degree-n piece of the dg-hom complex: one monomial
/// list per matrix entry.
#[derive(Clone, Debug)]
pub struct HomLayout {
    pub degree: i32,
    rows0: usize,
    cols0: usize,
    rows1: usize,
    cols1: usize,
    /// (component, row, col, monomials, offset)
    entries: Vec<(usize, usize, usize, Vec<Monomial>, usize)>,
    pub dim: usize,
}

impl HomLayout {
    pub fn new(k: &MatrixFactorisation, h: &MatrixFactorisation, n: i32) -> Self {
        let g = &k.group;
        let mut entries = Vec::new();
        let mut off = 0;
        let comps = [(k.shifts(0), h.shifts(n)), (k.shifts(1), h.shifts(n + 1))];
        for (comp, (src, tgt)) in comps.iter().enumerate() {
            for (r, t) in tgt.iter().enumerate() {
                for (c, s) in src.iter().enumerate() {
                    let monos: Vec<Monomial> = g.monomials_of_degree(*t - *s).into_iter().map(|(u, v)| Monomial::new(u, v)).collect();
                    let len = monos.len();
                    entries.push((comp, r, c, monos, off));
                    off += len;
                }
            }
        }
        HomLayout { degree: n, rows0: comps[0].1.len(), cols0: comps[0].0.len(), rows1: comps[1].1.len(), cols1: comps[1].0.len(), entries, dim: off }
    }

    pub fn to_morphism(&self, v: &[Q]) -> MFMorphism {
        let mut f0 = PolyMatrix::zeros(self.rows0, self.cols0);
        let mut f1 = PolyMatrix::zeros(self.rows1, self.cols1);
        for (comp, r, c, monos, off) in &self.entries {
            let mut p = Polynomial::zero();
            for (k, m) in monos.iter().enumerate() {
                p.add_term(*m, v[off + k]);
            }
            if *comp == 0 {
                f0.set(*r, *c, p);
            } else {
                f1.set(*r, *c, p);
            }
        }
        MFMorphism { degree: self.degree, f0, f1 }
    }

    /// Coordinates of a morphism; None if some term has the wrong degree.
    pub fn to_vector(&self, f: &MFMorphism) -> Option<Vec<Q>> {
        let mut v = vec![Q::zero(); self.dim];
        let mut seen = 0;
        for (comp, r, c, monos, off) in &self.entries {
            let p = if *comp == 0 { f.f0.get(*r, *c) } else { f.f1.get(*r, *c) };
            for (m, coeff) in p.terms() {
                let k = monos.iter().position(|x| *x == m)?;
                v[off + k] = coeff;
            }
            seen += p.num_terms();
        }
        let total: usize = (0..f.f0.rows).flat_map(|r| (0..f.f0.cols).map(move |c| (r, c))).map(|(r, c)| f.f0.get(r, c).num_terms()).sum::<usize>()
            + (0..f.f1.rows).flat_map(|r| (0..f.f1.cols).map(move |c| (r, c))).map(|(r, c)| f.f1.get(r, c).num_terms()).sum::<usize>();
        (seen == total).then_some(v)
    }
}

/// Matrix of the differential hom^n -> hom^{n+1} in layout coordinates.
fn differential_matrix(k: &MatrixFactorisation, h: &MatrixFactorisation, src: &HomLayout, tgt: &HomLayout) -> Matrix {
    let mut m = Matrix::zeros(tgt.dim, src.dim);
    for j in 0..src.dim {
        let mut e = vec![Q::zero(); src.dim];
        e[j] = Q::one();
        let d = dg_differential(k, h, &src.to_morphism(&e));
        let col = tgt.to_vector(&d).expect("differential preserves degrees");
        for (i, x) in col.into_iter().enumerate() {
            if !x.is_zero() {
                m.set(i, j, x);
            }
        }
    }
    m
}

/// Cohomology of the dg-hom complex in one degree, with cocycle
/// representatives.
#[derive(Clone, Debug)]
pub struct HomCohomology {
    pub layout: HomLayout,
    pub reps: Vec<Vec<Q>>,
    boundaries: Vec<Vec<Q>>,
    d_out: Matrix,
}

impl HomCohomology {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, k: usize) -> MFMorphism {
        self.layout.to_morphism(&self.reps[k])
    }

    pub fn is_cocycle(&self, f: &MFMorphism) -> Result<bool, Error> {
        let v = self.layout.to_vector(f).ok_or_else(|| Error::NotChainMap("wrong degree".into()))?;
        Ok(self.d_out.mul_vec(&v).iter().all(Zero::is_zero))
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn identify(&self, f: &MFMorphism) -> Result<Vec<Q>, Error> {
        let v = self.layout.to_vector(f).ok_or_else(|| Error::Identification("morphism has terms of the wrong degree".into()))?;
        if !self.d_out.mul_vec(&v).iter().all(Zero::is_zero) {
            return Err(Error::NotChainMap(format!("degree {} element is not closed", f.degree)));
        }
        let mut cols = self.reps.clone();
        cols.extend(self.boundaries.iter().cloned());
        if cols.is_empty() {
            return if v.iter().all(Zero::is_zero) { Ok(vec![]) } else { Err(Error::Identification("nonzero cocycle in a zero complex".into())) };
        }
        let a = Matrix::from_cols(self.layout.dim, &cols);
        let x = a.solve(&v).ok_or_else(|| Error::Identification("cocycle outside span of representatives and boundaries".into()))?;
        Ok(x[..self.reps.len()].to_vec())
    }
}

/// H^n of Hom(K, H) for the underlying (unshifted) factorisations.
pub fn dg_cohomology(k: &MatrixFactorisation, h: &MatrixFactorisation, n: i32) -> HomCohomology {
    dg_cohomology_window(k, h, (n, n)).pop().expect("window is nonempty")
}

/// H^n of Hom(K, H) for every n in the window, sharing the complex.
pub fn dg_cohomology_window(k: &MatrixFactorisation, h: &MatrixFactorisation, window: (i32, i32)) -> Vec<HomCohomology> {
    let layouts: Vec<HomLayout> = (window.0 - 1..=window.1 + 1).map(|n| HomLayout::new(k, h, n)).collect();
    let diffs: Vec<Matrix> = layouts.windows(2).map(|w| differential_matrix(k, h, &w[0], &w[1])).collect();
    (1..layouts.len() - 1).map(|i| cohomology_at(layouts[i].clone(), &diffs[i - 1], diffs[i].clone())).collect()
}

fn cohomology_at(cur: HomLayout, d_in: &Matrix, d_out: Matrix) -> HomCohomology {
    let mut boundaries = Vec::new();
    if d_in.cols > 0 && d_in.rows > 0 {
        let mut t = Matrix::from_rows(&(0..d_in.cols).map(|j| d_in.col(j)).collect::<Vec<_>>());
        let piv = t.rref();
        for r in 0..piv.len() {
            boundaries.push((0..t.cols).map(|c| t.get(r, c)).collect());
        }
    }
    let cocycles = if cur.dim == 0 {
        vec![]
    } else if d_out.rows == 0 {
        (0..cur.dim)
            .map(|j| {
                let mut e = vec![Q::zero(); cur.dim];
                e[j] = Q::one();
                e
            })
            .collect()
    } else {
        d_out.kernel()
    };
    let chosen = extend_basis(cur.dim, &boundaries, &cocycles);
    let reps = chosen.into_iter().map(|k| cocycles[k].clone()).collect();
    HomCohomology { layout: cur, reps, boundaries, d_out }
}

/// Compose two cocycles and return the coordinates of the composite's class
/// in the representative basis of `target`.
pub fn compose_and_identify(
    k: &MatrixFactorisation,
    h: &MatrixFactorisation,
    f: &MFMorphism,
    g: &MFMorphism,
    target: &HomCohomology,
) -> Result<Vec<Q>, Error> {
    if !dg_differential(k, h, f).f0.is_zero() || !dg_differential(k, h, f).f1.is_zero() {
        return Err(Error::NotChainMap("first argument".into()));
    }
    let gf = f.then(g);
    if gf.degree != target.layout.degree {
        return Err(Error::Identification(format!("composite has degree {}, target basis degree {}", gf.degree, target.layout.degree)));
    }
    target.identify(&gf)
}

/// One degree of a Buchweitz complex computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuchweitzDegree {
    pub degree: i32,
    pub dim: usize,
    /// Representatives: one polynomial per summand of K^{-n}.
    pub basis: Vec<Vec<Polynomial>>,
}

struct BwTerm {
    pieces: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    dim: usize,
}

fn bw_term(k: &MatrixFactorisation, m: &QuotientRing, n: i32) -> BwTerm {
    let pieces: Vec<Vec<Monomial>> = k.shifts(-n).into_iter().map(|a| m.exact_piece(-a)).collect();
    let mut offsets = Vec::new();
    let mut dim = 0;
    for p in &pieces {
        offsets.push(dim);
        dim += p.len();
    }
    BwTerm { pieces, offsets, dim }
}

/// Matrix of C^n -> C^{n+1}, phi |-> phi . k^{-n-1}.
fn bw_differential(k: &MatrixFactorisation, m: &QuotientRing, n: i32, src: &BwTerm, tgt: &BwTerm) -> Matrix {
    let kd = k.differential(-n - 1);
    let mut out = Matrix::zeros(tgt.dim, src.dim);
    for (s, piece) in src.pieces.iter().enumerate() {
        for (idx, mono) in piece.iter().enumerate() {
            let col = src.offsets[s] + idx;
            for (s2, tpiece) in tgt.pieces.iter().enumerate() {
                let entry = kd.get(s, s2);
                if entry.is_zero() {
                    continue;
                }
                let img = m.normal_form(&entry.mul_term(*mono, Q::one()));
                for (mm, c) in img.terms() {
                    let row = tgt.offsets[s2] + tpiece.iter().position(|x| *x == mm).expect("normal form stays in degree");
                    out.set(row, col, out.get(row, col) + c);
                }
            }
        }
    }
    out
}

/// Cohomology of Hom_R(K (x) R, M) in each degree of `window`, with
/// monomial-vector representatives.
pub fn hom_cohomology(k: &MatrixFactorisation, module: &CyclicModule, window: (i32, i32)) -> BTreeMap<i32, BuchweitzDegree> {
    let mut gens = module.ideal.clone();
    gens.push(k.w.clone());
    let m = QuotientRing::new(&k.group, gens, module.shift);
    let mut out = BTreeMap::new();
    for n in window.0..=window.1 {
        let prev = bw_term(k, &m, n - 1);
        let cur = bw_term(k, &m, n);
        let next = bw_term(k, &m, n + 1);
        let d_in = bw_differential(k, &m, n - 1, &prev, &cur);
        let d_out = bw_differential(k, &m, n, &cur, &next);
        let boundaries: Vec<Vec<Q>> = (0..d_in.cols).map(|j| d_in.col(j)).filter(|c| c.iter().any(|x| !x.is_zero())).collect();
        let cocycles = if cur.dim == 0 { vec![] } else { d_out.kernel() };
        let chosen = extend_basis(cur.dim, &boundaries, &cocycles);
        let basis = chosen
            .into_iter()
            .map(|idx| {
                let v = &cocycles[idx];
                cur.pieces
                    .iter()
                    .enumerate()
                    .map(|(s, piece)| {
                        let mut p = Polynomial::zero();
                        for (t, mono) in piece.iter().enumerate() {
                            p.add_term(*mono, v[cur.offsets[s] + t]);
                        }
                        p
                    })
                    .collect()
            })
            .collect::<Vec<Vec<Polynomial>>>();
        out.insert(n, BuchweitzDegree { degree: n, dim: basis.len(), basis });
    }
    out
}

/// Whether a vector of polynomials (one per summand of K^{-n}) is a
/// nonzero class in the Buchweitz complex.
pub fn buchweitz_class_nonzero(k: &MatrixFactorisation, module: &CyclicModule, n: i32, v: &[Polynomial]) -> Result<bool, Error> {
    let mut gens = module.ideal.clone();
    gens.push(k.w.clone());
    let m = QuotientRing::new(&k.group, gens, module.shift);
    let prev = bw_term(k, &m, n - 1);
    let cur = bw_term(k, &m, n);
    let next = bw_term(k, &m, n + 1);
    if v.len() != cur.pieces.len() {
        return Err(Error::Domain("vector length does not match the number of summands".into()));
    }
    let mut x = vec![Q::zero(); cur.dim];
    for (s, p) in v.iter().enumerate() {
        let p = m.normal_form(p);
        for (mono, c) in p.terms() {
            let t = cur.pieces[s].iter().position(|z| *z == mono).ok_or_else(|| Error::Domain(format!("term {mono} has the wrong degree")))?;
            x[cur.offsets[s] + t] = c;
        }
    }
    let d_out = bw_differential(k, &m, n, &cur, &next);
    if !d_out.mul_vec(&x).iter().all(Zero::is_zero) {
        return Err(Error::NotChainMap("vector is not a cocycle".into()));
    }
    let d_in = bw_differential(k, &m, n - 1, &prev, &cur);
    if d_in.cols == 0 {
        return Ok(x.iter().any(|c| !c.is_zero()));
    }
    Ok(d_in.solve(&x).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, p: u32, q: u32) -> FamilySpec {
        FamilySpec::new(f, p, q).unwrap()
    }

    pub(crate) fn labels(s: FamilySpec) -> Vec<BasicLabel> {
        let mut v = Vec::new();
        for i in 1..s.p {
            for j in 1..s.q {
                v.push(BasicLabel::K0(i, j));
            }
        }
        if s.family == Family::Loop {
            v.extend((1..s.p).map(BasicLabel::Kx));
        }
        if s.family != Family::Bp {
            v.extend((1..s.q).map(BasicLabel::Ky));
            v.push(BasicLabel::Kf);
        }
        v
    }

    #[test]
    fn all_basic_objects_validate() {
        for s in FamilySpec::range(&Family::ALL, 2, 6) {
            for l in labels(s) {
                let (k, _) = build_basic_object(s, l).unwrap();
                assert_eq!(validate_mf(&k), Ok(()), "{s} {l}");
            }
        }
    }

    #[test]
    fn invalid_labels_rejected() {
        assert!(build_basic_object(spec(Family::Chain, 3, 3), BasicLabel::Kx(1)).is_err());
        assert!(build_basic_object(spec(Family::Bp, 3, 3), BasicLabel::Kf).is_err());
        assert!(build_basic_object(spec(Family::Loop, 3, 3), BasicLabel::K0(3, 1)).is_err());
        assert!(build_basic_object(spec(Family::Loop, 3, 3), BasicLabel::Kx(0)).is_err());
    }

    #[test]
    fn mutations_fail_validation() {
        let s = spec(Family::Loop, 3, 4);
        let (mut k, _) = build_basic_object(s, BasicLabel::Kx(1)).unwrap();
        k.d1.set(0, 0, Polynomial::mono(2, 0));
        assert!(matches!(validate_mf(&k), Err(MfViolation::Homogeneity { .. }) | Err(MfViolation::Composition { .. })));
        let (mut k0, _) = build_basic_object(s, BasicLabel::K0(1, 1)).unwrap();
        k0.even[0] = k0.even[0] + GroupElement::X;
        assert!(matches!(validate_mf(&k0), Err(MfViolation::Homogeneity { .. })));
    }

    #[test]
    fn bp_k0_entries() {
        let (k, _) = build_basic_object(spec(Family::Bp, 2, 2), BasicLabel::K0(1, 1)).unwrap();
        assert_eq!(k.d0.to_string(), "[y, x; -x, y]");
        assert_eq!(k.d1.to_string(), "[y, -x; x, y]");
    }

    #[test]
    fn label_parse_round_trip() {
        for l in [BasicLabel::Kx(3), BasicLabel::Ky(1), BasicLabel::Kf, BasicLabel::K0(2, 5)] {
            assert_eq!(l.to_string().parse::<BasicLabel>().unwrap(), l);
        }
        assert!("K0(1)".parse::<BasicLabel>().is_err());
        assert!("Kz(1)".parse::<BasicLabel>().is_err());
    }

    #[test]
    fn kx_is_exceptional_loop_2_2() {
        let (k, m) = build_basic_object(spec(Family::Loop, 2, 2), BasicLabel::Kx(1)).unwrap();
        let bw = hom_cohomology(&k, &m, (-4, 4));
        for (n, d) in &bw {
            assert_eq!(d.dim, usize::from(*n == 0), "degree {n}");
        }
        for n in -4..=4 {
            assert_eq!(dg_cohomology(&k, &k, n).dim(), usize::from(n == 0));
        }
    }

    #[test]
    fn k0_to_kf_generator_in_degree_three() {
        for (p, q) in [(2, 2), (3, 4), (5, 3)] {
            let s = spec(Family::Loop, p, q);
            let (_, mf) = build_basic_object(s, BasicLabel::Kf).unwrap();
            for i in 1..p {
                for j in 1..q {
                    let (k, _) = build_basic_object(s, BasicLabel::K0(i, j)).unwrap();
                    let bw = hom_cohomology(&k, &mf, (-6, 6));
                    for (n, d) in &bw {
                        assert_eq!(d.dim, usize::from(*n == 3), "{s} K0({i},{j}) degree {n}");
                    }
                    let v = vec![Polynomial::mono(0, q - j - 1), Polynomial::term(-Q::one(), p - i - 1, 0)];
                    assert!(buchweitz_class_nonzero(&k, &mf, 3, &v).unwrap());
                }
            }
        }
    }

    #[test]
    fn kx_to_k0_vanishes() {
        let s = spec(Family::Loop, 4, 3);
        for i in 1..4 {
            let (kx, _) = build_basic_object(s, BasicLabel::Kx(i)).unwrap();
            for j in 1..3 {
                let (_, m) = build_basic_object(s, BasicLabel::K0(i, j)).unwrap();
                assert!(hom_cohomology(&kx, &m, (-6, 6)).values().all(|d| d.dim == 0));
            }
        }
    }

    #[test]
    fn grid_chain_map_is_a_cocycle_and_nonzero() {
        let s = spec(Family::Loop, 4, 4);
        let (k, _) = build_basic_object(s, BasicLabel::K0(1, 2)).unwrap();
        let (h, _) = build_basic_object(s, BasicLabel::K0(3, 3)).unwrap();
        let (di, dj) = (2, 1);
        let f = MFMorphism {
            degree: 0,
            f0: PolyMatrix::from_rows(vec![vec![Polynomial::one(), Polynomial::zero()], vec![Polynomial::zero(), Polynomial::mono(di, dj)]]),
            f1: PolyMatrix::from_rows(vec![vec![Polynomial::mono(0, dj), Polynomial::zero()], vec![Polynomial::zero(), Polynomial::mono(di, 0)]]),
        };
        let d = dg_differential(&k, &h, &f);
        assert!(d.f0.is_zero() && d.f1.is_zero());
        let hc = dg_cohomology(&k, &h, 0);
        assert_eq!(hc.dim(), 1);
        let coords = hc.identify(&f).unwrap();
        assert!(!coords[0].is_zero());
    }

    #[test]
    fn composition_with_identity() {
        let s = spec(Family::Chain, 3, 3);
        let (k, _) = build_basic_object(s, BasicLabel::K0(1, 1)).unwrap();
        let (h, _) = build_basic_object(s, BasicLabel::K0(2, 2)).unwrap();
        let hc = dg_cohomology(&k, &h, 0);
        assert_eq!(hc.dim(), 1);
        let f = hc.rep(0);
        let id = MFMorphism::identity(&h);
        assert_eq!(compose_and_identify(&k, &h, &f, &id, &hc).unwrap(), vec![Q::one()]);
    }

    #[test]
    fn routes_agree_on_dimensions() {
        for s in [spec(Family::Loop, 3, 3), spec(Family::Chain, 3, 4), spec(Family::Bp, 3, 4), spec(Family::Loop, 2, 4)] {
            let objs: Vec<_> = labels(s).into_iter().map(|l| build_basic_object(s, l).unwrap()).collect();
            for (k, _) in &objs {
                for (h, m) in &objs {
                    let bw = hom_cohomology(k, m, (-4, 4));
                    for n in -4..=4 {
                        assert_eq!(dg_cohomology(k, h, n).dim(), bw[&n].dim, "{s} {} -> {} degree {n}", k.label, h.label);
                    }
                }
            }
        }
    }
}
