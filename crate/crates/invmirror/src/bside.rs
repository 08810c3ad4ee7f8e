//! The B side: basic objects of the graded singularity category, their hom
//! table and composition coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{DirectedAlgebra, ObjectInfo};
use crate::family::{Family, FamilySpec};
use crate::linalg::Q;
use crate::mf::{build_basic_object, compose_and_identify, dg_cohomology_window, hom_cohomology, BasicLabel, CyclicModule, HomCohomology, MatrixFactorisation};
use crate::parallel::par_map;
use crate::Error;

pub const DEFAULT_WINDOW: (i32, i32) = (-6, 6);

#[derive(Clone, Debug)]
pub struct BObject {
    pub label: BasicLabel,
    /// Cohomological shift; 3 for everything except the K0.
    pub offset: i32,
    pub mf: MatrixFactorisation,
    pub module: CyclicModule,
}

impl BObject {
    pub fn name(&self) -> String {
        object_name(self.label, self.offset)
    }
}

pub fn object_name(label: BasicLabel, offset: i32) -> String {
    if offset == 0 {
        label.to_string()
    } else {
        format!("{label}[{offset}]")
    }
}

pub fn class_of(label: BasicLabel) -> &'static str {
    match label {
        BasicLabel::K0(..) => "K0",
        BasicLabel::Kx(_) => "Kx",
        BasicLabel::Ky(_) => "Ky",
        BasicLabel::Kf => "Kf",
    }
}

/// Labels in exceptional order: the K0 grid lexicographically, then Kx,
/// Ky and Kf.
pub fn basic_labels(spec: FamilySpec) -> Vec<BasicLabel> {
    let mut v = Vec::new();
    for i in 1..spec.p {
        for j in 1..spec.q {
            v.push(BasicLabel::K0(i, j));
        }
    }
    if spec.family == Family::Loop {
        v.extend((1..spec.p).map(BasicLabel::Kx));
    }
    if spec.family != Family::Bp {
        v.extend((1..spec.q).map(BasicLabel::Ky));
        v.push(BasicLabel::Kf);
    }
    v
}

pub fn basic_objects(spec: FamilySpec) -> Result<Vec<BObject>, Error> {
    basic_labels(spec)
        .into_iter()
        .map(|label| {
            let (mf, module) = build_basic_object(spec, label)?;
            let offset = if matches!(label, BasicLabel::K0(..)) { 0 } else { 3 };
            Ok(BObject { label, offset, mf: mf.with_offset(offset), module })
        })
        .collect()
}

/// Hom^n(K[s], H[t]) = Hom^{n - s + t}(K, H).
fn underlying_degree(a: &BObject, b: &BObject, n: i32) -> i32 {
    n - a.offset + b.offset
}

fn pair_cohomology(a: &BObject, b: &BObject, window: (i32, i32)) -> Vec<HomCohomology> {
    let shift = b.offset - a.offset;
    dg_cohomology_window(&a.mf, &b.mf, (window.0 + shift, window.1 + shift))
}

/// Hom dimensions dims[a][b][n - window.0].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTable {
    pub labels: Vec<String>,
    pub window: (i32, i32),
    pub dims: Vec<Vec<Vec<usize>>>,
}

pub fn hom_table(spec: FamilySpec, window: (i32, i32)) -> Result<HomTable, Error> {
    let objs = basic_objects(spec)?;
    Ok(table_from(&objs, window, |a, b| pair_cohomology(a, b, window).iter().map(HomCohomology::dim).collect()))
}

/// The same table computed through the Buchweitz complexes into the
/// stabilised modules.
pub fn hom_table_buchweitz(spec: FamilySpec, window: (i32, i32)) -> Result<HomTable, Error> {
    let objs = basic_objects(spec)?;
    Ok(table_from(&objs, window, |a, b| {
        let shift = b.offset - a.offset;
        let bw = hom_cohomology(&a.mf, &b.module, (window.0 + shift, window.1 + shift));
        (window.0..=window.1).map(|n| bw[&underlying_degree(a, b, n)].dim).collect()
    }))
}

fn table_from(objs: &[BObject], window: (i32, i32), f: impl Fn(&BObject, &BObject) -> Vec<usize> + Sync) -> HomTable {
    let n = objs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let flat = par_map(&pairs, |&(a, b)| f(&objs[a], &objs[b]));
    let mut dims = vec![vec![Vec::new(); n]; n];
    for ((a, b), d) in pairs.into_iter().zip(flat) {
        dims[a][b] = d;
    }
    HomTable { labels: objs.iter().map(BObject::name).collect(), window, dims }
}

/// The closed-form degree-zero table; all other degrees vanish.
pub fn expected_hom0(spec: FamilySpec, a: BasicLabel, b: BasicLabel) -> usize {
    use BasicLabel::*;
    let v = match (a, b) {
        _ if a == b => true,
        (K0(i, j), K0(ii, jj)) => ii >= i && jj >= j,
        (K0(i, _), Kx(ii)) => spec.family == Family::Loop && i == ii,
        (K0(_, j), Ky(jj)) => spec.family != Family::Bp && j == jj,
        (K0(..), Kf) => spec.family != Family::Bp,
        _ => false,
    };
    usize::from(v)
}

pub fn expected_hom_table(spec: FamilySpec, window: (i32, i32)) -> HomTable {
    let labels = basic_labels(spec);
    let dims = labels
        .iter()
        .map(|&a| labels.iter().map(|&b| (window.0..=window.1).map(|n| if n == 0 { expected_hom0(spec, a, b) } else { 0 }).collect()).collect())
        .collect();
    let names = labels.iter().map(|&l| object_name(l, if matches!(l, BasicLabel::K0(..)) { 0 } else { 3 })).collect();
    HomTable { labels: names, window, dims }
}

/// The B-side directed algebra: hom table plus degree-zero composition
/// coefficients in the cocycle bases chosen by the dg-hom computation.
pub fn assemble_b(spec: FamilySpec, window: (i32, i32)) -> Result<DirectedAlgebra, Error> {
    if window.0 > 0 || window.1 < 0 {
        return Err(Error::Domain("degree window must contain 0".into()));
    }
    let objs = basic_objects(spec)?;
    let n = objs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let coh = par_map(&pairs, |&(a, b)| pair_cohomology(&objs[a], &objs[b], window));
    let mut table: BTreeMap<(usize, usize), Vec<HomCohomology>> = pairs.iter().copied().zip(coh).collect();
    let zero = (-window.0) as usize;
    let dims: Vec<Vec<Vec<usize>>> = (0..n).map(|a| (0..n).map(|b| table[&(a, b)].iter().map(HomCohomology::dim).collect()).collect()).collect();
    let hom0 = |a: usize, b: usize| dims[a][b][zero];

    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if hom0(a, b) == 1 && hom0(b, c) == 1 && hom0(a, c) == 1 {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let h0: BTreeMap<(usize, usize), HomCohomology> = table.iter_mut().map(|(k, v)| (*k, v.swap_remove(zero))).collect();
    let lambdas = par_map(&triples, |&(a, b, c)| -> Result<Q, Error> {
        let (f, g) = (&h0[&(a, b)], &h0[&(b, c)]);
        let coords = compose_and_identify(&objs[a].mf, &objs[b].mf, &f.rep(0), &g.rep(0), &h0[&(a, c)])?;
        Ok(coords[0])
    });
    let mut lambda = BTreeMap::new();
    for (t, l) in triples.into_iter().zip(lambdas) {
        let l = l?;
        if !l.is_zero() {
            lambda.insert(t, l);
        }
    }
    let objects = objs
        .iter()
        .map(|o| ObjectInfo {
            label: o.name(),
            class: class_of(o.label).to_string(),
            grid: match o.label {
                BasicLabel::K0(i, j) => Some((i - 1, j - 1)),
                _ => None,
            },
        })
        .collect();
    Ok(DirectedAlgebra { objects, window, dims, lambda })
}
