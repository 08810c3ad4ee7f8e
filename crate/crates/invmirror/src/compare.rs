//! The mirror check: both directed algebras under the object correspondence.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::DirectedAlgebra;
use crate::aside::{assemble_directed_algebra, object_order, ACycle};
use crate::bside::{assemble_b, basic_labels, object_name};
use crate::family::{Family, FamilySpec};
use crate::mf::BasicLabel;
use crate::Error;

/// Bijection between A-side and B-side object names, i + l = p - 1 and
/// j + m = q - 1 on the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub a_to_b: BTreeMap<String, String>,
}

pub fn mirror_of(spec: FamilySpec, a: ACycle) -> Result<String, Error> {
    let (p, q) = (spec.p, spec.q);
    let b = match (spec.family, a) {
        (_, ACycle::V0(l, m)) if l + 1 < p && m + 1 < q => object_name(BasicLabel::K0(p - 1 - l, q - 1 - m), 0),
        (Family::Loop, ACycle::Vyf(l)) if l + 1 < p => object_name(BasicLabel::Kx(p - 1 - l), 3),
        (Family::Loop | Family::Chain, ACycle::Vxf(m)) if m + 1 < q => object_name(BasicLabel::Ky(q - 1 - m), 3),
        (Family::Loop | Family::Chain, ACycle::Vxy) => object_name(BasicLabel::Kf, 3),
        (Family::Bp, ACycle::Vxy) => object_name(BasicLabel::K0(1, 1), 0),
        _ => return Err(Error::InvalidLabel(format!("{a} has no mirror in {spec}"))),
    };
    Ok(b)
}

pub fn correspondence(spec: FamilySpec) -> Result<Correspondence, Error> {
    let mut a_to_b = BTreeMap::new();
    for a in object_order(spec)? {
        a_to_b.insert(a.to_string(), mirror_of(spec, a)?);
    }
    let mut images: Vec<&String> = a_to_b.values().collect();
    images.sort();
    images.dedup();
    let b_names: Vec<String> = basic_labels(spec).into_iter().map(|l| object_name(l, if matches!(l, BasicLabel::K0(..)) { 0 } else { 3 })).collect();
    if images.len() != a_to_b.len() || images.len() != b_names.len() || !b_names.iter().all(|n| a_to_b.values().any(|v| v == n)) {
        return Err(Error::Check(format!("{spec}: correspondence is not a bijection")));
    }
    Ok(Correspondence { a_to_b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub what: String,
    pub a: String,
    pub b: String,
    pub degree: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorReport {
    pub spec: FamilySpec,
    pub pass: bool,
    pub objects: usize,
    pub mismatches: Vec<Mismatch>,
}

/// Compare hom dimensions in every degree of the window, the rectified
/// composition tables, and degree-zero concentration on both sides.
pub fn mirror_check(spec: FamilySpec, window: (i32, i32), seed: u64) -> Result<MirrorReport, Error> {
    let a = assemble_directed_algebra(spec, window, seed)?;
    let b = assemble_b(spec, window)?;
    compare_algebras(spec, &a, &b)
}

pub fn compare_algebras(spec: FamilySpec, a: &DirectedAlgebra, b: &DirectedAlgebra) -> Result<MirrorReport, Error> {
    let corr = correspondence(spec)?;
    let mut mm = Vec::new();
    let mut push = |what: &str, x: &str, y: &str, degree: Option<i32>| mm.push(Mismatch { what: what.into(), a: x.into(), b: y.into(), degree });
    if a.len() != b.len() {
        push("object count", &a.len().to_string(), &b.len().to_string(), None);
    }
    let sigma: Vec<Option<usize>> = a.objects.iter().map(|o| corr.a_to_b.get(&o.label).and_then(|n| b.index_of(n))).collect();
    for (i, s) in sigma.iter().enumerate() {
        if s.is_none() {
            push("unmatched object", &a.objects[i].label, "", None);
        }
    }
    let sig: Vec<usize> = sigma.iter().flatten().copied().collect();
    if sig.len() == a.len() && a.len() == b.len() {
        for x in 0..a.len() {
            for y in 0..a.len() {
                for n in a.window.0.min(b.window.0)..=a.window.1.max(b.window.1) {
                    if a.dim(x, y, n) != b.dim(sig[x], sig[y], n) {
                        push("hom dimension", &format!("{} -> {}", a.objects[x].label, a.objects[y].label), &format!("{} -> {}", b.objects[sig[x]].label, b.objects[sig[y]].label), Some(n));
                    }
                }
            }
        }
        match (a.rectify(), b.rectify()) {
            (Ok(ra), Ok(rb)) => {
                for (&(x, y, z), l) in &ra.rectified.lambda {
                    if rb.rectified.lambda(sig[x], sig[y], sig[z]) != *l {
                        push("composition", &format!("{} {} {}", a.objects[x].label, a.objects[y].label, a.objects[z].label), &b.objects[sig[z]].label, Some(0));
                    }
                }
                if ra.rectified.lambda.len() != rb.rectified.lambda.len() {
                    push("composition count", &ra.rectified.lambda.len().to_string(), &rb.rectified.lambda.len().to_string(), Some(0));
                }
            }
            (ea, eb) => {
                if let Err(e) = ea {
                    push("rectification", &e.to_string(), "", None);
                }
                if let Err(e) = eb {
                    push("rectification", "", &e.to_string(), None);
                }
            }
        }
    }
    for (side, alg) in [("A", a), ("B", b)] {
        if let Err(e) = alg.check_tilting() {
            push("not concentrated in degree 0", side, &e.to_string(), None);
        }
        if let Err(e) = alg.check_exceptional() {
            push("not exceptional", side, &e.to_string(), None);
        }
    }
    Ok(MirrorReport { spec, pass: mm.is_empty(), objects: a.len(), mismatches: mm })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorCounts {
    pub mu: usize,
    pub a_objects: usize,
    pub b_objects: usize,
    pub decomposition: String,
}

pub fn milnor_and_counts(spec: FamilySpec) -> Result<MilnorCounts, Error> {
    let parts = spec.milnor_parts();
    let sum: usize = parts.iter().sum();
    let mu = spec.milnor();
    if sum != mu {
        return Err(Error::Check(format!("{spec}: parts sum to {sum}, not {mu}")));
    }
    let decomposition = format!("{mu} = {}", parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("+"));
    Ok(MilnorCounts { mu, a_objects: object_order(spec)?.len(), b_objects: basic_labels(spec).len(), decomposition })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, p: u32, q: u32) -> FamilySpec {
        FamilySpec::new(f, p, q).unwrap()
    }

    #[test]
    fn milnor_examples() {
        assert_eq!(milnor_and_counts(spec(Family::Bp, 4, 5)).unwrap().mu, 12);
        assert_eq!(milnor_and_counts(spec(Family::Chain, 4, 5)).unwrap().decomposition, "17 = 12+4+1");
        assert_eq!(milnor_and_counts(spec(Family::Loop, 2, 2)).unwrap().decomposition, "4 = 1+1+1+1");
    }

    #[test]
    fn correspondence_examples() {
        let s = spec(Family::Bp, 2, 3);
        assert_eq!(mirror_of(s, ACycle::Vxy).unwrap(), "K0(1,1)");
        assert_eq!(mirror_of(s, ACycle::V0(0, 0)).unwrap(), "K0(1,2)");
        assert_eq!(mirror_of(spec(Family::Loop, 4, 6), ACycle::Vyf(0)).unwrap(), "Kx(3)[3]");
        assert!(mirror_of(spec(Family::Chain, 3, 3), ACycle::Vyf(0)).is_err());
        for s in FamilySpec::range(&Family::ALL, 2, 6) {
            correspondence(s).unwrap();
        }
    }

    #[test]
    fn small_mirror_checks() {
        for s in [spec(Family::Loop, 3, 3), spec(Family::Chain, 3, 2), spec(Family::Bp, 2, 3), spec(Family::Bp, 3, 4)] {
            let r = mirror_check(s, (-3, 3), 5).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn perturbed_table_is_caught() {
        let s = spec(Family::Loop, 2, 3);
        let a = assemble_directed_algebra(s, (-2, 2), 0).unwrap();
        let mut b = assemble_b(s, (-2, 2)).unwrap();
        b.dims[0][1][3] = 1;
        let r = compare_algebras(s, &a, &b).unwrap();
        assert!(!r.pass);
        assert!(r.mismatches.iter().any(|m| m.what == "hom dimension" && m.degree == Some(1)));
    }
}
