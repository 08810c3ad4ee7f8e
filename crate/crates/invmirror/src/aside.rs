//! The A side: critical data of the resonant Morsification of the
//! transpose, the vanishing path schedule, intersections, grading lifts and
//! the directed algebra of vanishing cycles.
//!
//! Angles are exact rationals measured in turns (multiples of 2π).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{DirectedAlgebra, ObjectInfo};
use crate::family::{Family, FamilySpec};
use crate::linalg::Q;
use crate::polyring::{to_f64, transpose_potential};
use crate::Error;

fn frac(a: i64, b: i64) -> Q {
    Q::new(a as i128, b as i128)
}

/// Fractional part in [0, 1).
pub fn mod_one(x: Q) -> Q {
    x - x.floor()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CriticalKind {
    Origin,
    AxisX(u32),
    AxisY(u32),
    Interior(u32, u32),
}

/// A critical point of w~ - eps x y. Phases are in turns; the moduli depend
/// on eps and are evaluated on demand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalDatum {
    pub kind: CriticalKind,
    pub x_phase: Q,
    pub y_phase: Q,
    /// Argument of the (negative real multiple of x y) critical value, in
    /// turns mod 1; None when the value is 0.
    pub value_arg: Option<Q>,
}

impl CriticalDatum {
    /// Moduli (|x|, |y|) for the given eps.
    pub fn moduli(&self, spec: FamilySpec, eps: f64) -> (f64, f64) {
        let (p, q) = (spec.p as f64, spec.q as f64);
        match (spec.family, self.kind) {
            (_, CriticalKind::Origin) => (0.0, 0.0),
            (Family::Loop, CriticalKind::AxisX(_)) => (eps.powf(1.0 / (p - 1.0)), 0.0),
            (_, CriticalKind::AxisY(_)) => (0.0, eps.powf(1.0 / (q - 1.0))),
            (Family::Loop, CriticalKind::Interior(..)) => {
                ((eps * (q - 1.0) / (p * q - 1.0)).powf(1.0 / (p - 1.0)), (eps * (p - 1.0) / (p * q - 1.0)).powf(1.0 / (q - 1.0)))
            }
            (Family::Chain, CriticalKind::Interior(..)) => {
                let y = (eps / q).powf(1.0 / (q - 1.0));
                ((eps * (q - 1.0) * y / (p * q)).powf(1.0 / (p - 1.0)), y)
            }
            (Family::Bp, CriticalKind::Interior(..)) => {
                // (p-1) a - b = ln(eps/p),  -a + (q-1) b = ln(eps/q)
                let (r1, r2) = ((eps / p).ln(), (eps / q).ln());
                let det = (p - 1.0) * (q - 1.0) - 1.0;
                let a = ((q - 1.0) * r1 + r2) / det;
                let b = (r1 + (p - 1.0) * r2) / det;
                (a.exp(), b.exp())
            }
            _ => unreachable!("no such critical point"),
        }
    }

    pub fn position(&self, spec: FamilySpec, eps: f64) -> (Complex64, Complex64) {
        let (rx, ry) = self.moduli(spec, eps);
        let tau = std::f64::consts::TAU;
        (Complex64::from_polar(rx, tau * to_f64(self.x_phase)), Complex64::from_polar(ry, tau * to_f64(self.y_phase)))
    }
}

/// Index set of the interior critical points.
pub fn interior_indices(spec: FamilySpec) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for l in 0..spec.p - 1 {
        for m in 0..spec.q - 1 {
            if spec.family == Family::Bp && (l, m) == (spec.p - 2, spec.q - 2) {
                continue;
            }
            v.push((l, m));
        }
    }
    v
}

/// Phases (in turns) of the interior critical point (l, m).
pub fn interior_phases(spec: FamilySpec, l: u32, m: u32) -> (Q, Q) {
    let (p, q, l, m) = (spec.p as i64, spec.q as i64, l as i64, m as i64);
    match spec.family {
        Family::Loop => (frac(l, p - 1), frac(m, q - 1)),
        Family::Chain => (frac(l, p - 1) + frac(m, (p - 1) * (q - 1)), frac(m, q - 1)),
        Family::Bp => {
            let n = p * q - p - q;
            (frac((q - 1) * l + m, n), frac(l + (p - 1) * m, n))
        }
    }
}

/// theta_{l,m} in turns, in [0, 2).
pub fn theta(spec: FamilySpec, l: u32, m: u32) -> Q {
    let (x, y) = interior_phases(spec, l, m);
    x + y
}

pub fn enumerate_critical_data(spec: FamilySpec) -> Vec<CriticalDatum> {
    let mut out = vec![CriticalDatum { kind: CriticalKind::Origin, x_phase: Q::zero(), y_phase: Q::zero(), value_arg: None }];
    let (p, q) = (spec.p as i64, spec.q as i64);
    if spec.family == Family::Loop {
        for l in 0..spec.p - 1 {
            out.push(CriticalDatum { kind: CriticalKind::AxisX(l), x_phase: frac(l as i64, p - 1), y_phase: Q::zero(), value_arg: None });
        }
    }
    if spec.family != Family::Bp {
        for m in 0..spec.q - 1 {
            out.push(CriticalDatum { kind: CriticalKind::AxisY(m), x_phase: Q::zero(), y_phase: frac(m as i64, q - 1), value_arg: None });
        }
    }
    for (l, m) in interior_indices(spec) {
        let (x, y) = interior_phases(spec, l, m);
        out.push(CriticalDatum { kind: CriticalKind::Interior(l, m), x_phase: x, y_phase: y, value_arg: Some(mod_one(frac(1, 2) + x + y)) });
    }
    out
}

/// Objects of the A side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ACycle {
    V0(u32, u32),
    Vyf(u32),
    Vxf(u32),
    Vxy,
}

impl fmt::Display for ACycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ACycle::V0(l, m) => write!(f, "V0({l},{m})"),
            ACycle::Vyf(l) => write!(f, "Vyf({l})"),
            ACycle::Vxf(m) => write!(f, "Vxf({m})"),
            ACycle::Vxy => f.write_str("Vxy"),
        }
    }
}

impl FromStr for ACycle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidLabel(s.to_string());
        let s = s.trim();
        if s == "Vxy" {
            return Ok(ACycle::Vxy);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<u32> = args.split(',').map(|a| a.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match (head, nums.as_slice()) {
            ("V0", [l, m]) => Ok(ACycle::V0(*l, *m)),
            ("Vyf", [l]) => Ok(ACycle::Vyf(*l)),
            ("Vxf", [m]) => Ok(ACycle::Vxf(*m)),
            _ => Err(bad()),
        }
    }
}

impl ACycle {
    pub fn class(&self) -> &'static str {
        match self {
            ACycle::V0(..) => "V0",
            ACycle::Vyf(_) => "Vyf",
            ACycle::Vxf(_) => "Vxf",
            ACycle::Vxy => "Vxy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSchedule {
    pub theta: BTreeMap<(u32, u32), Q>,
    /// Interior labels by decreasing theta, ties by (l, m).
    pub order: Vec<(u32, u32)>,
    /// Pairs with theta_{l,m} > theta_{L,M} + 1 turn.
    pub fingers: Vec<((u32, u32), (u32, u32))>,
}

pub fn path_schedule(spec: FamilySpec) -> Result<PathSchedule, Error> {
    let idx = interior_indices(spec);
    let theta: BTreeMap<(u32, u32), Q> = idx.iter().map(|&(l, m)| ((l, m), self::theta(spec, l, m))).collect();
    if let Some(t) = theta.values().find(|t| **t < Q::zero() || **t >= Q::from(2)) {
        return Err(Error::Check(format!("theta {t} outside [0, 2) turns")));
    }
    let mut order = idx.clone();
    order.sort_by(|a, b| theta[b].cmp(&theta[a]).then(a.cmp(b)));
    let mut fingers = Vec::new();
    for &a in &order {
        for &b in &order {
            if theta[&a] > theta[&b] + Q::one() {
                fingers.push((a, b));
            }
        }
    }
    for &((l, m), (ll, mm)) in &fingers {
        let ok = match spec.family {
            Family::Loop => l > ll && m > mm,
            Family::Chain => l >= ll && m > mm,
            Family::Bp => true,
        };
        if !ok {
            return Err(Error::Check(format!("finger ({l},{m}) around ({ll},{mm}) violates the index condition")));
        }
    }
    Ok(PathSchedule { theta, order, fingers })
}

/// e^{-2s} / (e^{2s} + e^{-2s}).
pub fn profile_weight(s: f64) -> f64 {
    1.0 / (1.0 + (4.0 * s).exp())
}

/// Argument of the x coordinate (radians) of the point with parameter s on
/// V0(l, m) after transport from angle theta_{l,m} back to t (radians).
pub fn phi_profile(spec: FamilySpec, l: u32, m: u32, s: f64, t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let (x, _) = interior_phases(spec, l, m);
    tau * to_f64(x) + profile_weight(s) * (t - tau * to_f64(theta(spec, l, m)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub pair: ((u32, u32), (u32, u32)),
    /// Limits of the relative profile at t = 1 turn, as s -> -inf and +inf.
    pub endpoints: (Q, Q),
    /// Sign of the s-derivative of the relative profile.
    pub increasing: bool,
    pub pass: bool,
}

/// The relative profile of a finger pair after a full turn runs
/// monotonically between 1 - dy and dx; when both lie in (0, 1) it never
/// meets an integer, so the two cycles stay disjoint along the finger.
pub fn disjointness_certificate(spec: FamilySpec, a: (u32, u32), b: (u32, u32)) -> Certificate {
    let (xa, ya) = interior_phases(spec, a.0, a.1);
    let (xb, yb) = interior_phases(spec, b.0, b.1);
    let (dx, dy) = (xa - xb, ya - yb);
    let dtheta = dx + dy;
    let lo = Q::one() - dy;
    let inside = |v: Q| v > Q::zero() && v < Q::one();
    // d/ds of dx + w(s) (1 - dtheta) has the sign of (dtheta - 1) since w' < 0
    let increasing = dtheta > Q::one();
    Certificate { pair: (a, b), endpoints: (lo, dx), increasing, pass: inside(lo) && inside(dx) && increasing }
}

/// Objects in directed order.
pub fn object_order(spec: FamilySpec) -> Result<Vec<ACycle>, Error> {
    let sched = path_schedule(spec)?;
    let interior = sched.order.iter().map(|&(l, m)| ACycle::V0(l, m));
    let mut out = Vec::new();
    match spec.family {
        Family::Bp => {
            out.push(ACycle::Vxy);
            out.extend(interior);
        }
        Family::Loop => {
            out.extend(interior);
            out.extend((0..spec.p - 1).rev().map(ACycle::Vyf));
            out.extend((0..spec.q - 1).rev().map(ACycle::Vxf));
            out.push(ACycle::Vxy);
        }
        Family::Chain => {
            out.extend(interior);
            out.extend((0..spec.q - 1).rev().map(ACycle::Vxf));
            out.push(ACycle::Vxy);
        }
    }
    Ok(out)
}

/// Number of integers strictly between the limits -dy and dx of the
/// relative arg profile at the base point; a coinciding limit means the two
/// cycles share an end and are isotoped to meet once.
pub fn interior_intersection(spec: FamilySpec, a: (u32, u32), b: (u32, u32)) -> u32 {
    if a == b {
        return 0;
    }
    let (xa, ya) = interior_phases(spec, a.0, a.1);
    let (xb, yb) = interior_phases(spec, b.0, b.1);
    let (dx, dy) = (xa - xb, ya - yb);
    if dx.is_zero() || dy.is_zero() {
        return 1;
    }
    let (lo, hi) = if -dy < dx { (-dy, dx) } else { (dx, -dy) };
    let first = lo.floor().to_integer() + 1;
    let last = hi.ceil().to_integer() - 1;
    (last - first + 1).max(0) as u32
}

/// Symmetric geometric intersection counts between the objects of
/// `object_order`.
pub fn intersection_table(spec: FamilySpec) -> Result<(Vec<ACycle>, Vec<Vec<u32>>), Error> {
    let objs = object_order(spec)?;
    let n = objs.len();
    let mut t = vec![vec![0u32; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            t[a][b] = match (objs[a], objs[b]) {
                (ACycle::V0(l, m), ACycle::V0(ll, mm)) => interior_intersection(spec, (l, m), (ll, mm)),
                (ACycle::V0(..), ACycle::Vxy) | (ACycle::Vxy, ACycle::V0(..)) => 1,
                (ACycle::V0(l, _), ACycle::Vyf(ll)) | (ACycle::Vyf(ll), ACycle::V0(l, _)) => u32::from(l == ll),
                (ACycle::V0(_, m), ACycle::Vxf(mm)) | (ACycle::Vxf(mm), ACycle::V0(_, m)) => u32::from(m == mm),
                _ => 0,
            };
        }
    }
    Ok((objs, t))
}

/// Grading lifts: interior cycles get values in (0, 1/2) decreasing along
/// the order; waists get -1/2, except the BP waist which gets +1/2.
pub fn grading_lifts(spec: FamilySpec) -> Result<Vec<(ACycle, Q)>, Error> {
    let objs = object_order(spec)?;
    let n0 = objs.iter().filter(|o| matches!(o, ACycle::V0(..))).count() as i64;
    let mut k = 0;
    Ok(objs
        .into_iter()
        .map(|o| {
            let a = match o {
                ACycle::V0(..) => {
                    k += 1;
                    frac(n0 + 1 - k, 2 * (n0 + 1))
                }
                ACycle::Vxy if spec.family == Family::Bp => frac(1, 2),
                _ => frac(-1, 2),
            };
            (o, a)
        })
        .collect())
}

/// floor(alpha_1 - alpha_0) + 1.
pub fn generator_degree(alpha0: Q, alpha1: Q) -> i64 {
    (alpha1 - alpha0).floor().to_integer() as i64 + 1
}

/// Degrees of all generators a -> b (a before b, intersecting).
pub fn grading_degrees(spec: FamilySpec) -> Result<Vec<(ACycle, ACycle, i64)>, Error> {
    let lifts = grading_lifts(spec)?;
    let (_, table) = intersection_table(spec)?;
    let mut out = Vec::new();
    for a in 0..lifts.len() {
        for b in a + 1..lifts.len() {
            if table[a][b] > 0 {
                out.push((lifts[a].0, lifts[b].0, generator_degree(lifts[a].1, lifts[b].1)));
            }
        }
    }
    Ok(out)
}

/// Grid position of an A-side object under the mirror correspondence.
pub fn grid_position(spec: FamilySpec, o: ACycle) -> Option<(u32, u32)> {
    match o {
        ACycle::V0(l, m) => Some((spec.p - 2 - l, spec.q - 2 - m)),
        ACycle::Vxy if spec.family == Family::Bp => Some((0, 0)),
        _ => None,
    }
}

/// Directed algebra of vanishing cycles. Hom spaces come from the
/// intersection table, placed in the degree given by the lifts; each
/// generator gets a seeded random sign and a composable triple (one
/// triangle) composes to the product of the three signs.
pub fn assemble_directed_algebra(spec: FamilySpec, window: (i32, i32), seed: u64) -> Result<DirectedAlgebra, Error> {
    if window.0 > 0 || window.1 < 0 {
        return Err(Error::Domain("degree window must contain 0".into()));
    }
    let (objs, table) = intersection_table(spec)?;
    let lifts = grading_lifts(spec)?;
    let n = objs.len();
    let width = (window.1 - window.0 + 1) as usize;
    let mut dims = vec![vec![vec![0usize; width]; n]; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sign = BTreeMap::new();
    for a in 0..n {
        dims[a][a][(-window.0) as usize] = 1;
        for b in a + 1..n {
            if table[a][b] == 0 {
                continue;
            }
            if table[a][b] > 1 {
                return Err(Error::Check(format!("{} and {} meet {} times", objs[a], objs[b], table[a][b])));
            }
            let d = generator_degree(lifts[a].1, lifts[b].1) as i32;
            if d < window.0 || d > window.1 {
                return Err(Error::Check(format!("generator {} -> {} has degree {d} outside the window", objs[a], objs[b])));
            }
            dims[a][b][(d - window.0) as usize] = 1;
            sign.insert((a, b), if rng.random::<bool>() { Q::one() } else { -Q::one() });
        }
    }
    let mut lambda = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let (Some(x), Some(y), Some(z)) = (sign.get(&(a, b)), sign.get(&(b, c)), sign.get(&(a, c))) {
                    lambda.insert((a, b, c), *x * *y * *z);
                }
            }
        }
    }
    let objects = objs.iter().map(|&o| ObjectInfo { label: o.to_string(), class: o.class().to_string(), grid: grid_position(spec, o) }).collect();
    Ok(DirectedAlgebra { objects, window, dims, lambda })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub genus: u32,
    pub punctures: u32,
}

pub fn surface_invariants(spec: FamilySpec) -> Result<SurfaceInvariants, Error> {
    let (p, q) = (spec.p as i64, spec.q as i64);
    let (punctures, twice_genus) = match spec.family {
        Family::Loop => {
            let g = (p - 1).gcd(&(q - 1));
            (g + 2, p * q - g - 1)
        }
        Family::Chain => {
            let g = (p - 1).gcd(&q);
            (g + 1, p * q - p + 1 - g)
        }
        Family::Bp => {
            let g = p.gcd(&q);
            (g, (p - 1) * (q - 1) - g + 1)
        }
    };
    if twice_genus % 2 != 0 || twice_genus < 0 {
        return Err(Error::Check(format!("{spec}: 2g = {twice_genus} is not a non-negative even number")));
    }
    let inv = SurfaceInvariants { genus: (twice_genus / 2) as u32, punctures: punctures as u32 };
    if spec.milnor() as i64 != twice_genus + punctures - 1 {
        return Err(Error::Check(format!("{spec}: mu != 2g + punctures - 1")));
    }
    Ok(inv)
}

/// Outcome of the Newton enumeration of critical points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorsificationReport {
    pub spec: FamilySpec,
    pub eps: f64,
    pub seeds: usize,
    pub non_converged: usize,
    pub found: usize,
    pub expected: usize,
    pub min_abs_hessian: f64,
    /// Largest deviation (radians) of an interior critical-value argument
    /// from the prediction.
    pub max_arg_error: f64,
    /// Largest distance from a found point to its predicted position.
    pub max_position_error: f64,
    pub inconclusive: bool,
    pub pass: bool,
}

pub(crate) struct Potential {
    terms: Vec<(f64, i32, i32)>,
}

impl Potential {
    pub(crate) fn new(spec: FamilySpec, eps: f64) -> Self {
        let mut terms: Vec<(f64, i32, i32)> = transpose_potential(spec.family, spec.p, spec.q).terms().map(|(m, c)| (to_f64(c), m.u as i32, m.v as i32)).collect();
        terms.push((-eps, 1, 1));
        Potential { terms }
    }

    pub(crate) fn eval(&self, x: Complex64, y: Complex64, dx: i32, dy: i32) -> Complex64 {
        let mut acc = Complex64::zero();
        for &(c, u, v) in &self.terms {
            if u < dx || v < dy {
                continue;
            }
            let fall = |n: i32, k: i32| (0..k).map(|i| (n - i) as f64).product::<f64>();
            acc += c * fall(u, dx) * fall(v, dy) * x.powi(u - dx) * y.powi(v - dy);
        }
        acc
    }

    pub(crate) fn grad(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.eval(x, y, 1, 0), self.eval(x, y, 0, 1))
    }

    pub(crate) fn hess(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64, Complex64) {
        (self.eval(x, y, 2, 0), self.eval(x, y, 1, 1), self.eval(x, y, 0, 2))
    }
}

fn newton(w: &Potential, mut x: Complex64, mut y: Complex64) -> Option<(Complex64, Complex64)> {
    let norm = |g: (Complex64, Complex64)| (g.0.norm_sqr() + g.1.norm_sqr()).sqrt();
    for _ in 0..300 {
        let g = w.grad(x, y);
        let r = norm(g);
        if r < 1e-15 {
            return Some((x, y));
        }
        let (a, b, d) = w.hess(x, y);
        let det = a * d - b * b;
        if det.norm() < 1e-300 {
            return None;
        }
        let sx = (d * g.0 - b * g.1) / det;
        let sy = (a * g.1 - b * g.0) / det;
        let mut t = 1.0;
        loop {
            let (nx, ny) = (x - sx * t, y - sy * t);
            if norm(w.grad(nx, ny)) < r || t < 1e-6 {
                x = nx;
                y = ny;
                break;
            }
            t *= 0.5;
        }
        if !(x.is_finite() && y.is_finite()) || x.norm() > 1e6 || y.norm() > 1e6 {
            return None;
        }
        if (sx.norm() + sy.norm()) * t < 1e-16 * (1.0 + x.norm() + y.norm()) {
            return (norm(w.grad(x, y)) < 1e-12).then_some((x, y));
        }
    }
    let g = w.grad(x, y);
    (norm(g) < 1e-12).then_some((x, y))
}

/// Independent numeric oracle for `enumerate_critical_data`: damped Newton
/// from a seeded polar grid.
pub fn numeric_morsification_check(spec: FamilySpec, eps: f64, seed: u64) -> Result<MorsificationReport, Error> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("eps = {eps} outside (0, 0.5]")));
    }
    let w = Potential::new(spec, eps);
    let predicted = enumerate_critical_data(spec);
    let scale = predicted.iter().map(|c| {
        let (a, b) = c.moduli(spec, eps);
        a.max(b)
    });
    let rmax = 1.5 * scale.fold(0.0f64, f64::max).max(eps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nr, na) = (4, 7);
    let tau = std::f64::consts::TAU;
    let mut seeds = Vec::new();
    for ix in 0..nr {
        for jx in 0..na {
            for iy in 0..nr {
                for jy in 0..na {
                    let rx = rmax * (ix as f64 + rng.random::<f64>()) / nr as f64;
                    let ry = rmax * (iy as f64 + rng.random::<f64>()) / nr as f64;
                    let ax = tau * (jx as f64 + rng.random::<f64>()) / na as f64;
                    let ay = tau * (jy as f64 + rng.random::<f64>()) / na as f64;
                    seeds.push((Complex64::from_polar(rx, ax), Complex64::from_polar(ry, ay)));
                }
            }
        }
    }
    let mut found: Vec<(Complex64, Complex64)> = Vec::new();
    let mut non_converged = 0;
    for &(x0, y0) in &seeds {
        match newton(&w, x0, y0) {
            Some((x, y)) => {
                if !found.iter().any(|(a, b)| ((a - x).norm_sqr() + (b - y).norm_sqr()).sqrt() < 1e-6) {
                    found.push((x, y));
                }
            }
            None => non_converged += 1,
        }
    }
    found.sort_by(|a, b| (a.0.re, a.0.im, a.1.re, a.1.im).partial_cmp(&(b.0.re, b.0.im, b.1.re, b.1.im)).unwrap());

    let mut min_hess = f64::INFINITY;
    let mut max_arg_error = 0.0f64;
    let mut max_pos_error = 0.0f64;
    let mut matched = vec![false; predicted.len()];
    for &(x, y) in &found {
        let (a, b, d) = w.hess(x, y);
        min_hess = min_hess.min((a * d - b * b).norm());
        let (k, dist) = predicted
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let (px, py) = c.position(spec, eps);
                (k, ((px - x).norm_sqr() + (py - y).norm_sqr()).sqrt())
            })
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("at least the origin is predicted");
        max_pos_error = max_pos_error.max(dist);
        matched[k] = true;
        let value = w.eval(x, y, 0, 0);
        if let Some(arg) = predicted[k].value_arg {
            let diff = (value.arg() - tau * to_f64(arg)).rem_euclid(tau);
            max_arg_error = max_arg_error.max(diff.min(tau - diff));
        } else if value.norm() > 1e-12 {
            max_arg_error = f64::INFINITY;
        }
    }
    let inconclusive = non_converged * 100 > seeds.len();
    let pass = found.len() == spec.milnor() && matched.iter().all(|&m| m) && min_hess > 1e-8 && max_arg_error <= 1e-8 && max_pos_error <= 1e-6;
    Ok(MorsificationReport {
        spec,
        eps,
        seeds: seeds.len(),
        non_converged,
        found: found.len(),
        expected: spec.milnor(),
        min_abs_hessian: min_hess,
        max_arg_error,
        max_position_error: max_pos_error,
        inconclusive,
        pass: pass && !inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, p: u32, q: u32) -> FamilySpec {
        FamilySpec::new(f, p, q).unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(spec(Family::Loop, 4, 6), 1, 2), frac(11, 15));
        assert_eq!(theta(spec(Family::Chain, 3, 4), 0, 0), Q::zero());
        let bp = spec(Family::Bp, 3, 4);
        assert_eq!(interior_indices(bp), vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]);
        for (l, m) in interior_indices(bp) {
            assert_eq!(theta(bp, l, m), frac(4 * l as i64 + 3 * m as i64, 5));
        }
    }

    #[test]
    fn counts_are_milnor() {
        for s in FamilySpec::range(&Family::ALL, 2, 8) {
            assert_eq!(enumerate_critical_data(s).len(), s.milnor(), "{s}");
            assert_eq!(object_order(s).unwrap().len(), s.milnor(), "{s}");
        }
    }

    #[test]
    fn fingers_loop_4_6() {
        let sch = path_schedule(spec(Family::Loop, 4, 6)).unwrap();
        let mut f: Vec<(u32, u32)> = sch.fingers.iter().filter(|(a, _)| *a == (2, 4)).map(|(_, b)| *b).collect();
        f.sort();
        assert_eq!(f, vec![(0, 0), (0, 1), (0, 2), (1, 0)]);
    }

    #[test]
    fn fingers_and_certificates_exhaustive() {
        for s in FamilySpec::range(&[Family::Loop, Family::Chain], 2, 8) {
            let sch = path_schedule(s).unwrap();
            for &(a, b) in &sch.fingers {
                assert!(disjointness_certificate(s, a, b).pass, "{s} {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn phi_example() {
        let v = phi_profile(spec(Family::Loop, 4, 3), 1, 1, 0.0, 0.0);
        assert!((v + std::f64::consts::PI / 6.0).abs() < 1e-14);
        assert_eq!(phi_profile(spec(Family::Loop, 4, 3), 0, 0, 1.3, 0.0), 0.0);
    }

    #[test]
    fn intersections_examples() {
        let s = spec(Family::Loop, 3, 3);
        assert_eq!(interior_intersection(s, (1, 1), (0, 0)), 1);
        assert_eq!(interior_intersection(s, (1, 0), (0, 1)), 0);
        assert_eq!(interior_intersection(s, (1, 0), (1, 1)), 1);
    }

    #[test]
    fn intersections_follow_grid_rule() {
        for s in FamilySpec::range(&Family::ALL, 2, 8) {
            let idx = interior_indices(s);
            for &a in &idx {
                for &b in &idx {
                    let want = a != b && ((a.0 >= b.0 && a.1 >= b.1) || (a.0 <= b.0 && a.1 <= b.1));
                    assert_eq!(interior_intersection(s, a, b), u32::from(want), "{s} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn all_degrees_zero() {
        assert_eq!(generator_degree(frac(2, 5), frac(1, 10)), 0);
        assert_eq!(generator_degree(frac(3, 10), frac(-1, 2)), 0);
        assert_eq!(generator_degree(frac(1, 2), frac(1, 5)), 0);
        for s in FamilySpec::range(&Family::ALL, 2, 8) {
            for (a, b, d) in grading_degrees(s).unwrap() {
                assert_eq!(d, 0, "{s} {a} -> {b}");
            }
        }
    }

    #[test]
    fn surface_examples() {
        assert_eq!(surface_invariants(spec(Family::Loop, 4, 6)).unwrap(), SurfaceInvariants { genus: 11, punctures: 3 });
        assert_eq!(surface_invariants(spec(Family::Chain, 3, 4)).unwrap(), SurfaceInvariants { genus: 4, punctures: 3 });
        assert_eq!(surface_invariants(spec(Family::Bp, 3, 3)).unwrap(), SurfaceInvariants { genus: 1, punctures: 3 });
    }

    #[test]
    fn newton_small_cases() {
        for (f, p, q) in [(Family::Loop, 2, 2), (Family::Bp, 3, 3), (Family::Chain, 3, 2)] {
            let r = numeric_morsification_check(spec(f, p, q), 0.1, 7).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn rectified_a_side_is_independent_of_seed() {
        let s = spec(Family::Loop, 3, 4);
        let a = assemble_directed_algebra(s, (-2, 2), 1).unwrap().rectify().unwrap().rectified;
        let b = assemble_directed_algebra(s, (-2, 2), 99).unwrap().rectify().unwrap().rectified;
        assert!(a.same_table(&b));
    }

    #[test]
    fn cycle_label_round_trip() {
        for c in [ACycle::V0(1, 2), ACycle::Vyf(0), ACycle::Vxf(3), ACycle::Vxy] {
            assert_eq!(c.to_string().parse::<ACycle>().unwrap(), c);
        }
    }
}
