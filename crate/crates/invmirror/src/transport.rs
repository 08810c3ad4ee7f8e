//! Numerical symplectic parallel transport along arcs c(t) = -delta e^{it}
//! in the base of a fibration W : C^2 -> C.
//!
//! The horizontal lift solves  z' = c' conj(dW) / |dW|^2.

use num_complex::Complex64;
use serde::Serialize;

use crate::aside::{interior_indices, interior_phases, phi_profile, theta, Potential};
use crate::family::{Family, FamilySpec};
use crate::polyring::to_f64;
use crate::Error;

type Point = [Complex64; 2];

#[derive(Clone, Copy, Debug)]
pub enum Fibration {
    /// W = -eps x y, where the local closed form is exact.
    Local { eps: f64 },
    /// The Morsified transpose w~ - eps x y.
    Full { spec: FamilySpec, eps: f64 },
}

enum Field {
    Local(f64),
    Full(Potential),
}

impl Field {
    fn new(f: Fibration) -> Self {
        match f {
            Fibration::Local { eps } => Field::Local(eps),
            Fibration::Full { spec, eps } => Field::Full(Potential::new(spec, eps)),
        }
    }

    fn value(&self, z: &Point) -> Complex64 {
        match self {
            Field::Local(eps) => -*eps * z[0] * z[1],
            Field::Full(w) => w.eval(z[0], z[1], 0, 0),
        }
    }

    fn grad(&self, z: &Point) -> Point {
        match self {
            Field::Local(eps) => [-*eps * z[1], -*eps * z[0]],
            Field::Full(w) => {
                let (a, b) = w.grad(z[0], z[1]);
                [a, b]
            }
        }
    }
}

fn base(delta: f64, t: f64) -> Complex64 {
    -delta * Complex64::from_polar(1.0, t)
}

fn base_dot(delta: f64, t: f64) -> Complex64 {
    -delta * Complex64::i() * Complex64::from_polar(1.0, t)
}

const MIN_GRADIENT: f64 = 1e-8;

fn rhs(field: &Field, delta: f64, t: f64, z: &Point) -> Result<Point, Error> {
    let g = field.grad(z);
    let n2 = g[0].norm_sqr() + g[1].norm_sqr();
    if n2.sqrt() < MIN_GRADIENT {
        return Err(Error::Numerical(format!("|dW| = {:.3e} below {MIN_GRADIENT:e} near t = {t}", n2.sqrt())));
    }
    let cd = base_dot(delta, t);
    Ok([cd * g[0].conj() / n2, cd * g[1].conj() / n2])
}

fn axpy(z: &Point, h: f64, k: &Point) -> Point {
    [z[0] + k[0] * h, z[1] + k[1] * h]
}

fn rk4(field: &Field, delta: f64, t: f64, z: &Point, h: f64) -> Result<Point, Error> {
    let k1 = rhs(field, delta, t, z)?;
    let k2 = rhs(field, delta, t + h / 2.0, &axpy(z, h / 2.0, &k1))?;
    let k3 = rhs(field, delta, t + h / 2.0, &axpy(z, h / 2.0, &k2))?;
    let k4 = rhs(field, delta, t + h, &axpy(z, h, &k3))?;
    Ok([
        z[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (h / 6.0),
        z[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (h / 6.0),
    ])
}

/// Move z back onto W = c along the gradient direction (Newton in the
/// normal direction).
fn project(field: &Field, c: Complex64, z: &Point) -> Point {
    let mut z = *z;
    for _ in 0..4 {
        let r = c - field.value(&z);
        if r.norm() < 1e-15 {
            break;
        }
        let g = field.grad(&z);
        let n2 = g[0].norm_sqr() + g[1].norm_sqr();
        if n2 == 0.0 {
            break;
        }
        z = [z[0] + g[0].conj() * r / n2, z[1] + g[1].conj() * r / n2];
    }
    z
}

fn dist(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

#[derive(Clone, Copy, Debug)]
pub struct TransportProblem {
    pub fibration: Fibration,
    pub delta: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub start: Point,
    /// Local error tolerance per step.
    pub tol: f64,
    pub max_steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportResult {
    pub end: (Complex64, Complex64),
    pub steps: usize,
    pub rejected: usize,
    /// Largest |W(z) - c(t)| over accepted steps.
    pub max_defect: f64,
}

pub const FIBRE_TOLERANCE: f64 = 1e-9;

/// Adaptive RK4 with step doubling and projection onto the fibre after
/// every accepted step.
pub fn integrate_parallel_transport(pb: &TransportProblem) -> Result<TransportResult, Error> {
    let field = Field::new(pb.fibration);
    let defect0 = (field.value(&pb.start) - base(pb.delta, pb.t_start)).norm();
    if defect0 > 1e-12 {
        return Err(Error::Domain(format!("start point is {defect0:.3e} off the fibre")));
    }
    let span = pb.t_end - pb.t_start;
    let mut z = pb.start;
    let mut t = pb.t_start;
    let (mut steps, mut rejected, mut max_defect) = (0, 0, defect0);
    if span == 0.0 {
        return Ok(TransportResult { end: (z[0], z[1]), steps, rejected, max_defect });
    }
    let dir = span.signum();
    let mut h = dir * span.abs().min(0.05);
    while (pb.t_end - t) * dir > 0.0 {
        if steps + rejected >= pb.max_steps {
            return Err(Error::Numerical(format!("step budget {} exhausted at t = {t}", pb.max_steps)));
        }
        if (t + h - pb.t_end) * dir > 0.0 {
            h = pb.t_end - t;
        }
        let big = rk4(&field, pb.delta, t, &z, h)?;
        let half = rk4(&field, pb.delta, t, &z, h / 2.0)?;
        let two = rk4(&field, pb.delta, t + h / 2.0, &half, h / 2.0)?;
        let err = dist(&big, &two) / 15.0;
        let scale = 1.0 + (z[0].norm() + z[1].norm());
        if err <= pb.tol * scale {
            t = if (pb.t_end - (t + h)) * dir <= 0.0 { pb.t_end } else { t + h };
            z = project(&field, base(pb.delta, t), &two);
            let defect = (field.value(&z) - base(pb.delta, t)).norm();
            if defect > FIBRE_TOLERANCE {
                return Err(Error::Numerical(format!("fibre defect {defect:.3e} at t = {t}")));
            }
            max_defect = max_defect.max(defect);
            steps += 1;
            let grow = if err == 0.0 { 2.0 } else { (0.9 * (pb.tol * scale / err).powf(0.2)).clamp(0.2, 2.0) };
            h *= grow;
        } else {
            rejected += 1;
            h *= (0.9 * (pb.tol * scale / err).powf(0.2)).clamp(0.1, 0.5);
        }
        if h.abs() < 1e-14 {
            return Err(Error::Numerical(format!("step size underflow at t = {t}")));
        }
    }
    Ok(TransportResult { end: (z[0], z[1]), steps, rejected, max_defect })
}

/// Fixed-step RK4 without projection, for convergence studies.
pub fn integrate_fixed(pb: &TransportProblem, n: usize) -> Result<(Complex64, Complex64), Error> {
    let field = Field::new(pb.fibration);
    let h = (pb.t_end - pb.t_start) / n as f64;
    let mut z = pb.start;
    for k in 0..n {
        z = rk4(&field, pb.delta, pb.t_start + k as f64 * h, &z, h)?;
    }
    Ok((z[0], z[1]))
}

/// Start point of the marked point with parameter s on V0(l, m):
/// sqrt(delta / eps) (e^{s + 2 pi i a}, e^{-s + 2 pi i b}).
pub fn local_start(spec: FamilySpec, l: u32, m: u32, s: f64, delta: f64, eps: f64) -> Point {
    let (a, b) = interior_phases(spec, l, m);
    let r = (delta / eps).sqrt();
    let tau = std::f64::consts::TAU;
    [Complex64::from_polar(r * s.exp(), tau * to_f64(a)), Complex64::from_polar(r * (-s).exp(), tau * to_f64(b))]
}

fn local_problem(spec: FamilySpec, l: u32, m: u32, s: f64, delta: f64, eps: f64, tol: f64) -> TransportProblem {
    TransportProblem {
        fibration: Fibration::Local { eps },
        delta,
        t_start: std::f64::consts::TAU * to_f64(theta(spec, l, m)),
        t_end: 0.0,
        start: local_start(spec, l, m, s, delta, eps),
        tol,
        max_steps: MAX_STEPS,
    }
}

pub const MAX_STEPS: usize = 100_000;
pub const AGREEMENT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalModelReport {
    pub l: u32,
    pub m: u32,
    pub s: f64,
    pub angle_error: f64,
    pub modulus_error: f64,
    pub steps: usize,
    pub max_defect: f64,
    pub pass: bool,
}

fn wrap(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = a.rem_euclid(tau);
    r.min(tau - r)
}

/// Transport along t : theta_{l,m} -> 0 in the exact local model and
/// compare arg and modulus of the x coordinate with the closed form.
pub fn verify_local_model(spec: FamilySpec, l: u32, m: u32, s: f64, delta: f64, eps: f64, tol: f64) -> Result<LocalModelReport, Error> {
    if spec.family == Family::Bp {
        return Err(Error::Domain("the local model applies to the loop and chain families".into()));
    }
    if s.abs() > 3.0 {
        return Err(Error::Domain(format!("|s| = {} exceeds 3", s.abs())));
    }
    let pb = local_problem(spec, l, m, s, delta, eps, tol);
    let r = integrate_parallel_transport(&pb)?;
    let angle_error = wrap(r.end.0.arg() - phi_profile(spec, l, m, s, 0.0));
    let modulus_error = (r.end.0.norm() - (delta / eps).sqrt() * s.exp()).abs();
    let pass = angle_error <= AGREEMENT && modulus_error <= AGREEMENT && r.steps <= MAX_STEPS;
    Ok(LocalModelReport { l, m, s, angle_error, modulus_error, steps: r.steps, max_defect: r.max_defect, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub steps: [usize; 3],
    pub errors: [f64; 3],
    pub ratios: [f64; 2],
    pub pass: bool,
}

/// Endpoint error of fixed-step RK4 against the closed form at n, 2n, 4n
/// steps; each halving must cut the error by at least 8.
pub fn convergence_study(spec: FamilySpec, l: u32, m: u32, s: f64, delta: f64, eps: f64, n: usize) -> Result<ConvergenceReport, Error> {
    let pb = local_problem(spec, l, m, s, delta, eps, 0.0);
    let r = (delta / eps).sqrt() * s.exp();
    let exact = Complex64::from_polar(r, phi_profile(spec, l, m, s, 0.0));
    let steps = [n, 2 * n, 4 * n];
    let mut errors = [0.0; 3];
    for (k, &st) in steps.iter().enumerate() {
        errors[k] = (integrate_fixed(&pb, st)?.0 - exact).norm();
    }
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    Ok(ConvergenceReport { steps, errors, ratios, pass: ratios.iter().all(|&q| q >= 8.0) })
}

/// The verification grid: every interior (l, m) of loop (2,2), (4,3),
/// (4,6) and chain (3,4), with s in {-2, ..., 2}.
pub fn transport_grid() -> Vec<(FamilySpec, u32, u32, f64)> {
    let specs = [(Family::Loop, 2, 2), (Family::Loop, 4, 3), (Family::Loop, 4, 6), (Family::Chain, 3, 4)];
    let mut out = Vec::new();
    for (f, p, q) in specs {
        let spec = FamilySpec::new(f, p, q).expect("valid grid spec");
        for (l, m) in interior_indices(spec) {
            for s in -2..=2 {
                out.push((spec, l, m, s as f64));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, p: u32, q: u32) -> FamilySpec {
        FamilySpec::new(f, p, q).unwrap()
    }

    #[test]
    fn trivial_transport_is_identity() {
        let r = verify_local_model(spec(Family::Loop, 4, 6), 0, 0, 1.0, 1e-3, 0.1, 1e-12).unwrap();
        assert_eq!((r.angle_error, r.modulus_error, r.steps), (0.0, 0.0, 0));
    }

    #[test]
    fn loop_4_3_closed_form() {
        let r = verify_local_model(spec(Family::Loop, 4, 3), 1, 1, 0.0, 1e-3, 0.1, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_defect <= FIBRE_TOLERANCE);
    }

    #[test]
    fn fourth_order() {
        let c = convergence_study(spec(Family::Loop, 4, 6), 1, 2, 0.5, 1e-3, 0.1, 16).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn starting_off_fibre_is_rejected() {
        let mut pb = local_problem(spec(Family::Loop, 3, 3), 1, 1, 0.0, 1e-3, 0.1, 1e-12);
        pb.start[0] *= 1.01;
        assert!(integrate_parallel_transport(&pb).is_err());
    }

    #[test]
    fn full_fibration_stays_on_fibre() {
        let s = spec(Family::Loop, 3, 3);
        let (delta, eps) = (1e-6, 0.1);
        let field = Field::new(Fibration::Full { spec: s, eps });
        let t0 = std::f64::consts::TAU * to_f64(theta(s, 1, 1));
        let guess = local_start(s, 1, 1, 0.0, delta, eps);
        let start = project(&field, base(delta, t0), &guess);
        let pb = TransportProblem { fibration: Fibration::Full { spec: s, eps }, delta, t_start: t0, t_end: 0.0, start, tol: 1e-12, max_steps: MAX_STEPS };
        let r = integrate_parallel_transport(&pb).unwrap();
        assert!(r.max_defect <= FIBRE_TOLERANCE);
    }
}
