use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use invmirror::algebra::{sign_rectify, DirectedAlgebra, GridSigns};
use invmirror::aside::{assemble_directed_algebra, intersection_table, path_schedule};
use invmirror::bside::{assemble_b, expected_hom_table};
use invmirror::compare::{milnor_and_counts, mirror_check};
use invmirror::export::{format_fraction, parse_window, quiver_dot, quiver_json, SCHEMA};
use invmirror::transport::{convergence_study, verify_local_model};
use invmirror::{aside, Error, Family, FamilySpec};

#[derive(Parser)]
#[command(name = "invmirror", version, about = "Mirror symmetry checks for two-variable invertible polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gabriel quiver with relations of the directed algebra.
    Quiver(Common),
    /// Hom dimensions between basic objects in every degree of the window.
    Homtable(Common),
    /// Compare the A-side and B-side algebras under the correspondence.
    MirrorCheck(Common),
    /// Numeric parallel transport against the closed form, as CSV.
    TransportVerify(Common),
    /// Genus and puncture count of the Milnor fibre of the transpose.
    Invariants(Common),
    /// Random grid signs before and after rectification.
    Signs(Common),
    /// Milnor number and object counts.
    Milnor(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value = "both", ignore_case = true)]
    side: Side,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// lo:hi, containing 0.
    #[arg(long, default_value = "-6:6", allow_hyphen_values = true, value_parser = window_arg)]
    degree_window: (i32, i32),
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Local error tolerance of the adaptive integrator.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn window_arg(s: &str) -> Result<(i32, i32), String> {
    parse_window(s).map_err(|e| e.to_string())
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidLabel(_) | Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Runner = fn(FamilySpec, &Common) -> Result<Output, Failure>;

struct Output {
    text: String,
    ok: bool,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn sides(side: Side) -> Vec<&'static str> {
    match side {
        Side::A => vec!["A"],
        Side::B => vec!["B"],
        Side::Both => vec!["A", "B"],
    }
}

fn algebra(spec: FamilySpec, side: &str, c: &Common) -> Result<DirectedAlgebra, Error> {
    if side == "A" {
        assemble_directed_algebra(spec, c.degree_window, c.seed)
    } else {
        assemble_b(spec, c.degree_window)
    }
}

fn schedule_json(spec: FamilySpec) -> Result<Value, Error> {
    let sch = path_schedule(spec)?;
    let theta: serde_json::Map<String, Value> = sch.theta.iter().map(|(&(l, m), t)| (format!("({l},{m})"), Value::String(format_fraction(*t)))).collect();
    let order: Vec<String> = sch.order.iter().map(|(l, m)| format!("({l},{m})")).collect();
    let fingers: Vec<Value> = sch.fingers.iter().map(|(a, b)| json!([format!("({},{})", a.0, a.1), format!("({},{})", b.0, b.1)])).collect();
    let (objs, table) = intersection_table(spec)?;
    Ok(json!({
        "theta": theta,
        "order": order,
        "fingers": fingers,
        "objects": objs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "intersections": table,
    }))
}

fn run_quiver(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    let mut docs = Vec::new();
    let mut text = String::new();
    for side in sides(c.side) {
        let raw = algebra(spec, side, c)?;
        let rect = raw.rectify()?;
        let qv = rect.rectified.quiver()?;
        match c.format {
            Format::Json => {
                let mut doc = quiver_json(&spec.to_string(), side, &rect.rectified, &qv);
                if side == "A" {
                    doc["schedule"] = schedule_json(spec)?;
                }
                docs.push(doc);
            }
            Format::Dot => text.push_str(&quiver_dot(&format!("{spec} {side}"), &rect.rectified, &qv)),
            Format::Text => {
                let plural = if qv.relations.len() == 1 { "" } else { "s" };
                let _ = writeln!(text, "{spec} side {side}: {} vertices, {} arrows, {} relation{plural}", qv.vertices, qv.arrows.len(), qv.relations.len());
                for &(a, b) in &qv.arrows {
                    let _ = writeln!(text, "  {} -> {}", rect.rectified.objects[a].label, rect.rectified.objects[b].label);
                }
                for r in &qv.relations {
                    let terms: Vec<String> = r
                        .terms
                        .iter()
                        .map(|(k, p)| format!("{}*{}", format_fraction(*k), p.iter().map(|&v| rect.rectified.objects[v].label.clone()).collect::<Vec<_>>().join(">")))
                        .collect();
                    let _ = writeln!(text, "  relation: {}", terms.join(" + "));
                }
            }
        }
    }
    if c.format == Format::Json {
        text = if docs.len() == 1 { pretty(&docs[0]) } else { pretty(&json!({"schema": SCHEMA, "spec": spec.to_string(), "sides": docs})) };
    }
    Ok(Output { text, ok: true })
}

fn run_homtable(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    if c.format == Format::Dot {
        return Err(Failure::Input("homtable has no DOT form".into()));
    }
    let mut docs = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for side in sides(c.side) {
        let alg = algebra(spec, side, c)?;
        let (lo, hi) = c.degree_window;
        let mut entries = Vec::new();
        for a in 0..alg.len() {
            for b in 0..alg.len() {
                for n in lo..=hi {
                    let d = alg.dim(a, b, n);
                    if d > 0 {
                        entries.push(json!({"src": alg.objects[a].label, "tgt": alg.objects[b].label, "degree": n, "dim": d}));
                    }
                }
            }
        }
        let closed = (side == "B").then(|| expected_hom_table(spec, c.degree_window).dims == alg.dims);
        ok &= closed.unwrap_or(true);
        match c.format {
            Format::Json => docs.push(json!({
                "schema": SCHEMA,
                "spec": spec.to_string(),
                "side": side,
                "window": [lo, hi],
                "labels": alg.objects.iter().map(|o| o.label.clone()).collect::<Vec<_>>(),
                "entries": entries,
                "closed_form_match": closed,
            })),
            _ => {
                let _ = writeln!(text, "{spec} side {side}, degrees {lo}..{hi}");
                let width = alg.objects.iter().map(|o| o.label.len()).max().unwrap_or(0);
                for a in 0..alg.len() {
                    let row: String = (0..alg.len()).map(|b| if alg.hom0(a, b) > 0 { '1' } else { '.' }).collect();
                    let _ = writeln!(text, "  {:>width$} {row}", alg.objects[a].label);
                }
                let off: Vec<String> =
                    entries.iter().filter(|e| e["degree"] != 0).map(|e| format!("{} -> {} in degree {}", e["src"], e["tgt"], e["degree"])).collect();
                let _ = writeln!(text, "  nonzero outside degree 0: {}", if off.is_empty() { "none".to_string() } else { off.join(", ") });
                if let Some(m) = closed {
                    let _ = writeln!(text, "  closed form: {}", if m { "match" } else { "MISMATCH" });
                }
            }
        }
    }
    if c.format == Format::Json {
        text = if docs.len() == 1 { pretty(&docs[0]) } else { pretty(&json!({"schema": SCHEMA, "spec": spec.to_string(), "sides": docs})) };
    }
    Ok(Output { text, ok })
}

fn run_mirror(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    let r = mirror_check(spec, c.degree_window, c.seed)?;
    let text = match c.format {
        Format::Json => pretty(&json!({"schema": SCHEMA, "spec": spec.to_string(), "pass": r.pass, "objects": r.objects, "mismatches": r.mismatches})),
        Format::Dot => return Err(Failure::Input("mirror-check has no DOT form".into())),
        Format::Text => {
            let mut t = format!("{spec}: {} ({} objects)\n", if r.pass { "pass" } else { "FAIL" }, r.objects);
            for m in &r.mismatches {
                let _ = writeln!(t, "  {}: {} | {} degree {:?}", m.what, m.a, m.b, m.degree);
            }
            t
        }
    };
    Ok(Output { text, ok: r.pass })
}

fn run_transport(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    if spec.family == Family::Bp {
        return Err(Failure::Input("transport-verify applies to the loop and chain families".into()));
    }
    if !(c.eps > 0.0 && c.delta > 0.0 && c.tol > 0.0) {
        return Err(Failure::Input("eps, delta and tol must be positive".into()));
    }
    let mut text = String::from("l,m,s,angle_error,modulus_error,steps\n");
    let mut ok = true;
    for (l, m) in aside::interior_indices(spec) {
        for s in -2..=2 {
            let r = verify_local_model(spec, l, m, s as f64, c.delta, c.eps, c.tol)?;
            ok &= r.pass;
            let _ = writeln!(text, "{l},{m},{s},{:.3e},{:.3e},{}", r.angle_error, r.modulus_error, r.steps);
        }
    }
    let (l, m) = *aside::interior_indices(spec).last().expect("nonempty index set");
    if (l, m) != (0, 0) {
        ok &= convergence_study(spec, l, m, 0.5, c.delta, c.eps, 16)?.pass;
    }
    Ok(Output { text, ok })
}

fn run_invariants(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    let inv = aside::surface_invariants(spec)?;
    let text = match c.format {
        Format::Json => pretty(&json!({"schema": SCHEMA, "spec": spec.to_string(), "genus": inv.genus, "punctures": inv.punctures, "mu": spec.milnor()})),
        Format::Dot => return Err(Failure::Input("invariants has no DOT form".into())),
        Format::Text => format!("genus {} punctures {}\n", inv.genus, inv.punctures),
    };
    Ok(Output { text, ok: true })
}

fn run_signs(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    let (w, h) = ((spec.p - 1) as usize, (spec.q - 1) as usize);
    let before = GridSigns::seeded(w, h, c.seed);
    let after = sign_rectify(&before);
    let signs = |g: &GridSigns| json!({"h": g.h.iter().map(|c| c.iter().map(|s| s.0).collect::<Vec<_>>()).collect::<Vec<_>>(), "v": g.v.iter().map(|c| c.iter().map(|s| s.0).collect::<Vec<_>>()).collect::<Vec<_>>()});
    let text = match c.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "spec": spec.to_string(),
            "width": w,
            "height": h,
            "seed": c.seed,
            "before": signs(&before),
            "after": signs(&after),
            "commutes": after.commutes(),
        })),
        Format::Dot => return Err(Failure::Input("signs has no DOT form".into())),
        Format::Text => format!("{w}x{h} grid, seed {}: commutes before {}, after {}\n", c.seed, before.commutes(), after.commutes()),
    };
    Ok(Output { text, ok: after.commutes() })
}

fn run_milnor(spec: FamilySpec, c: &Common) -> Result<Output, Failure> {
    let m = milnor_and_counts(spec)?;
    let ok = m.mu == m.a_objects && m.mu == m.b_objects;
    let text = match c.format {
        Format::Json => pretty(&json!({"schema": SCHEMA, "spec": spec.to_string(), "mu": m.mu, "a_objects": m.a_objects, "b_objects": m.b_objects, "decomposition": m.decomposition})),
        Format::Dot => return Err(Failure::Input("milnor has no DOT form".into())),
        Format::Text => format!("{}\n", m.mu),
    };
    Ok(Output { text, ok })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (c, run): (&Common, Runner) = match &cli.command {
        Command::Quiver(c) => (c, run_quiver),
        Command::Homtable(c) => (c, run_homtable),
        Command::MirrorCheck(c) => (c, run_mirror),
        Command::TransportVerify(c) => (c, run_transport),
        Command::Invariants(c) => (c, run_invariants),
        Command::Signs(c) => (c, run_signs),
        Command::Milnor(c) => (c, run_milnor),
    };
    let result = FamilySpec::new(c.family, c.p, c.q).map_err(Failure::from).and_then(|spec| run(spec, c));
    match result {
        Ok(out) => {
            if let Some(path) = &c.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
    }
}
