//! Serialisation: versioned JSON documents, DOT output with a small reader,
//! and the textual formats accepted on the command line.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::{DirectedAlgebra, QuiverWithRelations};
use crate::linalg::Q;
use crate::Error;

pub const SCHEMA: &str = "1";

/// "a/b" in lowest terms, or "a" for integers.
pub fn format_fraction(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_fraction(s: &str) -> Result<Q, Error> {
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num_ok = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.len() <= 30 && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !num_ok(n) || !num_ok(d) || d.starts_with('-') {
        return Err(bad());
    }
    let n: i128 = n.parse().map_err(|_| bad())?;
    let d: i128 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

/// Degree windows "lo:hi", "lo..hi" or "lo,hi" with lo <= 0 <= hi.
pub fn parse_window(s: &str) -> Result<(i32, i32), Error> {
    let bad = || Error::Parse(format!("not a degree window: {s:?}"));
    let s = s.trim();
    let (a, b) = s.split_once("..").or_else(|| s.split_once(':')).or_else(|| s.split_once(',')).ok_or_else(bad)?;
    let lo: i32 = a.trim().parse().map_err(|_| bad())?;
    let hi: i32 = b.trim().parse().map_err(|_| bad())?;
    if lo > 0 || hi < 0 || i64::from(hi) - i64::from(lo) > 200 {
        return Err(Error::Parse(format!("window {s:?} must contain 0 and span at most 200 degrees")));
    }
    Ok((lo, hi))
}

fn shift_of(label: &str) -> i64 {
    label.rsplit_once('[').and_then(|(_, r)| r.strip_suffix(']')).and_then(|n| n.parse().ok()).unwrap_or(0)
}

fn arrow_label(alg: &DirectedAlgebra, a: usize, b: usize) -> String {
    match (alg.objects[a].grid, alg.objects[b].grid) {
        (Some((i, j)), Some((ii, jj))) if ii == i + 1 && jj == j => "x".into(),
        (Some((i, j)), Some((ii, jj))) if ii == i && jj == j + 1 => "y".into(),
        _ => format!("to_{}", alg.objects[b].class),
    }
}

pub fn quiver_json(spec: &str, side: &str, alg: &DirectedAlgebra, qv: &QuiverWithRelations) -> Value {
    let vertices: Vec<Value> = alg
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| json!({"id": i, "label": o.label, "class": o.class, "shift": shift_of(&o.label), "grid": o.grid}))
        .collect();
    let arrows: Vec<Value> = qv.arrows.iter().map(|&(a, b)| json!({"src": a, "tgt": b, "label": arrow_label(alg, a, b)})).collect();
    let relations: Vec<Value> = qv
        .relations
        .iter()
        .map(|r| {
            json!({
                "src": r.source,
                "tgt": r.target,
                "terms": r.terms.iter().map(|(c, p)| json!({"coeff": format_fraction(*c), "path": p})).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "spec": spec,
        "side": side,
        "vertices": vertices,
        "arrows": arrows,
        "relations": relations,
        "quotient_dim": qv.quotient_dim,
        "hom_total": qv.hom_total,
    })
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph with one cluster per object class.
pub fn quiver_dot(name: &str, alg: &DirectedAlgebra, qv: &QuiverWithRelations) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", dot_id(name));
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, o) in alg.objects.iter().enumerate() {
        classes.entry(o.class.as_str()).or_default().push(i);
    }
    for (k, (class, members)) in classes.iter().enumerate() {
        out.push_str(&format!("  subgraph cluster_{k} {{\n    label={};\n", dot_id(class)));
        for &i in members {
            out.push_str(&format!("    n{i} [label={}];\n", dot_id(&alg.objects[i].label)));
        }
        out.push_str("  }\n");
    }
    for &(a, b) in &qv.arrows {
        out.push_str(&format!("  n{a} -> n{b} [label={}];\n", dot_id(&arrow_label(alg, a, b))));
    }
    out.push_str("}\n");
    out
}

/// A parsed DOT digraph: node attributes and edges, subgraphs flattened.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub name: Option<String>,
    pub attrs: BTreeMap<String, String>,
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>, Error> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |i: usize, m: &str| Error::Parse(format!("DOT: {m} at byte {i}"));
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'/' if b.get(i + 1) == Some(&b'/') => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' if b.get(i + 1) == Some(&b'*') => {
                let end = src[i + 2..].find("*/").ok_or_else(|| err(i, "unterminated comment"))?;
                i += end + 4;
            }
            b'#' => {
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
            }
            b'{' | b'}' | b'[' | b']' | b';' | b',' | b'=' => {
                out.push(Tok::Sym(match c {
                    b'{' => "{",
                    b'}' => "}",
                    b'[' => "[",
                    b']' => "]",
                    b';' => ";",
                    b',' => ",",
                    _ => "=",
                }));
                i += 1;
            }
            b'-' if b.get(i + 1) == Some(&b'>') => {
                out.push(Tok::Sym("->"));
                i += 2;
            }
            b'"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match b.get(i) {
                        None => return Err(err(i, "unterminated string")),
                        Some(b'"') => {
                            i += 1;
                            break;
                        }
                        Some(b'\\') if i + 1 < b.len() && (b[i + 1] == b'"' || b[i + 1] == b'\\') => {
                            s.push(b[i + 1] as char);
                            i += 2;
                        }
                        Some(_) => {
                            let ch = src[i..].chars().next().expect("inside string");
                            s.push(ch);
                            i += ch.len_utf8();
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.' || (b[i] == b'-' && b.get(i + 1) != Some(&b'>'))) {
                    i += 1;
                }
                out.push(Tok::Id(src[start..i].to_string()));
            }
            _ => return Err(err(i, "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, s: &'static str) -> Result<(), Error> {
        match self.next() {
            Some(Tok::Sym(x)) if x == s => Ok(()),
            other => Err(Error::Parse(format!("DOT: expected {s:?}, found {other:?}"))),
        }
    }

    fn id(&mut self) -> Result<String, Error> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            other => Err(Error::Parse(format!("DOT: expected identifier, found {other:?}"))),
        }
    }

    fn attr_list(&mut self) -> Result<BTreeMap<String, String>, Error> {
        let mut m = BTreeMap::new();
        while self.peek() == Some(&Tok::Sym("[")) {
            self.next();
            while self.peek() != Some(&Tok::Sym("]")) {
                let k = self.id()?;
                self.expect("=")?;
                let v = self.id()?;
                m.insert(k, v);
                if matches!(self.peek(), Some(Tok::Sym(",")) | Some(Tok::Sym(";"))) {
                    self.next();
                }
            }
            self.expect("]")?;
        }
        Ok(m)
    }

    fn stmts(&mut self, g: &mut DotGraph, top: bool) -> Result<(), Error> {
        self.depth += 1;
        if self.depth > 64 {
            return Err(Error::Parse("DOT: subgraphs nested too deeply".into()));
        }
        self.expect("{")?;
        loop {
            match self.peek().cloned() {
                None => return Err(Error::Parse("DOT: missing '}'".into())),
                Some(Tok::Sym("}")) => {
                    self.next();
                    break;
                }
                Some(Tok::Sym(";")) => {
                    self.next();
                }
                Some(Tok::Sym("{")) => self.stmts(g, false)?,
                Some(Tok::Id(kw)) if kw == "subgraph" => {
                    self.next();
                    if let Some(Tok::Id(_)) = self.peek() {
                        self.next();
                    }
                    self.stmts(g, false)?;
                }
                Some(Tok::Id(kw)) if kw == "graph" || kw == "node" || kw == "edge" => {
                    self.next();
                    self.attr_list()?;
                }
                Some(Tok::Id(_)) => {
                    let a = self.id()?;
                    match self.peek() {
                        Some(Tok::Sym("=")) => {
                            self.next();
                            let v = self.id()?;
                            if top {
                                g.attrs.insert(a, v);
                            }
                        }
                        Some(Tok::Sym("->")) => {
                            let mut chain = vec![a];
                            while self.peek() == Some(&Tok::Sym("->")) {
                                self.next();
                                chain.push(self.id()?);
                            }
                            let attrs = self.attr_list()?;
                            for n in &chain {
                                g.nodes.entry(n.clone()).or_default();
                            }
                            for w in chain.windows(2) {
                                g.edges.push((w[0].clone(), w[1].clone(), attrs.clone()));
                            }
                        }
                        _ => {
                            let attrs = self.attr_list()?;
                            g.nodes.entry(a).or_default().extend(attrs);
                        }
                    }
                }
                Some(t) => return Err(Error::Parse(format!("DOT: unexpected {t:?}"))),
            }
        }
        self.depth -= 1;
        Ok(())
    }
}

/// Reads the subset of DOT produced by `quiver_dot`: a digraph with node,
/// edge and attribute statements and (flattened) subgraphs.
pub fn parse_dot(src: &str) -> Result<DotGraph, Error> {
    let mut p = Parser { toks: lex(src)?, pos: 0, depth: 0 };
    if let Some(Tok::Id(s)) = p.peek() {
        if s == "strict" {
            p.next();
        }
    }
    match p.next() {
        Some(Tok::Id(s)) if s == "digraph" => {}
        other => return Err(Error::Parse(format!("DOT: expected 'digraph', found {other:?}"))),
    }
    let mut g = DotGraph::default();
    if let Some(Tok::Id(_)) = p.peek() {
        g.name = Some(p.id()?);
    }
    p.stmts(&mut g, true)?;
    if p.pos < p.toks.len() {
        return Err(Error::Parse("DOT: trailing input".into()));
    }
    Ok(g)
}

/// Parse a quiver JSON document and return (vertex count, arrow list).
pub fn read_quiver_json(src: &str) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let v: Value = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(Error::Parse("missing or unknown schema".into()));
    }
    let verts = v.get("vertices").and_then(Value::as_array).ok_or_else(|| Error::Parse("no vertices".into()))?;
    let n = verts.len();
    let arrows = v.get("arrows").and_then(Value::as_array).ok_or_else(|| Error::Parse("no arrows".into()))?;
    let mut out = Vec::new();
    for a in arrows {
        let s = a.get("src").and_then(Value::as_u64).ok_or_else(|| Error::Parse("arrow without src".into()))? as usize;
        let t = a.get("tgt").and_then(Value::as_u64).ok_or_else(|| Error::Parse("arrow without tgt".into()))? as usize;
        if s >= n || t >= n {
            return Err(Error::Parse(format!("arrow {s} -> {t} out of range")));
        }
        out.push((s, t));
    }
    Ok((n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn fractions() {
        assert_eq!(format_fraction(Q::new(22, 30)), "11/15");
        assert_eq!(format_fraction(q(-3)), "-3");
        assert_eq!(parse_fraction("11/15").unwrap(), Q::new(11, 15));
        assert_eq!(parse_fraction(" -4/6 ").unwrap(), Q::new(-2, 3));
        assert_eq!(parse_fraction("7").unwrap(), q(7));
        for bad in ["", "1/0", "a/2", "1/-2", "1//2", "--1", "1/2/3", "99999999999999999999999999999999999"] {
            assert!(parse_fraction(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn windows() {
        assert_eq!(parse_window("-6:6").unwrap(), (-6, 6));
        assert_eq!(parse_window("-2..3").unwrap(), (-2, 3));
        assert_eq!(parse_window("0,0").unwrap(), (0, 0));
        assert!(parse_window("1:3").is_err());
        assert!(parse_window("6").is_err());
        assert!(parse_window("-2147483648:0").is_err());
    }

    #[test]
    fn dot_reader_basics() {
        let g = parse_dot("digraph \"g\" { rankdir=LR; subgraph cluster_0 { a [label=\"K0(1,1)\"]; } a -> b -> c [label=x]; // c\n }").unwrap();
        assert_eq!(g.attrs["rankdir"], "LR");
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.nodes["a"]["label"], "K0(1,1)");
        assert_eq!(g.edges.len(), 2);
        assert!(parse_dot("graph { a -- b }").is_err());
        assert!(parse_dot("digraph { a -> }").is_err());
        assert!(parse_dot("digraph { a [label=\"x] }").is_err());
    }
}
