//! OpenQASM 2.0 export and a small re-import for checking exports.

use crate::circuit::{Circuit, Frame};
use crate::error::{Error, Result};
use crate::gates::{tfxy_to_angles, Gate, PauliAxis};
use crate::oracle::DenseUnitary;
use crate::su2::Angle;
use num_complex::Complex64 as C;
use std::collections::HashMap;
use std::fmt::Write;

pub const PREAMBLE: &str = "\
OPENQASM 2.0;
gate cx c,t { CX c,t; }
gate h a { U(pi/2,0,pi) a; }
gate rx(theta) a { U(theta,-pi/2,pi/2) a; }
gate ry(theta) a { U(theta,0,0) a; }
gate rz(phi) a { U(0,0,phi) a; }
gate rzz(theta) a,b { cx a,b; rz(theta) b; cx a,b; }
gate rxx(theta) a,b { h a; h b; cx a,b; rz(theta) b; cx a,b; h a; h b; }
gate ryy(theta) a,b { rx(pi/2) a; rx(pi/2) b; cx a,b; rz(theta) b; cx a,b; rx(-pi/2) a; rx(-pi/2) b; }
";

fn fmt_angle(x: f64) -> String {
    format!("{x:.16e}")
}

fn one(out: &mut String, frame: Frame, axis: PauliAxis, q: usize, t: f64) {
    let (a, sign) = frame.map_axis(axis);
    let _ = writeln!(out, "r{}({}) q[{}];", a.letter(), fmt_angle(sign * t), q - 1);
}

fn two(out: &mut String, frame: Frame, axis: PauliAxis, q: usize, t: f64) {
    let (a, _) = frame.map_axis(axis);
    let l = a.letter();
    let _ = writeln!(out, "r{l}{l}({}) q[{}],q[{}];", fmt_angle(t), q - 1, q);
}

/// Renders a circuit in time order. The frame relabels TFXY gates only.
pub fn export(c: &Circuit) -> Result<String> {
    c.validate()?;
    let mut out = String::from(PREAMBLE);
    let _ = writeln!(out, "qreg q[{}];", c.n_spins);
    for g in &c.gates {
        match g {
            Gate::Rot(r) if r.arity == 1 => one(&mut out, Frame::Xy, r.axis, r.site, r.angle.radians()),
            Gate::Rot(r) if r.arity == 2 => two(&mut out, Frame::Xy, r.axis, r.site, r.angle.radians()),
            Gate::Rot(r) => return Err(Error::Export(format!("rotation of arity {} is not supported: {r:?}", r.arity))),
            Gate::TwoAxis(t) => {
                two(&mut out, Frame::Xy, t.axis_a, t.site, t.angle_a.radians());
                two(&mut out, Frame::Xy, t.axis_b, t.site, t.angle_b.radians());
            }
            Gate::Tfxy(t) => {
                let th: Vec<f64> = tfxy_to_angles(t).iter().map(Angle::radians).collect();
                let (f, s) = (c.frame, t.site);
                one(&mut out, f, PauliAxis::Z, s, th[0]);
                one(&mut out, f, PauliAxis::Z, s + 1, th[1]);
                two(&mut out, f, PauliAxis::X, s, th[2]);
                two(&mut out, f, PauliAxis::Y, s, th[3]);
                one(&mut out, f, PauliAxis::Z, s, th[4]);
                one(&mut out, f, PauliAxis::Z, s + 1, th[5]);
            }
        }
    }
    Ok(out)
}

/// A primitive of the re-import: `U(θ, φ, λ)` or `CX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    U { q: usize, theta: f64, phi: f64, lambda: f64 },
    Cx { control: usize, target: usize },
}

#[derive(Debug, Clone)]
struct GateDef {
    params: Vec<String>,
    args: Vec<String>,
    body: Vec<Stmt>,
}

#[derive(Debug, Clone)]
struct Stmt {
    name: String,
    params: Vec<String>,
    args: Vec<String>,
}

/// Parses our own exports (and simple hand-written files in the same
/// subset) into 1-based primitives.
pub fn parse(text: &str) -> Result<(usize, Vec<Primitive>)> {
    let text: String = text.lines().map(|l| l.split("//").next().unwrap_or("")).collect::<Vec<_>>().join("\n");
    let mut defs: HashMap<String, GateDef> = HashMap::new();
    let mut n_qubits = None;
    let mut ops = Vec::new();
    let mut rest = text.as_str();
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if let Some(r) = rest.strip_prefix("gate ") {
            let open = r.find('{').ok_or_else(|| Error::Parse("gate definition without body".into()))?;
            let close = r.find('}').ok_or_else(|| Error::Parse("unterminated gate body".into()))?;
            let (name, params, args) = split_head(&r[..open])?;
            let body = r[open + 1..close].split(';').map(str::trim).filter(|s| !s.is_empty()).map(parse_stmt).collect::<Result<_>>()?;
            defs.insert(name, GateDef { params, args, body });
            rest = &r[close + 1..];
            continue;
        }
        let end = rest.find(';').ok_or_else(|| Error::Parse(format!("missing ';' near {:?}", &rest[..rest.len().min(40)])))?;
        let stmt = rest[..end].trim();
        rest = &rest[end + 1..];
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        if let Some(r) = stmt.strip_prefix("qreg") {
            let r = r.trim();
            let lb = r.find('[').ok_or_else(|| Error::Parse(format!("bad qreg {stmt:?}")))?;
            let rb = r.find(']').ok_or_else(|| Error::Parse(format!("bad qreg {stmt:?}")))?;
            n_qubits = Some(r[lb + 1..rb].trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad qreg size: {e}")))?);
            continue;
        }
        let n = n_qubits.ok_or_else(|| Error::Parse("gate before qreg".into()))?;
        let s = parse_stmt(stmt)?;
        let params = s.params.iter().map(|p| eval(p, &HashMap::new())).collect::<Result<Vec<_>>>()?;
        let qubits = s.args.iter().map(|a| qubit(a, n)).collect::<Result<Vec<_>>>()?;
        expand(&s.name, &params, &qubits, &defs, &mut ops, 0)?;
    }
    Ok((n_qubits.ok_or_else(|| Error::Parse("no qreg declared".into()))?, ops))
}

fn split_head(head: &str) -> Result<(String, Vec<String>, Vec<String>)> {
    let head = head.trim();
    let (name, params, args) = match head.find('(') {
        Some(lp) => {
            let rp = head.find(')').ok_or_else(|| Error::Parse(format!("unbalanced parameters in {head:?}")))?;
            (head[..lp].trim(), split_list(&head[lp + 1..rp]), &head[rp + 1..])
        }
        None => {
            let sp = head.find(char::is_whitespace).unwrap_or(head.len());
            (&head[..sp], vec![], &head[sp..])
        }
    };
    Ok((name.to_string(), params, split_list(args)))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn parse_stmt(s: &str) -> Result<Stmt> {
    let (name, params, args) = split_head(s)?;
    Ok(Stmt { name, params, args })
}

fn qubit(a: &str, n: usize) -> Result<usize> {
    let inner = a.strip_prefix("q[").and_then(|r| r.strip_suffix(']')).ok_or_else(|| Error::Parse(format!("bad qubit {a:?}")))?;
    let i: usize = inner.trim().parse().map_err(|e| Error::Parse(format!("bad qubit index {a:?}: {e}")))?;
    if i >= n {
        return Err(Error::Parse(format!("qubit {i} outside register of {n}")));
    }
    Ok(i + 1)
}

fn expand(name: &str, params: &[f64], qubits: &[usize], defs: &HashMap<String, GateDef>, out: &mut Vec<Primitive>, depth: usize) -> Result<()> {
    if depth > 16 {
        return Err(Error::Parse(format!("gate {name} nests too deeply")));
    }
    let arity = |p: usize, q: usize| -> Result<()> {
        if params.len() != p || qubits.len() != q {
            return Err(Error::Parse(format!("{name} takes {p} parameters and {q} qubits")));
        }
        Ok(())
    };
    if let Some(d) = defs.get(name) {
        arity(d.params.len(), d.args.len())?;
        let env: HashMap<&str, f64> = d.params.iter().map(String::as_str).zip(params.iter().copied()).collect();
        let qmap: HashMap<&str, usize> = d.args.iter().map(String::as_str).zip(qubits.iter().copied()).collect();
        for s in &d.body {
            let p = s.params.iter().map(|e| eval(e, &env)).collect::<Result<Vec<_>>>()?;
            let q = s
                .args
                .iter()
                .map(|a| qmap.get(a.as_str()).copied().ok_or_else(|| Error::Parse(format!("unknown argument {a} in {name}"))))
                .collect::<Result<Vec<_>>>()?;
            expand(&s.name, &p, &q, defs, out, depth + 1)?;
        }
        return Ok(());
    }
    let half = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let u = |q, theta, phi, lambda| Primitive::U { q, theta, phi, lambda };
    match name {
        "U" => {
            arity(3, 1)?;
            out.push(u(qubits[0], params[0], params[1], params[2]));
        }
        "CX" | "cx" => {
            arity(0, 2)?;
            out.push(Primitive::Cx { control: qubits[0], target: qubits[1] });
        }
        "h" => {
            arity(0, 1)?;
            out.push(u(qubits[0], half, 0.0, pi));
        }
        "x" => {
            arity(0, 1)?;
            out.push(u(qubits[0], pi, 0.0, pi));
        }
        "s" | "sdg" => {
            arity(0, 1)?;
            out.push(u(qubits[0], 0.0, 0.0, if name == "s" { half } else { -half }));
        }
        "rx" => {
            arity(1, 1)?;
            out.push(u(qubits[0], params[0], -half, half));
        }
        "ry" => {
            arity(1, 1)?;
            out.push(u(qubits[0], params[0], 0.0, 0.0));
        }
        "rz" => {
            arity(1, 1)?;
            out.push(u(qubits[0], 0.0, 0.0, params[0]));
        }
        _ => return Err(Error::Parse(format!("unknown gate {name}"))),
    }
    Ok(())
}

/// Evaluates `+ - * /`, parentheses, `pi`, numbers and parameter names.
fn eval(expr: &str, env: &HashMap<&str, f64>) -> Result<f64> {
    let toks = tokenize(expr)?;
    let mut p = ExprParser { toks: &toks, i: 0, env };
    let v = p.sum()?;
    if p.i != toks.len() {
        return Err(Error::Parse(format!("trailing input in expression {expr:?}")));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == '.' || b[i] == 'e' || b[i] == 'E' || ((b[i] == '-' || b[i] == '+') && matches!(b[i - 1], 'e' | 'E'))) {
                i += 1;
            }
            let t: String = b[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(b[start..i].iter().collect()));
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Tok],
    i: usize,
    env: &'a HashMap<&'a str, f64>,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }

    fn sum(&mut self) -> Result<f64> {
        let mut v = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let r = self.product()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.i += 1;
            let r = self.unary()?;
            v = if c == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64> {
        match self.peek().cloned() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.i += 1;
                Ok(v)
            }
            Some(Tok::Num(x)) => {
                self.i += 1;
                Ok(x)
            }
            Some(Tok::Ident(id)) => {
                self.i += 1;
                if id == "pi" {
                    Ok(std::f64::consts::PI)
                } else {
                    self.env.get(id.as_str()).copied().ok_or_else(|| Error::Parse(format!("unknown identifier {id}")))
                }
            }
            _ => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

/// Dense unitary of re-imported primitives.
pub fn primitives_unitary(n: usize, ops: &[Primitive]) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(n)?;
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    for op in ops {
        match *op {
            Primitive::U { q, theta, phi, lambda } => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let m = [
                    [C::new(c, 0.0), -C::from_polar(s, lambda)],
                    [C::from_polar(s, phi), C::from_polar(c, phi + lambda)],
                ];
                u.apply_one(q, m)?;
            }
            Primitive::Cx { control, target } => {
                let m = [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]];
                u.apply_two(control, target, m)?;
            }
        }
    }
    Ok(u)
}

/// Parses QASM text and builds its unitary.
pub fn qasm_unitary(text: &str) -> Result<DenseUnitary> {
    let (n, ops) = parse(text)?;
    primitives_unitary(n, &ops)
}
