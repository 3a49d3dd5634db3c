//! Command dispatch and report assembly. Every number in a report is an
//! exact decimal string.

use std::fs;
use std::path::Path;

use nplift::completion::Completion;
use nplift::lift::{
    edge_prime_power_test, edge_restriction, lift_factorization, restrict_to_edge, witness_for_edge,
    Certificate, Lifted, PrimePower, SplitDefect, SplitRequest, Verdict,
};
use nplift::univariate::factor;
use nplift::weier::{find_monic_split, weierstrass_factor, MonicSearch, PadicPoly, PadicVerdict, WeierstrassInput};
use nplift::{
    orthogonal_basis, parse, reducibility_witness, render, Edge, Error, Exec, LiftError, NewtonError,
    NewtonPolyhedron, RingDescriptor, SparsePoly, UniPoly, VarTable, WeierError,
};
use serde_json::{json, Map, Value};

use crate::{Command, Common, Format, Lifting};

pub struct Outcome {
    pub code: u8,
    pub body: Value,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Lib(e.into())
    }
}

type Res = Result<Outcome, Failure>;

fn ok(body: Value) -> Res {
    Ok(Outcome { code: 0, body })
}

fn input<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

pub fn run(cmd: Command) -> (Format, Outcome) {
    let (format, name, result) = match cmd {
        Command::Analyze { common, expr } => (common.format, "analyze", analyze(&common, expr)),
        Command::Restrict { common, edge, seed, expr } => (common.format, "restrict", restrict(&common, edge, seed, expr)),
        Command::Factor { common, lifting, expr } => (common.format, "factor", factor_cmd(&common, &lifting, expr)),
        Command::Weierstrass { common, lifting, expr } => {
            (common.format, "weierstrass", weierstrass(&common, &lifting, expr))
        }
        Command::Padic { prime, prec, seed, format, file, expr } => {
            (format, "padic", padic(prime, prec, seed, file.as_deref(), expr))
        }
        Command::Verify { common, bound, weights, edge, exprs } => {
            (common.format, "verify", verify(&common, bound, weights, edge, exprs))
        }
    };
    let mut outcome = match result {
        Ok(o) => o,
        Err(Failure::Input(msg)) => Outcome {
            code: 3,
            body: json!({ "error": msg }),
        },
        Err(Failure::Lib(e)) => failure(e),
    };
    if let Value::Object(m) = &mut outcome.body {
        let mut full = Map::new();
        full.insert("command".into(), json!(name));
        full.append(m);
        outcome.body = Value::Object(full);
    }
    (format, outcome)
}

/// Library errors: hypothesis violations exit with 2, malformed input with 3.
fn failure(e: Error) -> Outcome {
    let violation = |verdict: &str, detail: String| Outcome {
        code: 2,
        body: json!({ "verdict": verdict, "detail": detail }),
    };
    let lift = |l: &LiftError| -> Option<Outcome> {
        Some(match l {
            LiftError::InvalidSplit(d) => Outcome {
                code: 2,
                body: json!({ "verdict": "InvalidSplit", "reason": defect_name(*d) }),
            },
            LiftError::NotLoose => violation("NotLoose", l.to_string()),
            LiftError::Unsolvable(_) | LiftError::Stalled(_) => violation("Unsolvable", l.to_string()),
            LiftError::NotEdgeHomogeneous | LiftError::NotHomogeneous => violation("InvalidSplit", l.to_string()),
            LiftError::Factor(f) => violation("Inconclusive", f.to_string()),
            _ => return None,
        })
    };
    let found = match &e {
        Error::Lift(l) => lift(l),
        Error::Weier(WeierError::Lift(l)) => lift(l),
        Error::Weier(w @ WeierError::NotDescendant) => Some(violation("NotDescendant", w.to_string())),
        Error::Weier(w @ WeierError::NotMonic) => Some(violation("NotMonic", w.to_string())),
        Error::Weier(w @ WeierError::NotPrepared(_)) => Some(violation("NotPrepared", w.to_string())),
        Error::Weier(w @ WeierError::PrecisionTooLow) => Some(violation("PrecisionTooLow", w.to_string())),
        Error::Weier(WeierError::Factor(f)) | Error::Factor(f) => Some(violation("Inconclusive", f.to_string())),
        _ => None,
    };
    found.unwrap_or_else(|| Outcome {
        code: 3,
        body: json!({ "error": e.to_string() }),
    })
}

fn defect_name(d: SplitDefect) -> &'static str {
    match d {
        SplitDefect::NotCoprime => "NotCoprime",
        SplitDefect::DivisibleByVariable => "DivisibleByVariable",
        SplitDefect::ProductMismatch => "ProductMismatch",
    }
}

// ------------------------------------------------------------ inputs

fn read_exprs(file: Option<&Path>, args: Vec<String>) -> Result<Vec<String>, Failure> {
    let mut out = args;
    if let Some(p) = file {
        let text = match fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => return input(format!("cannot read {}: {e}", p.display())),
        };
        out.extend(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    Ok(out)
}

fn one_expr(common: &Common, expr: Option<String>) -> Result<String, Failure> {
    let mut all = read_exprs(common.file.as_deref(), expr.into_iter().collect())?;
    if all.is_empty() {
        return input("missing expression");
    }
    Ok(all.swap_remove(0))
}

/// The parsed polynomial with its variable tables (ring and graded).
struct Job {
    ring: RingDescriptor,
    vars: VarTable,
    graded: VarTable,
    f: SparsePoly,
}

impl Job {
    fn new(common: &Common, text: &str) -> Result<Self, Failure> {
        let ring: RingDescriptor = common.field.parse()?;
        let vars = match &common.vars {
            Some(v) => VarTable::new(v)?,
            None => VarTable::infer(&[text])?,
        };
        let f = parse(text, &vars, ring)?;
        if f.is_zero() {
            return input("the zero polynomial has no Newton polyhedron");
        }
        let graded = if Completion::of(ring).is_mixed() {
            if vars.index("P").is_some() {
                return input("the name P is reserved for the prime over Z/p^k");
            }
            let mut names = vec!["P".to_string()];
            names.extend(vars.names().iter().cloned());
            VarTable::new(&names)?
        } else {
            vars.clone()
        };
        Ok(Job { ring, vars, graded, f })
    }

    fn comp(&self) -> Completion {
        Completion::of(self.ring)
    }

    fn polyhedron(&self) -> Result<NewtonPolyhedron, Failure> {
        Ok(NewtonPolyhedron::build_with(&self.comp().expand(&self.f), Exec::default())?)
    }

    fn edge(&self, poly: &NewtonPolyhedron, i: usize) -> Result<Edge, Failure> {
        match poly.compact_edges().get(i) {
            Some(e) => Ok(e.clone()),
            None => input(format!("edge index {i} out of range ({} compact edges)", poly.compact_edges().len())),
        }
    }

    fn split(&self, parts: &[String]) -> Result<SplitRequest, Failure> {
        let [g, h] = parts else {
            return input("--split needs two expressions G,H");
        };
        let k = self.comp().residue();
        Ok(SplitRequest {
            g: parse(g, &self.graded, k)?,
            h: parse(h, &self.graded, k)?,
        })
    }

    /// The edge named by `--edge`, or else the compact edge whose restriction
    /// is `G H`.
    fn split_edge(&self, poly: &NewtonPolyhedron, lifting: &Lifting, split: &SplitRequest) -> Result<Edge, Failure> {
        if let Some(i) = lifting.edge {
            return self.edge(poly, i);
        }
        let prod = split.g.multiply(&split.h, None)?;
        poly.compact_edges()
            .iter()
            .find(|e| restrict_to_edge(&self.f, e) == prod)
            .cloned()
            .ok_or(Failure::Lib(LiftError::InvalidSplit(SplitDefect::ProductMismatch).into()))
    }

    fn show(&self, p: &SparsePoly) -> String {
        if p.nvars() == self.graded.len() {
            render(p, &self.graded)
        } else {
            render(p, &self.vars)
        }
    }

    fn header(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("field".into(), json!(self.ring.to_string()));
        m.insert("vars".into(), json!(self.vars.names()));
        m.insert("graded_vars".into(), json!(self.graded.names()));
        m.insert("f".into(), json!(render(&self.f, &self.vars)));
        m
    }
}

fn ints(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn num(x: impl ToString) -> Value {
    json!(x.to_string())
}

fn opt_num(x: Option<i64>) -> Value {
    x.map_or(Value::Null, num)
}

fn edge_json(e: &Edge, index: Option<usize>) -> Value {
    let mut m = Map::new();
    if let Some(i) = index {
        m.insert("index".into(), num(i));
    }
    m.insert("a".into(), ints(&e.a));
    m.insert("b".into(), ints(&e.b));
    m.insert("direction".into(), ints(&e.direction));
    m.insert("loose".into(), json!(e.loose));
    m.insert("descendant".into(), json!(e.descendant));
    Value::Object(m)
}

fn uni(p: &UniPoly) -> String {
    let t = VarTable::new(&["t"]).expect("valid name");
    let poly = SparsePoly::from_terms(
        1,
        p.ring(),
        p.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i64], c.clone())),
    )
    .expect("nonnegative exponents");
    render(&poly, &t)
}

fn power_json(job: &Job, pw: &PrimePower) -> Value {
    json!({
        "F": job.show(&pw.f),
        "k": num(pw.k),
        "unit": num(&pw.unit),
        "binomial": pw.binomial,
    })
}

fn certificate_json(c: &Certificate) -> Value {
    let steps: Vec<Value> = c
        .steps
        .iter()
        .map(|s| {
            json!({
                "weight": ints(&s.weight),
                "offset": ints(&s.offset),
                "dims": { "rows": num(s.rows), "h": num(s.h_cols), "g": num(s.g_cols) },
                "min_before": num(s.before),
                "min_after": opt_num(s.after),
            })
        })
        .collect();
    json!({
        "bound": num(c.bound),
        "working_bound": num(c.working_bound),
        "steps": steps,
        "residual_min_weight": opt_num(c.exit_min_weight),
    })
}

fn lifted_json(job: &Job, split: &SplitRequest, l: &Lifted) -> Value {
    json!({
        "verdict": "ReducibleWithFactors",
        "edge": edge_json(&l.edge, None),
        "weights": ints(l.ws.xi0()),
        "split": { "G": job.show(&split.g), "H": job.show(&split.h) },
        "g": job.show(&l.g),
        "h": job.show(&l.h),
        "bound": num(l.certificate.bound),
        "residual_min_weight": opt_num(l.certificate.exit_min_weight),
        "verified": l.certificate.verified(),
        "certificate": certificate_json(&l.certificate),
    })
}

fn merge(mut head: Map<String, Value>, body: Value) -> Value {
    if let Value::Object(mut m) = body {
        head.append(&mut m);
    }
    Value::Object(head)
}

// ------------------------------------------------------------ commands

fn analyze(common: &Common, expr: Option<String>) -> Res {
    let job = Job::new(common, &one_expr(common, expr)?)?;
    let poly = job.polyhedron()?;
    let edges: Vec<Value> = poly
        .compact_edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut v = edge_json(e, Some(i));
            v["restriction"] = json!(job.show(&restrict_to_edge(&job.f, e)));
            v
        })
        .collect();
    let vertices: Vec<Value> = poly.vertices().iter().map(|v| ints(v)).collect();
    let mut head = job.header();
    head.insert("vertices".into(), Value::Array(vertices));
    head.insert("edges".into(), Value::Array(edges));
    head.insert("loose_edges".into(), num(poly.loose_edges().len()));
    head.insert("polygonal".into(), json!(poly.is_polygonal()));
    ok(Value::Object(head))
}

fn restrict(common: &Common, index: usize, seed: u64, expr: Option<String>) -> Res {
    let job = Job::new(common, &one_expr(common, expr)?)?;
    let poly = job.polyhedron()?;
    let e = job.edge(&poly, index)?;
    let r = edge_restriction(&job.f, &e)?;
    let fac = factor(&r.univariate, seed)?;
    let factors: Vec<Value> = fac
        .factors
        .iter()
        .map(|(q, m)| json!({ "factor": uni(q), "multiplicity": num(m) }))
        .collect();
    let power = edge_prime_power_test(&r, seed)?;
    let mut head = job.header();
    head.insert("edge".into(), edge_json(&e, Some(index)));
    head.insert("weights".into(), ints(r.ws.xi0()));
    head.insert("restriction".into(), json!(job.show(&r.poly)));
    head.insert("content".into(), ints(&r.content));
    head.insert("univariate".into(), json!(uni(&r.univariate)));
    head.insert("factorization".into(), json!({ "unit": num(&fac.unit), "factors": factors }));
    head.insert("prime_power".into(), power.map_or(Value::Null, |p| power_json(&job, &p)));
    ok(Value::Object(head))
}

fn verdict_outcome(job: &Job, v: Verdict) -> Res {
    Ok(match v {
        Verdict::ReducibleWithFactors { split, lifted } => Outcome {
            code: 0,
            body: merge(job.header(), lifted_json(job, &split, &lifted)),
        },
        Verdict::NoLooseEdge => Outcome {
            code: 2,
            body: merge(job.header(), json!({ "verdict": "NoLooseEdge" })),
        },
        Verdict::EdgePrimePower { edge, power } => Outcome {
            code: 2,
            body: merge(
                job.header(),
                json!({ "verdict": "EdgePrimePower", "edge": edge_json(&edge, None), "power": power_json(job, &power) }),
            ),
        },
    })
}

fn factor_cmd(common: &Common, lifting: &Lifting, expr: Option<String>) -> Res {
    let job = Job::new(common, &one_expr(common, expr)?)?;
    if let Some(parts) = &lifting.split {
        let split = job.split(parts)?;
        let poly = job.polyhedron()?;
        let e = job.split_edge(&poly, lifting, &split)?;
        let lifted = lift_factorization(&job.f, &e, &split, lifting.bound)?;
        return verdict_outcome(
            &job,
            Verdict::ReducibleWithFactors {
                split,
                lifted: Box::new(lifted),
            },
        );
    }
    let v = match lifting.edge {
        Some(i) => {
            let poly = job.polyhedron()?;
            witness_for_edge(&job.f, &job.edge(&poly, i)?, lifting.bound, lifting.seed)?
        }
        None => reducibility_witness(&job.f, lifting.bound, lifting.seed, Exec::default())?,
    };
    verdict_outcome(&job, v)
}

fn weierstrass(common: &Common, lifting: &Lifting, expr: Option<String>) -> Res {
    let job = Job::new(common, &one_expr(common, expr)?)?;
    let wi = WeierstrassInput::new(job.f.clone())?;
    let (edge, split) = match &lifting.split {
        Some(parts) => {
            let split = job.split(parts)?;
            let poly = job.polyhedron()?;
            (job.split_edge(&poly, lifting, &split)?, split)
        }
        None => match find_monic_split(&job.f, lifting.seed, Exec::default())? {
            MonicSearch::Found(e, s) => (e, s),
            MonicSearch::PrimePower(e, pw) => {
                return Ok(Outcome {
                    code: 2,
                    body: merge(
                        job.header(),
                        json!({ "verdict": "NoCoprimeSplit", "edge": edge_json(&e, None), "power": power_json(&job, &pw) }),
                    ),
                })
            }
            MonicSearch::NoDescendantEdge => {
                return Ok(Outcome {
                    code: 2,
                    body: merge(job.header(), json!({ "verdict": "NoDescendantLooseEdge" })),
                })
            }
        },
    };
    let out = weierstrass_factor(&wi, &edge, &split, lifting.bound)?;
    let body = json!({
        "verdict": "MonicFactor",
        "edge": edge_json(&out.lifted.edge, None),
        "weights": ints(out.lifted.ws.xi0()),
        "split": { "G": job.show(&split.g), "H": job.show(&split.h) },
        "g": job.show(&out.g),
        "h": job.show(&out.h),
        "u": job.show(&out.u),
        "bound": num(out.bound),
        "residual_min_weight": opt_num(out.exit_min_weight),
        "verified": out.verified(),
        "certificate": certificate_json(&out.lifted.certificate),
    });
    Ok(Outcome {
        code: if out.verified() { 0 } else { 1 },
        body: merge(job.header(), body),
    })
}

fn padic(prime: u32, prec: u32, seed: u64, file: Option<&Path>, expr: Option<String>) -> Res {
    let mut all = read_exprs(file, expr.into_iter().collect())?;
    if all.is_empty() {
        return input("missing expression");
    }
    let text = all.swap_remove(0);
    let vars = VarTable::infer(&[&text])?;
    if vars.len() != 1 {
        return input("expected a polynomial in one variable");
    }
    let f = parse(&text, &vars, RingDescriptor::Rationals)?;
    let mut coeffs = Vec::new();
    for (e, c) in f.terms() {
        let q = c.as_rational().expect("rational");
        if !q.is_integer() {
            return input("coefficients must be integers");
        }
        let j = e[0] as usize;
        coeffs.resize(coeffs.len().max(j + 1), 0.into());
        coeffs[j] = q.to_integer();
    }
    let pp = PadicPoly::new(coeffs, prime, prec)?;
    let rep = nplift::padic_newton_factor(&pp, seed)?;
    let ring = pp.ring();
    let graded = VarTable::new(&["P".to_string(), vars.names()[0].clone()])?;
    let poly = pp.to_poly();
    let mut head = Map::new();
    head.insert("field".into(), json!(ring.to_string()));
    head.insert("vars".into(), json!(vars.names()));
    head.insert("f".into(), json!(render(&poly, &vars)));
    head.insert("points".into(), Value::Array(rep.points.iter().map(|p| ints(p)).collect()));
    head.insert("vertices".into(), Value::Array(rep.vertices.iter().map(|p| ints(p)).collect()));
    let restriction = |e: &Edge| render(&restrict_to_edge(&poly, e), &graded);
    let (code, body) = match &rep.verdict {
        PadicVerdict::Factors { unit, factors, edge } => (
            0,
            json!({
                "verdict": "Factors",
                "edge": edge_json(edge, None),
                "restriction": restriction(edge),
                "unit": num(unit),
                "factors": factors.iter().map(|g| render(g, &vars)).collect::<Vec<_>>(),
            }),
        ),
        PadicVerdict::NoCoprimeSplit { edge, power } => (
            2,
            json!({
                "verdict": "NoCoprimeSplit",
                "edge": edge_json(edge, None),
                "restriction": restriction(edge),
                "power": {
                    "F": render(&power.f, &graded),
                    "k": num(power.k),
                    "unit": num(&power.unit),
                    "binomial": power.binomial,
                },
            }),
        ),
        PadicVerdict::NoLooseEdgeInfo => (2, json!({ "verdict": "NoLooseEdgeInfo" })),
    };
    Ok(Outcome {
        code,
        body: merge(head, body),
    })
}

fn verify(common: &Common, bound: i64, weights: Option<Vec<i64>>, edge: Option<usize>, exprs: Vec<String>) -> Res {
    let all = read_exprs(common.file.as_deref(), exprs)?;
    let [f, g, h] = all.as_slice() else {
        return input("verify needs exactly three expressions f, g, h");
    };
    let ring: RingDescriptor = common.field.parse()?;
    let vars = match &common.vars {
        Some(v) => VarTable::new(v)?,
        None => VarTable::infer(&[f, g, h])?,
    };
    let job = Job {
        ring,
        graded: vars.clone(),
        f: parse(f, &vars, ring)?,
        vars,
    };
    let gp = parse(g, &job.vars, ring)?;
    let hp = parse(h, &job.vars, ring)?;
    let comp = job.comp();
    let n = comp.graded_nvars(job.vars.len());
    let w = match (weights, edge) {
        (Some(w), _) => w,
        (None, Some(i)) => {
            if job.f.is_zero() {
                return Err(NewtonError::ZeroPolynomial.into());
            }
            let poly = job.polyhedron()?;
            let e = job.edge(&poly, i)?;
            orthogonal_basis(&e.direction)?.xi0().to_vec()
        }
        (None, None) => vec![1; n],
    };
    if w.len() != n || w.iter().any(|&x| x <= 0) {
        return input(format!("weights must be {n} positive integers"));
    }
    let r = job.f.try_sub(&gp.multiply(&hp, None)?)?;
    let min = comp.min_weight(&r, &w);
    let pass = min.is_none_or(|m| m > bound);
    let mut head = Map::new();
    head.insert("field".into(), json!(ring.to_string()));
    head.insert("vars".into(), json!(job.vars.names()));
    head.insert("weights".into(), ints(&w));
    head.insert("bound".into(), num(bound));
    head.insert("residual_min_weight".into(), opt_num(min));
    head.insert("pass".into(), json!(pass));
    Ok(Outcome {
        code: if pass { 0 } else { 1 },
        body: Value::Object(head),
    })
}

// ------------------------------------------------------------ text output

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out.trim_end().to_string()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => Some(format!(
            "({})",
            a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x).unwrap_or_default())),
    }
}
