//! Command dispatch for the `dgglue` binary.
//!
//! Every command reads one [`Document`] (see [`crate::json`] for the format)
//! and returns a JSON report. Parameters come from the document's `"params"`
//! object. Commands that build entities put them under `"document"` in the
//! report, with `"params"` preset so the result can be piped into the next
//! command.
//!
//! | command        | params                                                              |
//! |----------------|---------------------------------------------------------------------|
//! | validate       | none; checks every entity                                           |
//! | cohomology     | `complex` (optional, default all)                                   |
//! | totalize       | `cube` (of complexes)                                               |
//! | check-acyclic  | `cube`                                                              |
//! | stack, extend  | `first`, `second`, `output`                                         |
//! | gac-hom        | `cube`, optional `source`, `target` as `"i:x"` labels               |
//! | glue           | `cube`, `objects` (twisted complexes over the cube), `output`       |
//! | check-qff      | `cube`                                                              |
//! | hom-iso        | `cube`                                                              |
//! | ext-table      | `category`                                                          |
//! | auslander      | `algebra`, `output`                                                 |
//! | refine         | `algebra`, `ideal` (generating vectors), `d`, `output`              |
//! | refine-square  | `source`, `target`, `map` (rows), `ideal_source`, `ideal_target`, `d`, `output` |
//! | proj-dgcat     | `algebra`, `output`                                                 |

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::complex::Complex;
use crate::dgcat::{ext_table, validate_category, validate_functor, DgCat, DgCategory};
use crate::error::{Error, Result};
use crate::filtlab::{self, FilteredAlgebra, RefinementData};
use crate::glue::{check_qff, glue, hom_iso_check, Gac};
use crate::hypercube::{ComplexCube, DgCube};
use crate::json::{category_to_json, complex_to_json, parse_matrix, parse_vector, Document, VERSION};
use crate::linalg::Matrix;
use crate::twisted::validate_twisted;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Validate,
    Cohomology,
    Totalize,
    CheckAcyclic,
    Stack,
    Extend,
    GacHom,
    Glue,
    CheckQff,
    HomIso,
    ExtTable,
    Auslander,
    Refine,
    RefineSquare,
    ProjDgcat,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::Validate,
        Command::Cohomology,
        Command::Totalize,
        Command::CheckAcyclic,
        Command::Stack,
        Command::Extend,
        Command::GacHom,
        Command::Glue,
        Command::CheckQff,
        Command::HomIso,
        Command::ExtTable,
        Command::Auslander,
        Command::Refine,
        Command::RefineSquare,
        Command::ProjDgcat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Totalize => "totalize",
            Command::CheckAcyclic => "check-acyclic",
            Command::Stack => "stack",
            Command::Extend => "extend",
            Command::GacHom => "gac-hom",
            Command::Glue => "glue",
            Command::CheckQff => "check-qff",
            Command::HomIso => "hom-iso",
            Command::ExtTable => "ext-table",
            Command::Auslander => "auslander",
            Command::Refine => "refine",
            Command::RefineSquare => "refine-square",
            Command::ProjDgcat => "proj-dgcat",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size guards.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Largest allowed total dimension of a vertex-category hom complex.
    pub max_hom_dim: usize,
    /// Largest allowed cube dimension.
    pub max_cube_dim: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options { max_hom_dim: 64, max_cube_dim: 4 }
    }
}

/// Exit status for an error: 1 for bad input, 2 for a violated invariant.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

pub fn error_report(e: &Error) -> Value {
    let kind = match e {
        Error::Input(_) | Error::Json(_) | Error::Io(_) => "input",
        Error::TooLarge(_) => "too-large",
        Error::Invariant(_) => "invariant",
    };
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}

fn param<'a>(doc: &'a Document, key: &str) -> Result<&'a Value> {
    doc.params.get(key).ok_or_else(|| Error::Input(format!("missing parameter {key:?}")))
}

fn param_str(doc: &Document, key: &str) -> Result<String> {
    param(doc, key)?.as_str().map(str::to_string).ok_or_else(|| Error::Input(format!("parameter {key:?} must be a string")))
}

fn param_str_or(doc: &Document, key: &str, default: &str) -> Result<String> {
    match doc.params.get(key) {
        Some(_) => param_str(doc, key),
        None => Ok(default.to_string()),
    }
}

fn param_usize(doc: &Document, key: &str) -> Result<usize> {
    param(doc, key)?.as_u64().map(|x| x as usize).ok_or_else(|| Error::Input(format!("parameter {key:?} must be a non-negative integer")))
}

fn param_vectors(doc: &Document, key: &str, len: usize) -> Result<Matrix> {
    let v = param(doc, key)?;
    let rows = v.as_array().ok_or_else(|| Error::Input(format!("parameter {key:?} must be a list of vectors")))?;
    let cols = rows.iter().map(|r| parse_vector(doc.field, r, len, key)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(doc.field, len, &cols))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn cohomology_json(h: &BTreeMap<i32, usize>) -> Value {
    Value::Object(h.iter().map(|(k, d)| (k.to_string(), json!(d))).collect())
}

fn guard_category(c: &DgCategory, what: &str, opts: &Options) -> Result<()> {
    let m = c.max_hom_dim();
    if m > opts.max_hom_dim {
        return Err(Error::TooLarge(format!("{what} has a hom complex of dimension {m} (limit {})", opts.max_hom_dim)));
    }
    Ok(())
}

fn guard_cube_dim(n: usize, opts: &Options) -> Result<()> {
    if n > opts.max_cube_dim {
        return Err(Error::TooLarge(format!("cube dimension {n} exceeds the limit {}", opts.max_cube_dim)));
    }
    Ok(())
}

fn dg_cube(doc: &Document, name: &str, opts: &Options) -> Result<DgCube> {
    let c = doc.dg_cube(name)?;
    guard_cube_dim(c.n(), opts)?;
    for (m, v) in &c.raw.vertices {
        guard_category(v, &format!("vertex {m} of {name}"), opts)?;
    }
    Ok(c)
}

fn complex_cube(doc: &Document, name: &str, opts: &Options) -> Result<ComplexCube> {
    let c = doc.complex_cube(name)?;
    guard_cube_dim(c.n(), opts)?;
    Ok(c)
}

fn cube_param(doc: &Document) -> Result<String> {
    param_str(doc, "cube")
}

fn emitted(doc: Document, params: Value) -> Value {
    let mut d = doc;
    if let Value::Object(p) = params {
        d.params = p;
    }
    d.to_json()
}

/// Runs one command; the report starts with the command name and format version.
pub fn run(cmd: Command, doc: &Document, opts: &Options) -> Result<Value> {
    let body = match cmd {
        Command::Validate => validate(doc)?,
        Command::Cohomology => cohomology(doc)?,
        Command::Totalize => totalize(doc, opts)?,
        Command::CheckAcyclic => check_acyclic(doc, opts)?,
        Command::Stack | Command::Extend => stack_extend(doc, cmd, opts)?,
        Command::GacHom => gac_hom(doc, opts)?,
        Command::Glue => glue_cmd(doc, opts)?,
        Command::CheckQff => qff(doc, opts)?,
        Command::HomIso => hom_iso(doc, opts)?,
        Command::ExtTable => ext(doc, opts)?,
        Command::Auslander => auslander(doc)?,
        Command::Refine => refine(doc)?,
        Command::RefineSquare => refine_square(doc, opts)?,
        Command::ProjDgcat => proj(doc)?,
    };
    let mut out = Map::new();
    out.insert("command".into(), json!(cmd.name()));
    out.insert("version".into(), json!(VERSION));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Ok(Value::Object(out))
}

fn entity(kind: &str, name: &str, r: std::result::Result<Value, String>) -> Value {
    match r {
        Ok(details) => {
            json!({ "kind": kind, "name": name, "ok": details.get("ok").and_then(Value::as_bool).unwrap_or(true), "details": details })
        }
        Err(e) => json!({ "kind": kind, "name": name, "ok": false, "details": { "error": e } }),
    }
}

fn validate(doc: &Document) -> Result<Value> {
    let mut out = Vec::new();
    for (name, c) in &doc.complexes {
        out.push(entity("complex", name, c.check_d_squared().map(|_| json!({ "ok": true })).map_err(|e| e.to_string())));
    }
    for (name, m) in &doc.maps {
        let closed = m.map.is_closed();
        out.push(entity("map", name, Ok(json!({ "ok": true, "chain_map": closed }))));
    }
    for (name, c) in &doc.categories {
        out.push(entity("category", name, Ok(to_value(&validate_category(c)))));
    }
    for (name, f) in &doc.functors {
        let r = validate_functor(doc.category(&f.source)?, doc.category(&f.target)?, &f.functor);
        out.push(entity("functor", name, Ok(to_value(&r))));
    }
    for name in doc.cubes.keys() {
        let r = if doc.is_complex_cube(name)? {
            doc.complex_cube(name).map(|c| json!({ "ok": true, "kind": "complexes", "n": c.n() }))
        } else {
            doc.dg_cube(name).map(|c| json!({ "ok": true, "kind": "categories", "n": c.n() }))
        };
        out.push(entity("cube", name, r.map_err(|e| e.to_string())));
    }
    for (name, t) in &doc.twisted {
        let r = if let Some(c) = doc.categories.get(&t.category) {
            validate_twisted(c, &t.complex)
        } else {
            doc.dg_cube(&t.category).and_then(|cube| {
                let gac = Gac::new(&cube)?;
                validate_twisted(&gac, &t.complex)
            })
        };
        out.push(entity("twisted", name, r.map(|_| json!({ "ok": true })).map_err(|e| e.to_string())));
    }
    for (name, a) in &doc.algebras {
        out.push(entity("algebra", name, Ok(to_value(&filtlab::validate_filtration(a)))));
    }
    for (name, m) in &doc.modules {
        let r = m.module.validate(doc.algebra(&m.algebra)?);
        out.push(entity("module", name, Ok(to_value(&r))));
    }
    let ok = out.iter().all(|e| e["ok"] == json!(true));
    Ok(json!({ "ok": ok, "entities": out }))
}

fn cohomology(doc: &Document) -> Result<Value> {
    let names: Vec<String> = match doc.params.get("complex") {
        Some(_) => vec![param_str(doc, "complex")?],
        None => doc.complexes.keys().cloned().collect(),
    };
    let mut out = Map::new();
    for n in names {
        let c = doc.complex(&n)?;
        c.check_d_squared()?;
        out.insert(
            n,
            json!({ "cohomology": cohomology_json(&c.cohomology()), "acyclic": c.is_acyclic(), "euler_characteristic": c.euler_characteristic() }),
        );
    }
    Ok(json!({ "complexes": out }))
}

fn totalize(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    if !doc.is_complex_cube(&name)? {
        return Err(Error::Input(format!("totalize needs a cube of complexes; {name} has categories")));
    }
    let c = complex_cube(doc, &name, opts)?;
    let t = c.totalize();
    let h = t.cohomology();
    let mut out = Map::new();
    out.insert("n".into(), json!(c.n()));
    out.insert("total".into(), complex_to_json(&t));
    out.insert("cohomology".into(), cohomology_json(&h));
    out.insert("acyclic".into(), json!(h.is_empty()));
    if c.n() == 1 {
        let cone = Complex::cone(c.edge(0, 0))?;
        out.insert("cone_cohomology".into(), cohomology_json(&cone.cohomology()));
        out.insert("equals_cone".into(), json!(cone.same_as(&t)));
    }
    Ok(Value::Object(out))
}

fn sorted_pairs<T, F: Fn(&T) -> (String, String)>(mut v: Vec<T>, key: F) -> Vec<T> {
    v.sort_by_key(|p| key(p));
    v
}

fn check_acyclic(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    if doc.is_complex_cube(&name)? {
        let c = complex_cube(doc, &name, opts)?;
        let h = c.totalize().cohomology();
        return Ok(json!({ "kind": "complexes", "acyclic": h.is_empty(), "cohomology": cohomology_json(&h) }));
    }
    let c = dg_cube(doc, &name, opts)?;
    let mut r = c.check_acyclic()?;
    r.pairs = sorted_pairs(r.pairs, |p| (p.source.clone(), p.target.clone()));
    let mut v = to_value(&r);
    v["kind"] = json!("categories");
    Ok(v)
}

fn stack_extend(doc: &Document, cmd: Command, opts: &Options) -> Result<Value> {
    let (a, b) = (param_str(doc, "first")?, param_str(doc, "second")?);
    let default = if cmd == Command::Stack { "stacked" } else { "extended" };
    let output = param_str_or(doc, "output", default)?;
    let mut d = Document::new(doc.field);
    let (inputs, acyclic) = if doc.is_complex_cube(&a)? && doc.is_complex_cube(&b)? {
        let (x, y) = (complex_cube(doc, &a, opts)?, complex_cube(doc, &b, opts)?);
        let r = if cmd == Command::Stack { ComplexCube::stack(&x, &y)? } else { ComplexCube::extend(&x, &y)? };
        guard_cube_dim(r.n(), opts)?;
        d.add_complex_cube(&output, &r)?;
        ([x.is_acyclic(), y.is_acyclic()], r.is_acyclic())
    } else {
        let (x, y) = (dg_cube(doc, &a, opts)?, dg_cube(doc, &b, opts)?);
        let r = if cmd == Command::Stack { DgCube::stack(&x, &y)? } else { DgCube::extend(&x, &y)? };
        guard_cube_dim(r.n(), opts)?;
        d.add_dg_cube(&output, &r)?;
        ([x.check_acyclic()?.acyclic, y.check_acyclic()?.acyclic], r.check_acyclic()?.acyclic)
    };
    Ok(json!({
        "inputs_acyclic": { a: inputs[0], b: inputs[1] },
        "acyclic": acyclic,
        "document": emitted(d, json!({ "cube": output })),
    }))
}

fn gac_hom(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    let cube = dg_cube(doc, &name, opts)?;
    let gac = Gac::new(&cube)?;
    let n = gac.num_objects();
    let labels: Vec<String> = (0..n).map(|a| gac.label(a)).collect();
    let find = |key: &str| -> Result<Option<usize>> {
        match doc.params.get(key) {
            None => Ok(None),
            Some(_) => {
                let l = param_str(doc, key)?;
                labels.iter().position(|x| *x == l).map(Some).ok_or_else(|| Error::Input(format!("unknown Gac object {l:?}")))
            }
        }
    };
    let (s, t) = (find("source")?, find("target")?);
    let pairs: Vec<(usize, usize)> =
        (0..n * n).map(|x| (x / n, x % n)).filter(|&(a, b)| s.is_none_or(|s| s == a) && t.is_none_or(|t| t == b)).collect();
    let single = s.is_some() && t.is_some();
    let rows: Vec<Value> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let h = gac.hom(a, b);
            let mut v = json!({ "source": labels[a], "target": labels[b], "cohomology": cohomology_json(&h.cohomology()) });
            if single {
                v["complex"] = complex_to_json(h);
            }
            v
        })
        .collect();
    let rows = sorted_pairs(rows, |v| (v["source"].as_str().unwrap_or("").into(), v["target"].as_str().unwrap_or("").into()));
    Ok(json!({ "objects": labels, "pairs": rows }))
}

fn glue_cmd(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    let cube = dg_cube(doc, &name, opts)?;
    let output = param_str_or(doc, "output", "glue")?;
    let list = param(doc, "objects")?.as_array().ok_or_else(|| Error::Input("parameter \"objects\" must be a list".into()))?;
    let mut objs = Vec::new();
    for v in list {
        let t = v.as_str().ok_or_else(|| Error::Input("objects must be names of twisted complexes".into()))?;
        let e = doc.twisted.get(t).ok_or_else(|| Error::Input(format!("unknown twisted complex {t:?}")))?;
        if e.category != name {
            return Err(Error::Input(format!("twisted complex {t} lives over {}, not {name}", e.category)));
        }
        objs.push(e.complex.clone());
    }
    let g = glue(&cube, objs)?;
    guard_category(&g, "the glued category", opts)?;
    let ext = ext_rows(&g);
    let mut d = Document::new(doc.field);
    d.add_category(&output, g)?;
    Ok(json!({ "ext": ext, "document": emitted(d, json!({ "category": output })) }))
}

fn qff(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    let cube = dg_cube(doc, &name, opts)?;
    let mut r = check_qff(&cube)?;
    r.pairs = sorted_pairs(r.pairs, |p| (p.source.clone(), p.target.clone()));
    Ok(to_value(&r))
}

fn hom_iso(doc: &Document, opts: &Options) -> Result<Value> {
    let name = cube_param(doc)?;
    let cube = dg_cube(doc, &name, opts)?;
    let a0 = cube.vertex(0);
    let n = a0.num_objects();
    let rows = (0..n * n)
        .into_par_iter()
        .map(|t| {
            let (a, b) = (t / n, t % n);
            let r = hom_iso_check(&cube, a, b)?;
            let mut v = to_value(&r);
            v["source"] = json!(a0.label(a));
            v["target"] = json!(a0.label(b));
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = sorted_pairs(rows, |v| (v["source"].as_str().unwrap_or("").into(), v["target"].as_str().unwrap_or("").into()));
    let ok = rows.iter().all(|v| v["ok"] == json!(true));
    Ok(json!({ "ok": ok, "pairs": rows }))
}

fn ext_rows<C: DgCat + ?Sized>(c: &C) -> Vec<Value> {
    let rows: Vec<Value> = ext_table(c)
        .into_iter()
        .map(|((a, b), h)| json!({ "source": c.label(a), "target": c.label(b), "cohomology": cohomology_json(&h) }))
        .collect();
    sorted_pairs(rows, |v| (v["source"].as_str().unwrap_or("").into(), v["target"].as_str().unwrap_or("").into()))
}

fn ext(doc: &Document, opts: &Options) -> Result<Value> {
    let name = param_str(doc, "category")?;
    let c = doc.category(&name)?;
    guard_category(c, &name, opts)?;
    Ok(json!({ "pairs": ext_rows(c) }))
}

fn auslander(doc: &Document) -> Result<Value> {
    let name = param_str(doc, "algebra")?;
    let output = param_str_or(doc, "output", "auslander")?;
    let r = doc.algebra(&name)?;
    let a = filtlab::auslander(r)?;
    let end = filtlab::end_comparison(r)?;
    let mut d = Document::new(doc.field);
    d.add_category(&output, a.algebra.clone())?;
    Ok(json!({
        "n": a.n,
        "block_dims": a.block_dims(),
        "total_dim": a.total_dim(),
        "end_comparison": to_value(&end),
        "document": emitted(d, json!({ "category": output })),
    }))
}

fn ideal_param(doc: &Document, r: &FilteredAlgebra, key: &str) -> Result<Matrix> {
    let gens = param_vectors(doc, key, r.dim())?;
    Ok(r.product(&r.whole(), &gens))
}

fn refine(doc: &Document) -> Result<Value> {
    let name = param_str(doc, "algebra")?;
    let output = param_str_or(doc, "output", "refined")?;
    let r = doc.algebra(&name)?;
    let d = param_usize(doc, "d")?;
    let ideal = ideal_param(doc, r, "ideal")?;
    let g = filtlab::refine(r, &ideal, d)?;
    let dims: Vec<usize> = g.filtration.iter().map(Matrix::cols).collect();
    let mut out = Document::new(doc.field);
    out.add_algebra(&output, g)?;
    Ok(json!({
        "length": [r.n(), d * r.n()],
        "filtration_dims": dims,
        "document": emitted(out, json!({ "algebra": output })),
    }))
}

fn refine_square(doc: &Document, opts: &Options) -> Result<Value> {
    let (sn, tn) = (param_str(doc, "source")?, param_str(doc, "target")?);
    let (r, s) = (doc.algebra(&sn)?, doc.algebra(&tn)?);
    let output = param_str_or(doc, "output", "square")?;
    let f = parse_matrix(doc.field, param(doc, "map")?, s.dim(), r.dim(), "parameter \"map\"")?;
    let data = RefinementData {
        r: r.clone(),
        s: s.clone(),
        f,
        ideal_r: ideal_param(doc, r, "ideal_source")?,
        ideal_s: ideal_param(doc, s, "ideal_target")?,
        d: param_usize(doc, "d")?,
    };
    let cube = filtlab::refinement_square(&data)?;
    for (m, v) in &cube.raw.vertices {
        guard_category(v, &format!("vertex {m}"), opts)?;
    }
    let mut d = Document::new(doc.field);
    d.add_dg_cube(&output, &cube)?;
    Ok(json!({
        "objects": cube.raw.vertices.values().map(|v| v.num_objects()).collect::<Vec<_>>(),
        "document": emitted(d, json!({ "cube": output })),
    }))
}

fn proj(doc: &Document) -> Result<Value> {
    let name = param_str(doc, "algebra")?;
    let output = param_str_or(doc, "output", "proj")?;
    let c = filtlab::proj_dgcat(doc.algebra(&name)?)?;
    let n = c.num_objects();
    let dims: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| c.hom(a, b).total_dim()).collect()).collect();
    let mut d = Document::new(doc.field);
    d.add_category(&output, c)?;
    Ok(json!({ "hom_dims": dims, "document": emitted(d, json!({ "category": output })) }))
}

/// The category as JSON, for callers that hold a category outside a document.
pub fn category_json(c: &DgCategory) -> Value {
    category_to_json(c, Some(c.tables()))
}
