//! JSON documents: a field, named entities, and command parameters.
//!
//! Format, version 1. Every collection is an object keyed by entity name;
//! entities refer to each other by name and names must be unique across
//! collections.
//!
//! ```text
//! {
//!   "version": 1,
//!   "field": "Q" | {"Fp": p},
//!   "complexes":  { name: Complex },
//!   "maps":       { name: {"source": cx, "target": cx, "degree": d, "comps": {"k": Matrix}} },
//!   "categories": { name: Category },
//!   "functors":   { name: {"source": cat, "target": cat, "objects": [target label per source object],
//!                          "hom": {"a→b": Matrix}} },
//!   "cubes":      { name: {"n": n, "vertices": {"[0,2]": entity}, "edges": {"[0],2": entity}} },
//!   "twisted":    { name: {"category": cat or cube, "terms": [{"obj": label, "shift": k}],
//!                          "delta": {"i,j": Vector}} },
//!   "algebras":   { name: {"labels": [..], "mult": {"i,j": Vector}, "unit": Vector,
//!                          "filtration": [[Vector, ..], ..]} },
//!   "modules":    { name: {"algebra": alg, "dims": [..], "t": {"k": Matrix}, "act": {"b,k": Matrix}} },
//!   "params":     { .. }
//! }
//! ```
//!
//! * Scalars are strings `"a/b"` or `"a"` over ℚ and integers in `[0, p)` over 𝔽_p;
//!   plain JSON integers are accepted for both.
//! * A Matrix is a list of rows. A Vector is a list of scalars.
//! * Complex: `{"window": [lo, hi], "dims": {"k": n}, "diff": {"k": Matrix}}` where
//!   `diff["k"]` maps degree `k` to `k + 1`; missing entries are zero.
//! * Category: `{"objects": [labels], "hom": {"a→b": Complex}, "comp": {"a→b→c": [[g, f, k, s], ..]},
//!   "ids": {"a": Vector}}`. An entry `[g, f, k, s]` says that basis vector `g` of `hom(b, c)`
//!   composed with basis vector `f` of `hom(a, b)` has coefficient `s` on basis vector `k` of
//!   `hom(a, c)`; bases are the total bases of the hom complexes, lowest degree first.
//! * Cube vertices are keyed by the sorted coordinate list of the mask, edges by
//!   `"[mask],l"` for the edge from `I` to `I ∪ {l}`. A cube whose vertices are complexes
//!   (edges: maps) is a cube of complexes, one whose vertices are categories (edges: functors)
//!   is a cube of dg categories.
//! * Twisted complexes over a cube live over its `Gac`, whose objects are labelled `"i:x"`
//!   for object `x` of the vertex `{i}`. `delta["i,j"]` (`i < j`) is an element of the total
//!   basis of `hom(obj_j, obj_i)`.
//! * Algebra filtrations list spanning vectors of `F^0, F^-1, …, F^-n`. Module actions are
//!   indexed by the adapted basis of the algebra (see `FilteredAlgebra::adapted`): `act["b,k"]`
//!   maps index `k` (degree `-k`) to index `k + level(b)`, `t["k"]` maps index `k + 1` to `k`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::complex::{Complex, GradedMap};
use crate::dgcat::{DgCat, DgCategory, DgFunctor, SparseVec, Table};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::filtlab::{FilteredAlgebra, GradedModule};
use crate::glue::Gac;
use crate::hypercube::{bit, ComplexCube, DgCube};
use crate::linalg::Matrix;
use crate::twisted::{ShiftedObject, TwistedComplex};

pub const VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub map: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: DgFunctor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeEntry {
    pub n: usize,
    pub vertices: BTreeMap<u32, String>,
    pub edges: BTreeMap<(u32, usize), String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedEntry {
    pub category: String,
    pub complex: TwistedComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleEntry {
    pub algebra: String,
    pub module: GradedModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: Field,
    pub complexes: BTreeMap<String, Complex>,
    pub maps: BTreeMap<String, MapEntry>,
    pub categories: BTreeMap<String, DgCategory>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub cubes: BTreeMap<String, CubeEntry>,
    pub twisted: BTreeMap<String, TwistedEntry>,
    pub algebras: BTreeMap<String, FilteredAlgebra>,
    pub modules: BTreeMap<String, ModuleEntry>,
    pub params: Map<String, Value>,
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Input(format!("{what}: expected an object")))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Input(format!("{what}: expected an array")))
}

fn field_of<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::Input(format!("{what}: missing \"{key}\"")))
}

fn string(v: &Value, what: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| Error::Input(format!("{what}: expected a string")))
}

fn int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Input(format!("{what}: expected an integer")))
}

fn uint(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Input(format!("{what}: expected a non-negative integer")))
}

pub fn field_to_json(f: Field) -> Value {
    match f {
        Field::Rational => json!("Q"),
        Field::Prime(p) => json!({ "Fp": p }),
    }
}

pub fn parse_field(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rational),
        Value::Object(m) => match m.get("Fp").and_then(Value::as_u64) {
            Some(p) => Field::prime(p),
            None => bad("field: expected \"Q\" or {\"Fp\": p}"),
        },
        _ => bad("field: expected \"Q\" or {\"Fp\": p}"),
    }
}

pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => field.parse(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.int(i)),
            None => field.parse(&n.to_string()),
        },
        _ => bad(format!("malformed scalar {v}")),
    }
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn parse_vector(field: Field, v: &Value, len: usize, what: &str) -> Result<Vec<Scalar>> {
    let a = arr(v, what)?;
    if a.len() != len {
        return bad(format!("{what}: expected {len} entries, found {}", a.len()));
    }
    a.iter().map(|x| parse_scalar(field, x)).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_to_json(m.row(r))).collect())
}

pub fn parse_matrix(field: Field, v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
    let a = arr(v, what)?;
    if a.len() != rows {
        return bad(format!("{what}: expected {rows} rows, found {}", a.len()));
    }
    let data = a.iter().map(|r| parse_vector(field, r, cols, what)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(field, cols, data))
}

pub fn complex_to_json(c: &Complex) -> Value {
    let mut dims = Map::new();
    let mut diff = Map::new();
    for k in c.degrees() {
        dims.insert(k.to_string(), json!(c.dim(k)));
        if k < c.hi() {
            diff.insert(k.to_string(), matrix_to_json(c.d_ref(k).expect("inside the window")));
        }
    }
    json!({ "window": [c.lo(), c.hi()], "dims": dims, "diff": diff })
}

pub fn parse_complex(field: Field, v: &Value, what: &str) -> Result<Complex> {
    let m = obj(v, what)?;
    let w = arr(field_of(m, "window", what)?, what)?;
    if w.len() != 2 {
        return bad(format!("{what}: window must be [lo, hi]"));
    }
    let (lo, hi) = (int(&w[0], what)? as i32, int(&w[1], what)? as i32);
    if hi < lo - 1 {
        return bad(format!("{what}: empty window must be [lo, lo-1]"));
    }
    let dm = obj(field_of(m, "dims", what)?, what)?;
    let mut dims = Vec::new();
    for k in lo..=hi {
        dims.push(match dm.get(&k.to_string()) {
            Some(x) => uint(x, what)?,
            None => 0,
        });
    }
    for key in dm.keys() {
        match key.parse::<i32>() {
            Ok(k) if (lo..=hi).contains(&k) => {}
            _ => return bad(format!("{what}: degree {key:?} outside the window")),
        }
    }
    let empty = Map::new();
    let df = match m.get("diff") {
        Some(d) => obj(d, what)?,
        None => &empty,
    };
    let mut diffs = Vec::new();
    for k in lo..hi {
        let (r, c) = (dims[(k - lo + 1) as usize], dims[(k - lo) as usize]);
        diffs.push(match df.get(&k.to_string()) {
            Some(x) => parse_matrix(field, x, r, c, &format!("{what} d^{k}"))?,
            None => Matrix::zeros(field, r, c),
        });
    }
    for key in df.keys() {
        match key.parse::<i32>() {
            Ok(k) if (lo..hi).contains(&k) => {}
            _ => return bad(format!("{what}: differential {key:?} outside the window")),
        }
    }
    Complex::new_unchecked(field, lo, dims, diffs)
}

fn pair_key(a: &str, b: &str) -> String {
    format!("{a}→{b}")
}

pub fn category_to_json<C: DgCat + ?Sized>(c: &C, tables: Option<&std::collections::HashMap<(usize, usize, usize), Table>>) -> Value {
    let n = c.num_objects();
    let labels: Vec<String> = (0..n).map(|a| c.label(a)).collect();
    let mut hom = Map::new();
    for a in 0..n {
        for b in 0..n {
            hom.insert(pair_key(&labels[a], &labels[b]), complex_to_json(c.hom(a, b)));
        }
    }
    let mut comp = Map::new();
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let entries: Vec<Value> = match tables {
                    Some(t) => match t.get(&(a, b, cc)) {
                        Some(tab) => table_entries(tab),
                        None => continue,
                    },
                    None => {
                        let (g, f) = (c.hom(b, cc).total_dim(), c.hom(a, b).total_dim());
                        let tab = Table::build(c.field(), g, f, c.hom(a, cc).total_dim(), |x, y| c.compose(a, b, cc, x, y));
                        table_entries(&tab)
                    }
                };
                comp.insert(format!("{}→{}→{}", labels[a], labels[b], labels[cc]), Value::Array(entries));
            }
        }
    }
    let mut ids = Map::new();
    for (a, l) in labels.iter().enumerate() {
        ids.insert(l.clone(), vector_to_json(&c.identity(a)));
    }
    json!({ "objects": labels, "hom": hom, "comp": comp, "ids": ids })
}

fn table_entries(t: &Table) -> Vec<Value> {
    let mut out = Vec::new();
    for g in 0..t.n1 {
        for f in 0..t.n2 {
            for (k, s) in t.get(g, f) {
                out.push(json!([g, f, k, s.to_json()]));
            }
        }
    }
    out
}

fn check_label(l: &str, what: &str) -> Result<()> {
    if l.is_empty() || l.contains('→') {
        return bad(format!("{what}: object label {l:?} is empty or contains '→'"));
    }
    Ok(())
}

pub fn parse_category(field: Field, v: &Value, what: &str) -> Result<DgCategory> {
    let m = obj(v, what)?;
    let labels: Vec<String> = arr(field_of(m, "objects", what)?, what)?.iter().map(|x| string(x, what)).collect::<Result<_>>()?;
    for (i, l) in labels.iter().enumerate() {
        check_label(l, what)?;
        if labels[..i].contains(l) {
            return bad(format!("{what}: duplicate object {l:?}"));
        }
    }
    let n = labels.len();
    let index = |l: &str| labels.iter().position(|x| x == l);
    let hm = obj(field_of(m, "hom", what)?, what)?;
    let mut homs = Vec::with_capacity(n * n);
    for a in &labels {
        for b in &labels {
            let key = pair_key(a, b);
            homs.push(match hm.get(&key) {
                Some(x) => parse_complex(field, x, &format!("{what} hom {key}"))?,
                None => Complex::zero(field),
            });
        }
    }
    for key in hm.keys() {
        match key.split_once('→') {
            Some((a, b)) if index(a).is_some() && index(b).is_some() => {}
            _ => return bad(format!("{what}: hom key {key:?} does not name two objects")),
        }
    }
    let mut comp = std::collections::HashMap::new();
    if let Some(cm) = m.get("comp") {
        for (key, entries) in obj(cm, what)? {
            let parts: Vec<&str> = key.split('→').collect();
            let idx: Vec<usize> = parts.iter().filter_map(|p| index(p)).collect();
            if parts.len() != 3 || idx.len() != 3 {
                return bad(format!("{what}: composition key {key:?} does not name three objects"));
            }
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            let (n1, n2, out) = (homs[b * n + c].total_dim(), homs[a * n + b].total_dim(), homs[a * n + c].total_dim());
            let mut dense: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); n1 * n2];
            for e in arr(entries, what)? {
                let e = arr(e, what)?;
                if e.len() != 4 {
                    return bad(format!("{what}: composition entry must be [g, f, k, s]"));
                }
                let (g, f, k) = (uint(&e[0], what)?, uint(&e[1], what)?, uint(&e[2], what)?);
                if g >= n1 || f >= n2 || k >= out {
                    return bad(format!("{what}: composition entry out of range in {key:?}"));
                }
                let s = parse_scalar(field, &e[3])?;
                let slot = dense[g * n2 + f].entry(k).or_insert_with(|| field.zero());
                *slot = &*slot + &s;
            }
            let entries: Vec<SparseVec> = dense.into_iter().map(|m| m.into_iter().filter(|(_, s)| !s.is_zero()).collect()).collect();
            comp.insert((a, b, c), Table { n1, n2, out, entries });
        }
    }
    let im = obj(field_of(m, "ids", what)?, what)?;
    let mut ids = Vec::with_capacity(n);
    for (a, l) in labels.iter().enumerate() {
        let v = field_of(im, l, &format!("{what} ids"))?;
        ids.push(parse_vector(field, v, homs[a * n + a].total_dim(), &format!("{what} id of {l}"))?);
    }
    DgCategory::new(field, labels, homs, comp, ids)
}

fn mask_key(m: u32) -> String {
    let coords: Vec<String> = (0..32).filter(|l| m & (1 << l) != 0).map(|l: u32| l.to_string()).collect();
    format!("[{}]", coords.join(","))
}

fn parse_mask(s: &str, n: usize, what: &str) -> Result<u32> {
    let inner = s.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']'));
    let Some(inner) = inner else { return bad(format!("{what}: vertex key {s:?} is not a list")) };
    let mut m = 0u32;
    let mut last: Option<usize> = None;
    for p in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let l: usize = p.parse().map_err(|_| Error::Input(format!("{what}: bad coordinate {p:?}")))?;
        if l >= n || last.is_some_and(|x| x >= l) {
            return bad(format!("{what}: vertex key {s:?} is not a sorted list of coordinates below {n}"));
        }
        last = Some(l);
        m |= bit(l);
    }
    Ok(m)
}

impl Document {
    pub fn new(field: Field) -> Document {
        Document {
            field,
            complexes: BTreeMap::new(),
            maps: BTreeMap::new(),
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            cubes: BTreeMap::new(),
            twisted: BTreeMap::new(),
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            params: Map::new(),
        }
    }

    pub fn parse(text: &str, default_field: Option<Field>) -> Result<Document> {
        let v: Value = serde_json::from_str(text)?;
        Document::from_json(&v, default_field)
    }

    /// Accepts a document, or a report carrying one under `"document"`.
    pub fn from_json(v: &Value, default_field: Option<Field>) -> Result<Document> {
        let top = obj(v, "document")?;
        if let Some(inner) = top.get("document") {
            if top.contains_key("command") {
                return Document::from_json(inner, default_field);
            }
        }
        if let Some(ver) = top.get("version") {
            if ver.as_u64() != Some(VERSION) {
                return bad(format!("unsupported document version {ver}"));
            }
        }
        let field = match (top.get("field"), default_field) {
            (Some(f), None) => parse_field(f)?,
            (Some(f), Some(d)) => {
                let f = parse_field(f)?;
                if f != d {
                    return bad(format!("document field {f} differs from --field {d}"));
                }
                f
            }
            (None, Some(d)) => d,
            (None, None) => Field::Rational,
        };
        const KNOWN: [&str; 12] = [
            "version",
            "field",
            "complexes",
            "maps",
            "categories",
            "functors",
            "cubes",
            "twisted",
            "algebras",
            "modules",
            "params",
            "$comment",
        ];
        for k in top.keys() {
            if !KNOWN.contains(&k.as_str()) {
                return bad(format!("unknown top-level key {k:?}"));
            }
        }
        let mut d = Document::new(field);
        let section = |k: &str| -> Result<Vec<(String, Value)>> {
            match top.get(k) {
                Some(s) => Ok(obj(s, k)?.iter().map(|(a, b)| (a.clone(), b.clone())).collect()),
                None => Ok(Vec::new()),
            }
        };
        for (name, v) in section("complexes")? {
            let c = parse_complex(field, &v, &format!("complex {name}"))?;
            d.insert_name(&name)?;
            d.complexes.insert(name, c);
        }
        for (name, v) in section("maps")? {
            let e = d.parse_map(&v, &format!("map {name}"))?;
            d.insert_name(&name)?;
            d.maps.insert(name, e);
        }
        for (name, v) in section("categories")? {
            let c = parse_category(field, &v, &format!("category {name}"))?;
            d.insert_name(&name)?;
            d.categories.insert(name, c);
        }
        for (name, v) in section("functors")? {
            let e = d.parse_functor(&v, &format!("functor {name}"))?;
            d.insert_name(&name)?;
            d.functors.insert(name, e);
        }
        for (name, v) in section("cubes")? {
            let e = d.parse_cube(&v, &format!("cube {name}"))?;
            d.insert_name(&name)?;
            d.cubes.insert(name, e);
        }
        for (name, v) in section("twisted")? {
            let e = d.parse_twisted(&v, &format!("twisted complex {name}"))?;
            d.insert_name(&name)?;
            d.twisted.insert(name, e);
        }
        for (name, v) in section("algebras")? {
            let a = d.parse_algebra(&v, &format!("algebra {name}"))?;
            d.insert_name(&name)?;
            d.algebras.insert(name, a);
        }
        for (name, v) in section("modules")? {
            let e = d.parse_module(&v, &format!("module {name}"))?;
            d.insert_name(&name)?;
            d.modules.insert(name, e);
        }
        if let Some(p) = top.get("params") {
            d.params = obj(p, "params")?.clone();
        }
        Ok(d)
    }

    fn names(&self) -> impl Iterator<Item = &String> {
        self.complexes
            .keys()
            .chain(self.maps.keys())
            .chain(self.categories.keys())
            .chain(self.functors.keys())
            .chain(self.cubes.keys())
            .chain(self.twisted.keys())
            .chain(self.algebras.keys())
            .chain(self.modules.keys())
    }

    fn insert_name(&self, name: &str) -> Result<()> {
        if name.is_empty() {
            return bad("entity names must be non-empty");
        }
        if self.names().any(|n| n == name) {
            return bad(format!("duplicate entity name {name:?}"));
        }
        Ok(())
    }

    fn parse_map(&self, v: &Value, what: &str) -> Result<MapEntry> {
        let m = obj(v, what)?;
        let source = string(field_of(m, "source", what)?, what)?;
        let target = string(field_of(m, "target", what)?, what)?;
        let s = self.complex(&source)?;
        let t = self.complex(&target)?;
        let degree = match m.get("degree") {
            Some(x) => int(x, what)? as i32,
            None => 0,
        };
        let empty = Map::new();
        let cm = match m.get("comps") {
            Some(c) => obj(c, what)?,
            None => &empty,
        };
        let mut comps = Vec::new();
        for k in s.degrees() {
            let (r, c) = (t.dim(k + degree), s.dim(k));
            comps.push(match cm.get(&k.to_string()) {
                Some(x) => parse_matrix(self.field, x, r, c, &format!("{what} degree {k}"))?,
                None => Matrix::zeros(self.field, r, c),
            });
        }
        for key in cm.keys() {
            match key.parse::<i32>() {
                Ok(k) if s.degrees().contains(&k) => {}
                _ => return bad(format!("{what}: component {key:?} outside the source window")),
            }
        }
        Ok(MapEntry { source, target, map: GradedMap::new(s.clone(), t.clone(), degree, comps)? })
    }

    fn parse_functor(&self, v: &Value, what: &str) -> Result<FunctorEntry> {
        let m = obj(v, what)?;
        let source = string(field_of(m, "source", what)?, what)?;
        let target = string(field_of(m, "target", what)?, what)?;
        let (s, t) = (self.category(&source)?, self.category(&target)?);
        let objs = arr(field_of(m, "objects", what)?, what)?;
        if objs.len() != s.num_objects() {
            return bad(format!("{what}: object map has {} entries for {} objects", objs.len(), s.num_objects()));
        }
        let obj_map = objs
            .iter()
            .map(|o| {
                let l = string(o, what)?;
                t.index_of(&l).ok_or_else(|| Error::Input(format!("{what}: unknown target object {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let hm = obj(field_of(m, "hom", what)?, what)?;
        let n = s.num_objects();
        let mut hom = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let key = pair_key(&s.labels()[a], &s.labels()[b]);
                let (r, c) = (t.hom(obj_map[a], obj_map[b]).total_dim(), s.hom(a, b).total_dim());
                hom.push(match hm.get(&key) {
                    Some(x) => parse_matrix(self.field, x, r, c, &format!("{what} on {key}"))?,
                    None => Matrix::zeros(self.field, r, c),
                });
            }
        }
        Ok(FunctorEntry { source, target, functor: DgFunctor { obj_map, hom } })
    }

    fn parse_cube(&self, v: &Value, what: &str) -> Result<CubeEntry> {
        let m = obj(v, what)?;
        let n = uint(field_of(m, "n", what)?, what)?;
        if n > 16 {
            return bad(format!("{what}: dimension {n} is too large"));
        }
        let mut vertices = BTreeMap::new();
        for (k, x) in obj(field_of(m, "vertices", what)?, what)? {
            vertices.insert(parse_mask(k, n, what)?, string(x, what)?);
        }
        let mut edges = BTreeMap::new();
        if let Some(e) = m.get("edges") {
            for (k, x) in obj(e, what)? {
                let Some((mk, l)) = k.rsplit_once(',').filter(|(a, _)| a.ends_with(']')) else {
                    return bad(format!("{what}: edge key {k:?} is not \"[I],l\""));
                };
                let l: usize = l.trim().parse().map_err(|_| Error::Input(format!("{what}: bad edge direction in {k:?}")))?;
                if l >= n {
                    return bad(format!("{what}: edge direction {l} outside the cube"));
                }
                edges.insert((parse_mask(mk, n, what)?, l), string(x, what)?);
            }
        }
        let e = CubeEntry { n, vertices, edges };
        for name in e.vertices.values() {
            if !self.complexes.contains_key(name) && !self.categories.contains_key(name) {
                return bad(format!("{what}: unknown vertex {name:?}"));
            }
        }
        for name in e.edges.values() {
            if !self.maps.contains_key(name) && !self.functors.contains_key(name) {
                return bad(format!("{what}: unknown edge {name:?}"));
            }
        }
        Ok(e)
    }

    /// Object labels of a category, or of the `Gac` of a cube.
    pub fn labels_of(&self, name: &str) -> Result<Vec<String>> {
        if let Some(c) = self.categories.get(name) {
            return Ok(c.labels().to_vec());
        }
        if let Some(e) = self.cubes.get(name) {
            let mut out = Vec::new();
            for i in 0..e.n {
                let v = e.vertices.get(&bit(i)).ok_or_else(|| Error::Input(format!("cube {name} has no vertex [{i}]")))?;
                for l in self.category(v)?.labels() {
                    out.push(format!("{i}:{l}"));
                }
            }
            return Ok(out);
        }
        bad(format!("{name:?} is neither a category nor a cube"))
    }

    fn parse_twisted(&self, v: &Value, what: &str) -> Result<TwistedEntry> {
        let m = obj(v, what)?;
        let category = string(field_of(m, "category", what)?, what)?;
        let labels = self.labels_of(&category)?;
        let mut terms = Vec::new();
        for t in arr(field_of(m, "terms", what)?, what)? {
            let tm = obj(t, what)?;
            let l = string(field_of(tm, "obj", what)?, what)?;
            let o = labels.iter().position(|x| *x == l).ok_or_else(|| Error::Input(format!("{what}: unknown object {l:?}")))?;
            let shift = match tm.get("shift") {
                Some(s) => int(s, what)? as i32,
                None => 0,
            };
            terms.push(ShiftedObject { obj: o, shift });
        }
        let mut delta = BTreeMap::new();
        if let Some(dm) = m.get("delta") {
            let dims = self.hom_dims(&category)?;
            let nobj = labels.len();
            for (k, x) in obj(dm, what)? {
                let (i, j) = k
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                    .ok_or_else(|| Error::Input(format!("{what}: delta key {k:?} is not \"i,j\"")))?;
                if i >= j || j >= terms.len() {
                    return bad(format!("{what}: delta key {k:?} needs i < j < {}", terms.len()));
                }
                let len = dims[terms[j].obj * nobj + terms[i].obj];
                delta.insert((i, j), parse_vector(self.field, x, len, &format!("{what} delta {k}"))?);
            }
        }
        Ok(TwistedEntry { category, complex: TwistedComplex { terms, delta } })
    }

    fn hom_dims(&self, name: &str) -> Result<Vec<usize>> {
        if let Some(c) = self.categories.get(name) {
            let n = c.num_objects();
            return Ok((0..n * n).map(|t| c.hom(t / n, t % n).total_dim()).collect());
        }
        let cube = self.dg_cube(name)?;
        let gac = Gac::new(&cube)?;
        let n = gac.num_objects();
        Ok((0..n * n).map(|t| gac.hom(t / n, t % n).total_dim()).collect())
    }

    fn parse_algebra(&self, v: &Value, what: &str) -> Result<FilteredAlgebra> {
        let field = self.field;
        let m = obj(v, what)?;
        let labels: Vec<String> = arr(field_of(m, "labels", what)?, what)?.iter().map(|x| string(x, what)).collect::<Result<_>>()?;
        let n = labels.len();
        let mut mult = vec![vec![vec![field.zero(); n]; n]; n];
        if let Some(mm) = m.get("mult") {
            for (k, x) in obj(mm, what)? {
                let (i, j) = k
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                    .filter(|&(i, j)| i < n && j < n)
                    .ok_or_else(|| Error::Input(format!("{what}: mult key {k:?} is not \"i,j\" with i, j < {n}")))?;
                mult[i][j] = parse_vector(field, x, n, &format!("{what} mult {k}"))?;
            }
        }
        let unit = parse_vector(field, field_of(m, "unit", what)?, n, what)?;
        let filtration = arr(field_of(m, "filtration", what)?, what)?
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let cols =
                    arr(f, what)?.iter().map(|c| parse_vector(field, c, n, &format!("{what} F^-{k}"))).collect::<Result<Vec<_>>>()?;
                Ok(Matrix::from_cols(field, n, &cols))
            })
            .collect::<Result<Vec<_>>>()?;
        FilteredAlgebra::new(field, labels, mult, unit, filtration)
    }

    fn parse_module(&self, v: &Value, what: &str) -> Result<ModuleEntry> {
        let field = self.field;
        let m = obj(v, what)?;
        let algebra = string(field_of(m, "algebra", what)?, what)?;
        let r = self.algebra(&algebra)?;
        let dims: Vec<usize> = arr(field_of(m, "dims", what)?, what)?.iter().map(|x| uint(x, what)).collect::<Result<_>>()?;
        let len = dims.len();
        if len == 0 {
            return bad(format!("{what}: a module needs at least one component"));
        }
        let empty = Map::new();
        let tm = match m.get("t") {
            Some(x) => obj(x, what)?,
            None => &empty,
        };
        let mut t = Vec::new();
        for k in 0..len - 1 {
            t.push(match tm.get(&k.to_string()) {
                Some(x) => parse_matrix(field, x, dims[k], dims[k + 1], &format!("{what} t[{k}]"))?,
                None => Matrix::zeros(field, dims[k], dims[k + 1]),
            });
        }
        let am = match m.get("act") {
            Some(x) => obj(x, what)?,
            None => &empty,
        };
        let ad = r.adapted();
        let mut act = Vec::new();
        for b in 0..ad.len() {
            let lvl = ad.level[b];
            let mut row = Vec::new();
            for k in 0..len.saturating_sub(lvl) {
                row.push(match am.get(&format!("{b},{k}")) {
                    Some(x) => parse_matrix(field, x, dims[k + lvl], dims[k], &format!("{what} act[{b},{k}]"))?,
                    None => Matrix::zeros(field, dims[k + lvl], dims[k]),
                });
            }
            act.push(row);
        }
        Ok(ModuleEntry { algebra, module: GradedModule { dims, t, act } })
    }

    pub fn complex(&self, name: &str) -> Result<&Complex> {
        self.complexes.get(name).ok_or_else(|| Error::Input(format!("unknown complex {name:?}")))
    }

    pub fn category(&self, name: &str) -> Result<&DgCategory> {
        self.categories.get(name).ok_or_else(|| Error::Input(format!("unknown category {name:?}")))
    }

    pub fn algebra(&self, name: &str) -> Result<&FilteredAlgebra> {
        self.algebras.get(name).ok_or_else(|| Error::Input(format!("unknown algebra {name:?}")))
    }

    pub fn module(&self, name: &str) -> Result<&ModuleEntry> {
        self.modules.get(name).ok_or_else(|| Error::Input(format!("unknown module {name:?}")))
    }

    fn cube_entry(&self, name: &str) -> Result<&CubeEntry> {
        self.cubes.get(name).ok_or_else(|| Error::Input(format!("unknown cube {name:?}")))
    }

    /// True if the cube's vertices are complexes.
    pub fn is_complex_cube(&self, name: &str) -> Result<bool> {
        let e = self.cube_entry(name)?;
        Ok(e.vertices.values().all(|v| self.complexes.contains_key(v)))
    }

    pub fn complex_cube(&self, name: &str) -> Result<ComplexCube> {
        let e = self.cube_entry(name)?;
        let mut vertices = BTreeMap::new();
        for (&m, v) in &e.vertices {
            vertices.insert(m, self.complex(v)?.clone());
        }
        let mut edges = BTreeMap::new();
        for (&(m, l), x) in &e.edges {
            let me = self.maps.get(x).ok_or_else(|| Error::Input(format!("cube {name}: {x:?} is not a map")))?;
            if Some(&me.source) != e.vertices.get(&m) || Some(&me.target) != e.vertices.get(&(m | bit(l))) {
                return bad(format!("cube {name}: edge {x:?} does not join its vertices"));
            }
            edges.insert((m, l), me.map.clone());
        }
        ComplexCube::new(self.field, e.n, vertices, edges)
    }

    pub fn dg_cube(&self, name: &str) -> Result<DgCube> {
        let e = self.cube_entry(name)?;
        let mut vertices = BTreeMap::new();
        for (&m, v) in &e.vertices {
            vertices.insert(m, self.category(v)?.clone());
        }
        let mut edges = BTreeMap::new();
        for (&(m, l), x) in &e.edges {
            let fe = self.functors.get(x).ok_or_else(|| Error::Input(format!("cube {name}: {x:?} is not a functor")))?;
            if Some(&fe.source) != e.vertices.get(&m) || Some(&fe.target) != e.vertices.get(&(m | bit(l))) {
                return bad(format!("cube {name}: edge {x:?} does not join its vertices"));
            }
            edges.insert((m, l), fe.functor.clone());
        }
        DgCube::new(e.n, vertices, edges)
    }

    fn fresh(&self, name: &str) -> Result<()> {
        self.insert_name(name)
    }

    pub fn add_complex(&mut self, name: &str, c: Complex) -> Result<()> {
        self.fresh(name)?;
        self.complexes.insert(name.into(), c);
        Ok(())
    }

    pub fn add_category(&mut self, name: &str, c: DgCategory) -> Result<()> {
        self.fresh(name)?;
        self.categories.insert(name.into(), c);
        Ok(())
    }

    pub fn add_algebra(&mut self, name: &str, a: FilteredAlgebra) -> Result<()> {
        self.fresh(name)?;
        self.algebras.insert(name.into(), a);
        Ok(())
    }

    pub fn add_module(&mut self, name: &str, algebra: &str, m: GradedModule) -> Result<()> {
        self.fresh(name)?;
        self.algebra(algebra)?;
        self.modules.insert(name.into(), ModuleEntry { algebra: algebra.into(), module: m });
        Ok(())
    }

    pub fn add_twisted(&mut self, name: &str, category: &str, t: TwistedComplex) -> Result<()> {
        self.fresh(name)?;
        self.labels_of(category)?;
        self.twisted.insert(name.into(), TwistedEntry { category: category.into(), complex: t });
        Ok(())
    }

    /// Adds a cube of complexes with generated names `name.v[I]` and `name.e[I],l`.
    pub fn add_complex_cube(&mut self, name: &str, c: &ComplexCube) -> Result<()> {
        self.fresh(name)?;
        let mut e = CubeEntry { n: c.n(), vertices: BTreeMap::new(), edges: BTreeMap::new() };
        for (&m, v) in &c.raw.vertices {
            let vn = format!("{name}.v{}", mask_key(m));
            self.add_complex(&vn, v.clone())?;
            e.vertices.insert(m, vn);
        }
        for (&(m, l), f) in &c.raw.edges {
            let en = format!("{name}.e{},{l}", mask_key(m));
            self.fresh(&en)?;
            self.maps
                .insert(en.clone(), MapEntry { source: e.vertices[&m].clone(), target: e.vertices[&(m | bit(l))].clone(), map: f.clone() });
            e.edges.insert((m, l), en);
        }
        self.cubes.insert(name.into(), e);
        Ok(())
    }

    /// Adds a cube of dg categories with generated names `name.v[I]` and `name.e[I],l`.
    pub fn add_dg_cube(&mut self, name: &str, c: &DgCube) -> Result<()> {
        self.fresh(name)?;
        let mut e = CubeEntry { n: c.n(), vertices: BTreeMap::new(), edges: BTreeMap::new() };
        for (&m, v) in &c.raw.vertices {
            let vn = format!("{name}.v{}", mask_key(m));
            self.add_category(&vn, v.clone())?;
            e.vertices.insert(m, vn);
        }
        for (&(m, l), f) in &c.raw.edges {
            let en = format!("{name}.e{},{l}", mask_key(m));
            self.fresh(&en)?;
            self.functors.insert(
                en.clone(),
                FunctorEntry { source: e.vertices[&m].clone(), target: e.vertices[&(m | bit(l))].clone(), functor: f.clone() },
            );
            e.edges.insert((m, l), en);
        }
        self.cubes.insert(name.into(), e);
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("version".into(), json!(VERSION));
        top.insert("field".into(), field_to_json(self.field));
        let mut put = |key: &str, m: Map<String, Value>| {
            if !m.is_empty() {
                top.insert(key.into(), Value::Object(m));
            }
        };
        put("complexes", self.complexes.iter().map(|(k, c)| (k.clone(), complex_to_json(c))).collect());
        put("maps", self.maps.iter().map(|(k, e)| (k.clone(), map_to_json(e))).collect());
        put("categories", self.categories.iter().map(|(k, c)| (k.clone(), category_to_json(c, Some(c.tables())))).collect());
        put("functors", self.functors.iter().map(|(k, e)| (k.clone(), self.functor_to_json(e))).collect());
        put("cubes", self.cubes.iter().map(|(k, e)| (k.clone(), cube_to_json(e))).collect());
        put("twisted", self.twisted.iter().map(|(k, e)| (k.clone(), self.twisted_to_json(e))).collect());
        put("algebras", self.algebras.iter().map(|(k, a)| (k.clone(), algebra_to_json(a))).collect());
        put("modules", self.modules.iter().map(|(k, e)| (k.clone(), module_to_json(e))).collect());
        put("params", self.params.clone());
        Value::Object(top)
    }

    fn functor_to_json(&self, e: &FunctorEntry) -> Value {
        let (s, t) = (&self.categories[&e.source], &self.categories[&e.target]);
        let n = s.num_objects();
        let objects: Vec<String> = e.functor.obj_map.iter().map(|&o| t.labels()[o].clone()).collect();
        let mut hom = Map::new();
        for a in 0..n {
            for b in 0..n {
                hom.insert(pair_key(&s.labels()[a], &s.labels()[b]), matrix_to_json(e.functor.matrix(a, b)));
            }
        }
        json!({ "source": e.source, "target": e.target, "objects": objects, "hom": hom })
    }

    fn twisted_to_json(&self, e: &TwistedEntry) -> Value {
        let labels = self.labels_of(&e.category).unwrap_or_default();
        let terms: Vec<Value> =
            e.complex.terms.iter().map(|t| json!({ "obj": labels.get(t.obj).cloned().unwrap_or_default(), "shift": t.shift })).collect();
        let delta: Map<String, Value> = e.complex.delta.iter().map(|(&(i, j), v)| (format!("{i},{j}"), vector_to_json(v))).collect();
        json!({ "category": e.category, "terms": terms, "delta": delta })
    }
}

fn map_to_json(e: &MapEntry) -> Value {
    let comps: Map<String, Value> = e.map.source.degrees().map(|k| (k.to_string(), matrix_to_json(&e.map.comp(k)))).collect();
    json!({ "source": e.source, "target": e.target, "degree": e.map.degree, "comps": comps })
}

fn cube_to_json(e: &CubeEntry) -> Value {
    let vertices: Map<String, Value> = e.vertices.iter().map(|(&m, v)| (mask_key(m), json!(v))).collect();
    let edges: Map<String, Value> = e.edges.iter().map(|(&(m, l), v)| (format!("{},{l}", mask_key(m)), json!(v))).collect();
    json!({ "n": e.n, "vertices": vertices, "edges": edges })
}

pub fn algebra_to_json(a: &FilteredAlgebra) -> Value {
    let n = a.dim();
    let mut mult = Map::new();
    for i in 0..n {
        for j in 0..n {
            if a.mult[i][j].iter().any(|s| !s.is_zero()) {
                mult.insert(format!("{i},{j}"), vector_to_json(&a.mult[i][j]));
            }
        }
    }
    let filtration: Vec<Value> =
        a.filtration.iter().map(|f| Value::Array((0..f.cols()).map(|c| vector_to_json(&f.col(c))).collect())).collect();
    json!({ "labels": a.labels, "mult": mult, "unit": vector_to_json(&a.unit), "filtration": filtration })
}

fn module_to_json(e: &ModuleEntry) -> Value {
    let m = &e.module;
    let t: Map<String, Value> = m.t.iter().enumerate().map(|(k, x)| (k.to_string(), matrix_to_json(x))).collect();
    let mut act = Map::new();
    for (b, row) in m.act.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            act.insert(format!("{b},{k}"), matrix_to_json(x));
        }
    }
    json!({ "algebra": e.algebra, "dims": m.dims, "t": t, "act": act })
}
