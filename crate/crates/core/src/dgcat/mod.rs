//! Finite dg categories with chosen bases of hom complexes.
//!
//! Morphisms are dense vectors over the total basis of a hom complex
//! (ascending degree). `hom(a, b)` holds morphisms `a -> b`.

mod bimodule;
mod directed;
mod functor;

pub use bimodule::{restricted_diagonal, validate_bimodule, Bimodule};
pub use directed::{check_directed, directed_assemble, ext_table, h0_category, DirectedInput};
pub use functor::{validate_functor, DgFunctor};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::Complex;
use crate::error::{input, Result};
use crate::field::{Field, Scalar};
use crate::linalg::is_zero_vec;

pub type SparseVec = Vec<(usize, Scalar)>;

/// Anything that behaves like a finite dg category.
pub trait DgCat: Sync {
    fn field(&self) -> Field;
    fn num_objects(&self) -> usize;
    fn label(&self, a: usize) -> String;
    fn hom(&self, a: usize, b: usize) -> &Complex;
    /// `g ∘ f` for `f ∈ hom(a, b)` and `g ∈ hom(b, c)`.
    fn compose(&self, a: usize, b: usize, c: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar>;
    fn identity(&self, a: usize) -> Vec<Scalar>;
}

pub fn basis_vec(field: Field, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn from_sparse(field: Field, dim: usize, v: &SparseVec) -> Vec<Scalar> {
    let mut out = vec![field.zero(); dim];
    for (i, x) in v {
        out[*i] = &out[*i] + x;
    }
    out
}

/// The degree of a homogeneous vector, `None` for zero or inhomogeneous vectors.
pub fn degree_of_vec(c: &Complex, v: &[Scalar]) -> Option<i32> {
    let mut deg = None;
    for k in c.degrees() {
        let o = c.offset(k);
        if !is_zero_vec(&v[o..o + c.dim(k)]) {
            if deg.is_some() {
                return None;
            }
            deg = Some(k);
        }
    }
    deg
}

/// Structure constants of a bilinear map `X × Y -> Z` on chosen bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub n1: usize,
    pub n2: usize,
    pub out: usize,
    /// Entry `i1 * n2 + i2` is the image of the basis pair.
    pub entries: Vec<SparseVec>,
}

impl Table {
    pub fn zero(n1: usize, n2: usize, out: usize) -> Table {
        Table { n1, n2, out, entries: vec![Vec::new(); n1 * n2] }
    }

    /// Fills a table by evaluating `f` on basis pairs.
    pub fn build(field: Field, n1: usize, n2: usize, out: usize, f: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>) -> Table {
        let mut entries = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            let x = basis_vec(field, n1, i);
            for j in 0..n2 {
                let y = basis_vec(field, n2, j);
                entries.push(to_sparse(&f(&x, &y)));
            }
        }
        Table { n1, n2, out, entries }
    }

    pub fn get(&self, i1: usize, i2: usize) -> &SparseVec {
        &self.entries[i1 * self.n2 + i2]
    }

    pub fn apply(&self, field: Field, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.out];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = &self.entries[i * self.n2 + j];
                if e.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, v) in e {
                    out[*k] = &out[*k] + &(&ab * v);
                }
            }
        }
        out
    }
}

/// A dg category stored as hom complexes plus composition tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCategory {
    field: Field,
    labels: Vec<String>,
    homs: Vec<Complex>,
    /// Keyed by `(a, b, c)`; first factor in `hom(b, c)`, second in `hom(a, b)`.
    comp: HashMap<(usize, usize, usize), Table>,
    ids: Vec<Vec<Scalar>>,
}

impl DgCategory {
    /// Assembles a category without checking the axioms (see [`validate_category`]).
    pub fn new(
        field: Field,
        labels: Vec<String>,
        homs: Vec<Complex>,
        comp: HashMap<(usize, usize, usize), Table>,
        ids: Vec<Vec<Scalar>>,
    ) -> Result<DgCategory> {
        let n = labels.len();
        if homs.len() != n * n || ids.len() != n {
            return input("hom or identity data does not match the object count");
        }
        for (&(a, b, c), t) in &comp {
            if a >= n || b >= n || c >= n {
                return input("composition table refers to a missing object");
            }
            let dims = (homs[b * n + c].total_dim(), homs[a * n + b].total_dim(), homs[a * n + c].total_dim());
            if (t.n1, t.n2, t.out) != dims || t.entries.len() != t.n1 * t.n2 {
                return input(format!("composition table for ({a},{b},{c}) has the wrong shape"));
            }
        }
        for (a, id) in ids.iter().enumerate() {
            if id.len() != homs[a * n + a].total_dim() {
                return input(format!("identity of object {a} has the wrong length"));
            }
        }
        Ok(DgCategory { field, labels, homs, comp, ids })
    }

    /// The ground field as a one-object category.
    pub fn unit(field: Field) -> DgCategory {
        DgCategory::algebra(field, "pt", Complex::concentrated(field, 0, 1), vec![vec![vec![(0, field.one())]]], vec![field.one()])
            .expect("the unit category is well formed")
    }

    /// One-object category from an algebra structure on a complex.
    ///
    /// `mult[i][j]` is the product `e_i · e_j` (i.e. `e_i ∘ e_j`).
    pub fn algebra(field: Field, label: &str, hom: Complex, mult: Vec<Vec<SparseVec>>, unit: Vec<Scalar>) -> Result<DgCategory> {
        let n = hom.total_dim();
        let entries: Vec<SparseVec> = mult.into_iter().flatten().collect();
        if entries.len() != n * n {
            return input("multiplication table has the wrong size");
        }
        let table = Table { n1: n, n2: n, out: n, entries };
        DgCategory::new(field, vec![label.to_string()], vec![hom], HashMap::from([((0, 0, 0), table)]), vec![unit])
    }

    /// `k[x]/x^a` in degree 0 with basis `1, x, …, x^{a-1}`.
    pub fn truncated_polynomial(field: Field, a: usize) -> DgCategory {
        let mult = (0..a).map(|i| (0..a).map(|j| if i + j < a { vec![(i + j, field.one())] } else { Vec::new() }).collect()).collect();
        DgCategory::algebra(field, "x", Complex::concentrated(field, 0, a), mult, basis_vec(field, a, 0))
            .expect("truncated polynomial ring is well formed")
    }

    /// Path category of `0 -> 1` (one arrow, hom(1, 0) = 0).
    pub fn a2_quiver(field: Field) -> DgCategory {
        let k = Complex::concentrated(field, 0, 1);
        let z = Complex::zero(field);
        let homs = vec![k.clone(), k.clone(), z, k];
        let one = |_: &[Scalar], _: &[Scalar]| vec![field.one()];
        let mut comp = HashMap::new();
        for t in [(0, 0, 0), (1, 1, 1), (0, 0, 1), (0, 1, 1)] {
            comp.insert(t, Table::build(field, 1, 1, 1, one));
        }
        DgCategory::new(field, vec!["0".into(), "1".into()], homs, comp, vec![vec![field.one()]; 2]).unwrap()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self, a: usize, b: usize, c: usize) -> Option<&Table> {
        self.comp.get(&(a, b, c))
    }

    pub fn tables(&self) -> &HashMap<(usize, usize, usize), Table> {
        &self.comp
    }

    pub fn tables_mut(&mut self) -> &mut HashMap<(usize, usize, usize), Table> {
        &mut self.comp
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn max_hom_dim(&self) -> usize {
        self.homs.iter().map(Complex::total_dim).max().unwrap_or(0)
    }

    /// Composition of basis vectors as a sparse vector.
    pub fn compose_basis(&self, a: usize, b: usize, c: usize, gi: usize, fi: usize) -> &[(usize, Scalar)] {
        match self.comp.get(&(a, b, c)) {
            Some(t) => t.get(gi, fi),
            None => &[],
        }
    }
}

impl DgCat for DgCategory {
    fn field(&self) -> Field {
        self.field
    }
    fn num_objects(&self) -> usize {
        self.labels.len()
    }
    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }
    fn hom(&self, a: usize, b: usize) -> &Complex {
        &self.homs[a * self.labels.len() + b]
    }
    fn compose(&self, a: usize, b: usize, c: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        match self.comp.get(&(a, b, c)) {
            Some(t) => t.apply(self.field, g, f),
            None => vec![self.field.zero(); self.hom(a, c).total_dim()],
        }
    }
    fn identity(&self, a: usize) -> Vec<Scalar> {
        self.ids[a].clone()
    }
}

/// Tabulates all compositions of basis elements.
pub fn materialize<C: DgCat + ?Sized>(c: &C) -> DgCategory {
    let n = c.num_objects();
    let field = c.field();
    let homs: Vec<Complex> = (0..n * n).map(|i| c.hom(i / n, i % n).clone()).collect();
    let triples: Vec<(usize, usize, usize)> = (0..n * n * n)
        .map(|t| (t / (n * n), (t / n) % n, t % n))
        .filter(|&(a, b, cc)| homs[a * n + b].total_dim() > 0 && homs[b * n + cc].total_dim() > 0 && homs[a * n + cc].total_dim() > 0)
        .collect();
    let comp: HashMap<_, _> = triples
        .par_iter()
        .map(|&(a, b, cc)| {
            let (n1, n2, out) = (homs[b * n + cc].total_dim(), homs[a * n + b].total_dim(), homs[a * n + cc].total_dim());
            ((a, b, cc), Table::build(field, n1, n2, out, |g, f| c.compose(a, b, cc, g, f)))
        })
        .collect();
    let labels = (0..n).map(|a| c.label(a)).collect();
    let ids = (0..n).map(|a| c.identity(a)).collect();
    DgCategory { field, labels, homs, comp, ids }
}

/// One failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    /// Objects involved, in composition order (source first).
    pub objects: Vec<String>,
    /// Basis indices of the morphisms involved, outermost first.
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ok: bool,
    pub checked: usize,
    pub violation_count: usize,
    /// At most [`MAX_WITNESSES`] witnesses.
    pub violations: Vec<Violation>,
}

pub const MAX_WITNESSES: usize = 25;

impl AxiomReport {
    pub(crate) fn from_parts(parts: Vec<(usize, Vec<Violation>)>) -> AxiomReport {
        let checked = parts.iter().map(|p| p.0).sum();
        let all: Vec<Violation> = parts.into_iter().flat_map(|p| p.1).collect();
        AxiomReport { ok: all.is_empty(), checked, violation_count: all.len(), violations: all.into_iter().take(MAX_WITNESSES).collect() }
    }
}

fn sparse_sum(field: Field, dim: usize, terms: impl Iterator<Item = (Scalar, SparseVec)>) -> Vec<Scalar> {
    let mut out = vec![field.zero(); dim];
    for (c, v) in terms {
        for (i, x) in v {
            out[i] = &out[i] + &(&c * &x);
        }
    }
    out
}

/// Checks d² = 0, units, Leibniz and associativity on all basis elements.
pub fn validate_category<C: DgCat + ?Sized>(c: &C) -> AxiomReport {
    let m = materialize(c);
    validate_tables(&m)
}

fn validate_tables(c: &DgCategory) -> AxiomReport {
    let n = c.num_objects();
    let f = c.field;
    let lab = |a: usize| c.labels[a].clone();
    let mut parts = Vec::new();

    // differentials
    for a in 0..n {
        for b in 0..n {
            let ok = c.hom(a, b).check_d_squared().is_ok();
            parts.push((
                1,
                if ok { vec![] } else { vec![Violation { axiom: "d_squared".into(), objects: vec![lab(a), lab(b)], basis: vec![] }] },
            ));
        }
    }

    // identities: degree 0, closed, two-sided units
    for a in 0..n {
        let h = c.hom(a, a);
        let id = &c.ids[a];
        let mut v = Vec::new();
        let deg_ok = h.dim(0) > 0 && (0..h.total_dim()).all(|i| id[i].is_zero() || h.degree_of(i) == 0);
        if !deg_ok || !is_zero_vec(&h.apply_d(id)) {
            v.push(Violation { axiom: "identity_closed_degree_0".into(), objects: vec![lab(a)], basis: vec![] });
        }
        let mut checked = 1;
        for b in 0..n {
            let hb = c.hom(a, b);
            for i in 0..hb.total_dim() {
                checked += 1;
                let e = basis_vec(f, hb.total_dim(), i);
                if c.compose(a, a, b, &e, id) != e {
                    v.push(Violation { axiom: "right_unit".into(), objects: vec![lab(a), lab(b)], basis: vec![i] });
                }
            }
            let hb = c.hom(b, a);
            for i in 0..hb.total_dim() {
                checked += 1;
                let e = basis_vec(f, hb.total_dim(), i);
                if c.compose(b, a, a, id, &e) != e {
                    v.push(Violation { axiom: "left_unit".into(), objects: vec![lab(b), lab(a)], basis: vec![i] });
                }
            }
        }
        parts.push((checked, v));
    }

    let triples: Vec<(usize, usize, usize)> = (0..n * n * n).map(|t| (t / (n * n), (t / n) % n, t % n)).collect();

    // Leibniz and degrees: d(g∘f) = dg∘f + (-1)^{|g|} g∘df
    let leib: Vec<(usize, Vec<Violation>)> = triples
        .par_iter()
        .map(|&(a, b, cc)| {
            let (hf, hg, hgf) = (c.hom(a, b), c.hom(b, cc), c.hom(a, cc));
            let mut v = Vec::new();
            let mut checked = 0;
            for gi in 0..hg.total_dim() {
                let g = basis_vec(f, hg.total_dim(), gi);
                let dg = hg.apply_d(&g);
                let sg = f.sign(hg.degree_of(gi) as i64);
                for fi in 0..hf.total_dim() {
                    checked += 1;
                    let fv = basis_vec(f, hf.total_dim(), fi);
                    let gf = c.compose(a, b, cc, &g, &fv);
                    let expect_deg = hg.degree_of(gi) + hf.degree_of(fi);
                    let deg_ok = (0..gf.len()).all(|i| gf[i].is_zero() || hgf.degree_of(i) == expect_deg);
                    if !deg_ok {
                        v.push(Violation { axiom: "degree".into(), objects: vec![lab(a), lab(b), lab(cc)], basis: vec![gi, fi] });
                    }
                    let lhs = hgf.apply_d(&gf);
                    let mut rhs = c.compose(a, b, cc, &dg, &fv);
                    let gdf = c.compose(a, b, cc, &g, &hf.apply_d(&fv));
                    crate::linalg::axpy(&mut rhs, &sg, &gdf);
                    if lhs != rhs {
                        v.push(Violation { axiom: "leibniz".into(), objects: vec![lab(a), lab(b), lab(cc)], basis: vec![gi, fi] });
                    }
                }
            }
            (checked, v)
        })
        .collect();
    parts.extend(leib);

    // associativity: (h∘g)∘f = h∘(g∘f)
    let quads: Vec<(usize, usize, usize, usize)> = (0..n * n * n * n)
        .map(|t| (t / (n * n * n), (t / (n * n)) % n, (t / n) % n, t % n))
        .filter(|&(a, b, cc, d)| c.hom(a, b).total_dim() > 0 && c.hom(b, cc).total_dim() > 0 && c.hom(cc, d).total_dim() > 0)
        .collect();
    let assoc: Vec<(usize, Vec<Violation>)> = quads
        .par_iter()
        .map(|&(a, b, cc, d)| {
            let (nf, ng, nh) = (c.hom(a, b).total_dim(), c.hom(b, cc).total_dim(), c.hom(cc, d).total_dim());
            let nad = c.hom(a, d).total_dim();
            let mut v = Vec::new();
            for hi in 0..nh {
                for gi in 0..ng {
                    let hg = c.compose_basis(b, cc, d, hi, gi);
                    for fi in 0..nf {
                        let gf = c.compose_basis(a, b, cc, gi, fi);
                        let lhs = sparse_sum(f, nad, hg.iter().map(|(k, x)| (x.clone(), c.compose_basis(a, b, d, *k, fi).to_vec())));
                        let rhs = sparse_sum(f, nad, gf.iter().map(|(k, x)| (x.clone(), c.compose_basis(a, cc, d, hi, *k).to_vec())));
                        if lhs != rhs {
                            v.push(Violation {
                                axiom: "associativity".into(),
                                objects: vec![lab(a), lab(b), lab(cc), lab(d)],
                                basis: vec![hi, gi, fi],
                            });
                        }
                    }
                }
            }
            (nh * ng * nf, v)
        })
        .collect();
    parts.extend(assoc);
    AxiomReport::from_parts(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_categories_validate() {
        let q = Field::Rational;
        assert!(validate_category(&DgCategory::unit(q)).ok);
        assert!(validate_category(&DgCategory::a2_quiver(q)).ok);
        assert!(validate_category(&DgCategory::truncated_polynomial(q, 3)).ok);
    }

    #[test]
    fn mutation_is_reported() {
        let q = Field::Rational;
        let mut c = DgCategory::truncated_polynomial(q, 3);
        // x·x² := 1, while x²·x stays 0
        let t = c.comp.get_mut(&(0, 0, 0)).unwrap();
        t.entries[3 + 2] = vec![(0, q.one())];
        let r = validate_category(&c);
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.axiom == "associativity"));
    }
}
