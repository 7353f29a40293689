//! Hypercubes of complexes and of dg categories, and their totalization.
//!
//! Vertices are indexed by bit masks. The X-words are ordered by descending
//! index, so applying `∂_l` to `X_S` costs `(-1)^{#{m ∈ S : m > l}}` and the
//! internal differential on `X_S ⊗ A_I` carries `(-1)^{|S|}`. Summands of the
//! totalization appear in descending mask order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, GradedMap};
use crate::dgcat::{validate_functor, DgCat, DgCategory, DgFunctor};
use crate::error::{input, invariant, Result};
use crate::field::Field;
use crate::linalg::Matrix;

pub fn bit(l: usize) -> u32 {
    1 << l
}

/// Whether applying `∂_l` to `X_S` produces a minus sign.
pub fn edge_sign_odd(s: u32, l: usize) -> bool {
    (s >> (l + 1)).count_ones() % 2 == 1
}

fn bits(m: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&l| m & bit(l) != 0)
}

/// Vertices and edges of an `n`-cube without any validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCube<V, E> {
    pub n: usize,
    pub vertices: BTreeMap<u32, V>,
    pub edges: BTreeMap<(u32, usize), E>,
}

impl<V: Clone, E: Clone> RawCube<V, E> {
    fn check_full(&self) -> Result<()> {
        if self.vertices.len() != 1 << self.n || self.vertices.keys().any(|&m| m >= 1 << self.n) {
            return input("operation needs a full cube");
        }
        Ok(())
    }

    /// Relabels coordinate `l` as `perm[l]`.
    pub fn permute(&self, perm: &[usize]) -> Result<RawCube<V, E>> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true)) {
            return input("not a permutation of the coordinates");
        }
        let map = |m: u32| bits(m).map(|l| bit(perm[l])).sum::<u32>();
        Ok(RawCube {
            n: self.n,
            vertices: self.vertices.iter().map(|(m, v)| (map(*m), v.clone())).collect(),
            edges: self.edges.iter().map(|((m, l), e)| ((map(*m), perm[*l]), e.clone())).collect(),
        })
    }

    /// Views the cube as a morphism of `(n-1)`-cubes along the last coordinate.
    pub fn split_last(&self) -> Result<(RawCube<V, E>, RawCube<V, E>, BTreeMap<u32, E>)> {
        if self.n == 0 {
            return input("a 0-cube is not a morphism");
        }
        self.check_full()?;
        let last = self.n - 1;
        let hb = bit(last);
        let mut a0 = RawCube { n: last, vertices: BTreeMap::new(), edges: BTreeMap::new() };
        let mut a1 = a0.clone();
        for (m, v) in &self.vertices {
            if m & hb == 0 { &mut a0 } else { &mut a1 }.vertices.insert(m & !hb, v.clone());
        }
        let mut maps = BTreeMap::new();
        for ((m, l), e) in &self.edges {
            if *l == last {
                maps.insert(*m, e.clone());
            } else {
                if m & hb == 0 { &mut a0 } else { &mut a1 }.edges.insert((m & !hb, *l), e.clone());
            }
        }
        Ok((a0, a1, maps))
    }

    /// Inverse of [`RawCube::split_last`].
    pub fn join_last(a0: &RawCube<V, E>, a1: &RawCube<V, E>, maps: &BTreeMap<u32, E>) -> RawCube<V, E> {
        let n = a0.n;
        let hb = bit(n);
        let mut out = RawCube { n: n + 1, vertices: a0.vertices.clone(), edges: a0.edges.clone() };
        for (m, v) in &a1.vertices {
            out.vertices.insert(m | hb, v.clone());
        }
        for ((m, l), e) in &a1.edges {
            out.edges.insert((m | hb, *l), e.clone());
        }
        for (m, e) in maps {
            out.edges.insert((*m, n), e.clone());
        }
        out
    }

    /// The face with the given coordinates fixed; free coordinates keep their order.
    pub fn face(&self, fixed: &[(usize, bool)]) -> Result<RawCube<V, E>> {
        self.check_full()?;
        let fixed_mask: u32 = fixed.iter().map(|f| bit(f.0)).sum();
        let set: u32 = fixed.iter().filter(|f| f.1).map(|f| bit(f.0)).sum();
        let free: Vec<usize> = (0..self.n).filter(|l| fixed_mask & bit(*l) == 0).collect();
        let embed = |m: u32| set | bits(m).map(|k| bit(free[k])).sum::<u32>();
        let mut out = RawCube { n: free.len(), vertices: BTreeMap::new(), edges: BTreeMap::new() };
        for m in 0..(1u32 << free.len()) {
            out.vertices.insert(m, self.vertices[&embed(m)].clone());
            for (k, &l) in free.iter().enumerate() {
                if m & bit(k) == 0 {
                    out.edges.insert((m, k), self.edges[&(embed(m), l)].clone());
                }
            }
        }
        Ok(out)
    }
}

/// Stacks `a: A0 -> A1` and `b: A1 -> B1` (last coordinate) into `A0 -> B1`.
pub fn stack_raw<V: Clone, E: Clone>(
    a: &RawCube<V, E>,
    b: &RawCube<V, E>,
    same: impl Fn(&RawCube<V, E>, &RawCube<V, E>) -> bool,
    compose: impl Fn(&E, &E) -> Result<E>,
) -> Result<RawCube<V, E>> {
    if a.n != b.n {
        return input("stacking cubes of different dimensions");
    }
    let (a0, a1, alpha) = a.split_last()?;
    let (b0, b1, beta) = b.split_last()?;
    if !same(&a1, &b0) {
        return input("the cubes do not share the stacking face");
    }
    let maps = alpha.iter().map(|(m, f)| Ok((*m, compose(&beta[m], f)?))).collect::<Result<_>>()?;
    Ok(RawCube::join_last(&a0, &b1, &maps))
}

/// Extension of `a: A0 -> A1` by `b: A1 -> B1`: the `(n+1)`-cube of `γ: a -> (id: B1 -> B1)`.
pub fn extend_raw<V: Clone, E: Clone>(
    a: &RawCube<V, E>,
    b: &RawCube<V, E>,
    same: impl Fn(&RawCube<V, E>, &RawCube<V, E>) -> bool,
    compose: impl Fn(&E, &E) -> Result<E>,
    identity: impl Fn(&V) -> E,
) -> Result<RawCube<V, E>> {
    if a.n != b.n {
        return input("extending cubes of different dimensions");
    }
    let (_, a1, alpha) = a.split_last()?;
    let (b0, b1, beta) = b.split_last()?;
    if !same(&a1, &b0) {
        return input("the cubes do not share the extension face");
    }
    let ids = b1.vertices.iter().map(|(m, v)| (*m, identity(v))).collect();
    let c = RawCube::join_last(&b1, &b1, &ids);
    let hb = bit(a.n - 1);
    let mut gamma = BTreeMap::new();
    for m in a.vertices.keys() {
        let e = if m & hb == 0 { compose(&beta[m], &alpha[m])? } else { beta[&(m & !hb)].clone() };
        gamma.insert(*m, e);
    }
    Ok(RawCube::join_last(a, &c, &gamma))
}

fn maps_equal(a: &GradedMap, b: &GradedMap) -> bool {
    a.degree == b.degree && a.source.same_as(&b.source) && a.target.same_as(&b.target) && a.total_matrix() == b.total_matrix()
}

fn complex_cubes_equal(a: &RawCube<Complex, GradedMap>, b: &RawCube<Complex, GradedMap>) -> bool {
    a.n == b.n
        && a.vertices.len() == b.vertices.len()
        && a.vertices.iter().zip(&b.vertices).all(|((m1, v1), (m2, v2))| m1 == m2 && v1.same_as(v2))
        && a.edges.len() == b.edges.len()
        && a.edges.iter().zip(&b.edges).all(|((k1, e1), (k2, e2))| k1 == k2 && maps_equal(e1, e2))
}

/// A strictly commuting hypercube of complexes on a set of masks.
///
/// The complement `S = full \ I` that drives the signs is taken inside the
/// union `full` of all masks, so interval shapes are supported.
#[derive(Clone, Debug)]
pub struct ComplexCube {
    pub field: Field,
    pub raw: RawCube<Complex, GradedMap>,
    full: u32,
}

impl ComplexCube {
    pub fn new(field: Field, n: usize, vertices: BTreeMap<u32, Complex>, edges: BTreeMap<(u32, usize), GradedMap>) -> Result<ComplexCube> {
        let c = ComplexCube::new_unchecked(field, n, vertices, edges)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks only that every required edge is present.
    pub fn new_unchecked(
        field: Field,
        n: usize,
        vertices: BTreeMap<u32, Complex>,
        edges: BTreeMap<(u32, usize), GradedMap>,
    ) -> Result<ComplexCube> {
        if vertices.is_empty() {
            return input("a cube needs at least one vertex");
        }
        let full = vertices.keys().fold(0, |a, m| a | m);
        if full >= 1 << n {
            return input("vertex mask outside the cube");
        }
        let c = ComplexCube { field, raw: RawCube { n, vertices, edges }, full };
        for &(m, l) in c.raw.edges.keys() {
            if !c.raw.vertices.contains_key(&m) || m & bit(l) != 0 || !c.raw.vertices.contains_key(&(m | bit(l))) {
                return input(format!("edge ({m},{l}) does not join two vertices"));
            }
        }
        for (m, l) in c.required_edges() {
            if !c.raw.edges.contains_key(&(m, l)) {
                return input(format!("missing edge ({m},{l})"));
            }
        }
        Ok(c)
    }

    pub fn from_raw(field: Field, raw: RawCube<Complex, GradedMap>) -> Result<ComplexCube> {
        ComplexCube::new(field, raw.n, raw.vertices, raw.edges)
    }

    pub fn n(&self) -> usize {
        self.raw.n
    }

    pub fn full(&self) -> u32 {
        self.full
    }

    pub fn vertex(&self, m: u32) -> &Complex {
        &self.raw.vertices[&m]
    }

    pub fn edge(&self, m: u32, l: usize) -> &GradedMap {
        &self.raw.edges[&(m, l)]
    }

    fn required_edges(&self) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        for &m in self.raw.vertices.keys() {
            for l in bits(self.full & !m) {
                if self.raw.vertices.contains_key(&(m | bit(l))) {
                    out.push((m, l));
                }
            }
        }
        out
    }

    /// Edges are closed degree-0 maps between the right vertices, and squares commute.
    pub fn validate(&self) -> Result<()> {
        for (&(m, l), e) in &self.raw.edges {
            if e.degree != 0 || !e.source.same_as(self.vertex(m)) || !e.target.same_as(self.vertex(m | bit(l))) {
                return input(format!("edge ({m},{l}) has the wrong source, target or degree"));
            }
            if !e.is_closed() {
                return invariant(format!("edge ({m},{l}) is not a chain map"));
            }
        }
        for &m in self.raw.vertices.keys() {
            let free: Vec<usize> = bits(self.full & !m).collect();
            for (x, &l) in free.iter().enumerate() {
                for &l2 in &free[x + 1..] {
                    let (a, b, c) = (m | bit(l), m | bit(l2), m | bit(l) | bit(l2));
                    if ![a, b, c].iter().all(|v| self.raw.vertices.contains_key(v)) {
                        continue;
                    }
                    let p1 = GradedMap::compose(self.edge(a, l2), self.edge(m, l))?;
                    let p2 = GradedMap::compose(self.edge(b, l), self.edge(m, l2))?;
                    if p1.total_matrix() != p2.total_matrix() {
                        return invariant(format!("square at {m} in directions {l},{l2} does not commute"));
                    }
                }
            }
        }
        Ok(())
    }

    fn shift_of(&self, m: u32) -> i32 {
        (self.full & !m).count_ones() as i32
    }

    /// Vertex masks in totalization order.
    pub fn summands(&self) -> Vec<u32> {
        self.raw.vertices.keys().rev().copied().collect()
    }

    /// Position of each summand inside the degree-`k` piece of the totalization.
    pub fn summand_offsets(&self, k: i32) -> BTreeMap<u32, usize> {
        let mut acc = 0;
        let mut out = BTreeMap::new();
        for m in self.summands() {
            out.insert(m, acc);
            acc += self.vertex(m).dim(k + self.shift_of(m));
        }
        out
    }

    /// `t(A)^k = ⊕_I A_I^{k + |S_I|}`.
    pub fn totalize(&self) -> Complex {
        let order = self.summands();
        let lo = order.iter().filter(|m| self.vertex(**m).total_dim() > 0).map(|m| self.vertex(*m).lo() - self.shift_of(*m)).min();
        let hi = order.iter().filter(|m| self.vertex(**m).total_dim() > 0).map(|m| self.vertex(*m).hi() - self.shift_of(*m)).max();
        let (Some(lo), Some(hi)) = (lo, hi) else { return Complex::zero(self.field) };
        let dim = |k: i32| order.iter().map(|m| self.vertex(*m).dim(k + self.shift_of(*m))).sum::<usize>();
        let dims: Vec<usize> = (lo..=hi).map(dim).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let (co, ro) = (self.summand_offsets(k), self.summand_offsets(k + 1));
            let mut mat = Matrix::zeros(self.field, dim(k + 1), dim(k));
            for &m in &order {
                let s = self.shift_of(m);
                let v = self.vertex(m);
                if v.dim(k + s) == 0 {
                    continue;
                }
                let dv = v.d(k + s);
                if dv.rows() > 0 {
                    mat.set_block(ro[&m], co[&m], &dv.scale(&self.field.sign(s as i64)));
                }
                for l in bits(self.full & !m) {
                    let t = m | bit(l);
                    if !self.raw.vertices.contains_key(&t) {
                        continue;
                    }
                    let e = self.edge(m, l).comp(k + s);
                    if e.rows() > 0 {
                        let e = if edge_sign_odd(self.full & !m, l) { e.neg() } else { e };
                        mat.set_block(ro[&t], co[&m], &e);
                    }
                }
            }
            diffs.push(mat);
        }
        Complex::new_unchecked(self.field, lo, dims, diffs).expect("consistent shapes")
    }

    pub fn is_acyclic(&self) -> bool {
        self.totalize().is_acyclic()
    }

    fn lift(&self, raw: RawCube<Complex, GradedMap>) -> Result<ComplexCube> {
        ComplexCube::from_raw(self.field, raw)
    }

    /// Splits along the last coordinate: `(A0, A1, α)`.
    pub fn as_morphism(&self) -> Result<(ComplexCube, ComplexCube, BTreeMap<u32, GradedMap>)> {
        let (a0, a1, maps) = self.raw.split_last()?;
        Ok((self.lift(a0)?, self.lift(a1)?, maps))
    }

    pub fn from_morphism(a0: &ComplexCube, a1: &ComplexCube, maps: &BTreeMap<u32, GradedMap>) -> Result<ComplexCube> {
        ComplexCube::from_raw(a0.field, RawCube::join_last(&a0.raw, &a1.raw, maps))
    }

    /// `t(α): t(A0) -> t(A1)`, blockwise `α_I`.
    pub fn total_morphism(a0: &ComplexCube, a1: &ComplexCube, maps: &BTreeMap<u32, GradedMap>) -> Result<GradedMap> {
        let (s, t) = (a0.totalize(), a1.totalize());
        let comps = s
            .degrees()
            .map(|k| {
                let (co, ro) = (a0.summand_offsets(k), a1.summand_offsets(k));
                let mut mat = Matrix::zeros(a0.field, t.dim(k), s.dim(k));
                for (m, f) in maps {
                    let c = f.comp(k + a0.shift_of(*m));
                    if c.rows() > 0 && c.cols() > 0 {
                        mat.set_block(ro[m], co[m], &c);
                    }
                }
                mat
            })
            .collect();
        GradedMap::new(s, t, 0, comps)
    }

    /// Compares `t(A)` with `cone(t(α))` for the split along the last coordinate.
    ///
    /// With the descending word order the comparison isomorphism is the identity.
    pub fn t_factorization_check(&self) -> Result<bool> {
        let (a0, a1, maps) = self.as_morphism()?;
        let ta = ComplexCube::total_morphism(&a0, &a1, &maps)?;
        if !ta.is_closed() {
            return Ok(false);
        }
        Ok(Complex::cone(&ta)?.same_as(&self.totalize()))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<ComplexCube> {
        self.lift(self.raw.permute(perm)?)
    }

    pub fn face(&self, fixed: &[(usize, bool)]) -> Result<ComplexCube> {
        self.lift(self.raw.face(fixed)?)
    }

    pub fn stack(a: &ComplexCube, b: &ComplexCube) -> Result<ComplexCube> {
        let raw = stack_raw(&a.raw, &b.raw, complex_cubes_equal, GradedMap::compose)?;
        ComplexCube::from_raw(a.field, raw)
    }

    pub fn extend(a: &ComplexCube, b: &ComplexCube) -> Result<ComplexCube> {
        let raw = extend_raw(&a.raw, &b.raw, complex_cubes_equal, GradedMap::compose, GradedMap::identity)?;
        ComplexCube::from_raw(a.field, raw)
    }

    /// Structural equality up to window padding.
    pub fn same_as(&self, o: &ComplexCube) -> bool {
        complex_cubes_equal(&self.raw, &o.raw)
    }
}

/// A hypercube of dg categories with strictly commuting dg functors.
#[derive(Clone, Debug)]
pub struct DgCube {
    pub raw: RawCube<DgCategory, DgFunctor>,
    composites: HashMap<(u32, u32), DgFunctor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub cohomology: BTreeMap<i32, usize>,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicReport {
    pub acyclic: bool,
    pub pairs: Vec<PairReport>,
}

fn dg_cubes_equal(a: &RawCube<DgCategory, DgFunctor>, b: &RawCube<DgCategory, DgFunctor>) -> bool {
    a == b
}

impl DgCube {
    pub fn new(n: usize, vertices: BTreeMap<u32, DgCategory>, edges: BTreeMap<(u32, usize), DgFunctor>) -> Result<DgCube> {
        let raw = RawCube { n, vertices, edges };
        raw.check_full()?;
        let field = raw.vertices[&0].field();
        for (&m, v) in &raw.vertices {
            if v.field() != field {
                return input(format!("vertex {m} is over a different field"));
            }
            for l in (0..n).filter(|l| m & bit(*l) == 0) {
                let Some(e) = raw.edges.get(&(m, l)) else { return input(format!("missing edge ({m},{l})")) };
                let r = validate_functor(v, &raw.vertices[&(m | bit(l))], e);
                if !r.ok {
                    return invariant(format!("edge ({m},{l}) is not a dg functor: {}", r.violations[0].axiom));
                }
            }
        }
        if raw.edges.len() != n << n.saturating_sub(1) {
            return input("unexpected edges");
        }
        for m in 0..(1u32 << n) {
            let free: Vec<usize> = (0..n).filter(|l| m & bit(*l) == 0).collect();
            for (x, &l) in free.iter().enumerate() {
                for &l2 in &free[x + 1..] {
                    let p1 = DgFunctor::compose(&raw.edges[&(m | bit(l), l2)], &raw.edges[&(m, l)]);
                    let p2 = DgFunctor::compose(&raw.edges[&(m | bit(l2), l)], &raw.edges[&(m, l2)]);
                    if p1 != p2 {
                        return invariant(format!("square at {m} in directions {l},{l2} does not commute strictly"));
                    }
                }
            }
        }
        let mut composites = HashMap::new();
        for i in 0..(1u32 << n) {
            composites.insert((i, i), DgFunctor::identity(&raw.vertices[&i]));
            // supersets in increasing popcount so the smaller composite exists
            let mut sup: Vec<u32> = (0..(1u32 << n)).filter(|k| k & i == i && *k != i).collect();
            sup.sort_by_key(|k| k.count_ones());
            for k in sup {
                let l = bits(k & !i).max().unwrap();
                let prev = &composites[&(i, k & !bit(l))];
                let f = DgFunctor::compose(&raw.edges[&(k & !bit(l), l)], prev);
                composites.insert((i, k), f);
            }
        }
        Ok(DgCube { raw, composites })
    }

    pub fn n(&self) -> usize {
        self.raw.n
    }

    pub fn field(&self) -> Field {
        self.vertex(0).field()
    }

    pub fn vertex(&self, m: u32) -> &DgCategory {
        &self.raw.vertices[&m]
    }

    /// The composite functor `A_I -> A_K` for `I ⊆ K`.
    pub fn functor(&self, i: u32, k: u32) -> &DgFunctor {
        &self.composites[&(i, k)]
    }

    /// Objects of `A_I` pushed from `x ∈ A_{base}`.
    pub fn push(&self, base: u32, x: usize, i: u32) -> usize {
        self.functor(base, i).obj_map[x]
    }

    /// The cube of hom complexes `A_I(V x, V y)` on a shape, for `x ∈ A_{bx}`, `y ∈ A_{by}`.
    pub fn hom_cube(&self, shape: &[u32], bx: u32, x: usize, by: u32, y: usize) -> Result<ComplexCube> {
        let mut vertices = BTreeMap::new();
        let mut edges = BTreeMap::new();
        let set: BTreeSet<u32> = shape.iter().copied().collect();
        for &m in &set {
            let (xi, yi) = (self.push(bx, x, m), self.push(by, y, m));
            vertices.insert(m, self.vertex(m).hom(xi, yi).clone());
        }
        let full = set.iter().fold(0, |a, m| a | m);
        for &m in &set {
            let (xi, yi) = (self.push(bx, x, m), self.push(by, y, m));
            for l in bits(full & !m) {
                let t = m | bit(l);
                if set.contains(&t) {
                    let f = &self.raw.edges[&(m, l)];
                    edges.insert((m, l), GradedMap::from_total(&vertices[&m], &vertices[&t], 0, f.matrix(xi, yi))?);
                }
            }
        }
        ComplexCube::new_unchecked(self.field(), self.n(), vertices, edges)
    }

    /// The bimodule cube at a pair of objects of `A_∅`.
    pub fn bimodule_cube(&self, a: usize, b: usize) -> Result<ComplexCube> {
        let shape: Vec<u32> = (0..(1u32 << self.n())).collect();
        self.hom_cube(&shape, 0, a, 0, b)
    }

    pub fn check_acyclic(&self) -> Result<AcyclicReport> {
        let a0 = self.vertex(0);
        let n = a0.num_objects();
        let pairs = (0..n * n)
            .into_par_iter()
            .map(|t| {
                let (a, b) = (t / n, t % n);
                let cohomology = self.bimodule_cube(a, b)?.totalize().cohomology();
                Ok(PairReport { source: a0.label(a), target: a0.label(b), acyclic: cohomology.is_empty(), cohomology })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AcyclicReport { acyclic: pairs.iter().all(|p| p.acyclic), pairs })
    }

    fn lift(raw: RawCube<DgCategory, DgFunctor>) -> Result<DgCube> {
        DgCube::new(raw.n, raw.vertices, raw.edges)
    }

    pub fn as_morphism(&self) -> Result<(DgCube, DgCube, BTreeMap<u32, DgFunctor>)> {
        let (a0, a1, maps) = self.raw.split_last()?;
        Ok((DgCube::lift(a0)?, DgCube::lift(a1)?, maps))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<DgCube> {
        DgCube::lift(self.raw.permute(perm)?)
    }

    pub fn face(&self, fixed: &[(usize, bool)]) -> Result<DgCube> {
        DgCube::lift(self.raw.face(fixed)?)
    }

    pub fn stack(a: &DgCube, b: &DgCube) -> Result<DgCube> {
        DgCube::lift(stack_raw(&a.raw, &b.raw, dg_cubes_equal, |g, f| Ok(DgFunctor::compose(g, f)))?)
    }

    pub fn extend(a: &DgCube, b: &DgCube) -> Result<DgCube> {
        let raw = extend_raw(&a.raw, &b.raw, dg_cubes_equal, |g, f| Ok(DgFunctor::compose(g, f)), DgFunctor::identity)?;
        DgCube::lift(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(q: Field) -> Complex {
        Complex::concentrated(q, 0, 1)
    }

    fn id_map(c: &Complex) -> GradedMap {
        GradedMap::identity(c)
    }

    #[test]
    fn zero_cube_is_the_complex() {
        let q = Field::Rational;
        let c = Complex::two_term(-1, Matrix::from_ints(q, &[&[1, 1]])).unwrap();
        let cube = ComplexCube::new(q, 0, BTreeMap::from([(0, c.clone())]), BTreeMap::new()).unwrap();
        assert_eq!(cube.totalize(), c);
    }

    #[test]
    fn one_cube_is_the_cone() {
        let q = Field::Rational;
        let a = Complex::concentrated(q, 0, 2);
        let f = GradedMap::new(a.clone(), k(q), 0, vec![Matrix::from_ints(q, &[&[1, 1]])]).unwrap();
        let cube = ComplexCube::new(q, 1, BTreeMap::from([(0, a), (1, k(q))]), BTreeMap::from([((0, 0), f.clone())])).unwrap();
        assert!(cube.totalize().same_as(&Complex::cone(&f).unwrap()));
        assert_eq!(cube.totalize().cohomology(), BTreeMap::from([(-1, 1)]));
        assert!(cube.t_factorization_check().unwrap());
    }

    fn identity_square(q: Field) -> ComplexCube {
        let v = BTreeMap::from([(0, k(q)), (1, k(q)), (2, k(q)), (3, k(q))]);
        let e = BTreeMap::from([((0, 0), id_map(&k(q))), ((0, 1), id_map(&k(q))), ((1, 1), id_map(&k(q))), ((2, 0), id_map(&k(q)))]);
        ComplexCube::new(q, 2, v, e).unwrap()
    }

    #[test]
    fn identity_square_is_acyclic() {
        let q = Field::Rational;
        let sq = identity_square(q);
        assert!(sq.is_acyclic());
        assert!(sq.t_factorization_check().unwrap());
        let (a0, a1, maps) = sq.as_morphism().unwrap();
        assert!(ComplexCube::from_morphism(&a0, &a1, &maps).unwrap().same_as(&sq));
        let st = ComplexCube::stack(&sq, &sq).unwrap();
        assert!(st.is_acyclic());
        let ext = ComplexCube::extend(&sq, &sq).unwrap();
        assert_eq!(ext.n(), 3);
        assert!(ext.is_acyclic());
    }

    #[test]
    fn noncommuting_square_rejected() {
        let q = Field::Rational;
        let mut sq = identity_square(q).raw;
        sq.edges.insert((2, 0), GradedMap::zero(&k(q), &k(q), 0));
        assert!(ComplexCube::from_raw(q, sq).is_err());
    }

    #[test]
    fn unit_inclusion_cube_not_acyclic() {
        let q = Field::Rational;
        let a = DgCategory::unit(q);
        let b = DgCategory::truncated_polynomial(q, 2);
        let f = DgFunctor::from_fn(&a, &b, vec![0], |_, _| Matrix::from_ints(q, &[&[1], &[0]])).unwrap();
        let cube = DgCube::new(1, BTreeMap::from([(0, a), (1, b)]), BTreeMap::from([((0, 0), f)])).unwrap();
        let r = cube.check_acyclic().unwrap();
        assert!(!r.acyclic);
        assert_eq!(r.pairs[0].cohomology, BTreeMap::from([(0, 1)]));
    }
}
