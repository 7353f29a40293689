use serde::Serialize;

use super::algebra::{FilteredAlgebra, Quot};
use crate::error::{input, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;

/// A length-`len` graded module over the Rees algebra, on the window `[-len+1, 0]`.
///
/// Index `k` stands for degree `-k`. `act[b][k]` is the action of the adapted
/// basis element `b` (of level `ℓ`) from index `k` to index `k + ℓ`; it is
/// stored only while `k + ℓ < len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub dims: Vec<usize>,
    /// `t[k]: M^{-k-1} -> M^{-k}`.
    pub t: Vec<Matrix>,
    pub act: Vec<Vec<Matrix>>,
}

/// A degree-0 module map, one matrix per index.
pub type ModuleMap = Vec<Matrix>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl GradedModule {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn zero(r: &FilteredAlgebra, len: usize) -> GradedModule {
        GradedModule::from_fn(r, vec![0; len], |_| Matrix::zeros(r.field, 0, 0), |_, _| Matrix::zeros(r.field, 0, 0))
    }

    /// Builds a module from closures for `t[k]` and `act[b][k]`.
    pub fn from_fn(
        r: &FilteredAlgebra,
        dims: Vec<usize>,
        t: impl Fn(usize) -> Matrix,
        act: impl Fn(usize, usize) -> Matrix,
    ) -> GradedModule {
        let len = dims.len();
        let ad = r.adapted();
        let t = (0..len.saturating_sub(1)).map(t).collect();
        let act = (0..ad.len()).map(|b| (0..len.saturating_sub(ad.level[b])).map(|k| act(b, k)).collect()).collect();
        GradedModule { dims, t, act }
    }

    /// The composite of `t` from index `from` up to index `to <= from`.
    pub fn tau(&self, field: Field, from: usize, to: usize) -> Matrix {
        assert!(to <= from);
        let mut m = Matrix::identity(field, self.dim(from));
        for k in (to..from).rev() {
            m = if k < self.t.len() { self.t[k].mul(&m) } else { Matrix::zeros(field, self.dim(k), m.cols()) };
        }
        m
    }

    /// The action of `a ∈ F^{-j}`, viewed in Rees degree `-j`, from index `k`.
    ///
    /// `j` may be negative; the target index is `max(k + j, 0)` since degrees
    /// above 0 are copies of degree 0.
    pub fn action(&self, r: &FilteredAlgebra, a: &[Scalar], j: i64, k: usize) -> Matrix {
        let field = r.field;
        let ad = r.adapted();
        let kt = (k as i64 + j).max(0) as usize;
        let mut out = Matrix::zeros(field, self.dim(kt), self.dim(k));
        if self.dim(k) == 0 || self.dim(kt) == 0 {
            return out;
        }
        let c = ad.decompose(a);
        for (b, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let l = ad.level[b];
            assert!(l as i64 >= j, "element is not in F^{}", -j);
            if k + l >= self.len() {
                continue;
            }
            let m = self.tau(field, k + l, kt).mul(&self.act[b][k]).scale(x);
            out = out.add(&m);
        }
        out
    }

    pub fn validate(&self, r: &FilteredAlgebra) -> ModuleReport {
        let field = r.field;
        let ad = r.adapted();
        let len = self.len();
        let mut v = Vec::new();
        if self.t.len() != len.saturating_sub(1) || self.act.len() != ad.len() {
            return ModuleReport { ok: false, violations: vec!["shape".into()] };
        }
        for (k, t) in self.t.iter().enumerate() {
            if t.shape() != (self.dims[k], self.dims[k + 1]) {
                v.push(format!("t[{k}] shape"));
            }
        }
        for (b, acts) in self.act.iter().enumerate() {
            let l = ad.level[b];
            if acts.len() != len.saturating_sub(l) {
                v.push(format!("action of b{b} has {} components", acts.len()));
                continue;
            }
            for (k, m) in acts.iter().enumerate() {
                if m.shape() != (self.dims[k + l], self.dims[k]) {
                    v.push(format!("action of b{b} at {k} shape"));
                }
            }
        }
        if !v.is_empty() {
            return ModuleReport { ok: false, violations: v };
        }
        for k in 0..len {
            if self.action(r, &r.unit, 0, k) != Matrix::identity(field, self.dims[k]) {
                v.push(format!("unit at degree -{k}"));
            }
        }
        for b in 0..ad.len() {
            let l = ad.level[b];
            for k in 0..len.saturating_sub(1) {
                // b after t equals t after b
                let lhs = if k + l < len { self.act[b][k].mul(&self.t[k]) } else { Matrix::zeros(field, 0, self.dims[k + 1]) };
                let rhs = if k + 1 + l < len {
                    self.t[k + l].mul(&self.act[b][k + 1])
                } else {
                    Matrix::zeros(field, self.dim(k + l), self.dims[k + 1])
                };
                if k + l < len && lhs != rhs {
                    v.push(format!("t-equivariance of b{b} at degree -{}", k + 1));
                }
            }
        }
        for b in 0..ad.len() {
            for c in 0..ad.len() {
                let (lb, lc) = (ad.level[b], ad.level[c]);
                let prod = r.mul(&ad.element(b), &ad.element(c));
                if !r.contains(&r.f(-((lb + lc) as i64)), &prod) {
                    v.push(format!("product b{b} b{c} leaves F^-{}", lb + lc));
                    continue;
                }
                for k in 0..len {
                    if k + lb + lc >= len {
                        continue;
                    }
                    let lhs = self.action(r, &prod, (lb + lc) as i64, k);
                    let rhs = self.act[b][k + lc].mul(&self.act[c][k]);
                    if lhs != rhs {
                        v.push(format!("associativity of b{b} b{c} at degree -{k}"));
                    }
                }
            }
        }
        ModuleReport { ok: v.is_empty(), violations: v }
    }

    /// The first `n` components with the induced structure.
    pub fn window(&self, r: &FilteredAlgebra, n: usize) -> GradedModule {
        let n = n.min(self.len());
        let ad = r.adapted();
        GradedModule {
            dims: self.dims[..n].to_vec(),
            t: self.t[..n.saturating_sub(1)].to_vec(),
            act: (0..ad.len()).map(|b| self.act[b][..n.saturating_sub(ad.level[b]).min(self.act[b].len())].to_vec()).collect(),
        }
    }
}

/// Basis of the degree-0 maps commuting with paired operators.
///
/// Each operator is `(source index, target index, on m1, on m2)` and imposes
/// `f_target · A1 = A2 · f_source`.
pub fn intertwiners(field: Field, d1: &[usize], d2: &[usize], ops: &[(usize, usize, Matrix, Matrix)]) -> Vec<ModuleMap> {
    let mut off = vec![0usize];
    for k in 0..d1.len() {
        off.push(off[k] + d2[k] * d1[k]);
    }
    let unknowns = off[d1.len()];
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (ks, kt, a1, a2) in ops {
        let (ks, kt) = (*ks, *kt);
        if kt >= d1.len() || ks >= d1.len() {
            continue;
        }
        // entry (r, c) of f_kt a1 - a2 f_ks, a map from m1[ks] to m2[kt]
        for rr in 0..d2[kt] {
            for c in 0..d1[ks] {
                let mut row = vec![field.zero(); unknowns];
                for cp in 0..d1[kt] {
                    let x = a1.get(cp, c);
                    if !x.is_zero() {
                        let i = off[kt] + rr * d1[kt] + cp;
                        row[i] = &row[i] + x;
                    }
                }
                for rp in 0..d2[ks] {
                    let x = a2.get(rr, rp);
                    if !x.is_zero() {
                        let i = off[ks] + rp * d1[ks] + c;
                        row[i] = &row[i] - x;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() { Matrix::identity(field, unknowns) } else { Matrix::from_rows(field, unknowns, rows).kernel_basis() };
    (0..kernel.cols())
        .map(|c| {
            let v = kernel.col(c);
            (0..d1.len()).map(|k| Matrix::from_fn(field, d2[k], d1[k], |i, j| v[off[k] + i * d1[k] + j].clone())).collect()
        })
        .collect()
}

fn module_ops(r: &FilteredAlgebra, m1: &GradedModule, m2: &GradedModule) -> Vec<(usize, usize, Matrix, Matrix)> {
    let ad = r.adapted();
    let mut ops = Vec::new();
    for k in 0..m1.t.len() {
        ops.push((k + 1, k, m1.t[k].clone(), m2.t[k].clone()));
    }
    for b in 0..ad.len() {
        for k in 0..m1.act[b].len() {
            ops.push((k, k + ad.level[b], m1.act[b][k].clone(), m2.act[b][k].clone()));
        }
    }
    ops
}

/// Basis of degree-0 module maps `m1 -> m2`.
pub fn module_hom(r: &FilteredAlgebra, m1: &GradedModule, m2: &GradedModule) -> Result<Vec<ModuleMap>> {
    if m1.len() != m2.len() {
        return input("modules have different lengths");
    }
    Ok(intertwiners(r.field, &m1.dims, &m2.dims, &module_ops(r, m1, m2)))
}

pub fn is_module_map(r: &FilteredAlgebra, m1: &GradedModule, m2: &GradedModule, f: &ModuleMap) -> bool {
    f.len() == m1.len()
        && m1.len() == m2.len()
        && f.iter().enumerate().all(|(k, x)| x.shape() == (m2.dims[k], m1.dims[k]))
        && module_ops(r, m1, m2).iter().all(|(ks, kt, a1, a2)| f[*kt].mul(a1) == a2.mul(&f[*ks]))
}

pub fn is_isomorphism(f: &ModuleMap) -> bool {
    f.iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
}

/// Per-index spans of the submodule generated by `(index, coordinates)` pairs.
pub fn generate(r: &FilteredAlgebra, m: &GradedModule, elems: &[(usize, Vec<Scalar>)]) -> Vec<Matrix> {
    let ad = r.adapted();
    (0..m.len())
        .map(|kt| {
            let mut cols = Vec::new();
            for (ke, v) in elems {
                let j = kt as i64 - *ke as i64;
                for b in 0..ad.len() {
                    if (ad.level[b] as i64) < j {
                        continue;
                    }
                    cols.push(m.action(r, &ad.element(b), j, *ke).mul_vec(v));
                }
            }
            Matrix::from_cols(r.field, m.dims[kt], &cols).column_basis()
        })
        .collect()
}

/// A quotient module with representatives and projections per index.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: GradedModule,
    pub reps: Vec<Matrix>,
    pub proj: Vec<Matrix>,
}

/// `m / sub` for a submodule given by per-index spans.
pub fn quotient(r: &FilteredAlgebra, m: &GradedModule, sub: &[Matrix]) -> Quotient {
    let field = r.field;
    let qs: Vec<Quot> = (0..m.len()).map(|k| Quot::new(&Matrix::identity(field, m.dims[k]), &sub[k])).collect();
    let ad = r.adapted();
    let module = GradedModule::from_fn(
        r,
        qs.iter().map(Quot::dim).collect(),
        |k| qs[k].coord.mul(&m.t[k]).mul(&qs[k + 1].reps),
        |b, k| qs[k + ad.level[b]].coord.mul(&m.act[b][k]).mul(&qs[k].reps),
    );
    Quotient { module, reps: qs.iter().map(|q| q.reps.clone()).collect(), proj: qs.into_iter().map(|q| q.coord).collect() }
}

pub fn direct_sum(r: &FilteredAlgebra, parts: &[&GradedModule]) -> GradedModule {
    let field = r.field;
    let len = parts.iter().map(|p| p.len()).max().unwrap_or(0);
    let dims: Vec<usize> = (0..len).map(|k| parts.iter().map(|p| p.dim(k)).sum()).collect();
    let ad = r.adapted();
    let block = |src: usize, tgt: usize, get: &dyn Fn(&GradedModule) -> Option<Matrix>| -> Matrix {
        let mut m = Matrix::zeros(field, dims.get(tgt).copied().unwrap_or(0), dims[src]);
        let (mut ro, mut co) = (0, 0);
        for p in parts {
            if let Some(x) = get(p) {
                if x.rows() > 0 && x.cols() > 0 {
                    m.set_block(ro, co, &x);
                }
            }
            ro += p.dim(tgt);
            co += p.dim(src);
        }
        m
    };
    GradedModule::from_fn(
        r,
        dims.clone(),
        |k| block(k + 1, k, &|p| p.t.get(k).cloned()),
        |b, k| block(k, k + ad.level[b], &|p| p.act[b].get(k).cloned()),
    )
}

/// `l^n`: keeps the window `[-n+1, 0]` and divides by `t`-images of degree `-n`.
pub fn truncate(r: &FilteredAlgebra, m: &GradedModule, n: usize) -> Result<GradedModule> {
    if n > m.len() {
        return input(format!("window of length {} is narrower than {n}", m.len()));
    }
    let w = m.window(r, n);
    if n == m.len() {
        return Ok(w);
    }
    let sub: Vec<Matrix> = (0..n).map(|k| m.tau(r.field, n, k).column_basis()).collect();
    Ok(quotient(r, &w, &sub).module)
}

/// `M(i)` for `i >= 0`, on a window longer by `i`.
pub fn twist(r: &FilteredAlgebra, m: &GradedModule, i: usize) -> GradedModule {
    let field = r.field;
    let ad = r.adapted();
    let old = |k: usize| k.saturating_sub(i);
    let dims: Vec<usize> = (0..m.len() + i).map(|k| m.dim(old(k))).collect();
    GradedModule::from_fn(
        r,
        dims.clone(),
        |k| if k >= i { m.t[k - i].clone() } else { Matrix::identity(field, m.dim(0)) },
        |b, k| {
            let l = ad.level[b] as i64;
            if k >= i {
                m.action(r, &ad.element(b), l, k - i)
            } else {
                // source degree i - k > 0 is a copy of degree 0
                m.action(r, &ad.element(b), l - (i - k) as i64, 0)
            }
        },
    )
}

/// The `d`-Veronese of a module over `g`, as a module over `f` with `F^i = G^{di}`.
pub fn veronese(g: &FilteredAlgebra, f: &FilteredAlgebra, m: &GradedModule, d: usize) -> Result<GradedModule> {
    if d == 0 || !m.len().is_multiple_of(d) || g.n() != d * f.n() {
        return input("lengths do not divide as required");
    }
    for k in 0..=f.n() {
        if !f.same_space(&f.filtration[k], &g.f(-((d * k) as i64))) {
            return input(format!("F^-{k} is not G^-{}", d * k));
        }
    }
    let ad = f.adapted();
    Ok(GradedModule::from_fn(
        f,
        (0..m.len() / d).map(|k| m.dims[k * d]).collect(),
        |k| m.tau(f.field, (k + 1) * d, k * d),
        |b, k| m.action(g, &ad.element(b), (d * ad.level[b]) as i64, k * d),
    ))
}

/// The left adjoint of the Veronese: `ε(M)^i = M^{⌊i/d⌋}` over the stretched filtration.
pub fn epsilon(f: &FilteredAlgebra, m: &GradedModule, d: usize) -> Result<(FilteredAlgebra, GradedModule)> {
    if d == 0 {
        return input("d must be positive");
    }
    let g = f.stretch(d);
    let ad = g.adapted();
    let old = |k: usize| k.div_ceil(d);
    let len = m.len() * d;
    let dims: Vec<usize> = (0..len).map(|k| m.dim(old(k))).collect();
    let module = GradedModule::from_fn(
        &g,
        dims,
        |k| {
            if old(k + 1) == old(k) {
                Matrix::identity(f.field, m.dim(old(k)))
            } else {
                m.tau(f.field, old(k + 1), old(k))
            }
        },
        |b, k| {
            let l = ad.level[b];
            let j = old(k + l) as i64 - old(k) as i64;
            m.action(f, &ad.element(b), j, old(k))
        },
    );
    Ok((g, module))
}

/// `gr_i(M) = M^{-i}`.
pub fn gr(m: &GradedModule, i: usize) -> Result<usize> {
    if i >= m.len() {
        return input(format!("index {i} outside the window"));
    }
    Ok(m.dims[i])
}

#[cfg(test)]
mod tests {
    use super::super::free::{rees_window, truncated_free};
    use super::*;

    #[test]
    fn frees_validate_and_hom_formula() {
        let q = Field::Rational;
        let r = FilteredAlgebra::adic(q, 2);
        let p: Vec<GradedModule> = (0..2).map(|i| truncated_free(&r, i, 2).module).collect();
        for m in &p {
            let rep = m.validate(&r);
            assert!(rep.ok, "{:?}", rep.violations);
        }
        assert_eq!(module_hom(&r, &p[0], &p[1]).unwrap().len(), 1);
        assert_eq!(module_hom(&r, &p[1], &p[0]).unwrap().len(), 1);
        assert_eq!(module_hom(&r, &p[0], &p[0]).unwrap().len(), 2);
        assert_eq!(module_hom(&r, &p[1], &p[1]).unwrap().len(), 1);
    }

    #[test]
    fn truncation_examples() {
        let q = Field::Rational;
        let r = FilteredAlgebra::adic(q, 2);
        let rees = rees_window(&r, 0, 2);
        assert!(rees.validate(&r).ok);
        let l1 = truncate(&r, &rees, 1).unwrap();
        assert_eq!(l1.dims, vec![1]);
        assert_eq!(truncate(&r, &rees, 2).unwrap(), rees);
        let wide = rees_window(&r, 0, 4);
        assert!(wide.validate(&r).ok);
        let l2 = truncate(&r, &wide, 2).unwrap();
        assert_eq!(truncate(&r, &l2, 1).unwrap().dims, truncate(&r, &wide, 1).unwrap().dims);
    }

    #[test]
    fn veronese_of_epsilon() {
        let q = Field::Prime(7);
        let r = FilteredAlgebra::adic(q, 3);
        let m = truncated_free(&r, 1, 3).module;
        let (g, e) = epsilon(&r, &m, 2).unwrap();
        assert!(e.validate(&g).ok, "{:?}", e.validate(&g).violations);
        let back = veronese(&g, &r, &e, 2).unwrap();
        assert_eq!(back, m);
        let tw = twist(&r, &m, 1);
        assert!(tw.validate(&r).ok, "{:?}", tw.validate(&r).violations);
    }
}
