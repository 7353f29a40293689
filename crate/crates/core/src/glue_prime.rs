//! The subcategory Glue′ of twisted complexes over a directed dg category.
//!
//! Objects are `((M_i), (μ_ij))` with `M_i` a twisted complex supported on
//! block `i` and `μ_ij: M_i -> M_j` of degree `i - j + 1`. Here the index
//! order is `(source, target)`, unlike [`TwMor::blocks`] which is
//! `[target][source]`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::Complex;
use crate::dgcat::{basis_vec, DgCat};
use crate::error::{input, invariant, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;
use crate::twisted::{cone_tw, epsilon, epsilon_inv, tw_compose, tw_d, tw_identity, validate_twisted, TwHom, TwMor, TwistedComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpObject {
    pub comps: Vec<TwistedComplex>,
    /// `(i, j)` with `i < j`.
    pub mu: BTreeMap<(usize, usize), TwMor>,
}

/// A homogeneous morphism; `comps[i][j]: M_i -> N_j` has degree `degree + i - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpMor {
    pub degree: i32,
    pub comps: Vec<Vec<TwMor>>,
}

impl GpMor {
    pub fn add(&self, o: &GpMor) -> GpMor {
        GpMor {
            degree: self.degree,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect()).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> GpMor {
        GpMor { degree: self.degree, comps: self.comps.iter().map(|r| r.iter().map(|x| x.scale(s)).collect()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(TwMor::is_zero)
    }
}

/// Glue′ over a base category whose objects are assigned to blocks `0..n`.
pub struct GluePrime<'a, C: DgCat + ?Sized> {
    pub base: &'a C,
    pub block: Vec<usize>,
    pub n: usize,
}

/// The cone of a closed degree-0 morphism together with its structure maps.
#[derive(Clone, Debug)]
pub struct GpCone {
    pub cone: GpObject,
    pub i: GpMor,
    pub p: GpMor,
    pub j: GpMor,
    pub s: GpMor,
}

/// A hom complex of Glue′ with coordinate maps.
#[derive(Clone, Debug)]
pub struct GpHom {
    pub source: GpObject,
    pub target: GpObject,
    homs: Vec<Vec<TwHom>>,
    pub complex: Complex,
}

impl GpHom {
    fn piece(m: i32, i: usize, j: usize) -> i32 {
        m + i as i32 - j as i32
    }

    fn dim(&self, m: i32) -> usize {
        let n = self.homs.len();
        (0..n * n).map(|x| self.homs[x / n][x % n].complex.dim(Self::piece(m, x / n, x % n))).sum()
    }

    pub fn from_coords<C: DgCat + ?Sized>(&self, g: &GluePrime<C>, m: i32, v: &[Scalar]) -> GpMor {
        let mut f = g.zero(&self.source, &self.target, m);
        let mut pos = 0;
        for (i, row) in self.homs.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                let k = h.complex.dim(Self::piece(m, i, j));
                f.comps[i][j] = h.mor_from_coords(g.base, Self::piece(m, i, j), &v[pos..pos + k]);
                pos += k;
            }
        }
        f
    }

    pub fn coords<C: DgCat + ?Sized>(&self, g: &GluePrime<C>, f: &GpMor) -> Vec<Scalar> {
        let mut out = Vec::new();
        for (i, row) in self.homs.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                if h.complex.dim(Self::piece(f.degree, i, j)) > 0 {
                    out.extend(h.coords_of(g.base, &f.comps[i][j]));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpConeReport {
    pub mu_relation: bool,
    pub relations: Vec<(String, bool)>,
    pub ok: bool,
}

impl<'a, C: DgCat + ?Sized> GluePrime<'a, C> {
    pub fn new(base: &'a C, block: Vec<usize>) -> Result<GluePrime<'a, C>> {
        if block.len() != base.num_objects() {
            return input("block assignment does not cover every object");
        }
        let n = block.iter().max().map_or(0, |m| m + 1);
        Ok(GluePrime { base, block, n })
    }

    fn field(&self) -> Field {
        self.base.field()
    }

    fn sign_j(&self, j: usize) -> Scalar {
        self.field().sign((self.n - 1 - j) as i64)
    }

    fn zero_tw(&self, s: &TwistedComplex, t: &TwistedComplex, degree: i32) -> TwMor {
        TwMor::zero(self.base, s, t, degree)
    }

    pub fn zero(&self, s: &GpObject, t: &GpObject, degree: i32) -> GpMor {
        let comps = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.zero_tw(&s.comps[i], &t.comps[j], degree + i as i32 - j as i32)).collect())
            .collect();
        GpMor { degree, comps }
    }

    /// `μ` as a full matrix (zero on and below the diagonal).
    fn mu_full(&self, m: &GpObject) -> GpMor {
        let mut out = self.zero(m, m, 1);
        for (&(i, j), v) in &m.mu {
            out.comps[i][j] = v.clone();
        }
        out
    }

    pub fn validate_object(&self, m: &GpObject) -> Result<()> {
        if m.comps.len() != self.n {
            return input(format!("expected {} components, got {}", self.n, m.comps.len()));
        }
        for (k, t) in m.comps.iter().enumerate() {
            validate_twisted(self.base, t)?;
            if t.terms.iter().any(|x| self.block[x.obj] != k) {
                return input(format!("component {k} uses objects outside block {k}"));
            }
        }
        for (&(i, j), v) in &m.mu {
            if i >= j || j >= self.n {
                return input(format!("μ entry ({i},{j}) is not strictly upper triangular"));
            }
            if v.degree != i as i32 - j as i32 + 1 {
                return input(format!("μ entry ({i},{j}) has degree {}", v.degree));
            }
        }
        if !self.mu_defect(m).is_zero() {
            return invariant("object violates the μ relation");
        }
        Ok(())
    }

    /// `(-1)^{n-1-j} dμ_ij + Σ_k μ_kj μ_ik`, which vanishes on valid objects.
    pub fn mu_defect(&self, m: &GpObject) -> GpMor {
        let mu = self.mu_full(m);
        let mut out = self.zero(m, m, 2);
        for i in 0..self.n {
            for j in 0..self.n {
                let (mi, mj) = (&m.comps[i], &m.comps[j]);
                let mut acc = tw_d(self.base, mi, mj, &mu.comps[i][j]).scale(&self.sign_j(j));
                for k in 0..self.n {
                    acc = acc.add(&tw_compose(self.base, mi, &m.comps[k], mj, &mu.comps[k][j], &mu.comps[i][k]));
                }
                out.comps[i][j] = acc;
            }
        }
        out
    }

    /// `(df)_ij = (-1)^{n-1-j} df_ij + Σ_k (ν_kj f_ik - (-1)^{|f|} f_kj μ_ik)`.
    pub fn d(&self, s: &GpObject, t: &GpObject, f: &GpMor) -> GpMor {
        let (mu, nu) = (self.mu_full(s), self.mu_full(t));
        let sf = self.field().sign(f.degree as i64 + 1);
        let mut out = self.zero(s, t, f.degree + 1);
        for i in 0..self.n {
            for j in 0..self.n {
                let (si, tj) = (&s.comps[i], &t.comps[j]);
                let mut acc = tw_d(self.base, si, tj, &f.comps[i][j]).scale(&self.sign_j(j));
                for k in 0..self.n {
                    acc = acc.add(&tw_compose(self.base, si, &t.comps[k], tj, &nu.comps[k][j], &f.comps[i][k]));
                    let fm = tw_compose(self.base, si, &s.comps[k], tj, &f.comps[k][j], &mu.comps[i][k]);
                    acc = acc.add(&fm.scale(&sf));
                }
                out.comps[i][j] = acc;
            }
        }
        out
    }

    /// `(fg)_ij = Σ_k f_kj g_ik` for `g: l -> m`, `f: m -> t`.
    pub fn compose(&self, l: &GpObject, m: &GpObject, t: &GpObject, f: &GpMor, g: &GpMor) -> GpMor {
        let mut out = self.zero(l, t, f.degree + g.degree);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = out.comps[i][j].clone();
                for k in 0..self.n {
                    acc = acc.add(&tw_compose(self.base, &l.comps[i], &m.comps[k], &t.comps[j], &f.comps[k][j], &g.comps[i][k]));
                }
                out.comps[i][j] = acc;
            }
        }
        out
    }

    pub fn identity(&self, m: &GpObject) -> GpMor {
        let mut out = self.zero(m, m, 0);
        for k in 0..self.n {
            out.comps[k][k] = tw_identity(self.base, &m.comps[k]);
        }
        out
    }

    /// `M[1] = (M_i[1], -μ)`.
    pub fn shift(&self, m: &GpObject) -> GpObject {
        let minus = self.field().int(-1);
        GpObject {
            comps: m.comps.iter().map(|t| t.shift(self.field(), 1)).collect(),
            mu: m.mu.iter().map(|(k, v)| (*k, v.scale(&minus))).collect(),
        }
    }

    /// `ε: M[1] -> M` with identity blocks.
    pub fn epsilon(&self, m: &GpObject) -> GpMor {
        let m1 = self.shift(m);
        let mut out = self.zero(&m1, m, 1);
        for k in 0..self.n {
            out.comps[k][k] = epsilon(self.base, &m.comps[k]);
        }
        out
    }

    /// The hom complex; degree `m` is `⊕_{i,j} tw(M_i, N_j)^{m + i - j}` with `i` outer.
    pub fn hom(&self, s: &GpObject, t: &GpObject) -> Complex {
        self.hom_space(s, t).complex
    }

    pub fn hom_space(&self, s: &GpObject, t: &GpObject) -> GpHom {
        let field = self.field();
        let n = self.n;
        let homs: Vec<Vec<TwHom>> = (0..n).map(|i| (0..n).map(|j| TwHom::new(self.base, &s.comps[i], &t.comps[j])).collect()).collect();
        let (mut lo, mut hi) = (i32::MAX, i32::MIN);
        for i in 0..n {
            for j in 0..n {
                let c = homs[i][j].complex.trimmed();
                if c.total_dim() > 0 {
                    lo = lo.min(c.lo() - i as i32 + j as i32);
                    hi = hi.max(c.hi() - i as i32 + j as i32);
                }
            }
        }
        let mut h = GpHom { source: s.clone(), target: t.clone(), homs, complex: Complex::zero(field) };
        if lo > hi {
            return h;
        }
        let dims: Vec<usize> = (lo..=hi).map(|m| h.dim(m)).collect();
        let diffs = (lo..hi)
            .map(|m| {
                let (n0, n1) = (h.dim(m), h.dim(m + 1));
                let cols: Vec<Vec<Scalar>> =
                    (0..n0).map(|c| h.coords(self, &self.d(s, t, &h.from_coords(self, m, &basis_vec(field, n0, c))))).collect();
                Matrix::from_cols(field, n1, &cols)
            })
            .collect();
        h.complex = Complex::new_unchecked(field, lo, dims, diffs).expect("consistent shapes");
        h
    }

    /// The cone of a closed degree-0 `f: m -> t` built from componentwise cones.
    pub fn cone(&self, m: &GpObject, t: &GpObject, f: &GpMor) -> Result<GpCone> {
        if f.degree != 0 {
            return input("cone of a morphism of nonzero degree");
        }
        if !self.d(m, t, f).is_zero() {
            return input("cone of a morphism that is not closed");
        }
        let b = self.base;
        let cones =
            (0..self.n).map(|k| cone_tw(b, &m.comps[k], &t.comps[k], &f.comps[k][k].scale(&self.sign_j(k)))).collect::<Result<Vec<_>>>()?;
        let m1: Vec<TwistedComplex> = m.comps.iter().map(|x| x.shift(self.field(), 1)).collect();
        let cs: Vec<TwistedComplex> = cones.iter().map(|c| c.cone.clone()).collect();
        let mut gamma = BTreeMap::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (ci, cj) = (&cs[i], &cs[j]);
                let ep_i = tw_compose(b, ci, &m1[i], &m.comps[i], &epsilon(b, &m.comps[i]), &cones[i].p);
                let mut g = self.zero_tw(ci, cj, i as i32 - j as i32 + 1);
                if let Some(mu) = m.mu.get(&(i, j)) {
                    let x = tw_compose(b, ci, &m.comps[i], &m.comps[j], mu, &ep_i);
                    let x = tw_compose(b, ci, &m.comps[j], &m1[j], &epsilon_inv(b, &m.comps[j]), &x);
                    let x = tw_compose(b, ci, &m1[j], cj, &cones[j].i, &x);
                    g = g.sub(&x);
                }
                if let Some(nu) = t.mu.get(&(i, j)) {
                    let x = tw_compose(b, ci, &t.comps[i], &t.comps[j], nu, &cones[i].s);
                    g = g.add(&tw_compose(b, ci, &t.comps[j], cj, &cones[j].j, &x));
                }
                let x = tw_compose(b, ci, &m.comps[i], &t.comps[j], &f.comps[i][j], &ep_i);
                g = g.add(&tw_compose(b, ci, &t.comps[j], cj, &cones[j].j, &x));
                if !g.is_zero() {
                    gamma.insert((i, j), g);
                }
            }
        }
        let cone = GpObject { comps: cs, mu: gamma };
        let m_shift = self.shift(m);
        let diag = |src: &GpObject, tgt: &GpObject, pick: &dyn Fn(usize) -> TwMor| {
            let mut out = self.zero(src, tgt, 0);
            for k in 0..self.n {
                out.comps[k][k] = pick(k);
            }
            out
        };
        Ok(GpCone {
            i: diag(&m_shift, &cone, &|k| cones[k].i.clone()),
            p: diag(&cone, &m_shift, &|k| cones[k].p.clone()),
            j: diag(t, &cone, &|k| cones[k].j.clone()),
            s: diag(&cone, t, &|k| cones[k].s.clone()),
            cone,
        })
    }

    /// Checks the μ relation on the cone and the intrinsic cone identities.
    pub fn check_cone(&self, m: &GpObject, t: &GpObject, f: &GpMor, c: &GpCone) -> GpConeReport {
        let m1 = self.shift(m);
        let cc = &c.cone;
        let mu_relation = self.mu_defect(cc).is_zero();
        let eps = self.epsilon(m);
        let minus = self.field().int(-1);
        let eq = |a: &GpMor, b: &GpMor| a.sub_eq(b);
        let pi = self.compose(&m1, cc, &m1, &c.p, &c.i);
        let sj = self.compose(t, cc, t, &c.s, &c.j);
        let pj = self.compose(t, cc, &m1, &c.p, &c.j);
        let si = self.compose(&m1, cc, t, &c.s, &c.i);
        let ip_js = self.compose(cc, &m1, cc, &c.i, &c.p).add(&self.compose(cc, t, cc, &c.j, &c.s));
        let fe = self.compose(&m1, m, t, f, &eps);
        let jfe = self.compose(&m1, t, cc, &c.j, &fe);
        let fep = self.compose(cc, &m1, t, &fe, &c.p).scale(&minus);
        let relations = vec![
            ("pi = id".to_string(), eq(&pi, &self.identity(&m1))),
            ("sj = id".to_string(), eq(&sj, &self.identity(t))),
            ("pj = 0".to_string(), pj.is_zero()),
            ("si = 0".to_string(), si.is_zero()),
            ("ip + js = id".to_string(), eq(&ip_js, &self.identity(cc))),
            ("d(j) = 0".to_string(), self.d(t, cc, &c.j).is_zero()),
            ("d(p) = 0".to_string(), self.d(cc, &m1, &c.p).is_zero()),
            ("d(i) = jfε".to_string(), eq(&self.d(&m1, cc, &c.i), &jfe)),
            ("d(s) = -fεp".to_string(), eq(&self.d(cc, t, &c.s), &fep)),
        ];
        let ok = mu_relation && relations.iter().all(|r| r.1);
        GpConeReport { mu_relation, relations, ok }
    }
}

impl GpMor {
    fn sub_eq(&self, o: &GpMor) -> bool {
        self.degree == o.degree && self.comps.iter().flatten().zip(o.comps.iter().flatten()).all(|(a, b)| a.sub(b).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::DgCategory;

    fn a2_setup(q: Field) -> (DgCategory, GpObject, GpObject) {
        let c = DgCategory::a2_quiver(q);
        let bare = |o| TwistedComplex::object(o, 0);
        let mut mu = TwMor::zero(&c, &bare(0), &bare(1), 0);
        mu.blocks[0][0] = vec![q.one()];
        let m = GpObject { comps: vec![bare(0), bare(1)], mu: BTreeMap::from([((0, 1), mu)]) };
        let plain = GpObject { comps: vec![bare(0), bare(1)], mu: BTreeMap::new() };
        (c, m, plain)
    }

    #[test]
    fn identity_cone_is_contractible() {
        let q = Field::Rational;
        let (c, m, _) = a2_setup(q);
        let g = GluePrime::new(&c, vec![0, 1]).unwrap();
        g.validate_object(&m).unwrap();
        let id = g.identity(&m);
        let cone = g.cone(&m, &m, &id).unwrap();
        let r = g.check_cone(&m, &m, &id, &cone);
        assert!(r.ok, "{r:?}");
        g.validate_object(&cone.cone).unwrap();
        assert!(g.hom(&cone.cone, &cone.cone).is_acyclic());
        let end = g.hom(&m, &m);
        assert!(!end.is_acyclic());
    }

    #[test]
    fn zero_mu_cone_has_only_cross_term() {
        let q = Field::Rational;
        let (c, _, plain) = a2_setup(q);
        let g = GluePrime::new(&c, vec![0, 1]).unwrap();
        let mut f = g.zero(&plain, &plain, 0);
        f.comps[0][1].blocks[0][0] = vec![q.one()];
        assert!(g.d(&plain, &plain, &f).is_zero());
        let cone = g.cone(&plain, &plain, &f).unwrap();
        assert!(g.check_cone(&plain, &plain, &f, &cone).ok);
        let gamma = &cone.cone.mu[&(0, 1)];
        // only the block from the shifted source of C_0 to the target part of C_1
        let nonzero: Vec<(usize, usize)> =
            (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).filter(|&(a, b)| !crate::linalg::is_zero_vec(&gamma.blocks[a][b])).collect();
        assert_eq!(nonzero, vec![(0, 1)]);
    }
}
