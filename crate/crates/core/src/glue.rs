//! The generalised arrow category of a punctured cube, the glued category,
//! the functor π from the initial vertex, and the quasi-full-faithfulness test.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, GradedMap, InducedMap};
use crate::dgcat::{basis_vec, DgCat, DgCategory};
use crate::error::{input, Result};
use crate::field::{Field, Scalar};
use crate::hypercube::{bit, DgCube};
use crate::linalg::{axpy, is_zero_vec, Matrix};
use crate::twisted::{tw_category, TwHom, TwMor, TwistedComplex};

/// Mask of `{i, …, j}`.
pub fn interval(i: usize, j: usize) -> u32 {
    (i..=j).map(bit).sum()
}

/// `J_ij`: masks containing `i` and `j` and contained in `{i, …, j}`.
pub fn j_shape(i: usize, j: usize) -> Vec<u32> {
    let (ends, span) = (bit(i) | bit(j), interval(i, j));
    (0..=span).filter(|m| m & ends == ends && m & !span == 0).collect()
}

#[derive(Clone, Debug)]
struct Summand {
    x: usize,
    y: usize,
    /// Position of each basis vector of `A_I(x, y)` in the Gac hom.
    emb: Vec<usize>,
}

#[derive(Clone, Debug)]
struct GacHom {
    complex: Complex,
    summands: BTreeMap<u32, Summand>,
}

/// `Gac` of the punctured cube; homs are computed on first use.
pub struct Gac<'a> {
    pub cube: &'a DgCube,
    objs: Vec<(usize, usize)>,
    start: Vec<usize>,
    homs: Vec<OnceLock<GacHom>>,
}

fn gather(v: &[Scalar], emb: &[usize]) -> Vec<Scalar> {
    emb.iter().map(|&p| v[p].clone()).collect()
}

impl<'a> Gac<'a> {
    pub fn new(cube: &'a DgCube) -> Result<Gac<'a>> {
        let n = cube.n();
        if n == 0 {
            return input("gluing needs a cube of dimension at least 1");
        }
        let mut objs = Vec::new();
        let mut start = Vec::new();
        for i in 0..n {
            start.push(objs.len());
            for x in 0..cube.vertex(bit(i)).num_objects() {
                objs.push((i, x));
            }
        }
        let homs = (0..objs.len() * objs.len()).map(|_| OnceLock::new()).collect();
        Ok(Gac { cube, objs, start, homs })
    }

    /// Global index of object `x` of `A_{i}`.
    pub fn object(&self, i: usize, x: usize) -> usize {
        self.start[i] + x
    }

    /// `(block, local index)` of a global object.
    pub fn locate(&self, a: usize) -> (usize, usize) {
        self.objs[a]
    }

    fn gac_hom(&self, a: usize, b: usize) -> &GacHom {
        self.homs[a * self.objs.len() + b].get_or_init(|| self.build_hom(a, b))
    }

    fn build_hom(&self, a: usize, b: usize) -> GacHom {
        let ((i, x), (j, y)) = (self.objs[a], self.objs[b]);
        let field = self.cube.field();
        if i > j {
            return GacHom { complex: Complex::zero(field), summands: BTreeMap::new() };
        }
        let cc = self.cube.hom_cube(&j_shape(i, j), bit(i), x, bit(j), y).expect("Gac hom cube is well formed");
        let complex = cc.totalize();
        let full = cc.full();
        let mut summands = BTreeMap::new();
        for (&m, v) in &cc.raw.vertices {
            let s = (full & !m).count_ones() as i32;
            let emb = (0..v.total_dim())
                .map(|q| {
                    let p = v.degree_of(q);
                    complex.offset(p - s) + cc.summand_offsets(p - s)[&m] + q - v.offset(p)
                })
                .collect();
            let (xm, ym) = (self.cube.push(bit(i), x, m), self.cube.push(bit(j), y, m));
            summands.insert(m, Summand { x: xm, y: ym, emb });
        }
        GacHom { complex, summands }
    }

    /// The component `f_I` of `f ∈ hom(a, b)` as an element of `A_I`.
    pub fn component(&self, a: usize, b: usize, m: u32, f: &[Scalar]) -> Option<Vec<Scalar>> {
        self.gac_hom(a, b).summands.get(&m).map(|s| gather(f, &s.emb))
    }

    /// Embeds an element of `A_I(x_I, y_I)` as the `I` summand of `hom(a, b)`.
    pub fn embed(&self, a: usize, b: usize, m: u32, v: &[Scalar]) -> Vec<Scalar> {
        let h = self.gac_hom(a, b);
        let mut out = vec![self.field().zero(); h.complex.total_dim()];
        for (q, &p) in h.summands[&m].emb.iter().enumerate() {
            out[p] = v[q].clone();
        }
        out
    }

    /// Positions of the `I` summand of `hom(a, b)`.
    pub fn summand_positions(&self, a: usize, b: usize, m: u32) -> &[usize] {
        &self.gac_hom(a, b).summands[&m].emb
    }
}

impl DgCat for Gac<'_> {
    fn field(&self) -> Field {
        self.cube.field()
    }
    fn num_objects(&self) -> usize {
        self.objs.len()
    }
    fn label(&self, a: usize) -> String {
        let (i, x) = self.objs[a];
        format!("{i}:{}", self.cube.vertex(bit(i)).label(x))
    }
    fn hom(&self, a: usize, b: usize) -> &Complex {
        &self.gac_hom(a, b).complex
    }

    /// `g_{I'} ∘ f_I = (-1)^{|g_{I'}| |{i..j} \ I|} V(g_{I'}) V(f_I)` in the `I ∪ I'` summand.
    fn compose(&self, a: usize, b: usize, c: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let (hf, hg, hgf) = (self.gac_hom(a, b), self.gac_hom(b, c), self.gac_hom(a, c));
        let mut out = vec![field.zero(); hgf.complex.total_dim()];
        if out.is_empty() {
            return out;
        }
        let ((i, _), (j, _)) = (self.objs[a], self.objs[b]);
        let span = interval(i, j);
        for (&mi, sf) in &hf.summands {
            let fi = gather(f, &sf.emb);
            if is_zero_vec(&fi) {
                continue;
            }
            let gap = (span & !mi).count_ones() as i64;
            for (&mj, sg) in &hg.summands {
                let gj = gather(g, &sg.emb);
                if is_zero_vec(&gj) {
                    continue;
                }
                let u = mi | mj;
                let target = &hgf.summands[&u];
                let vu = self.cube.vertex(u);
                let fu = self.cube.functor(mi, u).apply(sf.x, sf.y, &fi);
                let ymid = self.cube.functor(mi, u).obj_map[sf.y];
                let gu = self.cube.functor(mj, u).apply(sg.x, sg.y, &gj);
                let hom_g = vu.hom(ymid, target.y);
                for p in hom_g.degrees() {
                    let o = hom_g.offset(p);
                    let mut piece = vec![field.zero(); gu.len()];
                    piece[o..o + hom_g.dim(p)].clone_from_slice(&gu[o..o + hom_g.dim(p)]);
                    if is_zero_vec(&piece) {
                        continue;
                    }
                    let r = vu.compose(target.x, ymid, target.y, &piece, &fu);
                    let sgn = field.sign(p as i64 * gap);
                    for (q, x) in r.iter().enumerate() {
                        if !x.is_zero() {
                            out[target.emb[q]] = &out[target.emb[q]] + &(x * &sgn);
                        }
                    }
                }
            }
        }
        out
    }

    fn identity(&self, a: usize) -> Vec<Scalar> {
        let (i, x) = self.objs[a];
        self.embed(a, a, bit(i), &self.cube.vertex(bit(i)).identity(x))
    }
}

/// `Glue = tw(Gac)` on the listed twisted complexes.
pub fn glue(cube: &DgCube, objs: Vec<TwistedComplex>) -> Result<DgCategory> {
    let gac = Gac::new(cube)?;
    tw_category(&gac, objs)
}

/// `π(a) = (⊕_i V_{n-1-i} a [i], α)` with `α_{ji} = (-1)^j · 1` for `j < i`.
pub fn pi_object(gac: &Gac, a: usize) -> TwistedComplex {
    let cube = gac.cube;
    let n = cube.n();
    let field = gac.field();
    let mut t = TwistedComplex { terms: Vec::new(), delta: BTreeMap::new() };
    for i in 0..n {
        let comp = n - 1 - i;
        let x = gac.object(comp, cube.push(0, a, bit(comp)));
        t.terms.push(crate::twisted::ShiftedObject { obj: x, shift: i as i32 });
    }
    for i in 0..n {
        for j in 0..i {
            let (ci, cj) = (n - 1 - i, n - 1 - j);
            let u = bit(ci) | bit(cj);
            let au = cube.push(0, a, u);
            let id = cube.vertex(u).identity(au);
            let v = gac.embed(t.terms[i].obj, t.terms[j].obj, u, &id);
            t.delta.insert((j, i), v.iter().map(|x| x * &field.sign(j as i64)).collect());
        }
    }
    t
}

/// `π f = ⊕_i (-1)^{(n-1-i)|f|} V_i f` for homogeneous `f ∈ A_∅(a, b)` of degree `deg`.
pub fn pi_morphism(gac: &Gac, a: usize, b: usize, deg: i32, f: &[Scalar]) -> TwMor {
    let cube = gac.cube;
    let n = cube.n();
    let (pa, pb) = (pi_object(gac, a), pi_object(gac, b));
    let mut m = TwMor::zero(gac, &pa, &pb, deg);
    for t in 0..n {
        let comp = n - 1 - t;
        let v = cube.functor(0, bit(comp)).apply(a, b, f);
        let e = gac.embed(pa.terms[t].obj, pb.terms[t].obj, bit(comp), &v);
        let s = gac.field().sign(t as i64 * deg as i64);
        m.blocks[t][t] = e.iter().map(|x| x * &s).collect();
    }
    m
}

/// π on `A_∅(a, b)` as a degree-0 map into `Hom_Glue(πa, πb)`.
pub fn pi_hom_map(gac: &Gac, a: usize, b: usize) -> Result<(TwHom, GradedMap)> {
    let field = gac.field();
    let (pa, pb) = (pi_object(gac, a), pi_object(gac, b));
    let th = TwHom::new(gac, &pa, &pb);
    let src = gac.cube.vertex(0).hom(a, b);
    let cols: Vec<Vec<Scalar>> = (0..src.total_dim())
        .map(|q| {
            let e = basis_vec(field, src.total_dim(), q);
            th.total_of(gac, &pi_morphism(gac, a, b, src.degree_of(q), &e))
        })
        .collect();
    let m = Matrix::from_cols(field, th.complex.total_dim(), &cols);
    let g = GradedMap::from_total(src, &th.complex, 0, &m)?;
    Ok((th, g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QffPair {
    pub source: String,
    pub target: String,
    pub source_cohomology: BTreeMap<i32, usize>,
    pub glue_cohomology: BTreeMap<i32, usize>,
    pub induced: Vec<InducedMap>,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QffReport {
    pub qff: bool,
    pub pairs: Vec<QffPair>,
}

/// Whether π induces isomorphisms on the cohomology of every hom complex.
pub fn check_qff(cube: &DgCube) -> Result<QffReport> {
    let gac = Gac::new(cube)?;
    let a0 = cube.vertex(0);
    let n = a0.num_objects();
    let pairs = (0..n * n)
        .into_par_iter()
        .map(|t| {
            let (a, b) = (t / n, t % n);
            let (th, g) = pi_hom_map(&gac, a, b)?;
            let induced = g.induced_on_cohomology();
            Ok(QffPair {
                source: a0.label(a),
                target: a0.label(b),
                source_cohomology: a0.hom(a, b).cohomology(),
                glue_cohomology: th.complex.cohomology(),
                iso: induced.iter().all(InducedMap::is_iso),
                induced,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QffReport { qff: pairs.iter().all(|p| p.iso), pairs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomIsoReport {
    pub chain_map: bool,
    pub bijective: bool,
    pub triangle_commutes: bool,
    pub ok: bool,
}

/// The comparison `t(A°)(a, b)[1] -> Hom_Glue(πa, πb)[n]`.
///
/// On the `I ∈ J_ij` summand it is the sign
/// `(-1)^{(n-i-1)|f| + (n-1)|I| - i}` times the identity on `f`.
pub fn hom_iso_map(gac: &Gac, a: usize, b: usize) -> Result<(Complex, TwHom, Matrix)> {
    let cube = gac.cube;
    let n = cube.n();
    let field = gac.field();
    let shape: Vec<u32> = (1..(1u32 << n)).collect();
    let cc = cube.hom_cube(&shape, 0, a, 0, b)?;
    let tp = cc.totalize();
    let (pa, pb) = (pi_object(gac, a), pi_object(gac, b));
    let th = TwHom::new(gac, &pa, &pb);
    let mut m = Matrix::zeros(field, th.complex.total_dim(), tp.total_dim());
    for (&mask, v) in &cc.raw.vertices {
        let i = mask.trailing_zeros() as usize;
        let j = 31 - mask.leading_zeros() as usize;
        let s = (n as i32) - mask.count_ones() as i32;
        // source term of component i is term n-1-i; target term of component j is term n-1-j
        let (ti, tj) = (n - 1 - i, n - 1 - j);
        let emb = gac.summand_positions(pa.terms[ti].obj, pb.terms[tj].obj, mask);
        for q in 0..v.total_dim() {
            let p = v.degree_of(q);
            let k = p - s;
            let row_src = tp.offset(k) + cc.summand_offsets(k)[&mask] + q - v.offset(p);
            let base_idx = emb[q];
            let row_tgt = th.position(gac, tj, ti, base_idx);
            let e = (n as i64 - i as i64 - 1) * p as i64 + (n as i64 - 1) * mask.count_ones() as i64 - i as i64;
            m.set(row_tgt, row_src, field.sign(e));
        }
    }
    Ok((tp, th, m))
}

/// Checks that [`hom_iso_map`] is a chain isomorphism and that it carries
/// `δ(f) = Σ_i (-1)^{n-1-i} V_i f` to `π f`.
pub fn hom_iso_check(cube: &DgCube, a: usize, b: usize) -> Result<HomIsoReport> {
    let gac = Gac::new(cube)?;
    let n = cube.n() as i32;
    let field = gac.field();
    let (tp, th, m) = hom_iso_map(&gac, a, b)?;
    let src = tp.shift(1);
    let tgt = th.complex.shift(n);
    let chain_map = GradedMap::from_total(&src, &tgt, 0, &m).map(|g| g.is_closed()).unwrap_or(false);
    let bijective = m.rows() == m.cols() && m.rank() == m.rows();
    // δ on each basis vector of A_∅(a, b)
    let shape: Vec<u32> = (1..(1u32 << cube.n())).collect();
    let cc = cube.hom_cube(&shape, 0, a, 0, b)?;
    let hom0 = cube.vertex(0).hom(a, b);
    let (_, pim) = pi_hom_map(&gac, a, b)?;
    let pim = pim.total_matrix();
    let mut triangle_commutes = true;
    for q in 0..hom0.total_dim() {
        let e = basis_vec(field, hom0.total_dim(), q);
        let mut delta = vec![field.zero(); tp.total_dim()];
        for i in 0..cube.n() {
            let mask = bit(i);
            let v = cube.functor(0, mask).apply(a, b, &e);
            let vc = cc.vertex(mask);
            let s = n - 1;
            let sgn = field.sign((cube.n() - 1 - i) as i64);
            let mut piece = vec![field.zero(); tp.total_dim()];
            for (x, val) in v.iter().enumerate() {
                if !val.is_zero() {
                    let pp = vc.degree_of(x);
                    let k = pp - s;
                    piece[tp.offset(k) + cc.summand_offsets(k)[&mask] + x - vc.offset(pp)] = val.clone();
                }
            }
            axpy(&mut delta, &sgn, &piece);
        }
        if m.mul_vec(&delta) != pim.mul_vec(&e) {
            triangle_commutes = false;
        }
    }
    Ok(HomIsoReport { chain_map, bijective, triangle_commutes, ok: chain_map && bijective && triangle_commutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::{validate_category, DgFunctor};
    use crate::twisted::validate_twisted;

    fn unit_inclusion(q: Field) -> DgCube {
        let a = DgCategory::unit(q);
        let b = DgCategory::truncated_polynomial(q, 2);
        let f = DgFunctor::from_fn(&a, &b, vec![0], |_, _| Matrix::from_ints(q, &[&[1], &[0]])).unwrap();
        DgCube::new(1, BTreeMap::from([(0, a), (1, b)]), BTreeMap::from([((0, 0), f)])).unwrap()
    }

    fn identity_square(c: &DgCategory) -> DgCube {
        let v = (0..4).map(|m| (m, c.clone())).collect();
        let id = DgFunctor::identity(c);
        let e = [(0, 0), (0, 1), (1, 1), (2, 0)].into_iter().map(|k| (k, id.clone())).collect();
        DgCube::new(2, v, e).unwrap()
    }

    #[test]
    fn shapes() {
        assert_eq!(j_shape(0, 0), vec![1]);
        assert_eq!(j_shape(0, 2), vec![5, 7]);
        assert_eq!(j_shape(1, 3), vec![10, 14]);
    }

    #[test]
    fn one_cube_negative_witness() {
        let q = Field::Rational;
        let cube = unit_inclusion(q);
        let r = check_qff(&cube).unwrap();
        assert!(!r.qff);
        assert_eq!(r.pairs[0].source_cohomology, BTreeMap::from([(0, 1)]));
        assert_eq!(r.pairs[0].glue_cohomology, BTreeMap::from([(0, 2)]));
        assert!(hom_iso_check(&cube, 0, 0).unwrap().ok);
    }

    #[test]
    fn identity_square_glues() {
        let q = Field::Rational;
        let c = DgCategory::a2_quiver(q);
        let cube = identity_square(&c);
        let gac = Gac::new(&cube).unwrap();
        let rep = validate_category(&gac);
        assert!(rep.ok, "{:?}", rep.violations);
        for a in 0..2 {
            validate_twisted(&gac, &pi_object(&gac, a)).unwrap();
        }
        assert!(check_qff(&cube).unwrap().qff);
        assert!(cube.check_acyclic().unwrap().acyclic);
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let r = hom_iso_check(&cube, a, b).unwrap();
            assert!(r.ok, "{a},{b}: {r:?}");
        }
    }
}
