//! Seeded generators for complexes, cubes, twisted complexes and Glue′ data.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, GradedMap};
use crate::dgcat::{basis_vec, materialize, DgCat, DgCategory, DgFunctor, Table};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::filtlab::free::FreeSum;
use crate::filtlab::module::{generate, quotient, GradedModule};
use crate::filtlab::{FilteredAlgebra, RefinementData};
use crate::glue::Gac;
use crate::glue_prime::{GluePrime, GpMor, GpObject};
use crate::hypercube::{bit, ComplexCube, DgCube};
use crate::linalg::Matrix;
use crate::twisted::{cone_tw, tw_compose, TwHom, TwMor, TwistedComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar(field: Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => field.int(rng.gen_range(-2..=2)),
        Field::Prime(p) => field.int(rng.gen_range(0..p as i64)),
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut impl Rng) -> Scalar {
    loop {
        let s = scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn matrix(field: Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| scalar(field, rng))
}

/// A random invertible matrix and its inverse.
pub fn invertible(field: Field, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let l = Matrix::from_fn(field, n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Greater => scalar(field, rng),
        std::cmp::Ordering::Equal => field.one(),
        std::cmp::Ordering::Less => field.zero(),
    });
    let u = Matrix::from_fn(field, n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => scalar(field, rng),
        std::cmp::Ordering::Equal => nonzero_scalar(field, rng),
        std::cmp::Ordering::Greater => field.zero(),
    });
    let g = l.mul(&u);
    let inv = g.inverse().expect("unit triangular factors are invertible");
    (g, inv)
}

/// Random linear combination of the columns of `basis`.
pub fn combination(field: Field, basis: &Matrix, rng: &mut impl Rng) -> Vec<Scalar> {
    let coeffs: Vec<Scalar> = (0..basis.cols()).map(|_| scalar(field, rng)).collect();
    basis.mul_vec(&coeffs)
}

/// A random cocycle in degree `m`, as coordinates in that degree.
pub fn cocycle(h: &Complex, m: i32, rng: &mut impl Rng) -> Vec<Scalar> {
    let field = h.field();
    if h.dim(m) == 0 {
        return Vec::new();
    }
    combination(field, &h.d(m).kernel_basis(), rng)
}

/// A complex on `[lo, hi]` with at most `max_dim` basis vectors per degree.
///
/// Built from contractible pairs and single classes, then conjugated degreewise.
pub fn complex(field: Field, rng: &mut impl Rng, lo: i32, hi: i32, max_dim: usize, max_total: usize) -> Complex {
    let len = (hi - lo + 1) as usize;
    let mut dims = vec![0usize; len];
    let mut pairs = Vec::new();
    let target = rng.gen_range(1..=max_total.max(1));
    let mut total = 0;
    for _ in 0..4 * target {
        if total >= target {
            break;
        }
        let k = rng.gen_range(0..len);
        if rng.gen_bool(0.5) && k + 1 < len && total + 2 <= max_total {
            if dims[k] < max_dim && dims[k + 1] < max_dim {
                pairs.push((k, dims[k], dims[k + 1]));
                dims[k] += 1;
                dims[k + 1] += 1;
                total += 2;
            }
        } else if dims[k] < max_dim {
            dims[k] += 1;
            total += 1;
        }
    }
    let gs: Vec<(Matrix, Matrix)> = dims.iter().map(|&n| invertible(field, n, rng)).collect();
    let diffs = (0..len.saturating_sub(1))
        .map(|k| {
            let mut m = Matrix::zeros(field, dims[k + 1], dims[k]);
            for &(pk, a, b) in &pairs {
                if pk == k {
                    m.set(b, a, field.one());
                }
            }
            gs[k + 1].0.mul(&m).mul(&gs[k].1)
        })
        .collect();
    Complex::new(field, lo, dims, diffs).expect("conjugated pairs square to zero")
}

/// A random closed degree-0 map `a -> b`.
pub fn chain_map(a: &Complex, b: &Complex, rng: &mut impl Rng) -> GradedMap {
    let field = a.field();
    let shapes: Vec<(i32, usize, usize)> = a.degrees().map(|k| (k, b.dim(k), a.dim(k))).collect();
    let unknowns: usize = shapes.iter().map(|&(_, r, c)| r * c).sum();
    let build = |v: &[Scalar]| -> GradedMap {
        let mut pos = 0;
        let comps = shapes
            .iter()
            .map(|&(_, r, c)| {
                let m = Matrix::from_fn(field, r, c, |i, j| v[pos + i * c + j].clone());
                pos += r * c;
                m
            })
            .collect();
        GradedMap::new(a.clone(), b.clone(), 0, comps).expect("shapes match")
    };
    if unknowns == 0 {
        return GradedMap::zero(a, b, 0);
    }
    let cols: Vec<Vec<Scalar>> = (0..unknowns)
        .map(|u| {
            let mut v = vec![field.zero(); unknowns];
            v[u] = field.one();
            build(&v).differential().total_matrix().data().to_vec()
        })
        .collect();
    let rows = cols[0].len();
    let kernel = Matrix::from_cols(field, rows, &cols).kernel_basis();
    build(&combination(field, &kernel, rng))
}

/// `⊗_l f_l` as a cube; the vertex at `I` uses targets for `l ∈ I`.
pub fn tensor_cube(maps: &[GradedMap]) -> Result<ComplexCube> {
    let n = maps.len();
    let field = maps[0].source.field();
    let factor = |mask: u32, l: usize| -> GradedMap {
        if mask & bit(l) != 0 {
            GradedMap::identity(&maps[l].target)
        } else {
            GradedMap::identity(&maps[l].source)
        }
    };
    let fold = |parts: Vec<GradedMap>| -> GradedMap {
        let mut it = parts.into_iter();
        let first = it.next().expect("at least one factor");
        it.fold(first, |acc, g| GradedMap::tensor(&acc, &g))
    };
    let mut vertices = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for mask in 0..(1u32 << n) {
        vertices.insert(mask, fold((0..n).map(|l| factor(mask, l)).collect()).source);
        for l in (0..n).filter(|&l| mask & bit(l) == 0) {
            let parts = (0..n).map(|m| if m == l { maps[l].clone() } else { factor(mask, m) }).collect();
            edges.insert((mask, l), fold(parts));
        }
    }
    ComplexCube::new(field, n, vertices, edges)
}

/// A tensor cube of random chain maps between small complexes.
pub fn complex_cube(field: Field, rng: &mut impl Rng, n: usize, max_vertex_dim: usize) -> ComplexCube {
    let per = ((max_vertex_dim as f64).powf(1.0 / n as f64).floor() as usize).max(1);
    let maps: Vec<GradedMap> = (0..n)
        .map(|_| {
            let a = complex(field, rng, -1, 1, 2, per);
            let b = complex(field, rng, -1, 1, 2, per);
            chain_map(&a, &b, rng)
        })
        .collect();
    tensor_cube(&maps).expect("tensor cubes commute")
}

/// A complex whose basis carries weights; `d` never lowers weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedComplex {
    pub degree: Vec<i32>,
    pub weight: Vec<usize>,
    /// Total matrix, basis sorted by degree.
    pub d: Matrix,
}

impl WeightedComplex {
    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }
}

pub fn weighted_complex(field: Field, rng: &mut impl Rng, max_len: usize, max_weight: usize) -> WeightedComplex {
    let mut basis: Vec<(i32, usize)> = Vec::new();
    let mut arrows = Vec::new();
    let target = rng.gen_range(1..=max_len.max(1));
    while basis.len() < target {
        let k = rng.gen_range(-1..=1);
        let w = rng.gen_range(0..=max_weight);
        if basis.len() + 2 <= target && rng.gen_bool(0.5) {
            let w2 = rng.gen_range(w..=max_weight);
            arrows.push((basis.len(), basis.len() + 1));
            basis.push((k, w));
            basis.push((k + 1, w2));
        } else {
            basis.push((k, w));
        }
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| basis[i].0);
    let pos: Vec<usize> = {
        let mut p = vec![0; basis.len()];
        for (new, &old) in order.iter().enumerate() {
            p[old] = new;
        }
        p
    };
    let degree: Vec<i32> = order.iter().map(|&i| basis[i].0).collect();
    let weight: Vec<usize> = order.iter().map(|&i| basis[i].1).collect();
    let n = degree.len();
    let mut d = Matrix::zeros(field, n, n);
    for (x, y) in arrows {
        d.set(pos[y], pos[x], field.one());
    }
    let g = Matrix::from_fn(field, n, n, |y, x| {
        if y == x {
            field.one()
        } else if degree[y] == degree[x] && weight[y] > weight[x] {
            scalar(field, rng)
        } else {
            field.zero()
        }
    });
    let gi = g.inverse().expect("unipotent");
    WeightedComplex { degree, weight, d: g.mul(&d).mul(&gi) }
}

/// Basis of the quotient hom from `a` to `b`: pairs `(x, y)` with `0 <= w(y) - w(x) < p`.
fn quotient_basis(a: &WeightedComplex, b: &WeightedComplex, p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..a.len() {
        for y in 0..b.len() {
            if b.weight[y] >= a.weight[x] && b.weight[y] - a.weight[x] < p {
                out.push((x, y));
            }
        }
    }
    out.sort_by_key(|&(x, y)| b.degree[y] - a.degree[x]);
    out
}

/// Weight-nondecreasing maps between the objects modulo those raising weight by at least `p`.
pub fn weighted_quotient(field: Field, objs: &[WeightedComplex], p: usize) -> DgCategory {
    assert!(p >= 1, "the quotient must keep identities");
    let n = objs.len();
    let bases: Vec<Vec<(usize, usize)>> = (0..n * n).map(|t| quotient_basis(&objs[t / n], &objs[t % n], p)).collect();
    let index: Vec<HashMap<(usize, usize), usize>> = bases.iter().map(|b| b.iter().enumerate().map(|(i, &e)| (e, i)).collect()).collect();
    let homs: Vec<Complex> = (0..n * n)
        .map(|t| {
            let (a, b) = (&objs[t / n], &objs[t % n]);
            let basis = &bases[t];
            if basis.is_empty() {
                return Complex::zero(field);
            }
            let deg = |&(x, y): &(usize, usize)| b.degree[y] - a.degree[x];
            let lo = deg(&basis[0]);
            let hi = deg(basis.last().unwrap());
            let dims: Vec<usize> = (lo..=hi).map(|k| basis.iter().filter(|e| deg(e) == k).count()).collect();
            let start = |k: i32| -> usize { basis.iter().filter(|e| deg(e) < k).count() };
            let diffs = (lo..hi)
                .map(|k| {
                    let (s0, s1) = (start(k), start(k + 1));
                    let mut m = Matrix::zeros(field, dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
                    let sign = field.sign(k as i64 + 1);
                    for (c, &(x, y)) in basis[s0..s1].iter().enumerate() {
                        for y2 in 0..b.len() {
                            let v = b.d.get(y2, y);
                            if let (false, Some(&r)) = (v.is_zero(), index[t].get(&(x, y2))) {
                                m.add_at(r - s1, c, v);
                            }
                        }
                        for x0 in 0..a.len() {
                            let v = a.d.get(x, x0);
                            if let (false, Some(&r)) = (v.is_zero(), index[t].get(&(x0, y))) {
                                m.add_at(r - s1, c, &(v * &sign));
                            }
                        }
                    }
                    m
                })
                .collect();
            Complex::new(field, lo, dims, diffs).expect("weight quotient is a complex")
        })
        .collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (g, f, gf) = (&bases[b * n + c], &bases[a * n + b], &index[a * n + c]);
                let mut t = Table::zero(g.len(), f.len(), bases[a * n + c].len());
                for (i, &(y1, z)) in g.iter().enumerate() {
                    for (j, &(x, y)) in f.iter().enumerate() {
                        if y1 == y {
                            if let Some(&k) = gf.get(&(x, z)) {
                                t.entries[i * f.len() + j] = vec![(k, field.one())];
                            }
                        }
                    }
                }
                comp.insert((a, b, c), t);
            }
        }
    }
    let ids = (0..n)
        .map(|a| {
            let mut v = vec![field.zero(); bases[a * n + a].len()];
            for x in 0..objs[a].len() {
                v[index[a * n + a][&(x, x)]] = field.one();
            }
            v
        })
        .collect();
    let labels = (0..n).map(|a| format!("X{a}")).collect();
    DgCategory::new(field, labels, homs, comp, ids).expect("shapes are consistent")
}

/// The projection from the quotient at `p` to the quotient at `q <= p`.
pub fn weighted_projection(field: Field, objs: &[WeightedComplex], p: usize, q: usize) -> DgFunctor {
    let n = objs.len();
    let hom = (0..n * n)
        .map(|t| {
            let src = quotient_basis(&objs[t / n], &objs[t % n], p);
            let tgt = quotient_basis(&objs[t / n], &objs[t % n], q);
            Matrix::from_fn(field, tgt.len(), src.len(), |r, c| if tgt[r] == src[c] { field.one() } else { field.zero() })
        })
        .collect();
    DgFunctor { obj_map: (0..n).collect(), hom }
}

/// Cube of weight quotients; `p` must not increase along edges.
pub fn weighted_cube(field: Field, objs: &[WeightedComplex], n: usize, p: &BTreeMap<u32, usize>) -> Result<DgCube> {
    let vertices = p.iter().map(|(&m, &pm)| (m, weighted_quotient(field, objs, pm))).collect();
    let mut edges = BTreeMap::new();
    for (&m, &pm) in p {
        for l in (0..n).filter(|&l| m & bit(l) == 0) {
            edges.insert((m, l), weighted_projection(field, objs, pm, p[&(m | bit(l))]));
        }
    }
    DgCube::new(n, vertices, edges)
}

/// A random cube of weight quotients.
///
/// With `constant_direction` one coordinate leaves the truncation unchanged,
/// which makes the cube acyclic.
pub fn dg_cube(field: Field, rng: &mut impl Rng, n: usize, constant_direction: bool) -> DgCube {
    let max_weight = n.max(2);
    let nobj = rng.gen_range(1..=2);
    let max_len = if n >= 4 { 2 } else { 3 };
    let objs: Vec<WeightedComplex> = (0..nobj).map(|_| weighted_complex(field, rng, max_len, max_weight)).collect();
    let p0 = max_weight + 1;
    let mut c: Vec<usize> = (0..n).map(|_| if rng.gen_bool(0.75) { 1 } else { 2 }).collect();
    if constant_direction {
        c[rng.gen_range(0..n)] = 0;
    }
    let p = (0..(1u32 << n))
        .map(|m| {
            let drop: usize = (0..n).filter(|&l| m & bit(l) != 0).map(|l| c[l]).sum();
            (m, p0.saturating_sub(drop).max(1))
        })
        .collect();
    weighted_cube(field, &objs, n, &p).expect("projections commute")
}

/// The 1-cube `k -> k[x]/x^a` given by the unit.
pub fn unit_inclusion_cube(field: Field, a: usize) -> DgCube {
    let k = DgCategory::unit(field);
    let t = DgCategory::truncated_polynomial(field, a);
    let f =
        DgFunctor::from_fn(&k, &t, vec![0], |_, _| Matrix::from_fn(field, a, 1, |r, _| if r == 0 { field.one() } else { field.zero() }))
            .expect("unit has the right shape");
    DgCube::new(1, BTreeMap::from([(0, k), (1, t)]), BTreeMap::from([((0, 0), f)])).expect("the unit is a functor")
}

/// Iterated cones of random closed maps between shifted objects from `objs`.
pub fn twisted<C: DgCat + ?Sized>(c: &C, rng: &mut impl Rng, objs: &[usize], cones: usize) -> TwistedComplex {
    let field = c.field();
    let pick = |rng: &mut dyn rand::RngCore| TwistedComplex::object(objs[rng.gen_range(0..objs.len())], rng.gen_range(-1..=1));
    let mut t = pick(rng);
    for _ in 0..cones {
        let s = pick(rng);
        let (src, tgt) = if rng.gen_bool(0.5) { (s, t.clone()) } else { (t.clone(), s) };
        let h = TwHom::new(c, &src, &tgt);
        let f = h.mor_from_coords(c, 0, &cocycle(&h.complex, 0, rng));
        t = cone_tw(c, &src, &tgt, &f).expect("closed degree-0 map").cone;
        if rng.gen_bool(0.3) {
            t = t.shift(field, rng.gen_range(-1..=1));
        }
    }
    t
}

/// A random Glue′ object over `gp`; higher `μ` are solved for when possible.
pub fn glue_prime_object<C: DgCat + ?Sized>(gp: &GluePrime<C>, rng: &mut impl Rng) -> GpObject {
    let n = gp.n;
    let c = gp.base;
    let blocks: Vec<Vec<usize>> = (0..n).map(|k| (0..gp.block.len()).filter(|&x| gp.block[x] == k).collect()).collect();
    let comps: Vec<TwistedComplex> = blocks
        .iter()
        .map(|b| {
            let cones = rng.gen_range(0..=1);
            twisted(c, rng, b, cones)
        })
        .collect();
    let homs: BTreeMap<(usize, usize), TwHom> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), TwHom::new(c, &comps[i], &comps[j]))).collect();
    for attempt in 0..12 {
        let mut mu: BTreeMap<(usize, usize), TwMor> = BTreeMap::new();
        let mut ok = true;
        for len in 1..n {
            for i in 0..n - len {
                let j = i + len;
                let h = &homs[&(i, j)];
                let deg = i as i32 - j as i32 + 1;
                let closed = if len == 1 && (attempt < 10 || i == 0) {
                    h.mor_from_coords(c, deg, &cocycle(&h.complex, deg, rng))
                } else {
                    TwMor::zero(c, &comps[i], &comps[j], deg)
                };
                if len == 1 {
                    mu.insert((i, j), closed);
                    continue;
                }
                let mut rhs = TwMor::zero(c, &comps[i], &comps[j], deg + 1);
                for k in i + 1..j {
                    rhs = rhs.add(&tw_compose(c, &comps[i], &comps[k], &comps[j], &mu[&(k, j)], &mu[&(i, k)]));
                }
                let rhs = rhs.scale(&c.field().sign((n - j) as i64));
                let b = h.coords_of(c, &rhs);
                let sol =
                    if h.complex.dim(deg + 1) == 0 { Some(vec![c.field().zero(); h.complex.dim(deg)]) } else { h.complex.d(deg).solve(&b) };
                match sol {
                    Some(x) => {
                        let part = h.mor_from_coords(c, deg, &x);
                        mu.insert((i, j), part.add(&closed));
                    }
                    None => ok = false,
                }
            }
        }
        if ok {
            let m = GpObject { comps: comps.clone(), mu };
            if gp.validate_object(&m).is_ok() {
                return m;
            }
        }
    }
    let mu = homs.keys().map(|&(i, j)| ((i, j), TwMor::zero(c, &comps[i], &comps[j], i as i32 - j as i32 + 1))).collect();
    GpObject { comps, mu }
}

/// Glue′ data over the glued category of a random cube.
#[derive(Clone, Debug)]
pub struct GluePrimeInput {
    pub base: DgCategory,
    pub block: Vec<usize>,
    pub source: GpObject,
    pub target: GpObject,
    pub f: GpMor,
}

pub fn glue_prime_input(field: Field, rng: &mut impl Rng, n: usize) -> GluePrimeInput {
    let constant = rng.gen_bool(0.5);
    let cube = dg_cube(field, rng, n, constant);
    let gac = Gac::new(&cube).expect("valid cube");
    let base = materialize(&gac);
    let block: Vec<usize> = (0..base.num_objects()).map(|a| gac.locate(a).0).collect();
    let gp = GluePrime::new(&base, block.clone()).expect("blocks cover the objects");
    let source = glue_prime_object(&gp, rng);
    let target = glue_prime_object(&gp, rng);
    let hs = gp.hom_space(&source, &target);
    let f = hs.from_coords(&gp, 0, &cocycle(&hs.complex, 0, rng));
    GluePrimeInput { base, block, source, target, f }
}

/// Monomials `x^a y^b` of a down-closed set with `F^{-k}` spanned by weight `≥ c k`.
fn monomial_algebra(field: Field, mons: &[(usize, usize)], w: (usize, usize), c: usize, n: usize) -> FilteredAlgebra {
    let dim = mons.len();
    let e = |i: usize| basis_vec(field, dim, i);
    let weight = |&(a, b): &(usize, usize)| a * w.0 + b * w.1;
    let labels = mons.iter().map(|&(a, b)| format!("x{a}y{b}")).collect();
    let mult = mons
        .iter()
        .map(|&(a, b)| {
            mons.iter()
                .map(|&(a2, b2)| mons.iter().position(|&m| m == (a + a2, b + b2)).map_or_else(|| vec![field.zero(); dim], e))
                .collect()
        })
        .collect();
    let filt = (0..=n)
        .map(|k| {
            let cols: Vec<Vec<Scalar>> = (0..dim).filter(|&i| weight(&mons[i]) >= c * k).map(e).collect();
            Matrix::from_cols(field, dim, &cols)
        })
        .collect();
    let unit = e(mons.iter().position(|&m| m == (0, 0)).expect("1 is a monomial"));
    FilteredAlgebra::new(field, labels, mult, unit, filt).expect("monomial data is well formed")
}

fn down_closed(rng: &mut impl Rng, size: usize) -> Vec<(usize, usize)> {
    let mut s = std::collections::BTreeSet::from([(0usize, 0usize)]);
    while s.len() < size {
        let cands: Vec<(usize, usize)> = s
            .iter()
            .flat_map(|&(a, b)| [(a + 1, b), (a, b + 1)])
            .filter(|&(a, b)| !s.contains(&(a, b)) && (a == 0 || s.contains(&(a - 1, b))) && (b == 0 || s.contains(&(a, b - 1))))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        s.insert(cands[rng.gen_range(0..cands.len())]);
    }
    s.into_iter().collect()
}

struct MonomialData {
    mons: Vec<(usize, usize)>,
    w: (usize, usize),
    c: usize,
    n: usize,
}

fn monomial_data(rng: &mut impl Rng, max_dim: usize, max_n: usize) -> MonomialData {
    loop {
        let size = rng.gen_range(2..=max_dim.max(2));
        let mons = down_closed(rng, size);
        let w = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let c = rng.gen_range(1..=2);
        let top = mons.iter().map(|&(a, b)| a * w.0 + b * w.1).max().unwrap_or(0);
        let n = top / c + 1;
        if n <= max_n {
            return MonomialData { mons, w, c, n };
        }
    }
}

fn conjugate(field: Field, r: &FilteredAlgebra, rng: &mut impl Rng) -> (FilteredAlgebra, Matrix, Matrix) {
    let n = r.dim();
    let mut g = Matrix::identity(field, n);
    for _ in 0..n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            g.set(i, j, field.int(if rng.gen_bool(0.5) { 1 } else { -1 }));
            break;
        }
    }
    let l = Matrix::from_fn(field, n, n, |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Greater if rng.gen_bool(0.3) => field.int(if rng.gen_bool(0.5) { 1 } else { -1 }),
        std::cmp::Ordering::Equal => field.one(),
        _ => field.zero(),
    });
    let g = g.mul(&l);
    let gi = g.inverse().expect("unit triangular up to an elementary factor");
    (r.change_basis(&g).expect("invertible"), g, gi)
}

/// A random commutative filtered algebra of dimension `≤ max_dim` and length `≤ max_n`,
/// presented in a random basis.
pub fn filtered_algebra(field: Field, rng: &mut impl Rng, max_dim: usize, max_n: usize) -> FilteredAlgebra {
    let m = monomial_data(rng, max_dim, max_n.max(1));
    conjugate(field, &monomial_algebra(field, &m.mons, m.w, m.c, m.n), rng).0
}

/// Random refinement data: a monomial quotient map `r -> s`, ideals `I`, `I'` and a degree `d`.
pub fn refinement_data(field: Field, rng: &mut impl Rng, max_dim: usize, max_n: usize) -> RefinementData {
    let m = monomial_data(rng, max_dim, max_n.max(1));
    let d = rng.gen_range(2..=3);
    let mut kept = m.mons.clone();
    for _ in 0..rng.gen_range(0..=2) {
        let maximal: Vec<usize> = (1..kept.len())
            .filter(|&i| {
                let (a, b) = kept[i];
                !kept.contains(&(a + 1, b)) && !kept.contains(&(a, b + 1))
            })
            .collect();
        if let Some(&i) = maximal.get(rng.gen_range(0..maximal.len().max(1))) {
            kept.remove(i);
        }
    }
    let r = monomial_algebra(field, &m.mons, m.w, m.c, m.n);
    let s = monomial_algebra(field, &kept, m.w, m.c, m.n);
    let f = Matrix::from_fn(field, kept.len(), m.mons.len(), |i, j| if kept[i] == m.mons[j] { field.one() } else { field.zero() });
    let thresh = m.c.div_ceil(d);
    let ideal = |mons: &[(usize, usize)]| {
        let cols: Vec<Vec<Scalar>> =
            (0..mons.len()).filter(|&i| mons[i].0 * m.w.0 + mons[i].1 * m.w.1 >= thresh).map(|i| basis_vec(field, mons.len(), i)).collect();
        Matrix::from_cols(field, mons.len(), &cols)
    };
    let (ir, is) = (ideal(&m.mons), ideal(&kept));
    let (r2, gr, gri) = conjugate(field, &r, rng);
    let (s2, _, gsi) = conjugate(field, &s, rng);
    RefinementData { f: gsi.mul(&f).mul(&gr), ideal_r: gri.mul(&ir), ideal_s: gsi.mul(&is), r: r2, s: s2, d }
}

/// A random nonzero quotient of a sum of truncated frees of length `len`.
///
/// Relations sit strictly below the top generator, which therefore survives.
pub fn graded_module(r: &FilteredAlgebra, rng: &mut impl Rng, len: usize, max_gens: usize) -> GradedModule {
    let field = r.field;
    loop {
        let gens: Vec<usize> = (0..rng.gen_range(1..=max_gens.max(1))).map(|_| rng.gen_range(0..len)).collect();
        let top = *gens.iter().min().expect("at least one generator");
        let free = FreeSum::new(r, &gens, len);
        let mut rels = Vec::new();
        if top + 1 < len {
            for _ in 0..rng.gen_range(0..=gens.len()) {
                let k = rng.gen_range(top + 1..len);
                let dim = free.module.dims[k];
                if dim > 0 {
                    rels.push((k, (0..dim).map(|_| scalar(field, rng)).collect()));
                }
            }
        }
        let sub = generate(r, &free.module, &rels);
        let m = quotient(r, &free.module, &sub).module;
        if m.total_dim() > 0 {
            return m;
        }
    }
}
