#![allow(dead_code)]

use std::collections::BTreeMap;

use dgglue::{Complex, Field, GradedMap, Matrix, Scalar};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Gaussian elimination written against raw values, not the crate's solver.
pub fn rank(m: &Matrix) -> usize {
    match m.field() {
        Field::Prime(p) => rank_mod_p(m, p),
        Field::Rational => rank_q(m),
    }
}

fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|s| match s {
                    Scalar::P { v, .. } => *v,
                    Scalar::Q(_) => unreachable!("mixed fields"),
                })
                .collect()
        })
        .collect();
    let inv = |x: u64| {
        let (mut b, mut e, mut r) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * s % p;
                for k in c..m.cols() {
                    a[r][k] = (a[r][k] + p * p - f * a[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_q(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|s| match s {
                    Scalar::Q(q) => q.clone(),
                    Scalar::P { .. } => unreachable!("mixed fields"),
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let s = BigRational::one() / a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone() * s.clone();
                for k in c..m.cols() {
                    let t = a[rank][k].clone() * f.clone();
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A cochain complex on `lo..lo+dims.len()` with `d[k]` leaving index `k`.
#[derive(Clone, Debug)]
pub struct Oc {
    pub field: Field,
    pub lo: i32,
    pub dims: Vec<usize>,
    pub d: Vec<Matrix>,
}

impl Oc {
    /// Copies a complex onto the window `[lo, hi]`, which must contain its support.
    pub fn from_complex(c: &Complex, lo: i32, hi: i32) -> Oc {
        let dims = (lo..=hi).map(|k| c.dim(k)).collect();
        let d = (lo..=hi).map(|k| c.d(k)).collect();
        Oc { field: c.field(), lo, dims, d }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.dims[(k - self.lo) as usize]
        }
    }

    pub fn d(&self, k: i32) -> Matrix {
        if k < self.lo || k >= self.hi() {
            Matrix::zeros(self.field, self.dim(k + 1), self.dim(k))
        } else {
            self.d[(k - self.lo) as usize].clone()
        }
    }

    pub fn d_squared_zero(&self) -> bool {
        (self.lo..=self.hi()).all(|k| self.d(k + 1).mul(&self.d(k)).is_zero())
    }

    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        (self.lo..=self.hi())
            .filter_map(|k| {
                let h = self.dim(k) - rank(&self.d(k)) - rank(&self.d(k - 1));
                (h > 0).then_some((k, h))
            })
            .collect()
    }
}

/// Degree-0 map between oracle complexes, `comp[k]` leaving index `k`.
pub struct Om {
    pub comp: Box<dyn Fn(i32) -> Matrix>,
}

impl Om {
    pub fn from_map(f: &GradedMap) -> Om {
        let f = f.clone();
        Om { comp: Box::new(move |k| f.comp(k)) }
    }
}

/// `cone(f)^k = T^k ⊕ S^{k+1}` with `d = [[d_T, f], [0, -d_S]]`.
pub fn cone(s: &Oc, t: &Oc, f: &Om) -> Oc {
    let field = s.field;
    let lo = (s.lo - 1).min(t.lo);
    let hi = (s.hi() - 1).max(t.hi());
    let dims: Vec<usize> = (lo..=hi).map(|k| t.dim(k) + s.dim(k + 1)).collect();
    let d = (lo..=hi)
        .map(|k| {
            let mut m = Matrix::zeros(field, t.dim(k + 1) + s.dim(k + 2), t.dim(k) + s.dim(k + 1));
            m.set_block(0, 0, &t.d(k));
            m.set_block(0, t.dim(k), &(f.comp)(k + 1));
            m.set_block(t.dim(k + 1), t.dim(k), &s.d(k + 1).neg());
            m
        })
        .collect();
    Oc { field, lo, dims, d }
}

/// The map of cones `diag(v, u)` induced by a commuting square.
pub fn cone_map(s: &Oc, t: &Oc, s2: &Oc, t2: &Oc, u: &GradedMap, v: &GradedMap) -> Om {
    let (s, t, s2, t2, u, v) = (s.clone(), t.clone(), s2.clone(), t2.clone(), u.clone(), v.clone());
    Om {
        comp: Box::new(move |k| {
            let field = s.field;
            let mut m = Matrix::zeros(field, t2.dim(k) + s2.dim(k + 1), t.dim(k) + s.dim(k + 1));
            m.set_block(0, 0, &v.comp(k));
            m.set_block(t2.dim(k), t.dim(k), &u.comp(k + 1));
            m
        }),
    }
}

pub fn fields() -> [Field; 2] {
    [Field::Prime(7), Field::Rational]
}
