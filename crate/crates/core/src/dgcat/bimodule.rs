use std::collections::HashMap;

use super::{basis_vec, AxiomReport, DgCat, DgFunctor, Table, Violation};
use crate::complex::Complex;
use crate::error::{input, Result};
use crate::field::{Field, Scalar};
use crate::linalg::axpy;

/// A dg bimodule `M(b, a)`, contravariant in `b ∈ B` and covariant in `a ∈ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub field: Field,
    pub nb: usize,
    pub na: usize,
    /// `values[b * na + a] = M(b, a)`.
    pub values: Vec<Complex>,
    /// `(a, a2, b)`: `A(a, a2) × M(b, a) -> M(b, a2)`.
    pub post: HashMap<(usize, usize, usize), Table>,
    /// `(b2, b, a)`: `M(b, a) × B(b2, b) -> M(b2, a)`.
    pub pre: HashMap<(usize, usize, usize), Table>,
}

impl Bimodule {
    pub fn value(&self, b: usize, a: usize) -> &Complex {
        &self.values[b * self.na + a]
    }

    /// `α · m` for `α ∈ A(a, a2)`, `m ∈ M(b, a)`.
    pub fn act_post(&self, a: usize, a2: usize, b: usize, alpha: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        match self.post.get(&(a, a2, b)) {
            Some(t) => t.apply(self.field, alpha, m),
            None => vec![self.field.zero(); self.value(b, a2).total_dim()],
        }
    }

    /// `m · β` for `m ∈ M(b, a)`, `β ∈ B(b2, b)`.
    pub fn act_pre(&self, b2: usize, b: usize, a: usize, m: &[Scalar], beta: &[Scalar]) -> Vec<Scalar> {
        match self.pre.get(&(b2, b, a)) {
            Some(t) => t.apply(self.field, m, beta),
            None => vec![self.field.zero(); self.value(b2, a).total_dim()],
        }
    }
}

/// `M(b', a') = c(G b', F a')` with actions through `F` and `G`.
pub fn restricted_diagonal<C: DgCat + ?Sized, A: DgCat + ?Sized, B: DgCat + ?Sized>(
    c: &C,
    a_cat: &A,
    f: &DgFunctor,
    b_cat: &B,
    g: &DgFunctor,
) -> Result<Bimodule> {
    let field = c.field();
    for (fun, src) in [(f, a_cat.num_objects()), (g, b_cat.num_objects())] {
        if fun.obj_map.len() != src || fun.obj_map.iter().any(|&x| x >= c.num_objects()) {
            return input("functor does not land in the given category");
        }
    }
    let (na, nb) = (a_cat.num_objects(), b_cat.num_objects());
    let mut values = Vec::new();
    for b in 0..nb {
        for a in 0..na {
            values.push(c.hom(g.obj_map[b], f.obj_map[a]).clone());
        }
    }
    let mut post = HashMap::new();
    for a in 0..na {
        for a2 in 0..na {
            for b in 0..nb {
                let (n1, n2) = (a_cat.hom(a, a2).total_dim(), values[b * na + a].total_dim());
                let out = values[b * na + a2].total_dim();
                if n1 * n2 * out == 0 {
                    continue;
                }
                let (gb, fa, fa2) = (g.obj_map[b], f.obj_map[a], f.obj_map[a2]);
                let t = Table::build(field, n1, n2, out, |x, m| c.compose(gb, fa, fa2, &f.apply(a, a2, x), m));
                post.insert((a, a2, b), t);
            }
        }
    }
    let mut pre = HashMap::new();
    for b2 in 0..nb {
        for b in 0..nb {
            for a in 0..na {
                let (n1, n2) = (values[b * na + a].total_dim(), b_cat.hom(b2, b).total_dim());
                let out = values[b2 * na + a].total_dim();
                if n1 * n2 * out == 0 {
                    continue;
                }
                let (gb2, gb, fa) = (g.obj_map[b2], g.obj_map[b], f.obj_map[a]);
                let t = Table::build(field, n1, n2, out, |m, y| c.compose(gb2, gb, fa, m, &g.apply(b2, b, y)));
                pre.insert((b2, b, a), t);
            }
        }
    }
    Ok(Bimodule { field, nb, na, values, post, pre })
}

/// Checks unit, associativity, Leibniz for both actions and their commutation.
pub fn validate_bimodule<B: DgCat + ?Sized, A: DgCat + ?Sized>(b_cat: &B, a_cat: &A, m: &Bimodule) -> AxiomReport {
    let field = m.field;
    let (na, nb) = (m.na, m.nb);
    let mut v = Vec::new();
    let mut checked = 0;
    let basis = |c: &Complex| (0..c.total_dim()).map(|i| (i, basis_vec(field, c.total_dim(), i))).collect::<Vec<_>>();
    let mut bad = |axiom: &str, objects: Vec<usize>, basis: Vec<usize>| {
        v.push(Violation { axiom: axiom.into(), objects: objects.iter().map(|o| o.to_string()).collect(), basis });
    };
    for b in 0..nb {
        for a in 0..na {
            let mba = m.value(b, a);
            for (i, x) in basis(mba) {
                checked += 2;
                if m.act_post(a, a, b, &a_cat.identity(a), &x) != x {
                    bad("post_unit", vec![b, a], vec![i]);
                }
                if m.act_pre(b, b, a, &x, &b_cat.identity(b)) != x {
                    bad("pre_unit", vec![b, a], vec![i]);
                }
                let sx = field.sign(mba.degree_of(i) as i64);
                // left action by A
                for a2 in 0..na {
                    let h = a_cat.hom(a, a2);
                    for (j, al) in basis(h) {
                        checked += 1;
                        let lhs = m.value(b, a2).apply_d(&m.act_post(a, a2, b, &al, &x));
                        let mut rhs = m.act_post(a, a2, b, &h.apply_d(&al), &x);
                        axpy(&mut rhs, &field.sign(h.degree_of(j) as i64), &m.act_post(a, a2, b, &al, &mba.apply_d(&x)));
                        if lhs != rhs {
                            bad("post_leibniz", vec![b, a, a2], vec![j, i]);
                        }
                        for a3 in 0..na {
                            for (k, al2) in basis(a_cat.hom(a2, a3)) {
                                checked += 1;
                                let lhs = m.act_post(a, a3, b, &a_cat.compose(a, a2, a3, &al2, &al), &x);
                                let rhs = m.act_post(a2, a3, b, &al2, &m.act_post(a, a2, b, &al, &x));
                                if lhs != rhs {
                                    bad("post_associativity", vec![b, a, a2, a3], vec![k, j, i]);
                                }
                            }
                        }
                        for b2 in 0..nb {
                            for (k, be) in basis(b_cat.hom(b2, b)) {
                                checked += 1;
                                let lhs = m.act_pre(b2, b, a2, &m.act_post(a, a2, b, &al, &x), &be);
                                let rhs = m.act_post(a, a2, b2, &al, &m.act_pre(b2, b, a, &x, &be));
                                if lhs != rhs {
                                    bad("actions_commute", vec![b2, b, a, a2], vec![j, i, k]);
                                }
                            }
                        }
                    }
                }
                // right action by B
                for b2 in 0..nb {
                    let h = b_cat.hom(b2, b);
                    for (j, be) in basis(h) {
                        checked += 1;
                        let lhs = m.value(b2, a).apply_d(&m.act_pre(b2, b, a, &x, &be));
                        let mut rhs = m.act_pre(b2, b, a, &mba.apply_d(&x), &be);
                        axpy(&mut rhs, &sx, &m.act_pre(b2, b, a, &x, &h.apply_d(&be)));
                        if lhs != rhs {
                            bad("pre_leibniz", vec![b2, b, a], vec![i, j]);
                        }
                        for b3 in 0..nb {
                            for (k, be2) in basis(b_cat.hom(b3, b2)) {
                                checked += 1;
                                let lhs = m.act_pre(b3, b, a, &x, &b_cat.compose(b3, b2, b, &be, &be2));
                                let rhs = m.act_pre(b3, b2, a, &m.act_pre(b2, b, a, &x, &be), &be2);
                                if lhs != rhs {
                                    bad("pre_associativity", vec![b3, b2, b, a], vec![i, j, k]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    AxiomReport::from_parts(vec![(checked, v)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::DgCategory;

    #[test]
    fn diagonal_bimodule_of_a2() {
        let q = Field::Rational;
        let c = DgCategory::a2_quiver(q);
        let id = DgFunctor::identity(&c);
        let m = restricted_diagonal(&c, &c, &id, &c, &id).unwrap();
        for b in 0..2 {
            for a in 0..2 {
                assert_eq!(m.value(b, a), c.hom(b, a));
            }
        }
        assert!(validate_bimodule(&c, &c, &m).ok);
        // single objects
        let k = DgCategory::unit(q);
        let to1 = DgFunctor::from_fn(&k, &c, vec![1], |_, _| crate::Matrix::identity(q, 1)).unwrap();
        let to0 = DgFunctor::from_fn(&k, &c, vec![0], |_, _| crate::Matrix::identity(q, 1)).unwrap();
        let m = restricted_diagonal(&c, &k, &to1, &k, &to0).unwrap();
        assert_eq!(m.values, vec![c.hom(0, 1).clone()]);
        assert!(validate_bimodule(&k, &k, &m).ok);
    }
}
