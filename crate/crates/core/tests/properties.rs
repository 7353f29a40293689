mod common;

use common::{rank, Oc};
use dgglue::dgcat::{validate_category, DgCat};
use dgglue::filtlab::{module_hom, truncate, truncated_free, twist};
use dgglue::glue::{check_qff, hom_iso_check, Gac};
use dgglue::hypercube::ComplexCube;
use dgglue::json::{complex_to_json, parse_complex, Document};
use dgglue::random;
use dgglue::twisted::{cone_tw, tw_identity, TwHom};
use dgglue::{Complex, Field, GradedMap};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn field_of(q: bool) -> Field {
    if q {
        Field::Rational
    } else {
        Field::Prime(7)
    }
}

fn d_squared(c: &Complex) -> bool {
    Oc::from_complex(c, c.lo() - 1, c.hi() + 1).d_squared_zero()
}

fn chi(c: &Complex) -> i64 {
    c.degrees().map(|k| if k % 2 == 0 { c.dim(k) as i64 } else { -(c.dim(k) as i64) }).sum()
}

fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_constructions_square_to_zero(seed in any::<u64>(), q in any::<bool>()) {
        let field = field_of(q);
        let mut rng = random::rng(seed);
        let a = random::complex(field, &mut rng, -2, 2, 3, 6);
        let b = random::complex(field, &mut rng, -1, 2, 3, 6);
        let f = random::chain_map(&a, &b, &mut rng);
        prop_assert!(f.is_closed());
        for c in [Complex::cone(&f).unwrap(), Complex::tensor(&a, &b), Complex::hom_complex(&a, &b), a.shift(3)] {
            prop_assert!(d_squared(&c));
        }
        prop_assert_eq!(chi(&Complex::cone(&f).unwrap()), chi(&b) - chi(&a));
    }

    #[test]
    fn cohomology_matches_rank_oracle(seed in any::<u64>(), q in any::<bool>()) {
        let mut rng = random::rng(seed);
        let c = random::complex(field_of(q), &mut rng, -3, 3, 4, 10);
        prop_assert_eq!(c.cohomology(), Oc::from_complex(&c, -4, 4).cohomology());
        prop_assert_eq!(c.euler_characteristic(), chi(&c));
    }

    #[test]
    fn totalization_euler_characteristic(seed in any::<u64>(), q in any::<bool>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let cube = random::complex_cube(field_of(q), &mut rng, n, 12);
        let t = cube.totalize();
        prop_assert!(d_squared(&t));
        let want: i64 = cube.raw.vertices.iter().map(|(m, v)| {
            let s = if (n - m.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
            s * chi(v)
        }).sum();
        prop_assert_eq!(chi(&t), want);
        prop_assert!(cube.t_factorization_check().unwrap());
    }

    #[test]
    fn totalization_invariant_under_permutation(seed in any::<u64>(), q in any::<bool>(), n in 2usize..=3) {
        let mut rng = random::rng(seed);
        let cube = random::complex_cube(field_of(q), &mut rng, n, 12);
        let perm = random_perm(n, &mut rng);
        let p = cube.permute(&perm).unwrap();
        prop_assert_eq!(p.totalize().cohomology(), cube.totalize().cohomology());
    }

    #[test]
    fn complex_cube_faces_and_morphism(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = random::rng(seed);
        let cube = random::complex_cube(Field::Prime(7), &mut rng, n, 12);
        let (a0, a1, maps) = cube.as_morphism().unwrap();
        let back = ComplexCube::from_morphism(&a0, &a1, &maps).unwrap();
        prop_assert!(back.same_as(&cube));
        let total = ComplexCube::total_morphism(&a0, &a1, &maps).unwrap();
        prop_assert!(total.is_closed());
        prop_assert_eq!(Complex::cone(&total).unwrap().cohomology(), cube.totalize().cohomology());
    }

    #[test]
    fn cone_of_identity_is_contractible(seed in any::<u64>(), q in any::<bool>()) {
        let field = field_of(q);
        let mut rng = random::rng(seed);
        let objs: Vec<_> = (0..2).map(|_| random::weighted_complex(field, &mut rng, 3, 2)).collect();
        let base = random::weighted_quotient(field, &objs, 2);
        let t = random::twisted(&base, &mut rng, &[0, 1], 1);
        let c = cone_tw(&base, &t, &t, &tw_identity(&base, &t)).unwrap().cone;
        let h = TwHom::new(&base, &c, &c).complex;
        prop_assert!(d_squared(&h));
        prop_assert!(h.is_acyclic());
    }

    #[test]
    fn dg_cube_acyclicity_and_gluing(seed in any::<u64>(), q in any::<bool>(), n in 1usize..=3, constant in any::<bool>()) {
        let mut rng = random::rng(seed);
        let cube = random::dg_cube(field_of(q), &mut rng, n, constant);
        let acyclic = cube.check_acyclic().unwrap().acyclic;
        if constant {
            prop_assert!(acyclic);
        }
        prop_assert_eq!(check_qff(&cube).unwrap().qff, acyclic);
        let perm = random_perm(n, &mut rng);
        prop_assert_eq!(cube.permute(&perm).unwrap().check_acyclic().unwrap().acyclic, acyclic);
        let gac = Gac::new(&cube).unwrap();
        prop_assert!(validate_category(&gac).ok);
        let k = cube.vertex(0).num_objects();
        let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
        prop_assert!(hom_iso_check(&cube, a, b).unwrap().ok);
    }

    #[test]
    fn stacking_with_a_constant_cube(seed in any::<u64>(), q in any::<bool>(), n in 1usize..=3) {
        let mut rng = random::rng(seed);
        let cube = random::complex_cube(field_of(q), &mut rng, n, 12);
        let (_, top, _) = cube.as_morphism().unwrap();
        let ids = top.raw.vertices.iter().map(|(&m, v)| (m, GradedMap::identity(v))).collect();
        let constant = ComplexCube::from_morphism(&top, &top, &ids).unwrap();
        prop_assert!(constant.is_acyclic());
        prop_assert!(ComplexCube::stack(&cube, &constant).unwrap().same_as(&cube));
        let e = ComplexCube::extend(&cube, &constant).unwrap();
        prop_assert!(d_squared(&e.totalize()));
    }

    #[test]
    fn yoneda_for_truncated_frees(seed in any::<u64>(), q in any::<bool>()) {
        let mut rng = random::rng(seed);
        let r = random::filtered_algebra(field_of(q), &mut rng, 6, 3);
        let n = r.n();
        let m = random::graded_module(&r, &mut rng, n, 2);
        prop_assert!(m.validate(&r).ok);
        for i in 0..n {
            let p = truncated_free(&r, i, n).module;
            prop_assert_eq!(module_hom(&r, &p, &m).unwrap().len(), m.dim(i));
        }
        let t = twist(&r, &m, 1);
        prop_assert!(t.validate(&r).ok);
        prop_assert_eq!(&truncate(&r, &m, n).unwrap().dims, &m.dims);
        let short = truncate(&r, &m, n - 1).unwrap();
        prop_assert_eq!(&truncate(&r, &short, n - 1).unwrap().dims, &short.dims);
    }

    #[test]
    fn filtration_is_decreasing(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let r = random::filtered_algebra(Field::Prime(7), &mut rng, 8, 3);
        let dims: Vec<usize> = (0..=r.n() as i64).map(|k| rank(&r.f(-k))).collect();
        prop_assert!(dims.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(dims[0], r.dim());
        prop_assert_eq!(*dims.last().unwrap(), 0);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), q in any::<bool>()) {
        let field = field_of(q);
        let mut rng = random::rng(seed);
        let c = random::complex(field, &mut rng, -2, 2, 3, 6);
        let back = parse_complex(field, &complex_to_json(&c), "c").unwrap();
        prop_assert!(back.same_as(&c));
        let mut doc = Document::new(field);
        doc.add_dg_cube("cube", &random::dg_cube(field, &mut rng, 2, false)).unwrap();
        let again = Document::parse(&doc.to_json().to_string(), None).unwrap();
        prop_assert_eq!(doc, again);
    }
}
