mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{cone, cone_map, fields, rank, Oc, Om};
use dgglue::dgcat::{validate_category, DgCat, DgCategory};
use dgglue::filtlab::{
    auslander, end_comparison, module_hom, refine, refinement_square, tensor_n, truncate, truncated_free, unit_law, FilteredAlgebra,
};
use dgglue::glue::{check_qff, hom_iso_check, Gac};
use dgglue::glue_prime::GluePrime;
use dgglue::hypercube::{bit, ComplexCube, DgCube};
use dgglue::random::{self, WeightedComplex};
use dgglue::twisted::{validate_twisted, TwHom};
use dgglue::{Complex, Field, GradedMap, Matrix};
use rand::Rng;

const D2_SAMPLES: usize = 500;
const D2_BUDGET: Duration = Duration::from_secs(60);
const D2_WINDOW: (i32, i32) = (-6, 6);
const D2_MAX_HOM_DIM: usize = 16;
const D2_MAX_N: usize = 4;
const TOTALIZE_SAMPLES: usize = 100;
const GAC_SAMPLES: usize = 100;
const QFF_SAMPLES: usize = 60;
const QFF_MIN_EACH: usize = 10;
const QFF_BUDGET: Duration = Duration::from_secs(300);
const STACK_SAMPLES: usize = 100;
const DUAL_NUMBERS_TOTAL: usize = 5;
const CUBIC_TOTAL: usize = 14;
const PROJ_HOM_SAMPLES: usize = 10;
const PROJ_MAX_DIM: usize = 8;
const PROJ_MAX_N: usize = 3;
const REFINE_SAMPLES: usize = 20;
const TENSOR_SAMPLES: usize = 50;
const TENSOR_Q_EVERY: usize = 5;
const GLUE_PRIME_SAMPLES: usize = 50;
const UNIT_H0: (usize, usize) = (1, 2);

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field_for(i: usize) -> Field {
    fields()[i % 2]
}

fn max_dim(c: &Complex) -> usize {
    c.degrees().map(|k| c.dim(k)).max().unwrap_or(0)
}

fn in_window(c: &Complex) -> bool {
    c.total_dim() == 0 || (c.lo() >= D2_WINDOW.0 && c.hi() <= D2_WINDOW.1)
}

fn oracle(c: &Complex) -> Oc {
    Oc::from_complex(c, c.lo() - 1, c.hi() + 1)
}

fn c1_d_squared() -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(101);
    let (mut complexes, mut cubes, mut twisted) = (0, 0, 0);
    let mut i = 0;
    while complexes + cubes + twisted < D2_SAMPLES {
        i += 1;
        let field = field_for(i);
        match i % 3 {
            0 => {
                let lo = rng.gen_range(D2_WINDOW.0..=D2_WINDOW.1 - 1);
                let hi = rng.gen_range(lo + 1..=D2_WINDOW.1);
                let a = random::complex(field, &mut rng, lo, hi, 4, 10);
                let b = random::complex(field, &mut rng, lo, hi, 4, 10);
                let f = random::chain_map(&a, &b, &mut rng);
                let built = [
                    a.clone(),
                    Complex::cone(&f).map_err(|e| e.to_string())?,
                    a.shift(rng.gen_range(-1..=1)),
                    Complex::tensor(&a.trimmed(), &b.trimmed()),
                    Complex::hom_complex(&a.trimmed(), &b.trimmed()),
                ];
                for c in built.iter().filter(|c| in_window(c) && max_dim(c) <= D2_MAX_HOM_DIM) {
                    ensure(oracle(c).d_squared_zero(), || format!("d² ≠ 0 on a complex, sample {i}"))?;
                }
                complexes += 1;
            }
            1 => {
                let n = rng.gen_range(1..=D2_MAX_N);
                let cube = random::complex_cube(field, &mut rng, n, D2_MAX_HOM_DIM);
                if cube.raw.vertices.values().any(|v| !in_window(v) || max_dim(v) > D2_MAX_HOM_DIM) {
                    continue;
                }
                ensure(oracle(&cube.totalize()).d_squared_zero(), || format!("d² ≠ 0 on t of a {n}-cube, sample {i}"))?;
                cubes += 1;
            }
            _ => {
                let base = weighted_base(field, &mut rng);
                let objs: Vec<usize> = (0..base.num_objects()).collect();
                let (cs, ct) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
                let s = random::twisted(&base, &mut rng, &objs, cs);
                let t = random::twisted(&base, &mut rng, &objs, ct);
                validate_twisted(&base, &s).map_err(|e| format!("twisted complex rejected: {e}"))?;
                let h = TwHom::new(&base, &s, &t).complex;
                if !in_window(&h) || max_dim(&h) > D2_MAX_HOM_DIM {
                    continue;
                }
                ensure(oracle(&h).d_squared_zero(), || format!("d² ≠ 0 on a twisted hom, sample {i}"))?;
                twisted += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < D2_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{complexes} complexes, {cubes} cubes, {twisted} twisted pairs in {:.1}s", elapsed.as_secs_f64()))
}

fn weighted_base(field: Field, rng: &mut impl Rng) -> DgCategory {
    let objs: Vec<WeightedComplex> = (0..rng.gen_range(1..=2)).map(|_| random::weighted_complex(field, rng, 3, 2)).collect();
    random::weighted_quotient(field, &objs, rng.gen_range(1..=3))
}

fn padded(c: &Complex) -> Oc {
    Oc::from_complex(c, -10, 10)
}

fn c2_totalization() -> Outcome {
    let mut rng = random::rng(202);
    for i in 0..TOTALIZE_SAMPLES {
        let field = field_for(i);
        let a = random::complex(field, &mut rng, -2, 2, 3, 6);
        let b = random::complex(field, &mut rng, -2, 2, 3, 6);
        let f = random::chain_map(&a, &b, &mut rng);
        let cube = ComplexCube::new(field, 1, BTreeMap::from([(0, a.clone()), (1, b.clone())]), BTreeMap::from([((0, 0), f.clone())]))
            .map_err(|e| e.to_string())?;
        let want = cone(&padded(&a), &padded(&b), &Om::from_map(&f));
        ensure(want.d_squared_zero(), || "oracle cone is not a complex".into())?;
        let got = cube.totalize().cohomology();
        ensure(got == want.cohomology(), || format!("1-cube {i}: {got:?} vs {:?}", want.cohomology()))?;
    }
    for i in 0..TOTALIZE_SAMPLES {
        let field = field_for(i);
        let cube = random_square(field, &mut rng);
        let v = |m: u32| padded(cube.vertex(m));
        let e = |m: u32, l: usize| cube.edge(m, l).clone();
        let x = cone(&v(0), &v(1), &Om::from_map(&e(0, 0)));
        let y = cone(&v(2), &v(3), &Om::from_map(&e(2, 0)));
        let phi = cone_map(&v(0), &v(1), &v(2), &v(3), &e(0, 1), &e(1, 1));
        let want = cone(&x, &y, &phi);
        ensure(want.d_squared_zero(), || "oracle total complex is not a complex".into())?;
        let got = cube.totalize().cohomology();
        ensure(got == want.cohomology(), || format!("square {i}: {got:?} vs {:?}", want.cohomology()))?;
    }
    Ok(format!("{TOTALIZE_SAMPLES} one-cubes match cones, {TOTALIZE_SAMPLES} squares match total complexes"))
}

/// Either a tensor square or `A -> B -> D` against `A = A -> D`.
fn random_square(field: Field, rng: &mut impl Rng) -> ComplexCube {
    if rng.gen_bool(0.5) {
        let maps: Vec<GradedMap> = (0..2)
            .map(|_| {
                let a = random::complex(field, rng, -1, 1, 2, 3);
                let b = random::complex(field, rng, -1, 1, 2, 3);
                random::chain_map(&a, &b, rng)
            })
            .collect();
        return random::tensor_cube(&maps).expect("tensor squares commute");
    }
    let a = random::complex(field, rng, -2, 2, 3, 5);
    let b = random::complex(field, rng, -2, 2, 3, 5);
    let d = random::complex(field, rng, -2, 2, 3, 5);
    let f = random::chain_map(&a, &b, rng);
    let g = random::chain_map(&b, &d, rng);
    let gf = GradedMap::compose(&g, &f).expect("composable");
    let vertices = BTreeMap::from([(0, a.clone()), (1, b), (2, a.clone()), (3, d)]);
    let edges = BTreeMap::from([((0, 0), f), ((2, 0), gf), ((0, 1), GradedMap::identity(&a)), ((1, 1), g)]);
    ComplexCube::new(field, 2, vertices, edges).expect("the square commutes")
}

fn c3_gac_category() -> Outcome {
    let mut rng = random::rng(303);
    let mut checked = 0;
    for i in 0..GAC_SAMPLES {
        let field = field_for(i);
        let n = 2 + i % 3;
        let constant = rng.gen_bool(0.5);
        let cube = random::dg_cube(field, &mut rng, n, constant);
        let gac = Gac::new(&cube).map_err(|e| e.to_string())?;
        let report = validate_category(&gac);
        ensure(report.ok, || format!("cube {i} (n = {n}): {:?}", report.violations.first()))?;
        checked += report.checked;
    }
    Ok(format!("{GAC_SAMPLES} glued categories, {checked} axiom instances"))
}

fn qff_corpus() -> Vec<DgCube> {
    let mut rng = random::rng(404);
    let mut cubes: Vec<DgCube> = (0..QFF_SAMPLES)
        .map(|i| {
            let n = 1 + i % 3;
            random::dg_cube(field_for(i), &mut rng, n, i % 2 == 0)
        })
        .collect();
    cubes.push(random::unit_inclusion_cube(Field::Prime(7), 2));
    cubes.push(random::unit_inclusion_cube(Field::Rational, 3));
    cubes
}

fn c4_qff_iff_acyclic(corpus: &[DgCube]) -> Outcome {
    let start = Instant::now();
    let (mut yes, mut no) = (0, 0);
    for (i, cube) in corpus.iter().enumerate() {
        let acyclic = cube.check_acyclic().map_err(|e| e.to_string())?.acyclic;
        let qff = check_qff(cube).map_err(|e| e.to_string())?.qff;
        ensure(acyclic == qff, || format!("cube {i}: acyclic {acyclic}, qff {qff}"))?;
        if acyclic {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(yes >= QFF_MIN_EACH && no >= QFF_MIN_EACH, || format!("unbalanced corpus: {yes} acyclic, {no} not"))?;
    ensure(elapsed < QFF_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} cubes agree ({yes} acyclic, {no} not) in {:.1}s", corpus.len(), elapsed.as_secs_f64()))
}

fn c5_hom_iso(corpus: &[DgCube]) -> Outcome {
    let mut pairs = 0;
    for (i, cube) in corpus.iter().enumerate() {
        let k = cube.vertex(0).num_objects();
        for a in 0..k {
            for b in 0..k {
                let r = hom_iso_check(cube, a, b).map_err(|e| e.to_string())?;
                ensure(r.ok, || format!("cube {i}, pair ({a}, {b}): {r:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} hom comparisons on {} cubes", corpus.len()))
}

/// Two weighted cubes sharing the face where the last coordinate meets.
fn stackable_pair(field: Field, rng: &mut impl Rng) -> (DgCube, DgCube) {
    let n = rng.gen_range(2..=3);
    let objs: Vec<WeightedComplex> = (0..rng.gen_range(1..=2)).map(|_| random::weighted_complex(field, rng, 3, 3)).collect();
    let mut c: Vec<usize> = (0..n - 1).map(|_| rng.gen_range(1..=2)).collect();
    let (mut ca, mut cb) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    if rng.gen_bool(0.8) {
        c[rng.gen_range(0..n - 1)] = 0;
    } else {
        (ca, cb) = (0, 0);
    }
    let p0 = 4;
    let level = |m: u32, steps: usize| -> usize {
        let drop: usize = (0..n - 1).filter(|&l| m & bit(l) != 0).map(|l| c[l]).sum();
        p0usize(p0, drop + steps)
    };
    let last = bit(n - 1);
    let pa: BTreeMap<u32, usize> = (0..1u32 << n).map(|m| (m, level(m, if m & last != 0 { ca } else { 0 }))).collect();
    let pb: BTreeMap<u32, usize> = (0..1u32 << n).map(|m| (m, level(m, ca + if m & last != 0 { cb } else { 0 }))).collect();
    let a = random::weighted_cube(field, &objs, n, &pa).expect("projections commute");
    let b = random::weighted_cube(field, &objs, n, &pb).expect("projections commute");
    (a, b)
}

fn p0usize(p0: usize, drop: usize) -> usize {
    p0.saturating_sub(drop).max(1)
}

fn c6_stack_extend() -> Outcome {
    let mut rng = random::rng(606);
    for i in 0..STACK_SAMPLES {
        let (a, b) = stackable_pair(field_for(i), &mut rng);
        let acyclic = |c: &DgCube| c.check_acyclic().map(|r| r.acyclic).map_err(|e| e.to_string());
        ensure(acyclic(&a)? && acyclic(&b)?, || format!("sample {i}: inputs are not acyclic"))?;
        let s = DgCube::stack(&a, &b).map_err(|e| e.to_string())?;
        ensure(acyclic(&s)?, || format!("sample {i}: stack is not acyclic"))?;
        let e = DgCube::extend(&a, &b).map_err(|e| e.to_string())?;
        ensure(acyclic(&e)?, || format!("sample {i}: extension is not acyclic"))?;
    }
    Ok(format!("{STACK_SAMPLES} stacks and extensions acyclic"))
}

/// `Σ_{i,j} dim F^{i-j} / F^{i-n}` from filtration ranks.
fn auslander_oracle(r: &FilteredAlgebra) -> usize {
    let n = r.n() as i64;
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            total += rank(&r.f(i - j)) - rank(&r.f(i - n));
        }
    }
    total
}

fn c7_auslander() -> Outcome {
    for field in fields() {
        for (a, want) in [(2, DUAL_NUMBERS_TOTAL), (3, CUBIC_TOTAL)] {
            let r = FilteredAlgebra::adic(field, a);
            let aus = auslander(&r).map_err(|e| e.to_string())?;
            ensure(aus.total_dim() == want, || format!("k[x]/x^{a}: total {} vs {want}", aus.total_dim()))?;
            ensure(auslander_oracle(&r) == want, || format!("oracle disagrees for k[x]/x^{a}"))?;
            let cat = validate_category(&aus.algebra);
            ensure(cat.ok, || format!("k[x]/x^{a}: not associative"))?;
            let end = end_comparison(&r).map_err(|e| e.to_string())?;
            ensure(end.ok, || format!("k[x]/x^{a}: {end:?}"))?;
        }
    }
    Ok(format!("totals {DUAL_NUMBERS_TOTAL} and {CUBIC_TOTAL}, End(⊕P_i) isomorphic over F7 and Q"))
}

fn c8_proj_homs() -> Outcome {
    let mut rng = random::rng(808);
    for s in 0..PROJ_HOM_SAMPLES {
        let field = field_for(s);
        let r = random::filtered_algebra(field, &mut rng, PROJ_MAX_DIM, PROJ_MAX_N);
        let n = r.n();
        let p: Vec<_> = (0..n).map(|i| truncated_free(&r, i, n).module).collect();
        for i in 0..n {
            for j in 0..n {
                let got = module_hom(&r, &p[i], &p[j]).map_err(|e| e.to_string())?.len();
                let want = rank(&r.f(j as i64 - i as i64)) - rank(&r.f(j as i64 - n as i64));
                ensure(got == want, || format!("sample {s}, ({i}, {j}): {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("{PROJ_HOM_SAMPLES} filtered algebras"))
}

fn span(field: Field, dim: usize, idx: &[usize]) -> Matrix {
    Matrix::from_fn(field, dim, idx.len(), |r, c| if idx[c] == r { field.one() } else { field.zero() })
}

fn same_span(u: &Matrix, v: &Matrix) -> bool {
    let both = Matrix::hstack(u.field(), u.rows(), &[u, v]);
    rank(u) == rank(&both) && rank(v) == rank(&both)
}

fn c9_refinement() -> Outcome {
    for field in fields() {
        let r = FilteredAlgebra::truncated_polynomial(field, 4, &[0, 2, 4]).map_err(|e| e.to_string())?;
        let g = refine(&r, &span(field, 4, &[1, 2, 3]), 2).map_err(|e| e.to_string())?;
        for (k, idx) in [(1, vec![1, 2, 3]), (2, vec![2, 3]), (3, vec![3]), (4, vec![])] {
            ensure(same_span(&g.f(-k), &span(field, 4, &idx)), || format!("G^-{k} is wrong"))?;
        }
    }
    let mut rng = random::rng(909);
    for s in 0..REFINE_SAMPLES {
        let data = random::refinement_data(field_for(s), &mut rng, 6, 3);
        let g = refine(&data.r, &data.ideal_r, data.d).map_err(|e| e.to_string())?;
        for i in 0..=data.r.n() as i64 {
            ensure(same_span(&g.f(-(data.d as i64) * i), &data.r.f(-i)), || format!("sample {s}: G^(-{}·{i}) ≠ F^-{i}", data.d))?;
        }
        let cube = refinement_square(&data).map_err(|e| e.to_string())?;
        let q = check_qff(&cube).map_err(|e| e.to_string())?;
        ensure(q.qff, || format!("sample {s}: refinement square is not qff"))?;
    }
    Ok(format!("k[x]/x^4 refines to (x) ⊃ (x²) ⊃ (x³); {REFINE_SAMPLES} random squares qff"))
}

fn c10_tensor() -> Outcome {
    let mut rng = random::rng(1010);
    for s in 0..TENSOR_SAMPLES {
        let field = if s % TENSOR_Q_EVERY == 0 { Field::Rational } else { Field::Prime(7) };
        let r = random::filtered_algebra(field, &mut rng, 6, 3);
        let n = r.n();
        let len = n + rng.gen_range(1..=2);
        let m = random::graded_module(&r, &mut rng, len, 3);
        let other = random::graded_module(&r, &mut rng, n, 3);
        let full = tensor_n(&r, &m, &other, n).map_err(|e| e.to_string())?;
        let cut = truncate(&r, &m, n).map_err(|e| e.to_string())?;
        let short = tensor_n(&r, &cut, &other, n).map_err(|e| e.to_string())?;
        ensure(full.module.dims == short.module.dims, || format!("sample {s}: {:?} vs {:?}", full.module.dims, short.module.dims))?;
        ensure(unit_law(&r, &cut).map_err(|e| e.to_string())?, || format!("sample {s}: P_0 ⊗ M ≇ M"))?;
    }
    Ok(format!("{TENSOR_SAMPLES} modules"))
}

fn c11_glue_prime_cone() -> Outcome {
    let mut rng = random::rng(1111);
    for s in 0..GLUE_PRIME_SAMPLES {
        let n = 2 + s % 2;
        let inp = random::glue_prime_input(field_for(s), &mut rng, n);
        let gp = GluePrime::new(&inp.base, inp.block.clone()).map_err(|e| e.to_string())?;
        let c = gp.cone(&inp.source, &inp.target, &inp.f).map_err(|e| e.to_string())?;
        let report = gp.check_cone(&inp.source, &inp.target, &inp.f, &c);
        ensure(report.ok, || format!("sample {s} (n = {n}): {report:?}"))?;
    }
    Ok(format!("{GLUE_PRIME_SAMPLES} cones"))
}

fn c12_unit_inclusion() -> Outcome {
    for field in fields() {
        let cube = random::unit_inclusion_cube(field, 2);
        let acyclic = cube.check_acyclic().map_err(|e| e.to_string())?;
        ensure(!acyclic.acyclic, || "reported acyclic".into())?;
        let q = check_qff(&cube).map_err(|e| e.to_string())?;
        ensure(!q.qff, || "reported qff".into())?;
        let pair = &q.pairs[0];
        let h0 = |m: &BTreeMap<i32, usize>| m.get(&0).copied().unwrap_or(0);
        let got = (h0(&pair.source_cohomology), h0(&pair.glue_cohomology));
        ensure(got == UNIT_H0, || format!("H⁰ dims {got:?}"))?;
    }
    Ok(format!("non-acyclic, non-qff, H⁰ {} vs {}", UNIT_H0.0, UNIT_H0.1))
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |k: usize| filter.is_empty() || filter.iter().any(|f| f == &k.to_string());
    let corpus = if wanted(4) || wanted(5) { qff_corpus() } else { Vec::new() };
    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "d² = 0 on random constructions", Box::new(c1_d_squared)),
        (2, "totalization of 1-cubes and squares", Box::new(c2_totalization)),
        (3, "glued category axioms", Box::new(c3_gac_category)),
        (4, "qff iff acyclic", Box::new(|| c4_qff_iff_acyclic(&corpus))),
        (5, "hom comparison is an isomorphism", Box::new(|| c5_hom_iso(&corpus))),
        (6, "stacking and extension preserve acyclicity", Box::new(c6_stack_extend)),
        (7, "Auslander algebras", Box::new(c7_auslander)),
        (8, "homs between truncated frees", Box::new(c8_proj_homs)),
        (9, "refinement", Box::new(c9_refinement)),
        (10, "truncating tensor product", Box::new(c10_tensor)),
        (11, "Glue' cones", Box::new(c11_glue_prime_cone)),
        (12, "unit inclusion is not qff", Box::new(c12_unit_inclusion)),
    ];
    let mut failed = 0;
    for (k, name, run) in &criteria {
        if !wanted(*k) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {k:>2} {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {k:>2} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
