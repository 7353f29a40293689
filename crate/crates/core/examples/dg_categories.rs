//! Finite dg categories, functors, bimodules, Ext tables and H⁰.

use dgglue::dgcat::{
    check_directed, ext_table, h0_category, restricted_diagonal, validate_bimodule, validate_category, DgCat, DgCategory, DgFunctor,
};
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let a2 = DgCategory::a2_quiver(f7);
    println!("A2 objects {:?}, axioms ok: {}", a2.labels(), validate_category(&a2).ok);
    for ((x, y), h) in ext_table(&a2) {
        println!("  Ext({}, {}) = {h:?}", a2.label(x), a2.label(y));
    }
    println!("  directed for [[1], [0]]: {}", check_directed(&a2, &[vec![1], vec![0]])?);

    let dual = DgCategory::truncated_polynomial(f7, 2);
    println!("k[ε]/ε²: hom dims {:?}", dual.hom(0, 0).dims());

    let mut rng = random::rng(4);
    let objs: Vec<_> = (0..2).map(|_| random::weighted_complex(f7, &mut rng, 3, 2)).collect();
    let w = random::weighted_quotient(f7, &objs, 2);
    let report = validate_category(&w);
    println!("weighted quotient: {} axiom instances checked, ok {}", report.checked, report.ok);
    let h0 = h0_category(&w)?;
    println!("  H⁰ category valid: {}", validate_category(&h0).ok);

    let id = DgFunctor::identity(&w);
    let diag = restricted_diagonal(&w, &w, &id, &w, &id)?;
    println!("  diagonal bimodule valid: {}", validate_bimodule(&w, &w, &diag).ok);
    Ok(())
}
