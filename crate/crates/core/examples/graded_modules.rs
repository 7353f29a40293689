//! Graded modules over the Rees algebra: truncated frees, homs, twists, presentations.

use dgglue::filtlab::module::{epsilon, veronese};
use dgglue::filtlab::{module_hom, presentation, truncate, truncated_free, twist, FilteredAlgebra};
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let r = FilteredAlgebra::adic(f7, 3);
    let n = r.n();
    let p: Vec<_> = (0..n).map(|i| truncated_free(&r, i, n).module).collect();
    for i in 0..n {
        let homs: Vec<usize> = (0..n).map(|j| module_hom(&r, &p[i], &p[j]).map(|h| h.len())).collect::<Result<_, _>>()?;
        println!("P{i}: dims {:?}, dim Hom(P{i}, P_j) = {homs:?}", p[i].dims);
    }

    let mut rng = random::rng(2);
    let m = random::graded_module(&r, &mut rng, n, 3);
    let pres = presentation(&r, &m);
    println!("M: dims {:?}, generators at {:?}, {} relations", m.dims, pres.gens, pres.relations.len());
    println!("M(1): dims {:?}", twist(&r, &m, 1).dims);
    println!("l²M: dims {:?}", truncate(&r, &m, 2)?.dims);

    let (g, em) = epsilon(&r, &m, 2)?;
    println!("ε(M) over the stretched filtration: dims {:?}", em.dims);
    println!("Veronese of ε(M): dims {:?}", veronese(&g, &r, &em, 2)?.dims);
    Ok(())
}
