//! Gluing a cube: the category Gac, the functor π, qff checks and the hom comparison.

use dgglue::dgcat::{validate_category, DgCat};
use dgglue::glue::{check_qff, glue, hom_iso_check, pi_object, Gac};
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let q = Field::Rational;
    let mut rng = random::rng(11);
    let cube = random::dg_cube(q, &mut rng, 2, true);
    let gac = Gac::new(&cube)?;
    let labels: Vec<String> = (0..gac.num_objects()).map(|a| gac.label(a)).collect();
    println!("Gac objects {labels:?}, axioms ok: {}", validate_category(&gac).ok);

    let k = cube.vertex(0).num_objects();
    let pis: Vec<_> = (0..k).map(|a| pi_object(&gac, a)).collect();
    let g = glue(&cube, pis)?;
    println!("Glue on π of the {k} objects: axioms ok {}", validate_category(&g).ok);

    let qff = check_qff(&cube)?;
    println!("acyclic cube: qff {}", qff.qff);
    for p in &qff.pairs {
        println!("  ({}, {}): {:?} -> {:?}", p.source, p.target, p.source_cohomology, p.glue_cohomology);
    }
    println!("hom comparison (0, 0): {:?}", hom_iso_check(&cube, 0, 0)?);

    let unit = random::unit_inclusion_cube(q, 2);
    let r = check_qff(&unit)?;
    let p = &r.pairs[0];
    println!("k -> k[ε]/ε²: qff {}, H {:?} vs {:?}", r.qff, p.source_cohomology, p.glue_cohomology);
    Ok(())
}
