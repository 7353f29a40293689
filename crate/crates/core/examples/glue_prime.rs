//! The upper-triangular model Glue': objects with μ, morphisms, cones.

use dgglue::glue_prime::GluePrime;
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(21);
    for n in [2, 3] {
        let inp = random::glue_prime_input(f7, &mut rng, n);
        let gp = GluePrime::new(&inp.base, inp.block.clone())?;
        gp.validate_object(&inp.source)?;
        println!("n = {n}: Hom(M, T) = {:?}", gp.hom(&inp.source, &inp.target).cohomology());
        let c = gp.cone(&inp.source, &inp.target, &inp.f)?;
        let report = gp.check_cone(&inp.source, &inp.target, &inp.f, &c);
        println!("  cone satisfies μ: {}", report.mu_relation);
        for (name, ok) in &report.relations {
            println!("  {name}: {ok}");
        }
    }
    Ok(())
}
