//! Cochain complexes: cohomology, cones, shifts, tensor and hom complexes.

use dgglue::random;
use dgglue::{Complex, Field, GradedMap, Matrix};

fn main() -> dgglue::Result<()> {
    let q = Field::Rational;
    // k --(1 1)^T--> k² in degrees 0, 1
    let c = Complex::two_term(0, Matrix::from_ints(q, &[&[1], &[1]]))?;
    println!("C: dims {:?}, H = {:?}, χ = {}", c.dims(), c.cohomology(), c.euler_characteristic());

    let id = GradedMap::identity(&c);
    println!("cone(id) acyclic: {}", Complex::cone(&id)?.is_acyclic());
    println!("C[1] window: {}..{}", c.shift(1).lo(), c.shift(1).hi());
    println!("H(C ⊗ C) = {:?}", Complex::tensor(&c, &c).cohomology());
    println!("H(Hom(C, C)) = {:?}", Complex::hom_complex(&c, &c).cohomology());

    let f7 = Field::Prime(7);
    let mut rng = random::rng(1);
    let a = random::complex(f7, &mut rng, -2, 2, 3, 8);
    let b = random::complex(f7, &mut rng, -2, 2, 3, 8);
    let f = random::chain_map(&a, &b, &mut rng);
    println!("over F7: H(A) = {:?}, H(B) = {:?}", a.cohomology(), b.cohomology());
    for m in f.induced_on_cohomology() {
        println!("  H^{}(f): {} -> {}, rank {}", m.degree, m.source_dim, m.target_dim, m.rank);
    }
    println!("  H(cone f) = {:?}, quasi-iso: {}", Complex::cone(&f)?.cohomology(), f.is_quasi_isomorphism());
    Ok(())
}
