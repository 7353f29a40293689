//! Cubes of complexes: totalization, the cone description, permutation, stacking.

use std::collections::BTreeMap;

use dgglue::hypercube::ComplexCube;
use dgglue::random;
use dgglue::{Complex, Field, GradedMap};

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(3);
    let a = random::complex(f7, &mut rng, -1, 1, 2, 4);
    let b = random::complex(f7, &mut rng, -1, 1, 2, 4);
    let f = random::chain_map(&a, &b, &mut rng);
    let one = ComplexCube::new(f7, 1, BTreeMap::from([(0, a), (1, b)]), BTreeMap::from([((0, 0), f.clone())]))?;
    println!("t(1-cube) = {:?}, cone = {:?}", one.totalize().cohomology(), Complex::cone(&f)?.cohomology());

    let cube = random::complex_cube(f7, &mut rng, 3, 12);
    let t = cube.totalize();
    println!("3-cube: total dims {:?}, H = {:?}", t.dims(), t.cohomology());
    println!("  t = cone of the map of faces: {}", cube.t_factorization_check()?);
    println!("  permuted H = {:?}", cube.permute(&[2, 0, 1])?.totalize().cohomology());

    let (_, top, _) = cube.as_morphism()?;
    let ids = top.raw.vertices.iter().map(|(&m, v)| (m, GradedMap::identity(v))).collect();
    let constant = ComplexCube::from_morphism(&top, &top, &ids)?;
    println!("  constant cube acyclic: {}", constant.is_acyclic());
    println!("  stack(cube, constant) = cube: {}", ComplexCube::stack(&cube, &constant)?.same_as(&cube));
    println!("  extend(cube, constant) H = {:?}", ComplexCube::extend(&cube, &constant)?.totalize().cohomology());
    Ok(())
}
