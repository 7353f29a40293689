//! Cubes of dg categories: acyclicity of bimodule cubes, stacking and extension.

use std::collections::BTreeMap;

use dgglue::hypercube::{bit, DgCube};
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(5);
    for constant in [true, false] {
        let cube = random::dg_cube(f7, &mut rng, 2, constant);
        let r = cube.check_acyclic()?;
        println!("square (constant direction: {constant}) acyclic: {}", r.acyclic);
        for p in r.pairs.iter().filter(|p| !p.acyclic) {
            println!("  ({}, {}) totalization H = {:?}", p.source, p.target, p.cohomology);
        }
    }

    // weight truncations at 4 ≥ 3 ≥ 2 along the second coordinate, constant along the first
    let objs: Vec<_> = (0..2).map(|_| random::weighted_complex(f7, &mut rng, 3, 3)).collect();
    let levels = |lo: usize, hi: usize| -> BTreeMap<u32, usize> { (0..4u32).map(|m| (m, if m & bit(1) != 0 { hi } else { lo })).collect() };
    let a = random::weighted_cube(f7, &objs, 2, &levels(4, 3))?;
    let b = random::weighted_cube(f7, &objs, 2, &levels(3, 2))?;
    println!("a, b acyclic: {}, {}", a.check_acyclic()?.acyclic, b.check_acyclic()?.acyclic);
    println!("stack acyclic: {}", DgCube::stack(&a, &b)?.check_acyclic()?.acyclic);
    println!("extend acyclic: {}", DgCube::extend(&a, &b)?.check_acyclic()?.acyclic);

    let unit = random::unit_inclusion_cube(f7, 2);
    println!("k -> k[ε]/ε² acyclic: {}", unit.check_acyclic()?.acyclic);
    Ok(())
}
