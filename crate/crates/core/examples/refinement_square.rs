//! Categories of truncated projectives and the refinement square.

use dgglue::dgcat::{validate_category, DgCat};
use dgglue::filtlab::{proj_dgcat, refinement_square};
use dgglue::glue::check_qff;
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(31);
    let data = random::refinement_data(f7, &mut rng, 6, 3);
    let p = proj_dgcat(&data.r)?;
    let dims: Vec<usize> = (0..p.num_objects()).map(|j| p.hom(0, j).total_dim()).collect();
    println!("proj(R): {} objects, dim Hom(P0, P_j) = {dims:?}, valid {}", p.num_objects(), validate_category(&p).ok);
    let cube = refinement_square(&data)?;
    for (m, v) in &cube.raw.vertices {
        println!("  vertex {m}: {} objects", v.num_objects());
    }
    println!("refinement by d = {}: acyclic {}, qff {}", data.d, cube.check_acyclic()?.acyclic, check_qff(&cube)?.qff);
    Ok(())
}
