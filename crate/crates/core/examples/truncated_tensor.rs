//! The truncating tensor product l^n(M ⊗ N) and its unit P_0.

use dgglue::filtlab::{tensor_n, truncate, truncated_free, unit_law};
use dgglue::random;
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    let f7 = Field::Prime(7);
    let mut rng = random::rng(12);
    let r = random::filtered_algebra(f7, &mut rng, 6, 3);
    let n = r.n();
    let m = random::graded_module(&r, &mut rng, n + 1, 3);
    let other = random::graded_module(&r, &mut rng, n, 3);
    println!("M (length {}): {:?}, N: {:?}", m.len(), m.dims, other.dims);
    println!("l^n(M ⊗ N): {:?}", tensor_n(&r, &m, &other, n)?.module.dims);
    println!("l^n(l^n M ⊗ N): {:?}", tensor_n(&r, &truncate(&r, &m, n)?, &other, n)?.module.dims);
    println!("P_0 ⊗ N ≅ N: {}", unit_law(&r, &other)?);
    let p1 = truncated_free(&r, 1, n).module;
    println!("P_1 ⊗ P_1: {:?}, P_2: {:?}", tensor_n(&r, &p1, &p1, n)?.module.dims, truncated_free(&r, 2.min(n - 1), n).module.dims);
    Ok(())
}
