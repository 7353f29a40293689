//! Auslander algebras of filtered algebras and the comparison with End(⊕P_i).

use dgglue::dgcat::validate_category;
use dgglue::filtlab::{auslander, end_comparison, FilteredAlgebra};
use dgglue::Field;

fn main() -> dgglue::Result<()> {
    for a in [2, 3] {
        let r = FilteredAlgebra::adic(Field::Rational, a);
        let aus = auslander(&r)?;
        println!("k[x]/x^{a}: block dims {:?}, total {}", aus.block_dims(), aus.total_dim());
        println!("  associative and unital: {}", validate_category(&aus.algebra).ok);
        println!("  {:?}", end_comparison(&r)?);
    }
    Ok(())
}
