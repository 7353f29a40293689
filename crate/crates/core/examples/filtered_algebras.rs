//! Filtered Artinian algebras: validation, refinement along an ideal, stretching.

use dgglue::filtlab::{refine, validate_filtration, FilteredAlgebra};
use dgglue::random;
use dgglue::{Field, Matrix};

fn dims(r: &FilteredAlgebra) -> Vec<usize> {
    (0..=r.n() as i64).map(|k| r.f(-k).rank()).collect()
}

fn main() -> dgglue::Result<()> {
    let q = Field::Rational;
    // k[x]/x⁴ with F^-1 = (x²)
    let r = FilteredAlgebra::truncated_polynomial(q, 4, &[0, 2, 4])?;
    println!("R: dims of F^0, F^-1, ... = {:?}, valid {}", dims(&r), validate_filtration(&r).ok);
    let ideal = Matrix::from_fn(q, 4, 3, |row, c| if row == c + 1 { q.one() } else { q.zero() });
    let g = refine(&r, &ideal, 2)?;
    println!("refined along (x) with d = 2: {:?}", dims(&g));
    println!("stretched by 2: {:?}", dims(&r.stretch(2)));

    let mut rng = random::rng(2);
    let s = random::filtered_algebra(Field::Prime(7), &mut rng, 8, 3);
    println!("random algebra {:?}: dims {:?}, valid {}", s.labels, dims(&s), validate_filtration(&s).ok);
    Ok(())
}
