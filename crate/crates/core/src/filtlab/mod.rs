//! Filtered algebras, graded modules over their Rees algebras, and the
//! categories of truncated projectives built from them.

pub mod algebra;
pub mod auslander;
pub mod free;
pub mod module;
pub mod proj;

pub use algebra::{check_filtered_map, refine, validate_filtration, FilteredAlgebra, Quot};
pub use auslander::{auslander, end_comparison, AuslanderAlgebra, EndReport};
pub use free::{presentation, tensor_n, truncated_free, unit_law, Presentation, TensorProduct};
pub use module::{module_hom, truncate, twist, GradedModule};
pub use proj::{proj_dgcat, refinement_square, RefinementData};
