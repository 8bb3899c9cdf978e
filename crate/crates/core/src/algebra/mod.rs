//! The bound path algebra of a defining system and exact module computations over it.

pub mod basis;
pub mod lemmas;
pub mod linalg;
pub mod module;
pub mod oracle;

pub use basis::Algebra;
pub use linalg::{Matrix, Q};
pub use oracle::{algebra_dim_oracle, total_path_count};
