pub mod abelian;
pub mod arith;
pub mod error;
pub mod gmodule;
pub mod groups;
pub mod limits;
pub mod linalg;
pub mod scalar;
pub mod cohomology;
pub mod postnikov;
pub mod sylow;
pub mod nilpotent;
pub mod burnside;
pub mod document;
pub mod report;
