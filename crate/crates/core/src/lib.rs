//! Canonical embeddings, Segre families and rigidity checks for the
//! irreducible Hermitian symmetric spaces of compact type.

pub mod linalg;
pub mod octonion;
pub mod polyring;
pub mod rigidity;
pub mod segre;
pub mod selftest;
pub mod spaces;
