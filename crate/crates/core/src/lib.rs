//! Computational algebra for elementary abelian regular subgroups of
//! `Sym(F₂ⁿ)`: the translation group `T`, its conjugates `T^g` and the
//! XOR-like operations `∘` they induce, weak-key subspaces, centralizers of
//! subgroups of `T`, and the Sylow 2-subgroups of `AGL(F₂ⁿ)`.

pub mod affine;
pub mod altdiff;
pub mod centralizer;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod perm;
pub mod regular;
pub mod sylow;

pub use affine::{Affinity, AugmentedMatrix};
pub use altdiff::{DiffOp, SBox};
pub use centralizer::WreathDescriptor;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, Flag, Subspace};
pub use oracle::{Status, VerificationReport};
pub use perm::{Perm, PermGroup};
pub use regular::RegularGroup;
pub use sylow::SylowAGL;
