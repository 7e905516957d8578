//! Rigid objects of the algebraic model `A(Z_p)` and eventually constant
//! morphisms between them.

mod evspec;
mod iso;
mod morphism;
mod object;

pub use evspec::{evspec_fixed_split, EvSpecElement, FixedDescriptor, FixedSplit};
pub use iso::{is_isomorphic, isomorphism};
pub use morphism::RigidMorphism;
pub use object::{FiniteLevelObject, GeneratorKind, RigidObject};
