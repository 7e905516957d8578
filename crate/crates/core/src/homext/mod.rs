//! Hom spaces, `Ext¹` and the Adams short exact sequence between rigid
//! objects.

mod adams;
mod ext;
mod hom;

pub use adams::{adams_maps, AdamsMaps, ExtTerm, GradedRigid, HomTerm};
pub use ext::{ext1, ext1_at, ext1_truncation_oracle, ExtDescriptor};
pub use hom::{hom_space, hom_space_at, HomDescriptor};
