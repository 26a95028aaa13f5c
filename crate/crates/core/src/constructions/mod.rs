//! Constructions of n-precats: nerves, Υ, cells, suspensions, deloopings,
//! Whitehead towers, pushout-products and the comparison objects built
//! from them.

pub mod cells;
pub mod claim;
pub mod delooping;
pub mod monoidal;
pub mod nerve;
pub mod products;
pub mod suspension;
pub mod upsilon;
pub mod whitehead;

pub use cells::{cell, representable, CellPair};
pub use delooping::{delooping, delooping_to_suspension};
pub use nerve::nerve;
pub use products::{pushout_product, q_construction, rem1, rem2, square, IdentityCheck, IdentityVerdict};
pub use suspension::{sigma, suspension, suspension_iso_variant, Pointed, Suspension};
pub use upsilon::{upsilon, upsilon_with, Face, Indexing};
pub use whitehead::whitehead;
