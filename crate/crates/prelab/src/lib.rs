//! Finite-model laboratory for preordered relations, prelational monoids and
//! spiders, with a free-pregroup sentence recognizer.

pub mod enumerate;
pub mod error;
pub mod format;
pub mod grammar;
pub mod order;
pub mod monoid;
pub mod prelation;
pub mod spider;

pub use error::{Error, Result};
pub use order::{ClosedSet, Preorder, Set, Side};
pub use monoid::{PrelMonoid, PregroupStructure, PropertyVector};
pub use prelation::{MapVerdict, Prelation};
