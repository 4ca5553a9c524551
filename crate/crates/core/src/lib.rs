//! Exact, cap-bounded computation with abstract Cuntz semigroups.
//!
//! The crate provides concrete models (lower-semicontinuous functions on
//! finite posets, products, quotients, finite tables), checkers for the
//! order axioms and structural properties on finite enumeration windows,
//! the divisibility constants, and the functional cone with the rank
//! realization map.

pub mod axioms;
pub mod builtins;
pub mod cap;
pub mod divisibility;
pub mod error;
pub mod ext;
pub mod functionals;
pub mod ideal;
pub mod model;
pub mod parallel;
pub mod poset;
pub mod report;
pub mod scalar;

pub use cap::{Cap, CapIndex};
pub use error::{CuError, Result};
pub use ext::Ext;
pub use model::{CuModel, Element, TableModel};
pub use poset::FinitePoset;
pub use report::{CheckReport, Instance, Item, Verdict};
pub use scalar::{Scalar, ScalarKind};
