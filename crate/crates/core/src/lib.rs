//! Endomorphism rings of ordinary elliptic curves over small prime fields.
//!
//! The ring is located in the lattice of orders between `Z[pi]` and `O_K` by
//! testing random class-group relations against the isogeny graph.

pub mod arith;
pub mod curve;
pub mod endoring;
pub mod error;
pub mod field;
pub mod isogeny;
pub mod lattice;
pub mod quadorder;
pub mod relations;

pub use curve::{isomorphic, Curve, FrobeniusData, Point};
pub use endoring::{ascend, oracle_endring, order_contains_endring, volcano_level, EndRingResult};
pub use error::{Error, Result};
pub use field::{ExtField, FiniteField, PrimeField};
pub use isogeny::{apply_ideal, holds_in_graph, TorsionBasis};
pub use quadorder::{FactorBase, PrimeIdealClass, QForm, QuadOrder};
pub use relations::{find_relation, holds_in_order, Relation, RelationParams};
