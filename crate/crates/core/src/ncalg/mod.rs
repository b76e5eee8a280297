//! PBW-algebra engine: ordered generators, straightening rules, memoized
//! normal forms, centrality tests, subalgebra membership and q-central
//! localization.

mod element;
mod localize;
mod membership;
mod power;
mod spec;

pub use element::{word_cmp, Letter, Monomial, NCElement};
pub use localize::adjoin_inverse;
pub use membership::{subalgebra_membership, MembershipWitness};
pub use power::{straighten_power, PowerPair};
pub use spec::{parse_element, AlgebraSpec, ConfluenceReport, GenKind, Generator, Rhs};
