//! Ground sets, relations, and finite coarse structures.

mod filtration;
mod group;
mod metric;
mod relation;

pub use filtration::{
    CoarseFiltration, FiltrationError, FiltrationKind, MembershipCertificate, RefusalWitness,
    DEFAULT_MAX_LEVEL,
};
pub use group::{group_entourage, GroupError, GroupTable};
pub use metric::{band, metric_entourage, MetricSource};
pub use relation::{GroundSet, Relation, RelationError};
