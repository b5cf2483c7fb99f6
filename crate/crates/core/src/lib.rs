//! Niche hypergraphs of acyclic digraphs.
//!
//! * [`hypergraph`]: hypergraphs, structure reports, class recognition and
//!   generators.
//! * [`digraph`]: oriented digraphs, acyclicity certificates, niche
//!   hypergraphs and the goodness check.
//! * [`constructor`]: realizations of linear hypertrees and petal flowers.
//! * [`oracle`]: exhaustive niche-number search on small instances.
//! * [`io`]: canonical JSON files and DOT export.

pub mod constructor;
pub mod digraph;
pub mod hypergraph;
pub mod io;
pub mod oracle;

pub use constructor::{construct_good_digraph, flower_digraph, necessary_check, ConstructionTrace};
pub use digraph::{is_acyclic, is_good_digraph, niche_hypergraph, Digraph, Side};
pub use hypergraph::{classify_t, generate, Classification, FamilySpec, Hyperedge, Hypergraph, VertexId};
pub use oracle::{niche_number_upto, realizes, NicheNumber, SearchBudget};
