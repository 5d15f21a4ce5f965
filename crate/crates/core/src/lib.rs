pub mod digraph;
pub mod error;
pub mod format;
pub mod gen;
mod flow;
pub mod menger;
pub mod oracle;
pub mod flame;
pub mod pym;
pub mod incomp;
pub mod extend;
pub mod cert;
pub mod compare;

pub use digraph::{Digraph, Edge, EdgeList, EdgeSet, RootedDigraph, Vertex, VertexSet};
pub use error::{FlameError, Result};
