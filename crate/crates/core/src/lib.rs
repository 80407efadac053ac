pub mod connectivity;
pub mod driver;
pub mod error;
pub mod es_tree;
pub mod graph;
pub mod numeric;
pub mod oracle;
pub mod replay;
pub mod threshold;
pub mod trace;
pub mod wses;
