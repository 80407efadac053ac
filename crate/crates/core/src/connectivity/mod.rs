//! Fully dynamic connectivity with split detection.
//!
//! [`ConnectivityForest`] fronts either the Holm–de Lichtenberg–Thorup
//! structure or a recompute-from-scratch fallback kept for differential
//! testing. Component identifiers are the smallest vertex index in the
//! component.

mod euler;
mod hdt;
mod naive;

pub use hdt::HdtForest;
pub use naive::{components, NaiveForest};

use crate::error::Result;
use crate::graph::VertexId;

/// Outcome of an edge deletion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub split: bool,
    /// Vertices of the side with at most half of the old component, sorted.
    /// On equal halves, the side without the lowest-numbered vertex.
    pub smaller_side: Vec<VertexId>,
    pub surviving_component: usize,
}

impl SplitReport {
    pub(crate) fn joined(component: usize) -> Self {
        SplitReport {
            split: false,
            smaller_side: Vec::new(),
            surviving_component: component,
        }
    }
}

/// Lifetime operation counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConnectivityStats {
    pub inserts: u64,
    pub deletes: u64,
    pub links: u64,
    pub cuts: u64,
    pub rotations: u64,
    pub level_raises: u64,
    pub nontree_scans: u64,
    pub splits: u64,
    pub enumerated: u64,
}

impl ConnectivityStats {
    /// Sum of the counters that stand for constant-time tree work.
    pub fn elementary_ops(&self) -> u64 {
        self.links + self.cuts + self.rotations + self.level_raises + self.nontree_scans + self.enumerated
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Hdt,
    Naive,
}

#[derive(Clone, Debug)]
pub enum ConnectivityForest {
    Hdt(HdtForest),
    Naive(NaiveForest),
}

impl ConnectivityForest {
    pub fn new(n: usize, backend: Backend) -> Self {
        match backend {
            Backend::Hdt => ConnectivityForest::Hdt(HdtForest::new(n)),
            Backend::Naive => ConnectivityForest::Naive(NaiveForest::new(n)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            ConnectivityForest::Hdt(_) => Backend::Hdt,
            ConnectivityForest::Naive(_) => Backend::Naive,
        }
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        match self {
            ConnectivityForest::Hdt(f) => f.insert(u, v),
            ConnectivityForest::Naive(f) => f.insert(u, v),
        }
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<SplitReport> {
        match self {
            ConnectivityForest::Hdt(f) => f.delete(u, v),
            ConnectivityForest::Naive(f) => f.delete(u, v),
        }
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        match self {
            ConnectivityForest::Hdt(f) => f.contains(u, v),
            ConnectivityForest::Naive(f) => f.contains(u, v),
        }
    }

    pub fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        match self {
            ConnectivityForest::Hdt(f) => f.connected(u, v),
            ConnectivityForest::Naive(f) => f.connected(u, v),
        }
    }

    pub fn component_size(&mut self, u: VertexId) -> usize {
        match self {
            ConnectivityForest::Hdt(f) => f.component_size(u),
            ConnectivityForest::Naive(f) => f.component_size(u),
        }
    }

    pub fn component_id(&mut self, u: VertexId) -> usize {
        match self {
            ConnectivityForest::Hdt(f) => f.component_id(u),
            ConnectivityForest::Naive(f) => f.component_id(u),
        }
    }

    pub fn stats(&self) -> ConnectivityStats {
        match self {
            ConnectivityForest::Hdt(f) => f.stats(),
            ConnectivityForest::Naive(f) => f.stats(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn both() -> [Backend; 2] {
        [Backend::Hdt, Backend::Naive]
    }

    #[test]
    fn insert_connects() {
        for b in both() {
            let mut f = ConnectivityForest::new(8, b);
            assert!(!f.connected(3, 7));
            f.insert(0, 1).unwrap();
            assert!(f.connected(0, 1));
            f.insert(1, 2).unwrap();
            assert!(f.connected(0, 2));
            f.insert(3, 7).unwrap();
            assert_eq!(f.component_size(3), 2);
            assert_eq!(f.component_id(7), 3);
            assert!(matches!(f.insert(1, 0), Err(Error::DuplicateEdge(0, 1))));
        }
    }

    #[test]
    fn path_split_and_triangle_replacement() {
        for b in both() {
            let mut f = ConnectivityForest::new(3, b);
            f.insert(0, 1).unwrap();
            f.insert(1, 2).unwrap();
            let rep = f.delete(0, 1).unwrap();
            assert!(rep.split);
            assert_eq!(rep.smaller_side, vec![0]);
            assert_eq!(rep.surviving_component, 1);

            let mut f = ConnectivityForest::new(3, b);
            f.insert(0, 1).unwrap();
            f.insert(1, 2).unwrap();
            f.insert(0, 2).unwrap();
            assert!(!f.delete(0, 1).unwrap().split);
            assert!(f.connected(0, 1));
            assert!(matches!(f.delete(0, 1), Err(Error::EdgeNotFound(0, 1))));
        }
    }

    #[test]
    fn equal_halves_keep_lowest_vertex() {
        for b in both() {
            let mut f = ConnectivityForest::new(4, b);
            f.insert(0, 2).unwrap();
            f.insert(2, 1).unwrap();
            f.insert(1, 3).unwrap();
            let rep = f.delete(2, 1).unwrap();
            assert_eq!(rep.smaller_side, vec![1, 3]);
            assert_eq!(rep.surviving_component, 0);
        }
    }
}
