//! Euler-tour sequences stored in splay trees.
//!
//! Each vertex owns one node per forest and each tree edge owns two directed
//! nodes. A tree of the forest is the cyclic sequence of its nodes; rerooting
//! rotates the sequence. Subtree aggregates carry the number of vertex nodes,
//! the smallest vertex index, and an OR of per-node flag bits so that flagged
//! nodes can be located by descending from the root.

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    // vertex node: (v, NIL); edge node: (from, to)
    a: u32,
    b: u32,
    flags: u8,
    agg: u8,
    size: u32,
    min_v: u32,
}

impl Node {
    fn fresh(a: u32, b: u32) -> Self {
        let is_vertex = b == NIL;
        Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            a,
            b,
            flags: 0,
            agg: 0,
            size: is_vertex as u32,
            min_v: if is_vertex { a } else { NIL },
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct EulerForest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    pub rotations: u64,
}

impl EulerForest {
    pub fn new() -> Self {
        EulerForest::default()
    }

    fn alloc(&mut self, a: u32, b: u32) -> u32 {
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = Node::fresh(a, b);
            id
        } else {
            self.nodes.push(Node::fresh(a, b));
            (self.nodes.len() - 1) as u32
        }
    }

    pub fn add_vertex(&mut self, v: u32) -> u32 {
        self.alloc(v, NIL)
    }

    pub fn add_edge_node(&mut self, from: u32, to: u32) -> u32 {
        self.alloc(from, to)
    }

    pub fn release(&mut self, x: u32) {
        debug_assert!(self.nodes[x as usize].parent == NIL);
        debug_assert!(self.nodes[x as usize].left == NIL && self.nodes[x as usize].right == NIL);
        self.free.push(x);
    }

    /// `(from, to)` of an edge node.
    pub fn edge_of(&self, x: u32) -> (u32, u32) {
        let n = &self.nodes[x as usize];
        debug_assert!(n.b != NIL);
        (n.a, n.b)
    }

    pub fn vertex_of(&self, x: u32) -> u32 {
        let n = &self.nodes[x as usize];
        debug_assert!(n.b == NIL);
        n.a
    }

    fn update(&mut self, x: u32) {
        let (l, r) = {
            let n = &self.nodes[x as usize];
            (n.left, n.right)
        };
        let own = &self.nodes[x as usize];
        let mut size = (own.b == NIL) as u32;
        let mut min_v = if own.b == NIL { own.a } else { NIL };
        let mut agg = own.flags;
        for c in [l, r] {
            if c != NIL {
                let cn = &self.nodes[c as usize];
                size += cn.size;
                min_v = min_v.min(cn.min_v);
                agg |= cn.agg;
            }
        }
        let n = &mut self.nodes[x as usize];
        n.size = size;
        n.min_v = min_v;
        n.agg = agg;
    }

    fn rotate(&mut self, x: u32) {
        let p = self.nodes[x as usize].parent;
        let g = self.nodes[p as usize].parent;
        if self.nodes[p as usize].left == x {
            let b = self.nodes[x as usize].right;
            self.nodes[p as usize].left = b;
            if b != NIL {
                self.nodes[b as usize].parent = p;
            }
            self.nodes[x as usize].right = p;
        } else {
            let b = self.nodes[x as usize].left;
            self.nodes[p as usize].right = b;
            if b != NIL {
                self.nodes[b as usize].parent = p;
            }
            self.nodes[x as usize].left = p;
        }
        self.nodes[p as usize].parent = x;
        self.nodes[x as usize].parent = g;
        if g != NIL {
            if self.nodes[g as usize].left == p {
                self.nodes[g as usize].left = x;
            } else {
                self.nodes[g as usize].right = x;
            }
        }
        self.update(p);
        self.update(x);
        self.rotations += 1;
    }

    pub fn splay(&mut self, x: u32) {
        loop {
            let p = self.nodes[x as usize].parent;
            if p == NIL {
                break;
            }
            let g = self.nodes[p as usize].parent;
            if g != NIL {
                let zig_zig =
                    (self.nodes[g as usize].left == p) == (self.nodes[p as usize].left == x);
                if zig_zig {
                    self.rotate(p);
                } else {
                    self.rotate(x);
                }
            }
            self.rotate(x);
        }
    }

    /// Whether `x` and `y` lie in the same sequence.
    pub fn same_tree(&mut self, x: u32, y: u32) -> bool {
        if x == y {
            return true;
        }
        self.splay(x);
        self.splay(y);
        // x stays a root only if y's splay happened in another tree
        self.nodes[x as usize].parent != NIL
    }

    /// Number of vertex nodes in the tree of `x`.
    pub fn tree_size(&mut self, x: u32) -> u32 {
        self.splay(x);
        self.nodes[x as usize].size
    }

    /// Smallest vertex index in the tree of `x`.
    pub fn tree_min(&mut self, x: u32) -> u32 {
        self.splay(x);
        self.nodes[x as usize].min_v
    }

    fn join(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let mut m = a;
        while self.nodes[m as usize].right != NIL {
            m = self.nodes[m as usize].right;
        }
        self.splay(m);
        self.nodes[m as usize].right = b;
        self.nodes[b as usize].parent = m;
        self.update(m);
        m
    }

    /// Rotates the tour of `x` so that it starts at `x`; returns the root.
    fn reroot(&mut self, x: u32) -> u32 {
        self.splay(x);
        let l = self.nodes[x as usize].left;
        if l == NIL {
            return x;
        }
        self.nodes[x as usize].left = NIL;
        self.nodes[l as usize].parent = NIL;
        self.update(x);
        self.join(x, l)
    }

    /// Joins the trees of vertex nodes `u` and `v` through the fresh edge
    /// nodes `uv` and `vu`.
    pub fn link(&mut self, u: u32, v: u32, uv: u32, vu: u32) {
        let tu = self.reroot(u);
        let tv = self.reroot(v);
        let t = self.join(tu, uv);
        let t = self.join(t, tv);
        self.join(t, vu);
    }

    /// Removes the tree edge represented by `uv`/`vu` and returns a node of
    /// each resulting tree. Both edge nodes are detached but not released.
    pub fn cut(&mut self, uv: u32, vu: u32) -> (u32, u32) {
        self.splay(uv);
        let l = self.nodes[uv as usize].left;
        let r = self.nodes[uv as usize].right;
        self.nodes[uv as usize].left = NIL;
        self.nodes[uv as usize].right = NIL;
        if l != NIL {
            self.nodes[l as usize].parent = NIL;
        }
        if r != NIL {
            self.nodes[r as usize].parent = NIL;
        }
        self.update(uv);
        let vu_in_left = l != NIL && {
            self.splay(vu);
            vu == l || self.nodes[l as usize].parent != NIL
        };
        self.splay(vu);
        let x = self.nodes[vu as usize].left;
        let y = self.nodes[vu as usize].right;
        self.nodes[vu as usize].left = NIL;
        self.nodes[vu as usize].right = NIL;
        if x != NIL {
            self.nodes[x as usize].parent = NIL;
        }
        if y != NIL {
            self.nodes[y as usize].parent = NIL;
        }
        self.update(vu);
        if vu_in_left {
            // X vu Y uv R  ->  Y | X R
            let outer = self.join(x, r);
            (y, outer)
        } else {
            // L uv X vu Y  ->  X | L Y
            let outer = self.join(l, y);
            (x, outer)
        }
    }

    pub fn set_flag(&mut self, x: u32, flag: u8, on: bool) {
        self.splay(x);
        let n = &mut self.nodes[x as usize];
        if on {
            n.flags |= flag;
        } else {
            n.flags &= !flag;
        }
        self.update(x);
    }

    /// Some node carrying `flag` in the tree of `x`.
    pub fn find_flag(&mut self, x: u32, flag: u8) -> Option<u32> {
        self.splay(x);
        if self.nodes[x as usize].agg & flag == 0 {
            return None;
        }
        let mut cur = x;
        loop {
            let n = &self.nodes[cur as usize];
            if n.flags & flag != 0 {
                break;
            }
            if n.left != NIL && self.nodes[n.left as usize].agg & flag != 0 {
                cur = n.left;
            } else {
                cur = n.right;
            }
        }
        self.splay(cur);
        Some(cur)
    }

    /// Vertex indices in the tree of `x`, unordered.
    pub fn collect_vertices(&mut self, x: u32) -> Vec<u32> {
        self.splay(x);
        let mut out = Vec::with_capacity(self.nodes[x as usize].size as usize);
        let mut stack = vec![x];
        while let Some(c) = stack.pop() {
            let n = &self.nodes[c as usize];
            if n.b == NIL {
                out.push(n.a);
            }
            if n.left != NIL {
                stack.push(n.left);
            }
            if n.right != NIL {
                stack.push(n.right);
            }
        }
        out
    }

    /// Node ids of the tree of `x` in tour order.
    #[cfg(test)]
    pub fn tour(&mut self, x: u32) -> Vec<u32> {
        self.splay(x);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut cur = x;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.nodes[cur as usize].left;
            }
            let c = stack.pop().unwrap();
            out.push(c);
            cur = self.nodes[c as usize].right;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forest(n: u32) -> (EulerForest, Vec<u32>) {
        let mut f = EulerForest::new();
        let vs = (0..n).map(|v| f.add_vertex(v)).collect();
        (f, vs)
    }

    #[test]
    fn link_and_cut_path() {
        let (mut f, vs) = forest(4);
        let mut edges = Vec::new();
        for i in 0..3u32 {
            let uv = f.add_edge_node(i, i + 1);
            let vu = f.add_edge_node(i + 1, i);
            f.link(vs[i as usize], vs[i as usize + 1], uv, vu);
            edges.push((uv, vu));
        }
        assert!(f.same_tree(vs[0], vs[3]));
        assert_eq!(f.tree_size(vs[2]), 4);
        assert_eq!(f.tour(vs[0]).len(), 4 + 6);
        let (a, b) = f.cut(edges[1].0, edges[1].1);
        f.release(edges[1].0);
        f.release(edges[1].1);
        assert_eq!(f.tree_size(a), 2);
        assert_eq!(f.tree_size(b), 2);
        assert!(f.same_tree(vs[0], vs[1]));
        assert!(f.same_tree(vs[2], vs[3]));
        assert!(!f.same_tree(vs[1], vs[2]));
        assert_eq!(f.tree_min(vs[3]), 2);
        let mut side = f.collect_vertices(vs[3]);
        side.sort();
        assert_eq!(side, vec![2, 3]);
    }

    #[test]
    fn flags_are_found() {
        let (mut f, vs) = forest(3);
        let uv = f.add_edge_node(0, 1);
        let vu = f.add_edge_node(1, 0);
        f.link(vs[0], vs[1], uv, vu);
        assert_eq!(f.find_flag(vs[0], 1), None);
        f.set_flag(vs[1], 2, true);
        f.set_flag(uv, 1, true);
        assert_eq!(f.find_flag(vs[0], 2), Some(vs[1]));
        assert_eq!(f.find_flag(vs[0], 1), Some(uv));
        assert_eq!(f.find_flag(vs[2], 2), None);
        f.set_flag(vs[1], 2, false);
        assert_eq!(f.find_flag(vs[0], 2), None);
    }
}
