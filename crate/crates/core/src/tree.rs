//! Trees, rooted trees, dangling trees and masked subtree views.
//!
//! Node ids are dense (`0..n`) and every per-node quantity lives in a flat
//! array indexed by id. Adjacency is stored in CSR form so a tree with a
//! million nodes costs a handful of allocations.

use std::fmt::Write as _;

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("empty input: no node count and no edges")]
    Empty,
    #[error("node id {id} is outside 0..{n}")]
    IdOutOfRange { id: NodeId, n: usize },
    #[error("node ids are not contiguous: id {missing} never appears")]
    NonContiguous { missing: NodeId },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) closes a cycle")]
    Cycle(NodeId, NodeId),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(NodeId, NodeId),
    #[error("{0} is not a strict descendant of the view root {1}")]
    NotDescendant(NodeId, NodeId),
    #[error("induced node set is empty or not connected")]
    NotConnected,
}

/// An undirected tree on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    /// Edges in input order, each stored as given.
    edges: Vec<(NodeId, NodeId)>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    /// Edge index of each adjacency slot, aligned with `targets`.
    slot_edges: Vec<usize>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

const PREFETCH_DISTANCE: usize = 16;

#[inline(always)]
fn prefetch<T>(x: &T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: prefetching is a hint and never faults
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch::<_MM_HINT_T0>(x as *const T as *const i8);
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = x;
}

impl Tree {
    /// Builds and validates a tree on `n` nodes.
    pub fn from_edges(n: usize, edges: Vec<(NodeId, NodeId)>) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        for &(u, v) in &edges {
            for id in [u, v] {
                if id >= n {
                    return Err(TreeError::IdOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
        }
        let mut sets = DisjointSets::new(n);
        let mut joined = 0;
        for &(u, v) in &edges {
            if !sets.union(u, v) {
                let dup = edges
                    .iter()
                    .filter(|&&(a, b)| (a.min(b), a.max(b)) == (u.min(v), u.max(v)))
                    .count()
                    > 1;
                return Err(if dup {
                    TreeError::DuplicateEdge(u, v)
                } else {
                    TreeError::Cycle(u, v)
                });
            }
            joined += 1;
        }
        if joined != n - 1 {
            return Err(TreeError::Disconnected { components: n - joined });
        }
        Ok(Self::build_unchecked(n, edges))
    }

    fn build_unchecked(n: usize, edges: Vec<(NodeId, NodeId)>) -> Tree {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        let mut slot_edges = vec![0; 2 * edges.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            targets[fill[u]] = v;
            slot_edges[fill[u]] = e;
            fill[u] += 1;
            targets[fill[v]] = u;
            slot_edges[fill[v]] = e;
            fill[v] += 1;
        }
        Tree { n, edges, offsets, targets, slot_edges }
    }

    pub fn singleton() -> Tree {
        Self::build_unchecked(1, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge indices (into [`Tree::edges`]) aligned with [`Tree::neighbors`].
    pub fn incident_edges(&self, v: NodeId) -> &[usize] {
        &self.slot_edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n && v < self.n && self.neighbors(u).contains(&v)
    }

    /// Parses the edge-list format: an optional first line holding the node
    /// count, then one `u v` pair per line. Blank lines and `#` comments are
    /// skipped.
    pub fn parse_edge_list(text: &str) -> Result<Tree, TreeError> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut seen_content = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let parse = |tok: &str| {
                tok.parse::<usize>().map_err(|_| TreeError::Malformed {
                    line: idx + 1,
                    msg: format!("expected a non-negative integer, found {tok:?}"),
                })
            };
            match tokens.as_slice() {
                [count] if !seen_content => declared = Some(parse(count)?),
                [u, v] => edges.push((parse(u)?, parse(v)?)),
                _ => {
                    return Err(TreeError::Malformed {
                        line: idx + 1,
                        msg: format!("expected \"u v\", found {line:?}"),
                    })
                }
            }
            seen_content = true;
        }
        let n = match declared {
            Some(n) => n,
            None => {
                let max_id = edges
                    .iter()
                    .map(|&(u, v)| u.max(v))
                    .max()
                    .ok_or(TreeError::Empty)?;
                let mut present = vec![false; max_id + 1];
                for &(u, v) in &edges {
                    present[u] = true;
                    present[v] = true;
                }
                if let Some(missing) = present.iter().position(|&p| !p) {
                    return Err(TreeError::NonContiguous { missing });
                }
                max_id + 1
            }
        };
        Tree::from_edges(n, edges)
    }

    /// Serializes to the edge-list format with edges sorted by
    /// `(min id, max id)`.
    pub fn to_edge_list(&self) -> String {
        let mut sorted: Vec<(NodeId, NodeId)> =
            self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        sorted.sort_unstable();
        let mut out = String::with_capacity(8 * (sorted.len() + 1));
        let _ = writeln!(out, "{}", self.n);
        for (u, v) in sorted {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// A copy renumbered in breadth-first order from `root`, so `root`
    /// becomes node 0 and every node's children get consecutive ids. Returns
    /// the copy and the map from new ids to old ids.
    pub fn bfs_relabeled(&self, root: NodeId) -> Result<(Tree, Vec<NodeId>), TreeError> {
        if root >= self.n {
            return Err(TreeError::IdOutOfRange { id: root, n: self.n });
        }
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut edges = Vec::with_capacity(self.n - 1);
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            // the input numbering is arbitrary, so hide the memory latency of
            // upcoming queue entries behind the current one
            if let Some(&ahead) = order.get(head + PREFETCH_DISTANCE) {
                prefetch(&self.offsets[ahead]);
            }
            if let Some(&near) = order.get(head + PREFETCH_DISTANCE / 2) {
                if let Some(t) = self.targets.get(self.offsets[near]) {
                    prefetch(t);
                }
            }
            let v = order[head];
            for &w in self.neighbors(v) {
                prefetch(&seen[w]);
            }
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    edges.push((head, order.len()));
                    order.push(w);
                }
            }
            head += 1;
        }
        Ok((Self::build_unchecked(self.n, edges), order))
    }

    /// The subtree induced by `nodes`, renumbered in the given order.
    /// Returns the tree together with the map from new ids to old ids.
    pub fn induced(&self, nodes: &[NodeId]) -> Result<(Tree, Vec<NodeId>), TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::NotConnected);
        }
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in nodes.iter().enumerate() {
            if v >= self.n {
                return Err(TreeError::IdOutOfRange { id: v, n: self.n });
            }
            local[v] = i;
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        if edges.len() + 1 != nodes.len() {
            return Err(TreeError::NotConnected);
        }
        Ok((Self::build_unchecked(nodes.len(), edges), nodes.to_vec()))
    }

    /// The dangling tree from `v` in `u`: the component of the tree minus
    /// the edge `(v, u)` that contains `u`. Node 0 of the result is `u`.
    pub fn dangling_tree(&self, v: NodeId, u: NodeId) -> Result<DanglingTree, TreeError> {
        if !self.has_edge(v, u) {
            return Err(TreeError::NotAnEdge(v, u));
        }
        let mut order = vec![u];
        let mut head = 0;
        let mut from = vec![usize::MAX; self.n];
        from[u] = v;
        while head < order.len() {
            let a = order[head];
            head += 1;
            for &b in self.neighbors(a) {
                if b != from[a] {
                    from[b] = a;
                    order.push(b);
                }
            }
        }
        let (tree, original) = self.induced(&order)?;
        Ok(DanglingTree { tree, original })
    }
}

/// A dangling tree together with the map back to the ids of the host tree.
#[derive(Clone, Debug)]
pub struct DanglingTree {
    pub tree: Tree,
    /// `original[i]` is the host id of local node `i`.
    pub original: Vec<NodeId>,
}

/// A tree with a chosen root.
///
/// Children lists keep adjacency (input) order. `order` is a BFS order from
/// the root, so reversing it visits every node after all its descendants.
#[derive(Clone, Debug)]
pub struct RootedTree<'t> {
    tree: &'t Tree,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    child_offsets: Vec<usize>,
    children: Vec<NodeId>,
    depth: Vec<u32>,
    order: Vec<NodeId>,
    preorder_index: Vec<usize>,
    subtree_size: Vec<usize>,
}

impl<'t> RootedTree<'t> {
    pub fn new(tree: &'t Tree, root: NodeId) -> Result<Self, TreeError> {
        let n = tree.node_count();
        if root >= n {
            return Err(TreeError::IdOutOfRange { id: root, n });
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        visited[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in tree.neighbors(v) {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some(v);
                    depth[w] = depth[v] + 1;
                    order.push(w);
                }
            }
        }

        let mut child_offsets = Vec::with_capacity(n + 1);
        child_offsets.push(0);
        let mut children = Vec::with_capacity(n.saturating_sub(1));
        for v in 0..n {
            children.extend(tree.neighbors(v).iter().copied().filter(|&w| parent[w] == Some(v)));
            child_offsets.push(children.len());
        }

        let mut subtree_size = vec![1usize; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        // Preorder numbering without recursion: a child's block starts right
        // after its parent's index plus the sizes of its earlier siblings.
        let mut preorder_index = vec![0usize; n];
        for &v in &order {
            let mut next = preorder_index[v] + 1;
            for &c in &children[child_offsets[v]..child_offsets[v + 1]] {
                preorder_index[c] = next;
                next += subtree_size[c];
            }
        }

        Ok(RootedTree {
            tree,
            root,
            parent,
            child_offsets,
            children,
            depth,
            order,
            preorder_index,
            subtree_size,
        })
    }

    pub fn tree(&self) -> &'t Tree {
        self.tree
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.tree.node_count()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[self.child_offsets[v]..self.child_offsets[v + 1]]
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v]
    }

    /// BFS order from the root.
    pub fn bfs_order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn subtree_size(&self, v: NodeId) -> usize {
        self.subtree_size[v]
    }

    /// True when `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor_or_self(&self, a: NodeId, b: NodeId) -> bool {
        let (ia, ib) = (self.preorder_index[a], self.preorder_index[b]);
        ia <= ib && ib < ia + self.subtree_size[a]
    }

    /// Nodes of the complete subtree rooted at `v`, in preorder.
    pub fn subtree_nodes(&self, v: NodeId) -> Vec<NodeId> {
        TreeView::whole(self, v).nodes().collect()
    }
}

/// A complete rooted subtree with some complete subtrees below its root cut
/// away.
#[derive(Clone, Debug)]
pub struct TreeView<'a> {
    rooted: &'a RootedTree<'a>,
    view_root: NodeId,
    excluded: Vec<NodeId>,
}

impl<'a> TreeView<'a> {
    /// The full subtree at `view_root`.
    pub fn whole(rooted: &'a RootedTree<'a>, view_root: NodeId) -> Self {
        TreeView { rooted, view_root, excluded: Vec::new() }
    }

    /// Subtree at `view_root` minus the subtrees of every node in `excluded`.
    /// Each excluded node must lie strictly below `view_root`.
    pub fn new(
        rooted: &'a RootedTree<'a>,
        view_root: NodeId,
        excluded: Vec<NodeId>,
    ) -> Result<Self, TreeError> {
        let n = rooted.node_count();
        if view_root >= n {
            return Err(TreeError::IdOutOfRange { id: view_root, n });
        }
        for &w in &excluded {
            if w >= n {
                return Err(TreeError::IdOutOfRange { id: w, n });
            }
            if w == view_root || !rooted.is_ancestor_or_self(view_root, w) {
                return Err(TreeError::NotDescendant(w, view_root));
            }
        }
        Ok(TreeView { rooted, view_root, excluded })
    }

    pub(crate) fn new_unchecked(
        rooted: &'a RootedTree<'a>,
        view_root: NodeId,
        excluded: Vec<NodeId>,
    ) -> Self {
        TreeView { rooted, view_root, excluded }
    }

    pub fn rooted(&self) -> &'a RootedTree<'a> {
        self.rooted
    }

    pub fn view_root(&self) -> NodeId {
        self.view_root
    }

    pub fn excluded(&self) -> &[NodeId] {
        &self.excluded
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.rooted.node_count()
            && self.rooted.is_ancestor_or_self(self.view_root, v)
            && !self
                .excluded
                .iter()
                .any(|&w| self.rooted.is_ancestor_or_self(w, v))
    }

    /// Children of `v` that belong to the view. `v` must be in the view.
    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.rooted
            .children(v)
            .iter()
            .copied()
            .filter(move |c| !self.excluded.contains(c))
    }

    /// Neighbours of `v` inside the view. `v` must be in the view.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let up = if v == self.view_root { None } else { self.rooted.parent(v) };
        up.into_iter().chain(self.children(v))
    }

    /// Preorder walk over the nodes of the view.
    pub fn nodes(&self) -> ViewNodes<'_> {
        ViewNodes { view: self, stack: vec![self.view_root] }
    }

    pub fn node_count(&self) -> usize {
        self.nodes().count()
    }
}

pub struct ViewNodes<'v> {
    view: &'v TreeView<'v>,
    stack: Vec<NodeId>,
}

impl Iterator for ViewNodes<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let v = self.stack.pop()?;
        let children = self.view.rooted.children(v);
        self.stack.extend(
            children
                .iter()
                .rev()
                .copied()
                .filter(|c| !self.view.excluded.contains(c)),
        );
        Some(v)
    }
}
