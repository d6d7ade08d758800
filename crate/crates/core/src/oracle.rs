//! Linear layouts, cuts, and exact reference computations.
//!
//! Everything here follows the plain definitions: the MIM of a cut graph,
//! the width of a layout as the maximum over its cuts, and the width of a
//! tree as the minimum over layouts (by subset dynamic programming). These
//! are the ground truth the label algorithm is checked against.

use std::collections::HashMap;

use thiserror::Error;

use crate::tree::{NodeId, RootedTree, Tree};

/// Default node-count guard for [`lmw_bruteforce`].
pub const DEFAULT_LMW_GUARD: usize = 16;
/// Hard ceiling for the subset DP regardless of the configured guard.
pub const MAX_LMW_GUARD: usize = 26;
/// Default edge budget for [`mim_bruteforce`].
pub const DEFAULT_EDGE_BUDGET: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("tree has {n} nodes, above the oracle guard of {guard}")]
    GuardExceeded { n: usize, guard: usize },
    #[error("{edges} edges exceed the brute-force budget of {budget}")]
    EdgeBudgetExceeded { edges: usize, budget: usize },
    #[error("layout is not a permutation: {0}")]
    NotPermutation(String),
    #[error("layout covers {layout} nodes but the tree has {tree}")]
    SizeMismatch { layout: usize, tree: usize },
    #[error("cut index {i} outside 1..={max}")]
    CutOutOfRange { i: usize, max: usize },
    #[error("edge list is not a forest")]
    NotAForest,
    #[error("node {0} is not in the tree")]
    UnknownNode(NodeId),
}

/// A linear order of the nodes `0..n` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearLayout {
    order: Vec<NodeId>,
    position: Vec<usize>,
}

impl LinearLayout {
    pub fn new(order: Vec<NodeId>) -> Result<Self, OracleError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(OracleError::NotPermutation(format!("id {v} out of range for {n} nodes")));
            }
            if position[v] != usize::MAX {
                return Err(OracleError::NotPermutation(format!("id {v} repeated")));
            }
            position[v] = i;
        }
        Ok(LinearLayout { order, position })
    }

    pub fn identity(n: usize) -> Self {
        LinearLayout { order: (0..n).collect(), position: (0..n).collect() }
    }

    /// Parses whitespace-separated node ids.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let order = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| OracleError::NotPermutation(format!("bad token {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(order)
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn position(&self, v: NodeId) -> usize {
        self.position[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Single line of space-separated ids.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        parts.join(" ")
    }
}

/// Edges crossing the cut after the first `cut_index` nodes of a layout,
/// each stored left endpoint first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutForest {
    pub cut_index: usize,
    pub crossing_edges: Vec<(NodeId, NodeId)>,
}

fn check_layout(tree: &Tree, layout: &LinearLayout) -> Result<(), OracleError> {
    if layout.len() != tree.node_count() {
        return Err(OracleError::SizeMismatch { layout: layout.len(), tree: tree.node_count() });
    }
    Ok(())
}

pub fn cut_at(tree: &Tree, layout: &LinearLayout, i: usize) -> Result<CutForest, OracleError> {
    check_layout(tree, layout)?;
    let n = tree.node_count();
    if i == 0 || i >= n {
        return Err(OracleError::CutOutOfRange { i, max: n.saturating_sub(1) });
    }
    let crossing_edges = tree
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let (pu, pv) = (layout.position(u), layout.position(v));
            match (pu < i, pv < i) {
                (true, false) => Some((u, v)),
                (false, true) => Some((v, u)),
                _ => None,
            }
        })
        .collect();
    Ok(CutForest { cut_index: i, crossing_edges })
}

/// Maximum induced matching by exhaustive branch and bound over edges.
///
/// Works for any simple graph given as an edge list, not just forests.
pub fn mim_bruteforce(edges: &[(NodeId, NodeId)], budget: usize) -> Result<usize, OracleError> {
    if edges.len() > budget {
        return Err(OracleError::EdgeBudgetExceeded { edges: edges.len(), budget });
    }
    if edges.len() > 32 {
        return Err(OracleError::EdgeBudgetExceeded { edges: edges.len(), budget: 32 });
    }
    let mut ids: HashMap<NodeId, usize> = HashMap::new();
    let local: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| {
            let next = ids.len();
            let a = *ids.entry(u).or_insert(next);
            let next = ids.len();
            let b = *ids.entry(v).or_insert(next);
            (a, b)
        })
        .collect();
    // closed neighbourhoods as bitmasks (at most 64 vertices for 32 edges)
    let mut closed = vec![0u64; ids.len()];
    for (v, mask) in closed.iter_mut().enumerate() {
        *mask = 1 << v;
    }
    for &(a, b) in &local {
        closed[a] |= 1 << b;
        closed[b] |= 1 << a;
    }

    fn search(
        idx: usize,
        blocked: u64,
        size: usize,
        edges: &[(usize, usize)],
        closed: &[u64],
        best: &mut usize,
    ) {
        if size > *best {
            *best = size;
        }
        if idx == edges.len() || size + (edges.len() - idx) <= *best {
            return;
        }
        let (a, b) = edges[idx];
        if blocked & ((1 << a) | (1 << b)) == 0 {
            search(idx + 1, blocked | closed[a] | closed[b], size + 1, edges, closed, best);
        }
        search(idx + 1, blocked, size, edges, closed, best);
    }

    let mut best = 0;
    search(0, 0, 0, &local, &closed, &mut best);
    Ok(best)
}

/// Scratch space for the induced-matching tree DP.
///
/// The DP runs over one component given as a parent array in BFS order
/// (`parent[0]` is ignored, `parent[i] < i` otherwise). Per node it tracks
/// three quantities: the best value with the node unused, with the node
/// matched to one of its children, and with the node reserved for a match
/// to its parent (children then unused).
#[derive(Default)]
pub(crate) struct MatchingDp {
    free_sum: Vec<i64>,
    unused_sum: Vec<i64>,
    gain: Vec<i64>,
}

impl MatchingDp {
    pub(crate) fn solve(&mut self, parent: &[usize]) -> usize {
        let m = parent.len();
        if m < 2 {
            return 0;
        }
        self.free_sum.clear();
        self.free_sum.resize(m, 0);
        self.unused_sum.clear();
        self.unused_sum.resize(m, 0);
        self.gain.clear();
        self.gain.resize(m, i64::MIN);
        for i in (0..m).rev() {
            let unused = self.free_sum[i];
            let to_parent = self.unused_sum[i];
            let to_child = if self.gain[i] == i64::MIN {
                i64::MIN
            } else {
                self.unused_sum[i] + self.gain[i]
            };
            if i == 0 {
                return unused.max(to_child) as usize;
            }
            let p = parent[i];
            self.free_sum[p] += unused.max(to_child);
            self.unused_sum[p] += unused;
            self.gain[p] = self.gain[p].max(1 + to_parent - unused);
        }
        unreachable!()
    }
}

/// Exact maximum induced matching of a forest in linear time.
pub fn mim_forest(edges: &[(NodeId, NodeId)]) -> Result<usize, OracleError> {
    let mut ids: HashMap<NodeId, usize> = HashMap::new();
    let mut local = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let next = ids.len();
        let a = *ids.entry(u).or_insert(next);
        let next = ids.len();
        let b = *ids.entry(v).or_insert(next);
        if a == b {
            return Err(OracleError::NotAForest);
        }
        local.push((a, b));
    }
    let m = ids.len();
    if local.len() >= m.max(1) {
        return Err(OracleError::NotAForest);
    }
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &local {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; m];
    let mut dp = MatchingDp::default();
    let mut order = Vec::new();
    let mut parent = Vec::new();
    let mut total = 0;
    let mut visited_edges = 0;
    for start in 0..m {
        if seen[start] {
            continue;
        }
        order.clear();
        parent.clear();
        seen[start] = true;
        order.push(start);
        parent.push(usize::MAX);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    parent.push(head);
                    visited_edges += 1;
                }
            }
            head += 1;
        }
        total += dp.solve(&parent);
    }
    if visited_edges != local.len() {
        return Err(OracleError::NotAForest);
    }
    Ok(total)
}

/// Per-node aggregates of the induced-matching DP over the crossing edges
/// from a node to its children in a fixed rooting.
#[derive(Clone, Copy, Default)]
struct CutNode {
    /// Sum over crossing children of their best value.
    best_sum: i64,
    /// Sum over crossing children of their value when left unmatched.
    free_sum: i64,
    /// Crossing children whose gain from matching to this node is 1 or 0.
    /// Gains never exceed 1, and negative gains never help.
    gain_one: u32,
    gain_zero: u32,
}

/// What a node passes to its parent: its best value, its value when left
/// unmatched, and the gain of matching it to the parent.
#[derive(Clone, Copy, PartialEq, Eq)]
struct CutOutput {
    best: i64,
    unmatched: i64,
    gain: i64,
}

impl CutNode {
    fn output(&self) -> CutOutput {
        let to_child = if self.gain_one > 0 {
            Some(self.free_sum + 1)
        } else if self.gain_zero > 0 {
            Some(self.free_sum)
        } else {
            None
        };
        let best = to_child.map_or(self.best_sum, |v| v.max(self.best_sum));
        CutOutput { best, unmatched: self.best_sum, gain: 1 + self.free_sum - self.best_sum }
    }

    fn apply(&mut self, out: CutOutput, sign: i64) {
        self.best_sum += sign * out.best;
        self.free_sum += sign * out.unmatched;
        let counter = match out.gain {
            1 => &mut self.gain_one,
            0 => &mut self.gain_zero,
            _ => return,
        };
        *counter = counter.wrapping_add_signed(sign as i32);
    }
}

struct CutSweep<'a> {
    parent: &'a [Option<NodeId>],
    nodes: Vec<CutNode>,
    crossing_up: Vec<bool>,
    /// Sum of best values over the roots of all crossing components.
    total: i64,
}

impl CutSweep<'_> {
    /// Replaces child `c`'s contribution at `x` (`old` out, `new` in, either
    /// optional) and pushes the change upward while outputs keep changing.
    fn propagate(&mut self, mut x: NodeId, mut old: Option<CutOutput>, mut new: Option<CutOutput>) {
        loop {
            let before = self.nodes[x].output();
            if let Some(o) = old {
                self.nodes[x].apply(o, -1);
            }
            if let Some(o) = new {
                self.nodes[x].apply(o, 1);
            }
            let after = self.nodes[x].output();
            if before == after {
                return;
            }
            match self.parent[x] {
                Some(p) if self.crossing_up[x] => {
                    (x, old, new) = (p, Some(before), Some(after));
                }
                _ => {
                    self.total += after.best - before.best;
                    return;
                }
            }
        }
    }

    /// Makes the edge from `c` to its parent crossing or not.
    fn set_crossing(&mut self, c: NodeId, crossing: bool) {
        let p = self.parent[c].expect("only parent edges flip");
        let out = self.nodes[c].output();
        if crossing {
            self.total -= out.best;
            self.crossing_up[c] = true;
            self.propagate(p, None, Some(out));
        } else {
            self.crossing_up[c] = false;
            self.propagate(p, Some(out), None);
            self.total += out.best;
        }
    }
}

/// MIM of every cut of `layout`: entry `i - 1` belongs to the cut after the
/// first `i` nodes.
///
/// The cut graph is swept left to right while the forest DP is maintained
/// bottom-up over a fixed rooting; a change stops climbing as soon as a
/// node's values stay the same. Paths inside a crossing component are
/// short when the cut's MIM is small, so a sweep over a layout of width `k`
/// costs about `O(n k)`.
pub fn cut_profile(tree: &Tree, layout: &LinearLayout) -> Result<Vec<usize>, OracleError> {
    check_layout(tree, layout)?;
    let n = tree.node_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    let rooted = RootedTree::new(tree, layout.order()[0]).expect("layout nodes are in range");
    let mut sweep = CutSweep {
        parent: rooted.parents(),
        nodes: vec![CutNode::default(); n],
        crossing_up: vec![false; n],
        total: 0,
    };
    let mut on_left = vec![false; n];
    let mut profile = Vec::with_capacity(n - 1);
    for &z in &layout.order()[..n - 1] {
        on_left[z] = true;
        for &w in tree.neighbors(z) {
            let child = if rooted.parent(w) == Some(z) { w } else { z };
            sweep.set_crossing(child, !on_left[w]);
        }
        profile.push(sweep.total as usize);
    }
    Ok(profile)
}

/// Width of a layout: the largest MIM over its cuts, 0 for a single node.
pub fn mim_of_layout(tree: &Tree, layout: &LinearLayout) -> Result<usize, OracleError> {
    Ok(cut_profile(tree, layout)?.into_iter().max().unwrap_or(0))
}

/// Bitmask view of a small tree for the subset DP.
struct SmallTree {
    n: usize,
    adj: Vec<u32>,
}

impl SmallTree {
    fn new(tree: &Tree, guard: usize) -> Result<Self, OracleError> {
        let n = tree.node_count();
        let guard = guard.min(MAX_LMW_GUARD);
        if n > guard {
            return Err(OracleError::GuardExceeded { n, guard });
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in tree.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(SmallTree { n, adj })
    }

    /// MIM of the cut between `set` and its complement.
    fn cut_mim(&self, set: u32, dp: &mut MatchingDp, parent: &mut Vec<usize>, order: &mut Vec<usize>) -> usize {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let other = full & !set;
        let cross = |v: usize| self.adj[v] & if set >> v & 1 == 1 { other } else { set };
        let mut unseen = full;
        let mut total = 0;
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            unseen &= !(1 << start);
            if cross(start) == 0 {
                continue;
            }
            order.clear();
            parent.clear();
            order.push(start);
            parent.push(usize::MAX);
            let mut head = 0;
            while head < order.len() {
                let mut next = cross(order[head]) & unseen;
                unseen &= !next;
                while next != 0 {
                    let w = next.trailing_zeros() as usize;
                    next &= next - 1;
                    order.push(w);
                    parent.push(head);
                }
                head += 1;
            }
            total += dp.solve(parent);
        }
        total
    }

    /// Minimum width over all layouts for every prefix set.
    fn subset_table(&self) -> Vec<u8> {
        let size = 1usize << self.n;
        let mut best = vec![0u8; size];
        let mut dp = MatchingDp::default();
        let (mut parent, mut order) = (Vec::new(), Vec::new());
        for set in 1..size {
            let set32 = set as u32;
            let cost = self.cut_mim(set32, &mut dp, &mut parent, &mut order) as u8;
            let mut rest = set32;
            let mut min_prev = u8::MAX;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                min_prev = min_prev.min(best[(set32 & !(1 << v)) as usize]);
            }
            best[set] = cost.max(min_prev);
        }
        best
    }
}

/// Exact LMIM-width by dynamic programming over prefix sets, with the
/// default guard.
pub fn lmw_bruteforce(tree: &Tree) -> Result<usize, OracleError> {
    lmw_bruteforce_with_guard(tree, DEFAULT_LMW_GUARD)
}

pub fn lmw_bruteforce_with_guard(tree: &Tree, guard: usize) -> Result<usize, OracleError> {
    let small = SmallTree::new(tree, guard)?;
    Ok(*small.subset_table().last().unwrap() as usize)
}

/// An optimal layout recovered from the subset DP, with its width.
pub fn optimal_layout_bruteforce(tree: &Tree, guard: usize) -> Result<(usize, LinearLayout), OracleError> {
    let small = SmallTree::new(tree, guard)?;
    let table = small.subset_table();
    let n = small.n;
    let mut set = (table.len() - 1) as u32;
    let mut reversed = Vec::with_capacity(n);
    while set != 0 {
        let target = table[set as usize];
        let mut rest = set;
        let v = loop {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if table[(set & !(1 << v)) as usize] <= target {
                break v;
            }
        };
        reversed.push(v as NodeId);
        set &= !(1 << v);
    }
    reversed.reverse();
    let width = *table.last().unwrap() as usize;
    Ok((width, LinearLayout::new(reversed).expect("DP path is a permutation")))
}

/// Number of neighbours `v` of `x` that have another neighbour `u` whose
/// dangling tree from `v` has width at least `k`. The guard applies to each
/// dangling tree handed to the subset DP.
pub fn k_component_index_oracle(tree: &Tree, x: NodeId, k: usize, guard: usize) -> Result<usize, OracleError> {
    if x >= tree.node_count() {
        return Err(OracleError::UnknownNode(x));
    }
    let mut count = 0;
    for &v in tree.neighbors(x) {
        for &u in tree.neighbors(v) {
            if u == x {
                continue;
            }
            let dangling = tree.dangling_tree(v, u).expect("adjacent by construction");
            if lmw_bruteforce_with_guard(&dangling.tree, guard)? >= k {
                count += 1;
                break;
            }
        }
    }
    Ok(count)
}
