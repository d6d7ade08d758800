//! Optimal layouts from labels.
//!
//! A layout of width `k + 1` is assembled around a path `P` whose removal
//! (with its neighbourhood) leaves only components of width `<= k`: walk the
//! path, and after each path node emit, for every off-path neighbour `v`, the
//! layouts of the components hanging off `v` followed by `v` itself.
//!
//! The recursion works on views `T_r[y, cap]`: the subtree at `y` with the
//! witness subtrees of all label entries of width `>= cap` removed. Inside
//! such a view the label of any node `z` is `label(z)` truncated below `cap`.

use std::collections::HashMap;

use thiserror::Error;

use crate::label::{LabelRef, LastType};
use crate::oracle::{LinearLayout, OracleError};
use crate::tree::{NodeId, Tree, TreeView};
use crate::width::{compute_all_labels, Labeling, WidthError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error(transparent)]
    Width(#[from] WidthError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("no layout given for the component attached at node {0}")]
    MissingComponent(NodeId),
    #[error("node {0} is not in the view")]
    NotInView(NodeId),
    #[error("view rooted at {0} is empty")]
    EmptyView(NodeId),
    #[error("labels are inconsistent: {0}")]
    Inconsistent(String),
}

/// `T_r[root, cap]`; `cap == u32::MAX` is the complete subtree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubtreeView {
    pub root: NodeId,
    pub cap: u32,
}

impl SubtreeView {
    pub fn full(root: NodeId) -> Self {
        SubtreeView { root, cap: u32::MAX }
    }

    /// The nodes cut away from the complete subtree at `root`.
    pub fn excluded(&self, labeling: &Labeling<'_>) -> Result<Vec<NodeId>, LayoutError> {
        let label = labeling.label(self.root);
        let excluded: Vec<NodeId> = label.entries.iter().filter(|e| e.width >= self.cap).map(|e| e.witness).collect();
        if excluded.len() == label.len() {
            return Err(LayoutError::EmptyView(self.root));
        }
        Ok(excluded)
    }

    pub fn tree_view<'a>(&self, labeling: &'a Labeling<'_>) -> Result<TreeView<'a>, LayoutError> {
        Ok(TreeView::new_unchecked(labeling.rooted(), self.root, self.excluded(labeling)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathInTree {
    pub nodes: Vec<NodeId>,
}

/// Label of the part of `T_r[y]` inside `view`.
pub fn effective_label<'l>(
    labeling: &'l Labeling<'_>,
    view: SubtreeView,
    y: NodeId,
) -> Result<LabelRef<'l>, LayoutError> {
    if !view.tree_view(labeling)?.contains(y) {
        return Err(LayoutError::NotInView(y));
    }
    Ok(labeling.label(y).truncate(view.cap))
}

/// Path through `view` leaving only components of smaller width.
pub fn find_path(labeling: &Labeling<'_>, view: SubtreeView) -> Result<PathInTree, LayoutError> {
    let tv = view.tree_view(labeling)?;
    let mut nodes = Vec::new();
    PathFinder { labeling, view: &tv, cap: view.cap, k: 0 }.run(&mut nodes)?;
    Ok(PathInTree { nodes })
}

struct PathFinder<'a, 'l, 't> {
    labeling: &'l Labeling<'t>,
    view: &'a TreeView<'a>,
    cap: u32,
    k: u32,
}

impl PathFinder<'_, '_, '_> {
    fn eff(&self, z: NodeId) -> LabelRef<'_> {
        self.labeling.label(z).truncate(self.cap)
    }

    /// Whether child `v` is a `k`-neighbour of its parent.
    fn is_k_neighbour(&self, v: NodeId) -> bool {
        self.view.children(v).any(|u| self.eff(u).first_width() == Ok(self.k))
    }

    fn k_neighbour_children(&self, z: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.view.children(z).filter(move |&v| self.is_k_neighbour(v))
    }

    fn walk(&self, start: NodeId, path: &mut Vec<NodeId>) -> Result<(), LayoutError> {
        let mut cur = start;
        path.push(cur);
        loop {
            let mut next = self.k_neighbour_children(cur);
            let Some(v) = next.next() else { return Ok(()) };
            if next.next().is_some() {
                return Err(LayoutError::Inconsistent(format!("node {cur} has two {}-neighbour children", self.k)));
            }
            path.push(v);
            cur = v;
        }
    }

    /// Fills `path` and returns the view's width.
    fn run(mut self, path: &mut Vec<NodeId>) -> Result<u32, LayoutError> {
        let root = self.view.view_root();
        self.k = self.eff(root).first_width().map_err(|_| LayoutError::EmptyView(root))?;
        let mut z = root;
        for _ in 0..=self.labeling.rooted().node_count() {
            let label = self.eff(z);
            let first = *label.first().ok_or(LayoutError::EmptyView(z))?;
            if first.width != self.k {
                return Err(LayoutError::Inconsistent(format!("label {label} at {z} inside a view of width {}", self.k)));
            }
            if label.len() > 1 {
                if first.witness == z {
                    return Err(LayoutError::Inconsistent(format!("complex label at {z} names itself")));
                }
                z = first.witness;
                continue;
            }
            match label.last_type {
                LastType::T0 | LastType::T1 => {
                    self.walk(z, path)?;
                    return Ok(self.k);
                }
                LastType::T2 => {
                    let ends: Vec<NodeId> = self.k_neighbour_children(z).collect();
                    let &[v1, v2] = ends.as_slice() else {
                        return Err(LayoutError::Inconsistent(format!(
                            "critical node {z} has {} {}-neighbour children",
                            ends.len(),
                            self.k
                        )));
                    };
                    self.walk(v1, path)?;
                    path.reverse();
                    path.push(z);
                    self.walk(v2, path)?;
                    return Ok(self.k);
                }
                LastType::T3 => {
                    z = first
                        .critical
                        .ok_or_else(|| LayoutError::Inconsistent(format!("t.3 label at {z} without critical node")))?;
                }
            }
        }
        Err(LayoutError::Inconsistent("path search does not terminate".into()))
    }
}

#[derive(Clone, Copy, Debug)]
enum Item {
    Node(NodeId),
    Component { via: NodeId, attach: NodeId },
}

/// Emission order of the path layout with components left as placeholders.
fn skeleton(view: &TreeView<'_>, path: &[NodeId], on_path: &mut [bool], out: &mut Vec<Item>) {
    for &x in path {
        on_path[x] = true;
    }
    for &x in path {
        out.push(Item::Node(x));
        for v in view.neighbors(x) {
            if on_path[v] {
                continue;
            }
            for u in view.neighbors(v) {
                if u != x {
                    out.push(Item::Component { via: v, attach: u });
                }
            }
            out.push(Item::Node(v));
        }
    }
    for &x in path {
        on_path[x] = false;
    }
}

fn check_path(view: &TreeView<'_>, path: &PathInTree) -> Result<(), LayoutError> {
    let nodes = &path.nodes;
    if nodes.is_empty() {
        return Err(LayoutError::InvalidPath("empty path".into()));
    }
    if let Some(&v) = nodes.iter().find(|&&v| !view.contains(v)) {
        return Err(LayoutError::NotInView(v));
    }
    let tree = view.rooted().tree();
    if let Some(w) = nodes.windows(2).find(|w| !tree.has_edge(w[0], w[1])) {
        return Err(LayoutError::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
    }
    let mut sorted = nodes.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(LayoutError::InvalidPath("repeated node".into()));
    }
    Ok(())
}

/// Combines component layouts around `path`. `component_layouts` maps the
/// node `u` at which a component attaches to its off-path neighbour `v` to
/// the order of that component's nodes.
pub fn lin_ord(
    view: &TreeView<'_>,
    path: &PathInTree,
    component_layouts: &HashMap<NodeId, Vec<NodeId>>,
) -> Result<Vec<NodeId>, LayoutError> {
    check_path(view, path)?;
    let mut on_path = vec![false; view.rooted().node_count()];
    let mut items = Vec::new();
    skeleton(view, &path.nodes, &mut on_path, &mut items);
    let mut order = Vec::new();
    for item in items {
        match item {
            Item::Node(v) => order.push(v),
            Item::Component { attach, .. } => {
                let part = component_layouts.get(&attach).ok_or(LayoutError::MissingComponent(attach))?;
                order.extend_from_slice(part);
            }
        }
    }
    Ok(order)
}

/// One recursion step, as seen by [`layout_from_labels_traced`].
#[derive(Debug)]
pub struct LayoutStep<'a> {
    pub view: SubtreeView,
    pub width: u32,
    pub path: &'a [NodeId],
    /// `(v, u, component)`: the component containing `u`, hanging off the
    /// off-path neighbour `v`.
    pub components: &'a [(NodeId, NodeId, SubtreeView)],
}

pub fn layout_from_labels(labeling: &Labeling<'_>) -> Result<LinearLayout, LayoutError> {
    layout_from_labels_traced(labeling, |_| {})
}

pub fn layout_from_labels_traced(
    labeling: &Labeling<'_>,
    mut observe: impl FnMut(&LayoutStep<'_>),
) -> Result<LinearLayout, LayoutError> {
    enum Work {
        Emit(NodeId),
        Expand(SubtreeView),
    }

    let rooted = labeling.rooted();
    let n = rooted.node_count();
    let mut order = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    let mut items = Vec::new();
    let mut components = Vec::new();
    let mut stack = vec![Work::Expand(SubtreeView::full(rooted.root()))];

    while let Some(work) = stack.pop() {
        let view = match work {
            Work::Emit(v) => {
                order.push(v);
                continue;
            }
            Work::Expand(view) => view,
        };
        let tv = view.tree_view(labeling)?;
        path.clear();
        let k = PathFinder { labeling, view: &tv, cap: view.cap, k: 0 }.run(&mut path)?;
        items.clear();
        skeleton(&tv, &path, &mut on_path, &mut items);

        components.clear();
        for &item in &items {
            let Item::Component { via, attach } = item else { continue };
            let sub = if rooted.parent(attach) == Some(via) {
                SubtreeView { root: attach, cap: view.cap }
            } else {
                let head = labeling.label(view.root).truncate(view.cap);
                if head.len() < 2 || head.entries[0].witness != via {
                    return Err(LayoutError::Inconsistent(format!(
                        "upward component at {via} in view rooted at {} with label {head:#}",
                        view.root
                    )));
                }
                SubtreeView { root: view.root, cap: k }
            };
            components.push((via, attach, sub));
        }
        observe(&LayoutStep { view, width: k, path: &path, components: &components });

        let mut next_component = components.len();
        for &item in items.iter().rev() {
            match item {
                Item::Node(v) => stack.push(Work::Emit(v)),
                Item::Component { .. } => {
                    next_component -= 1;
                    stack.push(Work::Expand(components[next_component].2));
                }
            }
        }
    }
    Ok(LinearLayout::new(order)?)
}

/// Labels `tree` from root `r` and returns a layout together with the width.
///
/// The work happens on a copy numbered in breadth-first order from `r`, which
/// keeps the per-node arrays cache friendly on large inputs.
pub fn build_layout(tree: &Tree, r: NodeId) -> Result<(LinearLayout, usize), LayoutError> {
    let (local, original) = tree.bfs_relabeled(r).map_err(WidthError::from)?;
    let labeling = compute_all_labels(&local, 0)?;
    let layout = layout_from_labels(&labeling)?;
    let order = layout.order().iter().map(|&v| original[v]).collect();
    Ok((LinearLayout::new(order)?, labeling.lmw()))
}
