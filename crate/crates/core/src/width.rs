//! Bottom-up computation of subtree labels and of the tree's width.
//!
//! Each node's label is derived from the labels of its children and
//! grandchildren by sweeping the widths present among the children in
//! increasing order. Every step feeds one width `s` through an eight-way
//! case analysis that rewrites the label of the part of the subtree seen so
//! far.

use thiserror::Error;

use crate::label::{Label, LabelEntry, LabelError, LabelRef, LastType};
use crate::tree::{NodeId, RootedTree, Tree, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WidthError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("case analysis needs at least one child carrying width {0}")]
    NoContenders(u32),
    #[error("invalid case input: {0}")]
    InvalidInput(String),
    #[error("label of node {0} is not computed yet")]
    MissingLabel(NodeId),
    #[error("width {0} does not fit the label bitmask")]
    WidthOverflow(u32),
}

/// Which branch of the case analysis produced a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// No children, or only leaf children.
    Leafy,
    /// Plain contenders, at most one with a width-`s` grandchild: `(s, t.1)`.
    Plain,
    /// Plain contenders, exactly two with a width-`s` grandchild: `(s, t.2)`.
    RootCritical,
    /// Plain contenders, three or more: `(s + 1, t.1)`.
    ThreeNeighbours,
    /// Several contenders, one of them hiding a critical node: `(s + 1, t.1)`.
    CriticalWithRival,
    /// Single contender which is itself critical: `(s, t.3)`.
    ChildCritical,
    /// Single contender with a deeper critical node, rest narrower: prepend `s`.
    DeepCritical,
    /// Single contender with a deeper critical node, rest as wide: `(s + 1, t.1)`.
    DeepCriticalBlocked,
}

impl Case {
    /// Numbering of the branches as in the usual presentation (0 to 7).
    pub fn number(self) -> u8 {
        match self {
            Case::Leafy => 0,
            Case::Plain => 1,
            Case::RootCritical => 2,
            Case::ThreeNeighbours => 3,
            Case::CriticalWithRival => 4,
            Case::ChildCritical => 5,
            Case::DeepCritical => 6,
            Case::DeepCriticalBlocked => 7,
        }
    }

    /// Branches that raise the width to `s + 1`.
    pub fn grows(self) -> bool {
        matches!(self, Case::ThreeNeighbours | Case::CriticalWithRival | Case::DeepCriticalBlocked)
    }
}

/// A child whose truncated label contains the current width `s`.
#[derive(Clone, Copy, Debug)]
pub struct Contender<'a> {
    pub child: NodeId,
    /// The child's label with every entry wider than `s` dropped, so its
    /// first width is `s`.
    pub label: LabelRef<'a>,
}

#[derive(Clone, Copy, Debug)]
pub struct CaseInput<'a> {
    pub s: u32,
    pub contenders: &'a [Contender<'a>],
    /// How many contenders have a child whose label contains `s`.
    pub t_s: usize,
    /// Label of the part of the subtree processed before this step.
    pub cur_label: &'a Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub case: Case,
    pub label: Label,
    /// For growing cases, a node with at least three `s`-neighbours.
    pub lower_bound: Option<NodeId>,
}

fn is_plain(label: &LabelRef<'_>) -> bool {
    label.len() == 1 && matches!(label.last_type, LastType::T0 | LastType::T1)
}

/// Resolves one width step at node `x`.
pub fn case_analysis(input: &CaseInput<'_>, x: NodeId) -> Result<CaseOutcome, WidthError> {
    let s = input.s;
    let contenders = input.contenders;
    if contenders.is_empty() {
        return Err(WidthError::NoContenders(s));
    }
    if input.t_s > contenders.len() {
        return Err(WidthError::InvalidInput(format!(
            "t_s = {} exceeds {} contenders",
            input.t_s,
            contenders.len()
        )));
    }
    if let Some(c) = contenders.iter().find(|c| c.label.first_width().ok() != Some(s)) {
        return Err(WidthError::InvalidInput(format!("child {} label {} does not start at {s}", c.child, c.label)));
    }

    let outcome = |case, label, lower_bound| Ok(CaseOutcome { case, label, lower_bound });
    let grown = || Label::simple(s + 1, LastType::T1, x, None);

    if contenders.iter().all(|c| is_plain(&c.label)) {
        return match input.t_s {
            0 | 1 => outcome(Case::Plain, Label::simple(s, LastType::T1, x, None), None),
            2 => outcome(Case::RootCritical, Label::simple(s, LastType::T2, x, Some(x)), None),
            _ => outcome(Case::ThreeNeighbours, grown(), Some(x)),
        };
    }
    if contenders.len() >= 2 {
        let hidden = contenders.iter().find(|c| !is_plain(&c.label)).unwrap();
        return outcome(Case::CriticalWithRival, grown(), hidden.label.entries[0].critical);
    }

    let only = &contenders[0];
    let head = only.label.entries[0];
    if only.label.len() == 1 && only.label.last_type == LastType::T2 {
        return outcome(Case::ChildCritical, Label::simple(s, LastType::T3, x, head.critical), None);
    }
    // complex, or simple with the critical node one level down
    if input.cur_label.contains(s) {
        outcome(Case::DeepCriticalBlocked, grown(), head.critical)
    } else {
        let label = input.cur_label.clone().prepend(head)?;
        outcome(Case::DeepCritical, label, None)
    }
}

/// Flat per-node label storage.
#[derive(Clone, Debug)]
pub struct LabelStore {
    start: Vec<usize>,
    len: Vec<u8>,
    last_type: Vec<LastType>,
    entries: Vec<LabelEntry>,
    /// Bit `w` set iff the node's label contains width `w`.
    width_mask: Vec<u64>,
    /// Union of the children's width masks.
    child_mask: Vec<u64>,
    lower_bound: Vec<Option<NodeId>>,
}

impl LabelStore {
    pub fn new(n: usize) -> Self {
        LabelStore {
            start: vec![usize::MAX; n],
            len: vec![0; n],
            last_type: vec![LastType::T0; n],
            entries: Vec::with_capacity(n + n / 2),
            width_mask: vec![0; n],
            child_mask: vec![0; n],
            lower_bound: vec![None; n],
        }
    }

    pub fn has(&self, v: NodeId) -> bool {
        self.start[v] != usize::MAX
    }

    pub fn label(&self, v: NodeId) -> LabelRef<'_> {
        let from = self.start[v];
        if from == usize::MAX {
            return LabelRef { entries: &[], last_type: LastType::T0 };
        }
        LabelRef {
            entries: &self.entries[from..from + self.len[v] as usize],
            last_type: self.last_type[v],
        }
    }

    pub fn width_mask(&self, v: NodeId) -> u64 {
        self.width_mask[v]
    }

    /// Total number of stored entries over all nodes.
    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }

    fn first_width(&self, v: NodeId) -> u32 {
        self.entries[self.start[v]].width
    }

    fn set(&mut self, v: NodeId, label: &Label, child_mask: u64, lower_bound: Option<NodeId>) -> Result<(), WidthError> {
        let mut mask = 0u64;
        for e in label.entries() {
            if e.width >= 64 {
                return Err(WidthError::WidthOverflow(e.width));
            }
            mask |= 1 << e.width;
        }
        self.start[v] = self.entries.len();
        self.len[v] = label.entries().len() as u8;
        self.last_type[v] = label.last_type();
        self.entries.extend_from_slice(label.entries());
        self.width_mask[v] = mask;
        self.child_mask[v] = child_mask;
        self.lower_bound[v] = lower_bound;
        Ok(())
    }
}

struct Made {
    label: Label,
    lower_bound: Option<NodeId>,
    child_mask: u64,
}

fn make_label_inner(
    rooted: &RootedTree<'_>,
    x: NodeId,
    store: &LabelStore,
    mut on_case: impl FnMut(u32, Case),
) -> Result<Made, WidthError> {
    let children = rooted.children(x);
    let mut union = 0u64;
    for &v in children {
        if !store.has(v) {
            return Err(WidthError::MissingLabel(v));
        }
        union |= store.width_mask[v];
    }
    let mut cur = if union & 1 != 0 {
        Label::simple(1, LastType::T0, x, None)
    } else {
        Label::simple(0, LastType::T0, x, None)
    };
    if !children.is_empty() {
        on_case(0, Case::Leafy);
    }

    let mut last: Option<(u32, CaseOutcome)> = None;
    let mut contenders = Vec::new();
    let mut widths = union & !1;
    while widths != 0 {
        let s = widths.trailing_zeros();
        widths &= widths - 1;
        contenders.clear();
        let mut t_s = 0;
        for &v in children {
            if store.width_mask[v] >> s & 1 == 1 {
                contenders.push(Contender { child: v, label: store.label(v).truncate(s + 1) });
                if store.child_mask[v] >> s & 1 == 1 {
                    t_s += 1;
                }
            }
        }
        let outcome = case_analysis(&CaseInput { s, contenders: &contenders, t_s, cur_label: &cur }, x)?;
        on_case(s, outcome.case);
        cur = outcome.label.clone();
        last = Some((s, outcome));
    }

    let width = cur.first_width()?;
    let lower_bound = match last {
        Some((_, outcome)) if outcome.case.grows() => outcome.lower_bound,
        _ if width >= 2 => children
            .iter()
            .find(|&&v| store.first_width(v) == width)
            .and_then(|&v| store.lower_bound[v]),
        _ => None,
    };
    debug_assert!(cur.as_ref().validate().is_ok(), "bad label at {x}: {cur:#}");
    Ok(Made { label: cur, lower_bound, child_mask: union })
}

/// Label of the complete subtree at `x`, given the labels of all its
/// children and grandchildren in `store`.
pub fn make_label(rooted: &RootedTree<'_>, x: NodeId, store: &LabelStore) -> Result<Label, WidthError> {
    make_label_inner(rooted, x, store, |_, _| {}).map(|m| m.label)
}

/// Labels of every complete rooted subtree of a tree.
#[derive(Clone, Debug)]
pub struct Labeling<'t> {
    rooted: RootedTree<'t>,
    store: LabelStore,
}

impl<'t> Labeling<'t> {
    pub fn rooted(&self) -> &RootedTree<'t> {
        &self.rooted
    }

    pub fn store(&self) -> &LabelStore {
        &self.store
    }

    pub fn label(&self, v: NodeId) -> LabelRef<'_> {
        self.store.label(v)
    }

    pub fn root_label(&self) -> LabelRef<'_> {
        self.store.label(self.rooted.root())
    }

    /// Width of the whole tree.
    pub fn lmw(&self) -> usize {
        self.store.first_width(self.rooted.root()) as usize
    }

    /// For width `k + 1 >= 2`, a node `x` and `k` such that `x` has at least
    /// three `k`-neighbours, which certifies the lower bound.
    pub fn classification_witness(&self) -> Option<(NodeId, usize)> {
        let width = self.lmw();
        if width < 2 {
            return None;
        }
        self.store.lower_bound[self.rooted.root()].map(|x| (x, width - 1))
    }
}

/// Runs the bottom-up labeling with root `r`.
pub fn compute_all_labels(tree: &Tree, r: NodeId) -> Result<Labeling<'_>, WidthError> {
    compute_all_labels_traced(tree, r, |_, _, _| {})
}

/// As [`compute_all_labels`], reporting every `(node, s, case)` step.
pub fn compute_all_labels_traced(
    tree: &Tree,
    r: NodeId,
    mut on_case: impl FnMut(NodeId, u32, Case),
) -> Result<Labeling<'_>, WidthError> {
    let rooted = RootedTree::new(tree, r)?;
    let mut store = LabelStore::new(tree.node_count());
    for &x in rooted.bfs_order().iter().rev() {
        let made = make_label_inner(&rooted, x, &store, |s, case| on_case(x, s, case))?;
        store.set(x, &made.label, made.child_mask, made.lower_bound)?;
    }
    Ok(Labeling { rooted, store })
}

/// Width of `tree`, rooting at node 0.
pub fn lmw(tree: &Tree) -> usize {
    compute_all_labels(tree, 0).expect("node 0 exists in every tree").lmw()
}

/// Smallest node count a tree of width `k` can have: 1, 2, then
/// `1 + 3(1 + S(k - 1))`.
pub fn min_nodes_for_width(k: usize) -> usize {
    match k {
        0 => 1,
        1 => 2,
        _ => 1 + 3 * (1 + min_nodes_for_width(k - 1)),
    }
}
