//! Hand-built trees whose labels are known from their construction.

use lmimw::generators::extremal_tree;
use lmimw::layout::build_layout;
use lmimw::oracle::{k_component_index_oracle, lmw_bruteforce, mim_of_layout};
use lmimw::tree::{NodeId, Tree};
use lmimw::width::{compute_all_labels, compute_all_labels_traced, Case};

struct Builder {
    edges: Vec<(NodeId, NodeId)>,
    next: NodeId,
}

impl Builder {
    fn new() -> Self {
        Builder { edges: Vec::new(), next: 1 }
    }

    fn child(&mut self, parent: NodeId) -> NodeId {
        let v = self.next;
        self.next += 1;
        self.edges.push((parent, v));
        v
    }

    /// Hangs a copy of the width-`k` extremal tree (by its center) below `parent`.
    fn graft_extremal(&mut self, parent: NodeId, k: u32) {
        let t = extremal_tree(k).unwrap();
        let base = self.next;
        self.next += t.node_count();
        self.edges.push((parent, base));
        self.edges.extend(t.edges().iter().map(|&(u, v)| (u + base, v + base)));
    }

    fn build(self) -> Tree {
        Tree::from_edges(self.next, self.edges).unwrap()
    }
}

/// Root 0 of width 4 above a chain c - b - a where `a` is 3-critical, `b`
/// is its parent and `c` additionally has two arms of width 2 making it
/// 2-critical once `b`'s subtree is cut away.
fn chain_example() -> (Tree, [NodeId; 3]) {
    let mut t = Builder::new();
    let c = t.child(0);
    let b = t.child(c);
    let a = t.child(b);
    for _ in 0..2 {
        let arm = t.child(a);
        t.graft_extremal(arm, 3);
    }
    for _ in 0..2 {
        let arm = t.child(c);
        t.graft_extremal(arm, 2);
    }
    let rival = t.child(0);
    t.graft_extremal(rival, 3);
    (t.build(), [a, b, c])
}

#[test]
fn chain_labels_follow_the_cases() {
    let (tree, [a, b, c]) = chain_example();
    let mut final_case = vec![None; tree.node_count()];
    let lab = compute_all_labels_traced(&tree, 0, |x, _, case| final_case[x] = Some(case)).unwrap();
    assert_eq!(lab.label(a).to_string(), "(3,t.2)");
    assert_eq!(final_case[a], Some(Case::RootCritical));
    assert_eq!(lab.label(b).to_string(), "(3,t.3)");
    assert_eq!(final_case[b], Some(Case::ChildCritical));
    assert_eq!(lab.label(c).to_string(), "(3,2,t.2)");
    assert_eq!(final_case[c], Some(Case::DeepCritical));
    // the first entry of c points at b, the parent of the critical node a
    assert_eq!((lab.label(c).entries[0].witness, lab.label(c).entries[0].critical), (b, Some(a)));
    assert_eq!(lab.root_label().to_string(), "(4,t.1)");
    assert_eq!(final_case[0], Some(Case::CriticalWithRival));
    assert_eq!(lab.classification_witness(), Some((a, 3)));
}

#[test]
fn chain_layout_attains_four() {
    let (tree, _) = chain_example();
    for r in [0, 1, 5, tree.node_count() - 1] {
        let (layout, w) = build_layout(&tree, r).unwrap();
        assert_eq!(w, 4);
        assert_eq!(mim_of_layout(&tree, &layout).unwrap(), 4);
    }
}

#[test]
fn two_branch_tree_is_root_critical() {
    let tree = Tree::from_edges(7, vec![(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 6)]).unwrap();
    let lab = compute_all_labels(&tree, 0).unwrap();
    assert_eq!(lab.root_label().to_string(), "(1,t.2)");
    assert_eq!(lmw_bruteforce(&tree).unwrap(), 1);
    assert_eq!(k_component_index_oracle(&tree, 0, 1, 16).unwrap(), 2);
    assert_eq!(lab.classification_witness(), None);
}

#[test]
fn extremal_two_has_center_witness() {
    let tree = extremal_tree(2).unwrap();
    let lab = compute_all_labels(&tree, 0).unwrap();
    assert_eq!(lab.root_label().to_string(), "(2,t.1)");
    assert_eq!(lab.classification_witness(), Some((0, 1)));
    assert_eq!(k_component_index_oracle(&tree, 0, 1, 16).unwrap(), 3);
    assert_eq!(lmw_bruteforce(&tree).unwrap(), 2);
}

#[test]
fn extremal_family_widths() {
    for k in 1..=6 {
        let tree = extremal_tree(k).unwrap();
        let (layout, w) = build_layout(&tree, 0).unwrap();
        assert_eq!(w, k as usize);
        assert_eq!(mim_of_layout(&tree, &layout).unwrap(), w);
    }
}

#[test]
fn deep_paths_and_caterpillars() {
    use lmimw::generators::{caterpillar, complete_ary, path_tree};
    let path = path_tree(200_000).unwrap();
    let (layout, w) = build_layout(&path, 0).unwrap();
    assert_eq!((w, mim_of_layout(&path, &layout).unwrap()), (1, 1));
    let cat = caterpillar(50_000, 2).unwrap();
    let (layout, w) = build_layout(&cat, 17).unwrap();
    assert_eq!(mim_of_layout(&cat, &layout).unwrap(), w);
    let kary = complete_ary(3, 8).unwrap();
    let (layout, w) = build_layout(&kary, 0).unwrap();
    assert_eq!(mim_of_layout(&kary, &layout).unwrap(), w);
}
