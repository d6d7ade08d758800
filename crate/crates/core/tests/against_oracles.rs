//! The label algorithm and the layout builder checked against the
//! brute-force oracles on every small tree and on random mid-sized ones.

use std::collections::BTreeSet;

use lmimw::generators::{enumerate_trees, random_tree};
use lmimw::label::LastType;
use lmimw::layout::{layout_from_labels, layout_from_labels_traced, SubtreeView};
use lmimw::oracle::{lmw_bruteforce, mim_of_layout};
use lmimw::tree::{NodeId, RootedTree, Tree};
use lmimw::width::{compute_all_labels, Labeling};
use rayon::prelude::*;

fn lmw_of(tree: &Tree, nodes: &[NodeId]) -> usize {
    let (sub, _) = tree.induced(nodes).expect("connected node set");
    lmw_bruteforce(&sub).unwrap()
}

fn subtree_minus(rooted: &RootedTree<'_>, x: NodeId, cut: &[NodeId]) -> Vec<NodeId> {
    rooted
        .subtree_nodes(x)
        .into_iter()
        .filter(|&v| !cut.iter().any(|&w| rooted.is_ancestor_or_self(w, v)))
        .collect()
}

/// Nodes of `part` with exactly two children that have a child whose
/// subtree (inside `part`) has width `k`.
fn critical_nodes(tree: &Tree, rooted: &RootedTree<'_>, part: &[NodeId], k: usize) -> BTreeSet<NodeId> {
    let inside: BTreeSet<NodeId> = part.iter().copied().collect();
    let width_below = |u: NodeId| {
        let nodes: Vec<NodeId> = rooted.subtree_nodes(u).into_iter().filter(|v| inside.contains(v)).collect();
        lmw_of(tree, &nodes)
    };
    part.iter()
        .copied()
        .filter(|&y| {
            let hits = rooted
                .children(y)
                .iter()
                .filter(|v| inside.contains(v))
                .filter(|&&v| rooted.children(v).iter().any(|&u| inside.contains(&u) && width_below(u) == k))
                .count();
            hits == 2
        })
        .collect()
}

/// Every entry `a_i` of `label(x)` is the width of `T_r[x]` with the witness
/// subtrees of the earlier entries removed, and the last type describes where
/// the critical node of the last part sits.
fn check_label_semantics(tree: &Tree, lab: &Labeling<'_>) {
    let rooted = lab.rooted();
    for x in 0..tree.node_count() {
        let label = lab.label(x);
        label.validate().unwrap();
        let mut cut = Vec::new();
        for (i, e) in label.entries.iter().enumerate() {
            let part = subtree_minus(rooted, x, &cut);
            assert_eq!(lmw_of(tree, &part), e.width as usize, "entry {i} of {label:#} at {x} in {:?}", tree.edges());
            let last = i + 1 == label.len();
            let crits = critical_nodes(tree, rooted, &part, e.width as usize);
            let expected: BTreeSet<NodeId> = e.critical.into_iter().collect();
            assert_eq!(crits, expected, "critical nodes for entry {i} of {label:#} at {x}");
            if last {
                assert_eq!(e.witness, x);
            } else {
                assert!(part.contains(&e.witness));
                let crit = e.critical.unwrap();
                assert_eq!(rooted.parent(crit), Some(e.witness));
                assert_ne!(e.witness, x, "complex entry names the root at {x}");
                assert_ne!(rooted.parent(e.witness), None);
            }
            cut.push(e.witness);
        }
        let last = label.entries.last().unwrap();
        match label.last_type {
            LastType::T2 => assert_eq!(last.critical, Some(x)),
            LastType::T3 => assert_eq!(rooted.parent(last.critical.unwrap()), Some(x)),
            _ => {}
        }
    }
}

#[test]
fn widths_match_bruteforce_on_every_tree_up_to_seven_nodes_from_every_root() {
    for n in 2..=7 {
        let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
        trees.par_iter().for_each(|t| {
            let expected = lmw_bruteforce(t).unwrap();
            for r in 0..n {
                let lab = compute_all_labels(t, r).unwrap();
                assert_eq!(lab.lmw(), expected, "tree {:?} root {r}", t.edges());
            }
        });
    }
}

#[test]
fn labels_mean_what_they_say_on_small_trees() {
    for n in 2..=7 {
        let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
        trees.par_iter().for_each(|t| {
            let lab = compute_all_labels(t, 0).unwrap();
            check_label_semantics(t, &lab);
        });
    }
}

#[test]
fn labels_mean_what_they_say_on_random_trees() {
    (0..400u64).into_par_iter().for_each(|seed| {
        let n = 9 + (seed % 6) as usize;
        let t = random_tree(n, seed).unwrap();
        let lab = compute_all_labels(&t, (seed as usize * 7) % n).unwrap();
        check_label_semantics(&t, &lab);
    });
}

#[test]
fn child_order_does_not_change_widths_or_types() {
    (0..300u64).into_par_iter().for_each(|seed| {
        let n = 20 + (seed % 40) as usize;
        let t = random_tree(n, seed).unwrap();
        let mut reversed: Vec<_> = t.edges().to_vec();
        reversed.reverse();
        let flipped = Tree::from_edges(n, reversed.into_iter().map(|(u, v)| (v, u)).collect()).unwrap();
        let a = compute_all_labels(&t, 0).unwrap();
        let b = compute_all_labels(&flipped, 0).unwrap();
        for x in 0..n {
            let (la, lb) = (a.label(x), b.label(x));
            let wa: Vec<u32> = la.entries.iter().map(|e| e.width).collect();
            let wb: Vec<u32> = lb.entries.iter().map(|e| e.width).collect();
            assert_eq!((wa, la.last_type), (wb, lb.last_type), "seed {seed} node {x}");
        }
    });
}

#[test]
fn layouts_are_optimal_on_every_tree_up_to_eight_nodes() {
    for n in 2..=8 {
        let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
        trees.par_iter().for_each(|t| {
            let roots: Vec<NodeId> = if n <= 6 { (0..n).collect() } else { vec![0, n - 1] };
            for r in roots {
                let lab = compute_all_labels(t, r).unwrap();
                let layout = layout_from_labels(&lab).unwrap();
                assert_eq!(mim_of_layout(t, &layout).unwrap(), lab.lmw(), "tree {:?} root {r}", t.edges());
            }
        });
    }
}

/// Components of `view ∖ N[P]`, by plain graph search.
fn true_components(tree: &Tree, view: &BTreeSet<NodeId>, path: &[NodeId]) -> Vec<BTreeSet<NodeId>> {
    let mut blocked: BTreeSet<NodeId> = path.iter().copied().collect();
    for &x in path {
        blocked.extend(tree.neighbors(x).iter().filter(|v| view.contains(v)));
    }
    let mut seen = blocked.clone();
    let mut out = Vec::new();
    for &s in view {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        seen.insert(s);
        while let Some(a) = stack.pop() {
            for &b in tree.neighbors(a) {
                if view.contains(&b) && seen.insert(b) {
                    comp.insert(b);
                    stack.push(b);
                }
            }
        }
        out.push(comp);
    }
    out.sort();
    out
}

fn check_recursion(t: &Tree, r: NodeId) {
    let lab = compute_all_labels(t, r).unwrap();
    let view_nodes =
        |v: SubtreeView| -> BTreeSet<NodeId> { v.tree_view(&lab).unwrap().nodes().collect() };
    let rooted = lab.rooted();
    layout_from_labels_traced(&lab, |step| {
        let nodes = view_nodes(step.view);
        let as_vec: Vec<NodeId> = nodes.iter().copied().collect();
        assert_eq!(lmw_of(t, &as_vec), step.width as usize, "view {:?} of {:?}", step.view, t.edges());
        for y in &nodes {
            let inside = subtree_minus(rooted, *y, &[])
                .into_iter()
                .filter(|v| nodes.contains(v))
                .collect::<Vec<_>>();
            let eff = lab.label(*y).truncate(step.view.cap);
            assert_eq!(lmw_of(t, &inside), eff.first_width().unwrap() as usize, "effective label at {y}");
        }
        let mut claimed: Vec<BTreeSet<NodeId>> = step.components.iter().map(|c| view_nodes(c.2)).collect();
        claimed.sort();
        assert_eq!(claimed, true_components(t, &nodes, step.path), "components of {:?}", step.view);
        for comp in &claimed {
            let as_vec: Vec<NodeId> = comp.iter().copied().collect();
            assert!(lmw_of(t, &as_vec) < step.width as usize);
        }
        // every proper ancestor of an upward split carries the same head entry
        for &(via, attach, sub) in step.components {
            if rooted.parent(via) == Some(attach) {
                let mut y = attach;
                loop {
                    let head = lab.label(y).truncate(step.view.cap);
                    if head.first_width() == Ok(step.width) {
                        assert_eq!(head.entries[0].witness, via);
                    }
                    if y == sub.root {
                        break;
                    }
                    y = rooted.parent(y).unwrap();
                }
            }
        }
    })
    .unwrap();
}

#[test]
fn every_recursion_step_is_sound_on_small_trees() {
    for n in 2..=7 {
        let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
        trees.par_iter().for_each(|t| check_recursion(t, 0));
    }
}

#[test]
fn every_recursion_step_is_sound_on_random_trees() {
    (0..600u64).into_par_iter().for_each(|seed| {
        let n = 10 + (seed % 7) as usize;
        let t = random_tree(n, seed).unwrap();
        check_recursion(&t, seed as usize % n);
    });
}
