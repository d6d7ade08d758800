//! Tree families used as test corpora and benchmark inputs.
//!
//! Random and exhaustive generation both go through Prüfer decoding, which
//! is a bijection between sequences in `[0, n)^(n-2)` and labeled trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{NodeId, Tree};

/// Upper bound on the node count of any generated tree.
pub const MAX_GENERATED_NODES: usize = 20_000_000;
/// Largest `n` accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_NODES: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("requested tree has more than {MAX_GENERATED_NODES} nodes")]
    TooLarge,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn check_size(n: usize) -> Result<(), GenError> {
    if n > MAX_GENERATED_NODES {
        Err(GenError::TooLarge)
    } else {
        Ok(())
    }
}

fn build(n: usize, edges: Vec<(NodeId, NodeId)>) -> Tree {
    Tree::from_edges(n, edges).expect("generator produced an invalid tree")
}

pub fn path_tree(n: usize) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameter("path needs at least one node".into()));
    }
    check_size(n)?;
    Ok(build(n, (1..n).map(|v| (v - 1, v)).collect()))
}

/// Star on `n` nodes with center 0.
pub fn star(n: usize) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameter("star needs at least one node".into()));
    }
    check_size(n)?;
    Ok(build(n, (1..n).map(|v| (0, v)).collect()))
}

/// A path of `spine` nodes (ids `0..spine`), each carrying `legs` pendant
/// leaves numbered after the spine.
pub fn caterpillar(spine: usize, legs: usize) -> Result<Tree, GenError> {
    if spine == 0 {
        return Err(GenError::InvalidParameter("caterpillar needs a non-empty spine".into()));
    }
    let n = legs
        .checked_add(1)
        .and_then(|per| per.checked_mul(spine))
        .ok_or(GenError::TooLarge)?;
    check_size(n)?;
    let mut edges: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
    let mut next = spine;
    for s in 0..spine {
        for _ in 0..legs {
            edges.push((s, next));
            next += 1;
        }
    }
    Ok(build(n, edges))
}

/// Complete `branching`-ary tree of the given height, numbered level by
/// level: the children of node `i` are `b*i + 1 ..= b*i + b`.
pub fn complete_ary(branching: usize, height: usize) -> Result<Tree, GenError> {
    let mut n: usize = 1;
    let mut level: usize = 1;
    for _ in 0..height {
        level = level.checked_mul(branching).ok_or(GenError::TooLarge)?;
        n = n.checked_add(level).ok_or(GenError::TooLarge)?;
        check_size(n)?;
    }
    let edges = (1..n).map(|v| ((v - 1) / branching, v)).collect();
    Ok(build(n, edges))
}

/// Decodes a Prüfer sequence into a tree on `seq.len() + 2` nodes in linear
/// time.
pub fn from_prufer(seq: &[NodeId]) -> Result<Tree, GenError> {
    let n = seq.len() + 2;
    check_size(n)?;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(GenError::InvalidParameter(format!("prufer entry {bad} out of range for n={n}")));
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap();
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Ok(build(n, edges))
}

/// Uniformly random labeled tree on `n` nodes, reproducible for a fixed seed.
pub fn random_tree(n: usize, seed: u64) -> Result<Tree, GenError> {
    match n {
        0 => Err(GenError::InvalidParameter("tree needs at least one node".into())),
        1 => Ok(Tree::singleton()),
        _ => {
            check_size(n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq: Vec<NodeId> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            from_prufer(&seq)
        }
    }
}

/// All `n^(n-2)` labeled trees on `n` nodes, one per Prüfer sequence in
/// lexicographic order.
pub fn enumerate_trees(n: usize) -> Result<PruferTrees, GenError> {
    if !(2..=MAX_ENUMERATION_NODES).contains(&n) {
        return Err(GenError::InvalidParameter(format!(
            "enumeration supports 2 <= n <= {MAX_ENUMERATION_NODES}, got {n}"
        )));
    }
    Ok(PruferTrees { n, seq: vec![0; n - 2], done: false })
}

pub struct PruferTrees {
    n: usize,
    seq: Vec<NodeId>,
    done: bool,
}

impl Iterator for PruferTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.done {
            return None;
        }
        let tree = from_prufer(&self.seq).expect("sequence within range");
        // odometer increment
        self.done = true;
        for digit in self.seq.iter_mut().rev() {
            *digit += 1;
            if *digit < self.n {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(tree)
    }
}

/// Node count of [`extremal_tree`]`(k)`: 2 for k = 1, else `1 + 3(1 + S(k-1))`.
pub fn extremal_size(k: u32) -> Option<usize> {
    match k {
        0 => None,
        1 => Some(2),
        _ => extremal_size(k - 1)?
            .checked_add(1)?
            .checked_mul(3)?
            .checked_add(1),
    }
}

/// The recursive family whose member `k` has width exactly `k`: a single
/// edge for k = 1, otherwise a center with three neighbours, each of which
/// is attached to the root of a copy of the `k - 1` member. The center is
/// node 0 and copies are numbered depth-first.
pub fn extremal_tree(k: u32) -> Result<Tree, GenError> {
    let n = extremal_size(k).ok_or_else(|| {
        if k == 0 {
            GenError::InvalidParameter("extremal tree needs k >= 1".into())
        } else {
            GenError::TooLarge
        }
    })?;
    check_size(n)?;
    let mut edges = Vec::with_capacity(n - 1);
    let mut next = 0;
    extremal_into(k, &mut edges, &mut next);
    debug_assert_eq!(next, n);
    Ok(build(n, edges))
}

fn extremal_into(k: u32, edges: &mut Vec<(NodeId, NodeId)>, next: &mut NodeId) -> NodeId {
    let root = *next;
    *next += 1;
    if k == 1 {
        edges.push((root, *next));
        *next += 1;
        return root;
    }
    for _ in 0..3 {
        let arm = *next;
        *next += 1;
        edges.push((root, arm));
        let sub = extremal_into(k - 1, edges, next);
        edges.push((arm, sub));
    }
    root
}
