//! Linear maximum induced matching width (LMIM-width) of trees.
//!
//! [`width::compute_all_labels`] labels every rooted subtree bottom-up and
//! reads the width off the root label; [`layout::build_layout`] turns the
//! labels into a layout attaining that width. [`oracle`] holds the exact
//! brute-force counterparts used to check both.

pub mod generators;
pub mod label;
pub mod layout;
pub mod oracle;
pub mod tree;
pub mod width;

pub use label::{Label, LabelEntry, LabelRef, LastType};
pub use layout::{build_layout, SubtreeView};
pub use oracle::{mim_of_layout, LinearLayout};
pub use tree::{NodeId, RootedTree, Tree, TreeError, TreeView};
pub use width::{compute_all_labels, lmw, Labeling};
