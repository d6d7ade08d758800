//! Subtree labels: strictly decreasing width lists closed by a type tag.
//!
//! A label `(a1, ..., ap, t.X)` summarizes a rooted subtree. `a1` is the
//! subtree's width. Each entry also records a witness node: for every entry
//! but the last, the parent of the critical node whose subtree is cut away
//! to reach the next entry; for the last entry, the subtree root itself.

use std::fmt;

use thiserror::Error;

use crate::tree::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("operation needs a non-empty label")]
    Empty,
    #[error("prepending width {width} would break strict decrease (first width {first})")]
    NotDecreasing { width: u32, first: u32 },
}

/// Where the critical node of the last entry sits, if there is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LastType {
    /// A single node, or a star around the root.
    T0,
    /// No critical node.
    T1,
    /// The root is critical.
    T2,
    /// A child of the root is critical.
    T3,
}

impl LastType {
    pub fn has_critical(self) -> bool {
        matches!(self, LastType::T2 | LastType::T3)
    }

    fn tag(self) -> &'static str {
        match self {
            LastType::T0 => "t.0",
            LastType::T1 => "t.1",
            LastType::T2 => "t.2",
            LastType::T3 => "t.3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelEntry {
    pub width: u32,
    pub witness: NodeId,
    /// The critical node (a child of `witness`) when one exists at this level.
    pub critical: Option<NodeId>,
}

impl LabelEntry {
    pub fn new(width: u32, witness: NodeId, critical: Option<NodeId>) -> Self {
        LabelEntry { width, witness, critical }
    }
}

/// Borrowed label, as stored in a [`crate::width::LabelStore`] or truncated
/// from one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelRef<'a> {
    pub entries: &'a [LabelEntry],
    pub last_type: LastType,
}

impl<'a> LabelRef<'a> {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn first_width(&self) -> Result<u32, LabelError> {
        self.entries.first().map(|e| e.width).ok_or(LabelError::Empty)
    }

    pub fn first(&self) -> Option<&'a LabelEntry> {
        self.entries.first()
    }

    pub fn contains(&self, s: u32) -> bool {
        self.entries.iter().any(|e| e.width == s)
    }

    pub fn is_simple(&self) -> Result<bool, LabelError> {
        if self.entries.is_empty() {
            Err(LabelError::Empty)
        } else {
            Ok(self.entries.len() == 1)
        }
    }

    /// Drops every entry of width `>= s`.
    pub fn truncate(&self, s: u32) -> LabelRef<'a> {
        let keep_from = self.entries.iter().position(|e| e.width < s).unwrap_or(self.entries.len());
        LabelRef { entries: &self.entries[keep_from..], last_type: self.last_type }
    }

    /// Entries past the first one.
    pub fn tail(&self) -> LabelRef<'a> {
        LabelRef { entries: self.entries.get(1..).unwrap_or(&[]), last_type: self.last_type }
    }

    pub fn to_label(&self) -> Label {
        Label { entries: self.entries.to_vec(), last_type: self.last_type }
    }

    /// Checks strict decrease and the critical-node convention.
    pub fn validate(&self) -> Result<(), String> {
        if self.entries.windows(2).any(|w| w[0].width <= w[1].width) {
            return Err(format!("widths not strictly decreasing: {self}"));
        }
        if let Some((last, rest)) = self.entries.split_last() {
            if rest.iter().any(|e| e.critical.is_none()) {
                return Err(format!("inner entry without critical node: {self:#}"));
            }
            if last.critical.is_some() != self.last_type.has_critical() {
                return Err(format!("critical node does not match last type: {self:#}"));
            }
        }
        Ok(())
    }

    /// Text form `(a1,...,ap,t.X)`; the alternate form `{:#}`
    /// appends each entry's witness as `a@w`.
    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for e in self.entries {
            if f.alternate() {
                write!(f, "{}@{},", e.width, e.witness)?;
            } else {
                write!(f, "{},", e.width)?;
            }
        }
        write!(f, "{})", self.last_type.tag())
    }
}

impl fmt::Display for LabelRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "()");
        }
        self.write(f)
    }
}

/// Owned label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    entries: Vec<LabelEntry>,
    last_type: LastType,
}

impl Label {
    /// Label made of one entry.
    pub fn simple(width: u32, last_type: LastType, witness: NodeId, critical: Option<NodeId>) -> Self {
        Label { entries: vec![LabelEntry::new(width, witness, critical)], last_type }
    }

    /// Label of an empty view.
    pub fn empty(last_type: LastType) -> Self {
        Label { entries: Vec::new(), last_type }
    }

    pub fn from_entries(entries: Vec<LabelEntry>, last_type: LastType) -> Result<Self, String> {
        let label = Label { entries, last_type };
        label.as_ref().validate()?;
        Ok(label)
    }

    pub fn as_ref(&self) -> LabelRef<'_> {
        LabelRef { entries: &self.entries, last_type: self.last_type }
    }

    pub fn entries(&self) -> &[LabelEntry] {
        &self.entries
    }

    pub fn last_type(&self) -> LastType {
        self.last_type
    }

    pub fn widths(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.width).collect()
    }

    pub fn first_width(&self) -> Result<u32, LabelError> {
        self.as_ref().first_width()
    }

    pub fn contains(&self, s: u32) -> bool {
        self.as_ref().contains(s)
    }

    pub fn is_simple(&self) -> Result<bool, LabelError> {
        self.as_ref().is_simple()
    }

    pub fn truncate(&self, s: u32) -> Label {
        self.as_ref().truncate(s).to_label()
    }

    /// Puts `entry` in front; its width must exceed the current first width.
    pub fn prepend(mut self, entry: LabelEntry) -> Result<Label, LabelError> {
        if let Some(first) = self.entries.first() {
            if entry.width <= first.width {
                return Err(LabelError::NotDecreasing { width: entry.width, first: first.width });
            }
        }
        self.entries.insert(0, entry);
        Ok(self)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_ref(), f)
    }
}
