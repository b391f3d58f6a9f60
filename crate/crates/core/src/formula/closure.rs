use std::collections::HashMap;
use std::fmt;

use super::{FoFormula, TemporalFormula};

/// Stable index of a formula inside a [`ClosureTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosureId(pub usize);

impl fmt::Display for ClosureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One closure entry with its immediate subformulas replaced by ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureNode {
    True,
    Fo(FoFormula),
    And(ClosureId, ClosureId),
    Or(ClosureId, ClosureId),
    X(ClosureId),
    WX(ClosureId),
    U(ClosureId, ClosureId),
    R(ClosureId, ClosureId),
}

impl ClosureNode {
    /// First-order, tomorrow and weak-tomorrow formulas are elementary.
    pub fn is_elementary(&self) -> bool {
        matches!(self, ClosureNode::True | ClosureNode::Fo(_) | ClosureNode::X(_) | ClosureNode::WX(_))
    }
}

/// The closure of a formula, hash-consed by structural equality.
///
/// Ids are assigned bottom-up, so every child has a smaller id than its
/// parent, and `X(α U β)` / `wX(α R β)` directly follow their operand.
#[derive(Debug, Clone)]
pub struct ClosureTable {
    entries: Vec<TemporalFormula>,
    nodes: Vec<ClosureNode>,
    index: HashMap<TemporalFormula, ClosureId>,
    xr: Vec<ClosureId>,
    wxr: Vec<ClosureId>,
    root: ClosureId,
}

pub fn closure(phi: &TemporalFormula) -> ClosureTable {
    let mut table = ClosureTable {
        entries: Vec::new(),
        nodes: Vec::new(),
        index: HashMap::new(),
        xr: Vec::new(),
        wxr: Vec::new(),
        root: ClosureId(0),
    };
    table.root = table.intern(phi);
    table
}

impl ClosureTable {
    fn insert(&mut self, f: TemporalFormula, node: ClosureNode) -> ClosureId {
        if let Some(&id) = self.index.get(&f) {
            return id;
        }
        let id = ClosureId(self.entries.len());
        match node {
            ClosureNode::X(_) => self.xr.push(id),
            ClosureNode::WX(_) => self.wxr.push(id),
            _ => {}
        }
        self.index.insert(f.clone(), id);
        self.entries.push(f);
        self.nodes.push(node);
        id
    }

    fn intern(&mut self, f: &TemporalFormula) -> ClosureId {
        use TemporalFormula as T;
        if let Some(&id) = self.index.get(f) {
            return id;
        }
        match f {
            T::True => self.insert(f.clone(), ClosureNode::True),
            T::Fo(fo) => self.insert(f.clone(), ClosureNode::Fo(fo.clone())),
            T::And(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                self.insert(f.clone(), ClosureNode::And(a, b))
            }
            T::Or(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                self.insert(f.clone(), ClosureNode::Or(a, b))
            }
            T::X(a) => {
                let a = self.intern(a);
                self.insert(f.clone(), ClosureNode::X(a))
            }
            T::WX(a) => {
                let a = self.intern(a);
                self.insert(f.clone(), ClosureNode::WX(a))
            }
            T::U(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                let id = self.insert(f.clone(), ClosureNode::U(a, b));
                self.insert(T::x(f.clone()), ClosureNode::X(id));
                id
            }
            T::R(a, b) => {
                let (a, b) = (self.intern(a), self.intern(b));
                let id = self.insert(f.clone(), ClosureNode::R(a, b));
                self.insert(T::wx(f.clone()), ClosureNode::WX(id));
                id
            }
        }
    }

    pub fn root(&self) -> ClosureId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn formula(&self, id: ClosureId) -> &TemporalFormula {
        &self.entries[id.0]
    }

    pub fn node(&self, id: ClosureId) -> &ClosureNode {
        &self.nodes[id.0]
    }

    pub fn get(&self, f: &TemporalFormula) -> Option<ClosureId> {
        self.index.get(f).copied()
    }

    /// Tomorrow formulas `X α`, in id order.
    pub fn xr(&self) -> &[ClosureId] {
        &self.xr
    }

    /// Weak-tomorrow formulas `wX α`, in id order.
    pub fn wxr(&self) -> &[ClosureId] {
        &self.wxr
    }

    /// For an `X α` or `wX α` entry, the id of `α`.
    pub fn tomorrow_operand(&self, id: ClosureId) -> Option<ClosureId> {
        match self.node(id) {
            ClosureNode::X(a) | ClosureNode::WX(a) => Some(*a),
            _ => None,
        }
    }

    /// Looks up `X(id)` built during construction for an until entry.
    pub fn x_of(&self, id: ClosureId) -> Option<ClosureId> {
        self.get(&TemporalFormula::x(self.formula(id).clone()))
    }

    /// Looks up `wX(id)` built during construction for a release entry.
    pub fn wx_of(&self, id: ClosureId) -> Option<ClosureId> {
        self.get(&TemporalFormula::wx(self.formula(id).clone()))
    }

    pub fn ids(&self) -> impl Iterator<Item = ClosureId> {
        (0..self.entries.len()).map(ClosureId)
    }
}
