use alloc::boxed::Box;
use alloc::vec::Vec;

use super::play::{Juliet, LrConfig, Move};
use crate::regular::{Symbol, Word};

/// Juliet's decisions along every play, branching on Romeo's replies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertNode {
    /// The pass is over.
    Done,
    Read(Box<CertNode>),
    /// One subtree per reply Romeo may give.
    Call(Vec<(Word, CertNode)>),
}

impl CertNode {
    fn bounds(&self) -> (usize, usize) {
        match self {
            CertNode::Done => (0, 0),
            CertNode::Read(next) => {
                let (m, c) = next.bounds();
                (m + 1, c)
            }
            CertNode::Call(children) => {
                let (m, c) = children
                    .iter()
                    .map(|(_, n)| n.bounds())
                    .fold((0, 0), |(m, c), (m2, c2)| (m.max(m2), c.max(c2)));
                (m + 1, c + 1)
            }
        }
    }

    fn leaves(&self) -> usize {
        match self {
            CertNode::Done => 1,
            CertNode::Read(next) => next.leaves(),
            CertNode::Call(children) => children.iter().map(|(_, n)| n.leaves()).sum(),
        }
    }
}

/// A checkable Juliet strategy for one word, as a trace tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyCert {
    pub word: Word,
    pub root: CertNode,
    /// Longest play, in Juliet moves.
    pub move_bound: usize,
    /// Most calls along any play.
    pub call_bound: usize,
    /// False when some Romeo replies were cut at a length bound, so the
    /// tree covers only those replies.
    pub exhaustive: bool,
}

impl StrategyCert {
    pub fn new(word: Word, root: CertNode, exhaustive: bool) -> StrategyCert {
        let (move_bound, call_bound) = root.bounds();
        StrategyCert {
            word,
            root,
            move_bound,
            call_bound,
            exhaustive,
        }
    }

    /// Number of distinct plays the tree covers.
    pub fn plays(&self) -> usize {
        self.root.leaves()
    }

    /// Follows the tree as a [`Juliet`] strategy.
    pub fn player(&self) -> CertPlayer<'_> {
        CertPlayer {
            node: Some(&self.root),
            pending: None,
        }
    }
}

pub struct CertPlayer<'a> {
    node: Option<&'a CertNode>,
    pending: Option<&'a [(Word, CertNode)]>,
}

impl Juliet for CertPlayer<'_> {
    fn choose(&mut self, _cfg: &LrConfig) -> Option<Move> {
        match self.node? {
            CertNode::Done => None,
            CertNode::Read(next) => {
                self.node = Some(next);
                Some(Move::Read)
            }
            CertNode::Call(children) => {
                self.node = None;
                self.pending = Some(children);
                Some(Move::Call)
            }
        }
    }

    fn observe(&mut self, replacement: &[Symbol]) {
        self.node = self
            .pending
            .take()
            .and_then(|cs| cs.iter().find(|(w, _)| w.as_slice() == replacement))
            .map(|(_, n)| n);
    }
}
