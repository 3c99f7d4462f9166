//! Forward subsumption.

use crate::snf::{Body, ClauseId, Lit, LitSet};

/// Whether `c1` subsumes `c2`.
///
/// A global clause subsumes initial and global clauses with a larger
/// disjunction; an initial clause subsumes initial clauses only. Coalition
/// clauses subsume clauses of the same polarity when antecedent and
/// disjunction are included; the coalition must grow for positive clauses
/// and shrink for negative ones.
pub fn subsumes(c1: &Body, c2: &Body) -> bool {
    match (c1, c2) {
        (Body::Global(d1), Body::Initial(d2) | Body::Global(d2)) | (Body::Initial(d1), Body::Initial(d2)) => {
            d1.is_subset(d2)
        }
        (
            Body::Positive { cond: c1, coalition: a1, disj: d1 },
            Body::Positive { cond: c2, coalition: a2, disj: d2 },
        ) => a1.is_subset(a2) && c1.is_subset(c2) && d1.is_subset(d2),
        (
            Body::Negative { cond: c1, coalition: a1, disj: d1 },
            Body::Negative { cond: c2, coalition: a2, disj: d2 },
        ) => a2.is_subset(a1) && c1.is_subset(c2) && d1.is_subset(d2),
        _ => false,
    }
}

const NO_NODE: u32 = u32::MAX;

#[derive(Default)]
struct Node {
    /// Children by literal code, sorted.
    children: Vec<(u32, u32)>,
    /// Child that ends the antecedent and starts the disjunction.
    sep: u32,
    ends: Vec<ClauseId>,
}

/// A trie over the sorted antecedent, a separator, then the sorted
/// disjunction.
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            nodes: vec![Node {
                sep: NO_NODE,
                ..Node::default()
            }],
        }
    }

    fn push_node(&mut self) -> u32 {
        self.nodes.push(Node {
            sep: NO_NODE,
            ..Node::default()
        });
        self.nodes.len() as u32 - 1
    }

    fn child(&mut self, at: u32, label: u32) -> u32 {
        let node = &self.nodes[at as usize];
        match node.children.binary_search_by_key(&label, |c| c.0) {
            Ok(i) => node.children[i].1,
            Err(i) => {
                let n = self.push_node();
                self.nodes[at as usize].children.insert(i, (label, n));
                n
            }
        }
    }

    fn insert(&mut self, id: ClauseId, cond: &LitSet, disj: &LitSet) {
        let mut at = 0;
        for l in cond.iter() {
            at = self.child(at, l.code() as u32);
        }
        if self.nodes[at as usize].sep == NO_NODE {
            let n = self.push_node();
            self.nodes[at as usize].sep = n;
        }
        at = self.nodes[at as usize].sep;
        for l in disj.iter() {
            at = self.child(at, l.code() as u32);
        }
        self.nodes[at as usize].ends.push(id);
    }

    /// Visits clauses whose antecedent and disjunction are included in the
    /// query's, stopping at the first one `accept` takes.
    fn find(&self, cond: &[Lit], disj: &[Lit], accept: &mut impl FnMut(ClauseId) -> bool) -> Option<ClauseId> {
        self.walk(0, cond, false, disj, accept)
    }

    /// Collects clauses whose antecedent and disjunction include the
    /// query's.
    fn supersets(&self, cond: &[Lit], disj: &[Lit], out: &mut Vec<ClauseId>) {
        self.walk_up(0, cond, false, disj, out);
    }

    fn walk_up(&self, at: u32, rest: &[Lit], in_disj: bool, disj: &[Lit], out: &mut Vec<ClauseId>) {
        let node = &self.nodes[at as usize];
        if in_disj && rest.is_empty() {
            self.collect(at, out);
            return;
        }
        if !in_disj && rest.is_empty() && node.sep != NO_NODE {
            self.walk_up(node.sep, disj, true, disj, out);
        }
        for &(label, child) in &node.children {
            match rest.first().map(|l| l.code() as u32) {
                Some(code) if label > code => break,
                Some(code) if label == code => self.walk_up(child, &rest[1..], in_disj, disj, out),
                _ => self.walk_up(child, rest, in_disj, disj, out),
            }
        }
    }

    fn collect(&self, at: u32, out: &mut Vec<ClauseId>) {
        let node = &self.nodes[at as usize];
        out.extend_from_slice(&node.ends);
        if node.sep != NO_NODE {
            self.collect(node.sep, out);
        }
        for &(_, child) in &node.children {
            self.collect(child, out);
        }
    }

    fn walk(
        &self,
        at: u32,
        rest: &[Lit],
        in_disj: bool,
        disj: &[Lit],
        accept: &mut impl FnMut(ClauseId) -> bool,
    ) -> Option<ClauseId> {
        let node = &self.nodes[at as usize];
        if in_disj {
            if let Some(&id) = node.ends.iter().find(|&&id| accept(id)) {
                return Some(id);
            }
        } else if node.sep != NO_NODE {
            if let Some(id) = self.walk(node.sep, disj, true, disj, accept) {
                return Some(id);
            }
        }
        // intersect the sorted children with the remaining query literals
        let (mut i, mut j) = (0, 0);
        while i < node.children.len() && j < rest.len() {
            let (label, child) = node.children[i];
            let code = rest[j].code() as u32;
            if label < code {
                i += 1;
            } else if label > code {
                j += 1;
            } else {
                if let Some(id) = self.walk(child, &rest[j + 1..], in_disj, disj, accept) {
                    return Some(id);
                }
                i += 1;
                j += 1;
            }
        }
        None
    }
}

/// Stored clauses in one trie per clause family. A query only follows
/// paths made of its own literals, so it never touches a clause with a
/// literal the query lacks.
pub struct SubsumptionIndex {
    prop: Trie,
    positive: Trie,
    negative: Trie,
    /// Removed clauses, by id.
    dead: Vec<bool>,
}

impl Default for SubsumptionIndex {
    fn default() -> Self {
        SubsumptionIndex {
            prop: Trie::new(),
            positive: Trie::new(),
            negative: Trie::new(),
            dead: Vec::new(),
        }
    }
}

impl SubsumptionIndex {
    pub fn new() -> Self {
        Self::default()
    }

    fn trie(&self, body: &Body) -> &Trie {
        match body {
            Body::Initial(_) | Body::Global(_) => &self.prop,
            Body::Positive { .. } => &self.positive,
            Body::Negative { .. } => &self.negative,
        }
    }

    pub fn insert(&mut self, id: ClauseId, body: &Body) {
        let trie = match body {
            Body::Initial(_) | Body::Global(_) => &mut self.prop,
            Body::Positive { .. } => &mut self.positive,
            Body::Negative { .. } => &mut self.negative,
        };
        trie.insert(id, body.cond(), body.disj());
    }

    /// Excludes a stored clause from later queries.
    pub fn remove(&mut self, id: ClauseId) {
        let i = id.0 as usize;
        if self.dead.len() <= i {
            self.dead.resize(i + 1, false);
        }
        self.dead[i] = true;
    }

    fn is_dead(&self, id: ClauseId) -> bool {
        self.dead.get(id.0 as usize).copied().unwrap_or(false)
    }

    /// Stored clauses that `body` subsumes, in id order.
    pub fn subsumed_by<'a>(&self, body: &Body, lookup: impl Fn(ClauseId) -> &'a Body) -> Vec<ClauseId> {
        let mut out = Vec::new();
        let (cond, disj) = (body.cond().as_slice(), body.disj().as_slice());
        match body {
            // a global clause also subsumes initial ones, which share its trie
            Body::Initial(_) | Body::Global(_) => self.prop.supersets(cond, disj, &mut out),
            Body::Positive { .. } => self.positive.supersets(cond, disj, &mut out),
            Body::Negative { .. } => self.negative.supersets(cond, disj, &mut out),
        }
        out.retain(|&id| !self.is_dead(id) && subsumes(body, lookup(id)));
        out.sort_unstable();
        out
    }

    /// Some stored clause subsuming `body`, if any. `lookup` maps ids back
    /// to stored bodies.
    pub fn find_subsumer<'a>(&self, body: &Body, lookup: impl Fn(ClauseId) -> &'a Body) -> Option<ClauseId> {
        self.trie(body).find(body.cond().as_slice(), body.disj().as_slice(), &mut |id| {
            !self.is_dead(id) && subsumes(lookup(id), body)
        })
    }
}
