//! Searchable partial sums with indels, on a B+tree.
//!
//! [`SpsiTree`] keeps a dynamic sequence of positive weights and answers
//! weighted search and prefix sums in time proportional to the tree height
//! times the node arity. Internal nodes carry cumulative weight arrays;
//! bottom nodes store their leaves' weights inline. Leaves are reached
//! through stable [`LeafHandle`]s that survive splits, merges and
//! rebalancing until the leaf is removed.
//!
//! ```
//! use online_rlbwt::spsi::{SpsiConfig, SpsiTree};
//!
//! let mut t = SpsiTree::new(SpsiConfig::default()).unwrap();
//! let a = t.insert_after(None, 3).unwrap();
//! let b = t.insert_after(Some(a), 4).unwrap();
//! assert_eq!(t.total(), 7);
//! assert_eq!(t.search(5).unwrap(), (b, 2));
//! assert_eq!(t.prefix_sum_before(b).unwrap(), 3);
//! ```

pub(crate) mod forest;

use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{out_of_range, Error, Result};
use forest::{Forest, LeafRef, Links, NodeRef};

/// Shape parameters of a tree, fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpsiConfig {
    /// Maximum fanout of internal nodes above the bottom level.
    pub b_internal: usize,
    /// Maximum number of leaves per bottom node.
    pub b_bottom: usize,
    /// Keep order labels on bottom nodes.
    pub with_labels: bool,
    /// Keep a leftmost-leaf shortcut on every internal node.
    pub with_leftmost: bool,
}

impl Default for SpsiConfig {
    fn default() -> Self {
        SpsiConfig {
            b_internal: 16,
            b_bottom: 64,
            with_labels: false,
            with_leftmost: false,
        }
    }
}

impl SpsiConfig {
    pub fn with_arity(b_internal: usize, b_bottom: usize) -> Self {
        SpsiConfig {
            b_internal,
            b_bottom,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b_internal < 3 {
            return Err(Error::InvalidConfig(format!(
                "b_internal must be at least 3, got {}",
                self.b_internal
            )));
        }
        if !(3..=255).contains(&self.b_bottom) {
            return Err(Error::InvalidConfig(format!(
                "b_bottom must lie in 3..=255, got {}",
                self.b_bottom
            )));
        }
        Ok(())
    }
}

/// Stable reference to one leaf of one [`SpsiTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LeafHandle {
    tree: u32,
    idx: u32,
    gen: u32,
}

/// Reference to a node of an [`SpsiTree`], valid until the next mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeId(NodeRef);

impl NodeId {
    pub fn is_bottom(&self) -> bool {
        matches!(self.0, NodeRef::Bottom(_))
    }
}

#[derive(Debug, Clone, Copy)]
#[repr(C, packed(4))]
struct Leaf {
    weight: u64,
    record: u32,
}

#[derive(Debug, Clone)]
struct Record {
    pos: LeafRef,
    gen: u32,
    live: bool,
    cross: Option<LeafHandle>,
}

static NEXT_TREE_ID: AtomicU32 = AtomicU32::new(0);

fn leaf_weight(l: &Leaf) -> u64 {
    l.weight
}

struct RecordLinks<'a>(&'a mut Vec<Record>);

impl Links<Leaf> for RecordLinks<'_> {
    fn weight(&self, e: &Leaf) -> u64 {
        e.weight
    }
    fn moved(&mut self, e: &Leaf, to: LeafRef) {
        self.0[e.record as usize].pos = to;
    }
}

/// Searchable partial sums over positive weights.
#[derive(Debug, Clone)]
pub struct SpsiTree {
    id: u32,
    forest: Forest<Leaf>,
    records: Vec<Record>,
    free: Vec<u32>,
}

impl SpsiTree {
    pub fn new(cfg: SpsiConfig) -> Result<Self> {
        cfg.validate()?;
        let mut forest = Forest::new(cfg);
        forest.add_tree(0);
        Ok(SpsiTree {
            id: NEXT_TREE_ID.fetch_add(1, Ordering::Relaxed),
            forest,
            records: Vec::new(),
            free: Vec::new(),
        })
    }

    pub fn config(&self) -> &SpsiConfig {
        self.forest.config()
    }

    /// Sum of all weights.
    pub fn total(&self) -> u64 {
        self.forest.total(0)
    }

    pub fn leaf_count(&self) -> u64 {
        self.forest.leaf_count(0)
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_count() == 0
    }

    /// Number of node levels, bottom level included; 0 when empty.
    pub fn height(&self) -> u32 {
        self.forest.height(0)
    }

    fn resolve(&self, h: LeafHandle) -> Result<LeafRef> {
        if h.tree != self.id {
            return Err(Error::InvalidHandle);
        }
        match self.records.get(h.idx as usize) {
            Some(r) if r.live && r.gen == h.gen => Ok(r.pos),
            _ => Err(Error::InvalidHandle),
        }
    }

    fn handle_at(&self, pos: LeafRef) -> LeafHandle {
        let idx = { self.forest.entry(pos).record };
        LeafHandle {
            tree: self.id,
            idx,
            gen: self.records[idx as usize].gen,
        }
    }

    pub fn contains(&self, h: LeafHandle) -> bool {
        self.resolve(h).is_ok()
    }

    pub fn weight(&self, h: LeafHandle) -> Result<u64> {
        let pos = self.resolve(h)?;
        Ok(self.forest.entry(pos).weight)
    }

    /// Finds the leaf holding the `target`-th unit of weight: the minimal `k`
    /// with `Z[1] + ... + Z[k] >= target`, and the 1-based offset inside it.
    pub fn search(&self, target: u64) -> Result<(LeafHandle, u64)> {
        let total = self.total();
        if target == 0 || target > total {
            return Err(out_of_range("search target", target, 1, total));
        }
        let (pos, off) = self.forest.search(0, target, leaf_weight);
        Ok((self.handle_at(pos), off))
    }

    /// Sum of the weights strictly left of `h`.
    pub fn prefix_sum_before(&self, h: LeafHandle) -> Result<u64> {
        let pos = self.resolve(h)?;
        Ok(self.forest.prefix_before(pos, leaf_weight))
    }

    /// Adds `delta` to the weight of `h`. The result must stay positive.
    pub fn update(&mut self, h: LeafHandle, delta: i64) -> Result<()> {
        let pos = self.resolve(h)?;
        let w = { self.forest.entry(pos).weight };
        let new = w as i128 + delta as i128;
        if new < 1 || new > u64::MAX as i128 {
            return Err(Error::Precondition("updated weight must stay positive"));
        }
        if delta != 0 {
            self.forest.entry_mut(pos).weight = new as u64;
            self.forest.adjust_path(0, pos.node(), delta);
        }
        Ok(())
    }

    /// Inserts a leaf of `weight` right after `anchor`, or first when `None`.
    pub fn insert_after(&mut self, anchor: Option<LeafHandle>, weight: u64) -> Result<LeafHandle> {
        if weight == 0 {
            return Err(Error::Precondition("weights must be positive"));
        }
        let anchor = anchor.map(|h| self.resolve(h)).transpose()?;
        let idx = match self.free.pop() {
            Some(idx) => idx,
            None => {
                self.records.push(Record {
                    pos: LeafRef::from_raw(0),
                    gen: 0,
                    live: false,
                    cross: None,
                });
                (self.records.len() - 1) as u32
            }
        };
        let pos = self.forest.insert_after(
            0,
            anchor,
            Leaf {
                weight,
                record: idx,
            },
            weight,
            &mut RecordLinks(&mut self.records),
        );
        let rec = &mut self.records[idx as usize];
        rec.pos = pos;
        rec.live = true;
        rec.cross = None;
        Ok(LeafHandle {
            tree: self.id,
            idx,
            gen: rec.gen,
        })
    }

    /// Removes `h`, returning its weight. The handle becomes invalid.
    pub fn remove(&mut self, h: LeafHandle) -> Result<u64> {
        let pos = self.resolve(h)?;
        let leaf = self
            .forest
            .remove(0, pos, &mut RecordLinks(&mut self.records));
        let rec = &mut self.records[h.idx as usize];
        rec.live = false;
        rec.gen = rec.gen.wrapping_add(1);
        rec.cross = None;
        self.free.push(h.idx);
        Ok(leaf.weight)
    }

    pub fn first(&self) -> Option<LeafHandle> {
        self.forest.first_leaf(0).map(|p| self.handle_at(p))
    }

    pub fn last(&self) -> Option<LeafHandle> {
        self.forest.last_leaf(0).map(|p| self.handle_at(p))
    }

    pub fn next(&self, h: LeafHandle) -> Result<Option<LeafHandle>> {
        let pos = self.resolve(h)?;
        Ok(self.forest.next_leaf(pos).map(|p| self.handle_at(p)))
    }

    pub fn prev(&self, h: LeafHandle) -> Result<Option<LeafHandle>> {
        let pos = self.resolve(h)?;
        Ok(self.forest.prev_leaf(pos).map(|p| self.handle_at(p)))
    }

    /// Leaves in left-to-right order with their weights.
    pub fn iter(&self) -> impl Iterator<Item = (LeafHandle, u64)> + '_ {
        self.forest
            .bottoms_in_order(0)
            .into_iter()
            .flat_map(move |b| {
                (0..self.forest.entries(b).len()).map(move |j| {
                    let pos = LeafRef::new(b, j);
                    (self.handle_at(pos), { self.forest.entry(pos).weight })
                })
            })
    }

    pub fn root(&self) -> Option<NodeId> {
        self.forest.root(0).map(NodeId)
    }

    /// Children of an internal node, empty for a bottom node.
    pub fn children(&self, node: NodeId) -> Vec<NodeId> {
        match node.0 {
            NodeRef::Bottom(_) => Vec::new(),
            NodeRef::Internal(id) => (0..self.forest.internal_children(id).0.len())
                .map(|j| NodeId(self.forest.child_ref(id, j)))
                .collect(),
        }
    }

    /// Bottom node currently holding `h`.
    pub fn bottom_of(&self, h: LeafHandle) -> Result<NodeId> {
        Ok(NodeId(NodeRef::Bottom(self.resolve(h)?.node())))
    }

    /// Leftmost leaf under `node`, read from the stored shortcut.
    pub fn leftmost_leaf(&self, node: NodeId) -> Result<LeafHandle> {
        if !self.config().with_leftmost {
            return Err(Error::Unsupported("leftmost-leaf shortcuts"));
        }
        let b = match node.0 {
            NodeRef::Bottom(b) => b,
            NodeRef::Internal(id) => self.forest.stored_leftmost(id).unwrap(),
        };
        Ok(self.handle_at(LeafRef::new(b, 0)))
    }

    /// Order label of the bottom node holding `h`.
    pub fn bottom_label(&self, h: LeafHandle) -> Result<u64> {
        if !self.config().with_labels {
            return Err(Error::Unsupported("bottom node labels"));
        }
        let pos = self.resolve(h)?;
        Ok(self.forest.bottom_label(0, pos.node()))
    }

    /// Total label reassignments performed by the bottom-node labeling.
    pub fn relabel_count(&self) -> u64 {
        self.forest.labels(0).map_or(0, |l| l.relabel_count())
    }

    pub fn cross_link(&self, h: LeafHandle) -> Result<Option<LeafHandle>> {
        self.resolve(h)?;
        Ok(self.records[h.idx as usize].cross)
    }

    pub fn set_cross_link(&mut self, h: LeafHandle, other: Option<LeafHandle>) -> Result<()> {
        self.resolve(h)?;
        self.records[h.idx as usize].cross = other;
        Ok(())
    }

    pub fn footprint_bytes(&self) -> usize {
        self.forest.footprint_bytes()
            + self.records.capacity() * std::mem::size_of::<Record>()
            + self.free.capacity() * 4
    }

    /// Checks occupancy, depths, weight sums, shortcuts, labels and that
    /// every live record points at the leaf that points back at it.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.forest.audit(0, leaf_weight)?;
        let mut live = 0u64;
        for (idx, rec) in self.records.iter().enumerate() {
            if !rec.live {
                continue;
            }
            live += 1;
            if !self.forest.is_valid(rec.pos) || { self.forest.entry(rec.pos).record } != idx as u32
            {
                return Err(format!("record {idx} has a stale position"));
            }
        }
        if live != self.leaf_count() {
            return Err(format!(
                "{live} live records for {} leaves",
                self.leaf_count()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: [u64; 16] = [3, 1, 1, 2, 4, 2, 2, 1, 2, 1, 1, 2, 2, 1, 1, 3];

    fn build(weights: &[u64], cfg: SpsiConfig) -> (SpsiTree, Vec<LeafHandle>) {
        let mut t = SpsiTree::new(cfg).unwrap();
        let mut hs = Vec::new();
        for &w in weights {
            let h = t.insert_after(hs.last().copied(), w).unwrap();
            hs.push(h);
        }
        t.audit().unwrap();
        (t, hs)
    }

    fn small() -> SpsiConfig {
        SpsiConfig {
            b_internal: 3,
            b_bottom: 3,
            with_labels: true,
            with_leftmost: true,
        }
    }

    #[test]
    fn search_on_sample_sequence() {
        let (t, hs) = build(&SAMPLE, small());
        assert_eq!(t.total(), 29);
        assert_eq!(t.search(5).unwrap(), (hs[2], 1));
        assert_eq!(t.search(1).unwrap(), (hs[0], 1));
        assert_eq!(t.search(29).unwrap(), (hs[15], 3));
        assert!(matches!(t.search(30), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.search(0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn prefix_sums() {
        let (t, hs) = build(&SAMPLE, small());
        assert_eq!(t.prefix_sum_before(hs[0]).unwrap(), 0);
        assert_eq!(t.prefix_sum_before(hs[4]).unwrap(), 7);
        let (single, h) = build(&[9], small());
        assert_eq!(single.prefix_sum_before(h[0]).unwrap(), 0);
    }

    #[test]
    fn updates() {
        let (mut t, hs) = build(&SAMPLE, small());
        t.update(hs[3], 0).unwrap();
        assert_eq!(t.total(), 29);
        t.update(hs[0], 2).unwrap();
        assert_eq!(t.weight(hs[0]).unwrap(), 5);
        assert_eq!(t.total(), 31);
        assert_eq!(
            t.update(hs[1], -1),
            Err(Error::Precondition("updated weight must stay positive"))
        );
        t.audit().unwrap();
    }

    #[test]
    fn insert_and_remove() {
        let mut t = SpsiTree::new(small()).unwrap();
        let h = t.insert_after(None, 7).unwrap();
        assert_eq!(t.total(), 7);
        assert_eq!(t.remove(h).unwrap(), 7);
        assert!(t.is_empty());
        assert_eq!(t.total(), 0);
        assert_eq!(t.remove(h), Err(Error::InvalidHandle));
        t.audit().unwrap();

        let (mut t, hs) = build(&SAMPLE, small());
        t.insert_after(Some(hs[0]), 1).unwrap();
        let ws: Vec<u64> = t.iter().map(|(_, w)| w).collect();
        assert_eq!(&ws[..6], &[3, 1, 1, 1, 2, 4]);
        assert_eq!(t.total(), 30);
        t.audit().unwrap();

        let (mut t, hs) = build(&SAMPLE, small());
        t.remove(hs[2]).unwrap();
        let ws: Vec<u64> = t.iter().map(|(_, w)| w).collect();
        assert_eq!(&ws[..4], &[3, 1, 2, 4]);
        assert_eq!(t.total(), 28);
        t.audit().unwrap();
        assert!(matches!(t.weight(hs[2]), Err(Error::InvalidHandle)));
    }

    #[test]
    fn zero_weight_rejected() {
        let mut t = SpsiTree::new(small()).unwrap();
        assert!(t.insert_after(None, 0).is_err());
    }

    #[test]
    fn bottom_split_and_merge() {
        let cfg = SpsiConfig::with_arity(3, 4);
        let (mut t, hs) = build(&[1, 1, 1, 1, 1], cfg);
        assert_eq!(t.height(), 2);
        for h in &hs[..4] {
            t.remove(*h).unwrap();
            t.audit().unwrap();
        }
        assert_eq!(t.height(), 1);
        assert_eq!(t.search(1).unwrap().0, hs[4]);
    }

    #[test]
    fn leftmost_shortcuts() {
        let (t, hs) = build(&SAMPLE, small());
        let root = t.root().unwrap();
        assert_eq!(t.leftmost_leaf(root).unwrap(), hs[0]);
        for child in t.children(root) {
            let lm = t.leftmost_leaf(child).unwrap();
            let b = t.bottom_of(lm).unwrap();
            assert_eq!(t.leftmost_leaf(b).unwrap(), lm);
        }
        let (single, h) = build(&[4], small());
        assert_eq!(single.leftmost_leaf(single.root().unwrap()).unwrap(), h[0]);

        let (plain, _) = build(&SAMPLE, SpsiConfig::default());
        assert!(matches!(
            plain.leftmost_leaf(plain.root().unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            plain.bottom_label(plain.first().unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn labels_follow_leaf_order() {
        let (t, hs) = build(&SAMPLE, small());
        let labels: Vec<u64> = hs.iter().map(|&h| t.bottom_label(h).unwrap()).collect();
        for (j, w) in labels.windows(2).enumerate() {
            let same = t.bottom_of(hs[j]).unwrap() == t.bottom_of(hs[j + 1]).unwrap();
            if same {
                assert_eq!(w[0], w[1]);
            } else {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn cross_links_round_trip() {
        let (mut a, ha) = build(&[1, 2], small());
        let (b, hb) = build(&[5], small());
        a.set_cross_link(ha[1], Some(hb[0])).unwrap();
        assert_eq!(a.cross_link(ha[1]).unwrap(), Some(hb[0]));
        assert_eq!(a.cross_link(ha[0]).unwrap(), None);
        // handles are bound to their tree
        assert_eq!(a.weight(hb[0]), Err(Error::InvalidHandle));
        assert_eq!(b.weight(hb[0]).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(SpsiTree::new(SpsiConfig::with_arity(2, 8)).is_err());
        assert!(SpsiTree::new(SpsiConfig::with_arity(8, 2)).is_err());
        assert!(SpsiTree::new(SpsiConfig::with_arity(8, 256)).is_err());
    }
}
