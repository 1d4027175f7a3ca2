//! Arena-backed B+trees sharing one node store.
//!
//! A leaf is addressed by its position, a [`LeafRef`] packing the bottom node
//! id with the slot inside that node. Positions change when entries shift or
//! move between nodes; every such move is reported through a relocation
//! callback so the owner can patch whatever points at the entry. Bottom node
//! ids themselves are stable until the node is freed.
//!
//! Leaf weights are not necessarily stored in the entries: every operation
//! that needs them asks the owner, so a tree may borrow its weights from
//! another structure.

use super::SpsiConfig;
use crate::order_maintenance::{OrderItem, OrderList};

pub(crate) const NONE: u32 = u32::MAX;
const SLOT_BITS: u32 = 8;
const SLOT_MASK: u32 = (1 << SLOT_BITS) - 1;
// The all-ones id is kept free so `u32::MAX` never names a live leaf.
const MAX_BOTTOMS: usize = (1 << (32 - SLOT_BITS)) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct LeafRef(u32);

impl LeafRef {
    #[inline]
    pub(crate) fn new(node: u32, slot: usize) -> Self {
        debug_assert!(slot <= SLOT_MASK as usize);
        LeafRef((node << SLOT_BITS) | slot as u32)
    }
    #[inline]
    pub(crate) fn node(self) -> u32 {
        self.0 >> SLOT_BITS
    }
    #[inline]
    pub(crate) fn slot(self) -> usize {
        (self.0 & SLOT_MASK) as usize
    }
    #[inline]
    pub(crate) fn raw(self) -> u32 {
        self.0
    }
    #[inline]
    pub(crate) fn from_raw(raw: u32) -> Self {
        LeafRef(raw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NodeRef {
    Bottom(u32),
    Internal(u32),
}

#[derive(Debug, Clone)]
pub(crate) struct Bottom<E> {
    parent: u32,
    label: Option<OrderItem>,
    tag: u16,
    entries: Vec<E>,
}

#[derive(Debug, Clone)]
pub(crate) struct Internal {
    parent: u32,
    /// Bottom node holding the leftmost leaf of this subtree.
    leftmost: u32,
    /// 1 when the children are bottom nodes.
    level: u8,
    children: Vec<u32>,
    /// `wa[j]` = total weight of children `0..=j`.
    wa: Vec<u64>,
}

#[derive(Debug, Clone)]
pub(crate) struct TreeMeta {
    root: Option<NodeRef>,
    height: u32,
    leaf_count: u64,
    total: u64,
    tag: u16,
    labels: Option<Box<OrderList<u32>>>,
}

pub(crate) type TreeId = usize;

/// What a mutating tree operation needs from the owner of the entries.
pub(crate) trait Links<E> {
    /// Weight of a leaf.
    fn weight(&self, e: &E) -> u64;
    /// `e` now lives at `to`.
    fn moved(&mut self, e: &E, to: LeafRef);
}

#[derive(Debug, Clone)]
pub(crate) struct Forest<E> {
    cfg: SpsiConfig,
    bottoms: Vec<Bottom<E>>,
    internals: Vec<Internal>,
    free_bottoms: Vec<u32>,
    free_internals: Vec<u32>,
    trees: Vec<TreeMeta>,
}

impl<E: Copy> Forest<E> {
    pub(crate) fn new(cfg: SpsiConfig) -> Self {
        Forest {
            cfg,
            bottoms: Vec::new(),
            internals: Vec::new(),
            free_bottoms: Vec::new(),
            free_internals: Vec::new(),
            trees: Vec::new(),
        }
    }

    pub(crate) fn config(&self) -> &SpsiConfig {
        &self.cfg
    }

    pub(crate) fn add_tree(&mut self, tag: u16) -> TreeId {
        self.trees.push(TreeMeta {
            root: None,
            height: 0,
            leaf_count: 0,
            total: 0,
            tag,
            labels: self.cfg.with_labels.then(|| Box::new(OrderList::new())),
        });
        self.trees.len() - 1
    }

    #[inline]
    pub(crate) fn total(&self, t: TreeId) -> u64 {
        self.trees[t].total
    }

    #[inline]
    pub(crate) fn leaf_count(&self, t: TreeId) -> u64 {
        self.trees[t].leaf_count
    }

    pub(crate) fn height(&self, t: TreeId) -> u32 {
        self.trees[t].height
    }

    pub(crate) fn root(&self, t: TreeId) -> Option<NodeRef> {
        self.trees[t].root
    }

    pub(crate) fn labels(&self, t: TreeId) -> Option<&OrderList<u32>> {
        self.trees[t].labels.as_deref()
    }

    /// Whether `r` currently names a live entry.
    pub(crate) fn is_valid(&self, r: LeafRef) -> bool {
        self.bottoms
            .get(r.node() as usize)
            .is_some_and(|b| r.slot() < b.entries.len())
    }

    #[inline]
    pub(crate) fn entry(&self, r: LeafRef) -> &E {
        &self.bottoms[r.node() as usize].entries[r.slot()]
    }

    #[inline]
    pub(crate) fn entry_mut(&mut self, r: LeafRef) -> &mut E {
        &mut self.bottoms[r.node() as usize].entries[r.slot()]
    }

    #[inline]
    pub(crate) fn entries(&self, bottom: u32) -> &[E] {
        &self.bottoms[bottom as usize].entries
    }

    #[inline]
    pub(crate) fn bottom_tag(&self, bottom: u32) -> u16 {
        self.bottoms[bottom as usize].tag
    }

    /// Label of a bottom node of a labeled tree.
    #[inline]
    pub(crate) fn bottom_label(&self, t: TreeId, bottom: u32) -> u64 {
        let item = self.bottoms[bottom as usize].label.expect("labeled tree");
        self.trees[t]
            .labels
            .as_ref()
            .unwrap()
            .label_at(item.index())
    }

    pub(crate) fn internal_children(&self, id: u32) -> (&[u32], u8) {
        let n = &self.internals[id as usize];
        (&n.children, n.level)
    }

    #[inline]
    pub(crate) fn child_ref(&self, id: u32, j: usize) -> NodeRef {
        let n = &self.internals[id as usize];
        if n.level == 1 {
            NodeRef::Bottom(n.children[j])
        } else {
            NodeRef::Internal(n.children[j])
        }
    }

    /// Bottom node holding the leftmost leaf under `node`.
    #[inline]
    pub(crate) fn leftmost_bottom(&self, node: NodeRef) -> u32 {
        match node {
            NodeRef::Bottom(b) => b,
            NodeRef::Internal(i) if self.cfg.with_leftmost => self.internals[i as usize].leftmost,
            NodeRef::Internal(mut i) => loop {
                let n = &self.internals[i as usize];
                if n.level == 1 {
                    break n.children[0];
                }
                i = n.children[0];
            },
        }
    }

    /// Stored shortcut of an internal node, if shortcuts are maintained.
    pub(crate) fn stored_leftmost(&self, id: u32) -> Option<u32> {
        self.cfg
            .with_leftmost
            .then(|| self.internals[id as usize].leftmost)
    }

    fn parent_of(&self, node: NodeRef) -> u32 {
        match node {
            NodeRef::Bottom(b) => self.bottoms[b as usize].parent,
            NodeRef::Internal(i) => self.internals[i as usize].parent,
        }
    }

    fn set_parent(&mut self, node: NodeRef, parent: u32) {
        match node {
            NodeRef::Bottom(b) => self.bottoms[b as usize].parent = parent,
            NodeRef::Internal(i) => self.internals[i as usize].parent = parent,
        }
    }

    fn node_id(node: NodeRef) -> u32 {
        match node {
            NodeRef::Bottom(b) | NodeRef::Internal(b) => b,
        }
    }

    #[inline]
    fn child_index(&self, parent: u32, child: u32) -> usize {
        self.internals[parent as usize]
            .children
            .iter()
            .position(|&c| c == child)
            .expect("child registered in parent")
    }

    fn level_of(&self, node: NodeRef) -> u8 {
        match node {
            NodeRef::Bottom(_) => 0,
            NodeRef::Internal(i) => self.internals[i as usize].level,
        }
    }

    // ---- queries ----

    /// Leaf holding the `target`-th unit of weight (1-based) and the offset
    /// inside it. The caller guarantees `1 <= target <= total`.
    pub(crate) fn search(
        &self,
        t: TreeId,
        target: u64,
        weigh: impl Fn(&E) -> u64,
    ) -> (LeafRef, u64) {
        debug_assert!(target >= 1 && target <= self.trees[t].total);
        let mut node = self.trees[t].root.expect("nonempty tree");
        let mut rem = target;
        loop {
            match node {
                NodeRef::Internal(id) => {
                    let n = &self.internals[id as usize];
                    let j = n.wa.partition_point(|&w| w < rem);
                    if j > 0 {
                        rem -= n.wa[j - 1];
                    }
                    node = self.child_ref(id, j);
                }
                NodeRef::Bottom(b) => {
                    let entries = &self.bottoms[b as usize].entries;
                    for (j, e) in entries.iter().enumerate() {
                        let w = weigh(e);
                        if rem <= w {
                            return (LeafRef::new(b, j), rem);
                        }
                        rem -= w;
                    }
                    unreachable!("weight arrays inconsistent with bottom node");
                }
            }
        }
    }

    /// Sum of the weights of all leaves strictly left of `r`.
    pub(crate) fn prefix_before(&self, r: LeafRef, weigh: impl Fn(&E) -> u64) -> u64 {
        let b = r.node();
        let mut sum: u64 = self.bottoms[b as usize].entries[..r.slot()]
            .iter()
            .map(&weigh)
            .sum();
        let mut child = b;
        let mut parent = self.bottoms[b as usize].parent;
        while parent != NONE {
            let k = self.child_index(parent, child);
            let n = &self.internals[parent as usize];
            if k > 0 {
                sum += n.wa[k - 1];
            }
            child = parent;
            parent = n.parent;
        }
        sum
    }

    pub(crate) fn first_leaf(&self, t: TreeId) -> Option<LeafRef> {
        self.trees[t]
            .root
            .map(|r| LeafRef::new(self.leftmost_bottom(r), 0))
    }

    pub(crate) fn last_leaf(&self, t: TreeId) -> Option<LeafRef> {
        let mut node = self.trees[t].root?;
        loop {
            match node {
                NodeRef::Internal(id) => {
                    let last = self.internals[id as usize].children.len() - 1;
                    node = self.child_ref(id, last);
                }
                NodeRef::Bottom(b) => {
                    let len = self.bottoms[b as usize].entries.len();
                    return Some(LeafRef::new(b, len - 1));
                }
            }
        }
    }

    pub(crate) fn prev_leaf(&self, r: LeafRef) -> Option<LeafRef> {
        if r.slot() > 0 {
            return Some(LeafRef::new(r.node(), r.slot() - 1));
        }
        let mut child = r.node();
        let mut parent = self.bottoms[child as usize].parent;
        while parent != NONE {
            let k = self.child_index(parent, child);
            if k > 0 {
                let mut node = self.child_ref(parent, k - 1);
                loop {
                    match node {
                        NodeRef::Internal(id) => {
                            let last = self.internals[id as usize].children.len() - 1;
                            node = self.child_ref(id, last);
                        }
                        NodeRef::Bottom(b) => {
                            let len = self.bottoms[b as usize].entries.len();
                            return Some(LeafRef::new(b, len - 1));
                        }
                    }
                }
            }
            child = parent;
            parent = self.internals[parent as usize].parent;
        }
        None
    }

    pub(crate) fn next_leaf(&self, r: LeafRef) -> Option<LeafRef> {
        if r.slot() + 1 < self.bottoms[r.node() as usize].entries.len() {
            return Some(LeafRef::new(r.node(), r.slot() + 1));
        }
        let mut child = r.node();
        let mut parent = self.bottoms[child as usize].parent;
        while parent != NONE {
            let k = self.child_index(parent, child);
            if k + 1 < self.internals[parent as usize].children.len() {
                let b = self.leftmost_bottom(self.child_ref(parent, k + 1));
                return Some(LeafRef::new(b, 0));
            }
            child = parent;
            parent = self.internals[parent as usize].parent;
        }
        None
    }

    /// Bottom nodes of tree `t` in left-to-right order.
    pub(crate) fn bottoms_in_order(&self, t: TreeId) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack: Vec<NodeRef> = self.trees[t].root.into_iter().collect();
        while let Some(node) = stack.pop() {
            match node {
                NodeRef::Bottom(b) => out.push(b),
                NodeRef::Internal(id) => {
                    for j in (0..self.internals[id as usize].children.len()).rev() {
                        stack.push(self.child_ref(id, j));
                    }
                }
            }
        }
        out
    }

    // ---- weight updates ----

    /// Adds `delta` to the subtree sums on the path above bottom node `b`.
    pub(crate) fn adjust_path(&mut self, t: TreeId, b: u32, delta: i64) {
        let mut child = b;
        let mut parent = self.bottoms[b as usize].parent;
        while parent != NONE {
            let k = self.child_index(parent, child);
            let n = &mut self.internals[parent as usize];
            for w in &mut n.wa[k..] {
                *w = w.wrapping_add_signed(delta);
            }
            child = parent;
            parent = n.parent;
        }
        let tree = &mut self.trees[t];
        tree.total = tree.total.wrapping_add_signed(delta);
    }

    // ---- allocation ----

    fn alloc_bottom(&mut self, parent: u32, tag: u16, entries: Vec<E>) -> u32 {
        let node = Bottom {
            parent,
            label: None,
            tag,
            entries,
        };
        match self.free_bottoms.pop() {
            Some(id) => {
                self.bottoms[id as usize] = node;
                id
            }
            None => {
                assert!(
                    self.bottoms.len() < MAX_BOTTOMS,
                    "bottom node id space exhausted"
                );
                self.bottoms.push(node);
                (self.bottoms.len() - 1) as u32
            }
        }
    }

    fn free_bottom(&mut self, t: TreeId, id: u32) {
        let node = &mut self.bottoms[id as usize];
        node.entries = Vec::new();
        node.parent = NONE;
        if let Some(item) = node.label.take() {
            self.trees[t].labels.as_mut().unwrap().delete(item).unwrap();
        }
        self.free_bottoms.push(id);
    }

    fn alloc_internal(&mut self, node: Internal) -> u32 {
        match self.free_internals.pop() {
            Some(id) => {
                self.internals[id as usize] = node;
                id
            }
            None => {
                self.internals.push(node);
                (self.internals.len() - 1) as u32
            }
        }
    }

    fn free_internal(&mut self, id: u32) {
        let n = &mut self.internals[id as usize];
        n.children = Vec::new();
        n.wa = Vec::new();
        n.parent = NONE;
        self.free_internals.push(id);
    }

    // ---- insertion ----

    /// Inserts `entry` right after `anchor`, or at the front when `None`.
    /// Returns the final position of the new entry; every other entry that
    /// moved is reported through `links`.
    pub(crate) fn insert_after(
        &mut self,
        t: TreeId,
        anchor: Option<LeafRef>,
        entry: E,
        weight: u64,
        links: &mut impl Links<E>,
    ) -> LeafRef {
        match anchor {
            Some(a) => self.insert_at(t, a.node(), a.slot() + 1, entry, weight, links),
            None => match self.trees[t].root {
                None => self.insert_first(t, entry, weight),
                Some(root) => {
                    let b = self.leftmost_bottom(root);
                    self.insert_at(t, b, 0, entry, weight, links)
                }
            },
        }
    }

    /// Inserts `entry` so that it ends up immediately before `at`.
    pub(crate) fn insert_before(
        &mut self,
        t: TreeId,
        at: LeafRef,
        entry: E,
        weight: u64,
        links: &mut impl Links<E>,
    ) -> LeafRef {
        self.insert_at(t, at.node(), at.slot(), entry, weight, links)
    }

    fn insert_first(&mut self, t: TreeId, entry: E, weight: u64) -> LeafRef {
        let tag = self.trees[t].tag;
        let b = self.alloc_bottom(NONE, tag, vec![entry]);
        if let Some(labels) = self.trees[t].labels.as_mut() {
            self.bottoms[b as usize].label = Some(labels.insert_after(None, b).unwrap());
        }
        let tree = &mut self.trees[t];
        tree.root = Some(NodeRef::Bottom(b));
        tree.height = 1;
        tree.leaf_count = 1;
        tree.total = weight;
        LeafRef::new(b, 0)
    }

    fn insert_at(
        &mut self,
        t: TreeId,
        b: u32,
        slot: usize,
        entry: E,
        weight: u64,
        links: &mut impl Links<E>,
    ) -> LeafRef {
        let node = &mut self.bottoms[b as usize];
        if node.entries.len() == node.entries.capacity() {
            node.entries.reserve_exact(1);
        }
        node.entries.insert(slot, entry);
        for (j, e) in node.entries.iter().enumerate().skip(slot + 1) {
            links.moved(e, LeafRef::new(b, j));
        }
        let overflow = node.entries.len() > self.cfg.b_bottom;
        self.adjust_path(t, b, weight as i64);
        self.trees[t].leaf_count += 1;
        let pos = LeafRef::new(b, slot);
        if overflow {
            self.split_bottom(t, b, pos, links)
        } else {
            pos
        }
    }

    fn split_bottom(
        &mut self,
        t: TreeId,
        b: u32,
        new_pos: LeafRef,
        links: &mut impl Links<E>,
    ) -> LeafRef {
        let node = &mut self.bottoms[b as usize];
        let mid = node.entries.len() / 2;
        let right = node.entries.split_off(mid);
        node.entries.shrink_to_fit();
        let (parent, tag) = (node.parent, node.tag);
        let right_weight: u64 = right.iter().map(|e| links.weight(e)).sum();
        let nb = self.alloc_bottom(parent, tag, right);
        let mut pos = new_pos;
        for (j, e) in self.bottoms[nb as usize].entries.iter().enumerate() {
            if new_pos.slot() == mid + j {
                pos = LeafRef::new(nb, j);
            } else {
                links.moved(e, LeafRef::new(nb, j));
            }
        }
        if let Some(labels) = self.trees[t].labels.as_mut() {
            let left_label = self.bottoms[b as usize].label;
            self.bottoms[nb as usize].label = Some(labels.insert_after(left_label, nb).unwrap());
        }
        self.insert_child_after(t, NodeRef::Bottom(b), NodeRef::Bottom(nb), right_weight);
        pos
    }

    /// Registers `right` as the sibling immediately after `left`, growing the
    /// tree upward when `left` was the root.
    fn insert_child_after(&mut self, t: TreeId, left: NodeRef, right: NodeRef, right_weight: u64) {
        let parent = self.parent_of(left);
        if parent == NONE {
            let total = self.trees[t].total;
            let root = Internal {
                parent: NONE,
                leftmost: self.leftmost_bottom(left),
                level: self.level_of(left) + 1,
                children: vec![Self::node_id(left), Self::node_id(right)],
                wa: vec![total - right_weight, total],
            };
            let id = self.alloc_internal(root);
            self.set_parent(left, id);
            self.set_parent(right, id);
            let tree = &mut self.trees[t];
            tree.root = Some(NodeRef::Internal(id));
            tree.height += 1;
            return;
        }
        let k = self.child_index(parent, Self::node_id(left));
        let n = &mut self.internals[parent as usize];
        let old = n.wa[k];
        n.wa[k] = old - right_weight;
        n.children.insert(k + 1, Self::node_id(right));
        n.wa.insert(k + 1, old);
        let overflow = n.children.len() > self.cfg.b_internal;
        self.set_parent(right, parent);
        if overflow {
            self.split_internal(t, parent);
        }
    }

    fn split_internal(&mut self, t: TreeId, id: u32) {
        let n = &mut self.internals[id as usize];
        let mid = n.children.len() / 2;
        let children = n.children.split_off(mid);
        let mut wa = n.wa.split_off(mid);
        n.children.shrink_to_fit();
        n.wa.shrink_to_fit();
        let left_total = n.wa[mid - 1];
        for w in &mut wa {
            *w -= left_total;
        }
        let right_weight = *wa.last().unwrap();
        let (level, parent) = (n.level, n.parent);
        let first = if level == 1 {
            NodeRef::Bottom(children[0])
        } else {
            NodeRef::Internal(children[0])
        };
        let leftmost = if self.cfg.with_leftmost {
            self.leftmost_bottom(first)
        } else {
            NONE
        };
        let nid = self.alloc_internal(Internal {
            parent,
            leftmost,
            level,
            children,
            wa,
        });
        for j in 0..self.internals[nid as usize].children.len() {
            let c = self.child_ref(nid, j);
            self.set_parent(c, nid);
        }
        self.insert_child_after(
            t,
            NodeRef::Internal(id),
            NodeRef::Internal(nid),
            right_weight,
        );
    }

    // ---- removal ----

    /// Removes the entry at `r` and returns it.
    pub(crate) fn remove(&mut self, t: TreeId, r: LeafRef, links: &mut impl Links<E>) -> E {
        let b = r.node();
        let w = links.weight(self.entry(r));
        let node = &mut self.bottoms[b as usize];
        let e = node.entries.remove(r.slot());
        for (j, x) in node.entries.iter().enumerate().skip(r.slot()) {
            links.moved(x, LeafRef::new(b, j));
        }
        if node.entries.capacity() > node.entries.len() + node.entries.len() / 4 + 2 {
            node.entries.shrink_to_fit();
        }
        let (len, parent) = (node.entries.len(), node.parent);
        self.adjust_path(t, b, -(w as i64));
        self.trees[t].leaf_count -= 1;
        if parent == NONE {
            if len == 0 {
                self.free_bottom(t, b);
                let tree = &mut self.trees[t];
                tree.root = None;
                tree.height = 0;
            }
        } else if len < self.cfg.b_bottom.div_ceil(2) {
            self.rebalance_bottom(t, b, links);
        }
        e
    }

    fn rebalance_bottom(&mut self, t: TreeId, b: u32, links: &mut impl Links<E>) {
        let p = self.bottoms[b as usize].parent;
        let k = self.child_index(p, b);
        let (left, right) = if k > 0 {
            (self.internals[p as usize].children[k - 1], b)
        } else {
            (b, self.internals[p as usize].children[1])
        };
        let kl = if k > 0 { k - 1 } else { 0 };
        let (ll, rl) = (
            self.bottoms[left as usize].entries.len(),
            self.bottoms[right as usize].entries.len(),
        );
        if ll + rl <= self.cfg.b_bottom {
            let moved = std::mem::take(&mut self.bottoms[right as usize].entries);
            let dst = &mut self.bottoms[left as usize].entries;
            dst.reserve_exact(moved.len());
            dst.extend_from_slice(&moved);
            for (j, e) in moved.iter().enumerate() {
                links.moved(e, LeafRef::new(left, ll + j));
            }
            self.free_bottom(t, right);
            let n = &mut self.internals[p as usize];
            n.wa[kl] = n.wa[kl + 1];
            n.wa.remove(kl + 1);
            n.children.remove(kl + 1);
            self.fix_internal(t, p);
        } else if k > 0 {
            // borrow the last entry of the left sibling
            let e = self.bottoms[left as usize].entries.pop().unwrap();
            let w = links.weight(&e);
            let dst = &mut self.bottoms[b as usize].entries;
            dst.reserve_exact(1);
            dst.insert(0, e);
            for (j, x) in dst.iter().enumerate() {
                links.moved(x, LeafRef::new(b, j));
            }
            self.internals[p as usize].wa[k - 1] -= w;
        } else {
            // borrow the first entry of the right sibling
            let src = &mut self.bottoms[right as usize].entries;
            let e = src.remove(0);
            for (j, x) in src.iter().enumerate() {
                links.moved(x, LeafRef::new(right, j));
            }
            let w = links.weight(&e);
            let dst = &mut self.bottoms[b as usize].entries;
            dst.reserve_exact(1);
            dst.push(e);
            links.moved(&e, LeafRef::new(b, dst.len() - 1));
            self.internals[p as usize].wa[0] += w;
        }
    }

    fn fix_internal(&mut self, t: TreeId, id: u32) {
        let n = &self.internals[id as usize];
        if n.parent == NONE {
            if n.children.len() == 1 {
                let child = self.child_ref(id, 0);
                self.set_parent(child, NONE);
                self.free_internal(id);
                let tree = &mut self.trees[t];
                tree.root = Some(child);
                tree.height -= 1;
            }
        } else if n.children.len() < self.cfg.b_internal.div_ceil(2) {
            self.rebalance_internal(t, id);
        }
    }

    fn rebalance_internal(&mut self, t: TreeId, id: u32) {
        let gp = self.internals[id as usize].parent;
        let k = self.child_index(gp, id);
        let (left, right) = if k > 0 {
            (self.internals[gp as usize].children[k - 1], id)
        } else {
            (id, self.internals[gp as usize].children[1])
        };
        let kl = if k > 0 { k - 1 } else { 0 };
        let (ll, rl) = (
            self.internals[left as usize].children.len(),
            self.internals[right as usize].children.len(),
        );
        if ll + rl <= self.cfg.b_internal {
            let r = &mut self.internals[right as usize];
            let children = std::mem::take(&mut r.children);
            let wa = std::mem::take(&mut r.wa);
            let l = &mut self.internals[left as usize];
            let base = *l.wa.last().unwrap();
            l.children.extend_from_slice(&children);
            l.wa.extend(wa.iter().map(|w| w + base));
            for j in ll..ll + rl {
                let c = self.child_ref(left, j);
                self.set_parent(c, left);
            }
            self.free_internal(right);
            let g = &mut self.internals[gp as usize];
            g.wa[kl] = g.wa[kl + 1];
            g.wa.remove(kl + 1);
            g.children.remove(kl + 1);
            self.fix_internal(t, gp);
        } else if k > 0 {
            let l = &mut self.internals[left as usize];
            let c = l.children.pop().unwrap();
            let cum = l.wa.pop().unwrap();
            let w = cum - l.wa.last().copied().unwrap_or(0);
            let n = &mut self.internals[id as usize];
            n.children.insert(0, c);
            n.wa.insert(0, 0);
            for x in &mut n.wa {
                *x += w;
            }
            let child = self.child_ref(id, 0);
            self.set_parent(child, id);
            self.internals[gp as usize].wa[k - 1] -= w;
            self.refresh_leftmost(id);
        } else {
            let r = &mut self.internals[right as usize];
            let c = r.children.remove(0);
            let w = r.wa.remove(0);
            for x in &mut r.wa {
                *x -= w;
            }
            let n = &mut self.internals[id as usize];
            let base = *n.wa.last().unwrap();
            n.children.push(c);
            n.wa.push(base + w);
            let last = n.children.len() - 1;
            let child = self.child_ref(id, last);
            self.set_parent(child, id);
            self.internals[gp as usize].wa[0] += w;
            self.refresh_leftmost(right);
        }
    }

    /// Recomputes the leftmost shortcut of `id` and of every ancestor that
    /// reaches it through first children.
    fn refresh_leftmost(&mut self, mut id: u32) {
        if !self.cfg.with_leftmost {
            return;
        }
        loop {
            let first = self.child_ref(id, 0);
            let lm = self.leftmost_bottom(first);
            let n = &mut self.internals[id as usize];
            if n.leftmost == lm {
                return;
            }
            n.leftmost = lm;
            let p = n.parent;
            if p == NONE || self.internals[p as usize].children[0] != id {
                return;
            }
            id = p;
        }
    }

    // ---- accounting and auditing ----

    /// Approximate heap usage: arena slots plus live node buffers.
    pub(crate) fn footprint_bytes(&self) -> usize {
        let mut bytes = self.bottoms.capacity() * std::mem::size_of::<Bottom<E>>()
            + self.internals.capacity() * std::mem::size_of::<Internal>()
            + (self.free_bottoms.capacity() + self.free_internals.capacity()) * 4
            + self.trees.capacity() * std::mem::size_of::<TreeMeta>();
        bytes += self
            .bottoms
            .iter()
            .map(|b| b.entries.capacity() * std::mem::size_of::<E>())
            .sum::<usize>();
        bytes += self
            .internals
            .iter()
            .map(|n| n.children.capacity() * 4 + n.wa.capacity() * 8)
            .sum::<usize>();
        bytes += self
            .trees
            .iter()
            .filter_map(|t| t.labels.as_deref())
            .map(|l| std::mem::size_of_val(l) + l.heap_bytes())
            .sum::<usize>();
        bytes
    }

    /// Full structural check of tree `t`.
    pub(crate) fn audit(&self, t: TreeId, weigh: impl Fn(&E) -> u64) -> Result<(), String> {
        let tree = &self.trees[t];
        let Some(root) = tree.root else {
            if tree.leaf_count != 0 || tree.total != 0 || tree.height != 0 {
                return Err("empty tree with nonzero counters".into());
            }
            if tree.labels.as_ref().is_some_and(|l| !l.is_empty()) {
                return Err("empty tree with live labels".into());
            }
            return Ok(());
        };
        if self.parent_of(root) != NONE {
            return Err("root has a parent".into());
        }
        let mut ctx = AuditCtx {
            leaves: 0,
            bottoms: Vec::new(),
        };
        let (weight, depth) = self.audit_node(t, root, true, &weigh, &mut ctx)?;
        if depth != tree.height {
            return Err(format!("height {} but depth {depth}", tree.height));
        }
        if weight != tree.total {
            return Err(format!("total {} but leaves sum to {weight}", tree.total));
        }
        if ctx.leaves != tree.leaf_count {
            return Err(format!(
                "leaf_count {} but found {}",
                tree.leaf_count, ctx.leaves
            ));
        }
        if let Some(labels) = tree.labels.as_ref() {
            labels.audit()?;
            let chain: Vec<u32> = labels.iter().map(|(_, _, &p)| p).collect();
            if chain != ctx.bottoms {
                return Err("label chain order differs from bottom node order".into());
            }
            for &b in &ctx.bottoms {
                let item = self.bottoms[b as usize]
                    .label
                    .ok_or("bottom node without label")?;
                if labels.payload(item).map_err(|e| e.to_string())? != &b {
                    return Err(format!("label of bottom {b} points elsewhere"));
                }
            }
        }
        Ok(())
    }

    fn audit_node(
        &self,
        t: TreeId,
        node: NodeRef,
        is_root: bool,
        weigh: &impl Fn(&E) -> u64,
        ctx: &mut AuditCtx,
    ) -> Result<(u64, u32), String> {
        match node {
            NodeRef::Bottom(b) => {
                let n = &self.bottoms[b as usize];
                let len = n.entries.len();
                if len > self.cfg.b_bottom || len == 0 {
                    return Err(format!("bottom {b} holds {len} entries"));
                }
                if !is_root && len < self.cfg.b_bottom.div_ceil(2) {
                    return Err(format!("bottom {b} underfull with {len} entries"));
                }
                if n.tag != self.trees[t].tag {
                    return Err(format!(
                        "bottom {b} has tag {} expected {}",
                        n.tag, self.trees[t].tag
                    ));
                }
                if n.label.is_some() != self.cfg.with_labels {
                    return Err(format!("bottom {b} label presence mismatch"));
                }
                let mut sum = 0u64;
                for e in &n.entries {
                    let w = weigh(e);
                    if w == 0 {
                        return Err(format!("zero weight leaf in bottom {b}"));
                    }
                    sum += w;
                }
                ctx.leaves += len as u64;
                ctx.bottoms.push(b);
                Ok((sum, 1))
            }
            NodeRef::Internal(id) => {
                let n = &self.internals[id as usize];
                let len = n.children.len();
                if len > self.cfg.b_internal || n.wa.len() != len {
                    return Err(format!(
                        "internal {id} has {len} children, {} sums",
                        n.wa.len()
                    ));
                }
                if is_root && len < 2 {
                    return Err(format!("internal root {id} has {len} children"));
                }
                if !is_root && len < self.cfg.b_internal.div_ceil(2) {
                    return Err(format!("internal {id} underfull with {len} children"));
                }
                let mut cum = 0u64;
                let mut depth = None;
                for j in 0..len {
                    let c = self.child_ref(id, j);
                    if self.parent_of(c) != id {
                        return Err(format!("child {j} of internal {id} has wrong parent"));
                    }
                    if self.level_of(c) + 1 != n.level {
                        return Err(format!("level mismatch under internal {id}"));
                    }
                    let (w, d) = self.audit_node(t, c, false, weigh, ctx)?;
                    cum += w;
                    if n.wa[j] != cum {
                        return Err(format!("internal {id} wa[{j}]={} expected {cum}", n.wa[j]));
                    }
                    if *depth.get_or_insert(d) != d {
                        return Err(format!("unequal depths under internal {id}"));
                    }
                }
                if self.cfg.with_leftmost {
                    let mut probe = self.child_ref(id, 0);
                    let expect = loop {
                        match probe {
                            NodeRef::Bottom(b) => break b,
                            NodeRef::Internal(i) => probe = self.child_ref(i, 0),
                        }
                    };
                    if n.leftmost != expect {
                        return Err(format!("internal {id} leftmost shortcut stale"));
                    }
                }
                Ok((cum, depth.unwrap() + 1))
            }
        }
    }
}

struct AuditCtx {
    leaves: u64,
    bottoms: Vec<u32>,
}
