//! Order maintenance by list labeling.
//!
//! Every item of a doubly linked list carries a 64-bit label and labels
//! strictly increase from head to tail, so comparing two items is a single
//! integer comparison. Insertion takes the midpoint of the neighbouring
//! labels; when the neighbours are adjacent integers, the smallest aligned
//! label range around the anchor whose density is below `(2/τ)^i / 2^i`
//! (τ = 1.5, `2^i` the range size) is relabeled evenly.

use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;
const LABEL_BITS: u32 = 64;
const FIRST_LABEL: u64 = 1 << 63;

/// Handle to an item of an [`OrderList`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderItem {
    idx: u32,
    gen: u32,
}

impl OrderItem {
    pub(crate) fn index(self) -> u32 {
        self.idx
    }
}

#[derive(Debug, Clone)]
struct Slot<T> {
    label: u64,
    prev: u32,
    next: u32,
    gen: u32,
    payload: Option<T>,
}

/// Doubly linked list with order labels.
#[derive(Debug, Clone)]
pub struct OrderList<T> {
    slots: Vec<Slot<T>>,
    free: Vec<u32>,
    head: u32,
    tail: u32,
    len: usize,
    relabeled: u64,
    /// `capacity[i]` = largest item count a range of size `2^i` may hold.
    capacity: Vec<u128>,
}

impl<T> Default for OrderList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> OrderList<T> {
    pub fn new() -> Self {
        let capacity = (0..=LABEL_BITS)
            .map(|i| (4.0f64 / 3.0).powi(i as i32).floor() as u128)
            .collect();
        OrderList {
            slots: Vec::new(),
            free: Vec::new(),
            head: NIL,
            tail: NIL,
            len: 0,
            relabeled: 0,
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Total number of label reassignments performed so far.
    pub fn relabel_count(&self) -> u64 {
        self.relabeled
    }

    fn slot(&self, item: OrderItem) -> Result<&Slot<T>> {
        match self.slots.get(item.idx as usize) {
            Some(s) if s.gen == item.gen && s.payload.is_some() => Ok(s),
            _ => Err(Error::InvalidHandle),
        }
    }

    pub fn contains(&self, item: OrderItem) -> bool {
        self.slot(item).is_ok()
    }

    pub fn label(&self, item: OrderItem) -> Result<u64> {
        self.slot(item).map(|s| s.label)
    }

    /// Label lookup by raw slot index, skipping validation.
    #[inline]
    pub(crate) fn label_at(&self, idx: u32) -> u64 {
        self.slots[idx as usize].label
    }

    pub fn payload(&self, item: OrderItem) -> Result<&T> {
        self.slot(item).map(|s| s.payload.as_ref().unwrap())
    }

    pub fn payload_mut(&mut self, item: OrderItem) -> Result<&mut T> {
        self.slot(item)?;
        Ok(self.slots[item.idx as usize].payload.as_mut().unwrap())
    }

    fn handle(&self, idx: u32) -> OrderItem {
        OrderItem {
            idx,
            gen: self.slots[idx as usize].gen,
        }
    }

    pub fn first(&self) -> Option<OrderItem> {
        (self.head != NIL).then(|| self.handle(self.head))
    }

    pub fn last(&self) -> Option<OrderItem> {
        (self.tail != NIL).then(|| self.handle(self.tail))
    }

    pub fn next(&self, item: OrderItem) -> Result<Option<OrderItem>> {
        let n = self.slot(item)?.next;
        Ok((n != NIL).then(|| self.handle(n)))
    }

    pub fn prev(&self, item: OrderItem) -> Result<Option<OrderItem>> {
        let p = self.slot(item)?.prev;
        Ok((p != NIL).then(|| self.handle(p)))
    }

    /// `true` iff `a` comes strictly before `b`.
    #[inline]
    pub fn precedes(&self, a: OrderItem, b: OrderItem) -> bool {
        debug_assert!(self.contains(a) && self.contains(b));
        self.slots[a.idx as usize].label < self.slots[b.idx as usize].label
    }

    pub fn iter(&self) -> impl Iterator<Item = (OrderItem, u64, &T)> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let s = &self.slots[cur as usize];
            let out = (self.handle(cur), s.label, s.payload.as_ref().unwrap());
            cur = s.next;
            Some(out)
        })
    }

    /// Inserts a new item right after `anchor`, or at the head when `anchor`
    /// is `None`.
    pub fn insert_after(&mut self, anchor: Option<OrderItem>, payload: T) -> Result<OrderItem> {
        let (prev, next) = match anchor {
            Some(a) => (a.idx, self.slot(a)?.next),
            None => (NIL, self.head),
        };
        let label = if self.len == 0 {
            FIRST_LABEL
        } else {
            match self.gap_label(prev, next) {
                Some(l) => l,
                None => {
                    let base = if prev != NIL { prev } else { next };
                    self.relabel_around(base);
                    self.gap_label(prev, next)
                        .expect("relabeling leaves a gap next to every item")
                }
            }
        };
        let idx = match self.free.pop() {
            Some(idx) => {
                let s = &mut self.slots[idx as usize];
                s.label = label;
                s.prev = prev;
                s.next = next;
                s.payload = Some(payload);
                idx
            }
            None => {
                self.slots.push(Slot {
                    label,
                    prev,
                    next,
                    gen: 0,
                    payload: Some(payload),
                });
                (self.slots.len() - 1) as u32
            }
        };
        if prev != NIL {
            self.slots[prev as usize].next = idx;
        } else {
            self.head = idx;
        }
        if next != NIL {
            self.slots[next as usize].prev = idx;
        } else {
            self.tail = idx;
        }
        self.len += 1;
        Ok(self.handle(idx))
    }

    /// Unlinks `item` and returns its payload. Labels of others are untouched.
    pub fn delete(&mut self, item: OrderItem) -> Result<T> {
        self.slot(item)?;
        let s = &mut self.slots[item.idx as usize];
        let (prev, next) = (s.prev, s.next);
        let payload = s.payload.take().unwrap();
        s.gen = s.gen.wrapping_add(1);
        if prev != NIL {
            self.slots[prev as usize].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.slots[next as usize].prev = prev;
        } else {
            self.tail = prev;
        }
        self.free.push(item.idx);
        self.len -= 1;
        Ok(payload)
    }

    fn gap_label(&self, prev: u32, next: u32) -> Option<u64> {
        let lo: i128 = if prev == NIL {
            -1
        } else {
            self.slots[prev as usize].label as i128
        };
        let hi: i128 = if next == NIL {
            1i128 << LABEL_BITS
        } else {
            self.slots[next as usize].label as i128
        };
        (hi - lo >= 2).then(|| (lo + (hi - lo) / 2) as u64)
    }

    /// Spreads the labels of the smallest sparse-enough enclosing range of
    /// `base` evenly over that range.
    fn relabel_around(&mut self, base: u32) {
        let base_label = self.slots[base as usize].label as u128;
        let (mut first, mut last) = (base, base);
        let mut count: u128 = 1;
        for i in 1..=LABEL_BITS {
            let size: u128 = 1 << i;
            let lo = base_label & !(size - 1);
            let hi = lo + size;
            loop {
                let p = self.slots[first as usize].prev;
                if p == NIL || (self.slots[p as usize].label as u128) < lo {
                    break;
                }
                first = p;
                count += 1;
            }
            loop {
                let n = self.slots[last as usize].next;
                if n == NIL || (self.slots[n as usize].label as u128) >= hi {
                    break;
                }
                last = n;
                count += 1;
            }
            if count < self.capacity[i as usize] && size / (count + 1) >= 2 {
                self.spread(first, count, lo, size);
                return;
            }
        }
        // Root range overflow: rebuild everything uniformly.
        let size: u128 = 1 << LABEL_BITS;
        let total = self.len as u128;
        assert!(size / (total + 1) >= 2, "order list label space exhausted");
        self.spread(self.head, total, 0, size);
    }

    fn spread(&mut self, first: u32, count: u128, lo: u128, size: u128) {
        let gap = size / (count + 1);
        let mut cur = first;
        for j in 0..count {
            let s = &mut self.slots[cur as usize];
            s.label = (lo + (j + 1) * gap) as u64;
            cur = s.next;
        }
        self.relabeled += count as u64;
    }

    /// Checks link consistency and strict label monotonicity.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut cur = self.head;
        let mut prev = NIL;
        let mut seen = 0usize;
        let mut last_label: Option<u64> = None;
        while cur != NIL {
            let s = &self.slots[cur as usize];
            if s.payload.is_none() {
                return Err(format!("dead slot {cur} linked into list"));
            }
            if s.prev != prev {
                return Err(format!("slot {cur} has prev {} expected {prev}", s.prev));
            }
            if let Some(l) = last_label {
                if s.label <= l {
                    return Err(format!("label {} after {l} is not increasing", s.label));
                }
            }
            last_label = Some(s.label);
            seen += 1;
            if seen > self.len {
                return Err("cycle in order list".into());
            }
            prev = cur;
            cur = s.next;
        }
        if prev != self.tail {
            return Err("tail does not match last linked slot".into());
        }
        if seen != self.len {
            return Err(format!("linked {seen} items, len says {}", self.len));
        }
        Ok(())
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        self.slots.capacity() * std::mem::size_of::<Slot<T>>()
            + self.free.capacity() * std::mem::size_of::<u32>()
            + self.capacity.capacity() * std::mem::size_of::<u128>()
    }
}
