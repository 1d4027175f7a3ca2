//! Dynamic run-length encoded string with rank, select, access and
//! `occ_<c`.
//!
//! The string is kept as its canonical run sequence in two kinds of B+tree:
//!
//! * one tree over the exponents of all runs in string order, whose bottom
//!   nodes carry order labels;
//! * one tree per symbol over the exponents of that symbol's runs, whose
//!   bottom nodes carry the symbol and whose internal nodes point at their
//!   leftmost leaf. These leaves store no weight of their own; it is read
//!   through the partner leaf.
//!
//! Every run has one leaf in each, joined by a pair of links. A query moves
//! back and forth between the trees through those links; `rank` finds the
//! last run of a symbol before a position by binary searching the symbol's
//! tree on the labels of the partner leaves.
//!
//! Positions are 1-based throughout.

use std::cell::Cell;

use crate::error::{out_of_range, Error, Result};
use crate::spsi::forest::{Forest, LeafRef, Links, NodeRef, TreeId, NONE};
use crate::spsi::{LeafHandle, SpsiConfig, SpsiTree};
use crate::symbol::{Run, Symbol, ALPHABET_SIZE};

const ALL: TreeId = 0;
const PRESENT_WORDS: usize = ALPHABET_SIZE.div_ceil(64);

#[derive(Debug, Clone, Copy)]
#[repr(C, packed(4))]
struct RunLeaf {
    weight: u64,
    /// Raw position of the partner leaf in the symbol forest.
    partner: u32,
}

/// Symbol-forest entries are the raw position of their partner run leaf.
type SymLeaf = u32;

struct AllLinks<'a>(&'a mut Forest<SymLeaf>);

impl Links<RunLeaf> for AllLinks<'_> {
    #[inline]
    fn weight(&self, e: &RunLeaf) -> u64 {
        e.weight
    }
    #[inline]
    fn moved(&mut self, e: &RunLeaf, to: LeafRef) {
        if e.partner != NONE {
            *self.0.entry_mut(LeafRef::from_raw(e.partner)) = to.raw();
        }
    }
}

struct SymLinks<'a>(&'a mut Forest<RunLeaf>);

impl Links<SymLeaf> for SymLinks<'_> {
    #[inline]
    fn weight(&self, p: &SymLeaf) -> u64 {
        self.0.entry(LeafRef::from_raw(*p)).weight
    }
    #[inline]
    fn moved(&mut self, p: &SymLeaf, to: LeafRef) {
        self.0.entry_mut(LeafRef::from_raw(*p)).partner = to.raw();
    }
}

#[inline]
fn run_weight(e: &RunLeaf) -> u64 {
    e.weight
}

/// Node arities of the trees behind an [`RleString`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RleConfig {
    pub b_internal: usize,
    pub b_bottom: usize,
}

impl Default for RleConfig {
    fn default() -> Self {
        RleConfig {
            b_internal: 16,
            b_bottom: 64,
        }
    }
}

/// A dynamic string over [`Symbol`]s stored as canonical runs.
#[derive(Debug, Clone)]
pub struct RleString {
    cfg: RleConfig,
    all: Forest<RunLeaf>,
    by_symbol: Forest<SymLeaf>,
    counts: SpsiTree,
    count_leaf: Vec<Option<LeafHandle>>,
    present: [u64; PRESENT_WORDS],
    len: u64,
    last_probes: Cell<u64>,
}

impl Default for RleString {
    fn default() -> Self {
        Self::new()
    }
}

impl RleString {
    pub fn new() -> Self {
        Self::with_config(RleConfig::default()).expect("default config is valid")
    }

    pub fn with_config(cfg: RleConfig) -> Result<Self> {
        let base = SpsiConfig::with_arity(cfg.b_internal, cfg.b_bottom);
        base.validate()?;
        let mut all = Forest::new(SpsiConfig {
            with_labels: true,
            ..base
        });
        all.add_tree(0);
        let mut by_symbol = Forest::new(SpsiConfig {
            with_leftmost: true,
            ..base
        });
        for code in 0..ALPHABET_SIZE {
            by_symbol.add_tree(code as u16);
        }
        Ok(RleString {
            cfg,
            all,
            by_symbol,
            counts: SpsiTree::new(base)?,
            count_leaf: vec![None; ALPHABET_SIZE],
            present: [0; PRESENT_WORDS],
            len: 0,
            last_probes: Cell::new(0),
        })
    }

    /// Builds a string from a run sequence. Adjacent runs with equal heads
    /// are merged.
    pub fn from_runs<'a>(runs: impl IntoIterator<Item = &'a Run>, cfg: RleConfig) -> Result<Self> {
        let mut s = Self::with_config(cfg)?;
        for r in runs {
            s.insert(s.len + 1, r.head, r.exponent)?;
        }
        Ok(s)
    }

    pub fn config(&self) -> RleConfig {
        self.cfg
    }

    /// Number of characters `n`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of runs `r`.
    pub fn num_runs(&self) -> u64 {
        self.all.leaf_count(ALL)
    }

    /// Total occurrences of `c`.
    pub fn occ(&self, c: Symbol) -> u64 {
        self.by_symbol.total(c.code() as usize)
    }

    // ---- link helpers ----

    #[inline]
    fn partner(&self, a: LeafRef) -> LeafRef {
        LeafRef::from_raw(self.all.entry(a).partner)
    }

    #[inline]
    fn partner_of_sym(&self, s: LeafRef) -> LeafRef {
        LeafRef::from_raw(*self.by_symbol.entry(s))
    }

    #[inline]
    fn head(&self, a: LeafRef) -> Symbol {
        Symbol::from_code_unchecked(self.by_symbol.bottom_tag(self.partner(a).node()))
    }

    #[inline]
    fn weight(&self, a: LeafRef) -> u64 {
        self.all.entry(a).weight
    }

    #[inline]
    fn sym_prefix_before(&self, s: LeafRef) -> u64 {
        self.by_symbol
            .prefix_before(s, |p| self.all.entry(LeafRef::from_raw(*p)).weight)
    }

    #[inline]
    fn locate(&self, i: u64) -> (LeafRef, u64) {
        self.all.search(ALL, i, run_weight)
    }

    /// Label of the bottom node (in the all-runs tree) of the partner of `s`.
    #[inline]
    fn partner_label(&self, s: LeafRef) -> u64 {
        self.all.bottom_label(ALL, self.partner_of_sym(s).node())
    }

    /// Rightmost `c`-run strictly before run `u`, as a symbol-tree leaf.
    fn pred_run(&self, c: Symbol, u: LeafRef) -> Option<LeafRef> {
        let tree = c.code() as usize;
        if self.by_symbol.leaf_count(tree) == 0 {
            return None;
        }
        for slot in (0..u.slot()).rev() {
            let p = self.partner(LeafRef::new(u.node(), slot));
            if self.by_symbol.bottom_tag(p.node()) == c.code() {
                return Some(p);
            }
        }
        let t = self.all.bottom_label(ALL, u.node());
        self.descend_by_label(tree, t)
    }

    /// Rightmost leaf of `tree` whose partner sits in a bottom node labeled
    /// below `t`.
    fn descend_by_label(&self, tree: TreeId, t: u64) -> Option<LeafRef> {
        let mut probes = 0u64;
        let mut node = self.by_symbol.root(tree)?;
        let found = loop {
            match node {
                NodeRef::Internal(id) => {
                    let (children, _) = self.by_symbol.internal_children(id);
                    let (mut lo, mut hi) = (0usize, children.len());
                    while lo < hi {
                        let mid = (lo + hi) / 2;
                        probes += 1;
                        let b = self
                            .by_symbol
                            .leftmost_bottom(self.by_symbol.child_ref(id, mid));
                        if self.partner_label(LeafRef::new(b, 0)) < t {
                            lo = mid + 1;
                        } else {
                            hi = mid;
                        }
                    }
                    if lo == 0 {
                        break None;
                    }
                    node = self.by_symbol.child_ref(id, lo - 1);
                }
                NodeRef::Bottom(b) => {
                    let (mut lo, mut hi) = (0usize, self.by_symbol.entries(b).len());
                    while lo < hi {
                        let mid = (lo + hi) / 2;
                        probes += 1;
                        if self.partner_label(LeafRef::new(b, mid)) < t {
                            lo = mid + 1;
                        } else {
                            hi = mid;
                        }
                    }
                    break (lo > 0).then(|| LeafRef::new(b, lo - 1));
                }
            }
        };
        self.last_probes.set(probes);
        found
    }

    /// Label comparisons made by the most recent label-guided search.
    pub fn last_label_probes(&self) -> u64 {
        self.last_probes.get()
    }

    /// Upper bound on label comparisons for one search in `c`'s tree.
    pub fn label_probe_bound(&self, c: Symbol) -> u64 {
        self.by_symbol.height(c.code() as usize) as u64 * self.cfg.b_internal as u64
    }

    // ---- queries ----

    fn check_position(&self, i: u64) -> Result<()> {
        if i == 0 || i > self.len {
            return Err(out_of_range("position", i, 1, self.len));
        }
        Ok(())
    }

    /// `X[i]`.
    pub fn access(&self, i: u64) -> Result<Symbol> {
        self.check_position(i)?;
        let (u, _) = self.locate(i);
        Ok(self.head(u))
    }

    /// `X[i]` together with the number of occurrences of that symbol in
    /// `X[1..=i]`, from a single descent.
    pub fn access_rank(&self, i: u64) -> Result<(Symbol, u64)> {
        self.check_position(i)?;
        let (u, off) = self.locate(i);
        let p = self.partner(u);
        let c = Symbol::from_code_unchecked(self.by_symbol.bottom_tag(p.node()));
        Ok((c, self.sym_prefix_before(p) + off))
    }

    /// Occurrences of `c` in `X[1..=i]`; `i` may be 0.
    pub fn rank(&self, c: Symbol, i: u64) -> Result<u64> {
        if i > self.len {
            return Err(out_of_range("position", i, 0, self.len));
        }
        if i == 0 || self.by_symbol.leaf_count(c.code() as usize) == 0 {
            return Ok(0);
        }
        let (u, off) = self.locate(i);
        let p = self.partner(u);
        if self.by_symbol.bottom_tag(p.node()) == c.code() {
            return Ok(self.sym_prefix_before(p) + off);
        }
        Ok(match self.pred_run(c, u) {
            None => 0,
            Some(v) => self.sym_prefix_before(v) + self.weight(self.partner_of_sym(v)),
        })
    }

    /// Position of the `j`-th occurrence of `c`.
    pub fn select(&self, c: Symbol, j: u64) -> Result<u64> {
        let tree = c.code() as usize;
        let total = self.by_symbol.total(tree);
        if j == 0 || j > total {
            return Err(out_of_range("occurrence", j, 1, total));
        }
        let (v, off) = self
            .by_symbol
            .search(tree, j, |p| self.all.entry(LeafRef::from_raw(*p)).weight);
        Ok(self.all.prefix_before(self.partner_of_sym(v), run_weight) + off)
    }

    /// Number of symbols in the string smaller than `c`.
    pub fn occ_less_than(&self, c: Symbol) -> u64 {
        match self.next_present(c.code() as usize) {
            Some(d) => self
                .counts
                .prefix_sum_before(self.count_leaf[d].unwrap())
                .expect("count leaf is live"),
            None => self.counts.total(),
        }
    }

    fn next_present(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= PRESENT_WORDS {
            return None;
        }
        let mut bits = self.present[w] & (!0u64 << (from % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
            w += 1;
            if w == PRESENT_WORDS {
                return None;
            }
            bits = self.present[w];
        }
    }

    fn prev_present(&self, below: usize) -> Option<usize> {
        if below == 0 {
            return None;
        }
        let last = below - 1;
        let mut w = last / 64;
        let mut bits = self.present[w] & (!0u64 >> (63 - last % 64));
        loop {
            if bits != 0 {
                return Some(w * 64 + 63 - bits.leading_zeros() as usize);
            }
            if w == 0 {
                return None;
            }
            w -= 1;
            bits = self.present[w];
        }
    }

    fn count_add(&mut self, c: Symbol, delta: i64) {
        let code = c.code() as usize;
        match self.count_leaf[code] {
            Some(h) => {
                let w = self.counts.weight(h).unwrap();
                if w as i64 + delta == 0 {
                    self.counts.remove(h).unwrap();
                    self.count_leaf[code] = None;
                    self.present[code / 64] &= !(1 << (code % 64));
                } else {
                    self.counts.update(h, delta).unwrap();
                }
            }
            None => {
                debug_assert!(delta > 0);
                let anchor = self.prev_present(code).map(|d| self.count_leaf[d].unwrap());
                let h = self.counts.insert_after(anchor, delta as u64).unwrap();
                self.count_leaf[code] = Some(h);
                self.present[code / 64] |= 1 << (code % 64);
            }
        }
    }

    // ---- updates ----

    /// Adds `delta` to the exponent of run `a` in both trees.
    fn grow(&mut self, a: LeafRef, delta: i64) {
        let e = self.all.entry_mut(a);
        e.weight = e.weight.wrapping_add_signed(delta);
        self.all.adjust_path(ALL, a.node(), delta);
        let p = self.partner(a);
        let tree = self.by_symbol.bottom_tag(p.node()) as usize;
        self.by_symbol.adjust_path(tree, p.node(), delta);
    }

    /// Links a fresh run leaf `a` (already in the all-runs tree) into `c`'s
    /// tree after `sym_anchor`.
    fn link_new_run(
        &mut self,
        a: LeafRef,
        sym_anchor: Option<LeafRef>,
        c: Symbol,
        e: u64,
    ) -> LeafRef {
        let s = self.by_symbol.insert_after(
            c.code() as usize,
            sym_anchor,
            a.raw(),
            e,
            &mut SymLinks(&mut self.all),
        );
        self.all.entry_mut(a).partner = s.raw();
        a
    }

    fn new_run_leaf(e: u64) -> RunLeaf {
        RunLeaf {
            weight: e,
            partner: NONE,
        }
    }

    fn insert_run_after(
        &mut self,
        anchor: Option<LeafRef>,
        sym_anchor: Option<LeafRef>,
        c: Symbol,
        e: u64,
    ) -> LeafRef {
        let a = self.all.insert_after(
            ALL,
            anchor,
            Self::new_run_leaf(e),
            e,
            &mut AllLinks(&mut self.by_symbol),
        );
        self.link_new_run(a, sym_anchor, c, e)
    }

    fn insert_run_before(
        &mut self,
        at: LeafRef,
        sym_anchor: Option<LeafRef>,
        c: Symbol,
        e: u64,
    ) -> LeafRef {
        let a = self.all.insert_before(
            ALL,
            at,
            Self::new_run_leaf(e),
            e,
            &mut AllLinks(&mut self.by_symbol),
        );
        self.link_new_run(a, sym_anchor, c, e)
    }

    fn remove_run(&mut self, a: LeafRef) {
        let p = self.partner(a);
        let tree = self.by_symbol.bottom_tag(p.node()) as usize;
        self.by_symbol.remove(tree, p, &mut SymLinks(&mut self.all));
        self.all.remove(ALL, a, &mut AllLinks(&mut self.by_symbol));
    }

    /// Inserts `c^e` so that it starts at position `i` (`1 <= i <= n + 1`).
    pub fn insert(&mut self, i: u64, c: Symbol, e: u64) -> Result<()> {
        if e == 0 {
            return Err(Error::Precondition("inserted exponent must be positive"));
        }
        if i == 0 || i > self.len + 1 {
            return Err(out_of_range("insert position", i, 1, self.len + 1));
        }
        if self.len == 0 {
            self.insert_run_after(None, None, c, e);
        } else if i == self.len + 1 {
            let last = self.all.last_leaf(ALL).unwrap();
            if self.head(last) == c {
                self.grow(last, e as i64);
            } else {
                let s = self.pred_run(c, last);
                self.insert_run_after(Some(last), s, c, e);
            }
        } else {
            let (u, off) = self.locate(i);
            let d = self.head(u);
            if d == c {
                self.grow(u, e as i64);
            } else if off > 1 {
                self.split_and_insert(u, off, d, c, e);
            } else {
                let prev = self.all.prev_leaf(u);
                match prev {
                    Some(p) if self.head(p) == c => self.grow(p, e as i64),
                    _ => {
                        let s = self.pred_run(c, u);
                        self.insert_run_before(u, s, c, e);
                    }
                }
            }
        }
        self.count_add(c, e as i64);
        self.len += e;
        Ok(())
    }

    /// Splits run `u` (head `d`) before its `off`-th character and puts
    /// `c^e` in between.
    fn split_and_insert(&mut self, u: LeafRef, off: u64, d: Symbol, c: Symbol, e: u64) {
        let s_anchor = self.pred_run(c, u);
        let w = self.weight(u);
        let right = w - (off - 1);
        let pu = self.partner(u);
        self.grow(u, -(right as i64));
        let ar = self.all.insert_after(
            ALL,
            Some(u),
            Self::new_run_leaf(right),
            right,
            &mut AllLinks(&mut self.by_symbol),
        );
        self.link_new_run(ar, Some(pu), d, right);
        self.insert_run_before(ar, s_anchor, c, e);
    }

    /// Removes `X[i..i+e]`, which must consist of a single symbol.
    pub fn delete(&mut self, i: u64, e: u64) -> Result<()> {
        if e == 0 {
            return Err(Error::Precondition("deleted length must be positive"));
        }
        if i == 0 || i.saturating_add(e - 1) > self.len {
            return Err(out_of_range(
                "delete position",
                i,
                1,
                self.len.saturating_sub(e - 1),
            ));
        }
        let (u, off) = self.locate(i);
        let w = self.weight(u);
        if off - 1 + e > w {
            return Err(Error::Precondition("deleted span must lie within one run"));
        }
        let c = self.head(u);
        if e < w {
            self.grow(u, -(e as i64));
        } else {
            let merge = match (self.all.prev_leaf(u), self.all.next_leaf(u)) {
                (Some(p), Some(q)) if self.head(p) == self.head(q) => {
                    Some((self.partner(p), self.partner(q)))
                }
                _ => None,
            };
            self.remove_run(u);
            if let Some((sp, sq)) = merge {
                // both live in a tree other than c's, so their positions held
                let (ap, aq) = (self.partner_of_sym(sp), self.partner_of_sym(sq));
                let wq = self.weight(aq);
                self.grow(ap, wq as i64);
                self.remove_run(aq);
            }
        }
        self.count_add(c, -(e as i64));
        self.len -= e;
        Ok(())
    }

    // ---- inspection ----

    /// Runs in string order.
    pub fn iter_runs(&self) -> impl Iterator<Item = Run> + '_ {
        self.all
            .bottoms_in_order(ALL)
            .into_iter()
            .flat_map(move |b| {
                (0..self.all.entries(b).len()).map(move |j| {
                    let a = LeafRef::new(b, j);
                    Run::new(self.head(a), self.weight(a))
                })
            })
    }

    pub fn runs(&self) -> Vec<Run> {
        self.iter_runs().collect()
    }

    /// Expanded string, one symbol per position.
    pub fn to_symbols(&self) -> Vec<Symbol> {
        crate::symbol::expand_runs(&self.runs())
    }

    /// Approximate heap bytes held by the structure.
    pub fn footprint_bytes(&self) -> usize {
        std::mem::size_of::<Self>()
            + self.all.footprint_bytes()
            + self.by_symbol.footprint_bytes()
            + self.counts.footprint_bytes()
            + self.count_leaf.capacity() * std::mem::size_of::<Option<LeafHandle>>()
    }

    /// Checks every tree, the link bijection, canonicality and the symbol
    /// counts.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.all.audit(ALL, run_weight)?;
        let symw = |p: &SymLeaf| {
            let a = LeafRef::from_raw(*p);
            if self.all.is_valid(a) {
                self.all.entry(a).weight
            } else {
                0
            }
        };
        let mut sym_leaves = 0u64;
        for code in 0..ALPHABET_SIZE {
            self.by_symbol
                .audit(code, symw)
                .map_err(|e| format!("symbol {code}: {e}"))?;
            sym_leaves += self.by_symbol.leaf_count(code);
        }
        if sym_leaves != self.num_runs() {
            return Err(format!(
                "{sym_leaves} symbol leaves for {} runs",
                self.num_runs()
            ));
        }
        if self.all.total(ALL) != self.len {
            return Err(format!(
                "run total {} but len {}",
                self.all.total(ALL),
                self.len
            ));
        }
        let mut per_symbol: Vec<Vec<u32>> = vec![Vec::new(); ALPHABET_SIZE];
        let mut prev_head: Option<Symbol> = None;
        for b in self.all.bottoms_in_order(ALL) {
            for j in 0..self.all.entries(b).len() {
                let a = LeafRef::new(b, j);
                let p = self.partner(a);
                if !self.by_symbol.is_valid(p) || self.partner_of_sym(p) != a {
                    return Err(format!("run leaf {a:?} has a broken partner link"));
                }
                let h = self.head(a);
                if prev_head == Some(h) {
                    return Err(format!("adjacent runs share head {h}"));
                }
                prev_head = Some(h);
                per_symbol[h.code() as usize].push(p.raw());
            }
        }
        for (code, expect) in per_symbol.iter().enumerate() {
            let got: Vec<u32> = self
                .by_symbol
                .bottoms_in_order(code)
                .into_iter()
                .flat_map(|b| {
                    (0..self.by_symbol.entries(b).len()).map(move |j| LeafRef::new(b, j).raw())
                })
                .collect();
            if &got != expect {
                return Err(format!(
                    "symbol {code}: leaf order differs from string order"
                ));
            }
        }
        self.counts.audit()?;
        for code in 0..ALPHABET_SIZE {
            let bit = self.present[code / 64] >> (code % 64) & 1 == 1;
            let occ = self.by_symbol.total(code);
            match self.count_leaf[code] {
                Some(h) => {
                    if !bit || self.counts.weight(h).ok() != Some(occ) {
                        return Err(format!(
                            "count entry for symbol {code} disagrees with {occ}"
                        ));
                    }
                }
                None => {
                    if bit || occ != 0 {
                        return Err(format!(
                            "symbol {code} occurs {occ} times but has no count entry"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(b: u8) -> Symbol {
        Symbol::from_byte(b)
    }

    /// The string a³b¹a¹c²a⁴b²a²c¹a²b¹c¹a²c²a¹b¹a³.
    fn sample_runs() -> Vec<Run> {
        let heads = b"abacabacabcacaba";
        let exps = [3, 1, 1, 2, 4, 2, 2, 1, 2, 1, 1, 2, 2, 1, 1, 3];
        heads
            .iter()
            .zip(exps)
            .map(|(&h, e)| Run::new(sym(h), e))
            .collect()
    }

    fn sample(cfg: RleConfig) -> RleString {
        let s = RleString::from_runs(&sample_runs(), cfg).unwrap();
        s.audit().unwrap();
        s
    }

    fn small() -> RleConfig {
        RleConfig {
            b_internal: 3,
            b_bottom: 3,
        }
    }

    fn exps(s: &RleString) -> Vec<u64> {
        s.iter_runs().map(|r| r.exponent).collect()
    }

    #[test]
    fn sample_shape() {
        let s = sample(small());
        assert_eq!(s.len(), 29);
        assert_eq!(s.num_runs(), 16);
        assert_eq!(
            exps(&s),
            vec![3, 1, 1, 2, 4, 2, 2, 1, 2, 1, 1, 2, 2, 1, 1, 3]
        );
    }

    #[test]
    fn access_examples() {
        let s = sample(small());
        assert_eq!(s.access(1).unwrap(), sym(b'a'));
        assert_eq!(s.access(4).unwrap(), sym(b'b'));
        assert_eq!(s.access(29).unwrap(), sym(b'a'));
        assert!(s.access(0).is_err());
        assert!(s.access(30).is_err());
    }

    #[test]
    fn rank_examples() {
        let s = sample(small());
        assert_eq!(s.rank(sym(b'a'), 5).unwrap(), 4);
        assert_eq!(s.rank(sym(b'c'), 0).unwrap(), 0);
        assert_eq!(s.rank(sym(b'b'), 29).unwrap(), 5);
        assert_eq!(s.rank(sym(b'z'), 17).unwrap(), 0);
        assert!(s.rank(sym(b'a'), 30).is_err());
    }

    #[test]
    fn select_examples() {
        let s = sample(small());
        assert_eq!(s.select(sym(b'a'), 5).unwrap(), 8);
        assert_eq!(s.select(sym(b'a'), 1).unwrap(), 1);
        let c = sym(b'c');
        let occ = s.occ(c);
        assert_eq!(s.rank(c, s.select(c, occ).unwrap()).unwrap(), occ);
        assert!(s.select(c, occ + 1).is_err());
        assert!(s.select(sym(b'z'), 1).is_err());
    }

    #[test]
    fn occ_less_than_examples() {
        let mut s = RleString::new();
        for (i, &b) in b"aaaabbcccacc".iter().enumerate() {
            s.insert(i as u64 + 1, sym(b), 1).unwrap();
        }
        assert_eq!(s.occ_less_than(Symbol::SENTINEL), 0);
        assert_eq!(s.occ_less_than(sym(b'b')), 5);
        let c = sym(b'c');
        let greater = s.len() - s.occ_less_than(sym(b'd'));
        assert_eq!(s.occ_less_than(c) + s.occ(c) + greater, s.len());
        let runs: Vec<(u8, u64)> = s
            .iter_runs()
            .map(|r| (r.head.to_byte().unwrap(), r.exponent))
            .collect();
        assert_eq!(
            runs,
            vec![(b'a', 4), (b'b', 2), (b'c', 3), (b'a', 1), (b'c', 2)]
        );
    }

    #[test]
    fn insert_examples() {
        let mut s = sample(small());
        s.insert(1, sym(b'a'), 2).unwrap();
        assert_eq!(s.num_runs(), 16);
        assert_eq!(s.len(), 31);
        assert_eq!(exps(&s)[0], 5);
        s.audit().unwrap();

        let mut s = sample(small());
        s.insert(2, sym(b'b'), 1).unwrap();
        assert_eq!(s.num_runs(), 18);
        assert_eq!(&exps(&s)[..4], &[1, 1, 2, 1]);
        s.audit().unwrap();

        let mut s = RleString::with_config(small()).unwrap();
        s.insert(1, sym(b'c'), 4).unwrap();
        assert_eq!(s.runs(), vec![Run::new(sym(b'c'), 4)]);
        assert!(s.insert(1, sym(b'c'), 0).is_err());
        assert!(s.insert(6, sym(b'c'), 1).is_err());
    }

    #[test]
    fn delete_examples() {
        let mut s = sample(small());
        s.delete(1, 3).unwrap();
        assert_eq!(s.num_runs(), 15);
        assert_eq!(s.access(1).unwrap(), sym(b'b'));
        assert_eq!(&exps(&s)[..3], &[1, 1, 2]);
        s.audit().unwrap();

        // removing the b between two a-runs merges them
        let mut s = RleString::with_config(small()).unwrap();
        for r in [(b'a', 5), (b'b', 1), (b'a', 3)] {
            s.insert(s.len() + 1, sym(r.0), r.1).unwrap();
        }
        s.delete(6, 1).unwrap();
        assert_eq!(s.runs(), vec![Run::new(sym(b'a'), 8)]);
        s.audit().unwrap();

        let mut s = sample(small());
        assert_eq!(
            s.delete(3, 2),
            Err(Error::Precondition("deleted span must lie within one run"))
        );
        assert!(s.delete(29, 2).is_err());
        let before = s.runs();
        s.delete(8, 4).unwrap();
        s.insert(8, sym(b'a'), 4).unwrap();
        assert_eq!(s.runs(), before);
        s.audit().unwrap();
    }

    #[test]
    fn label_search_stays_bounded() {
        let mut s = RleString::with_config(small()).unwrap();
        let text: Vec<u8> = (0..600u32)
            .map(|i| b"abcab"[(i * 7 % 5) as usize])
            .collect();
        for (i, &b) in text.iter().enumerate() {
            s.insert(i as u64 + 1, sym(b), 1).unwrap();
        }
        s.audit().unwrap();
        for i in 0..=s.len() {
            for c in *b"abc" {
                s.last_probes.set(0);
                s.rank(sym(c), i).unwrap();
                assert!(s.last_label_probes() <= s.label_probe_bound(sym(c)));
            }
        }
    }
}
