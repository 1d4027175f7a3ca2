//! Brute-force reference implementations.
//!
//! Everything here works on flat sequences with linear scans or a plain
//! comparison sort, sharing no code with the tree structures it is used to
//! check.

use crate::error::{out_of_range, Result};
use crate::symbol::{Run, Symbol};

/// BWT of `s` followed by the sentinel, by sorting all suffixes.
pub fn bwt_naive(s: &[u8]) -> Vec<Symbol> {
    let text: Vec<Symbol> = s
        .iter()
        .map(|&b| Symbol::from_byte(b))
        .chain(std::iter::once(Symbol::SENTINEL))
        .collect();
    let mut sa: Vec<usize> = (0..text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa.iter()
        .map(|&i| {
            if i == 0 {
                text[text.len() - 1]
            } else {
                text[i - 1]
            }
        })
        .collect()
}

/// BWT that an online builder fed with `stream` should hold: the BWT of the
/// reversed stream plus sentinel.
pub fn bwt_of_reversed_naive(stream: &[u8]) -> Vec<Symbol> {
    let rev: Vec<u8> = stream.iter().rev().copied().collect();
    bwt_naive(&rev)
}

/// Recovers the original bytes from a BWT holding one sentinel, through an
/// explicit LF table. Returns `None` if `bwt` is not a valid BWT.
pub fn invert_naive(bwt: &[Symbol]) -> Option<Vec<u8>> {
    if bwt.iter().filter(|c| c.is_sentinel()).count() != 1 {
        return None;
    }
    let mut order: Vec<usize> = (0..bwt.len()).collect();
    order.sort_by_key(|&i| bwt[i]);
    // lf[i] is the row whose suffix is bwt[i] followed by row i's suffix
    let mut lf = vec![0usize; bwt.len()];
    for (row, &i) in order.iter().enumerate() {
        lf[i] = row;
    }
    let mut out = Vec::with_capacity(bwt.len() - 1);
    let mut row = bwt.iter().position(|c| c.is_sentinel())?;
    for _ in 1..bwt.len() {
        row = lf[row];
        out.push(bwt[row].to_byte()?);
    }
    out.reverse();
    Some(out)
}

/// Run-length encoding with maximal runs.
pub fn rle_naive(x: &[Symbol]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for &c in x {
        match runs.last_mut() {
            Some(r) if r.head == c => r.exponent += 1,
            _ => runs.push(Run::new(c, 1)),
        }
    }
    runs
}

/// `x[i]`, 1-based.
pub fn access_naive(x: &[Symbol], i: u64) -> Result<Symbol> {
    if i == 0 || i > x.len() as u64 {
        return Err(out_of_range("position", i, 1, x.len() as u64));
    }
    Ok(x[i as usize - 1])
}

/// Occurrences of `c` in `x[1..=i]`.
pub fn rank_naive(x: &[Symbol], c: Symbol, i: u64) -> Result<u64> {
    if i > x.len() as u64 {
        return Err(out_of_range("position", i, 0, x.len() as u64));
    }
    Ok(x[..i as usize].iter().filter(|&&d| d == c).count() as u64)
}

/// Position of the `j`-th `c` in `x`.
pub fn select_naive(x: &[Symbol], c: Symbol, j: u64) -> Result<u64> {
    let mut seen = 0;
    for (k, &d) in x.iter().enumerate() {
        if d == c {
            seen += 1;
            if seen == j {
                return Ok(k as u64 + 1);
            }
        }
    }
    Err(out_of_range("occurrence", j, 1, seen))
}

/// Number of symbols in `x` smaller than `c`.
pub fn occ_less_naive(x: &[Symbol], c: Symbol) -> u64 {
    x.iter().filter(|&&d| d < c).count() as u64
}

/// Splices `c^e` into `x` so it starts at 1-based position `i`.
pub fn insert_naive(x: &mut Vec<Symbol>, i: u64, c: Symbol, e: u64) {
    let at = i as usize - 1;
    x.splice(at..at, std::iter::repeat_n(c, e as usize));
}

/// Removes `x[i..i+e]`, 1-based.
pub fn delete_naive(x: &mut Vec<Symbol>, i: u64, e: u64) {
    let at = i as usize - 1;
    x.drain(at..at + e as usize);
}

/// A list with linear-time positional operations, mirroring an order list.
#[derive(Debug, Clone, Default)]
pub struct ReferenceOrderList<T> {
    items: Vec<T>,
}

impl<T: PartialEq> ReferenceOrderList<T> {
    pub fn new() -> Self {
        ReferenceOrderList { items: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, item: &T) -> Option<usize> {
        self.items.iter().position(|x| x == item)
    }

    /// Inserts `item` right after `anchor`, or at the front for `None`.
    pub fn insert_after(&mut self, anchor: Option<&T>, item: T) {
        let at = anchor.map_or(0, |a| self.position(a).expect("anchor present") + 1);
        self.items.insert(at, item);
    }

    pub fn remove(&mut self, item: &T) -> Option<T> {
        let at = self.position(item)?;
        Some(self.items.remove(at))
    }

    pub fn precedes(&self, a: &T, b: &T) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.items
    }
}

/// The Fibonacci word with `fib(1) = "b"`, `fib(2) = "a"` and
/// `fib(k) = fib(k-1) fib(k-2)`.
pub fn fibonacci_word(order: u32) -> Vec<u8> {
    let (mut prev, mut cur) = (b"b".to_vec(), b"a".to_vec());
    match order {
        0 => return Vec::new(),
        1 => return prev,
        _ => {}
    }
    for _ in 2..order {
        let next = [cur.as_slice(), prev.as_slice()].concat();
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(s: &[u8]) -> Vec<Symbol> {
        s.iter()
            .map(|&b| {
                if b == b'$' {
                    Symbol::SENTINEL
                } else {
                    Symbol::from_byte(b)
                }
            })
            .collect()
    }

    #[test]
    fn bwt_by_hand() {
        assert_eq!(bwt_naive(b"banana"), syms(b"annb$aa"));
        assert_eq!(bwt_naive(b""), syms(b"$"));
        assert_eq!(bwt_naive(b"aaa"), syms(b"aaa$"));
        assert_eq!(bwt_of_reversed_naive(b"ab"), syms(b"ab$"));
    }

    #[test]
    fn inversion_recovers_input() {
        for s in [
            &b"banana"[..],
            b"",
            b"a",
            b"abracadabra",
            b"\x00\x00\x01\xff",
        ] {
            assert_eq!(invert_naive(&bwt_naive(s)).unwrap(), s);
        }
        assert_eq!(invert_naive(&syms(b"ab")), None);
    }

    #[test]
    fn scans() {
        assert_eq!(rle_naive(&syms(b"aaaabbcccacc")).len(), 5);
        let x = syms(b"aaabacc");
        let a = Symbol::from_byte(b'a');
        assert_eq!(rank_naive(&x, a, 5).unwrap(), 4);
        assert_eq!(select_naive(&x, a, 4).unwrap(), 5);
        assert!(select_naive(&x, a, 5).is_err());
        assert!(access_naive(&x, 0).is_err());
        assert_eq!(occ_less_naive(&x, Symbol::from_byte(b'c')), 5);
    }

    #[test]
    fn reference_list() {
        let mut l = ReferenceOrderList::new();
        l.insert_after(None, 1);
        l.insert_after(Some(&1), 3);
        l.insert_after(Some(&1), 2);
        assert_eq!(l.as_slice(), &[1, 2, 3]);
        assert!(l.precedes(&1, &3));
        assert!(!l.precedes(&2, &2));
        l.remove(&2);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn fibonacci_words() {
        assert_eq!(fibonacci_word(1), b"b");
        assert_eq!(fibonacci_word(3), b"ab");
        assert_eq!(fibonacci_word(5), b"abaab");
        assert_eq!(fibonacci_word(25).len(), 75025);
    }
}
