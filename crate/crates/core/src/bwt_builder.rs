//! Online construction of the run-length BWT of a reversed byte stream.
//!
//! After feeding `x1 x2 ... xk`, the builder holds the BWT of
//! `xk ... x2 x1 $`. Each byte costs one rank, one `occ_<c`, a replacement
//! of the sentinel and one insertion.
//!
//! ```
//! use online_rlbwt::bwt_builder::OnlineBwt;
//!
//! let mut b = OnlineBwt::new();
//! b.extend_all(b"ananab");
//! assert_eq!(b.to_string(), "annb$aa");
//! assert_eq!(b.invert(), b"ananab");
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::rle_string::{RleConfig, RleString};
use crate::symbol::{Run, Symbol};

#[derive(Debug, Clone)]
pub struct OnlineBwt {
    b: RleString,
    sentinel_pos: u64,
    fed: u64,
}

impl Default for OnlineBwt {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineBwt {
    pub fn new() -> Self {
        Self::with_config(RleConfig::default()).expect("default config is valid")
    }

    pub fn with_config(cfg: RleConfig) -> Result<Self> {
        let mut b = RleString::with_config(cfg)?;
        b.insert(1, Symbol::SENTINEL, 1)?;
        Ok(OnlineBwt {
            b,
            sentinel_pos: 1,
            fed: 0,
        })
    }

    /// Rebuilds a builder from the runs of a BWT, as written by
    /// [`OnlineBwt::runs`]. The runs must hold exactly one sentinel.
    pub fn from_runs(runs: &[Run], cfg: RleConfig) -> Result<Self> {
        let mut b = RleString::with_config(cfg)?;
        let mut sentinel_pos = None;
        for r in runs {
            if r.head.is_sentinel() {
                if r.exponent != 1 || sentinel_pos.is_some() {
                    return Err(Error::Precondition("BWT must hold exactly one sentinel"));
                }
                sentinel_pos = Some(b.len() + 1);
            }
            b.insert(b.len() + 1, r.head, r.exponent)?;
        }
        let sentinel_pos =
            sentinel_pos.ok_or(Error::Precondition("BWT must hold exactly one sentinel"))?;
        let fed = b.len() - 1;
        Ok(OnlineBwt {
            b,
            sentinel_pos,
            fed,
        })
    }

    /// Feeds one byte.
    pub fn extend(&mut self, byte: u8) {
        let s = Symbol::from_byte(byte);
        let p = self.sentinel_pos;
        let k = self.b.rank(s, p).expect("sentinel position in range");
        let next = k + self.b.occ_less_than(s) + 1;
        // the new sentinel goes in first so the sentinel count never hits 0
        self.b
            .insert(next, Symbol::SENTINEL, 1)
            .expect("position in range");
        let old = if next <= p { p + 1 } else { p };
        self.b
            .delete(old, 1)
            .expect("sentinel is a single character");
        self.b.insert(old, s, 1).expect("position in range");
        self.sentinel_pos = next;
        self.fed += 1;
    }

    pub fn extend_all(&mut self, bytes: &[u8]) {
        for &c in bytes {
            self.extend(c);
        }
    }

    /// Number of runs `r`, counting the sentinel's.
    pub fn num_runs(&self) -> u64 {
        self.b.num_runs()
    }

    /// Length of the BWT, one more than the bytes fed.
    pub fn len(&self) -> u64 {
        self.b.len()
    }

    /// Always false: the sentinel is present from the start.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn fed(&self) -> u64 {
        self.fed
    }

    pub fn sentinel_pos(&self) -> u64 {
        self.sentinel_pos
    }

    pub fn runs(&self) -> Vec<Run> {
        self.b.runs()
    }

    pub fn iter_runs(&self) -> impl Iterator<Item = Run> + '_ {
        self.b.iter_runs()
    }

    pub fn rle_string(&self) -> &RleString {
        &self.b
    }

    pub fn footprint_bytes(&self) -> usize {
        std::mem::size_of::<Self>() - std::mem::size_of::<RleString>() + self.b.footprint_bytes()
    }

    /// The bytes fed so far, recovered by walking the LF mapping.
    pub fn invert(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.fed as usize);
        let mut i = 1;
        for _ in 0..self.fed {
            let (c, k) = self.b.access_rank(i).expect("row in range");
            out.push(c.to_byte().expect("sentinel reached early"));
            i = self.b.occ_less_than(c) + k;
        }
        out
    }
}

impl fmt::Display for OnlineBwt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.b.iter_runs() {
            for _ in 0..r.exponent {
                write!(f, "{}", r.head)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bwt_of_reversed_naive, rle_naive};

    #[test]
    fn empty_builder() {
        let b = OnlineBwt::new();
        assert_eq!(b.num_runs(), 1);
        assert_eq!(b.len(), 1);
        assert_eq!(b.runs(), vec![Run::new(Symbol::SENTINEL, 1)]);
        assert!(b.invert().is_empty());
    }

    #[test]
    fn two_steps() {
        let mut b = OnlineBwt::new();
        b.extend(b'a');
        assert_eq!(b.to_string(), "a$");
        assert_eq!(b.sentinel_pos(), 2);
        b.extend(b'b');
        assert_eq!(b.to_string(), "ab$");
        assert_eq!(b.sentinel_pos(), 3);
        assert_eq!(b.invert(), b"ab");
    }

    #[test]
    fn banana() {
        let mut b = OnlineBwt::new();
        b.extend_all(b"ananab");
        assert_eq!(b.to_string(), "annb$aa");
        assert_eq!(b.invert(), b"ananab");
    }

    #[test]
    fn unary_stays_small() {
        let mut b = OnlineBwt::new();
        for _ in 0..300 {
            b.extend(7);
            assert!(b.num_runs() <= 3);
        }
    }

    #[test]
    fn matches_oracle_on_each_prefix() {
        let text = b"abracadabra\x00\x00\xffabra";
        let mut b = OnlineBwt::new();
        for k in 0..text.len() {
            b.extend(text[k]);
            let expect = bwt_of_reversed_naive(&text[..=k]);
            assert_eq!(b.rle_string().to_symbols(), expect);
            assert_eq!(b.num_runs(), rle_naive(&expect).len() as u64);
            assert_eq!(
                b.rle_string().access(b.sentinel_pos()).unwrap(),
                Symbol::SENTINEL
            );
        }
        b.rle_string().audit().unwrap();
        let again = OnlineBwt::from_runs(&b.runs(), RleConfig::default()).unwrap();
        assert_eq!(again.invert(), text);
        assert_eq!(again.sentinel_pos(), b.sentinel_pos());
    }
}
