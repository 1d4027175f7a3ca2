use std::fmt;

/// Number of distinct symbols: the sentinel plus 256 byte values.
pub const ALPHABET_SIZE: usize = 257;

/// A character of a BWT string. Code 0 is the sentinel `$`, which sorts
/// before everything; codes 1..=256 are input bytes shifted up by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u16);

impl Symbol {
    pub const SENTINEL: Symbol = Symbol(0);

    #[inline]
    pub const fn from_byte(b: u8) -> Self {
        Symbol(b as u16 + 1)
    }

    /// Builds a symbol from its numeric code, `None` above 256.
    pub const fn from_code(code: u16) -> Option<Self> {
        if code as usize >= ALPHABET_SIZE {
            None
        } else {
            Some(Symbol(code))
        }
    }

    #[inline]
    pub(crate) const fn from_code_unchecked(code: u16) -> Self {
        Symbol(code)
    }

    #[inline]
    pub const fn code(self) -> u16 {
        self.0
    }

    #[inline]
    pub const fn is_sentinel(self) -> bool {
        self.0 == 0
    }

    /// The input byte, `None` for the sentinel.
    #[inline]
    pub const fn to_byte(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some((self.0 - 1) as u8)
        }
    }
}

impl From<u8> for Symbol {
    fn from(b: u8) -> Self {
        Symbol::from_byte(b)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_byte() {
            None => f.write_str("$"),
            Some(b) if b.is_ascii_graphic() => write!(f, "{}", b as char),
            Some(b) => write!(f, "\\x{b:02x}"),
        }
    }
}

/// A maximal block `head^exponent` of a run-length encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub head: Symbol,
    pub exponent: u64,
}

impl Run {
    pub fn new(head: Symbol, exponent: u64) -> Self {
        Run { head, exponent }
    }
}

/// Expands runs into one symbol per position.
pub fn expand_runs<'a>(runs: impl IntoIterator<Item = &'a Run>) -> Vec<Symbol> {
    let mut out = Vec::new();
    for r in runs {
        out.extend(std::iter::repeat_n(r.head, r.exponent as usize));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_shift() {
        assert_eq!(Symbol::from_byte(0).code(), 1);
        assert_eq!(Symbol::from_byte(b'a').code(), 98);
        assert_eq!(Symbol::from_byte(255).code(), 256);
        assert!(Symbol::SENTINEL < Symbol::from_byte(0));
        assert_eq!(Symbol::from_code(257), None);
        assert_eq!(Symbol::from_byte(7).to_byte(), Some(7));
        assert_eq!(Symbol::SENTINEL.to_byte(), None);
        assert_eq!(Symbol::SENTINEL.to_string(), "$");
        assert_eq!(Symbol::from_byte(b'a').to_string(), "a");
    }
}
