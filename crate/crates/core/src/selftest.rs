//! Randomized equivalence checks of every structure against the brute-force
//! references in [`crate::oracle`].
//!
//! Each driver is deterministic in its seed and reports the first mismatch
//! with the seed and operation index needed to replay it.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bwt_builder::OnlineBwt;
use crate::io_format::{read_binary, read_text, write_binary, write_text, RlbwtDocument};
use crate::oracle::{self, ReferenceOrderList};
use crate::order_maintenance::{OrderItem, OrderList};
use crate::rle_string::{RleConfig, RleString};
use crate::spsi::{LeafHandle, SpsiConfig, SpsiTree};
use crate::symbol::{Run, Symbol};

/// A failed check, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub suite: &'static str,
    pub seed: u64,
    pub op: u64,
    pub message: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed at seed {} op {}: {}",
            self.suite, self.seed, self.op, self.message
        )
    }
}

impl std::error::Error for Mismatch {}

pub type Outcome = std::result::Result<(), Mismatch>;

macro_rules! ensure {
    ($cond:expr, $suite:expr, $seed:expr, $op:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Mismatch {
                suite: $suite,
                seed: $seed,
                op: $op as u64,
                message: format!($($msg)+),
            });
        }
    };
}

fn check(r: std::result::Result<(), String>, suite: &'static str, seed: u64, op: u64) -> Outcome {
    r.map_err(|message| Mismatch {
        suite,
        seed,
        op,
        message,
    })
}

/// Random bytes drawn from the first `sigma` values of a shuffled alphabet.
pub fn random_bytes(rng: &mut impl Rng, len: usize, sigma: usize) -> Vec<u8> {
    let mut alphabet: Vec<u8> = (0..=255).collect();
    alphabet.shuffle(rng);
    let alphabet = &alphabet[..sigma.clamp(1, 256)];
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// Random insert/remove/update/search operations on an [`SpsiTree`],
/// mirrored by a plain vector.
pub fn fuzz_spsi(cfg: SpsiConfig, ops: u64, audit_every: u64, seed: u64) -> Outcome {
    const S: &str = "spsi";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = SpsiTree::new(cfg).map_err(|e| Mismatch {
        suite: S,
        seed,
        op: 0,
        message: e.to_string(),
    })?;
    let mut mirror: Vec<(LeafHandle, u64)> = Vec::new();
    for op in 0..ops {
        let roll = rng.gen_range(0..100);
        if mirror.is_empty() || roll < 40 && mirror.len() < 3000 {
            let at = rng.gen_range(0..=mirror.len());
            let w = rng.gen_range(1..20);
            let anchor = at.checked_sub(1).map(|k| mirror[k].0);
            let h = tree.insert_after(anchor, w).unwrap();
            mirror.insert(at, (h, w));
        } else if roll < 65 {
            let at = rng.gen_range(0..mirror.len());
            let (h, w) = mirror.remove(at);
            ensure!(
                tree.remove(h).ok() == Some(w),
                S,
                seed,
                op,
                "remove returned the wrong weight"
            );
            ensure!(!tree.contains(h), S, seed, op, "removed handle still live");
        } else if roll < 80 {
            let at = rng.gen_range(0..mirror.len());
            let (h, w) = mirror[at];
            let delta = rng.gen_range(1 - w as i64..10);
            tree.update(h, delta).unwrap();
            mirror[at].1 = (w as i64 + delta) as u64;
        } else {
            let total: u64 = mirror.iter().map(|x| x.1).sum();
            ensure!(
                tree.total() == total,
                S,
                seed,
                op,
                "total {} != {}",
                tree.total(),
                total
            );
            let target = rng.gen_range(1..=total);
            let mut acc = 0;
            let mut expect = None;
            for &(h, w) in &mirror {
                if acc + w >= target {
                    expect = Some((h, target - acc));
                    break;
                }
                acc += w;
            }
            let got = tree.search(target).ok();
            ensure!(
                got == expect,
                S,
                seed,
                op,
                "search({target}) gave {got:?}, expected {expect:?}"
            );
            let at = rng.gen_range(0..mirror.len());
            let before: u64 = mirror[..at].iter().map(|x| x.1).sum();
            ensure!(
                tree.prefix_sum_before(mirror[at].0).ok() == Some(before),
                S,
                seed,
                op,
                "prefix sum before leaf {at} differs"
            );
        }
        if audit_every > 0 && op % audit_every == 0 {
            check(tree.audit(), S, seed, op)?;
            let got: Vec<(LeafHandle, u64)> = tree.iter().collect();
            ensure!(
                got == mirror,
                S,
                seed,
                op,
                "leaf sequence differs from the mirror"
            );
        }
    }
    check(tree.audit(), S, seed, ops)
}

/// Random inserts and deletes on an [`OrderList`] against a reference list.
pub fn fuzz_order_list(ops: u64, seed: u64) -> Outcome {
    const S: &str = "order_list";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = OrderList::new();
    let mut reference: ReferenceOrderList<u64> = ReferenceOrderList::new();
    let mut items: Vec<(u64, OrderItem)> = Vec::new();
    for op in 0..ops {
        if items.is_empty() || rng.gen_bool(0.7) {
            let anchor = if items.is_empty() || rng.gen_bool(0.05) {
                None
            } else {
                Some(items[rng.gen_range(0..items.len())])
            };
            let it = list.insert_after(anchor.map(|a| a.1), op).unwrap();
            reference.insert_after(anchor.as_ref().map(|a| &a.0), op);
            items.push((op, it));
        } else {
            let (id, it) = items.swap_remove(rng.gen_range(0..items.len()));
            ensure!(
                list.delete(it).ok() == Some(id),
                S,
                seed,
                op,
                "delete returned the wrong payload"
            );
            reference.remove(&id);
        }
        if !items.is_empty() {
            let a = items[rng.gen_range(0..items.len())];
            let b = items[rng.gen_range(0..items.len())];
            ensure!(
                list.precedes(a.1, b.1) == reference.precedes(&a.0, &b.0),
                S,
                seed,
                op,
                "precedes({}, {}) disagrees",
                a.0,
                b.0
            );
        }
    }
    check(list.audit(), S, seed, ops)?;
    let got: Vec<u64> = list.iter().map(|(_, _, &p)| p).collect();
    ensure!(
        got == reference.as_slice(),
        S,
        seed,
        ops,
        "final order differs"
    );
    Ok(())
}

/// Random inserts, deletes and queries on an [`RleString`] against a plain
/// symbol vector. Strings stay at most `max_len` long.
pub fn fuzz_rle_string(
    cfg: RleConfig,
    sigma: usize,
    ops: u64,
    max_len: u64,
    audit_every: u64,
    seed: u64,
) -> Outcome {
    const S: &str = "rle_string";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = RleString::with_config(cfg).map_err(|e| Mismatch {
        suite: S,
        seed,
        op: 0,
        message: e.to_string(),
    })?;
    let mut alphabet: Vec<Symbol> = (0..=256u16).filter_map(Symbol::from_code).collect();
    alphabet.shuffle(&mut rng);
    alphabet.truncate(sigma.clamp(1, 257));
    let mut x: Vec<Symbol> = Vec::new();
    let max_len = max_len.max(1);
    for op in 0..ops {
        let n = x.len() as u64;
        let roll = rng.gen_range(0..100);
        if n == 0 || roll < 30 && n < max_len {
            let i = rng.gen_range(1..=n + 1);
            let c = *alphabet.choose(&mut rng).unwrap();
            let e = rng.gen_range(1..=(max_len - n).min(4));
            s.insert(i, c, e).unwrap();
            oracle::insert_naive(&mut x, i, c, e);
        } else if roll < 55 {
            let i = rng.gen_range(1..=n);
            let c = x[i as usize - 1];
            let span = x[i as usize - 1..].iter().take_while(|&&d| d == c).count() as u64;
            let e = rng.gen_range(1..=span.min(3));
            s.delete(i, e).unwrap();
            oracle::delete_naive(&mut x, i, e);
        } else {
            let c = *alphabet.choose(&mut rng).unwrap();
            let i = rng.gen_range(0..=n);
            let got = s.rank(c, i).ok();
            let want = oracle::rank_naive(&x, c, i).ok();
            ensure!(
                got == want,
                S,
                seed,
                op,
                "rank({c}, {i}) = {got:?}, expected {want:?}"
            );
            if i > 0 {
                let got = s.access(i).ok();
                let want = oracle::access_naive(&x, i).ok();
                ensure!(
                    got == want,
                    S,
                    seed,
                    op,
                    "access({i}) = {got:?}, expected {want:?}"
                );
                let (d, k) = s.access_rank(i).unwrap();
                ensure!(
                    Some(k) == oracle::rank_naive(&x, d, i).ok(),
                    S,
                    seed,
                    op,
                    "access_rank({i}) rank part differs"
                );
            }
            let occ = s.occ(c);
            let j = rng.gen_range(1..=occ + 1);
            let got = s.select(c, j).ok();
            let want = oracle::select_naive(&x, c, j).ok();
            ensure!(
                got == want,
                S,
                seed,
                op,
                "select({c}, {j}) = {got:?}, expected {want:?}"
            );
            let got = s.occ_less_than(c);
            let want = oracle::occ_less_naive(&x, c);
            ensure!(
                got == want,
                S,
                seed,
                op,
                "occ_less_than({c}) = {got}, expected {want}"
            );
        }
        ensure!(
            s.len() == x.len() as u64,
            S,
            seed,
            op,
            "length {} != {}",
            s.len(),
            x.len()
        );
        if audit_every > 0 && op % audit_every == 0 {
            check(s.audit(), S, seed, op)?;
            let runs = oracle::rle_naive(&x);
            ensure!(
                s.runs() == runs,
                S,
                seed,
                op,
                "runs differ from the re-encoded mirror"
            );
        }
    }
    check(s.audit(), S, seed, ops)?;
    ensure!(
        s.runs() == oracle::rle_naive(&x),
        S,
        seed,
        ops,
        "final runs differ"
    );
    Ok(())
}

/// Feeds `stream` and checks the result against a suffix sort, plus the
/// round trip through inversion.
pub fn check_bwt(stream: &[u8], seed: u64) -> Outcome {
    const S: &str = "bwt";
    let mut b = OnlineBwt::new();
    b.extend_all(stream);
    let expect = oracle::bwt_of_reversed_naive(stream);
    let got = b.rle_string().to_symbols();
    ensure!(
        got == expect,
        S,
        seed,
        stream.len(),
        "BWT differs from the suffix sort"
    );
    let runs = oracle::rle_naive(&expect).len() as u64;
    ensure!(
        b.num_runs() == runs,
        S,
        seed,
        stream.len(),
        "r = {} but expected {}",
        b.num_runs(),
        runs
    );
    ensure!(
        b.invert() == stream,
        S,
        seed,
        stream.len(),
        "inversion does not give back the input"
    );
    Ok(())
}

/// A random valid document with up to `max_runs` runs.
pub fn random_document(rng: &mut impl Rng, max_runs: usize) -> RlbwtDocument {
    let r = rng.gen_range(0..=max_runs);
    let mut runs: Vec<Run> = Vec::with_capacity(r + 1);
    for _ in 0..r {
        loop {
            let c = Symbol::from_byte(rng.gen());
            if runs.last().is_none_or(|p| p.head != c) {
                let e = if rng.gen_bool(0.1) {
                    rng.gen_range(1..u64::MAX / 1024)
                } else {
                    rng.gen_range(1..300)
                };
                runs.push(Run::new(c, e));
                break;
            }
        }
    }
    // the sentinel may sit anywhere, including between two equal heads
    let at = rng.gen_range(0..=runs.len());
    runs.insert(at, Run::new(Symbol::SENTINEL, 1));
    RlbwtDocument::new(runs).expect("generator yields valid documents")
}

/// Text and binary round trips of one document.
pub fn check_formats(doc: &RlbwtDocument, seed: u64) -> Outcome {
    const S: &str = "formats";
    let text = write_text(doc);
    ensure!(
        read_text(&text).as_ref() == Ok(doc),
        S,
        seed,
        0,
        "text round trip differs"
    );
    let bin = write_binary(doc);
    ensure!(
        read_binary(&bin).as_ref() == Ok(doc),
        S,
        seed,
        1,
        "binary round trip differs"
    );
    ensure!(
        write_binary(doc) == bin,
        S,
        seed,
        2,
        "binary output is not deterministic"
    );
    Ok(())
}

/// Result of one suite in [`run`].
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub failure: Option<Mismatch>,
}

/// Runs every suite with `n` random cases each, inputs at most `max_len`
/// long, all derived from `seed`.
pub fn run(n: u64, max_len: u64, seed: u64) -> Vec<SuiteReport> {
    let case_seed =
        |suite: u64, k: u64| seed ^ (suite << 56) ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let ops = max_len.max(8) * 4;
    let mut reports = Vec::new();
    let mut suite = |name: &'static str, id: u64, f: &dyn Fn(u64, u64) -> Outcome| {
        let failure = (0..n).find_map(|k| f(k, case_seed(id, k)).err());
        reports.push(SuiteReport {
            name,
            cases: n,
            failure,
        });
    };
    suite("spsi audit", 1, &|k, s| {
        let cfg = if k % 2 == 0 {
            SpsiConfig::with_arity(3, 3)
        } else {
            SpsiConfig::with_arity(16, 64)
        };
        fuzz_spsi(cfg, ops, 8, s)
    });
    suite("order list", 2, &|_, s| fuzz_order_list(ops, s));
    suite("rle_string vs naive", 3, &|k, s| {
        let cfg = if k % 2 == 0 {
            RleConfig {
                b_internal: 3,
                b_bottom: 3,
            }
        } else {
            RleConfig::default()
        };
        let sigma = [2, 4, 26, 256][(k / 2 % 4) as usize];
        fuzz_rle_string(cfg, sigma, ops, max_len, 8, s)
    });
    suite("bwt vs suffix sort", 4, &|k, s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let len = rng.gen_range(0..=max_len) as usize;
        let sigma = [2, 4, 26, 256][(k % 4) as usize];
        check_bwt(&random_bytes(&mut rng, len, sigma), s)
    });
    suite("format round trips", 5, &|_, s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        check_formats(&random_document(&mut rng, max_len as usize), s)
    });
    reports
}
