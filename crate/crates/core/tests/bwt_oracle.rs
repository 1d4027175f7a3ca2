use std::collections::HashSet;

use online_rlbwt::bwt_builder::OnlineBwt;
use online_rlbwt::oracle::{self, fibonacci_word};
use online_rlbwt::rle_string::RleConfig;
use online_rlbwt::{Run, Symbol};
use proptest::prelude::*;

fn build(s: &[u8]) -> OnlineBwt {
    let mut b = OnlineBwt::new();
    b.extend_all(s);
    b
}

fn rev(s: &[u8]) -> Vec<u8> {
    s.iter().rev().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn each_prefix_matches_suffix_sort(s in prop::collection::vec(prop_oneof![Just(0u8), Just(1u8), Just(b'a'), any::<u8>()], 0..200)) {
        let mut b = OnlineBwt::with_config(RleConfig { b_internal: 3, b_bottom: 3 }).unwrap();
        for k in 0..s.len() {
            b.extend(s[k]);
            let expect = oracle::bwt_of_reversed_naive(&s[..=k]);
            prop_assert_eq!(b.rle_string().to_symbols(), expect.clone());
            prop_assert_eq!(b.num_runs(), oracle::rle_naive(&expect).len() as u64);
            prop_assert_eq!(b.rle_string().access(b.sentinel_pos()).unwrap(), Symbol::SENTINEL);
            prop_assert_eq!(b.len(), k as u64 + 2);
        }
        prop_assert_eq!(b.invert(), s);
    }

    #[test]
    fn round_trips_through_runs(s in prop::collection::vec(any::<u8>(), 0..600)) {
        let b = build(&s);
        let again = OnlineBwt::from_runs(&b.runs(), RleConfig::default()).unwrap();
        prop_assert_eq!(again.invert(), s);
    }
}

#[test]
fn named_examples() {
    assert_eq!(build(b"ananab").to_string(), "annb$aa");
    let b = build(&rev(b"abracadabra"));
    assert_eq!(
        b.rle_string().to_symbols(),
        oracle::bwt_naive(b"abracadabra")
    );
    let empty = build(b"");
    assert_eq!(empty.runs(), vec![Run::new(Symbol::SENTINEL, 1)]);
    assert_eq!(empty.fed(), 0);
}

#[test]
fn unary_input_keeps_three_runs() {
    let mut b = OnlineBwt::new();
    for _ in 0..5000 {
        b.extend(b'x');
        assert!(b.num_runs() <= 3);
    }
    assert_eq!(b.invert(), vec![b'x'; 5000]);
}

#[test]
fn fibonacci_twenty_has_few_runs() {
    let w = fibonacci_word(20);
    let b = build(&rev(&w));
    assert!(b.num_runs() <= 30, "r = {}", b.num_runs());
    assert_eq!(b.rle_string().to_symbols(), oracle::bwt_naive(&w));
}

#[test]
fn lf_walk_visits_every_row_once() {
    for s in [
        &b"mississippi"[..],
        b"",
        b"\x00\x00\x00",
        b"abababab",
        b"zyxwvu",
    ] {
        let b = build(s);
        let x = b.rle_string();
        let mut seen = HashSet::new();
        let mut i = 1u64;
        for _ in 0..=b.fed() {
            assert!(seen.insert(i));
            let (c, k) = x.access_rank(i).unwrap();
            i = x.occ_less_than(c) + k;
        }
        assert_eq!(seen.len() as u64, b.len());
    }
}

#[test]
fn embedded_zero_bytes_are_not_sentinels() {
    let s = [0u8, 0, 1, 0, 255, 0, 0];
    let b = build(&s);
    assert_eq!(b.rle_string().occ(Symbol::SENTINEL), 1);
    assert_eq!(b.rle_string().occ(Symbol::from_byte(0)), 5);
    assert_eq!(b.invert(), s);
}

#[test]
fn from_runs_rejects_missing_sentinel() {
    let runs = [Run::new(Symbol::from_byte(1), 3)];
    assert!(OnlineBwt::from_runs(&runs, RleConfig::default()).is_err());
}
