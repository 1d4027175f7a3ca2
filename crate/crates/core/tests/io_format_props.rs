use online_rlbwt::bwt_builder::OnlineBwt;
use online_rlbwt::io_format::{
    read_binary, read_text, write_binary, write_text, FormatError, RlbwtDocument,
};
use online_rlbwt::selftest::random_document;
use online_rlbwt::{Run, Symbol};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn doc_of(stream: &[u8]) -> RlbwtDocument {
    let mut b = OnlineBwt::new();
    b.extend_all(stream);
    RlbwtDocument::new(b.runs()).unwrap()
}

proptest! {
    #[test]
    fn documents_round_trip(seed in any::<u64>(), max_runs in 0..200usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doc = random_document(&mut rng, max_runs);
        let text = write_text(&doc);
        prop_assert_eq!(read_text(&text).unwrap(), doc.clone());
        let bin = write_binary(&doc);
        prop_assert_eq!(read_binary(&bin).unwrap(), doc.clone());
        prop_assert_eq!(doc.n_total(), doc.runs().iter().map(|r| r.exponent).sum::<u64>());
        prop_assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
    }

    #[test]
    fn built_documents_round_trip(stream in prop::collection::vec(any::<u8>(), 0..300)) {
        let doc = doc_of(&stream);
        prop_assert_eq!(doc.n_total(), stream.len() as u64 + 1);
        prop_assert_eq!(read_binary(&write_binary(&doc)).unwrap(), doc.clone());
        prop_assert_eq!(read_text(&write_text(&doc)).unwrap(), doc);
    }
}

#[test]
fn byte_flips_never_parse_to_the_same_document() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let doc = random_document(&mut rng, 12);
        let bin = write_binary(&doc);
        for i in 0..bin.len() {
            for bit in 0..8 {
                let mut bad = bin.clone();
                bad[i] ^= 1 << bit;
                if let Ok(other) = read_binary(&bad) {
                    assert_ne!(other, doc);
                }
            }
        }
        let text = write_text(&doc).into_bytes();
        for i in 0..text.len() {
            let mut bad = text.clone();
            bad[i] ^= 0x01;
            if let Ok(s) = std::str::from_utf8(&bad) {
                if let Ok(other) = read_text(s) {
                    assert_ne!(other, doc);
                }
            }
        }
    }
}

#[test]
fn exact_encodings() {
    let empty = doc_of(b"");
    assert_eq!(write_text(&empty), "#RLBWT v1 n=1 r=1\n0\t1\n");
    assert_eq!(
        write_binary(&empty),
        [0x52, 0x4C, 0x42, 0x31, 0x01, 0x01, 0x01, 0x00, 0x01]
    );
    let ab = doc_of(b"ab");
    assert_eq!(write_text(&ab), "#RLBWT v1 n=3 r=3\n98\t1\n99\t1\n0\t1\n");
    assert_eq!(
        write_binary(&ab),
        [0x52, 0x4C, 0x42, 0x31, 0x01, 0x03, 0x03, 98, 1, 99, 1, 0, 1]
    );
    let big = RlbwtDocument::new(vec![
        Run::new(Symbol::from_byte(255), 300),
        Run::new(Symbol::SENTINEL, 1),
    ])
    .unwrap();
    assert_eq!(
        write_binary(&big),
        [0x52, 0x4C, 0x42, 0x31, 0x01, 0xAD, 0x02, 0x02, 0x80, 0x02, 0xAC, 0x02, 0x00, 0x01]
    );
}

#[test]
fn distinct_errors() {
    let adjacent = vec![
        Run::new(Symbol::from_byte(1), 1),
        Run::new(Symbol::from_byte(1), 1),
        Run::new(Symbol::SENTINEL, 1),
    ];
    assert!(matches!(
        RlbwtDocument::new(adjacent),
        Err(FormatError::AdjacentEqual { run: 2, .. })
    ));
    assert!(matches!(
        RlbwtDocument::new(vec![]),
        Err(FormatError::Sentinel { count: 0 })
    ));
    let two = vec![
        Run::new(Symbol::SENTINEL, 1),
        Run::new(Symbol::from_byte(1), 1),
        Run::new(Symbol::SENTINEL, 1),
    ];
    assert!(matches!(
        RlbwtDocument::new(two),
        Err(FormatError::Sentinel { count: 2 })
    ));
    assert!(matches!(
        read_text("hello\n"),
        Err(FormatError::BadHeader(_))
    ));
    assert!(matches!(
        read_text("#RLBWT v1 n=1 r=1\n0\t01x\n"),
        Err(FormatError::BadNumber { .. })
    ));
    assert!(matches!(
        read_text("#RLBWT v1 n=1 r=1\n0\t99999999999999999999\n"),
        Err(FormatError::BadNumber { .. })
    ));
    assert_eq!(
        read_binary(b"XLB1\x01\x01\x01\x00\x01"),
        Err(FormatError::BadMagic)
    );
    assert_eq!(
        read_binary(b"RLB1\x01\x01\x01\x00"),
        Err(FormatError::Truncated)
    );
    assert_eq!(
        read_binary(b"RLB1\x01\x01\x01\x81\x02\x01"),
        Err(FormatError::CodeOutOfRange { run: 1, code: 257 })
    );
    assert!(matches!(
        read_binary(b"RLB1\x01\xff\xff\xff\xff\xff\xff\xff\xff\xff\x7f"),
        Err(FormatError::VarintOverflow { offset: 5 })
    ));
}
