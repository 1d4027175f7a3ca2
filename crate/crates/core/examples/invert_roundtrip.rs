// Build, serialize, parse, rebuild and invert: the full round trip.

use online_rlbwt::bwt_builder::OnlineBwt;
use online_rlbwt::io_format::{read_binary, write_binary, RlbwtDocument};
use online_rlbwt::rle_string::RleConfig;

fn main() {
    let text = "It was the best of times, it was the worst of times, \
                it was the age of wisdom, it was the age of foolishness"
        .repeat(40);
    let mut bwt = OnlineBwt::new();
    bwt.extend_all(text.as_bytes());

    let bytes = write_binary(&RlbwtDocument::new(bwt.runs()).unwrap());
    println!(
        "{} input bytes, {} runs, {} serialized bytes",
        text.len(),
        bwt.num_runs(),
        bytes.len()
    );

    let doc = read_binary(&bytes).unwrap();
    let rebuilt = OnlineBwt::from_runs(doc.runs(), RleConfig::default()).unwrap();
    let back = rebuilt.invert();
    assert_eq!(back, text.as_bytes());
    println!("recovered: {}...", String::from_utf8_lossy(&back[..60]));
}
