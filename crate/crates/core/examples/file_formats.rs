// Writing and reading the text and binary RLBWT formats.

use online_rlbwt::bwt_builder::OnlineBwt;
use online_rlbwt::io_format::{read_binary, read_text, write_binary, write_text, RlbwtDocument};

fn main() {
    let mut bwt = OnlineBwt::new();
    bwt.extend_all(b"ananab");
    let doc = RlbwtDocument::new(bwt.runs()).expect("a built BWT is a valid document");

    let text = write_text(&doc);
    print!("{text}");
    let bin = write_binary(&doc);
    let hex: Vec<String> = bin.iter().map(|b| format!("{b:02X}")).collect();
    println!("binary ({} bytes): {}", bin.len(), hex.join(" "));

    assert_eq!(read_text(&text).unwrap(), doc);
    assert_eq!(read_binary(&bin).unwrap(), doc);

    for bad in [
        "#RLBWT v1 n=3 r=3\n98\t1\n98\t1\n0\t1\n",
        "#RLBWT v1 n=5 r=2\n98\t3\n0\t1\n",
        "#RLBWT v1 n=2 r=2\n98\t0\n0\t1\n",
    ] {
        println!("rejected: {}", read_text(bad).unwrap_err());
    }
}
