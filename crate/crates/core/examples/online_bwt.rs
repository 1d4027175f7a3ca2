// Feed a byte stream one character at a time and watch the run-length BWT
// of its reverse evolve.

use online_rlbwt::bwt_builder::OnlineBwt;

fn main() {
    let mut bwt = OnlineBwt::new();
    println!("{:>8}  {:<12} r  sentinel", "fed", "bwt");
    for &c in b"ananab" {
        bwt.extend(c);
        let fed = String::from_utf8_lossy(&b"ananab"[..bwt.fed() as usize]).into_owned();
        println!(
            "{fed:>8}  {:<12} {}  {}",
            bwt.to_string(),
            bwt.num_runs(),
            bwt.sentinel_pos()
        );
    }
    // the stream was "banana" backwards, so this is the BWT of "banana$"
    assert_eq!(bwt.to_string(), "annb$aa");

    let text = b"how much wood would a woodchuck chuck if a woodchuck could chuck wood";
    let mut bwt = OnlineBwt::new();
    bwt.extend_all(text);
    println!("\n{} bytes -> {} runs", text.len(), bwt.num_runs());
    for run in bwt.iter_runs().take(8) {
        print!("{}^{} ", run.head, run.exponent);
    }
    println!("...");
}
