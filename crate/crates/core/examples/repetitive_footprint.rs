// Memory grows with the number of runs, not the input length: a mutated
// repeat of one phrase needs a fraction of its own size.

use std::time::Instant;

use online_rlbwt::bwt_builder::OnlineBwt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let phrase: Vec<u8> = (0..1024).map(|_| rng.gen()).collect();
    for n in [1usize << 18, 1 << 19, 1 << 20] {
        let mut data: Vec<u8> = phrase.iter().copied().cycle().take(n).collect();
        for _ in 0..n / 1000 {
            let i = rng.gen_range(0..n);
            data[i] = rng.gen();
        }
        let start = Instant::now();
        let mut bwt = OnlineBwt::new();
        bwt.extend_all(&data);
        let secs = start.elapsed().as_secs_f64();
        println!(
            "n = {n:>8}  r = {:>6}  footprint = {:>8} bytes ({:.1}% of n)  {:.2} MB/s",
            bwt.num_runs(),
            bwt.footprint_bytes(),
            100.0 * bwt.footprint_bytes() as f64 / n as f64,
            n as f64 / secs / 1e6
        );
    }
}
