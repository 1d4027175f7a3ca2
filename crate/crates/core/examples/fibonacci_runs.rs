// Fibonacci words are extremely repetitive: the number of BWT runs stays
// tiny while the input grows exponentially.

use online_rlbwt::bwt_builder::OnlineBwt;
use online_rlbwt::oracle::fibonacci_word;

fn main() {
    println!("{:>5} {:>9} {:>5} {:>5}", "order", "length", "r", "r(rev)");
    for order in [5, 10, 15, 20, 25, 28] {
        let word = fibonacci_word(order);
        let mut fwd = OnlineBwt::new();
        fwd.extend_all(&word);
        let mut rev = OnlineBwt::new();
        rev.extend_all(&word.iter().rev().copied().collect::<Vec<_>>());
        println!(
            "{order:>5} {:>9} {:>5} {:>5}",
            word.len(),
            fwd.num_runs(),
            rev.num_runs()
        );
    }
}
