// Run the randomized oracle comparisons from code.

use online_rlbwt::selftest;

fn main() {
    for report in selftest::run(20, 128, 1) {
        match report.failure {
            None => println!("ok    {} ({} cases)", report.name, report.cases),
            Some(m) => println!("FAIL  {m}"),
        }
    }
}
