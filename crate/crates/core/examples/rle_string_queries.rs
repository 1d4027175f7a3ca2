// rank, select, access and occ_<c on a dynamic run-length string, with
// inserts and deletes that keep the runs maximal.

use online_rlbwt::rle_string::RleString;
use online_rlbwt::{Run, Symbol};

fn show(s: &RleString) -> String {
    s.iter_runs()
        .map(|r| format!("{}^{}", r.head, r.exponent))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> online_rlbwt::Result<()> {
    let (a, b, c) = (Symbol::from(b'a'), Symbol::from(b'b'), Symbol::from(b'c'));
    let runs = [
        Run::new(a, 4),
        Run::new(b, 2),
        Run::new(c, 3),
        Run::new(a, 1),
        Run::new(c, 2),
    ];
    let mut s = RleString::from_runs(&runs, Default::default())?;
    println!("{}  (n = {}, r = {})", show(&s), s.len(), s.num_runs());

    println!("access(5)      = {}", s.access(5)?);
    println!("rank(a, 10)    = {}", s.rank(a, 10)?);
    println!("select(c, 4)   = {}", s.select(c, 4)?);
    println!("occ_less(c)    = {}", s.occ_less_than(c));

    // splitting a run: one insert adds two runs
    s.insert(2, b, 1)?;
    println!("insert b at 2  -> {}  (r = {})", show(&s), s.num_runs());
    // removing it again merges the halves back
    s.delete(2, 1)?;
    println!("delete at 2    -> {}  (r = {})", show(&s), s.num_runs());
    // removing the lone a joins the two c runs
    s.delete(10, 1)?;
    println!("delete at 10   -> {}  (r = {})", show(&s), s.num_runs());

    if let Err(e) = s.delete(3, 4) {
        println!("delete(3, 4) fails: {e}");
    }
    s.audit().expect("structure is consistent");
    Ok(())
}
