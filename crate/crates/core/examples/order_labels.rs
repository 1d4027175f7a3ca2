// Order maintenance: constant-time "does x come before y" on a list that
// grows anywhere.

use online_rlbwt::order_maintenance::OrderList;

fn main() -> online_rlbwt::Result<()> {
    let mut list = OrderList::new();
    let head = list.insert_after(None, "head")?;
    let tail = list.insert_after(Some(head), "tail")?;
    let mid = list.insert_after(Some(head), "mid")?;
    for (item, label, name) in list.iter() {
        println!(
            "{name:>5} label {label:#018x}  before tail: {}",
            list.precedes(item, tail)
        );
    }
    assert!(list.precedes(head, mid) && list.precedes(mid, tail));

    // always inserting right after the head exhausts the gap there
    let mut counts = OrderList::new();
    let first = counts.insert_after(None, 0u32)?;
    for k in 1..100_000 {
        counts.insert_after(Some(first), k)?;
    }
    let n = counts.len() as f64;
    println!(
        "{} inserts, {} labels rewritten ({:.2} per insert, lg n = {:.1})",
        counts.len(),
        counts.relabel_count(),
        counts.relabel_count() as f64 / n,
        n.log2()
    );
    counts.audit().expect("labels strictly increase");
    Ok(())
}
