// Searchable partial sums: a sequence of positive weights with prefix
// sums, weighted search and insert/remove in logarithmic time.

use online_rlbwt::spsi::{SpsiConfig, SpsiTree};

fn main() -> online_rlbwt::Result<()> {
    let cfg = SpsiConfig {
        with_labels: true,
        with_leftmost: true,
        ..SpsiConfig::with_arity(3, 3)
    };
    let mut t = SpsiTree::new(cfg)?;
    let mut handles = Vec::new();
    let mut last = None;
    for w in [3, 1, 1, 2, 4, 2, 2, 1, 2, 1, 1, 2, 2, 1, 1, 3] {
        last = Some(t.insert_after(last, w)?);
        handles.push(last.unwrap());
    }
    println!(
        "leaves = {}, total = {}, height = {}",
        t.leaf_count(),
        t.total(),
        t.height()
    );

    let (leaf, off) = t.search(5)?;
    let idx = handles.iter().position(|&h| h == leaf).unwrap() + 1;
    println!("search(5)  -> leaf {idx}, offset {off}");
    println!(
        "prefix sum before leaf 5 = {}",
        t.prefix_sum_before(handles[4])?
    );

    t.update(handles[0], 2)?;
    let extra = t.insert_after(Some(handles[0]), 7)?;
    t.remove(handles[2])?;
    println!("after update/insert/remove: total = {}", t.total());
    println!(
        "new leaf sits in bottom node labeled {}",
        t.bottom_label(extra)?
    );

    let root = t.root().unwrap();
    println!(
        "leftmost leaf of root has weight {}",
        t.weight(t.leftmost_leaf(root)?)?
    );
    t.audit().expect("tree invariants hold");
    Ok(())
}
