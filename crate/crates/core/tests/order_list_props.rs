use online_rlbwt::oracle::ReferenceOrderList;
use online_rlbwt::order_maintenance::{OrderItem, OrderList};
use online_rlbwt::selftest::fuzz_order_list;
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    InsertAfter(usize),
    InsertFront,
    Delete(usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        6 => any::<usize>().prop_map(Op::InsertAfter),
        1 => Just(Op::InsertFront),
        2 => any::<usize>().prop_map(Op::Delete),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_reference(ops in prop::collection::vec(op(), 0..300)) {
        let mut list = OrderList::new();
        let mut reference = ReferenceOrderList::new();
        let mut live: Vec<(usize, OrderItem)> = Vec::new();
        for (id, op) in ops.into_iter().enumerate() {
            match op {
                Op::InsertAfter(k) if !live.is_empty() => {
                    let a = live[k % live.len()];
                    live.push((id, list.insert_after(Some(a.1), id).unwrap()));
                    reference.insert_after(Some(&a.0), id);
                }
                Op::InsertAfter(_) | Op::InsertFront => {
                    live.push((id, list.insert_after(None, id).unwrap()));
                    reference.insert_after(None, id);
                }
                Op::Delete(k) if !live.is_empty() => {
                    let (id, it) = live.swap_remove(k % live.len());
                    prop_assert_eq!(list.delete(it).unwrap(), id);
                    prop_assert!(!list.contains(it));
                    prop_assert!(list.delete(it).is_err());
                    reference.remove(&id);
                }
                Op::Delete(_) => {}
            }
        }
        list.audit().unwrap();
        let order: Vec<usize> = list.iter().map(|(_, _, &p)| p).collect();
        prop_assert_eq!(order.as_slice(), reference.as_slice());
        for a in &live {
            prop_assert!(!list.precedes(a.1, a.1));
            for b in &live {
                prop_assert_eq!(list.precedes(a.1, b.1), reference.precedes(&a.0, &b.0));
            }
        }
        let labels: Vec<u64> = list.iter().map(|(_, l, _)| l).collect();
        prop_assert!(labels.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn empty_and_single() {
    let mut list: OrderList<()> = OrderList::new();
    assert!(list.is_empty());
    assert_eq!(list.iter().count(), 0);
    let a = list.insert_after(None, ()).unwrap();
    assert!(!list.precedes(a, a));
    assert_eq!(list.first(), Some(a));
    assert_eq!(list.last(), Some(a));
}

#[test]
fn relabels_stay_within_n_log_n() {
    for pattern in 0..3 {
        let n = 50_000u64;
        let mut list = OrderList::new();
        let first = list.insert_after(None, 0).unwrap();
        let mut prev = first;
        for k in 1..n {
            let anchor = match pattern {
                0 => first,
                1 => prev,
                _ => {
                    if k % 3 == 0 {
                        first
                    } else {
                        prev
                    }
                }
            };
            prev = list.insert_after(Some(anchor), k).unwrap();
        }
        list.audit().unwrap();
        let bound = 4.0 * n as f64 * (n as f64).log2();
        assert!(
            (list.relabel_count() as f64) <= bound,
            "pattern {pattern}: {} relabels",
            list.relabel_count()
        );
    }
}

#[test]
fn randomized_mirror() {
    for seed in 0..20 {
        fuzz_order_list(5_000, seed).unwrap();
    }
}
