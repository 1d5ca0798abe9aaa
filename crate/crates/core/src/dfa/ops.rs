use std::collections::HashMap;

use super::{slice_count, Dfa, SliceIndex, MAX_WORD_LEN};
use crate::error::{domain, Result};
use num_bigint::BigUint;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Identifies states `i` and `j`, then keeps merging successors until the
/// quotient is deterministic. A merged class is final if any member is.
/// The result is canonical.
pub fn merge_states(a: &Dfa, i: usize, j: usize) -> Result<Dfa> {
    let (q, s) = (a.q(), a.s());
    if i >= q || j >= q {
        return domain(format!("merge of states {i}, {j} in a {q}-state DFA"));
    }
    let mut parent: Vec<usize> = (0..q).collect();
    let mut pending = vec![(i, j)];
    while let Some((x, y)) = pending.pop() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            continue;
        }
        parent[ry] = rx;
        for sym in 0..s {
            pending.push((a.next(x, sym), a.next(y, sym)));
        }
    }
    // Every pair of successors of merged states was queued above, so each
    // class has one successor class per symbol.
    let roots: Vec<usize> = (0..q).map(|x| find(&mut parent, x)).collect();
    let mut class_of = vec![usize::MAX; q];
    let mut classes = 0;
    for &r in &roots {
        if class_of[r] == usize::MAX {
            class_of[r] = classes;
            classes += 1;
        }
    }
    let mut is_final = vec![false; classes];
    let mut delta = vec![0usize; classes * s];
    for x in 0..q {
        let c = class_of[roots[x]];
        is_final[c] |= a.is_final(x);
        for sym in 0..s {
            delta[c * s + sym] = class_of[roots[a.next(x, sym)]];
        }
    }
    Ok(Dfa::from_final_set(s, class_of[roots[a.initial()]], &is_final, &delta)?.canonical())
}

/// Machine accepting exactly the length-`n` words of `L(a)`; canonical.
pub fn restrict_to_length(a: &Dfa, n: usize) -> Dfa {
    // product with a counter 0..=n plus an overflow level n + 1
    let (q, s) = (a.q(), a.s());
    let levels = n + 2;
    let id = |state: usize, k: usize| k * q + state;
    let mut is_final = vec![false; q * levels];
    let mut delta = vec![0usize; q * levels * s];
    for k in 0..levels {
        let k_next = (k + 1).min(n + 1);
        for state in 0..q {
            is_final[id(state, k)] = k == n && a.is_final(state);
            for sym in 0..s {
                delta[id(state, k) * s + sym] = id(a.next(state, sym), k_next);
            }
        }
    }
    Dfa::from_final_set(s, id(a.initial(), 0), &is_final, &delta).expect("product is well formed").canonical()
}

/// `|L^n(a) ∩ L^n(b)|` over the binary alphabet, by a backward count over
/// the product states reachable in exactly `k` steps.
fn intersection_count<C>(a: &Dfa, b: &Dfa, n: usize) -> C
where
    C: Clone + Default + From<u8> + for<'x> std::ops::AddAssign<&'x C>,
{
    let syms = a.s().min(b.s()).min(2);
    let mut frontier = vec![(a.initial(), b.initial())];
    let mut layers = vec![frontier.clone()];
    for _ in 0..n {
        let mut next: Vec<(usize, usize)> =
            frontier.iter().flat_map(|&(x, y)| (0..syms).map(move |sym| (a.next(x, sym), b.next(y, sym)))).collect();
        next.sort_unstable();
        next.dedup();
        layers.push(next.clone());
        frontier = next;
    }
    let mut ways: HashMap<(usize, usize), C> =
        layers[n].iter().map(|&(x, y)| ((x, y), C::from((a.is_final(x) && b.is_final(y)) as u8))).collect();
    for k in (0..n).rev() {
        let mut level = HashMap::with_capacity(layers[k].len());
        for &(x, y) in &layers[k] {
            let mut total = C::default();
            for sym in 0..syms {
                total += &ways[&(a.next(x, sym), b.next(y, sym))];
            }
            level.insert((x, y), total);
        }
        ways = level;
    }
    ways.remove(&(a.initial(), b.initial())).unwrap_or_default()
}

/// Whether `a` and `b` accept the same length-`n` binary words.
pub fn equivalent_at(a: &Dfa, b: &Dfa, n: usize) -> bool {
    if n <= MAX_WORD_LEN {
        let ca = SliceIndex::new(a, n).expect("n in range").len();
        if ca != SliceIndex::new(b, n).expect("n in range").len() {
            return false;
        }
        return intersection_count::<u64>(a, b, n) == ca;
    }
    let ca = slice_count(a, n);
    if ca != slice_count(b, n) {
        return false;
    }
    intersection_count::<BigUint>(a, b, n) == ca
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::{prefix_tree_acceptor, slice_words, DataSample, Word, DEFAULT_SLICE_BOUND};

    #[test]
    fn merging_parity_states_gives_universal() {
        let m = merge_states(&Dfa::parity(true), 0, 1).unwrap();
        assert_eq!(m, Dfa::universal(2));
    }

    #[test]
    fn merge_closes_under_determinism() {
        let d = DataSample::from_strs(&["00", "11"]).unwrap();
        let pta = prefix_tree_acceptor(&d);
        for i in 0..pta.q() {
            for j in 0..pta.q() {
                let m = merge_states(&pta, i, j).unwrap();
                assert!(m.is_canonical());
                assert!(m.accepts_all(&d), "merge {i},{j} lost a word");
                assert!(m.q() <= pta.q());
            }
        }
        assert!(merge_states(&pta, 0, pta.q()).is_err());
    }

    #[test]
    fn restriction_keeps_only_one_length() {
        let r = restrict_to_length(&Dfa::parity(true), 3);
        for len in 0..6 {
            let words = slice_words(&r, len, DEFAULT_SLICE_BOUND).unwrap();
            assert_eq!(words.len(), if len == 3 { 4 } else { 0 });
        }
        assert!(r.accepts(&"011".parse::<Word>().unwrap()));
    }

    #[test]
    fn slice_equivalence() {
        let even = Dfa::parity(true);
        let d = DataSample::from_strs(&["000", "011", "101", "110"]).unwrap();
        let pta = prefix_tree_acceptor(&d);
        assert!(equivalent_at(&pta, &even, 3));
        assert!(!equivalent_at(&pta, &even, 2));
        assert!(!equivalent_at(&even, &Dfa::parity(false), 3));
        assert!(equivalent_at(&even, &even.canonical(), 10));
        assert!(equivalent_at(&Dfa::universal(2), &Dfa::universal(3), 5));
        assert!(equivalent_at(&even, &even.canonical(), 70));
        assert!(!equivalent_at(&even, &Dfa::universal(2), 70));
    }
}
