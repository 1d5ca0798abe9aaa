use std::collections::HashMap;

use super::Dfa;

/// Language-equivalent DFA with the fewest states, in canonical numbering.
///
/// Moore-style partition refinement on the reachable part: start from the
/// final / non-final split and refine by successor blocks until stable.
pub fn minimize(a: &Dfa) -> Dfa {
    let a = a.canonical();
    let (q, s) = (a.q(), a.s());
    let mut block: Vec<usize> = (0..q).map(|st| a.is_final(st) as usize).collect();
    let mut count = if a.final_count() == 0 || a.final_count() == q { 1 } else { 2 };
    if count == 1 {
        block.iter_mut().for_each(|b| *b = 0);
    }
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::with_capacity(count * 2);
        let mut next_block = Vec::with_capacity(q);
        let mut sig = Vec::with_capacity(s + 1);
        for st in 0..q {
            sig.clear();
            sig.push(block[st]);
            sig.extend((0..s).map(|sym| block[a.next(st, sym)]));
            let fresh = ids.len();
            let id = *ids.entry(sig.clone()).or_insert(fresh);
            next_block.push(id);
        }
        let refined = ids.len();
        block = next_block;
        if refined == count {
            break;
        }
        count = refined;
    }
    let mut rep = vec![usize::MAX; count];
    for st in 0..q {
        if rep[block[st]] == usize::MAX {
            rep[block[st]] = st;
        }
    }
    let is_final: Vec<bool> = rep.iter().map(|&r| a.is_final(r)).collect();
    let delta: Vec<usize> = rep.iter().flat_map(|&r| (0..s).map(move |sym| (r, sym))).map(|(r, sym)| block[a.next(r, sym)]).collect();
    Dfa::from_final_set(s, block[a.initial()], &is_final, &delta).expect("quotient is well formed").canonical()
}
