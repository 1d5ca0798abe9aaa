use super::{DataSample, Dfa};

/// Tree-shaped DFA accepting exactly the sample, completed by one
/// non-final sink that absorbs every missing transition.
pub fn prefix_tree_acceptor(sample: &DataSample) -> Dfa {
    const NONE: usize = usize::MAX;
    let mut children: Vec<[usize; 2]> = vec![[NONE; 2]];
    let mut is_final = vec![false];
    for w in sample.words() {
        let mut node = 0;
        for sym in w.symbols() {
            if children[node][sym] == NONE {
                children.push([NONE; 2]);
                is_final.push(false);
                children[node][sym] = children.len() - 1;
            }
            node = children[node][sym];
        }
        is_final[node] = true;
    }
    let sink = children.len();
    is_final.push(false);
    let mut delta: Vec<usize> = children.iter().flat_map(|c| c.iter().map(|&t| if t == NONE { sink } else { t })).collect();
    delta.extend([sink, sink]);
    Dfa::from_final_set(2, 0, &is_final, &delta).expect("tree is well formed").canonical()
}
