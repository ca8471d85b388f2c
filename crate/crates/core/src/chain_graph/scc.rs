//! Strongly connected components, two independent iterative algorithms.

const UNSET: usize = usize::MAX;

/// Component label per node, normalised so labels appear in order of each
/// component's smallest node.
pub fn normalize(comp: &[usize]) -> (Vec<usize>, usize) {
    let mut relabel = vec![UNSET; comp.len()];
    let mut next = 0;
    let out = comp
        .iter()
        .map(|&c| {
            if relabel[c] == UNSET {
                relabel[c] = next;
                next += 1;
            }
            relabel[c]
        })
        .collect();
    (out, next)
}

/// Path-based (Gabow) SCC, with an explicit call stack.
pub fn path_based(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut pre = vec![UNSET; n];
    let mut comp = vec![UNSET; n];
    let mut s: Vec<usize> = Vec::new();
    let mut p: Vec<usize> = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let (mut counter, mut ncomp) = (0, 0);

    for root in 0..n {
        if pre[root] != UNSET {
            continue;
        }
        pre[root] = counter;
        counter += 1;
        s.push(root);
        p.push(root);
        frames.push((root, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if let Some(&w) = adj[v].get(frame.1) {
                frame.1 += 1;
                if pre[w] == UNSET {
                    pre[w] = counter;
                    counter += 1;
                    s.push(w);
                    p.push(w);
                    frames.push((w, 0));
                } else if comp[w] == UNSET {
                    while pre[*p.last().unwrap()] > pre[w] {
                        p.pop();
                    }
                }
                continue;
            }
            frames.pop();
            if p.last() == Some(&v) {
                p.pop();
                loop {
                    let u = s.pop().unwrap();
                    comp[u] = ncomp;
                    if u == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// Kosaraju's two-pass SCC.
pub fn kosaraju(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        frames.push((root, 0));
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if let Some(&w) = adj[v].get(frame.1) {
                frame.1 += 1;
                if !seen[w] {
                    seen[w] = true;
                    frames.push((w, 0));
                }
            } else {
                frames.pop();
                order.push(v);
            }
        }
    }

    let mut radj = vec![Vec::new(); n];
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            radj[v].push(u);
        }
    }
    let mut comp = vec![UNSET; n];
    let mut ncomp = 0;
    let mut stack = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != UNSET {
            continue;
        }
        comp[root] = ncomp;
        stack.push(root);
        while let Some(v) = stack.pop() {
            for &u in &radj[v] {
                if comp[u] == UNSET {
                    comp[u] = ncomp;
                    stack.push(u);
                }
            }
        }
        ncomp += 1;
    }
    comp
}
