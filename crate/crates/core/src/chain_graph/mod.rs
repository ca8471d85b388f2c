//! δ-chain graphs of grid systems: edges `i → j` whenever `d(F(c_i), c_j) <= δ`.
//!
//! One δ gives one finite slice of chain recurrence and chain continuity;
//! [`cr_ladder`] intersects slices over several δ. Cell centers are a
//! combinatorial model, not an outer enclosure of the map.

pub mod scc;

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::mag::Mag;
use crate::par::Exec;
use crate::spaces::GridSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGraph {
    delta: Mag,
    adj: Vec<Vec<usize>>,
}

impl ChainGraph {
    /// A graph from explicit adjacency lists; lists are sorted and deduplicated.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>, delta: Mag) -> Self {
        let n = adj.len();
        for out in &mut adj {
            assert!(out.iter().all(|&j| j < n), "edge target out of range");
            out.sort_unstable();
            out.dedup();
        }
        ChainGraph { delta, adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn delta(&self) -> &Mag {
        &self.delta
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Whether the edge set is exactly `{(i, j) : d(F(c_i), c_j) <= δ}`.
    pub fn matches(&self, grid: &GridSystem) -> bool {
        self.len() == grid.len()
            && (0..self.len()).all(|i| {
                (0..self.len()).all(|j| self.has_edge(i, j) == (grid.image_distance(i, j) <= self.delta))
            })
    }
}

/// All edges `i → j` with `d(F(c_i), c_j) <= δ`, exactly.
pub fn build_graph(grid: &GridSystem, delta: &Mag, exec: Exec) -> ChainGraph {
    let adj = exec.map_range(grid.len(), |i| {
        grid.candidate_targets(i, delta)
            .into_iter()
            .filter(|&j| grid.image_distance(i, j) <= *delta)
            .collect::<Vec<_>>()
    });
    ChainGraph {
        delta: *delta,
        adj,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Component of each node, numbered by smallest member.
    pub comp: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// Sorted, duplicate-free edges between distinct components.
    pub dag: Vec<Vec<usize>>,
    /// Whether each component lies in the chain recurrent set.
    pub recurrent: Vec<bool>,
    pub terminal: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SccAlgorithm {
    #[default]
    PathBased,
    Kosaraju,
}

pub fn condensation(graph: &ChainGraph) -> Condensation {
    condensation_with(graph, SccAlgorithm::PathBased)
}

pub fn condensation_with(graph: &ChainGraph, algorithm: SccAlgorithm) -> Condensation {
    let raw = match algorithm {
        SccAlgorithm::PathBased => scc::path_based(&graph.adj),
        SccAlgorithm::Kosaraju => scc::kosaraju(&graph.adj),
    };
    let (comp, count) = scc::normalize(&raw);
    let mut members = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut dag = vec![Vec::new(); count];
    let mut recurrent = vec![false; count];
    for (u, out) in graph.adj.iter().enumerate() {
        for &v in out {
            if comp[u] == comp[v] {
                recurrent[comp[u]] = true;
            } else {
                dag[comp[u]].push(comp[v]);
            }
        }
    }
    for d in &mut dag {
        d.sort_unstable();
        d.dedup();
    }
    let terminal = (0..count).map(|c| recurrent[c] && dag[c].is_empty()).collect();
    Condensation {
        comp,
        members,
        dag,
        recurrent,
        terminal,
    }
}

/// Nodes on a directed cycle: in a component of size at least two, or with a self-loop.
pub fn chain_recurrent(graph: &ChainGraph) -> Vec<usize> {
    let c = condensation(graph);
    (0..graph.len()).filter(|&v| c.recurrent[c.comp[v]]).collect()
}

/// Recurrent components with no edge leaving them.
pub fn terminal_components(graph: &ChainGraph) -> Vec<Vec<usize>> {
    let c = condensation(graph);
    c.members
        .into_iter()
        .zip(c.terminal)
        .filter(|(_, t)| *t)
        .map(|(m, _)| m)
        .collect()
}

/// Chain recurrent cells common to every δ in `deltas`.
pub fn cr_ladder(grid: &GridSystem, deltas: &[Mag], exec: Exec) -> Vec<usize> {
    let mut keep = vec![true; grid.len()];
    for d in deltas {
        let mut now = vec![false; grid.len()];
        for v in chain_recurrent(&build_graph(grid, d, exec)) {
            now[v] = true;
        }
        for (k, n) in keep.iter_mut().zip(now) {
            *k &= n;
        }
    }
    (0..grid.len()).filter(|&v| keep[v]).collect()
}

/// Cells `x` such that for every `t <= horizon`, every cell reachable from
/// `x` by exactly `t` δ-edges lies within `ε` of `F^t(x)`.
pub fn chain_continuity_scan(
    grid: &GridSystem,
    eps: &Mag,
    delta: &Mag,
    horizon: usize,
    exec: Exec,
) -> Vec<usize> {
    let graph = build_graph(grid, delta, exec);
    let ok = exec.map_range(grid.len(), |x| frontier_stays_close(grid, &graph, x, eps, horizon));
    (0..grid.len()).filter(|&x| ok[x]).collect()
}

fn frontier_stays_close(
    grid: &GridSystem,
    graph: &ChainGraph,
    x: usize,
    eps: &Mag,
    horizon: usize,
) -> bool {
    let n = grid.len();
    let mut frontier = vec![x];
    let mut mark = vec![usize::MAX; n];
    let mut orbit = x;
    for t in 1..=horizon {
        orbit = grid.step(orbit);
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in graph.successors(u) {
                if mark[v] != t {
                    mark[v] = t;
                    next.push(v);
                }
            }
        }
        if next.iter().any(|&v| grid.cell_distance(v, orbit) > *eps) {
            return false;
        }
        if next.is_empty() {
            return true;
        }
        frontier = next;
    }
    true
}

/// All cells reachable from `start` by paths of length at least one.
pub fn reachable(graph: &ChainGraph, start: usize) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut queue: VecDeque<usize> = graph.successors(start).iter().copied().collect();
    for &v in graph.successors(start) {
        seen[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in graph.successors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Graphviz rendering; chain recurrent nodes are filled, terminal ones doubled.
pub fn to_dot(graph: &ChainGraph) -> String {
    let c = condensation(graph);
    let mut s = String::new();
    writeln!(s, "digraph chain {{").unwrap();
    writeln!(s, "  // delta = {}", graph.delta).unwrap();
    for v in 0..graph.len() {
        let k = c.comp[v];
        let mut attrs = format!("label=\"{v}\"");
        if c.recurrent[k] {
            attrs.push_str(", style=filled");
        }
        if c.terminal[k] {
            attrs.push_str(", shape=doublecircle");
        }
        writeln!(s, "  n{v} [{attrs}];").unwrap();
    }
    for (u, out) in graph.adj.iter().enumerate() {
        for &v in out {
            writeln!(s, "  n{u} -> n{v};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// Graphviz rendering of the component DAG.
pub fn condensation_to_dot(c: &Condensation) -> String {
    let mut s = String::from("digraph condensation {\n");
    for (k, m) in c.members.iter().enumerate() {
        let label: Vec<String> = m.iter().map(usize::to_string).collect();
        let shape = if c.terminal[k] { ", shape=doublecircle" } else { "" };
        writeln!(s, "  c{k} [label=\"{{{}}}\"{shape}];", label.join(",")).unwrap();
    }
    for (k, out) in c.dag.iter().enumerate() {
        for &l in out {
            writeln!(s, "  c{k} -> c{l};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// `node,image,scc,in_cr,terminal`, one row per cell.
pub fn to_csv(grid: &GridSystem, graph: &ChainGraph) -> String {
    let c = condensation(graph);
    let mut s = String::from("node,image,scc,in_cr,terminal\n");
    for v in 0..graph.len() {
        let k = c.comp[v];
        writeln!(
            s,
            "{v},{},{k},{},{}",
            grid.step(v),
            u8::from(c.recurrent[k]),
            u8::from(c.terminal[k])
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{GridMetric, MapFamily, Q};
    use proptest::prelude::*;

    fn table(t: Vec<usize>) -> GridSystem {
        GridSystem::from_table(t, GridMetric::Interval, None).unwrap()
    }

    fn brute_cr(graph: &ChainGraph) -> Vec<usize> {
        (0..graph.len()).filter(|&v| reachable(graph, v)[v]).collect()
    }

    #[test]
    fn identity_graph() {
        let g = build_graph(&table((0..4).collect()), &Mag::ZERO, Exec::Sequential);
        assert_eq!(g.adjacency(), &[vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(chain_recurrent(&g), vec![0, 1, 2, 3]);
        assert_eq!(terminal_components(&g), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn rotation_cycle() {
        let grid = GridSystem::from_family(MapFamily::Rotation { shift: Q::new(1, 4) }, 4, None).unwrap();
        let g = build_graph(&grid, &Mag::ZERO, Exec::Sequential);
        assert_eq!(g.adjacency(), &[vec![1], vec![2], vec![3], vec![0]]);
        assert_eq!(chain_recurrent(&g), vec![0, 1, 2, 3]);
        assert_eq!(terminal_components(&g), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn doubling_edges() {
        let grid = GridSystem::from_family(MapFamily::Doubling, 4, None).unwrap();
        let g = build_graph(&grid, &Mag::ratio(1, 8), Exec::Sequential);
        assert_eq!(g.successors(0), &[0, 1]);
        assert!(g.matches(&grid));
    }

    #[test]
    fn halving_table() {
        let g = build_graph(&table((0..8).map(|i| i / 2).collect()), &Mag::ZERO, Exec::Sequential);
        assert_eq!(chain_recurrent(&g), vec![0]);
        assert_eq!(brute_cr(&g), vec![0]);
    }

    #[test]
    fn terminal_examples() {
        let g = build_graph(&table(vec![0, 0, 2]), &Mag::ZERO, Exec::Sequential);
        assert_eq!(terminal_components(&g), vec![vec![0], vec![2]]);
        let mut t: Vec<usize> = (0..8).map(|i| i / 2).collect();
        t[7] = 7;
        let g = build_graph(&table(t), &Mag::ZERO, Exec::Sequential);
        assert_eq!(terminal_components(&g), vec![vec![0], vec![7]]);
    }

    #[test]
    fn scan_examples() {
        let grid = GridSystem::from_family(MapFamily::Logistic { r: Q::new(7, 2) }, 32, None).unwrap();
        assert_eq!(
            chain_continuity_scan(&grid, &Mag::ZERO, &Mag::ZERO, 20, Exec::Sequential).len(),
            32
        );
        let halving = GridSystem::from_table((0..16).map(|i| i / 2).collect(), GridMetric::Interval, None).unwrap();
        let all = chain_continuity_scan(&halving, &Mag::ratio(4, 16), &Mag::ratio(1, 16), 16, Exec::Sequential);
        assert_eq!(all, (0..16).collect::<Vec<_>>());
    }

    #[test]
    fn scan_excludes_basin_boundary() {
        // Two attractors 0 and 9; the fixed cell 4 has δ-edges into both basins.
        let grid = table(vec![0, 0, 0, 0, 4, 9, 9, 9, 9, 9]);
        let scan = chain_continuity_scan(&grid, &Mag::ratio(2, 10), &Mag::ratio(1, 10), 12, Exec::Sequential);
        assert_eq!(scan, vec![0, 1, 2, 3, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn outputs() {
        let grid = table(vec![0, 0, 2]);
        let g = build_graph(&grid, &Mag::ZERO, Exec::Sequential);
        assert_eq!(to_csv(&grid, &g), "node,image,scc,in_cr,terminal\n0,0,0,1,1\n1,0,1,0,0\n2,2,2,1,1\n");
        let dot = to_dot(&g);
        assert!(dot.contains("n1 -> n0;"));
        assert!(condensation_to_dot(&condensation(&g)).contains("c1 -> c0;"));
    }

    #[test]
    fn ladder_intersects() {
        let grid = GridSystem::from_family(MapFamily::Logistic { r: Q::new(3, 1) }, 40, None).unwrap();
        let ds = [Mag::ratio(1, 10), Mag::ratio(1, 20), Mag::ratio(1, 40)];
        let ladder = cr_ladder(&grid, &ds, Exec::Sequential);
        for d in &ds {
            let cr = chain_recurrent(&build_graph(&grid, d, Exec::Sequential));
            assert!(ladder.iter().all(|v| cr.contains(v)));
        }
    }

    fn random_table() -> impl Strategy<Value = Vec<usize>> {
        (1usize..60).prop_flat_map(|n| proptest::collection::vec(0..n, n))
    }

    proptest! {
        #[test]
        fn cr_matches_brute_force(t in random_table(), k in 0u128..4) {
            let n = t.len() as u128;
            let grid = table(t);
            let g = build_graph(&grid, &Mag::ratio(k, n), Exec::Sequential);
            prop_assert!(g.matches(&grid));
            prop_assert_eq!(chain_recurrent(&g), brute_cr(&g));
        }

        #[test]
        fn monotone_in_delta(t in random_table(), k in 0u128..4) {
            let n = t.len() as u128;
            let grid = table(t);
            let small = build_graph(&grid, &Mag::ratio(k, 2 * n), Exec::Sequential);
            let big = build_graph(&grid, &Mag::ratio(k + 1, 2 * n), Exec::Sequential);
            for i in 0..grid.len() {
                for &j in small.successors(i) {
                    prop_assert!(big.has_edge(i, j));
                }
            }
            let cr_big = chain_recurrent(&big);
            prop_assert!(chain_recurrent(&small).iter().all(|v| cr_big.contains(v)));
        }

        #[test]
        fn terminal_components_absorb(t in random_table(), k in 0u128..3) {
            let n = t.len() as u128;
            let grid = table(t);
            let g = build_graph(&grid, &Mag::ratio(k, n), Exec::Sequential);
            for comp in terminal_components(&g) {
                for &u in &comp {
                    prop_assert!(g.successors(u).iter().all(|v| comp.contains(v)));
                }
            }
        }

        #[test]
        fn scan_monotonicity(t in random_table(), k in 0u128..3, e in 0u128..4) {
            let n = t.len() as u128;
            let grid = table(t);
            let scan = |d: u128, e: u128| {
                chain_continuity_scan(&grid, &Mag::ratio(e, n), &Mag::ratio(d, n), 8, Exec::Sequential)
            };
            prop_assert_eq!(scan(0, e).len(), grid.len());
            let base = scan(k, e);
            prop_assert!(scan(k + 1, e).iter().all(|v| base.contains(v)));
            prop_assert!(base.iter().all(|v| scan(k, e + 1).contains(v)));
        }

        #[test]
        fn parallel_build_is_identical(t in random_table(), k in 0u128..4) {
            let n = t.len() as u128;
            let grid = table(t);
            let d = Mag::ratio(k, n);
            prop_assert_eq!(
                build_graph(&grid, &d, Exec::Sequential),
                build_graph(&grid, &d, Exec::Parallel)
            );
        }
    }
}
