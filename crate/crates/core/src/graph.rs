//! Thresholded tag co-occurrence network.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::ngram::{CountTable, TagPair};

pub const DEFAULT_THRESHOLD: u64 = 2;

/// Undirected weighted graph; every edge weight is at least `threshold`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceGraph {
    nodes: BTreeSet<String>,
    edges: BTreeMap<TagPair, u64>,
    threshold: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphError {
    ZeroThreshold,
    /// Edge below the threshold or touching an unknown node.
    InvalidEdge,
}

impl core::fmt::Display for GraphError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GraphError::ZeroThreshold => f.write_str("threshold must be at least 1"),
            GraphError::InvalidEdge => {
                f.write_str("edge weight below threshold or endpoint missing from node set")
            }
        }
    }
}

impl core::error::Error for GraphError {}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions<'a> {
    /// Both endpoints of a kept edge must be listed here.
    pub whitelist: Option<&'a BTreeSet<String>>,
    /// Keep whitelisted nodes that end up without edges.
    pub retain_isolates: bool,
}

impl CooccurrenceGraph {
    /// Assembles a graph from parts, checking the invariants.
    pub fn from_parts(
        nodes: BTreeSet<String>,
        edges: BTreeMap<TagPair, u64>,
        threshold: u64,
    ) -> Result<Self, GraphError> {
        if threshold == 0 {
            return Err(GraphError::ZeroThreshold);
        }
        let ok = edges
            .iter()
            .all(|(p, &w)| w >= threshold && nodes.contains(p.a()) && nodes.contains(p.b()));
        if !ok {
            return Err(GraphError::InvalidEdge);
        }
        Ok(CooccurrenceGraph {
            nodes,
            edges,
            threshold,
        })
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<TagPair, u64> {
        &self.edges
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn weight(&self, pair: &TagPair) -> Option<u64> {
        self.edges.get(pair).copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.edges.values().copied().max()
    }
}

/// Keeps pairs counted at least `threshold` times.
pub fn build_graph(
    pairs: &CountTable<TagPair>,
    threshold: u64,
    options: &BuildOptions<'_>,
) -> Result<CooccurrenceGraph, GraphError> {
    if threshold == 0 {
        return Err(GraphError::ZeroThreshold);
    }
    let allowed = |tag: &str| options.whitelist.is_none_or(|w| w.contains(tag));
    let edges: BTreeMap<TagPair, u64> = pairs
        .iter()
        .filter(|(p, c)| *c >= threshold && allowed(p.a()) && allowed(p.b()))
        .map(|(p, c)| (p.clone(), c))
        .collect();
    let mut nodes: BTreeSet<String> = edges
        .keys()
        .flat_map(|p| [String::from(p.a()), String::from(p.b())])
        .collect();
    if options.retain_isolates {
        if let Some(w) = options.whitelist {
            nodes.extend(w.iter().cloned());
        }
    }
    Ok(CooccurrenceGraph {
        nodes,
        edges,
        threshold,
    })
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // keep the smaller index as root so roots follow node order
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }
}

/// Connected components, ordered by their smallest member.
pub fn components(graph: &CooccurrenceGraph) -> Vec<BTreeSet<String>> {
    components_with_min_weight(graph, graph.threshold)
}

/// Components over edges of weight ≥ `min_weight` only, for a stricter
/// cluster cut than the graph threshold. Every node still appears.
pub fn components_with_min_weight(graph: &CooccurrenceGraph, min_weight: u64) -> Vec<BTreeSet<String>> {
    let index: BTreeMap<&str, usize> = graph
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut sets = DisjointSet::new(index.len());
    for (pair, &w) in &graph.edges {
        if w >= min_weight {
            sets.union(index[pair.a()], index[pair.b()]);
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (name, &i) in &index {
        let root = sets.find(i);
        groups.entry(root).or_default().insert(String::from(*name));
    }
    // roots are the smallest index of each set, and node indices follow
    // lexicographic order, so root order is smallest-member order
    groups.into_values().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadEntry {
    pub pair: TagPair,
    pub weight: u64,
    /// weight / heaviest edge weight
    pub ratio: f64,
}

/// Heaviest `k` edges with their ratio to the heaviest edge.
pub fn dyad_report(graph: &CooccurrenceGraph, k: usize) -> Vec<DyadEntry> {
    let Some(max) = graph.max_weight() else {
        return Vec::new();
    };
    let mut edges: Vec<(&TagPair, u64)> = graph.edges.iter().map(|(p, &w)| (p, w)).collect();
    edges.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(y.0)));
    edges
        .into_iter()
        .take(k)
        .map(|(pair, weight)| DyadEntry {
            pair: pair.clone(),
            weight,
            ratio: weight as f64 / max as f64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn pair(a: &str, b: &str) -> TagPair {
        TagPair::new(a, b).unwrap()
    }

    fn table(items: &[(&str, &str, u64)]) -> CountTable<TagPair> {
        let mut t = CountTable::new();
        for &(a, b, c) in items {
            t.add_n(pair(a, b), c);
        }
        t
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn threshold_boundary() {
        let g = build_graph(&table(&[("a", "b", 1), ("b", "c", 2)]), 2, &BuildOptions::default()).unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.weight(&pair("b", "c")), Some(2));
        assert_eq!(g.nodes(), &set(&["b", "c"]));
    }

    #[test]
    fn zero_threshold_rejected() {
        assert_eq!(
            build_graph(&CountTable::new(), 0, &BuildOptions::default()),
            Err(GraphError::ZeroThreshold)
        );
    }

    #[test]
    fn whitelist_and_isolates() {
        let pairs = table(&[("a", "b", 5), ("a", "z", 5)]);
        let wl = set(&["a", "b", "c"]);
        let g = build_graph(
            &pairs,
            2,
            &BuildOptions {
                whitelist: Some(&wl),
                retain_isolates: false,
            },
        )
        .unwrap();
        assert_eq!(g.nodes(), &set(&["a", "b"]));
        let g = build_graph(
            &pairs,
            2,
            &BuildOptions {
                whitelist: Some(&wl),
                retain_isolates: true,
            },
        )
        .unwrap();
        assert_eq!(g.nodes(), &wl);
        assert_eq!(
            components(&g),
            vec![set(&["a", "b"]), set(&["c"])]
        );
    }

    #[test]
    fn edgeless_graph_has_singletons() {
        let g = CooccurrenceGraph::from_parts(set(&["x", "y", "z"]), BTreeMap::new(), 2).unwrap();
        assert_eq!(components(&g), vec![set(&["x"]), set(&["y"]), set(&["z"])]);
    }

    #[test]
    fn triangle_is_one_component() {
        let g = build_graph(
            &table(&[("a", "b", 2), ("b", "c", 2), ("a", "c", 2)]),
            2,
            &BuildOptions::default(),
        )
        .unwrap();
        assert_eq!(components(&g), vec![set(&["a", "b", "c"])]);
    }

    #[test]
    fn stricter_cluster_cut() {
        let g = build_graph(&table(&[("a", "b", 10), ("b", "c", 2)]), 2, &BuildOptions::default()).unwrap();
        assert_eq!(components_with_min_weight(&g, 5), vec![set(&["a", "b"]), set(&["c"])]);
    }

    #[test]
    fn dyads_carry_ratio() {
        let g = build_graph(
            &table(&[("sthlmriots", "svpol", 533), ("migpol", "sthlmriots", 37)]),
            2,
            &BuildOptions::default(),
        )
        .unwrap();
        let d = dyad_report(&g, 5);
        assert_eq!(d[0].weight, 533);
        assert_eq!(d[0].ratio, 1.0);
        assert!((d[1].ratio - 37.0 / 533.0).abs() < 1e-12);
        assert!(dyad_report(&CooccurrenceGraph::from_parts(BTreeSet::new(), BTreeMap::new(), 1).unwrap(), 3).is_empty());
    }

    #[test]
    fn from_parts_checks_invariants() {
        let mut edges = BTreeMap::new();
        edges.insert(pair("a", "b"), 1);
        assert_eq!(
            CooccurrenceGraph::from_parts(set(&["a", "b"]), edges.clone(), 2),
            Err(GraphError::InvalidEdge)
        );
        assert_eq!(
            CooccurrenceGraph::from_parts(set(&["a"]), edges, 1),
            Err(GraphError::InvalidEdge)
        );
    }
}
