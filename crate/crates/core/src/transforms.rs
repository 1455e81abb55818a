//! Transaction subgraph network (TSGN) mappings.
//!
//! Every mapping turns the transactions of a [`TransactionGraph`] into the
//! nodes of a [`TsgnGraph`] and links two transactions when they are adjacent
//! under the variant's rule:
//!
//! | variant    | input view                   | link `a -> b` when                          |
//! |------------|------------------------------|---------------------------------------------|
//! | `Plain`    | undirected, simple           | `a` and `b` share an endpoint (undirected)  |
//! | `Directed` | directed, simple             | `dst(a) == src(b)`                          |
//! | `Temporal` | directed, simple, timestamps | `dst(a) == src(b)` and `t(a) < t(b)`        |
//! | `Multiple` | directed, every record       | `dst(a) == src(b)` and `t(a) < t(b)`        |
//!
//! Directed mappings only need the head-to-tail test: a head-to-tail pair
//! always shares the middle address. Anti-parallel pairs produce a 2-cycle
//! in the directed mapping and a single forward edge in the temporal ones.
//!
//! Nodes are ordered by edge id and edges lexicographically by
//! `(from, to)`, so output is deterministic.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Address, Attributes, EdgeId, EdgeRecord, TransactionGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("direction attribute required: input graph is undirected")]
    MissingDirection,
    #[error("temporal attribute required: edge {0} has no timestamp")]
    MissingTimestamp(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Directed,
    Temporal,
    Multiple,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Plain,
        Variant::Directed,
        Variant::Temporal,
        Variant::Multiple,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Plain => "tsgn",
            Variant::Directed => "dtsgn",
            Variant::Temporal => "ttsgn",
            Variant::Multiple => "mtsgn",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Variant::Plain => "TSGN",
            Variant::Directed => "Directed-TSGN",
            Variant::Temporal => "Temporal-TSGN",
            Variant::Multiple => "Multiple-TSGN",
        }
    }

    /// Attributes the mapping reads from its input graph.
    pub fn attributes(self) -> Attributes {
        match self {
            Variant::Plain => Attributes::PLAIN,
            Variant::Directed => Attributes::DIRECTED,
            Variant::Temporal => Attributes::TEMPORAL,
            Variant::Multiple => Attributes::MULTIPLE,
        }
    }

    pub fn build(self, g: &TransactionGraph) -> Result<TsgnGraph, TransformError> {
        match self {
            Variant::Plain => Ok(build_tsgn(g)),
            Variant::Directed => build_directed_tsgn(g),
            Variant::Temporal => build_temporal_tsgn(g),
            Variant::Multiple => build_multiple_tsgn(g),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsgn" | "plain" => Ok(Variant::Plain),
            "dtsgn" | "directed" => Ok(Variant::Directed),
            "ttsgn" | "temporal" => Ok(Variant::Temporal),
            "mtsgn" | "multiple" => Ok(Variant::Multiple),
            other => Err(format!("unknown TSGN variant '{other}'")),
        }
    }
}

/// Weight of a mapped edge from the amounts of its two transactions:
/// `0` when both are zero, `ln((a + b) / 2)` otherwise. May be negative.
pub fn map_weight(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        ((a + b) / 2.0).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TsgnEdge {
    /// Index into [`TsgnGraph::nodes`].
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TsgnGraph {
    nodes: Vec<EdgeRecord>,
    edges: Vec<TsgnEdge>,
    variant: Variant,
}

impl TsgnGraph {
    /// Each node wraps the source transaction it was mapped from.
    pub fn nodes(&self) -> &[EdgeRecord] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TsgnEdge] {
        &self.edges
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_directed(&self) -> bool {
        self.variant != Variant::Plain
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(from_edge_id, to_edge_id)` pairs.
    pub fn edge_id_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        self.edges
            .iter()
            .map(|e| (self.nodes[e.from].edge_id, self.nodes[e.to].edge_id))
            .collect()
    }

    /// Kahn's algorithm; a plain (undirected) graph with any edge is cyclic.
    pub fn is_acyclic(&self) -> bool {
        if !self.is_directed() {
            return self.edges.is_empty();
        }
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            indeg[e.to] += 1;
            out[e.from].push(e.to);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }
}

/// Plain TSGN: undirected line graph of the undirected projection.
pub fn build_tsgn(g: &TransactionGraph) -> TsgnGraph {
    let g = g.view(Attributes::PLAIN).materialize();
    let nodes = sorted_records(&g);

    let mut incident: HashMap<&Address, Vec<usize>> = HashMap::new();
    for (i, e) in nodes.iter().enumerate() {
        incident.entry(&e.src).or_default().push(i);
        incident.entry(&e.dst).or_default().push(i);
    }
    // After projection two records share at most one endpoint, so each
    // pair is produced exactly once.
    let mut pairs = Vec::new();
    for list in incident.values() {
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    finish(nodes, pairs, Variant::Plain)
}

/// Directed TSGN: `a -> b` whenever `a` ends where `b` starts.
pub fn build_directed_tsgn(g: &TransactionGraph) -> Result<TsgnGraph, TransformError> {
    if !g.flags().directed {
        return Err(TransformError::MissingDirection);
    }
    let g = g.view(Attributes::DIRECTED).materialize();
    let nodes = sorted_records(&g);

    let mut flow: HashMap<&Address, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for (i, e) in nodes.iter().enumerate() {
        flow.entry(&e.dst).or_default().0.push(i);
        flow.entry(&e.src).or_default().1.push(i);
    }
    let mut pairs = Vec::new();
    for (inbound, outbound) in flow.values() {
        for &a in inbound {
            for &b in outbound {
                pairs.push((a, b));
            }
        }
    }
    Ok(finish(nodes, pairs, Variant::Directed))
}

/// Temporal TSGN: the directed rule restricted to strictly increasing
/// timestamps, on the simple directed view.
pub fn build_temporal_tsgn(g: &TransactionGraph) -> Result<TsgnGraph, TransformError> {
    check_temporal(g)?;
    let g = g.view(Attributes::TEMPORAL).materialize();
    Ok(temporal_mapping(sorted_records(&g), Variant::Temporal))
}

/// Multiple TSGN: the temporal rule applied to every individual record,
/// parallel transfers included.
pub fn build_multiple_tsgn(g: &TransactionGraph) -> Result<TsgnGraph, TransformError> {
    check_temporal(g)?;
    Ok(temporal_mapping(sorted_records(g), Variant::Multiple))
}

fn check_temporal(g: &TransactionGraph) -> Result<(), TransformError> {
    if let Some(e) = g.edges().iter().find(|e| e.timestamp.is_none()) {
        return Err(TransformError::MissingTimestamp(e.edge_id));
    }
    if !g.flags().directed {
        return Err(TransformError::MissingDirection);
    }
    Ok(())
}

fn temporal_mapping(nodes: Vec<EdgeRecord>, variant: Variant) -> TsgnGraph {
    let ts = |i: usize| nodes[i].timestamp.expect("checked by caller");

    let mut flow: HashMap<&Address, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for (i, e) in nodes.iter().enumerate() {
        flow.entry(&e.dst).or_default().0.push(i);
        flow.entry(&e.src).or_default().1.push(i);
    }
    let mut pairs = Vec::new();
    for (inbound, outbound) in flow.values_mut() {
        if inbound.is_empty() || outbound.is_empty() {
            continue;
        }
        inbound.sort_by_key(|&i| ts(i));
        for &b in outbound.iter() {
            let tb = ts(b);
            let earlier = inbound.partition_point(|&a| ts(a) < tb);
            for &a in &inbound[..earlier] {
                pairs.push((a, b));
            }
        }
    }
    finish(nodes, pairs, variant)
}

fn sorted_records(g: &TransactionGraph) -> Vec<EdgeRecord> {
    let mut nodes = g.edges().to_vec();
    nodes.sort_by_key(|e| e.edge_id);
    nodes
}

fn finish(nodes: Vec<EdgeRecord>, mut pairs: Vec<(usize, usize)>, variant: Variant) -> TsgnGraph {
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(from, to)| TsgnEdge {
            from,
            to,
            weight: map_weight(nodes[from].amount, nodes[to].amount),
        })
        .collect();
    TsgnGraph {
        nodes,
        edges,
        variant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFlags;

    fn a(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    fn graph(flags: GraphFlags, edges: &[(u64, &str, &str, f64, Option<i64>)]) -> TransactionGraph {
        let recs = edges
            .iter()
            .map(|&(id, s, d, w, t)| EdgeRecord::new(id, a(s), a(d), w, t))
            .collect();
        let center = a(edges.first().map(|e| e.1).unwrap_or("c"));
        TransactionGraph::new(recs, flags, center, None).unwrap()
    }

    #[test]
    fn map_weight_cases() {
        assert_eq!(map_weight(0.0, 0.0), 0.0);
        assert_eq!(map_weight(1.0, 1.0), 0.0);
        assert!((map_weight(2.0 * std::f64::consts::E, 0.0) - 1.0).abs() < 1e-12);
        // mixed zero/non-zero takes the log branch
        assert_eq!(map_weight(0.0, 2.0), 0.0);
        assert!(map_weight(0.1, 0.1) < 0.0);
    }

    #[test]
    fn single_edge_has_no_links() {
        let g = graph(GraphFlags::PLAIN, &[(0, "a", "b", 1.0, None)]);
        let t = build_tsgn(&g);
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.edge_count(), 0);
    }

    #[test]
    fn empty_graph_maps_to_empty() {
        let g = TransactionGraph::new(vec![], GraphFlags::PLAIN, a("c"), None).unwrap();
        let t = build_tsgn(&g);
        assert_eq!((t.node_count(), t.edge_count()), (0, 0));
    }

    #[test]
    fn triangle_maps_to_triangle() {
        let g = graph(
            GraphFlags::PLAIN,
            &[
                (0, "a", "b", 1.0, None),
                (1, "b", "c", 1.0, None),
                (2, "c", "a", 1.0, None),
            ],
        );
        assert_eq!(build_tsgn(&g).edge_id_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn plain_weights_follow_amounts() {
        let g = graph(
            GraphFlags::PLAIN,
            &[(0, "a", "b", 2.0, None), (1, "b", "c", 4.0, None)],
        );
        let t = build_tsgn(&g);
        assert_eq!(t.edges()[0].weight, 3.0f64.ln());
    }

    #[test]
    fn directed_chain_and_shared_source() {
        let chain = graph(
            GraphFlags::DIRECTED,
            &[(0, "a", "b", 1.0, None), (1, "b", "c", 1.0, None)],
        );
        assert_eq!(
            build_directed_tsgn(&chain).unwrap().edge_id_pairs(),
            vec![(0, 1)]
        );

        let fork = graph(
            GraphFlags::DIRECTED,
            &[(0, "a", "b", 1.0, None), (1, "a", "c", 1.0, None)],
        );
        assert!(build_directed_tsgn(&fork)
            .unwrap()
            .edge_id_pairs()
            .is_empty());
    }

    #[test]
    fn directed_anti_parallel_is_two_cycle() {
        let g = graph(
            GraphFlags::DIRECTED,
            &[(0, "a", "b", 1.0, None), (1, "b", "a", 1.0, None)],
        );
        let t = build_directed_tsgn(&g).unwrap();
        assert_eq!(t.edge_id_pairs(), vec![(0, 1), (1, 0)]);
        assert!(!t.is_acyclic());
    }

    #[test]
    fn directed_rejects_undirected_input() {
        let g = graph(GraphFlags::PLAIN, &[(0, "a", "b", 1.0, None)]);
        assert_eq!(
            build_directed_tsgn(&g),
            Err(TransformError::MissingDirection)
        );
    }

    #[test]
    fn temporal_order_decides() {
        let ok = graph(
            GraphFlags::TEMPORAL,
            &[(0, "v1", "v2", 1.0, Some(4)), (1, "v2", "v3", 1.0, Some(7))],
        );
        assert_eq!(
            build_temporal_tsgn(&ok).unwrap().edge_id_pairs(),
            vec![(0, 1)]
        );

        let late = graph(
            GraphFlags::TEMPORAL,
            &[(0, "v1", "v2", 1.0, Some(7)), (1, "v2", "v3", 1.0, Some(4))],
        );
        assert!(build_temporal_tsgn(&late)
            .unwrap()
            .edge_id_pairs()
            .is_empty());

        let tie = graph(
            GraphFlags::TEMPORAL,
            &[(0, "v1", "v2", 1.0, Some(5)), (1, "v2", "v3", 1.0, Some(5))],
        );
        assert!(build_temporal_tsgn(&tie)
            .unwrap()
            .edge_id_pairs()
            .is_empty());
    }

    #[test]
    fn temporal_names_missing_timestamp() {
        let g = TransactionGraph::new(
            vec![
                EdgeRecord::new(0, a("x"), a("y"), 1.0, Some(1)),
                EdgeRecord::new(3, a("y"), a("z"), 1.0, None),
            ],
            GraphFlags::DIRECTED,
            a("x"),
            None,
        )
        .unwrap();
        assert_eq!(
            build_temporal_tsgn(&g),
            Err(TransformError::MissingTimestamp(3))
        );
        assert_eq!(
            build_multiple_tsgn(&g),
            Err(TransformError::MissingTimestamp(3))
        );
    }

    #[test]
    fn multiple_keeps_parallel_records() {
        let g = graph(
            GraphFlags::MULTI_TEMPORAL,
            &[
                (1, "a", "b", 1.0, Some(1)),
                (2, "a", "b", 1.0, Some(5)),
                (3, "b", "c", 1.0, Some(9)),
            ],
        );
        let t = build_multiple_tsgn(&g).unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edge_id_pairs(), vec![(1, 3), (2, 3)]);
        // the temporal variant collapses the parallel pair first
        assert_eq!(build_temporal_tsgn(&g).unwrap().node_count(), 2);
    }

    #[test]
    fn multiple_breaks_anti_parallel_loop() {
        let g = graph(
            GraphFlags::MULTI_TEMPORAL,
            &[(1, "a", "b", 1.0, Some(1)), (2, "b", "a", 1.0, Some(3))],
        );
        let t = build_multiple_tsgn(&g).unwrap();
        assert_eq!(t.edge_id_pairs(), vec![(1, 2)]);
        assert!(t.is_acyclic());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.short_name().parse::<Variant>().unwrap(), v);
        }
        assert!("xtsgn".parse::<Variant>().is_err());
    }
}
