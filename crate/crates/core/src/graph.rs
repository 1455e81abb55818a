//! Transaction graph data model.
//!
//! A [`TransactionGraph`] is an ego-network around one target account. It is
//! immutable after construction; every derived view (projection, attribute
//! stripping) produces a new graph.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("address must not be empty")]
    EmptyAddress,
    #[error("graph violates {} invariant(s): {}", .0.len(), join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Account identifier, lowercased at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Address(String);

impl Address {
    pub fn new(id: impl AsRef<str>) -> Result<Self, GraphError> {
        let id = id.as_ref().trim();
        if id.is_empty() {
            return Err(GraphError::EmptyAddress);
        }
        Ok(Address(id.to_lowercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Address {
    type Error = GraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Address::new(value)
    }
}

impl From<Address> for String {
    fn from(a: Address) -> Self {
        a.0
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type EdgeId = u64;

/// One transaction: `src` pays `amount` to `dst`, optionally at `timestamp`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub edge_id: EdgeId,
    pub src: Address,
    pub dst: Address,
    pub amount: f64,
    pub timestamp: Option<i64>,
}

impl EdgeRecord {
    pub fn new(
        edge_id: EdgeId,
        src: Address,
        dst: Address,
        amount: f64,
        timestamp: Option<i64>,
    ) -> Self {
        EdgeRecord {
            edge_id,
            src,
            dst,
            amount,
            timestamp,
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.src == self.dst
    }

    fn unordered_key(&self) -> (&Address, &Address) {
        if self.src <= self.dst {
            (&self.src, &self.dst)
        } else {
            (&self.dst, &self.src)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphFlags {
    pub directed: bool,
    pub temporal: bool,
    pub multiedge: bool,
}

impl GraphFlags {
    pub const PLAIN: GraphFlags = GraphFlags {
        directed: false,
        temporal: false,
        multiedge: false,
    };
    pub const DIRECTED: GraphFlags = GraphFlags {
        directed: true,
        temporal: false,
        multiedge: false,
    };
    pub const TEMPORAL: GraphFlags = GraphFlags {
        directed: true,
        temporal: true,
        multiedge: false,
    };
    pub const MULTI_TEMPORAL: GraphFlags = GraphFlags {
        directed: true,
        temporal: true,
        multiedge: true,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    EmptyAddress,
    InvalidAmount,
    SelfLoop,
    DuplicateEdgeId,
    DanglingEndpoint,
    MissingTimestamp,
    ParallelEdge,
    CenterMissing,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::EmptyAddress => "address is empty",
            Rule::InvalidAmount => "amount must be finite and non-negative",
            Rule::SelfLoop => "source equals destination",
            Rule::DuplicateEdgeId => "edge id is not unique",
            Rule::DanglingEndpoint => "endpoint is not a graph node",
            Rule::MissingTimestamp => "temporal graph edge has no timestamp",
            Rule::ParallelEdge => "parallel edge in a simple graph",
            Rule::CenterMissing => "center is not a graph node",
        };
        f.write_str(s)
    }
}

/// One invariant breach found by [`TransactionGraph::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    /// The offending edge (`edge <id>`) or node (`node <address>`).
    pub subject: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.rule)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransactionGraph {
    nodes: BTreeSet<Address>,
    edges: Vec<EdgeRecord>,
    flags: GraphFlags,
    center: Address,
    label: Option<String>,
}

impl TransactionGraph {
    /// Builds a graph whose node set is the center plus every edge endpoint,
    /// rejecting it if any invariant fails.
    pub fn new(
        edges: Vec<EdgeRecord>,
        flags: GraphFlags,
        center: Address,
        label: Option<String>,
    ) -> Result<Self, GraphError> {
        let mut nodes = BTreeSet::new();
        nodes.insert(center.clone());
        for e in &edges {
            nodes.insert(e.src.clone());
            nodes.insert(e.dst.clone());
        }
        let g = Self::from_parts(nodes, edges, flags, center, label);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// Assembles a graph without checking invariants. Pair with
    /// [`validate`](Self::validate) when the parts come from untrusted input.
    pub fn from_parts(
        nodes: BTreeSet<Address>,
        edges: Vec<EdgeRecord>,
        flags: GraphFlags,
        center: Address,
        label: Option<String>,
    ) -> Self {
        TransactionGraph {
            nodes,
            edges,
            flags,
            center,
            label,
        }
    }

    pub fn nodes(&self) -> &BTreeSet<Address> {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn flags(&self) -> GraphFlags {
        self.flags
    }

    pub fn center(&self) -> &Address {
        &self.center
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when every edge carries a timestamp.
    pub fn has_timestamps(&self) -> bool {
        self.edges.iter().all(|e| e.timestamp.is_some())
    }

    /// Lists every invariant breach; empty iff the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let edge = |e: &EdgeRecord| format!("edge {}", e.edge_id);

        if !self.nodes.contains(&self.center) {
            out.push(Violation {
                rule: Rule::CenterMissing,
                subject: format!("node {}", self.center),
            });
        }
        for n in &self.nodes {
            if n.as_str().is_empty() {
                out.push(Violation {
                    rule: Rule::EmptyAddress,
                    subject: "node ''".to_string(),
                });
            }
        }

        let mut ids = HashSet::new();
        let mut pairs = HashSet::new();
        for e in &self.edges {
            if !(e.amount.is_finite() && e.amount >= 0.0) {
                out.push(Violation {
                    rule: Rule::InvalidAmount,
                    subject: edge(e),
                });
            }
            if e.is_self_loop() {
                out.push(Violation {
                    rule: Rule::SelfLoop,
                    subject: edge(e),
                });
            }
            if !ids.insert(e.edge_id) {
                out.push(Violation {
                    rule: Rule::DuplicateEdgeId,
                    subject: edge(e),
                });
            }
            if !self.nodes.contains(&e.src) || !self.nodes.contains(&e.dst) {
                out.push(Violation {
                    rule: Rule::DanglingEndpoint,
                    subject: edge(e),
                });
            }
            if self.flags.temporal && e.timestamp.is_none() {
                out.push(Violation {
                    rule: Rule::MissingTimestamp,
                    subject: edge(e),
                });
            }
            if !self.flags.multiedge {
                let key = if self.flags.directed {
                    (&e.src, &e.dst)
                } else {
                    e.unordered_key()
                };
                if !pairs.insert(key) {
                    out.push(Violation {
                        rule: Rule::ParallelEdge,
                        subject: edge(e),
                    });
                }
            }
        }
        out
    }

    /// Drops direction: one edge per unordered node pair, keeping the record
    /// with the largest amount (lowest edge id on ties).
    pub fn undirected_projection(&self) -> TransactionGraph {
        let edges = collapse(&self.edges, |e| e.unordered_key());
        TransactionGraph {
            nodes: self.nodes.clone(),
            edges,
            flags: GraphFlags {
                directed: false,
                multiedge: false,
                temporal: self.flags.temporal,
            },
            center: self.center.clone(),
            label: self.label.clone(),
        }
    }

    /// Collapses parallel same-direction records to one per ordered pair
    /// (largest amount wins). Undirected graphs fall back to
    /// [`undirected_projection`](Self::undirected_projection).
    pub fn directed_projection(&self) -> TransactionGraph {
        if !self.flags.directed {
            return self.undirected_projection();
        }
        let edges = collapse(&self.edges, |e| (&e.src, &e.dst));
        TransactionGraph {
            nodes: self.nodes.clone(),
            edges,
            flags: GraphFlags {
                multiedge: false,
                ..self.flags
            },
            center: self.center.clone(),
            label: self.label.clone(),
        }
    }

    /// Removes timestamps and clears the temporal flag.
    pub fn without_timestamps(&self) -> TransactionGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeRecord {
                timestamp: None,
                ..e.clone()
            })
            .collect();
        TransactionGraph {
            nodes: self.nodes.clone(),
            edges,
            flags: GraphFlags {
                temporal: false,
                ..self.flags
            },
            center: self.center.clone(),
            label: self.label.clone(),
        }
    }

    pub fn view(&self, retained: Attributes) -> GraphAttributeView<'_> {
        GraphAttributeView {
            base: self,
            retained,
        }
    }
}

/// Keeps one record per key: the largest amount, then the lowest edge id.
/// Survivors stay in their original relative order.
fn collapse<'a, K: Ord>(
    edges: &'a [EdgeRecord],
    key: impl Fn(&'a EdgeRecord) -> K,
) -> Vec<EdgeRecord> {
    let mut best: BTreeMap<K, usize> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        match best.entry(key(e)) {
            Entry::Vacant(v) => {
                v.insert(i);
            }
            Entry::Occupied(mut o) => {
                let cur = &edges[*o.get()];
                if e.amount > cur.amount || (e.amount == cur.amount && e.edge_id < cur.edge_id) {
                    o.insert(i);
                }
            }
        }
    }
    let mut keep: Vec<usize> = best.into_values().collect();
    keep.sort_unstable();
    keep.into_iter().map(|i| edges[i].clone()).collect()
}

/// The transaction attributes a mapping needs (weight is always carried).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attributes {
    pub weight: bool,
    pub direction: bool,
    pub timestamp: bool,
    pub multiedge: bool,
}

impl Attributes {
    pub const PLAIN: Attributes = Attributes {
        weight: true,
        direction: false,
        timestamp: false,
        multiedge: false,
    };
    pub const DIRECTED: Attributes = Attributes {
        direction: true,
        ..Self::PLAIN
    };
    pub const TEMPORAL: Attributes = Attributes {
        timestamp: true,
        ..Self::DIRECTED
    };
    pub const MULTIPLE: Attributes = Attributes {
        multiedge: true,
        ..Self::TEMPORAL
    };
}

/// A graph seen through a subset of its transaction attributes.
#[derive(Clone, Copy, Debug)]
pub struct GraphAttributeView<'a> {
    pub base: &'a TransactionGraph,
    pub retained: Attributes,
}

impl GraphAttributeView<'_> {
    /// Produces the graph with dropped attributes removed. Dropping direction
    /// or multi-edges collapses records (largest amount wins); dropping weight
    /// zeroes every amount.
    pub fn materialize(&self) -> TransactionGraph {
        let r = self.retained;
        let f = self.base.flags;
        let mut g = if !r.direction && (f.directed || f.multiedge) {
            self.base.undirected_projection()
        } else if !r.multiedge && f.multiedge {
            self.base.directed_projection()
        } else {
            self.base.clone()
        };
        if !r.direction {
            g.flags.directed = false;
        }
        if !r.timestamp && (g.flags.temporal || g.edges.iter().any(|e| e.timestamp.is_some())) {
            g = g.without_timestamps();
        }
        if !r.weight {
            for e in &mut g.edges {
                e.amount = 0.0;
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Address {
        Address::new(s).unwrap()
    }

    fn rec(id: u64, s: &str, d: &str, w: f64, t: Option<i64>) -> EdgeRecord {
        EdgeRecord::new(id, a(s), a(d), w, t)
    }

    /// Star with e1..e5 around the center and e6/e7 between neighbours.
    fn star_with_trades() -> TransactionGraph {
        let edges = vec![
            rec(1, "n1", "c", 1.0, None),
            rec(2, "c", "n2", 2.0, None),
            rec(3, "n3", "c", 3.0, None),
            rec(4, "c", "n4", 4.0, None),
            rec(5, "n5", "c", 5.0, None),
            rec(6, "n1", "n2", 6.0, None),
            rec(7, "n3", "n4", 7.0, None),
        ];
        TransactionGraph::new(edges, GraphFlags::DIRECTED, a("c"), None).unwrap()
    }

    #[test]
    fn address_is_lowercased() {
        assert_eq!(a("0xABcD").as_str(), "0xabcd");
        assert_eq!(a("0xabcd"), a("0XABCD"));
        assert_eq!(Address::new("  "), Err(GraphError::EmptyAddress));
    }

    #[test]
    fn well_formed_star_validates() {
        assert!(star_with_trades().validate().is_empty());
    }

    #[test]
    fn negative_amount_is_one_violation() {
        let g = TransactionGraph::from_parts(
            [a("x"), a("y")].into_iter().collect(),
            vec![rec(0, "x", "y", -1.0, None)],
            GraphFlags::DIRECTED,
            a("x"),
            None,
        );
        let v = g.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::InvalidAmount);
        assert_eq!(v[0].subject, "edge 0");
    }

    #[test]
    fn temporal_graph_missing_timestamp() {
        let g = TransactionGraph::from_parts(
            [a("x"), a("y"), a("z")].into_iter().collect(),
            vec![rec(0, "x", "y", 1.0, Some(3)), rec(1, "y", "z", 1.0, None)],
            GraphFlags::TEMPORAL,
            a("x"),
            None,
        );
        let v = g.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::MissingTimestamp);
        assert_eq!(v[0].subject, "edge 1");
    }

    #[test]
    fn other_rules_are_reported() {
        let g = TransactionGraph::from_parts(
            [a("x"), a("y")].into_iter().collect(),
            vec![
                rec(0, "x", "y", 1.0, None),
                rec(0, "x", "y", 1.0, None),
                rec(2, "x", "x", 1.0, None),
                rec(3, "x", "q", 1.0, None),
            ],
            GraphFlags::DIRECTED,
            a("c"),
            None,
        );
        let rules: Vec<Rule> = g.validate().into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::CenterMissing));
        assert!(rules.contains(&Rule::DuplicateEdgeId));
        assert!(rules.contains(&Rule::ParallelEdge));
        assert!(rules.contains(&Rule::SelfLoop));
        assert!(rules.contains(&Rule::DanglingEndpoint));
    }

    #[test]
    fn new_rejects_invalid() {
        let err = TransactionGraph::new(
            vec![rec(0, "x", "y", f64::NAN, None)],
            GraphFlags::DIRECTED,
            a("x"),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::Invalid(v) if v.len() == 1));
    }

    #[test]
    fn anti_parallel_pair_collapses_to_max_amount() {
        let forward = vec![rec(0, "a", "b", 2.0, None), rec(1, "b", "a", 5.0, None)];
        let mut backward = forward.clone();
        backward.reverse();
        for edges in [forward, backward] {
            let g = TransactionGraph::new(edges, GraphFlags::DIRECTED, a("a"), None).unwrap();
            let p = g.undirected_projection();
            assert_eq!(p.edge_count(), 1);
            assert_eq!(p.edges()[0].amount, 5.0);
            assert_eq!(p.edges()[0].edge_id, 1);
            assert!(!p.flags().directed);
        }
    }

    #[test]
    fn equal_amounts_keep_lowest_edge_id() {
        let g = TransactionGraph::new(
            vec![rec(9, "a", "b", 3.0, None), rec(4, "b", "a", 3.0, None)],
            GraphFlags::DIRECTED,
            a("a"),
            None,
        )
        .unwrap();
        assert_eq!(g.undirected_projection().edges()[0].edge_id, 4);
    }

    #[test]
    fn undirected_graph_projects_to_itself() {
        let g = star_with_trades().undirected_projection();
        assert_eq!(g.undirected_projection(), g);
    }

    #[test]
    fn star_projection_keeps_three_edges() {
        let g = TransactionGraph::new(
            vec![
                rec(0, "a", "b", 1.0, None),
                rec(1, "a", "c", 1.0, None),
                rec(2, "a", "d", 1.0, None),
            ],
            GraphFlags::DIRECTED,
            a("a"),
            None,
        )
        .unwrap();
        let p = g.undirected_projection();
        assert_eq!(p.edge_count(), 3);
        assert_eq!(p.nodes(), g.nodes());
    }

    #[test]
    fn directed_projection_merges_parallel_only() {
        let g = TransactionGraph::new(
            vec![
                rec(0, "a", "b", 1.0, Some(1)),
                rec(1, "a", "b", 4.0, Some(5)),
                rec(2, "b", "a", 2.0, Some(9)),
            ],
            GraphFlags::MULTI_TEMPORAL,
            a("a"),
            None,
        )
        .unwrap();
        let p = g.directed_projection();
        assert_eq!(p.edge_count(), 2);
        assert_eq!(p.edges()[0].edge_id, 1);
        assert_eq!(p.edges()[0].timestamp, Some(5));
        assert!(p.validate().is_empty());
    }

    #[test]
    fn attribute_view_plain_drops_direction_and_time() {
        let g = TransactionGraph::new(
            vec![
                rec(0, "a", "b", 1.0, Some(1)),
                rec(1, "b", "a", 2.0, Some(2)),
            ],
            GraphFlags::TEMPORAL,
            a("a"),
            None,
        )
        .unwrap();
        let p = g.view(Attributes::PLAIN).materialize();
        assert_eq!(p.flags(), GraphFlags::PLAIN);
        assert_eq!(p.edge_count(), 1);
        assert_eq!(p.edges()[0].timestamp, None);
        let t = g.view(Attributes::TEMPORAL).materialize();
        assert_eq!(t, g);
    }
}
