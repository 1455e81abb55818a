//! Brute-force oracles, random graph builders and worked fixtures shared by
//! the integration and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use tsgn_core::features::SimpleGraph;
use tsgn_core::{Address, EdgeId, EdgeRecord, GraphFlags, TransactionGraph, Variant};

pub fn addr(name: &str) -> Address {
    Address::new(name).unwrap()
}

pub fn node(i: usize) -> Address {
    addr(&format!("v{i}"))
}

/// Attribute tier of a random test graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Plain,
    Directed,
    Temporal,
    Multiple,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Plain, Tier::Directed, Tier::Temporal, Tier::Multiple];

    pub fn flags(self) -> GraphFlags {
        match self {
            Tier::Plain => GraphFlags::PLAIN,
            Tier::Directed => GraphFlags::DIRECTED,
            Tier::Temporal => GraphFlags::TEMPORAL,
            Tier::Multiple => GraphFlags::MULTI_TEMPORAL,
        }
    }

    /// The mapping that exercises this tier.
    pub fn variant(self) -> Variant {
        match self {
            Tier::Plain => Variant::Plain,
            Tier::Directed => Variant::Directed,
            Tier::Temporal => Variant::Temporal,
            Tier::Multiple => Variant::Multiple,
        }
    }
}

/// Raw transaction draw: endpoints (reduced mod `n`), amount, timestamp.
pub type RawEdge = (usize, usize, u8, i64);

/// Builds a graph on `n` nodes from raw draws. Self-loops are skipped;
/// simple tiers keep the first draw per (ordered or unordered) pair.
pub fn graph_from_raw(tier: Tier, n: usize, raw: &[RawEdge]) -> TransactionGraph {
    let flags = tier.flags();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for &(a, b, amount, ts) in raw {
        let (a, b) = (a % n, b % n);
        if a == b {
            continue;
        }
        let key = if flags.directed {
            (a, b)
        } else {
            (a.min(b), a.max(b))
        };
        if !flags.multiedge && !seen.insert(key) {
            continue;
        }
        let ts = flags.temporal.then_some(ts);
        edges.push(EdgeRecord::new(
            edges.len() as EdgeId,
            node(a),
            node(b),
            amount as f64,
            ts,
        ));
    }
    TransactionGraph::new(edges, flags, node(0), None).unwrap()
}

pub fn random_raw(rng: &mut impl Rng, max_nodes: usize) -> (usize, Vec<RawEdge>) {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(0..=2 * n * (n - 1));
    let raw = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..4u8),
                rng.gen_range(0..6i64),
            )
        })
        .collect();
    (n, raw)
}

pub fn random_graph(rng: &mut impl Rng, tier: Tier, max_nodes: usize) -> TransactionGraph {
    let (n, raw) = random_raw(rng, max_nodes);
    graph_from_raw(tier, n, &raw)
}

/// One record per address pair (ordered when `directed`): the largest
/// amount, ties to the smallest edge id.
pub fn oracle_collapse(records: &[EdgeRecord], directed: bool) -> Vec<EdgeRecord> {
    let mut best: BTreeMap<(Address, Address), &EdgeRecord> = BTreeMap::new();
    for r in records {
        let key = if directed || r.src <= r.dst {
            (r.src.clone(), r.dst.clone())
        } else {
            (r.dst.clone(), r.src.clone())
        };
        best.entry(key)
            .and_modify(|cur| {
                if r.amount > cur.amount || (r.amount == cur.amount && r.edge_id < cur.edge_id) {
                    *cur = r;
                }
            })
            .or_insert(r);
    }
    let mut out: Vec<EdgeRecord> = best.into_values().cloned().collect();
    out.sort_by_key(|r| r.edge_id);
    out
}

/// Exhaustive pairwise mapping oracle. Undirected variants report pairs as
/// `(smaller id, larger id)`.
pub fn oracle_edges(g: &TransactionGraph, variant: Variant) -> BTreeSet<(EdgeId, EdgeId)> {
    let mut out = BTreeSet::new();
    match variant {
        Variant::Plain => {
            let recs = oracle_collapse(g.edges(), false);
            for (i, a) in recs.iter().enumerate() {
                for b in &recs[i + 1..] {
                    if a.src == b.src || a.src == b.dst || a.dst == b.src || a.dst == b.dst {
                        out.insert((a.edge_id.min(b.edge_id), a.edge_id.max(b.edge_id)));
                    }
                }
            }
        }
        Variant::Directed | Variant::Temporal | Variant::Multiple => {
            let recs = if variant == Variant::Multiple {
                g.edges().to_vec()
            } else {
                oracle_collapse(g.edges(), true)
            };
            for a in &recs {
                for b in &recs {
                    if a.edge_id == b.edge_id || a.dst != b.src {
                        continue;
                    }
                    if variant != Variant::Directed && a.timestamp.unwrap() >= b.timestamp.unwrap()
                    {
                        continue;
                    }
                    out.insert((a.edge_id, b.edge_id));
                }
            }
        }
    }
    out
}

pub fn oracle_node_count(g: &TransactionGraph, variant: Variant) -> usize {
    match variant {
        Variant::Plain => oracle_collapse(g.edges(), false).len(),
        Variant::Directed | Variant::Temporal => oracle_collapse(g.edges(), true).len(),
        Variant::Multiple => g.edge_count(),
    }
}

/// Mapped edge set in the oracle's pair convention.
pub fn mapped_pairs(g: &TransactionGraph, variant: Variant) -> BTreeSet<(EdgeId, EdgeId)> {
    let t = variant.build(g).unwrap();
    t.edge_id_pairs()
        .into_iter()
        .map(|(a, b)| {
            if variant == Variant::Plain {
                (a.min(b), a.max(b))
            } else {
                (a, b)
            }
        })
        .collect()
}

pub fn random_simple_graph(rng: &mut impl Rng, max_nodes: usize) -> SimpleGraph {
    let n = rng.gen_range(1..=max_nodes);
    let p: f64 = rng.gen();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    SimpleGraph::from_edges(n, edges)
}

fn adjacency(g: &SimpleGraph) -> DMatrix<f64> {
    let n = g.node_count();
    DMatrix::from_fn(n, n, |i, j| {
        if g.neighbors(i).contains(&j) {
            1.0
        } else {
            0.0
        }
    })
}

/// All ten features from dense matrix algebra: Floyd-Warshall distances,
/// shortest-path counts as walk counts `(A^d)_st`, triangles from `A^3`,
/// and a full symmetric eigendecomposition.
pub fn oracle_features(g: &SimpleGraph) -> [f64; 10] {
    let n = g.node_count();
    let a = adjacency(g);
    let nf = n as f64;
    let deg: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
    let m = deg.iter().sum::<f64>() / 2.0;

    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[(i, j)] > 0.0 {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut powers = vec![DMatrix::identity(n, n)];
    for k in 1..n.max(1) {
        let next = &powers[k - 1] * &a;
        powers.push(next);
    }
    let sigma = |s: usize, t: usize| powers[d[s][t]][(s, t)];

    let mut between = 0.0;
    if n >= 3 {
        for v in 0..n {
            for s in 0..n {
                for t in 0..n {
                    if s == t || s == v || t == v || d[s][t] >= INF {
                        continue;
                    }
                    if d[s][v] + d[v][t] == d[s][t] {
                        between += sigma(s, v) * sigma(v, t) / sigma(s, t);
                    }
                }
            }
        }
        between /= (nf - 1.0) * (nf - 2.0);
    }

    let mut close = 0.0;
    if n >= 2 {
        for (v, row) in d.iter().enumerate() {
            let reach: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|&(u, &du)| u != v && du < INF)
                .map(|(_, &du)| du)
                .collect();
            if !reach.is_empty() {
                let r = reach.len() as f64;
                close += r / reach.iter().sum::<usize>() as f64 * r / (nf - 1.0);
            }
        }
    }

    let a3 = &powers.get(3).cloned().unwrap_or_else(|| &a * &a * &a);
    let clustering: f64 = (0..n)
        .map(|v| {
            if deg[v] < 2.0 {
                0.0
            } else {
                a3[(v, v)] / (deg[v] * (deg[v] - 1.0))
            }
        })
        .sum();
    let nbr_deg = &a * DMatrix::from_column_slice(n, 1, &deg);
    let avg_nbr: f64 = (0..n)
        .map(|v| {
            if deg[v] == 0.0 {
                0.0
            } else {
                nbr_deg[(v, 0)] / deg[v]
            }
        })
        .sum();
    let eigen = SymmetricEigen::new(a.clone()).eigenvalues.max().max(0.0);

    [
        nf,
        m,
        2.0 * m / nf,
        deg.iter().filter(|&&x| x == 1.0).count() as f64 / nf,
        if n > 1 {
            2.0 * m / (nf * (nf - 1.0))
        } else {
            0.0
        },
        avg_nbr / nf,
        clustering / nf,
        eigen,
        between / nf,
        close / nf,
    ]
}

fn rec(id: EdgeId, src: &str, dst: &str, ts: Option<i64>) -> EdgeRecord {
    EdgeRecord::new(id, addr(src), addr(dst), 1.0, ts)
}

/// Star around `c` with five neighbors plus two neighbor-to-neighbor
/// transactions; edge ids 1..=7 stand for e1..e7.
pub fn star_with_trades() -> TransactionGraph {
    let edges = vec![
        rec(1, "c", "n1", None),
        rec(2, "c", "n2", None),
        rec(3, "c", "n3", None),
        rec(4, "c", "n4", None),
        rec(5, "c", "n5", None),
        rec(6, "n1", "n2", None),
        rec(7, "n3", "n4", None),
    ];
    TransactionGraph::new(edges, GraphFlags::PLAIN, addr("c"), None).unwrap()
}

pub fn star_with_trades_links() -> BTreeSet<(EdgeId, EdgeId)> {
    let mut s = BTreeSet::new();
    for a in 1..=5 {
        for b in a + 1..=5 {
            s.insert((a, b));
        }
    }
    s.extend([(1, 6), (2, 6), (3, 7), (4, 7)]);
    s
}

/// Seven timed transfers around `c`; ids 1..=7 stand for t1..t7.
pub fn timed_flow() -> TransactionGraph {
    let edges = vec![
        rec(1, "a", "c", Some(1)),
        rec(2, "c", "b", Some(2)),
        rec(3, "d", "c", Some(3)),
        rec(4, "c", "e", Some(4)),
        rec(5, "c", "f", Some(5)),
        rec(6, "f", "a", Some(6)),
        rec(7, "e", "d", Some(7)),
    ];
    TransactionGraph::new(edges, GraphFlags::TEMPORAL, addr("c"), None).unwrap()
}

pub const TIMED_FLOW_DROPPED: [(EdgeId, EdgeId); 3] = [(3, 2), (7, 3), (6, 1)];

/// The four two-transfer chains through `v2` (first at 4s, second at 7s):
/// (a) v1->v2, v2->v3; (b) v2->v1, v2->v3; (c) v1->v2, v3->v2;
/// (d) v2->v1, v3->v2.
pub fn two_hop_chain(case: char) -> TransactionGraph {
    let (first, second) = match case {
        'a' => (("v1", "v2"), ("v2", "v3")),
        'b' => (("v2", "v1"), ("v2", "v3")),
        'c' => (("v1", "v2"), ("v3", "v2")),
        'd' => (("v2", "v1"), ("v3", "v2")),
        _ => panic!("unknown chain {case}"),
    };
    let edges = vec![
        rec(1, first.0, first.1, Some(4)),
        rec(2, second.0, second.1, Some(7)),
    ];
    TransactionGraph::new(edges, GraphFlags::TEMPORAL, addr("v2"), None).unwrap()
}
