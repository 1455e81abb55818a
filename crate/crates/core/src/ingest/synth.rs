//! Synthetic labeled ego-network datasets.
//!
//! Two archetypes:
//!
//! * **phishing**: many victims send small amounts to the center, after
//!   which the center forwards the funds in one or two large transfers.
//!   Neighbors rarely transact with each other.
//! * **benign**: the center trades in both directions with its neighbors at
//!   interleaved times, and neighbors also trade among themselves.
//!
//! Graph sizes follow one of six size profiles. Within a graph timestamps
//! strictly increase in edge-id order, so temporal mappings never see ties.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{AttributeTier, DatasetManifest, EgoForm};
use crate::graph::{Address, EdgeRecord, GraphFlags, TransactionGraph};
use crate::ml::derive_seed;

pub const PHISHING: &str = "phishing";
pub const BENIGN: &str = "benign";

/// Node-count profiles: `(mean, max)` nodes per graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SizeProfile {
    EtherG1,
    EtherG2,
    EtherG3,
    EtherG4,
    EtherG5,
    EtherG6,
}

impl SizeProfile {
    pub const ALL: [SizeProfile; 6] = [
        SizeProfile::EtherG1,
        SizeProfile::EtherG2,
        SizeProfile::EtherG3,
        SizeProfile::EtherG4,
        SizeProfile::EtherG5,
        SizeProfile::EtherG6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SizeProfile::EtherG1 => "etherg1",
            SizeProfile::EtherG2 => "etherg2",
            SizeProfile::EtherG3 => "etherg3",
            SizeProfile::EtherG4 => "etherg4",
            SizeProfile::EtherG5 => "etherg5",
            SizeProfile::EtherG6 => "etherg6",
        }
    }

    pub fn mean_nodes(self) -> usize {
        match self {
            SizeProfile::EtherG1 | SizeProfile::EtherG4 => 7,
            SizeProfile::EtherG2 | SizeProfile::EtherG5 => 14,
            SizeProfile::EtherG3 | SizeProfile::EtherG6 => 96,
        }
    }

    pub fn max_nodes(self) -> usize {
        match self {
            SizeProfile::EtherG1 | SizeProfile::EtherG4 => 13,
            SizeProfile::EtherG2 | SizeProfile::EtherG5 => 33,
            SizeProfile::EtherG3 | SizeProfile::EtherG6 => 4972,
        }
    }

    /// Net profiles add more transactions between neighbors.
    pub fn is_net(self) -> bool {
        matches!(
            self,
            SizeProfile::EtherG4 | SizeProfile::EtherG5 | SizeProfile::EtherG6
        )
    }

    /// Neighbor count: the maximum with probability `p`, otherwise uniform
    /// on `2..=m`, with `p` and `m` chosen so the mean node count matches.
    fn draw_neighbors(self, rng: &mut impl Rng) -> usize {
        let k_max = (self.max_nodes() - 1) as f64;
        let k_mean = (self.mean_nodes() - 1) as f64;
        let p = (k_mean / (2.0 * k_max)).min(0.1);
        let m = ((2.0 * (k_mean - p * k_max) / (1.0 - p)) - 2.0)
            .round()
            .max(2.0) as usize;
        if rng.gen_bool(p) {
            k_max as usize
        } else {
            rng.gen_range(2..=m)
        }
    }
}

impl fmt::Display for SizeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SizeProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SizeProfile::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown size profile '{s}' (expected etherg1..etherg6)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthConfig {
    pub n_per_class: usize,
    pub profile: SizeProfile,
    pub seed: u64,
}

/// `2 * n_per_class` graphs, phishing first, each at the multiedge tier.
pub fn generate_synthetic_dataset(config: &SynthConfig) -> DatasetManifest {
    let graphs: Vec<TransactionGraph> = (0..2 * config.n_per_class)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, i as u64));
            let phishing = i < config.n_per_class;
            let center = Address::new(format!("0x{:040x}", (i as u128) << 64 | 0xc0ffee)).unwrap();
            let events = if phishing {
                phishing_events(&center, config.profile, &mut rng)
            } else {
                benign_events(&center, config.profile, &mut rng)
            };
            let label = if phishing { PHISHING } else { BENIGN };
            assemble(events, center, &mut rng).with_label(label)
        })
        .collect();
    DatasetManifest::new(
        graphs,
        format!("synthetic profile={} seed={}", config.profile, config.seed),
        EgoForm::Net,
        AttributeTier::Multiedge,
    )
    .expect("generated graphs are labeled")
}

struct Event {
    src: Address,
    dst: Address,
    amount: f64,
    /// Relative time; only the order matters.
    at: f64,
}

fn neighbor(center: &Address, k: usize) -> Address {
    Address::new(format!("{}-n{k}", center)).unwrap()
}

fn round_amount(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn phishing_events(center: &Address, profile: SizeProfile, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let k = profile.draw_neighbors(rng);
    let cash_outs = if k >= 8 && rng.gen_bool(0.3) { 2 } else { 1 };
    let victims = k - cash_outs;
    let mut events = Vec::new();
    let mut collected = 0.0;

    for v in 0..victims {
        let n = if rng.gen_bool(0.3) { 2 } else { 1 };
        for _ in 0..n {
            let amount = round_amount(rng.gen_range(0.05..2.0));
            collected += amount;
            events.push(Event {
                src: neighbor(center, v),
                dst: center.clone(),
                amount,
                at: rng.gen_range(0.0..0.8),
            });
        }
    }
    for c in 0..cash_outs {
        events.push(Event {
            src: center.clone(),
            dst: neighbor(center, victims + c),
            amount: round_amount(collected * rng.gen_range(0.8..0.99) / cash_outs as f64),
            at: rng.gen_range(0.85..1.0),
        });
    }
    // occasional refund to a victim
    if victims >= 2 && rng.gen_bool(0.1) {
        events.push(Event {
            src: center.clone(),
            dst: neighbor(center, rng.gen_range(0..victims)),
            amount: round_amount(rng.gen_range(0.01..0.5)),
            at: rng.gen_range(0.0..1.0),
        });
    }
    let extra = if profile.is_net() {
        if rng.gen_bool(0.5) {
            (k / 5).max(1)
        } else {
            0
        }
    } else if rng.gen_bool(0.05) {
        1
    } else {
        0
    };
    neighbor_trades(center, k, extra, rng, &mut events);
    events
}

/// Share of benign accounts drawn as collectors.
const COLLECTOR_RATE: f64 = 0.03;

fn benign_events(center: &Address, profile: SizeProfile, rng: &mut ChaCha8Rng) -> Vec<Event> {
    if rng.gen_bool(COLLECTOR_RATE) {
        return collector_events(center, profile, rng);
    }
    let k = profile.draw_neighbors(rng);
    let mut events = Vec::new();
    for v in 0..k {
        let n = rng.gen_range(1..=3);
        for _ in 0..n {
            let (src, dst) = if rng.gen_bool(0.5) {
                (neighbor(center, v), center.clone())
            } else {
                (center.clone(), neighbor(center, v))
            };
            events.push(Event {
                src,
                dst,
                amount: round_amount(rng.gen_range(0.01..50.0)),
                at: rng.gen_range(0.0..1.0),
            });
        }
    }
    let share = if profile.is_net() {
        rng.gen_range(0.4..1.0)
    } else {
        rng.gen_range(0.2..0.6)
    };
    let extra = ((k as f64 * share).round() as usize).max(1);
    neighbor_trades(center, k, extra, rng, &mut events);
    events
}

/// A deposit address: same shape as a phishing star, but the sweeps are
/// spread over the whole period instead of following every deposit.
fn collector_events(center: &Address, profile: SizeProfile, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let k = profile.draw_neighbors(rng);
    let sweeps = if k >= 8 && rng.gen_bool(0.3) { 2 } else { 1 };
    let depositors = k - sweeps;
    let mut events = Vec::new();
    for v in 0..depositors {
        let n = if rng.gen_bool(0.3) { 2 } else { 1 };
        for _ in 0..n {
            events.push(Event {
                src: neighbor(center, v),
                dst: center.clone(),
                amount: round_amount(rng.gen_range(0.05..2.0)),
                at: rng.gen_range(0.0..1.0),
            });
        }
    }
    for s in 0..sweeps {
        let n = rng.gen_range(1..=3);
        for _ in 0..n {
            events.push(Event {
                src: center.clone(),
                dst: neighbor(center, depositors + s),
                amount: round_amount(rng.gen_range(0.5..5.0)),
                at: rng.gen_range(0.0..0.7),
            });
        }
    }
    if rng.gen_bool(if profile.is_net() { 0.5 } else { 0.05 }) {
        neighbor_trades(center, k, 1, rng, &mut events);
    }
    events
}

fn neighbor_trades(
    center: &Address,
    k: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
    events: &mut Vec<Event>,
) {
    if k < 2 {
        return;
    }
    let ids: Vec<usize> = (0..k).collect();
    for _ in 0..count {
        let pair: Vec<&usize> = ids.choose_multiple(rng, 2).collect();
        events.push(Event {
            src: neighbor(center, *pair[0]),
            dst: neighbor(center, *pair[1]),
            amount: round_amount(rng.gen_range(0.01..10.0)),
            at: rng.gen_range(0.0..1.0),
        });
    }
}

/// Orders events by time and assigns strictly increasing timestamps and
/// edge ids in that order.
fn assemble(mut events: Vec<Event>, center: Address, rng: &mut ChaCha8Rng) -> TransactionGraph {
    events.sort_by(|a, b| a.at.total_cmp(&b.at));
    let mut t: i64 = 1_438_214_400 + rng.gen_range(0..100_000_000);
    let records = events
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            t += rng.gen_range(1..=86_400);
            EdgeRecord::new(i as u64, e.src, e.dst, e.amount, Some(t))
        })
        .collect();
    TransactionGraph::new(records, GraphFlags::MULTI_TEMPORAL, center, None)
        .expect("generator emits valid graphs")
}

/// A dense net-form ego-network for timing the mappings: `n_nodes - 1`
/// neighbors each trading once with the center in a random direction, plus
/// `extra_per_node` transactions per neighbor among neighbors, with
/// distinct increasing timestamps.
pub fn dense_ego_network(n_nodes: usize, extra_per_node: usize, seed: u64) -> TransactionGraph {
    assert!(n_nodes >= 3, "dense ego-network needs at least 3 nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = Address::new("0xdense").unwrap();
    let k = n_nodes - 1;
    let mut events = Vec::new();
    for v in 0..k {
        let (src, dst) = if rng.gen_bool(0.5) {
            (neighbor(&center, v), center.clone())
        } else {
            (center.clone(), neighbor(&center, v))
        };
        events.push(Event {
            src,
            dst,
            amount: round_amount(rng.gen_range(0.01..10.0)),
            at: rng.gen_range(0.0..1.0),
        });
    }
    let mut seen = std::collections::HashSet::new();
    let target = k * extra_per_node;
    while seen.len() < target {
        let u = rng.gen_range(0..k);
        let v = rng.gen_range(0..k);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        events.push(Event {
            src: neighbor(&center, u),
            dst: neighbor(&center, v),
            amount: round_amount(rng.gen_range(0.01..10.0)),
            at: rng.gen_range(0.0..1.0),
        });
    }
    let g = assemble(events, center, &mut rng);
    TransactionGraph::new(
        g.edges().to_vec(),
        GraphFlags::TEMPORAL,
        g.center().clone(),
        None,
    )
    .expect("dense generator emits simple graphs")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn etherg1_shape() {
        let m = generate_synthetic_dataset(&SynthConfig {
            n_per_class: 350,
            profile: SizeProfile::EtherG1,
            seed: 7,
        });
        assert_eq!(m.graphs.len(), 700);
        let phishing = m
            .graphs
            .iter()
            .filter(|g| g.label() == Some(PHISHING))
            .count();
        assert_eq!(phishing, 350);
        let mean = m.graphs.iter().map(|g| g.node_count()).sum::<usize>() as f64 / 700.0;
        assert!((mean - 7.0).abs() < 0.75, "mean nodes {mean}");
        assert!(m.graphs.iter().all(|g| g.node_count() <= 13));
        assert!(m.graphs.iter().all(|g| g.validate().is_empty()));
    }

    #[test]
    fn deterministic() {
        let cfg = SynthConfig {
            n_per_class: 20,
            profile: SizeProfile::EtherG2,
            seed: 11,
        };
        assert_eq!(
            generate_synthetic_dataset(&cfg),
            generate_synthetic_dataset(&cfg)
        );
    }

    #[test]
    fn one_per_class() {
        let m = generate_synthetic_dataset(&SynthConfig {
            n_per_class: 1,
            profile: SizeProfile::EtherG1,
            seed: 0,
        });
        assert_eq!(m.graphs.len(), 2);
        assert_eq!(m.label_set.len(), 2);
    }

    #[test]
    fn timestamps_strictly_increase() {
        let m = generate_synthetic_dataset(&SynthConfig {
            n_per_class: 30,
            profile: SizeProfile::EtherG4,
            seed: 5,
        });
        for g in &m.graphs {
            let ts: Vec<i64> = g.edges().iter().map(|e| e.timestamp.unwrap()).collect();
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn dense_network_size() {
        let g = dense_ego_network(500, 3, 1);
        assert_eq!(g.node_count(), 500);
        assert_eq!(g.edge_count(), 499 + 499 * 3);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn profile_names_parse() {
        for p in SizeProfile::ALL {
            assert_eq!(p.name().parse::<SizeProfile>().unwrap(), p);
        }
        assert!("etherg9".parse::<SizeProfile>().is_err());
    }
}
