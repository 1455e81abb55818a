//! Exact shortest-path centralities on unweighted undirected graphs.

use std::collections::VecDeque;

use super::SimpleGraph;

/// Normalized betweenness (Brandes). Each unordered pair is counted once
/// and scaled by `2 / ((n-1)(n-2))`; graphs with fewer than three nodes
/// score zero. Disconnected pairs contribute nothing.
pub fn betweenness_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    if n < 3 {
        return bc;
    }

    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];

    for s in 0..n {
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);

        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }

    // Every pair was visited from both ends: halve, then normalize.
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    for b in &mut bc {
        *b *= scale;
    }
    bc
}

/// Closeness with the reachable-set correction: for a node reaching `r`
/// nodes (itself included) at total distance `s`, the score is
/// `(r-1)/s * (r-1)/(n-1)`; isolated nodes score zero.
pub fn closeness_centrality(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    for (s, score) in out.iter_mut().enumerate() {
        dist.fill(usize::MAX);
        dist[s] = 0;
        queue.push_back(s);
        let mut reached = 0usize;
        let mut total = 0usize;
        while let Some(v) = queue.pop_front() {
            reached += 1;
            total += dist[v];
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if total > 0 {
            let r = (reached - 1) as f64;
            *score = r / total as f64 * r / (n - 1) as f64;
        }
    }
    out
}
