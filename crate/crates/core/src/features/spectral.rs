use super::SimpleGraph;

/// Convergence threshold on successive Rayleigh quotients.
pub const POWER_TOLERANCE: f64 = 1e-9;
pub const POWER_MAX_ITER: usize = 1000;

/// Largest adjacency eigenvalue by power iteration from the all-ones vector.
///
/// Iterates on `A + I`: bipartite graphs have `-lambda` in their spectrum,
/// which stalls plain power iteration, and the unit shift makes the Perron
/// root strictly dominant in magnitude.
pub fn largest_eigenvalue(g: &SimpleGraph) -> f64 {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut rq = 0.0;
    for _ in 0..POWER_MAX_ITER {
        for (v, slot) in ax.iter_mut().enumerate() {
            *slot = g.neighbors(v).iter().map(|&u| x[u]).sum();
        }
        // x is unit length, so x.Ax is the Rayleigh quotient
        rq = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        if (rq - prev).abs() < POWER_TOLERANCE {
            break;
        }
        prev = rq;
        let norm = x
            .iter()
            .zip(&ax)
            .map(|(xi, ai)| (xi + ai) * (xi + ai))
            .sum::<f64>()
            .sqrt();
        for (xi, ai) in x.iter_mut().zip(&ax) {
            *xi = (*xi + ai) / norm;
        }
    }
    rq
}
