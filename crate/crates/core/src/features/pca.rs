use nalgebra::{DMatrix, SymmetricEigen};

use super::FeatureError;

/// Principal-component projection fitted on a set of rows.
///
/// Components are sorted by decreasing explained variance; each one's sign
/// is fixed so its largest-magnitude loading is positive, which makes the
/// projection reproducible across runs.
#[derive(Clone, Debug)]
pub struct Pca {
    mean: Vec<f64>,
    /// `k x d`, one unit-length component per row.
    components: DMatrix<f64>,
    explained_variance: Vec<f64>,
}

impl Pca {
    pub fn fit(rows: &[Vec<f64>], target_dim: usize) -> Result<Self, FeatureError> {
        let n = rows.len();
        if n == 0 {
            return Err(FeatureError::NoRows);
        }
        let d = rows[0].len();
        if target_dim == 0 {
            return Err(FeatureError::ZeroTarget);
        }
        if target_dim > d {
            return Err(FeatureError::TargetTooWide {
                target: target_dim,
                width: d,
            });
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(FeatureError::RaggedRow {
                    row: i,
                    got: r.len(),
                    expected: d,
                });
            }
        }

        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let centered = DMatrix::from_fn(n, d, |i, j| rows[i][j] - mean[j]);
        let scatter = centered.transpose() * &centered;
        let eig = SymmetricEigen::new(scatter);

        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .total_cmp(&eig.eigenvalues[a])
                .then(a.cmp(&b))
        });

        let mut components = DMatrix::zeros(target_dim, d);
        let mut explained_variance = Vec::with_capacity(target_dim);
        for (k, &idx) in order.iter().take(target_dim).enumerate() {
            let col = eig.eigenvectors.column(idx);
            let pivot = col
                .iter()
                .copied()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(b.0.cmp(&a.0)))
                .map(|(_, v)| v)
                .unwrap_or(1.0);
            let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
            for j in 0..d {
                components[(k, j)] = sign * col[j];
            }
            let var = eig.eigenvalues[idx].max(0.0) / (n.max(2) - 1) as f64;
            explained_variance.push(var);
        }

        Ok(Pca {
            mean,
            components,
            explained_variance,
        })
    }

    pub fn target_dim(&self) -> usize {
        self.components.nrows()
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        (0..self.components.nrows())
            .map(|k| {
                row.iter()
                    .zip(&self.mean)
                    .enumerate()
                    .map(|(j, (v, m))| (v - m) * self.components[(k, j)])
                    .sum()
            })
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }
}
