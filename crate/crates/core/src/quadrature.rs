//! Gauss-Hermite rules for the weight `exp(-y^2)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{input, Result};

pub const MAX_NODES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal Hermite polynomials `h_0..h_n` at `x` and their derivatives,
/// normalized against `exp(-y^2)`.
fn orthonormal_values(n: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n + 1];
    let mut dv = vec![0.0; n + 1];
    v[0] = PI.powf(-0.25);
    if n >= 1 {
        // beta_j = sqrt(j / 2) is the off-diagonal of the Jacobi matrix.
        v[1] = x * v[0] / 0.5f64.sqrt();
        dv[1] = v[0] / 0.5f64.sqrt();
    }
    for j in 1..n {
        let bj = (j as f64 / 2.0).sqrt();
        let bn = ((j + 1) as f64 / 2.0).sqrt();
        v[j + 1] = (x * v[j] - bj * v[j - 1]) / bn;
        dv[j + 1] = (v[j] + x * dv[j] - bj * dv[j - 1]) / bn;
    }
    (v, dv)
}

/// Nodes from the eigenvalues of the symmetric tridiagonal Jacobi matrix
/// (off-diagonal `sqrt(j/2)`), polished by Newton steps on `h_n`.
///
/// The eigenvector for node `x` is `(h_0(x), ..., h_{n-1}(x))` up to scale,
/// so the weight `sqrt(pi) v_0^2` equals `1 / sum_j h_j(x)^2`; that form is
/// used because it keeps full relative accuracy in the tails.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_NODES {
        return Err(input(format!("Gauss-Hermite order must be in 1..={MAX_NODES}, got {n}")));
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = orthonormal_values(n, *x);
            if dv[n] == 0.0 {
                break;
            }
            *x -= v[n] / dv[n];
        }
    }
    // Enforce the reflection symmetry of the rule.
    for i in 0..n / 2 {
        let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -m;
        nodes[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (v, _) = orthonormal_values(n - 1, x);
            1.0 / v.iter().map(|h| h * h).sum::<f64>()
        })
        .collect();
    Ok(QuadratureRule { nodes, weights })
}
