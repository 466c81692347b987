//! Orthonormality checks by tensor Gauss-Hermite quadrature in the y-frame,
//! and grid evaluation of `phi_k`.

use std::f64::consts::PI;

use crate::error::{input, Result};
use crate::exec::Exec;
use crate::linalg::C64;
use crate::multiindex::{enumerate_upto, MultiIndex};
use crate::params::PacketParams;
use crate::quadrature::gauss_hermite;
use crate::tables::PolyTable;
use crate::wavepacket::{check_table, eval_phik};

/// `<phi_k, phi_m>` for all `|k|, |m| <= order`, rows and columns in
/// graded-lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub indices: Vec<MultiIndex>,
    pub entries: Vec<Vec<C64>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// `max |G - I|`.
    pub fn max_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(g.norm());
                }
            }
        }
        worst
    }
}

/// Tensor product grid of `nodes_per_dim^d` points and product weights.
fn tensor_grid(d: usize, nodes_per_dim: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let rule = gauss_hermite(nodes_per_dim)?;
    let total = nodes_per_dim.pow(d as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut pt = vec![0.0; d];
        let mut w = 1.0;
        for j in (0..d).rev() {
            let i = rem % nodes_per_dim;
            rem /= nodes_per_dim;
            pt[j] = rule.nodes[i];
            w *= rule.weights[i];
        }
        points.push(pt);
        weights.push(w);
    }
    Ok((points, weights))
}

/// After `y = |A|^{-1} x / sqrt(hbar)` the inner product reduces to
/// `pi^{-d/2} 2^{-(|k|+|m|)/2} (k! m!)^{-1/2} int conj(p_k) p_m exp(-|y|^2) dy`,
/// which a tensor rule with `n >= order + 1` nodes integrates exactly.
pub fn gram_matrix(
    params: &PacketParams,
    order: u32,
    nodes_per_dim: usize,
    table: &PolyTable,
    exec: Exec,
) -> Result<GramMatrix> {
    check_table(params, table)?;
    if nodes_per_dim < order as usize + 1 {
        return Err(input(format!(
            "{nodes_per_dim} nodes per dimension cannot resolve order {order}; need at least {}",
            order + 1
        )));
    }
    if order > table.order() {
        return Err(input(format!("table only reaches order {}", table.order())));
    }
    let d = params.dim();
    let indices = enumerate_upto(d, order);
    let (points, weights) = tensor_grid(d, nodes_per_dim)?;
    let values: Vec<Result<Vec<C64>>> = exec.map(&indices, |k| {
        let p = table.get(k)?;
        let norm = k.normalization()?;
        points
            .iter()
            .map(|y| Ok(p.eval_real(y)? * norm))
            .collect()
    });
    let values: Vec<Vec<C64>> = values.into_iter().collect::<Result<_>>()?;
    let scale = PI.powf(-(d as f64) / 2.0);
    let n = indices.len();
    let entries = exec.map_range(n, |i| {
        (0..n)
            .map(|j| {
                let s: C64 = values[i]
                    .iter()
                    .zip(&values[j])
                    .zip(&weights)
                    .map(|((a, b), w)| a.conj() * b * *w)
                    .sum();
                s * scale
            })
            .collect()
    });
    Ok(GramMatrix { indices, entries })
}

/// Per-axis `min:max:count` specification of a rectangular grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<(f64, f64, usize)>,
}

impl GridSpec {
    /// Parses `"min:max:count[,min:max:count...]"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut axes = Vec::new();
        for part in text.split(',') {
            let fields: Vec<&str> = part.trim().split(':').collect();
            let [lo, hi, count] = fields[..] else {
                return Err(input(format!("grid axis {part:?} is not min:max:count")));
            };
            let lo: f64 = lo.trim().parse().map_err(|_| input(format!("bad grid minimum {lo:?}")))?;
            let hi: f64 = hi.trim().parse().map_err(|_| input(format!("bad grid maximum {hi:?}")))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| input(format!("bad grid count {count:?}")))?;
            if !lo.is_finite() || !hi.is_finite() || count == 0 {
                return Err(input(format!("grid axis {part:?} must be finite with count >= 1")));
            }
            axes.push((lo, hi, count));
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.2).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coordinate(axis: (f64, f64, usize), i: usize) -> f64 {
        let (lo, hi, count) = axis;
        if count == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (count - 1) as f64
        }
    }

    /// Point number `flat`, row-major with the first axis slowest.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut rem = flat;
        let mut pt = vec![0.0; self.dim()];
        for (j, &axis) in self.axes.iter().enumerate().rev() {
            pt[j] = Self::coordinate(axis, rem % axis.2);
            rem /= axis.2;
        }
        pt
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// `phi_k` at every grid point, in row-major order.
pub fn eval_grid(
    params: &PacketParams,
    k: &MultiIndex,
    table: &PolyTable,
    grid: &GridSpec,
    exec: Exec,
) -> Result<Vec<C64>> {
    if grid.dim() != params.dim() {
        return Err(input(format!(
            "grid has {} axes, parameters are {}-dimensional",
            grid.dim(),
            params.dim()
        )));
    }
    table.get(k)?;
    exec.map_range(grid.len(), |i| eval_phik(params, k, &grid.point(i), table))
        .into_iter()
        .collect()
}
