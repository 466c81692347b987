//! Multi-indices and their graded-lexicographic enumeration.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Largest order for which `k!` is computed exactly (`20! < 2^64`).
pub const MAX_FACTORIAL_ORDER: u32 = 20;

/// A vector of nonnegative exponents. Serialized as a JSON integer array.
///
/// Ordering is graded lexicographic: ascending `|k|`, then lexicographic with
/// the first component most significant and larger components first, so
/// `(0,0) < (1,0) < (0,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Self {
        Self(k)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn unit(d: usize, l: usize) -> Result<Self> {
        Self::zeros(d).add_unit(l)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `k!` as an exact integer; `|k| > 20` is a capacity error.
    pub fn factorial(&self) -> Result<u64> {
        let order = self.order();
        if order > MAX_FACTORIAL_ORDER {
            return Err(Error::Capacity(format!(
                "factorial of a multi-index of order {order} exceeds the order-{MAX_FACTORIAL_ORDER} cap"
            )));
        }
        Ok(self
            .0
            .iter()
            .map(|&c| (1..=u64::from(c)).product::<u64>())
            .product())
    }

    pub fn order_and_factorial(&self) -> Result<(u32, u64)> {
        Ok((self.order(), self.factorial()?))
    }

    /// `k + e_l` with zero-based `l`.
    pub fn add_unit(&self, l: usize) -> Result<Self> {
        if l >= self.dim() {
            return Err(input(format!(
                "axis {l} out of range for a {}-dimensional multi-index",
                self.dim()
            )));
        }
        let mut k = self.0.clone();
        k[l] += 1;
        Ok(Self(k))
    }

    /// `k - e_l`, or `None` when `k_l = 0`.
    pub fn sub_unit(&self, l: usize) -> Option<Self> {
        let c = *self.0.get(l)?;
        if c == 0 {
            return None;
        }
        let mut k = self.0.clone();
        k[l] -= 1;
        Some(Self(k))
    }

    /// Smallest axis with a nonzero component.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }

    /// `2^{-|k|/2} (k!)^{-1/2}`.
    pub fn normalization(&self) -> Result<f64> {
        let f = self.factorial()? as f64;
        Ok(2f64.powf(-(self.order() as f64) / 2.0) / f.sqrt())
    }

    /// Splits a `2d`-component index into its first and second halves.
    pub(crate) fn split_at(&self, d: usize) -> (Self, Self) {
        let (a, b) = self.0.split_at(d);
        (Self(a.to_vec()), Self(b.to_vec()))
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[2,0,1]`, the same text as the JSON form.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(k: Vec<u32>) -> Self {
        Self(k)
    }
}

/// All `k` with `|k| <= max_order` in graded-lex order.
pub fn enumerate_upto(d: usize, max_order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for m in 0..=max_order {
        enumerate_order(d, m, &mut out);
    }
    out
}

/// All `k` with `|k| = order`, lexicographically descending.
pub fn enumerate_order(d: usize, order: u32, out: &mut Vec<MultiIndex>) {
    fn rec(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in (0..=remaining).rev() {
            prefix.push(c);
            rec(prefix, remaining - c, slots - 1, out);
            prefix.pop();
        }
    }
    if d == 0 {
        if order == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    rec(&mut Vec::with_capacity(d), order, d, out);
}
