//! Sparse complex multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::multiindex::MultiIndex;

/// Coefficients below this fraction of the largest coefficient are dropped
/// after every arithmetic operation.
pub const PRUNE_REL: f64 = 1e-14;

/// Coordinate frame of a polynomial: physical `x`, or the rescaled
/// `y = |A|^{-1} x / sqrt(hbar)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    #[serde(rename = "X_FRAME")]
    X,
    #[serde(rename = "Y_FRAME")]
    Y,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::X => "X_FRAME",
            Frame::Y => "Y_FRAME",
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct SparsePoly {
    dim: usize,
    frame: Frame,
    terms: BTreeMap<MultiIndex, C64>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly<{}, d={}>{{", self.frame.as_str(), self.dim)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){k}", c.re, c.im)?;
        }
        write!(f, "}}")
    }
}

impl SparsePoly {
    pub fn zero(dim: usize, frame: Frame) -> Self {
        Self {
            dim,
            frame,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, frame: Frame, c: C64) -> Self {
        Self::from_terms(dim, frame, [(MultiIndex::zeros(dim), c)])
    }

    pub fn one(dim: usize, frame: Frame) -> Self {
        Self::constant(dim, frame, C64::new(1.0, 0.0))
    }

    pub fn monomial(frame: Frame, exponent: MultiIndex, c: C64) -> Self {
        let dim = exponent.dim();
        Self::from_terms(dim, frame, [(exponent, c)])
    }

    /// `sum_j coeffs[j] v_j + offset`.
    pub fn affine(frame: Frame, coeffs: &[C64], offset: C64) -> Self {
        let dim = coeffs.len();
        let mut terms = vec![(MultiIndex::zeros(dim), offset)];
        for (j, &c) in coeffs.iter().enumerate() {
            terms.push((MultiIndex::unit(dim, j).expect("axis in range"), c));
        }
        Self::from_terms(dim, frame, terms)
    }

    pub fn linear(frame: Frame, coeffs: &[C64]) -> Self {
        Self::affine(frame, coeffs, C64::new(0.0, 0.0))
    }

    /// Sums duplicate exponents, then prunes.
    pub fn from_terms(
        dim: usize,
        frame: Frame,
        terms: impl IntoIterator<Item = (MultiIndex, C64)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            assert_eq!(k.dim(), dim, "exponent dimension mismatch");
            *map.entry(k).or_insert(C64::new(0.0, 0.0)) += c;
        }
        let mut p = Self {
            dim,
            frame,
            terms: map,
        };
        p.prune();
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    /// Terms in graded-lex exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &MultiIndex) -> C64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    /// Max order over stored exponents; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn prune(&mut self) {
        let threshold = PRUNE_REL * self.max_coeff();
        self.terms.retain(|_, c| c.norm() > threshold);
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
        assert_eq!(self.frame, other.frame, "polynomial frame mismatch");
    }

    pub fn eval(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.dim {
            return Err(input(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.dim
            )));
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|k| k.components().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<C64>> = point
            .iter()
            .map(|&v| {
                let mut pw = Vec::with_capacity(max_exp + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=max_exp {
                    pw.push(acc);
                    acc *= v;
                }
                pw
            })
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(k, &c)| {
                k.components()
                    .iter()
                    .enumerate()
                    .fold(c, |acc, (j, &e)| acc * powers[j][e as usize])
            })
            .sum())
    }

    pub fn eval_real(&self, point: &[f64]) -> Result<C64> {
        let p: Vec<C64> = point.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.eval(&p)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut p = Self {
            dim: self.dim,
            frame: self.frame,
            terms: self.terms.iter().map(|(k, &v)| (k.clone(), v * c)).collect(),
        };
        p.prune();
        p
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Product keeping only exponents accepted by `keep`.
    pub fn mul_filtered(&self, other: &Self, keep: impl Fn(&MultiIndex) -> bool) -> Self {
        self.check_compatible(other);
        let mut map: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let k = ka.add(kb);
                if keep(&k) {
                    *map.entry(k).or_default() += ca * cb;
                }
            }
        }
        let mut p = Self {
            dim: self.dim,
            frame: self.frame,
            terms: map,
        };
        p.prune();
        p
    }

    /// `d p / d v_j` (zero-based `j`).
    pub fn partial(&self, j: usize) -> Self {
        assert!(j < self.dim, "axis out of range");
        let terms = self.terms.iter().filter_map(|(k, &c)| {
            let e = k.get(j);
            k.sub_unit(j).map(|km| (km, c * f64::from(e)))
        });
        Self::from_terms(self.dim, self.frame, terms)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.dim).map(|j| self.partial(j)).collect()
    }

    /// `<c, grad p> = sum_j conj(c_j) d_j p`.
    pub fn directional_gradient(&self, c: &[C64]) -> Self {
        assert_eq!(c.len(), self.dim, "direction dimension mismatch");
        let mut terms = Vec::new();
        for (k, &coef) in &self.terms {
            for (j, cj) in c.iter().enumerate() {
                if let Some(km) = k.sub_unit(j) {
                    terms.push((km, cj.conj() * coef * f64::from(k.get(j))));
                }
            }
        }
        Self::from_terms(self.dim, self.frame, terms)
    }

    /// `q(v) = p(M v + shift)`, in the same frame as `p`.
    pub fn compose_linear(&self, m: &ComplexMatrix, shift: &[C64]) -> Result<Self> {
        if m.dim() != self.dim || shift.len() != self.dim {
            return Err(input(format!(
                "substitution has dimension {} / {}, polynomial has {}",
                m.dim(),
                shift.len(),
                self.dim
            )));
        }
        let d = self.dim;
        let max_exp: Vec<u32> = (0..d)
            .map(|j| self.terms.keys().map(|k| k.get(j)).max().unwrap_or(0))
            .collect();
        // powers[j][e] = (row_j(M) . v + shift_j)^e
        let powers: Vec<Vec<Self>> = (0..d)
            .map(|j| {
                let form = Self::affine(self.frame, &m.row(j), shift[j]);
                let mut pw = vec![Self::one(d, self.frame)];
                for e in 1..=max_exp[j] as usize {
                    let next = &pw[e - 1] * &form;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (k, &c) in &self.terms {
            let mut prod = Self::constant(d, self.frame, c);
            for (j, &e) in k.components().iter().enumerate() {
                if e > 0 {
                    prod = &prod * &powers[j][e as usize];
                }
            }
            for (kk, v) in prod.terms {
                *acc.entry(kk).or_default() += v;
            }
        }
        let mut q = Self {
            dim: d,
            frame: self.frame,
            terms: acc,
        };
        q.prune();
        Ok(q)
    }

    /// `max |c1 - c2| / (1 + max |c|)` over the union of exponents.
    pub fn distance(&self, other: &Self) -> f64 {
        let scale = 1.0 + self.max_coeff().max(other.max_coeff());
        let diff = self
            .terms
            .iter()
            .map(|(k, &c)| (c - other.coeff(k)).norm())
            .chain(
                other
                    .terms
                    .iter()
                    .filter(|(k, _)| !self.terms.contains_key(*k))
                    .map(|(_, c)| c.norm()),
            )
            .fold(0.0, f64::max);
        diff / scale
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_compatible(rhs);
        let mut terms = self.terms.clone();
        for (k, &c) in &rhs.terms {
            *terms.entry(k.clone()).or_default() += c;
        }
        let mut p = SparsePoly {
            dim: self.dim,
            frame: self.frame,
            terms,
        };
        p.prune();
        p
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale_real(-1.0)
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.mul_filtered(rhs, |_| true)
    }
}
