//! Polynomial tables `k -> p_k` and the three independent constructions:
//! the raising recurrence, Taylor extraction from the generating function,
//! and the Rodrigues formula.
//!
//! Every table is stored in the y-frame, `y = |A|^{-1} x / sqrt(hbar)`, where
//! `P_k(A, hbar, x) = p_k(y)` and `p_k` depends on `A` only through `U_A`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::multiindex::{enumerate_upto, MultiIndex, MAX_FACTORIAL_ORDER};
use crate::params::PacketParams;
use crate::poly::{Frame, SparsePoly};

/// Default cap on the table order.
pub const DEFAULT_ORDER_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Recurrence,
    Generating,
    Rodrigues,
    Ladder,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Recurrence => "RECURRENCE",
            Method::Generating => "GENERATING",
            Method::Rodrigues => "RODRIGUES",
            Method::Ladder => "LADDER",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RECURRENCE" => Ok(Method::Recurrence),
            "GENERATING" => Ok(Method::Generating),
            "RODRIGUES" => Ok(Method::Rodrigues),
            "LADDER" => Ok(Method::Ladder),
            other => Err(input(format!("unknown construction method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub order_cap: u32,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

impl BuildOptions {
    pub(crate) fn check(&self, order: u32) -> Result<()> {
        let cap = self.order_cap.min(MAX_FACTORIAL_ORDER);
        if order > cap {
            return Err(Error::Capacity(format!("table order {order} exceeds the cap {cap}")));
        }
        Ok(())
    }
}

/// The polynomials `p_k` for every `|k| <= order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTable {
    dim: usize,
    order: u32,
    frame: Frame,
    method: Method,
    entries: BTreeMap<MultiIndex, SparsePoly>,
}

/// Worst coefficient discrepancy between two tables.
#[derive(Clone, Debug, PartialEq)]
pub struct TableDistance {
    pub max: f64,
    pub worst: MultiIndex,
}

impl PolyTable {
    /// Assembles a table and checks that `entries` covers exactly
    /// `enumerate_upto(dim, order)` with `deg p_k = |k|`.
    pub fn new(
        dim: usize,
        order: u32,
        frame: Frame,
        method: Method,
        entries: BTreeMap<MultiIndex, SparsePoly>,
    ) -> Result<Self> {
        let table = Self {
            dim,
            order,
            frame,
            method,
            entries,
        };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let expected = enumerate_upto(self.dim, self.order);
        if expected.len() != self.entries.len() || !expected.iter().all(|k| self.entries.contains_key(k)) {
            return Err(Error::Validation(format!(
                "table entries do not cover all {} multi-indices of order <= {}",
                expected.len(),
                self.order
            )));
        }
        for (k, p) in &self.entries {
            if p.dim() != self.dim || p.frame() != self.frame {
                return Err(Error::Validation(format!("entry {k} has the wrong dimension or frame")));
            }
            if p.degree() != Some(k.order()) {
                return Err(Error::Validation(format!(
                    "entry {k} has degree {:?}, expected {}",
                    p.degree(),
                    k.order()
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn get(&self, k: &MultiIndex) -> Result<&SparsePoly> {
        self.entries.get(k).ok_or_else(|| {
            input(format!(
                "multi-index {k} is outside the table (d = {}, order <= {})",
                self.dim, self.order
            ))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &SparsePoly)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest per-entry [`SparsePoly::distance`] over the common order.
    pub fn distance(&self, other: &Self) -> Result<TableDistance> {
        if self.dim != other.dim || self.frame != other.frame {
            return Err(input("tables have different dimension or frame"));
        }
        let order = self.order.min(other.order);
        let mut worst = TableDistance {
            max: 0.0,
            worst: MultiIndex::zeros(self.dim),
        };
        for k in enumerate_upto(self.dim, order) {
            let diff = self.entries[&k].distance(&other.entries[&k]);
            if diff > worst.max || diff.is_nan() {
                worst = TableDistance { max: diff, worst: k };
            }
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TableFile = serde_json::from_str(text)?;
        let mut entries = BTreeMap::new();
        let mut dim = None;
        for (key, terms) in raw.entries {
            let k: MultiIndex = serde_json::from_str(&key)
                .map_err(|e| Error::Parse(format!("bad entry key {key:?}: {e}")))?;
            if *dim.get_or_insert(k.dim()) != k.dim() {
                return Err(Error::Parse(format!("entry {key} has inconsistent dimension")));
            }
            let mut poly_terms = Vec::with_capacity(terms.len());
            for t in terms {
                let e = MultiIndex::new(t.exp);
                if e.dim() != k.dim() {
                    return Err(Error::Parse(format!("term exponent dimension mismatch in entry {key}")));
                }
                poly_terms.push((e, C64::new(t.re, t.im)));
            }
            entries.insert(k.clone(), SparsePoly::from_terms(k.dim(), raw.frame, poly_terms));
        }
        let dim = dim.ok_or_else(|| Error::Parse("table has no entries".into()))?;
        Self::new(dim, raw.order, raw.frame, raw.method, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct TableFile {
    method: Method,
    frame: Frame,
    #[serde(rename = "K")]
    order: u32,
    entries: BTreeMap<String, Vec<TermJson>>,
}

struct EntriesJson<'a>(&'a BTreeMap<MultiIndex, SparsePoly>);

impl Serialize for EntriesJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, p) in self.0 {
            let terms: Vec<TermJson> = p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.components().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect();
            map.serialize_entry(&k.to_string(), &terms)?;
        }
        map.end()
    }
}

/// Canonical dump: entries and terms in graded-lex order.
impl Serialize for PolyTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PolyTable", 4)?;
        s.serialize_field("method", &self.method)?;
        s.serialize_field("frame", &self.frame)?;
        s.serialize_field("K", &self.order)?;
        s.serialize_field("entries", &EntriesJson(&self.entries))?;
        s.end()
    }
}

/// `P(x) = p(|A|^{-1} x / sqrt(hbar))`.
pub fn to_x_frame(params: &PacketParams, p: &SparsePoly) -> Result<SparsePoly> {
    let m = params.abs_inv().scale(C64::new(params.hbar().sqrt().recip(), 0.0));
    Ok(p.compose_linear(&m, &vec![C64::default(); p.dim()])?.with_frame(Frame::X))
}

/// `p(y) = P(sqrt(hbar) |A| y)`.
pub fn to_y_frame(params: &PacketParams, q: &SparsePoly) -> Result<SparsePoly> {
    let m = params.abs_a().scale(C64::new(params.hbar().sqrt(), 0.0));
    Ok(q.compose_linear(&m, &vec![C64::default(); q.dim()])?.with_frame(Frame::Y))
}

/// Fills a table by `p_k = step(p_{k - e_l}, l)` with `l` the smallest axis
/// where `k_l > 0`.
pub(crate) fn build_by_parent_chain(
    dim: usize,
    order: u32,
    frame: Frame,
    mut step: impl FnMut(&SparsePoly, usize) -> Result<SparsePoly>,
) -> Result<BTreeMap<MultiIndex, SparsePoly>> {
    let mut entries = BTreeMap::new();
    for k in enumerate_upto(dim, order) {
        let p = match k.first_nonzero() {
            None => SparsePoly::one(dim, frame),
            Some(l) => {
                let parent = k.sub_unit(l).expect("component is positive");
                step(&entries[&parent], l)?
            }
        };
        entries.insert(k, p);
    }
    Ok(entries)
}

fn check_dims(params: &PacketParams, order: u32, opts: &BuildOptions) -> Result<()> {
    opts.check(order)?;
    if params.dim() == 0 {
        return Err(input("dimension must be positive"));
    }
    Ok(())
}

pub fn build_recurrence(params: &PacketParams, order: u32) -> Result<PolyTable> {
    build_recurrence_with(params, order, &BuildOptions::default())
}

/// `p_{k+e_l}(y) = 2 <U e_l, y> p_k(y) - <U e_l, grad p_k(y)>`.
///
/// Reads only `U_A`.
pub fn build_recurrence_with(params: &PacketParams, order: u32, opts: &BuildOptions) -> Result<PolyTable> {
    check_dims(params, order, opts)?;
    build_recurrence_from_unitary(params.unitary(), order)
}

pub fn build_recurrence_from_unitary(u: &ComplexMatrix, order: u32) -> Result<PolyTable> {
    let d = u.dim();
    let columns: Vec<Vec<C64>> = (0..d).map(|l| u.column(l)).collect();
    // <U e_l, y> = sum_j conj(U_jl) y_j
    let forms: Vec<SparsePoly> = columns
        .iter()
        .map(|col| {
            let coeffs: Vec<C64> = col.iter().map(|c| c.conj() * 2.0).collect();
            SparsePoly::linear(Frame::Y, &coeffs)
        })
        .collect();
    let entries = build_by_parent_chain(d, order, Frame::Y, |p, l| {
        Ok(&(&forms[l] * p) - &p.directional_gradient(&columns[l]))
    })?;
    PolyTable::new(d, order, Frame::Y, Method::Recurrence, entries)
}

pub fn build_generating(params: &PacketParams, order: u32) -> Result<PolyTable> {
    build_generating_with(params, order, &BuildOptions::default())
}

/// Expands `exp(E)` with `E(z; y) = -z^t (U^* conj U) z + 2 z^t (U^* y)` as a
/// polynomial in `(z, y)` truncated at total `z`-degree `order`, then reads
/// off `p_k = k! [z^k]`.
///
/// Every monomial of `E` has `z`-degree 1 or 2, so the terms `E^m / m!` with
/// `m <= order` determine all retained coefficients exactly.
pub fn build_generating_with(params: &PacketParams, order: u32, opts: &BuildOptions) -> Result<PolyTable> {
    check_dims(params, order, opts)?;
    let d = params.dim();
    let u = params.unitary();
    let u_star = u.adjoint();
    let quad = (&u_star * &u.conj()).symmetric_part();
    let n = 2 * d;
    let zy = |z: &[u32], y: &[u32]| {
        let mut e = z.to_vec();
        e.extend_from_slice(y);
        MultiIndex::new(e)
    };
    let mut terms = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut z = vec![0; d];
            z[i] += 1;
            z[j] += 1;
            terms.push((zy(&z, &vec![0; d]), -quad.get(i, j)));

            let mut z = vec![0; d];
            z[i] = 1;
            let mut y = vec![0; d];
            y[j] = 1;
            terms.push((zy(&z, &y), u_star.get(i, j) * 2.0));
        }
    }
    let exponent = SparsePoly::from_terms(n, Frame::Y, terms);
    let z_degree = |k: &MultiIndex| k.components()[..d].iter().sum::<u32>();

    let mut series = SparsePoly::one(n, Frame::Y);
    let mut power = SparsePoly::one(n, Frame::Y);
    for m in 1..=order {
        power = power
            .mul_filtered(&exponent, |k| z_degree(k) <= order)
            .scale_real(1.0 / f64::from(m));
        series = &series + &power;
    }

    let mut grouped: BTreeMap<MultiIndex, Vec<(MultiIndex, C64)>> = BTreeMap::new();
    for (k, &c) in series.terms() {
        let (kz, ky) = k.split_at(d);
        grouped.entry(kz).or_default().push((ky, c));
    }
    let mut entries = BTreeMap::new();
    for k in enumerate_upto(d, order) {
        let fact = k.factorial()? as f64;
        let terms = grouped.remove(&k).unwrap_or_default();
        let p = SparsePoly::from_terms(d, Frame::Y, terms.into_iter().map(|(e, c)| (e, c * fact)));
        entries.insert(k, p);
    }
    PolyTable::new(d, order, Frame::Y, Method::Generating, entries)
}

pub fn build_rodrigues(params: &PacketParams, order: u32) -> Result<PolyTable> {
    build_rodrigues_with(params, order, &BuildOptions::default())
}

/// Tracks `q` with the current function equal to
/// `q(x) exp(-x^t |A|^{-2} x / hbar)`; each factor of
/// `-sqrt(hbar) (A^* grad)_l` maps
/// `q -> -sqrt(hbar) ((A^* grad q)_l - (2/hbar) (A^* |A|^{-2} x)_l q)`.
///
/// The iteration runs in the principal axes `w = W^t x` of `|A| = W L W^t`
/// (real orthogonal `W`), where `|A|^{-2}` is the diagonal `L^{-2}`. There
/// every coefficient of `x^m` carries the same scale `prod_j l_j^{-m_j}`, so
/// no cancellation occurs between terms of very different size when `|A|` is
/// ill-conditioned. The final `q = P_k` is moved to the y-frame with
/// `w = sqrt(hbar) L W^t y`.
pub fn build_rodrigues_with(params: &PacketParams, order: u32, opts: &BuildOptions) -> Result<PolyTable> {
    check_dims(params, order, opts)?;
    let d = params.dim();
    let hbar = params.hbar();
    let a = params.a();
    let abs_a = params.abs_a().real_part().symmetric_part();
    let eig = SymmetricEigen::new(DMatrix::from_fn(d, d, |i, j| abs_a.get(i, j).re));
    let (w, lambda) = (eig.eigenvectors, eig.eigenvalues);
    if lambda.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(Error::Singular("|A| is not positive definite".into()));
    }
    let real = |i: usize, j: usize| C64::new(w[(j, i)], 0.0);
    let rotated = &ComplexMatrix::from_fn(d, real) * a;
    let columns: Vec<Vec<C64>> = (0..d).map(|l| rotated.column(l)).collect();
    let forms: Vec<SparsePoly> = (0..d)
        .map(|l| {
            let coeffs: Vec<C64> = (0..d)
                .map(|j| rotated.get(j, l).conj() * (2.0 / (hbar * lambda[j] * lambda[j])))
                .collect();
            SparsePoly::linear(Frame::X, &coeffs)
        })
        .collect();
    let prefactor = -hbar.sqrt();
    let x_entries = build_by_parent_chain(d, order, Frame::X, |q, l| {
        let derivative = q.directional_gradient(&columns[l]);
        Ok((&derivative - &(&forms[l] * q)).scale_real(prefactor))
    })?;
    let to_y = ComplexMatrix::from_fn(d, |i, j| C64::new(hbar.sqrt() * lambda[i] * w[(j, i)], 0.0));
    let origin = vec![C64::default(); d];
    let mut entries = BTreeMap::new();
    for (k, q) in x_entries {
        entries.insert(k, q.compose_linear(&to_y, &origin)?.with_frame(Frame::Y));
    }
    PolyTable::new(d, order, Frame::Y, Method::Rodrigues, entries)
}

pub fn build_table(method: Method, params: &PacketParams, order: u32) -> Result<PolyTable> {
    match method {
        Method::Recurrence => build_recurrence(params, order),
        Method::Generating => build_generating(params, order),
        Method::Rodrigues => build_rodrigues(params, order),
        Method::Ladder => crate::wavepacket::build_ladder(params, order),
    }
}

fn bilinear(z: &[C64], m: &ComplexMatrix, v: &[C64]) -> C64 {
    let mv = m.mul_vec(v);
    z.iter().zip(&mv).map(|(a, b)| a * b).sum()
}

/// Closed form `G(x, z) = exp(-<conj z, A^{-1} conj(A) z> + (2/sqrt(hbar)) <conj z, A^{-1} x>)`.
pub fn eval_generating(params: &PacketParams, x: &[f64], z: &[C64]) -> Result<C64> {
    let d = params.dim();
    if x.len() != d || z.len() != d {
        return Err(input(format!("expected {d}-dimensional x and z")));
    }
    let a_inv = params.a().inverse()?;
    let quad = &a_inv * &params.a().conj();
    let xc: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    // <conj z, w> = sum_j z_j w_j
    let exponent = -bilinear(z, &quad, z) + bilinear(z, &a_inv, &xc) * (2.0 / params.hbar().sqrt());
    Ok(exponent.exp())
}

/// `dG/dz_l = 2 <U e_l, |A|^{-1} x / sqrt(hbar) - conj(U) z> G`.
pub fn eval_generating_partial(params: &PacketParams, x: &[f64], z: &[C64], l: usize) -> Result<C64> {
    let d = params.dim();
    if l >= d {
        return Err(input(format!("axis {l} out of range for d = {d}")));
    }
    let g = eval_generating(params, x, z)?;
    let u = params.unitary();
    let y = params.to_y(x);
    let uz = u.conj().mul_vec(z);
    let col = u.column(l);
    let inner: C64 = col.iter().zip(y.iter().zip(&uz)).map(|(c, (yj, w))| c.conj() * (yj - w)).sum();
    Ok(inner * 2.0 * g)
}

/// `sum_{|k| <= order} P_k(x) z^k / k!` from a y-frame table.
pub fn generating_partial_sum(params: &PacketParams, table: &PolyTable, x: &[f64], z: &[C64]) -> Result<C64> {
    let y = params.to_y(x);
    let mut acc = C64::default();
    for (k, p) in table.iter() {
        let zk = k
            .components()
            .iter()
            .zip(z)
            .fold(C64::new(1.0, 0.0), |acc, (&e, &zj)| acc * zj.powu(e));
        acc += p.eval(&y)? * zk / k.factorial()? as f64;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::generate_params;

    /// Physicists' Hermite coefficients from `H_{k+1} = 2y H_k - H_k'`.
    fn hermite_oracle(n: usize) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
        for k in 0..n {
            let h = &out[k];
            let mut next = vec![0.0; k + 2];
            for (i, &c) in h.iter().enumerate() {
                next[i + 1] += 2.0 * c;
                if i > 0 {
                    next[i - 1] -= i as f64 * c;
                }
            }
            out.push(next);
        }
        out
    }

    fn as_1d(p: &SparsePoly, degree: usize) -> Vec<C64> {
        (0..=degree).map(|i| p.coeff(&MultiIndex::new(vec![i as u32]))).collect()
    }

    fn assert_hermite(table: &PolyTable, upto: usize) {
        let oracle = hermite_oracle(upto);
        for n in 0..=upto {
            let got = as_1d(table.get(&MultiIndex::new(vec![n as u32])).unwrap(), n);
            for (g, e) in got.iter().zip(&oracle[n]) {
                assert!((g - C64::new(*e, 0.0)).norm() < 1e-9, "{:?} k={n}: {g} vs {e}", table.method());
            }
        }
    }

    #[test]
    fn hermite_case_for_all_constructions() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let rec = build_recurrence(&params, 10).unwrap();
        assert_hermite(&rec, 10);
        assert_hermite(&build_generating(&params, 10).unwrap(), 10);
        assert_hermite(&build_rodrigues(&params, 10).unwrap(), 10);
        // p_3 = 8y^3 - 12y
        let p3 = as_1d(rec.get(&MultiIndex::new(vec![3])).unwrap(), 3);
        assert_eq!(p3, vec![C64::new(0.0, 0.0), C64::new(-12.0, 0.0), C64::new(0.0, 0.0), C64::new(8.0, 0.0)]);
    }

    #[test]
    fn identity_2d_cross_term() {
        let params = PacketParams::identity(2, 1.0).unwrap();
        let t = build_recurrence(&params, 2).unwrap();
        let p = t.get(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(p, &SparsePoly::monomial(Frame::Y, MultiIndex::new(vec![1, 1]), C64::new(4.0, 0.0)));
    }

    #[test]
    fn base_case_is_one() {
        let params = generate_params(4, 3, 1.0).unwrap();
        for m in [Method::Recurrence, Method::Generating, Method::Rodrigues] {
            let t = build_table(m, &params, 0).unwrap();
            assert_eq!(t.len(), 1);
            assert!(t.get(&MultiIndex::zeros(3)).unwrap().distance(&SparsePoly::one(3, Frame::Y)) < 1e-14);
        }
    }

    #[test]
    fn rodrigues_first_order_is_2x() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let t = build_rodrigues(&params, 1).unwrap();
        let p1 = t.get(&MultiIndex::new(vec![1])).unwrap();
        assert_eq!(p1, &SparsePoly::linear(Frame::Y, &[C64::new(2.0, 0.0)]));
    }

    #[test]
    fn constructions_agree_for_random_params() {
        let params = generate_params(9, 2, 1.0).unwrap();
        let rec = build_recurrence(&params, 4).unwrap();
        let gen = build_generating(&params, 4).unwrap();
        assert!(rec.distance(&gen).unwrap().max < 1e-10);
        let params = generate_params(10, 3, 0.8).unwrap();
        let rec = build_recurrence(&params, 3).unwrap();
        let rod = build_rodrigues(&params, 3).unwrap();
        assert!(rec.distance(&rod).unwrap().max < 1e-10);
    }

    #[test]
    fn recurrence_is_path_independent() {
        let params = generate_params(2, 2, 1.0).unwrap();
        let u = params.unitary();
        let step = |p: &SparsePoly, l: usize| {
            let col = u.column(l);
            let coeffs: Vec<C64> = col.iter().map(|c| c.conj() * 2.0).collect();
            &(&SparsePoly::linear(Frame::Y, &coeffs) * p) - &p.directional_gradient(&col)
        };
        let one = SparsePoly::one(2, Frame::Y);
        let a = step(&step(&one, 0), 1);
        let b = step(&step(&one, 1), 0);
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn order_cap_is_enforced() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        assert!(matches!(build_recurrence(&params, 13), Err(Error::Capacity(_))));
        let opts = BuildOptions { order_cap: 16 };
        assert!(build_recurrence_with(&params, 16, &opts).is_ok());
        let opts = BuildOptions { order_cap: 40 };
        assert!(matches!(build_recurrence_with(&params, 21, &opts), Err(Error::Capacity(_))));
    }

    #[test]
    fn generating_closed_form_examples() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let g0 = eval_generating(&params, &[0.7], &[C64::default()]).unwrap();
        assert!((g0 - C64::new(1.0, 0.0)).norm() < 1e-15);
        let g = eval_generating(&params, &[1.0], &[C64::new(0.5, 0.0)]).unwrap();
        assert!((g - C64::new(0.75f64.exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let params = generate_params(5, 2, 1.0).unwrap();
        let t = build_recurrence(&params, 3).unwrap();
        let text = t.to_json();
        let first = text.find("\"[0,0]\"").unwrap();
        let second = text.find("\"[1,0]\"").unwrap();
        let third = text.find("\"[0,1]\"").unwrap();
        assert!(first < second && second < third);
        let back = PolyTable::from_json(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_incomplete_tables() {
        let text = r#"{"method":"RECURRENCE","frame":"Y_FRAME","K":1,"entries":{"[0]":[{"exp":[0],"re":1.0,"im":0.0}]}}"#;
        assert!(matches!(PolyTable::from_json(text), Err(Error::Validation(_))));
        assert!(matches!(PolyTable::from_json("{}"), Err(Error::Parse(_))));
    }

    #[test]
    fn frame_maps_are_inverse() {
        let params = generate_params(6, 2, 1.4).unwrap().with_hbar(0.3).unwrap();
        let t = build_recurrence(&params, 3).unwrap();
        for (_, p) in t.iter() {
            let x = to_x_frame(&params, p).unwrap();
            let y = to_y_frame(&params, &x).unwrap();
            assert!(p.distance(&y) < 1e-11);
        }
    }
}
