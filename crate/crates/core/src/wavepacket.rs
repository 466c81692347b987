//! Pointwise evaluation of `phi_0` and `phi_k`, and the ladder operators
//! acting symbolically on states `q(x) phi_0(x)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{input, Error, Result};
use crate::linalg::{inv_sqrt_det, C64};
use crate::multiindex::MultiIndex;
use crate::params::PacketParams;
use crate::poly::{Frame, SparsePoly};
use crate::tables::{build_by_parent_chain, to_x_frame, to_y_frame, BuildOptions, Method, PolyTable};

/// `phi_0(x) = pi^{-d/4} hbar^{-d/4} (det A)^{-1/2}
///   exp(-<x-a, B A^{-1} (x-a)> / 2hbar + i <eta, x-a> / hbar)`,
/// principal branch for the square root.
pub fn eval_phi0(params: &PacketParams, x: &[f64]) -> Result<C64> {
    let d = params.dim();
    if x.len() != d {
        return Err(input(format!("point has {} coordinates, expected {d}", x.len())));
    }
    let hbar = params.hbar();
    let u: Vec<f64> = x.iter().zip(params.position()).map(|(x, a)| x - a).collect();
    // <u, B A^{-1} u> as u^t B (A^{-1} u), solving rather than forming A^{-1}.
    let uc: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
    let mu = params.b().mul_vec(&params.a().solve(&uc)?);
    let quad: C64 = u.iter().zip(&mu).map(|(ui, m)| m * *ui).sum();
    let phase: f64 = params.momentum().iter().zip(&u).map(|(e, ui)| e * ui).sum();
    let exponent = -quad / (2.0 * hbar) + C64::new(0.0, phase / hbar);
    let prefactor = (PI * hbar).powf(-(d as f64) / 4.0) * inv_sqrt_det(params.a())?;
    Ok(prefactor * exponent.exp())
}

/// `|phi_0(x)|^2 = pi^{-d/2} hbar^{-d/2} |det A|^{-1} exp(-<x, |A|^{-2} x> / hbar)`
/// for a centered packet, computed from the polar factors.
pub fn phi0_density(params: &PacketParams, x: &[f64]) -> Result<f64> {
    let d = params.dim();
    if x.len() != d {
        return Err(input(format!("point has {} coordinates, expected {d}", x.len())));
    }
    let hbar = params.hbar();
    let u: Vec<f64> = x.iter().zip(params.position()).map(|(x, a)| x - a).collect();
    let det_abs: f64 = params.polar().singular_values().iter().product();
    let y = params.abs_inv().mul_real_vec(&u);
    let norm_sq: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    Ok((PI * hbar).powf(-(d as f64) / 2.0) / det_abs * (-norm_sq / hbar).exp())
}

/// `phi_k(x) = 2^{-|k|/2} (k!)^{-1/2} P_k(x - a) phi_0(x)` with `P_k` read
/// from a y-frame table.
pub fn eval_phik(params: &PacketParams, k: &MultiIndex, x: &[f64], table: &PolyTable) -> Result<C64> {
    check_table(params, table)?;
    let p = table.get(k)?;
    let phi0 = eval_phi0(params, x)?;
    let u: Vec<f64> = x.iter().zip(params.position()).map(|(x, a)| x - a).collect();
    let y = params.to_y(&u);
    Ok(p.eval(&y)? * k.normalization()? * phi0)
}

pub(crate) fn check_table(params: &PacketParams, table: &PolyTable) -> Result<()> {
    if table.dim() != params.dim() {
        return Err(input(format!(
            "table is {}-dimensional, parameters are {}-dimensional",
            table.dim(),
            params.dim()
        )));
    }
    if table.frame() != Frame::Y {
        return Err(input("table must be in the y-frame"));
    }
    Ok(())
}

/// `psi(x) = q(x) phi_0(x)` with `q` an x-frame polynomial.
#[derive(Clone, Debug)]
pub struct GaussianState<'a> {
    params: &'a PacketParams,
    q: SparsePoly,
}

impl<'a> GaussianState<'a> {
    pub fn new(params: &'a PacketParams, q: SparsePoly) -> Result<Self> {
        if q.frame() != Frame::X || q.dim() != params.dim() {
            return Err(input("state polynomial must be an x-frame polynomial of matching dimension"));
        }
        Ok(Self { params, q })
    }

    pub fn ground(params: &'a PacketParams) -> Self {
        Self {
            params,
            q: SparsePoly::one(params.dim(), Frame::X),
        }
    }

    /// The state `phi_k`, i.e. `q = 2^{-|k|/2} (k!)^{-1/2} P_k(x)`.
    pub fn basis(params: &'a PacketParams, k: &MultiIndex, table: &PolyTable) -> Result<Self> {
        check_table(params, table)?;
        let q = to_x_frame(params, table.get(k)?)?.scale_real(k.normalization()?);
        Self::new(params, q)
    }

    pub fn params(&self) -> &'a PacketParams {
        self.params
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.q
    }

    pub fn into_poly(self) -> SparsePoly {
        self.q
    }

    fn check_axis(&self, l: usize) -> Result<()> {
        if l >= self.params.dim() {
            return Err(input(format!("axis {l} out of range for d = {}", self.params.dim())));
        }
        Ok(())
    }

    fn check_centered(&self) -> Result<()> {
        if !self.params.is_centered() {
            return Err(Error::Unsupported(
                "ladder operators require a = 0 and eta = 0".into(),
            ));
        }
        Ok(())
    }

    fn with_poly(&self, q: SparsePoly) -> Self {
        Self { params: self.params, q }
    }

    /// Raising via the conjugated-gradient form
    /// `q -> sqrt(2/hbar) <A e_l, |A|^{-2} x> q - sqrt(hbar/2) <A e_l, grad q>`.
    ///
    /// Reads `A` only.
    pub fn raise_lemma(&self, l: usize) -> Result<Self> {
        self.check_axis(l)?;
        let p = self.params;
        let hbar = p.hbar();
        let a = p.a();
        let gauss = p.polar().abs_pow(-2).real_part().symmetric_part();
        let drift = (&a.adjoint() * &gauss).row(l);
        let coeffs: Vec<C64> = drift.iter().map(|c| c * (2.0 / hbar).sqrt()).collect();
        let mult = &SparsePoly::linear(Frame::X, &coeffs) * &self.q;
        let grad = self.q.directional_gradient(&a.column(l)).scale_real((hbar / 2.0).sqrt());
        Ok(self.with_poly(&mult - &grad))
    }

    /// Raising from the operator definition
    /// `R_l = (<B e_l, x> - i <A e_l, -i hbar grad>) / sqrt(2 hbar)`, using
    /// `grad phi_0 = -(B A^{-1} x / hbar) phi_0`.
    pub fn raise_definition(&self, l: usize) -> Result<Self> {
        self.check_axis(l)?;
        self.check_centered()?;
        let p = self.params;
        let hbar = p.hbar();
        let a = p.a();
        let position = p.b().adjoint().row(l);
        let drift = (&a.adjoint() * p.b_a_inv()).row(l);
        let coeffs: Vec<C64> = position.iter().zip(&drift).map(|(b, m)| b + m).collect();
        let mult = &SparsePoly::linear(Frame::X, &coeffs) * &self.q;
        let grad = self.q.directional_gradient(&a.column(l)).scale_real(hbar);
        Ok(self.with_poly((&mult - &grad).scale_real((2.0 * hbar).sqrt().recip())))
    }

    /// Lowering, the formal adjoint of `R_l`:
    /// `(<conj(B) e_l, x> + i <conj(A) e_l, -i hbar grad>) / sqrt(2 hbar)`.
    pub fn lower(&self, l: usize) -> Result<Self> {
        self.check_axis(l)?;
        self.check_centered()?;
        let p = self.params;
        let hbar = p.hbar();
        let a = p.a();
        let position = p.b().transpose().row(l);
        let drift = (&a.transpose() * p.b_a_inv()).row(l);
        let coeffs: Vec<C64> = position.iter().zip(&drift).map(|(b, m)| b - m).collect();
        let mult = &SparsePoly::linear(Frame::X, &coeffs) * &self.q;
        let conj_col: Vec<C64> = a.column(l).iter().map(|c| c.conj()).collect();
        let grad = self.q.directional_gradient(&conj_col).scale_real(hbar);
        Ok(self.with_poly((&mult + &grad).scale_real((2.0 * hbar).sqrt().recip())))
    }
}

/// The table obtained by applying `R_l` from the operator definition
/// (so reading `B`) and using `R^k phi_0 = 2^{-|k|/2} P_k phi_0`.
pub fn build_ladder(params: &PacketParams, order: u32) -> Result<PolyTable> {
    build_ladder_with(params, order, &BuildOptions::default())
}

pub fn build_ladder_with(params: &PacketParams, order: u32, opts: &BuildOptions) -> Result<PolyTable> {
    opts.check(order)?;
    if !params.is_centered() {
        return Err(Error::Unsupported("ladder tables require a = 0 and eta = 0".into()));
    }
    let d = params.dim();
    let chain = build_by_parent_chain(d, order, Frame::X, |q, l| {
        let state = GaussianState::new(params, q.clone())?;
        Ok(state.raise_definition(l)?.into_poly())
    })?;
    let mut entries = BTreeMap::new();
    for (k, q) in chain {
        let scaled = q.scale_real(2f64.powf(f64::from(k.order()) / 2.0));
        entries.insert(k, to_y_frame(params, &scaled)?);
    }
    PolyTable::new(d, order, Frame::Y, Method::Ladder, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::enumerate_upto;
    use crate::params::generate_params;
    use crate::tables::build_recurrence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn phi0_hermite_values() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let v0 = eval_phi0(&params, &[0.0]).unwrap();
        assert!((v0 - c(PI.powf(-0.25))).norm() < 1e-15);
        let v1 = eval_phi0(&params, &[1.0]).unwrap();
        assert!((v1 - c(PI.powf(-0.25) * (-0.5f64).exp())).norm() < 1e-15);
    }

    #[test]
    fn phi0_density_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..3 {
            let params = generate_params(seed, 2, 1.0).unwrap().with_hbar(0.7).unwrap();
            for _ in 0..20 {
                let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.5..1.5)).collect();
                let direct = eval_phi0(&params, &x).unwrap().norm_sqr();
                let closed = phi0_density(&params, &x).unwrap();
                assert!((direct - closed).abs() <= 1e-12 * closed);
            }
        }
    }

    #[test]
    fn phik_hermite_reduction() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let table = build_recurrence(&params, 3).unwrap();
        let k0 = MultiIndex::zeros(1);
        let k1 = MultiIndex::new(vec![1]);
        for &x in &[-1.3, 0.0, 0.4, 2.0] {
            let phi0 = eval_phi0(&params, &[x]).unwrap();
            assert_eq!(eval_phik(&params, &k0, &[x], &table).unwrap(), phi0);
            let phi1 = eval_phik(&params, &k1, &[x], &table).unwrap();
            assert!((phi1 - phi0 * (2f64.sqrt() * x)).norm() < 1e-15);
        }
        assert!(eval_phik(&params, &MultiIndex::new(vec![4]), &[0.0], &table).is_err());
    }

    #[test]
    fn raise_examples_in_hermite_case() {
        let params = PacketParams::identity(1, 1.0).unwrap();
        let ground = GaussianState::ground(&params);
        let expected = SparsePoly::linear(Frame::X, &[c(2f64.sqrt())]);
        assert!(ground.raise_lemma(0).unwrap().poly().distance(&expected) < 1e-15);
        assert!(ground.raise_definition(0).unwrap().poly().distance(&expected) < 1e-15);
        let lowered = ground.raise_lemma(0).unwrap().lower(0).unwrap();
        assert!(lowered.poly().distance(&SparsePoly::one(1, Frame::X)) < 1e-15);
    }

    #[test]
    fn raise_on_constant_is_degree_one() {
        let params = generate_params(3, 3, 1.0).unwrap().with_hbar(2.5).unwrap();
        let g = GaussianState::ground(&params);
        for l in 0..3 {
            assert_eq!(g.raise_lemma(l).unwrap().poly().degree(), Some(1));
            assert_eq!(g.raise_definition(l).unwrap().poly().degree(), Some(1));
        }
        assert!(g.raise_lemma(3).is_err());
    }

    #[test]
    fn lower_annihilates_ground_state() {
        for d in 1..=3 {
            let params = generate_params(d as u64 + 40, d, 1.0).unwrap();
            let g = GaussianState::ground(&params);
            for l in 0..d {
                assert!(g.lower(l).unwrap().poly().max_coeff() < 1e-12);
            }
        }
    }

    #[test]
    fn raise_chain_reproduces_table() {
        let params = generate_params(12, 2, 1.0).unwrap();
        let table = build_recurrence(&params, 3).unwrap();
        let k = MultiIndex::new(vec![1, 2]);
        let mut state = GaussianState::ground(&params);
        for l in [1, 0, 1] {
            state = state.raise_lemma(l).unwrap();
        }
        let scaled = state.poly().scale_real(2f64.powf(1.5));
        let expected = to_x_frame(&params, table.get(&k).unwrap()).unwrap();
        assert!(scaled.distance(&expected) < 1e-10);
    }

    #[test]
    fn uncentered_ladder_is_unsupported() {
        let params = PacketParams::identity(1, 1.0)
            .unwrap()
            .with_center(vec![0.5], vec![0.0])
            .unwrap();
        let g = GaussianState::ground(&params);
        assert!(matches!(g.raise_definition(0), Err(Error::Unsupported(_))));
        assert!(matches!(g.lower(0), Err(Error::Unsupported(_))));
        assert!(g.raise_lemma(0).is_ok());
        assert!(matches!(build_ladder(&params, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ladder_table_matches_recurrence() {
        let params = generate_params(21, 2, 1.1).unwrap();
        let ladder = build_ladder(&params, 4).unwrap();
        let rec = build_recurrence(&params, 4).unwrap();
        assert!(ladder.distance(&rec).unwrap().max < 1e-10);
        assert_eq!(ladder.len(), enumerate_upto(2, 4).len());
    }

    #[test]
    fn shifted_center_translates_phi_k() {
        let base = generate_params(2, 2, 1.0).unwrap();
        let table = build_recurrence(&base, 2).unwrap();
        let shifted = base.clone().with_center(vec![0.3, -0.2], vec![0.0, 0.0]).unwrap();
        let k = MultiIndex::new(vec![1, 1]);
        let x = [0.5, 0.1];
        let u = [0.2, 0.3];
        let a = eval_phik(&shifted, &k, &x, &table).unwrap();
        let b = eval_phik(&base, &k, &u, &table).unwrap();
        assert!((a - b).norm() < 1e-14);
    }
}
