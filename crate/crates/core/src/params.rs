//! Wave-packet parameter sets `(hbar, A, B, a, eta)`, their JSON form and a
//! seeded generator of admissible pairs.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::linalg::{
    check_admissible, polar_decompose, AdmissibilityReport, ComplexMatrix, PolarForm, ADMISSIBLE_TOL,
    C64,
};

/// A validated parameter set. Construction enforces `hbar > 0` and the
/// admissibility conditions at [`ADMISSIBLE_TOL`], and caches the polar
/// factors of `A` together with the matrices every evaluation needs.
#[derive(Clone, Debug)]
pub struct PacketParams {
    hbar: f64,
    a: ComplexMatrix,
    b: ComplexMatrix,
    position: Vec<f64>,
    momentum: Vec<f64>,
    polar: PolarForm,
    abs_inv: ComplexMatrix,
    b_a_inv: ComplexMatrix,
}

impl PacketParams {
    pub fn new(hbar: f64, a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(hbar, a, b, ADMISSIBLE_TOL)
    }

    pub fn with_tolerance(hbar: f64, a: ComplexMatrix, b: ComplexMatrix, tol: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Validation(format!("hbar must be positive, got {hbar}")));
        }
        let report = check_admissible(&a, &b, tol)?;
        if !report.ok {
            return Err(Error::Validation(format!(
                "(A, B) is not admissible: residuals {:e}, {:e} exceed {tol:e}",
                report.residual1, report.residual2
            )));
        }
        let polar = polar_decompose(&a)?;
        let abs_inv = polar.abs_pow(-1);
        // Symmetric under admissibility; the symmetric part is what the
        // gradient of the Gaussian exponent sees.
        let b_a_inv = (&b * &a.inverse()?).symmetric_part();
        let d = a.dim();
        Ok(Self {
            hbar,
            a,
            b,
            position: vec![0.0; d],
            momentum: vec![0.0; d],
            polar,
            abs_inv,
            b_a_inv,
        })
    }

    /// The identity pair `A = B = I` in `d` dimensions.
    pub fn identity(d: usize, hbar: f64) -> Result<Self> {
        Self::new(hbar, ComplexMatrix::identity(d), ComplexMatrix::identity(d))
    }

    pub fn with_center(mut self, position: Vec<f64>, momentum: Vec<f64>) -> Result<Self> {
        let d = self.dim();
        if position.len() != d || momentum.len() != d {
            return Err(input(format!(
                "phase-space center must have {d} components, got {} and {}",
                position.len(),
                momentum.len()
            )));
        }
        if position.iter().chain(&momentum).any(|v| !v.is_finite()) {
            return Err(input("phase-space center has non-finite components"));
        }
        self.position = position;
        self.momentum = momentum;
        Ok(self)
    }

    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        let p = Self::new(hbar, self.a.clone(), self.b.clone())?;
        p.with_center(self.position.clone(), self.momentum.clone())
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn momentum(&self) -> &[f64] {
        &self.momentum
    }

    pub fn is_centered(&self) -> bool {
        self.position.iter().chain(&self.momentum).all(|&v| v == 0.0)
    }

    pub fn polar(&self) -> &PolarForm {
        &self.polar
    }

    /// `U_A` in `A = |A| U_A`.
    pub fn unitary(&self) -> &ComplexMatrix {
        &self.polar.unitary
    }

    pub fn abs_a(&self) -> &ComplexMatrix {
        &self.polar.abs_a
    }

    pub fn abs_inv(&self) -> &ComplexMatrix {
        &self.abs_inv
    }

    /// Symmetrized `B A^{-1}`.
    pub fn b_a_inv(&self) -> &ComplexMatrix {
        &self.b_a_inv
    }

    /// `y = |A|^{-1} u / sqrt(hbar)` for a displacement `u = x - a`.
    pub fn to_y(&self, u: &[f64]) -> Vec<C64> {
        let s = self.hbar.sqrt().recip();
        self.abs_inv.mul_real_vec(u).into_iter().map(|v| v * s).collect()
    }

    pub fn admissibility(&self) -> AdmissibilityReport {
        check_admissible(&self.a, &self.b, ADMISSIBLE_TOL).expect("dimensions checked at construction")
    }

    pub fn to_file(&self) -> ParamsFile {
        ParamsFile {
            d: self.dim(),
            hbar: self.hbar,
            a_mat: encode_matrix(&self.a),
            b_mat: encode_matrix(&self.b),
            position: self.position.clone(),
            momentum: self.momentum.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("params serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        ParamsFile::from_json(text)?.into_params()
    }
}

/// On-disk form: `{"d", "hbar", "A", "B", "a", "eta"}`, matrices row-major
/// with each entry a `[re, im]` pair.
///
/// This is deliberately unvalidated so that inadmissible pairs can still be
/// loaded and checked.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ParamsFile {
    pub d: usize,
    pub hbar: f64,
    #[serde(rename = "A")]
    pub a_mat: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    pub b_mat: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "a", default)]
    pub position: Vec<f64>,
    #[serde(rename = "eta", default)]
    pub momentum: Vec<f64>,
}

impl ParamsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn matrices(&self) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let a = decode_matrix("A", &self.a_mat, self.d)?;
        let b = decode_matrix("B", &self.b_mat, self.d)?;
        Ok((a, b))
    }

    pub fn into_params(self) -> Result<PacketParams> {
        let (a, b) = self.matrices()?;
        let d = self.d;
        let fill = |v: Vec<f64>| if v.is_empty() { vec![0.0; d] } else { v };
        PacketParams::new(self.hbar, a, b)?.with_center(fill(self.position), fill(self.momentum))
    }
}

fn encode_matrix(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn decode_matrix(name: &str, rows: &[Vec<[f64; 2]>], d: usize) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::Parse("d must be positive".into()));
    }
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::Parse(format!("{name} must be a {d}x{d} matrix")));
    }
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

/// Knobs for [`generate_params_with`].
#[derive(Clone, Debug)]
pub struct GeneratorOptions {
    pub spread: f64,
    pub hbar: f64,
    /// Rejection threshold on `cond(A)`.
    pub condition_cap: f64,
    pub max_attempts: usize,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        Self {
            spread: 1.0,
            hbar: 1.0,
            condition_cap: 1e4,
            max_attempts: 64,
        }
    }
}

/// Builds `A = P U`, `B = (P^{-2} + i S) A` from a real symmetric positive
/// definite `P`, a unitary `U` and a real symmetric `S`.
///
/// `A A^* = P^2` is real, so `|A| = P` and both admissibility identities hold
/// in exact arithmetic.
pub fn params_from_factors(
    abs_a: &[Vec<f64>],
    unitary: &ComplexMatrix,
    s: &[Vec<f64>],
    hbar: f64,
) -> Result<PacketParams> {
    let d = unitary.dim();
    let real = |name: &str, m: &[Vec<f64>]| -> Result<DMatrix<f64>> {
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(input(format!("{name} must be {d}x{d}")));
        }
        let m = DMatrix::from_fn(d, d, |i, j| m[i][j]);
        if (&m - m.transpose()).amax() > 1e-14 * m.amax().max(1.0) {
            return Err(input(format!("{name} must be symmetric")));
        }
        Ok((&m + m.transpose()) * 0.5)
    };
    let p = real("|A|", abs_a)?;
    let s = real("S", s)?;
    let p_inv = p
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("|A| is not invertible".into()))?;
    let p_inv = (&p_inv + p_inv.transpose()) * 0.5;
    let to_c = |m: &DMatrix<f64>| ComplexMatrix::from_fn(d, |i, j| C64::new(m[(i, j)], 0.0));
    let a = &to_c(&p) * unitary;
    // (P^{-1} + i S P) U
    let sp = &s * &p;
    let inner = ComplexMatrix::from_fn(d, |i, j| C64::new(p_inv[(i, j)], sp[(i, j)]));
    let b = &inner * unitary;
    PacketParams::new(hbar, a, b)
}

pub fn generate_params(seed: u64, d: usize, spread: f64) -> Result<PacketParams> {
    generate_params_with(
        seed,
        d,
        &GeneratorOptions {
            spread,
            ..GeneratorOptions::default()
        },
    )
}

/// Deterministic in `seed`. Draws `P` as the polar factor of a real Gaussian
/// matrix scaled by `spread`, `U` as the unitary polar factor of a complex
/// Gaussian matrix, and `S` symmetric Gaussian; resamples while
/// `cond(A) > condition_cap`.
pub fn generate_params_with(seed: u64, d: usize, opts: &GeneratorOptions) -> Result<PacketParams> {
    if d == 0 {
        return Err(input("dimension must be at least 1"));
    }
    if !(opts.spread.is_finite() && opts.spread > 0.0) {
        return Err(input(format!("spread must be positive, got {}", opts.spread)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = move || -> f64 { StandardNormal.sample(&mut rng) };
    for _ in 0..opts.max_attempts {
        let g = ComplexMatrix::from_fn(d, |_, _| C64::new(opts.spread * normal(), 0.0));
        let c = ComplexMatrix::from_fn(d, |_, _| C64::new(normal(), normal()));
        let mut s = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in i..d {
                let v = normal();
                s[i][j] = v;
                s[j][i] = v;
            }
        }
        let Ok(g_polar) = polar_decompose(&g) else { continue };
        let Ok(c_polar) = polar_decompose(&c) else { continue };
        let sigma = g_polar.singular_values();
        let cond = sigma.iter().copied().fold(0.0, f64::max)
            / sigma.iter().copied().fold(f64::INFINITY, f64::min);
        if cond.is_nan() || cond > opts.condition_cap {
            continue;
        }
        let p = g_polar.abs_a.real_part().symmetric_part();
        let p_rows: Vec<Vec<f64>> = p.rows().iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        match params_from_factors(&p_rows, &c_polar.unitary, &s, opts.hbar) {
            Ok(params) => return Ok(params),
            Err(Error::Validation(_)) | Err(Error::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Capacity(format!(
        "no admissible pair with cond(A) <= {:e} after {} attempts",
        opts.condition_cap, opts.max_attempts
    )))
}
