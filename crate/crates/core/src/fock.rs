//! Brute-force oracle in a truncated number basis `|0⟩ … |D−1⟩`.
//!
//! Nothing here uses the bar/check shortcut of the symbolic engine: state
//! and energy corrections come from the literal resolvent sums with
//! denominators `ħω(n − j)`, and spectra from a dense Jacobi eigensolver.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::boson::OperatorPoly;
use crate::coeff::UnitValues;
use crate::series::OperatorSeries;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error("level {level} with order {order} and shift {shift} needs cutoff > {needed}, have {cutoff}")]
    Margin { level: usize, order: usize, shift: usize, cutoff: usize, needed: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

/// Dense complex matrix indexed by Fock level, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

pub type FockVector = Vec<Complex64>;

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        FockMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = FockMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = FockMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        FockMatrix::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FockMatrix { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn apply(&self, v: &[Complex64]) -> FockVector {
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn column(&self, c: usize) -> FockVector {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest `|r − c|` with a nonzero entry.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if self[(r, c)] != ZERO {
                    bw = bw.max(r.abs_diff(c));
                }
            }
        }
        bw
    }

    /// Entry-wise resolvent: `(r, c) ↦ M[r, c]/(c − r)`, diagonal dropped.
    /// A numeric counterpart of the symbolic `bar` transform.
    pub fn bar(&self) -> Self {
        FockMatrix::from_fn(self.dim, |r, c| {
            if r == c {
                ZERO
            } else {
                self[(r, c)] / (c as f64 - r as f64)
            }
        })
    }

    /// Diagonal part.
    pub fn check(&self) -> Self {
        FockMatrix::from_fn(self.dim, |r, c| if r == c { self[(r, c)] } else { ZERO })
    }

    /// Top-left `k × k` block.
    pub fn block(&self, k: usize) -> Self {
        FockMatrix::from_fn(k, |r, c| self[(r, c)])
    }

    pub fn max_abs_diff(&self, o: &FockMatrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for FockMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FockMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl<'a> Mul<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn mul(self, o: &FockMatrix) -> FockMatrix {
        let n = self.dim;
        let mut out = FockMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let x = self[(r, k)];
                if x == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += x * o.data[k * n + c];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn add(self, o: &FockMatrix) -> FockMatrix {
        FockMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn sub(self, o: &FockMatrix) -> FockMatrix {
        FockMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

/// `√(n(n−1)…(n−k+1))`
fn sqrt_falling(n: usize, k: u32) -> f64 {
    (0..k as usize).map(|i| (n - i) as f64).product::<f64>().sqrt()
}

/// Exact matrix elements of `x` between levels below the cutoff.
pub fn to_matrix(x: &OperatorPoly, dim: usize, units: &UnitValues) -> Result<FockMatrix, FockError> {
    if dim == 0 {
        return Err(FockError::ZeroCutoff);
    }
    let mut m = FockMatrix::zeros(dim);
    for (mono, c) in x.terms() {
        let c = c.to_complex(units);
        let (j, k) = (mono.dag as usize, mono.ann as usize);
        for n in k..dim {
            let row = n - k + j;
            if row >= dim {
                break;
            }
            // a^k |n⟩ then a†^j |n−k⟩
            let amp = sqrt_falling(n, k as u32) * sqrt_falling(row, j as u32);
            m[(row, n)] += c * amp;
        }
    }
    Ok(m)
}

/// `Σ_m λ^m · matrix(s_m)`
pub fn series_matrix(s: &OperatorSeries, lambda: f64, dim: usize, units: &UnitValues) -> Result<FockMatrix, FockError> {
    let mut out = FockMatrix::zeros(dim);
    for (m, c) in s.coeffs().iter().enumerate() {
        out = &out + &to_matrix(c, dim, units)?.scale(Complex64::new(lambda.powi(m as i32), 0.0));
    }
    Ok(out)
}

pub fn basis(dim: usize, n: usize) -> FockVector {
    let mut v = vec![ZERO; dim];
    v[n] = Complex64::new(1.0, 0.0);
    v
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// λ-expansion of one perturbed level, intermediate normalization.
#[derive(Clone, Debug)]
pub struct PerturbedLevel {
    pub n: usize,
    /// `ε_(0..=M)`, with `ε_(0) = ħω(n + ½)`.
    pub energy_series: Vec<f64>,
    /// `η_(0..=M)`, with `η_(0) = e_n`.
    pub state_series: Vec<FockVector>,
}

impl PerturbedLevel {
    pub fn energy(&self, lambda: f64) -> f64 {
        self.energy_series.iter().enumerate().map(|(m, e)| lambda.powi(m as i32) * e).sum()
    }

    /// `|n⁽ᴹ⁾⟩ = Σ λ^m η_m`
    pub fn state(&self, lambda: f64) -> FockVector {
        let mut v = vec![ZERO; self.state_series[0].len()];
        for (m, eta) in self.state_series.iter().enumerate() {
            axpy(&mut v, Complex64::new(lambda.powi(m as i32), 0.0), eta);
        }
        v
    }
}

/// Highest level whose order-M corrections stay clear of the cutoff.
pub fn max_safe_level(dim: usize, order: usize, shift: usize) -> Option<usize> {
    (dim as i64 - 4 - (order * shift) as i64).try_into().ok()
}

/// Literal recursive Rayleigh–Schrödinger sums for level `n`:
///
/// `ε_m = ⟨n|V|η_{m−1}⟩`,
/// `η_m = Σ_{j≠n} |j⟩⟨j| [V η_{m−1} − Σ_{l=1}^{m−1} ε_l η_{m−l}] / ħω(n − j)`.
pub fn rs_sums(v: &FockMatrix, order: usize, n: usize, hbar_omega: f64) -> Result<PerturbedLevel, FockError> {
    let dim = v.dim();
    let shift = v.bandwidth();
    match max_safe_level(dim, order, shift) {
        Some(top) if n <= top => {}
        _ => {
            return Err(FockError::Margin { level: n, order, shift, cutoff: dim, needed: n + order * shift + 4 })
        }
    }
    let e0 = hbar_omega * (n as f64 + 0.5);
    let mut eps = vec![e0];
    let mut etas = vec![basis(dim, n)];
    for m in 1..=order {
        let v_eta = v.apply(&etas[m - 1]);
        eps.push(v_eta[n].re);
        let mut rhs = v_eta;
        for l in 1..m {
            axpy(&mut rhs, Complex64::new(-eps[l], 0.0), &etas[m - l]);
        }
        let eta: FockVector = (0..dim)
            .map(|j| if j == n { ZERO } else { rhs[j] / (hbar_omega * (n as f64 - j as f64)) })
            .collect();
        etas.push(eta);
    }
    Ok(PerturbedLevel { n, energy_series: eps, state_series: etas })
}

/// Ladder corrections read off the literal state sums: `ã|n⟩ = √n|n−1⟩`
/// order by order gives
/// `α_m e_n = √n η_{n−1,m} − Σ_{l<m} α_l η_{n,m−l}`.
///
/// `levels[n]` must hold level `n`; the result has one matrix per order and
/// column `n` of `α_m` is reliable for `n ≤ levels.len() − 1 − (m−1)·g`
/// with `g` the bandwidth of `V`.
pub fn ladder_from_states(levels: &[PerturbedLevel], order: usize) -> Vec<FockMatrix> {
    let dim = levels[0].state_series[0].len();
    let a = FockMatrix::from_fn(dim, |r, c| if c == r + 1 { Complex64::new((c as f64).sqrt(), 0.0) } else { ZERO });
    let mut out = vec![a];
    for m in 1..=order {
        let mut alpha = FockMatrix::zeros(dim);
        for (n, lvl) in levels.iter().enumerate() {
            let mut col = if n == 0 {
                vec![ZERO; dim]
            } else {
                levels[n - 1].state_series[m].iter().map(|x| x * (n as f64).sqrt()).collect()
            };
            for (l, al) in out.iter().enumerate() {
                let t = al.apply(&lvl.state_series[m - l]);
                axpy(&mut col, Complex64::new(-1.0, 0.0), &t);
            }
            for (r, x) in col.into_iter().enumerate() {
                alpha[(r, n)] = x;
            }
        }
        out.push(alpha);
    }
    out
}

/// `x(A, B)`: every `a†^j a^k` term becomes `B^j A^k`.
pub fn eval_in(x: &OperatorPoly, a: &FockMatrix, ad: &FockMatrix, units: &UnitValues) -> FockMatrix {
    let dim = a.dim();
    let mut a_pows = vec![FockMatrix::identity(dim)];
    let mut ad_pows = vec![FockMatrix::identity(dim)];
    let mut out = FockMatrix::zeros(dim);
    for (mono, c) in x.terms() {
        while a_pows.len() <= mono.ann as usize {
            let next = a_pows.last().unwrap() * a;
            a_pows.push(next);
        }
        while ad_pows.len() <= mono.dag as usize {
            let next = ad_pows.last().unwrap() * ad;
            ad_pows.push(next);
        }
        let t = &ad_pows[mono.dag as usize] * &a_pows[mono.ann as usize];
        out = &out + &t.scale(c.to_complex(units));
    }
    out
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Returns ascending
/// eigenvalues and the matrix whose columns are the eigenvectors.
pub fn eig_hermitian(h: &FockMatrix) -> Result<(Vec<f64>, FockMatrix), FockError> {
    let n = h.dim();
    let scale = h.norm().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * scale {
        return Err(FockError::NotHermitian(defect));
    }
    let mut a = h.clone();
    let mut v = FockMatrix::identity(n);
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs <= 1e-300 {
                    continue;
                }
                // Phase the (p, q) entry to a real positive number, then apply
                // a real rotation: G = diag(1, e^{-iφ}) · [[c, s], [−s, c]].
                let phase = b / babs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * babs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase.conj() * -s;
                let g_qq = phase.conj() * c;
                // A ← A G
                for r in 0..n {
                    let (x, y) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = x * g_pp + y * g_qp;
                    a[(r, q)] = x * g_pq + y * g_qq;
                }
                // A ← G† A
                for col in 0..n {
                    let (x, y) = (a[(p, col)], a[(q, col)]);
                    a[(p, col)] = g_pp.conj() * x + g_qp.conj() * y;
                    a[(q, col)] = g_pq.conj() * x + g_qq.conj() * y;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for r in 0..n {
                    let (x, y) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = x * g_pp + y * g_qp;
                    v[(r, q)] = x * g_pq + y * g_qq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = FockMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// `H0 = ħω(N + ½)` in the truncated basis.
pub fn h0_matrix(dim: usize, units: &UnitValues) -> FockMatrix {
    let hw = units.hbar * units.omega;
    FockMatrix::from_fn(dim, |r, c| if r == c { Complex64::new(hw * (r as f64 + 0.5), 0.0) } else { ZERO })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lambda: Option<f64>,
    pub level: Option<usize>,
    pub residual: f64,
    pub slope: Option<f64>,
    pub pass: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Residuals below this are float noise; a level whose residuals all fall
/// under it is reported as exact.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// `‖ã⁽ᴹ⁾|n⁽ᴹ⁾⟩ − √n |(n−1)⁽ᴹ⁾⟩‖` for every interior level and each λ, plus
/// a per-level log-log slope check `≥ M + 0.9`.
pub fn verify_alpha(
    alphas: &OperatorSeries,
    v: &OperatorPoly,
    dim: usize,
    order: usize,
    lambdas: &[f64],
    units: &UnitValues,
    max_level: usize,
) -> Result<Vec<Check>, FockError> {
    let vm = to_matrix(v, dim, units)?;
    let shift = v.max_shift() as usize;
    let top = max_safe_level(dim / 2, order, shift)
        .ok_or(FockError::Margin { level: 0, order, shift, cutoff: dim, needed: 2 * (order * shift + 4) })?
        .min(max_level);
    let hw = units.hbar * units.omega;
    let levels: Vec<PerturbedLevel> = (0..=top).map(|n| rs_sums(&vm, order, n, hw)).collect::<Result<_, _>>()?;
    let alphas = alphas.truncate(order);
    let mut checks = Vec::new();
    for n in 0..=top {
        let mut residuals = Vec::new();
        for &lam in lambdas {
            let at = series_matrix(&alphas, lam, dim, units)?;
            let lhs = at.apply(&levels[n].state(lam));
            let rhs = if n == 0 { vec![ZERO; dim] } else { levels[n - 1].state(lam) };
            let diff: FockVector = lhs.iter().zip(&rhs).map(|(x, y)| x - y * (n as f64).sqrt()).collect();
            let r = vec_norm(&diff);
            checks.push(Check {
                name: "alpha_residual".into(),
                lambda: Some(lam),
                level: Some(n),
                residual: r,
                slope: None,
                pass: lam != 0.0 || r <= RESIDUAL_FLOOR,
            });
            if lam > 0.0 {
                residuals.push((lam, r));
            }
        }
        if residuals.len() >= 2 {
            let exact = residuals.iter().all(|&(_, r)| r <= RESIDUAL_FLOOR);
            let (xs, ys): (Vec<f64>, Vec<f64>) = residuals.iter().copied().unzip();
            let slope = if exact { f64::INFINITY } else { loglog_slope(&xs, &ys) };
            checks.push(Check {
                name: "alpha_residual_slope".into(),
                lambda: None,
                level: Some(n),
                residual: ys.iter().copied().fold(0.0, f64::max),
                slope: Some(slope),
                pass: exact || slope >= order as f64 + 0.9,
            });
        }
    }
    Ok(checks)
}
