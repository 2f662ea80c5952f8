//! Rayleigh–Schrödinger theory for `H = ħω(N + ½) + λV` in operator form.
//!
//! For the oscillator the unperturbed gaps are `ħω(n − j)`, so the reduced
//! resolvent acting on `X|n⟩` for a normal-ordered `X` is `bar(X)/ħω`,
//! independent of `n`. The state corrections therefore become
//! level-independent operators `Ω_m` with `|η_{n,(m)}⟩ = Ω_m |n⟩`, and
//! everything else (energies, ladder corrections, norms, expectation values)
//! is built from them by exact operator algebra.
//!
//! States use intermediate normalization `⟨n⁽⁰⁾|n⟩ = 1` throughout.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::boson::{Monomial, OperatorPoly};
use crate::coeff::{rat, Scalar, ScalarSum, UnitValues};
use crate::diag::DiagonalPoly;
use crate::numeric::{NumericPoly, NumericSeries};
use crate::parser::{require_hermitian, HermiticityError};
use crate::series::{DiagSeries, OperatorSeries};

/// Orders above this need an explicit override.
pub const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtError {
    #[error(transparent)]
    NotHermitian(#[from] HermiticityError),
    #[error("series does not reduce to the bare annihilation operator at order zero")]
    NotLadderSeries,
    #[error("squeeze magnitude must be finite and non-negative, got {0}")]
    BadSqueeze(f64),
}

fn inv_hbar_omega() -> ScalarSum {
    Scalar::hbar_omega().inv().expect("ħω is invertible").into()
}

/// `Ω_0 … Ω_M`, with `Ω_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateCorrectionOps {
    pub omegas: Vec<OperatorPoly>,
}

impl StateCorrectionOps {
    pub fn as_series(&self) -> OperatorSeries {
        OperatorSeries::from_coeffs(self.omegas.clone())
    }
}

/// `eps[m](n) = ε_{n,(m)}`; `eps[0] = ħω(n + ½)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergySeries {
    pub eps: Vec<DiagonalPoly>,
}

impl EnergySeries {
    pub fn partial_sum(&self, n: usize, lambda: f64, units: &UnitValues) -> f64 {
        self.eps
            .iter()
            .enumerate()
            .map(|(m, p)| lambda.powi(m as i32) * p.eval_f64(n as f64, units).re)
            .sum()
    }
}

/// The full perturbative data for one `V` up to order `M`.
#[derive(Clone, Debug)]
pub struct Expansion {
    v: OperatorPoly,
    order: usize,
    omegas: Vec<OperatorPoly>,
    // energy_ops[l] = check(V Ω_{l-1}) for l ≥ 1; slot 0 holds H0.
    energy_ops: Vec<OperatorPoly>,
    alphas: Vec<OperatorPoly>,
}

impl Expansion {
    pub fn new(v: &OperatorPoly, order: usize) -> Result<Self, PtError> {
        require_hermitian(v)?;
        let inv_hw = inv_hbar_omega();
        let hw: ScalarSum = Scalar::hbar_omega().into();
        let h0 = (&OperatorPoly::number() + &OperatorPoly::scalar(ScalarSum::from_rational(rat(1, 2))))
            .scale(&hw);

        let mut omegas = vec![OperatorPoly::identity()];
        let mut energy_ops = vec![h0];
        for m in 1..=order {
            energy_ops.push(v.normal_order_product(&omegas[m - 1]).check());
            let mut x = v.normal_order_product(&omegas[m - 1]);
            for l in 1..m {
                x = &x - &omegas[m - l].normal_order_product(&energy_ops[l]);
            }
            omegas.push(x.bar().scale(&inv_hw));
        }

        let a = OperatorPoly::annihilation();
        let mut alphas = vec![a.clone()];
        for m in 1..=order {
            let mut x = omegas[m].commutator(&a);
            for l in 1..m {
                x = &x - &alphas[l].normal_order_product(&omegas[m - l]);
            }
            alphas.push(x);
        }

        Ok(Expansion { v: v.clone(), order, omegas, energy_ops, alphas })
    }

    pub fn perturbation(&self) -> &OperatorPoly {
        &self.v
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn state_corrections(&self) -> StateCorrectionOps {
        StateCorrectionOps { omegas: self.omegas.clone() }
    }

    pub fn omegas(&self) -> &[OperatorPoly] {
        &self.omegas
    }

    pub fn energies(&self) -> EnergySeries {
        EnergySeries { eps: self.energy_ops.iter().map(OperatorPoly::diagonal_as_npoly).collect() }
    }

    pub fn alphas(&self) -> OperatorSeries {
        OperatorSeries::from_coeffs(self.alphas.clone())
    }

    /// `Σ_{l+l'=k} check(Ω_{l'}† O Ω_l)` as functions of `n`, `k = 0..=M`.
    pub fn sandwich(&self, o: &OperatorPoly) -> DiagSeries {
        let mut coeffs = vec![DiagonalPoly::zero(); self.order + 1];
        for l in 0..=self.order {
            let o_omega = o.normal_order_product(&self.omegas[l]);
            for lp in 0..=self.order - l {
                let d = self.omegas[lp].dagger().normal_order_product(&o_omega).check();
                coeffs[l + lp] = &coeffs[l + lp] + &d.diagonal_as_npoly();
            }
        }
        DiagSeries::from_coeffs(coeffs)
    }

    pub fn expectation(&self, o: &OperatorPoly) -> Expectation {
        let value = self.sandwich(o);
        let norm = self.sandwich(&OperatorPoly::identity());
        let inv = norm.reciprocal().expect("intermediate normalization fixes the leading norm to one");
        let normalized = &value * &inv;
        Expectation { value, norm, normalized }
    }

    /// `W = Ω(N) · Z(N)^(-1/2)`: maps `|n⁽⁰⁾⟩` to the unit-norm perturbed
    /// state, unitary up to order M.
    pub fn unit_norm_frame(&self) -> OperatorSeries {
        let norm = self.sandwich(&OperatorPoly::identity());
        let z = norm.inverse_sqrt().expect("leading norm is one");
        let z_ops = OperatorSeries::from_coeffs(z.coeffs().iter().map(DiagonalPoly::to_operator).collect());
        &OperatorSeries::from_coeffs(self.omegas.clone()) * &z_ops
    }

    /// Ladder operator for unit-norm perturbed states, `W a W†`.
    pub fn unit_norm_alphas(&self) -> OperatorSeries {
        let w = self.unit_norm_frame();
        let wa = &w * &OperatorSeries::constant(OperatorPoly::annihilation(), self.order);
        &wa * &w.dagger()
    }

    /// Polynomial part of the amplitudes of `Ω_m|n⟩` grouped by level shift.
    pub fn state_amplitudes(&self, m: usize) -> LevelAmplitudes {
        LevelAmplitudes::of(&self.omegas[m])
    }
}

/// Expectation data for one observable, as λ-series of functions of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    /// `⟨n⁽ᴹ⁾|O|n⁽ᴹ⁾⟩`
    pub value: DiagSeries,
    /// `⟨n⁽ᴹ⁾|n⁽ᴹ⁾⟩`
    pub norm: DiagSeries,
    /// `value / norm`, re-truncated at order M.
    pub normalized: DiagSeries,
}

/// `X|n⟩ = Σ_e √(base_e(n)) · P_e(n) |n+e⟩` where `base_e` is `n(n−1)…(n+e+1)`
/// for `e < 0` and `(n+1)…(n+e)` for `e > 0`. Only `P_e` is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAmplitudes {
    pub by_shift: BTreeMap<i64, DiagonalPoly>,
}

impl LevelAmplitudes {
    pub fn of(x: &OperatorPoly) -> Self {
        let mut by_shift: BTreeMap<i64, DiagonalPoly> = BTreeMap::new();
        for (m, c) in x.terms() {
            let e = m.excess().0;
            // a†^j a^k |n⟩: for e ≥ 0 the square root reduces to
            // √((n+1)^(e rising)) · n^(k falling); for e < 0 to
            // √(n^(|e| falling)) · (n+e)^(j falling).
            let poly = if e >= 0 {
                DiagonalPoly::falling_factorial(m.ann)
            } else {
                DiagonalPoly::falling_factorial(m.dag).shifted(e)
            };
            let entry = by_shift.entry(e).or_default();
            *entry = &*entry + &poly.scale(c);
        }
        by_shift.retain(|_, p| !p.is_zero());
        LevelAmplitudes { by_shift }
    }

    pub fn shift(&self, e: i64) -> DiagonalPoly {
        self.by_shift.get(&e).cloned().unwrap_or_default()
    }

    /// Numeric amplitude `⟨n+e|X|n⟩`.
    pub fn amplitude(&self, n: usize, e: i64, units: &UnitValues) -> Complex64 {
        let n_i = n as i64;
        if n_i + e < 0 {
            return Complex64::new(0.0, 0.0);
        }
        let base: f64 = if e >= 0 {
            (1..=e).map(|i| (n_i + i) as f64).product()
        } else {
            (0..-e).map(|i| (n_i - i) as f64).product()
        };
        self.shift(e).eval_f64(n as f64, units) * base.sqrt()
    }
}

pub fn state_corrections(v: &OperatorPoly, order: usize) -> Result<StateCorrectionOps, PtError> {
    Ok(Expansion::new(v, order)?.state_corrections())
}

pub fn energy_corrections(v: &OperatorPoly, order: usize) -> Result<EnergySeries, PtError> {
    Ok(Expansion::new(v, order)?.energies())
}

/// `α_0 = a`, `α_m = [Ω_m, a] − Σ_{l=1}^{m−1} α_l Ω_{m−l}`.
pub fn alpha_corrections(v: &OperatorPoly, order: usize) -> Result<OperatorSeries, PtError> {
    Ok(Expansion::new(v, order)?.alphas())
}

pub fn creation_corrections(alphas: &OperatorSeries) -> OperatorSeries {
    alphas.dagger()
}

/// `Ñ = ã†ã`, truncated.
pub fn number_corrections(alphas: &OperatorSeries) -> OperatorSeries {
    &alphas.dagger() * alphas
}

pub fn expectation(v: &OperatorPoly, o: &OperatorPoly, order: usize) -> Result<Expectation, PtError> {
    Ok(Expansion::new(v, order)?.expectation(o))
}

/// `[ã, ã†]` as a truncated series.
pub fn ladder_commutator(alphas: &OperatorSeries) -> OperatorSeries {
    alphas.commutator(&alphas.dagger())
}

/// Substitutes `a → x`, `a† → x†` into a normal-ordered polynomial.
pub fn substitute(poly: &OperatorPoly, x: &OperatorSeries) -> OperatorSeries {
    let order = x.order();
    let xd = x.dagger();
    let mut ann_pows = vec![OperatorSeries::constant(OperatorPoly::identity(), order)];
    let mut dag_pows = ann_pows.clone();
    let mut out = OperatorSeries::zero(order);
    for (m, c) in poly.terms() {
        while ann_pows.len() <= m.ann as usize {
            let next = ann_pows.last().unwrap() * x;
            ann_pows.push(next);
        }
        while dag_pows.len() <= m.dag as usize {
            let next = dag_pows.last().unwrap() * &xd;
            dag_pows.push(next);
        }
        let t = &dag_pows[m.dag as usize] * &ann_pows[m.ann as usize];
        out = &out + &t.scale(c);
    }
    out
}

fn is_ladder_series(s: &OperatorSeries) -> bool {
    *s.coeff(0) == OperatorPoly::annihilation()
}

/// Solves `ã = Σ λ^m α_m(a, a†)` for `a` as a series in `ã, ã†`. The result
/// is written with the same operator type: its `a`, `a†` stand for `ã`, `ã†`,
/// whose commutator is one up to the truncation order.
pub fn invert_series(s: &OperatorSeries) -> Result<OperatorSeries, PtError> {
    if !is_ladder_series(s) {
        return Err(PtError::NotLadderSeries);
    }
    let order = s.order();
    let b = OperatorSeries::constant(OperatorPoly::annihilation(), order);
    let mut x = b.clone();
    // Each pass fixes one more order: a = ã − Σ_{m≥1} λ^m α_m(a, a†).
    for _ in 0..order {
        let mut next = b.clone();
        for m in 1..=order {
            if s.coeff(m).is_zero() {
                continue;
            }
            let sub = substitute(s.coeff(m), &x.truncate(order - m));
            for (k, c) in sub.coeffs().iter().enumerate() {
                let mut slot = next.coeff(k + m).clone();
                slot = &slot - c;
                next.set(k + m, slot);
            }
        }
        x = next;
    }
    Ok(x)
}

/// Writes an operator `O(a, a†)` as a series in `ã, ã†`.
pub fn rewrite_in_tilde(o: &OperatorPoly, alphas: &OperatorSeries, order: usize) -> Result<OperatorSeries, PtError> {
    let inv = invert_series(&alphas.truncate(order))?;
    Ok(substitute(o, &inv))
}

/// `[V̄, a]/ħω`
pub fn alpha1_closed_form(v: &OperatorPoly) -> OperatorPoly {
    v.bar().commutator(&OperatorPoly::annihilation()).scale(&inv_hbar_omega())
}

/// `{[bar(V V̄), a] − [bar(V̄) V̌, a] − [V̄, a] V̄}/(ħω)²`
pub fn alpha2_closed_form(v: &OperatorPoly) -> OperatorPoly {
    let a = OperatorPoly::annihilation();
    let vb = v.bar();
    let t1 = v.normal_order_product(&vb).bar().commutator(&a);
    let t2 = vb.bar().normal_order_product(&v.check()).commutator(&a);
    let t3 = vb.commutator(&a).normal_order_product(&vb);
    let inv = inv_hbar_omega();
    (&(&t1 - &t2) - &t3).scale(&(&inv * &inv))
}

/// `{−[bar(V V̄)†, a†] + [V̌ bar(V̄), a†] + V̄ [V̄, a†]}/(ħω)²`
pub fn alpha2_dagger_closed_form(v: &OperatorPoly) -> OperatorPoly {
    let ad = OperatorPoly::creation();
    let vb = v.bar();
    let t1 = v.normal_order_product(&vb).bar().dagger().commutator(&ad);
    let t2 = v.check().normal_order_product(&vb.bar()).commutator(&ad);
    let t3 = vb.normal_order_product(&vb.commutator(&ad));
    let inv = inv_hbar_omega();
    (&(&t2 - &t1) + &t3).scale(&(&inv * &inv))
}

/// `[V̄, N]/ħω`
pub fn nu1_closed_form(v: &OperatorPoly) -> OperatorPoly {
    v.bar().commutator(&OperatorPoly::number()).scale(&inv_hbar_omega())
}

/// `{½ V̄[V̄, N] − a†(½[V̄², a] − [bar(V V̄), a] + [bar(V̄) V̌, a])}/(ħω)² + h.c.`
pub fn nu2_closed_form(v: &OperatorPoly) -> OperatorPoly {
    let a = OperatorPoly::annihilation();
    let ad = OperatorPoly::creation();
    let n = OperatorPoly::number();
    let half = rat(1, 2);
    let vb = v.bar();
    let first = vb.normal_order_product(&vb.commutator(&n)).scale_rational(&half);
    let inner = &(&vb.pow(2).commutator(&a).scale_rational(&half)
        - &v.normal_order_product(&vb).bar().commutator(&a))
        + &vb.bar().normal_order_product(&v.check()).commutator(&a);
    let x = &first - &ad.normal_order_product(&inner);
    let inv = inv_hbar_omega();
    (&x + &x.dagger()).scale(&(&inv * &inv))
}

/// Squeezing parameters with `r ≥ 0` and `θ` reduced into `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeParams {
    r: f64,
    theta: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, theta: f64) -> Result<Self, PtError> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(PtError::BadSqueeze(r));
        }
        Ok(SqueezeParams { r, theta: theta.rem_euclid(std::f64::consts::TAU) })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `ã_z = ã cosh r − e^{iθ} ã† sinh r`, evaluated with float coefficients.
pub fn squeezed_annihilator(alphas: &OperatorSeries, params: SqueezeParams, units: &UnitValues) -> NumericSeries {
    let ch = Complex64::new(params.r.cosh(), 0.0);
    let sh = Complex64::from_polar(params.r.sinh(), params.theta);
    let coeffs = alphas
        .coeffs()
        .iter()
        .map(|alpha| {
            let x = NumericPoly::from_exact(alpha, units);
            let xd = NumericPoly::from_exact(&alpha.dagger(), units);
            &x.scale(ch) - &xd.scale(sh)
        })
        .collect();
    NumericSeries::from_coeffs(coeffs)
}

/// Poisson amplitudes `e^{−|α|²/2} α^n / √(n!)`, `n = 0..=n_max`, of a
/// coherent state over the perturbed levels.
pub fn coherent_state_coeffs(n_max: usize, alpha: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    out.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        out.push(c);
    }
    out
}

/// Coefficient of `a†^dag a^ann` as a single scalar, for tests and reports.
pub fn single_coeff(x: &OperatorPoly, dag: u32, ann: u32) -> Option<Scalar> {
    x.coeff(Monomial::new(dag, ann)).single()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Qi2, UnitMonomial};

    fn q() -> OperatorPoly {
        OperatorPoly::position()
    }

    fn sc(value: Qi2, h: i32, m: i32, w: i32) -> ScalarSum {
        Scalar::new(value, UnitMonomial::new(h, m, w)).into()
    }

    /// 1/√(2ħmω³)
    fn c1() -> ScalarSum {
        sc(Qi2::sqrt2().scale(&rat(1, 2)), -1, -1, -3)
    }

    /// 1/(2ħmω³)
    fn c2() -> ScalarSum {
        sc(Qi2::from_rational(rat(1, 2)), -2, -2, -6)
    }

    #[test]
    fn linear_potential_state_corrections() {
        let ex = Expansion::new(&q(), 2).unwrap();
        let a = OperatorPoly::annihilation();
        let ad = OperatorPoly::creation();
        assert_eq!(ex.omegas()[1], (&a - &ad).scale(&c1()));
        let half = rat(1, 2);
        let om2 = (&a.pow(2) + &ad.pow(2)).scale_rational(&half).scale(&c2());
        assert_eq!(ex.omegas()[2], om2);
    }

    #[test]
    fn linear_potential_ladder() {
        let alphas = alpha_corrections(&q(), 2).unwrap();
        assert_eq!(*alphas.coeff(1), OperatorPoly::scalar(c1()));
        assert_eq!(*alphas.coeff(2), OperatorPoly::annihilation().scale(&-&c2()));
        assert_eq!(*alphas.coeff(1), alpha1_closed_form(&q()));
        assert_eq!(*alphas.coeff(2), alpha2_closed_form(&q()));
    }

    #[test]
    fn linear_potential_energies() {
        let e = energy_corrections(&q(), 2).unwrap();
        assert!(e.eps[1].is_zero());
        // −1/(2mω²)
        let expect = DiagonalPoly::constant(sc(Qi2::from_rational(rat(-1, 2)), 0, -2, -4));
        assert_eq!(e.eps[2], expect);
        assert_eq!(e.eps[0].coeff(1), Scalar::hbar_omega().into());
    }

    #[test]
    fn inversion_of_shifted_operator() {
        // ã = a + λc  ⇒  a = ã − λc
        let c = ScalarSum::from_int(3);
        let s = OperatorSeries::from_coeffs(vec![OperatorPoly::annihilation(), OperatorPoly::scalar(c.clone())]);
        let inv = invert_series(&s).unwrap();
        assert_eq!(*inv.coeff(1), OperatorPoly::scalar(-&c));
        assert!(invert_series(&OperatorSeries::constant(OperatorPoly::creation(), 1)).is_err());
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let bad = &q() + &OperatorPoly::momentum().scale(&sc(Qi2::i(), 0, 0, 0));
        assert!(matches!(Expansion::new(&bad, 1), Err(PtError::NotHermitian(_))));
    }

    #[test]
    fn zero_perturbation_is_trivial() {
        let alphas = alpha_corrections(&OperatorPoly::zero(), 3).unwrap();
        assert!(alphas.corrections_vanish());
        assert_eq!(*alphas.coeff(0), OperatorPoly::annihilation());
    }

    #[test]
    fn coherent_amplitudes() {
        let c = coherent_state_coeffs(4, Complex64::new(0.0, 0.0));
        assert_eq!(c[0], Complex64::new(1.0, 0.0));
        assert!(c[1..].iter().all(|z| z.norm() == 0.0));
        let alpha = Complex64::new(1.5, -0.5);
        let c = coherent_state_coeffs(64, alpha);
        let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let mean: f64 = c.iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((mean - alpha.norm_sqr()).abs() < 1e-10);
        let short: f64 = coherent_state_coeffs(2, alpha).iter().map(|z| z.norm_sqr()).sum();
        assert!(short < 1.0);
    }

    #[test]
    fn squeeze_params_are_normalized() {
        let p = SqueezeParams::new(0.3, -1.0).unwrap();
        assert!(p.theta() >= 0.0 && p.theta() < std::f64::consts::TAU);
        assert!(SqueezeParams::new(-0.1, 0.0).is_err());
    }
}
