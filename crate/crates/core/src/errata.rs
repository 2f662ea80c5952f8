//! Term-by-term comparison of the published worked examples with the engine,
//! and oracle adjudication of every disagreement.
//!
//! Exact comparison happens per canonical `a†^j a^k` term. Wherever the two
//! differ, the Fock-space oracle decides: operator displays are compared
//! band by band (fixed level shift `j − k`) with matrices built straight
//! from the definitions, state amplitudes with the literal resolvent sums,
//! and λ-series through the scaling of their residuals.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::boson::{Monomial, OperatorPoly};
use crate::coeff::UnitValues;
use crate::fock::{
    eval_in, ladder_from_states, loglog_slope, rs_sums, series_matrix, to_matrix, vec_dot, FockMatrix,
    PerturbedLevel, RESIDUAL_FLOOR,
};
use crate::pt::{invert_series, rewrite_in_tilde, Expansion, LevelAmplitudes};
use crate::reference::{self, PublishedAmplitudes, PublishedDiagSeries, PublishedOperator, PublishedSeries};
use crate::series::{DiagSeries, OperatorSeries};

/// Generic unit values so that a wrong power of ħ, m or ω cannot hide.
pub const ORACLE_UNITS: UnitValues = UnitValues { hbar: 1.3, mass: 0.8, omega: 1.7 };
/// Relative tolerance for matrix-element agreement with the oracle.
pub const ORACLE_TOL: f64 = 1e-8;
/// Couplings used for residual-scaling checks.
pub const LAMBDAS: [f64; 3] = [0.01, 0.02, 0.05];

const CUTOFF: usize = 128;
const TOP_LEVEL: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Example {
    Position,
    MomentumFourth,
}

impl Example {
    pub fn of_key(key: &str) -> Option<Self> {
        match key.split('.').next()? {
            "q" => Some(Example::Position),
            "p4" => Some(Example::MomentumFourth),
            _ => None,
        }
    }

    pub fn perturbation(&self) -> OperatorPoly {
        match self {
            Example::Position => OperatorPoly::position(),
            Example::MomentumFourth => OperatorPoly::momentum().pow(4),
        }
    }

    /// Recognizes the two worked examples among user perturbations.
    pub fn matching(v: &OperatorPoly) -> Option<Self> {
        [Example::Position, Example::MomentumFourth].into_iter().find(|e| e.perturbation() == *v)
    }

    pub fn prefix(&self) -> &'static str {
        match self {
            Example::Position => "q",
            Example::MomentumFourth => "p4",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermMismatch {
    pub order: usize,
    pub dag: u32,
    pub ann: u32,
    pub engine: String,
    pub published: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub label: String,
    pub engine_residual: f64,
    pub published_residual: f64,
    pub engine_slope: Option<f64>,
    pub published_slope: Option<f64>,
    pub engine_ok: bool,
    pub published_ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Agrees,
    EngineSupported,
    PublishedSupported,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub key: String,
    pub verdict: Verdict,
    pub mismatches: Vec<TermMismatch>,
    pub checks: Vec<OracleCheck>,
}

impl Finding {
    fn decide(key: &str, mismatches: Vec<TermMismatch>, checks: Vec<OracleCheck>) -> Self {
        let verdict = if mismatches.is_empty() {
            Verdict::Agrees
        } else if checks.is_empty() {
            Verdict::Undecided
        } else {
            let engine = checks.iter().all(|c| c.engine_ok);
            let published = checks.iter().all(|c| c.published_ok);
            match (engine, published) {
                (true, false) => Verdict::EngineSupported,
                (false, true) => Verdict::PublishedSupported,
                _ => Verdict::Undecided,
            }
        };
        Finding { key: key.to_string(), verdict, mismatches, checks }
    }
}

pub fn term_mismatches(order: usize, engine: &OperatorPoly, published: &OperatorPoly) -> Vec<TermMismatch> {
    let monos: BTreeSet<Monomial> = engine.terms().chain(published.terms()).map(|(m, _)| m).collect();
    monos
        .into_iter()
        .filter_map(|m| {
            let (e, p) = (engine.coeff(m), published.coeff(m));
            (e != p).then(|| TermMismatch {
                order,
                dag: m.dag,
                ann: m.ann,
                engine: e.to_string(),
                published: p.to_string(),
            })
        })
        .collect()
}

/// Everything the oracle needs for one example, computed once.
pub struct Context {
    pub example: Example,
    pub v: OperatorPoly,
    pub expansion: Expansion,
    units: UnitValues,
    vm: FockMatrix,
    am: FockMatrix,
    levels: Vec<PerturbedLevel>,
    ladder: Vec<FockMatrix>,
}

impl Context {
    pub fn new(example: Example) -> Self {
        let v = example.perturbation();
        let expansion = Expansion::new(&v, 2).expect("worked examples are Hermitian");
        let units = ORACLE_UNITS;
        let vm = to_matrix(&v, CUTOFF, &units).expect("nonzero cutoff");
        let am = to_matrix(&OperatorPoly::annihilation(), CUTOFF, &units).expect("nonzero cutoff");
        let hw = units.hbar * units.omega;
        let g = v.max_shift() as usize;
        let top = CUTOFF - 4 - 2 * g;
        let levels: Vec<PerturbedLevel> =
            (0..=top).map(|n| rs_sums(&vm, 2, n, hw).expect("inside the safety margin")).collect();
        let ladder = ladder_from_states(&levels, 2);
        Context { example, v, expansion, units, vm, am, levels, ladder }
    }

    fn commutator(x: &FockMatrix, y: &FockMatrix) -> FockMatrix {
        &(x * y) - &(y * x)
    }

    /// Engine value and oracle matrix for an operator display.
    fn operator_pair(&self, key: &str) -> Option<(OperatorPoly, FockMatrix)> {
        let v = &self.v;
        let a = OperatorPoly::annihilation();
        let vb = v.bar();
        let vm = &self.vm;
        let vbm = vm.bar();
        let name = key.split_once('.')?.1;
        let name = name.split('.').next()?;
        Some(match name {
            "alpha1" => (self.expansion.alphas().coeff(1).clone(), self.ladder[1].clone()),
            "alpha2" => (self.expansion.alphas().coeff(2).clone(), self.ladder[2].clone()),
            "expansion" => {
                let p = to_matrix(&OperatorPoly::momentum(), CUTOFF, &self.units).ok()?;
                (v.clone(), &(&p * &p) * &(&p * &p))
            }
            "vbar" => (vb.clone(), vbm),
            "comm_vbar_a" => (vb.commutator(&a), Self::commutator(&vbm, &self.am)),
            "bar_v_vbar" => (v.normal_order_product(&vb).bar(), (vm * &vbm).bar()),
            "vbarbar" => (vb.bar(), vbm.bar()),
            "vcheck" => (v.check(), vm.check()),
            "vbarbar_vcheck" => (vb.bar().normal_order_product(&v.check()), &vbm.bar() * &vm.check()),
            "comm_bar_v_vbar_a" => {
                (v.normal_order_product(&vb).bar().commutator(&a), Self::commutator(&(vm * &vbm).bar(), &self.am))
            }
            "comm_vbarbar_vcheck_a" => (
                vb.bar().normal_order_product(&v.check()).commutator(&a),
                Self::commutator(&(&vbm.bar() * &vm.check()), &self.am),
            ),
            "comm_vbar_a_vbar" => (vb.commutator(&a).normal_order_product(&vb), &Self::commutator(&vbm, &self.am) * &vbm),
            _ => return None,
        })
    }

    /// Largest relative deviation on band `e` over interior columns.
    fn band_deviation(&self, x: &FockMatrix, oracle: &FockMatrix, e: i64) -> f64 {
        (0..=TOP_LEVEL as i64)
            .filter(|n| n + e >= 0)
            .map(|n| {
                let (r, c) = ((n + e) as usize, n as usize);
                let o = oracle[(r, c)];
                (x[(r, c)] - o).norm() / o.norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    pub fn operator_finding(&self, display: &PublishedOperator) -> Option<Finding> {
        let (engine, oracle) = self.operator_pair(display.key)?;
        let published = display.operator();
        let mismatches = term_mismatches(0, &engine, &published);
        let bands: BTreeSet<i64> = mismatches.iter().map(|t| t.dag as i64 - t.ann as i64).collect();
        let em = to_matrix(&engine, CUTOFF, &self.units).ok()?;
        let pm = to_matrix(&published, CUTOFF, &self.units).ok()?;
        let checks = bands
            .into_iter()
            .map(|e| {
                let (de, dp) = (self.band_deviation(&em, &oracle, e), self.band_deviation(&pm, &oracle, e));
                OracleCheck {
                    label: format!("shift {e:+}"),
                    engine_residual: de,
                    published_residual: dp,
                    engine_slope: None,
                    published_slope: None,
                    engine_ok: de <= ORACLE_TOL,
                    published_ok: dp <= ORACLE_TOL,
                }
            })
            .collect();
        Some(Finding::decide(display.key, mismatches, checks))
    }

    fn state_order(key: &str) -> Option<usize> {
        match key.rsplit('.').next()? {
            "eta1" => Some(1),
            "eta2" => Some(2),
            _ => None,
        }
    }

    pub fn amplitude_finding(&self, display: &PublishedAmplitudes) -> Option<Finding> {
        let m = Self::state_order(display.key)?;
        let engine = LevelAmplitudes::of(&self.expansion.omegas()[m]);
        let shifts: BTreeSet<i64> =
            engine.by_shift.keys().copied().chain(display.shifts.iter().map(|(e, _, _)| *e)).collect();
        let mut mismatches = Vec::new();
        let mut checks = Vec::new();
        for e in shifts {
            let exact_differs = match display.canonical_poly(e) {
                Some(p) => p != engine.shift(e),
                None => (0..=2 * TOP_LEVEL).any(|n| {
                    let (x, y) = (engine.amplitude(n, e, &self.units), display.amplitude(n, e, &self.units));
                    (x - y).norm() > 1e-12 * x.norm().max(1.0)
                }),
            };
            if !exact_differs {
                continue;
            }
            let printed = display.canonical_poly(e).map(|p| p.to_string()).unwrap_or_else(|| {
                let (_, base, p) = display.shifts.iter().find(|(s, _, _)| *s == e).expect("shift listed");
                format!("{} with base {base:?}", p.scale(&display.prefactor.clone().into()))
            });
            mismatches.push(TermMismatch {
                order: m,
                dag: e.max(0) as u32,
                ann: (-e).max(0) as u32,
                engine: engine.shift(e).to_string(),
                published: printed,
            });
            let dev = |f: &dyn Fn(usize) -> Complex64| {
                (0..=TOP_LEVEL)
                    .filter(|&n| n as i64 + e >= 0)
                    .map(|n| {
                        let o = self.levels[n].state_series[m][(n as i64 + e) as usize];
                        (f(n) - o).norm() / o.norm().max(1.0)
                    })
                    .fold(0.0, f64::max)
            };
            let de = dev(&|n| engine.amplitude(n, e, &self.units));
            let dp = dev(&|n| display.amplitude(n, e, &self.units));
            checks.push(OracleCheck {
                label: format!("shift {e:+}"),
                engine_residual: de,
                published_residual: dp,
                engine_slope: None,
                published_slope: None,
                engine_ok: de <= ORACLE_TOL,
                published_ok: dp <= ORACLE_TOL,
            });
        }
        Some(Finding::decide(display.key, mismatches, checks))
    }

    fn tilde_engine(&self, key: &str, order: usize) -> Option<(OperatorSeries, OperatorPoly)> {
        let alphas = self.expansion.alphas().truncate(order);
        let kind = key.split('.').nth(1)?;
        Some(match kind {
            "invert" => (invert_series(&alphas).ok()?, OperatorPoly::annihilation()),
            "position" => (rewrite_in_tilde(&OperatorPoly::position(), &alphas, order).ok()?, OperatorPoly::position()),
            "momentum" => (rewrite_in_tilde(&OperatorPoly::momentum(), &alphas, order).ok()?, OperatorPoly::momentum()),
            _ => return None,
        })
    }

    /// Interior-block residual of `target − Σ λ^m s_m(Ã, Ã†)` at each λ.
    fn tilde_residuals(&self, s: &OperatorSeries, target: &FockMatrix, order: usize) -> Vec<f64> {
        let alphas = self.expansion.alphas().truncate(order);
        LAMBDAS
            .iter()
            .map(|&lam| {
                let at = series_matrix(&alphas, lam, CUTOFF, &self.units).expect("nonzero cutoff");
                let atd = at.adjoint();
                let mut acc = FockMatrix::zeros(CUTOFF);
                for (m, c) in s.coeffs().iter().enumerate() {
                    acc = &acc + &eval_in(c, &at, &atd, &self.units).scale(Complex64::new(lam.powi(m as i32), 0.0));
                }
                (&acc - target).block(TOP_LEVEL + 1).norm()
            })
            .collect()
    }

    pub fn series_finding(&self, display: &PublishedSeries) -> Option<Finding> {
        let order: usize = display.key.rsplit('.').next()?.parse().ok()?;
        let (engine, observable) = self.tilde_engine(display.key, order)?;
        let published = display.series();
        let mut mismatches = Vec::new();
        for m in 0..=order {
            let e = engine.coeffs().get(m).cloned().unwrap_or_default();
            let p = published.coeffs().get(m).cloned().unwrap_or_default();
            mismatches.extend(term_mismatches(m, &e, &p));
        }
        let mut checks = Vec::new();
        if !mismatches.is_empty() {
            let target = to_matrix(&observable, CUTOFF, &self.units).ok()?;
            let re = self.tilde_residuals(&engine, &target, order);
            let rp = self.tilde_residuals(&published, &target, order);
            checks.push(scaling_check("residual scaling", &re, &rp, order));
        }
        Some(Finding::decide(display.key, mismatches, checks))
    }

    fn diag_engine(&self, key: &str, order: usize) -> Option<DiagSeries> {
        let kind = key.split('.').nth(1)?;
        let ex = if order == 2 { self.expansion.clone() } else { Expansion::new(&self.v, order).ok()? };
        Some(match kind {
            "norm" => ex.sandwich(&OperatorPoly::identity()),
            "mean_q" => ex.expectation(&OperatorPoly::position()).normalized,
            "mean_p" => ex.expectation(&OperatorPoly::momentum()).normalized,
            "epsilon1" | "epsilon2" => DiagSeries::from_coeffs(ex.energies().eps.clone()),
            _ => return None,
        })
    }

    /// Numeric value of a diagonal quantity at level `n` and coupling λ, and
    /// the order it is built to.
    fn diag_numeric(&self, kind: &str, n: usize, lam: f64, order: usize) -> f64 {
        let lvl = PerturbedLevel {
            n,
            energy_series: self.levels[n].energy_series[..=order].to_vec(),
            state_series: self.levels[n].state_series[..=order].to_vec(),
        };
        let psi = lvl.state(lam);
        let norm = vec_dot(&psi, &psi).re;
        let mean = |o: &OperatorPoly| {
            let om = to_matrix(o, CUTOFF, &self.units).expect("nonzero cutoff");
            vec_dot(&psi, &om.apply(&psi)).re / norm
        };
        match kind {
            "norm" => norm,
            "mean_q" => mean(&OperatorPoly::position()),
            "mean_p" => mean(&OperatorPoly::momentum()),
            _ => lvl.energy(lam),
        }
    }

    pub fn diag_finding(&self, display: &PublishedDiagSeries) -> Option<Finding> {
        let kind = display.key.split('.').nth(1)?;
        let order = display.coeffs.len() - 1;
        let engine = self.diag_engine(display.key, order)?;
        let published = display.series();
        let mut mismatches = Vec::new();
        for m in 0..=order {
            let (e, p) = (engine.coeff(m), published.coeff(m));
            // Published energy displays list only the named order.
            if kind.starts_with("epsilon") && p.is_zero() {
                continue;
            }
            if e != p {
                mismatches.push(TermMismatch { order: m, dag: 0, ann: 0, engine: e.to_string(), published: p.to_string() });
            }
        }
        let mut checks = Vec::new();
        if !mismatches.is_empty() {
            let partial = |s: &DiagSeries, n: usize, lam: f64| -> f64 {
                s.coeffs().iter().enumerate().map(|(m, p)| lam.powi(m as i32) * p.eval_f64(n as f64, &self.units).re).sum()
            };
            for n in [0usize, 1, 3] {
                let res = |s: &DiagSeries| -> Vec<f64> {
                    LAMBDAS.iter().map(|&lam| (partial(s, n, lam) - self.diag_numeric(kind, n, lam, order)).abs()).collect()
                };
                let mut c = scaling_check(&format!("level {n}"), &res(&engine), &res(&published), order);
                if kind.starts_with("epsilon") {
                    // Energies are compared coefficient by coefficient.
                    let dev = |s: &DiagSeries| {
                        (1..=order)
                            .filter(|&m| !published.coeff(m).is_zero())
                            .map(|m| {
                                let o = self.levels[n].energy_series[m];
                                (s.coeff(m).eval_f64(n as f64, &self.units).re - o).abs() / o.abs().max(1.0)
                            })
                            .fold(0.0, f64::max)
                    };
                    let (de, dp) = (dev(&engine), dev(&published));
                    c = OracleCheck {
                        label: format!("level {n}"),
                        engine_residual: de,
                        published_residual: dp,
                        engine_slope: None,
                        published_slope: None,
                        engine_ok: de <= ORACLE_TOL,
                        published_ok: dp <= ORACLE_TOL,
                    };
                }
                checks.push(c);
            }
        }
        Some(Finding::decide(display.key, mismatches, checks))
    }
}

/// Residuals of an order-M truncation must vanish like λ^{M+1}.
fn scaling_check(label: &str, engine: &[f64], published: &[f64], order: usize) -> OracleCheck {
    let slope = |r: &[f64]| {
        if r.iter().all(|&x| x <= RESIDUAL_FLOOR) {
            f64::INFINITY
        } else {
            loglog_slope(&LAMBDAS, &r.iter().map(|x| x.max(f64::MIN_POSITIVE)).collect::<Vec<_>>())
        }
    };
    let (se, sp) = (slope(engine), slope(published));
    let need = order as f64 + 0.9;
    OracleCheck {
        label: label.to_string(),
        engine_residual: engine.iter().copied().fold(0.0, f64::max),
        published_residual: published.iter().copied().fold(0.0, f64::max),
        engine_slope: Some(se),
        published_slope: Some(sp),
        engine_ok: se >= need,
        published_ok: sp >= need,
    }
}

/// Runs every published display of one example through the comparison.
pub fn adjudicate(example: Example) -> Vec<Finding> {
    let ctx = Context::new(example);
    let prefix = format!("{}.", example.prefix());
    let mut out = Vec::new();
    for d in reference::operators().iter().filter(|d| d.key.starts_with(&prefix)) {
        out.extend(ctx.operator_finding(d));
    }
    for d in reference::amplitudes().iter().filter(|d| d.key.starts_with(&prefix)) {
        out.extend(ctx.amplitude_finding(d));
    }
    for d in reference::tilde_series().iter().filter(|d| d.key.starts_with(&prefix)) {
        out.extend(ctx.series_finding(d));
    }
    for d in reference::diag_series().iter().filter(|d| d.key.starts_with(&prefix)) {
        out.extend(ctx.diag_finding(d));
    }
    out
}

/// One of several published values for a single number, and whether the
/// oracle and the engine support it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub label: String,
    pub value: f64,
    pub oracle_supports: bool,
    pub engine_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contest {
    pub name: String,
    pub estimates: Vec<f64>,
    pub candidates: Vec<Candidate>,
}

impl Contest {
    /// The single candidate the oracle supports, if exactly one.
    pub fn winner(&self) -> Option<&Candidate> {
        let mut it = self.candidates.iter().filter(|c| c.oracle_supports);
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    /// Exactly one oracle winner, and the engine agrees with it and only it.
    pub fn resolved(&self) -> bool {
        self.winner().is_some_and(|w| w.engine_agrees) && self.candidates.iter().filter(|c| c.engine_agrees).count() == 1
    }
}

/// Second-order mean position for `V = q`: `−λ/(mω²)` against `−λ/(2mω²)`.
///
/// The oracle estimates `⟨q⟩/λ` from the normalized second-order states of
/// the literal sums and from exact eigenvectors of the truncated `H`.
pub fn mean_position_contest() -> Contest {
    let units = ORACLE_UNITS;
    let unit = 1.0 / (units.mass * units.omega * units.omega);
    let ctx = Context::new(Example::Position);
    let qm = to_matrix(&OperatorPoly::position(), CUTOFF, &units).expect("nonzero cutoff");
    let mut estimates = Vec::new();
    for &lam in &LAMBDAS {
        for n in 0..=4 {
            let psi = ctx.levels[n].state(lam);
            let mean = vec_dot(&psi, &qm.apply(&psi)).re / vec_dot(&psi, &psi).re;
            estimates.push(mean / lam / unit);
        }
    }
    let h = &crate::fock::h0_matrix(CUTOFF, &units) + &ctx.vm.scale(Complex64::new(LAMBDAS[0], 0.0));
    if let Ok((_, vecs)) = crate::fock::eig_hermitian(&h.block(64)) {
        let qb = qm.block(64);
        let v = vecs.column(0);
        estimates.push(vec_dot(&v, &qb.apply(&v)).re / LAMBDAS[0] / unit);
    }
    let engine = ctx.expansion.expectation(&OperatorPoly::position()).normalized;
    let engine_first = engine.coeff(1).eval_f64(0.0, &units).re / unit;
    let engine_second_vanishes = engine.coeff(2).is_zero();
    let candidates = [("-λ/(mω²)", -1.0), ("-λ/(2mω²)", -0.5)]
        .into_iter()
        .map(|(label, value)| Candidate {
            label: label.to_string(),
            value,
            oracle_supports: estimates.iter().all(|e| (e - value).abs() <= 1e-3),
            engine_agrees: engine_second_vanishes && (engine_first - value).abs() <= 1e-12,
        })
        .collect();
    Contest { name: "second-order mean position, V = q".into(), estimates, candidates }
}

/// Coefficient of `a†(2N+1)a†` in `V̄` for `V = p⁴`: 1 against 2, in units
/// of `(ħmω/2)²`. The oracle is the literal first-order state sum, whose
/// `|n+2⟩` amplitude times `ħω` is the `V̄` matrix element.
pub fn vbar_coefficient_contest() -> Contest {
    let units = ORACLE_UNITS;
    let ctx = Context::new(Example::MomentumFourth);
    let scale = (units.hbar * units.mass * units.omega / 2.0).powi(2);
    let hw = units.hbar * units.omega;
    let estimates: Vec<f64> = (0..=TOP_LEVEL)
        .map(|n| {
            let amp = ctx.levels[n].state_series[1][n + 2].re * hw;
            let nf = n as f64;
            amp / (scale * ((nf + 1.0) * (nf + 2.0)).sqrt() * (2.0 * nf + 3.0))
        })
        .collect();
    let engine = ctx.v.bar();
    let candidates = [("1", 1.0, "p4.vbar.first"), ("2", 2.0, "p4.vbar.second")]
        .into_iter()
        .map(|(label, value, key)| Candidate {
            label: label.to_string(),
            value,
            oracle_supports: estimates.iter().all(|e| (e - value).abs() <= ORACLE_TOL),
            engine_agrees: reference::operator(key).is_some_and(|d| d.operator() == engine),
        })
        .collect();
    Contest { name: "coefficient of a†(2N+1)a† in V̄, V = p⁴".into(), estimates, candidates }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_listing() {
        let x = OperatorPoly::annihilation();
        let y = &x + &OperatorPoly::creation();
        let m = term_mismatches(0, &x, &y);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].dag, m[0].ann), (1, 0));
        assert!(term_mismatches(0, &x, &x).is_empty());
    }

    #[test]
    fn examples_are_recognized() {
        assert_eq!(Example::matching(&OperatorPoly::position()), Some(Example::Position));
        assert_eq!(Example::matching(&OperatorPoly::momentum().pow(4)), Some(Example::MomentumFourth));
        assert_eq!(Example::matching(&OperatorPoly::momentum()), None);
    }
}
