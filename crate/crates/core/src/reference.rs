//! Published closed forms for the two worked examples, `V = q` and `V = p⁴`.
//!
//! Each display is transcribed literally (operator ordering, coefficients
//! and factorial bases exactly as printed) so that it can be compared term
//! by term with the engine and, where they differ, adjudicated by the
//! numerical oracle. Nothing in the engine reads these.

use crate::boson::OperatorPoly;
use crate::coeff::{rat, Qi2, Scalar, ScalarSum, UnitMonomial, UnitValues};
use crate::diag::DiagonalPoly;
use crate::parser::parse_operator;
use crate::series::{DiagSeries, OperatorSeries};

use num_complex::Complex64;

fn q_rat(n: i64, d: i64) -> Qi2 {
    Qi2::from_rational(rat(n, d))
}

fn q_s2(n: i64, d: i64) -> Qi2 {
    Qi2::sqrt2().scale(&rat(n, d))
}

fn sc(value: Qi2, h2: i32, m2: i32, w2: i32) -> Scalar {
    Scalar::new(value, UnitMonomial::new(h2, m2, w2))
}

/// `√(ħ/2mω)`
pub fn position_scale() -> Scalar {
    sc(q_s2(1, 2), 1, -1, -1)
}

/// `1/√(2ħmω³)`
fn c1() -> Scalar {
    sc(q_s2(1, 2), -1, -1, -3)
}

/// `1/(2ħmω³)`
fn c2() -> Scalar {
    sc(q_rat(1, 2), -2, -2, -6)
}

/// `(ħmω/2)²`
fn p4_unit() -> Scalar {
    sc(q_rat(1, 4), 4, 4, 4)
}

/// `ħm²ω/4`
fn p4_first() -> Scalar {
    sc(q_rat(1, 4), 2, 4, 2)
}

/// `ħ²m⁴ω²/16`
fn p4_second() -> Scalar {
    sc(q_rat(1, 16), 4, 8, 4)
}

fn times(s: &Scalar, r: Qi2) -> Scalar {
    Scalar::new(&s.value * &r, s.units)
}

/// A printed operator: `prefactor · body`, body in the expression grammar.
#[derive(Clone, Debug)]
pub struct PublishedOperator {
    pub key: &'static str,
    pub prefactor: Scalar,
    pub body: &'static str,
}

impl PublishedOperator {
    pub fn operator(&self) -> OperatorPoly {
        let body = parse_operator(self.body).unwrap_or_else(|e| panic!("{}: {e}", self.key));
        body.scale_scalar(&self.prefactor)
    }
}

/// A printed λ-series; `terms[m]` lists `(prefactor, body)` pieces of the
/// λ^m coefficient. In rewrites the symbols `a`, `ad`, `N` stand for the
/// tilde operators.
#[derive(Clone, Debug)]
pub struct PublishedSeries {
    pub key: &'static str,
    pub terms: Vec<Vec<(Scalar, &'static str)>>,
}

impl PublishedSeries {
    pub fn series(&self) -> OperatorSeries {
        OperatorSeries::from_coeffs(
            self.terms
                .iter()
                .map(|pieces| {
                    let mut acc = OperatorPoly::zero();
                    for (p, body) in pieces {
                        let x = parse_operator(body).unwrap_or_else(|e| panic!("{}: {e}", self.key));
                        acc += &x.scale_scalar(p);
                    }
                    acc
                })
                .collect(),
        )
    }
}

/// Square-root base of a printed amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorialBase {
    /// `n(n−1)…(n−k+1)`
    Falling { k: u32 },
    /// `(n+from)(n+from+1)…(n+from+k−1)`
    Rising { from: i64, k: u32 },
}

impl FactorialBase {
    pub fn eval(&self, n: i64) -> f64 {
        match *self {
            FactorialBase::Falling { k } => (0..k as i64).map(|i| (n - i) as f64).product(),
            FactorialBase::Rising { from, k } => (0..k as i64).map(|i| (n + from + i) as f64).product(),
        }
    }

    /// The base the engine uses for a shift `e`.
    pub fn canonical(e: i64) -> Self {
        if e >= 0 {
            FactorialBase::Rising { from: 1, k: e as u32 }
        } else {
            FactorialBase::Falling { k: (-e) as u32 }
        }
    }
}

/// `|η⟩ = prefactor · Σ_e √(base_e(n)) P_e(n) |n+e⟩` as printed.
#[derive(Clone, Debug)]
pub struct PublishedAmplitudes {
    pub key: &'static str,
    pub prefactor: Scalar,
    pub shifts: Vec<(i64, FactorialBase, DiagonalPoly)>,
}

impl PublishedAmplitudes {
    pub fn amplitude(&self, n: usize, e: i64, units: &UnitValues) -> Complex64 {
        let n = n as i64;
        if n + e < 0 {
            return Complex64::new(0.0, 0.0);
        }
        let pre = self.prefactor.to_complex(units);
        self.shifts
            .iter()
            .filter(|(s, _, _)| *s == e)
            .map(|(_, base, p)| pre * base.eval(n).max(0.0).sqrt() * p.eval_f64(n as f64, units))
            .sum()
    }

    /// Polynomial part after rescaling to the engine's base, when the printed
    /// base is the canonical one.
    pub fn canonical_poly(&self, e: i64) -> Option<DiagonalPoly> {
        let (_, base, p) = self.shifts.iter().find(|(s, _, _)| *s == e)?;
        (*base == FactorialBase::canonical(e)).then(|| p.scale(&self.prefactor.clone().into()))
    }
}

/// A printed λ-series of functions of `n` (norms, expectation values).
#[derive(Clone, Debug)]
pub struct PublishedDiagSeries {
    pub key: &'static str,
    pub coeffs: Vec<DiagonalPoly>,
}

impl PublishedDiagSeries {
    pub fn series(&self) -> DiagSeries {
        DiagSeries::from_coeffs(self.coeffs.clone())
    }
}

/// `prefactor · Σ_p coeffs[p] nᵖ` from rational pairs.
fn dpoly(prefactor: &Scalar, coeffs: &[(i64, i64)]) -> DiagonalPoly {
    DiagonalPoly::new(
        coeffs.iter().map(|&(n, d)| ScalarSum::from(times(prefactor, q_rat(n, d)))).collect(),
    )
}

fn op(key: &'static str, prefactor: Scalar, body: &'static str) -> PublishedOperator {
    PublishedOperator { key, prefactor, body }
}

pub fn operators() -> Vec<PublishedOperator> {
    let hbar_2mw = sc(q_rat(1, 2), 2, -2, -2);
    let p4 = p4_unit();
    let p4sq = sc(q_rat(1, 16), 8, 8, 8);
    vec![
        op("q.alpha1", c1(), "1"),
        op("q.alpha2", c2(), "-a"),
        op("q.vbar", position_scale(), "a - ad"),
        op("q.comm_vbar_a", position_scale(), "1"),
        op("q.bar_v_vbar", hbar_2mw.clone(), "1/2*a^2 + 1/2*ad^2"),
        op("q.vbarbar", position_scale(), "a + ad"),
        op("q.vcheck", Scalar::one(), "0"),
        op("q.comm_bar_v_vbar_a", hbar_2mw.clone(), "-ad"),
        op("q.comm_vbarbar_vcheck_a", Scalar::one(), "0"),
        op("q.comm_vbar_a_vbar", hbar_2mw, "a - ad"),
        op("p4.expansion", p4.clone(), "a^4 - 2*a*(2*N + 1)*a + 3*(2*N^2 + 2*N + 1) - 2*ad*(2*N + 1)*ad + ad^4"),
        op("p4.vbar.first", p4.clone(), "1/4*a^4 - a*(2*N + 1)*a + ad*(2*N + 1)*ad - 1/4*ad^4"),
        op("p4.vbar.second", p4.clone(), "1/4*a^4 - a*(2*N + 1)*a + 2*ad*(2*N + 1)*ad - 1/4*ad^4"),
        op("p4.comm_vbar_a", p4.clone(), "2*a^3 - 6*N*ad + ad^3"),
        op("p4.alpha1", p4_first(), "2*a^3 - 6*N*ad + ad^3"),
        op(
            "p4.bar_v_vbar",
            times(&p4sq, q_rat(1, 2)),
            "1/16*a^8 - a^3*(N + 7/6)*a^3 + 1/4*a^2*(19*N^2 + 7*N - 9/2)*a^2 \
             - a*(11*N^3 - 51/2*N^2 - 61/2*N - 30)*a - ad*(11*N^3 + 117/2*N^2 + 107/2*N + 36)*ad \
             + 1/4*ad^2*(19*N^2 + 31*N + 15/2)*ad^2 - ad^3*(N - 1/6)*ad^3 + 1/16*ad^8",
        ),
        op(
            "p4.vbarbar",
            times(&p4, q_rat(1, 2)),
            "1/8*a^4 - a*(2*N + 1)*a - ad*(2*N + 1)*ad + 1/8*ad^4",
        ),
        op("p4.vcheck", times(&p4, q_rat(3, 1)), "2*N^2 + 2*N + 1"),
        op(
            "p4.vbarbar_vcheck",
            times(&p4sq, q_rat(3, 1)),
            "1/8*a^2*(N^2 + 5*N + 13/2)*a^2 - a*(2*N^3 + 7*N^2 + 8*N + 5/2)*a \
             - ad*(2*N^3 - N^2 + 1/2)*ad + 1/8*ad^2*(N^2 - 3*N + 5/2)",
        ),
        op(
            "p4.comm_bar_v_vbar_a",
            p4sq.clone(),
            "1/2*a^7 - 1/2*a^3*(19/2*N - 3)*a^2 + 3*a^2*(11/2*N^2 - 14*N + 1)*a \
             + (55/2*N^3 + 84*N^2 + 29/2*N + 33)*ad - 3/2*ad*(19/2*N^2 + 5*N + 1/2)*ad^2 \
             + ad^2*(7/2*N - 2)*ad^3 - 1/4*ad^7",
        ),
        op(
            "p4.comm_vbarbar_vcheck_a",
            times(&p4sq, q_rat(3, 1)),
            "-1/2*a^3*(1/2*N + 1)*a^2 + a^2*(6*N^2 + 8*N + 3)*a + (10*N^3 - 16*N^2 + 11*N - 2)*ad \
             - 1/2*ad*(3/2*N^2 - 5*N + 9/2)*ad^2",
        ),
        op(
            "p4.comm_vbar_a_vbar",
            p4sq,
            "1/2*a^7 - 2*a^3*(2*N + 3)*a^2 - 3*a^2*(1/2*N^2 - 2*N + 2)*a \
             + a*(65/4*N^3 - 27/2*N^2 + 211/4*N + 9/2) - 1/4*ad^7 + 7/2*ad^2*N*ad^3 \
             - 6*ad*(2*N^2 + N - 1)*ad^2 - (5/2*N^3 - 6*N^2 + 37/2*N - 3)*ad",
        ),
        op(
            "p4.alpha2",
            p4_second(),
            "9*a^5 - 72*a^2*N*a - 1/2*a*(65/2*N^3 - 27*N^2 + 211/2*N + 9) + 18*(7*N^2 + 2)*ad \
             - 9*ad*N*ad^2 - 2*ad^5",
        ),
    ]
}

pub fn operator(key: &str) -> Option<PublishedOperator> {
    operators().into_iter().find(|o| o.key == key)
}

fn falling(k: u32) -> FactorialBase {
    FactorialBase::Falling { k }
}

fn rising(from: i64, k: u32) -> FactorialBase {
    FactorialBase::Rising { from, k }
}

pub fn amplitudes() -> Vec<PublishedAmplitudes> {
    let one = Scalar::one();
    vec![
        PublishedAmplitudes {
            key: "q.eta1",
            prefactor: c1(),
            shifts: vec![(-1, falling(1), dpoly(&one, &[(1, 1)])), (1, rising(1, 1), dpoly(&one, &[(-1, 1)]))],
        },
        PublishedAmplitudes {
            key: "q.eta2",
            prefactor: c2(),
            shifts: vec![(-2, falling(2), dpoly(&one, &[(1, 2)])), (2, rising(1, 2), dpoly(&one, &[(1, 2)]))],
        },
        PublishedAmplitudes {
            key: "p4.eta1",
            prefactor: p4_first(),
            shifts: vec![
                (-4, falling(4), dpoly(&one, &[(1, 4)])),
                (-2, falling(2), dpoly(&one, &[(1, 1), (-2, 1)])),
                (2, rising(1, 2), dpoly(&one, &[(3, 1), (2, 1)])),
                (4, rising(1, 4), dpoly(&one, &[(-1, 4)])),
            ],
        },
        PublishedAmplitudes {
            key: "p4.eta2",
            prefactor: p4_second(),
            shifts: vec![
                (-8, falling(8), dpoly(&one, &[(1, 32)])),
                (-6, falling(6), dpoly(&one, &[(-11, 12), (1, 2)])),
                (-4, falling(4), dpoly(&one, &[(7, 1), (-9, 1), (2, 1)])),
                (-2, falling(2), dpoly(&one, &[(-66, 4), (107, 4), (-129, 4), (-2, 4)])),
                (2, rising(2, 2), dpoly(&one, &[(300, 4), (359, 4), (123, 4), (-2, 4)])),
                (4, rising(1, 4), dpoly(&one, &[(18, 1), (13, 1), (2, 1)])),
                (6, rising(1, 6), dpoly(&one, &[(17, 12), (1, 2)])),
                (8, rising(0, 8), dpoly(&one, &[(1, 32)])),
            ],
        },
    ]
}

pub fn amplitude_display(key: &str) -> Option<PublishedAmplitudes> {
    amplitudes().into_iter().find(|o| o.key == key)
}

fn series(key: &'static str, terms: Vec<Vec<(Scalar, &'static str)>>) -> PublishedSeries {
    PublishedSeries { key, terms }
}

/// Inversions (`a` in terms of `ã`) and rewrites of `q`, `p`.
pub fn tilde_series() -> Vec<PublishedSeries> {
    let one = Scalar::one();
    let s = position_scale();
    // √(ħmω/2) and the i in p = i√(ħmω/2)(a† − a)
    let p_scale = sc(&Qi2::i() * &q_s2(1, 2), 1, 1, 1);
    let neg = |x: Scalar| Scalar::new(-&x.value, x.units);
    vec![
        series("q.invert.1", vec![vec![(one.clone(), "a")], vec![(neg(c1()), "1")]]),
        series("q.invert.2", vec![vec![(one.clone(), "a")], vec![(neg(c1()), "1")], vec![(c2(), "a")]]),
        series(
            "q.position.1",
            vec![vec![(s.clone(), "a + ad")], vec![(sc(q_rat(-1, 1), 0, -2, -4), "1")]],
        ),
        series(
            "q.position.2",
            vec![
                vec![(s.clone(), "a + ad")],
                vec![(sc(q_rat(-1, 2), 0, -2, -4), "1")],
                // λ²/√(2³ħm³ω⁷) · q̃
                vec![(&sc(q_s2(1, 4), -1, -3, -7) * &s, "a + ad")],
            ],
        ),
        series("q.momentum.1", vec![vec![(p_scale.clone(), "ad - a")], vec![]]),
        series(
            "q.momentum.2",
            vec![
                vec![(p_scale.clone(), "ad - a")],
                vec![],
                // i√(ħ/2³mω⁵) · p̃
                vec![(&sc(&Qi2::i() * &q_s2(1, 4), 1, -1, -5) * &p_scale, "ad - a")],
            ],
        ),
        series(
            "p4.invert.1",
            vec![vec![(one.clone(), "a")], vec![(neg(p4_first()), "2*a^3 - 6*N*ad + ad^3")]],
        ),
        series(
            "p4.invert.2",
            vec![
                vec![(one.clone(), "a")],
                vec![(neg(p4_first()), "2*a^3 - 6*N*ad + ad^3")],
                vec![(
                    p4_second(),
                    "2*ad^5 + 21*ad*N*ad^2 - 6*(23*N^2 + 7)*ad + 1/2*a*(65/2*N^3 + 27*N^2 + 211/2*N - 9) \
                     + 60*a^2*N*a + 3*a^5",
                )],
            ],
        ),
        series(
            "p4.position.1",
            vec![
                vec![(s.clone(), "a + ad")],
                vec![(sc(q_s2(-3, 8), 3, 3, 1), "a^3 - 2*(a*N + N*ad) + ad^3")],
            ],
        ),
        series(
            "p4.position.2",
            vec![
                vec![(s.clone(), "a + ad")],
                vec![(sc(q_s2(-3, 8), 3, 3, 1), "a^3 - 2*(a*N + N*ad) + ad^3")],
                vec![(
                    sc(q_s2(1, 32), 5, 7, 3),
                    "5*a^5 + 81*a^2*N*a + a*(65/4*N^3 - 249/2*N^2 + 211/4*N - 93/2) \
                     + (65/4*N^3 - 249/2*N^2 + 211/4*N - 93/2)*ad + 81*ad*N*ad^2 + 5*ad^5",
                )],
            ],
        ),
        series(
            "p4.momentum.1",
            vec![
                vec![(p_scale.clone(), "ad - a")],
                vec![(sc(&Qi2::i() * &q_s2(-1, 8), 3, 5, 3), "ad^3 - 6*(a*N + N*ad) - a^3")],
            ],
        ),
        series(
            "p4.momentum.2",
            vec![
                vec![(p_scale, "ad - a")],
                vec![(sc(&Qi2::i() * &q_s2(1, 8), 3, 5, 3), "6*a*N + a^3 - 6*N*ad - ad^3")],
                vec![(
                    sc(&Qi2::i() * &q_s2(1, 32), 5, 9, 5),
                    "-a^5 - 39*a^2*N*a - a*(65/4*N^3 + 303/2*N^2 + 211/4*N + 75/2) \
                     + (65/4*N^3 + 303/2*N^2 + 211/4*N + 75/2)*ad + 39*ad*N*ad^2 + ad^5",
                )],
            ],
        ),
    ]
}

pub fn tilde_display(key: &str) -> Option<PublishedSeries> {
    tilde_series().into_iter().find(|o| o.key == key)
}

/// Norms and normalized expectation values, as λ-series in `n`.
pub fn diag_series() -> Vec<PublishedDiagSeries> {
    let unit = DiagonalPoly::constant(ScalarSum::one());
    let zero = DiagonalPoly::zero;
    vec![
        PublishedDiagSeries {
            key: "q.norm.2",
            coeffs: vec![unit.clone(), zero(), dpoly(&c2(), &[(1, 1), (2, 1)])],
        },
        PublishedDiagSeries {
            key: "q.mean_q.1",
            coeffs: vec![zero(), dpoly(&sc(q_rat(1, 1), 0, -2, -4), &[(-1, 1)])],
        },
        PublishedDiagSeries {
            key: "q.mean_q.2",
            coeffs: vec![zero(), dpoly(&sc(q_rat(1, 1), 0, -2, -4), &[(-1, 2)]), zero()],
        },
        PublishedDiagSeries { key: "q.mean_p.1", coeffs: vec![zero(), zero()] },
        PublishedDiagSeries { key: "q.mean_p.2", coeffs: vec![zero(), zero(), zero()] },
        PublishedDiagSeries {
            key: "p4.norm.2",
            coeffs: vec![
                unit,
                zero(),
                dpoly(&sc(q_rat(1, 128), 4, 8, 4), &[(156, 1), (422, 1), (487, 1), (130, 1), (65, 1)]),
            ],
        },
        PublishedDiagSeries { key: "p4.mean_q.1", coeffs: vec![zero(), zero()] },
        PublishedDiagSeries { key: "p4.mean_q.2", coeffs: vec![zero(), zero(), zero()] },
        PublishedDiagSeries { key: "p4.mean_p.1", coeffs: vec![zero(), zero()] },
        PublishedDiagSeries { key: "p4.mean_p.2", coeffs: vec![zero(), zero(), zero()] },
        PublishedDiagSeries {
            key: "p4.epsilon1",
            coeffs: vec![zero(), dpoly(&times(&p4_unit(), q_rat(3, 1)), &[(1, 1), (2, 1), (2, 1)])],
        },
        PublishedDiagSeries {
            key: "q.epsilon2",
            coeffs: vec![zero(), zero(), dpoly(&sc(q_rat(-1, 2), 0, -2, -4), &[(1, 1)])],
        },
    ]
}

pub fn diag_display(key: &str) -> Option<PublishedDiagSeries> {
    diag_series().into_iter().find(|o| o.key == key)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_display_parses() {
        for o in operators() {
            o.operator();
        }
        for s in tilde_series() {
            s.series();
        }
        assert_eq!(amplitudes().len(), 4);
        assert!(!diag_series().is_empty());
    }

    #[test]
    fn position_prefactor_squares() {
        let s = position_scale();
        assert_eq!(&s.value * &s.value, q_rat(1, 2));
    }
}
