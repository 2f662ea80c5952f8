//! Run reports: JSON, plain text and a standalone LaTeX document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boson::OperatorPoly;
use crate::coeff::{Qi2, Rational, Scalar, ScalarSum, UnitMonomial, UnitValues};
use crate::diag::DiagonalPoly;
use crate::pt::{number_corrections, Expansion, PtError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationReport {
    /// `⟨n⁽ᴹ⁾|O|n⁽ᴹ⁾⟩` per λ-order.
    pub value: Vec<DiagonalPoly>,
    /// `value / norm`, re-truncated.
    pub normalized: Vec<DiagonalPoly>,
}

/// `E_n(λ)` from the partial sum through order M, ħ = m = ω = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEnergy {
    pub n: usize,
    pub lambda: f64,
    pub energy: f64,
}

/// Everything one run produces, per λ-order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(rename = "V")]
    pub v: OperatorPoly,
    pub order: usize,
    pub alphas: Vec<OperatorPoly>,
    pub alpha_daggers: Vec<OperatorPoly>,
    pub nus: Vec<OperatorPoly>,
    pub epsilons: Vec<DiagonalPoly>,
    pub omegas: Vec<OperatorPoly>,
    pub norms: Vec<DiagonalPoly>,
    /// Keyed by the observable's source text.
    pub expectations: BTreeMap<String, ExpectationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelEnergy>,
}

impl RunReport {
    pub fn build(v: &OperatorPoly, order: usize, observables: &[(String, OperatorPoly)]) -> Result<Self, PtError> {
        let ex = Expansion::new(v, order)?;
        Ok(RunReport::from_expansion(&ex, observables))
    }

    pub fn from_expansion(ex: &Expansion, observables: &[(String, OperatorPoly)]) -> Self {
        let alphas = ex.alphas();
        let expectations = observables
            .iter()
            .map(|(src, o)| {
                let e = ex.expectation(o);
                (
                    src.clone(),
                    ExpectationReport { value: e.value.coeffs().to_vec(), normalized: e.normalized.coeffs().to_vec() },
                )
            })
            .collect();
        RunReport {
            v: ex.perturbation().clone(),
            order: ex.order(),
            alphas: alphas.coeffs().to_vec(),
            alpha_daggers: alphas.dagger().coeffs().to_vec(),
            nus: number_corrections(&alphas).coeffs().to_vec(),
            epsilons: ex.energies().eps,
            omegas: ex.omegas().to_vec(),
            norms: ex.sandwich(&OperatorPoly::identity()).coeffs().to_vec(),
            expectations,
            levels: Vec::new(),
        }
    }

    pub fn with_levels(mut self, ex: &Expansion, levels: &[usize], lambdas: &[f64]) -> Self {
        let eps = ex.energies();
        for &n in levels {
            for &lambda in lambdas {
                let energy = eps.partial_sum(n, lambda, &UnitValues::NATURAL);
                self.levels.push(LevelEnergy { n, lambda, energy });
            }
        }
        self
    }

    /// Sets ħ = m = ω = 1. Exact, since only the unit monomials change.
    pub fn naturalized(&self) -> Self {
        let ops = |v: &[OperatorPoly]| v.iter().map(naturalize_operator).collect::<Vec<_>>();
        let diags = |v: &[DiagonalPoly]| v.iter().map(naturalize_diag).collect::<Vec<_>>();
        RunReport {
            v: naturalize_operator(&self.v),
            order: self.order,
            alphas: ops(&self.alphas),
            alpha_daggers: ops(&self.alpha_daggers),
            nus: ops(&self.nus),
            epsilons: diags(&self.epsilons),
            omegas: ops(&self.omegas),
            norms: diags(&self.norms),
            expectations: self
                .expectations
                .iter()
                .map(|(k, e)| {
                    (k.clone(), ExpectationReport { value: diags(&e.value), normalized: diags(&e.normalized) })
                })
                .collect(),
            levels: self.levels.clone(),
        }
    }
}

pub fn naturalize_sum(s: &ScalarSum) -> ScalarSum {
    let mut out = ScalarSum::zero();
    for x in s.iter() {
        out.add_scalar(&Scalar::new(x.value, UnitMonomial::ONE));
    }
    out
}

pub fn naturalize_operator(x: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for (m, c) in x.terms() {
        out.add_term(m, &naturalize_sum(c));
    }
    out
}

pub fn naturalize_diag(p: &DiagonalPoly) -> DiagonalPoly {
    DiagonalPoly::new(p.coeffs().iter().map(naturalize_sum).collect())
}

/// Which parts of a report to render.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Alphas,
    AlphaDaggers,
    Nus,
    Epsilons,
    Omegas,
    Norms,
    Expectations,
}

fn series_lines<T: std::fmt::Display>(out: &mut String, name: &str, items: &[T]) {
    for (m, x) in items.iter().enumerate() {
        let _ = writeln!(out, "{name}_({m}) = {x}");
    }
}

pub fn to_text(r: &RunReport, sections: &[Section]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "V = {}", r.v);
    let _ = writeln!(out, "order = {}", r.order);
    for s in sections {
        match s {
            Section::Alphas => series_lines(&mut out, "alpha", &r.alphas),
            Section::AlphaDaggers => series_lines(&mut out, "alpha†", &r.alpha_daggers),
            Section::Nus => series_lines(&mut out, "nu", &r.nus),
            Section::Epsilons => {
                series_lines(&mut out, "epsilon", &r.epsilons);
                for l in &r.levels {
                    let _ = writeln!(out, "E_{}(lambda = {}) = {:.12} [hbar = m = omega = 1]", l.n, l.lambda, l.energy);
                }
            }
            Section::Omegas => series_lines(&mut out, "Omega", &r.omegas),
            Section::Norms => series_lines(&mut out, "norm", &r.norms),
            Section::Expectations => {
                for (src, e) in &r.expectations {
                    let _ = writeln!(out, "observable {src}");
                    series_lines(&mut out, "  <O>", &e.value);
                    series_lines(&mut out, "  <O>/norm", &e.normalized);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

fn latex_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_qi2(x: &Qi2) -> String {
    let parts = [(&x.re, ""), (&x.re_s2, "\\sqrt{2}"), (&x.im, "i"), (&x.im_s2, "i\\sqrt{2}")];
    let mut out = String::new();
    for (c, suffix) in parts {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if suffix.is_empty() {
            out.push_str(&latex_rational(&mag));
        } else if mag.is_one() {
            out.push_str(suffix);
        } else {
            let _ = write!(out, "{}\\,{suffix}", latex_rational(&mag));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `(numerator, denominator)` with half powers collected under one root.
fn latex_units(u: &UnitMonomial) -> (String, String) {
    let syms = [("\\hbar", u.hbar2), ("m", u.mass2), ("\\omega", u.omega2)];
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut num_root = Vec::new();
    let mut den_root = Vec::new();
    let pow = |s: &str, e: i32| if e == 1 { s.to_string() } else { format!("{s}^{{{e}}}") };
    for (s, e2) in syms {
        let whole = e2.abs() / 2;
        let half = e2.abs() % 2 == 1;
        let (plain, root) = if e2 > 0 { (&mut num, &mut num_root) } else { (&mut den, &mut den_root) };
        if whole > 0 {
            plain.push(pow(s, whole));
        }
        if half {
            root.push(s.to_string());
        }
    }
    if !num_root.is_empty() {
        num.push(format!("\\sqrt{{{}}}", num_root.join(" ")));
    }
    if !den_root.is_empty() {
        den.push(format!("\\sqrt{{{}}}", den_root.join(" ")));
    }
    (num.join(" "), den.join(" "))
}

pub fn latex_scalar(s: &Scalar) -> String {
    let (num, den) = latex_units(&s.units);
    let value = latex_qi2(&s.value);
    let components = [&s.value.re, &s.value.re_s2, &s.value.im, &s.value.im_s2].iter().filter(|c| !c.is_zero()).count();
    let value = if components > 1 && !(num.is_empty() && den.is_empty()) { format!("\\left({value}\\right)") } else { value };
    let units = match (num.is_empty(), den.is_empty()) {
        (true, true) => return value,
        (false, true) => num,
        (n_empty, false) => format!("\\frac{{{}}}{{{den}}}", if n_empty { "1" } else { &num }),
    };
    match value.as_str() {
        "1" => units,
        "-1" => format!("-{units}"),
        _ => format!("{value}\\,{units}"),
    }
}

pub fn latex_sum(s: &ScalarSum) -> String {
    match s.len() {
        0 => "0".into(),
        1 => latex_scalar(&s.iter().next().expect("one part")),
        _ => format!("\\left({}\\right)", s.iter().map(|x| latex_scalar(&x)).collect::<Vec<_>>().join(" + ")),
    }
}

fn latex_ops(dag: u32, ann: u32) -> String {
    let d = match dag {
        0 => String::new(),
        1 => "a^{\\dagger}".to_string(),
        e => format!("a^{{\\dagger {e}}}"),
    };
    let a = match ann {
        0 => String::new(),
        1 => "a".to_string(),
        e => format!("a^{{{e}}}"),
    };
    [d, a].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(" ")
}

pub fn latex_operator(x: &OperatorPoly) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in x.terms() {
        let op = latex_ops(m.dag, m.ann);
        let coeff = latex_sum(c);
        parts.push(if op.is_empty() {
            coeff
        } else if coeff == "1" {
            op
        } else if coeff == "-1" {
            format!("-{op}")
        } else {
            format!("{coeff}\\, {op}")
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

pub fn latex_diag(p: &DiagonalPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let np = match k {
            0 => String::new(),
            1 => "n".to_string(),
            k => format!("n^{{{k}}}"),
        };
        let coeff = latex_sum(c);
        parts.push(match (np.is_empty(), coeff.as_str()) {
            (true, _) => coeff,
            (false, "1") => np,
            (false, "-1") => format!("-{np}"),
            (false, _) => format!("{coeff}\\, {np}"),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

fn latex_block(out: &mut String, symbol: &str, items: &[String]) {
    out.push_str("\\begin{align*}\n");
    let lines: Vec<String> = items.iter().enumerate().map(|(m, x)| format!("  {symbol}_{{({m})}} &= {x}")).collect();
    out.push_str(&lines.join(" \\\\\n"));
    out.push_str("\n\\end{align*}\n");
}

/// A complete document that compiles with a plain LaTeX installation.
pub fn to_latex(r: &RunReport, sections: &[Section]) -> String {
    let mut out = String::new();
    out.push_str("\\documentclass{article}\n\\usepackage{amsmath}\n\\usepackage[margin=1in]{geometry}\n");
    out.push_str("\\allowdisplaybreaks\n\\begin{document}\n\\sloppy\n");
    let _ = writeln!(out, "\\noindent Perturbation $V = {}$, corrections up to order $M = {}$.\n", latex_operator(&r.v), r.order);
    let ops = |v: &[OperatorPoly]| v.iter().map(latex_operator).collect::<Vec<_>>();
    let diags = |v: &[DiagonalPoly]| v.iter().map(latex_diag).collect::<Vec<_>>();
    for s in sections {
        match s {
            Section::Alphas => latex_block(&mut out, "\\alpha", &ops(&r.alphas)),
            Section::AlphaDaggers => latex_block(&mut out, "\\alpha^{\\dagger}", &ops(&r.alpha_daggers)),
            Section::Nus => latex_block(&mut out, "\\nu", &ops(&r.nus)),
            Section::Epsilons => {
                latex_block(&mut out, "\\varepsilon_{n}", &diags(&r.epsilons));
                if !r.levels.is_empty() {
                    out.push_str("\\begin{align*}\n");
                    let rows: Vec<String> = r
                        .levels
                        .iter()
                        .map(|l| format!("  E_{{{}}}(\\lambda = {}) &= {:.12}", l.n, l.lambda, l.energy))
                        .collect();
                    out.push_str(&rows.join(" \\\\\n"));
                    out.push_str("\n\\end{align*}\n");
                }
            }
            Section::Omegas => latex_block(&mut out, "\\Omega", &ops(&r.omegas)),
            Section::Norms => latex_block(&mut out, "\\langle n|n\\rangle", &diags(&r.norms)),
            Section::Expectations => {
                for (src, e) in &r.expectations {
                    let _ = writeln!(out, "\\noindent Observable \\verb|{src}|:");
                    latex_block(&mut out, "\\langle O\\rangle", &diags(&e.value));
                    latex_block(&mut out, "\\frac{\\langle O\\rangle}{\\langle n|n\\rangle}", &diags(&e.normalized));
                }
            }
        }
    }
    out.push_str("\\end{document}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let obs = vec![("q".to_string(), OperatorPoly::position())];
        let r = RunReport::build(&OperatorPoly::momentum().pow(4), 2, &obs).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["V", "order", "alphas", "epsilons", "omegas", "norms", "expectations"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn latex_prefactors() {
        let c1 = Scalar::new(Qi2::sqrt2().scale(&crate::coeff::rat(1, 2)), UnitMonomial::new(-1, -1, -3));
        assert_eq!(latex_scalar(&c1), "\\frac{1}{2}\\,\\sqrt{2}\\,\\frac{1}{\\omega \\sqrt{\\hbar m \\omega}}");
        assert_eq!(latex_scalar(&Scalar::hbar_omega()), "\\hbar \\omega");
        assert_eq!(latex_operator(&OperatorPoly::monomial(3, 1)), "a^{\\dagger 3} a");
        assert_eq!(latex_operator(&OperatorPoly::monomial(1, 2)), "a^{\\dagger} a^{2}");
    }

    #[test]
    fn natural_units_collapse() {
        let r = RunReport::build(&OperatorPoly::position(), 2, &[]).unwrap().naturalized();
        assert_eq!(r.epsilons[2], DiagonalPoly::constant(ScalarSum::from_rational(crate::coeff::rat(-1, 2))));
    }

    #[test]
    fn document_is_balanced() {
        let r = RunReport::build(&OperatorPoly::position(), 1, &[("q".into(), OperatorPoly::position())]).unwrap();
        let doc = to_latex(&r, &[Section::Alphas, Section::Expectations]);
        assert!(doc.starts_with("\\documentclass"));
        assert_eq!(doc.matches("\\begin{align*}").count(), doc.matches("\\end{align*}").count());
        assert_eq!(doc.matches('{').count(), doc.matches('}').count());
    }
}
