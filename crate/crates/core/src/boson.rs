//! Normal-ordered polynomials in `a` and `a†` with `[a, a†] = 1`.
//!
//! Every operator is kept as a sparse map `(j, k) → c` standing for
//! `c · a†^j a^k`. Because this basis is unique, equality of operators is
//! plain map equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{Rational, Scalar, ScalarSum};
use crate::diag::DiagonalPoly;

/// Exponents of one canonical term `a†^dag a^ann`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub dag: u32,
    pub ann: u32,
}

impl Monomial {
    pub const IDENTITY: Monomial = Monomial { dag: 0, ann: 0 };

    pub const fn new(dag: u32, ann: u32) -> Self {
        Monomial { dag, ann }
    }

    pub fn excess(&self) -> TermExcess {
        TermExcess(self.dag as i64 - self.ann as i64)
    }

    pub fn degree(&self) -> u32 {
        self.dag + self.ann
    }
}

/// Net level shift `j − k` produced by a term: `a†^j a^k |n⟩ ∝ |n + j − k⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermExcess(pub i64);

impl TermExcess {
    pub fn is_balanced(&self) -> bool {
        self.0 == 0
    }
}

/// `s! · C(k, s) · C(j, s)` for s = 0..=min(k, j): the weights of
/// `a^k a†^j = Σ_s w_s a†^(j−s) a^(k−s)`.
fn reorder_weights(k: u32, j: u32) -> Vec<BigInt> {
    let top = k.min(j);
    let mut w = Vec::with_capacity(top as usize + 1);
    let mut cur = BigInt::one();
    w.push(cur.clone());
    for s in 0..top {
        cur = cur * BigInt::from(k - s) * BigInt::from(j - s) / BigInt::from(s + 1);
        w.push(cur.clone());
    }
    w
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorPoly {
    terms: BTreeMap<Monomial, ScalarSum>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        OperatorPoly::default()
    }

    pub fn identity() -> Self {
        OperatorPoly::scalar(ScalarSum::one())
    }

    pub fn scalar(c: impl Into<ScalarSum>) -> Self {
        OperatorPoly::term(Monomial::IDENTITY, c)
    }

    pub fn term(m: Monomial, c: impl Into<ScalarSum>) -> Self {
        let mut out = OperatorPoly::zero();
        out.add_term(m, &c.into());
        out
    }

    /// `a†^dag a^ann` with unit coefficient.
    pub fn monomial(dag: u32, ann: u32) -> Self {
        OperatorPoly::term(Monomial::new(dag, ann), ScalarSum::one())
    }

    pub fn annihilation() -> Self {
        OperatorPoly::monomial(0, 1)
    }

    pub fn creation() -> Self {
        OperatorPoly::monomial(1, 0)
    }

    pub fn number() -> Self {
        OperatorPoly::monomial(1, 1)
    }

    /// `q = √(ħ/2mω)(a + a†)`
    pub fn position() -> Self {
        let c = Scalar::new(
            crate::coeff::Qi2::sqrt2().scale(&crate::coeff::rat(1, 2)),
            crate::coeff::UnitMonomial::new(1, -1, -1),
        );
        (&OperatorPoly::annihilation() + &OperatorPoly::creation()).scale_scalar(&c)
    }

    /// `p = i√(ħmω/2)(a† − a)`
    pub fn momentum() -> Self {
        let c = Scalar::new(
            &crate::coeff::Qi2::i() * &crate::coeff::Qi2::sqrt2().scale(&crate::coeff::rat(1, 2)),
            crate::coeff::UnitMonomial::new(1, 1, 1),
        );
        (&OperatorPoly::creation() - &OperatorPoly::annihilation()).scale_scalar(&c)
    }

    pub fn add_term(&mut self, m: Monomial, c: &ScalarSum) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> ScalarSum {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Terms in ascending `(j, k)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &ScalarSum)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Total degree `max(j + k)`; zero for the zero operator.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest level shift `max |j − k|`.
    pub fn max_shift(&self) -> u32 {
        self.terms.keys().map(|m| m.excess().0.unsigned_abs() as u32).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &ScalarSum) -> Self {
        let mut out = OperatorPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, &(v * c));
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        self.scale(&c.clone().into())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = OperatorPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, &v.scale_rational(r));
        }
        out
    }

    /// Canonical product `self · other`.
    pub fn normal_order_product(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (l, cl) in &self.terms {
            for (r, cr) in &other.terms {
                let c = cl * cr;
                if c.is_zero() {
                    continue;
                }
                // a†^j1 (a^k1 a†^j2) a^k2
                for (s, w) in reorder_weights(l.ann, r.dag).iter().enumerate() {
                    let s = s as u32;
                    let m = Monomial::new(l.dag + r.dag - s, l.ann + r.ann - s);
                    out.add_term(m, &c.scale_int(w));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> OperatorPoly {
        let mut out = OperatorPoly::identity();
        for _ in 0..e {
            out = out.normal_order_product(self);
        }
        out
    }

    pub fn commutator(&self, other: &OperatorPoly) -> OperatorPoly {
        &self.normal_order_product(other) - &other.normal_order_product(self)
    }

    /// Hermitian conjugate. `(c a†^j a^k)† = c* a†^k a^j` is already normal-ordered.
    pub fn dagger(&self) -> OperatorPoly {
        OperatorPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.ann, m.dag), c.conj()))
                .collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.dagger() == *self
    }

    /// Divides each term by `k − j` and drops the balanced ones. Up to a
    /// factor `1/ħω` this is the oscillator resolvent with the diagonal
    /// projected out.
    pub fn bar(&self) -> OperatorPoly {
        let mut out = OperatorPoly::zero();
        for (m, c) in &self.terms {
            let e = m.excess();
            if e.is_balanced() {
                continue;
            }
            out.add_term(*m, &c.scale_rational(&Rational::new(BigInt::from(-1), BigInt::from(e.0))));
        }
        out
    }

    /// Keeps only the balanced (`j = k`) terms.
    pub fn check(&self) -> OperatorPoly {
        OperatorPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.excess().is_balanced())
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Rewrites the balanced part as a polynomial in `N` using
    /// `a†^k a^k = N(N−1)…(N−k+1)`; unbalanced terms are ignored.
    pub fn diagonal_as_npoly(&self) -> DiagonalPoly {
        let mut out = DiagonalPoly::zero();
        for (m, c) in &self.terms {
            if m.excess().is_balanced() {
                out = &out + &DiagonalPoly::falling_factorial(m.dag).scale(c);
            }
        }
        out
    }
}

impl<'a> Add<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn add(self, o: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&OperatorPoly> for OperatorPoly {
    fn add_assign(&mut self, o: &OperatorPoly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }
}

impl<'a> Sub<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn sub(self, o: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &OperatorPoly {
    type Output = OperatorPoly;
    fn neg(self) -> OperatorPoly {
        OperatorPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a OperatorPoly> for &'a OperatorPoly {
    type Output = OperatorPoly;
    fn mul(self, o: &OperatorPoly) -> OperatorPoly {
        self.normal_order_product(o)
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let op = match (m.dag, m.ann) {
                (0, 0) => String::new(),
                (j, k) => {
                    let mut s = Vec::new();
                    match j {
                        0 => {}
                        1 => s.push("a†".to_string()),
                        j => s.push(format!("a†^{j}")),
                    }
                    match k {
                        0 => {}
                        1 => s.push("a".to_string()),
                        k => s.push(format!("a^{k}")),
                    }
                    s.join(" ")
                }
            };
            let is_unit = c.single().map(|s| s.value.is_one() && s.units.is_dimensionless());
            match (op.is_empty(), is_unit) {
                (true, _) => write!(f, "({c})")?,
                (false, Some(true)) => write!(f, "{op}")?,
                (false, _) => write!(f, "({c}) {op}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    dag: u32,
    ann: u32,
    coeff: ScalarSum,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for OperatorPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { dag: m.dag, ann: m.ann, coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let mut out = OperatorPoly::zero();
        for t in &r.terms {
            out.add_term(Monomial::new(t.dag, t.ann), &t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Qi2, UnitMonomial};

    fn a() -> OperatorPoly {
        OperatorPoly::annihilation()
    }
    fn ad() -> OperatorPoly {
        OperatorPoly::creation()
    }
    fn int(n: i64) -> ScalarSum {
        ScalarSum::from_int(n)
    }
    fn mono(j: u32, k: u32, c: i64) -> OperatorPoly {
        OperatorPoly::term(Monomial::new(j, k), int(c))
    }

    #[test]
    fn defining_commutator() {
        assert_eq!(&a() * &ad(), &mono(1, 1, 1) + &mono(0, 0, 1));
        assert_eq!(a().commutator(&ad()), OperatorPoly::identity());
    }

    #[test]
    fn a2_ad2() {
        // Frozen from a 10×10 truncated matrix product (see fock tests).
        let lhs = &a().pow(2) * &ad().pow(2);
        let rhs = &(&mono(2, 2, 1) + &mono(1, 1, 4)) + &mono(0, 0, 2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dagger_basics() {
        assert_eq!(a().dagger(), ad());
        let i_n = OperatorPoly::number().scale(&Scalar::new(Qi2::i(), UnitMonomial::ONE).into());
        assert_eq!(i_n.dagger(), -&i_n);
    }

    #[test]
    fn bar_and_check_on_simple_terms() {
        assert!(OperatorPoly::number().bar().is_zero());
        assert_eq!(
            ad().pow(3).bar(),
            OperatorPoly::term(Monomial::new(3, 0), ScalarSum::from_rational(rat(-1, 3)))
        );
        assert_eq!(OperatorPoly::number().check(), OperatorPoly::number());
        assert!(OperatorPoly::position().check().is_zero());
    }

    #[test]
    fn bar_of_position() {
        let q = OperatorPoly::position();
        let c = q.coeff(Monomial::new(0, 1));
        let expect = (&a() - &ad()).scale(&c);
        assert_eq!(q.bar(), expect);
        assert_eq!(q.bar().dagger(), -&q.bar());
    }

    #[test]
    fn diagonal_polynomials() {
        assert_eq!(OperatorPoly::number().diagonal_as_npoly(), DiagonalPoly::from_ints(&[0, 1]));
        // a†²a² = N² − N
        assert_eq!(mono(2, 2, 1).diagonal_as_npoly(), DiagonalPoly::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn zero_flows_through() {
        let z = OperatorPoly::zero();
        assert!(z.bar().is_zero());
        assert!(z.check().is_zero());
        assert!(z.dagger().is_zero());
        assert!((&z * &a()).is_zero());
        assert!(z.diagonal_as_npoly().is_zero());
    }

    #[test]
    fn json_sorted_terms() {
        let x = &mono(2, 0, 1) + &mono(0, 3, -2);
        let v = serde_json::to_value(&x).unwrap();
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms[0]["dag"], 0);
        assert_eq!(terms[1]["dag"], 2);
        let back: OperatorPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
    }
}
