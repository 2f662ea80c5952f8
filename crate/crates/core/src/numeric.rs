//! Float-coefficient operator polynomials.
//!
//! Only the squeezed-state constructor needs these: `cosh r` is not in the
//! exact coefficient ring, so units are collapsed to numbers up front.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::boson::{Monomial, OperatorPoly};
use crate::coeff::UnitValues;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NumericPoly {
    terms: BTreeMap<Monomial, Complex64>,
}

fn weights(k: u32, j: u32) -> Vec<f64> {
    let mut w = vec![1.0];
    let mut cur = 1.0;
    for s in 0..k.min(j) {
        cur = cur * (k - s) as f64 * (j - s) as f64 / (s + 1) as f64;
        w.push(cur);
    }
    w
}

impl NumericPoly {
    pub fn from_exact(x: &OperatorPoly, units: &UnitValues) -> Self {
        NumericPoly {
            terms: x.terms().map(|(m, c)| (m, c.to_complex(units))).collect(),
        }
    }

    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::IDENTITY, Complex64::new(1.0, 0.0));
        NumericPoly { terms }
    }

    fn add_term(&mut self, m: Monomial, c: Complex64) {
        *self.terms.entry(m).or_default() += c;
    }

    pub fn coeff(&self, m: Monomial) -> Complex64 {
        self.terms.get(&m).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        NumericPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn dagger(&self) -> Self {
        NumericPoly {
            terms: self.terms.iter().map(|(m, c)| (Monomial::new(m.ann, m.dag), c.conj())).collect(),
        }
    }

    pub fn commutator(&self, o: &NumericPoly) -> Self {
        &(self * o) - &(o * self)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a NumericPoly> for &'a NumericPoly {
    type Output = NumericPoly;
    fn add(self, o: &NumericPoly) -> NumericPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl<'a> Sub<&'a NumericPoly> for &'a NumericPoly {
    type Output = NumericPoly;
    fn sub(self, o: &NumericPoly) -> NumericPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a NumericPoly> for &'a NumericPoly {
    type Output = NumericPoly;
    fn mul(self, o: &NumericPoly) -> NumericPoly {
        let mut out = NumericPoly::default();
        for (l, cl) in &self.terms {
            for (r, cr) in &o.terms {
                for (s, w) in weights(l.ann, r.dag).iter().enumerate() {
                    let s = s as u32;
                    out.add_term(Monomial::new(l.dag + r.dag - s, l.ann + r.ann - s), cl * cr * w);
                }
            }
        }
        out
    }
}

/// Truncated λ-series of [`NumericPoly`].
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSeries {
    coeffs: Vec<NumericPoly>,
}

impl NumericSeries {
    pub fn from_coeffs(coeffs: Vec<NumericPoly>) -> Self {
        assert!(!coeffs.is_empty());
        NumericSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &NumericPoly {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[NumericPoly] {
        &self.coeffs
    }

    pub fn dagger(&self) -> Self {
        NumericSeries { coeffs: self.coeffs.iter().map(NumericPoly::dagger).collect() }
    }

    pub fn mul(&self, o: &NumericSeries) -> NumericSeries {
        let order = self.order().min(o.order());
        let mut coeffs = vec![NumericPoly::default(); order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &o.coeffs[j]);
            }
        }
        NumericSeries { coeffs }
    }

    pub fn commutator(&self, o: &NumericSeries) -> NumericSeries {
        let ab = self.mul(o);
        let ba = o.mul(self);
        NumericSeries {
            coeffs: ab.coeffs.iter().zip(&ba.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_product() {
        let u = UnitValues::NATURAL;
        let x = &OperatorPoly::position() + &OperatorPoly::momentum().pow(2);
        let y = OperatorPoly::momentum().pow(3);
        let exact = NumericPoly::from_exact(&x.normal_order_product(&y), &u);
        let float = &NumericPoly::from_exact(&x, &u) * &NumericPoly::from_exact(&y, &u);
        assert!((&exact - &float).max_abs() < 1e-12);
    }
}
