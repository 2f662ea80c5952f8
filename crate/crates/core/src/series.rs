//! Truncated power series in the coupling λ.
//!
//! All arithmetic drops every contribution beyond the series order, so a
//! product of two order-M series is again exact "up to order M".

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::boson::OperatorPoly;
use crate::coeff::{rat, ScalarSum};
use crate::diag::DiagonalPoly;

/// `Σ_{m=0}^{M} λ^m · coeffs[m]` with operator-valued coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSeries {
    coeffs: Vec<OperatorPoly>,
}

impl OperatorSeries {
    pub fn zero(order: usize) -> Self {
        OperatorSeries { coeffs: vec![OperatorPoly::zero(); order + 1] }
    }

    /// An operator placed at order zero.
    pub fn constant(op: OperatorPoly, order: usize) -> Self {
        let mut s = OperatorSeries::zero(order);
        s.coeffs[0] = op;
        s
    }

    pub fn from_coeffs(coeffs: Vec<OperatorPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least an order-zero term");
        OperatorSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[OperatorPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &OperatorPoly {
        &self.coeffs[m]
    }

    pub fn set(&mut self, m: usize, op: OperatorPoly) {
        self.coeffs[m] = op;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, OperatorPoly::zero());
        OperatorSeries { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(OperatorPoly::is_zero)
    }

    /// True when every coefficient of order 1..=M vanishes.
    pub fn corrections_vanish(&self) -> bool {
        self.coeffs.iter().skip(1).all(OperatorPoly::is_zero)
    }

    pub fn dagger(&self) -> Self {
        OperatorSeries { coeffs: self.coeffs.iter().map(OperatorPoly::dagger).collect() }
    }

    pub fn scale(&self, c: &ScalarSum) -> Self {
        OperatorSeries { coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn commutator(&self, other: &OperatorSeries) -> Self {
        &(self * other) - &(other * self)
    }

    /// Left-multiplies every coefficient by a plain operator.
    pub fn left_mul(&self, op: &OperatorPoly) -> Self {
        OperatorSeries { coeffs: self.coeffs.iter().map(|x| op * x).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = OperatorSeries::constant(OperatorPoly::identity(), self.order());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl<'a> Add<&'a OperatorSeries> for &'a OperatorSeries {
    type Output = OperatorSeries;
    fn add(self, o: &OperatorSeries) -> OperatorSeries {
        let order = self.order().min(o.order());
        OperatorSeries {
            coeffs: (0..=order).map(|m| &self.coeffs[m] + &o.coeffs[m]).collect(),
        }
    }
}

impl<'a> Sub<&'a OperatorSeries> for &'a OperatorSeries {
    type Output = OperatorSeries;
    fn sub(self, o: &OperatorSeries) -> OperatorSeries {
        let order = self.order().min(o.order());
        OperatorSeries {
            coeffs: (0..=order).map(|m| &self.coeffs[m] - &o.coeffs[m]).collect(),
        }
    }
}

impl Neg for &OperatorSeries {
    type Output = OperatorSeries;
    fn neg(self) -> OperatorSeries {
        OperatorSeries { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }
}

impl<'a> Mul<&'a OperatorSeries> for &'a OperatorSeries {
    type Output = OperatorSeries;
    fn mul(self, o: &OperatorSeries) -> OperatorSeries {
        let order = self.order().min(o.order());
        let mut coeffs = vec![OperatorPoly::zero(); order + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate().take(order + 1 - i) {
                if !y.is_zero() {
                    coeffs[i + j] += &(x * y);
                }
            }
        }
        OperatorSeries { coeffs }
    }
}

/// λ-series whose coefficients are functions of the level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagSeries {
    coeffs: Vec<DiagonalPoly>,
}

impl DiagSeries {
    pub fn from_coeffs(coeffs: Vec<DiagonalPoly>) -> Self {
        assert!(!coeffs.is_empty());
        DiagSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![DiagonalPoly::zero(); order + 1];
        coeffs[0] = DiagonalPoly::constant(ScalarSum::one());
        DiagSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[DiagonalPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &DiagonalPoly {
        &self.coeffs[m]
    }

    /// `1/s` for a series with constant term exactly one.
    pub fn reciprocal(&self) -> Option<Self> {
        if self.coeffs[0] != DiagonalPoly::constant(ScalarSum::one()) {
            return None;
        }
        let m = self.order();
        let mut inv = vec![DiagonalPoly::zero(); m + 1];
        inv[0] = self.coeffs[0].clone();
        for k in 1..=m {
            let mut acc = DiagonalPoly::zero();
            for i in 1..=k {
                acc = &acc + &(&self.coeffs[i] * &inv[k - i]);
            }
            inv[k] = -&acc;
        }
        Some(DiagSeries { coeffs: inv })
    }

    /// `s^(-1/2)` for a series with constant term exactly one.
    pub fn inverse_sqrt(&self) -> Option<Self> {
        if self.coeffs[0] != DiagonalPoly::constant(ScalarSum::one()) {
            return None;
        }
        // (1 + x)^(-1/2) = Σ_k binom(-1/2, k) x^k
        let order = self.order();
        let mut x = self.clone();
        x.coeffs[0] = DiagonalPoly::zero();
        let mut out = DiagSeries::one(order);
        let mut power = DiagSeries::one(order);
        let mut binom = rat(1, 1);
        for k in 1..=order as i64 {
            power = &power * &x;
            binom = binom * rat(-2 * k + 1, 2 * k);
            let term = power.scale(&ScalarSum::from_rational(binom.clone()));
            out = &out + &term;
        }
        Some(out)
    }

    pub fn scale(&self, c: &ScalarSum) -> Self {
        DiagSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }
}

impl<'a> Add<&'a DiagSeries> for &'a DiagSeries {
    type Output = DiagSeries;
    fn add(self, o: &DiagSeries) -> DiagSeries {
        let order = self.order().min(o.order());
        DiagSeries { coeffs: (0..=order).map(|m| &self.coeffs[m] + &o.coeffs[m]).collect() }
    }
}

impl<'a> Mul<&'a DiagSeries> for &'a DiagSeries {
    type Output = DiagSeries;
    fn mul(self, o: &DiagSeries) -> DiagSeries {
        let order = self.order().min(o.order());
        let mut coeffs = vec![DiagonalPoly::zero(); order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &o.coeffs[j]);
            }
        }
        DiagSeries { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_product() {
        let a = OperatorPoly::annihilation();
        let s = OperatorSeries::from_coeffs(vec![a.clone(), OperatorPoly::identity()]);
        let sq = &s * &s;
        assert_eq!(sq.order(), 1);
        assert_eq!(sq.coeff(0), &a.pow(2));
        assert_eq!(sq.coeff(1), &a.scale(&ScalarSum::from_int(2)));
    }

    #[test]
    fn reciprocal_and_inverse_sqrt() {
        let x = DiagSeries::from_coeffs(vec![
            DiagonalPoly::from_ints(&[1]),
            DiagonalPoly::from_ints(&[0, 2]),
            DiagonalPoly::from_ints(&[1, 0, 1]),
        ]);
        let r = x.reciprocal().unwrap();
        assert_eq!(&x * &r, DiagSeries::one(2));
        let s = x.inverse_sqrt().unwrap();
        assert_eq!(&(&s * &s) * &x, DiagSeries::one(2));
    }
}
