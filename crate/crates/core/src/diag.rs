//! Polynomials in the number operator `N`, i.e. functions of the level `n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boson::OperatorPoly;
use crate::coeff::{ScalarSum, UnitValues};

/// `Σ_p coeffs[p] · N^p`, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalPoly {
    coeffs: Vec<ScalarSum>,
}

impl DiagonalPoly {
    pub fn zero() -> Self {
        DiagonalPoly::default()
    }

    pub fn constant(c: impl Into<ScalarSum>) -> Self {
        DiagonalPoly::new(vec![c.into()])
    }

    pub fn new(coeffs: Vec<ScalarSum>) -> Self {
        let mut out = DiagonalPoly { coeffs };
        out.trim();
        out
    }

    pub fn from_ints(c: &[i64]) -> Self {
        DiagonalPoly::new(c.iter().map(|&v| ScalarSum::from_int(v)).collect())
    }

    /// `n(n−1)…(n−k+1)`
    pub fn falling_factorial(k: u32) -> Self {
        let mut out = DiagonalPoly::from_ints(&[1]);
        for i in 0..k as i64 {
            out = &out * &DiagonalPoly::from_ints(&[-i, 1]);
        }
        out
    }

    /// `(n+1)(n+2)…(n+k)`
    pub fn rising_factorial_from_one(k: u32) -> Self {
        let mut out = DiagonalPoly::from_ints(&[1]);
        for i in 1..=k as i64 {
            out = &out * &DiagonalPoly::from_ints(&[i, 1]);
        }
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(ScalarSum::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[ScalarSum] {
        &self.coeffs
    }

    pub fn coeff(&self, p: usize) -> ScalarSum {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    /// Degree in `N`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(ScalarSum::is_real)
    }

    pub fn scale(&self, c: &ScalarSum) -> Self {
        DiagonalPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, n: i64) -> ScalarSum {
        let x = ScalarSum::from_int(n);
        let mut acc = ScalarSum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    pub fn eval_f64(&self, n: f64, u: &UnitValues) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c.to_complex(u);
        }
        acc
    }

    /// The same function of `N` as a normal-ordered operator.
    pub fn to_operator(&self) -> OperatorPoly {
        let n_op = OperatorPoly::number();
        let mut power = OperatorPoly::identity();
        let mut out = OperatorPoly::zero();
        for c in &self.coeffs {
            out += &power.scale(c);
            power = power.normal_order_product(&n_op);
        }
        out
    }

    /// `p(N + shift)`; used to move a function of `N` across ladder operators.
    pub fn shifted(&self, shift: i64) -> Self {
        let x = DiagonalPoly::from_ints(&[shift, 1]);
        let mut acc = DiagonalPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + &DiagonalPoly::constant(c.clone());
        }
        acc
    }
}

impl<'a> Add<&'a DiagonalPoly> for &'a DiagonalPoly {
    type Output = DiagonalPoly;
    fn add(self, o: &DiagonalPoly) -> DiagonalPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        DiagonalPoly::new((0..len).map(|p| &self.coeff(p) + &o.coeff(p)).collect())
    }
}

impl<'a> Sub<&'a DiagonalPoly> for &'a DiagonalPoly {
    type Output = DiagonalPoly;
    fn sub(self, o: &DiagonalPoly) -> DiagonalPoly {
        self + &(-o)
    }
}

impl Neg for &DiagonalPoly {
    type Output = DiagonalPoly;
    fn neg(self) -> DiagonalPoly {
        DiagonalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Mul<&'a DiagonalPoly> for &'a DiagonalPoly {
    type Output = DiagonalPoly;
    fn mul(self, o: &DiagonalPoly) -> DiagonalPoly {
        if self.is_zero() || o.is_zero() {
            return DiagonalPoly::zero();
        }
        let mut out = vec![ScalarSum::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        DiagonalPoly::new(out)
    }
}

impl fmt::Display for DiagonalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (p, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let np = match p {
                0 => String::new(),
                1 => "n".to_string(),
                p => format!("n^{p}"),
            };
            if np.is_empty() {
                parts.push(format!("({c})"));
            } else if *c == ScalarSum::one() {
                parts.push(np);
            } else {
                parts.push(format!("({c}) {np}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Integer-valued helper for tests and oracles: `n^(k)` falling.
pub fn falling(n: i64, k: u32) -> BigInt {
    (0..k as i64).map(|i| BigInt::from(n - i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_polys() {
        assert_eq!(DiagonalPoly::falling_factorial(2), DiagonalPoly::from_ints(&[0, -1, 1]));
        assert_eq!(DiagonalPoly::rising_factorial_from_one(2), DiagonalPoly::from_ints(&[2, 3, 1]));
        for n in 0..6 {
            assert_eq!(
                DiagonalPoly::falling_factorial(3).eval(n),
                ScalarSum::from_rational(falling(n, 3).into())
            );
        }
    }

    #[test]
    fn to_operator_round_trip() {
        let p = DiagonalPoly::from_ints(&[3, 6, 6]);
        assert_eq!(p.to_operator().diagonal_as_npoly(), p);
    }

    #[test]
    fn shift() {
        let p = DiagonalPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shifted(1), DiagonalPoly::from_ints(&[1, 2, 1]));
    }
}
