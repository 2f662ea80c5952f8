//! Seeded random Hermitian perturbations for property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boson::{Monomial, OperatorPoly};
use crate::coeff::{rat, Qi2, Rational, ScalarSum};

fn small(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

/// `X + X†` for `X` a sum of up to `terms` monomials of total degree
/// `≤ max_degree` with small coefficients in ℚ(i, √2). Dimensionless, and
/// never zero.
pub fn random_hermitian(rng: &mut impl Rng, max_degree: u32, terms: usize) -> OperatorPoly {
    loop {
        let mut x = OperatorPoly::zero();
        for _ in 0..terms.max(1) {
            let deg = rng.gen_range(1..=max_degree.max(1));
            let dag = rng.gen_range(0..=deg);
            let mut c = Qi2::new(small(rng), Rational::default(), small(rng), Rational::default());
            if rng.gen_bool(0.3) {
                c.re_s2 = small(rng);
            }
            x.add_term(Monomial::new(dag, deg - dag), &ScalarSum::from(crate::coeff::Scalar::new(c, Default::default())));
        }
        let v = &x + &x.dagger();
        if !v.is_zero() {
            return v;
        }
    }
}

/// `count` perturbations from a fixed seed.
pub fn seeded_batch(seed: u64, count: usize, max_degree: u32) -> Vec<OperatorPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_hermitian(&mut rng, max_degree, 3)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_and_reproducible() {
        let a = seeded_batch(7, 5, 4);
        assert_eq!(a, seeded_batch(7, 5, 4));
        for v in &a {
            assert!(v.is_hermitian());
            assert!(v.degree() <= 4);
        }
    }
}
