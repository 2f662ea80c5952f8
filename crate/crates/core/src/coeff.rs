//! Exact coefficients: elements of ℚ(i, √2) carrying a monomial in ħ, m and ω.
//!
//! Every prefactor produced by expanding `q` and `p` in ladder operators and
//! pushing them through the perturbative recursion lives in this ring, so the
//! symbolic side never touches floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // Huge numerators: fall back on the ratio of leading digits.
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// An element `re + re_s2·√2 + i·(im + im_s2·√2)` of ℚ(i, √2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Qi2 {
    pub re: Rational,
    pub re_s2: Rational,
    pub im: Rational,
    pub im_s2: Rational,
}

impl Qi2 {
    pub fn new(re: Rational, re_s2: Rational, im: Rational, im_s2: Rational) -> Self {
        Qi2 { re, re_s2, im, im_s2 }
    }

    pub fn zero() -> Self {
        Qi2::default()
    }

    pub fn one() -> Self {
        Qi2::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Qi2 { im: Rational::one(), ..Qi2::default() }
    }

    pub fn sqrt2() -> Self {
        Qi2 { re_s2: Rational::one(), ..Qi2::default() }
    }

    pub fn from_rational(r: Rational) -> Self {
        Qi2 { re: r, ..Qi2::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Qi2::from_rational(rat(n, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.re_s2.is_zero() && self.im.is_zero() && self.im_s2.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero() && self.im_s2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.re_s2.is_zero() && self.im.is_zero() && self.im_s2.is_zero()
    }

    /// Complex conjugation; √2 is real so only the imaginary parts flip.
    pub fn conj(&self) -> Self {
        Qi2 {
            re: self.re.clone(),
            re_s2: self.re_s2.clone(),
            im: -&self.im,
            im_s2: -&self.im_s2,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Qi2 {
            re: &self.re * r,
            re_s2: &self.re_s2 * r,
            im: &self.im * r,
            im_s2: &self.im_s2 * r,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Write x = α + β√2 with α, β Gaussian rationals. Then
        // x·(α − β√2) = α² − 2β² =: γ, which is nonzero because √2 ∉ ℚ(i).
        let (a, c) = (&self.re, &self.im);
        let (b, d) = (&self.re_s2, &self.im_s2);
        let two = rat(2, 1);
        let g_re = a * a - c * c - &two * (b * b - d * d);
        let g_im = &two * a * c - &two * &two * b * d;
        let norm = &g_re * &g_re + &g_im * &g_im;
        // 1/γ = conj(γ)/|γ|²
        let inv_g = Qi2 {
            re: &g_re / &norm,
            im: -&g_im / &norm,
            ..Qi2::default()
        };
        let partner = Qi2 {
            re: a.clone(),
            re_s2: -b,
            im: c.clone(),
            im_s2: -d,
        };
        Some(&partner * &inv_g)
    }

    pub fn to_complex(&self) -> Complex64 {
        let s2 = std::f64::consts::SQRT_2;
        Complex64::new(
            rat_to_f64(&self.re) + s2 * rat_to_f64(&self.re_s2),
            rat_to_f64(&self.im) + s2 * rat_to_f64(&self.im_s2),
        )
    }

    fn components(&self) -> [(&Rational, &'static str); 4] {
        [
            (&self.re, ""),
            (&self.re_s2, "√2"),
            (&self.im, "i"),
            (&self.im_s2, "i√2"),
        ]
    }

    fn nonzero_components(&self) -> usize {
        self.components().iter().filter(|(c, _)| !c.is_zero()).count()
    }
}

impl<'a> Add<&'a Qi2> for &'a Qi2 {
    type Output = Qi2;
    fn add(self, o: &Qi2) -> Qi2 {
        Qi2 {
            re: &self.re + &o.re,
            re_s2: &self.re_s2 + &o.re_s2,
            im: &self.im + &o.im,
            im_s2: &self.im_s2 + &o.im_s2,
        }
    }
}

impl<'a> Sub<&'a Qi2> for &'a Qi2 {
    type Output = Qi2;
    fn sub(self, o: &Qi2) -> Qi2 {
        Qi2 {
            re: &self.re - &o.re,
            re_s2: &self.re_s2 - &o.re_s2,
            im: &self.im - &o.im,
            im_s2: &self.im_s2 - &o.im_s2,
        }
    }
}

impl<'a> Mul<&'a Qi2> for &'a Qi2 {
    type Output = Qi2;
    fn mul(self, o: &Qi2) -> Qi2 {
        let (a, b, c, d) = (&self.re, &self.re_s2, &self.im, &self.im_s2);
        let (e, f, g, h) = (&o.re, &o.re_s2, &o.im, &o.im_s2);
        let two = rat(2, 1);
        Qi2 {
            re: a * e + &two * b * f - c * g - &two * d * h,
            re_s2: a * f + b * e - c * h - d * g,
            im: a * g + c * e + &two * b * h + &two * d * f,
            im_s2: a * h + d * e + b * g + c * f,
        }
    }
}

impl Neg for &Qi2 {
    type Output = Qi2;
    fn neg(self) -> Qi2 {
        Qi2 {
            re: -&self.re,
            re_s2: -&self.re_s2,
            im: -&self.im,
            im_s2: -&self.im_s2,
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Qi2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, suffix) in self.components() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if suffix.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                suffix.to_string()
            } else if mag.denom().is_one() {
                format!("{}{}", mag.numer(), suffix)
            } else {
                format!("({}){}", fmt_rational(&mag), suffix)
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Numeric values substituted for ħ, m and ω when leaving the exact world.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitValues {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl UnitValues {
    pub const NATURAL: UnitValues = UnitValues { hbar: 1.0, mass: 1.0, omega: 1.0 };
}

impl Default for UnitValues {
    fn default() -> Self {
        UnitValues::NATURAL
    }
}

/// ħ^(hbar2/2) · m^(mass2/2) · ω^(omega2/2). Exponents are stored doubled so
/// that square roots such as √(ħ/2mω) stay exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitMonomial {
    pub hbar2: i32,
    pub mass2: i32,
    pub omega2: i32,
}

impl UnitMonomial {
    pub const ONE: UnitMonomial = UnitMonomial { hbar2: 0, mass2: 0, omega2: 0 };

    pub const fn new(hbar2: i32, mass2: i32, omega2: i32) -> Self {
        UnitMonomial { hbar2, mass2, omega2 }
    }

    pub fn is_dimensionless(&self) -> bool {
        *self == UnitMonomial::ONE
    }

    pub fn inv(&self) -> Self {
        UnitMonomial::new(-self.hbar2, -self.mass2, -self.omega2)
    }

    pub fn value(&self, u: &UnitValues) -> f64 {
        u.hbar.powf(self.hbar2 as f64 / 2.0)
            * u.mass.powf(self.mass2 as f64 / 2.0)
            * u.omega.powf(self.omega2 as f64 / 2.0)
    }

    /// Exponents as (numerator, denominator) pairs for ħ, m, ω.
    pub fn exponents(&self) -> [(&'static str, i32); 3] {
        [("ħ", self.hbar2), ("m", self.mass2), ("ω", self.omega2)]
    }
}

impl Mul for UnitMonomial {
    type Output = UnitMonomial;
    fn mul(self, o: UnitMonomial) -> UnitMonomial {
        UnitMonomial::new(self.hbar2 + o.hbar2, self.mass2 + o.mass2, self.omega2 + o.omega2)
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (sym, e2) in self.exponents() {
            match e2 {
                0 => {}
                2 => parts.push(sym.to_string()),
                e if e % 2 == 0 => parts.push(format!("{sym}^{}", e / 2)),
                e => parts.push(format!("{sym}^({e}/2)")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A single dimensioned coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub value: Qi2,
    pub units: UnitMonomial,
}

impl Scalar {
    pub fn new(value: Qi2, units: UnitMonomial) -> Self {
        Scalar { value, units }
    }

    pub fn one() -> Self {
        Scalar::new(Qi2::one(), UnitMonomial::ONE)
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::new(Qi2::from_rational(rat(num, den)), UnitMonomial::ONE)
    }

    /// A pure unit monomial with coefficient one.
    pub fn units(hbar2: i32, mass2: i32, omega2: i32) -> Self {
        Scalar::new(Qi2::one(), UnitMonomial::new(hbar2, mass2, omega2))
    }

    /// ħω, the level spacing of the unperturbed oscillator.
    pub fn hbar_omega() -> Self {
        Scalar::units(2, 0, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.value.conj(), self.units)
    }

    pub fn inv(&self) -> Option<Self> {
        Some(Scalar::new(self.value.inv()?, self.units.inv()))
    }

    pub fn to_complex(&self, u: &UnitValues) -> Complex64 {
        self.value.to_complex() * self.units.value(u)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.value * &o.value, self.units * o.units)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.units.is_dimensionless() {
            return write!(f, "{}", self.value);
        }
        if self.value.is_one() {
            return write!(f, "{}", self.units);
        }
        if self.value.nonzero_components() > 1 {
            write!(f, "({}) {}", self.value, self.units)
        } else {
            write!(f, "{} {}", self.value, self.units)
        }
    }
}

/// Sum of unit-distinct scalars. This is the coefficient type of operator
/// polynomials, so perturbations mixing dimensions (say `q + p^4`) are
/// representable. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScalarSum {
    parts: BTreeMap<UnitMonomial, Qi2>,
}

impl ScalarSum {
    pub fn zero() -> Self {
        ScalarSum::default()
    }

    pub fn one() -> Self {
        Scalar::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::rational(n, 1).into()
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::new(Qi2::from_rational(r), UnitMonomial::ONE).into()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.parts.values().all(Qi2::is_real)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Scalar> + '_ {
        self.parts.iter().map(|(u, v)| Scalar::new(v.clone(), *u))
    }

    /// The sole summand, if there is exactly one (zero counts as none).
    pub fn single(&self) -> Option<Scalar> {
        if self.parts.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }

    pub fn add_scalar(&mut self, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let sum = match self.parts.get(&s.units) {
            Some(v) => v + &s.value,
            None => s.value.clone(),
        };
        if sum.is_zero() {
            self.parts.remove(&s.units);
        } else {
            self.parts.insert(s.units, sum);
        }
    }

    pub fn conj(&self) -> Self {
        ScalarSum {
            parts: self.parts.iter().map(|(u, v)| (*u, v.conj())).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return ScalarSum::zero();
        }
        ScalarSum {
            parts: self.parts.iter().map(|(u, v)| (*u, v.scale(r))).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale_rational(&Rational::from_integer(n.clone()))
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Self {
        let mut out = ScalarSum::zero();
        for p in self.iter() {
            out.add_scalar(&(&p * s));
        }
        out
    }

    /// Inverse of a single-unit sum; mixed dimensions have no inverse here.
    pub fn inv(&self) -> Option<Self> {
        Some(self.single()?.inv()?.into())
    }

    pub fn to_complex(&self, u: &UnitValues) -> Complex64 {
        self.iter().map(|s| s.to_complex(u)).sum()
    }
}

impl From<Scalar> for ScalarSum {
    fn from(s: Scalar) -> Self {
        let mut out = ScalarSum::zero();
        out.add_scalar(&s);
        out
    }
}

impl<'a> Add<&'a ScalarSum> for &'a ScalarSum {
    type Output = ScalarSum;
    fn add(self, o: &ScalarSum) -> ScalarSum {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&ScalarSum> for ScalarSum {
    fn add_assign(&mut self, o: &ScalarSum) {
        for s in o.iter() {
            self.add_scalar(&s);
        }
    }
}

impl<'a> Sub<&'a ScalarSum> for &'a ScalarSum {
    type Output = ScalarSum;
    fn sub(self, o: &ScalarSum) -> ScalarSum {
        self + &(-o)
    }
}

impl Neg for &ScalarSum {
    type Output = ScalarSum;
    fn neg(self) -> ScalarSum {
        ScalarSum {
            parts: self.parts.iter().map(|(u, v)| (*u, -v)).collect(),
        }
    }
}

impl<'a> Mul<&'a ScalarSum> for &'a ScalarSum {
    type Output = ScalarSum;
    fn mul(self, o: &ScalarSum) -> ScalarSum {
        let mut out = ScalarSum::zero();
        for x in self.iter() {
            for y in o.iter() {
                out.add_scalar(&(&x * &y));
            }
        }
        out
    }
}

impl fmt::Display for ScalarSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts.len() {
            0 => write!(f, "0"),
            1 => write!(f, "{}", self.iter().next().unwrap()),
            _ => {
                let parts: Vec<String> = self.iter().map(|s| format!("{s}")).collect();
                write!(f, "[{}]", parts.join(" + "))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big<E: serde::de::Error>(&self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

fn rat_repr(r: &Rational) -> [IntRepr; 2] {
    [IntRepr::from_big(r.numer()), IntRepr::from_big(r.denom())]
}

fn rat_from_repr<E: serde::de::Error>(r: &[IntRepr; 2]) -> Result<Rational, E> {
    let den = r[1].to_big::<E>()?;
    if den.is_zero() {
        return Err(E::custom("zero denominator"));
    }
    Ok(Rational::new(r[0].to_big::<E>()?, den))
}

#[derive(Serialize, Deserialize)]
struct UnitsRepr {
    hbar2: i32,
    m2: i32,
    w2: i32,
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: [IntRepr; 2],
    re_s2: [IntRepr; 2],
    im: [IntRepr; 2],
    im_s2: [IntRepr; 2],
    units: UnitsRepr,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            re: rat_repr(&self.value.re),
            re_s2: rat_repr(&self.value.re_s2),
            im: rat_repr(&self.value.im),
            im_s2: rat_repr(&self.value.im_s2),
            units: UnitsRepr {
                hbar2: self.units.hbar2,
                m2: self.units.mass2,
                w2: self.units.omega2,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        Ok(Scalar::new(
            Qi2::new(
                rat_from_repr(&r.re)?,
                rat_from_repr(&r.re_s2)?,
                rat_from_repr(&r.im)?,
                rat_from_repr(&r.im_s2)?,
            ),
            UnitMonomial::new(r.units.hbar2, r.units.m2, r.units.w2),
        ))
    }
}

impl Serialize for ScalarSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ScalarSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<Scalar>::deserialize(d)?;
        let mut out = ScalarSum::zero();
        for p in &parts {
            if out.parts.contains_key(&p.units) {
                return Err(D::Error::custom("duplicate unit monomial in scalar sum"));
            }
            out.add_scalar(p);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(re: (i64, i64), re_s2: (i64, i64), im: (i64, i64), im_s2: (i64, i64)) -> Qi2 {
        Qi2::new(rat(re.0, re.1), rat(re_s2.0, re_s2.1), rat(im.0, im.1), rat(im_s2.0, im_s2.1))
    }

    #[test]
    fn difference_of_squares() {
        let x = &Qi2::one() + &Qi2::sqrt2();
        let y = &Qi2::one() - &Qi2::sqrt2();
        assert_eq!(&x * &y, Qi2::from_int(-1));
    }

    #[test]
    fn i_squared() {
        assert_eq!(&Qi2::i() * &Qi2::i(), Qi2::from_int(-1));
        let is2 = &Qi2::i() * &Qi2::sqrt2();
        assert_eq!(&is2 * &is2, Qi2::from_int(-2));
    }

    #[test]
    fn square_of_position_prefactor() {
        // √(ħ/2mω) = (√2/2) ħ^(1/2) m^(-1/2) ω^(-1/2)
        let s = Scalar::new(Qi2::sqrt2().scale(&rat(1, 2)), UnitMonomial::new(1, -1, -1));
        let sq = &s * &s;
        assert_eq!(sq.value, Qi2::from_rational(rat(1, 2)));
        assert_eq!(sq.units, UnitMonomial::new(2, -2, -2));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Qi2::i().conj(), -&Qi2::i());
        let real = &Qi2::from_int(3) + &Qi2::sqrt2().scale(&rat(2, 1));
        assert_eq!(real.conj(), real);
        let z = &Qi2::one() + &Qi2::i();
        assert_eq!(&z * &z.conj(), Qi2::from_int(2));
    }

    #[test]
    fn inverse_of_generic_element() {
        let x = q((3, 2), (-1, 3), (5, 7), (2, 1));
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert!(Qi2::zero().inv().is_none());
    }

    #[test]
    fn scalar_sum_keeps_units_apart() {
        let mut s = ScalarSum::from(Scalar::units(1, -1, -1));
        s.add_scalar(&Scalar::units(4, 2, 2));
        assert_eq!(s.len(), 2);
        assert!(s.inv().is_none());
        let neg = -&s;
        assert!((&s + &neg).is_zero());
    }

    #[test]
    fn display_forms() {
        let s = Scalar::new(Qi2::sqrt2().scale(&rat(1, 2)), UnitMonomial::new(-1, -1, -3));
        assert_eq!(s.to_string(), "(1/2)√2 ħ^(-1/2) m^(-1/2) ω^(-3/2)");
        assert_eq!(Qi2::i().to_string(), "i");
        assert_eq!(q((1, 1), (0, 1), (0, 1), (-3, 1)).to_string(), "1 - 3i√2");
    }

    #[test]
    fn json_shape() {
        let s = Scalar::new(Qi2::from_rational(rat(-3, 4)), UnitMonomial::new(2, 0, 2));
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"re":[-3,4],"re_s2":[0,1],"im":[0,1],"im_s2":[0,1],
                               "units":{"hbar2":2,"m2":0,"w2":2}})
        );
        let back: Scalar = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_big_integers_survive() {
        let big = BigInt::from(10).pow(30u32);
        let s = Scalar::new(
            Qi2::from_rational(Rational::new(big, BigInt::from(7))),
            UnitMonomial::ONE,
        );
        let text = serde_json::to_string(&s).unwrap();
        let back: Scalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
