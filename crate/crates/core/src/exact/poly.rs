use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::univariate::UniPoly;

/// Exponents of `z^i ν^j b^k`.
///
/// Field order gives the lexicographic order `z > ν > b` used for division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub z: u32,
    pub nu: u32,
    pub b: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { z: 0, nu: 0, b: 0 };

    pub fn new(z: u32, nu: u32, b: u32) -> Self {
        Self { z, nu, b }
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.z + o.z, self.nu + o.nu, self.b + o.b)
    }

    fn divides(self, o: Self) -> bool {
        self.z <= o.z && self.nu <= o.nu && self.b <= o.b
    }

    fn quot(self, o: Self) -> Self {
        Self::new(self.z - o.z, self.nu - o.nu, self.b - o.b)
    }
}

/// Sparse polynomial in `z`, `ν` and `b` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ExactPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn z() -> Self {
        Self::term(BigRational::one(), Monomial::new(1, 0, 0))
    }

    pub fn nu() -> Self {
        Self::term(BigRational::one(), Monomial::new(0, 1, 0))
    }

    pub fn b() -> Self {
        Self::term(BigRational::one(), Monomial::new(0, 0, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn deg_z(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.z).max()
    }

    pub fn deg_nu(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.nu).max()
    }

    pub fn deg_b(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.b).max()
    }

    /// Largest `e` such that `z^e` divides the polynomial.
    pub fn z_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.z).min()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient of `ν^j`, a polynomial in `(z, b)`.
    pub fn coeff_nu(&self, j: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.nu == j)
                .map(|(m, c)| (Monomial::new(m.z, 0, m.b), c.clone())),
        )
    }

    /// Coefficient of `z^i ν^j` viewed as a univariate polynomial in `b`.
    pub fn b_coefficient(&self, z: u32, nu: u32) -> UniPoly {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.z == z && m.nu == nu {
                let k = m.b as usize;
                if coeffs.len() <= k {
                    coeffs.resize(k + 1, BigRational::zero());
                }
                coeffs[k] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, z: &BigRational, nu: &BigRational, b: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * pow_rat(z, m.z) * pow_rat(nu, m.nu) * pow_rat(b, m.b);
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, z: f64, nu: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                rat_to_f64(c) * z.powi(m.z as i32) * nu.powi(m.nu as i32) * b.powi(m.b as i32)
            })
            .sum()
    }

    /// Substitute a rational value for `b`.
    pub fn subst_b(&self, b: &BigRational) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.z, m.nu, 0), c * pow_rat(b, m.b))),
        )
    }

    /// Substitute a polynomial in `z` for `ν`. Requires a `b`-free input.
    pub fn subst_nu(&self, nu: &UniPoly) -> Option<UniPoly> {
        let mut acc = UniPoly::zero();
        let mut powers = vec![UniPoly::one()];
        for (m, c) in &self.terms {
            if m.b != 0 {
                return None;
            }
            while powers.len() <= m.nu as usize {
                let next = powers.last().unwrap() * nu;
                powers.push(next);
            }
            let t = powers[m.nu as usize].shift(m.z as usize).scale(c);
            acc = &acc + &t;
        }
        Some(acc)
    }

    /// View a polynomial in `z` alone as a univariate polynomial.
    pub fn to_univariate_z(&self) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.nu != 0 || m.b != 0 {
                return None;
            }
            let k = m.z as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_univariate_z(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::new(i as u32, 0, 0), c.clone())),
        )
    }

    /// Multivariate division in lex order `z > ν > b`: `self = q·d + r`.
    ///
    /// For a single divisor the remainder is zero exactly when `d` divides `self`.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let (lm, lc) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        let mut f = self.clone();
        let mut q = Self::zero();
        let mut r = Self::zero();
        while let Some((fm, fc)) = f.leading().map(|(m, c)| (*m, c.clone())) {
            if lm.divides(fm) {
                let t = Self::term(&fc / &lc, fm.quot(lm));
                f = &f - &(&t * d);
                q = &q + &t;
            } else {
                f.terms.remove(&fm);
                r.add_term(fm, fc);
            }
        }
        Some((q, r))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn derivative_z(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(m, _)| m.z > 0).map(|(m, c)| {
            (
                Monomial::new(m.z - 1, m.nu, m.b),
                c * BigRational::from_integer(BigInt::from(m.z)),
            )
        }))
    }

    fn zip_with(&self, o: &Self, sign: i8) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            let c = if sign < 0 { -c.clone() } else { c.clone() };
            p.add_term(*m, c);
        }
        p
    }
}

pub(crate) fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, o: &ExactPoly) -> ExactPoly {
        self.zip_with(o, 1)
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, o: &ExactPoly) -> ExactPoly {
        self.zip_with(o, -1)
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, o: &ExactPoly) -> ExactPoly {
        let mut p = ExactPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        p
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ExactPoly {
            type Output = ExactPoly;
            fn $f(self, o: ExactPoly) -> ExactPoly {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *m == Monomial::ONE {
                factors.push(if mag.is_integer() {
                    mag.to_string()
                } else {
                    format!("({mag})")
                });
            }
            for (name, e) in [("z", m.z), ("nu", m.nu), ("b", m.b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_zero() {
        let p = &ExactPoly::z() - &ExactPoly::z();
        assert!(p.is_zero());
        assert_eq!(p, ExactPoly::zero());
    }

    #[test]
    fn division_exact_and_remainder() {
        let z = ExactPoly::z();
        let b = ExactPoly::b();
        let one = ExactPoly::one();
        let d = &(&z * &b) - &one;
        let q = &(&z * &z) + &b;
        let prod = &d * &q;
        assert_eq!(prod.div_exact(&d).unwrap(), q);
        let (_, r) = (&prod + &one).div_rem(&d).unwrap();
        assert_eq!(r, one);
        assert!((&prod + &ExactPoly::one()).div_exact(&d).is_none());
    }

    #[test]
    fn display_readable() {
        let p = &(&ExactPoly::z() * &ExactPoly::int(3)) - &ExactPoly::constant(rat(1, 2));
        assert_eq!(p.to_string(), "3*z - (1/2)");
    }
}
