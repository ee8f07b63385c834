use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(
            c.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    /// `(a + s·x)^n`.
    pub fn binomial_power(a: &BigRational, s: &BigRational, n: u32) -> Self {
        let base = Self::new(vec![a.clone(), s.clone()]);
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * &base;
        }
        acc
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.leading()?.clone();
        let mut r = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let t = &r[i + dd] / &lc;
            if !t.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &t * dc;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        Some((Self::new(q), Self::new(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(lc) => a.scale(&(BigRational::one() / lc)),
            None => a,
        }
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0
    }

    /// Sturm sequence `q, q', -rem(q_{i-1}, q_i), ...` of the square-free part `q`.
    ///
    /// Working with simple roots makes the variation count valid for the
    /// half-open interval `(lo, hi]` even when an endpoint is a root.
    pub fn sturm_chain(&self) -> Result<SturmChain> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("sturm chain of the zero polynomial"));
        }
        let q = self.square_free();
        let dq = q.derivative();
        let mut seq = vec![q, dq];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Ok(SturmChain { seq })
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm sequence of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn polys(&self) -> &[UniPoly] {
        &self.seq
    }

    /// Number of sign changes at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for p in &self.seq {
            let s = sign(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// Number of distinct real roots of `poly` in `(lo, hi]`.
pub fn sturm_count(poly: &UniPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if lo >= hi {
        return Err(Error::Config(format!("empty interval ({lo}, {hi}]")));
    }
    Ok(poly.sturm_chain()?.count(lo, hi))
}

/// Number of distinct real roots of `poly` in the open interval `(lo, hi)`.
pub fn sturm_count_open(poly: &UniPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    let n = sturm_count(poly, lo, hi)?;
    Ok(if poly.eval(hi).is_zero() { n - 1 } else { n })
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}
