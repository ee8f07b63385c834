//! Exact algebra behind the sign conditions.
//!
//! `R` and `P` are polynomials in `z` and `ν = (1-z)^{b-1}` with coefficients
//! polynomial in `b`. Treating `ν` as an independent variable, the resultant
//! with respect to `ν` of a function and its derivative is a polynomial in
//! `(z, b)` whose zero set contains every common root. For a fixed rational `b`
//! a Sturm count on `(0,1)` then certifies that no common root exists there.

pub mod poly;
pub mod resultant;
pub mod univariate;

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use poly::{int, rat, rat_to_f64, ExactPoly, Monomial};
pub use resultant::resultant_nu;
pub use univariate::{sturm_count, sturm_count_open, SturmChain, UniPoly};

use crate::error::{Error, Result};

fn z() -> ExactPoly {
    ExactPoly::z()
}
fn nu() -> ExactPoly {
    ExactPoly::nu()
}
fn b() -> ExactPoly {
    ExactPoly::b()
}
fn k(c: i64) -> ExactPoly {
    ExactPoly::int(c)
}

/// `R = ν((b-1)z² + (3-b)z - 2) - (b+1)z + 2`.
pub fn poly_r() -> ExactPoly {
    let bm1 = &b() - &k(1);
    let inner = &(&(&bm1 * &z().pow(2)) + &(&(&k(3) - &b()) * &z())) - &k(2);
    &(&(&nu() * &inner) - &(&(&b() + &k(1)) * &z())) + &k(2)
}

/// `R' = (b+1)ν((b-1)z + 1) - (b+1)`.
pub fn poly_rp() -> ExactPoly {
    let bp1 = &b() + &k(1);
    let inner = &(&(&b() - &k(1)) * &z()) + &k(1);
    &(&(&bp1 * &nu()) * &inner) - &bp1
}

/// `P` as a quadratic in `ν`.
pub fn poly_p() -> ExactPoly {
    let bm1 = &b() - &k(1);
    let bm1sq = bm1.pow(2);
    let z2 = z().pow(2);
    // 2(b-1)^2 z^2 - 2(b^2-5b+2) z - 6b + 2
    let b2 = b().pow(2);
    let c2 = &(&(&(&k(2) * &bm1sq) * &z2)
        - &(&(&k(2) * &(&(&b2 - &(&k(5) * &b())) + &k(2))) * &z()))
        + &(&k(2) - &(&k(6) * &b()));
    // 2b(b-1)^2 z^2 - 4(3b-1) z + 12b - 4
    let c1 = &(&(&(&(&k(2) * &b()) * &bm1sq) * &z2)
        - &(&(&k(4) * &(&(&k(3) * &b()) - &k(1))) * &z()))
        + &(&(&k(12) * &b()) - &k(4));
    // 2b(b+1) z - 6b + 2
    let c0 = &(&(&(&k(2) * &b()) * &(&b() + &k(1))) * &z()) + &(&k(2) - &(&k(6) * &b()));
    &(&(&c2 * &nu().pow(2)) + &(&c1 * &nu())) + &c0
}

/// `(1-z)P'` as a quadratic in `ν`.
pub fn poly_pp_scaled() -> ExactPoly {
    let bm1sq = (&b() - &k(1)).pow(2);
    let z2 = z().pow(2);
    let b2 = b().pow(2);
    let b3 = b().pow(3);
    // -4b(b-1)^2 z^2 + 2b(2b^2-9b+5) z + 10b^2 - 6b
    let c2 = &(&(&(&(&k(-4) * &b()) * &bm1sq) * &z2)
        + &(&(&(&k(2) * &b()) * &(&(&(&k(2) * &b2) - &(&k(9) * &b())) + &k(5))) * &z()))
        + &(&(&k(10) * &b2) - &(&k(6) * &b()));
    // -2b(b+1)(b-1)^2 z^2 + 4b^2(b+1) z - 12b^2 + 4b
    let c1 = &(&(&(&(&(&k(-2) * &b()) * &(&b() + &k(1))) * &bm1sq) * &z2)
        + &(&(&k(4) * &(&b3 + &b2)) * &z()))
        + &(&(&k(-12) * &b2) + &(&k(4) * &b()));
    // -2b(b+1) z + 2b(b+1)
    let bb1 = &(&k(2) * &b()) * &(&b() + &k(1));
    let c0 = &bb1 - &(&bb1 * &z());
    &(&(&c2 * &nu().pow(2)) + &(&c1 * &nu())) + &c0
}

/// `l(z) = (b-1)^3 z^2 + (-12b+4) z + (12b-4)`.
pub fn poly_l() -> ExactPoly {
    let t = &(&k(12) * &b()) - &k(4);
    &(&(&(&b() - &k(1)).pow(3) * &z().pow(2)) - &(&t * &z())) + &t
}

/// `b(b+1)(b-1) z^2`.
pub fn expected_r_eliminant() -> ExactPoly {
    &(&(&b() * &(&b() + &k(1))) * &(&b() - &k(1))) * &z().pow(2)
}

fn r_eliminant() -> &'static ExactPoly {
    static CELL: OnceLock<ExactPoly> = OnceLock::new();
    CELL.get_or_init(|| resultant_nu(&poly_r(), &poly_rp()).expect("R pair has positive ν-degree"))
}

fn p_eliminant() -> &'static ExactPoly {
    static CELL: OnceLock<ExactPoly> = OnceLock::new();
    CELL.get_or_init(|| {
        resultant_nu(&poly_p(), &poly_pp_scaled()).expect("P pair has positive ν-degree")
    })
}

/// Which function/derivative pair an eliminant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "R-pair")]
    R,
    #[serde(rename = "P-pair")]
    P,
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::R => "R-pair",
            Pair::P => "P-pair",
        })
    }
}

impl Pair {
    pub fn eliminant(self) -> &'static ExactPoly {
        match self {
            Pair::R => r_eliminant(),
            Pair::P => p_eliminant(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Structure of `Res_ν(P, (1-z)P')`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorReport {
    pub resultant: String,
    pub z_power: u32,
    pub quotient: String,
    pub l_divides: bool,
    pub cofactor: Option<String>,
    /// Cofactor at `b = 2` evaluated at `z = 1/4, 1/2, 3/4`.
    pub cofactor_at_b2: Vec<String>,
}

/// Divide out `z^e`, the maximal power of `z`.
fn strip_z(p: &ExactPoly) -> (u32, ExactPoly) {
    let e = p.z_valuation().unwrap_or(0);
    let q = ExactPoly::from_terms(
        p.terms()
            .map(|(m, c)| (Monomial::new(m.z - e, m.nu, m.b), c.clone())),
    );
    (e, q)
}

/// Factor the cofactor of `z^e · l(z)` out of the P-pair eliminant.
pub fn p_eliminant_factors() -> (u32, ExactPoly, Option<ExactPoly>) {
    let (e, q) = strip_z(p_eliminant());
    let cof = q.div_exact(&poly_l());
    (e, q, cof)
}

pub fn eliminant_p_report() -> FactorReport {
    let (z_power, quotient, cofactor) = p_eliminant_factors();
    let cofactor_at_b2 = cofactor
        .as_ref()
        .map(|c| {
            let c2 = c.subst_b(&int(2));
            [rat(1, 4), rat(1, 2), rat(3, 4)]
                .iter()
                .map(|zv| c2.eval(zv, &BigRational::zero(), &BigRational::zero()).to_string())
                .collect()
        })
        .unwrap_or_default();
    FactorReport {
        resultant: p_eliminant().to_string(),
        z_power,
        quotient: quotient.to_string(),
        l_divides: cofactor.is_some(),
        cofactor: cofactor.map(|c| c.to_string()),
        cofactor_at_b2,
    }
}

/// Certificate that a pair has no common root on `(0,1)` at a rational `b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub pair: Pair,
    pub b: String,
    /// Eliminant coefficients in `z`, lowest degree first.
    pub eliminant: Vec<String>,
    pub root_count: usize,
    pub verdict: Verdict,
}

pub fn certify_no_common_roots(pair: Pair, b: &BigRational) -> Result<CertificateReport> {
    if b <= &BigRational::one() {
        return Err(Error::ParameterDomain {
            name: "b",
            value: rat_to_f64(b),
            bound: "b > 1".into(),
        });
    }
    certify_eliminant(pair, pair.eliminant(), b)
}

/// Certificate for an arbitrary eliminant; used for negative controls.
pub fn certify_eliminant(
    pair: Pair,
    eliminant: &ExactPoly,
    b: &BigRational,
) -> Result<CertificateReport> {
    let e = eliminant
        .subst_b(b)
        .to_univariate_z()
        .ok_or(Error::Degenerate("eliminant still depends on ν"))?;
    if e.is_zero() {
        return Err(Error::ZeroPolynomial("eliminant vanishes identically at this b"));
    }
    let root_count = sturm_count_open(&e, &BigRational::zero(), &BigRational::one())?;
    Ok(CertificateReport {
        pair,
        b: b.to_string(),
        eliminant: e.coeffs().iter().map(|c| c.to_string()).collect(),
        root_count,
        verdict: Verdict::from_bool(root_count == 0),
    })
}

/// Per-`b` result of expanding the sign combinations from `A, B, f`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub b: i64,
    /// `(H2 combination) - R` after substituting `ν = (1-z)^{b-1}`.
    pub r_difference: String,
    /// `(H1 combination) - P` after the same substitution.
    pub p_difference: String,
    /// `(1-z) d/dz (H1 combination) - (1-z)P'`.
    pub pp_difference: String,
    pub r_expanded: String,
    pub p_expanded: String,
    pub r_at_one: String,
    pub p_at_one: String,
    pub r_z3: String,
    pub p_z4: String,
    pub taylor_ok: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub entries: Vec<IdentityEntry>,
    pub verdict: Verdict,
}

/// `A, B, f` as exact polynomials in `z` for integer `b ≥ 2`.
pub fn kernel_polys(b: i64) -> (UniPoly, UniPoly, UniPoly) {
    let one = BigRational::one();
    let neg = -BigRational::one();
    let nu = UniPoly::binomial_power(&one, &neg, (b - 1) as u32);
    let nu_b = UniPoly::binomial_power(&one, &neg, b as u32);
    let zp = UniPoly::from_ints(&[0, 1]);
    let two = UniPoly::from_ints(&[2]);
    let a = &(&nu.scale(&int(2)) + &(&zp * &nu).scale(&int(2 * (b - 1)))) - &two;
    let bb = &a + &(&zp * &(&zp * &nu)).scale(&int(b * (b - 1)));
    let f = &(&(&two - &nu_b.scale(&int(2))) - &zp.scale(&int(b + 1)))
        - &(&zp * &nu_b).scale(&int(b - 1));
    (a, bb, f)
}

/// The two sign combinations expanded exactly for integer `b`: `(H2, H1)`.
pub fn sign_combinations(b: i64) -> (UniPoly, UniPoly) {
    let (a, bb, f) = kernel_polys(b);
    let zp = UniPoly::from_ints(&[0, 1]);
    let omz = UniPoly::from_ints(&[1, -1]);
    let half = rat(1, 2);
    let bp = bb.derivative();
    let h2 = &(&(&(&zp * &omz) * &bp).scale(&half) + &(&zp * &bb).scale(&rat(b - 1, 2)))
        - &(&omz * &bb);
    let ap = a.derivative();
    let fp = f.derivative();
    let h1 = &(&(&(&omz * &ap) * &f).scale(&int(2)) + &(&a * &f).scale(&int(b - 1)))
        - &(&(&omz * &a) * &fp);
    (h2, h1)
}

pub fn verify_identity_expansions() -> IdentityReport {
    verify_identity_expansions_with(&poly_r(), &poly_p(), &poly_pp_scaled(), &[2, 3, 4, 5])
}

pub fn verify_identity_expansions_with(
    r: &ExactPoly,
    p: &ExactPoly,
    pp_scaled: &ExactPoly,
    bs: &[i64],
) -> IdentityReport {
    let one = BigRational::one();
    let entries: Vec<IdentityEntry> = bs
        .iter()
        .map(|&bi| {
            let bq = int(bi);
            let nu = UniPoly::binomial_power(&one, &(-one.clone()), (bi - 1) as u32);
            let (h2, h1) = sign_combinations(bi);
            let omz = UniPoly::from_ints(&[1, -1]);
            let h1p = &omz * &h1.derivative();
            let sub = |q: &ExactPoly| q.subst_b(&bq).subst_nu(&nu).expect("b substituted");
            let rd = &h2 - &sub(r);
            let pd = &h1 - &sub(p);
            let ppd = &h1p - &sub(pp_scaled);
            let r_z3_expected = int(bi) * int(1 - bi) * int(1 + bi) / int(6);
            let p_z4_expected = int(bi * bi * (bi + 1) * (bi - 1) * (bi - 1)) / int(6);
            let taylor_ok = h2.valuation() == Some(3)
                && h2.coeff(3) == r_z3_expected
                && h1.valuation() == Some(4)
                && h1.coeff(4) == p_z4_expected
                && h2.eval(&one) == int(1 - bi)
                && h1.eval(&one) == int(2 * (bi - 1) * (bi - 1));
            let ok = rd.is_zero() && pd.is_zero() && ppd.is_zero() && taylor_ok;
            IdentityEntry {
                b: bi,
                r_difference: ExactPoly::from_univariate_z(&rd).to_string(),
                p_difference: ExactPoly::from_univariate_z(&pd).to_string(),
                pp_difference: ExactPoly::from_univariate_z(&ppd).to_string(),
                r_expanded: ExactPoly::from_univariate_z(&h2).to_string(),
                p_expanded: ExactPoly::from_univariate_z(&h1).to_string(),
                r_at_one: h2.eval(&one).to_string(),
                p_at_one: h1.eval(&one).to_string(),
                r_z3: h2.coeff(3).to_string(),
                p_z4: h1.coeff(4).to_string(),
                taylor_ok,
                verdict: Verdict::from_bool(ok),
            }
        })
        .collect();
    let verdict = Verdict::from_bool(entries.iter().all(|e| e.verdict.passed()));
    IdentityReport { entries, verdict }
}

/// Parse `"3/2"`, `"2"` or `"2.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<BigRational>() {
        return Ok(r);
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: num_bigint::BigInt = digits
            .parse()
            .map_err(|_| Error::Config(format!("not a rational: {s}")))?;
        let d = num_bigint::BigInt::from(10u32).pow(fp.len() as u32);
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Err(Error::Config(format!("not a rational: {s}")))
}

/// Sign of an exact rational as `-1, 0, 1`.
pub fn signum(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
