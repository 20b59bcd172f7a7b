//! BPS numbers of a single curve from its Hilbert-scheme Euler series.
//!
//! With `Z(q) = sum χ(C^[n]) q^n`, arithmetic genus `g` and geometric genus `g̃`,
//! the integers `n_h` are defined by
//!
//! ```text
//! Z(q) = sum_{h = g̃}^{g} n_h q^(g-h) (1 - q)^(2h-2)
//! ```
//!
//! and `n'_h` by expanding `q^-g L(q)` in powers of `s = q^-1 - 2 + q`, where
//! `L = (1 - q)^2 Z` is the Euler specialization of the D-graded polynomial.
//! [`ng_from_z`] matches the series directly by an exact linear solve;
//! [`ng_prime_from_l`] eliminates on leading Laurent degree. The two must agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::matrix::RationalMatrix;
use crate::rational::Rational;

/// Coefficients `c_0..c_N` of `Z(q)` with genus metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerSeries {
    pub coeffs: Vec<i64>,
    #[serde(rename = "g")]
    pub genus: u32,
    #[serde(rename = "g_tilde")]
    pub geometric_genus: Option<u32>,
}

impl EulerSeries {
    pub fn new(coeffs: Vec<i64>, genus: u32, geometric_genus: Option<u32>) -> Self {
        EulerSeries {
            coeffs,
            genus,
            geometric_genus,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(Var::Q, &self.coeffs)
    }

    fn require_truncation(&self) -> Result<()> {
        let needed = 2 * self.genus as i64;
        if self.coeffs.is_empty() || (self.truncation() as i64) < needed {
            return Err(Error::InsufficientTruncation {
                needed,
                have: self.coeffs.len() as i64 - 1,
            });
        }
        Ok(())
    }
}

/// `L_0..L_2g` with `L(q) = sum χ(D_n H^*(J)) q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DEulerPoly {
    genus: u32,
    coeffs: Vec<i64>,
}

impl DEulerPoly {
    /// Pads or checks `coeffs` to exactly `2g + 1` entries.
    pub fn new(genus: u32, mut coeffs: Vec<i64>) -> Self {
        let len = 2 * genus as usize + 1;
        assert!(
            coeffs.iter().skip(len).all(|&c| c == 0),
            "support of L must lie in [0, 2g]"
        );
        coeffs.resize(len, 0);
        DEulerPoly { genus, coeffs }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_coeffs(Var::Q, &self.coeffs)
    }
}

/// `n_0..n_g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpsVector {
    pub n: Vec<i64>,
}

impl BpsVector {
    pub fn genus(&self) -> usize {
        self.n.len().saturating_sub(1)
    }

    /// Smallest `h` with `n_h != 0`.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.n.iter().position(|&x| x != 0)
    }
}

fn to_i64(c: &Rational, what: impl FnOnce() -> String) -> Result<i64> {
    c.to_i64().ok_or_else(|| Error::Overflow(what()))
}

/// `L = (1 - q)^2 Z` through `q^N`; the coefficients above `2g` must vanish.
pub fn d_euler_from_z(z: &EulerSeries) -> Result<DEulerPoly> {
    z.require_truncation()?;
    let top = z.truncation() as i32;
    let l = z
        .to_laurent()
        .mul_truncated(&LaurentPoly::from_coeffs(Var::Q, &[1, -2, 1]), Var::Q, top);
    let mut coeffs = Vec::with_capacity(top as usize + 1);
    for k in 0..=top {
        let c = l.coefficient_of(Var::Q, k).coeff(&Monomial::ONE);
        coeffs.push(to_i64(&c, || format!("L coefficient at q^{k}"))?);
    }
    let len = 2 * z.genus as usize + 1;
    if let Some((degree, &value)) = coeffs.iter().enumerate().skip(len).find(|(_, &c)| c != 0) {
        return Err(Error::GenusInconsistent {
            genus: z.genus,
            degree,
            value,
        });
    }
    coeffs.truncate(len);
    Ok(DEulerPoly::new(z.genus, coeffs))
}

/// `L_k = L_(2g-k)`, i.e. `q^-g L` is invariant under `q -> 1/q`.
pub fn check_q_symmetry(l: &DEulerPoly) -> bool {
    let c = &l.coeffs;
    c.iter().eq(c.iter().rev())
}

/// First `N + 1` coefficients of `q^(g-h) (1 - q)^(2h-2)`.
fn basis_series(g: u32, h: u32, top: usize) -> Result<Vec<Rational>> {
    let one_minus_q = LaurentPoly::from_coeffs(Var::Q, &[1, -1]);
    let shift = LaurentPoly::term(1, &[(Var::Q, (g - h) as i32)]);
    let series = if h >= 1 {
        (&shift * &one_minus_q.pow(2 * h - 2)).truncate(Var::Q, top as i32)
    } else {
        LaurentPoly::series_quotient(&shift, &one_minus_q.pow(2), Var::Q, top as i32)?
    };
    Ok((0..=top)
        .map(|k| series.coefficient_of(Var::Q, k as i32).coeff(&Monomial::ONE))
        .collect())
}

/// Solves `Z = sum_h n_h q^(g-h) (1 - q)^(2h-2)` exactly, for `h` from `g̃`
/// (or 0 when undeclared) to `g`. The system has `N + 1 > g + 1` equations.
pub fn ng_from_z(z: &EulerSeries) -> Result<BpsVector> {
    z.require_truncation()?;
    let g = z.genus;
    let lo = z.geometric_genus.unwrap_or(0);
    if lo > g {
        return Err(Error::NotBpsRational(format!(
            "geometric genus {lo} exceeds arithmetic genus {g}"
        )));
    }
    let top = z.truncation();
    let columns = (lo..=g).map(|h| basis_series(g, h, top)).collect::<Result<Vec<_>>>()?;
    let a = RationalMatrix::from_columns(&columns, top + 1)?;
    let rhs: Vec<Rational> = z.coeffs.iter().map(|&c| c.into()).collect();
    let sol = a.solve(&rhs)?;
    let x = sol.solution.ok_or_else(|| {
        Error::NotBpsRational(format!("no n_h for h in {lo}..={g} matches the series through q^{top}"))
    })?;

    let mut n = vec![0i64; g as usize + 1];
    for (offset, value) in x.iter().enumerate() {
        let h = lo + offset as u32;
        if !value.is_integer() {
            return Err(Error::IntegralityViolated {
                genus: h,
                value: value.to_string(),
            });
        }
        n[h as usize] = to_i64(value, || format!("n_{h}"))?;
    }
    Ok(BpsVector { n })
}

/// Expands `q^-g L` in powers of `s = q^-1 - 2 + q` by peeling off the
/// leading Laurent degree. Refuses asymmetric input.
pub fn ng_prime_from_l(l: &DEulerPoly) -> Result<BpsVector> {
    if !check_q_symmetry(l) {
        return Err(Error::Asymmetric(l.genus));
    }
    let g = l.genus as i32;
    let s = LaurentPoly::from_coeffs(Var::Q, &[1, -2, 1]).shift(Var::Q, -1);
    let mut rest = l.to_laurent().shift(Var::Q, -g);
    let mut n = vec![0i64; g as usize + 1];
    for h in (0..=g).rev() {
        let c = rest.coefficient_of(Var::Q, h).coeff(&Monomial::ONE);
        if c.is_zero() {
            continue;
        }
        rest = &rest - &s.pow(h as u32).scale(&c);
        n[h as usize] = to_i64(&c, || format!("n'_{h}"))?;
    }
    debug_assert!(rest.is_zero(), "symmetric input leaves no remainder");
    Ok(BpsVector { n })
}

/// Componentwise equality over the same genus range.
pub fn compare_bps(a: &BpsVector, b: &BpsVector) -> bool {
    a.n == b.n
}

/// Outcome of one named check in a BPS pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BpsReport {
    pub genus: u32,
    pub geometric_genus: Option<u32>,
    pub l: Option<DEulerPoly>,
    pub ng: Option<BpsVector>,
    pub ng_prime: Option<BpsVector>,
    pub checks: Vec<Check>,
}

impl BpsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const CHECK_TRUNCATION: &str = "truncation";
pub const CHECK_GENUS_TAIL: &str = "genus-tail";
pub const CHECK_SYMMETRY: &str = "q-symmetry";
pub const CHECK_RATIONALITY: &str = "bps-rationality";
pub const CHECK_INTEGRALITY: &str = "integrality";
pub const CHECK_AGREEMENT: &str = "ng-equals-ng-prime";
pub const CHECK_EVALUATION: &str = "evaluation-identity";
pub const CHECK_LEADING: &str = "leading-normalization";

/// Runs the full Euler-level pipeline, recording every check by name.
/// Insufficient truncation stops the run; other failures are collected.
pub fn analyze(z: &EulerSeries) -> BpsReport {
    let mut report = BpsReport {
        genus: z.genus,
        geometric_genus: z.geometric_genus,
        l: None,
        ng: None,
        ng_prime: None,
        checks: Vec::new(),
    };
    if let Err(e) = z.require_truncation() {
        report.checks.push(Check::new(CHECK_TRUNCATION, false, e.to_string()));
        return report;
    }
    report.checks.push(Check::new(
        CHECK_TRUNCATION,
        true,
        format!("N = {} >= 2g = {}", z.truncation(), 2 * z.genus),
    ));

    match d_euler_from_z(z) {
        Ok(l) => {
            let sym = check_q_symmetry(&l);
            report
                .checks
                .push(Check::new(CHECK_GENUS_TAIL, true, "coefficients above 2g vanish"));
            report.checks.push(Check::new(
                CHECK_SYMMETRY,
                sym,
                if sym {
                    "L_k = L_(2g-k)"
                } else {
                    "L is not invariant under q -> 1/q"
                },
            ));
            if sym {
                match ng_prime_from_l(&l) {
                    Ok(v) => report.ng_prime = Some(v),
                    Err(e) => report.checks.push(Check::new(CHECK_SYMMETRY, false, e.to_string())),
                }
            }
            report.l = Some(l);
        }
        Err(e) => report.checks.push(Check::new(CHECK_GENUS_TAIL, false, e.to_string())),
    }

    match ng_from_z(z) {
        Ok(v) => {
            report
                .checks
                .push(Check::new(CHECK_RATIONALITY, true, "exact solve consistent"));
            report
                .checks
                .push(Check::new(CHECK_INTEGRALITY, true, "all n_h integers"));
            report.ng = Some(v);
        }
        Err(e @ Error::IntegralityViolated { .. }) => {
            report
                .checks
                .push(Check::new(CHECK_RATIONALITY, true, "exact solve consistent"));
            report.checks.push(Check::new(CHECK_INTEGRALITY, false, e.to_string()));
        }
        Err(e) => report.checks.push(Check::new(CHECK_RATIONALITY, false, e.to_string())),
    }

    if let (Some(a), Some(b)) = (&report.ng, &report.ng_prime) {
        let eq = compare_bps(a, b);
        report.checks.push(Check::new(
            CHECK_AGREEMENT,
            eq,
            format!("n = {:?}, n' = {:?}", a.n, b.n),
        ));
    }
    if let (Some(l), Some(b)) = (&report.l, &report.ng_prime) {
        let total: i64 = l.coeffs.iter().sum();
        report.checks.push(Check::new(
            CHECK_EVALUATION,
            total == b.n[0],
            format!("L(1) = {total}, n'_0 = {}", b.n[0]),
        ));
    }
    if let Some(a) = &report.ng {
        if z.coeffs.first() == Some(&1) {
            let top = a.n[z.genus as usize];
            report
                .checks
                .push(Check::new(CHECK_LEADING, top == 1, format!("n_{} = {top}", z.genus)));
        }
    }
    report
}
