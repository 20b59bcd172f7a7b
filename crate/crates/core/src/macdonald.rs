//! The transform between Hilbert-scheme Poincaré polynomials and the
//! D-graded Jacobian polynomial:
//!
//! ```text
//! sum_n P_n(t) z^n = P_D(t, z) / ((1 - z)(1 - t^2 z))
//! ```
//!
//! since `sum_k z^k (1 + t^2 + ... + t^2k)` is the symmetric-power kernel of
//! `ℚ ⊕ ℚ[2]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bps::DEulerPoly;
use crate::error::{Error, Result};
use crate::graded::Slice;
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::rational::Rational;

/// `P_0(t), ..., P_N(t)` with `P_n = sum_i dim H_i(C^[n]) t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareFamily {
    #[serde(rename = "N")]
    truncation: usize,
    polys: Vec<Vec<u64>>,
}

impl PoincareFamily {
    pub fn new(polys: Vec<Vec<u64>>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::Parse("Poincaré family needs at least P_0".into()));
        }
        let polys = polys.into_iter().map(trim).collect::<Vec<_>>();
        Ok(PoincareFamily {
            truncation: polys.len() - 1,
            polys,
        })
    }

    /// Checks that the declared `N` matches the number of polynomials; used after deserializing.
    pub fn check(&self) -> Result<()> {
        if self.polys.len() != self.truncation + 1 {
            return Err(Error::Parse(format!(
                "N = {} but {} polynomials given",
                self.truncation,
                self.polys.len()
            )));
        }
        Ok(())
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn polys(&self) -> &[Vec<u64>] {
        &self.polys
    }

    pub fn poly(&self, n: usize) -> &[u64] {
        &self.polys[n]
    }

    /// `sum_n P_n(t) z^n`.
    pub fn generating_function(&self) -> LaurentPoly {
        let mut f = LaurentPoly::zero();
        for (n, p) in self.polys.iter().enumerate() {
            for (i, &c) in p.iter().enumerate() {
                f.add_term(Monomial::new(&[(Var::T, i as i32), (Var::Z, n as i32)]), c.into());
            }
        }
        f
    }

    /// Curve-like shape: `P_0 = 1` and `deg P_n <= 2n`.
    pub fn is_curve_like(&self) -> bool {
        self.polys[0] == [1] && self.polys.iter().enumerate().all(|(n, p)| p.len() <= 2 * n + 1)
    }

    /// `χ(C^[n]) = P_n(-1)` for each level.
    pub fn euler_characteristics(&self) -> Vec<i64> {
        self.polys
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
                    .sum()
            })
            .collect()
    }
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// `P_D(t, z)` with the coefficient of `t^i z^n` equal to `dim D_n H_i(J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGradedPoly {
    genus: u32,
    coeffs: BTreeMap<Slice, u64>,
}

impl DGradedPoly {
    pub fn new(genus: u32) -> Self {
        DGradedPoly {
            genus,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn set(&mut self, degree: i64, level: i64, d: u64) {
        let s = Slice::new(degree, level);
        if d == 0 {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, d);
        }
    }

    pub fn get(&self, degree: i64, level: i64) -> u64 {
        self.coeffs.get(&Slice::new(degree, level)).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Slice, u64)> + '_ {
        self.coeffs.iter().map(|(s, d)| (*s, *d))
    }

    /// Builds from a polynomial in `t` and `z`; coefficients must be non-negative integers.
    pub fn from_laurent(genus: u32, p: &LaurentPoly) -> Result<Self> {
        let mut d = DGradedPoly::new(genus);
        for (m, c) in p.terms() {
            let (i, n) = (m.exp(Var::T) as i64, m.exp(Var::Z) as i64);
            if m.exp(Var::Q) != 0 || i < 0 || n < 0 {
                return Err(Error::Parse(format!("term {m:?} is not a monomial t^i z^n")));
            }
            let v = c.to_i64().filter(|v| *v >= 0).ok_or_else(|| {
                Error::Parse(format!(
                    "coefficient {c} at (i,n) = ({i},{n}) is not a non-negative integer"
                ))
            })?;
            d.set(i, n, v as u64);
        }
        Ok(d)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (s, d) in &self.coeffs {
            p.add_term(
                Monomial::new(&[(Var::T, s.degree as i32), (Var::Z, s.level as i32)]),
                Rational::from(*d),
            );
        }
        p
    }

    /// Support within levels `[0, 2g]` and degrees `>= 0`.
    pub fn check(&self) -> Result<()> {
        for s in self.coeffs.keys() {
            if s.degree < 0 || s.level < 0 || s.level > 2 * self.genus as i64 {
                return Err(Error::NotMacdonaldFamily {
                    genus: self.genus,
                    degree: s.degree,
                    level: s.level,
                    reason: "support outside levels 0..=2g".into(),
                });
            }
        }
        Ok(())
    }

    /// `L_n = sum_i (-1)^i dim D_n H_i`.
    pub fn euler(&self) -> DEulerPoly {
        let mut coeffs = vec![0i64; 2 * self.genus as usize + 1];
        for (s, &d) in &self.coeffs {
            if let Some(slot) = usize::try_from(s.level).ok().and_then(|n| coeffs.get_mut(n)) {
                *slot += if s.degree % 2 == 0 { d as i64 } else { -(d as i64) };
            }
        }
        DEulerPoly::new(self.genus, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct DGradedPolyFile {
    genus: u32,
    coeffs: Vec<(i64, i64, u64)>,
}

impl Serialize for DGradedPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DGradedPolyFile {
            genus: self.genus,
            coeffs: self.coeffs.iter().map(|(s, d)| (s.degree, s.level, *d)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DGradedPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = DGradedPolyFile::deserialize(deserializer)?;
        let mut d = DGradedPoly::new(file.genus);
        for (i, n, c) in file.coeffs {
            let s = Slice::new(i, n);
            if d.coeffs.insert(s, c).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate entry for (i,n) = {s}")));
            }
            if c == 0 {
                d.coeffs.remove(&s);
            }
        }
        Ok(d)
    }
}

/// The Sym kernel `(1 - z)(1 - t^2 z)`.
pub fn sym_kernel_denominator() -> LaurentPoly {
    let one = LaurentPoly::one();
    let z = LaurentPoly::var(Var::Z);
    let t2z = LaurentPoly::term(1, &[(Var::T, 2), (Var::Z, 1)]);
    &(&one - &z) * &(&one - &t2z)
}

/// `P_n(t)` = coefficient of `z^n` in `P_D / ((1 - z)(1 - t^2 z))`, for `n <= N`.
pub fn hilb_from_d(d: &DGradedPoly, truncation: usize) -> Result<PoincareFamily> {
    d.check()?;
    let series = LaurentPoly::series_quotient(&d.to_laurent(), &sym_kernel_denominator(), Var::Z, truncation as i32)?;
    let mut polys = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let p = series.coefficient_of(Var::Z, n as i32);
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let i = m.exp(Var::T) as usize;
            let v = c
                .to_i64()
                .filter(|v| *v >= 0)
                .ok_or_else(|| Error::Overflow(format!("coefficient {c} of t^{i} z^{n}")))?;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, 0);
            }
            coeffs[i] = v as u64;
        }
        polys.push(coeffs);
    }
    PoincareFamily::new(polys)
}

/// Inverts [`hilb_from_d`]: `P_D = (sum P_n z^n)(1 - z)(1 - t^2 z)` through `z^N`.
///
/// Fails unless every coefficient is a non-negative integer and the levels
/// above `2g` vanish identically. The first violation in level-major order
/// is reported.
pub fn d_from_hilb(p: &PoincareFamily, genus: u32) -> Result<DGradedPoly> {
    let top = p.truncation() as i64;
    if top < 2 * genus as i64 {
        return Err(Error::InsufficientTruncation {
            needed: 2 * genus as i64,
            have: top,
        });
    }
    let product = p
        .generating_function()
        .mul_truncated(&sym_kernel_denominator(), Var::Z, top as i32);
    let mut terms: Vec<(Slice, Rational)> = product
        .terms()
        .map(|(m, c)| (Slice::new(m.exp(Var::T) as i64, m.exp(Var::Z) as i64), c.clone()))
        .collect();
    terms.sort_by_key(|(s, _)| *s);

    let mut d = DGradedPoly::new(genus);
    for (s, c) in terms {
        let violation = |reason: String| Error::NotMacdonaldFamily {
            genus,
            degree: s.degree,
            level: s.level,
            reason,
        };
        if s.level > 2 * genus as i64 {
            return Err(violation(format!(
                "nonzero coefficient {c} above level 2g = {}",
                2 * genus
            )));
        }
        match c.to_i64() {
            Some(v) if v >= 0 => d.set(s.degree, s.level, v as u64),
            _ => return Err(violation(format!("coefficient {c} is not a non-negative integer"))),
        }
    }
    Ok(d)
}

/// Refined symmetry `D_n H^k ≅ D_(2g-n) H^(k+2g-2n)`, read directly on the stored `(k, n)` table.
pub fn check_duality(d: &DGradedPoly) -> bool {
    let g = d.genus() as i64;
    d.coeffs().all(|(s, c)| {
        let partner = Slice::new(s.degree + 2 * g - 2 * s.level, 2 * g - s.level);
        d.get(partner.degree, partner.level) == c
    })
}
