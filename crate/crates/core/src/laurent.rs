//! Sparse Laurent polynomials in the variables `t`, `z`, `q` over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    Z,
    Q,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::T, Var::Z, Var::Q];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::Z => "z",
            Var::Q => "q",
        }
    }
}

/// Exponent vector indexed by [`Var`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([i32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 3]);

    pub fn new(exps: &[(Var, i32)]) -> Self {
        let mut m = Monomial::ONE;
        for &(v, e) in exps {
            m.0[v.index()] += e;
        }
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        self.0[v.index()] = e;
        self
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        LaurentPoly::monomial(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        LaurentPoly::monomial(1, Monomial::new(&[(v, 1)]))
    }

    pub fn monomial(c: impl Into<Rational>, m: Monomial) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c.into());
        p
    }

    /// `c * prod(v^e)`.
    pub fn term(c: impl Into<Rational>, exps: &[(Var, i32)]) -> Self {
        LaurentPoly::monomial(c, Monomial::new(exps))
    }

    /// Univariate polynomial `sum_k coeffs[k] * v^k`.
    pub fn from_coeffs<C: Into<Rational> + Clone>(v: Var, coeffs: &[C]) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::new(&[(v, k as i32)]), c.clone().into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Variables that occur with a nonzero exponent in some term, in `t, z, q` order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.terms.keys().any(|m| m.exp(v) != 0))
            .collect()
    }

    /// `(min, max)` exponent of `v`, or `None` for the zero polynomial.
    pub fn degree_bounds(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: i32) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Drops every term whose `v`-exponent exceeds `max`.
    pub fn truncate(&self, v: Var, max: i32) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) <= max)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Substitutes the scalar `value` for `v`.
    pub fn substitute(&self, v: Var, value: &Rational) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                value.recip().pow((-e) as u32)
            };
            out.add_term(m.with_exp(v, 0), c * &factor);
        }
        out
    }

    /// Renames `from` to `to`. The target variable must not already occur.
    pub fn rename(&self, from: Var, to: Var) -> LaurentPoly {
        debug_assert!(from == to || self.terms.keys().all(|m| m.exp(to) == 0));
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let e = m.exp(from);
                    (m.with_exp(from, 0).with_exp(to, e), c.clone())
                })
                .collect(),
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, v: Var, k: i32) -> LaurentPoly {
        let sh = Monomial::new(&[(v, k)]);
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(sh), c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> LaurentPoly {
        if s.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Product with every term of `v`-degree above `max` discarded.
    pub fn mul_truncated(&self, other: &LaurentPoly, v: Var, max: i32) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(*mb);
                if m.exp(v) <= max {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Power series quotient `num / den` in `v`, exact through `v^order`.
    ///
    /// The lowest `v`-coefficient of `den` must be a nonzero rational constant.
    /// The result `r` satisfies `num - den * r = O(v^(order + 1))`.
    pub fn series_quotient(num: &LaurentPoly, den: &LaurentPoly, v: Var, order: i32) -> Result<LaurentPoly> {
        let (den_lo, _) = den
            .degree_bounds(v)
            .ok_or_else(|| Error::NotUnit("zero denominator".into()))?;
        let lead = den.coefficient_of(v, den_lo);
        let unit = match lead.terms.iter().next() {
            Some((m, c)) if lead.len() == 1 && m.is_one() => c.recip(),
            _ => {
                return Err(Error::NotUnit(format!(
                    "lowest {}-coefficient {lead} is not a nonzero constant",
                    v.name()
                )))
            }
        };

        let mut quotient = LaurentPoly::zero();
        let Some((num_lo, _)) = num.degree_bounds(v) else {
            return Ok(quotient);
        };
        let mut rem = num.truncate(v, order + den_lo);
        for k in (num_lo - den_lo)..=order {
            let c = rem.coefficient_of(v, k + den_lo);
            if c.is_zero() {
                continue;
            }
            let step = c.scale(&unit).shift(v, k);
            let sub = den.mul_truncated(&step, v, order + den_lo);
            rem = &rem - &sub;
            quotient = &quotient + &step;
        }
        Ok(quotient)
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Rational::from(-1))
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
