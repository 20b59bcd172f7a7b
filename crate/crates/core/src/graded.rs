//! Truncated bigraded vector spaces and the bidegree-shifting operators acting on them.
//!
//! A [`BigradedSpace`] records `dim V_(i,n)` for homological degree `i` and
//! level `n` in `[0, N]`. Operators are stored blockwise: the block at source
//! slice `s` maps `V_s` into `V_(s + bidegree)`, as a `dim(target) x dim(s)`
//! matrix acting on column vectors. Missing blocks are zero maps. Levels
//! below zero are genuinely zero; levels above `N` are lost to truncation,
//! and results that would route through them are reported as out of range.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{RationalMatrix, Vector};
use crate::rational::Rational;

/// A position `(i, n)`: homological degree `i` and level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slice {
    pub degree: i64,
    pub level: i64,
}

impl Slice {
    pub const fn new(degree: i64, level: i64) -> Self {
        Slice { degree, level }
    }

    pub fn shift(self, by: Bidegree) -> Slice {
        Slice::new(self.degree + by.degree, self.level + by.level)
    }
}

// Level-major ordering, so reports read level by level.
impl Ord for Slice {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.degree).cmp(&(other.level, other.degree))
    }
}

impl PartialOrd for Slice {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.degree, self.level)
    }
}

impl FromStr for Slice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid slice key {s:?}, expected \"(i,n)\""));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (i, n) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Slice::new(
            i.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        ))
    }
}

impl Serialize for Slice {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slice {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shift `(Δi, Δn)` applied by an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub degree: i64,
    pub level: i64,
}

impl Bidegree {
    pub const fn new(degree: i64, level: i64) -> Self {
        Bidegree { degree, level }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.degree + rhs.degree, self.level + rhs.level)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.degree, self.level)
    }
}

/// Whether the space carries homology (operators as in the main theorem) or
/// the dual cohomology with the dualised operators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    #[default]
    Homology,
    Cohomology,
}

impl Grading {
    pub fn dual(self) -> Grading {
        match self {
            Grading::Homology => Grading::Cohomology,
            Grading::Cohomology => Grading::Homology,
        }
    }
}

/// The four operators `μ±[pt]`, `μ±[C]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    PlusPt,
    MinusPt,
    PlusC,
    MinusC,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::PlusPt, Role::MinusPt, Role::PlusC, Role::MinusC];

    pub fn key(self) -> &'static str {
        match self {
            Role::PlusPt => "mu_plus_pt",
            Role::MinusPt => "mu_minus_pt",
            Role::PlusC => "mu_plus_C",
            Role::MinusC => "mu_minus_C",
        }
    }

    /// The operator whose transpose plays this role after dualising.
    pub fn dual(self) -> Role {
        match self {
            Role::PlusPt => Role::MinusPt,
            Role::MinusPt => Role::PlusPt,
            Role::PlusC => Role::MinusC,
            Role::MinusC => Role::PlusC,
        }
    }

    pub fn expected_bidegree(self, grading: Grading) -> Bidegree {
        match grading {
            Grading::Homology => match self {
                Role::PlusPt => Bidegree::new(0, 1),
                Role::MinusPt => Bidegree::new(-2, -1),
                Role::PlusC => Bidegree::new(2, 1),
                Role::MinusC => Bidegree::new(0, -1),
            },
            Grading::Cohomology => {
                let b = self.dual().expected_bidegree(Grading::Homology);
                Bidegree::new(-b.degree, -b.level)
            }
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl Serialize for Role {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.key())
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Role::ALL
            .into_iter()
            .find(|r| r.key() == s)
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedSpace {
    truncation: i64,
    curve_like: bool,
    dims: BTreeMap<Slice, usize>,
    labels: BTreeMap<Slice, Vec<String>>,
}

impl BigradedSpace {
    pub fn new(truncation: i64) -> Self {
        BigradedSpace {
            truncation,
            curve_like: false,
            dims: BTreeMap::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn curve_like(mut self, yes: bool) -> Self {
        self.curve_like = yes;
        self
    }

    pub fn is_curve_like(&self) -> bool {
        self.curve_like
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn set_dim(&mut self, s: Slice, d: usize) {
        if d == 0 {
            self.dims.remove(&s);
        } else {
            self.dims.insert(s, d);
        }
    }

    pub fn set_labels(&mut self, s: Slice, labels: Vec<String>) {
        self.labels.insert(s, labels);
    }

    pub fn labels(&self, s: Slice) -> Option<&[String]> {
        self.labels.get(&s).map(Vec::as_slice)
    }

    pub fn all_labels(&self) -> &BTreeMap<Slice, Vec<String>> {
        &self.labels
    }

    pub fn dim(&self, s: Slice) -> usize {
        self.dims.get(&s).copied().unwrap_or(0)
    }

    /// Nonzero slices in level-major order.
    pub fn slices(&self) -> impl Iterator<Item = (Slice, usize)> + '_ {
        self.dims.iter().map(|(s, d)| (*s, *d))
    }

    pub fn slices_at_level(&self, n: i64) -> impl Iterator<Item = (Slice, usize)> + '_ {
        self.slices().filter(move |(s, _)| s.level == n)
    }

    pub fn level_dim(&self, n: i64) -> usize {
        self.slices_at_level(n).map(|(_, d)| d).sum()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn level_in_range(&self, n: i64) -> bool {
        (0..=self.truncation).contains(&n)
    }

    /// Coefficients of `sum_i dim V_(i,n) t^i` for level `n`.
    pub fn poincare(&self, n: i64) -> Vec<u64> {
        let mut coeffs = Vec::new();
        for (s, d) in self.slices_at_level(n) {
            if s.degree < 0 {
                continue;
            }
            let i = s.degree as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, 0);
            }
            coeffs[i] += d as u64;
        }
        coeffs
    }

    pub fn zero_vector(&self, s: Slice) -> Vector {
        vec![Rational::zero(); self.dim(s)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperator {
    bidegree: Bidegree,
    blocks: BTreeMap<Slice, RationalMatrix>,
}

impl GradedOperator {
    pub fn zero(bidegree: Bidegree) -> Self {
        GradedOperator {
            bidegree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn set_bidegree(&mut self, b: Bidegree) {
        self.bidegree = b;
    }

    /// Stores the block at `source`. Blocks with a zero dimension carry no data and are dropped.
    pub fn insert_block(&mut self, source: Slice, block: RationalMatrix) {
        if block.rows() == 0 || block.cols() == 0 {
            self.blocks.remove(&source);
        } else {
            self.blocks.insert(source, block);
        }
    }

    pub fn block(&self, source: Slice) -> Option<&RationalMatrix> {
        self.blocks.get(&source)
    }

    pub fn block_mut(&mut self, source: Slice) -> Option<&mut RationalMatrix> {
        self.blocks.get_mut(&source)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Slice, &RationalMatrix)> {
        self.blocks.iter().map(|(s, m)| (*s, m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(RationalMatrix::is_zero)
    }

    /// The block at `source` as a `dim(target) x dim(source)` matrix, zero if absent.
    pub fn dense_block(&self, space: &BigradedSpace, source: Slice) -> Result<RationalMatrix> {
        let target = source.shift(self.bidegree);
        let shape = (space.dim(target), space.dim(source));
        match self.blocks.get(&source) {
            Some(m) if m.shape() == shape => Ok(m.clone()),
            Some(m) => Err(Error::Shape(format!(
                "block at {source} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            ))),
            None => Ok(RationalMatrix::zeros(shape.0, shape.1)),
        }
    }

    /// Applies the operator to `v` in slice `source`; returns the image slice and vector.
    pub fn apply(&self, space: &BigradedSpace, source: Slice, v: &[Rational]) -> Result<(Slice, Vector)> {
        let target = source.shift(self.bidegree);
        if v.len() != space.dim(source) {
            return Err(Error::Shape(format!(
                "vector of length {} in slice {source} of dimension {}",
                v.len(),
                space.dim(source)
            )));
        }
        match self.blocks.get(&source) {
            Some(m) => Ok((target, m.mul_vec(v)?)),
            None => Ok((target, space.zero_vector(target))),
        }
    }

    pub fn scale(&self, s: &Rational) -> GradedOperator {
        GradedOperator {
            bidegree: self.bidegree,
            blocks: self.blocks.iter().map(|(k, m)| (*k, m.scale(s))).collect(),
        }
    }

    pub fn transpose(&self) -> GradedOperator {
        let inv = Bidegree::new(-self.bidegree.degree, -self.bidegree.level);
        GradedOperator {
            bidegree: inv,
            blocks: self
                .blocks
                .iter()
                .map(|(s, m)| (s.shift(self.bidegree), m.transpose()))
                .collect(),
        }
    }
}

/// `f ∘ g`: apply `g`, then `f`. Bidegrees add and blocks multiply; any path
/// through a missing block is zero.
pub fn compose(f: &GradedOperator, g: &GradedOperator) -> Result<GradedOperator> {
    let mut out = GradedOperator::zero(f.bidegree + g.bidegree);
    for (source, gb) in &g.blocks {
        let mid = source.shift(g.bidegree);
        if let Some(fb) = f.blocks.get(&mid) {
            let prod = fb
                .mul(gb)
                .map_err(|e| Error::Shape(format!("composing through {mid}: {e}")))?;
            out.insert_block(*source, prod);
        }
    }
    Ok(out)
}

/// `[f, g] = f∘g − g∘f`, with explicit blocks on every in-range slice.
#[derive(Clone, Debug)]
pub struct Commutator {
    pub operator: GradedOperator,
    /// Nonzero source slices where one of the two compositions passes above the truncation level.
    pub out_of_range: Vec<Slice>,
}

impl Commutator {
    /// In-range source slices, in level-major order.
    pub fn domain(&self) -> impl Iterator<Item = Slice> + '_ {
        self.operator.blocks.keys().copied()
    }
}

pub fn commutator(space: &BigradedSpace, f: &GradedOperator, g: &GradedOperator) -> Result<Commutator> {
    let total = f.bidegree + g.bidegree;
    let mut operator = GradedOperator::zero(total);
    let mut out_of_range = Vec::new();
    for (source, _) in space.slices() {
        if !space.level_in_range(source.level) {
            continue;
        }
        let via_g = source.shift(g.bidegree).level;
        let via_f = source.shift(f.bidegree).level;
        let target = source.shift(total).level;
        let top = space.truncation();
        if via_g > top || via_f > top || target > top {
            out_of_range.push(source);
            continue;
        }
        let fg = path(space, f, g, source)?;
        let gf = path(space, g, f, source)?;
        let block = fg.sub(&gf)?;
        // zero-height blocks still mark the slice as in range
        operator.blocks.insert(source, block);
    }
    Ok(Commutator { operator, out_of_range })
}

fn path(space: &BigradedSpace, f: &GradedOperator, g: &GradedOperator, source: Slice) -> Result<RationalMatrix> {
    let mid = source.shift(g.bidegree);
    let gb = g.dense_block(space, source)?;
    let fb = f.dense_block(space, mid)?;
    fb.mul(&gb)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorQuartet {
    pub space: BigradedSpace,
    pub grading: Grading,
    pub mu_plus_pt: GradedOperator,
    pub mu_minus_pt: GradedOperator,
    pub mu_plus_c: GradedOperator,
    pub mu_minus_c: GradedOperator,
    pub genus: Option<u32>,
    pub provenance: String,
}

impl OperatorQuartet {
    /// A quartet of zero operators with the standard bidegrees.
    pub fn zero(space: BigradedSpace, grading: Grading) -> Self {
        let op = |r: Role| GradedOperator::zero(r.expected_bidegree(grading));
        OperatorQuartet {
            space,
            grading,
            mu_plus_pt: op(Role::PlusPt),
            mu_minus_pt: op(Role::MinusPt),
            mu_plus_c: op(Role::PlusC),
            mu_minus_c: op(Role::MinusC),
            genus: None,
            provenance: String::new(),
        }
    }

    pub fn op(&self, role: Role) -> &GradedOperator {
        match role {
            Role::PlusPt => &self.mu_plus_pt,
            Role::MinusPt => &self.mu_minus_pt,
            Role::PlusC => &self.mu_plus_c,
            Role::MinusC => &self.mu_minus_c,
        }
    }

    pub fn op_mut(&mut self, role: Role) -> &mut GradedOperator {
        match role {
            Role::PlusPt => &mut self.mu_plus_pt,
            Role::MinusPt => &mut self.mu_minus_pt,
            Role::PlusC => &mut self.mu_plus_c,
            Role::MinusC => &mut self.mu_minus_c,
        }
    }

    pub fn truncation(&self) -> i64 {
        self.space.truncation()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    WrongBidegree,
    BlockShape,
    BlockOutOfRange,
    SliceOutOfRange,
    DegreeBound,
    LevelZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub kind: IssueKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<Slice>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        match self.issues.first() {
            None => "valid".into(),
            Some(first) if self.issues.len() == 1 => first.message.clone(),
            Some(first) => format!("{} (and {} more)", first.message, self.issues.len() - 1),
        }
    }
}

/// Structural checks: bidegrees, block shapes, ranges, and curve-like invariants.
pub fn validate(q: &OperatorQuartet) -> ValidationReport {
    let space = &q.space;
    let mut issues = Vec::new();
    let top = space.truncation();

    if top < 0 {
        issues.push(Issue {
            kind: IssueKind::SliceOutOfRange,
            operator: None,
            slice: None,
            message: format!("negative truncation {top}"),
        });
    }
    for (s, d) in space.slices() {
        if !space.level_in_range(s.level) || s.degree < 0 {
            issues.push(Issue {
                kind: IssueKind::SliceOutOfRange,
                operator: None,
                slice: Some(s),
                message: format!("slice {s} of dimension {d} lies outside degrees >= 0, levels 0..={top}"),
            });
        }
        if space.is_curve_like() && s.degree > 2 * s.level {
            issues.push(Issue {
                kind: IssueKind::DegreeBound,
                operator: None,
                slice: Some(s),
                message: format!("slice {s} has dimension {d} above degree 2n"),
            });
        }
    }
    if space.is_curve_like() {
        let level0: Vec<_> = space.slices_at_level(0).collect();
        if level0 != [(Slice::new(0, 0), 1)] {
            issues.push(Issue {
                kind: IssueKind::LevelZero,
                operator: None,
                slice: Some(Slice::new(0, 0)),
                message: "level 0 must be one-dimensional in degree 0".into(),
            });
        }
    }

    for role in Role::ALL {
        let op = q.op(role);
        let expected = role.expected_bidegree(q.grading);
        if op.bidegree() != expected {
            issues.push(Issue {
                kind: IssueKind::WrongBidegree,
                operator: Some(role.key().into()),
                slice: None,
                message: format!("wrong bidegree: {role} has {}, expected {expected}", op.bidegree()),
            });
        }
        for (source, block) in op.blocks() {
            let target = source.shift(op.bidegree());
            if !space.level_in_range(source.level) || !space.level_in_range(target.level) {
                issues.push(Issue {
                    kind: IssueKind::BlockOutOfRange,
                    operator: Some(role.key().into()),
                    slice: Some(source),
                    message: format!("{role} has a block from {source} to {target} outside levels 0..={top}"),
                });
                continue;
            }
            let shape = (space.dim(target), space.dim(source));
            if block.shape() != shape {
                issues.push(Issue {
                    kind: IssueKind::BlockShape,
                    operator: Some(role.key().into()),
                    slice: Some(source),
                    message: format!(
                        "{role} block at {source} is {}x{}, expected {}x{} for {target} <- {source}",
                        block.rows(),
                        block.cols(),
                        shape.0,
                        shape.1
                    ),
                });
            }
        }
    }

    ValidationReport {
        passed: issues.is_empty(),
        issues,
    }
}
