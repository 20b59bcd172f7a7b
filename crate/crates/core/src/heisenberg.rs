//! Heisenberg relations and the free-module structure they force.
//!
//! Given an [`OperatorQuartet`], [`check_relations`] verifies
//!
//! ```text
//! [μ₋[pt], μ₊[C]] = [μ₋[C], μ₊[pt]] = id
//! ```
//!
//! with every other pair commuting, slice by slice. When the relations hold,
//! `V` is free over `ℚ[μ₊[pt], μ₊[C]]` on the lowest-weight space
//! `W = ker μ₋[pt] ∩ ker μ₋[C]`; [`decompose`] certifies this on every slice of
//! the truncated space and [`coordinates`] expresses a vector in that basis
//! by the constructive nilpotency induction.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{commutator, validate, BigradedSpace, GradedOperator, OperatorQuartet, Role, Slice};
use crate::laurent::{LaurentPoly, Var};
use crate::macdonald::DGradedPoly;
use crate::matrix::{RationalMatrix, Vector};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Identity,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SliceStatus {
    Holds,
    Fails { discrepancy: RationalMatrix },
    OutOfRange,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub left: Role,
    pub right: Role,
    pub expected: Expected,
    pub slices: BTreeMap<Slice, SliceStatus>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.slices.values().all(|s| !matches!(s, SliceStatus::Fails { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = (Slice, &RationalMatrix)> {
        self.slices.iter().filter_map(|(s, st)| match st {
            SliceStatus::Fails { discrepancy } => Some((*s, discrepancy)),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub passed: bool,
    pub relations: Vec<RelationCheck>,
}

impl RelationReport {
    /// First failing relation and slice, for diagnostics.
    pub fn first_failure(&self) -> Option<(&RelationCheck, Slice)> {
        self.relations
            .iter()
            .find_map(|r| r.failures().next().map(|(s, _)| (r, s)))
    }
}

/// The six relations, as `(left, right, expected value of [left, right])`.
pub const RELATIONS: [(Role, Role, Expected); 6] = [
    (Role::MinusPt, Role::PlusC, Expected::Identity),
    (Role::MinusC, Role::PlusPt, Expected::Identity),
    (Role::PlusPt, Role::PlusC, Expected::Zero),
    (Role::MinusPt, Role::MinusC, Expected::Zero),
    (Role::MinusPt, Role::PlusPt, Expected::Zero),
    (Role::MinusC, Role::PlusC, Expected::Zero),
];

/// Checks all six commutation relations on every slice where both
/// composition orders stay at or below the truncation level.
///
/// At level 0 the terms through level −1 vanish identically, so the identity
/// relations are asserted there as well.
pub fn check_relations(q: &OperatorQuartet) -> Result<RelationReport> {
    let validation = validate(q);
    if !validation.passed {
        return Err(Error::InvalidQuartet(validation.summary()));
    }
    let mut relations = Vec::with_capacity(RELATIONS.len());
    for (left, right, expected) in RELATIONS {
        let c = commutator(&q.space, q.op(left), q.op(right))?;
        let mut slices = BTreeMap::new();
        for (source, block) in c.operator.blocks() {
            let status = match expected {
                Expected::Zero if block.is_zero() => SliceStatus::Holds,
                Expected::Zero => SliceStatus::Fails {
                    discrepancy: block.clone(),
                },
                Expected::Identity if block.is_identity() => SliceStatus::Holds,
                Expected::Identity => SliceStatus::Fails {
                    discrepancy: block.sub(&RationalMatrix::identity(block.rows()))?,
                },
            };
            slices.insert(source, status);
        }
        for s in c.out_of_range {
            slices.insert(s, SliceStatus::OutOfRange);
        }
        let rhs = match expected {
            Expected::Identity => "id",
            Expected::Zero => "0",
        };
        relations.push(RelationCheck {
            name: format!("[{left}, {right}] = {rhs}"),
            left,
            right,
            expected,
            slices,
        });
    }
    Ok(RelationReport {
        passed: relations.iter().all(RelationCheck::holds),
        relations,
    })
}

fn require_relations(q: &OperatorQuartet) -> Result<()> {
    let report = check_relations(q)?;
    match report.first_failure() {
        None => Ok(()),
        Some((rel, slice)) => Err(Error::RelationsFailed(format!("{} fails at slice {slice}", rel.name))),
    }
}

/// `W = ker μ₋[pt] ∩ ker μ₋[C]`, with a basis per slice in the coordinates of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowestWeightSpace {
    pub basis: BTreeMap<Slice, Vec<Vector>>,
    pub dims: BigradedSpace,
}

impl LowestWeightSpace {
    pub fn dim(&self, s: Slice) -> usize {
        self.dims.dim(s)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.total_dim()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.dims.slices().map(|(s, _)| s.level).max()
    }
}

pub fn lowest_weight(q: &OperatorQuartet) -> Result<LowestWeightSpace> {
    require_relations(q)?;
    lowest_weight_unchecked(q)
}

fn annihilator_stack(q: &OperatorQuartet, s: Slice) -> Result<RationalMatrix> {
    let a = q.mu_minus_pt.dense_block(&q.space, s)?;
    let b = q.mu_minus_c.dense_block(&q.space, s)?;
    a.vstack(&b)
}

fn lowest_weight_unchecked(q: &OperatorQuartet) -> Result<LowestWeightSpace> {
    let mut basis = BTreeMap::new();
    let mut dims = BigradedSpace::new(q.truncation());
    for (s, _) in q.space.slices() {
        let kernel = annihilator_stack(q, s)?.nullspace();
        if !kernel.is_empty() {
            dims.set_dim(s, kernel.len());
            basis.insert(s, kernel);
        }
    }
    Ok(LowestWeightSpace { basis, dims })
}

/// One image vector `μ₊[pt]^a μ₊[C]^b w` of a lowest-weight basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageVector {
    pub a: u32,
    pub b: u32,
    /// Slice of the lowest-weight vector.
    pub source: Slice,
    /// Index of the lowest-weight vector within its slice basis.
    pub index: usize,
    pub target: Slice,
    pub vector: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceRank {
    pub slice: Slice,
    pub dim: usize,
    /// `sum_{m <= n} sum_b dim W_(i - 2b, m)` with `a = n - m - b >= 0`.
    pub predicted: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct DecompositionCertificate {
    pub lowest_weight: LowestWeightSpace,
    pub images: Vec<ImageVector>,
    pub slices: Vec<SliceRank>,
}

impl DecompositionCertificate {
    pub fn images_at(&self, s: Slice) -> impl Iterator<Item = &ImageVector> {
        self.images.iter().filter(move |im| im.target == s)
    }
}

/// Certifies that `W ⊗ ℚ[μ₊[pt], μ₊[C]] → V` is an isomorphism on every slice up to the truncation.
pub fn decompose(q: &OperatorQuartet) -> Result<DecompositionCertificate> {
    require_relations(q)?;
    let lowest_weight = lowest_weight_unchecked(q)?;
    let top = q.truncation();

    let mut images = Vec::new();
    for (source, vectors) in &lowest_weight.basis {
        for (index, w) in vectors.iter().enumerate() {
            let mut by_c = (*source, w.clone());
            for b in 0..=(top - source.level) {
                let mut by_pt = by_c.clone();
                for a in 0..=(top - source.level - b) {
                    images.push(ImageVector {
                        a: a as u32,
                        b: b as u32,
                        source: *source,
                        index,
                        target: by_pt.0,
                        vector: by_pt.1.clone(),
                    });
                    if a < top - source.level - b {
                        by_pt = q.mu_plus_pt.apply(&q.space, by_pt.0, &by_pt.1)?;
                    }
                }
                if b < top - source.level {
                    by_c = q.mu_plus_c.apply(&q.space, by_c.0, &by_c.1)?;
                }
            }
        }
    }

    let mut grouped: BTreeMap<Slice, Vec<Vector>> = BTreeMap::new();
    for im in &images {
        grouped.entry(im.target).or_default().push(im.vector.clone());
    }
    let mut targets: Vec<Slice> = q.space.slices().map(|(s, _)| s).collect();
    targets.extend(grouped.keys().copied());
    targets.sort();
    targets.dedup();

    let mut slices = Vec::new();
    for s in targets {
        let dim = q.space.dim(s);
        let vectors = grouped.remove(&s).unwrap_or_default();
        let predicted = vectors.len();
        let rank = if dim == 0 {
            0
        } else {
            RationalMatrix::from_columns(&vectors, dim)?.rank()
        };
        if predicted != dim || rank != dim {
            return Err(Error::RankDefect {
                slice: s,
                images: predicted,
                rank,
                dim,
            });
        }
        slices.push(SliceRank {
            slice: s,
            dim,
            predicted,
            rank,
        });
    }

    Ok(DecompositionCertificate {
        lowest_weight,
        images,
        slices,
    })
}

/// Component `μ₊[pt]^a μ₊[C]^b w` of a vector, with `w` given in the lowest-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinate {
    pub a: u32,
    pub b: u32,
    pub source: Slice,
    pub coefficients: Vector,
}

/// Splits `v` as `sum_k raise^k v_k` with every `v_k` in `ker lower`, given `[lower, raise] = id`.
///
/// Recursion on nilpotency: write `lower(v) = sum_k raise^k u_k`, then
/// `v' = v - sum_k raise^(k+1) u_k / (k+1)` lies in `ker lower`.
fn split(
    space: &BigradedSpace,
    lower: &GradedOperator,
    raise: &GradedOperator,
    s: Slice,
    v: &[Rational],
) -> Result<Vec<(Slice, Vector)>> {
    if v.iter().all(Rational::is_zero) {
        return Ok(Vec::new());
    }
    let (below, u) = lower.apply(space, s, v)?;
    if u.iter().all(Rational::is_zero) {
        return Ok(vec![(s, v.to_vec())]);
    }
    let parts = split(space, lower, raise, below, &u)?;

    let mut rest = v.to_vec();
    let mut out = vec![(s, Vec::new())];
    for (k, (slice_k, u_k)) in parts.into_iter().enumerate() {
        let scaled: Vector = u_k.iter().map(|x| x / &Rational::from(k + 1)).collect();
        let mut lifted = (slice_k, scaled.clone());
        for _ in 0..=k {
            lifted = raise.apply(space, lifted.0, &lifted.1)?;
        }
        debug_assert_eq!(lifted.0, s);
        for (r, x) in rest.iter_mut().zip(&lifted.1) {
            *r -= x;
        }
        out.push((slice_k, scaled));
    }
    let (_, check) = lower.apply(space, s, &rest)?;
    if !check.iter().all(Rational::is_zero) {
        return Err(Error::RelationsFailed(format!(
            "lowering operator of bidegree {} does not invert raising operator of bidegree {} below slice {s}",
            lower.bidegree(),
            raise.bidegree()
        )));
    }
    out[0].1 = rest;
    Ok(out)
}

/// Coordinates of `v ∈ V_s` over `W ⊗ ℚ[μ₊[pt], μ₊[C]]`.
///
/// First splits `v = sum_b μ₊[C]^b u_b` with `u_b ∈ ker μ₋[pt]`, then each
/// `u_b = sum_a μ₊[pt]^a w_(a,b)` inside `ker μ₋[pt]` with `w_(a,b) ∈ W`.
pub fn coordinates(
    q: &OperatorQuartet,
    cert: &DecompositionCertificate,
    s: Slice,
    v: &[Rational],
) -> Result<Vec<Coordinate>> {
    if v.len() != q.space.dim(s) {
        return Err(Error::Shape(format!(
            "vector of length {} in slice {s} of dimension {}",
            v.len(),
            q.space.dim(s)
        )));
    }
    let mut coords = Vec::new();
    let outer = split(&q.space, &q.mu_minus_pt, &q.mu_plus_c, s, v)?;
    for (b, (slice_b, u_b)) in outer.into_iter().enumerate() {
        let inner = split(&q.space, &q.mu_minus_c, &q.mu_plus_pt, slice_b, &u_b)?;
        for (a, (slice_w, w)) in inner.into_iter().enumerate() {
            if w.iter().all(Rational::is_zero) {
                continue;
            }
            let basis = cert
                .lowest_weight
                .basis
                .get(&slice_w)
                .ok_or_else(|| Error::RankDefect {
                    slice: slice_w,
                    images: 0,
                    rank: 0,
                    dim: q.space.dim(slice_w),
                })?;
            let m = RationalMatrix::from_columns(basis, q.space.dim(slice_w))?;
            let sol = m.solve(&w)?;
            let coefficients = sol
                .solution
                .ok_or_else(|| Error::RelationsFailed(format!("component at {slice_w} is not lowest weight")))?;
            coords.push(Coordinate {
                a: a as u32,
                b: b as u32,
                source: slice_w,
                coefficients,
            });
        }
    }
    Ok(coords)
}

/// Rebuilds `sum μ₊[pt]^a μ₊[C]^b w` from coordinates; lands in slice `target`.
pub fn reconstruct(
    q: &OperatorQuartet,
    cert: &DecompositionCertificate,
    target: Slice,
    coords: &[Coordinate],
) -> Result<Vector> {
    let mut acc = q.space.zero_vector(target);
    for c in coords {
        let basis = &cert.lowest_weight.basis[&c.source];
        let mut w = q.space.zero_vector(c.source);
        for (coef, bv) in c.coefficients.iter().zip(basis) {
            for (x, y) in w.iter_mut().zip(bv) {
                *x += &(coef * y);
            }
        }
        let mut cur = (c.source, w);
        for _ in 0..c.b {
            cur = q.mu_plus_c.apply(&q.space, cur.0, &cur.1)?;
        }
        for _ in 0..c.a {
            cur = q.mu_plus_pt.apply(&q.space, cur.0, &cur.1)?;
        }
        if cur.0 != target {
            return Err(Error::Shape(format!(
                "coordinate lands in {}, expected {target}",
                cur.0
            )));
        }
        for (x, y) in acc.iter_mut().zip(&cur.1) {
            *x += y;
        }
    }
    Ok(acc)
}

/// Dual quartet on cohomology: `μᶜ±[pt] = μ∓[pt]ᵀ`, `μᶜ±[C] = μ∓[C]ᵀ`.
pub fn dualize(q: &OperatorQuartet) -> Result<OperatorQuartet> {
    let validation = validate(q);
    if !validation.passed {
        return Err(Error::InvalidQuartet(validation.summary()));
    }
    let mut out = OperatorQuartet::zero(q.space.clone(), q.grading.dual());
    for role in Role::ALL {
        *out.op_mut(role) = q.op(role.dual()).transpose();
    }
    out.genus = q.genus;
    out.provenance = if q.provenance.is_empty() {
        "dual".into()
    } else {
        format!("dual of {}", q.provenance)
    };
    Ok(out)
}

/// `dim V_s / (im μ₊[pt] + im μ₊[C])` for every nonzero slice.
pub fn quotient_dims(q: &OperatorQuartet) -> Result<BigradedSpace> {
    let mut dims = BigradedSpace::new(q.truncation());
    for (s, d) in q.space.slices() {
        let mut rank_input: Option<RationalMatrix> = None;
        for op in [&q.mu_plus_pt, &q.mu_plus_c] {
            let b = op.bidegree();
            let source = Slice::new(s.degree - b.degree, s.level - b.level);
            if !q.space.level_in_range(source.level) {
                continue;
            }
            // rank of [A | B] via the stacked transposes
            let block = op.dense_block(&q.space, source)?.transpose();
            rank_input = Some(match rank_input {
                None => block,
                Some(acc) => acc.vstack(&block)?,
            });
        }
        let rank = rank_input.map_or(0, |m| m.rank());
        dims.set_dim(s, d - rank);
    }
    Ok(dims)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub dual_relations_hold: bool,
    pub quotient_dims: BTreeMap<Slice, usize>,
    pub lowest_weight_dims: BTreeMap<Slice, usize>,
    pub dims_match: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.dual_relations_hold && self.dims_match
    }
}

/// Dualises `q`, checks the relations on the dual, and compares the dual's
/// quotient `V/(im μᶜ₊[pt] + im μᶜ₊[C])` with `W` slice by slice.
pub fn duality_check(q: &OperatorQuartet) -> Result<DualityReport> {
    let dual = dualize(q)?;
    let dual_relations_hold = check_relations(&dual)?.passed;
    let quotient: BTreeMap<Slice, usize> = quotient_dims(&dual)?.slices().collect();
    let lw: BTreeMap<Slice, usize> = lowest_weight_unchecked(q)?.dims.slices().collect();
    Ok(DualityReport {
        dual_relations_hold,
        dims_match: quotient == lw,
        quotient_dims: quotient,
        lowest_weight_dims: lw,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DGrading {
    pub poly: DGradedPoly,
    /// Whether the genus was inferred from the support of `W`.
    pub inferred_genus: bool,
    pub warnings: Vec<String>,
}

/// `P_D(t, z) = sum dim W_(i,n) t^i z^n`.
pub fn d_grading(q: &OperatorQuartet, cert: &DecompositionCertificate) -> DGrading {
    let lw = &cert.lowest_weight;
    let max_level = lw.max_level().unwrap_or(0);
    let inferred = ((max_level + 1) / 2) as u32;
    let mut warnings = Vec::new();
    let (genus, inferred_genus) = match q.genus {
        Some(g) => {
            if max_level > 2 * g as i64 {
                warnings.push(format!(
                    "lowest-weight support reaches level {max_level}, beyond 2g = {}",
                    2 * g
                ));
            }
            if q.truncation() < 2 * g as i64 {
                warnings.push(format!(
                    "truncation N = {} < 2g = {}: grading possibly incomplete",
                    q.truncation(),
                    2 * g
                ));
            }
            if inferred != g {
                warnings.push(format!("genus {g} from metadata, {inferred} inferred from support"));
            }
            (g, false)
        }
        None => (inferred, true),
    };
    let mut poly = DGradedPoly::new(genus);
    for (s, d) in lw.dims.slices() {
        poly.set(s.degree, s.level, d as u64);
    }
    DGrading {
        poly,
        inferred_genus,
        warnings,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub genus: u32,
    /// `dim ker μ₋[pt]` at each level `0..=N`.
    pub kernel_dims: Vec<usize>,
    pub lowest_weight_total: usize,
    pub checked_from: i64,
    pub checked_to: i64,
    pub passed: bool,
}

/// For levels `2g <= n <= N`, `ker μ₋[pt]` restricted to level `n` has the
/// same dimension as all of `W`.
pub fn stabilization_check(q: &OperatorQuartet, genus: u32) -> Result<StabilizationReport> {
    let top = q.truncation();
    let needed = 2 * genus as i64 + 1;
    if top < needed {
        return Err(Error::InsufficientTruncation { needed, have: top });
    }
    require_relations(q)?;
    let lw = lowest_weight_unchecked(q)?;
    let mut kernel_dims = vec![0usize; top as usize + 1];
    for (s, d) in q.space.slices() {
        if !q.space.level_in_range(s.level) {
            continue;
        }
        let rank = q.mu_minus_pt.dense_block(&q.space, s)?.rank();
        kernel_dims[s.level as usize] += d - rank;
    }
    let total = lw.total_dim();
    let from = 2 * genus as i64;
    let passed = kernel_dims[from as usize..].iter().all(|&k| k == total);
    Ok(StabilizationReport {
        genus,
        kernel_dims,
        lowest_weight_total: total,
        checked_from: from,
        checked_to: top,
        passed,
    })
}

/// `V = W ⊗ ℚ[x, y]` truncated at level `N`, with `μ₊[pt] = x`, `μ₊[C] = y`,
/// `μ₋[pt] = ∂/∂y`, `μ₋[C] = ∂/∂x`. Here `x` has bidegree `(0,1)` and `y` has `(2,1)`.
pub fn free_quartet(w: &BigradedSpace, truncation: i64) -> OperatorQuartet {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    struct Basis {
        source: Slice,
        index: usize,
        a: i64,
        b: i64,
    }

    let mut space = BigradedSpace::new(truncation);
    let mut members: BTreeMap<Slice, Vec<Basis>> = BTreeMap::new();
    for (source, d) in w.slices() {
        if !(0..=truncation).contains(&source.level) {
            continue;
        }
        for index in 0..d {
            for b in 0..=(truncation - source.level) {
                for a in 0..=(truncation - source.level - b) {
                    let target = Slice::new(source.degree + 2 * b, source.level + a + b);
                    members.entry(target).or_default().push(Basis { source, index, a, b });
                }
            }
        }
    }
    let mut position: HashMap<Basis, usize> = HashMap::new();
    for (s, list) in &members {
        space.set_dim(*s, list.len());
        space.set_labels(
            *s,
            list.iter()
                .map(|e| format!("x^{} y^{} w{}#{}", e.a, e.b, e.source, e.index))
                .collect(),
        );
        for (i, e) in list.iter().enumerate() {
            position.insert(*e, i);
        }
    }

    let mut q = OperatorQuartet::zero(space, crate::graded::Grading::Homology);
    for role in Role::ALL {
        let bidegree = q.op(role).bidegree();
        let mut op = GradedOperator::zero(bidegree);
        for (s, list) in &members {
            let target = s.shift(bidegree);
            let Some(target_list) = members.get(&target) else {
                continue;
            };
            let mut m = RationalMatrix::zeros(target_list.len(), list.len());
            for (col, e) in list.iter().enumerate() {
                let (image, coef) = match role {
                    Role::PlusPt => (Basis { a: e.a + 1, ..*e }, 1),
                    Role::PlusC => (Basis { b: e.b + 1, ..*e }, 1),
                    Role::MinusPt => (Basis { b: e.b - 1, ..*e }, e.b),
                    Role::MinusC => (Basis { a: e.a - 1, ..*e }, e.a),
                };
                if coef == 0 {
                    continue;
                }
                if let Some(&row) = position.get(&image) {
                    m[(row, col)] = Rational::from(coef);
                }
            }
            op.insert_block(*s, m);
        }
        *q.op_mut(role) = op;
    }
    q.provenance = "free module W ⊗ Q[x,y]".into();
    q
}

/// `sum_(i,n) dim W_(i,n) t^i z^n` for a plain dimension table.
pub fn poincare_of(w: &BigradedSpace) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (s, d) in w.slices() {
        p = &p + &LaurentPoly::term(d as i64, &[(Var::T, s.degree as i32), (Var::Z, s.level as i32)]);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Bidegree;
    use crate::models::p1_quartet;

    fn point_w() -> BigradedSpace {
        let mut w = BigradedSpace::new(0);
        w.set_dim(Slice::new(0, 0), 1);
        w
    }

    #[test]
    fn p1_relations_hold() {
        let r = check_relations(&p1_quartet(6)).unwrap();
        assert!(r.passed);
        assert_eq!(r.relations.len(), 6);
        for rel in &r.relations {
            let in_range = rel.slices.values().filter(|s| **s == SliceStatus::Holds).count();
            assert!(in_range > 0, "{}", rel.name);
        }
    }

    #[test]
    fn p1_defect_is_located() {
        let mut q = p1_quartet(6);
        let s = Slice::new(2, 2);
        q.mu_plus_c.block_mut(s).unwrap()[(0, 0)] = Rational::zero();
        let r = check_relations(&q).unwrap();
        assert!(!r.passed);
        let (rel, at) = r.first_failure().unwrap();
        // μ₋[pt] μ₊[C] e_{2,1} is now 0, so [μ₋[pt], μ₊[C]] fails at the altered slice
        assert_eq!(rel.left, Role::MinusPt);
        assert_eq!(at, s);
    }

    #[test]
    fn free_quartet_relations_hold() {
        let mut w = BigradedSpace::new(4);
        w.set_dim(Slice::new(0, 0), 1);
        w.set_dim(Slice::new(1, 1), 2);
        w.set_dim(Slice::new(2, 2), 1);
        assert!(check_relations(&free_quartet(&w, 5)).unwrap().passed);
    }

    #[test]
    fn free_quartet_dims() {
        let q = free_quartet(&point_w(), 3);
        for n in 0..=3 {
            for k in 0..=n {
                assert_eq!(q.space.dim(Slice::new(2 * k, n)), 1);
            }
            assert_eq!(q.space.level_dim(n), n as usize + 1);
        }
        let mut w = BigradedSpace::new(1);
        w.set_dim(Slice::new(1, 1), 2);
        let q = free_quartet(&w, 3);
        let totals: Vec<_> = (0..=3).map(|n| q.space.level_dim(n)).collect();
        assert_eq!(totals, vec![0, 2, 4, 6]);
        assert!(free_quartet(&BigradedSpace::new(0), 3).space.slices().next().is_none());
    }

    #[test]
    fn p1_lowest_weight_is_a_point() {
        let lw = lowest_weight(&p1_quartet(6)).unwrap();
        let dims: Vec<_> = lw.dims.slices().collect();
        assert_eq!(dims, vec![(Slice::new(0, 0), 1)]);
    }

    #[test]
    fn zero_space() {
        let q = OperatorQuartet::zero(BigradedSpace::new(3), crate::graded::Grading::Homology);
        assert_eq!(lowest_weight(&q).unwrap().total_dim(), 0);
        let cert = decompose(&q).unwrap();
        assert!(cert.images.is_empty() && cert.slices.is_empty());
    }

    #[test]
    fn p1_decomposition() {
        let q = p1_quartet(6);
        let cert = decompose(&q).unwrap();
        for sr in &cert.slices {
            assert_eq!(sr.dim, 1);
            assert!(sr.slice.degree <= 2 * sr.slice.level);
        }
        assert_eq!(cert.slices.len(), (1..=7).sum::<usize>());
        for im in &cert.images {
            assert_eq!(im.target, Slice::new(2 * im.b as i64, (im.a + im.b) as i64));
        }
    }

    #[test]
    fn coordinates_of_p1_class() {
        // e_{2,1} = xy = μ₊[pt] μ₊[C] · 1
        let q = p1_quartet(4);
        let cert = decompose(&q).unwrap();
        let v = vec![Rational::one()];
        let c = coordinates(&q, &cert, Slice::new(2, 2), &v).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].a, c[0].b), (1, 1));
        assert_eq!(c[0].coefficients, vec![Rational::one()]);
        assert_eq!(reconstruct(&q, &cert, Slice::new(2, 2), &c).unwrap(), v);
    }

    #[test]
    fn coordinates_fixed_points() {
        let mut w = BigradedSpace::new(2);
        w.set_dim(Slice::new(1, 1), 2);
        let q = free_quartet(&w, 4);
        let cert = decompose(&q).unwrap();
        let s = Slice::new(1, 1);
        let w0 = cert.lowest_weight.basis[&s][1].clone();
        let c = coordinates(&q, &cert, s, &w0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].a, c[0].b), (0, 0));
        assert_eq!(c[0].coefficients, vec![Rational::zero(), Rational::one()]);

        let (s1, v1) = q.mu_plus_pt.apply(&q.space, s, &w0).unwrap();
        let (s2, v2) = q.mu_plus_pt.apply(&q.space, s1, &v1).unwrap();
        let c = coordinates(&q, &cert, s2, &v2).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].a, c[0].b), (2, 0));
        assert_eq!(c[0].coefficients, vec![Rational::zero(), Rational::one()]);
    }

    #[test]
    fn duality_on_p1() {
        let q = p1_quartet(6);
        let d = dualize(&q).unwrap();
        assert_eq!(dualize(&d).unwrap().mu_plus_c, q.mu_plus_c);
        assert_eq!(dualize(&d).unwrap().mu_minus_pt, q.mu_minus_pt);
        assert!(check_relations(&d).unwrap().passed);
        let report = duality_check(&q).unwrap();
        assert!(report.passed());
        assert_eq!(
            report.quotient_dims.into_iter().collect::<Vec<_>>(),
            vec![(Slice::new(0, 0), 1)]
        );
    }

    #[test]
    fn d_grading_of_p1() {
        let q = p1_quartet(6);
        let cert = decompose(&q).unwrap();
        let d = d_grading(&q, &cert);
        assert_eq!(d.poly.to_laurent(), LaurentPoly::one());
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn d_grading_warns_on_short_truncation() {
        let mut q = p1_quartet(2);
        q.genus = Some(2);
        let cert = decompose(&q).unwrap();
        let d = d_grading(&q, &cert);
        assert!(d.warnings.iter().any(|w| w.contains("possibly incomplete")));
    }

    #[test]
    fn stabilization() {
        let r = stabilization_check(&p1_quartet(6), 0).unwrap();
        assert!(r.passed);
        assert_eq!(r.kernel_dims, vec![1; 7]);
        let err = stabilization_check(&p1_quartet(2), 1).unwrap_err();
        assert!(err.to_string().contains("insufficient truncation"));
    }

    #[test]
    fn stabilization_on_free_module() {
        let mut w = BigradedSpace::new(2);
        w.set_dim(Slice::new(0, 0), 1);
        w.set_dim(Slice::new(1, 1), 2);
        w.set_dim(Slice::new(2, 2), 1);
        let q = free_quartet(&w, 6);
        let r = stabilization_check(&q, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.kernel_dims[..3], [1, 3, 4]);
        assert!(r.kernel_dims[2..].iter().all(|&k| k == 4));
    }

    #[test]
    fn refuses_invalid_input() {
        let mut q = p1_quartet(3);
        q.mu_minus_c.set_bidegree(Bidegree::new(0, 1));
        assert!(matches!(check_relations(&q), Err(Error::InvalidQuartet(_))));
        let mut q = p1_quartet(3);
        q.mu_plus_pt = q.mu_plus_pt.scale(&2.into());
        assert!(matches!(lowest_weight(&q), Err(Error::RelationsFailed(_))));
    }
}
