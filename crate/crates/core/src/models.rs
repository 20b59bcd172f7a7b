//! Generators of ground-truth inputs: monomial unibranch singularities via
//! semigroup ideals, the node, smooth curves, and the explicit P¹ quartet.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bps::EulerSeries;
use crate::error::{Error, Result};
use crate::graded::{BigradedSpace, GradedOperator, Grading, OperatorQuartet, Role, Slice};
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::macdonald::{hilb_from_d, DGradedPoly, PoincareFamily};
use crate::matrix::RationalMatrix;

/// Colengths above this need an explicit override.
pub const DEFAULT_COLENGTH_CAP: usize = 24;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// Membership for `0..=bound`; everything above is a member.
    members: Vec<bool>,
    gaps: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn new(generators: &[u64]) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(Error::Semigroup("generators must be positive integers".into()));
        }
        let g = generators.iter().fold(0, |a, &b| gcd(a, b));
        if g != 1 {
            return Err(Error::Semigroup(format!("generators {generators:?} have gcd {g}")));
        }
        let mut generators = generators.to_vec();
        generators.sort_unstable();
        generators.dedup();

        // Schur: the Frobenius number is below (m - 1)(M - 1).
        let m = generators[0];
        let big = *generators.last().unwrap();
        let bound = ((m.max(2) - 1) * (big.max(2) - 1)) as usize + m as usize;
        let mut members = vec![false; bound + 1];
        members[0] = true;
        for x in 1..=bound {
            members[x] = generators.iter().any(|&a| a as usize <= x && members[x - a as usize]);
        }
        let gaps = (0..=bound as u64).filter(|&x| !members[x as usize]).collect();
        Ok(NumericalSemigroup {
            generators,
            members,
            gaps,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn delta(&self) -> usize {
        self.gaps.len()
    }

    /// Largest gap, or `-1` for `ℕ`.
    pub fn frobenius(&self) -> i64 {
        self.gaps.last().map_or(-1, |&f| f as i64)
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= 0 && self.members.get(x as usize).copied().unwrap_or(true)
    }

    /// `x ∈ Γ ⇔ F - x ∉ Γ`.
    pub fn is_symmetric(&self) -> bool {
        let f = self.frobenius();
        (0..=f).all(|x| self.contains(x) != self.contains(f - x))
    }

    /// Every removed element of an ideal of colength `k` lies in `[0, 2δ - 1 + k]`.
    pub fn removal_bound(&self, k: usize) -> i64 {
        2 * self.delta() as i64 - 1 + k as i64
    }
}

/// Number of ideals `Δ ⊆ Γ` with `Δ + Γ ⊆ Δ` and `#(Γ ∖ Δ) = k`, by exhaustive
/// search over down-closed complements.
pub fn count_ideals(s: &NumericalSemigroup, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    let candidates: Vec<i64> = (0..=s.removal_bound(k)).filter(|&x| s.contains(x)).collect();
    let index: BTreeMap<i64, usize> = candidates.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // For each candidate, the positions of x - a for generators a with x - a ∈ Γ.
    let preds: Vec<Vec<usize>> = candidates
        .iter()
        .map(|&x| {
            s.generators()
                .iter()
                .filter_map(|&a| index.get(&(x - a as i64)).copied())
                .collect()
        })
        .collect();

    fn dfs(pos: usize, left: usize, chosen: &mut Vec<bool>, preds: &[Vec<usize>]) -> u64 {
        if left == 0 {
            return 1;
        }
        if pos == chosen.len() {
            return 0;
        }
        let mut total = dfs(pos + 1, left, chosen, preds);
        if preds[pos].iter().all(|&p| chosen[p]) {
            chosen[pos] = true;
            total += dfs(pos + 1, left - 1, chosen, preds);
            chosen[pos] = false;
        }
        total
    }

    let mut chosen = vec![false; candidates.len()];
    dfs(0, k, &mut chosen, &preds)
}

/// Histogram of ideal colengths `0..=k_max`, enumerating ideals by their
/// minimal generators: antichains with at most one element per residue class
/// modulo the multiplicity.
pub fn count_ideals_by_generators(s: &NumericalSemigroup, k_max: usize) -> Vec<u64> {
    let m = s.multiplicity() as i64;
    let f = s.frobenius();
    let top = s.removal_bound(k_max) + *s.generators().last().unwrap() as i64;
    let candidates: Vec<i64> = (0..=top).filter(|&x| s.contains(x)).collect();
    let mut hist = vec![0u64; k_max + 1];

    let colength = |gens: &[i64]| -> usize {
        let lo = *gens.iter().min().unwrap();
        (0..=lo + f.max(0))
            .filter(|&y| s.contains(y) && !gens.iter().any(|&a| s.contains(y - a)))
            .count()
    };

    fn walk(
        start: usize,
        gens: &mut Vec<i64>,
        used: &mut Vec<bool>,
        candidates: &[i64],
        m: i64,
        s: &NumericalSemigroup,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        if !gens.is_empty() {
            visit(gens);
        }
        for i in start..candidates.len() {
            let x = candidates[i];
            let r = x.rem_euclid(m) as usize;
            if used[r] || gens.iter().any(|&a| s.contains(x - a)) {
                continue;
            }
            used[r] = true;
            gens.push(x);
            walk(i + 1, gens, used, candidates, m, s, visit);
            gens.pop();
            used[r] = false;
        }
    }

    let mut used = vec![false; m as usize];
    walk(0, &mut Vec::new(), &mut used, &candidates, m, s, &mut |gens| {
        let c = colength(gens);
        if c <= k_max {
            hist[c] += 1;
        }
    });
    hist
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LocalModel {
    Semigroup(NumericalSemigroup),
    Node,
}

impl LocalModel {
    pub fn delta(&self) -> usize {
        match self {
            LocalModel::Semigroup(s) => s.delta(),
            LocalModel::Node => 1,
        }
    }

    pub fn branches(&self) -> usize {
        match self {
            LocalModel::Semigroup(_) => 1,
            LocalModel::Node => 2,
        }
    }
}

/// `χ` of the punctual Hilbert schemes at one singular point, `n = 0..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEulerSeries {
    pub coeffs: Vec<u64>,
    pub delta: usize,
    pub branches: usize,
}

/// Enumerates colengths `0..=N`; with `jobs > 1` the colengths are spread over
/// a thread pool. The result does not depend on `jobs`.
pub fn local_euler_series(model: &LocalModel, truncation: usize, jobs: usize) -> Result<LocalEulerSeries> {
    let coeffs = match model {
        LocalModel::Node => (0..=truncation as u64).map(|k| k.max(1)).collect(),
        LocalModel::Semigroup(s) if jobs > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::Model(e.to_string()))?;
            pool.install(|| (0..=truncation).into_par_iter().map(|k| count_ideals(s, k)).collect())
        }
        LocalModel::Semigroup(s) => (0..=truncation).map(|k| count_ideals(s, k)).collect(),
    };
    Ok(LocalEulerSeries {
        coeffs,
        delta: model.delta(),
        branches: model.branches(),
    })
}

/// `Z = (1 - q)^(-χ_sm) · Π locals` through `q^N`, with `g̃` read off from
/// `χ_sm = 2 - 2g̃ - #branches`.
pub fn global_euler(locals: &[LocalEulerSeries], chi_smooth: i64, truncation: usize) -> Result<EulerSeries> {
    let branches: i64 = locals.iter().map(|l| l.branches as i64).sum();
    let twice = 2 - chi_smooth - branches;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Model(format!(
            "χ of smooth locus {chi_smooth} with {branches} branches does not come from a smooth compact normalization"
        )));
    }
    let g_tilde = (twice / 2) as u32;
    let delta: usize = locals.iter().map(|l| l.delta).sum();

    let top = truncation as i32;
    let mut z = LaurentPoly::one();
    for l in locals {
        z = z.mul_truncated(&LaurentPoly::from_coeffs(Var::Q, &l.coeffs), Var::Q, top);
    }
    let one_minus_q = LaurentPoly::from_coeffs(Var::Q, &[1, -1]);
    z = if chi_smooth >= 0 {
        LaurentPoly::series_quotient(&z, &one_minus_q.pow(chi_smooth as u32), Var::Q, top)?
    } else {
        z.mul_truncated(&one_minus_q.pow((-chi_smooth) as u32), Var::Q, top)
    };
    let coeffs = (0..=top)
        .map(|k| {
            let c = z.coefficient_of(Var::Q, k).coeff(&Monomial::ONE);
            c.to_i64()
                .ok_or_else(|| Error::Overflow(format!("Z coefficient at q^{k}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerSeries::new(coeffs, delta as u32 + g_tilde, Some(g_tilde)))
}

/// `P_D = (1 + tz)^(2g)`.
pub fn smooth_d(genus: u32) -> DGradedPoly {
    let tz = LaurentPoly::term(1, &[(Var::T, 1), (Var::Z, 1)]);
    DGradedPoly::from_laurent(genus, &(&LaurentPoly::one() + &tz).pow(2 * genus))
        .expect("binomial coefficients are non-negative integers")
}

pub fn smooth_poincare(genus: u32, truncation: usize) -> Result<PoincareFamily> {
    hilb_from_d(&smooth_d(genus), truncation)
}

pub fn smooth_euler(genus: u32, truncation: usize) -> Result<EulerSeries> {
    global_euler(&[], 2 - 2 * genus as i64, truncation)
}

/// Basis `e_(n,k)` in slice `(2k, n)` for `0 <= k <= n <= N`.
pub fn p1_quartet(truncation: usize) -> OperatorQuartet {
    let top = truncation as i64;
    let mut space = BigradedSpace::new(top).curve_like(true);
    for n in 0..=top {
        for k in 0..=n {
            let s = Slice::new(2 * k, n);
            space.set_dim(s, 1);
            space.set_labels(s, vec![format!("e({n},{k})")]);
        }
    }
    let mut q = OperatorQuartet::zero(space, Grading::Homology);
    for role in Role::ALL {
        let mut op = GradedOperator::zero(q.op(role).bidegree());
        for n in 0..=top {
            for k in 0..=n {
                let (target, coef) = match role {
                    Role::PlusPt => ((n + 1, k), 1),
                    Role::MinusPt => ((n - 1, k - 1), 1),
                    Role::PlusC => ((n + 1, k + 1), k + 1),
                    Role::MinusC => ((n - 1, k), n - k),
                };
                let (tn, tk) = target;
                if tn < 0 || tn > top || tk < 0 || tk > tn || coef == 0 {
                    continue;
                }
                op.insert_block(Slice::new(2 * k, n), RationalMatrix::from_i64_rows(&[&[coef]]));
            }
        }
        *q.op_mut(role) = op;
    }
    q.genus = Some(0);
    q.provenance = format!("P1 model, N = {truncation}");
    q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Semigroup,
    Node,
    Smooth,
    P1,
}

/// `{ "type": ..., "generators": [..]|null, "genus": g|null, "N": N }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(rename = "type")]
    pub kind: ModelKind,
    #[serde(default)]
    pub generators: Option<Vec<u64>>,
    #[serde(default)]
    pub genus: Option<u32>,
    #[serde(rename = "N")]
    pub truncation: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct GenerateOptions {
    pub jobs: usize,
    pub force: bool,
    pub cap: usize,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            jobs: 1,
            force: false,
            cap: DEFAULT_COLENGTH_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurveData {
    pub euler: EulerSeries,
    pub poincare: Option<PoincareFamily>,
    pub quartet: Option<OperatorQuartet>,
}

pub fn generate(spec: &ModelSpec, opts: GenerateOptions) -> Result<CurveData> {
    let n = spec.truncation;
    match spec.kind {
        ModelKind::Semigroup => {
            let gens = spec
                .generators
                .as_deref()
                .ok_or_else(|| Error::Model("semigroup model needs \"generators\"".into()))?;
            if n > opts.cap && !opts.force {
                return Err(Error::EnumerationCap {
                    requested: n,
                    cap: opts.cap,
                });
            }
            let s = NumericalSemigroup::new(gens)?;
            let local = local_euler_series(&LocalModel::Semigroup(s), n, opts.jobs)?;
            Ok(CurveData {
                euler: global_euler(&[local], 1, n)?,
                poincare: None,
                quartet: None,
            })
        }
        ModelKind::Node => {
            let local = local_euler_series(&LocalModel::Node, n, opts.jobs)?;
            Ok(CurveData {
                euler: global_euler(&[local], 0, n)?,
                poincare: None,
                quartet: None,
            })
        }
        ModelKind::Smooth => {
            let g = spec
                .genus
                .ok_or_else(|| Error::Model("smooth model needs \"genus\"".into()))?;
            Ok(CurveData {
                euler: smooth_euler(g, n)?,
                poincare: Some(smooth_poincare(g, n)?),
                quartet: None,
            })
        }
        ModelKind::P1 => Ok(CurveData {
            euler: smooth_euler(0, n)?,
            poincare: Some(smooth_poincare(0, n)?),
            quartet: Some(p1_quartet(n)),
        }),
    }
}
