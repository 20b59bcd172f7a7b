use std::fs;
use std::path::Path;

use hilbheis_core::bps::{self, EulerSeries};
use hilbheis_core::graded::validate;
use hilbheis_core::heisenberg::{
    check_relations, d_grading, decompose as decompose_quartet, stabilization_check, SliceStatus,
};
use hilbheis_core::io::{read_json, read_quartet, write_json, write_quartet};
use hilbheis_core::macdonald::{check_duality, d_from_hilb, hilb_from_d, DGradedPoly, PoincareFamily};
use hilbheis_core::models::{generate, CurveData, GenerateOptions, ModelSpec, DEFAULT_COLENGTH_CAP};
use hilbheis_core::{Error, OperatorQuartet};

use crate::outcome::{Failure, Outcome};
use crate::{Common, CurveArgs, Direction, MacdonaldArgs};

type Result<T> = std::result::Result<T, Failure>;

const VALIDATION: &str = "validation";
const DECOMPOSITION: &str = "decomposition";
const STABILIZATION: &str = "stabilization";
const MACDONALD_IDENTITY: &str = "macdonald-identity";
const DUALITY: &str = "duality";
const TRANSFORM: &str = "macdonald-transform";

fn finish(o: Outcome, output: Option<&Path>) -> Result<Outcome> {
    let o = o.finish();
    if let Some(path) = output {
        write_json(path, &o.report)?;
    }
    Ok(o)
}

fn fmt_poly(p: &[u64], var: &str) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}{var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn fmt_signed(p: &[i64], var: &str) -> String {
    let mut s = String::new();
    for (i, &c) in p.iter().enumerate().filter(|(_, &c)| c != 0) {
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let mag = c.unsigned_abs();
        let body = if mag == 1 && i > 0 {
            mono
        } else {
            format!("{mag}{mono}")
        };
        if s.is_empty() {
            s = if c < 0 { format!("-{body}") } else { body };
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Validation and the six relations; returns whether everything held.
fn verify_into(o: &mut Outcome, q: &OperatorQuartet) -> Result<bool> {
    let v = validate(q);
    o.check(VALIDATION, v.passed, v.summary());
    o.section("validation", &v);
    if !v.passed {
        return Ok(false);
    }
    let r = check_relations(q)?;
    for rel in &r.relations {
        let (mut holds, mut outside) = (0, 0);
        for st in rel.slices.values() {
            match st {
                SliceStatus::Holds => holds += 1,
                SliceStatus::OutOfRange => outside += 1,
                _ => {}
            }
        }
        let detail = match rel.failures().next() {
            None => format!("holds on {holds} slices, {outside} beyond truncation"),
            Some((s, m)) => format!("fails at slice {s}, discrepancy {:?}", m.to_rows()),
        };
        o.check(&rel.name, rel.holds(), detail);
    }
    o.section("relations", &r.relations);
    Ok(r.passed)
}

fn describe(o: &mut Outcome, q: &OperatorQuartet) {
    o.line(format!(
        "quartet: N = {}, {} slices, total dimension {}, genus {}",
        q.truncation(),
        q.space.slices().count(),
        q.space.total_dim(),
        q.genus.map_or("unset".to_string(), |g| g.to_string())
    ));
}

pub fn verify(a: &Common) -> Result<Outcome> {
    let q = read_quartet(&a.input)?;
    let mut o = Outcome::new("verify");
    describe(&mut o, &q);
    verify_into(&mut o, &q)?;
    finish(o, a.output.as_deref())
}

fn decompose_into(o: &mut Outcome, q: &OperatorQuartet, genus: Option<u32>) -> Result<()> {
    if !verify_into(o, q)? {
        return Ok(());
    }
    let cert = match decompose_quartet(q) {
        Ok(c) => c,
        Err(e @ Error::RankDefect { .. }) => {
            o.check(DECOMPOSITION, false, e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    o.check(
        DECOMPOSITION,
        true,
        format!(
            "{} lowest-weight vectors span all {} slices",
            cert.lowest_weight.total_dim(),
            cert.slices.len()
        ),
    );
    let w: Vec<(i64, i64, usize)> = cert
        .lowest_weight
        .dims
        .slices()
        .map(|(s, d)| (s.degree, s.level, d))
        .collect();
    o.section("w", &w);
    o.section("slice_ranks", &cert.slices);
    let table: Vec<String> = w.iter().map(|(i, n, d)| format!("({i},{n}):{d}")).collect();
    o.line(format!("W = {{{}}}", table.join(", ")));

    let mut q = q.clone();
    if genus.is_some() {
        q.genus = genus;
    }
    let dg = d_grading(&q, &cert);
    o.line(format!("P_D = {}", dg.poly.to_laurent()));
    for w in &dg.warnings {
        o.line(format!("warning: {w}"));
    }
    o.section("d_graded", &dg);

    let g = dg.poly.genus();
    match stabilization_check(&q, g) {
        Ok(s) => {
            o.check(
                STABILIZATION,
                s.passed,
                format!(
                    "dim ker mu_minus_pt by level {:?}, dim W = {}",
                    s.kernel_dims, s.lowest_weight_total
                ),
            );
            o.section("stabilization", &s);
        }
        Err(e @ Error::InsufficientTruncation { .. }) => o.line(format!("stabilization skipped: {e}")),
        Err(e) => return Err(e.into()),
    }

    let top = q.truncation().max(0) as usize;
    let family = hilb_from_d(&dg.poly, top)?;
    let mut mismatches = Vec::new();
    for n in 0..=top {
        let mut actual = q.space.poincare(n as i64);
        while actual.last() == Some(&0) {
            actual.pop();
        }
        if actual != family.poly(n) {
            mismatches.push(format!(
                "level {n}: space has {}, transform gives {}",
                fmt_poly(&actual, "t"),
                fmt_poly(family.poly(n), "t")
            ));
        }
    }
    let detail = mismatches
        .first()
        .cloned()
        .unwrap_or_else(|| format!("P_n = [z^n] P_D / ((1-z)(1-t^2 z)) for n = 0..{top}"));
    o.check(MACDONALD_IDENTITY, mismatches.is_empty(), detail);
    Ok(())
}

pub fn decompose(a: &Common) -> Result<Outcome> {
    let q = read_quartet(&a.input)?;
    let mut o = Outcome::new("decompose");
    describe(&mut o, &q);
    decompose_into(&mut o, &q, a.genus)?;
    finish(o, a.output.as_deref())
}

fn load_spec(a: &CurveArgs) -> Result<ModelSpec> {
    let mut spec: ModelSpec = read_json(&a.common.input)?;
    if let Some(n) = a.common.truncation {
        spec.truncation = n;
    }
    if let Some(g) = a.common.genus {
        spec.genus = Some(g);
    }
    Ok(spec)
}

fn generate_for(a: &CurveArgs, spec: &ModelSpec) -> Result<CurveData> {
    let opts = GenerateOptions {
        jobs: a.jobs.max(1),
        force: a.force,
        cap: DEFAULT_COLENGTH_CAP,
    };
    generate(spec, opts).map_err(|e| match e {
        Error::EnumerationCap { .. } => Failure::input(format!("{e}; pass --force to enumerate anyway")),
        e => e.into(),
    })
}

pub fn curve(a: &CurveArgs) -> Result<Outcome> {
    let spec = load_spec(a)?;
    let data = generate_for(a, &spec)?;
    let mut o = Outcome::new("curve");
    o.line(format!(
        "Z = {:?} (g = {}, g~ = {:?})",
        data.euler.coeffs, data.euler.genus, data.euler.geometric_genus
    ));
    let mut files = vec!["euler.json"];
    if data.poincare.is_some() {
        files.push("poincare.json");
    }
    if data.quartet.is_some() {
        files.push("quartet.json");
    }
    if let Some(dir) = &a.common.output {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        write_json(&dir.join("euler.json"), &data.euler)?;
        if let Some(p) = &data.poincare {
            write_json(&dir.join("poincare.json"), p)?;
        }
        if let Some(q) = &data.quartet {
            write_quartet(&dir.join("quartet.json"), q)?;
        }
        o.line(format!("wrote {} to {}", files.join(", "), dir.display()));
    }
    o.section("spec", &spec);
    o.section("euler", &data.euler);
    if let Some(p) = &data.poincare {
        o.section("poincare", p);
    }
    o.section("files", &files);
    Ok(o.finish())
}

fn bps_into(o: &mut Outcome, z: &EulerSeries) {
    let r = bps::analyze(z);
    if let Some(l) = &r.l {
        o.line(format!("L(q) = {}", fmt_signed(l.coeffs(), "q")));
    }
    if let Some(n) = &r.ng {
        o.line(format!("n  = {:?}  (from Z)", n.n));
    }
    if let Some(n) = &r.ng_prime {
        o.line(format!("n' = {:?}  (from L)", n.n));
    }
    for c in &r.checks {
        o.check(c.name, c.passed, c.detail.clone());
    }
    o.section("bps", &r);
}

pub fn bps(a: &Common) -> Result<Outcome> {
    let mut z: EulerSeries = read_json(&a.input)?;
    if let Some(g) = a.genus {
        z.genus = g;
    }
    if let Some(n) = a.truncation {
        z.coeffs.truncate(n + 1);
    }
    let mut o = Outcome::new("bps");
    o.line(format!(
        "Z = {:?} (g = {}, g~ = {:?})",
        z.coeffs, z.genus, z.geometric_genus
    ));
    bps_into(&mut o, &z);
    finish(o, a.output.as_deref())
}

fn duality_into(o: &mut Outcome, d: &DGradedPoly) {
    let ok = check_duality(d);
    o.check(
        DUALITY,
        ok,
        if ok {
            "dim D_n H_k = dim D_(2g-n) H_(k+2g-2n)"
        } else {
            "D-graded table is not self-dual"
        },
    );
}

pub fn macdonald(a: &MacdonaldArgs) -> Result<Outcome> {
    let c = &a.common;
    let mut o = Outcome::new("macdonald");
    match a.direction {
        Direction::Inv => {
            let p: PoincareFamily = read_json(&c.input)?;
            p.check()?;
            let g = c
                .genus
                .ok_or_else(|| Failure::input("--genus is required for --direction inv"))?;
            let d = match d_from_hilb(&p, g) {
                Ok(d) => d,
                Err(e) => {
                    o.check(TRANSFORM, false, e.to_string());
                    return Ok(o.finish());
                }
            };
            o.check(TRANSFORM, true, format!("genus {g}, N = {}", p.truncation()));
            o.line(format!("P_D = {}", d.to_laurent()));
            duality_into(&mut o, &d);
            o.section("d_graded", &d);
            if let Some(path) = &c.output {
                write_json(path, &d)?;
            }
        }
        Direction::Fwd => {
            let d: DGradedPoly = read_json(&c.input)?;
            let top = c.truncation.unwrap_or(2 * d.genus() as usize + 2);
            duality_into(&mut o, &d);
            let p = match hilb_from_d(&d, top) {
                Ok(p) => p,
                Err(e) => {
                    o.check(TRANSFORM, false, e.to_string());
                    return Ok(o.finish());
                }
            };
            o.check(TRANSFORM, true, format!("genus {}, N = {top}", d.genus()));
            for (n, poly) in p.polys().iter().enumerate() {
                o.line(format!("P_{n} = {}", fmt_poly(poly, "t")));
            }
            o.section("poincare", &p);
            if let Some(path) = &c.output {
                write_json(path, &p)?;
            }
        }
    }
    Ok(o.finish())
}

pub fn report(a: &CurveArgs) -> Result<Outcome> {
    let spec = load_spec(a)?;
    let data = generate_for(a, &spec)?;
    let mut o = Outcome::new("report");
    o.section("spec", &spec);
    o.section("euler", &data.euler);
    o.line(format!(
        "Z = {:?} (g = {}, g~ = {:?})",
        data.euler.coeffs, data.euler.genus, data.euler.geometric_genus
    ));
    bps_into(&mut o, &data.euler);
    if let Some(p) = &data.poincare {
        match d_from_hilb(p, data.euler.genus) {
            Ok(d) => {
                o.check(TRANSFORM, true, format!("P_D = {}", d.to_laurent()));
                duality_into(&mut o, &d);
                o.section("d_graded", &d);
            }
            Err(e) => {
                o.check(TRANSFORM, false, e.to_string());
            }
        }
    }
    if let Some(q) = &data.quartet {
        decompose_into(&mut o, q, None)?;
    }
    finish(o, a.common.output.as_deref())
}
