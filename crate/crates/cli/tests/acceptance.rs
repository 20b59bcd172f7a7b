//! One line per acceptance criterion, printed straight to stdout so the
//! verdicts show up in captured test runs as well.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use common::{curve, hilbheis, s, write};
use hilbheis_core::bps::{check_q_symmetry, compare_bps, d_euler_from_z, ng_from_z, ng_prime_from_l, EulerSeries};
use hilbheis_core::heisenberg::{coordinates, decompose, free_quartet, lowest_weight, reconstruct};
use hilbheis_core::io::{read_quartet, write_json, write_quartet};
use hilbheis_core::macdonald::{check_duality, d_from_hilb, hilb_from_d, DGradedPoly, PoincareFamily};
use hilbheis_core::models::{
    count_ideals, count_ideals_by_generators, generate, local_euler_series, smooth_euler, smooth_poincare,
    GenerateOptions, LocalModel, ModelKind, ModelSpec, NumericalSemigroup,
};
use hilbheis_core::{BigradedSpace, Rational, Slice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::tempdir;

const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    let note = format!("{:.3}s of {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64());
    match r {
        Ok(detail) if elapsed <= limit => Ok(format!("{detail} [{note}]")),
        Ok(detail) => Err(format!("{detail}; too slow [{note}]")),
        Err(e) => Err(format!("{e} [{note}]")),
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

/// `(1 + tz)^(2g)` entered coefficient by coefficient.
fn binomial_d(g: u32) -> DGradedPoly {
    let mut d = DGradedPoly::new(g);
    for k in 0..=2 * g as i64 {
        d.set(k, k, binom(2 * g as u64, k as u64));
    }
    d
}

fn unit(g: u32, h: usize) -> Vec<i64> {
    (0..=g as usize).map(|i| i64::from(i == h)).collect()
}

fn c1_p1_end_to_end() -> Outcome {
    let dir = tempdir().unwrap();
    let out = curve(dir.path(), "p1", r#"{"type":"p1","N":6}"#);
    let qpath = out.join("quartet.json");
    let v = hilbheis(&["verify", "--input", s(&qpath), "--format", "json"]);
    ensure(v.code == 0, || format!("verify exited {}: {}", v.code, v.stderr))?;
    let report = v.json();
    for rel in report["relations"].as_array().unwrap() {
        let statuses: Vec<&str> = rel["slices"]
            .as_object()
            .unwrap()
            .values()
            .map(|st| st["status"].as_str().unwrap())
            .collect();
        ensure(statuses.iter().all(|&st| st != "fails"), || {
            format!("{} fails", rel["name"])
        })?;
        ensure(statuses.contains(&"holds"), || {
            format!("{} never in range", rel["name"])
        })?;
    }
    ensure(report["relations"].as_array().unwrap().len() == 6, || {
        "expected six relations".into()
    })?;

    let d = hilbheis(&["decompose", "--input", s(&qpath), "--format", "json"]);
    ensure(d.code == 0, || format!("decompose exited {}: {}", d.code, d.stderr))?;
    let report = d.json();
    ensure(report["w"] == serde_json::json!([[0, 0, 1]]), || {
        format!("W = {}", report["w"])
    })?;
    let q = read_quartet(&qpath).map_err(|e| e.to_string())?;
    let fam = smooth_poincare(0, 6).map_err(|e| e.to_string())?;
    let mut by_level: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for r in report["slice_ranks"].as_array().unwrap() {
        let slice: Slice = r["slice"].as_str().unwrap().parse().unwrap();
        let p = by_level.entry(slice.level).or_default();
        let i = slice.degree as usize;
        if p.len() <= i {
            p.resize(i + 1, 0);
        }
        p[i] += r["dim"].as_u64().unwrap();
    }
    for n in 0..=6 {
        ensure(by_level[&(n as i64)] == fam.poly(n), || {
            format!("level {n} dims differ from P^{n}")
        })?;
        ensure(q.space.poincare(n as i64) == fam.poly(n), || {
            format!("file dims at level {n}")
        })?;
    }
    Ok("six relations exact on every in-range slice; W = {(0,0):1}; slice dims = smooth_poincare(0,6)".into())
}

fn random_w(rng: &mut ChaCha8Rng) -> BigradedSpace {
    let mut w = BigradedSpace::new(4);
    for _ in 0..rng.gen_range(1..=5) {
        w.set_dim(
            Slice::new(rng.gen_range(0..=6), rng.gen_range(0..=4)),
            rng.gen_range(1..=3),
        );
    }
    w
}

fn c2_free_module_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut vectors = 0;
    for trial in 0..50 {
        let w = random_w(&mut rng);
        let q = free_quartet(&w, 6);
        let lw = lowest_weight(&q).map_err(|e| format!("trial {trial}: {e}"))?;
        let got: Vec<_> = lw.dims.slices().collect();
        let want: Vec<_> = w.slices().collect();
        ensure(got == want, || format!("trial {trial}: W = {got:?}, expected {want:?}"))?;
        let cert = decompose(&q).map_err(|e| format!("trial {trial}: {e}"))?;
        let slices: Vec<_> = q.space.slices().collect();
        for _ in 0..100 {
            let (sl, d) = slices[rng.gen_range(0..slices.len())];
            let v: Vec<Rational> = (0..d)
                .map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect();
            let c = coordinates(&q, &cert, sl, &v).map_err(|e| format!("trial {trial}: {e}"))?;
            let back = reconstruct(&q, &cert, sl, &c).map_err(|e| format!("trial {trial}: {e}"))?;
            ensure(back == v, || format!("trial {trial}: reconstruction differs at {sl}"))?;
            vectors += 1;
        }
    }
    Ok(format!(
        "50 random W recovered exactly; {vectors} vectors reconstructed"
    ))
}

fn c3_smooth_curves() -> Outcome {
    for g in 1..=3u32 {
        let n = 2 * g as usize + 2;
        let p = smooth_poincare(g, n).map_err(|e| e.to_string())?;
        let d = d_from_hilb(&p, g).map_err(|e| e.to_string())?;
        ensure(d == binomial_d(g), || format!("g = {g}: D = {}", d.to_laurent()))?;
        ensure(check_duality(&d), || format!("g = {g}: duality fails"))?;
        let z = smooth_euler(g, n).map_err(|e| e.to_string())?;
        let a = ng_from_z(&z).map_err(|e| format!("g = {g}: {e}"))?;
        let l = d_euler_from_z(&z).map_err(|e| e.to_string())?;
        let b = ng_prime_from_l(&l).map_err(|e| e.to_string())?;
        ensure(a.n == unit(g, g as usize), || format!("g = {g}: n = {:?}", a.n))?;
        ensure(b.n == unit(g, g as usize), || format!("g = {g}: n' = {:?}", b.n))?;
    }
    Ok("g = 1,2,3: D = (1+tz)^(2g), self-dual, n = n' = e_g".into())
}

fn semigroup_z(gens: &[u64], n: usize) -> Result<EulerSeries, String> {
    let spec = ModelSpec {
        kind: ModelKind::Semigroup,
        generators: Some(gens.to_vec()),
        genus: None,
        truncation: n,
    };
    generate(&spec, GenerateOptions::default())
        .map(|d| d.euler)
        .map_err(|e| e.to_string())
}

fn c4_cusp() -> Outcome {
    let s = NumericalSemigroup::new(&[2, 3]).map_err(|e| e.to_string())?;
    let subsets: Vec<u64> = (0..=12).map(|k| count_ideals(&s, k)).collect();
    let antichains = count_ideals_by_generators(&s, 12);
    let expect: Vec<u64> = (0..=12).map(|k| if k < 2 { 1 } else { 2 }).collect();
    ensure(subsets == expect, || format!("subset search: {subsets:?}"))?;
    ensure(antichains == expect, || format!("generator search: {antichains:?}"))?;
    let z = semigroup_z(&[2, 3], 12)?;
    let zexp: Vec<i64> = (0..=12).map(|k| if k == 0 { 1 } else { 2 * k }).collect();
    ensure(z.coeffs == zexp, || format!("Z = {:?}", z.coeffs))?;
    let l = d_euler_from_z(&z).map_err(|e| e.to_string())?;
    ensure(l.coeffs() == [1, 0, 1], || format!("L = {:?}", l.coeffs()))?;
    ensure(check_q_symmetry(&l), || "L not symmetric".into())?;
    let a = ng_from_z(&z).map_err(|e| e.to_string())?;
    let b = ng_prime_from_l(&l).map_err(|e| e.to_string())?;
    ensure(a.n == [2, 1] && b.n == [2, 1], || {
        format!("n = {:?}, n' = {:?}", a.n, b.n)
    })?;
    ensure(compare_bps(&a, &b), || "routes disagree".into())?;
    Ok("ideal counts agree to colength 12; Z = (1,2,4,6,...); L = 1+q^2; (n0,n1) = (2,1) both routes".into())
}

fn c5_node() -> Outcome {
    let dir = tempdir().unwrap();
    let out = curve(dir.path(), "node", r#"{"type":"node","N":8}"#);
    let r = hilbheis(&["bps", "--input", s(&out.join("euler.json")), "--format", "json"]);
    ensure(r.code == 0, || format!("bps exited {}: {}", r.code, r.stderr))?;
    let report = r.json();
    let bps = &report["bps"];
    ensure(bps["l"]["coeffs"] == serde_json::json!([1, -1, 1]), || {
        format!("L = {}", bps["l"])
    })?;
    ensure(bps["ng"]["n"] == serde_json::json!([1, 1]), || {
        format!("n = {}", bps["ng"])
    })?;
    ensure(bps["ng_prime"]["n"] == serde_json::json!([1, 1]), || {
        format!("n' = {}", bps["ng_prime"])
    })?;
    let total: i64 = bps["l"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .sum();
    ensure(total == 1 && bps["ng_prime"]["n"][0] == 1, || {
        format!("sum L = {total}")
    })?;
    let passed = |name: &str| {
        report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .any(|c| c["name"] == name && c["passed"] == true)
    };
    ensure(passed("q-symmetry"), || "symmetry check".into())?;
    Ok("L = 1 - q + q^2 symmetric; (n0,n1) = (1,1); sum L = n'_0 = 1".into())
}

fn c6_torus_knot() -> Outcome {
    let cap = 16;
    let s = NumericalSemigroup::new(&[2, 5]).map_err(|e| e.to_string())?;
    let local = local_euler_series(&LocalModel::Semigroup(s), cap, 1).map_err(|e| e.to_string())?;
    let stable = *local.coeffs.last().unwrap();
    let settled = local.coeffs.iter().position(|&c| c == stable).unwrap();
    ensure(stable == 3, || format!("local series {:?}", local.coeffs))?;
    ensure(settled + 4 <= cap, || {
        format!("series only settles at colength {settled}")
    })?;
    let z = semigroup_z(&[2, 5], cap)?;
    let l = d_euler_from_z(&z).map_err(|e| e.to_string())?;
    ensure(l.coeffs() == [1, 0, 1, 0, 1], || format!("L = {:?}", l.coeffs()))?;
    let a = ng_from_z(&z).map_err(|e| e.to_string())?;
    let b = ng_prime_from_l(&l).map_err(|e| e.to_string())?;
    ensure(b.n == [3, 4, 1], || format!("n' = {:?}", b.n))?;
    ensure(b.n[0] == stable as i64, || "n'_0 differs from stable count".into())?;
    ensure(compare_bps(&a, &b), || format!("n = {:?}", a.n))?;
    Ok(format!(
        "local series {:?} stable at 3 from colength {settled}; L = 1+q^2+q^4; n' = (3,4,1) = n",
        local.coeffs
    ))
}

/// Symmetric D-table for genus `g` with `D_(0,0) = 1`.
fn random_d(rng: &mut ChaCha8Rng) -> DGradedPoly {
    let g = rng.gen_range(0..=3u32);
    let g2 = 2 * g as i64;
    let mut d = DGradedPoly::new(g);
    for _ in 0..rng.gen_range(0..=6) {
        // both (k, n) and its partner keep degrees in [0, 2g]
        let n = rng.gen_range(0..=g2);
        let k = rng.gen_range((2 * n - g2).max(0)..=(2 * n).min(g2));
        let c = rng.gen_range(0..=5u64);
        d.set(k, n, c);
        d.set(k + g2 - 2 * n, g2 - n, c);
    }
    d.set(0, 0, 1);
    d.set(g2, g2, 1);
    d
}

fn c7_transform_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for trial in 0..100 {
        let d = random_d(&mut rng);
        let top = 2 * d.genus() as usize + 2;
        let p = hilb_from_d(&d, top).map_err(|e| format!("trial {trial}: {e}"))?;
        let back = d_from_hilb(&p, d.genus()).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(back == d, || {
            format!("trial {trial}: {} became {}", d.to_laurent(), back.to_laurent())
        })?;
    }
    Ok("100 random tables (g <= 3, coefficients <= 5) round-trip exactly".into())
}

fn expect_failure(args: &[&str], check: &str) -> Result<(), String> {
    let r = hilbheis(args);
    ensure(r.code == 1, || {
        format!("{} exited {} (want 1): {}", args[0], r.code, r.stderr)
    })?;
    ensure(r.stderr.contains(check), || {
        format!("{} did not name {check:?}: {}", args[0], r.stderr)
    })
}

fn c8_negative_controls() -> Outcome {
    let dir = tempdir().unwrap();
    let p = dir.path();

    let mut q = hilbheis_core::models::p1_quartet(6);
    q.mu_minus_c.block_mut(Slice::new(0, 3)).unwrap()[(0, 0)] = Rational::new(5, 2);
    let qpath = p.join("perturbed.json");
    write_quartet(&qpath, &q).map_err(|e| e.to_string())?;
    expect_failure(&["verify", "--input", s(&qpath)], "[mu_minus_C, mu_plus_pt] = id")?;

    let asym = write(p, "asym.json", r#"{"coeffs":[1,3,5,7,9,11],"g":1,"g_tilde":null}"#);
    expect_failure(&["bps", "--input", s(&asym)], "q-symmetry")?;

    let mut fam = smooth_poincare(1, 4).map_err(|e| e.to_string())?;
    let mut polys = fam.polys().to_vec();
    polys[2][2] += 1;
    fam = PoincareFamily::new(polys).map_err(|e| e.to_string())?;
    let fpath = p.join("family.json");
    write_json(&fpath, &fam).map_err(|e| e.to_string())?;
    expect_failure(
        &["macdonald", "--input", s(&fpath), "--genus", "1", "--direction", "inv"],
        "macdonald-transform",
    )?;

    let short = write(p, "short.json", r#"{"coeffs":[1,2,4,6],"g":2,"g_tilde":0}"#);
    expect_failure(&["bps", "--input", s(&short)], "truncation")?;
    Ok("perturbed block, asymmetric L, perturbed family, undersized truncation all exit 1 naming the check".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 P1 end-to-end", 1, c1_p1_end_to_end),
        ("2 free-module recovery", 10, c2_free_module_recovery),
        ("3 smooth curves g = 1..3", 1, c3_smooth_curves),
        ("4 cusp <2,3>", 5, c4_cusp),
        ("5 node", 1, c5_node),
        ("6 torus knot <2,5>", 30, c6_torus_knot),
        ("7 transform round trip", 5, c7_transform_round_trip),
        ("8 negative controls", 5, c8_negative_controls),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (name, secs, f) in criteria {
        let line = match timed(Duration::from_secs(secs), f) {
            Ok(detail) => format!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed.push(name);
                format!("FAIL  criterion {name}: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
