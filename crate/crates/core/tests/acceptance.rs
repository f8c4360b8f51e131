//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture`.

mod common;

use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use ternary_covariants::certifier::build_matrix;
use ternary_covariants::coeff_engine::{q_t, Case, GConfig};
use ternary_covariants::covariants::{
    bracket, check_triple_structure, clebsch_i, eval_covariant, eval_s, eval_t, expand_covariant,
    substitute_expansion,
};
use ternary_covariants::family::{build_f_c, divisible_by_x1_power, q_series_direct, InterpNodes};
use ternary_covariants::forms::{sum_of_powers, WeightedPower};

use common::{q, random_direction, random_linear, random_nodes, random_unimodular, rng};

/// Every criterion is an exact equality; there is no numeric tolerance.
const TOLERANCE: &str = "exact";
const D1_RANK: u64 = 15;
const D1_DIMS: (u64, u64) = (15, 22);
const D2_RANK: u64 = 45;
const D2_DIMS: (u64, u64) = (45, 57);
const RANDOM_BUILDS: usize = 20;
const UNIMODULAR_SAMPLES: usize = 5;

/// Criteria that cannot hold as stated. Each is still evaluated and
/// printed; the suite fails if one of them unexpectedly turns green, so
/// this list stays accurate.
const KNOWN_RED: &[&str] = &["8b"];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run_certify(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_certify"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout).map_err(|e| format!("exit {code}, bad JSON: {e}"))?;
    Ok((code, json))
}

fn check_sweep(cert: &Value, code: i32, prime: u64, count: usize, rank: u64, dims: (u64, u64)) -> Outcome {
    ensure(code == 0, format!("exit code {code}"))?;
    ensure(cert["prime"] == prime, format!("prime {}", cert["prime"]))?;
    ensure(
        (cert["rows"].as_u64(), cert["cols"].as_u64()) == (Some(dims.0), Some(dims.1)),
        format!("dims {}x{}", cert["rows"], cert["cols"]),
    )?;
    let ranks = cert["ranks"].as_array().ok_or("no ranks")?;
    ensure(ranks.len() == count, format!("{} ranks", ranks.len()))?;
    let bad: Vec<&Value> = ranks.iter().filter(|r| r["rank"] != rank).collect();
    ensure(bad.is_empty(), format!("deficient: {bad:?}"))?;
    ensure(cert["all_full_rank"] == true, "all_full_rank false")?;
    let g: Vec<[i64; 3]> = serde_json::from_value(cert["g_forms"].clone()).map_err(|e| e.to_string())?;
    ensure(g == ternary_covariants::coeff_engine::G_FORMS, "unexpected g")?;
    Ok(format!(
        "{count} ranks all {rank}, {}x{}, crosscheck {}",
        dims.0, dims.1, cert["oracle_crosscheck"]["samples"]
    ))
}

fn rat(f: &ternary_covariants::forms::HomForm<BigInt>) -> ternary_covariants::forms::HomForm<BigRational> {
    f.map(|v| BigRational::from_integer(v.clone()))
}

fn criterion_3() -> Outcome {
    let cfg = GConfig::standard(Case::D1);
    let (n, k, d) = (12u32, 27u32, 37u32);
    for y in &cfg.ys {
        let series = q_series_direct(cfg.case.kind(), &cfg.g_terms(), &InterpNodes::consecutive(k as usize), y, n)
            .map_err(|e| e.to_string())?;
        for t in k..=d {
            let engine = q_t(n, t, y, &cfg).map_err(|e| e.to_string())?;
            ensure(series.q(t as usize) == rat(&engine), format!("y={:?} t={t}", y.0))?;
        }
    }
    Ok(format!("Q_t equal for t in [{k}, {d}], both y"))
}

fn criterion_4() -> Outcome {
    let cfg = GConfig::standard(Case::D1);
    let (n, k, d) = (12u32, 27usize, 37usize);
    for y in &cfg.ys {
        let a = q_series_direct(cfg.case.kind(), &cfg.g_terms(), &InterpNodes::consecutive(k), y, n)
            .map_err(|e| e.to_string())?;
        let b = q_series_direct(cfg.case.kind(), &cfg.g_terms(), &InterpNodes::powers_of_two(k), y, n)
            .map_err(|e| e.to_string())?;
        for t in k..=d {
            ensure(a.q(t) == b.q(t), format!("y={:?} t={t}", y.0))?;
        }
    }
    Ok("b=(0..26) and b=(1,2,4,...) agree for t >= 27".into())
}

fn criterion_5() -> Outcome {
    let r = check_triple_structure(7).map_err(|e| e.to_string())?;
    ensure(r.threshold == 7, format!("threshold {}", r.threshold))?;
    ensure(r.weight_violations.is_empty(), format!("{} weight violations", r.weight_violations.len()))?;
    ensure(r.triple_violations.is_empty(), format!("{} triple violations", r.triple_violations.len()))?;
    ensure(r.passed(), "report not passed")?;
    Ok(format!("{} monomials, threshold {}", r.monomials, r.threshold))
}

fn criterion_6() -> Outcome {
    for (d, k, seed) in [(37u32, 27usize, 11u64), (65, 47, 12)] {
        let mut r = rng(seed);
        for draw in 0..RANDOM_BUILDS {
            let (nodes, c) = random_nodes(&mut r, k);
            let b = InterpNodes::from_ints(&nodes).map_err(|e| e.to_string())?;
            let y = random_direction(&mut r);
            let terms = build_f_c(&b, &y, d, &q(c)).map_err(|e| e.to_string())?;
            let f = sum_of_powers(&terms, d).to_monomial();
            ensure(!f.is_zero(), format!("d={d} draw {draw}: zero"))?;
            ensure(divisible_by_x1_power(&f, k as u32), format!("d={d} draw {draw}: not divisible"))?;
        }
    }
    Ok(format!("{RANDOM_BUILDS} draws each at d=37 (K=27) and d=65 (K=47)"))
}

fn criterion_7() -> Outcome {
    let mut checked = Vec::new();
    for (case, ns) in [(Case::D1, [12u32, 13, 14].as_slice()), (Case::D2, [21u32, 22].as_slice())] {
        let cfg = GConfig::standard(case);
        for &n in ns {
            let a = build_matrix(n, &cfg).map_err(|e| e.to_string())?.matrix;
            let b = build_matrix(n + case.period(), &cfg).map_err(|e| e.to_string())?.matrix;
            ensure(a == b, format!("{} n={n}", case.tag()))?;
            checked.push(format!("{}:{n}", case.tag()));
        }
    }
    Ok(format!("M(n) = M(n+period) at {}", checked.join(", ")))
}

fn criterion_8(certs: &[&Value]) -> (Outcome, Outcome) {
    let mut divisions = 0;
    let mut non_integral = 0;
    let mut integrality = Ok(());
    for c in certs {
        let led = &c["divisibility"];
        divisions += led["divisions"].as_u64().unwrap_or(0);
        non_integral += led["non_integral_quotients"].as_u64().unwrap_or(0);
        if led["all_p_integral"] != true || !c["failure"].is_null() {
            integrality = Err(format!("{}: failure {}", c["case"], c["failure"]));
        }
    }
    let p_integral = integrality.map(|_| format!("{divisions} quotients, all p-integral, no entry failure"));
    let over_z = if non_integral == 0 {
        Ok(format!("{divisions} quotients, all integers"))
    } else {
        Err(format!("{non_integral} of {divisions} quotients Q_t / C(n, m) are not integers"))
    };
    (p_integral, over_z)
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    for _ in 0..50 {
        let (u, v, w) = (random_linear(&mut r, 9), random_linear(&mut r, 9), random_linear(&mut r, 9));
        let b = bracket(&u, &v, &w);
        ensure(bracket(&v, &u, &w) == -b.clone(), "bracket not alternating")?;
        ensure(bracket(&u, &w, &v) == -b.clone(), "bracket not alternating")?;
        ensure(bracket(&w, &v, &u) == -b, "bracket not alternating")?;
        ensure(bracket(&u, &v, &u) == BigInt::from(0), "bracket nonzero on repeat")?;
        let e = random_linear(&mut r, 9);
        let ls = [&u, &v, &w, &e];
        let base = clebsch_i(ls[0], ls[1], ls[2], ls[3]);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        if (0..4).all(|x| idx.contains(&x)) {
                            ensure(clebsch_i(ls[a], ls[b], ls[c], ls[d]) == base, "I not symmetric")?;
                        }
                    }
                }
            }
        }
    }

    let g = GConfig::standard(Case::D1).g_terms();
    for _ in 0..UNIMODULAR_SAMPLES {
        let m = random_unimodular(&mut r);
        let gm: Vec<WeightedPower<BigInt>> =
            g.iter().map(|t| WeightedPower::new(t.weight.clone(), t.form.pullback(&m))).collect();
        ensure(eval_s(&gm, 37).unwrap() == eval_s(&g, 37).unwrap().substitute(&m), "S_37 not equivariant")?;
        ensure(eval_t(&gm, 38).unwrap() == eval_t(&g, 38).unwrap().substitute(&m), "T_38 not equivariant")?;
    }

    let expansion = expand_covariant(4).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let terms: Vec<WeightedPower<BigRational>> = (0..6)
            .map(|i| {
                let l = random_linear(&mut r, 6);
                WeightedPower::new(q(i - 2), l.map(|v| BigRational::from_integer(v.clone())))
            })
            .collect();
        let expanded = substitute_expansion(&expansion, 4, &sum_of_powers(&terms, 4));
        ensure(eval_covariant(&terms, 4).unwrap() == expanded, "d=4 expansion differs")?;
    }
    Ok(format!("alternation, I symmetry, {UNIMODULAR_SAMPLES} unimodular samples, d=4 oracle"))
}

#[test]
fn acceptance() {
    println!("acceptance criteria (tolerance: {TOLERANCE})");
    let mut results: Vec<(&str, &str, Outcome)> = Vec::new();

    let d1 = run_certify(&["--case", "d1", "--n-start", "12", "--count", "110"]);
    results.push((
        "1",
        "d=3n+1 sweep: 110 ranks of 15 over F_11",
        d1.as_ref()
            .map_err(Clone::clone)
            .and_then(|(code, c)| check_sweep(c, *code, 11, 110, D1_RANK, D1_DIMS)),
    ));
    let d2 = run_certify(&["--case", "d2", "--n-start", "21", "--count", "342"]);
    results.push((
        "2",
        "d=3n+2 sweep: 342 ranks of 45 over F_19",
        d2.as_ref()
            .map_err(Clone::clone)
            .and_then(|(code, c)| check_sweep(c, *code, 19, 342, D2_RANK, D2_DIMS)),
    ));
    results.push(("3", "coefficient engine equals direct series at n=12", criterion_3()));
    results.push(("4", "Q_t independent of the node vector at n=12", criterion_4()));
    results.push(("5", "triple structure at d=7", criterion_5()));
    results.push(("6", "interpolation family divisible by x1^K", criterion_6()));
    results.push(("7", "periodicity of M(n)", criterion_7()));
    let certs: Vec<&Value> = [&d1, &d2].iter().filter_map(|r| r.as_ref().ok().map(|(_, c)| c)).collect();
    let (p_integral, over_z) = if certs.len() == 2 {
        criterion_8(&certs)
    } else {
        (Err("sweep did not run".into()), Err("sweep did not run".into()))
    };
    results.push(("8a", "divisibility ledger: every reduced value p-integral", p_integral));
    results.push(("8b", "divisibility ledger: every binomial division exact over Z", over_z));
    results.push(("9", "property suite", criterion_9()));

    let mut unexpected = Vec::new();
    for (id, name, outcome) in &results {
        let known_red = KNOWN_RED.contains(id);
        match outcome {
            Ok(detail) => {
                println!("PASS  [{id}] {name}: {detail}");
                if known_red {
                    unexpected.push(format!("{id} is listed as known red but passed"));
                }
            }
            Err(detail) => {
                let tag = if known_red { " (known red)" } else { "" };
                println!("FAIL  [{id}] {name}: {detail}{tag}");
                if !known_red {
                    unexpected.push(format!("{id}: {detail}"));
                }
            }
        }
    }
    assert!(unexpected.is_empty(), "unexpected acceptance results: {unexpected:?}");
}
