mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use num_traits::Signed;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use reqsel::analysis::{generate_synthetic, percent_grid, sweep, SyntheticSpec};
use reqsel::dataset::{case_study, case_study_requirements, CASE_STUDY_VALUES};
use reqsel::dependency_graph::{
    brute_force_influence, propagate_strengths, InfluenceMatrix, Quality, ValueDependencyGraph,
};
use reqsel::identification::{compute_eells, woolf_interval};
use reqsel::preferences::{binary_stats, resample_matrix, PreferenceMatrix};
use reqsel::selection_models::{build_model, export_lp, BuildOptions, LinearModel, Method, SelectionProblem};
use reqsel::solver::{solve, solve_with, Solution, SolverConfig, Status};
use reqsel::valuation::{evaluate_selection, penalties};
use reqsel::Scalar;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> std::result::Result<Duration, String> {
    let e = t.elapsed();
    check(e < limit, format!("took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn worked_examples() -> Outcome {
    let t = Instant::now();
    let mut g: ValueDependencyGraph<Q> = ValueDependencyGraph::with_size(4);
    g.add_edge(0, 1, q(4, 10), Quality::Positive).unwrap();
    g.add_edge(1, 3, q(3, 10), Quality::Positive).unwrap();
    g.add_edge(0, 2, q(8, 10), Quality::Positive).unwrap();
    g.add_edge(2, 3, q(8, 10), Quality::Positive).unwrap();
    g.add_edge(0, 3, q(1, 10), Quality::Negative).unwrap();
    let m = propagate_strengths(&g);
    check(m.pos(0, 3) == q(8, 10), format!("pos(1,4) = {}", m.pos(0, 3)))?;
    check(m.neg(0, 3) == q(1, 10), format!("neg(1,4) = {}", m.neg(0, 3)))?;
    check(m.influence(0, 3) == q(7, 10), format!("I(1,4) = {}", m.influence(0, 3)))?;

    let mut g2: ValueDependencyGraph<Q> = ValueDependencyGraph::with_size(4);
    let edges = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 3), (2, 3), (3, 1), (3, 2)];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let quality = if e == 2 { Quality::Negative } else { Quality::Positive };
        g2.add_edge(a, b, q(1, 2), quality).unwrap();
    }
    let (vdl, nvdl) = g2.vdl_nvdl().unwrap();
    check(vdl == q(8, 12) && nvdl == Some(q(1, 8)), format!("VDL {vdl}, NVDL {nvdl:?}"))?;

    let tenth = |v: i64| q(v, 10);
    let rows = vec![
        vec![tenth(0), tenth(5), tenth(7), tenth(7)],
        vec![tenth(2), tenth(0), tenth(2), tenth(3)],
        vec![tenth(6), tenth(5), tenth(0), tenth(7)],
        vec![tenth(0); 4],
    ];
    let inf = InfluenceMatrix::from_influence(&rows).unwrap();
    let theta = penalties(&inf, &[true, true, true, false]).unwrap();
    check(
        theta[..3] == [tenth(7), tenth(3), tenth(7)],
        format!("theta {theta:?}"),
    )?;
    let e = within(t, Duration::from_secs(1))?;
    Ok(format!("I(1,4)=7/10, VDL=2/3, NVDL=1/8, theta=(7/10,3/10,7/10) in {e:?}"))
}

fn closure_oracle() -> Outcome {
    let t = Instant::now();
    let mut r = rng(2);
    for case in 0..200 {
        let n = r.random_range(2..=8);
        let density = r.random_range(0.05..=0.5);
        let nvdl = [0.0, 0.25, 0.5][case % 3];
        let g = random_vdg(&mut r, n, density, nvdl);
        let fast = propagate_strengths(&g);
        let slow = brute_force_influence(&g, 2 * n).unwrap();
        check(fast == slow, format!("graph {case} (n={n}) differs from walk enumeration"))?;
    }
    let e = within(t, Duration::from_secs(30))?;
    Ok(format!("200 graphs identical in {e:?}"))
}

fn penalty_rows_hold<T: Scalar>(m: &LinearModel<T>, s: &Solution<T>) -> bool {
    let layout = m.meta.penalty.as_ref().expect("penalised model");
    match &layout.g {
        Some(g) => g.iter().zip(&m.meta.x).all(|(&gv, &xv)| s.values[gv] == s.values[xv]),
        None => true,
    }
}

fn solver_oracle() -> Outcome {
    let t = Instant::now();
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let n = 2 + (seed as usize % 11);
        let p = random_problem(&mut r, n);
        let m = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
        let s = solve(&m).unwrap();
        let (best, x) = enumerate(&p, Method::Dars).ok_or(format!("seed {seed}: enumeration found nothing"))?;
        check(s.status == Status::Optimal, format!("seed {seed}: status {:?}", s.status))?;
        check(s.objective == best, format!("seed {seed}: {} vs {}", s.objective, best))?;
        check(s.x == x, format!("seed {seed}: selection differs from lexicographic optimum"))?;
    }
    let e = within(t, Duration::from_secs(120))?;
    Ok(format!("100 instances, n in 2..=12, identical in {e:?}"))
}

fn penalty_consistency() -> Outcome {
    let mut checked = 0;
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let p = random_problem(&mut r, 2 + (seed as usize % 11));
        let m = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
        let s = solve(&m).unwrap();
        let e = evaluate_selection(&p.requirements, &p.influence_or_zero(), &s.x).unwrap();
        check(e.ov == s.objective, format!("exact seed {seed}: ov {} vs objective {}", e.ov, s.objective))?;
        check(penalty_rows_hold(&m, &s), format!("exact seed {seed}: g differs from x"))?;
        checked += 1;
    }
    for seed in 0..20u64 {
        let spec = SyntheticSpec::new(30, seed).with_levels(0.1, 0.4, 0.05, 0.3);
        let p = generate_synthetic(&spec).unwrap().problem;
        let m = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
        let s = solve(&m).unwrap();
        if !s.has_point() {
            continue;
        }
        let e = evaluate_selection(&p.requirements, &p.influence_or_zero(), &s.x).unwrap();
        check(
            (e.ov - s.objective).abs() <= 1e-6,
            format!("float seed {seed}: ov {} vs objective {}", e.ov, s.objective),
        )?;
        check(penalty_rows_hold(&m, &s), format!("float seed {seed}: g differs from x"))?;
        checked += 1;
    }
    Ok(format!("{checked} optima consistent"))
}

/// Per instance: DARS never loses on OV, and wins somewhere when it should.
fn dominates<T: Scalar>(p: &SelectionProblem<T>, expect_strict: bool, label: &str) -> std::result::Result<bool, String> {
    let grid = percent_grid::<T>();
    let report = sweep(p, &grid, &[Method::Pcbk, Method::Sbk, Method::Dars], &SolverConfig::default())
        .map_err(|e| format!("{label}: {e}"))?;
    let mut strict = false;
    for chunk in report.rows.chunks(3) {
        let (pcbk, sbk, dars) = (&chunk[0], &chunk[1], &chunk[2]);
        check(
            dars.ov_pct >= pcbk.ov_pct - T::slack() && dars.ov_pct >= sbk.ov_pct - T::slack(),
            format!("{label} at {}%: DARS {} PCBK {} SBK {}", dars.percent, dars.ov_pct, pcbk.ov_pct, sbk.ov_pct),
        )?;
        strict |= dars.ov_pct > pcbk.ov_pct + T::slack() || dars.ov_pct > sbk.ov_pct + T::slack();
    }
    check(strict || !expect_strict, format!("{label}: no level where DARS is strictly better"))?;
    Ok(strict)
}

fn dominance() -> Outcome {
    let mut strict = 0;
    let mut expected = 0;
    for seed in 0..50u64 {
        let mut r = rng(5000 + seed);
        let n = r.random_range(6..=10);
        let mut p = random_problem(&mut r, n);
        let nvdl = [0.25, 0.5][seed as usize % 2];
        let g = random_vdg(&mut r, n, 0.3, nvdl);
        let inf = propagate_strengths(&g);
        let want = !inf.is_zero() && g.negative_count() > 0;
        p.influence = Some(inf);
        expected += usize::from(want);
        strict += usize::from(dominates(&p, want, &format!("random {seed}"))?);
    }
    let base = case_study::<Q>(q(100, 1));
    for seed in 0..5u64 {
        let mut r = rng(9000 + seed);
        let g = random_vdg(&mut r, 27, 0.05, 0.3);
        let inf = propagate_strengths(&g);
        let want = !inf.is_zero() && g.negative_count() > 0;
        let p = base.clone().with_influence(inf).unwrap();
        expected += usize::from(want);
        strict += usize::from(dominates(&p, want, &format!("case study {seed}"))?);
    }
    Ok(format!("55 instances x 100 levels; strictly better on {strict}/{expected} signed instances"))
}

fn random_matrix(r: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> PreferenceMatrix {
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let p = r.random_range(0.05..0.95);
            (0..k).map(|_| u8::from(r.random_bool(p))).collect()
        })
        .collect();
    PreferenceMatrix::from_rows(rows).unwrap()
}

fn eells_oracle() -> Outcome {
    let mut r = rng(6);
    for case in 0..100 {
        let n = r.random_range(2..=10);
        let k = r.random_range(2..=500);
        let m = random_matrix(&mut r, n, k);
        let a = compute_eells(&m);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let with_j = (0..k).filter(|&u| m.get(j, u)).count();
                let both = (0..k).filter(|&u| m.get(i, u) && m.get(j, u)).count();
                let only_i = (0..k).filter(|&u| m.get(i, u) && !m.get(j, u)).count();
                let want = if with_j == 0 || with_j == k {
                    0.0
                } else {
                    both as f64 / with_j as f64 - only_i as f64 / (k - with_j) as f64
                };
                check(
                    (a.eells(i, j) - want).abs() <= 1e-12,
                    format!("matrix {case} pair ({i},{j}): {} vs {want}", a.eells(i, j)),
                )?;
            }
        }
    }
    let time = |k: usize| {
        let m = random_matrix(&mut rng(k as u64), 10, k);
        let mut runs: Vec<Duration> = (0..9)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(compute_eells(&m));
                t.elapsed()
            })
            .collect();
        runs.sort();
        runs[4]
    };
    time(20_000);
    let (small, large) = (time(40_000), time(80_000));
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    check(ratio <= 2.5, format!("doubling k took {ratio:.2}x"))?;
    Ok(format!("100 matrices match to 1e-12; doubling k costs {ratio:.2}x"))
}

fn significance() -> Outcome {
    let s = woolf_interval([40, 10, 10, 40], 1.96);
    check(
        s.significant && (s.lower - 6.01).abs() <= 0.01 && (s.upper - 42.65).abs() <= 0.01,
        format!("interval ({:.3}, {:.3}), significant {}", s.lower, s.upper, s.significant),
    )?;
    let mut r = rng(7);
    for _ in 0..200 {
        // rank-one tables: n11 * n00 == n10 * n01
        let (a, b, c, d) = (
            r.random_range(1..=30),
            r.random_range(1..=30),
            r.random_range(1..=30),
            r.random_range(1..=30),
        );
        let table = [a * c, a * d, b * c, b * d];
        let s = woolf_interval(table, 1.96);
        check(!s.significant, format!("independent table {table:?} flagged"))?;
    }
    Ok(format!("interval ({:.2}, {:.2}); 200 independent tables insignificant", s.lower, s.upper))
}

fn resampling() -> Outcome {
    let t = Instant::now();
    let mut r = rng(8);
    let loadings = [0.8, 0.6, -0.5, 0.3];
    let cuts = [0.0, 0.4, -0.3, 0.8];
    let mut rows = vec![Vec::with_capacity(200); 4];
    for _ in 0..200 {
        let common: f64 = StandardNormal.sample(&mut r);
        for i in 0..4 {
            let noise: f64 = StandardNormal.sample(&mut r);
            let z = loadings[i] * common + (1.0 - loadings[i] * loadings[i]).sqrt() * noise;
            rows[i].push(u8::from(z > cuts[i]));
        }
    }
    let source = PreferenceMatrix::from_rows(rows).unwrap();
    let (sample, report) = resample_matrix(&source, 100_000, 11).map_err(|e| e.to_string())?;
    check(
        report.within(0.01, 0.02),
        format!("mean gap {:.4}, covariance gap {:.4}", report.mean_gap, report.covariance_gap),
    )?;
    let (again, _) = resample_matrix(&source, 100_000, 11).unwrap();
    check(sample == again, "same seed gave different samples")?;
    check(binary_stats(&sample).len() == 4, "wrong requirement count")?;
    let e = within(t, Duration::from_secs(30))?;
    Ok(format!(
        "mean gap {:.4}, covariance gap {:.4}, reproducible, {e:?}",
        report.mean_gap, report.covariance_gap
    ))
}

fn case_study_table() -> Outcome {
    let reqs = case_study_requirements::<Q>();
    let total_v = reqs.iter().fold(q(0, 1), |a, r| a + r.value);
    let total_e = reqs.iter().fold(q(0, 1), |a, r| a + r.expected_value());
    check(total_v == q(342, 1), format!("sum v = {total_v}"))?;
    check(total_e == q(23299, 100), format!("sum E = {total_e}"))?;
    for (r, &(_, cents)) in reqs.iter().zip(CASE_STUDY_VALUES.iter()) {
        let gap = (r.probability * r.value - q(cents, 100)).abs();
        check(gap <= q(5, 100), format!("{}: p*v misses E by {gap}", r.id))?;
    }
    for pct in 1..=100 {
        let p = case_study::<Q>(q(pct, 1));
        check(p.bound == q(pct, 100) * q(342, 1), format!("{pct}%: bound {}", p.bound))?;
    }
    Ok("sum v = 342, sum E = 232.99, 27 rows, 100 price levels".into())
}

fn scalability() -> Outcome {
    let cfg = SolverConfig {
        node_limit: None,
        time_limit: Some(Duration::from_secs(60)),
    };
    let mut slowest = Duration::ZERO;
    for (case, nvdl) in [0.0, 0.25, 0.5].into_iter().enumerate() {
        for seed in 0..2 {
            let spec = SyntheticSpec::new(100, 100 + seed).with_levels(0.05, nvdl, 0.02, 0.25);
            let p = generate_synthetic(&spec).unwrap().problem;
            let t = Instant::now();
            let m = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
            let s = solve_with(&m, &cfg).unwrap();
            let e = within(t, Duration::from_secs(60))?;
            check(s.status == Status::Optimal, format!("n=100 case {case} seed {seed}: {:?}", s.status))?;
            slowest = slowest.max(e);
        }
    }
    let spec = SyntheticSpec::new(3000, 3).with_levels(0.0002, 0.25, 0.0002, 0.25);
    let t = Instant::now();
    let p = generate_synthetic(&spec).unwrap().problem;
    let m = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
    let mut buf = Vec::new();
    export_lp(&m, &mut buf).unwrap();
    let export = within(t, Duration::from_secs(10))?;
    let text = String::from_utf8(buf).map_err(|e| e.to_string())?;
    let parsed = lp_parser_rs::problem::LpProblem::parse(&text).map_err(|e| format!("LP parse: {e}"))?;
    check(
        parsed.constraint_count() == m.constraints.len() && parsed.variable_count() == m.variables.len(),
        format!(
            "parsed {} rows / {} vars, built {} / {}",
            parsed.constraint_count(),
            parsed.variable_count(),
            m.constraints.len(),
            m.variables.len()
        ),
    )?;
    Ok(format!(
        "six n=100 instances optimal (slowest {slowest:?}); n=3000 LP ({} rows, {} bytes) in {export:?}",
        m.constraints.len(),
        text.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("worked examples", worked_examples),
        ("closure vs walk enumeration", closure_oracle),
        ("solver vs exhaustive enumeration", solver_oracle),
        ("model objective vs evaluated OV", penalty_consistency),
        ("DARS dominance over PCBK and SBK", dominance),
        ("Eells counts and scaling", eells_oracle),
        ("odds-ratio significance", significance),
        ("resampling convergence", resampling),
        ("case-study table", case_study_table),
        ("scalability", scalability),
    ];
    // written to the raw handle so the report shows even when the test passes
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let e = t.elapsed();
        match result {
            Ok(detail) => writeln!(out, "PASS {:>2} {name} [{e:.2?}]: {detail}", i + 1).unwrap(),
            Err(why) => {
                writeln!(out, "FAIL {:>2} {name} [{e:.2?}]: {why}", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    // Criterion 7 asks for an upper bound of 42.65 ± 0.01, but with z' = 1.96 the
    // interval is (16 e^-0.98, 16 e^0.98) = (6.005, 42.631). Matching both published
    // bounds needs z' in [1.9607, 1.9616]. The FAIL line above stays in the report.
    let unattainable = [7];
    let blocking: Vec<usize> = failed.into_iter().filter(|c| !unattainable.contains(c)).collect();
    assert!(blocking.is_empty(), "failed criteria: {blocking:?}");
}
