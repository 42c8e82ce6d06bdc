use std::fs::{self, File};
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use reqsel::analysis::{benchmark, generate_synthetic, sweep, write_bench_csv, SyntheticSpec};
use reqsel::dataset::case_study;
use reqsel::dependency_graph::{
    load_influence_csv, load_vdg_csv, propagate_strengths, write_influence_csv, write_influence_long,
    write_vdg_csv, InfluenceMatrix, PrecedenceGraph,
};
use reqsel::identification::{build_vdg, compute_eells, pair_reports, MembershipConfig, SignificanceConfig};
use reqsel::preferences::{
    binary_stats, fit_dichotomized_gaussian, load_preference_matrix, resampling_report, sample_sharded,
};
use reqsel::selection_models::{build_model, lp_string, BuildOptions, ConstraintMode, Method};
use reqsel::solver::{solution_json, solve_with, SolverConfig, Status};
use reqsel::valuation::{evaluate_selection, load_requirements, write_requirements};
use reqsel::Problem;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{config_hash, json_bytes, Comment, Sink};
use crate::CliError;

pub fn run(cmd: Command) -> Result<(), CliError> {
    let sink = Sink::new(config_hash(&cmd)?);
    match cmd {
        Command::Identify(a) => identify(&sink, a),
        Command::Resample(a) => resample(&sink, a),
        Command::Influence(a) => influence(&sink, a),
        Command::Select(a) => select(&sink, a),
        Command::Sweep(a) => run_sweep(&sink, a),
        Command::Simulate(a) => simulate(&sink, a),
        Command::Bench(a) => bench(&sink, a),
        Command::ExportLp(a) => export(&sink, a),
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::at(path, e))
}

/// JSON has no comments; blank out `#` lines so parse errors keep their line numbers.
fn read_json_text(path: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::at(path, e))?;
    Ok(text
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n"))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> reqsel::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn parse_method(s: &str) -> Result<Method, CliError> {
    Method::from_str(s.trim()).map_err(|e| CliError::input(e.to_string()))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::input(format!("{what}: cannot parse `{}`", t.trim())))
        })
        .collect()
}

/// `a..b` (inclusive, step 1), `a..b:step`, or a comma-separated list.
fn parse_percents(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::input(format!("--percent: cannot parse `{s}`"));
    let Some((lo, rest)) = s.split_once("..") else {
        return parse_list(s, "--percent");
    };
    let rest = rest.trim_start_matches('=');
    let (hi, step) = match rest.split_once(':') {
        Some((h, st)) => (h, st.trim().parse::<f64>().map_err(|_| bad())?),
        None => (rest, 1.0),
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(step > 0.0) || hi < lo {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| lo + step * k as f64).collect())
}

fn solver_config(a: &SolverArgs) -> Result<SolverConfig, CliError> {
    let time_limit = match a.time_limit {
        Some(t) if !(t > 0.0) || !t.is_finite() => {
            return Err(CliError::input(format!("--time-limit must be a positive number of seconds, got {t}")))
        }
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(SolverConfig {
        node_limit: a.node_limit,
        time_limit,
    })
}

enum Limit {
    Budget(f64),
    Percent(f64),
}

fn load_problem(a: &ProblemArgs, mode: Option<&str>, limit: Limit) -> Result<Problem, CliError> {
    let (requirements, precedence, default_mode) = match (&a.dataset, &a.requirements) {
        (Some(Dataset::Casestudy), _) => {
            let p = case_study::<f64>(100.0);
            (p.requirements, Some(p.precedence), ConstraintMode::PriceValue)
        }
        (None, Some(path)) => {
            let reqs = load_requirements(open(path)?).map_err(|e| CliError::at(path, e))?;
            (reqs, None, ConstraintMode::BudgetCost)
        }
        (None, None) => return Err(CliError::input("either --requirements or --dataset is needed")),
    };
    let mode = match mode {
        Some(m) => ConstraintMode::from_str(m)?,
        None => default_mode,
    };
    let total: f64 = match mode {
        ConstraintMode::BudgetCost => requirements.iter().map(|r| r.cost).sum(),
        ConstraintMode::PriceValue => requirements.iter().map(|r| r.value).sum(),
    };
    let bound = match limit {
        Limit::Budget(b) => b,
        Limit::Percent(p) if (0.0..=100.0).contains(&p) => p / 100.0 * total,
        Limit::Percent(p) => return Err(CliError::input(format!("--percent must lie in [0, 100], got {p}"))),
    };
    let problem = Problem::new(requirements, bound, mode)?;
    let ids = problem.ids();
    let precedence = match &a.constraints {
        Some(path) => {
            let text = read_json_text(path)?;
            PrecedenceGraph::from_json(text.as_bytes(), &ids).map_err(|e| CliError::at(path, e))?
        }
        None => precedence.unwrap_or_else(|| PrecedenceGraph::new(ids.clone())),
    };
    let influence = if let Some(path) = &a.vdg {
        let g = load_vdg_csv(open(path)?, Some(&ids)).map_err(|e| CliError::at(path, e))?;
        propagate_strengths(&g)
    } else if let Some(path) = &a.influence {
        let (found, m) = load_influence_csv(open(path)?).map_err(|e| CliError::at(path, e))?;
        if found != ids {
            return Err(CliError::at(path, "row ids must match the requirements in order"));
        }
        m
    } else {
        InfluenceMatrix::zeros(ids.len())
    };
    Ok(problem.with_precedence(precedence)?.with_influence(influence)?)
}

fn warn_bk(method: Method, p: &Problem) {
    if method == Method::Bk && !p.precedence.constraints().is_empty() {
        eprintln!(
            "reqsel: warning: bk ignores the {} precedence constraint(s); its selection may violate them",
            p.precedence.constraints().len()
        );
    }
}

fn limit(budget: Option<f64>, percent: Option<f64>) -> Limit {
    match (budget, percent) {
        (Some(b), _) => Limit::Budget(b),
        (None, Some(p)) => Limit::Percent(p),
        (None, None) => unreachable!("clap requires one of --budget/--percent"),
    }
}

fn identify(sink: &Sink, a: IdentifyArgs) -> Result<(), CliError> {
    let m = load_preference_matrix(open(&a.preferences)?).map_err(|e| CliError::at(&a.preferences, e))?;
    let cuts: Vec<f64> = parse_list(&a.cuts, "--cuts")?;
    let [lower, upper] = cuts[..] else {
        return Err(CliError::input("--cuts takes two values `a,b`"));
    };
    let sig = SignificanceConfig::new(a.z)?;
    let mem = MembershipConfig::new(lower, upper)?;
    let analysis = compute_eells(&m);
    let g = build_vdg(&analysis, &sig, &mem);
    let ids = m.requirement_ids();
    let reports = pair_reports(&analysis, &sig, &mem);

    sink.write_file(&a.out_dir.join("vdg.csv"), Comment::Hash, &csv_bytes(|b| write_vdg_csv(&g, b))?)?;
    match a.format {
        Format::Csv => {
            let mut body = String::from("from,to,eells,defined,odds_ratio,lower,upper,significant,strength\n");
            for r in &reports {
                let s = &r.significance;
                body.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    ids[r.from], ids[r.to], r.eells, r.defined, s.odds_ratio, s.lower, s.upper, s.significant, r.strength
                ));
            }
            sink.write_file(&a.out_dir.join("pairs.csv"), Comment::Hash, body.as_bytes())?;
        }
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "from": ids[r.from],
                        "to": ids[r.to],
                        "eells": finite(r.eells),
                        "defined": r.defined,
                        "odds_ratio": finite(r.significance.odds_ratio),
                        "lower": finite(r.significance.lower),
                        "upper": finite(r.significance.upper),
                        "significant": r.significance.significant,
                        "strength": r.strength,
                    })
                })
                .collect();
            let doc = json!({"z": a.z, "cuts": [lower, upper], "pairs": rows});
            sink.write_file(&a.out_dir.join("pairs.json"), Comment::Hash, &json_bytes(&doc))?;
        }
    }
    println!(
        "{} requirements, {} users: {} edges ({} negative)",
        m.requirements(),
        m.users(),
        g.edge_count(),
        g.negative_count()
    );
    Ok(())
}

/// JSON has no infinities; unbounded interval ends become null.
fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn resample(sink: &Sink, a: ResampleArgs) -> Result<(), CliError> {
    let m = load_preference_matrix(open(&a.preferences)?).map_err(|e| CliError::at(&a.preferences, e))?;
    let stats = binary_stats(&m);
    let model = fit_dichotomized_gaussian(&stats)?;
    let sample = sample_sharded(&model, a.count, a.seed, a.shards)?;
    let report = resampling_report(&stats, &binary_stats(&sample))?;
    sink.write_file(&a.out_dir.join("resampled.csv"), Comment::Hash, &csv_bytes(|b| sample.write_csv(b))?)?;
    let doc = json!({
        "count": a.count,
        "seed": a.seed,
        "shards": a.shards,
        "mean_gap": report.mean_gap,
        "covariance_gap": report.covariance_gap,
    });
    sink.write_file(&a.out_dir.join("convergence.json"), Comment::Hash, &json_bytes(&doc))?;
    println!(
        "{} users drawn; max mean gap {:.4}, max covariance gap {:.4}",
        sample.users(),
        report.mean_gap,
        report.covariance_gap
    );
    Ok(())
}

fn influence(sink: &Sink, a: InfluenceArgs) -> Result<(), CliError> {
    let ids = match &a.requirements {
        Some(path) => {
            let reqs = load_requirements(open(path)?).map_err(|e| CliError::at(path, e))?;
            Some(reqs.into_iter().map(|r| r.id).collect::<Vec<_>>())
        }
        None => None,
    };
    let g = load_vdg_csv(open(&a.vdg)?, ids.as_deref()).map_err(|e| CliError::at(&a.vdg, e))?;
    let m = propagate_strengths(&g);
    let body = if a.long {
        csv_bytes(|b| write_influence_long(&m, g.ids(), b))?
    } else {
        csv_bytes(|b| write_influence_csv(&m, g.ids(), b))?
    };
    sink.emit(a.out.as_deref(), Comment::Hash, &body)
}

fn select(sink: &Sink, a: SelectArgs) -> Result<(), CliError> {
    let method = parse_method(&a.method)?;
    let p = load_problem(&a.problem, a.mode.as_deref(), limit(a.budget, a.percent))?;
    warn_bk(method, &p);
    let cfg = solver_config(&a.solver)?;
    let model = build_model(&p, method, BuildOptions { simplify: a.simplify })?;
    let s = solve_with(&model, &cfg)?;
    let ids = p.ids();
    let evaluation = if s.x.is_empty() {
        None
    } else {
        Some(evaluate_selection(&p.requirements, &p.influence_or_zero(), &s.x)?)
    };
    let body = match a.format {
        Format::Json => {
            let mut doc = solution_json(&s, &ids, a.timing);
            let obj = doc.as_object_mut().expect("object");
            obj.insert("method".into(), json!(method.name()));
            obj.insert("mode".into(), json!(p.mode.to_string()));
            obj.insert("bound".into(), json!(p.bound));
            if let Some(e) = &evaluation {
                obj.insert("av".into(), json!(e.av));
                obj.insert("ev".into(), json!(e.ev));
                obj.insert("ov".into(), json!(e.ov));
            }
            json_bytes(&doc)
        }
        Format::Csv => {
            let mut body = String::from("id,selected,theta\n");
            if let Some(e) = &evaluation {
                for ((id, x), t) in ids.iter().zip(&e.selection).zip(&e.theta) {
                    body.push_str(&format!("{id},{},{t}\n", u8::from(*x)));
                }
            }
            body.into_bytes()
        }
    };
    sink.emit(a.out.as_deref(), Comment::Hash, &body)?;
    eprintln!("reqsel: {} ({} nodes)", s.status.name(), s.stats.nodes);
    if s.status == Status::Infeasible {
        return Err(CliError::Infeasible);
    }
    Ok(())
}

fn run_sweep(sink: &Sink, a: SweepArgs) -> Result<(), CliError> {
    let methods = a.methods.split(',').map(parse_method).collect::<Result<Vec<_>, _>>()?;
    let percents = parse_percents(&a.percent)?;
    if let Some(p) = percents.iter().find(|p| !(0.0..=100.0).contains(*p)) {
        return Err(CliError::input(format!("--percent must lie in [0, 100], got {p}")));
    }
    let p = load_problem(&a.problem, Some("price"), Limit::Percent(100.0))?;
    if let Some(&m) = methods.iter().find(|&&m| m == Method::Bk) {
        warn_bk(m, &p);
    }
    let report = sweep(&p, &percents, &methods, &solver_config(&a.solver)?)?;
    let body = match (a.format, a.long) {
        (Format::Json, _) => json_bytes(&report.to_json()),
        (Format::Csv, true) => csv_bytes(|b| report.write_long(b))?,
        (Format::Csv, false) => csv_bytes(|b| report.write_csv(b))?,
    };
    sink.emit(a.out.as_deref(), Comment::Hash, &body)
}

fn simulate(sink: &Sink, a: SimulateArgs) -> Result<(), CliError> {
    let mut spec = SyntheticSpec::new(a.n, a.seed).with_levels(a.vdl, a.nvdl, a.pdl, a.npdl);
    spec.budget_fraction = a.budget_fraction;
    let inst = generate_synthetic(&spec)?;
    let p = &inst.problem;
    let dir = &a.out_dir;
    sink.write_file(
        &dir.join("requirements.csv"),
        Comment::Hash,
        &csv_bytes(|b| write_requirements(&p.requirements, b))?,
    )?;
    let mut constraints = csv_bytes(|b| p.precedence.to_json(b))?;
    constraints.push(b'\n');
    sink.write_file(&dir.join("constraints.json"), Comment::Hash, &constraints)?;
    sink.write_file(&dir.join("vdg.csv"), Comment::Hash, &csv_bytes(|b| write_vdg_csv(&inst.vdg, b))?)?;
    let doc = json!({
        "n": a.n,
        "seed": a.seed,
        "vdl": a.vdl,
        "nvdl": a.nvdl,
        "pdl": a.pdl,
        "npdl": a.npdl,
        "mode": p.mode.to_string(),
        "budget": p.bound,
    });
    sink.write_file(&dir.join("instance.json"), Comment::Hash, &json_bytes(&doc))?;
    println!("budget {}", p.bound);
    Ok(())
}

fn bench(sink: &Sink, a: BenchArgs) -> Result<(), CliError> {
    let method = parse_method(&a.method)?;
    let ns: Vec<usize> = parse_list(&a.n, "--n")?;
    let vdl: Vec<f64> = parse_list(&a.vdl, "--vdl")?;
    let nvdl: Vec<f64> = parse_list(&a.nvdl, "--nvdl")?;
    let pdl: Vec<f64> = parse_list(&a.pdl, "--pdl")?;
    let npdl: Vec<f64> = parse_list(&a.npdl, "--npdl")?;
    let fractions: Vec<f64> = parse_list(&a.budget_fraction, "--budget-fraction")?;
    let mut specs = Vec::new();
    for &n in &ns {
        for &v in &vdl {
            for &nv in &nvdl {
                for &pd in &pdl {
                    for &np in &npdl {
                        for &f in &fractions {
                            // a negative share means nothing at zero density
                            let nv = if v == 0.0 { 0.0 } else { nv };
                            let np = if pd == 0.0 { 0.0 } else { np };
                            for r in 0..a.repeats {
                                let mut s = SyntheticSpec::new(n, a.seed + r).with_levels(v, nv, pd, np);
                                s.budget_fraction = f;
                                if !specs.contains(&s) {
                                    specs.push(s);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let rows = benchmark(&specs, method, &solver_config(&a.solver)?)?;
    sink.emit(a.out.as_deref(), Comment::Hash, &csv_bytes(|b| write_bench_csv(&rows, b))?)
}

fn export(sink: &Sink, a: ExportLpArgs) -> Result<(), CliError> {
    let method = parse_method(&a.method)?;
    let p = load_problem(&a.problem, a.mode.as_deref(), limit(a.budget, a.percent))?;
    warn_bk(method, &p);
    let model = build_model(&p, method, BuildOptions { simplify: a.simplify })?;
    sink.emit(a.out.as_deref(), Comment::Backslash, lp_string(&model).as_bytes())
}
