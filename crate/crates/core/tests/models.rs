mod common;

use common::*;
use lp_parser_rs::problem::LpProblem;
use reqsel::dependency_graph::{InfluenceMatrix, Precedence, PrecedenceGraph};
use reqsel::selection_models::{
    build_increase_decrease, build_model, lp_string, BuildOptions, ConstraintMode, Method, Relation,
    SelectionProblem, SubsetEstimate, VarKind,
};
use reqsel::solver::solve;
use reqsel::valuation::Requirement;

fn pair_problem() -> SelectionProblem<Q> {
    let reqs = vec![
        Requirement::new("r1", q(3, 1), q(10, 1), q(1, 2)).unwrap(),
        Requirement::new("r2", q(2, 1), q(8, 1), q(3, 4)).unwrap(),
    ];
    let inf = InfluenceMatrix::from_influence(&[vec![q(0, 1), q(-4, 10)], vec![q(3, 10), q(0, 1)]]).unwrap();
    SelectionProblem::new(reqs, q(4, 1), ConstraintMode::BudgetCost)
        .unwrap()
        .with_influence(inf)
        .unwrap()
}

#[test]
fn two_requirement_dars_layout() {
    let m = build_model(&pair_problem(), Method::Dars, BuildOptions::default()).unwrap();
    assert_eq!(m.count(VarKind::Binary), 4);
    assert_eq!(m.count(VarKind::Continuous), 4);
    assert_eq!(m.constraints.len(), 1 + 2 + 8);
    assert_eq!(m.constraints.iter().filter(|c| c.name.starts_with("pen_")).count(), 2);
    assert_eq!(m.constraints[0].name, "budget");
    m.validate().unwrap();
}

#[test]
fn simplified_model_drops_g() {
    let m = build_model(&pair_problem(), Method::Dars, BuildOptions { simplify: true }).unwrap();
    assert_eq!(m.count(VarKind::Binary), 2);
    assert_eq!(m.constraints.len(), 1 + 2 + 4);
    assert!(m.meta.penalty.as_ref().unwrap().g.is_none());
    let full = build_model(&pair_problem(), Method::Dars, BuildOptions::default()).unwrap();
    assert_eq!(solve(&m).unwrap().objective, solve(&full).unwrap().objective);
}

#[test]
fn dars_needs_influence() {
    let mut p = pair_problem();
    p.influence = None;
    assert!(build_model(&p, Method::Dars, BuildOptions::default()).is_err());
    assert!(build_model(&p, Method::Sbk, BuildOptions::default()).is_ok());
}

#[test]
fn conflict_emits_both_directions() {
    let reqs: Vec<Requirement<Q>> = (1..=18)
        .map(|i| Requirement::new(format!("r{i}"), q(1, 1), q(1, 1), q(1, 1)).unwrap())
        .collect();
    let mut prec = PrecedenceGraph::new(reqs.iter().map(|r| r.id.clone()).collect());
    prec.add(Precedence::Conflicts { a: 16, b: 17 }).unwrap();
    let p = SelectionProblem::new(reqs, q(18, 1), ConstraintMode::PriceValue)
        .unwrap()
        .with_precedence(prec)
        .unwrap();
    let m = build_model(&p, Method::Pcbk, BuildOptions::default()).unwrap();
    let rows: Vec<_> = m.constraints.iter().filter(|c| c.name.starts_with("conf_")).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].name, "conf_r17_r18");
    assert_eq!(rows[1].name, "conf_r18_r17");
    for r in rows {
        assert_eq!(r.relation, Relation::Le);
        assert_eq!(r.rhs, q(1, 1));
    }
    assert_eq!(m.constraints[0].name, "price");
}

#[test]
fn bk_ignores_precedence() {
    let mut r = rng(3);
    let mut p = random_problem(&mut r, 6);
    let mut prec = PrecedenceGraph::with_size(6);
    prec.add(Precedence::RequiresAll { source: 0, target: 1 }).unwrap();
    p = p.with_precedence(prec).unwrap();
    let bk = build_model(&p, Method::Bk, BuildOptions::default()).unwrap();
    let pcbk = build_model(&p, Method::Pcbk, BuildOptions::default()).unwrap();
    assert_eq!(bk.constraints.len(), 1);
    assert_eq!(pcbk.constraints.len(), 2);
}

#[test]
fn zero_influence_dars_equals_sbk() {
    for seed in 0..20 {
        let mut r = rng(100 + seed);
        let mut p = random_problem(&mut r, 7);
        p.influence = Some(zero_influence(7));
        let dars = solve(&build_model(&p, Method::Dars, BuildOptions::default()).unwrap()).unwrap();
        let sbk = solve(&build_model(&p, Method::Sbk, BuildOptions::default()).unwrap()).unwrap();
        assert_eq!(dars.objective, sbk.objective);
    }
}

#[test]
fn dars_and_pcbk_share_the_feasible_set() {
    for seed in 0..20 {
        let mut r = rng(200 + seed);
        let p = random_problem(&mut r, 6);
        let dars = build_model(&p, Method::Dars, BuildOptions::default()).unwrap();
        let pcbk = build_model(&p, Method::Pcbk, BuildOptions::default()).unwrap();
        let shared: Vec<_> = dars
            .constraints
            .iter()
            .filter(|c| c.terms.iter().all(|(v, _)| dars.meta.x.contains(v)))
            .cloned()
            .collect();
        assert_eq!(shared, pcbk.constraints);
    }
}

fn unit_pair(v: [i64; 2]) -> SelectionProblem<Q> {
    let reqs = vec![
        Requirement::new("r1", q(1, 1), q(v[0], 1), q(1, 1)).unwrap(),
        Requirement::new("r2", q(1, 1), q(v[1], 1), q(1, 1)).unwrap(),
    ];
    SelectionProblem::new(reqs, q(2, 1), ConstraintMode::BudgetCost).unwrap()
}

#[test]
fn increase_decrease_adjustments() {
    let p = unit_pair([5, 4]);
    let bk = solve(&build_model(&p, Method::Bk, BuildOptions::default()).unwrap()).unwrap();

    let neutral = build_increase_decrease(&p, &[SubsetEstimate::new(vec![0, 1], q(9, 1)).unwrap()]).unwrap();
    assert_eq!(solve(&neutral).unwrap().objective, bk.objective);

    // both members together are worth less than apart, but still more than either alone
    let deficit = build_increase_decrease(&p, &[SubsetEstimate::new(vec![0, 1], q(7, 1)).unwrap()]).unwrap();
    let s = solve(&deficit).unwrap();
    assert_eq!(s.x, vec![true, true]);
    assert_eq!(s.objective, q(7, 1));
    assert_eq!(s.values[deficit.meta.subsets[0]], q(1, 1));
    assert!(deficit.constraints.iter().any(|c| c.name == "subset1_all"));

    let surplus = build_increase_decrease(&p, &[SubsetEstimate::new(vec![0, 1], q(12, 1)).unwrap()]).unwrap();
    assert_eq!(solve(&surplus).unwrap().objective, q(12, 1));
    assert!(!surplus.constraints.iter().any(|c| c.name == "subset1_all"));

    let plain = build_increase_decrease(&p, &[]).unwrap();
    assert_eq!(solve(&plain).unwrap().objective, bk.objective);
    assert!(SubsetEstimate::new(vec![0], q(1, 1)).is_err());
}

#[test]
fn one_variable_lp_text() {
    let reqs = vec![Requirement::new("r1", q(2, 1), q(10, 1), q(1, 1)).unwrap()];
    let p = SelectionProblem::new(reqs, q(5, 1), ConstraintMode::BudgetCost).unwrap();
    let text = lp_string(&build_model(&p, Method::Bk, BuildOptions::default()).unwrap());
    for section in ["Maximize", "Subject To", "Bounds", "Binary", "End"] {
        assert!(text.lines().any(|l| l == section), "missing {section}:\n{text}");
    }
    assert!(text.contains("obj: 10 x1"), "{text}");
    assert!(text.contains("budget: 2 x1 <= 5"), "{text}");
}

#[test]
fn ge_rows_render() {
    let text = lp_string(&build_model(&pair_problem(), Method::Dars, BuildOptions::default()).unwrap());
    assert!(text.contains(">="), "{text}");
    assert!(text.contains("0 <= theta1 <= 1"), "{text}");
}

#[test]
fn lp_files_parse() {
    for seed in 0..30 {
        let mut r = rng(300 + seed);
        let p = random_problem(&mut r, 2 + seed as usize % 9);
        for method in Method::ALL {
            for simplify in [false, true] {
                let m = build_model(&p, method, BuildOptions { simplify }).unwrap();
                let text = lp_string(&m);
                let parsed = LpProblem::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
                assert_eq!(parsed.constraint_count(), m.constraints.len(), "{text}");
                assert_eq!(parsed.variable_count(), m.variables.len(), "{text}");
            }
        }
    }
}

#[test]
fn model_json_lists_rows() {
    let m = build_model(&pair_problem(), Method::Dars, BuildOptions::default()).unwrap();
    let j = m.to_json();
    assert_eq!(j["constraints"].as_array().unwrap().len(), 11);
    assert_eq!(j["variables"].as_array().unwrap().len(), 8);
}

#[test]
fn float_and_exact_models_agree() {
    let mut r = rng(9);
    let p = random_problem(&mut r, 8);
    let exact = solve(&build_model(&p, Method::Dars, BuildOptions::default()).unwrap()).unwrap();
    let pf = p.convert::<f64>();
    let float = solve(&build_model(&pf, Method::Dars, BuildOptions::default()).unwrap()).unwrap();
    let pf32 = p.convert::<f32>();
    let single = solve(&build_model(&pf32, Method::Dars, BuildOptions::default()).unwrap()).unwrap();
    assert_eq!(exact.x, float.x);
    assert!((float.objective - reqsel::Scalar::as_f64(exact.objective)).abs() < 1e-9);
    assert!((single.objective as f64 - float.objective).abs() < 1e-3);
}
