mod common;

use common::*;
use num_traits::Signed;
use reqsel::dataset::{case_study, case_study_precedence, case_study_requirements, CASE_STUDY_ROUNDED_P};
use reqsel::dependency_graph::InfluenceMatrix;
use reqsel::valuation::{evaluate_selection, load_requirements, penalties, write_requirements, Requirement};

fn example_three() -> InfluenceMatrix<Q> {
    let t = |v: i64| q(v, 10);
    InfluenceMatrix::from_influence(&[
        vec![t(0), t(5), t(7), t(7)],
        vec![t(2), t(0), t(2), t(3)],
        vec![t(6), t(5), t(0), t(7)],
        vec![t(0); 4],
    ])
    .unwrap()
}

#[test]
fn example_three_overall_value() {
    let theta = penalties(&example_three(), &[true, true, true, false]).unwrap();
    assert_eq!(theta[..3], [q(7, 10), q(3, 10), q(7, 10)]);
    let reqs: Vec<Requirement<Q>> = [10, 20, 10, 5]
        .iter()
        .enumerate()
        .map(|(i, &e)| Requirement::new(format!("r{}", i + 1), q(1, 1), q(e, 1), q(1, 1)).unwrap())
        .collect();
    let e = evaluate_selection(&reqs, &example_three(), &[true, true, true, false]).unwrap();
    assert_eq!(e.ov, q(20, 1));
    assert_eq!(e.ev, q(40, 1));
    assert_eq!(e.av, q(40, 1));
}

#[test]
fn trivial_selections() {
    let mut r = rng(1);
    let p = random_problem(&mut r, 5);
    let e = evaluate_selection(&p.requirements, &p.influence_or_zero(), &[false; 5]).unwrap();
    assert_eq!((e.av, e.ev, e.ov), (q(0, 1), q(0, 1), q(0, 1)));

    let certain: Vec<Requirement<Q>> = p
        .requirements
        .iter()
        .map(|r| Requirement { probability: q(1, 1), ..r.clone() })
        .collect();
    let e = evaluate_selection(&certain, &zero_influence(5), &[true, false, true, true, false]).unwrap();
    assert_eq!(e.av, e.ev);
    assert_eq!(e.ev, e.ov);
    assert!(e.theta.iter().all(|t| *t == q(0, 1)));
    assert!(evaluate_selection(&certain, &zero_influence(5), &[true]).is_err());
}

#[test]
fn requirements_csv_round_trip() {
    let reqs = case_study_requirements::<f64>();
    let mut out = Vec::new();
    write_requirements(&reqs, &mut out).unwrap();
    let back = load_requirements(out.as_slice()).unwrap();
    assert_eq!(back.len(), 27);
    for (a, b) in reqs.iter().zip(&back) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.value, b.value);
        assert!((a.expected_value() - b.expected_value()).abs() < 1e-9);
    }
    let bad = "id,name,cost,value,probability\nr1,a,1,2,1.5\n";
    assert!(load_requirements(bad.as_bytes()).unwrap_err().to_string().contains("line 2"));
}

#[test]
fn case_study_bundle() {
    let reqs = case_study_requirements::<Q>();
    for (r, &pct) in reqs.iter().zip(CASE_STUDY_ROUNDED_P.iter()) {
        assert!((r.probability - q(pct, 100)).abs() <= q(1, 200), "{}", r.id);
        assert_eq!(r.cost, r.value);
    }
    let prec = case_study_precedence();
    assert_eq!(prec.len(), 27);
    let p = case_study::<Q>(q(50, 1));
    assert_eq!(p.bound, q(171, 1));
    let mut x = vec![false; 27];
    x[1] = true;
    assert!(p.is_feasible(&x));
    x[5] = true;
    assert!(!p.is_feasible(&x), "r2 and r6 are mutually exclusive");
}
