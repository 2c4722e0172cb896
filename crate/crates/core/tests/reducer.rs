use num_bigint::BigUint;
use symdiam::perm::{Perm, Word};
use symdiam::reducer::{
    canonical_representative, check_fixed_bound, check_generates, contract, reduce_step, run_reduction, select_case,
    symmetry_class, verify_lemma5, walk_length, CaseId, GroupClass, Ledger, LedgerOp, ReductionConfig,
    ReductionStatus, UniformConditional,
};
use symdiam::treenum::{oracle_from, w0_trees};
use symdiam::verify::seven_cycle_element;

fn p(n: usize, s: &str) -> Perm {
    Perm::parse_cycles(n, s).unwrap()
}

#[test]
fn case_selection_recipes() {
    let long = select_case(&p(12, "(1,2,3,4,5,6,7,8,9)")).unwrap();
    assert_eq!(long.case_id, CaseId::GenericLongCycle);
    assert_eq!(long.anchor.len(), 9);
    assert_eq!(select_case(&p(8, "(1,2,3,4,5)")).unwrap().case_id, CaseId::FiveCycle);
    assert_eq!(select_case(&p(8, "(1,2)(3,4)(5,6)")).unwrap().case_id, CaseId::Order2);
    assert_eq!(select_case(&p(8, "(1,2,3)(4,5,6)")).unwrap().case_id, CaseId::Order3);
    assert!(select_case(&p(6, "(1,2)(3,4)(5,6)")).is_err());
    assert!(select_case(&p(8, "(1,2,3)(4,5)")).is_err());
    assert!(select_case(&Perm::identity(4)).is_err());
}

#[test]
fn anchor_recipes_produce_seven_cycles() {
    let r = verify_lemma5();
    assert!(r.passed);
    assert_eq!(r.cases.len(), 27);
    assert!(r.cases.iter().all(|c| c.seven_cycle.is_some()));
}

#[test]
fn reduce_step_is_seed_deterministic() {
    let a = seven_cycle_element(140, 12);
    let sel = select_case(&a).unwrap();
    let x = reduce_step(&a, &sel, 8, 42, &UniformConditional).unwrap();
    let y = reduce_step(&a, &sel, 8, 42, &UniformConditional).unwrap();
    assert_eq!(x.a_next, y.a_next);
    assert_eq!(x.r, y.r);
    assert_eq!(contract(&a, &x.r).unwrap(), x.a_next);
    assert_eq!(x.a_next.fixed_count(), x.fixed);
    for (pt, img) in sel.anchor.points().iter().zip(sel.anchor.images()) {
        assert_eq!(x.r.image(*pt), *img);
    }
}

#[test]
fn pipeline_reaches_target_and_replays() {
    let a0 = seven_cycle_element(490, 44);
    let cfg = ReductionConfig { target: 1.0 / 3.0, trials: 20, max_steps: 12, seed: 3 };
    let run = run_reduction(&[], &a0, &cfg, &UniformConditional).unwrap();
    assert_eq!(run.status, ReductionStatus::Reached);
    assert!(run.replays());
    assert_eq!(run.delta_trace.len(), run.steps.len() + 1);
    assert!(run.steps.iter().all(|s| s.degenerate || s.output.has_cycle_of_len(7)));
    assert_eq!(run.ledger.history.len(), run.steps.len() + run.steps.iter().filter(|s| s.power > 1).count());
    let again = run_reduction(&[], &a0, &cfg, &UniformConditional).unwrap();
    assert_eq!(serde_json::to_string(&run).unwrap(), serde_json::to_string(&again).unwrap());
}

#[test]
fn pipeline_rejects_large_support() {
    let a0 = seven_cycle_element(70, 10);
    assert!(run_reduction(&[], &a0, &ReductionConfig::default(), &UniformConditional).is_err());
}

#[test]
fn ledger_arithmetic() {
    let mut l = Ledger::new();
    l.push(LedgerOp::Power { exponent: 6 });
    l.push(LedgerOp::Assemble { letters: 480, walk: BigUint::from(10u32) });
    assert_eq!(l.length_bound, BigUint::from(480u32 * 6 + 4800));
    assert!(l.replays());
    assert_eq!(walk_length(10, false), BigUint::from(10u32).pow(54));
    assert_eq!(walk_length(10, true), BigUint::from(10u32).pow(36));
}

#[test]
fn fixed_bound_on_seven_points() {
    let graphs: Vec<_> = w0_trees().into_iter().map(|(g, _)| g).collect();
    let cat = oracle_from(&graphs, &Word::w0(), 1);
    let r = check_fixed_bound(&cat, &Word::w0(), &p(7, "(1,2,3,4,5,6,7)")).unwrap();
    assert_eq!(r.conjugators, 5040);
    assert_eq!(r.violations, 0);
    assert!(r.propagation_agrees);
    assert!(check_fixed_bound(&cat, &Word::w0(), &Perm::identity(9)).is_err());
}

#[test]
fn generation_check() {
    let s = check_generates(&[p(9, "(1,2)"), p(9, "(1,2,3,4,5,6,7,8,9)")], false, 1).unwrap();
    assert_eq!(s.class, GroupClass::Sym);
    let a = check_generates(&[p(5, "(1,2,3)"), p(5, "(1,2,3,4,5)")], false, 1).unwrap();
    assert_eq!(a.class, GroupClass::Alt);
    assert_eq!(a.order, BigUint::from(60u32));
}

#[test]
fn w0_symmetry_class() {
    let class = symmetry_class(&Word::w0());
    assert!(class.contains("AbaBABab"));
    assert!(class.contains(&Word::w0().inverse().to_string()));
    assert_eq!(canonical_representative(&Word::w0()), *class.iter().next().unwrap());
}
