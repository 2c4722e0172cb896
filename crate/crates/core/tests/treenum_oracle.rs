use std::collections::BTreeSet;

use symdiam::perm::Word;
use symdiam::spectrum::{aggregate_poly, reference_polys};
use symdiam::treenum::{
    all_ab_trees, brute_force_oracle, enumerate_admitting_trees, generic_family, oracle_from, w0_trees, CycleRule,
    EnumConstraints, TreeRecord,
};

fn certs(rs: &[TreeRecord]) -> Vec<Vec<u8>> {
    rs.iter().map(|r| r.certificate.clone()).collect()
}

#[test]
fn generic_family_aggregates_to_f() {
    let cat = enumerate_admitting_trees(&Word::w0(), &generic_family()).unwrap();
    assert_eq!(cat.len(), 52);
    assert_eq!(aggregate_poly(&cat), reference_polys().f);
    assert!(cat.iter().all(|r| r.min_power <= 5 && r.stats.aut_order == 1));
}

#[test]
fn small_order_two_catalog_gives_h2() {
    let c = EnumConstraints::new(7, 1, CycleRule::Exactly(2), 60);
    let cat = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
    assert_eq!(aggregate_poly(&cat), reference_polys().h2);
    assert!(cat.iter().any(|r| r.stats.aut_order == 2));
}

#[test]
fn order_three_catalog_dominates_h3() {
    let c = EnumConstraints::new(10, 2, CycleRule::Exactly(3), 60);
    let cat = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
    assert!(aggregate_poly(&cat).dominates(&reference_polys().h3));
}

#[test]
fn oracle_finds_the_drawn_w0_trees() {
    let found = brute_force_oracle(&Word::w0(), 4, 1);
    let drawn: BTreeSet<Vec<u8>> = w0_trees().iter().map(|(g, _)| g.canonical_certificate()).collect();
    assert_eq!(found.len(), 5);
    assert_eq!(certs(&found).into_iter().collect::<BTreeSet<_>>(), drawn);
}

#[test]
fn enumerator_agrees_with_oracle_on_small_bounds() {
    let trees = all_ab_trees(5);
    for base in ["AbaBABab", "ABab", "aaBB"] {
        let w: Word = base.parse().unwrap();
        for power in [1u64, 2, 4] {
            let measured = oracle_from(&trees, &w, power);
            for kappa in 1..=5 {
                for cycles in [CycleRule::Forbid, CycleRule::Exactly(2), CycleRule::Exactly(3)] {
                    let max_path = match cycles {
                        CycleRule::Forbid => kappa,
                        CycleRule::Exactly(n) => kappa.min(n - 1),
                    };
                    let c = EnumConstraints::new(kappa, max_path, cycles, power);
                    let got = enumerate_admitting_trees(&w, &c).unwrap();
                    let want: Vec<TreeRecord> = measured.iter().filter(|r| c.admits_shape(&r.graph)).cloned().collect();
                    assert_eq!(certs(&got), certs(&want), "{base} power={power} kappa={kappa} cycles={cycles}");
                    assert_eq!(got, want);
                }
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_and_sorted() {
    let c = EnumConstraints::new(9, 3, CycleRule::Forbid, 60);
    let a = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
    let b = enumerate_admitting_trees(&Word::w0(), &c).unwrap();
    assert_eq!(a, b);
    let cs = certs(&a);
    let set: BTreeSet<_> = cs.iter().cloned().collect();
    assert_eq!(set.len(), cs.len());
}

#[test]
fn invalid_constraints_rejected() {
    let w = Word::w0();
    assert!(enumerate_admitting_trees(&w, &EnumConstraints::new(0, 1, CycleRule::Forbid, 1)).is_err());
    assert!(enumerate_admitting_trees(&w, &EnumConstraints::new(5, 2, CycleRule::Exactly(2), 1)).is_err());
    assert!(enumerate_admitting_trees(&w, &EnumConstraints::new(5, 0, CycleRule::Forbid, 1)).is_err());
    assert!("x".parse::<CycleRule>().is_err());
}
