use serde::Serialize;

use super::ReduceError;
use crate::perm::{Perm, Word};
use crate::walks::Anchor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    GenericLongCycle,
    FiveCycle,
    Order2,
    Order3,
}

impl CaseId {
    pub fn is_special(self) -> bool {
        matches!(self, CaseId::Order2 | CaseId::Order3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSelection {
    pub case_id: CaseId,
    pub anchor: Anchor,
}

fn anchor_for(points: Vec<u32>, g_cycles: &[Vec<u32>], n: usize) -> Result<Anchor, ReduceError> {
    let g = Perm::from_cycles(n, g_cycles)?;
    Ok(Anchor::from_perm(points, &g)?)
}

/// Picks the anchor set `Λ` and the permutation `g` of it for `a`.
///
/// Cycles are read in the order `a` traverses them, starting from their
/// smallest point; the first qualifying cycle (by smallest point) is used.
pub fn select_case(a: &Perm) -> Result<CaseSelection, ReduceError> {
    if a.is_identity() {
        return Err(ReduceError::Inventory("a is the identity".into()));
    }
    let n = a.n();
    let cs = a.cycle_structure();
    let fixed = cs.fixed_points();
    if let Some(c) = cs.cycles.iter().find(|c| c.len() >= 7) {
        let m = c.len();
        let mut points: Vec<u32> = c[..6].to_vec();
        for &x in &c[m - 4..] {
            if !points.contains(&x) {
                points.push(x);
            }
        }
        let anchor = anchor_for(points, &[vec![c[0], c[2], c[m - 1]]], n)?;
        return Ok(CaseSelection { case_id: CaseId::GenericLongCycle, anchor });
    }
    let lens: Vec<usize> = cs.nontrivial().map(Vec::len).collect();
    let all = |l: usize| lens.iter().all(|&x| x == l);
    let need = |what: &str, have: usize, want: usize| {
        ReduceError::Inventory(format!("{what}: need {want}, have {have}"))
    };
    if all(5) {
        let c = cs.nontrivial().next().expect("non-identity");
        if fixed.len() < 2 {
            return Err(need("fixed points for the 5-cycle case", fixed.len(), 2));
        }
        let (p6, p7) = (fixed[0], fixed[1]);
        let mut points = c.clone();
        points.extend([p6, p7]);
        let anchor = anchor_for(points, &[vec![c[0], p6], vec![c[2], p7]], n)?;
        return Ok(CaseSelection { case_id: CaseId::FiveCycle, anchor });
    }
    if all(2) || all(3) {
        let (len, cycles_needed, case_id) = if all(2) { (2, 3, CaseId::Order2) } else { (3, 2, CaseId::Order3) };
        let cyc: Vec<&Vec<u32>> = cs.nontrivial().take(cycles_needed).collect();
        if cyc.len() < cycles_needed {
            return Err(need(&format!("{len}-cycles"), cyc.len(), cycles_needed));
        }
        if fixed.is_empty() {
            return Err(need("fixed points", 0, 1));
        }
        let mut x: Vec<u32> = cyc.iter().flat_map(|c| c.iter().copied()).collect();
        x.push(fixed[0]);
        // x[0..7] is x1..x7
        let g = if case_id == CaseId::Order2 {
            vec![x[0], x[4], x[6], x[1], x[2]]
        } else {
            vec![x[0], x[6], x[1], x[3]]
        };
        let anchor = anchor_for(x, &[g], n)?;
        return Ok(CaseSelection { case_id, anchor });
    }
    Err(ReduceError::Inventory(format!(
        "cycle lengths {lens:?}: no cycle of length >= 7 and not of order 2, 3 or 5; power the element first"
    )))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorCase {
    pub case: String,
    pub n: usize,
    pub h: String,
    pub g: String,
    pub result: String,
    pub seven_cycle: Option<Vec<u32>>,
    pub expected_cycle: Option<Vec<u32>>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorReport {
    pub cases: Vec<AnchorCase>,
    pub passed: bool,
}

fn seven_cycle_through_smallest(c: &Perm) -> Option<Vec<u32>> {
    c.cycle_structure().cycles.into_iter().find(|c| c.len() == 7)
}

fn anchor_case(case: String, h: Perm, g: Perm, expected: Option<Vec<u32>>) -> AnchorCase {
    let b = h.conjugate(&g).expect("same domain");
    let c = Word::w0().evaluate(&h, &b).expect("same domain");
    let seven = seven_cycle_through_smallest(&c);
    let passed = match &expected {
        Some(e) => c.cycle_structure().cycles.iter().any(|cyc| cyc == e),
        None => seven.is_some(),
    };
    AnchorCase {
        case,
        n: h.n(),
        h: h.to_string(),
        g: g.to_string(),
        result: c.to_string(),
        seven_cycle: seven,
        expected_cycle: expected,
        passed,
    }
}

/// Evaluates `[h,(h^g)⁻¹][h,h^g]` for the four anchor recipes: the long
/// cycle case for every `m` in `7..=30` (checking the explicit 7-cycle
/// `(1,m,5,3,m-1,4,2)`), and the 5-cycle, order-3 and order-2 cases.
pub fn verify_lemma5() -> AnchorReport {
    let mut cases = Vec::new();
    for m in 7..=30u32 {
        let n = m as usize;
        let h = Perm::from_cycles(n, &[(1..=m).collect()]).unwrap();
        let g = Perm::from_cycles(n, &[vec![1, 3, m]]).unwrap();
        cases.push(anchor_case(format!("long_cycle_m{m}"), h, g, Some(vec![1, m, 5, 3, m - 1, 4, 2])));
    }
    let p = |s: &str| Perm::parse_cycles(7, s).unwrap();
    cases.push(anchor_case("five_cycle".into(), p("(1,2,3,4,5)"), p("(1,6)(3,7)"), None));
    cases.push(anchor_case("order3".into(), p("(1,2,3)(4,5,6)"), p("(1,7,2,4)"), None));
    cases.push(anchor_case("order2".into(), p("(1,2)(3,4)(5,6)"), p("(1,5,7,2,3)"), None));
    let passed = cases.iter().all(|c| c.passed);
    AnchorReport { cases, passed }
}
