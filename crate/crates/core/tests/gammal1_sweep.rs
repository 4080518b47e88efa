use std::sync::Arc;

use derange_core::gammal1::{enumerate_in, prop_checks, GammaL1};
use derange_core::{make_field, Status};

#[test]
fn coset_criteria_agree_with_scan_for_all_square_q() {
    for (p, f) in [(2, 4), (5, 2), (2, 6), (3, 4), (2, 8)] {
        let u = GammaL1::new(Arc::new(make_field(p, f).unwrap())).unwrap();
        let groups = enumerate_in(&u).unwrap();
        let mut checked = 0;
        for g in &groups {
            for r in g.coset_checks().unwrap().into_iter().chain(g.valuation_checks().unwrap()).chain(g.invariant_checks()) {
                assert_eq!(r.status, Status::Pass, "{}: {}", r.check_id, r.witness);
                checked += 1;
            }
        }
        assert!(checked > 0);
        let props = prop_checks(&u, &groups);
        let failing: Vec<_> = props.iter().filter(|r| r.status == Status::Fail).map(|r| &r.check_id).collect();
        assert!(failing.is_empty(), "q={}: {failing:?}", u.q());
        let small: Vec<_> = props.iter().filter(|r| r.status == Status::ViolationAtSmallN).map(|r| &r.check_id).collect();
        eprintln!("q={} groups={} props={} small-n={:?}", u.q(), groups.len(), props.len(), small);
    }
}
