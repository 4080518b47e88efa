//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use derange_core::families::{classical_natural, extraspecial2, ClassicalKind, Sign};
use derange_core::gammal1::GammaL1;
use derange_core::harness::specfile::{parse_spec, GroupSpec};
use derange_core::{make_field, MatGroup, PermGroup};

const M12: &str = "kind perm\ndegree 12\n\
    gen (0 1 2 3 4 5 6 7 8 9 10)\n\
    gen (2 6 10 7)(3 9 4 5)\n\
    gen (0 11)(1 10)(2 5)(3 7)(4 8)(6 9)\n";

/// M12 on 12 points, not yet enumerated (order 95040).
pub fn m12() -> PermGroup {
    match parse_spec(M12).expect("valid spec") {
        GroupSpec::Perm { group, .. } => group,
        GroupSpec::Matrix { .. } => unreachable!(),
    }
}

/// Family builders return enumerated groups; start again from the generators.
fn fresh(g: &MatGroup) -> MatGroup {
    MatGroup::new(g.ctx().clone(), g.dim(), g.generators().to_vec()).expect("valid generators")
}

/// Sp4(3) on its natural module (order 51840), not yet enumerated.
pub fn sp4_3() -> MatGroup {
    fresh(&classical_natural(ClassicalKind::Sp, 4, 3).expect("valid parameters").group)
}

/// The extraspecial normalizer 2^{1+4}_+ . O_4^+(2) over F_3, not yet enumerated.
pub fn extraspecial_s2() -> MatGroup {
    fresh(&extraspecial2(2, Sign::Plus, 3).expect("valid parameters").group)
}

pub fn gammal1(q: u64) -> Arc<GammaL1> {
    let (p, f) = derange_core::numtheory::prime_power(q).expect("prime power");
    GammaL1::new(Arc::new(make_field(p, f).expect("field"))).expect("universe")
}
