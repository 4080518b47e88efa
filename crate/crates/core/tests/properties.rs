//! Property tests for invariants that hold for every group, not just the corpus.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use derange_core::gammal1::{GammaL1, GammaL1Group};
use derange_core::matgroup::{affine_stats, fixed_vector_count, sandwich_check};
use derange_core::numtheory::{bound_f, bound_g, bound_h, gcd};
use derange_core::perm::DEFAULT_CAP;
use derange_core::{make_field, BlockSystem, ExactRatio, FieldCtx, MatGroup, Perm, PermGroup, SemilinearMap, Status};

fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

/// A group on `3..=8` points generated by one to three random permutations.
fn perm_group() -> impl Strategy<Value = PermGroup> {
    (3usize..=8).prop_flat_map(|n| {
        prop::collection::vec(perm_strategy(n), 1..=3)
            .prop_map(move |gens| PermGroup::new(n, gens).unwrap().enumerated(DEFAULT_CAP).unwrap())
    })
}

/// Random generators plus an `n`-cycle; with no extra generators this is
/// `C_n`, imprimitive for composite `n`.
fn transitive_group() -> impl Strategy<Value = PermGroup> {
    (3usize..=8).prop_flat_map(|n| {
        prop::collection::vec(perm_strategy(n), 0..=2).prop_map(move |mut gens| {
            gens.push(Perm::new((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap());
            PermGroup::new(n, gens).unwrap().enumerated(DEFAULT_CAP).unwrap()
        })
    })
}

fn element_set(g: &PermGroup) -> BTreeSet<Vec<u32>> {
    let mut s = BTreeSet::new();
    g.for_each_element(|x| {
        s.insert(x.images().to_vec());
    })
    .unwrap();
    s
}

fn naive_block_systems(g: &PermGroup) -> BTreeSet<Vec<u32>> {
    (1..g.degree() as u32)
        .map(|b| g.minimal_blocks(0, b).unwrap())
        .filter(|bs: &BlockSystem| !bs.is_trivial())
        .map(|bs| bs.block_of)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_ignores_generator_order(g in perm_group(), seed in any::<u64>()) {
        let mut gens = g.generators().to_vec();
        let k = gens.len();
        gens.rotate_left((seed as usize) % k);
        gens.reverse();
        let h = PermGroup::new(g.degree(), gens).unwrap().enumerated(DEFAULT_CAP).unwrap();
        prop_assert_eq!(element_set(&g), element_set(&h));
    }

    #[test]
    fn block_search_matches_naive_scan(g in transitive_group()) {
        let fast: BTreeSet<Vec<u32>> = g.block_systems().unwrap().into_iter().map(|b| b.block_of).collect();
        prop_assert_eq!(&fast, &naive_block_systems(&g));
        prop_assert_eq!(g.is_primitive().unwrap(), fast.is_empty());
    }

    #[test]
    fn transitive_group_inequalities(g in transitive_group()) {
        let n = g.degree() as u64;
        let delta = g.delta().unwrap();
        // Jordan and Cameron–Cohen.
        prop_assert!(delta.is_positive());
        prop_assert!(delta >= ExactRatio::new(1, n));
        let order = g.require_order().unwrap();
        if delta == ExactRatio::new(1, n) {
            prop_assert!(g.is_frobenius().unwrap() && order == n * (n - 1));
        }
        if g.is_frobenius().unwrap() {
            prop_assert_eq!((n * (n - 1)) % order, 0);
            let a = n * (n - 1) / order;
            prop_assert_eq!((n - 1) % a, 0);
            prop_assert_eq!(&delta, &ExactRatio::new(a, n));
        }
        let (_, d_index) = g.derangement_subgroup(DEFAULT_CAP).unwrap();
        prop_assert!(ExactRatio::from_integer(d_index) <= delta.recip());
        for bs in g.block_systems().unwrap() {
            let quotient = g.block_quotient(&bs).unwrap().enumerated(DEFAULT_CAP).unwrap();
            prop_assert!(delta >= quotient.delta().unwrap());
        }
    }

    #[test]
    fn gcd_of_product_is_submultiplicative(a in 1u64..=1000, b in 1u64..=1000, c in 1u64..=1000) {
        prop_assert!(gcd(a, b * c) <= gcd(a, b) * gcd(a, c));
    }

    #[test]
    fn thresholds_are_ordered_at_squares(k in 2u64..2000) {
        let n = k * k;
        let ex = |b: derange_core::Result<derange_core::numtheory::Bound>| b.unwrap().exact().cloned().unwrap();
        let (f, g, h) = (ex(bound_f(n)), ex(bound_g(n)), ex(bound_h(n)));
        prop_assert!(f < g && g < h);
        prop_assert!(g > ExactRatio::new(1, n));
    }
}

const SMALL_FIELDS: [(u64, u32); 6] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)];

fn map_strategy() -> impl Strategy<Value = (Arc<FieldCtx>, usize, Vec<Vec<u64>>, Vec<u32>)> {
    (0..SMALL_FIELDS.len(), 1usize..=2, 1usize..=2).prop_flat_map(|(fi, d, k)| {
        let (p, f) = SMALL_FIELDS[fi];
        let ctx = Arc::new(make_field(p, f).unwrap());
        let q = ctx.q();
        (
            Just(ctx),
            Just(d),
            prop::collection::vec(prop::collection::vec(0..q, d * d), k),
            prop::collection::vec(0..f, k),
        )
    })
}

/// Random invertible semilinear generators; singular draws are dropped.
fn mat_group(linear: bool) -> impl Strategy<Value = MatGroup> {
    map_strategy().prop_filter_map("singular generators", move |(ctx, d, entries, frobs)| {
        let gens: Option<Vec<SemilinearMap>> = entries
            .iter()
            .zip(&frobs)
            .map(|(e, &fr)| SemilinearMap::from_indices(&ctx, d, e, if linear { 0 } else { fr }).ok())
            .collect();
        MatGroup::new(ctx, d, gens?).ok()?.enumerated(DEFAULT_CAP).ok()
    })
}

fn is_power_of(p: u64, mut x: u64) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_vectors_form_a_subspace(g in mat_group(false)) {
        let ctx = g.ctx().clone();
        let q = ctx.q();
        let d = g.dim() as u32;
        g.for_each_element(|x| {
            let c = fixed_vector_count(&ctx, x);
            assert!(is_power_of(ctx.p(), c));
            if x.is_linear() {
                assert!((0..=d).any(|k| q.pow(k) == c));
            }
        }).unwrap();
    }

    #[test]
    fn composition_is_associative(g in mat_group(false)) {
        let ctx = g.ctx().clone();
        let gens = g.generators();
        let (a, b, c) = (&gens[0], &gens[gens.len() - 1], &g.element(g.require_order().unwrap() as usize / 2).unwrap());
        let left = a.compose(b, &ctx).unwrap().compose(c, &ctx).unwrap();
        let right = a.compose(&b.compose(c, &ctx).unwrap(), &ctx).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn affine_identities(g in mat_group(false)) {
        let s = affine_stats(&g).unwrap();
        prop_assert_eq!(&s.delta_affine, &(ExactRatio::one() - &s.eta));
        let image = g.affine_to_perm().unwrap().enumerated(DEFAULT_CAP).unwrap();
        prop_assert_eq!(&image.delta().unwrap(), &s.delta_affine);
        let (_, d_index) = image.derangement_subgroup(DEFAULT_CAP).unwrap();
        prop_assert_eq!(d_index, s.a_index);
        if s.semiregular_nonzero {
            prop_assert_eq!(&s.delta_affine, &ExactRatio::new(s.vector_count - 1, s.order * s.vector_count));
            prop_assert!(image.is_frobenius().unwrap() || image.require_order().unwrap() == s.vector_count);
        }
    }

    #[test]
    fn sandwich_holds_for_linear_groups(g in mat_group(true)) {
        let s = affine_stats(&g).unwrap();
        let check = sandwich_check("sandwich", &s, g.ctx().q());
        prop_assert_eq!(check.status, Status::Pass, "{}", check.witness);
    }

    #[test]
    fn gammal1_subgroups_satisfy_criteria(
        fi in 0usize..3,
        gens in prop::collection::vec((0u64..=255, 0u32..8), 1..=2),
    ) {
        let (p, f) = [(2u64, 4u32), (5, 2), (3, 4)][fi];
        let u = GammaL1::new(Arc::new(make_field(p, f).unwrap())).unwrap();
        let gens: Vec<(u64, u32)> = gens.into_iter().map(|(k, e)| (k % (u.q() - 1), e % f)).collect();
        let g = GammaL1Group::generated(&u, &gens).unwrap();
        prop_assert_eq!(g.t * g.m * g.c, u.q() - 1);
        for r in g.coset_checks().unwrap().iter().chain(&g.valuation_checks().unwrap()).chain(&g.invariant_checks()) {
            prop_assert_eq!(r.status, Status::Pass, "{}: {}", r.check_id, r.witness);
        }
        let m = g.to_matgroup().unwrap().enumerated(DEFAULT_CAP).unwrap();
        let s = affine_stats(&m).unwrap();
        prop_assert_eq!(&s.alpha, &g.alpha());
        prop_assert_eq!(&s.delta_affine, &g.delta_affine());
    }
}
