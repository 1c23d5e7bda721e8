mod support;

use std::sync::Arc;

use featnom_core::models::BundledInstance;
use featnom_core::oracle::{
    bayes_scheme, class_representatives, class_route_loss, level_k_loss, r_k_statistic, Mode, RankList, SchemeTable,
    SymmetryPolicy,
};
use featnom_core::rng::stream_rng;
use proptest::prelude::*;
use support::brute_force::brute_force_loss;

const FOUR_VERTEX: [BundledInstance; 4] = [
    BundledInstance::Example41Small,
    BundledInstance::EmptyGraph,
    BundledInstance::GraphSignal,
    BundledInstance::Mixed4,
];

fn bayes(b: BundledInstance, mode: Mode) -> (featnom_core::models::EnumerableNominatableDistribution, SchemeTable) {
    let d = b.build().unwrap();
    let s = bayes_scheme(&d, mode, SymmetryPolicy::Average, RankList::identity(d.m())).unwrap();
    (d, s)
}

#[test]
fn bayes_loss_matches_brute_force_relabeling() {
    for b in FOUR_VERTEX {
        for mode in Mode::ALL {
            let (d, s) = bayes(b, mode);
            for k in 1..d.m() {
                let lib = level_k_loss(&s, &d, k).unwrap();
                let brute = brute_force_loss(&d, mode.view(), k);
                assert!((lib - brute).abs() <= 1e-9, "{} {:?} k={k}: {lib} vs {brute}", b.name(), mode);
                assert!((class_route_loss(&s, k).unwrap() - lib).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn const_features_brute_force_agrees() {
    let (d, s) = bayes(BundledInstance::ConstFeatures, Mode::FeatureAware);
    let lib = level_k_loss(&s, &d, 1).unwrap();
    assert!((lib - brute_force_loss(&d, Mode::FeatureAware.view(), 1)).abs() <= 1e-9);
}

#[test]
fn losses_are_ordered_by_information() {
    for b in FOUR_VERTEX {
        let d = b.build().unwrap();
        for k in 1..d.m() {
            let fa = brute_force_loss(&d, Mode::FeatureAware.view(), k);
            let fo = brute_force_loss(&d, Mode::FeatureOblivious.view(), k);
            let no = brute_force_loss(&d, Mode::NetworkOblivious.view(), k);
            assert!(fa <= fo + 1e-12 && fa <= no + 1e-12, "{} k={k}", b.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_schemes_never_beat_the_bayes_statistic(seed in any::<u64>(), which in 0usize..4, mode in 0usize..3) {
        let mode = Mode::ALL[mode];
        let (d, s) = bayes(FOUR_VERTEX[which], mode);
        let partition = Arc::new(class_representatives(&d, mode, SymmetryPolicy::Average).unwrap());
        let random = SchemeTable::random(partition, &mut stream_rng(seed, 0));
        for k in 1..d.m() {
            for c in 0..s.partition().classes().len() {
                let r = r_k_statistic(&random, c, k).unwrap();
                let best = r_k_statistic(&s, c, k).unwrap();
                prop_assert!(r <= best + 1e-12);
            }
            prop_assert!(level_k_loss(&random, &d, k).unwrap() >= level_k_loss(&s, &d, k).unwrap() - 1e-12);
        }
    }
}
