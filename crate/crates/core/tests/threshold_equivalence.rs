use num_rational::Ratio;
use proptest::prelude::*;

use dsssp::graph::{DynamicGraph, EdgeKey, UpdateEvent};
use dsssp::oracle::build_gtau_fresh;
use dsssp::threshold::{CutoffSentinel, GtauMirror, ThresholdState};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn incremental_state_matches_fresh_build(
        n in 3..30usize,
        raw in prop::collection::vec((0..30usize, 0..30usize, 1..200u32), 1..120),
        tau in prop::sample::select(vec![(1u64, 2u64), (1, 1), (2, 1), (7, 2), (6, 1)]),
        steps in prop::collection::vec((any::<usize>(), any::<bool>(), 1..100u32), 1..80),
        zero in any::<bool>(),
    ) {
        let tau = Ratio::new(tau.0, tau.1);
        let sentinel = if zero { CutoffSentinel::Zero } else { CutoffSentinel::MinusOne };
        let mut g = DynamicGraph::new(n);
        for (u, v, w) in raw {
            let _ = g.insert_edge(u % n, v % n, w as f64);
        }
        let mut st = ThresholdState::with_options(&g, tau, sentinel, Default::default()).unwrap();
        let mut mirror = GtauMirror::from_state(&st);
        prop_assert_eq!(st.snapshot(), build_gtau_fresh(&g, tau, sentinel));
        for (pick, delete, bump) in steps {
            let keys: Vec<(EdgeKey, f64)> = g.edges().collect();
            if keys.is_empty() {
                break;
            }
            let (key, w) = keys[pick % keys.len()];
            let ev = if delete { UpdateEvent::Delete(key) } else { UpdateEvent::IncreaseWeight(key, w + bump as f64) };
            let rec = g.apply_update(&ev).unwrap().unwrap();
            let changes = st.apply(&rec).unwrap();
            prop_assert!(st.audit().is_ok(), "{:?}", st.audit());
            prop_assert_eq!(st.snapshot(), build_gtau_fresh(&g, tau, sentinel));
            prop_assert!(mirror.apply(&changes).is_ok());
            prop_assert_eq!(&mirror, &GtauMirror::from_state(&st));
        }
    }
}
