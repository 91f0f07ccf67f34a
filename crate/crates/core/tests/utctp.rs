use proptest::prelude::*;
use tctp::random::{random_temporal, rng, TemporalParams};
use tctp::utctp::{brute_u_game, decide_u, earliest_arrival, BruteLimits};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expansion_matches_exhaustive_game(seed in any::<u64>()) {
        let inst = random_temporal(&mut rng(seed), TemporalParams::default());
        let fast = decide_u(&inst, 0, None).unwrap().wins;
        let slow = brute_u_game(&inst, 0, None, BruteLimits::default()).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn windows_match_exhaustive_game(seed in any::<u64>(), t1 in 0u64..3, len in 0u64..6) {
        let inst = random_temporal(&mut rng(seed), TemporalParams::default());
        let fast = decide_u(&inst, t1, Some(t1 + len)).unwrap().wins;
        let slow = brute_u_game(&inst, t1, Some(t1 + len), BruteLimits::default()).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn earliest_arrival_is_guaranteed_arrival(seed in any::<u64>()) {
        let inst = random_temporal(&mut rng(seed), TemporalParams::default());
        let d = decide_u(&inst, 0, None).unwrap();
        prop_assert_eq!(earliest_arrival(&inst).unwrap(), d.worst_arrival);
    }

    #[test]
    fn widening_the_window_never_hurts(seed in any::<u64>(), t1 in 0u64..3, len in 0u64..6) {
        let inst = random_temporal(&mut rng(seed), TemporalParams::default());
        if decide_u(&inst, t1 + 1, Some(t1 + 1 + len)).unwrap().wins {
            prop_assert!(decide_u(&inst, t1, Some(t1 + 2 + len)).unwrap().wins);
        }
    }
}
