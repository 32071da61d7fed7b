mod common;

use std::collections::BTreeSet;

use common::*;
use nested_asp::ptsp::{
    encode, enumerate_tours, expected_length, expected_length_oracle, extract_tour, optimal_tours, solve_instance,
    tour_length, Objective, Target, Tour, Via,
};
use nested_asp::{solve_program, GroundingConfig, SolveOptions};
use proptest::prelude::*;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_subset_oracle(g in instance(2..=7, false, false)) {
        for t in enumerate_tours(&g).unwrap() {
            prop_assert_eq!(expected_length(&t, &g), expected_length_oracle(&t, &g).unwrap(), "tour {}", t);
        }
    }

    #[test]
    fn reversal_keeps_expected_length(g in instance(2..=6, true, false)) {
        for t in enumerate_tours(&g).unwrap() {
            prop_assert_eq!(expected_length(&t, &g), expected_length(&t.reverse(), &g));
        }
    }

    #[test]
    fn certain_customers_give_tour_length(g in instance(2..=6, false, true)) {
        for t in enumerate_tours(&g).unwrap() {
            prop_assert_eq!(expected_length(&t, &g), tour_length(&t, &g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn encoding_answer_sets_are_the_tours(g in instance(2..=5, false, false)) {
        let solved = solve_program(&encode(&g, Objective::Ptsp, Target::Naso, false), GroundingConfig::default(), SolveOptions::default()).unwrap();
        let tours: Vec<Tour> = solved.sets().iter().map(|s| extract_tour(s, &g).unwrap()).collect();
        let distinct: BTreeSet<&Tour> = tours.iter().collect();
        prop_assert_eq!(tours.len(), factorial(g.n()));
        prop_assert_eq!(distinct.len(), tours.len());
        prop_assert_eq!(distinct.into_iter().cloned().collect::<Vec<_>>(), enumerate_tours(&g).unwrap());
    }

    #[test]
    fn ranked_top_is_argmin(g in instance(2..=5, false, false)) {
        for objective in [Objective::Ptsp, Objective::Tsp] {
            let ranked = solve_instance(&g, objective, Via::Naso, GroundingConfig::default(), SolveOptions::default()).unwrap();
            let (best, value) = optimal_tours(&g, objective).unwrap();
            prop_assert_eq!(ranked.optimal, best);
            prop_assert_eq!(ranked.value, value);
        }
    }
}
