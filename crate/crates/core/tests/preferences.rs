mod common;

use common::*;
use nested_asp::preference::{compare_degrees, maximal_from_degrees, pareto_from_degrees};
use nested_asp::{rank, Degree, Interpretation, RankResult, Relation, Strategy as Ranking};
use proptest::prelude::*;

const COMBINATIONS: [&str; 9] = [
    "p(1)",
    "not p(2)",
    "q(3)",
    "p(1) or q(2)",
    "p(2), not q(3)",
    "#minimize(#count{ X : p(X) })",
    "#maximize(#sum{ X : p(X) })",
    "#minimize(#min{ X : q(X) })",
    "#maximize(#times{ X : q(X) })",
];

/// A three-way choice with random preference rules over it.
fn preference_program() -> impl Strategy<Value = String> {
    let head = prop::collection::vec(prop::sample::select(&COMBINATIONS[..]), 1..=3);
    prop::collection::vec(head, 1..=4).prop_map(|rules| {
        let mut text = String::from("p(1) | q(1). p(2) | q(2). p(3) | q(3).\n");
        for head in rules {
            text.push_str(&format!("#pref {}.\n", head.join(" >> ")));
        }
        text
    })
}

fn relation_between(i: &Interpretation, j: &Interpretation, sets: &[Interpretation], r: &RankResult) -> Relation {
    let a = sets.iter().position(|s| s == i).unwrap();
    let b = sets.iter().position(|s| s == j).unwrap();
    r.relation(a, b).unwrap()
}

#[test]
fn degree_lattice_is_a_total_preorder() {
    let all = [Degree::Index(1), Degree::Index(2), Degree::Index(3), Degree::Irrelevant];
    let at_least = |a: Degree, b: Degree| matches!(compare_degrees(a, b), Relation::Preferred | Relation::Equal);
    for &a in &all {
        assert_eq!(compare_degrees(a, a), Relation::Equal);
        for &b in &all {
            assert!(at_least(a, b) || at_least(b, a), "{a:?} {b:?}");
            for &c in &all {
                if at_least(a, b) && at_least(b, c) {
                    assert!(at_least(a, c), "{a:?} {b:?} {c:?}");
                }
            }
        }
    }
    assert_eq!(compare_degrees(Degree::Index(1), Degree::Index(3)), Relation::Preferred);
    assert_eq!(compare_degrees(Degree::Index(2), Degree::Irrelevant), Relation::Preferred);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pareto_implies_maximal((d1, d2) in degree_profile()) {
        if pareto_from_degrees(&d1, &d2) == Relation::Preferred {
            prop_assert_eq!(maximal_from_degrees(&d1, &d2), Relation::Preferred);
        }
    }

    #[test]
    fn profile_relations_are_antisymmetric((d1, d2) in degree_profile()) {
        prop_assert_eq!(pareto_from_degrees(&d1, &d2), pareto_from_degrees(&d2, &d1).inverse());
        prop_assert_eq!(maximal_from_degrees(&d1, &d2), maximal_from_degrees(&d2, &d1).inverse());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ranking_is_consistent(text in preference_program(), shift in 0usize..8) {
        let solved = solve_text(&text);
        let sets = solved.sets().to_vec();
        let mut rotated = sets.clone();
        rotated.rotate_left(shift % sets.len());
        for strategy in [Ranking::Pareto, Ranking::Maximal] {
            let r = rank(&sets, &solved.preferences, strategy);
            for &(i, j, rel) in &r.comparisons {
                prop_assert_eq!(r.relation(j, i), Some(rel.inverse()));
            }
            let other = rank(&rotated, &solved.preferences, strategy);
            let top: Vec<&Interpretation> = r.top.iter().map(|&k| &sets[k]).collect();
            let mut other_top: Vec<&Interpretation> = other.top.iter().map(|&k| &rotated[k]).collect();
            other_top.sort();
            let mut sorted = top.clone();
            sorted.sort();
            prop_assert_eq!(sorted, other_top, "{}", text);
            for (a, b) in sets.iter().zip(&sets[1..]) {
                prop_assert_eq!(relation_between(a, b, &sets, &r), relation_between(a, b, &rotated, &other));
            }
        }
        let pareto = rank(&sets, &solved.preferences, Ranking::Pareto);
        let maximal = rank(&sets, &solved.preferences, Ranking::Maximal);
        for &(i, j, rel) in &pareto.comparisons {
            if rel == Relation::Preferred {
                prop_assert_eq!(maximal.relation(i, j), Some(Relation::Preferred));
            }
        }
    }
}
