//! Runs every acceptance criterion and prints one line per criterion.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use nested_asp::evaluator::{eval_aggregate, multiset_of};
use nested_asp::grounder::{ground_symbolic_set, local_ground_instantiation};
use nested_asp::preference::{maximal_from_degrees, pareto_from_degrees};
use nested_asp::ptsp::{
    encode, encode_ptsp_naso, enumerate_tours, expected_length, expected_length_oracle, extract_tour, load_instance,
    optimal_tours, solve_instance, tour_length, Objective, PtspInstance, Target, Tour, Via,
};
use nested_asp::rational::{parse_decimal, round_to, Rational};
use nested_asp::{
    herbrand_universe, parse_program, solve_program, AggregateFunction, AggregateValue, Conjunct, Constant,
    GroundSet, GroundingConfig, Interpretation, Relation, SetTerm, SolveOptions, Strategy as Ranking, Symbol,
};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(started: Instant, limit: Duration) -> Result<String, String> {
    let elapsed = started.elapsed();
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases).run(&strategy, check).map_err(|e| e.to_string())
}

fn example() -> PtspInstance {
    load_instance(&fs::read_to_string(data_dir().join("example.json")).unwrap()).unwrap()
}

/// The six answer sets listed for the working example, restricted to
/// `start`, `inTour` and `index`.
const LISTED: [(&str, &str); 6] = [
    ("a,d,b,c", "start(a) inTour(a,d) inTour(d,b) inTour(b,c) inTour(c,a) index(0,a) index(1,d) index(2,b) index(3,c) index(4,a)"),
    ("a,d,c,b", "start(a) inTour(a,d) inTour(d,c) inTour(c,b) inTour(b,a) index(0,a) index(1,d) index(2,c) index(3,b) index(4,a)"),
    ("a,b,d,c", "start(a) inTour(a,b) inTour(b,d) inTour(d,c) inTour(c,a) index(0,a) index(1,b) index(2,d) index(3,c) index(4,a)"),
    ("a,c,b,d", "start(a) inTour(a,c) inTour(c,b) inTour(b,d) inTour(d,a) index(0,a) index(1,c) index(2,b) index(3,d) index(4,a)"),
    ("a,c,d,b", "start(a) inTour(a,c) inTour(c,d) inTour(d,b) inTour(b,a) index(0,a) index(1,c) index(2,d) index(3,b) index(4,a)"),
    ("a,b,c,d", "start(a) inTour(a,b) inTour(b,c) inTour(c,d) inTour(d,a) index(0,a) index(1,b) index(2,c) index(3,d) index(4,a)"),
];

fn nested_sum() -> Outcome {
    let started = Instant::now();
    let text = fs::read_to_string(data_dir().join("corpus/double_sum.lp")).unwrap();
    let program = parse_program(&text).unwrap();
    let solved = solve_program(&program, GroundingConfig::default(), SolveOptions::default()).map_err(|e| e.to_string())?;
    ensure(solved.sets().len() == 1, || format!("{} answer sets", solved.sets().len()))?;
    let shown = atom_strings(&solved.sets()[0]);
    ensure(shown.contains("s(12)"), || format!("answer set {shown:?}"))?;
    ensure(shown.iter().filter(|a| a.starts_with("s(")).count() == 1, || format!("answer set {shown:?}"))?;

    let rule = program.gen_rules.iter().find(|r| !r.body.is_empty()).unwrap();
    let Conjunct::Aggregate { atom, .. } = &rule.body[0] else { return Err(format!("unexpected body in {rule}")) };
    let SetTerm::Symbolic(set) = &atom.set else { return Err("outer set is not symbolic".into()) };
    let universe = herbrand_universe(&program);
    let first = local_ground_instantiation(set, &universe).map_err(|e| e.to_string())?;
    ensure(first.pairs.len() == 3, || format!("first step has {} pairs", first.pairs.len()))?;
    for p in &first.pairs {
        ensure(p.placeholders.len() == 1, || format!("pair without a placeholder: {:?}", p.element))?;
        let symbolic = p.condition.iter().any(|c| matches!(c, Conjunct::Aggregate { atom, .. } if matches!(atom.set, SetTerm::Symbolic(_))));
        ensure(symbolic, || "first step grounded an inner set".into())?;
    }
    let second = ground_symbolic_set(set, &universe).map_err(|e| e.to_string())?;
    let inner: Vec<usize> = second
        .pairs
        .iter()
        .flat_map(|p| &p.condition)
        .filter_map(|c| match c {
            Conjunct::Aggregate { atom, .. } => match &atom.set {
                SetTerm::Ground(g) => Some(g.pairs.len()),
                SetTerm::Symbolic(_) => None,
            },
            _ => None,
        })
        .collect();
    ensure(inner == [3, 3, 3], || format!("second step inner pair counts {inner:?}"))?;
    let facts: Interpretation = parse_program("d(1,1). d(1,2). d(2,1). d(2,2). e(3,1).")
        .unwrap()
        .gen_rules
        .iter()
        .map(|r| r.head[0].clone())
        .collect();
    let values = multiset_of(&second, &facts).map_err(|e| format!("{e:?}"))?;
    let expected = [Constant::int(5), Constant::int(7)].into_iter().collect();
    ensure(values == expected, || format!("outer multiset {values:?}"))?;
    let total = eval_aggregate(AggregateFunction::Sum, &second, &facts);
    ensure(total == AggregateValue::Defined(Rational::from_integer(12.into())), || format!("sum {total:?}"))?;
    let time = within(started, Duration::from_secs(1))?;
    Ok(format!("s(12), 3 outer pairs x 3 inner pairs, multiset {{5, 7}}, {time}"))
}

fn empty_multisets() -> Outcome {
    let empty = GroundSet::default();
    let none = Interpretation::new();
    let int = |n: i64| AggregateValue::Defined(Rational::from_integer(n.into()));
    let cases = [
        (AggregateFunction::Sum, int(0)),
        (AggregateFunction::Times, int(1)),
        (AggregateFunction::Count, int(0)),
        (AggregateFunction::Min, AggregateValue::Undefined),
        (AggregateFunction::Max, AggregateValue::Undefined),
    ];
    for (f, want) in cases {
        let got = eval_aggregate(f, &empty, &none);
        ensure(got == want, || format!("{f:?} of the empty multiset is {got:?}"))?;
    }
    let text = "p(1) | q(1).\n\
        lo :- not #min{ X : p(X) } >= 1.\n\
        hi :- #max{ X : p(X) } >= 1.\n\
        below :- #max{ X : p(X) } < 1.\n\
        nothing :- #sum{ X : p(X) } = 0, #times{ X : p(X) } = 1, #count{ X : p(X) } = 0.";
    let shown: Vec<String> = solve_text(text).sets().iter().map(ToString::to_string).collect();
    let want = ["{hi, p(1)}", "{lo, nothing, q(1)}"];
    ensure(shown == want, || format!("answer sets {shown:?}"))?;
    Ok("sum 0, times 1, count 0, min and max undefined; `not` holds on undefined".into())
}

fn working_example_sets() -> Outcome {
    let started = Instant::now();
    let g = example();
    let solved = solve_program(&encode_ptsp_naso(&g), GroundingConfig::default(), SolveOptions::default())
        .map_err(|e| e.to_string())?;
    let keep: BTreeSet<Symbol> = ["start", "inTour", "index"].into_iter().map(Symbol::new).collect();
    let got: BTreeSet<BTreeSet<String>> = solved.sets().iter().map(|s| atom_strings(&s.project(&keep))).collect();
    let listed: BTreeSet<BTreeSet<String>> =
        LISTED.iter().map(|(_, atoms)| atoms.split(' ').map(str::to_string).collect()).collect();
    ensure(solved.sets().len() == 6, || format!("{} answer sets", solved.sets().len()))?;
    ensure(got == listed, || format!("projections differ: {got:?}"))?;
    let time = within(started, Duration::from_secs(60))?;
    Ok(format!("6 answer sets equal to the listed I1..I6, {time}"))
}

fn working_example_values() -> Outcome {
    let g = example();
    let want = ["76.92", "76.67", "76.92", "76.92", "76.92", "76.67"];
    let mut shown = Vec::new();
    for ((tour, _), want) in LISTED.iter().zip(want) {
        let t = Tour::parse(tour);
        let formula = expected_length(&t, &g);
        let oracle = expected_length_oracle(&t, &g).map_err(|e| e.to_string())?;
        ensure(formula == oracle, || format!("{tour}: closed form {formula} vs oracle {oracle}"))?;
        let rounded = round_to(&formula, 2);
        ensure(rounded == want, || format!("{tour}: {rounded}, expected {want}"))?;
        shown.push(rounded);
    }
    Ok(format!("t1..t6 = {}", shown.join(", ")))
}

fn end_to_end_ranking() -> Outcome {
    let started = Instant::now();
    let g = example();
    let (best, value) = optimal_tours(&g, Objective::Ptsp).map_err(|e| e.to_string())?;
    ensure(value == parse_decimal("76.668").unwrap(), || format!("oracle optimum {value}"))?;
    let mut solved = solve_program(&encode_ptsp_naso(&g), GroundingConfig::default(), SolveOptions::default())
        .map_err(|e| e.to_string())?;
    for strategy in [Ranking::Pareto, Ranking::Maximal] {
        let ranked = solved.rank(strategy);
        let mut top: Vec<Tour> =
            ranked.top.iter().map(|&k| extract_tour(&solved.sets()[k], &g)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        top.sort();
        ensure(top == best, || format!("{strategy} top {top:?}"))?;
    }
    let time = within(started, Duration::from_secs(60))?;
    let names: Vec<String> = best.iter().map(Tour::to_string).collect();
    Ok(format!("top = {{{}}} at 76.668 under pareto and maximal, {time}", names.join("; ")))
}

fn ndlp_lengths() -> Outcome {
    let g = example();
    let solved = solve_program(&encode(&g, Objective::Ptsp, Target::Ndlp, true), GroundingConfig::default(), SolveOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(solved.sets().len() == 6, || format!("{} answer sets", solved.sets().len()))?;
    let mut tours = BTreeSet::new();
    for s in solved.sets() {
        let t = extract_tour(s, &g).map_err(|e| e.to_string())?;
        let lengths: Vec<String> = s.with_predicate("length").map(ToString::to_string).collect();
        let want = format!("length({})", nested_asp::rational::to_program_text(&expected_length(&t, &g)));
        ensure(lengths == [want.clone()], || format!("{t}: {lengths:?}, expected {want}"))?;
        tours.insert(t);
    }
    ensure(tours.len() == 6, || "tours repeat".into())?;
    Ok("every answer set has length(v) with v the exact expected length of its tour".into())
}

fn brute_force_minimum(g: &PtspInstance) -> Rational {
    enumerate_tours(g).unwrap().iter().map(|t| tour_length(t, g)).min().unwrap()
}

fn tsp_mode() -> Outcome {
    run_property(20, instance(2..=5, false, false), |g| {
        let ranked = solve_instance(&g, Objective::Tsp, Via::Naso, GroundingConfig::default(), SolveOptions::default())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let best = brute_force_minimum(&g);
        proptest::prop_assert_eq!(&ranked.value, &best);
        for t in &ranked.optimal {
            proptest::prop_assert_eq!(tour_length(t, &g), best.clone());
        }
        Ok(())
    })?;
    let g = example();
    let ranked = solve_instance(&g, Objective::Tsp, Via::Naso, GroundingConfig::default(), SolveOptions::default())
        .map_err(|e| e.to_string())?;
    let best = brute_force_minimum(&g);
    let argmin: Vec<Tour> = enumerate_tours(&g).unwrap().into_iter().filter(|t| tour_length(t, &g) == best).collect();
    ensure(ranked.optimal == argmin, || format!("example top {:?} vs argmin {argmin:?}", ranked.optimal))?;
    Ok(format!("20 random instances match brute force; example minimum {best} on {} tours", argmin.len()))
}

fn semantics_properties() -> Outcome {
    let mut checked = 0;
    for (name, text) in corpus() {
        checked += check_minimal_models(&name, &text)?;
    }
    run_property(200, plain_program(), |p| check_classic_oracle(&p))?;
    run_property(200, degree_profile(), |(d1, d2)| {
        if pareto_from_degrees(&d1, &d2) == Relation::Preferred {
            proptest::prop_assert_eq!(maximal_from_degrees(&d1, &d2), Relation::Preferred);
        }
        Ok(())
    })?;
    Ok(format!("{checked} corpus answer sets minimal; 200 programs match the classic reduct; 200 profiles"))
}

fn ptsp_properties() -> Outcome {
    let limit = Duration::from_secs(120);
    let started = Instant::now();
    run_property(200, instance(2..=7, false, false), |g| {
        for t in enumerate_tours(&g).unwrap() {
            proptest::prop_assert_eq!(expected_length(&t, &g), expected_length_oracle(&t, &g).unwrap());
        }
        Ok(())
    })?;
    let oracle = within(started, limit)?;
    let started = Instant::now();
    run_property(200, instance(2..=6, true, false), |g| {
        for t in enumerate_tours(&g).unwrap() {
            proptest::prop_assert_eq!(expected_length(&t, &g), expected_length(&t.reverse(), &g));
        }
        Ok(())
    })?;
    let reversal = within(started, limit)?;
    let started = Instant::now();
    run_property(200, instance(2..=6, false, true), |g| {
        for t in enumerate_tours(&g).unwrap() {
            proptest::prop_assert_eq!(expected_length(&t, &g), tour_length(&t, &g));
        }
        Ok(())
    })?;
    let ones = within(started, limit)?;
    Ok(format!("closed form = oracle ({oracle}), reversal ({reversal}), certain customers ({ones})"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("nested aggregate evaluation and two-step grounding", nested_sum),
        ("empty multiset semantics", empty_multisets),
        ("working example answer sets", working_example_sets),
        ("working example expected lengths", working_example_values),
        ("end-to-end ranking", end_to_end_ranking),
        ("NDLP length atoms", ndlp_lengths),
        ("TSP mode", tsp_mode),
        ("semantic properties", semantics_properties),
        ("PTSP properties", ptsp_properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let message = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", message.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
