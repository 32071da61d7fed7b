#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use nested_asp::evaluator::satisfies_rule;
use nested_asp::ptsp::{PtspInstance, Vertex};
use nested_asp::rational::Rational;
use nested_asp::solver::is_minimal_model;
use nested_asp::{
    answer_sets, ground_program, parse_program, solve_program, Degree, GroundingConfig, Interpretation, Literal,
    NdlpRule, SolveOptions, Solved,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Every program under `data/corpus`, plus the generated example encodings.
pub fn corpus() -> Vec<(String, String)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(data_dir().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "lp"))
        .collect();
    paths.sort();
    paths.push(data_dir().join("example.naso"));
    paths.push(data_dir().join("example.ndlp"));
    paths
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect()
}

pub fn solve_text(text: &str) -> Solved {
    solve_program(&parse_program(text).unwrap(), GroundingConfig::default(), SolveOptions::default()).unwrap()
}

pub fn atom_strings(interp: &Interpretation) -> BTreeSet<String> {
    interp.iter().map(ToString::to_string).collect()
}

/// Subset enumeration: no proper subset of `interp` satisfies `rules`.
pub fn brute_force_minimal(rules: &[NdlpRule], interp: &Interpretation) -> bool {
    let atoms: Vec<&Literal> = interp.iter().collect();
    if !rules.iter().all(|r| satisfies_rule(interp, r)) {
        return false;
    }
    (0u64..(1 << atoms.len()) - 1).all(|mask| {
        let sub: Interpretation =
            atoms.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| (*a).clone()).collect();
        !rules.iter().all(|r| satisfies_rule(&sub, r))
    })
}

/// Every answer set of `text` is a minimal model of the whole ground program.
pub fn check_minimal_models(name: &str, text: &str) -> Result<usize, String> {
    let solved = solve_text(text);
    for s in solved.sets() {
        let rules = solved.ground.rules_for(s);
        if !is_minimal_model(&rules, s) {
            return Err(format!("{name}: {s} is not a minimal model"));
        }
        if s.len() <= 14 && !brute_force_minimal(&rules, s) {
            return Err(format!("{name}: {s} has a smaller model by enumeration"));
        }
    }
    Ok(solved.sets().len())
}

pub const ATOMS: usize = 8;

#[derive(Debug, Clone)]
pub struct PlainRule {
    pub head: BTreeSet<usize>,
    pub pos: BTreeSet<usize>,
    pub neg: BTreeSet<usize>,
}

/// A ground program without aggregates over atoms `p0..p7`.
#[derive(Debug, Clone)]
pub struct PlainProgram(pub Vec<PlainRule>);

fn rule_strategy() -> impl Strategy<Value = PlainRule> {
    let atoms = || prop::collection::btree_set(0..ATOMS, 0..=2);
    (atoms(), atoms(), atoms()).prop_map(|(head, pos, neg)| PlainRule { head, pos, neg })
}

pub fn plain_program() -> impl Strategy<Value = PlainProgram> {
    prop::collection::vec(rule_strategy(), 0..=10).prop_map(|rules| {
        PlainProgram(rules.into_iter().filter(|r| !(r.head.is_empty() && r.pos.is_empty() && r.neg.is_empty())).collect())
    })
}

impl PlainProgram {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.0 {
            let head: Vec<String> = r.head.iter().map(|a| format!("p{a}")).collect();
            let body: Vec<String> =
                r.pos.iter().map(|a| format!("p{a}")).chain(r.neg.iter().map(|a| format!("not p{a}"))).collect();
            out.push_str(&head.join(" | "));
            if !body.is_empty() {
                out.push_str(" :- ");
                out.push_str(&body.join(", "));
            }
            out.push_str(".\n");
        }
        out
    }

    fn is_model(rules: &[(BTreeSet<usize>, BTreeSet<usize>)], m: u32) -> bool {
        rules.iter().all(|(head, pos)| !pos.iter().all(|a| m & (1 << a) != 0) || head.iter().any(|a| m & (1 << a) != 0))
    }

    /// Answer sets under the classic reduct: drop rules blocked by `I`,
    /// strip the remaining negative literals, then test minimality.
    pub fn classic_answer_sets(&self) -> BTreeSet<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for i in 0u32..(1 << ATOMS) {
            let reduct: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = self
                .0
                .iter()
                .filter(|r| r.neg.iter().all(|a| i & (1 << a) == 0))
                .map(|r| (r.head.clone(), r.pos.clone()))
                .collect();
            if !Self::is_model(&reduct, i) {
                continue;
            }
            let smaller = (0..i).any(|j| j & i == j && Self::is_model(&reduct, j));
            if !smaller {
                out.insert((0..ATOMS).filter(|a| i & (1 << a) != 0).map(|a| format!("p{a}")).collect());
            }
        }
        out
    }

    pub fn solver_answer_sets(&self) -> BTreeSet<BTreeSet<String>> {
        let program = parse_program(&self.render()).unwrap();
        let ground = ground_program(&program, GroundingConfig::default()).unwrap();
        answer_sets(&ground, SolveOptions::default()).unwrap().sets.iter().map(atom_strings).collect()
    }
}

pub fn check_classic_oracle(p: &PlainProgram) -> Result<(), TestCaseError> {
    let expected = p.classic_answer_sets();
    let got = p.solver_answer_sets();
    prop_assert_eq!(got, expected, "program:\n{}", p.render());
    Ok(())
}

pub fn degree() -> impl Strategy<Value = Degree> {
    prop_oneof![4 => (1usize..=3).prop_map(Degree::Index), 1 => Just(Degree::Irrelevant)]
}

/// Two degree vectors over the same preference rules.
pub fn degree_profile() -> impl Strategy<Value = (Vec<Degree>, Vec<Degree>)> {
    (1usize..=5).prop_flat_map(|k| (prop::collection::vec(degree(), k), prop::collection::vec(degree(), k)))
}

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn name(k: usize) -> String {
    if k == 0 {
        "depot".to_string()
    } else {
        format!("v{k}")
    }
}

/// Random instance over the depot and `n` customers, with rational
/// probabilities and distances.
pub fn instance(n: std::ops::RangeInclusive<usize>, symmetric: bool, all_ones: bool) -> impl Strategy<Value = PtspInstance> {
    n.prop_flat_map(move |n| {
        let probs = prop::collection::vec((0i64..=12, 1i64..=12), n);
        let dists = prop::collection::vec((0i64..=80, 1i64..=4), (n + 1) * (n + 1));
        (Just(n), probs, dists)
    })
    .prop_map(move |(n, probs, dists)| {
        let mut vertices = vec![Vertex { name: name(0), prob: rational(1, 1) }];
        for (k, (num, den)) in probs.into_iter().enumerate() {
            let prob = if all_ones { rational(1, 1) } else { rational(num.min(den), den) };
            vertices.push(Vertex { name: name(k + 1), prob });
        }
        let mut distances = BTreeMap::new();
        for x in 0..=n {
            for y in 0..=n {
                if x == y {
                    continue;
                }
                let (num, den) = if symmetric { dists[x.min(y) * (n + 1) + x.max(y)] } else { dists[x * (n + 1) + y] };
                distances.insert((name(x), name(y)), rational(num, den));
            }
        }
        PtspInstance::new(name(0), vertices, distances).unwrap()
    })
}
