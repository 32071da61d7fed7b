//! Parse, ground, solve and rank in one call.

use std::time::Duration;

use crate::grounder::{GroundProgram, Grounder, GroundingConfig};
use crate::model::*;
use crate::preference::{rank, RankResult, Strategy};
use crate::solver::{answer_sets, AnswerSetCollection, SolveError, SolveOptions};

/// `Instant` panics on wasm32-unknown-unknown, so timings read zero there.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub ground: GroundProgram,
    pub answer_sets: AnswerSetCollection,
    /// Preference rules grounded against the answer sets.
    pub preferences: Vec<PreferenceRule>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl Solved {
    pub fn sets(&self) -> &[Interpretation] {
        &self.answer_sets.sets
    }

    pub fn rank(&mut self, strategy: Strategy) -> RankResult {
        let started = Stopwatch::start();
        let result = rank(&self.answer_sets.sets, &self.preferences, strategy);
        self.timings.push(("rank", started.elapsed()));
        result
    }
}

pub fn solve_program(program: &Program, grounding: GroundingConfig, options: SolveOptions) -> Result<Solved, SolveError> {
    let started = Stopwatch::start();
    let grounder = Grounder::new(program, grounding)?;
    let ground = grounder.ground_generators()?;
    let ground_time = started.elapsed();

    let started = Stopwatch::start();
    let answer_sets = answer_sets(&ground, options)?;
    let solve_time = started.elapsed();

    let started = Stopwatch::start();
    let preferences =
        if program.pref_rules.is_empty() { Vec::new() } else { grounder.ground_preferences(&answer_sets.sets)? };
    let timings = vec![("ground", ground_time), ("solve", solve_time), ("ground_preferences", started.elapsed())];
    Ok(Solved { ground, answer_sets, preferences, timings })
}
