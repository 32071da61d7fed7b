//! Probabilistic travelling salesman instances, exact expected tour lengths
//! and their encodings as logic programs.

mod encode;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::solver::SolveError;

pub use solve::{solve_instance, PtspSolution, Via};
pub use encode::{encode, encode_ptsp_naso, encode_ptsp_ndlp, encode_tsp_naso, encode_tsp_ndlp, extract_tour, projection, render_encoding, Target};

/// Exhaustive enumeration is refused beyond this many non-depot vertices.
pub const MAX_ENUMERATED: usize = 10;
/// The subset oracle is refused beyond this many non-depot vertices.
pub const MAX_ORACLE: usize = 20;

#[derive(Debug, Clone, Error)]
pub enum PtspError {
    #[error("invalid instance: {0}")]
    Schema(String),
    #[error("vertex `{vertex}`: probability {value} is outside [0, 1]")]
    ProbabilityRange { vertex: String, value: String },
    #[error("depot `{depot}` must have probability 1, found {value}")]
    DepotProbability { depot: String, value: String },
    #[error("missing distance from `{from}` to `{to}`")]
    MissingDistance { from: String, to: String },
    #[error("distance from `{from}` to `{to}` is negative")]
    NegativeDistance { from: String, to: String },
    #[error("{count} non-depot vertices exceed the limit of {limit} for exhaustive search")]
    TooLarge { count: usize, limit: usize },
    #[error("malformed tour: {0}")]
    MalformedTour(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub prob: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtspInstance {
    /// Vertices in file order; the depot is among them.
    pub vertices: Vec<Vertex>,
    pub depot: String,
    distances: BTreeMap<String, BTreeMap<String, Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Expected length under vertex probabilities.
    #[default]
    Ptsp,
    /// Plain tour length.
    Tsp,
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ptsp" => Ok(Objective::Ptsp),
            "tsp" => Ok(Objective::Tsp),
            other => Err(format!("unknown mode `{other}` (expected ptsp or tsp)")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Decimal {
    Text(String),
    Number(serde_json::Number),
}

impl Decimal {
    fn parse(&self, what: &str) -> Result<Rational, PtspError> {
        let text = match self {
            Decimal::Text(s) => s.clone(),
            Decimal::Number(n) => n.to_string(),
        };
        rational::parse_decimal(&text).ok_or_else(|| PtspError::Schema(format!("{what}: `{text}` is not a decimal")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexFile {
    name: String,
    prob: Decimal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    depot: String,
    vertices: Vec<VertexFile>,
    distances: BTreeMap<String, BTreeMap<String, Decimal>>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "not"
        && name != "or"
}

/// Parses the JSON instance format.
pub fn load_instance(json: &str) -> Result<PtspInstance, PtspError> {
    let file: InstanceFile = serde_json::from_str(json).map_err(|e| PtspError::Schema(e.to_string()))?;
    let mut vertices = Vec::new();
    for v in &file.vertices {
        vertices.push(Vertex { name: v.name.clone(), prob: v.prob.parse(&format!("probability of `{}`", v.name))? });
    }
    let mut distances = BTreeMap::new();
    for (from, row) in &file.distances {
        for (to, d) in row {
            distances.insert((from.clone(), to.clone()), d.parse(&format!("distance from `{from}` to `{to}`"))?);
        }
    }
    PtspInstance::new(file.depot, vertices, distances)
}

impl PtspInstance {
    pub fn new(
        depot: String,
        vertices: Vec<Vertex>,
        distances: BTreeMap<(String, String), Rational>,
    ) -> Result<Self, PtspError> {
        let mut names = BTreeSet::new();
        for v in &vertices {
            if !valid_name(&v.name) {
                return Err(PtspError::Schema(format!(
                    "vertex name `{}` must start with a lowercase letter and contain only letters, digits and `_`",
                    v.name
                )));
            }
            if !names.insert(v.name.as_str()) {
                return Err(PtspError::Schema(format!("duplicate vertex `{}`", v.name)));
            }
            if v.prob < Rational::zero() || v.prob > Rational::one() {
                return Err(PtspError::ProbabilityRange { vertex: v.name.clone(), value: rational::to_program_text(&v.prob) });
            }
        }
        let Some(d) = vertices.iter().find(|v| v.name == depot) else {
            return Err(PtspError::Schema(format!("depot `{depot}` is not a vertex")));
        };
        if !d.prob.is_one() {
            return Err(PtspError::DepotProbability { depot, value: rational::to_program_text(&d.prob) });
        }
        for ((from, to), d) in &distances {
            for end in [from, to] {
                if !names.contains(end.as_str()) {
                    return Err(PtspError::Schema(format!("distance mentions unknown vertex `{end}`")));
                }
            }
            if *d < Rational::zero() {
                return Err(PtspError::NegativeDistance { from: from.clone(), to: to.clone() });
            }
            if from == to && !d.is_zero() {
                return Err(PtspError::Schema(format!("distance from `{from}` to itself must be 0")));
            }
        }
        for x in &vertices {
            for y in &vertices {
                if x.name != y.name && !distances.contains_key(&(x.name.clone(), y.name.clone())) {
                    return Err(PtspError::MissingDistance { from: x.name.clone(), to: y.name.clone() });
                }
            }
        }
        let mut rows: BTreeMap<String, BTreeMap<String, Rational>> = BTreeMap::new();
        for ((from, to), d) in distances {
            rows.entry(from).or_default().insert(to, d);
        }
        Ok(PtspInstance { vertices, depot, distances: rows })
    }

    /// Number of non-depot vertices.
    pub fn n(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn prob(&self, name: &str) -> Rational {
        self.vertices.iter().find(|v| v.name == name).map(|v| v.prob.clone()).unwrap_or_else(Rational::zero)
    }

    /// `d(x, y)`; a vertex is at distance 0 from itself unless stated otherwise.
    pub fn distance(&self, from: &str, to: &str) -> Rational {
        self.distances.get(from).and_then(|row| row.get(to)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Explicit distances between distinct vertices.
    pub fn distance_entries(&self) -> impl Iterator<Item = (&str, &str, &Rational)> {
        self.distances
            .iter()
            .flat_map(|(x, row)| row.iter().map(move |(y, d)| (x.as_str(), y.as_str(), d)))
            .filter(|(x, y, _)| x != y)
    }

    pub fn is_symmetric(&self) -> bool {
        self.distance_entries().all(|(x, y, d)| self.distance(y, x) == *d)
    }

    /// Non-depot vertex names, sorted.
    pub fn customers(&self) -> Vec<&str> {
        self.vertices.iter().map(|v| v.name.as_str()).filter(|n| *n != self.depot).sorted().collect()
    }
}

/// A depot-anchored visiting order; the return to the depot is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour {
    pub order: Vec<String>,
}

impl Tour {
    pub fn new<S: Into<String>>(order: impl IntoIterator<Item = S>) -> Self {
        Tour { order: order.into_iter().map(Into::into).collect() }
    }

    /// Parses `"a,d,c,b"`.
    pub fn parse(text: &str) -> Self {
        Tour::new(text.split(',').map(str::trim))
    }

    /// Same depot, opposite direction.
    pub fn reverse(&self) -> Tour {
        let mut order = vec![self.order[0].clone()];
        order.extend(self.order[1..].iter().rev().cloned());
        Tour { order }
    }

    /// Vertex at each position `0..=n+1`, the last being the depot again.
    fn positions(&self) -> Vec<&str> {
        let mut p: Vec<&str> = self.order.iter().map(String::as_str).collect();
        p.push(&self.order[0]);
        p
    }

    pub fn validate(&self, g: &PtspInstance) -> Result<(), PtspError> {
        if self.order.first() != Some(&g.depot) {
            return Err(PtspError::MalformedTour(format!("tour {self} does not start at the depot `{}`", g.depot)));
        }
        let visited: BTreeSet<&str> = self.order.iter().map(String::as_str).collect();
        let all: BTreeSet<&str> = g.vertices.iter().map(|v| v.name.as_str()).collect();
        if visited != all || self.order.len() != all.len() {
            return Err(PtspError::MalformedTour(format!("tour {self} does not visit every vertex exactly once")));
        }
        Ok(())
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.order.join(","))
    }
}

/// `sum_{i<j} d(t_i, t_j) p_i p_j prod_{i<k<j} (1 - p_k)` over tour positions.
pub fn expected_length(t: &Tour, g: &PtspInstance) -> Rational {
    let pos = t.positions();
    let p: Vec<Rational> = pos.iter().map(|v| g.prob(v)).collect();
    let mut total = Rational::zero();
    for i in 0..pos.len() - 1 {
        let mut skip = Rational::one();
        for j in i + 1..pos.len() {
            total += g.distance(pos[i], pos[j]) * &p[i] * &p[j] * &skip;
            skip *= Rational::one() - &p[j];
        }
    }
    total
}

/// Expected length by enumerating which customers are present: each subset
/// is weighted by its probability and travelled in tour order.
///
/// Probabilities are scaled to integers over the lcm `P` of their
/// denominators and distances over the lcm `Q` of theirs, so the sum is
/// `total / (P^n Q)` with `total` exact in machine or big integers.
pub fn expected_length_oracle(t: &Tour, g: &PtspInstance) -> Result<Rational, PtspError> {
    let customers = &t.order[1..];
    if customers.len() > MAX_ORACLE {
        return Err(PtspError::TooLarge { count: customers.len(), limit: MAX_ORACLE });
    }
    let stops = t.positions();
    let probs: Vec<Rational> = customers.iter().map(|c| g.prob(c)).collect();
    let p_scale = probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let dists: Vec<Vec<Rational>> = stops.iter().map(|x| stops.iter().map(|y| g.distance(x, y)).collect()).collect();
    let d_scale = dists.iter().flatten().fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    let scaled = |r: &Rational, by: &BigInt| (r * Rational::from_integer(by.clone())).to_integer();
    let present: Vec<(BigInt, BigInt)> =
        probs.iter().map(|p| (scaled(p, &p_scale), scaled(&(Rational::one() - p), &p_scale))).collect();
    let legs: Vec<Vec<BigInt>> = dists.iter().map(|row| row.iter().map(|d| scaled(d, &d_scale)).collect()).collect();

    let small_present: Option<Vec<(i128, i128)>> =
        present.iter().map(|(a, b)| Some((a.to_i128()?, b.to_i128()?))).collect();
    let small_legs: Option<Vec<Vec<i128>>> =
        legs.iter().map(|row| row.iter().map(ToPrimitive::to_i128).collect()).collect();
    let total = small_present
        .zip(small_legs)
        .and_then(|(p, l)| subset_total(&p, &l))
        .map(BigInt::from)
        .unwrap_or_else(|| subset_total(&present, &legs).expect("big integers do not overflow"));
    let scale = num_traits::pow(p_scale, customers.len()) * d_scale;
    Ok(Rational::new(total, scale))
}

/// `sum over subsets of weight * route length`, or `None` on overflow.
fn subset_total<T>(present: &[(T, T)], legs: &[Vec<T>]) -> Option<T>
where
    T: Clone + Zero + One + CheckedAdd + CheckedMul,
{
    let n = present.len();
    let mut total = T::zero();
    for mask in 0u32..(1 << n) {
        let mut weight = T::one();
        let mut length = T::zero();
        let mut last = 0;
        for (k, (visit, skip)) in present.iter().enumerate() {
            if mask & (1 << k) != 0 {
                weight = weight.checked_mul(visit)?;
                length = length.checked_add(&legs[last][k + 1])?;
                last = k + 1;
            } else {
                weight = weight.checked_mul(skip)?;
            }
        }
        length = length.checked_add(&legs[last][n + 1])?;
        total = total.checked_add(&weight.checked_mul(&length)?)?;
    }
    Some(total)
}

/// `sum_i d(t_i, t_{i+1})` with the return leg.
pub fn tour_length(t: &Tour, g: &PtspInstance) -> Rational {
    t.positions().windows(2).map(|w| g.distance(w[0], w[1])).sum()
}

pub fn objective_value(t: &Tour, g: &PtspInstance, objective: Objective) -> Rational {
    match objective {
        Objective::Ptsp => expected_length(t, g),
        Objective::Tsp => tour_length(t, g),
    }
}

/// Every depot-anchored tour, in lexicographic order of the customer sequence.
pub fn enumerate_tours(g: &PtspInstance) -> Result<Vec<Tour>, PtspError> {
    let customers = g.customers();
    if customers.len() > MAX_ENUMERATED {
        return Err(PtspError::TooLarge { count: customers.len(), limit: MAX_ENUMERATED });
    }
    let k = customers.len();
    Ok(customers
        .into_iter()
        .permutations(k)
        .map(|perm| Tour::new(std::iter::once(g.depot.as_str()).chain(perm)))
        .collect())
}

/// All tours attaining the minimum, in canonical order, and that minimum.
pub fn optimal_tours(g: &PtspInstance, objective: Objective) -> Result<(Vec<Tour>, Rational), PtspError> {
    let mut best: Option<Rational> = None;
    let mut winners = Vec::new();
    for t in enumerate_tours(g)? {
        let v = objective_value(&t, g, objective);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => winners.push(t),
            _ => {
                best = Some(v);
                winners = vec![t];
            }
        }
    }
    Ok((winners, best.unwrap_or_else(Rational::zero)))
}

/// The first optimal tour in canonical order.
pub fn optimal_tour(g: &PtspInstance, objective: Objective) -> Result<(Tour, Rational), PtspError> {
    let (tours, value) = optimal_tours(g, objective)?;
    Ok((tours.into_iter().next().expect("an instance has at least one tour"), value))
}
