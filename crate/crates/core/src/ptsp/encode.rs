use std::collections::BTreeSet;
use std::fmt::Write;

use num_traits::ToPrimitive;

use super::{Objective, PtspError, PtspInstance, Tour};
use crate::model::*;
use crate::parser::parse_program;
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Target {
    /// Generators plus a minimizing preference rule.
    #[default]
    Naso,
    /// Generators plus a rule deriving `length(L)` in every answer set.
    Ndlp,
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naso" => Ok(Target::Naso),
            "ndlp" => Ok(Target::Ndlp),
            other => Err(format!("unknown target `{other}` (expected naso or ndlp)")),
        }
    }
}

fn expected_length_set(n: usize) -> String {
    format!(
        "#sum{{ A : index(I,X), vertex(X,PX), 0 <= I, I <= {n}, \
         #sum{{ PX*PY*D*M : index(J,Y), vertex(Y,PY), distance(X,Y,D), I+1 <= J, J <= {n1}, \
         #times{{ 1-PZ : index(K,Z), vertex(Z,PZ), I+1 <= K, K <= J-1 }} = M }} = A }}",
        n1 = n + 1
    )
}

fn tour_length_set(n: usize) -> String {
    format!("#sum{{ D : distance(X,Y,D), index(I,X), index(I+1,Y), 0 <= I, I <= {n} }}")
}

/// Program text for an instance. `with_min` adds the `min`/`maximal` rules
/// to the NDLP target.
pub fn render_encoding(g: &PtspInstance, objective: Objective, target: Target, with_min: bool) -> String {
    let n = g.n();
    let mut out = String::new();
    for v in &g.vertices {
        match objective {
            Objective::Ptsp => writeln!(out, "vertex({},{}).", v.name, rational::to_program_text(&v.prob)),
            Objective::Tsp => writeln!(out, "vertex({}).", v.name),
        }
        .unwrap();
    }
    writeln!(out, "start({}).", g.depot).unwrap();
    for x in &g.vertices {
        for y in &g.vertices {
            if x.name != y.name {
                writeln!(out, "edge({},{}).", x.name, y.name).unwrap();
            }
        }
    }
    for (x, y, d) in g.distance_entries() {
        writeln!(out, "distance({x},{y},{}).", rational::to_program_text(d)).unwrap();
    }
    for i in 0..=n + 1 {
        writeln!(out, "position({i}).").unwrap();
    }
    let vertex_pattern = match objective {
        Objective::Ptsp => "vertex(X,P)",
        Objective::Tsp => "vertex(X)",
    };
    write!(
        out,
        "\ninTour(X,Y) | outTour(X,Y) :- start(X), edge(X,Y).\n\
         inTour(X,Y) | outTour(X,Y) :- reached(X), edge(X,Y).\n\
         reached(Y) :- inTour(X,Y).\n\
         :- inTour(X,Y), inTour(X,Y1), Y != Y1.\n\
         :- inTour(X,Y), inTour(X1,Y), X != X1.\n\
         :- {vertex_pattern}, not reached(X).\n\
         index(0,X) :- start(X).\n\
         index(I+1,Y) :- inTour(X,Y), edge(X,Y), index(I,X), I <= {n}.\n\n"
    )
    .unwrap();
    let set = match objective {
        Objective::Ptsp => expected_length_set(n),
        Objective::Tsp => tour_length_set(n),
    };
    match target {
        Target::Naso => writeln!(out, "#pref #minimize({set}).").unwrap(),
        Target::Ndlp => {
            writeln!(out, "length(L) :- {set} = L.").unwrap();
            if with_min {
                out.push_str("min(X) :- length(X), not maximal(X).\n");
                out.push_str("maximal(X) :- length(X), length(X1), X1 < X.\n");
            }
        }
    }
    out
}

pub fn encode(g: &PtspInstance, objective: Objective, target: Target, with_min: bool) -> Program {
    let text = render_encoding(g, objective, target, with_min);
    parse_program(&text).expect("encodings of validated instances parse")
}

pub fn encode_ptsp_naso(g: &PtspInstance) -> Program {
    encode(g, Objective::Ptsp, Target::Naso, false)
}

pub fn encode_tsp_naso(g: &PtspInstance) -> Program {
    encode(g, Objective::Tsp, Target::Naso, false)
}

pub fn encode_ptsp_ndlp(g: &PtspInstance, with_min: bool) -> Program {
    encode(g, Objective::Ptsp, Target::Ndlp, with_min)
}

pub fn encode_tsp_ndlp(g: &PtspInstance, with_min: bool) -> Program {
    encode(g, Objective::Tsp, Target::Ndlp, with_min)
}

/// Predicates worth showing for an encoded instance.
pub fn projection(target: Target) -> BTreeSet<Symbol> {
    let mut keep = vec!["start", "inTour", "index"];
    if target == Target::Ndlp {
        keep.extend(["length", "min"]);
    }
    keep.into_iter().map(Symbol::new).collect()
}

/// Reads the tour off the `index(i, v)` atoms for positions `0..=n`.
pub fn extract_tour(interp: &Interpretation, g: &PtspInstance) -> Result<Tour, PtspError> {
    let n = g.n();
    let mut slots: Vec<Option<String>> = vec![None; n + 1];
    for l in interp.with_predicate("index") {
        let [Term::Const(Constant::Number(i)), Term::Const(Constant::Symbol(v))] = l.atom.args.as_slice() else {
            continue;
        };
        if l.negated || !i.is_integer() {
            continue;
        }
        let Some(i) = i.to_integer().to_usize().filter(|i| *i <= n) else { continue };
        if let Some(prev) = &slots[i] {
            return Err(PtspError::MalformedTour(format!("position {i} holds both `{prev}` and `{v}`")));
        }
        slots[i] = Some(v.as_str().to_string());
    }
    let mut order = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(v) => order.push(v),
            None => return Err(PtspError::MalformedTour(format!("no vertex at position {i}"))),
        }
    }
    let tour = Tour { order };
    tour.validate(g)?;
    Ok(tour)
}
