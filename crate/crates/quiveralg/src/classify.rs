//! Membership checks for the algebra classes handled by the toolkit:
//! gentle pairs, special biserial, skewed-gentle and clannish presentations.
//!
//! Every negative verdict carries typed witnesses that can be replayed
//! against the presentation with [`replay_witness`].

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{Presentation, Provenance, Relation};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Continuations: arrows leaving the head of the base arrow.
    Forward,
    /// Predecessors: arrows entering the tail of the base arrow.
    Backward,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopPosition {
    /// The relation's first applied arrow is a special loop.
    First,
    /// The relation's last applied arrow is a special loop.
    Last,
    /// The relation contains the square of a special loop.
    Square,
}

/// A machine-checkable record of one violated clause.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum Witness {
    /// The class forbids special loops (gentle pairs, special biserial).
    SpecialLoopPresent { arrows: Vec<ArrowId> },
    /// The class requires a monomial relation set.
    NonMonomialRelation { relation: usize, display: String },
    /// Gentle pairs require zero relations of length exactly two.
    RelationNotLengthTwo {
        relation: usize,
        length: usize,
        display: String,
    },
    /// More than two arrows in or out of a vertex. `label` names the clause
    /// in the class where it was violated (SB1, C2, or the gentle degree
    /// bound).
    DegreeExceeded {
        label: String,
        vertex: VertexId,
        direction: Direction,
        arrows: Vec<ArrowId>,
    },
    /// Two continuations (or predecessors) of `arrow` whose composite words
    /// have the same membership status in the length-two relation set.
    ContinuationClash {
        label: String,
        arrow: ArrowId,
        side: Side,
        in_ideal: bool,
        continuations: Vec<ArrowId>,
    },
    /// (C1): a zero relation begins or ends with a special loop, or contains
    /// its square.
    SpecialLoopInZeroRelation {
        relation: usize,
        arrow: ArrowId,
        position: LoopPosition,
    },
    /// The algebra is infinite dimensional; the cycle is a composable closed
    /// walk all of whose repetitions avoid the monomial relations. For
    /// clannish inputs the cycle lives in the split presentation.
    InfiniteDimensional {
        cycle: Vec<ArrowId>,
        in_split_presentation: bool,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    fn from_witnesses(witnesses: Vec<Witness>) -> Self {
        Verdict {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum FiniteDimensionality {
    Finite,
    Infinite {
        cycle: Vec<ArrowId>,
        in_split_presentation: bool,
    },
    NotEvaluated {
        reason: String,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ClassificationReport {
    pub gentle_pair: Verdict,
    pub special_biserial: Verdict,
    pub skewed_gentle: Verdict,
    pub clannish: Verdict,
    pub finite_dimensional: FiniteDimensionality,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraClass {
    GentlePair,
    SpecialBiserial,
    SkewedGentle,
    Clannish,
}

/// The set of length-two zero-relation words, keyed in application order:
/// the word `ba` is stored as `(a, b)`.
fn length_two_set(p: &Presentation) -> BTreeSet<(ArrowId, ArrowId)> {
    p.zero_paths()
        .iter()
        .filter(|(_, path)| path.len() == 2)
        .map(|(_, path)| (path.arrows()[0].clone(), path.arrows()[1].clone()))
        .collect()
}

fn special_loop_witness(p: &Presentation) -> Option<Witness> {
    let arrows: Vec<ArrowId> = p.quiver().special_set().iter().cloned().collect();
    if arrows.is_empty() {
        None
    } else {
        Some(Witness::SpecialLoopPresent { arrows })
    }
}

fn non_monomial_witnesses(p: &Presentation) -> Vec<Witness> {
    p.relations()
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match r {
            Relation::LinearCombination(_) => Some(Witness::NonMonomialRelation {
                relation: i,
                display: r.display(),
            }),
            _ => None,
        })
        .collect()
}

fn degree_witnesses(quiver: &Quiver, label: &str) -> Vec<Witness> {
    let mut out = Vec::new();
    for v in quiver.vertices() {
        let incoming: Vec<ArrowId> = quiver.arrows_into(v).iter().map(|a| a.id.clone()).collect();
        if incoming.len() > 2 {
            out.push(Witness::DegreeExceeded {
                label: label.into(),
                vertex: v.clone(),
                direction: Direction::In,
                arrows: incoming,
            });
        }
        let outgoing: Vec<ArrowId> =
            quiver.arrows_out_of(v).iter().map(|a| a.id.clone()).collect();
        if outgoing.len() > 2 {
            out.push(Witness::DegreeExceeded {
                label: label.into(),
                vertex: v.clone(),
                direction: Direction::Out,
                arrows: outgoing,
            });
        }
    }
    out
}

/// Counts continuations of each arrow on both sides, split by membership of
/// the composite word in the length-two relation set. `check_in_ideal`
/// controls whether clashes on the in-ideal side are reported (gentle pairs)
/// or only the unique-continuation side (SB2/C3).
fn continuation_witnesses(
    quiver: &Quiver,
    two_set: &BTreeSet<(ArrowId, ArrowId)>,
    label: &str,
    check_in_ideal: bool,
    ordinary_only: bool,
) -> Vec<Witness> {
    let mut out = Vec::new();
    for base in quiver.arrows() {
        if ordinary_only && quiver.is_special(&base.id) {
            continue;
        }
        for side in [Side::Forward, Side::Backward] {
            let candidates: Vec<&crate::quiver::Arrow> = match side {
                Side::Forward => quiver.arrows_out_of(&base.head),
                Side::Backward => quiver.arrows_into(&base.tail),
            };
            let mut in_ideal = Vec::new();
            let mut outside = Vec::new();
            for c in candidates {
                let key = match side {
                    Side::Forward => (base.id.clone(), c.id.clone()),
                    Side::Backward => (c.id.clone(), base.id.clone()),
                };
                if two_set.contains(&key) {
                    in_ideal.push(c.id.clone());
                } else {
                    outside.push(c.id.clone());
                }
            }
            if check_in_ideal && in_ideal.len() > 1 {
                out.push(Witness::ContinuationClash {
                    label: label.into(),
                    arrow: base.id.clone(),
                    side,
                    in_ideal: true,
                    continuations: in_ideal,
                });
            }
            if outside.len() > 1 {
                out.push(Witness::ContinuationClash {
                    label: label.into(),
                    arrow: base.id.clone(),
                    side,
                    in_ideal: false,
                    continuations: outside,
                });
            }
        }
    }
    out
}

fn c1_witnesses(p: &Presentation) -> Vec<Witness> {
    let quiver = p.quiver();
    let mut out = Vec::new();
    for (idx, path) in p.zero_paths() {
        let arrows = path.arrows();
        let first = &arrows[0];
        if quiver.is_special(first) {
            out.push(Witness::SpecialLoopInZeroRelation {
                relation: idx,
                arrow: first.clone(),
                position: LoopPosition::First,
            });
        }
        let last = &arrows[arrows.len() - 1];
        if quiver.is_special(last) {
            out.push(Witness::SpecialLoopInZeroRelation {
                relation: idx,
                arrow: last.clone(),
                position: LoopPosition::Last,
            });
        }
        for pair in arrows.windows(2) {
            if pair[0] == pair[1] && quiver.is_special(&pair[0]) {
                out.push(Witness::SpecialLoopInZeroRelation {
                    relation: idx,
                    arrow: pair[0].clone(),
                    position: LoopPosition::Square,
                });
                break;
            }
        }
    }
    out
}

/// Decides whether the monomial quotient by `words` has arbitrarily long
/// paths avoiding every word as a factor. Returns a certifying closed walk
/// of arrows if so. Exact for arbitrary finite monomial relation sets.
fn monomial_infinite_cycle(quiver: &Quiver, words: &[&Path]) -> Option<Vec<ArrowId>> {
    // A state is the current vertex plus the set of partial relation matches
    // ending at the current position. A transition that completes a relation
    // word is removed, so walks in this graph are exactly the
    // relation-avoiding paths.
    type MatchSet = BTreeSet<(usize, usize)>;

    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct State {
        vertex: usize,
        matches: MatchSet,
    }

    let vertex_index: BTreeMap<&VertexId, usize> = quiver
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();

    let mut index: BTreeMap<State, usize> = BTreeMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut edges: Vec<Vec<(usize, ArrowId)>> = Vec::new();
    let mut queue = std::collections::VecDeque::new();

    for v in quiver.vertices() {
        let s = State {
            vertex: vertex_index[v],
            matches: MatchSet::new(),
        };
        if !index.contains_key(&s) {
            index.insert(s.clone(), states.len());
            states.push(s.clone());
            edges.push(Vec::new());
            queue.push_back(index[&s]);
        }
    }

    while let Some(si) = queue.pop_front() {
        let state = states[si].clone();
        let vertex = quiver.vertices()[state.vertex].clone();
        'arrows: for arrow in quiver.arrows_out_of(&vertex) {
            let mut next = MatchSet::new();
            for &(w, l) in &state.matches {
                if words[w].arrows()[l] == arrow.id {
                    if l + 1 == words[w].len() {
                        continue 'arrows; // the word completes: path dies
                    }
                    next.insert((w, l + 1));
                }
            }
            for (w, word) in words.iter().enumerate() {
                if word.arrows()[0] == arrow.id {
                    if word.len() == 1 {
                        continue 'arrows;
                    }
                    next.insert((w, 1));
                }
            }
            let target = State {
                vertex: vertex_index[&arrow.head],
                matches: next,
            };
            let ti = match index.get(&target) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    index.insert(target.clone(), t);
                    states.push(target);
                    edges.push(Vec::new());
                    queue.push_back(t);
                    t
                }
            };
            edges[si].push((ti, arrow.id.clone()));
        }
    }

    // Iterative DFS cycle detection; a back edge to a gray node closes a
    // certifying walk.
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; states.len()];
    let mut on_path: Vec<(usize, Option<ArrowId>)> = Vec::new();

    for start in 0..states.len() {
        if color[start] != Color::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = Color::Gray;
        on_path.push((start, None));
        while let Some(&mut (node, ref mut edge_pos)) = stack.last_mut() {
            if *edge_pos < edges[node].len() {
                let (to, ref label) = edges[node][*edge_pos];
                *edge_pos += 1;
                match color[to] {
                    Color::White => {
                        color[to] = Color::Gray;
                        stack.push((to, 0));
                        on_path.push((to, Some(label.clone())));
                    }
                    Color::Gray => {
                        let pos = on_path.iter().position(|(n, _)| *n == to).unwrap();
                        let mut cycle: Vec<ArrowId> = on_path[pos + 1..]
                            .iter()
                            .map(|(_, l)| l.clone().unwrap())
                            .collect();
                        cycle.push(label.clone());
                        return Some(cycle);
                    }
                    Color::Black => {}
                }
            } else {
                color[node] = Color::Black;
                stack.pop();
                on_path.pop();
            }
        }
    }
    None
}

fn fin_dim_on_zero_paths(p: &Presentation, in_split: bool) -> FiniteDimensionality {
    let words: Vec<&Path> = p.zero_paths().into_iter().map(|(_, path)| path).collect();
    match monomial_infinite_cycle(p.quiver(), &words) {
        Some(cycle) => FiniteDimensionality::Infinite {
            cycle,
            in_split_presentation: in_split,
        },
        None => FiniteDimensionality::Finite,
    }
}

/// Finite-dimensionality of the presented algebra, decided on the monomial
/// relation set; presentations with special loops are split first (the
/// idempotent relations do not truncate paths).
pub fn is_finite_dimensional(p: &Presentation) -> Result<FiniteDimensionality> {
    if !p.has_special_loops() {
        return Ok(fin_dim_on_zero_paths(p, false));
    }
    let structural = is_structurally_clannish(p);
    if !structural.holds {
        return Err(Error::NotInClass {
            class: "a supported class (clannish, special biserial or gentle)".into(),
            details: witness_summary(&structural.witnesses),
        });
    }
    let (split, _) = crate::split::split_presentation(p)?;
    Ok(fin_dim_on_zero_paths(&split, true))
}

pub(crate) fn witness_summary(witnesses: &[Witness]) -> String {
    let rendered: Vec<String> = witnesses.iter().map(describe_witness).collect();
    rendered.join("; ")
}

/// One-line rendering of a witness, used by the CLI report.
pub fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::SpecialLoopPresent { arrows } => {
            format!("special loop(s) present: {}", join_ids(arrows))
        }
        Witness::NonMonomialRelation { relation, display } => {
            format!("relation {relation} is not monomial: {display}")
        }
        Witness::RelationNotLengthTwo {
            relation,
            length,
            display,
        } => format!("relation {relation} has length {length}, not 2: {display}"),
        Witness::DegreeExceeded {
            label,
            vertex,
            direction,
            arrows,
        } => {
            let dir = match direction {
                Direction::In => "into",
                Direction::Out => "out of",
            };
            format!(
                "({label}) {} arrows {dir} vertex {vertex}: {}",
                arrows.len(),
                join_ids(arrows)
            )
        }
        Witness::ContinuationClash {
            label,
            arrow,
            side,
            in_ideal,
            continuations,
        } => {
            let what = match (side, in_ideal) {
                (Side::Forward, true) => "continuations inside the relation set",
                (Side::Forward, false) => "continuations outside the relation set",
                (Side::Backward, true) => "predecessors inside the relation set",
                (Side::Backward, false) => "predecessors outside the relation set",
            };
            format!(
                "({label}) arrow {arrow} has {} {what}: {}",
                continuations.len(),
                join_ids(continuations)
            )
        }
        Witness::SpecialLoopInZeroRelation {
            relation,
            arrow,
            position,
        } => {
            let pos = match position {
                LoopPosition::First => "begins with",
                LoopPosition::Last => "ends with",
                LoopPosition::Square => "contains the square of",
            };
            format!("(C1) zero relation {relation} {pos} special loop {arrow}")
        }
        Witness::InfiniteDimensional {
            cycle,
            in_split_presentation,
        } => {
            let place = if *in_split_presentation {
                " (in the split presentation)"
            } else {
                ""
            };
            format!(
                "infinite dimensional: relation-avoiding cycle {}{place}",
                join_ids(cycle)
            )
        }
    }
}

fn join_ids(ids: &[ArrowId]) -> String {
    ids.iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Gentle pair check: no special loops, monomial length-two relations,
/// in/out degrees at most two, unique continuations on both sides in and
/// outside the ideal, finite dimensionality.
pub fn is_gentle_pair(p: &Presentation) -> Verdict {
    let mut witnesses = Vec::new();
    let has_special = p.has_special_loops();
    if let Some(w) = special_loop_witness(p) {
        witnesses.push(w);
    }
    witnesses.extend(non_monomial_witnesses(p));
    for (idx, path) in p.zero_paths() {
        if path.len() != 2 {
            witnesses.push(Witness::RelationNotLengthTwo {
                relation: idx,
                length: path.len(),
                display: format!("zero {}", path.word()),
            });
        }
    }
    witnesses.extend(degree_witnesses(p.quiver(), "degree"));
    let two = length_two_set(p);
    witnesses.extend(continuation_witnesses(
        p.quiver(),
        &two,
        "unique-continuation",
        true,
        false,
    ));
    if !has_special {
        if let FiniteDimensionality::Infinite { cycle, .. } = fin_dim_on_zero_paths(p, false) {
            witnesses.push(Witness::InfiniteDimensional {
                cycle,
                in_split_presentation: false,
            });
        }
    }
    Verdict::from_witnesses(witnesses)
}

/// Special biserial check: (SB1) degree bounds and (SB2) unique
/// continuations outside the relation set, on a monomial presentation
/// without special loops, plus finite dimensionality.
pub fn is_special_biserial(p: &Presentation) -> Verdict {
    let mut witnesses = Vec::new();
    let has_special = p.has_special_loops();
    if let Some(w) = special_loop_witness(p) {
        witnesses.push(w);
    }
    witnesses.extend(non_monomial_witnesses(p));
    witnesses.extend(degree_witnesses(p.quiver(), "SB1"));
    let two = length_two_set(p);
    witnesses.extend(continuation_witnesses(p.quiver(), &two, "SB2", false, false));
    if !has_special {
        if let FiniteDimensionality::Infinite { cycle, .. } = fin_dim_on_zero_paths(p, false) {
            witnesses.push(Witness::InfiniteDimensional {
                cycle,
                in_split_presentation: false,
            });
        }
    }
    Verdict::from_witnesses(witnesses)
}

/// The auxiliary pair of the skewed-gentle check: special loops are
/// demoted to ordinary loops and every idempotent relation e² − e is
/// replaced by the square-zero relation e².
pub fn auxiliary_gentle_pair(p: &Presentation) -> Result<Presentation> {
    let quiver = p.quiver();
    let aux_quiver = Quiver::new(
        quiver.vertices().to_vec(),
        quiver.arrows().to_vec(),
        BTreeSet::new(),
    )?;
    let mut relations = Vec::new();
    for rel in p.relations() {
        match rel {
            Relation::ZeroPath(path) => relations.push(Relation::ZeroPath(path.clone())),
            Relation::LinearCombination(terms) => {
                relations.push(Relation::LinearCombination(terms.clone()))
            }
            Relation::IdempotentLoop(e) => {
                let square = Path::new(&aux_quiver, vec![e.clone(), e.clone()])?;
                relations.push(Relation::ZeroPath(square));
            }
        }
    }
    Ok(Presentation::new(aux_quiver, relations, Provenance::User)?
        .with_name(format!("{}-aux", p.name())))
}

/// Skewed-gentle check: the auxiliary pair (squares instead of idempotents)
/// must be a gentle pair.
pub fn is_skewed_gentle(p: &Presentation) -> Verdict {
    match auxiliary_gentle_pair(p) {
        Ok(aux) => is_gentle_pair(&aux),
        Err(e) => Verdict {
            holds: false,
            witnesses: vec![Witness::NonMonomialRelation {
                relation: usize::MAX,
                display: format!("auxiliary pair could not be built: {e}"),
            }],
        },
    }
}

/// The structural clannish clauses: monomial relation set, (C1), (C2), (C3).
/// Finite dimensionality is checked separately on the split presentation.
pub fn is_structurally_clannish(p: &Presentation) -> Verdict {
    let mut witnesses = Vec::new();
    witnesses.extend(non_monomial_witnesses(p));
    witnesses.extend(c1_witnesses(p));
    witnesses.extend(degree_witnesses(p.quiver(), "C2"));
    let two = length_two_set(p);
    witnesses.extend(continuation_witnesses(p.quiver(), &two, "C3", false, true));
    Verdict::from_witnesses(witnesses)
}

/// Full clannish check: the structural clauses plus finite dimensionality
/// of the split presentation.
pub fn is_clannish(p: &Presentation) -> Verdict {
    let mut verdict = is_structurally_clannish(p);
    if !verdict.holds {
        return verdict;
    }
    match is_finite_dimensional(p) {
        Ok(FiniteDimensionality::Finite) => verdict,
        Ok(FiniteDimensionality::Infinite {
            cycle,
            in_split_presentation,
        }) => {
            verdict.holds = false;
            verdict.witnesses.push(Witness::InfiniteDimensional {
                cycle,
                in_split_presentation,
            });
            verdict
        }
        Ok(FiniteDimensionality::NotEvaluated { .. }) | Err(_) => {
            // Structurally clannish presentations always split.
            verdict.holds = false;
            verdict
        }
    }
}

/// Runs every class check and the finite-dimensionality decision.
pub fn classify(p: &Presentation) -> ClassificationReport {
    let finite_dimensional = if !p.has_special_loops() {
        fin_dim_on_zero_paths(p, false)
    } else {
        match is_finite_dimensional(p) {
            Ok(v) => v,
            Err(e) => FiniteDimensionality::NotEvaluated {
                reason: e.to_string(),
            },
        }
    };
    ClassificationReport {
        gentle_pair: is_gentle_pair(p),
        special_biserial: is_special_biserial(p),
        skewed_gentle: is_skewed_gentle(p),
        clannish: is_clannish(p),
        finite_dimensional,
    }
}

/// Re-evaluates a witness against the presentation: returns true when the
/// claimed clause violation is really there. Witnesses of the skewed-gentle
/// check are replayed against the auxiliary pair; infinite-dimensionality
/// witnesses of the clannish check against the split presentation.
pub fn replay_witness(p: &Presentation, class: AlgebraClass, w: &Witness) -> bool {
    if class == AlgebraClass::SkewedGentle {
        return match auxiliary_gentle_pair(p) {
            Ok(aux) => replay_witness(&aux, AlgebraClass::GentlePair, w),
            Err(_) => false,
        };
    }
    let quiver = p.quiver();
    match w {
        Witness::SpecialLoopPresent { arrows } => {
            !arrows.is_empty() && arrows.iter().all(|a| quiver.is_special(a))
        }
        Witness::NonMonomialRelation { relation, .. } => matches!(
            p.relations().get(*relation),
            Some(Relation::LinearCombination(_))
        ),
        Witness::RelationNotLengthTwo {
            relation, length, ..
        } => match p.relations().get(*relation) {
            Some(Relation::ZeroPath(path)) => path.len() == *length && *length != 2,
            _ => false,
        },
        Witness::DegreeExceeded {
            vertex,
            direction,
            arrows,
            ..
        } => {
            let actual: Vec<ArrowId> = match direction {
                Direction::In => quiver.arrows_into(vertex).iter().map(|a| a.id.clone()).collect(),
                Direction::Out => quiver
                    .arrows_out_of(vertex)
                    .iter()
                    .map(|a| a.id.clone())
                    .collect(),
            };
            arrows.len() > 2 && *arrows == actual
        }
        Witness::ContinuationClash {
            label,
            arrow,
            side,
            in_ideal,
            continuations,
        } => {
            let base = match quiver.arrow(arrow) {
                Some(a) => a,
                None => return false,
            };
            if label == "C3" && quiver.is_special(&base.id) {
                return false;
            }
            if continuations.len() < 2 {
                return false;
            }
            let two = length_two_set(p);
            continuations.iter().all(|c| {
                let ca = match quiver.arrow(c) {
                    Some(a) => a,
                    None => return false,
                };
                let (composable, key) = match side {
                    Side::Forward => (ca.tail == base.head, (base.id.clone(), ca.id.clone())),
                    Side::Backward => (ca.head == base.tail, (ca.id.clone(), base.id.clone())),
                };
                composable && two.contains(&key) == *in_ideal
            })
        }
        Witness::SpecialLoopInZeroRelation {
            relation,
            arrow,
            position,
        } => match p.relations().get(*relation) {
            Some(Relation::ZeroPath(path)) => {
                if !quiver.is_special(arrow) {
                    return false;
                }
                let arrows = path.arrows();
                match position {
                    LoopPosition::First => &arrows[0] == arrow,
                    LoopPosition::Last => &arrows[arrows.len() - 1] == arrow,
                    LoopPosition::Square => {
                        arrows.windows(2).any(|pair| pair[0] == *arrow && pair[1] == *arrow)
                    }
                }
            }
            _ => false,
        },
        Witness::InfiniteDimensional {
            cycle,
            in_split_presentation,
        } => {
            if *in_split_presentation {
                match crate::split::split_presentation(p) {
                    Ok((split, _)) => cycle_avoids_relations(&split, cycle),
                    Err(_) => false,
                }
            } else {
                cycle_avoids_relations(p, cycle)
            }
        }
    }
}

/// Checks a claimed infinite-dimensionality cycle: it must be a closed
/// composable walk whose repetitions avoid every zero relation as a factor.
fn cycle_avoids_relations(p: &Presentation, cycle: &[ArrowId]) -> bool {
    if cycle.is_empty() {
        return false;
    }
    let quiver = p.quiver();
    let arrows: Vec<_> = match cycle
        .iter()
        .map(|id| quiver.arrow(id).ok_or(()))
        .collect::<std::result::Result<Vec<_>, _>>()
    {
        Ok(a) => a,
        Err(()) => return false,
    };
    for i in 0..arrows.len() {
        let next = &arrows[(i + 1) % arrows.len()];
        if arrows[i].head != next.tail {
            return false;
        }
    }
    let words: Vec<&Path> = p.zero_paths().into_iter().map(|(_, path)| path).collect();
    let max_len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    if max_len == 0 {
        return true;
    }
    let reps = max_len / cycle.len() + 2;
    let repeated: Vec<&ArrowId> = std::iter::repeat(cycle.iter())
        .take(reps)
        .flatten()
        .collect();
    for word in words {
        let w = word.arrows();
        if w.len() > repeated.len() {
            continue;
        }
        for start in 0..cycle.len() {
            if start + w.len() <= repeated.len()
                && (0..w.len()).all(|k| repeated[start + k] == &w[k])
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    const LINE4_SPECIAL: &str = "\
vertex 1 2 3 4
arrow a: 1 -> 2
loop f: 2 special
arrow b: 2 -> 3
arrow c: 3 -> 4
relations
zero b*a
zero c*b*f*a
idem f
";

    const A3_GENTLE: &str = "\
vertex 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
relations
zero b*a
";

    #[test]
    fn a3_with_relation_is_gentle() {
        let p = parse_presentation(A3_GENTLE).unwrap();
        let v = is_gentle_pair(&p);
        assert!(v.holds, "{:?}", v.witnesses);
        assert!(is_special_biserial(&p).holds);
        assert!(is_skewed_gentle(&p).holds);
        assert!(is_clannish(&p).holds);
    }

    #[test]
    fn single_vertex_no_arrows_is_gentle() {
        let p = parse_presentation("vertex 1\nrelations\n").unwrap();
        assert!(is_gentle_pair(&p).holds);
    }

    #[test]
    fn line4_special_classification() {
        let p = parse_presentation(LINE4_SPECIAL).unwrap();
        let report = classify(&p);
        assert!(!report.gentle_pair.holds);
        assert!(report
            .gentle_pair
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::SpecialLoopPresent { .. })));
        assert!(!report.special_biserial.holds);
        assert!(!report.skewed_gentle.holds);
        // The length-4 relation c*b*f*a violates the gentle length clause of
        // the auxiliary pair.
        assert!(report
            .skewed_gentle
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::RelationNotLengthTwo { length: 4, .. })));
        assert!(report.clannish.holds, "{:?}", report.clannish.witnesses);
        assert_eq!(report.finite_dimensional, FiniteDimensionality::Finite);
    }

    #[test]
    fn dropping_long_relation_makes_line4_skewed_gentle() {
        let src = "\
vertex 1 2 3 4
arrow a: 1 -> 2
loop f: 2 special
arrow b: 2 -> 3
arrow c: 3 -> 4
relations
zero b*a
idem f
";
        let p = parse_presentation(src).unwrap();
        let v = is_skewed_gentle(&p);
        assert!(v.holds, "{:?}", v.witnesses);
        assert!(is_clannish(&p).holds);
        assert!(!is_gentle_pair(&p).holds);
    }

    #[test]
    fn three_arrows_out_of_a_vertex_violates_sb1() {
        let src = "\
vertex 0 1 2 3
arrow a: 0 -> 1
arrow b: 0 -> 2
arrow c: 0 -> 3
relations
";
        let p = parse_presentation(src).unwrap();
        let v = is_special_biserial(&p);
        assert!(!v.holds);
        assert!(v.witnesses.iter().any(|w| matches!(
            w,
            Witness::DegreeExceeded { label, direction: Direction::Out, .. } if label == "SB1"
        )));
    }

    #[test]
    fn zero_relation_ending_with_special_loop_violates_c1() {
        let src = "\
vertex 1 2
arrow a: 1 -> 2
loop f: 2 special
relations
zero f*a
idem f
";
        let p = parse_presentation(src).unwrap();
        let v = is_clannish(&p);
        assert!(!v.holds);
        assert!(v.witnesses.iter().any(|w| matches!(
            w,
            Witness::SpecialLoopInZeroRelation { position: LoopPosition::Last, .. }
        )));
    }

    #[test]
    fn ordinary_loop_without_relations_is_infinite_dimensional() {
        let p = parse_presentation("vertex 1\nloop l: 1\nrelations\n").unwrap();
        match is_finite_dimensional(&p).unwrap() {
            FiniteDimensionality::Infinite { cycle, .. } => {
                assert_eq!(cycle, vec![ArrowId::new("l").unwrap()]);
            }
            other => panic!("expected infinite, got {other:?}"),
        }
        assert!(!is_special_biserial(&p).holds);
        assert!(!is_clannish(&p).holds);
    }

    #[test]
    fn cyclic_nakayama_with_length_three_relation_is_finite() {
        // 3-cycle with a single length-3 relation: finite dimensional even
        // though every consecutive arrow pair survives.
        let src = "\
vertex 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 1
relations
zero c*b*a
";
        let p = parse_presentation(src).unwrap();
        assert_eq!(
            is_finite_dimensional(&p).unwrap(),
            FiniteDimensionality::Finite
        );
    }

    #[test]
    fn witnesses_replay() {
        let p = parse_presentation(LINE4_SPECIAL).unwrap();
        let report = classify(&p);
        for w in &report.gentle_pair.witnesses {
            assert!(
                replay_witness(&p, AlgebraClass::GentlePair, w),
                "witness failed to replay: {w:?}"
            );
        }
        for w in &report.special_biserial.witnesses {
            assert!(replay_witness(&p, AlgebraClass::SpecialBiserial, w));
        }
        for w in &report.skewed_gentle.witnesses {
            assert!(replay_witness(&p, AlgebraClass::SkewedGentle, w));
        }
    }
}
