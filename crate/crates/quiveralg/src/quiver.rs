//! Quivers, paths, dimension vectors and weights.
//!
//! A quiver is a finite directed graph with an (ordered) vertex set, an
//! ordered arrow list and a distinguished subset of loops marked *special*.
//! Paths store their arrows first-applied-first, so the path underlying the
//! word `ba` is stored as `[a, b]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

fn valid_id_chars(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '+' || c == '-')
        && s.chars().any(|c| c.is_ascii_alphanumeric())
}

fn looks_numeric(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    !body.is_empty()
        && body
            .split('/')
            .all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_digit()))
}

/// Identifier of a vertex. May be numeric (`1`, `2+`) and may carry `+`/`-`
/// affixes so that split presentations serialize naturally.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if !valid_id_chars(&id) {
            return Err(Error::Invalid(format!("invalid vertex id `{id}`")));
        }
        Ok(VertexId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of an arrow. Unlike vertex ids, arrow ids must not look like
/// numbers: they appear in relation words next to rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct ArrowId(String);

impl ArrowId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if !valid_id_chars(&id) {
            return Err(Error::Invalid(format!("invalid arrow id `{id}`")));
        }
        if looks_numeric(&id) {
            return Err(Error::Invalid(format!(
                "arrow id `{id}` would be ambiguous with a numeric coefficient"
            )));
        }
        Ok(ArrowId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArrowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A finite quiver with marked special loops.
#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<VertexId>,
    arrows: Vec<Arrow>,
    special: BTreeSet<ArrowId>,
    vertex_index: BTreeMap<VertexId, usize>,
    arrow_index: BTreeMap<ArrowId, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.special == other.special
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(
        vertices: Vec<VertexId>,
        arrows: Vec<Arrow>,
        special: BTreeSet<ArrowId>,
    ) -> Result<Self> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut arrow_index = BTreeMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow id `{}`", a.id)));
            }
            if !vertex_index.contains_key(&a.tail) {
                return Err(Error::Invalid(format!(
                    "arrow `{}` has undeclared tail vertex `{}`",
                    a.id, a.tail
                )));
            }
            if !vertex_index.contains_key(&a.head) {
                return Err(Error::Invalid(format!(
                    "arrow `{}` has undeclared head vertex `{}`",
                    a.id, a.head
                )));
            }
        }
        for s in &special {
            match arrow_index.get(s) {
                None => {
                    return Err(Error::Invalid(format!(
                        "special loop `{s}` is not a declared arrow"
                    )))
                }
                Some(&i) => {
                    if !arrows[i].is_loop() {
                        return Err(Error::Invalid(format!(
                            "special arrow `{s}` is not a loop"
                        )));
                    }
                }
            }
        }
        Ok(Quiver {
            vertices,
            arrows,
            special,
            vertex_index,
            arrow_index,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &ArrowId) -> Option<&Arrow> {
        self.arrow_index.get(id).map(|&i| &self.arrows[i])
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertex_index.contains_key(v)
    }

    pub fn vertex_position(&self, v: &VertexId) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn is_special(&self, id: &ArrowId) -> bool {
        self.special.contains(id)
    }

    pub fn special_loops(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(|a| self.special.contains(&a.id))
    }

    pub fn special_set(&self) -> &BTreeSet<ArrowId> {
        &self.special
    }

    pub fn ordinary_arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(|a| !self.special.contains(&a.id))
    }

    /// A vertex is special when it carries a special loop.
    pub fn is_special_vertex(&self, v: &VertexId) -> bool {
        self.special_loop_at(v).is_some()
    }

    pub fn special_loop_at(&self, v: &VertexId) -> Option<&Arrow> {
        self.special_loops().find(|a| &a.tail == v)
    }

    pub fn arrows_out_of(&self, v: &VertexId) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| &a.tail == v).collect()
    }

    pub fn arrows_into(&self, v: &VertexId) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| &a.head == v).collect()
    }

    /// Number of connected components of the underlying undirected graph.
    /// Isolated vertices count as components of their own.
    pub fn connected_components(&self) -> usize {
        let n = self.vertices.len();
        if n == 0 {
            return 0;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for a in &self.arrows {
            let t = self.vertex_index[&a.tail];
            let h = self.vertex_index[&a.head];
            let rt = find(&mut parent, t);
            let rh = find(&mut parent, h);
            if rt != rh {
                parent[rt] = rh;
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// A nonempty composable sequence of arrows, stored first-applied-first:
/// the word `cba` (apply `a`, then `b`, then `c`) is stored as `[a, b, c]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Path {
    arrows: Vec<ArrowId>,
    source: VertexId,
    target: VertexId,
}

impl Path {
    /// Builds a path from arrows in application order, checking composability
    /// against the quiver.
    pub fn new(quiver: &Quiver, arrows: Vec<ArrowId>) -> Result<Self> {
        if arrows.is_empty() {
            return Err(Error::Invalid("a path must contain at least one arrow".into()));
        }
        let mut resolved = Vec::with_capacity(arrows.len());
        for id in &arrows {
            let a = quiver
                .arrow(id)
                .ok_or_else(|| Error::Invalid(format!("unknown arrow `{id}` in path")))?;
            resolved.push(a);
        }
        for pair in resolved.windows(2) {
            if pair[0].head != pair[1].tail {
                return Err(Error::Invalid(format!(
                    "arrows `{}` and `{}` do not compose: head `{}` differs from tail `{}`",
                    pair[0].id, pair[1].id, pair[0].head, pair[1].tail
                )));
            }
        }
        let source = resolved[0].tail.clone();
        let target = resolved[resolved.len() - 1].head.clone();
        Ok(Path {
            arrows,
            source,
            target,
        })
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> &VertexId {
        &self.source
    }

    pub fn target(&self) -> &VertexId {
        &self.target
    }

    /// The path as a word, rendered right-to-left: `[a, b, c]` prints `c*b*a`.
    pub fn word(&self) -> String {
        let mut parts: Vec<&str> = self.arrows.iter().map(|a| a.as_str()).collect();
        parts.reverse();
        parts.join("*")
    }

    pub fn contains_factor(&self, factor: &[ArrowId]) -> bool {
        if factor.is_empty() || factor.len() > self.arrows.len() {
            return false;
        }
        self.arrows.windows(factor.len()).any(|w| w == factor)
    }
}

/// `compose(p, q)` is the path "q then p", so that it renders as the word `pq`.
pub fn compose(p: &Path, q: &Path) -> Result<Path> {
    if q.target != p.source {
        return Err(Error::Invalid(format!(
            "paths do not compose: target `{}` differs from source `{}`",
            q.target, p.source
        )));
    }
    let mut arrows = q.arrows.clone();
    arrows.extend(p.arrows.iter().cloned());
    Ok(Path {
        arrows,
        source: q.source.clone(),
        target: p.target.clone(),
    })
}

/// A dimension vector: one nonnegative integer per vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct DimensionVector(BTreeMap<VertexId, usize>);

impl DimensionVector {
    pub fn new(quiver: &Quiver, values: BTreeMap<VertexId, usize>) -> Result<Self> {
        check_keys(quiver, values.keys(), "dimension vector")?;
        Ok(DimensionVector(values))
    }

    /// Values in vertex declaration order.
    pub fn from_values(quiver: &Quiver, values: &[usize]) -> Result<Self> {
        if values.len() != quiver.vertices().len() {
            return Err(Error::Invalid(format!(
                "dimension vector has {} entries but the quiver has {} vertices",
                values.len(),
                quiver.vertices().len()
            )));
        }
        let map = quiver
            .vertices()
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect();
        Ok(DimensionVector(map))
    }

    pub fn zero(quiver: &Quiver) -> Self {
        DimensionVector(quiver.vertices().iter().map(|v| (v.clone(), 0)).collect())
    }

    pub fn get(&self, v: &VertexId) -> usize {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, usize)> {
        self.0.iter().map(|(v, &d)| (v, d))
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, usize> {
        &self.0
    }

    /// Rendered in the declaration order of `quiver`, e.g. `1=1 2=2 3=1`.
    pub fn display_ordered(&self, quiver: &Quiver) -> String {
        quiver
            .vertices()
            .iter()
            .map(|v| format!("{v}={}", self.get(v)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// An integral weight: one integer per vertex.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct Weight(BTreeMap<VertexId, i64>);

impl Weight {
    pub fn new(quiver: &Quiver, values: BTreeMap<VertexId, i64>) -> Result<Self> {
        check_keys(quiver, values.keys(), "weight")?;
        Ok(Weight(values))
    }

    pub fn from_values(quiver: &Quiver, values: &[i64]) -> Result<Self> {
        if values.len() != quiver.vertices().len() {
            return Err(Error::Invalid(format!(
                "weight has {} entries but the quiver has {} vertices",
                values.len(),
                quiver.vertices().len()
            )));
        }
        let map = quiver
            .vertices()
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect();
        Ok(Weight(map))
    }

    pub fn get(&self, v: &VertexId) -> i64 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|(v, &w)| (v.clone(), w * c)).collect())
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, i64> {
        &self.0
    }
}

fn check_keys<'a>(
    quiver: &Quiver,
    keys: impl Iterator<Item = &'a VertexId>,
    what: &str,
) -> Result<()> {
    let keys: BTreeSet<&VertexId> = keys.collect();
    let expected: BTreeSet<&VertexId> = quiver.vertices().iter().collect();
    if keys != expected {
        return Err(Error::Invalid(format!(
            "{what} keys do not match the vertex set"
        )));
    }
    Ok(())
}

/// The pairing θ(d) = Σ_x θ(x) d(x).
pub fn weight_pairing(theta: &Weight, d: &DimensionVector) -> Result<i64> {
    let tk: BTreeSet<&VertexId> = theta.0.keys().collect();
    let dk: BTreeSet<&VertexId> = d.0.keys().collect();
    if tk != dk {
        return Err(Error::Invalid(
            "weight and dimension vector are keyed by different vertex sets".into(),
        ));
    }
    Ok(theta
        .0
        .iter()
        .map(|(v, &w)| w * d.get(v) as i64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(s: &str) -> VertexId {
        VertexId::new(s).unwrap()
    }

    fn aid(s: &str) -> ArrowId {
        ArrowId::new(s).unwrap()
    }

    fn a3_quiver() -> Quiver {
        Quiver::new(
            vec![vid("1"), vid("2"), vid("3")],
            vec![
                Arrow {
                    id: aid("a"),
                    tail: vid("1"),
                    head: vid("2"),
                },
                Arrow {
                    id: aid("b"),
                    tail: vid("2"),
                    head: vid("3"),
                },
            ],
            BTreeSet::new(),
        )
        .unwrap()
    }

    #[test]
    fn arrow_ids_reject_numeric_forms() {
        assert!(ArrowId::new("a").is_ok());
        assert!(ArrowId::new("b+").is_ok());
        assert!(ArrowId::new("+a-").is_ok());
        assert!(ArrowId::new("12").is_err());
        assert!(ArrowId::new("-3").is_err());
        assert!(ArrowId::new("1/2").is_err());
        assert!(ArrowId::new("+").is_err());
    }

    #[test]
    fn vertex_ids_may_be_numeric() {
        assert!(VertexId::new("2").is_ok());
        assert!(VertexId::new("2+").is_ok());
        assert!(VertexId::new("*").is_err());
    }

    #[test]
    fn paths_enforce_composability() {
        let q = a3_quiver();
        let p = Path::new(&q, vec![aid("a"), aid("b")]).unwrap();
        assert_eq!(p.source(), &vid("1"));
        assert_eq!(p.target(), &vid("3"));
        assert_eq!(p.word(), "b*a");
        assert!(Path::new(&q, vec![aid("b"), aid("a")]).is_err());
    }

    #[test]
    fn compose_is_q_then_p() {
        let q = a3_quiver();
        let pa = Path::new(&q, vec![aid("a")]).unwrap();
        let pb = Path::new(&q, vec![aid("b")]).unwrap();
        let ba = compose(&pb, &pa).unwrap();
        assert_eq!(ba.arrows(), &[aid("a"), aid("b")]);
        assert_eq!(ba.word(), "b*a");
        assert!(compose(&pa, &pb).is_err());
    }

    #[test]
    fn weight_pairing_examples() {
        let q = a3_quiver();
        let d = DimensionVector::from_values(&q, &[1, 1, 0]).unwrap();
        let theta = Weight::from_values(&q, &[1, -1, 0]).unwrap();
        assert_eq!(weight_pairing(&theta, &d).unwrap(), 0);
        let d2 = DimensionVector::from_values(&q, &[1, 0, 0]).unwrap();
        assert_eq!(weight_pairing(&theta, &d2).unwrap(), 1);
        let zero = Weight::from_values(&q, &[0, 0, 0]).unwrap();
        assert_eq!(weight_pairing(&zero, &d).unwrap(), 0);
    }

    #[test]
    fn connected_components_counts_isolated_vertices() {
        let q = Quiver::new(
            vec![vid("1"), vid("2"), vid("3")],
            vec![Arrow {
                id: aid("a"),
                tail: vid("1"),
                head: vid("2"),
            }],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(q.connected_components(), 2);
    }
}
