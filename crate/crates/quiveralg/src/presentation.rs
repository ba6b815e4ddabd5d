//! Relations and presentations of bound quiver algebras.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Path, Quiver};

/// Where a presentation came from. Splitting is allowed to produce zero
/// relations shorter than the admissible bound of the user-facing grammar.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    User,
    SplitAdmissible,
    Envelope,
}

/// A defining relation of the ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Relation {
    /// A monomial relation: the path is zero in the algebra.
    ZeroPath(Path),
    /// A linear combination of parallel paths with nonzero rational
    /// coefficients.
    LinearCombination(Vec<(BigRational, Path)>),
    /// `e^2 - e` for a special loop `e`.
    IdempotentLoop(ArrowId),
}

impl Relation {
    /// Arrows mentioned anywhere in the relation.
    pub fn arrows(&self) -> BTreeSet<ArrowId> {
        match self {
            Relation::ZeroPath(p) => p.arrows().iter().cloned().collect(),
            Relation::LinearCombination(terms) => terms
                .iter()
                .flat_map(|(_, p)| p.arrows().iter().cloned())
                .collect(),
            Relation::IdempotentLoop(e) => std::iter::once(e.clone()).collect(),
        }
    }

    /// DSL-style rendering, used in reports and error messages.
    pub fn display(&self) -> String {
        match self {
            Relation::ZeroPath(p) => format!("zero {}", p.word()),
            Relation::LinearCombination(terms) => {
                let rendered: Vec<String> = terms
                    .iter()
                    .map(|(c, p)| {
                        if c.is_one() {
                            p.word()
                        } else {
                            format!("{c} {}", p.word())
                        }
                    })
                    .collect();
                format!("rel {}", rendered.join(" + "))
            }
            Relation::IdempotentLoop(e) => format!("idem {e}"),
        }
    }
}

/// A quiver together with a relation set: the data of an algebra kQ/⟨R⟩.
#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    quiver: Quiver,
    relations: Vec<Relation>,
    provenance: Provenance,
}

/// Equality ignores the name: two presentations are equal when they present
/// the same quiver with the same relation list.
impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.relations == other.relations
            && self.provenance == other.provenance
    }
}

impl Eq for Presentation {}

impl Presentation {
    /// Validates all type invariants. A missing idempotent relation for a
    /// special loop is inserted automatically (mirroring the DSL rule); a
    /// duplicate one is an error.
    pub fn new(quiver: Quiver, relations: Vec<Relation>, provenance: Provenance) -> Result<Self> {
        let min_zero_len = match provenance {
            Provenance::User => 2,
            Provenance::SplitAdmissible | Provenance::Envelope => 1,
        };
        let mut idem_counts: BTreeMap<ArrowId, usize> = BTreeMap::new();
        for rel in &relations {
            match rel {
                Relation::ZeroPath(p) => {
                    validate_path(&quiver, p)?;
                    if p.len() < min_zero_len {
                        return Err(Error::Invalid(format!(
                            "zero relation `{}` has length {}, expected at least {min_zero_len}",
                            p.word(),
                            p.len()
                        )));
                    }
                }
                Relation::LinearCombination(terms) => {
                    if terms.len() < 2 {
                        return Err(Error::Invalid(
                            "a linear combination relation needs at least two terms".into(),
                        ));
                    }
                    let mut seen: BTreeSet<&[ArrowId]> = BTreeSet::new();
                    for (coeff, p) in terms {
                        validate_path(&quiver, p)?;
                        if coeff.is_zero() {
                            return Err(Error::Invalid(format!(
                                "zero coefficient on `{}` in a linear combination",
                                p.word()
                            )));
                        }
                        if !seen.insert(p.arrows()) {
                            return Err(Error::Invalid(format!(
                                "repeated path `{}` in a linear combination",
                                p.word()
                            )));
                        }
                        if p.source() != terms[0].1.source() || p.target() != terms[0].1.target() {
                            return Err(Error::Invalid(format!(
                                "paths `{}` and `{}` in a linear combination are not parallel",
                                terms[0].1.word(),
                                p.word()
                            )));
                        }
                    }
                }
                Relation::IdempotentLoop(e) => {
                    if !quiver.is_special(e) {
                        return Err(Error::Invalid(format!(
                            "idempotent relation on `{e}`, which is not a special loop"
                        )));
                    }
                    *idem_counts.entry(e.clone()).or_insert(0) += 1;
                }
            }
        }
        for (e, count) in &idem_counts {
            if *count > 1 {
                return Err(Error::Invalid(format!(
                    "special loop `{e}` has {count} idempotent relations, expected exactly one"
                )));
            }
        }
        let mut relations = relations;
        for loop_arrow in quiver.special_loops() {
            if !idem_counts.contains_key(&loop_arrow.id) {
                relations.push(Relation::IdempotentLoop(loop_arrow.id.clone()));
            }
        }
        Ok(Presentation {
            name: "presentation".into(),
            quiver,
            relations,
            provenance,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The monomial part of the relation set, with original indices.
    pub fn zero_paths(&self) -> Vec<(usize, &Path)> {
        self.relations
            .iter()
            .enumerate()
            .filter_map(|(i, r)| match r {
                Relation::ZeroPath(p) => Some((i, p)),
                _ => None,
            })
            .collect()
    }

    pub fn has_special_loops(&self) -> bool {
        self.quiver.special_set().iter().next().is_some()
    }

    /// Connectedness is assumed by the theory but only warned about here:
    /// block projections naturally produce disconnected presentations.
    pub fn connectivity_warning(&self) -> Option<String> {
        let c = self.quiver.connected_components();
        if c > 1 {
            Some(format!(
                "the underlying graph has {c} connected components; the theory assumes a connected quiver"
            ))
        } else {
            None
        }
    }
}

fn validate_path(quiver: &Quiver, p: &Path) -> Result<()> {
    // Re-walk the path against this quiver: relations may have been built
    // against another presentation.
    Path::new(quiver, p.arrows().to_vec())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Arrow, VertexId};

    fn vid(s: &str) -> VertexId {
        VertexId::new(s).unwrap()
    }

    fn aid(s: &str) -> ArrowId {
        ArrowId::new(s).unwrap()
    }

    fn loop_quiver() -> Quiver {
        Quiver::new(
            vec![vid("1")],
            vec![Arrow {
                id: aid("f"),
                tail: vid("1"),
                head: vid("1"),
            }],
            [aid("f")].into_iter().collect(),
        )
        .unwrap()
    }

    #[test]
    fn missing_idempotent_relation_is_inserted() {
        let p = Presentation::new(loop_quiver(), vec![], Provenance::User).unwrap();
        assert_eq!(p.relations().len(), 1);
        assert!(matches!(&p.relations()[0], Relation::IdempotentLoop(e) if e == &aid("f")));
    }

    #[test]
    fn duplicate_idempotent_relation_is_rejected() {
        let q = loop_quiver();
        let rels = vec![
            Relation::IdempotentLoop(aid("f")),
            Relation::IdempotentLoop(aid("f")),
        ];
        assert!(Presentation::new(q, rels, Provenance::User).is_err());
    }

    #[test]
    fn idempotent_on_ordinary_loop_is_rejected() {
        let q = Quiver::new(
            vec![vid("1")],
            vec![Arrow {
                id: aid("l"),
                tail: vid("1"),
                head: vid("1"),
            }],
            BTreeSet::new(),
        )
        .unwrap();
        let rels = vec![Relation::IdempotentLoop(aid("l"))];
        assert!(Presentation::new(q, rels, Provenance::User).is_err());
    }

    #[test]
    fn user_zero_relations_must_have_length_two() {
        let q = Quiver::new(
            vec![vid("1"), vid("2")],
            vec![Arrow {
                id: aid("a"),
                tail: vid("1"),
                head: vid("2"),
            }],
            BTreeSet::new(),
        )
        .unwrap();
        let p = Path::new(&q, vec![aid("a")]).unwrap();
        assert!(Presentation::new(q, vec![Relation::ZeroPath(p)], Provenance::User).is_err());
    }

    #[test]
    fn combination_paths_must_be_parallel() {
        let q = Quiver::new(
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
        .unwrap();
        let pa = Path::new(&q, vec![aid("a")]).unwrap();
        let pb = Path::new(&q, vec![aid("b")]).unwrap();
        let rel = Relation::LinearCombination(vec![
            (BigRational::one(), pa),
            (BigRational::one(), pb),
        ]);
        assert!(Presentation::new(q, vec![rel], Provenance::User).is_err());
    }
}
