//! The standard → admissible construction for clannish presentations:
//! every special vertex splits into two ordinary vertices, special loops are
//! eliminated, and relations are transported across the splitting. Also the
//! pushforward of representations.
//!
//! Naming scheme for split copies: the tail-side sign is a prefix and the
//! head-side sign a suffix, so an arrow `a` between two special vertices has
//! copies `+a+`, `+a-`, `-a+`, `-a-`; vertices split as `v+`, `v-`. The `+`
//! copy of a special vertex carries the image of the idempotent, the `-`
//! copy its kernel.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::classify::{is_structurally_clannish, witness_summary};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentation::{Presentation, Provenance, Relation};
use crate::quiver::{Arrow, ArrowId, DimensionVector, Path, Quiver, VertexId};
use crate::rep::Representation;

/// How the vertices and arrows of the standard presentation map to the
/// split one. Special loops have no image.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SplitMap {
    pub vertex_map: BTreeMap<VertexId, Vec<VertexId>>,
    pub arrow_map: BTreeMap<ArrowId, Vec<ArrowId>>,
    pub dropped: Vec<ArrowId>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn suffix(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

fn split_vertex_id(v: &VertexId, sign: Sign) -> Result<VertexId> {
    VertexId::new(format!("{v}{}", sign.suffix()))
}

fn copy_id(a: &ArrowId, tail_sign: Option<Sign>, head_sign: Option<Sign>) -> Result<ArrowId> {
    let prefix = tail_sign.map(Sign::suffix).unwrap_or("");
    let suffix = head_sign.map(Sign::suffix).unwrap_or("");
    ArrowId::new(format!("{prefix}{a}{suffix}"))
}

/// Splits a structurally clannish presentation into its admissible form.
pub fn split_presentation(p: &Presentation) -> Result<(Presentation, SplitMap)> {
    let structural = is_structurally_clannish(p);
    if !structural.holds {
        return Err(Error::NotInClass {
            class: "clannish".into(),
            details: witness_summary(&structural.witnesses),
        });
    }
    let quiver = p.quiver();

    let mut vertex_map: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut new_vertices = Vec::new();
    for v in quiver.vertices() {
        if quiver.is_special_vertex(v) {
            let vp = split_vertex_id(v, Sign::Plus)?;
            let vm = split_vertex_id(v, Sign::Minus)?;
            vertex_map.insert(v.clone(), vec![vp.clone(), vm.clone()]);
            new_vertices.push(vp);
            new_vertices.push(vm);
        } else {
            vertex_map.insert(v.clone(), vec![v.clone()]);
            new_vertices.push(v.clone());
        }
    }

    let mut arrow_map: BTreeMap<ArrowId, Vec<ArrowId>> = BTreeMap::new();
    let mut dropped = Vec::new();
    let mut new_arrows = Vec::new();
    for arrow in quiver.arrows() {
        if quiver.is_special(&arrow.id) {
            dropped.push(arrow.id.clone());
            continue;
        }
        let tail_signs: Vec<Option<Sign>> = if quiver.is_special_vertex(&arrow.tail) {
            Sign::both().into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let head_signs: Vec<Option<Sign>> = if quiver.is_special_vertex(&arrow.head) {
            Sign::both().into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let mut copies = Vec::new();
        for &ts in &tail_signs {
            for &hs in &head_signs {
                let id = copy_id(&arrow.id, ts, hs)?;
                let tail = match ts {
                    Some(s) => split_vertex_id(&arrow.tail, s)?,
                    None => arrow.tail.clone(),
                };
                let head = match hs {
                    Some(s) => split_vertex_id(&arrow.head, s)?,
                    None => arrow.head.clone(),
                };
                copies.push(id.clone());
                new_arrows.push(Arrow { id, tail, head });
            }
        }
        arrow_map.insert(arrow.id.clone(), copies);
    }

    let new_quiver = Quiver::new(new_vertices, new_arrows, BTreeSet::new()).map_err(|e| {
        Error::Invalid(format!(
            "split ids collide with existing ids; rename the originals: {e}"
        ))
    })?;

    let mut relations = Vec::new();
    for rel in p.relations() {
        match rel {
            Relation::IdempotentLoop(_) => {}
            Relation::ZeroPath(path) => {
                relations.extend(transport_zero_path(p, &new_quiver, path)?);
            }
            Relation::LinearCombination(_) => {
                return Err(Error::Unsupported(
                    "standard clannish presentations have monomial relation sets".into(),
                ));
            }
        }
    }

    let split = Presentation::new(new_quiver, relations, Provenance::SplitAdmissible)?
        .with_name(format!("{}-split", p.name()));
    Ok((
        split,
        SplitMap {
            vertex_map,
            arrow_map,
            dropped,
        },
    ))
}

enum Junction {
    /// Ordinary middle vertex: copies connect directly.
    Plain,
    /// Special middle vertex with the loop letter present in the word: the
    /// route is forced through the `+` copy.
    Forced,
    /// Special middle vertex without the loop letter: sum over both routes.
    Summed,
}

/// Transports one monomial relation across the splitting. The result is one
/// relation per assignment of signs to special end vertices; each relation
/// is the sum over `+`/`-` routings of the loop-free special junctions.
fn transport_zero_path(
    p: &Presentation,
    new_quiver: &Quiver,
    path: &Path,
) -> Result<Vec<Relation>> {
    let quiver = p.quiver();
    let mut ordinary: Vec<&Arrow> = Vec::new();
    let mut loop_after_ordinary: Vec<bool> = Vec::new();
    for id in path.arrows() {
        let arrow = quiver.arrow(id).expect("validated path");
        if quiver.is_special(id) {
            match loop_after_ordinary.last_mut() {
                Some(slot) if !*slot => *slot = true,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "relation `{}` is outside the supported clannish forms",
                        path.word()
                    )))
                }
            }
        } else {
            ordinary.push(arrow);
            loop_after_ordinary.push(false);
        }
    }
    if ordinary.is_empty() {
        return Err(Error::Unsupported(format!(
            "relation `{}` consists of special loops only",
            path.word()
        )));
    }
    let k = ordinary.len();
    let mut junctions = Vec::with_capacity(k.saturating_sub(1));
    for i in 0..k - 1 {
        let v = &ordinary[i].head;
        if !quiver.is_special_vertex(v) {
            junctions.push(Junction::Plain);
        } else if loop_after_ordinary[i] {
            junctions.push(Junction::Forced);
        } else {
            junctions.push(Junction::Summed);
        }
    }

    let tail_special = quiver.is_special_vertex(&ordinary[0].tail);
    let head_special = quiver.is_special_vertex(&ordinary[k - 1].head);
    let end_choices = |special: bool| -> Vec<Option<Sign>> {
        if special {
            Sign::both().into_iter().map(Some).collect()
        } else {
            vec![None]
        }
    };

    let summed_positions: Vec<usize> = junctions
        .iter()
        .enumerate()
        .filter_map(|(i, j)| matches!(j, Junction::Summed).then_some(i))
        .collect();

    let mut out = Vec::new();
    for tail_sign in end_choices(tail_special) {
        for head_sign in end_choices(head_special) {
            let mut terms: Vec<(BigRational, Path)> = Vec::new();
            let assignments = 1usize << summed_positions.len();
            for bits in 0..assignments {
                let route = |junction: usize| -> Option<Sign> {
                    match junctions[junction] {
                        Junction::Plain => None,
                        Junction::Forced => Some(Sign::Plus),
                        Junction::Summed => {
                            let k = summed_positions
                                .iter()
                                .position(|&s| s == junction)
                                .unwrap();
                            Some(if bits >> k & 1 == 0 {
                                Sign::Plus
                            } else {
                                Sign::Minus
                            })
                        }
                    }
                };
                let mut ids = Vec::with_capacity(k);
                for (i, arrow) in ordinary.iter().enumerate() {
                    let ts = if i == 0 { tail_sign } else { route(i - 1) };
                    let hs = if i == k - 1 { head_sign } else { route(i) };
                    ids.push(copy_id(&arrow.id, ts, hs)?);
                }
                terms.push((BigRational::one(), Path::new(new_quiver, ids)?));
            }
            if terms.len() == 1 {
                out.push(Relation::ZeroPath(terms.pop().unwrap().1));
            } else {
                out.push(Relation::LinearCombination(terms));
            }
        }
    }
    Ok(out)
}

/// Pushes a valid representation of a standard clannish presentation forward
/// to the split presentation: at each special vertex the idempotent is
/// conjugated into diag(I_r, 0) (column-space basis first, then a kernel
/// basis, deterministic pivots) and the arrow matrices are cut into the
/// corresponding blocks.
pub fn split_rep(m: &Representation) -> Result<Representation> {
    m.check()?;
    let p = m.presentation();
    let (split, map) = split_presentation(p)?;
    let split = Arc::new(split);
    let quiver = p.quiver();
    let field = m.field();

    // Change of basis at every vertex; identity at ordinary ones.
    let mut basis: BTreeMap<VertexId, Matrix> = BTreeMap::new();
    let mut basis_inv: BTreeMap<VertexId, Matrix> = BTreeMap::new();
    let mut plus_rank: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in quiver.vertices() {
        let n = m.dims().get(v);
        if let Some(loop_arrow) = quiver.special_loop_at(v) {
            let e = m.matrix(&loop_arrow.id);
            let (col_basis, _) = e.column_space_basis();
            let kernel = e.kernel_basis();
            let p_mat = col_basis.hstack(&kernel);
            debug_assert_eq!(p_mat.rows(), n);
            debug_assert_eq!(p_mat.cols(), n);
            let p_inv = p_mat.inverse().map_err(|_| {
                Error::Invalid(format!(
                    "idempotent block extraction failed at vertex {v}; the representation is invalid"
                ))
            })?;
            plus_rank.insert(v.clone(), col_basis.cols());
            basis.insert(v.clone(), p_mat);
            basis_inv.insert(v.clone(), p_inv);
        } else {
            basis.insert(v.clone(), Matrix::identity(field, n));
            basis_inv.insert(v.clone(), Matrix::identity(field, n));
        }
    }

    let mut new_dims: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in quiver.vertices() {
        match map.vertex_map[v].as_slice() {
            [single] => {
                new_dims.insert(single.clone(), m.dims().get(v));
            }
            [plus, minus] => {
                let r = plus_rank[v];
                new_dims.insert(plus.clone(), r);
                new_dims.insert(minus.clone(), m.dims().get(v) - r);
            }
            _ => unreachable!(),
        }
    }
    let new_dims = DimensionVector::new(split.quiver(), new_dims)?;

    let mut mats: BTreeMap<ArrowId, Matrix> = BTreeMap::new();
    for arrow in quiver.ordinary_arrows() {
        let transported = basis_inv[&arrow.head]
            .mul(m.matrix(&arrow.id))
            .mul(&basis[&arrow.tail]);
        let head_split = quiver.is_special_vertex(&arrow.head);
        let tail_split = quiver.is_special_vertex(&arrow.tail);
        let row_cut = if head_split {
            plus_rank[&arrow.head]
        } else {
            transported.rows()
        };
        let col_cut = if tail_split {
            plus_rank[&arrow.tail]
        } else {
            transported.cols()
        };
        for copy in &map.arrow_map[&arrow.id] {
            let target = split.quiver().arrow(copy).expect("copy exists");
            let rows = if head_split {
                if target.head.as_str().ends_with('+') {
                    (0, row_cut)
                } else {
                    (row_cut, transported.rows())
                }
            } else {
                (0, transported.rows())
            };
            let cols = if tail_split {
                if target.tail.as_str().ends_with('+') {
                    (0, col_cut)
                } else {
                    (col_cut, transported.cols())
                }
            } else {
                (0, transported.cols())
            };
            mats.insert(
                copy.clone(),
                transported.block(rows.0, rows.1, cols.0, cols.1),
            );
        }
    }

    Representation::new(split, field, new_dims, mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_presentation, serialize_presentation};
    use crate::linalg::FieldSpec;

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

    fn vid(s: &str) -> VertexId {
        VertexId::new(s).unwrap()
    }

    fn aid(s: &str) -> ArrowId {
        ArrowId::new(s).unwrap()
    }

    #[test]
    fn splits_line4_special() {
        let p = parse_presentation(LINE4_SPECIAL).unwrap();
        let (split, map) = split_presentation(&p).unwrap();
        let vs: Vec<&str> = split
            .quiver()
            .vertices()
            .iter()
            .map(|v| v.as_str())
            .collect();
        assert_eq!(vs, vec!["1", "2+", "2-", "3", "4"]);
        assert_eq!(split.quiver().arrows().len(), 5);
        assert!(split.quiver().special_set().is_empty());
        assert_eq!(map.dropped, vec![aid("f")]);
        assert_eq!(map.vertex_map[&vid("2")], vec![vid("2+"), vid("2-")]);
        assert_eq!(map.arrow_map[&aid("a")], vec![aid("a+"), aid("a-")]);
        assert_eq!(map.arrow_map[&aid("b")], vec![aid("+b"), aid("-b")]);
        assert_eq!(map.arrow_map[&aid("c")], vec![aid("c")]);

        assert_eq!(split.relations().len(), 2);
        match &split.relations()[0] {
            Relation::LinearCombination(terms) => {
                assert_eq!(terms.len(), 2);
                let words: Vec<String> = terms.iter().map(|(_, p)| p.word()).collect();
                assert_eq!(words, vec!["+b*a+", "-b*a-"]);
            }
            other => panic!("expected combination, got {other:?}"),
        }
        match &split.relations()[1] {
            Relation::ZeroPath(path) => assert_eq!(path.word(), "c*+b*a+"),
            other => panic!("expected zero path, got {other:?}"),
        }

        // The split presentation serializes and re-parses.
        let text = serialize_presentation(&split);
        let reparsed = parse_presentation(&text).unwrap();
        assert_eq!(reparsed.quiver(), split.quiver());
        assert_eq!(reparsed.relations(), split.relations());
    }

    #[test]
    fn splitting_without_special_loops_is_identity() {
        let p = parse_presentation(
            "vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelations\nzero b*a\n",
        )
        .unwrap();
        let (split, map) = split_presentation(&p).unwrap();
        assert_eq!(split.quiver(), p.quiver());
        assert_eq!(split.relations(), p.relations());
        assert!(map.dropped.is_empty());
    }

    #[test]
    fn lonely_special_vertex_splits_into_two_isolated_points() {
        let p = parse_presentation("vertex v\nloop f: v special\nrelations\n").unwrap();
        let (split, map) = split_presentation(&p).unwrap();
        assert_eq!(split.quiver().vertices().len(), 2);
        assert!(split.quiver().arrows().is_empty());
        assert!(split.relations().is_empty());
        assert_eq!(map.dropped, vec![aid("f")]);
    }

    #[test]
    fn split_rep_preserves_dimensions_and_relations() {
        let p = Arc::new(parse_presentation(LINE4_SPECIAL).unwrap());
        let d = DimensionVector::from_values(p.quiver(), &[1, 2, 1, 1]).unwrap();
        let f = FieldSpec::Rationals;
        let mk = |rows: Vec<Vec<i64>>| {
            Matrix::from_rows(
                f,
                rows.into_iter()
                    .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                    .collect(),
            )
            .unwrap()
        };
        let mats: BTreeMap<ArrowId, Matrix> = [
            (aid("a"), mk(vec![vec![1], vec![0]])),
            (aid("f"), mk(vec![vec![1, 0], vec![0, 0]])),
            (aid("b"), mk(vec![vec![0, 1]])),
            (aid("c"), mk(vec![vec![1]])),
        ]
        .into_iter()
        .collect();
        let rep = Representation::new(p, f, d, mats).unwrap();
        let split = split_rep(&rep).unwrap();
        let dims: Vec<usize> = split
            .presentation()
            .quiver()
            .vertices()
            .iter()
            .map(|v| split.dims().get(v))
            .collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 1]);
        assert!(split.check().is_ok());
    }

    #[test]
    fn split_rep_with_identity_idempotent_empties_minus_copies() {
        let p = Arc::new(parse_presentation("vertex v\nloop f: v special\nrelations\n").unwrap());
        let f = FieldSpec::Rationals;
        let d = DimensionVector::from_values(p.quiver(), &[2]).unwrap();
        let mats: BTreeMap<ArrowId, Matrix> =
            [(aid("f"), Matrix::identity(f, 2))].into_iter().collect();
        let rep = Representation::new(p.clone(), f, d.clone(), mats).unwrap();
        let split = split_rep(&rep).unwrap();
        assert_eq!(split.dims().get(&vid("v+")), 2);
        assert_eq!(split.dims().get(&vid("v-")), 0);

        let zero_mats: BTreeMap<ArrowId, Matrix> =
            [(aid("f"), Matrix::zero(f, 2, 2))].into_iter().collect();
        let rep0 = Representation::new(p, f, d, zero_mats).unwrap();
        let split0 = split_rep(&rep0).unwrap();
        assert_eq!(split0.dims().get(&vid("v+")), 0);
        assert_eq!(split0.dims().get(&vid("v-")), 2);
    }
}
