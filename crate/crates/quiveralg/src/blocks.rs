//! ρ-blocks: arrows are grouped by the transitive closure of "co-occur in a
//! relation", relations are routed to their block, and representation data
//! factors blockwise. Blocks partition the arrow set; vertices shared by
//! several blocks are duplicated into each block's sub-presentation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::presentation::{Presentation, Relation};
use crate::quiver::{ArrowId, DimensionVector, Quiver, VertexId};
use crate::rep::Representation;

#[derive(Clone, Debug)]
pub struct Block {
    pub presentation: Arc<Presentation>,
    pub arrows: Vec<ArrowId>,
    pub vertices: Vec<VertexId>,
    /// Indices into the parent presentation's relation list.
    pub relations: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub arrow_to_block: BTreeMap<ArrowId, usize>,
    /// Vertices with no incident arrows; they belong to no block.
    pub isolated_vertices: Vec<VertexId>,
}

#[derive(Serialize)]
pub struct BlockSummary {
    pub arrows: Vec<ArrowId>,
    pub vertices: Vec<VertexId>,
    pub relation_count: usize,
}

impl BlockDecomposition {
    pub fn summaries(&self) -> Vec<BlockSummary> {
        self.blocks
            .iter()
            .map(|b| BlockSummary {
                arrows: b.arrows.clone(),
                vertices: b.vertices.clone(),
                relation_count: b.relations.len(),
            })
            .collect()
    }
}

/// Computes the ρ-block decomposition. Relation-free arrows form singleton
/// blocks; blocks are ordered by their first arrow in declaration order.
pub fn rho_blocks(p: &Presentation) -> Result<BlockDecomposition> {
    let quiver = p.quiver();
    let arrows = quiver.arrows();
    let index: BTreeMap<&ArrowId, usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (&a.id, i))
        .collect();

    let mut parent: Vec<usize> = (0..arrows.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for rel in p.relations() {
        let ids: Vec<usize> = rel.arrows().iter().map(|a| index[a]).collect();
        for w in ids.windows(2) {
            let ra = find(&mut parent, w[0]);
            let rb = find(&mut parent, w[1]);
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }

    // Blocks in order of first arrow occurrence.
    let mut root_to_block: BTreeMap<usize, usize> = BTreeMap::new();
    let mut block_arrows: Vec<Vec<usize>> = Vec::new();
    for i in 0..arrows.len() {
        let r = find(&mut parent, i);
        let b = *root_to_block.entry(r).or_insert_with(|| {
            block_arrows.push(Vec::new());
            block_arrows.len() - 1
        });
        block_arrows[b].push(i);
    }

    let mut relations_per_block: Vec<Vec<usize>> = vec![Vec::new(); block_arrows.len()];
    for (ri, rel) in p.relations().iter().enumerate() {
        let mut blocks_touched: BTreeSet<usize> = BTreeSet::new();
        for a in rel.arrows() {
            blocks_touched.insert(root_to_block[&find(&mut parent, index[&a])]);
        }
        match blocks_touched.len() {
            1 => relations_per_block[*blocks_touched.iter().next().unwrap()].push(ri),
            _ => {
                return Err(Error::Invalid(
                    "internal: a relation spans several blocks".into(),
                ))
            }
        }
    }

    let mut blocks = Vec::new();
    let mut arrow_to_block = BTreeMap::new();
    for (bi, arrow_ids) in block_arrows.iter().enumerate() {
        let block_arrow_set: BTreeSet<&ArrowId> = arrow_ids.iter().map(|&i| &arrows[i].id).collect();
        let vertices: Vec<VertexId> = quiver
            .vertices()
            .iter()
            .filter(|v| {
                arrow_ids
                    .iter()
                    .any(|&i| &arrows[i].tail == *v || &arrows[i].head == *v)
            })
            .cloned()
            .collect();
        let sub_arrows: Vec<_> = arrow_ids.iter().map(|&i| arrows[i].clone()).collect();
        let special: BTreeSet<ArrowId> = quiver
            .special_set()
            .iter()
            .filter(|s| block_arrow_set.contains(s))
            .cloned()
            .collect();
        let sub_quiver = Quiver::new(vertices.clone(), sub_arrows, special)?;
        let sub_relations: Vec<Relation> = relations_per_block[bi]
            .iter()
            .map(|&ri| p.relations()[ri].clone())
            .collect();
        let sub = Presentation::new(sub_quiver, sub_relations, p.provenance())?
            .with_name(format!("{}-block{}", p.name(), bi));
        for &i in arrow_ids {
            arrow_to_block.insert(arrows[i].id.clone(), bi);
        }
        blocks.push(Block {
            presentation: Arc::new(sub),
            arrows: arrow_ids.iter().map(|&i| arrows[i].id.clone()).collect(),
            vertices,
            relations: relations_per_block[bi].clone(),
        });
    }

    let isolated_vertices = quiver
        .vertices()
        .iter()
        .filter(|v| {
            arrows
                .iter()
                .all(|a| &a.tail != *v && &a.head != *v)
        })
        .cloned()
        .collect();

    Ok(BlockDecomposition {
        blocks,
        arrow_to_block,
        isolated_vertices,
    })
}

/// Restriction π_j(d) of a dimension vector to a block's vertex set.
pub fn project_dimension(
    d: &DimensionVector,
    block: usize,
    dec: &BlockDecomposition,
) -> Result<DimensionVector> {
    let b = dec
        .blocks
        .get(block)
        .ok_or_else(|| Error::Invalid(format!("block index {block} out of range")))?;
    let map: BTreeMap<VertexId, usize> = b
        .vertices
        .iter()
        .map(|v| (v.clone(), d.get(v)))
        .collect();
    DimensionVector::new(b.presentation.quiver(), map)
}

/// Restriction π_j(M) of a representation to a block.
pub fn project_rep(
    m: &Representation,
    block: usize,
    dec: &BlockDecomposition,
) -> Result<Representation> {
    let b = dec
        .blocks
        .get(block)
        .ok_or_else(|| Error::Invalid(format!("block index {block} out of range")))?;
    let dims = project_dimension(m.dims(), block, dec)?;
    let mats = b
        .arrows
        .iter()
        .map(|a| (a.clone(), m.matrix(a).clone()))
        .collect();
    Representation::new(b.presentation.clone(), m.field(), dims, mats)
}

/// Inverse of the blockwise factorization: reassembles a representation from
/// one projection per block. `d` supplies the dimensions of isolated
/// vertices and must agree with every projection on shared vertices.
pub fn reassemble(
    p: &Arc<Presentation>,
    dec: &BlockDecomposition,
    parts: &[Representation],
    d: &DimensionVector,
    field: FieldSpec,
) -> Result<Representation> {
    if parts.len() != dec.blocks.len() {
        return Err(Error::Invalid(format!(
            "expected {} block projections, got {}",
            dec.blocks.len(),
            parts.len()
        )));
    }
    let mut mats = BTreeMap::new();
    for (part, block) in parts.iter().zip(&dec.blocks) {
        if part.field() != field {
            return Err(Error::FieldMismatch(
                "block projections must share the field of the reassembly".into(),
            ));
        }
        if part.presentation().as_ref() != block.presentation.as_ref() {
            return Err(Error::PresentationMismatch(
                "projection is not over the expected block presentation".into(),
            ));
        }
        for v in &block.vertices {
            if part.dims().get(v) != d.get(v) {
                return Err(Error::Invalid(format!(
                    "dimension mismatch at vertex {v} between a block projection and the target vector"
                )));
            }
        }
        for a in &block.arrows {
            mats.insert(a.clone(), part.matrix(a).clone());
        }
    }
    Representation::new(p.clone(), field, d.clone(), mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::linalg::Matrix;
    use crate::split::split_presentation;

    fn aid(s: &str) -> ArrowId {
        ArrowId::new(s).unwrap()
    }

    #[test]
    fn relation_links_arrows_into_one_block() {
        let p = parse_presentation(
            "vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelations\nzero b*a\n",
        )
        .unwrap();
        let dec = rho_blocks(&p).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].arrows, vec![aid("a"), aid("b")]);
    }

    #[test]
    fn relation_free_arrows_are_singleton_blocks() {
        let p =
            parse_presentation("vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelations\n")
                .unwrap();
        let dec = rho_blocks(&p).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!(dec.blocks[0].arrows, vec![aid("a")]);
        assert_eq!(dec.blocks[1].arrows, vec![aid("b")]);
    }

    #[test]
    fn split_line4_special_has_one_block() {
        let p = parse_presentation(
            "vertex 1 2 3 4\narrow a: 1 -> 2\nloop f: 2 special\narrow b: 2 -> 3\narrow c: 3 -> 4\nrelations\nzero b*a\nzero c*b*f*a\nidem f\n",
        )
        .unwrap();
        let (split, _) = split_presentation(&p).unwrap();
        let dec = rho_blocks(&split).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(
            dec.blocks[0].arrows,
            vec![aid("a+"), aid("a-"), aid("+b"), aid("-b"), aid("c")]
        );
    }

    #[test]
    fn special_loop_forms_its_own_block_in_skewed_gentle_presentations() {
        let p = parse_presentation(
            "vertex 1 2 3\narrow a: 1 -> 2\nloop f: 2 special\narrow b: 2 -> 3\nrelations\nzero b*a\nidem f\n",
        )
        .unwrap();
        let dec = rho_blocks(&p).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!(dec.blocks[0].arrows, vec![aid("a"), aid("b")]);
        assert_eq!(dec.blocks[1].arrows, vec![aid("f")]);
        // The idempotent relation follows its loop.
        assert_eq!(dec.blocks[1].relations.len(), 1);
    }

    #[test]
    fn projection_and_reassembly_round_trip() {
        let p = Arc::new(
            parse_presentation(
                "vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelations\nzero b*a\n",
            )
            .unwrap(),
        );
        let f = FieldSpec::Rationals;
        let d = DimensionVector::from_values(p.quiver(), &[1, 2, 1]).unwrap();
        let mk = |rows: Vec<Vec<i64>>| {
            Matrix::from_rows(
                f,
                rows.into_iter()
                    .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                    .collect(),
            )
            .unwrap()
        };
        let rep = Representation::new(
            p.clone(),
            f,
            d.clone(),
            [
                (aid("a"), mk(vec![vec![1], vec![0]])),
                (aid("b"), mk(vec![vec![0, 1]])),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        assert!(rep.check().is_ok());
        let dec = rho_blocks(&p).unwrap();
        let parts: Vec<Representation> = (0..dec.blocks.len())
            .map(|i| project_rep(&rep, i, &dec).unwrap())
            .collect();
        for part in &parts {
            assert!(part.check().is_ok());
        }
        let back = reassemble(&p, &dec, &parts, &d, f).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn isolated_vertices_are_reported_separately() {
        let p = parse_presentation("vertex 1 2 3\narrow a: 1 -> 2\nrelations\n").unwrap();
        let dec = rho_blocks(&p).unwrap();
        assert_eq!(dec.isolated_vertices, vec![crate::quiver::VertexId::new("3").unwrap()]);
    }
}
