//! Representations of presentations: exact matrix tuples, relation checking,
//! Hom/End/orbit/tangent dimensions, idempotent components and rank-sequence
//! components of gentle presentations.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::presentation::{Presentation, Relation};
use crate::quiver::{ArrowId, DimensionVector, Path, VertexId};
use crate::rng::SplitMix64;

/// A point of the representation variety: one matrix of shape
/// d(head) × d(tail) per arrow, over Q or a prime field.
///
/// Shapes are validated on construction; whether the relations hold is a
/// property of the point, checked by [`Representation::check`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation {
    presentation: Arc<Presentation>,
    field: FieldSpec,
    dims: DimensionVector,
    mats: BTreeMap<ArrowId, Matrix>,
}

impl Representation {
    pub fn new(
        presentation: Arc<Presentation>,
        field: FieldSpec,
        dims: DimensionVector,
        mats: BTreeMap<ArrowId, Matrix>,
    ) -> Result<Self> {
        // Re-key the dimension vector against this presentation's quiver to
        // catch vectors built for a different one.
        let dims = DimensionVector::new(presentation.quiver(), dims.as_map().clone())?;
        for arrow in presentation.quiver().arrows() {
            let m = mats.get(&arrow.id).ok_or_else(|| {
                Error::Invalid(format!("missing matrix for arrow `{}`", arrow.id))
            })?;
            if m.field() != field {
                return Err(Error::FieldMismatch(format!(
                    "matrix for `{}` is over {}, expected {}",
                    arrow.id,
                    m.field().label(),
                    field.label()
                )));
            }
            let (rows, cols) = (dims.get(&arrow.head), dims.get(&arrow.tail));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Invalid(format!(
                    "matrix for `{}` has shape {}x{}, expected {rows}x{cols}",
                    arrow.id,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if mats.len() != presentation.quiver().arrows().len() {
            return Err(Error::Invalid(
                "representation contains matrices for undeclared arrows".into(),
            ));
        }
        Ok(Representation {
            presentation,
            field,
            dims,
            mats,
        })
    }

    /// The zero representation of the given dimension vector.
    pub fn zero(
        presentation: Arc<Presentation>,
        field: FieldSpec,
        dims: DimensionVector,
    ) -> Result<Self> {
        let mats = presentation
            .quiver()
            .arrows()
            .iter()
            .map(|a| {
                (
                    a.id.clone(),
                    Matrix::zero(field, dims.get(&a.head), dims.get(&a.tail)),
                )
            })
            .collect();
        Representation::new(presentation, field, dims, mats)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrix(&self, a: &ArrowId) -> &Matrix {
        &self.mats[a]
    }

    pub fn matrices(&self) -> &BTreeMap<ArrowId, Matrix> {
        &self.mats
    }

    /// Evaluates a path: M(a_m)⋯M(a_1) for the stored order [a_1, …, a_m].
    pub fn eval_path(&self, path: &Path) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.dims.get(path.source()));
        for a in path.arrows() {
            acc = self.mats[a].mul(&acc);
        }
        acc
    }

    /// Evaluates a relation; the result is the zero matrix exactly when the
    /// point satisfies it.
    pub fn eval_relation(&self, rel: &Relation) -> Result<Matrix> {
        match rel {
            Relation::ZeroPath(path) => Ok(self.eval_path(path)),
            Relation::LinearCombination(terms) => {
                let first = self.eval_path(&terms[0].1);
                let mut acc = Matrix::zero(self.field, first.rows(), first.cols());
                for (coeff, path) in terms {
                    let c = self.field.from_rational(coeff)?;
                    acc = acc.add(&self.eval_path(path).scale(&c));
                }
                Ok(acc)
            }
            Relation::IdempotentLoop(e) => {
                let m = &self.mats[e];
                Ok(m.mul(m).sub(m))
            }
        }
    }

    /// Index of the first violated relation, if any.
    pub fn first_violation(&self) -> Result<Option<usize>> {
        for (i, rel) in self.presentation.relations().iter().enumerate() {
            if !self.eval_relation(rel)?.is_zero() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Errors with the first violated relation unless the point lies on the
    /// representation variety.
    pub fn check(&self) -> Result<()> {
        match self.first_violation()? {
            None => Ok(()),
            Some(i) => Err(Error::InvalidRepresentation {
                index: i,
                relation: self.presentation.relations()[i].display(),
            }),
        }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        same_setting(self, other)?;
        let quiver = self.presentation.quiver();
        let dims: BTreeMap<VertexId, usize> = quiver
            .vertices()
            .iter()
            .map(|v| (v.clone(), self.dims.get(v) + other.dims.get(v)))
            .collect();
        let dims = DimensionVector::new(quiver, dims)?;
        let mut mats = BTreeMap::new();
        for arrow in quiver.arrows() {
            let a = &self.mats[&arrow.id];
            let b = &other.mats[&arrow.id];
            let mut m = Matrix::zero(self.field, a.rows() + b.rows(), a.cols() + b.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
                }
            }
            mats.insert(arrow.id.clone(), m);
        }
        Representation::new(self.presentation.clone(), self.field, dims, mats)
    }
}

fn same_setting(m: &Representation, n: &Representation) -> Result<()> {
    if m.field != n.field {
        return Err(Error::FieldMismatch(format!(
            "{} vs {}",
            m.field.label(),
            n.field.label()
        )));
    }
    if m.presentation.as_ref() != n.presentation.as_ref() {
        return Err(Error::PresentationMismatch(
            "the representations are over different presentations".into(),
        ));
    }
    Ok(())
}

/// dim_k Hom_A(M, N): the dimension of the space of intertwiners
/// φ = (φ_v) with φ(ha)·M(a) = N(a)·φ(ta) for every arrow.
pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    same_setting(m, n)?;
    let field = m.field;
    let quiver = m.presentation.quiver();

    // Unknowns: entries of φ_v, of shape dN(v) × dM(v).
    let mut offset = BTreeMap::new();
    let mut unknowns = 0usize;
    for v in quiver.vertices() {
        offset.insert(v.clone(), unknowns);
        unknowns += n.dims.get(v) * m.dims.get(v);
    }
    let unk = |v: &VertexId, i: usize, j: usize| offset[v] + i * m.dims.get(v) + j;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for arrow in quiver.arrows() {
        let ma = m.matrix(&arrow.id);
        let na = n.matrix(&arrow.id);
        let eq_rows = n.dims.get(&arrow.head);
        let eq_cols = m.dims.get(&arrow.tail);
        for i in 0..eq_rows {
            for j in 0..eq_cols {
                let mut row = vec![field.zero(); unknowns];
                // (φ_h · M(a))(i, j) = Σ_k φ_h(i, k) M(a)(k, j)
                for k in 0..m.dims.get(&arrow.head) {
                    let idx = unk(&arrow.head, i, k);
                    row[idx] = field.add(&row[idx], ma.get(k, j));
                }
                // −(N(a) · φ_t)(i, j) = −Σ_k N(a)(i, k) φ_t(k, j)
                for k in 0..n.dims.get(&arrow.tail) {
                    let idx = unk(&arrow.tail, k, j);
                    let v = field.neg(na.get(i, k));
                    row[idx] = field.add(&row[idx], &v);
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zero(field, 0, unknowns)
    } else {
        Matrix::from_rows(field, rows)?
    };
    Ok(unknowns - system.rank())
}

pub fn end_dim(m: &Representation) -> Result<usize> {
    hom_dim(m, m)
}

/// dim GL(d)·M = Σ_v d(v)² − dim End(M). Requires a valid point.
pub fn orbit_dim(m: &Representation) -> Result<usize> {
    m.check()?;
    let gl: usize = m.dims().iter().map(|(_, d)| d * d).sum();
    Ok(gl - end_dim(m)?)
}

/// Dimension of the kernel of the Jacobian of all relation equations at M:
/// first-order deformations X with every relation satisfied to order ε.
pub fn tangent_dim(m: &Representation) -> Result<usize> {
    m.check()?;
    let field = m.field;
    let quiver = m.presentation.quiver();

    let mut offset = BTreeMap::new();
    let mut unknowns = 0usize;
    for arrow in quiver.arrows() {
        offset.insert(arrow.id.clone(), unknowns);
        unknowns += m.dims.get(&arrow.head) * m.dims.get(&arrow.tail);
    }
    let unk = |a: &ArrowId, s: usize, t: usize, cols: usize| offset[a] + s * cols + t;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let one = field.one();
    for rel in m.presentation.relations() {
        match rel {
            Relation::ZeroPath(path) => {
                add_path_jacobian(&mut rows, m, path, &one, unknowns, &unk)?;
            }
            Relation::LinearCombination(terms) => {
                // All terms are parallel, so they share equation shape; the
                // Jacobians add up.
                let r = m.dims.get(terms[0].1.target());
                let c = m.dims.get(terms[0].1.source());
                let mut block = vec![vec![field.zero(); unknowns]; r * c];
                for (coeff, path) in terms {
                    let cf = field.from_rational(coeff)?;
                    let mut term_rows: Vec<Vec<Scalar>> = Vec::new();
                    add_path_jacobian(&mut term_rows, m, path, &cf, unknowns, &unk)?;
                    for (dst, src) in block.iter_mut().zip(term_rows) {
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d = field.add(d, &s);
                        }
                    }
                }
                rows.extend(block);
            }
            Relation::IdempotentLoop(e) => {
                // d(M² − M)[X] = X·A + A·X − X with A = M(e).
                let a = m.matrix(e);
                let nn = a.rows();
                let cols_of_x = nn;
                for r in 0..nn {
                    for c in 0..nn {
                        let mut row = vec![field.zero(); unknowns];
                        for t in 0..nn {
                            // (X·A)(r, c): X(r, t) A(t, c)
                            let idx = unk(e, r, t, cols_of_x);
                            row[idx] = field.add(&row[idx], a.get(t, c));
                        }
                        for s in 0..nn {
                            // (A·X)(r, c): A(r, s) X(s, c)
                            let idx = unk(e, s, c, cols_of_x);
                            row[idx] = field.add(&row[idx], a.get(r, s));
                        }
                        let idx = unk(e, r, c, cols_of_x);
                        row[idx] = field.sub(&row[idx], &one);
                        rows.push(row);
                    }
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zero(field, 0, unknowns)
    } else {
        Matrix::from_rows(field, rows)?
    };
    Ok(unknowns - system.rank())
}

/// Appends the Jacobian rows of `coeff · M(a_m)⋯M(a_1)` with respect to all
/// arrow unknowns: the X_{a_i} entry picks up suffix(r,s)·prefix(t,c).
fn add_path_jacobian(
    rows: &mut Vec<Vec<Scalar>>,
    m: &Representation,
    path: &Path,
    coeff: &Scalar,
    unknowns: usize,
    unk: &impl Fn(&ArrowId, usize, usize, usize) -> usize,
) -> Result<()> {
    let field = m.field;
    let quiver = m.presentation.quiver();
    let len = path.arrows().len();
    let src_dim = m.dims.get(path.source());
    let tgt_dim = m.dims.get(path.target());

    // prefix[i] = M(a_{i-1})⋯M(a_1), suffix[i] = M(a_m)⋯M(a_{i+1}).
    let mut prefix = Vec::with_capacity(len);
    prefix.push(Matrix::identity(field, src_dim));
    for i in 0..len - 1 {
        let next = m.matrix(&path.arrows()[i]).mul(&prefix[i]);
        prefix.push(next);
    }
    let mut suffix = vec![Matrix::identity(field, tgt_dim); len];
    for i in (0..len - 1).rev() {
        suffix[i] = suffix[i + 1].mul(m.matrix(&path.arrows()[i + 1]));
    }

    let mut block = vec![vec![field.zero(); unknowns]; tgt_dim * src_dim];
    for (i, aid) in path.arrows().iter().enumerate() {
        let arrow = quiver.arrow(aid).expect("path arrow exists");
        let x_rows = m.dims.get(&arrow.head);
        let x_cols = m.dims.get(&arrow.tail);
        for r in 0..tgt_dim {
            for c in 0..src_dim {
                let row = &mut block[r * src_dim + c];
                for s in 0..x_rows {
                    let sr = suffix[i].get(r, s);
                    if field.is_zero(sr) {
                        continue;
                    }
                    for t in 0..x_cols {
                        let pv = prefix[i].get(t, c);
                        if field.is_zero(pv) {
                            continue;
                        }
                        let idx = unk(aid, s, t, x_cols);
                        let add = field.mul(coeff, &field.mul(sr, pv));
                        row[idx] = field.add(&row[idx], &add);
                    }
                }
            }
        }
    }
    rows.extend(block);
    Ok(())
}

/// For an exact idempotent matrix E: the pair (r, dim GL_n·E) where
/// r = rank E = trace E and the orbit is the rank-r connected component.
/// The dimension is computed through the orbit-stabilizer equation and
/// equals 2r(n−r).
pub fn idempotent_component(mat: &Matrix) -> Result<(usize, usize)> {
    if !mat.is_square() {
        return Err(Error::Invalid("idempotent test needs a square matrix".into()));
    }
    if !mat.mul(mat).sub(mat).is_zero() {
        return Err(Error::NotIdempotent);
    }
    let r = mat.rank();
    let rep = idempotent_point_representation(mat)?;
    let dim = orbit_dim(&rep)?;
    Ok((r, dim))
}

/// Wraps a square idempotent matrix as a representation of the one-vertex
/// presentation with a single special loop.
pub fn idempotent_point_representation(mat: &Matrix) -> Result<Representation> {
    use crate::quiver::{Arrow, Quiver, VertexId};
    let v = VertexId::new("v")?;
    let e = ArrowId::new("e")?;
    let quiver = Quiver::new(
        vec![v.clone()],
        vec![Arrow {
            id: e.clone(),
            tail: v.clone(),
            head: v.clone(),
        }],
        [e.clone()].into_iter().collect(),
    )?;
    let pres = Arc::new(
        Presentation::new(quiver, vec![], crate::presentation::Provenance::User)?
            .with_name("idempotent-loop"),
    );
    let dims = DimensionVector::from_values(pres.quiver(), &[mat.rows()])?;
    let mats = [(e, mat.clone())].into_iter().collect();
    Representation::new(pres, mat.field(), dims, mats)
}

/// Generic-point dimension of a component: orbit dimension of a generic
/// point plus the number of one-parameter summand families. Genericity of
/// `m` is the caller's responsibility.
pub fn component_dim(m: &Representation, band_param_count: usize) -> Result<usize> {
    Ok(orbit_dim(m)? + band_param_count)
}

/// One rank bound per arrow of a gentle presentation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct RankSequence(pub BTreeMap<ArrowId, usize>);

impl RankSequence {
    pub fn get(&self, a: &ArrowId) -> usize {
        self.0.get(a).copied().unwrap_or(0)
    }

    pub fn display_ordered(&self, p: &Presentation) -> String {
        p.quiver()
            .arrows()
            .iter()
            .map(|a| format!("{}={}", a.id, self.get(&a.id)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

const RANK_ENUMERATION_GUARD: usize = 1_000_000;

/// The maximal rank sequences feasible for `d` on a gentle presentation:
/// r_a ≤ min(d(ta), d(ha)) for every arrow and r_a + r_b ≤ d(v) for every
/// length-two relation through v. Maximal elements of the coordinatewise
/// order, sorted descending lexicographically in arrow declaration order.
pub fn maximal_rank_sequences(p: &Presentation, d: &DimensionVector) -> Result<Vec<RankSequence>> {
    let verdict = crate::classify::is_gentle_pair(p);
    if !verdict.holds {
        return Err(Error::NotInClass {
            class: "a gentle pair".into(),
            details: crate::classify::witness_summary(&verdict.witnesses),
        });
    }
    let quiver = p.quiver();
    let arrows: Vec<&crate::quiver::Arrow> = quiver.arrows().iter().collect();
    let caps: Vec<usize> = arrows
        .iter()
        .map(|a| d.get(&a.tail).min(d.get(&a.head)))
        .collect();
    let mut space: usize = 1;
    for &c in &caps {
        space = space.saturating_mul(c + 1);
        if space > RANK_ENUMERATION_GUARD {
            return Err(Error::GuardExceeded(format!(
                "rank sequence search space exceeds {RANK_ENUMERATION_GUARD}"
            )));
        }
    }
    let index: BTreeMap<&ArrowId, usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (&a.id, i))
        .collect();
    let pair_constraints: Vec<(usize, usize, usize)> = p
        .zero_paths()
        .iter()
        .filter(|(_, path)| path.len() == 2)
        .map(|(_, path)| {
            let a = index[&path.arrows()[0]];
            let b = index[&path.arrows()[1]];
            let mid = quiver.arrow(&path.arrows()[0]).unwrap().head.clone();
            (a, b, d.get(&mid))
        })
        .collect();

    let mut feasible: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; arrows.len()];
    loop {
        if pair_constraints
            .iter()
            .all(|&(a, b, bound)| current[a] + current[b] <= bound)
        {
            feasible.push(current.clone());
        }
        let mut k = 0;
        loop {
            if k == current.len() {
                break;
            }
            current[k] += 1;
            if current[k] <= caps[k] {
                break;
            }
            current[k] = 0;
            k += 1;
        }
        if current.iter().all(|&x| x == 0) {
            break;
        }
        if arrows.is_empty() {
            break;
        }
    }
    if arrows.is_empty() {
        feasible = vec![vec![]];
    }

    let mut maximal: Vec<Vec<usize>> = Vec::new();
    for t in &feasible {
        if !feasible
            .iter()
            .any(|u| u != t && u.iter().zip(t).all(|(x, y)| x >= y))
        {
            maximal.push(t.clone());
        }
    }
    maximal.sort();
    maximal.reverse();
    Ok(maximal
        .into_iter()
        .map(|t| {
            RankSequence(
                arrows
                    .iter()
                    .zip(t)
                    .map(|(a, r)| (a.id.clone(), r))
                    .collect(),
            )
        })
        .collect())
}

/// Uniformly random representation over F_p (all entries independent).
pub fn random_representation(
    p: &Arc<Presentation>,
    d: &DimensionVector,
    prime: u64,
    rng: &mut SplitMix64,
) -> Result<Representation> {
    let field = FieldSpec::prime(prime)?;
    let mut mats = BTreeMap::new();
    for arrow in p.quiver().arrows() {
        let m = Matrix::from_fn(field, d.get(&arrow.head), d.get(&arrow.tail), |_, _| {
            Scalar::Mod(rng.below(prime))
        });
        mats.insert(arrow.id.clone(), m);
    }
    Representation::new(p.clone(), field, d.clone(), mats)
}

/// Randomized search oracle: a valid representation attaining every rank
/// bound of `r` exactly, over F_p. Deterministic in `seed`.
pub fn find_rank_attaining(
    p: &Arc<Presentation>,
    d: &DimensionVector,
    r: &RankSequence,
    prime: u64,
    seed: u64,
    max_tries: usize,
) -> Result<Option<Representation>> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..max_tries {
        let cand = random_representation(p, d, prime, &mut rng)?;
        if cand.first_violation()?.is_some() {
            continue;
        }
        let attains = p
            .quiver()
            .arrows()
            .iter()
            .all(|a| cand.matrix(&a.id).rank() == r.get(&a.id));
        if attains {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;

    fn arc(src: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation(src).unwrap())
    }

    const A2: &str = "vertex 1 2\narrow a: 1 -> 2\nrelations\n";
    const A3_REL: &str = "vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\nrelations\nzero b*a\n";
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

    fn aid(s: &str) -> ArrowId {
        ArrowId::new(s).unwrap()
    }

    fn q_mat(rows: Vec<Vec<i64>>) -> Matrix {
        let f = FieldSpec::Rationals;
        Matrix::from_rows(
            f,
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_representation_is_valid_for_monomial_and_idempotent_relations() {
        let p = arc(LINE4_SPECIAL);
        let d = DimensionVector::from_values(p.quiver(), &[1, 2, 1, 1]).unwrap();
        let rep = Representation::zero(p, FieldSpec::Rationals, d).unwrap();
        assert!(rep.check().is_ok());
    }

    #[test]
    fn line4_special_example_point_is_valid() {
        let p = arc(LINE4_SPECIAL);
        let d = DimensionVector::from_values(p.quiver(), &[1, 2, 1, 1]).unwrap();
        let mats: BTreeMap<ArrowId, Matrix> = [
            (aid("a"), q_mat(vec![vec![1], vec![0]])),
            (aid("f"), q_mat(vec![vec![1, 0], vec![0, 0]])),
            (aid("b"), q_mat(vec![vec![0, 1]])),
            (aid("c"), q_mat(vec![vec![1]])),
        ]
        .into_iter()
        .collect();
        let rep = Representation::new(p, FieldSpec::Rationals, d, mats).unwrap();
        assert!(rep.check().is_ok());
    }

    #[test]
    fn hom_dim_of_simple_is_one() {
        let p = arc(A2);
        let d = DimensionVector::from_values(p.quiver(), &[1, 0]).unwrap();
        let rep = Representation::zero(p, FieldSpec::Rationals, d).unwrap();
        assert_eq!(hom_dim(&rep, &rep).unwrap(), 1);
    }

    #[test]
    fn hom_dim_is_additive_over_direct_sums() {
        let p = arc(A2);
        let d = DimensionVector::from_values(p.quiver(), &[1, 1]).unwrap();
        let m = Representation::new(
            p.clone(),
            FieldSpec::Rationals,
            d,
            [
                (aid("a"), q_mat(vec![vec![1]])),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let mm = m.direct_sum(&m).unwrap();
        assert_eq!(
            hom_dim(&mm, &m).unwrap(),
            2 * hom_dim(&m, &m).unwrap()
        );
    }

    #[test]
    fn kronecker_style_band_points_are_hom_orthogonal() {
        // Relation-free 2-cycle: a: 1 -> 2, b: 2 -> 1; M_λ has M(a)=1, M(b)=λ.
        let p = arc("vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelations\n");
        let d = DimensionVector::from_values(p.quiver(), &[1, 1]).unwrap();
        let make = |lambda: i64| {
            Representation::new(
                p.clone(),
                FieldSpec::Rationals,
                d.clone(),
                [
                    (aid("a"), q_mat(vec![vec![1]])),
                    (aid("b"), q_mat(vec![vec![lambda]])),
                ]
                .into_iter()
                .collect(),
            )
            .unwrap()
        };
        let m1 = make(1);
        let m2 = make(2);
        assert_eq!(hom_dim(&m1, &m2).unwrap(), 0);
        assert_eq!(hom_dim(&m2, &m1).unwrap(), 0);
        assert_eq!(hom_dim(&m1, &m1).unwrap(), 1);
    }

    #[test]
    fn orbit_dims() {
        // Simple at one vertex: point orbit.
        let p1 = arc("vertex 1\nrelations\n");
        let d1 = DimensionVector::from_values(p1.quiver(), &[1]).unwrap();
        let s = Representation::zero(p1, FieldSpec::Rationals, d1).unwrap();
        assert_eq!(orbit_dim(&s).unwrap(), 0);

        // A2 with the identity map: one-dimensional orbit.
        let p2 = arc(A2);
        let d2 = DimensionVector::from_values(p2.quiver(), &[1, 1]).unwrap();
        let m = Representation::new(
            p2,
            FieldSpec::Rationals,
            d2,
            [(aid("a"), q_mat(vec![vec![1]]))].into_iter().collect(),
        )
        .unwrap();
        assert_eq!(orbit_dim(&m).unwrap(), 1);
    }

    #[test]
    fn tangent_dim_without_relations_is_total_matrix_space() {
        let p = arc(A2);
        let d = DimensionVector::from_values(p.quiver(), &[2, 3]).unwrap();
        let rep = Representation::zero(p, FieldSpec::Rationals, d).unwrap();
        assert_eq!(tangent_dim(&rep).unwrap(), 6);
    }

    #[test]
    fn tangent_dim_at_idempotent_projector_in_e2() {
        let (r, dim) = idempotent_component(&q_mat(vec![vec![1, 0], vec![0, 0]])).unwrap();
        assert_eq!((r, dim), (1, 2));
        let rep = idempotent_point_representation(&q_mat(vec![vec![1, 0], vec![0, 0]])).unwrap();
        assert_eq!(tangent_dim(&rep).unwrap(), 2);
    }

    #[test]
    fn tangent_dim_at_zero_of_a3_relation_is_singular() {
        let p = arc(A3_REL);
        let d = DimensionVector::from_values(p.quiver(), &[1, 1, 1]).unwrap();
        let rep = Representation::zero(p, FieldSpec::Rationals, d).unwrap();
        // The linearization of BA at 0 vanishes identically.
        assert_eq!(tangent_dim(&rep).unwrap(), 2);
    }

    #[test]
    fn idempotent_component_extremes() {
        let f = FieldSpec::Rationals;
        assert_eq!(idempotent_component(&Matrix::zero(f, 3, 3)).unwrap(), (0, 0));
        assert_eq!(
            idempotent_component(&Matrix::identity(f, 3)).unwrap(),
            (3, 0)
        );
        assert!(idempotent_component(&q_mat(vec![vec![2]])).is_err());
    }

    #[test]
    fn maximal_rank_sequences_for_a3() {
        let p = parse_presentation(A3_REL).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[1, 1, 1]).unwrap();
        let seqs = maximal_rank_sequences(&p, &d).unwrap();
        let rendered: Vec<String> = seqs.iter().map(|s| s.display_ordered(&p)).collect();
        assert_eq!(rendered, vec!["a=1 b=0", "a=0 b=1"]);
    }

    #[test]
    fn relation_free_rank_sequence_is_min_of_endpoints() {
        let p = parse_presentation(A2).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[2, 3]).unwrap();
        let seqs = maximal_rank_sequences(&p, &d).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].get(&aid("a")), 2);
    }

    #[test]
    fn zero_dimension_vector_has_all_zero_sequence() {
        let p = parse_presentation(A3_REL).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[0, 0, 0]).unwrap();
        let seqs = maximal_rank_sequences(&p, &d).unwrap();
        assert_eq!(seqs.len(), 1);
        assert!(seqs[0].0.values().all(|&r| r == 0));
    }

    #[test]
    fn rank_attainment_oracle_finds_points() {
        let p = arc(A3_REL);
        let d = DimensionVector::from_values(p.quiver(), &[1, 1, 1]).unwrap();
        for seq in maximal_rank_sequences(&p, &d).unwrap() {
            let found = find_rank_attaining(&p, &d, &seq, 2, 0, 500).unwrap();
            assert!(found.is_some(), "no point attaining {seq:?}");
        }
    }
}
