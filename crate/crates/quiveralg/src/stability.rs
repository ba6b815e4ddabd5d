//! King stability by brute-force subrepresentation enumeration over prime
//! fields, θ-stable decompositions, and moduli shapes as products of
//! projective spaces.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{enumerate_subspaces, row_in_span, FieldSpec, Matrix, Scalar};
use crate::quiver::{weight_pairing, DimensionVector, VertexId, Weight};
use crate::rep::{hom_dim, Representation};

/// Hard limits for the brute-force searches. Verdicts are field-specific:
/// they enumerate actual subrepresentations over F_p.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceGuard {
    pub max_total_dim: usize,
}

impl Default for BruteForceGuard {
    fn default() -> Self {
        BruteForceGuard { max_total_dim: 8 }
    }
}

/// Dimension vectors of all subrepresentations of `m`: tuples of subspaces,
/// one per vertex, closed under every arrow map. Always contains 0 and d.
pub fn subrep_dimension_vectors(
    m: &Representation,
    guard: BruteForceGuard,
) -> Result<BTreeSet<DimensionVector>> {
    let p = match m.field() {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rationals => {
            return Err(Error::Unsupported(
                "subrepresentation enumeration needs a prime field; rationals are not enumerable"
                    .into(),
            ))
        }
    };
    let total = m.dims().total();
    if total > guard.max_total_dim {
        return Err(Error::GuardExceeded(format!(
            "total dimension {total} exceeds the limit {} (raise --max-total-dim to override)",
            guard.max_total_dim
        )));
    }
    let quiver = m.presentation().quiver();
    let vertices: Vec<&VertexId> = quiver.vertices().iter().collect();

    // Subspaces per vertex as RREF row bases, with pivot columns cached.
    let mut choices: Vec<Vec<(Matrix, Vec<usize>)>> = Vec::new();
    for v in &vertices {
        let subs = enumerate_subspaces(p, m.dims().get(v))?;
        choices.push(
            subs.into_iter()
                .map(|s| {
                    let mut r = s.clone();
                    let pivots = r.rref_in_place();
                    (s, pivots)
                })
                .collect(),
        );
    }

    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; vertices.len()];
    loop {
        if closed_under_arrows(m, &vertices, &choices, &pick) {
            let dims: std::collections::BTreeMap<VertexId, usize> = vertices
                .iter()
                .zip(&pick)
                .map(|(v, &k)| ((*v).clone(), choices_dim(&choices, v, &vertices, k)))
                .collect();
            out.insert(DimensionVector::new(quiver, dims)?);
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(out);
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if pick.iter().all(|&x| x == 0) {
            return Ok(out);
        }
    }
}

fn choices_dim(
    choices: &[Vec<(Matrix, Vec<usize>)>],
    v: &VertexId,
    vertices: &[&VertexId],
    k: usize,
) -> usize {
    let vi = vertices.iter().position(|x| *x == v).expect("vertex");
    choices[vi][k].0.rows()
}

fn closed_under_arrows(
    m: &Representation,
    vertices: &[&VertexId],
    choices: &[Vec<(Matrix, Vec<usize>)>],
    pick: &[usize],
) -> bool {
    let quiver = m.presentation().quiver();
    let vi = |v: &VertexId| vertices.iter().position(|x| *x == v).expect("vertex");
    for arrow in quiver.arrows() {
        let (tail_basis, _) = &choices[vi(&arrow.tail)][pick[vi(&arrow.tail)]];
        let (head_basis, head_pivots) = &choices[vi(&arrow.head)][pick[vi(&arrow.head)]];
        let map = m.matrix(&arrow.id);
        // Image of each tail basis vector must lie in the head subspace.
        for i in 0..tail_basis.rows() {
            let image: Vec<Scalar> = (0..map.rows())
                .map(|r| {
                    let mut acc = m.field().zero();
                    for c in 0..map.cols() {
                        acc = m
                            .field()
                            .add(&acc, &m.field().mul(map.get(r, c), tail_basis.get(i, c)));
                    }
                    acc
                })
                .collect();
            if !row_in_span(head_basis, head_pivots, &image) {
                return false;
            }
        }
    }
    true
}

/// Certificate of instability or strict semistability.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// θ(dim M) ≠ 0.
    NonzeroTotalPairing { pairing: i64 },
    /// A subrepresentation dimension vector with θ(d') > 0.
    PositiveSubrep { dims: DimensionVector, pairing: i64 },
    /// A proper nonzero subrepresentation dimension vector with θ(d') = 0.
    NullSubrep { dims: DimensionVector },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum StabilityVerdict {
    Unstable { certificate: Certificate },
    SemistableNotStable { certificate: Certificate },
    Stable,
}

impl StabilityVerdict {
    pub fn is_semistable(&self) -> bool {
        !matches!(self, StabilityVerdict::Unstable { .. })
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable)
    }
}

/// King stability of `m` at weight θ by exhaustive subrepresentation
/// enumeration over the prime field of `m`.
pub fn check_stability(
    m: &Representation,
    theta: &Weight,
    guard: BruteForceGuard,
) -> Result<StabilityVerdict> {
    let total = weight_pairing(theta, m.dims())?;
    if total != 0 {
        return Ok(StabilityVerdict::Unstable {
            certificate: Certificate::NonzeroTotalPairing { pairing: total },
        });
    }
    let subs = subrep_dimension_vectors(m, guard)?;
    let zero_total = m.dims().total() == 0;
    let mut null_witness: Option<DimensionVector> = None;
    for d in &subs {
        if d.total() == 0 || d == m.dims() {
            continue;
        }
        let pairing = weight_pairing(theta, d)?;
        if pairing > 0 {
            return Ok(StabilityVerdict::Unstable {
                certificate: Certificate::PositiveSubrep {
                    dims: d.clone(),
                    pairing,
                },
            });
        }
        if pairing == 0 && null_witness.is_none() {
            null_witness = Some(d.clone());
        }
    }
    if zero_total {
        // The zero representation is semistable but not stable by convention:
        // it is not simple in the semistable category.
        return Ok(StabilityVerdict::SemistableNotStable {
            certificate: Certificate::NullSubrep {
                dims: m.dims().clone(),
            },
        });
    }
    match null_witness {
        Some(dims) => Ok(StabilityVerdict::SemistableNotStable {
            certificate: Certificate::NullSubrep { dims },
        }),
        None => Ok(StabilityVerdict::Stable),
    }
}

/// Replays a stability certificate: the claimed subrepresentation dimension
/// vector must occur among the actual subrepresentations and reproduce its
/// pairing.
pub fn replay_certificate(
    m: &Representation,
    theta: &Weight,
    verdict: &StabilityVerdict,
    guard: BruteForceGuard,
) -> Result<bool> {
    match verdict {
        StabilityVerdict::Stable => Ok(true),
        StabilityVerdict::Unstable {
            certificate: Certificate::NonzeroTotalPairing { pairing },
        } => Ok(weight_pairing(theta, m.dims())? == *pairing && *pairing != 0),
        StabilityVerdict::Unstable {
            certificate: Certificate::PositiveSubrep { dims, pairing },
        } => {
            let subs = subrep_dimension_vectors(m, guard)?;
            Ok(subs.contains(dims) && weight_pairing(theta, dims)? == *pairing && *pairing > 0)
        }
        StabilityVerdict::SemistableNotStable {
            certificate: Certificate::NullSubrep { dims },
        } => {
            let subs = subrep_dimension_vectors(m, guard)?;
            let proper = dims.total() > 0 && dims != m.dims() || m.dims().total() == 0;
            Ok(subs.contains(dims) && weight_pairing(theta, dims)? == 0 && proper)
        }
        _ => Ok(false),
    }
}

/// Marks whether a stable factor's component is an orbit closure (c = 0) or
/// carries a one-parameter family (c = 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CValue {
    OrbitClosure,
    Curve,
}

impl CValue {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(CValue::OrbitClosure),
            "1" => Ok(CValue::Curve),
            other => Err(Error::Invalid(format!("c must be 0 or 1, got `{other}`"))),
        }
    }

    pub fn as_int(self) -> u8 {
        match self {
            CValue::OrbitClosure => 0,
            CValue::Curve => 1,
        }
    }
}

/// Descriptor of a stable factor in a decomposition.
#[derive(Clone, PartialEq, Debug)]
pub enum FactorDescriptor {
    /// Symbolic label from a decomposition file (e.g. a band word).
    Label(String),
    /// An explicit representation.
    Explicit(Representation),
}

impl FactorDescriptor {
    pub fn display(&self) -> String {
        match self {
            FactorDescriptor::Label(s) => s.clone(),
            FactorDescriptor::Explicit(rep) => format!(
                "<representation of total dimension {}>",
                rep.dims().total()
            ),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct StableFactor {
    pub descriptor: FactorDescriptor,
    pub multiplicity: usize,
    pub c_value: CValue,
}

/// Input to the moduli-shape computation: pairwise distinct θ-stable
/// factors with multiplicities.
#[derive(Clone, PartialEq, Debug)]
pub struct StableDecompositionInput {
    pub factors: Vec<StableFactor>,
}

impl StableDecompositionInput {
    pub fn new(factors: Vec<StableFactor>) -> Result<Self> {
        for f in &factors {
            if f.multiplicity == 0 {
                return Err(Error::Invalid("multiplicities must be positive".into()));
            }
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if factors[i].descriptor == factors[j].descriptor {
                    return Err(Error::Invalid(format!(
                        "factors {i} and {j} have the same descriptor `{}`",
                        factors[i].descriptor.display()
                    )));
                }
            }
        }
        Ok(StableDecompositionInput { factors })
    }
}

/// Groups verified-stable representations into isomorphism classes. Stables
/// have Hom of dimension zero or one, so mutual nonvanishing Hom detects
/// isomorphism. Each input carries its c value; grouped factors must agree.
pub fn group_polystable_factors(
    factors: &[(Representation, CValue)],
    verdicts: &[StabilityVerdict],
) -> Result<StableDecompositionInput> {
    if factors.len() != verdicts.len() {
        return Err(Error::Invalid(
            "one stability verdict per factor is required".into(),
        ));
    }
    for (i, v) in verdicts.iter().enumerate() {
        if !v.is_stable() {
            return Err(Error::Invalid(format!(
                "factor {i} is not verified stable; only stable factors may be grouped"
            )));
        }
    }
    let mut classes: Vec<(usize, usize)> = Vec::new(); // (representative index, count)
    'next: for (i, (rep, c)) in factors.iter().enumerate() {
        for (repr_idx, count) in classes.iter_mut() {
            let (other, other_c) = &factors[*repr_idx];
            if rep.dims() == other.dims()
                && hom_dim(rep, other)? >= 1
                && hom_dim(other, rep)? >= 1
            {
                if c != other_c {
                    return Err(Error::Invalid(format!(
                        "isomorphic factors {repr_idx} and {i} carry different c values"
                    )));
                }
                *count += 1;
                continue 'next;
            }
        }
        classes.push((i, 1));
    }
    StableDecompositionInput::new(
        classes
            .into_iter()
            .map(|(idx, count)| StableFactor {
                descriptor: FactorDescriptor::Explicit(factors[idx].0.clone()),
                multiplicity: count,
                c_value: factors[idx].1,
            })
            .collect(),
    )
}

/// A product of projective spaces (the empty product is a point).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct ModuliShape {
    pub projective_exponents: Vec<usize>,
}

impl ModuliShape {
    pub fn dimension(&self) -> usize {
        self.projective_exponents.iter().sum()
    }

    pub fn is_point(&self) -> bool {
        self.projective_exponents.is_empty()
    }
}

impl fmt::Display for ModuliShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.projective_exponents.is_empty() {
            return f.write_str("point");
        }
        let parts: Vec<String> = self
            .projective_exponents
            .iter()
            .map(|m| format!("P^{m}"))
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

/// The shape of the moduli space of a θ-stable decomposition over a clannish
/// presentation: orbit-closure factors contribute nothing, and a factor with
/// a one-parameter family and multiplicity m contributes S^m(P^1) = P^m.
/// `clannish_verified` must be set by the caller; the product-of-projective-
/// spaces conclusion is only licensed for clannish algebras.
pub fn moduli_shape(
    dec: &StableDecompositionInput,
    clannish_verified: bool,
) -> Result<ModuliShape> {
    if !clannish_verified {
        return Err(Error::Unsupported(
            "moduli shapes are only computed for verified clannish presentations; pass the verified flag"
                .into(),
        ));
    }
    let projective_exponents = dec
        .factors
        .iter()
        .filter(|f| f.c_value == CValue::Curve)
        .map(|f| f.multiplicity)
        .collect();
    Ok(ModuliShape {
        projective_exponents,
    })
}

/// Parses a decomposition file: one `factor <descriptor> m=<int> c=<0|1>`
/// line per factor, `#` comments allowed.
pub fn parse_decomposition(text: &str) -> Result<StableDecompositionInput> {
    let mut factors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens[0] != "factor" || tokens.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                column: 1,
                message: "expected `factor <descriptor> m=<int> c=<0|1>`".into(),
            });
        }
        let descriptor = tokens[1].to_string();
        let m = tokens[2]
            .strip_prefix("m=")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line: lineno,
                column: 1,
                message: format!("bad multiplicity `{}`", tokens[2]),
            })?;
        let c = tokens[3]
            .strip_prefix("c=")
            .ok_or_else(|| Error::Parse {
                line: lineno,
                column: 1,
                message: format!("bad c value `{}`", tokens[3]),
            })
            .and_then(|s| {
                CValue::parse(s).map_err(|e| Error::Parse {
                    line: lineno,
                    column: 1,
                    message: e.to_string(),
                })
            })?;
        factors.push(StableFactor {
            descriptor: FactorDescriptor::Label(descriptor),
            multiplicity: m,
            c_value: c,
        });
    }
    StableDecompositionInput::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::linalg::Matrix;
    use crate::quiver::ArrowId;
    use crate::rep::end_dim;
    use std::sync::Arc;

    const A2: &str = "vertex 1 2\narrow a: 1 -> 2\nrelations\n";

    fn a2_rep(entry: u64) -> Representation {
        let p = Arc::new(parse_presentation(A2).unwrap());
        let f = FieldSpec::prime(2).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[1, 1]).unwrap();
        let mut m = Matrix::zero(f, 1, 1);
        m.set(0, 0, Scalar::Mod(entry));
        Representation::new(
            p,
            f,
            d,
            [(ArrowId::new("a").unwrap(), m)].into_iter().collect(),
        )
        .unwrap()
    }

    fn theta(rep: &Representation, values: &[i64]) -> Weight {
        Weight::from_values(rep.presentation().quiver(), values).unwrap()
    }

    #[test]
    fn subrep_dimension_vectors_of_a2() {
        let m = a2_rep(1);
        let subs = subrep_dimension_vectors(&m, BruteForceGuard::default()).unwrap();
        let rendered: Vec<String> = subs
            .iter()
            .map(|d| d.display_ordered(m.presentation().quiver()))
            .collect();
        assert_eq!(rendered, vec!["1=0 2=0", "1=0 2=1", "1=1 2=1"]);

        let z = a2_rep(0);
        let subs0 = subrep_dimension_vectors(&z, BruteForceGuard::default()).unwrap();
        assert_eq!(subs0.len(), 4);
    }

    #[test]
    fn zero_module_has_only_the_zero_subrep() {
        let p = Arc::new(parse_presentation(A2).unwrap());
        let f = FieldSpec::prime(2).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[0, 0]).unwrap();
        let m = Representation::zero(p, f, d).unwrap();
        let subs = subrep_dimension_vectors(&m, BruteForceGuard::default()).unwrap();
        assert_eq!(subs.len(), 1);
    }

    #[test]
    fn a2_stability_brute_force() {
        let m = a2_rep(1);
        let th = theta(&m, &[1, -1]);
        let v = check_stability(&m, &th, BruteForceGuard::default()).unwrap();
        assert_eq!(v, StabilityVerdict::Stable);

        let z = a2_rep(0);
        let v0 = check_stability(&z, &th, BruteForceGuard::default()).unwrap();
        match &v0 {
            StabilityVerdict::Unstable {
                certificate: Certificate::PositiveSubrep { dims, pairing },
            } => {
                assert_eq!(
                    dims.display_ordered(z.presentation().quiver()),
                    "1=1 2=0"
                );
                assert_eq!(*pairing, 1);
            }
            other => panic!("expected unstable with subrep certificate, got {other:?}"),
        }
        assert!(replay_certificate(&z, &th, &v0, BruteForceGuard::default()).unwrap());
    }

    #[test]
    fn zero_weight_gives_semistable_stable_iff_simple() {
        let m = a2_rep(1);
        let th = theta(&m, &[0, 0]);
        let v = check_stability(&m, &th, BruteForceGuard::default()).unwrap();
        assert!(matches!(v, StabilityVerdict::SemistableNotStable { .. }));

        // A simple module is stable for the zero weight.
        let p = Arc::new(parse_presentation(A2).unwrap());
        let f = FieldSpec::prime(2).unwrap();
        let d = DimensionVector::from_values(p.quiver(), &[1, 0]).unwrap();
        let s = Representation::zero(p, f, d).unwrap();
        let th0 = theta(&s, &[0, 0]);
        assert_eq!(
            check_stability(&s, &th0, BruteForceGuard::default()).unwrap(),
            StabilityVerdict::Stable
        );
    }

    #[test]
    fn verdicts_are_invariant_under_weight_scaling() {
        for entry in [0, 1] {
            let m = a2_rep(entry);
            let th = theta(&m, &[1, -1]);
            let th2 = th.scale(2);
            let v1 = check_stability(&m, &th, BruteForceGuard::default()).unwrap();
            let v2 = check_stability(&m, &th2, BruteForceGuard::default()).unwrap();
            assert_eq!(
                std::mem::discriminant(&v1),
                std::mem::discriminant(&v2)
            );
        }
    }

    #[test]
    fn guard_rejects_oversized_inputs() {
        let m = a2_rep(1);
        let guard = BruteForceGuard { max_total_dim: 1 };
        assert!(matches!(
            subrep_dimension_vectors(&m, guard),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn grouping_counts_multiplicities() {
        let m = a2_rep(1);
        let th = theta(&m, &[1, -1]);
        let v = check_stability(&m, &th, BruteForceGuard::default()).unwrap();
        assert!(v.is_stable());
        assert_eq!(end_dim(&m).unwrap(), 1);

        // Stable factors listed twice group with multiplicity two.
        let factors = vec![
            (m.clone(), CValue::OrbitClosure),
            (m.clone(), CValue::OrbitClosure),
        ];
        let verdicts = vec![v.clone(), v.clone()];
        let dec = group_polystable_factors(&factors, &verdicts).unwrap();
        assert_eq!(dec.factors.len(), 1);
        assert_eq!(dec.factors[0].multiplicity, 2);

        // A non-stable factor is rejected.
        let z = a2_rep(0);
        let vz = check_stability(&z, &th, BruteForceGuard::default()).unwrap();
        assert!(group_polystable_factors(&[(z, CValue::OrbitClosure)], &[vz]).is_err());
    }

    #[test]
    fn moduli_shapes() {
        let dec = parse_decomposition("factor b1 m=2 c=1\nfactor b2 m=3 c=1\n").unwrap();
        let shape = moduli_shape(&dec, true).unwrap();
        assert_eq!(shape.to_string(), "P^2 x P^3");
        assert_eq!(shape.dimension(), 5);

        let dec0 = parse_decomposition("factor s m=5 c=0\n").unwrap();
        assert_eq!(moduli_shape(&dec0, true).unwrap().to_string(), "point");

        let dec1 = parse_decomposition("factor b m=1 c=1\n").unwrap();
        assert_eq!(moduli_shape(&dec1, true).unwrap().to_string(), "P^1");

        assert!(moduli_shape(&dec1, false).is_err());
    }

    #[test]
    fn duplicate_factor_descriptors_are_rejected() {
        assert!(parse_decomposition("factor b m=1 c=1\nfactor b m=2 c=1\n").is_err());
    }
}
