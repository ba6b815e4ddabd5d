//! String and band combinatorics for monomial presentations, and the
//! construction of string and band modules as explicit representations.
//!
//! Walks are stored first-traversed-first; rendering follows the word
//! convention (last letter first), with `a^` for an inverse letter.
//! Presentations with idempotent or linear-combination relations are
//! rejected: only monomial relation sets carry this combinatorics.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::presentation::{Presentation, Relation};
use crate::quiver::{ArrowId, DimensionVector, Quiver, VertexId};
use crate::rep::Representation;

/// One step of a walk: an arrow traversed forwards (direct) or backwards
/// (inverse). Only ordinary arrows may appear in letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Letter {
    pub arrow: ArrowId,
    pub inverse: bool,
}

impl Letter {
    fn source<'q>(&self, quiver: &'q Quiver) -> &'q VertexId {
        let a = quiver.arrow(&self.arrow).expect("letter arrow exists");
        if self.inverse {
            &a.head
        } else {
            &a.tail
        }
    }

    fn target<'q>(&self, quiver: &'q Quiver) -> &'q VertexId {
        let a = quiver.arrow(&self.arrow).expect("letter arrow exists");
        if self.inverse {
            &a.tail
        } else {
            &a.head
        }
    }

    fn inverted(&self) -> Letter {
        Letter {
            arrow: self.arrow.clone(),
            inverse: !self.inverse,
        }
    }

    pub fn render(&self) -> String {
        if self.inverse {
            format!("{}^", self.arrow)
        } else {
            self.arrow.to_string()
        }
    }
}

/// A reduced walk avoiding the relations; the empty walk at a vertex is the
/// trivial string at that vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct StringWord {
    pub source: VertexId,
    pub letters: Vec<Letter>,
}

impl StringWord {
    pub fn trivial(v: VertexId) -> Self {
        StringWord {
            source: v,
            letters: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn target<'q>(&self, quiver: &'q Quiver) -> &'q VertexId {
        match self.letters.last() {
            Some(l) => l.target(quiver),
            None => quiver
                .vertices()
                .iter()
                .find(|v| **v == self.source)
                .expect("source vertex exists"),
        }
    }

    pub fn inverse(&self, quiver: &Quiver) -> StringWord {
        let source = self.target(quiver).clone();
        let letters = self.letters.iter().rev().map(Letter::inverted).collect();
        StringWord { source, letters }
    }

    /// Lexicographically least of the word and its inverse.
    pub fn canonical(&self, quiver: &Quiver) -> StringWord {
        let inv = self.inverse(quiver);
        if *self <= inv {
            self.clone()
        } else {
            inv
        }
    }

    /// Word rendering: letters last-traversed-first, `e_v` for the trivial
    /// string at `v`.
    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return format!("e_{}", self.source);
        }
        self.letters
            .iter()
            .rev()
            .map(Letter::render)
            .collect::<Vec<_>>()
            .join("*")
    }

    /// The vertices visited, in order (length + 1 entries).
    pub fn visited(&self, quiver: &Quiver) -> Vec<VertexId> {
        let mut out = vec![self.source.clone()];
        for l in &self.letters {
            out.push(l.target(quiver).clone());
        }
        out
    }

    pub fn dimension_vector(&self, quiver: &Quiver) -> Result<DimensionVector> {
        let mut counts: BTreeMap<VertexId, usize> = quiver
            .vertices()
            .iter()
            .map(|v| (v.clone(), 0))
            .collect();
        for v in self.visited(quiver) {
            *counts.get_mut(&v).expect("visited vertex declared") += 1;
        }
        DimensionVector::new(quiver, counts)
    }
}

/// A band: a cyclic reduced walk, not a proper power, with at least one
/// direct and one inverse letter, avoiding the relations in every rotation.
/// The canonical rotation (least among all rotations of the word and its
/// inverse) is stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct BandWord {
    pub letters: Vec<Letter>,
}

impl BandWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn render(&self) -> String {
        self.letters
            .iter()
            .rev()
            .map(Letter::render)
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Vertices visited: base points of the cyclic basis, one per letter.
    pub fn visited(&self, quiver: &Quiver) -> Vec<VertexId> {
        self.letters
            .iter()
            .map(|l| l.source(quiver).clone())
            .collect()
    }

    pub fn dimension_vector(&self, quiver: &Quiver) -> Result<DimensionVector> {
        let mut counts: BTreeMap<VertexId, usize> = quiver
            .vertices()
            .iter()
            .map(|v| (v.clone(), 0))
            .collect();
        for v in self.visited(quiver) {
            *counts.get_mut(&v).expect("visited vertex declared") += 1;
        }
        DimensionVector::new(quiver, counts)
    }
}

fn require_monomial(p: &Presentation) -> Result<()> {
    for rel in p.relations() {
        match rel {
            Relation::ZeroPath(_) => {}
            other => {
                return Err(Error::Unsupported(format!(
                    "string and band combinatorics need a monomial presentation; found `{}`",
                    other.display()
                )))
            }
        }
    }
    Ok(())
}

fn zero_words(p: &Presentation) -> Vec<Vec<ArrowId>> {
    p.zero_paths()
        .iter()
        .map(|(_, path)| path.arrows().to_vec())
        .collect()
}

/// A sequence of letters is admissible when adjacent letters compose, no
/// letter is followed by its own inverse, and no run of direct (or inverse)
/// letters spells a relation word.
fn letters_admissible(quiver: &Quiver, words: &[Vec<ArrowId>], letters: &[Letter]) -> bool {
    for pair in letters.windows(2) {
        if pair[0].target(quiver) != pair[1].source(quiver) {
            return false;
        }
        if pair[0].arrow == pair[1].arrow && pair[0].inverse != pair[1].inverse {
            return false;
        }
    }
    for word in words {
        if word.len() > letters.len() {
            continue;
        }
        for window in letters.windows(word.len()) {
            // Direct run spelling the word forwards.
            if window.iter().zip(word.iter()).all(|(l, a)| !l.inverse && &l.arrow == a) {
                return false;
            }
            // Inverse run spelling the word backwards.
            if window
                .iter()
                .zip(word.iter().rev())
                .all(|(l, a)| l.inverse && &l.arrow == a)
            {
                return false;
            }
        }
    }
    true
}

/// All valid strings of length at most `max_length`, one canonical
/// representative per inversion pair, sorted by length then lexicographically.
pub fn enumerate_strings(p: &Presentation, max_length: usize) -> Result<Vec<StringWord>> {
    require_monomial(p)?;
    let quiver = p.quiver();
    let words = zero_words(p);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();

    let mut frontier: Vec<StringWord> = quiver
        .vertices()
        .iter()
        .map(|v| StringWord::trivial(v.clone()))
        .collect();
    for s in &frontier {
        if seen.insert(s.canonical(quiver)) {
            out.push(s.canonical(quiver));
        }
    }
    for _ in 0..max_length {
        let mut next = Vec::new();
        for s in &frontier {
            let at = s.target(quiver).clone();
            for arrow in quiver.ordinary_arrows() {
                for inverse in [false, true] {
                    let letter = Letter {
                        arrow: arrow.id.clone(),
                        inverse,
                    };
                    if letter.source(quiver) != &at {
                        continue;
                    }
                    let mut letters = s.letters.clone();
                    letters.push(letter);
                    if !letters_admissible(quiver, &words, &letters) {
                        continue;
                    }
                    let cand = StringWord {
                        source: s.source.clone(),
                        letters,
                    };
                    let canon = cand.canonical(quiver);
                    if seen.insert(canon.clone()) {
                        out.push(canon);
                    }
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

fn rotations(letters: &[Letter]) -> Vec<Vec<Letter>> {
    (0..letters.len())
        .map(|k| {
            letters[k..]
                .iter()
                .chain(letters[..k].iter())
                .cloned()
                .collect()
        })
        .collect()
}

fn canonical_band(quiver: &Quiver, letters: &[Letter]) -> Vec<Letter> {
    let word = StringWord {
        source: letters[0].source(quiver).clone(),
        letters: letters.to_vec(),
    };
    let inv = word.inverse(quiver);
    rotations(letters)
        .into_iter()
        .chain(rotations(&inv.letters))
        .min()
        .expect("nonempty band")
}

fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    for period in 1..n {
        if n % period == 0 && (0..n).all(|i| letters[i] == letters[i % period]) {
            return true;
        }
    }
    false
}

/// Validity of a cyclic word as a band: cyclically composable and reduced,
/// both directions present, not a proper power, and every relation avoided
/// in the cyclic repetitions.
fn band_valid(quiver: &Quiver, words: &[Vec<ArrowId>], letters: &[Letter]) -> bool {
    let n = letters.len();
    if n == 0 {
        return false;
    }
    if !letters.iter().any(|l| l.inverse) || !letters.iter().any(|l| !l.inverse) {
        return false;
    }
    if letters[n - 1].target(quiver) != letters[0].source(quiver) {
        return false;
    }
    if is_proper_power(letters) {
        return false;
    }
    let max_word = words.iter().map(|w| w.len()).max().unwrap_or(1);
    let reps = max_word / n + 2;
    let repeated: Vec<Letter> = std::iter::repeat(letters.iter())
        .take(reps)
        .flatten()
        .cloned()
        .collect();
    letters_admissible(quiver, words, &repeated)
}

/// All bands of length at most `max_length`, modulo rotation and inversion.
pub fn enumerate_bands(p: &Presentation, max_length: usize) -> Result<Vec<BandWord>> {
    require_monomial(p)?;
    let quiver = p.quiver();
    let words = zero_words(p);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();

    // Depth-first over open walks, closing them into cycles when possible.
    fn extend(
        quiver: &Quiver,
        words: &[Vec<ArrowId>],
        max_length: usize,
        prefix: &mut Vec<Letter>,
        seen: &mut std::collections::BTreeSet<Vec<Letter>>,
        out: &mut Vec<BandWord>,
    ) {
        if !prefix.is_empty()
            && prefix[prefix.len() - 1].target(quiver) == prefix[0].source(quiver)
            && band_valid(quiver, words, prefix)
        {
            let canon = canonical_band(quiver, prefix);
            if seen.insert(canon.clone()) {
                out.push(BandWord { letters: canon });
            }
        }
        if prefix.len() == max_length {
            return;
        }
        let arrows: Vec<ArrowId> = quiver.ordinary_arrows().map(|a| a.id.clone()).collect();
        for arrow in arrows {
            for inverse in [false, true] {
                let letter = Letter {
                    arrow: arrow.clone(),
                    inverse,
                };
                if let Some(last) = prefix.last() {
                    if letter.source(quiver) != last.target(quiver) {
                        continue;
                    }
                }
                prefix.push(letter);
                if letters_admissible(quiver, words, prefix) {
                    extend(quiver, words, max_length, prefix, seen, out);
                }
                prefix.pop();
            }
        }
    }

    // Start walks from every vertex (the empty prefix fixes no start, so we
    // root the search at each possible first letter instead).
    let mut prefix = Vec::new();
    extend(quiver, &words, max_length, &mut prefix, &mut seen, &mut out);
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// The string module of a word: basis z_0..z_n along the walk, direct
/// letters acting by z_{i-1} ↦ z_i, inverse letters by z_i ↦ z_{i-1}.
pub fn string_module(
    p: &Arc<Presentation>,
    w: &StringWord,
    field: FieldSpec,
) -> Result<Representation> {
    require_monomial(p)?;
    let quiver = p.quiver();
    if !letters_admissible(quiver, &zero_words(p), &w.letters) {
        return Err(Error::Invalid(format!("invalid string word `{}`", w.render())));
    }
    if let Some(first) = w.letters.first() {
        if first.source(quiver) != &w.source {
            return Err(Error::Invalid("string source mismatch".into()));
        }
    }
    if !quiver.has_vertex(&w.source) {
        return Err(Error::Invalid(format!("unknown vertex `{}`", w.source)));
    }
    let visited = w.visited(quiver);
    build_walk_module(p, field, &visited, &w.letters, None)
}

/// The band module of a band word at parameter λ ≠ 0, multiplicity one: the
/// cyclic basis shifts by identity except the first direct letter of the
/// canonical rotation, which acts by λ.
pub fn band_module(
    p: &Arc<Presentation>,
    w: &BandWord,
    field: FieldSpec,
    lambda: &Scalar,
) -> Result<Representation> {
    require_monomial(p)?;
    let quiver = p.quiver();
    if field.is_zero(lambda) {
        return Err(Error::Invalid("band parameter λ must be nonzero".into()));
    }
    if !band_valid(quiver, &zero_words(p), &w.letters) {
        return Err(Error::Invalid(format!("invalid band word `{}`", w.render())));
    }
    let visited = w.visited(quiver);
    let special = w
        .letters
        .iter()
        .position(|l| !l.inverse)
        .expect("bands contain a direct letter");
    build_walk_module(p, field, &visited, &w.letters, Some((special, lambda.clone())))
}

/// Common construction for string and band modules. For strings, `visited`
/// has one more entry than `letters` and basis indices are 0..=n; for bands
/// the walk is cyclic with indices mod n. `scaled` marks one letter whose
/// action is multiplied by λ.
fn build_walk_module(
    p: &Arc<Presentation>,
    field: FieldSpec,
    visited: &[VertexId],
    letters: &[Letter],
    scaled: Option<(usize, Scalar)>,
) -> Result<Representation> {
    let quiver = p.quiver();
    let cyclic = visited.len() == letters.len();
    let basis_count = visited.len();

    // Index of each basis point within its vertex component.
    let mut per_vertex: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut slot: Vec<usize> = Vec::with_capacity(basis_count);
    for v in visited {
        let c = per_vertex.entry(v.clone()).or_insert(0);
        slot.push(*c);
        *c += 1;
    }
    let mut dims: BTreeMap<VertexId, usize> = quiver
        .vertices()
        .iter()
        .map(|v| (v.clone(), 0))
        .collect();
    for (v, c) in &per_vertex {
        *dims.get_mut(v).expect("declared vertex") = *c;
    }
    let dims = DimensionVector::new(quiver, dims)?;

    let mut mats: BTreeMap<ArrowId, Matrix> = quiver
        .arrows()
        .iter()
        .map(|a| {
            (
                a.id.clone(),
                Matrix::zero(field, dims.get(&a.head), dims.get(&a.tail)),
            )
        })
        .collect();

    for (i, letter) in letters.iter().enumerate() {
        let from = i;
        let to = if cyclic { (i + 1) % basis_count } else { i + 1 };
        let coeff = match &scaled {
            Some((idx, lambda)) if *idx == i => lambda.clone(),
            _ => field.one(),
        };
        let m = mats.get_mut(&letter.arrow).expect("letter arrow declared");
        // Direct letters map the walk forwards, inverse letters backwards.
        let (src, dst) = if letter.inverse { (to, from) } else { (from, to) };
        let entry = field.add(m.get(slot[dst], slot[src]), &coeff);
        m.set(slot[dst], slot[src], entry);
    }

    Representation::new(p.clone(), field, dims, mats)
}
