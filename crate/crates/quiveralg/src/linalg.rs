//! Exact dense linear algebra over Q and prime fields.
//!
//! No floating point anywhere: rationals are arbitrary-precision, prime-field
//! elements are reduced residues. All eliminations pick the pivot with the
//! lowest row/column index, so every result is deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation: Q or F_p.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses `Q` or `F<p>` (e.g. `F2`).
    pub fn parse(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = s.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime(p);
            }
        }
        Err(Error::Invalid(format!(
            "unknown field `{s}`, expected `Q` or `F<p>`"
        )))
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".into(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let p = *p as i128;
                Scalar::Mod(((n as i128 % p + p) % p) as u64)
            }
        }
    }

    /// Maps a rational into the field; over F_p the denominator must be
    /// invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(q.clone())),
            FieldSpec::Prime(p) => {
                let p_big = BigInt::from(*p);
                let num = q.numer().mod_floor_u64(&p_big);
                let den = q.denom().mod_floor_u64(&p_big);
                let den_inv = mod_inverse(den, *p).ok_or_else(|| {
                    Error::Invalid(format!(
                        "denominator of {q} is not invertible modulo {p}"
                    ))
                })?;
                Ok(Scalar::Mod(mod_mul(num, den_inv, *p)))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            _ => panic!("scalar/field mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + p - y) % p)
            }
            _ => panic!("scalar/field mismatch in sub"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(mod_mul(*x, *y, *p))
            }
            _ => panic!("scalar/field mismatch in mul"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            _ => panic!("scalar/field mismatch in neg"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            (FieldSpec::Prime(p), Scalar::Mod(x)) => mod_inverse(*x, *p).map(Scalar::Mod),
            _ => panic!("scalar/field mismatch in inv"),
        }
    }

    /// All field elements, for brute-force enumeration. Only prime fields.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => Err(Error::Unsupported(
                "cannot enumerate the rationals".into(),
            )),
            FieldSpec::Prime(p) => Ok((0..*p).map(Scalar::Mod).collect()),
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: &BigInt) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: &BigInt) -> u64 {
        let mut r = self % p;
        if r.is_negative() {
            r += p;
        }
        let digits = r.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // Extended Euclid on (a, p).
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    let p = p as i128;
    Some(((old_s % p + p) % p) as u64)
}

/// A field element: a rational or a residue. The interpretation of `Mod`
/// values is given by the `FieldSpec` of the surrounding matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

/// Dense matrix over a fixed field, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Invalid("ragged matrix rows".into()));
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut entry: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in matrix add");
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in matrix add"
        );
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.field.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in matrix sub");
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch in matrix sub"
        );
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.field.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.field.mul(c, self.get(i, j))
        })
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in matrix mul");
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matrix mul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field;
        Matrix::from_fn(f, self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        })
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            acc = self.field.add(&acc, self.get(i, i));
        }
        acc
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    /// Pivots are chosen at the lowest available row index per column.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let pivot_row = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col)));
            let pivot_row = match pivot_row {
                Some(r) => r,
                None => continue,
            };
            if pivot_row != row {
                for j in 0..self.cols {
                    self.data
                        .swap(pivot_row * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f
                .inv(self.get(row, col))
                .expect("nonzero pivot must be invertible");
            for j in col..self.cols {
                let v = f.mul(&inv, self.get(row, j));
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !f.is_zero(self.get(r, col)) {
                    let factor = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = f.sub(self.get(r, j), &f.mul(&factor, self.get(row, j)));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel, returned as the columns of an n×k matrix.
    /// Free columns are taken in ascending index order.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zero(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, f.neg(m.get(r, fc)));
            }
        }
        basis
    }

    /// Basis of the column space: the original columns at the pivot indices
    /// of the RREF (lowest-index pivot choice). Returns (basis, pivot cols).
    pub fn column_space_basis(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut basis = Matrix::zero(self.field, self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                basis.set(i, k, self.get(i, c).clone());
            }
        }
        (basis, pivots)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Invalid("cannot invert a non-square matrix".into()));
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = Matrix::zero(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Invalid("matrix is singular".into()));
        }
        Ok(Matrix::from_fn(f, n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// The block with rows in `[r0, r1)` and columns in `[c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 <= r1 && c0 <= c1);
        Matrix::from_fn(self.field, r1 - r0, c1 - c0, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Row vector at index `i`.
    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Is `row` in the row span of `rref`? `rref` must be in reduced row echelon
/// form with the given pivot columns.
pub fn row_in_span(rref: &Matrix, pivots: &[usize], row: &[Scalar]) -> bool {
    let f = rref.field();
    let mut v: Vec<Scalar> = row.to_vec();
    for (r, &pc) in pivots.iter().enumerate() {
        if !f.is_zero(&v[pc]) {
            let factor = v[pc].clone();
            for j in 0..v.len() {
                let delta = f.mul(&factor, rref.get(r, j));
                v[j] = f.sub(&v[j], &delta);
            }
        }
    }
    v.iter().all(|x| f.is_zero(x))
}

/// All subspaces of F_p^n, each as its reduced-row-echelon basis (rows).
/// A zero-dimensional subspace is the 0×n matrix.
pub fn enumerate_subspaces(p: u64, n: usize) -> Result<Vec<Matrix>> {
    let field = FieldSpec::prime(p)?;
    let mut out = Vec::new();
    for r in 0..=n {
        for pivot_cols in combinations(n, r) {
            // Free entries of the RREF: (i, j) with j > pivot_cols[i] and j
            // not itself a pivot column.
            let mut free_slots = Vec::new();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                for j in (pc + 1)..n {
                    if !pivot_cols.contains(&j) {
                        free_slots.push((i, j));
                    }
                }
            }
            let elems = field.elements()?;
            let mut assignment = vec![0usize; free_slots.len()];
            loop {
                let mut m = Matrix::zero(field, r, n);
                for (i, &pc) in pivot_cols.iter().enumerate() {
                    m.set(i, pc, field.one());
                }
                for (slot, &(i, j)) in free_slots.iter().enumerate() {
                    m.set(i, j, elems[assignment[slot]].clone());
                }
                out.push(m);
                // Odometer over assignments.
                let mut k = 0;
                loop {
                    if k == assignment.len() {
                        break;
                    }
                    assignment[k] += 1;
                    if assignment[k] < elems.len() {
                        break;
                    }
                    assignment[k] = 0;
                    k += 1;
                }
                if assignment.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, r, current, out);
            current.pop();
        }
    }
    rec(0, n, r, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Scalar {
        FieldSpec::Rationals.from_i64(n)
    }

    #[test]
    fn rref_and_rank_over_q() {
        let f = FieldSpec::Rationals;
        let m = Matrix::from_rows(
            f,
            vec![
                vec![rat(1), rat(2), rat(3)],
                vec![rat(2), rat(4), rat(6)],
                vec![rat(1), rat(0), rat(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn rank_over_f2() {
        let f = FieldSpec::prime(2).unwrap();
        let m = Matrix::from_rows(
            f,
            vec![
                vec![Scalar::Mod(1), Scalar::Mod(1)],
                vec![Scalar::Mod(1), Scalar::Mod(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn inverse_round_trips() {
        let f = FieldSpec::prime(3).unwrap();
        let m = Matrix::from_rows(
            f,
            vec![
                vec![Scalar::Mod(1), Scalar::Mod(2)],
                vec![Scalar::Mod(1), Scalar::Mod(1)],
            ],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let f = FieldSpec::Rationals;
        let m = Matrix::zero(f, 2, 2);
        assert!(m.inverse().is_err());
    }

    #[test]
    fn column_space_basis_uses_lowest_pivots() {
        let f = FieldSpec::Rationals;
        // E = diag(1, 0): column space basis must be the first column.
        let mut e = Matrix::zero(f, 2, 2);
        e.set(0, 0, rat(1));
        let (basis, pivots) = e.column_space_basis();
        assert_eq!(pivots, vec![0]);
        assert_eq!(basis.cols(), 1);
        assert_eq!(basis.get(0, 0), &rat(1));
        assert_eq!(basis.get(1, 0), &rat(0));
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // F_2^2: 1 + 3 + 1 subspaces; F_3^2: 1 + 4 + 1.
        assert_eq!(enumerate_subspaces(2, 2).unwrap().len(), 5);
        assert_eq!(enumerate_subspaces(3, 2).unwrap().len(), 6);
        // F_2^3: 1 + 7 + 7 + 1.
        assert_eq!(enumerate_subspaces(2, 3).unwrap().len(), 16);
    }

    #[test]
    fn row_span_membership() {
        let f = FieldSpec::prime(2).unwrap();
        let mut m = Matrix::from_rows(
            f,
            vec![vec![Scalar::Mod(1), Scalar::Mod(1), Scalar::Mod(0)]],
        )
        .unwrap();
        let pivots = m.rref_in_place();
        assert!(row_in_span(
            &m,
            &pivots,
            &[Scalar::Mod(1), Scalar::Mod(1), Scalar::Mod(0)]
        ));
        assert!(!row_in_span(
            &m,
            &pivots,
            &[Scalar::Mod(1), Scalar::Mod(0), Scalar::Mod(0)]
        ));
    }

    #[test]
    fn from_rational_reduces_mod_p() {
        let f = FieldSpec::prime(3).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        // 1/2 = 2 mod 3.
        assert_eq!(f.from_rational(&half).unwrap(), Scalar::Mod(2));
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(f.from_rational(&third).is_err());
    }
}
