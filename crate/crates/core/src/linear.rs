//! Exact dense linear algebra over the rationals.
//!
//! Everything downstream (kernels of contraction maps, cohomology quotients,
//! lifts of admissible vectors) reduces to the handful of operations here:
//! row reduction, kernels, affine solves, quotient maps and intersections.
//! Subspaces are stored in a canonical form so that two subspaces are equal
//! exactly when their representations are equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators and stray whitespace.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    if text.is_empty() || text.trim() != text {
        return Err(format!("malformed rational {text:?}"));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("malformed numerator in {text:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("malformed denominator in {text:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn zero_vector(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(s: &Rational, v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| s * x).collect()
}

/// `acc += s * v`, skipping the work when `s` is zero.
pub fn axpy(acc: &mut [Rational], s: &Rational, v: &[Rational]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

/// Serializes a rational vector as canonical strings.
pub fn serialize_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows. `cols` is needed to disambiguate the
    /// zero-row case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |r, c| q(rows[r][c]))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        for c in columns {
            assert_eq!(c.len(), rows, "column length");
        }
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| s * x).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "apply: vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack: row counts");
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack: column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Stacks a list of matrices vertically; all must have `cols` columns.
    pub fn vstack_all(cols: usize, parts: &[Matrix]) -> Matrix {
        let mut out = Matrix::zeros(0, cols);
        for p in parts {
            out = out.vstack(p);
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref_with_pivots(self).1.len()
    }

    /// Exact inverse, or `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = rref_with_pivots(&self.hstack(&Matrix::identity(n)));
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product: inner dimensions");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: add_vectors(&self.data, &rhs.data),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: sub_vectors(&self.data, &rhs.data),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref_with_pivots(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows = m.row_vectors();
    let ncols = m.cols;
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == rows.len() {
            break;
        }
        // prefer the simplest nonzero entry to limit coefficient growth
        let found = (pivot_row..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].denom().bits() + rows[r][col].numer().bits());
        let Some(r) = found else { continue };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        if !inv.is_one() {
            for x in rows[pivot_row].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (col..ncols)
            .filter(|&c| !rows[pivot_row][c].is_zero())
            .collect();
        let prow = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &c in &support {
                let delta = &factor * &prow[c];
                row[c] -= delta;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let out = Matrix::from_rows(rows, ncols).expect("rows keep their width");
    (out, pivots)
}

/// Reduced row echelon form.
pub fn rref(m: &Matrix) -> Matrix {
    rref_with_pivots(m).0
}

/// A linear subspace of `Q^ambient`, stored canonically.
///
/// The basis columns are the nonzero rows of the reduced row echelon form of
/// any spanning set, i.e. the basis matrix is in reduced column echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: ", self.dim(), self.ambient)?;
        for v in self.basis_vectors() {
            let s: Vec<String> = v.iter().map(format_rational).collect();
            write!(f, "({})", s.join(", "))?;
        }
        write!(f, ")")
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let m = Matrix::from_fn(vectors.len(), ambient, |r, c| vectors[r][c].clone());
        Subspace::row_space(&m)
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (r, pivots) = rref_with_pivots(m);
        let k = pivots.len();
        let basis = Matrix::from_fn(m.cols(), k, |row, col| r.get(col, row).clone());
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    /// Span of the columns of `m` (the image of `m`).
    pub fn column_space(m: &Matrix) -> Self {
        Subspace::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Basis matrix (`ambient x dim`), columns are the canonical basis.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "coordinates: vector length");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.basis.apply(&coords);
        (back == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn vector(&self, coords: &[Rational]) -> Vec<Rational> {
        self.basis.apply(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "sum: ambient dimensions");
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vs)
    }

    /// Image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "image_under: dimensions");
        Subspace::column_space(&(m * &self.basis))
    }
}

/// Exact null space of `m` as a subspace of `Q^cols`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let n = m.cols();
    let (r, pivots) = rref_with_pivots(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = unit_vector(n, f);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect();
    Subspace::span(n, &vectors)
}

/// Solution set of an affine system `m x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    /// Canonical particular solution: free variables set to zero.
    pub particular: Vec<Rational>,
    pub kernel: Subspace,
}

/// Solves `m x = b` exactly; `Error::Unsolvable` when `b` is not in the image.
pub fn solve_affine(m: &Matrix, b: &[Rational]) -> Result<AffineSolution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_affine right-hand side",
            expected: m.rows(),
            found: b.len(),
        });
    }
    let n = m.cols();
    let augmented = m.hstack(&Matrix::from_columns(m.rows(), &[b.to_vec()]));
    let (r, pivots) = rref_with_pivots(&augmented);
    if pivots.last() == Some(&n) {
        return Err(Error::Unsolvable);
    }
    let mut x = zero_vector(n);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, n).clone();
    }
    Ok(AffineSolution {
        particular: x,
        kernel: kernel_basis(m),
    })
}

/// Surjection `Q^ambient -> Q^(ambient - dim sub)` whose kernel is exactly `sub`.
///
/// Reduces a vector modulo the canonical basis of `sub` and keeps the
/// non-pivot coordinates, so the unit vectors at non-pivot positions map to
/// the standard basis of the quotient.
pub fn quotient_map(ambient: usize, sub: &Subspace) -> Result<Matrix> {
    if sub.ambient_dim() != ambient {
        return Err(Error::DimensionMismatch {
            context: "quotient_map",
            expected: ambient,
            found: sub.ambient_dim(),
        });
    }
    let pivots = sub.pivots();
    let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
    // q(v)_f = v_f - sum_k v_{p_k} b_k[f]
    let mut out = Matrix::zeros(free.len(), ambient);
    for (row, &f) in free.iter().enumerate() {
        out.set(row, f, Rational::one());
        for (k, &p) in pivots.iter().enumerate() {
            let b = sub.basis().get(f, k);
            if !b.is_zero() {
                out.set(row, p, -b.clone());
            }
        }
    }
    Ok(out)
}

/// Linear section of `quotient_map(ambient, sub)`: unit vectors at the
/// non-pivot positions.
pub fn quotient_section(ambient: usize, sub: &Subspace) -> Matrix {
    let free: Vec<usize> = (0..ambient).filter(|c| !sub.pivots().contains(c)).collect();
    Matrix::from_fn(ambient, free.len(), |r, c| {
        if r == free[c] {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Exact intersection of two subspaces of the same ambient space.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "intersect",
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    // x in a ∩ b  <=>  x = A s = B t  <=>  [A | -B](s, t) = 0
    let system = a.basis().hstack(&-b.basis());
    let ker = kernel_basis(&system);
    let vs: Vec<Vec<Rational>> = ker
        .basis_vectors()
        .iter()
        .map(|st| a.vector(&st[..a.dim()]))
        .collect();
    Ok(Subspace::span(a.ambient_dim(), &vs))
}
