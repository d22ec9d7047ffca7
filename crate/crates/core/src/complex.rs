//! The Chevalley–Eilenberg complex `C^p(h, V)` in degrees 0 to 3.
//!
//! A `p`-cochain is stored by its values on strictly increasing basis tuples
//! `i_1 < ... < i_p`; values on other tuples follow from antisymmetry.
//! Conventions:
//!
//! * `(d v)(x) = x.v`
//! * `(d a)(x, y) = x.a(y) - y.a(x) - a([x, y])`
//! * `(d w)(x, y, z) = sum_cycl x.w(y, z) - sum_cycl w([x, y], z)`
//! * `(i_x c)(y, ...) = c(x, y, ...)`
//! * `(L_x c)(y, ...) = x.c(y, ...) - sum_k c(..., [x, y_k], ...)`
//!
//! These satisfy the Cartan formula `L_x = i_x d + d i_x`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::Module;
use crate::linear::{axpy, kernel_basis, quotient_map, zero_vector, Matrix, Rational, Subspace};

/// Highest degree a cochain may have.
pub const MAX_DEGREE: usize = 3;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing `p`-tuples of `0..n` in lexicographic order.
pub fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, p, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, p));
    go(n, p, 0, &mut Vec::with_capacity(p), &mut out);
    out
}

/// Lexicographic rank of a strictly increasing tuple.
fn tuple_rank(n: usize, tuple: &[usize]) -> usize {
    let p = tuple.len();
    let mut rank = 0;
    let mut prev: Option<usize> = None;
    for (i, &t) in tuple.iter().enumerate() {
        let from = prev.map_or(0, |x| x + 1);
        for v in from..t {
            rank += binomial(n - 1 - v, p - 1 - i);
        }
        prev = Some(t);
    }
    rank
}

/// Sorts `indices` in place and returns the permutation sign, or `None`
/// when an index repeats.
fn sort_with_sign(indices: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

/// An alternating `p`-linear map `h^p -> V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    algebra_dim: usize,
    module_dim: usize,
    coords: Vec<Rational>,
}

impl Cochain {
    pub fn zero(degree: usize, algebra_dim: usize, module_dim: usize) -> Self {
        assert!(
            degree <= MAX_DEGREE,
            "cochain degree {degree} exceeds {MAX_DEGREE}"
        );
        Cochain {
            degree,
            algebra_dim,
            module_dim,
            coords: zero_vector(binomial(algebra_dim, degree) * module_dim),
        }
    }

    /// Number of coordinates of a cochain of this shape.
    pub fn space_dim(degree: usize, algebra_dim: usize, module_dim: usize) -> usize {
        binomial(algebra_dim, degree) * module_dim
    }

    /// Cochain from its flat coordinates (tuple-major, module component minor).
    pub fn from_flat(
        degree: usize,
        algebra_dim: usize,
        module_dim: usize,
        coords: Vec<Rational>,
    ) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(degree));
        }
        let expected = Cochain::space_dim(degree, algebra_dim, module_dim);
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "cochain coordinates",
                expected,
                found: coords.len(),
            });
        }
        Ok(Cochain {
            degree,
            algebra_dim,
            module_dim,
            coords,
        })
    }

    /// Cochain whose value on each increasing tuple is `f(tuple)`.
    pub fn from_fn(
        degree: usize,
        algebra_dim: usize,
        module_dim: usize,
        mut f: impl FnMut(&[usize]) -> Vec<Rational>,
    ) -> Self {
        let mut c = Cochain::zero(degree, algebra_dim, module_dim);
        for (r, t) in increasing_tuples(algebra_dim, degree).iter().enumerate() {
            let value = f(t);
            assert_eq!(value.len(), module_dim, "cochain value length");
            c.coords[r * module_dim..(r + 1) * module_dim].clone_from_slice(&value);
        }
        c
    }

    /// The degree-0 cochain given by a vector.
    pub fn from_vector(algebra_dim: usize, v: Vec<Rational>) -> Self {
        Cochain {
            degree: 0,
            algebra_dim,
            module_dim: v.len(),
            coords: v,
        }
    }

    /// The 1-cochain `x -> m x` given by a `module_dim x algebra_dim` matrix.
    pub fn from_linear_map(m: &Matrix) -> Self {
        Cochain::from_fn(1, m.cols(), m.rows(), |t| m.column(t[0]))
    }

    /// For a 1-cochain, its matrix (column `i` is the value on `e_i`).
    pub fn to_linear_map(&self) -> Matrix {
        assert_eq!(self.degree, 1, "to_linear_map needs a 1-cochain");
        let cols: Vec<Vec<Rational>> = (0..self.algebra_dim).map(|i| self.value(&[i])).collect();
        Matrix::from_columns(self.module_dim, &cols)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn flat(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn slot(&self, rank: usize) -> &[Rational] {
        &self.coords[rank * self.module_dim..(rank + 1) * self.module_dim]
    }

    /// Value on a tuple of basis indices (any order, repeats allowed).
    pub fn value(&self, indices: &[usize]) -> Vec<Rational> {
        assert_eq!(indices.len(), self.degree, "value: arity");
        let mut sorted = indices.to_vec();
        match sort_with_sign(&mut sorted) {
            None => zero_vector(self.module_dim),
            Some(negative) => {
                let v = self.slot(tuple_rank(self.algebra_dim, &sorted));
                if negative {
                    v.iter().map(|x| -x).collect()
                } else {
                    v.to_vec()
                }
            }
        }
    }

    /// Adds `s * value(indices)` into `acc`.
    fn accumulate(&self, acc: &mut [Rational], s: &Rational, indices: &[usize]) {
        if s.is_zero() {
            return;
        }
        let mut sorted = indices.to_vec();
        if let Some(negative) = sort_with_sign(&mut sorted) {
            let v = self.slot(tuple_rank(self.algebra_dim, &sorted));
            if negative {
                axpy(acc, &-s, v);
            } else {
                axpy(acc, s, v);
            }
        }
    }

    /// Value with the vector `x` in slot `slot` and basis elements elsewhere.
    fn value_with_vector(&self, slot: usize, x: &[Rational], rest: &[usize]) -> Vec<Rational> {
        let mut acc = zero_vector(self.module_dim);
        let mut idx = Vec::with_capacity(self.degree);
        for (l, xl) in x.iter().enumerate() {
            if xl.is_zero() {
                continue;
            }
            idx.clear();
            idx.extend_from_slice(&rest[..slot]);
            idx.push(l);
            idx.extend_from_slice(&rest[slot..]);
            self.accumulate(&mut acc, xl, &idx);
        }
        acc
    }

    /// Multilinear evaluation on arbitrary algebra elements.
    pub fn eval(&self, args: &[&[Rational]]) -> Vec<Rational> {
        assert_eq!(args.len(), self.degree, "eval: arity");
        let mut acc = zero_vector(self.module_dim);
        let mut idx = vec![0usize; self.degree];
        self.eval_rec(args, 0, Rational::one(), &mut idx, &mut acc);
        acc
    }

    fn eval_rec(
        &self,
        args: &[&[Rational]],
        pos: usize,
        coeff: Rational,
        idx: &mut Vec<usize>,
        acc: &mut [Rational],
    ) {
        if pos == args.len() {
            self.accumulate(acc, &coeff, idx);
            return;
        }
        for (l, x) in args[pos].iter().enumerate() {
            if x.is_zero() || idx[..pos].contains(&l) {
                continue;
            }
            idx[pos] = l;
            self.eval_rec(args, pos + 1, &coeff * x, idx, acc);
        }
    }

    fn check_shape(&self, other: &Cochain) {
        assert_eq!(
            (self.degree, self.algebra_dim, self.module_dim),
            (other.degree, other.algebra_dim, other.module_dim),
            "cochain shapes differ"
        );
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.check_shape(other);
        Cochain {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.check_shape(other);
        Cochain {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Rational) -> Cochain {
        Cochain {
            coords: self.coords.iter().map(|x| s * x).collect(),
            ..self.clone()
        }
    }

    /// Applies a linear map `V -> W` to every value.
    pub fn map_values(&self, m: &Matrix) -> Cochain {
        assert_eq!(m.cols(), self.module_dim, "map_values: dimensions");
        let w = m.rows();
        let mut coords = Vec::with_capacity(self.coords.len() / self.module_dim.max(1) * w);
        for r in 0..binomial(self.algebra_dim, self.degree) {
            coords.extend(m.apply(self.slot(r)));
        }
        Cochain {
            degree: self.degree,
            algebra_dim: self.algebra_dim,
            module_dim: w,
            coords,
        }
    }

    /// Pullback along a linear map `g -> h` given as a `dim h x dim g` matrix.
    pub fn pullback(&self, m: &Matrix) -> Cochain {
        assert_eq!(m.rows(), self.algebra_dim, "pullback: dimensions");
        let cols = m.columns();
        Cochain::from_fn(self.degree, m.cols(), self.module_dim, |t| {
            let args: Vec<&[Rational]> = t.iter().map(|&i| cols[i].as_slice()).collect();
            self.eval(&args)
        })
    }
}

fn check_module_shape(module: &Module, c: &Cochain) -> Result<()> {
    if c.algebra_dim != module.algebra().dim() {
        return Err(Error::DimensionMismatch {
            context: "cochain algebra dimension",
            expected: module.algebra().dim(),
            found: c.algebra_dim,
        });
    }
    if c.module_dim != module.dim() {
        return Err(Error::DimensionMismatch {
            context: "cochain module dimension",
            expected: module.dim(),
            found: c.module_dim,
        });
    }
    Ok(())
}

/// The Chevalley–Eilenberg differential `C^p -> C^(p+1)` for `p <= 2`.
pub fn differential(module: &Module, c: &Cochain) -> Result<Cochain> {
    check_module_shape(module, c)?;
    let p = c.degree;
    if p >= MAX_DEGREE {
        return Err(Error::UnsupportedDegree(p));
    }
    let algebra = module.algebra();
    let n = algebra.dim();
    Ok(Cochain::from_fn(p + 1, n, module.dim(), |t| {
        let mut acc = zero_vector(module.dim());
        let mut rest = Vec::with_capacity(p);
        for i in 0..=p {
            rest.clear();
            rest.extend(
                t.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &x)| x),
            );
            let v = c.value(&rest);
            let sign = if i % 2 == 0 {
                Rational::one()
            } else {
                -Rational::one()
            };
            axpy(&mut acc, &sign, &module.act_basis(t[i], &v));
        }
        for i in 0..=p {
            for j in i + 1..=p {
                rest.clear();
                rest.extend(
                    t.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &x)| x),
                );
                let bracket = algebra.bracket_basis(t[i], t[j]);
                let v = c.value_with_vector(0, bracket, &rest);
                let sign = if (i + j) % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                axpy(&mut acc, &sign, &v);
            }
        }
        acc
    }))
}

/// Contraction `(i_x c)(y, ...) = c(x, y, ...)`.
pub fn contract(xi: &[Rational], c: &Cochain) -> Result<Cochain> {
    if c.degree == 0 {
        return Err(Error::DegreeZero);
    }
    if xi.len() != c.algebra_dim {
        return Err(Error::DimensionMismatch {
            context: "contraction vector",
            expected: c.algebra_dim,
            found: xi.len(),
        });
    }
    Ok(Cochain::from_fn(
        c.degree - 1,
        c.algebra_dim,
        c.module_dim,
        |t| c.value_with_vector(0, xi, t),
    ))
}

/// Lie derivative `(L_x c)(y, ...) = x.c(y, ...) - sum_k c(..., [x, y_k], ...)`.
pub fn lie_derivative(module: &Module, xi: &[Rational], c: &Cochain) -> Result<Cochain> {
    check_module_shape(module, c)?;
    if xi.len() != c.algebra_dim {
        return Err(Error::DimensionMismatch {
            context: "Lie derivative vector",
            expected: c.algebra_dim,
            found: xi.len(),
        });
    }
    let algebra = module.algebra();
    let n = algebra.dim();
    let action = module.rho(xi);
    let ad = algebra.ad(xi);
    Ok(Cochain::from_fn(c.degree, n, module.dim(), |t| {
        let mut acc = action.apply(&c.value(t));
        for k in 0..t.len() {
            let moved = ad.column(t[k]);
            let mut rest = t.to_vec();
            rest.remove(k);
            let v = c.value_with_vector(k, &moved, &rest);
            axpy(&mut acc, &-Rational::one(), &v);
        }
        acc
    }))
}

/// Matrix of a linear map `C^p -> C^q` obtained by applying `f` to the basis cochains.
pub fn cochain_map_matrix(
    degree: usize,
    algebra_dim: usize,
    module_dim: usize,
    mut f: impl FnMut(&Cochain) -> Cochain,
) -> Matrix {
    let dim = Cochain::space_dim(degree, algebra_dim, module_dim);
    let mut cols = Vec::with_capacity(dim);
    let mut rows = 0;
    for i in 0..dim {
        let mut basis = Cochain::zero(degree, algebra_dim, module_dim);
        basis.coords[i] = Rational::one();
        let image = f(&basis);
        rows = image.coords.len();
        cols.push(image.coords);
    }
    if dim == 0 {
        // shape of the (empty) image still matters for stacking
        rows = f(&Cochain::zero(degree, algebra_dim, module_dim))
            .coords
            .len();
    }
    Matrix::from_columns(rows, &cols)
}

/// Matrix of `d: C^p -> C^(p+1)`.
pub fn differential_matrix(module: &Module, degree: usize) -> Result<Matrix> {
    if degree >= MAX_DEGREE {
        return Err(Error::UnsupportedDegree(degree));
    }
    let n = module.algebra().dim();
    Ok(cochain_map_matrix(degree, n, module.dim(), |c| {
        differential(module, c).expect("shape checked")
    }))
}

/// Invariant vectors `V^h = {v : x.v = 0 for all x}`.
pub fn invariant_vectors(module: &Module) -> Subspace {
    kernel_basis(&Matrix::vstack_all(module.dim(), module.action_matrices()))
}

/// `H^p(h, V) = Z^p / B^p` with an explicit quotient map.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologySpace {
    pub degree: usize,
    /// `Z^p` inside the flat coordinate space of `C^p`.
    pub cocycles: Subspace,
    /// `B^p` inside the same space.
    pub coboundaries: Subspace,
    /// Map from coordinates in the canonical basis of `Z^p` onto `H^p`.
    pub quotient: Matrix,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.quotient.rows()
    }

    /// Class of a cocycle in `H^p`.
    pub fn class_of(&self, c: &Cochain) -> Result<Vec<Rational>> {
        if c.degree != self.degree {
            return Err(Error::DimensionMismatch {
                context: "cohomology class degree",
                expected: self.degree,
                found: c.degree,
            });
        }
        let coords = self
            .cocycles
            .coordinates(&c.coords)
            .ok_or_else(|| Error::InvariantViolation("cochain is not a cocycle".into()))?;
        Ok(self.quotient.apply(&coords))
    }

    pub fn is_trivial_class(&self, c: &Cochain) -> Result<bool> {
        Ok(self.class_of(c)?.iter().all(Zero::is_zero))
    }
}

/// Cohomology in degree 0, 1 or 2.
pub fn cohomology(module: &Module, degree: usize) -> Result<CohomologySpace> {
    if degree > 2 {
        return Err(Error::UnsupportedDegree(degree));
    }
    let n = module.algebra().dim();
    let m = module.dim();
    let cocycles = kernel_basis(&differential_matrix(module, degree)?);
    let coboundaries = if degree == 0 {
        Subspace::zero(m)
    } else {
        Subspace::column_space(&differential_matrix(module, degree - 1)?)
    };
    debug_assert_eq!(cocycles.ambient_dim(), Cochain::space_dim(degree, n, m));
    let in_cocycle_coords: Vec<Vec<Rational>> = coboundaries
        .basis_vectors()
        .iter()
        .map(|b| {
            cocycles
                .coordinates(b)
                .ok_or_else(|| Error::IdentityFailure("coboundary outside cocycles".into()))
        })
        .collect::<Result<_>>()?;
    let b_in_z = Subspace::span(cocycles.dim(), &in_cocycle_coords);
    let quotient = quotient_map(cocycles.dim(), &b_in_z)?;
    Ok(CohomologySpace {
        degree,
        cocycles,
        coboundaries,
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{adjoint_module, LieAlgebra};
    use crate::linear::{q, unit_vector};

    #[test]
    fn tuple_ranks_match_enumeration() {
        for n in 0..6 {
            for p in 0..=3 {
                for (r, t) in increasing_tuples(n, p).iter().enumerate() {
                    assert_eq!(tuple_rank(n, t), r);
                }
                assert_eq!(increasing_tuples(n, p).len(), binomial(n, p));
            }
        }
    }

    #[test]
    fn antisymmetric_access() {
        let c = Cochain::from_fn(2, 3, 1, |t| vec![q((t[0] * 3 + t[1]) as i64)]);
        assert_eq!(c.value(&[0, 2]), vec![q(2)]);
        assert_eq!(c.value(&[2, 0]), vec![q(-2)]);
        assert_eq!(c.value(&[1, 1]), vec![q(0)]);
    }

    #[test]
    fn eval_is_multilinear() {
        let c = Cochain::from_fn(2, 3, 1, |t| vec![q((t[0] + 2 * t[1]) as i64)]);
        let x = vec![q(1), q(2), q(0)];
        let y = vec![q(0), q(1), q(-1)];
        // direct: sum_{i != j} x_i y_j c(i,j)
        let mut direct = q(0);
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                direct += xi * yj * &c.value(&[i, j])[0];
            }
        }
        assert_eq!(c.eval(&[&x, &y]), vec![direct]);
    }

    #[test]
    fn contract_degree_zero_fails() {
        let c = Cochain::from_vector(2, vec![q(1)]);
        assert_eq!(contract(&[q(1), q(0)], &c), Err(Error::DegreeZero));
    }

    #[test]
    fn differential_of_degree_three_fails() {
        let h = LieAlgebra::abelian(3);
        let module = adjoint_module(&h);
        let c = Cochain::zero(3, 3, 3);
        assert_eq!(differential(&module, &c), Err(Error::UnsupportedDegree(3)));
    }

    #[test]
    fn abelian_trivial_h1_is_everything() {
        let h = LieAlgebra::abelian(3);
        let module = Module::trivial(h, 2);
        let h1 = cohomology(&module, 1).unwrap();
        assert_eq!(h1.dim(), 6);
        let h0 = cohomology(&module, 0).unwrap();
        assert_eq!(h0.dim(), invariant_vectors(&module).dim());
    }

    #[test]
    fn heisenberg_invariants() {
        let heis = LieAlgebra::from_brackets(3, &[(0, 1, vec![q(0), q(0), q(1)])]).unwrap();
        let module = adjoint_module(&heis);
        assert_eq!(
            invariant_vectors(&module),
            Subspace::span(3, &[unit_vector(3, 2)])
        );
    }
}
