//! Lie algebras given by structure constants, their modules and homomorphisms.
//!
//! All constructors validate eagerly: antisymmetry and the Jacobi identity for
//! algebras, the homomorphism property for actions and maps.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linear::{
    axpy, kernel_basis, quotient_map, quotient_section, sub_vectors, unit_vector, zero_vector,
    Matrix, Rational, Subspace,
};

/// Finite-dimensional Lie algebra with `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieAlgebra {
    dim: usize,
    structure: Vec<Rational>,
}

impl LieAlgebra {
    /// Validates a full structure-constant tensor, flattened as `c[(i*n + j)*n + k]`.
    pub fn new(dim: usize, structure: Vec<Rational>) -> Result<Self> {
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "structure-constant tensor",
                expected: dim * dim * dim,
                found: structure.len(),
            });
        }
        let algebra = LieAlgebra { dim, structure };
        algebra.check_antisymmetry()?;
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    /// Validates a nested tensor `c[i][j][k]`.
    pub fn from_tensor(tensor: &[Vec<Vec<Rational>>]) -> Result<Self> {
        let n = tensor.len();
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in tensor {
            if plane.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "structure-constant tensor",
                    expected: n,
                    found: plane.len(),
                });
            }
            for row in plane {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        context: "structure-constant tensor",
                        expected: n,
                        found: row.len(),
                    });
                }
                flat.extend(row.iter().cloned());
            }
        }
        LieAlgebra::new(n, flat)
    }

    /// Builds the algebra from the brackets of basis pairs `i < j`.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<Self> {
        let mut structure = vec![Rational::zero(); dim * dim * dim];
        for (i, j, value) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || value.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "bracket entry",
                    expected: dim,
                    found: value.len().max(i.max(j) + 1),
                });
            }
            for (k, c) in value.iter().enumerate() {
                structure[(i * dim + j) * dim + k] = c.clone();
                structure[(j * dim + i) * dim + k] = -c.clone();
            }
        }
        LieAlgebra::new(dim, structure)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            structure: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Flattened structure tensor.
    pub fn structure(&self) -> &[Rational] {
        &self.structure
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Zero::is_zero)
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.structure[start..start + self.dim]
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim, "bracket: first argument");
        assert_eq!(y.len(), self.dim, "bracket: second argument");
        let mut out = zero_vector(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                axpy(&mut out, &(xi * yj), self.bracket_basis(i, j));
            }
        }
        out
    }

    /// `ad(e_i)`: column `j` is `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |k, j| {
            self.structure_constant(i, j, k).clone()
        })
    }

    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = &out + &self.ad_basis(i).scale(xi);
            }
        }
        out
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let residual =
                        self.structure_constant(i, j, k) + self.structure_constant(j, i, k);
                    if !residual.is_zero() {
                        return Err(Error::AntisymmetryViolation { i, j, k, residual });
                    }
                }
            }
        }
        Ok(())
    }

    /// Cyclic sum `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let n = self.dim;
        let term = |a: usize, b: usize, c: usize| {
            self.bracket(self.bracket_basis(a, b), &unit_vector(n, c))
        };
        let mut out = term(i, j, k);
        for (x, y) in out.iter_mut().zip(term(j, k, i)) {
            *x += y;
        }
        for (x, y) in out.iter_mut().zip(term(k, i, j)) {
            *x += y;
        }
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let residual = self.jacobi_residual(i, j, k);
                    if residual.iter().any(|x| !x.is_zero()) {
                        return Err(Error::JacobiViolation { i, j, k, residual });
                    }
                }
            }
        }
        Ok(())
    }

    /// Center `{x : [x, .] = 0}`.
    pub fn center(&self) -> Subspace {
        // x in center iff ad(e_j) x = 0 for all j
        let parts: Vec<Matrix> = (0..self.dim).map(|j| self.ad_basis(j)).collect();
        kernel_basis(&Matrix::vstack_all(self.dim, &parts))
    }

    /// Whether `sub` is closed under the bracket.
    pub fn is_subalgebra(&self, sub: &Subspace) -> bool {
        let b = sub.basis_vectors();
        b.iter()
            .enumerate()
            .all(|(i, x)| b[i + 1..].iter().all(|y| sub.contains(&self.bracket(x, y))))
    }

    pub fn is_ideal(&self, sub: &Subspace) -> bool {
        sub.basis_vectors().iter().all(|x| {
            (0..self.dim).all(|j| sub.contains(&self.bracket(x, &unit_vector(self.dim, j))))
        })
    }

    /// The subalgebra spanned by `sub` in its canonical basis, with the inclusion map.
    pub fn subalgebra(&self, sub: &Subspace) -> Result<AlgebraHom> {
        let b = sub.basis_vectors();
        let k = b.len();
        let mut brackets = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let coords = sub
                    .coordinates(&self.bracket(&b[i], &b[j]))
                    .ok_or(Error::NotClosed { i, j })?;
                brackets.push((i, j, coords));
            }
        }
        let source = LieAlgebra::from_brackets(k, &brackets)?;
        Ok(AlgebraHom {
            source,
            target: self.clone(),
            matrix: sub.basis().clone(),
        })
    }

    /// Quotient by an ideal, using the canonical quotient map and section.
    pub fn quotient(&self, ideal: &Subspace) -> Result<QuotientAlgebra> {
        if !self.is_ideal(ideal) {
            return Err(Error::NotIdeal);
        }
        let projection = quotient_map(self.dim, ideal)?;
        let section = quotient_section(self.dim, ideal);
        let k = projection.rows();
        let lifts = section.columns();
        let mut brackets = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                brackets.push((i, j, projection.apply(&self.bracket(&lifts[i], &lifts[j]))));
            }
        }
        let algebra = LieAlgebra::from_brackets(k, &brackets)?;
        Ok(QuotientAlgebra {
            algebra,
            projection,
            section,
        })
    }

    /// Structure constants with respect to a new basis given as the columns of `basis`.
    pub fn change_basis(&self, basis: &Matrix) -> Result<LieAlgebra> {
        let inv = basis
            .inverse()
            .ok_or(Error::NotInvertible("change of basis"))?;
        let cols = basis.columns();
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                brackets.push((i, j, inv.apply(&self.bracket(&cols[i], &cols[j]))));
            }
        }
        LieAlgebra::from_brackets(n, &brackets)
    }

    /// Direct sum `self ⊕ other`, basis of `self` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        let mut structure = vec![Rational::zero(); n * n * n];
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    structure[(i * n + j) * n + k] = self.structure_constant(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    structure[((a + i) * n + a + j) * n + a + k] =
                        other.structure_constant(i, j, k).clone();
                }
            }
        }
        LieAlgebra { dim: n, structure }
    }
}

/// Validates a structure tensor given as nested vectors.
pub fn validate_lie_algebra(tensor: &[Vec<Vec<Rational>>]) -> Result<LieAlgebra> {
    LieAlgebra::from_tensor(tensor)
}

/// Result of [`LieAlgebra::quotient`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientAlgebra {
    pub algebra: LieAlgebra,
    /// `dim quotient x dim ambient`.
    pub projection: Matrix,
    /// Linear section, `dim ambient x dim quotient`.
    pub section: Matrix,
}

/// A representation `rho: h -> gl(V)` given by the matrices `rho(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Module {
    algebra: LieAlgebra,
    dim: usize,
    action: Vec<Matrix>,
}

impl Module {
    pub fn new(algebra: LieAlgebra, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                context: "number of action matrices",
                expected: algebra.dim(),
                found: action.len(),
            });
        }
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "action matrix size",
                    expected: dim,
                    found: if m.rows() != dim { m.rows() } else { m.cols() },
                });
            }
        }
        let module = Module {
            algebra,
            dim,
            action,
        };
        module.check_hom()?;
        Ok(module)
    }

    pub fn trivial(algebra: LieAlgebra, dim: usize) -> Self {
        let action = vec![Matrix::zeros(dim, dim); algebra.dim()];
        Module {
            algebra,
            dim,
            action,
        }
    }

    /// `rho([e_i,e_j]) - [rho(e_i), rho(e_j)]`.
    pub fn hom_residual(&self, i: usize, j: usize) -> Matrix {
        let lhs = self.rho(self.algebra.bracket_basis(i, j));
        &lhs - &self.action[i].commutator(&self.action[j])
    }

    fn check_hom(&self) -> Result<()> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in i + 1..n {
                let residual = self.hom_residual(i, j);
                if !residual.is_zero() {
                    return Err(Error::HomViolation { i, j, residual });
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.action
    }

    pub fn rho_basis(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    pub fn rho(&self, x: &[Rational]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (xi, m) in x.iter().zip(&self.action) {
            if !xi.is_zero() {
                out = &out + &m.scale(xi);
            }
        }
        out
    }

    /// `x . v`.
    pub fn act(&self, x: &[Rational], v: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.algebra.dim(), "act: algebra element");
        let mut out = zero_vector(self.dim);
        for (xi, m) in x.iter().zip(&self.action) {
            if !xi.is_zero() {
                axpy(&mut out, xi, &m.apply(v));
            }
        }
        out
    }

    pub fn act_basis(&self, i: usize, v: &[Rational]) -> Vec<Rational> {
        self.action[i].apply(v)
    }

    /// The module structure pulled back along `hom: g -> h`: `X.v = hom(X).v`.
    pub fn pullback(&self, hom: &AlgebraHom) -> Result<Module> {
        if hom.target() != &self.algebra {
            return Err(Error::DimensionMismatch {
                context: "pullback target algebra",
                expected: self.algebra.dim(),
                found: hom.target().dim(),
            });
        }
        let action = (0..hom.source().dim())
            .map(|i| self.rho(&hom.matrix().column(i)))
            .collect();
        Module::new(hom.source().clone(), self.dim, action)
    }

    /// Submodule spanned by `sub` (must be invariant), in its canonical basis.
    pub fn submodule(&self, sub: &Subspace) -> Result<Module> {
        let basis = sub.basis_vectors();
        let mut action = Vec::with_capacity(self.algebra.dim());
        for m in &self.action {
            let mut cols = Vec::with_capacity(basis.len());
            for b in &basis {
                let image = m.apply(b);
                cols.push(sub.coordinates(&image).ok_or_else(|| {
                    Error::InvariantViolation("subspace is not a submodule".into())
                })?);
            }
            action.push(Matrix::from_columns(basis.len(), &cols));
        }
        Module::new(self.algebra.clone(), basis.len(), action)
    }
}

/// Validates explicit action matrices.
pub fn validate_module(algebra: &LieAlgebra, action: Vec<Matrix>) -> Result<Module> {
    let dim = action.first().map_or(0, Matrix::rows);
    Module::new(algebra.clone(), dim, action)
}

/// The adjoint representation `rho(e_i) = ad(e_i)`.
pub fn adjoint_module(algebra: &LieAlgebra) -> Module {
    let action = (0..algebra.dim()).map(|i| algebra.ad_basis(i)).collect();
    Module {
        algebra: algebra.clone(),
        dim: algebra.dim(),
        action,
    }
}

/// Center of a Lie algebra.
pub fn center_of(algebra: &LieAlgebra) -> Subspace {
    algebra.center()
}

/// A bracket-preserving linear map `source -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraHom {
    source: LieAlgebra,
    target: LieAlgebra,
    /// `target.dim x source.dim`; column `i` is the image of `e_i`.
    matrix: Matrix,
}

impl AlgebraHom {
    pub fn new(matrix: Matrix, source: LieAlgebra, target: LieAlgebra) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                context: "homomorphism matrix",
                expected: target.dim() * source.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        let n = source.dim();
        let cols = matrix.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = matrix.apply(source.bracket_basis(i, j));
                let rhs = target.bracket(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Err(Error::BracketViolation { i, j });
                }
            }
        }
        Ok(AlgebraHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(algebra: &LieAlgebra) -> Self {
        AlgebraHom {
            source: algebra.clone(),
            target: algebra.clone(),
            matrix: Matrix::identity(algebra.dim()),
        }
    }

    pub fn zero(source: &LieAlgebra, target: &LieAlgebra) -> Self {
        AlgebraHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.apply(x)
    }

    pub fn image_of_basis(&self, i: usize) -> Vec<Rational> {
        self.matrix.column(i)
    }
}

/// Validates `zeta` as a homomorphism `source -> target`.
pub fn validate_hom(zeta: Matrix, source: &LieAlgebra, target: &LieAlgebra) -> Result<AlgebraHom> {
    AlgebraHom::new(zeta, source.clone(), target.clone())
}

/// Whether `m` preserves the brackets of `algebra` on all basis pairs;
/// returns the first failing pair.
pub fn automorphism_defect(algebra: &LieAlgebra, m: &Matrix) -> Option<(usize, usize)> {
    let n = algebra.dim();
    let cols = m.columns();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.apply(algebra.bracket_basis(i, j));
            let rhs = algebra.bracket(&cols[i], &cols[j]);
            if sub_vectors(&lhs, &rhs).iter().any(|x| !x.is_zero()) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::q;

    fn sl2() -> LieAlgebra {
        // e, f, h with [e,f] = h, [h,e] = 2e, [h,f] = -2f
        LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![q(0), q(0), q(1)]),
                (0, 2, vec![q(-2), q(0), q(0)]),
                (1, 2, vec![q(0), q(2), q(0)]),
            ],
        )
        .unwrap()
    }

    fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, vec![q(0), q(0), q(1)])]).unwrap()
    }

    #[test]
    fn validate_examples() {
        for n in 0..4 {
            assert!(LieAlgebra::new(n, vec![q(0); n * n * n]).is_ok());
        }
        sl2();
        let err = LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![q(1), q(0), q(0)]),
                (0, 2, vec![q(0), q(1), q(0)]),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::JacobiViolation { .. }), "{err:?}");
        let mut bad = vec![q(0); 8];
        // c[0][1][0] = 1 without the matching c[1][0][0]
        bad[2] = q(1);
        assert!(matches!(
            LieAlgebra::new(2, bad),
            Err(Error::AntisymmetryViolation {
                i: 0,
                j: 1,
                k: 0,
                ..
            })
        ));
    }

    #[test]
    fn module_examples() {
        let g = sl2();
        assert!(Module::new(g.clone(), 2, vec![Matrix::zeros(2, 2); 3]).is_ok());
        let ad = adjoint_module(&g);
        assert!(Module::new(g.clone(), 3, ad.action_matrices().to_vec()).is_ok());
        let err = validate_module(&g, vec![Matrix::identity(3); 3]).unwrap_err();
        assert!(matches!(err, Error::HomViolation { .. }));
    }

    #[test]
    fn adjoint_examples() {
        let ab = LieAlgebra::abelian(3);
        assert!(adjoint_module(&ab)
            .action_matrices()
            .iter()
            .all(Matrix::is_zero));
        // ad(h) e = 2e
        let ad_h = sl2().ad_basis(2);
        assert_eq!(ad_h.apply(&unit_vector(3, 0)), vec![q(2), q(0), q(0)]);
        let heis = heisenberg();
        assert_eq!(
            heis.ad_basis(0).apply(&unit_vector(3, 1)),
            unit_vector(3, 2)
        );
        assert!(heis
            .ad_basis(0)
            .apply(&unit_vector(3, 2))
            .iter()
            .all(Zero::is_zero));
    }

    #[test]
    fn center_examples() {
        assert_eq!(center_of(&LieAlgebra::abelian(3)), Subspace::full(3));
        assert_eq!(center_of(&sl2()).dim(), 0);
        assert_eq!(
            center_of(&heisenberg()),
            Subspace::span(3, &[unit_vector(3, 2)])
        );
    }

    #[test]
    fn hom_examples() {
        let g = sl2();
        let ab = LieAlgebra::abelian(3);
        assert!(validate_hom(Matrix::zeros(3, 3), &g, &ab).is_ok());
        assert!(validate_hom(Matrix::identity(3), &g, &g).is_ok());
        assert!(matches!(
            validate_hom(Matrix::identity(3), &g, &ab),
            Err(Error::BracketViolation { .. })
        ));
    }

    #[test]
    fn quotient_of_heisenberg_by_center_is_abelian() {
        let heis = heisenberg();
        let qa = heis.quotient(&heis.center()).unwrap();
        assert_eq!(qa.algebra, LieAlgebra::abelian(2));
        assert_eq!(&qa.projection * &qa.section, Matrix::identity(2));
    }

    #[test]
    fn change_basis_roundtrip() {
        let g = sl2();
        let b = Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]);
        let h = g.change_basis(&b).unwrap();
        let back = h.change_basis(&b.inverse().unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
