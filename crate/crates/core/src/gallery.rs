//! Worked examples and seeded random instances.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{differential, differential_matrix, Cochain};
use crate::error::{Error, Result};
use crate::ham::analyze;
use crate::lie::{adjoint_module, AlgebraHom, LieAlgebra, Module};
use crate::linear::{
    kernel_basis, q, sub_vectors, unit_vector, zero_vector, Matrix, Rational, Subspace,
};

/// Facts known in advance about an instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expected {
    pub sp: Option<usize>,
    pub ham: Option<usize>,
    pub rad: Option<usize>,
    pub h_omega: Option<usize>,
    pub v_h: Option<usize>,
    pub v_omega: Option<usize>,
    pub hat_ham: Option<usize>,
    /// Structure constants of the Poisson bracket on `V_omega = V`, in the basis of `V`.
    pub poisson: Option<LieAlgebra>,
}

/// A module, a 2-cochain and optionally a homomorphism into `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub module: Module,
    pub omega: Cochain,
    pub zeta: Option<AlgebraHom>,
    /// A 1-cochain `alpha` with `d alpha = omega`, when one is known.
    pub primitive: Option<Cochain>,
    pub expected: Expected,
}

impl InstanceBundle {
    pub fn new(
        module: Module,
        omega: Cochain,
        zeta: Option<AlgebraHom>,
        primitive: Option<Cochain>,
        expected: Expected,
    ) -> Result<Self> {
        let (n, m) = (module.algebra().dim(), module.dim());
        if omega.degree() != 2 || omega.algebra_dim() != n || omega.module_dim() != m {
            return Err(Error::DimensionMismatch {
                context: "omega shape",
                expected: Cochain::space_dim(2, n, m),
                found: omega.flat().len(),
            });
        }
        if let Some(z) = &zeta {
            if z.target() != module.algebra() {
                return Err(Error::DimensionMismatch {
                    context: "zeta target",
                    expected: n,
                    found: z.target().dim(),
                });
            }
        }
        if let Some(alpha) = &primitive {
            if differential(&module, alpha)? != omega {
                return Err(Error::NotPrimitive);
            }
        }
        Ok(InstanceBundle {
            module,
            omega,
            zeta,
            primitive,
            expected,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.module.algebra()
    }
}

/// Heisenberg algebra with basis `X, Y, Z` and `[X, Y] = Z`.
pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::from_brackets(3, &[(0, 1, vec![q(0), q(0), q(1)])]).expect("heisenberg")
}

/// Elementary-matrix basis of `sl_n`: the `E_ij` (`i != j`, row-major), then
/// `H_k = E_kk - E_(k+1)(k+1)`. For `n = 2` this is `e, f, h`.
pub fn sl_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::zeros(n, n);
                m.set(i, j, q(1));
                out.push(m);
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        let mut m = Matrix::zeros(n, n);
        m.set(k, k, q(1));
        m.set(k + 1, k + 1, q(-1));
        out.push(m);
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub fn sl_coordinates(m: &Matrix) -> Vec<Rational> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(m.get(i, j).clone());
            }
        }
    }
    // diag = sum_k c_k (E_kk - E_(k+1)(k+1))  =>  c_k = d_0 + ... + d_k
    let mut running = Rational::zero();
    for k in 0..n.saturating_sub(1) {
        running += m.get(k, k);
        out.push(running.clone());
    }
    out
}

/// Row-major flattening of a square matrix.
pub fn flatten(m: &Matrix) -> Vec<Rational> {
    (0..m.rows()).flat_map(|r| m.row(r).to_vec()).collect()
}

/// Inverse of [`flatten`].
pub fn unflatten(n: usize, v: &[Rational]) -> Matrix {
    Matrix::from_fn(n, n, |r, c| v[r * n + c].clone())
}

/// `sl_n` from the elementary-matrix basis.
pub fn sl(n: usize) -> LieAlgebra {
    let basis = sl_basis(n);
    let k = basis.len();
    let mut brackets = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            brackets.push((i, j, sl_coordinates(&basis[i].commutator(&basis[j]))));
        }
    }
    LieAlgebra::from_brackets(k, &brackets).expect("sl_n")
}

/// `sl_2` with basis `e, f, h`.
pub fn sl2() -> LieAlgebra {
    sl(2)
}

/// The commutator algebra `gl_n` on `M_n` in the row-major basis `E_ab`.
pub fn gl(n: usize) -> LieAlgebra {
    commutator_algebra(&matrix_algebra_table(n)).expect("gl_n")
}

/// Multiplication table of `M_n`: `E_ab E_cd = delta_bc E_ad`.
pub fn matrix_algebra_table(n: usize) -> AssociativeTable {
    let d = n * n;
    let mut table = vec![Rational::zero(); d * d * d];
    for a in 0..n {
        for b in 0..n {
            for d2 in 0..n {
                let i = a * n + b;
                let j = b * n + d2;
                let k = a * n + d2;
                table[(i * d + j) * d + k] = q(1);
            }
        }
    }
    AssociativeTable { dim: d, table }
}

/// `A = M_n`, `h = sl_n` acting by commutators and `omega(x, y) = [x, y]`.
///
/// The inclusion `sl_n -> M_n` is recorded as a primitive of `omega`, and
/// `zeta` is the identity of `sl_n`.
pub fn matrix_algebra_example(n: usize) -> Result<InstanceBundle> {
    if n < 2 {
        return Err(Error::DimensionMismatch {
            context: "matrix size",
            expected: 2,
            found: n,
        });
    }
    let h = sl(n);
    let basis = sl_basis(n);
    let k = basis.len();
    let m = n * n;
    let elementary: Vec<Matrix> = (0..m).map(|i| unflatten(n, &unit_vector(m, i))).collect();
    let action: Vec<Matrix> = basis
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Rational>> = elementary
                .iter()
                .map(|e| flatten(&x.commutator(e)))
                .collect();
            Matrix::from_columns(m, &cols)
        })
        .collect();
    let module = Module::new(h.clone(), m, action)?;
    let omega = Cochain::from_fn(2, k, m, |t| flatten(&basis[t[0]].commutator(&basis[t[1]])));
    let inclusion = Matrix::from_columns(m, &basis.iter().map(flatten).collect::<Vec<_>>());
    let primitive = Cochain::from_linear_map(&inclusion);
    let expected = Expected {
        sp: Some(k),
        ham: Some(k),
        rad: Some(0),
        h_omega: Some(k),
        v_h: Some(1),
        v_omega: Some(m),
        hat_ham: Some(m),
        poisson: Some(opposite(&gl(n))?),
    };
    InstanceBundle::new(
        module,
        omega,
        Some(AlgebraHom::identity(&h)),
        Some(primitive),
        expected,
    )
}

/// The same space with bracket `-[x, y]`; isomorphic to `algebra` through `x -> -x`.
pub fn opposite(algebra: &LieAlgebra) -> Result<LieAlgebra> {
    LieAlgebra::new(
        algebra.dim(),
        algebra.structure().iter().map(|c| -c).collect(),
    )
}

/// `V = hat_h` as a module over `h = hat_h / z` through the factored adjoint
/// action, with `omega(q(X), q(Y)) = -[X, Y]`.
pub fn from_central_extension(hat_h: &LieAlgebra, z: &Subspace) -> Result<InstanceBundle> {
    let center = hat_h.center();
    if z.ambient_dim() != hat_h.dim() || !center.contains_subspace(z) {
        return Err(Error::NotCentral);
    }
    let quotient = hat_h.quotient(z)?;
    let h = quotient.algebra.clone();
    let lifts = quotient.section.columns();
    let n = hat_h.dim();
    let action: Vec<Matrix> = lifts.iter().map(|x| hat_h.ad(x)).collect();
    let module = Module::new(h.clone(), n, action)?;
    let omega = Cochain::from_fn(2, h.dim(), n, |t| {
        hat_h
            .bracket(&lifts[t[0]], &lifts[t[1]])
            .iter()
            .map(|x| -x)
            .collect()
    });
    let rad = center.dim() - z.dim();
    let expected = Expected {
        sp: Some(h.dim()),
        ham: Some(h.dim()),
        rad: Some(rad),
        h_omega: Some(h.dim()),
        v_h: Some(center.dim()),
        v_omega: Some(n),
        hat_ham: Some(n + rad),
        poisson: Some(hat_h.clone()),
    };
    InstanceBundle::new(
        module,
        omega,
        Some(AlgebraHom::identity(&h)),
        None,
        expected,
    )
}

/// Structure constants `e_i e_j = sum_k m[i][j][k] e_k` of an associative algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociativeTable {
    pub dim: usize,
    /// Flattened as `m[(i*d + j)*d + k]`.
    pub table: Vec<Rational>,
}

impl AssociativeTable {
    pub fn multiply(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim;
        let mut out = zero_vector(d);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let m = &self.table[(i * d + j) * d + k];
                    if !m.is_zero() {
                        *o += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        sub_vectors(&self.multiply(a, b), &self.multiply(b, a))
    }

    fn check_associative(&self) -> Result<()> {
        let d = self.dim;
        if self.table.len() != d * d * d {
            return Err(Error::DimensionMismatch {
                context: "multiplication table",
                expected: d * d * d,
                found: self.table.len(),
            });
        }
        let e: Vec<Vec<Rational>> = (0..d).map(|i| unit_vector(d, i)).collect();
        for i in 0..d {
            for j in 0..d {
                let ij = self.multiply(&e[i], &e[j]);
                for k in 0..d {
                    let lhs = self.multiply(&ij, &e[k]);
                    let rhs = self.multiply(&e[i], &self.multiply(&e[j], &e[k]));
                    if lhs != rhs {
                        return Err(Error::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Lie algebra `(A, [a, b] = ab - ba)`.
pub fn commutator_algebra(table: &AssociativeTable) -> Result<LieAlgebra> {
    let d = table.dim;
    let e: Vec<Vec<Rational>> = (0..d).map(|i| unit_vector(d, i)).collect();
    let mut brackets = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            brackets.push((i, j, table.commutator(&e[i], &e[j])));
        }
    }
    LieAlgebra::from_brackets(d, &brackets)
}

/// Output of [`associative_algebra_example`].
#[derive(Debug, Clone, PartialEq)]
pub struct AssociativeExample {
    pub bundle: InstanceBundle,
    /// Center `z(A)`.
    pub center: Subspace,
    /// The canonical linear section `sigma: h -> A` as a 1-cochain.
    pub section: Cochain,
    /// `omega - d sigma`, a cocycle with values in `z(A)`.
    pub shifted: Cochain,
}

/// `h = A / z(A)` acting on `A` by inner derivations, with `omega([a], [b]) = [a, b]`.
pub fn associative_algebra_example(table: &AssociativeTable) -> Result<AssociativeExample> {
    table.check_associative()?;
    let lie = commutator_algebra(table)?;
    let center = lie.center();
    let quotient = lie.quotient(&center)?;
    let h = quotient.algebra.clone();
    let d = table.dim;
    let lifts = quotient.section.columns();
    let action: Vec<Matrix> = lifts.iter().map(|x| lie.ad(x)).collect();
    let module = Module::new(h.clone(), d, action)?;
    let omega = Cochain::from_fn(2, h.dim(), d, |t| {
        table.commutator(&lifts[t[0]], &lifts[t[1]])
    });
    let section = Cochain::from_linear_map(&quotient.section);
    let shifted = omega.sub(&differential(&module, &section)?);
    for t in crate::complex::increasing_tuples(h.dim(), 2) {
        if !center.contains(&shifted.value(&t)) {
            return Err(Error::IdentityFailure(
                "shifted cocycle leaves the center".into(),
            ));
        }
    }
    let expected = Expected {
        sp: Some(h.dim()),
        ham: Some(h.dim()),
        rad: Some(0),
        h_omega: Some(h.dim()),
        v_h: Some(center.dim()),
        v_omega: Some(d),
        hat_ham: Some(d),
        poisson: None,
    };
    let bundle = InstanceBundle::new(
        module,
        omega,
        Some(AlgebraHom::identity(&h)),
        None,
        expected,
    )?;
    Ok(AssociativeExample {
        bundle,
        center,
        section,
        shifted,
    })
}

/// Upper-triangular 2x2 matrices with basis `E11, E12, E22`.
pub fn upper_triangular_table() -> AssociativeTable {
    let full = matrix_algebra_table(2);
    // keep E11 (0), E12 (1), E22 (3)
    let keep = [0usize, 1, 3];
    let d = 3;
    let mut table = vec![Rational::zero(); d * d * d];
    for (i, &fi) in keep.iter().enumerate() {
        for (j, &fj) in keep.iter().enumerate() {
            for (k, &fk) in keep.iter().enumerate() {
                table[(i * d + j) * d + k] = full.table[(fi * 4 + fj) * 4 + fk].clone();
            }
        }
    }
    AssociativeTable { dim: d, table }
}

const ATTEMPTS: usize = 64;

fn small(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-2..=2))
}

fn nonzero_small(rng: &mut ChaCha8Rng) -> Rational {
    q(*[-2, -1, 1, 2].choose(rng).expect("nonempty"))
}

/// Random solvable Lie algebra of dimension `n`, drawn from strictly
/// triangular structure data (checked against Jacobi) or from a triangular
/// semidirect family `R ⋉ R^(n-1)`.
pub fn random_lie_algebra(n: usize, rng: &mut ChaCha8Rng) -> Result<LieAlgebra> {
    if n < 2 {
        return Ok(LieAlgebra::abelian(n));
    }
    if rng.gen_bool(0.5) {
        for _ in 0..ATTEMPTS {
            let mut brackets = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = zero_vector(n);
                    for slot in v.iter_mut().skip(j + 1) {
                        if rng.gen_bool(0.35) {
                            *slot = small(rng);
                        }
                    }
                    brackets.push((i, j, v));
                }
            }
            if let Ok(algebra) = LieAlgebra::from_brackets(n, &brackets) {
                if !algebra.is_abelian() {
                    return Ok(algebra);
                }
            }
        }
    }
    // [e_0, e_i] = D e_i with D upper triangular on span{e_1..}
    let mut brackets = Vec::new();
    for i in 1..n {
        let mut v = zero_vector(n);
        for (k, slot) in v.iter_mut().enumerate().take(i + 1).skip(1) {
            if k == i {
                *slot = nonzero_small(rng);
            } else if rng.gen_bool(0.5) {
                *slot = small(rng);
            }
        }
        brackets.push((0, i, v));
    }
    LieAlgebra::from_brackets(n, &brackets)
}

/// Random module of dimension `m`: a conjugated direct sum of trivial,
/// character, adjoint and coadjoint blocks.
pub fn random_module(algebra: &LieAlgebra, m: usize, rng: &mut ChaCha8Rng) -> Result<Module> {
    let n = algebra.dim();
    // characters vanish on the derived algebra
    let derived = Subspace::span(
        n,
        &(0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| algebra.bracket_basis(i, j).to_vec())
            .collect::<Vec<_>>(),
    );
    let characters = kernel_basis(&derived.basis().transpose());

    let mut blocks: Vec<Vec<Matrix>> = Vec::new();
    let mut used = 0;
    while used < m {
        let room = m - used;
        let mut kinds = vec![0u8, 1];
        if n > 0 && n <= room {
            kinds.extend([2u8, 3]);
        }
        let block = match *kinds.choose(rng).expect("nonempty") {
            0 => vec![Matrix::zeros(1, 1); n],
            1 => {
                let coeffs: Vec<Rational> = (0..characters.dim()).map(|_| small(rng)).collect();
                let lambda = characters.vector(&coeffs);
                lambda
                    .iter()
                    .map(|l| Matrix::from_fn(1, 1, |_, _| l.clone()))
                    .collect()
            }
            2 => (0..n).map(|i| algebra.ad_basis(i)).collect(),
            _ => (0..n).map(|i| -&algebra.ad_basis(i).transpose()).collect(),
        };
        used += block.first().map_or(1, Matrix::rows);
        blocks.push(block);
    }
    let mut action = vec![Matrix::zeros(m, m); n];
    let mut offset = 0;
    for block in &blocks {
        let size = block.first().map_or(1, Matrix::rows);
        for (i, b) in block.iter().enumerate() {
            for r in 0..size {
                for c in 0..size {
                    action[i].set(offset + r, offset + c, b.get(r, c).clone());
                }
            }
        }
        offset += size;
    }
    let mut p = Matrix::identity(m);
    for r in 0..m {
        for c in r + 1..m {
            if rng.gen_bool(0.4) {
                p.set(r, c, small(rng));
            }
        }
    }
    let p_inv = p.inverse().expect("unipotent");
    let action = action.iter().map(|a| &(&p * a) * &p_inv).collect();
    Module::new(algebra.clone(), m, action)
}

/// Random 2-cocycle: a small integer combination of a basis of `Z^2(h, V)`.
pub fn random_cocycle(module: &Module, rng: &mut ChaCha8Rng) -> Result<Cochain> {
    let n = module.algebra().dim();
    let m = module.dim();
    let z2 = kernel_basis(&differential_matrix(module, 2)?);
    let coeffs: Vec<Rational> = (0..z2.dim()).map(|_| small(rng)).collect();
    Cochain::from_flat(2, n, m, z2.vector(&coeffs))
}

/// Random 1-cochain.
pub fn random_cochain(degree: usize, module: &Module, rng: &mut ChaCha8Rng) -> Cochain {
    let n = module.algebra().dim();
    let m = module.dim();
    let coords = (0..Cochain::space_dim(degree, n, m))
        .map(|_| small(rng))
        .collect();
    Cochain::from_flat(degree, n, m, coords).expect("shape")
}

pub fn random_vector(len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..len).map(|_| small(rng)).collect()
}

/// A homomorphism into `ham`: either the inclusion of all of `ham` or of the
/// line through a random hamiltonian element. The zero map from a line when
/// `ham = 0`.
pub fn random_zeta(module: &Module, omega: &Cochain, rng: &mut ChaCha8Rng) -> Result<AlgebraHom> {
    let analysis = analyze(module, omega)?;
    let h = module.algebra();
    if analysis.ham.dim() == 0 {
        return Ok(AlgebraHom::zero(&LieAlgebra::abelian(1), h));
    }
    let sub = if analysis.ham.dim() == 1 || rng.gen_bool(0.5) {
        analysis.ham.clone()
    } else {
        let coeffs: Vec<Rational> = (0..analysis.ham.dim()).map(|_| small(rng)).collect();
        let x = analysis.ham.vector(&coeffs);
        if x.iter().all(Zero::is_zero) {
            analysis.ham.clone()
        } else {
            Subspace::span(h.dim(), &[x])
        }
    };
    h.subalgebra(&sub)
}

/// Deterministic random instance with `dim h = dims.0`, `dim V = dims.1`.
pub fn random_instance(dims: (usize, usize), seed: u64) -> Result<InstanceBundle> {
    let (n, m) = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let attempt = (|| -> Result<InstanceBundle> {
            let algebra = random_lie_algebra(n, &mut rng)?;
            let module = random_module(&algebra, m, &mut rng)?;
            let omega = random_cocycle(&module, &mut rng)?;
            let zeta = random_zeta(&module, &omega, &mut rng)?;
            InstanceBundle::new(module, omega, Some(zeta), None, Expected::default())
        })();
        if attempt.is_ok() {
            return attempt;
        }
    }
    Err(Error::GenerationFailed(ATTEMPTS))
}

/// The adjoint module with `omega = 0` and `zeta = 0`.
pub fn trivial_instance(algebra: &LieAlgebra) -> Result<InstanceBundle> {
    let module = adjoint_module(algebra);
    let omega = Cochain::zero(2, algebra.dim(), algebra.dim());
    InstanceBundle::new(
        module,
        omega,
        Some(AlgebraHom::zero(algebra, algebra)),
        None,
        Expected::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_has_the_standard_brackets() {
        let g = sl2();
        assert_eq!(g.bracket_basis(0, 1), &[q(0), q(0), q(1)]);
        assert_eq!(g.bracket_basis(2, 0), &[q(2), q(0), q(0)]);
        assert_eq!(g.bracket_basis(2, 1), &[q(0), q(-2), q(0)]);
    }

    #[test]
    fn sl_dims() {
        assert_eq!(sl(3).dim(), 8);
        assert_eq!(gl(2).dim(), 4);
    }

    #[test]
    fn random_instances_are_deterministic() {
        for seed in 0..5 {
            assert_eq!(random_instance((3, 3), seed), random_instance((3, 3), seed));
        }
    }

    #[test]
    fn one_dimensional_random_instance_has_zero_omega() {
        let b = random_instance((1, 1), 7).unwrap();
        assert!(b.omega.is_zero());
        assert!(b.algebra().is_abelian());
    }

    #[test]
    fn not_associative_is_detected() {
        let mut t = matrix_algebra_table(2);
        t.table[0] = q(2);
        assert!(matches!(
            associative_algebra_example(&t),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn non_central_subspace_is_rejected() {
        let heis = heisenberg();
        let z = Subspace::span(3, &[unit_vector(3, 0)]);
        assert_eq!(from_central_extension(&heis, &z), Err(Error::NotCentral));
    }
}
