//! Symplectic and hamiltonian elements of a Lie algebra `h` with respect to a
//! `V`-valued 2-cochain `omega`, admissible vectors and their Poisson bracket.

use serde::Serialize;

use crate::complex::{
    cohomology, contract, differential, differential_matrix, invariant_vectors, lie_derivative,
    Cochain, CohomologySpace,
};
use crate::error::{Error, Result};
use crate::lie::Module;
use crate::linear::{
    kernel_basis, q, quotient_map, scale_vector, solve_affine, sub_vectors, unit_vector,
    zero_vector, Matrix, Rational, Subspace,
};

/// Everything `analyze` derives from a module and a 2-cochain.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianAnalysis {
    module: Module,
    omega: Cochain,
    d_omega: Cochain,
    /// `xi -> i_xi omega`, flat 1-cochain coordinates.
    contract_omega: Matrix,
    /// `xi -> i_xi d omega`, flat 2-cochain coordinates.
    contract_d_omega: Matrix,
    /// `v -> d v`.
    d0: Matrix,
    /// `[contract_omega; contract_d_omega]`; its kernel is the radical.
    lift_system: Matrix,
    pub sp: Subspace,
    pub ham: Subspace,
    pub rad: Subspace,
    pub h_omega: Subspace,
    pub v_h: Subspace,
    pub v_omega: Subspace,
    /// `{(v, xi) : d v = i_xi omega, xi in ham}` inside `V ⊕ h`, `v` first.
    pub hat_ham: Subspace,
    h1: CohomologySpace,
}

/// Computes `sp`, `ham`, `rad`, `h_omega`, `V^h` and `V_omega`.
///
/// `omega` need not be a cocycle.
pub fn analyze(module: &Module, omega: &Cochain) -> Result<HamiltonianAnalysis> {
    if omega.degree() != 2 {
        return Err(Error::DimensionMismatch {
            context: "omega degree",
            expected: 2,
            found: omega.degree(),
        });
    }
    let algebra = module.algebra();
    let n = algebra.dim();
    let m = module.dim();
    let d_omega = differential(module, omega)?;

    let basis: Vec<Vec<Rational>> = (0..n).map(|i| unit_vector(n, i)).collect();
    let column_matrix = |rows: usize, f: &dyn Fn(&[Rational]) -> Cochain| {
        let cols: Vec<Vec<Rational>> = basis.iter().map(|e| f(e).flat().to_vec()).collect();
        Matrix::from_columns(rows, &cols)
    };
    let c1 = Cochain::space_dim(1, n, m);
    let c2 = Cochain::space_dim(2, n, m);
    let contract_omega = column_matrix(c1, &|e| contract(e, omega).expect("degree 2"));
    let contract_d_omega = column_matrix(c2, &|e| contract(e, &d_omega).expect("degree 3"));
    let lie_omega = column_matrix(c2, &|e| lie_derivative(module, e, omega).expect("shape"));
    let d0 = differential_matrix(module, 0)?;

    let sp = kernel_basis(&lie_omega.vstack(&contract_d_omega));
    let lift_system = contract_omega.vstack(&contract_d_omega);
    let rad = kernel_basis(&lift_system);

    // (xi, v) with i_xi omega = d v and i_xi d omega = 0
    let top = contract_omega.hstack(&-&d0);
    let bottom = contract_d_omega.hstack(&Matrix::zeros(c2, m));
    let solutions = kernel_basis(&top.vstack(&bottom));
    let pairs = solutions.basis_vectors();
    let ham = Subspace::span(
        n,
        &pairs.iter().map(|s| s[..n].to_vec()).collect::<Vec<_>>(),
    );
    let v_omega = Subspace::span(
        m,
        &pairs.iter().map(|s| s[n..].to_vec()).collect::<Vec<_>>(),
    );
    let hat_ham = Subspace::span(
        m + n,
        &pairs
            .iter()
            .map(|s| s[n..].iter().chain(&s[..n]).cloned().collect())
            .collect::<Vec<_>>(),
    );

    // normalizer: i_xi d omega = 0 and [xi, r_k] in rad
    let q_rad = quotient_map(n, &rad)?;
    let mut parts = vec![contract_d_omega.clone()];
    for r in rad.basis_vectors() {
        parts.push(&q_rad * &algebra.ad(&r));
    }
    let h_omega = kernel_basis(&Matrix::vstack_all(n, &parts));

    let v_h = invariant_vectors(module);
    let h1 = cohomology(module, 1)?;

    Ok(HamiltonianAnalysis {
        module: module.clone(),
        omega: omega.clone(),
        d_omega,
        contract_omega,
        contract_d_omega,
        d0,
        lift_system,
        sp,
        ham,
        rad,
        h_omega,
        v_h,
        v_omega,
        hat_ham,
        h1,
    })
}

impl HamiltonianAnalysis {
    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn omega(&self) -> &Cochain {
        &self.omega
    }

    pub fn d_omega(&self) -> &Cochain {
        &self.d_omega
    }

    pub fn algebra_dim(&self) -> usize {
        self.module.algebra().dim()
    }

    pub fn module_dim(&self) -> usize {
        self.module.dim()
    }

    /// `H^1(h, V)`, the target of the flux map.
    pub fn h1(&self) -> &CohomologySpace {
        &self.h1
    }

    /// Flat coordinates of `i_xi omega`.
    pub fn contract_omega(&self, xi: &[Rational]) -> Vec<Rational> {
        self.contract_omega.apply(xi)
    }

    /// Flat coordinates of `i_xi d omega`.
    pub fn contract_d_omega(&self, xi: &[Rational]) -> Vec<Rational> {
        self.contract_d_omega.apply(xi)
    }

    /// Flat coordinates of `d v`.
    pub fn d_vector(&self, v: &[Rational]) -> Vec<Rational> {
        self.d0.apply(v)
    }

    /// Matrix of `d: V -> C^1(h, V)`.
    pub fn d0_matrix(&self) -> &Matrix {
        &self.d0
    }

    /// `omega(x, y)`.
    pub fn omega_at(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.omega.eval(&[x, y])
    }

    /// Whether `d v = i_xi omega` holds exactly.
    pub fn is_lift(&self, v: &[Rational], xi: &[Rational]) -> bool {
        self.d_vector(v) == self.contract_omega(xi)
    }

    /// Alternative description `{xi : d(i_xi omega) = 0, i_xi d omega = 0}` of `sp`.
    pub fn sp_via_exactness(&self) -> Result<Subspace> {
        let d1 = differential_matrix(&self.module, 1)?;
        let closed = &d1 * &self.contract_omega;
        Ok(kernel_basis(&closed.vstack(&self.contract_d_omega)))
    }

    /// `d(V_omega)` inside `C^1(h, V)`.
    pub fn d_v_omega(&self) -> Subspace {
        self.v_omega.image_under(&self.d0)
    }

    /// `C^1(h, V)_omega = {i_xi omega : xi in h_omega}`.
    pub fn oneforms(&self) -> Subspace {
        self.h_omega.image_under(&self.contract_omega)
    }
}

/// A hamiltonian lift of `v`: some `xi` in `ham` with `d v = i_xi omega`.
///
/// Returns the canonical particular solution; lifts are unique modulo `rad`.
pub fn hamiltonian_lift(analysis: &HamiltonianAnalysis, v: &[Rational]) -> Result<Vec<Rational>> {
    if v.len() != analysis.module_dim() {
        return Err(Error::DimensionMismatch {
            context: "admissible vector",
            expected: analysis.module_dim(),
            found: v.len(),
        });
    }
    let mut rhs = analysis.d_vector(v);
    rhs.extend(zero_vector(analysis.contract_d_omega.rows()));
    match solve_affine(&analysis.lift_system, &rhs) {
        Ok(sol) => Ok(sol.particular),
        Err(Error::Unsolvable) => Err(Error::NotAdmissible),
        Err(e) => Err(e),
    }
}

/// `{v1, v2} = -omega(xi1, xi2)` for hamiltonian lifts `xi_j` of `v_j`.
pub fn poisson_bracket(
    analysis: &HamiltonianAnalysis,
    v1: &[Rational],
    v2: &[Rational],
) -> Result<Vec<Rational>> {
    let xi1 = hamiltonian_lift(analysis, v1)?;
    let xi2 = hamiltonian_lift(analysis, v2)?;
    Ok(scale_vector(&-q(1), &analysis.omega_at(&xi1, &xi2)))
}

/// Class of `i_xi omega` in `H^1(h, V)`; zero exactly when `xi` is hamiltonian.
pub fn flux_class(analysis: &HamiltonianAnalysis, xi: &[Rational]) -> Result<Vec<Rational>> {
    if !analysis.sp.contains(xi) {
        return Err(Error::NotSymplectic);
    }
    let c = contract(xi, &analysis.omega)?;
    analysis.h1.class_of(&c)
}

/// Rank of the flux map `sp -> H^1(h, V)`.
pub fn flux_rank(analysis: &HamiltonianAnalysis) -> Result<usize> {
    let classes = analysis
        .sp
        .basis_vectors()
        .iter()
        .map(|xi| flux_class(analysis, xi))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(analysis.h1.dim(), &classes).dim())
}

/// An element `(v, xi)` of the central extension of `ham` by `V^h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HatHamElement {
    pub v: Vec<Rational>,
    pub xi: Vec<Rational>,
}

impl HatHamElement {
    /// Checks `xi in ham` and `d v = i_xi omega`.
    pub fn new(
        analysis: &HamiltonianAnalysis,
        v: Vec<Rational>,
        xi: Vec<Rational>,
    ) -> Result<Self> {
        if v.len() != analysis.module_dim() || xi.len() != analysis.algebra_dim() {
            return Err(Error::DimensionMismatch {
                context: "hat-ham element",
                expected: analysis.module_dim() + analysis.algebra_dim(),
                found: v.len() + xi.len(),
            });
        }
        if !analysis.ham.contains(&xi) {
            return Err(Error::InvariantViolation("xi is not hamiltonian".into()));
        }
        if !analysis.is_lift(&v, &xi) {
            return Err(Error::InvariantViolation("d v != i_xi omega".into()));
        }
        Ok(HatHamElement { v, xi })
    }

    /// Coordinates in `V ⊕ h`, `v` first.
    pub fn coords(&self) -> Vec<Rational> {
        self.v.iter().chain(&self.xi).cloned().collect()
    }
}

/// `[(v1, xi1), (v2, xi2)] = (-omega(xi1, xi2), [xi1, xi2])`.
pub fn hat_ham_bracket(
    analysis: &HamiltonianAnalysis,
    a: &HatHamElement,
    b: &HatHamElement,
) -> Result<HatHamElement> {
    let a = HatHamElement::new(analysis, a.v.clone(), a.xi.clone())?;
    let b = HatHamElement::new(analysis, b.v.clone(), b.xi.clone())?;
    let v = analysis.omega_at(&a.xi, &b.xi).iter().map(|x| -x).collect();
    let xi = analysis.module.algebra().bracket(&a.xi, &b.xi);
    HatHamElement::new(analysis, v, xi)
        .map_err(|e| Error::IdentityFailure(format!("bracket left hat-ham: {e}")))
}

/// Bracket of the abelian extension `V_omega ⋊_omega sp`:
/// `(xi1.v2 - xi2.v1 + omega(xi1, xi2), [xi1, xi2])`.
pub fn sp_abelian_bracket(
    analysis: &HamiltonianAnalysis,
    a: (&[Rational], &[Rational]),
    b: (&[Rational], &[Rational]),
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let ((v1, xi1), (v2, xi2)) = (a, b);
    for xi in [xi1, xi2] {
        if !analysis.sp.contains(xi) {
            return Err(Error::NotSymplectic);
        }
    }
    for v in [v1, v2] {
        if !analysis.v_omega.contains(v) {
            return Err(Error::NotAdmissible);
        }
    }
    let module = &analysis.module;
    let mut v = sub_vectors(&module.act(xi1, v2), &module.act(xi2, v1));
    for (x, y) in v.iter_mut().zip(analysis.omega_at(xi1, xi2)) {
        *x += y;
    }
    Ok((v, module.algebra().bracket(xi1, xi2)))
}

/// Bracket of the central extension `V_omega x_{-omega} sp`, where `sp` acts
/// trivially: `(-omega(xi1, xi2), [xi1, xi2])`.
pub fn sp_central_bracket(
    analysis: &HamiltonianAnalysis,
    a: (&[Rational], &[Rational]),
    b: (&[Rational], &[Rational]),
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let ((v1, xi1), (v2, xi2)) = (a, b);
    for xi in [xi1, xi2] {
        if !analysis.sp.contains(xi) {
            return Err(Error::NotSymplectic);
        }
    }
    for v in [v1, v2] {
        if !analysis.v_omega.contains(v) {
            return Err(Error::NotAdmissible);
        }
    }
    let v = analysis.omega_at(xi1, xi2).iter().map(|x| -x).collect();
    Ok((v, analysis.module.algebra().bracket(xi1, xi2)))
}

/// Some `xi` in `h_omega` with `i_xi omega = a`.
pub fn oneform_lift(analysis: &HamiltonianAnalysis, a: &Cochain) -> Result<Vec<Rational>> {
    if a.degree() != 1
        || a.algebra_dim() != analysis.algebra_dim()
        || a.module_dim() != analysis.module_dim()
    {
        return Err(Error::NotInImage);
    }
    let basis = analysis.h_omega.basis();
    let system = &analysis.contract_omega * basis;
    match solve_affine(&system, a.flat()) {
        Ok(sol) => Ok(basis.apply(&sol.particular)),
        Err(Error::Unsolvable) => Err(Error::NotInImage),
        Err(e) => Err(e),
    }
}

/// `[i_xi1 omega, i_xi2 omega] = i_[xi1, xi2] omega` on `C^1(h, V)_omega`.
pub fn oneform_bracket(
    analysis: &HamiltonianAnalysis,
    a1: &Cochain,
    a2: &Cochain,
) -> Result<Cochain> {
    let xi1 = oneform_lift(analysis, a1)?;
    let xi2 = oneform_lift(analysis, a2)?;
    contract(
        &analysis.module.algebra().bracket(&xi1, &xi2),
        &analysis.omega,
    )
}

/// Dimensions of the subspaces computed by [`analyze`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    pub sp: usize,
    pub ham: usize,
    pub rad: usize,
    pub h_omega: usize,
    pub v_h: usize,
    pub v_omega: usize,
    pub d_v_omega: usize,
    pub oneforms: usize,
    pub hat_ham: usize,
}

/// Outcome of the exact-sequence and inclusion checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessChecks {
    /// `0 -> rad -> ham -> d(V_omega) -> 0`
    pub ham_sequence: bool,
    /// `0 -> V^h -> V_omega -> d(V_omega) -> 0`
    pub admissible_sequence: bool,
    /// `0 -> rad -> h_omega -> C^1(h,V)_omega -> 0`
    pub normalizer_sequence: bool,
    /// `0 -> V^h -> hat-ham -> ham -> 0`
    pub hat_ham_sequence: bool,
    /// `rad ⊆ ham ⊆ sp ⊆ h_omega` and `V^h ⊆ V_omega`
    pub inclusions: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub dims: Dimensions,
    pub checks: ExactnessChecks,
}

impl ExactnessReport {
    pub fn all_ok(&self) -> bool {
        let c = &self.checks;
        c.ham_sequence
            && c.admissible_sequence
            && c.normalizer_sequence
            && c.hat_ham_sequence
            && c.inclusions
    }
}

/// Dimension bookkeeping for the two exact sequences and the commutative diagram.
pub fn exactness_report(analysis: &HamiltonianAnalysis) -> ExactnessReport {
    let d_v = analysis.d_v_omega();
    let oneforms = analysis.oneforms();
    let dims = Dimensions {
        sp: analysis.sp.dim(),
        ham: analysis.ham.dim(),
        rad: analysis.rad.dim(),
        h_omega: analysis.h_omega.dim(),
        v_h: analysis.v_h.dim(),
        v_omega: analysis.v_omega.dim(),
        d_v_omega: d_v.dim(),
        oneforms: oneforms.dim(),
        hat_ham: analysis.hat_ham.dim(),
    };
    let ham_image = analysis.ham.image_under(&analysis.contract_omega);
    let checks = ExactnessChecks {
        ham_sequence: dims.ham == dims.rad + dims.d_v_omega && ham_image == d_v,
        admissible_sequence: dims.v_omega == dims.v_h + dims.d_v_omega,
        normalizer_sequence: dims.h_omega == dims.rad + dims.oneforms,
        hat_ham_sequence: dims.hat_ham == dims.v_h + dims.ham,
        inclusions: analysis.ham.contains_subspace(&analysis.rad)
            && analysis.sp.contains_subspace(&analysis.ham)
            && analysis.h_omega.contains_subspace(&analysis.sp)
            && analysis.v_omega.contains_subspace(&analysis.v_h),
    };
    ExactnessReport { dims, checks }
}

/// Matrix of `xi -> L_xi omega` (flat 2-cochain coordinates), exposed for tests.
pub fn lie_derivative_matrix(analysis: &HamiltonianAnalysis) -> Matrix {
    let n = analysis.algebra_dim();
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            lie_derivative(&analysis.module, &unit_vector(n, i), &analysis.omega)
                .expect("shape")
                .flat()
                .to_vec()
        })
        .collect();
    Matrix::from_columns(Cochain::space_dim(2, n, analysis.module_dim()), &cols)
}
