//! Momentum maps for homomorphisms `zeta: g -> ham(h, omega)`, the obstruction
//! cocycle `tau`, the central and abelian extensions of `g` they define, and
//! the Baer product relating the two.

use serde::Serialize;

use crate::complex::{cohomology, differential, differential_matrix, lie_derivative, Cochain};
use crate::error::{Error, Result};
use crate::ham::{poisson_bracket, HamiltonianAnalysis};
use crate::lie::{AlgebraHom, LieAlgebra, Module};
use crate::linear::{
    add_vectors, is_zero_vector, q, scale_vector, solve_affine, sub_vectors, unit_vector,
    zero_vector, Matrix, Rational, Subspace,
};
use num_traits::Zero;

/// Matrix reading off the canonical coordinates of vectors lying in `sub`.
pub fn coordinate_matrix(sub: &Subspace) -> Matrix {
    let n = sub.ambient_dim();
    Matrix::from_fn(sub.dim(), n, |r, c| {
        if sub.pivots()[r] == c {
            q(1)
        } else {
            Rational::zero()
        }
    })
}

fn basis(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| unit_vector(n, i)).collect()
}

/// Checks that `zeta` maps into `h` and every `zeta(e_i)` is hamiltonian.
pub fn check_zeta(analysis: &HamiltonianAnalysis, zeta: &AlgebraHom) -> Result<()> {
    if zeta.target() != analysis.module().algebra() {
        return Err(Error::DimensionMismatch {
            context: "zeta target",
            expected: analysis.algebra_dim(),
            found: zeta.target().dim(),
        });
    }
    for index in 0..zeta.source().dim() {
        if !analysis.ham.contains(&zeta.image_of_basis(index)) {
            return Err(Error::ImageNotHamiltonian { index });
        }
    }
    Ok(())
}

/// `omega_g = zeta^* omega`, a 2-cocycle for the `g`-module `X.v = zeta(X).v`.
pub fn pullback_cocycle(analysis: &HamiltonianAnalysis, zeta: &AlgebraHom) -> Result<Cochain> {
    check_zeta(analysis, zeta)?;
    let omega_g = analysis.omega().pullback(zeta.matrix());
    let g_module = analysis.module().pullback(zeta)?;
    if !differential(&g_module, &omega_g)?.is_zero() {
        return Err(Error::IdentityFailure(
            "pulled-back cochain is not a cocycle".into(),
        ));
    }
    Ok(omega_g)
}

/// A linear `J: g -> V` with `d(J(X)) = i_zeta(X) omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMap {
    analysis: HamiltonianAnalysis,
    zeta: AlgebraHom,
    g_module: Module,
    omega_g: Cochain,
    /// `dim V x dim g`.
    j: Matrix,
}

impl MomentumMap {
    /// Validates a candidate momentum map.
    pub fn new(analysis: &HamiltonianAnalysis, zeta: &AlgebraHom, j: Matrix) -> Result<Self> {
        let omega_g = pullback_cocycle(analysis, zeta)?;
        let n = zeta.source().dim();
        if j.rows() != analysis.module_dim() || j.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "momentum matrix",
                expected: analysis.module_dim() * n,
                found: j.rows() * j.cols(),
            });
        }
        for index in 0..n {
            let x = zeta.image_of_basis(index);
            if analysis.d_vector(&j.column(index)) != analysis.contract_omega(&x) {
                return Err(Error::NotMomentumMap { index });
            }
        }
        Ok(MomentumMap {
            analysis: analysis.clone(),
            g_module: analysis.module().pullback(zeta)?,
            zeta: zeta.clone(),
            omega_g,
            j,
        })
    }

    pub fn analysis(&self) -> &HamiltonianAnalysis {
        &self.analysis
    }

    pub fn zeta(&self) -> &AlgebraHom {
        &self.zeta
    }

    pub fn g_algebra(&self) -> &LieAlgebra {
        self.zeta.source()
    }

    /// `V` as a `g`-module through `zeta`.
    pub fn g_module(&self) -> &Module {
        &self.g_module
    }

    pub fn omega_g(&self) -> &Cochain {
        &self.omega_g
    }

    pub fn matrix(&self) -> &Matrix {
        &self.j
    }

    pub fn v_h(&self) -> &Subspace {
        &self.analysis.v_h
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.j.apply(x)
    }

    /// `J` as a 1-cochain on `g`.
    pub fn as_cochain(&self) -> Cochain {
        Cochain::from_linear_map(&self.j)
    }

    /// `J - c` for `c` in `Hom(g, V^h)`, revalidated.
    pub fn shifted(&self, c: &Matrix) -> Result<MomentumMap> {
        MomentumMap::new(&self.analysis, &self.zeta, &self.j - c)
    }
}

/// A momentum map together with the space of all others, `J + Hom(g, V^h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSolution {
    pub map: MomentumMap,
    /// Basis of `Hom(g, V^h)` as `dim V x dim g` matrices.
    pub freedom: Vec<Matrix>,
}

impl MomentumSolution {
    pub fn freedom_dim(&self) -> usize {
        self.freedom.len()
    }
}

/// Solves `d(J(X)) = i_zeta(X) omega` basis element by basis element.
pub fn solve_momentum(
    analysis: &HamiltonianAnalysis,
    zeta: &AlgebraHom,
) -> Result<MomentumSolution> {
    check_zeta(analysis, zeta)?;
    let n = zeta.source().dim();
    let m = analysis.module_dim();
    let mut cols = Vec::with_capacity(n);
    for index in 0..n {
        let rhs = analysis.contract_omega(&zeta.image_of_basis(index));
        match solve_affine(analysis.d0_matrix(), &rhs) {
            Ok(sol) => cols.push(sol.particular),
            Err(Error::Unsolvable) => return Err(Error::ImageNotHamiltonian { index }),
            Err(e) => return Err(e),
        }
    }
    let map = MomentumMap::new(analysis, zeta, Matrix::from_columns(m, &cols))?;
    let mut freedom = Vec::new();
    for z in analysis.v_h.basis_vectors() {
        for x in 0..n {
            let mut c = Matrix::zeros(m, n);
            for (r, value) in z.iter().enumerate() {
                c.set(r, x, value.clone());
            }
            freedom.push(c);
        }
    }
    Ok(MomentumSolution { map, freedom })
}

/// `tau(X, Y) = X.J(Y) - J([X, Y])` and its class in `H^2(g, V^h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionClass {
    /// `V`-valued 2-cochain on `g`.
    pub tau: Cochain,
    /// `tau` in the canonical coordinates of `V^h`.
    pub tau_invariant: Cochain,
    pub h2_class: Vec<Rational>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.h2_class)
    }
}

/// `V^h` as a trivial `g`-module.
fn invariant_module(m: &MomentumMap) -> Module {
    Module::trivial(m.g_algebra().clone(), m.v_h().dim())
}

/// `tau` as a `V`-valued cochain, computed from its defining formula.
pub fn tau_cochain(m: &MomentumMap) -> Cochain {
    let g = m.g_algebra();
    let e = basis(g.dim());
    Cochain::from_fn(2, g.dim(), m.analysis.module_dim(), |t| {
        let (x, y) = (&e[t[0]], &e[t[1]]);
        sub_vectors(&m.g_module.act(x, &m.apply(y)), &m.apply(&g.bracket(x, y)))
    })
}

/// Computes `tau` and checks that it is a cocycle with values in `V^h` equal
/// to `d_g J + omega_g`.
pub fn tau_cocycle(m: &MomentumMap) -> Result<ObstructionClass> {
    let tau = tau_cochain(m);
    let n = m.g_algebra().dim();
    for t in crate::complex::increasing_tuples(n, 2) {
        if !m.v_h().contains(&tau.value(&t)) {
            return Err(Error::IdentityFailure(format!(
                "tau({}, {}) is not invariant",
                t[0], t[1]
            )));
        }
    }
    if !differential(&m.g_module, &tau)?.is_zero() {
        return Err(Error::IdentityFailure("tau is not a cocycle".into()));
    }
    let rhs = differential(&m.g_module, &m.as_cochain())?.add(&m.omega_g);
    if rhs != tau {
        return Err(Error::IdentityFailure("tau != d J + omega_g".into()));
    }
    let tau_invariant = tau.map_values(&coordinate_matrix(m.v_h()));
    let h2 = cohomology(&invariant_module(m), 2)?;
    let h2_class = h2.class_of(&tau_invariant)?;
    Ok(ObstructionClass {
        tau,
        tau_invariant,
        h2_class,
    })
}

/// A Lie algebra `total` with an exact sequence `0 -> K -> total -> g -> 0`.
///
/// Coordinates on `total` are `(kernel coordinates, g coordinates)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionPresentation {
    pub total: LieAlgebra,
    pub base: LieAlgebra,
    /// `dim total x dim K`.
    pub kernel_injection: Matrix,
    /// `dim g x dim total`.
    pub projection: Matrix,
    /// `dim total x dim g`.
    pub section: Matrix,
    /// Kernel basis vectors inside `V`, as columns (`dim V x dim K`).
    pub kernel_basis: Matrix,
}

impl ExtensionPresentation {
    fn new(
        total: LieAlgebra,
        base: LieAlgebra,
        kernel_basis: Matrix,
        central: bool,
    ) -> Result<Self> {
        let k = kernel_basis.cols();
        let n = base.dim();
        let kernel_injection = Matrix::from_fn(k + n, k, |r, c| unit(r == c));
        let projection = Matrix::from_fn(n, k + n, |r, c| unit(c == k + r));
        let section = Matrix::from_fn(k + n, n, |r, c| unit(r == k + c));
        let ext = ExtensionPresentation {
            total,
            base,
            kernel_injection,
            projection,
            section,
            kernel_basis,
        };
        ext.check(central)?;
        Ok(ext)
    }

    fn check(&self, central: bool) -> Result<()> {
        if !(&self.projection * &self.kernel_injection).is_zero() {
            return Err(Error::IdentityFailure("projection kills the kernel".into()));
        }
        if &self.projection * &self.section != Matrix::identity(self.base.dim()) {
            return Err(Error::IdentityFailure("section is not a section".into()));
        }
        AlgebraHom::new(
            self.projection.clone(),
            self.total.clone(),
            self.base.clone(),
        )?;
        let kernel = self.kernel();
        if !self.total.is_ideal(&kernel) {
            return Err(Error::NotIdeal);
        }
        if central && !self.total.center().contains_subspace(&kernel) {
            return Err(Error::NotCentral);
        }
        Ok(())
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_injection.cols()
    }

    /// Image of the kernel inside `total`.
    pub fn kernel(&self) -> Subspace {
        Subspace::column_space(&self.kernel_injection)
    }

    pub fn is_central(&self) -> bool {
        self.total.center().contains_subspace(&self.kernel())
    }
}

fn unit(b: bool) -> Rational {
    if b {
        q(1)
    } else {
        Rational::zero()
    }
}

/// Structure constants on `(K coordinates, g coordinates)` from a bracket on pairs.
fn extension_algebra(
    k: usize,
    g: &LieAlgebra,
    mut bracket: impl FnMut(&[Rational], &[Rational], &[Rational], &[Rational]) -> Vec<Rational>,
) -> Result<LieAlgebra> {
    let n = g.dim();
    let total = k + n;
    let e = basis(total);
    let mut brackets = Vec::new();
    for i in 0..total {
        for j in i + 1..total {
            let (a, b) = (&e[i], &e[j]);
            let kv = bracket(&a[..k], &a[k..], &b[..k], &b[k..]);
            let mut coords = kv;
            coords.extend(g.bracket(&a[k..], &b[k..]));
            brackets.push((i, j, coords));
        }
    }
    LieAlgebra::from_brackets(total, &brackets)
}

/// `g_cen = V^h x_tau g` with `[(v, X), (w, Y)] = (tau(X, Y), [X, Y])`.
pub fn build_central_extension(m: &MomentumMap) -> Result<ExtensionPresentation> {
    let class = tau_cocycle(m)?;
    let g = m.g_algebra();
    let k = m.v_h().dim();
    let e = basis(g.dim());
    let total = extension_algebra(k, g, |_, x, _, y| {
        let mut out = zero_vector(k);
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let v = class.tau_invariant.eval(&[&e[i], &e[j]]);
                for (o, t) in out.iter_mut().zip(v) {
                    *o += xi * yj * t;
                }
            }
        }
        out
    })?;
    ExtensionPresentation::new(total, g.clone(), m.v_h().basis().clone(), true)
}

/// `g_ab = V_omega ⋊_{omega_g} g` with
/// `[(v, X), (w, Y)] = (X.w - Y.v + omega_g(X, Y), [X, Y])`.
pub fn build_abelian_extension(
    analysis: &HamiltonianAnalysis,
    zeta: &AlgebraHom,
) -> Result<ExtensionPresentation> {
    let omega_g = pullback_cocycle(analysis, zeta)?;
    let g_module = analysis.module().pullback(zeta)?;
    let v_omega = &analysis.v_omega;
    let a = v_omega.dim();
    let g = zeta.source();
    let mut failure = None;
    let total = extension_algebra(a, g, |v, x, w, y| {
        let v = v_omega.vector(v);
        let w = v_omega.vector(w);
        let value = add_vectors(
            &sub_vectors(&g_module.act(x, &w), &g_module.act(y, &v)),
            &omega_g.eval(&[x, y]),
        );
        v_omega.coordinates(&value).unwrap_or_else(|| {
            failure = Some(());
            zero_vector(a)
        })
    });
    if failure.is_some() {
        return Err(Error::IdentityFailure("V_omega is not preserved".into()));
    }
    let ab = ExtensionPresentation::new(total?, g.clone(), v_omega.basis().clone(), false)?;
    let solution = solve_momentum(analysis, zeta)?;
    let cen = build_central_extension(&solution.map)?;
    central_into_abelian(&solution.map, &cen, &ab)?;
    Ok(ab)
}

/// The embedding `g_cen -> g_ab`, `(z, X) -> (z + J(X), X)`.
pub fn central_into_abelian(
    m: &MomentumMap,
    cen: &ExtensionPresentation,
    ab: &ExtensionPresentation,
) -> Result<AlgebraHom> {
    let v_omega = Subspace::column_space(&ab.kernel_basis);
    let shift = Matrix::from_columns(ab.kernel_dim(), &witness_columns(m, &v_omega)?);
    let k = cen.kernel_dim();
    let a = ab.kernel_dim();
    let n = m.g_algebra().dim();
    let mut matrix = Matrix::zeros(a + n, k + n);
    for (c, z) in cen.kernel_basis.columns().iter().enumerate() {
        let coords = v_omega
            .coordinates(z)
            .ok_or_else(|| Error::KernelMismatch("V^h is not inside V_omega".into()))?;
        for (r, x) in coords.into_iter().enumerate() {
            matrix.set(r, c, x);
        }
    }
    for c in 0..n {
        for r in 0..a {
            matrix.set(r, k + c, shift.get(r, c).clone());
        }
        matrix.set(a + c, k + c, q(1));
    }
    AlgebraHom::new(matrix, cen.total.clone(), ab.total.clone())
}

/// Columns `J(e_i)` in the coordinates of `V_omega`.
fn witness_columns(m: &MomentumMap, v_omega: &Subspace) -> Result<Vec<Vec<Rational>>> {
    (0..m.g_algebra().dim())
        .map(|i| {
            v_omega
                .coordinates(&m.j.column(i))
                .ok_or_else(|| Error::KernelMismatch("J leaves V_omega".into()))
        })
        .collect()
}

/// Outcome of [`equivariantize`].
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum Equivariantization {
    /// `c` in `Hom(g, V^h)` with `tau_{J - c} = 0`, and the map `J - c`.
    Equivariant { c: Matrix, map: MomentumMap },
    /// `[tau]` is a nonzero class in `H^2(g, V^h)`.
    Obstructed { class: ObstructionClass },
}

/// Looks for `c` in `Hom(g, V^h)` with `tau_J = d_g c`.
pub fn equivariantize(m: &MomentumMap) -> Result<Equivariantization> {
    let class = tau_cocycle(m)?;
    let trivial = invariant_module(m);
    let d1 = differential_matrix(&trivial, 1)?;
    match solve_affine(&d1, class.tau_invariant.flat()) {
        Ok(sol) => {
            let n = m.g_algebra().dim();
            let coords = Cochain::from_flat(1, n, trivial.dim(), sol.particular)?;
            let c = m.v_h().basis() * &coords.to_linear_map();
            let map = m.shifted(&c)?;
            if !tau_cochain(&map).is_zero() {
                return Err(Error::IdentityFailure("tau of J - c is nonzero".into()));
            }
            Ok(Equivariantization::Equivariant { c, map })
        }
        Err(Error::Unsolvable) => Ok(Equivariantization::Obstructed { class }),
        Err(e) => Err(e),
    }
}

/// The four conditions that are equivalent for a momentum map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    /// `tau_J = 0`.
    pub tau_vanishes: bool,
    /// `J([X, Y]) = X.J(Y)`.
    pub equivariant: bool,
    /// `J([X, Y]) = {J(X), J(Y)}` for the Poisson bracket on `V_omega`.
    pub poisson_homomorphism: bool,
    /// `X -> (J(X), X)` is a homomorphism into `g_cen`.
    pub section_homomorphism: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        let all = [
            self.tau_vanishes,
            self.equivariant,
            self.poisson_homomorphism,
            self.section_homomorphism,
        ];
        all.iter().all(|&b| b) || all.iter().all(|&b| !b)
    }
}

/// Evaluates each of the four equivalent conditions independently.
pub fn equivalence_report(m: &MomentumMap) -> Result<EquivalenceReport> {
    let g = m.g_algebra();
    let n = g.dim();
    let tau_vanishes = tau_cocycle(m)?.tau.is_zero();

    let equivariant = (0..n).all(|i| {
        let lhs = &m.j * &g.ad_basis(i);
        let rhs = m.g_module.rho_basis(i) * &m.j;
        lhs == rhs
    });

    let mut poisson_homomorphism = true;
    let mut section_homomorphism = true;
    for i in 0..n {
        for j in i + 1..n {
            let bracket = m.j.apply(g.bracket_basis(i, j));
            let p = poisson_bracket(&m.analysis, &m.j.column(i), &m.j.column(j))?;
            poisson_homomorphism &= p == bracket;
            // [(J X, X), (J Y, Y)] = (-omega(zeta X, zeta Y), [X, Y]) in g_cen
            let v = scale_vector(&q(-1), &m.omega_g.value(&[i, j]));
            section_homomorphism &= v == bracket;
        }
    }
    Ok(EquivalenceReport {
        tau_vanishes,
        equivariant,
        poisson_homomorphism,
        section_homomorphism,
    })
}

/// `J_hat(z, X) = z + J(X)` on `g_cen`, as a `dim V x dim g_cen` matrix.
///
/// Checks `d J_hat(z, X) = i_zeta(X) omega` and equivariance under `g_cen`
/// acting on `V` through the projection.
pub fn hat_momentum(m: &MomentumMap, cen: &ExtensionPresentation) -> Result<Matrix> {
    let hat = cen.kernel_basis.hstack(&m.j);
    let zeta_hat = m.zeta.matrix() * &cen.projection;
    let total = &cen.total;
    let e = basis(total.dim());
    for a in &e {
        let xi = zeta_hat.apply(a);
        if m.analysis.d_vector(&hat.apply(a)) != m.analysis.contract_omega(&xi) {
            return Err(Error::IdentityFailure("J_hat is not a momentum map".into()));
        }
    }
    for a in &e {
        let xi = zeta_hat.apply(a);
        for b in &e {
            let lhs = hat.apply(&total.bracket(a, b));
            let rhs = m.analysis.module().act(&xi, &hat.apply(b));
            if lhs != rhs {
                return Err(Error::IdentityFailure("J_hat is not equivariant".into()));
            }
        }
    }
    Ok(hat)
}

/// For `omega = d alpha`: `f_J = J + zeta^* alpha`, with `tau_J = d_g f_J`.
pub fn coboundary_case(m: &MomentumMap, alpha: &Cochain) -> Result<Matrix> {
    let analysis = &m.analysis;
    if alpha.degree() != 1
        || alpha.algebra_dim() != analysis.algebra_dim()
        || alpha.module_dim() != analysis.module_dim()
        || &differential(analysis.module(), alpha)? != analysis.omega()
    {
        return Err(Error::NotPrimitive);
    }
    let f = &m.j + &(&alpha.to_linear_map() * m.zeta.matrix());
    let f_cochain = Cochain::from_linear_map(&f);
    if differential(&m.g_module, &f_cochain)? != tau_cochain(m) {
        return Err(Error::IdentityFailure("tau != d f_J".into()));
    }
    for i in 0..m.g_algebra().dim() {
        let x = m.zeta.image_of_basis(i);
        let lhs = lie_derivative(analysis.module(), &x, alpha)?;
        if lhs.flat() != analysis.d_vector(&f.column(i)).as_slice() {
            return Err(Error::IdentityFailure("L alpha != d f_J".into()));
        }
    }
    Ok(f)
}

/// The conditions for `omega + J` to be an equivariantly closed element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanReport {
    /// `d omega = 0`.
    pub closed: bool,
    /// `i_zeta(X) omega = d J(X)`.
    pub momentum: bool,
    /// `L_zeta(X) omega = 0`.
    pub invariant: bool,
    /// `tau_J = 0`.
    pub equivariant: bool,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.closed && self.momentum && self.invariant && self.equivariant
    }
}

/// Checks a candidate pair `(omega, J)`; `J` need not be a momentum map.
pub fn cartan2_check(
    analysis: &HamiltonianAnalysis,
    zeta: &AlgebraHom,
    j: &Matrix,
) -> Result<CartanReport> {
    let n = zeta.source().dim();
    if zeta.target() != analysis.module().algebra()
        || j.rows() != analysis.module_dim()
        || j.cols() != n
    {
        return Err(Error::DimensionMismatch {
            context: "cartan check",
            expected: analysis.module_dim() * n,
            found: j.rows() * j.cols(),
        });
    }
    let module = analysis.module();
    let g = zeta.source();
    let closed = analysis.d_omega().is_zero();
    let mut momentum = true;
    let mut invariant = true;
    for i in 0..n {
        let x = zeta.image_of_basis(i);
        momentum &= analysis.contract_omega(&x) == analysis.d_vector(&j.column(i));
        invariant &= lie_derivative(module, &x, analysis.omega())?.is_zero();
    }
    let mut equivariant = true;
    for i in 0..n {
        for k in 0..n {
            let lhs = module.act(&zeta.image_of_basis(i), &j.column(k));
            equivariant &= lhs == j.apply(g.bracket_basis(i, k));
        }
    }
    Ok(CartanReport {
        closed,
        momentum,
        invariant,
        equivariant,
    })
}

/// Output of [`baer_product_lie`].
#[derive(Debug, Clone, PartialEq)]
pub struct BaerProduct {
    /// `(V_omega ⋊ g_cen) / antidiagonal(V^h)`, presented over `g` with
    /// kernel `V_omega`.
    pub extension: ExtensionPresentation,
    /// `J` in the coordinates of `V_omega` (`dim V_omega x dim g`).
    pub witness: Matrix,
    /// `(v, X) -> (v + J(X), X)` from the Baer product to `g_ab`.
    pub equivalence: AlgebraHom,
}

/// Composes the central extension by `V^h` with the abelian extension
/// `V_omega ⋊ g` and certifies equivalence with [`build_abelian_extension`].
pub fn baer_product_lie(m: &MomentumMap, cen: &ExtensionPresentation) -> Result<BaerProduct> {
    let analysis = &m.analysis;
    let v_omega = &analysis.v_omega;
    let a = v_omega.dim();
    let k = cen.kernel_dim();
    let g = m.g_algebra();
    let n = g.dim();
    if cen.base != *g || cen.total.dim() != k + n {
        return Err(Error::KernelMismatch(
            "central extension is not over g".into(),
        ));
    }
    let kernel_coords: Vec<Vec<Rational>> = cen
        .kernel_basis
        .columns()
        .iter()
        .map(|z| {
            if !m.v_h().contains(z) {
                return Err(Error::KernelMismatch("kernel is not inside V^h".into()));
            }
            v_omega
                .coordinates(z)
                .ok_or_else(|| Error::KernelMismatch("kernel is not inside V_omega".into()))
        })
        .collect::<Result<_>>()?;

    // S = V_omega ⋊ g_cen, coordinates (V_omega, g_cen)
    let s_dim = a + k + n;
    let e = basis(s_dim);
    let act = |x: &[Rational], w: &[Rational]| -> Result<Vec<Rational>> {
        let image = m.g_module.act(&cen.projection.apply(x), &v_omega.vector(w));
        v_omega
            .coordinates(&image)
            .ok_or_else(|| Error::KernelMismatch("V_omega is not a g-module".into()))
    };
    let mut brackets = Vec::new();
    for i in 0..s_dim {
        for j in i + 1..s_dim {
            let (v, x) = e[i].split_at(a);
            let (w, y) = e[j].split_at(a);
            let mut coords = sub_vectors(&act(x, w)?, &act(y, v)?);
            coords.extend(cen.total.bracket(x, y));
            brackets.push((i, j, coords));
        }
    }
    let semidirect = LieAlgebra::from_brackets(s_dim, &brackets)?;
    let antidiagonal: Vec<Vec<Rational>> = kernel_coords
        .iter()
        .enumerate()
        .map(|(b, z)| {
            let mut v = z.clone();
            v.extend(scale_vector(&q(-1), &unit_vector(k, b)));
            v.extend(zero_vector(n));
            v
        })
        .collect();
    let quotient = semidirect.quotient(&Subspace::span(s_dim, &antidiagonal))?;

    // present the quotient with coordinates (V_omega, g) via v -> [(v, 0)], X -> [(0, (0, X))]
    let mut cols = Vec::with_capacity(a + n);
    for i in 0..a {
        let mut s = unit_vector(a, i);
        s.extend(zero_vector(k + n));
        cols.push(quotient.projection.apply(&s));
    }
    for i in 0..n {
        let mut s = zero_vector(a + k);
        s.extend(unit_vector(n, i));
        cols.push(quotient.projection.apply(&s));
    }
    let change = Matrix::from_columns(quotient.algebra.dim(), &cols);
    let total = quotient.algebra.change_basis(&change)?;
    let extension = ExtensionPresentation::new(total, g.clone(), v_omega.basis().clone(), false)?;

    let ab = build_abelian_extension(analysis, &m.zeta)?;
    if ab.kernel_basis != extension.kernel_basis {
        return Err(Error::KernelMismatch(
            "kernels of the two extensions differ".into(),
        ));
    }
    let witness = Matrix::from_columns(a, &witness_columns(m, v_omega)?);
    let mut phi = Matrix::identity(a + n);
    for c in 0..n {
        for r in 0..a {
            phi.set(r, a + c, witness.get(r, c).clone());
        }
    }
    let equivalence = AlgebraHom::new(phi, extension.total.clone(), ab.total.clone())?;
    Ok(BaerProduct {
        extension,
        witness,
        equivalence,
    })
}

/// Whether `phi` is an equivalence of extensions: identity on the kernels and
/// compatible with the projections.
pub fn is_equivalence(
    phi: &AlgebraHom,
    left: &ExtensionPresentation,
    right: &ExtensionPresentation,
) -> bool {
    phi.matrix().inverse().is_some()
        && phi.matrix() * &left.kernel_injection == right.kernel_injection
        && &right.projection * phi.matrix() == left.projection
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{from_central_extension, heisenberg, matrix_algebra_example, sl2};
    use crate::ham::analyze;

    fn heisenberg_instance() -> (HamiltonianAnalysis, AlgebraHom) {
        let z = Subspace::span(3, &[unit_vector(3, 2)]);
        let b = from_central_extension(&heisenberg(), &z).unwrap();
        (analyze(&b.module, &b.omega).unwrap(), b.zeta.unwrap())
    }

    fn matrix_instance() -> (HamiltonianAnalysis, AlgebraHom, Matrix) {
        let b = matrix_algebra_example(2).unwrap();
        let inclusion = b.primitive.unwrap().to_linear_map();
        (
            analyze(&b.module, &b.omega).unwrap(),
            b.zeta.unwrap(),
            inclusion,
        )
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn heisenberg_momentum_and_obstruction() {
        let (a, zeta) = heisenberg_instance();
        let omega_g = pullback_cocycle(&a, &zeta).unwrap();
        assert_eq!(omega_g.value(&[0, 1]), v(&[0, 0, -1]));
        let sol = solve_momentum(&a, &zeta).unwrap();
        assert_eq!(
            sol.map.matrix(),
            &Matrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]])
        );
        assert_eq!(sol.freedom_dim(), 2);
        let class = tau_cocycle(&sol.map).unwrap();
        assert_eq!(class.tau.value(&[0, 1]), v(&[0, 0, 1]));
        assert!(!class.is_zero());
        assert!(matches!(
            equivariantize(&sol.map).unwrap(),
            Equivariantization::Obstructed { .. }
        ));
        let report = cartan2_check(&a, &zeta, sol.map.matrix()).unwrap();
        assert!(report.closed && report.momentum && report.invariant && !report.equivariant);
    }

    #[test]
    fn heisenberg_central_extension_is_heis3() {
        let (a, zeta) = heisenberg_instance();
        let sol = solve_momentum(&a, &zeta).unwrap();
        let cen = build_central_extension(&sol.map).unwrap();
        assert!(cen.is_central());
        // (Z, x, y) -> (X, Y, Z)
        let perm = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert!(AlgebraHom::new(perm, cen.total.clone(), heisenberg()).is_ok());
        let hat = hat_momentum(&sol.map, &cen).unwrap();
        // J_hat(tZ, x) = X + tZ
        assert_eq!(hat.apply(&v(&[3, 1, 0])), v(&[1, 0, 3]));
    }

    #[test]
    fn heisenberg_abelian_and_baer() {
        let (a, zeta) = heisenberg_instance();
        let ab = build_abelian_extension(&a, &zeta).unwrap();
        assert_eq!(ab.total.dim(), 5);
        let sol = solve_momentum(&a, &zeta).unwrap();
        let cen = build_central_extension(&sol.map).unwrap();
        let baer = baer_product_lie(&sol.map, &cen).unwrap();
        assert!(is_equivalence(&baer.equivalence, &baer.extension, &ab));
    }

    #[test]
    fn matrix_example_is_equivariant() {
        let (a, zeta, inclusion) = matrix_instance();
        let j = MomentumMap::new(&a, &zeta, -&inclusion).unwrap();
        assert!(tau_cocycle(&j).unwrap().tau.is_zero());
        assert!(cartan2_check(&a, &zeta, j.matrix()).unwrap().passed());
        let report = equivalence_report(&j).unwrap();
        assert!(report.tau_vanishes && report.equivariant);
        assert!(report.poisson_homomorphism && report.section_homomorphism);

        let sol = solve_momentum(&a, &zeta).unwrap();
        assert_eq!(sol.freedom_dim(), 3);
        match equivariantize(&sol.map).unwrap() {
            Equivariantization::Equivariant { map, .. } => {
                assert!(tau_cochain(&map).is_zero());
                let diff = map.matrix() - j.matrix();
                assert!(diff.columns().iter().all(|c| a.v_h.contains(c)));
            }
            Equivariantization::Obstructed { .. } => panic!("sl2 is not obstructed"),
        }
    }

    #[test]
    fn matrix_example_extensions() {
        let (a, zeta, inclusion) = matrix_instance();
        let j = MomentumMap::new(&a, &zeta, -&inclusion).unwrap();
        let cen = build_central_extension(&j).unwrap();
        assert_eq!(cen.total, LieAlgebra::abelian(1).direct_sum(&sl2()));
        let hat = hat_momentum(&j, &cen).unwrap();
        // J_hat(c 1, e) = -e + c 1
        assert_eq!(hat.apply(&v(&[2, 1, 0, 0])), v(&[2, -1, 0, 2]));
        let ab = build_abelian_extension(&a, &zeta).unwrap();
        assert_eq!(ab.total.dim(), 7);
        let baer = baer_product_lie(&j, &cen).unwrap();
        assert!(is_equivalence(&baer.equivalence, &baer.extension, &ab));
    }

    #[test]
    fn coboundary_case_with_inclusion() {
        let (a, zeta, inclusion) = matrix_instance();
        let j = MomentumMap::new(&a, &zeta, -&inclusion).unwrap();
        let alpha = Cochain::from_linear_map(&inclusion);
        assert!(coboundary_case(&j, &alpha).unwrap().is_zero());
        let wrong = alpha.scale(&q(2));
        assert_eq!(coboundary_case(&j, &wrong), Err(Error::NotPrimitive));
    }

    #[test]
    fn zero_zeta_gives_zero_momentum() {
        let (a, _, _) = matrix_instance();
        let h = a.module().algebra().clone();
        let zeta = AlgebraHom::zero(&h, &h);
        let sol = solve_momentum(&a, &zeta).unwrap();
        assert!(sol.map.matrix().is_zero());
        assert!(pullback_cocycle(&a, &zeta).unwrap().is_zero());
        assert!(tau_cocycle(&sol.map).unwrap().tau.is_zero());
        assert!(cartan2_check(&a, &zeta, sol.map.matrix()).unwrap().momentum);
    }

    #[test]
    fn non_hamiltonian_image_is_rejected() {
        let h = heisenberg();
        let module = crate::lie::adjoint_module(&h);
        // omega(X, Y) = X is not closed under the hamiltonian condition for X
        let omega = Cochain::from_fn(2, 3, 3, |t| {
            if t == [0, 1] {
                v(&[1, 0, 0])
            } else {
                v(&[0, 0, 0])
            }
        });
        let a = analyze(&module, &omega).unwrap();
        let zeta = AlgebraHom::identity(&h);
        let err = solve_momentum(&a, &zeta).unwrap_err();
        assert!(matches!(err, Error::ImageNotHamiltonian { .. }));
    }
}
