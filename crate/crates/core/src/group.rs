//! Explicit group elements `g = (Ad(g), rho_V(g))` acting compatibly on `g`
//! and `V`, the group cocycle `kappa`, the adjoint action on `g_cen` and the
//! affine action on `Hom(g, V^h)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::automorphism_defect;
use crate::linear::{q, Matrix, Rational};
use crate::momentum::{coordinate_matrix, ExtensionPresentation, MomentumMap};

/// A validated pair `(Ad(g), rho_V(g))` with cached inverses.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub label: String,
    ad: Matrix,
    rho_v: Matrix,
    ad_inv: Matrix,
    rho_v_inv: Matrix,
}

impl GroupElement {
    /// Checks, in order: `Ad` is an automorphism, both matrices are
    /// invertible, `rho_V` intertwines the `g`-action, `omega_g` is invariant
    /// and `rho_V` fixes `V^h`.
    pub fn new(
        label: impl Into<String>,
        ad: Matrix,
        rho_v: Matrix,
        m: &MomentumMap,
    ) -> Result<Self> {
        let g = m.g_algebra();
        let n = g.dim();
        let dim_v = m.g_module().dim();
        if !ad.is_square() || ad.rows() != n {
            return Err(Error::DimensionMismatch {
                context: "Ad matrix",
                expected: n,
                found: ad.rows(),
            });
        }
        if !rho_v.is_square() || rho_v.rows() != dim_v {
            return Err(Error::DimensionMismatch {
                context: "rho_V matrix",
                expected: dim_v,
                found: rho_v.rows(),
            });
        }
        if let Some((i, j)) = automorphism_defect(g, &ad) {
            return Err(Error::NotAutomorphism { i, j });
        }
        let ad_inv = ad.inverse().ok_or(Error::NotInvertible("Ad"))?;
        let rho_v_inv = rho_v.inverse().ok_or(Error::NotInvertible("rho_V"))?;

        let module = m.g_module();
        let ad_cols = ad.columns();
        for (index, column) in ad_cols.iter().enumerate() {
            let conjugated = &(&rho_v * module.rho_basis(index)) * &rho_v_inv;
            if conjugated != module.rho(column) {
                return Err(Error::IntertwiningViolation { index });
            }
        }
        let omega_g = m.omega_g();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = rho_v.apply(&omega_g.value(&[i, j]));
                let rhs = omega_g.eval(&[&ad_cols[i], &ad_cols[j]]);
                if lhs != rhs {
                    return Err(Error::CocycleInvarianceViolation { i, j });
                }
            }
        }
        for (index, z) in m.v_h().basis_vectors().iter().enumerate() {
            if &rho_v.apply(z) != z {
                return Err(Error::InvariantsNotFixed { index });
            }
        }
        Ok(GroupElement {
            label: label.into(),
            ad,
            rho_v,
            ad_inv,
            rho_v_inv,
        })
    }

    pub fn identity(m: &MomentumMap) -> Self {
        let n = m.g_algebra().dim();
        let dim_v = m.g_module().dim();
        GroupElement {
            label: "1".into(),
            ad: Matrix::identity(n),
            rho_v: Matrix::identity(dim_v),
            ad_inv: Matrix::identity(n),
            rho_v_inv: Matrix::identity(dim_v),
        }
    }

    pub fn ad(&self) -> &Matrix {
        &self.ad
    }

    pub fn rho_v(&self) -> &Matrix {
        &self.rho_v
    }

    pub fn ad_inverse(&self) -> &Matrix {
        &self.ad_inv
    }

    /// Component-wise product `self * other`, revalidated.
    pub fn compose(&self, other: &GroupElement, m: &MomentumMap) -> Result<GroupElement> {
        GroupElement::new(
            format!("{}*{}", self.label, other.label),
            &self.ad * &other.ad,
            &self.rho_v * &other.rho_v,
            m,
        )
    }

    /// Component-wise inverse, revalidated.
    pub fn inverse(&self, m: &MomentumMap) -> Result<GroupElement> {
        GroupElement::new(
            format!("{}^-1", self.label),
            self.ad_inv.clone(),
            self.rho_v_inv.clone(),
            m,
        )
    }
}

/// `exp(t n) = sum_i t^i n^i / i!` for nilpotent `n`.
pub fn exp_nilpotent(n: &Matrix, t: &Rational) -> Result<Matrix> {
    if !n.is_square() {
        return Err(Error::NotNilpotent);
    }
    let dim = n.rows();
    if !n.pow(dim as u32).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut out = Matrix::identity(dim);
    let mut term = Matrix::identity(dim);
    for i in 1..dim.max(1) {
        term = (&term * n).scale(&(t / q(i as i64)));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// `exp(t x)` for `x` in `g`: `Ad = exp(t ad x)`, `rho_V = exp(t zeta(x))`.
pub fn one_parameter(m: &MomentumMap, x: &[Rational], t: &Rational) -> Result<GroupElement> {
    let ad = exp_nilpotent(&m.g_algebra().ad(x), t)?;
    let rho = exp_nilpotent(&m.g_module().rho(x), t)?;
    GroupElement::new(format!("exp({t} x)"), ad, rho, m)
}

/// `kappa(g)(X) = rho_V J(Ad^-1 X) - J(X)` as a `dim V x dim g` matrix.
pub fn kappa(g: &GroupElement, m: &MomentumMap) -> Result<Matrix> {
    let j = m.matrix();
    let k = &(&(&g.rho_v * j) * &g.ad_inv) - j;
    for (index, column) in k.columns().iter().enumerate() {
        if !m.v_h().contains(column) {
            return Err(Error::ValueOutsideInvariants { index });
        }
    }
    Ok(k)
}

/// `kappa(g1 g2) = g1.kappa(g2) + kappa(g1)` with `(g.c)(Y) = rho_V c(Ad^-1 Y)`.
pub fn kappa_cocycle_check(g1: &GroupElement, g2: &GroupElement, m: &MomentumMap) -> Result<bool> {
    let product = g1.compose(g2, m)?;
    let lhs = kappa(&product, m)?;
    let k1 = kappa(g1, m)?;
    let k2 = kappa(g2, m)?;
    let rhs = &(&(&g1.rho_v * &k2) * &g1.ad_inv) + &k1;
    Ok(lhs == rhs)
}

/// `kappa(g) o Ad(g) = -kappa(g^-1)`.
pub fn kappa_inverse_check(g: &GroupElement, m: &MomentumMap) -> Result<bool> {
    let inv = g.inverse(m)?;
    let lhs = &kappa(g, m)? * &g.ad;
    Ok(lhs == -&kappa(&inv, m)?)
}

/// `Ad_hat(g)(z, X) = (z + kappa(g)(Ad X), Ad X)` on `g_cen`.
///
/// Checks that the result is an automorphism fixing the kernel and that
/// `J_hat o Ad_hat(g) = rho_V o J_hat`.
pub fn hat_adjoint(
    g: &GroupElement,
    m: &MomentumMap,
    cen: &ExtensionPresentation,
) -> Result<Matrix> {
    let k = cen.kernel_dim();
    let n = m.g_algebra().dim();
    if cen.total.dim() != k + n || cen.kernel_basis != *m.v_h().basis() {
        return Err(Error::KernelMismatch("extension is not g_cen".into()));
    }
    let shift = &(&coordinate_matrix(m.v_h()) * &kappa(g, m)?) * &g.ad;
    let out = Matrix::from_fn(k + n, k + n, |r, c| match (r < k, c < k) {
        (true, true) if r == c => Rational::one(),
        (true, true) | (false, true) => Rational::zero(),
        (true, false) => shift.get(r, c - k).clone(),
        (false, false) => g.ad.get(r - k, c - k).clone(),
    });
    if let Some((i, j)) = automorphism_defect(&cen.total, &out) {
        return Err(Error::NotAutomorphism { i, j });
    }
    let hat = cen.kernel_basis.hstack(m.matrix());
    if &hat * &out != &g.rho_v * &hat {
        return Err(Error::IdentityFailure("J_hat is not G-equivariant".into()));
    }
    Ok(out)
}

/// The affine action `(g * alpha)(X) = alpha(Ad^-1 X) - kappa(g)(X)` on `Hom(g, V^h)`.
pub fn affine_action(g: &GroupElement, m: &MomentumMap, alpha: &Matrix) -> Result<Matrix> {
    if alpha.rows() != m.g_module().dim() || alpha.cols() != m.g_algebra().dim() {
        return Err(Error::DimensionMismatch {
            context: "affine action argument",
            expected: m.g_module().dim() * m.g_algebra().dim(),
            found: alpha.rows() * alpha.cols(),
        });
    }
    for (index, column) in alpha.columns().iter().enumerate() {
        if !m.v_h().contains(column) {
            return Err(Error::ValueOutsideInvariants { index });
        }
    }
    Ok(&(alpha * &g.ad_inv) - &kappa(g, m)?)
}
