//! Conserved quantities: invariance of a momentum map along a hamiltonian
//! direction, and commuting hamiltonian actions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ham::HamiltonianAnalysis;
use crate::linear::{is_zero_vector, serialize_rationals, unit_vector, Rational};
use crate::momentum::MomentumMap;

/// A residual that must vanish, indexed by basis elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: &'static str,
    pub indices: Vec<usize>,
    #[serde(serialize_with = "serialize_rationals")]
    pub residual: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoetherReport {
    pub hypothesis_ok: bool,
    pub conclusion_ok: bool,
    /// Named sub-checks of the conclusion.
    pub sub_checks: Vec<(&'static str, bool)>,
    pub witnesses: Vec<Witness>,
}

impl NoetherReport {
    fn from_witnesses(witnesses: Vec<Witness>, checks: &[&'static str]) -> Self {
        let sub_checks: Vec<(&'static str, bool)> = checks
            .iter()
            .map(|&name| {
                let ok = witnesses
                    .iter()
                    .filter(|w| w.check == name)
                    .all(|w| is_zero_vector(&w.residual));
                (name, ok)
            })
            .collect();
        NoetherReport {
            hypothesis_ok: true,
            conclusion_ok: sub_checks.iter().all(|(_, ok)| *ok),
            sub_checks,
            witnesses,
        }
    }
}

/// For `d v = i_xi omega` with `v` fixed by `g`, checks `xi.J(X) = 0` for all `X`.
pub fn invariant_flow_check(
    analysis: &HamiltonianAnalysis,
    m: &MomentumMap,
    v: &[Rational],
    xi: &[Rational],
) -> Result<NoetherReport> {
    same_analysis(analysis, m)?;
    if v.len() != analysis.module_dim() || xi.len() != analysis.algebra_dim() {
        return Err(Error::DimensionMismatch {
            context: "noether flow",
            expected: analysis.module_dim() + analysis.algebra_dim(),
            found: v.len() + xi.len(),
        });
    }
    if !analysis.is_lift(v, xi) {
        return Err(Error::HypothesisViolation("d v != i_xi omega".into()));
    }
    let n = m.g_algebra().dim();
    for i in 0..n {
        if !is_zero_vector(&m.g_module().act_basis(i, v)) {
            return Err(Error::HypothesisViolation(format!(
                "v is not fixed by basis element {i} of g"
            )));
        }
    }
    let witnesses = (0..n)
        .map(|i| Witness {
            check: "xi.J(X) = 0",
            indices: vec![i],
            residual: analysis.module().act(xi, &m.apply(&unit_vector(n, i))),
        })
        .collect();
    Ok(NoetherReport::from_witnesses(witnesses, &["xi.J(X) = 0"]))
}

/// For `J2(g2)` fixed by `g1`, checks that `J1(g1)` is fixed by `g2` and
/// that `[zeta1(X), zeta2(Y)]` lies in the radical.
pub fn commuting_actions_check(
    analysis: &HamiltonianAnalysis,
    m1: &MomentumMap,
    m2: &MomentumMap,
) -> Result<NoetherReport> {
    same_analysis(analysis, m1)?;
    same_analysis(analysis, m2)?;
    let (n1, n2) = (m1.g_algebra().dim(), m2.g_algebra().dim());
    for i in 0..n1 {
        for j in 0..n2 {
            let value = m1.g_module().act_basis(i, &m2.matrix().column(j));
            if !is_zero_vector(&value) {
                return Err(Error::HypothesisViolation(format!(
                    "J2(e_{j}) is not fixed by e_{i} of g1"
                )));
            }
        }
    }
    let algebra = analysis.module().algebra();
    let mut witnesses = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            witnesses.push(Witness {
                check: "J1 values fixed by g2",
                indices: vec![i, j],
                residual: m2.g_module().act_basis(j, &m1.matrix().column(i)),
            });
            let bracket =
                algebra.bracket(&m1.zeta().image_of_basis(i), &m2.zeta().image_of_basis(j));
            witnesses.push(Witness {
                check: "i_[zeta1 X, zeta2 Y] omega = 0",
                indices: vec![i, j],
                residual: analysis.contract_omega(&bracket),
            });
            witnesses.push(Witness {
                check: "i_[zeta1 X, zeta2 Y] d omega = 0",
                indices: vec![i, j],
                residual: analysis.contract_d_omega(&bracket),
            });
        }
    }
    Ok(NoetherReport::from_witnesses(
        witnesses,
        &[
            "J1 values fixed by g2",
            "i_[zeta1 X, zeta2 Y] omega = 0",
            "i_[zeta1 X, zeta2 Y] d omega = 0",
        ],
    ))
}

fn same_analysis(analysis: &HamiltonianAnalysis, m: &MomentumMap) -> Result<()> {
    let other = m.analysis();
    if other.module() != analysis.module() || other.omega() != analysis.omega() {
        return Err(Error::InvariantViolation(
            "momentum map belongs to a different module or cochain".into(),
        ));
    }
    Ok(())
}
