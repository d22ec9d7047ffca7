//! The `hamflux/1` problem-file format.
//!
//! Documents are JSON. Rationals are strings `"p/q"` or `"p"`, indices are
//! 0-based, structure constants are sparse `[i, j, k, "c"]` entries meaning
//! `[e_i, e_j] = ... + c e_k + ...` (the entry for `[e_j, e_i]` is implied),
//! and 2-cochain entries are `[i, j, "c", a]` meaning component `a` of
//! `omega(e_i, e_j)`. Matrices are dense lists of rows.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{increasing_tuples, Cochain};
use crate::error::{Error, Result};
use crate::gallery::InstanceBundle;
use crate::lie::{adjoint_module, AlgebraHom, LieAlgebra, Module};
use crate::linear::{format_rational, parse_rational, Matrix, Rational};
use crate::momentum::{BaerProduct, ExtensionPresentation};

pub const SCHEMA: &str = "hamflux/1";

pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraDoc {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub dim: usize,
    /// One `dim x dim` matrix per basis element of the algebra.
    pub action: Vec<MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    /// The source algebra `g`.
    pub lie_algebra: LieAlgebraDoc,
    /// `dim h x dim g`; column `i` is the image of `e_i`.
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupElementDoc {
    pub label: String,
    pub ad: MatrixDoc,
    pub rho_v: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDoc {
    pub v: Vec<String>,
    pub xi: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutingDoc {
    pub zeta1: HomDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum1: Option<MatrixDoc>,
    pub zeta2: HomDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum2: Option<MatrixDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoetherDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flows: Vec<FlowDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commuting: Vec<CommutingDoc>,
}

/// Extension data attached to emitted documents; ignored by the analyses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub kind: String,
    pub base: LieAlgebraDoc,
    pub kernel_basis: MatrixDoc,
    pub kernel_injection: MatrixDoc,
    pub projection: MatrixDoc,
    pub section: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<MatrixDoc>,
}

/// The raw document, before any validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub schema: String,
    pub lie_algebra: LieAlgebraDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDoc>,
    #[serde(default)]
    pub omega: Vec<(usize, usize, String, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<HomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group_elements: Vec<GroupElementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noether: Option<NoetherDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDoc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElementInput {
    pub label: String,
    pub ad: Matrix,
    pub rho_v: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowInput {
    pub v: Vec<Rational>,
    pub xi: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutingInput {
    pub zeta1: AlgebraHom,
    pub momentum1: Option<Matrix>,
    pub zeta2: AlgebraHom,
    pub momentum2: Option<Matrix>,
}

/// A parsed and validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub module: Module,
    pub omega: Cochain,
    pub zeta: Option<AlgebraHom>,
    /// `dim V x dim g`, validated only against shapes here.
    pub momentum: Option<Matrix>,
    pub group_elements: Vec<GroupElementInput>,
    pub flows: Vec<FlowInput>,
    pub commuting: Vec<CommutingInput>,
    pub extension: Option<ExtensionDoc>,
}

impl Problem {
    pub fn algebra(&self) -> &LieAlgebra {
        self.module.algebra()
    }

    /// A problem carrying just the data of a gallery instance.
    pub fn from_bundle(bundle: &InstanceBundle) -> Self {
        Problem {
            module: bundle.module.clone(),
            omega: bundle.omega.clone(),
            zeta: bundle.zeta.clone(),
            momentum: None,
            group_elements: Vec::new(),
            flows: Vec::new(),
            commuting: Vec::new(),
            extension: None,
        }
    }

    /// The document for a Lie algebra alone, with the adjoint module and `omega = 0`.
    pub fn from_algebra(algebra: &LieAlgebra) -> Self {
        let n = algebra.dim();
        Problem {
            module: adjoint_module(algebra),
            omega: Cochain::zero(2, n, n),
            zeta: None,
            momentum: None,
            group_elements: Vec::new(),
            flows: Vec::new(),
            commuting: Vec::new(),
            extension: None,
        }
    }
}

fn parse_error(path: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        detail: detail.into(),
    }
}

fn rational(text: &str, path: &str) -> Result<Rational> {
    parse_rational(text).map_err(|detail| parse_error(path, detail))
}

fn vector(doc: &[String], len: usize, path: &str) -> Result<Vec<Rational>> {
    if doc.len() != len {
        return Err(parse_error(
            path,
            format!("expected {len} entries, found {}", doc.len()),
        ));
    }
    doc.iter()
        .enumerate()
        .map(|(i, s)| rational(s, &format!("{path}[{i}]")))
        .collect()
}

fn matrix(doc: &MatrixDoc, rows: usize, cols: usize, path: &str) -> Result<Matrix> {
    if doc.len() != rows {
        return Err(parse_error(
            path,
            format!("expected {rows} rows, found {}", doc.len()),
        ));
    }
    let rows = doc
        .iter()
        .enumerate()
        .map(|(r, row)| vector(row, cols, &format!("{path}[{r}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols).map_err(|e| e.at(path))
}

fn check_index(i: usize, bound: usize, path: &str) -> Result<()> {
    if i >= bound {
        return Err(parse_error(
            path,
            format!("index {i} out of range 0..{bound}"),
        ));
    }
    Ok(())
}

/// Builds and validates a Lie algebra from sparse structure constants.
pub fn parse_lie_algebra(doc: &LieAlgebraDoc, path: &str) -> Result<LieAlgebra> {
    let n = doc.dim;
    let mut entries: BTreeMap<(usize, usize, usize), (Rational, usize)> = BTreeMap::new();
    for (pos, (i, j, k, c)) in doc.brackets.iter().enumerate() {
        let here = format!("{path}.brackets[{pos}]");
        for x in [*i, *j, *k] {
            check_index(x, n, &here)?;
        }
        let c = rational(c, &format!("{here}[3]"))?;
        let (key, value) = if i < j {
            ((*i, *j, *k), c)
        } else {
            ((*j, *i, *k), -c)
        };
        if i == j {
            if !value.is_zero() {
                return Err(Error::AntisymmetryViolation {
                    i: *i,
                    j: *j,
                    k: *k,
                    residual: value.clone() + value,
                }
                .at(here));
            }
            continue;
        }
        if let Some((previous, _)) = entries.get(&key) {
            if *previous != value {
                let (a, b, k) = key;
                return Err(Error::AntisymmetryViolation {
                    i: a,
                    j: b,
                    k,
                    residual: previous - &value,
                }
                .at(here));
            }
        }
        entries.insert(key, (value, pos));
    }
    let mut structure = vec![Rational::zero(); n * n * n];
    for ((i, j, k), (value, _)) in entries {
        structure[(i * n + j) * n + k] = value.clone();
        structure[(j * n + i) * n + k] = -value;
    }
    LieAlgebra::new(n, structure).map_err(|e| e.at(format!("{path}.brackets")))
}

fn parse_hom(doc: &HomDoc, target: &LieAlgebra, path: &str) -> Result<AlgebraHom> {
    let source = parse_lie_algebra(&doc.lie_algebra, &format!("{path}.lie_algebra"))?;
    let m = matrix(
        &doc.matrix,
        target.dim(),
        source.dim(),
        &format!("{path}.matrix"),
    )?;
    AlgebraHom::new(m, source, target.clone()).map_err(|e| e.at(format!("{path}.matrix")))
}

fn parse_momentum(
    doc: &Option<MatrixDoc>,
    dim_v: usize,
    zeta: Option<&AlgebraHom>,
    path: &str,
) -> Result<Option<Matrix>> {
    match (doc, zeta) {
        (None, _) => Ok(None),
        (Some(_), None) => Err(parse_error(path, "momentum given without zeta")),
        (Some(d), Some(z)) => Ok(Some(matrix(d, dim_v, z.source().dim(), path)?)),
    }
}

/// Parses and validates a document. Structural problems are reported as
/// `Error::Parse` and failed validators as `Error::Validation`, both with the
/// JSON path of the offending value.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let deserializer = &mut serde_json::Deserializer::from_str(text);
    let doc: ProblemDoc = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        let path = e.path().to_string();
        parse_error(
            if path.is_empty() { "$".into() } else { path },
            e.inner().to_string(),
        )
    })?;
    problem_from_doc(&doc)
}

/// Validates an already deserialized document.
pub fn problem_from_doc(doc: &ProblemDoc) -> Result<Problem> {
    if doc.schema != SCHEMA {
        return Err(parse_error(
            "schema",
            format!("expected {SCHEMA:?}, found {:?}", doc.schema),
        ));
    }
    let algebra = parse_lie_algebra(&doc.lie_algebra, "lie_algebra")?;
    let n = algebra.dim();
    let module = match &doc.module {
        None => adjoint_module(&algebra),
        Some(md) => {
            if md.action.len() != n {
                return Err(parse_error(
                    "module.action",
                    format!("expected {n} matrices, found {}", md.action.len()),
                ));
            }
            let action = md
                .action
                .iter()
                .enumerate()
                .map(|(i, a)| matrix(a, md.dim, md.dim, &format!("module.action[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Module::new(algebra.clone(), md.dim, action).map_err(|e| e.at("module.action"))?
        }
    };
    let m = module.dim();

    let mut values: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    let mut seen: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    for (pos, (i, j, c, a)) in doc.omega.iter().enumerate() {
        let here = format!("omega[{pos}]");
        check_index(*i, n, &here)?;
        check_index(*j, n, &here)?;
        check_index(*a, m, &here)?;
        let c = rational(c, &format!("{here}[2]"))?;
        if i == j {
            if !c.is_zero() {
                return Err(parse_error(here, "omega must be alternating"));
            }
            continue;
        }
        let (key, value) = if i < j { ((*i, *j), c) } else { ((*j, *i), -c) };
        if let Some(previous) = seen.get(&(key.0, key.1, *a)) {
            if *previous != value {
                return Err(parse_error(here, "conflicting entries for omega"));
            }
            continue;
        }
        seen.insert((key.0, key.1, *a), value.clone());
        values
            .entry(key)
            .or_insert_with(|| vec![Rational::zero(); m])[*a] = value;
    }
    let omega = Cochain::from_fn(2, n, m, |t| {
        values
            .get(&(t[0], t[1]))
            .cloned()
            .unwrap_or_else(|| vec![Rational::zero(); m])
    });

    let zeta = doc
        .zeta
        .as_ref()
        .map(|z| parse_hom(z, &algebra, "zeta"))
        .transpose()?;
    let momentum = parse_momentum(&doc.momentum, m, zeta.as_ref(), "momentum")?;

    let mut group_elements = Vec::new();
    if !doc.group_elements.is_empty() && zeta.is_none() {
        return Err(parse_error("group_elements", "group elements need zeta"));
    }
    for (pos, g) in doc.group_elements.iter().enumerate() {
        let here = format!("group_elements[{pos}]");
        let k = zeta.as_ref().map_or(0, |z| z.source().dim());
        group_elements.push(GroupElementInput {
            label: g.label.clone(),
            ad: matrix(&g.ad, k, k, &format!("{here}.ad"))?,
            rho_v: matrix(&g.rho_v, m, m, &format!("{here}.rho_v"))?,
        });
    }

    let mut flows = Vec::new();
    let mut commuting = Vec::new();
    if let Some(nd) = &doc.noether {
        if !nd.flows.is_empty() && zeta.is_none() {
            return Err(parse_error("noether.flows", "flows need zeta"));
        }
        for (pos, f) in nd.flows.iter().enumerate() {
            let here = format!("noether.flows[{pos}]");
            flows.push(FlowInput {
                v: vector(&f.v, m, &format!("{here}.v"))?,
                xi: vector(&f.xi, n, &format!("{here}.xi"))?,
            });
        }
        for (pos, c) in nd.commuting.iter().enumerate() {
            let here = format!("noether.commuting[{pos}]");
            let zeta1 = parse_hom(&c.zeta1, &algebra, &format!("{here}.zeta1"))?;
            let zeta2 = parse_hom(&c.zeta2, &algebra, &format!("{here}.zeta2"))?;
            commuting.push(CommutingInput {
                momentum1: parse_momentum(
                    &c.momentum1,
                    m,
                    Some(&zeta1),
                    &format!("{here}.momentum1"),
                )?,
                momentum2: parse_momentum(
                    &c.momentum2,
                    m,
                    Some(&zeta2),
                    &format!("{here}.momentum2"),
                )?,
                zeta1,
                zeta2,
            });
        }
    }

    Ok(Problem {
        module,
        omega,
        zeta,
        momentum,
        group_elements,
        flows,
        commuting,
        extension: doc.extension.clone(),
    })
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn matrix_doc(m: &Matrix) -> MatrixDoc {
    m.row_vectors().iter().map(|r| strings(r)).collect()
}

/// Canonical sparse structure constants: `i < j`, nonzero entries, sorted.
pub fn lie_algebra_doc(algebra: &LieAlgebra) -> LieAlgebraDoc {
    let n = algebra.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (k, c) in algebra.bracket_basis(i, j).iter().enumerate() {
                if !c.is_zero() {
                    brackets.push((i, j, k, format_rational(c)));
                }
            }
        }
    }
    LieAlgebraDoc { dim: n, brackets }
}

fn hom_doc(hom: &AlgebraHom) -> HomDoc {
    HomDoc {
        lie_algebra: lie_algebra_doc(hom.source()),
        matrix: matrix_doc(hom.matrix()),
    }
}

/// The canonical document for a problem; the module is always written out.
/// Nonzero entries `[i, j, "p/q", a]` of a 2-cochain, `i < j`.
pub fn cochain_entries(c: &Cochain) -> Vec<(usize, usize, String, usize)> {
    let mut out = Vec::new();
    for t in increasing_tuples(c.algebra_dim(), 2) {
        for (a, x) in c.value(&t).iter().enumerate() {
            if !x.is_zero() {
                out.push((t[0], t[1], format_rational(x), a));
            }
        }
    }
    out
}

pub fn problem_doc(problem: &Problem) -> ProblemDoc {
    let m = problem.module.dim();
    let omega = cochain_entries(&problem.omega);
    let noether = if problem.flows.is_empty() && problem.commuting.is_empty() {
        None
    } else {
        Some(NoetherDoc {
            flows: problem
                .flows
                .iter()
                .map(|f| FlowDoc {
                    v: strings(&f.v),
                    xi: strings(&f.xi),
                })
                .collect(),
            commuting: problem
                .commuting
                .iter()
                .map(|c| CommutingDoc {
                    zeta1: hom_doc(&c.zeta1),
                    momentum1: c.momentum1.as_ref().map(matrix_doc),
                    zeta2: hom_doc(&c.zeta2),
                    momentum2: c.momentum2.as_ref().map(matrix_doc),
                })
                .collect(),
        })
    };
    ProblemDoc {
        schema: SCHEMA.into(),
        lie_algebra: lie_algebra_doc(problem.algebra()),
        module: Some(ModuleDoc {
            dim: m,
            action: problem
                .module
                .action_matrices()
                .iter()
                .map(matrix_doc)
                .collect(),
        }),
        omega,
        zeta: problem.zeta.as_ref().map(hom_doc),
        momentum: problem.momentum.as_ref().map(matrix_doc),
        group_elements: problem
            .group_elements
            .iter()
            .map(|g| GroupElementDoc {
                label: g.label.clone(),
                ad: matrix_doc(&g.ad),
                rho_v: matrix_doc(&g.rho_v),
            })
            .collect(),
        noether,
        extension: problem.extension.clone(),
    }
}

/// Canonical JSON text with a trailing newline: objects and nested arrays
/// are indented, arrays of scalars stay on one line.
pub fn to_json(problem: &Problem) -> String {
    let value = serde_json::to_value(problem_doc(problem)).expect("serializable");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

/// [`to_json`] layout for an arbitrary serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// A document whose algebra is the extension's total space, with the
/// extension data attached.
pub fn extension_problem(
    kind: &str,
    ext: &ExtensionPresentation,
    baer: Option<&BaerProduct>,
) -> Problem {
    let mut problem = Problem::from_algebra(&ext.total);
    problem.extension = Some(ExtensionDoc {
        kind: kind.into(),
        base: lie_algebra_doc(&ext.base),
        kernel_basis: matrix_doc(&ext.kernel_basis),
        kernel_injection: matrix_doc(&ext.kernel_injection),
        projection: matrix_doc(&ext.projection),
        section: matrix_doc(&ext.section),
        witness: baer.map(|b| matrix_doc(&b.witness)),
        equivalence: baer.map(|b| matrix_doc(b.equivalence.matrix())),
    });
    problem
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{heisenberg, matrix_algebra_example};

    #[test]
    fn minimal_abelian_document() {
        let p = parse_problem(r#"{"schema": "hamflux/1", "lie_algebra": {"dim": 2}}"#).unwrap();
        assert_eq!(p.algebra(), &LieAlgebra::abelian(2));
        assert!(p.omega.is_zero());
        assert_eq!(p.module.dim(), 2);
    }

    #[test]
    fn zero_denominator_has_a_path() {
        let text = r#"{"schema": "hamflux/1",
            "lie_algebra": {"dim": 3, "brackets": [[0, 1, 2, "1/0"]]}}"#;
        match parse_problem(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "lie_algebra.brackets[0][3]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors_have_paths() {
        let text = r#"{"schema": "hamflux/1", "lie_algebra": {"dim": "x"}}"#;
        match parse_problem(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "lie_algebra.dim"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"schema": "hamflux/2", "lie_algebra": {"dim": 1}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn conflicting_brackets_are_antisymmetry_violations() {
        let text = r#"{"schema": "hamflux/1",
            "lie_algebra": {"dim": 3, "brackets": [[0, 1, 2, "1"], [1, 0, 2, "1"]]}}"#;
        match parse_problem(text) {
            Err(Error::Validation { source, .. }) => {
                assert!(matches!(*source, Error::AntisymmetryViolation { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversed_entries_are_implied() {
        let text = r#"{"schema": "hamflux/1",
            "lie_algebra": {"dim": 3, "brackets": [[1, 0, 2, "-1"]]}}"#;
        assert_eq!(parse_problem(text).unwrap().algebra(), &heisenberg());
    }

    #[test]
    fn round_trip() {
        let mut p = Problem::from_bundle(&matrix_algebra_example(2).unwrap());
        p.momentum = Some(Matrix::zeros(4, 3));
        let text = to_json(&p);
        let back = parse_problem(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(to_json(&back), text);
    }
}
