//! Regenerates the golden problem files: `cargo run --example write_fixtures -- <dir>`.

use std::path::PathBuf;

use hamflux::gallery::{
    from_central_extension, heisenberg, matrix_algebra_example, random_instance, trivial_instance,
};
use hamflux::group::one_parameter;
use hamflux::ham::analyze;
use hamflux::linear::{frac, q, unit_vector, zero_vector, Matrix, Subspace};
use hamflux::momentum::solve_momentum;
use hamflux::problem::{to_json, CommutingInput, FlowInput, GroupElementInput, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, p: &Problem| std::fs::write(dir.join(name), to_json(p));

    let sl2 = matrix_algebra_example(2)?;
    let mut p = Problem::from_bundle(&sl2);
    let analysis = analyze(&sl2.module, &sl2.omega)?;
    let m = solve_momentum(&analysis, sl2.zeta.as_ref().unwrap())?.map;
    let g = one_parameter(&m, &unit_vector(3, 0), &q(1))?;
    p.group_elements.push(GroupElementInput {
        label: "exp(e)".into(),
        ad: g.ad().clone(),
        rho_v: g.rho_v().clone(),
    });
    p.flows.push(FlowInput {
        v: vec![q(1), q(0), q(0), q(1)],
        xi: zero_vector(3),
    });
    let h = sl2.algebra();
    let line = h.subalgebra(&Subspace::span(3, &[unit_vector(3, 0)]))?;
    let minus_e = Matrix::from_columns(4, &[vec![q(0), q(-1), q(0), q(0)]]);
    p.commuting.push(CommutingInput {
        zeta1: line.clone(),
        momentum1: Some(minus_e.clone()),
        zeta2: line,
        momentum2: Some(minus_e),
    });
    write("sl2.json", &p)?;

    let z = Subspace::span(3, &[unit_vector(3, 2)]);
    let heis = from_central_extension(&heisenberg(), &z)?;
    let mut p = Problem::from_bundle(&heis);
    let analysis = analyze(&heis.module, &heis.omega)?;
    let m = solve_momentum(&analysis, heis.zeta.as_ref().unwrap())?.map;
    p.momentum = Some(m.matrix().clone());
    let g = one_parameter(&m, &unit_vector(2, 0), &frac(1, 2))?;
    p.group_elements.push(GroupElementInput {
        label: "exp(x/2)".into(),
        ad: g.ad().clone(),
        rho_v: g.rho_v().clone(),
    });
    p.flows.push(FlowInput {
        v: vec![q(0), q(0), q(1)],
        xi: zero_vector(2),
    });
    write("heisenberg.json", &p)?;

    let mut violating = Problem::from_bundle(&heis);
    let h = heis.algebra();
    let gx = h.subalgebra(&Subspace::span(2, &[unit_vector(2, 0)]))?;
    let gy = h.subalgebra(&Subspace::span(2, &[unit_vector(2, 1)]))?;
    violating.commuting.push(CommutingInput {
        zeta1: gx,
        momentum1: None,
        zeta2: gy,
        momentum2: None,
    });
    write("heisenberg_noether_violation.json", &violating)?;

    write(
        "zero_omega.json",
        &Problem::from_bundle(&trivial_instance(&heisenberg())?),
    )?;
    write(
        "random_seed0.json",
        &Problem::from_bundle(&random_instance((2, 2), 0)?),
    )?;
    Ok(())
}
