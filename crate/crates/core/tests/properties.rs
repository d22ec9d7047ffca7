mod common;

use hamflux::complex::{contract, differential, invariant_vectors, lie_derivative, Cochain};
use hamflux::gallery::{random_cochain, random_vector};
use hamflux::ham::{analyze, hamiltonian_lift, poisson_bracket, HamiltonianAnalysis};
use hamflux::linear::{add_vectors, intersect, is_zero_vector, kernel_basis, q, Matrix, Subspace};
use hamflux::momentum::{
    baer_product_lie, build_abelian_extension, build_central_extension, equivalence_report,
    equivariantize, is_equivalence, solve_momentum, tau_cochain, tau_cocycle, Equivariantization,
    MomentumMap,
};
use hamflux::noether::{commuting_actions_check, invariant_flow_check};
use hamflux::{Error, Rational};
use proptest::prelude::*;

fn analysis_for(seed: u64) -> (hamflux::gallery::InstanceBundle, HamiltonianAnalysis) {
    let bundle = common::instance(seed);
    let analysis = analyze(&bundle.module, &bundle.omega).unwrap();
    (bundle, analysis)
}

fn combination(rng: &mut rand_chacha::ChaCha8Rng, sub: &Subspace) -> Vec<Rational> {
    sub.vector(&random_vector(sub.dim(), rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complex_identities(seed in 0u64..100_000) {
        let bundle = common::instance(seed);
        let module = &bundle.module;
        let n = module.algebra().dim();
        let mut rng = common::rng(seed);
        for degree in 0..=2 {
            let c = random_cochain(degree, module, &mut rng);
            let dc = differential(module, &c).unwrap();
            let args: Vec<_> = (0..=degree).map(|_| common::random_vec(&mut rng, n)).collect();
            let refs: Vec<&[Rational]> = args.iter().map(Vec::as_slice).collect();
            prop_assert_eq!(dc.eval(&refs), common::naive_d(module, &c, &args));
            if degree < 2 {
                prop_assert!(differential(module, &dc).unwrap().is_zero());
            }
            let x = common::random_vec(&mut rng, n);
            let y = common::random_vec(&mut rng, n);
            if degree >= 1 {
                let rest: Vec<_> = (1..degree).map(|_| common::random_vec(&mut rng, n)).collect();
                let rest_refs: Vec<&[Rational]> = rest.iter().map(Vec::as_slice).collect();
                let ixc = contract(&x, &c).unwrap();
                prop_assert_eq!(ixc.eval(&rest_refs), common::naive_contract(&x, &c, &rest));
                // Cartan
                let lhs = lie_derivative(module, &x, &c).unwrap();
                let rhs = contract(&x, &dc).unwrap().add(&differential(module, &ixc).unwrap());
                prop_assert_eq!(lhs, rhs);
                // [L_x, i_y] = i_[x,y]
                let iyc = contract(&y, &c).unwrap();
                let commutator = lie_derivative(module, &x, &iyc)
                    .unwrap()
                    .sub(&contract(&y, &lie_derivative(module, &x, &c).unwrap()).unwrap());
                let xy = module.algebra().bracket(&x, &y);
                prop_assert_eq!(commutator, contract(&xy, &c).unwrap());
            }
        }
    }
}

fn check_momentum(
    seed: u64,
    bundle: &hamflux::gallery::InstanceBundle,
    a: &HamiltonianAnalysis,
) -> Result<(), TestCaseError> {
    let zeta = bundle.zeta.clone().unwrap();
    let sol = solve_momentum(a, &zeta).unwrap();
    let m = &sol.map;
    let g = m.g_algebra();
    let k = g.dim();
    prop_assert_eq!(sol.freedom_dim(), k * a.v_h.dim());
    let mut rng = common::rng(seed);

    // tau = d_g J + omega_g on random arguments
    let tau = tau_cochain(m);
    let x = common::random_vec(&mut rng, k);
    let y = common::random_vec(&mut rng, k);
    let dj = common::naive_d(m.g_module(), &m.as_cochain(), &[x.clone(), y.clone()]);
    let og = a.omega_at(&zeta.apply(&x), &zeta.apply(&y));
    prop_assert_eq!(tau.eval(&[&x, &y]), add_vectors(&dj, &og));
    prop_assert!(a.v_h.contains(&tau.eval(&[&x, &y])));
    for i in 0..k {
        prop_assert!(lie_derivative(
            m.g_module(),
            &hamflux::linear::unit_vector(k, i),
            m.omega_g()
        )
        .unwrap()
        .is_zero());
    }

    // J + c is a momentum map exactly when c takes values in V^h
    let mut c = Matrix::zeros(a.module_dim(), k);
    for f in &sol.freedom {
        c = &c + &f.scale(&q(rand::Rng::gen_range(&mut rng, -2..=2)));
    }
    let shifted = MomentumMap::new(a, &zeta, m.matrix() + &c).unwrap();
    prop_assert_eq!(
        tau_cocycle(&shifted).unwrap().h2_class,
        tau_cocycle(m).unwrap().h2_class
    );
    let arbitrary = Matrix::from_columns(
        a.module_dim(),
        &(0..k)
            .map(|_| random_vector(a.module_dim(), &mut rng))
            .collect::<Vec<_>>(),
    );
    let inside = arbitrary.columns().iter().all(|col| a.v_h.contains(col));
    prop_assert_eq!(
        MomentumMap::new(a, &zeta, m.matrix() + &arbitrary).is_ok(),
        inside
    );

    // four equivalent conditions agree, both when they hold and when they fail
    for map in [m, &shifted] {
        let report = equivalence_report(map).unwrap();
        prop_assert!(report.consistent());
        let equivariant = (0..k).all(|i| {
            (0..k).all(|j| {
                let ei = hamflux::linear::unit_vector(k, i);
                let ej = hamflux::linear::unit_vector(k, j);
                map.apply(&g.bracket(&ei, &ej)) == map.g_module().act(&ei, &map.apply(&ej))
            })
        });
        prop_assert_eq!(report.equivariant, equivariant);
        prop_assert_eq!(report.tau_vanishes, tau_cochain(map).is_zero());
    }
    match equivariantize(m).unwrap() {
        Equivariantization::Equivariant { map, .. } => {
            let report = equivalence_report(&map).unwrap();
            prop_assert!(
                report.tau_vanishes
                    && report.equivariant
                    && report.poisson_homomorphism
                    && report.section_homomorphism
            );
        }
        Equivariantization::Obstructed { class } => {
            prop_assert!(!class.is_zero());
            prop_assert!(!equivalence_report(&shifted).unwrap().tau_vanishes);
        }
    }

    // extensions
    let cen = build_central_extension(m).unwrap();
    prop_assert!(cen.is_central());
    prop_assert_eq!(cen.kernel_dim(), a.v_h.dim());
    let ab = build_abelian_extension(a, &zeta).unwrap();
    let baer = baer_product_lie(m, &cen).unwrap();
    prop_assert_eq!(&baer.equivalence.target().clone(), &ab.total);
    prop_assert!(is_equivalence(&baer.equivalence, &baer.extension, &ab));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn poisson_structure(seed in 0u64..100_000) {
        let (bundle, a) = analysis_for(seed);
        let module = &bundle.module;
        let n = module.algebra().dim();
        prop_assert!(differential(module, &bundle.omega).unwrap().is_zero());
        let mut rng = common::rng(seed);
        let basis = a.v_omega.basis_vectors();
        let pb = |x: &[Rational], y: &[Rational]| poisson_bracket(&a, x, y).unwrap();
        for u in &basis {
            for v in &basis {
                let uv = pb(u, v);
                prop_assert!(a.v_omega.contains(&uv));
                prop_assert_eq!(add_vectors(&uv, &pb(v, u)), vec![q(0); uv.len()]);
                for w in &basis {
                    let sum = add_vectors(&add_vectors(&pb(u, &pb(v, w)), &pb(v, &pb(w, u))), &pb(w, &pb(u, v)));
                    prop_assert!(is_zero_vector(&sum));
                }
            }
            let xi = hamiltonian_lift(&a, u).unwrap();
            let r = combination(&mut rng, &a.rad);
            let shifted = add_vectors(&xi, &r);
            prop_assert!(a.is_lift(u, &shifted));
            let other = combination(&mut rng, &a.v_omega);
            let eta = hamiltonian_lift(&a, &other).unwrap();
            let direct = a.omega_at(&shifted, &eta);
            prop_assert_eq!(direct, a.omega_at(&xi, &eta));
            for z in a.v_h.basis_vectors() {
                prop_assert!(is_zero_vector(&pb(&z, u)));
            }
        }

        // sequences
        let d_image = Subspace::span(
            Cochain::space_dim(1, n, module.dim()),
            &basis.iter().map(|v| a.d_vector(v)).collect::<Vec<_>>(),
        );
        let ham_image = Subspace::span(
            d_image.ambient_dim(),
            &a.ham.basis_vectors().iter().map(|x| a.contract_omega(x)).collect::<Vec<_>>(),
        );
        prop_assert_eq!(a.ham.dim(), a.rad.dim() + ham_image.dim());
        prop_assert_eq!(&ham_image, &d_image);
        prop_assert_eq!(a.v_omega.dim(), a.v_h.dim() + d_image.dim());
        prop_assert_eq!(&a.v_h, &invariant_vectors(module));

        // sp as {L_x omega = 0, i_x d omega = 0} and as {d i_x omega = 0, i_x d omega = 0}
        let d_omega = differential(module, &bundle.omega).unwrap();
        let e: Vec<Vec<Rational>> = (0..n).map(|i| hamflux::linear::unit_vector(n, i)).collect();
        let stacked = |f: &dyn Fn(&[Rational]) -> Vec<Rational>| {
            let cols: Vec<Vec<Rational>> = e.iter().map(|x| f(x)).collect();
            kernel_basis(&Matrix::from_columns(cols[0].len(), &cols))
        };
        let first = stacked(&|x| {
            let mut v = lie_derivative(module, x, &bundle.omega).unwrap().flat().to_vec();
            v.extend(contract(x, &d_omega).unwrap().flat().to_vec());
            v
        });
        let second = stacked(&|x| {
            let ix = contract(x, &bundle.omega).unwrap();
            let mut v = differential(module, &ix).unwrap().flat().to_vec();
            v.extend(contract(x, &d_omega).unwrap().flat().to_vec());
            v
        });
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(&first, &a.sp);
        prop_assert_eq!(&a.sp_via_exactness().unwrap(), &a.sp);

        // ham is an ideal of sp
        let h = module.algebra();
        for x in a.sp.basis_vectors() {
            for y in a.ham.basis_vectors() {
                prop_assert!(a.ham.contains(&h.bracket(&x, &y)));
            }
        }
    }

    #[test]
    fn momentum_maps(seed in 0u64..100_000) {
        let (bundle, a) = analysis_for(seed);
        check_momentum(seed, &bundle, &a)?;
    }

    #[test]
    fn momentum_maps_on_central_extensions(seed in 0u64..100_000) {
        let bundle = common::central_instance(seed);
        prop_assume!(bundle.is_some());
        let bundle = bundle.unwrap();
        let a = analyze(&bundle.module, &bundle.omega).unwrap();
        check_momentum(seed, &bundle, &a)?;
    }
    #[test]
    fn noether_on_engineered_instances(seed in 0u64..100_000) {
        let (bundle, a) = analysis_for(seed);
        let zeta = bundle.zeta.clone().unwrap();
        let m = solve_momentum(&a, &zeta).unwrap().map;
        let fixed = intersect(&invariant_vectors(m.g_module()), &a.v_omega).unwrap();
        let mut rng = common::rng(seed);
        let v = combination(&mut rng, &fixed);
        let xi = hamiltonian_lift(&a, &v).unwrap();
        let report = invariant_flow_check(&a, &m, &v, &xi).unwrap();
        prop_assert!(report.hypothesis_ok && report.conclusion_ok);
        for i in 0..m.g_algebra().dim() {
            let j = m.matrix().column(i);
            prop_assert!(is_zero_vector(&a.module().act(&xi, &j)));
        }

        if !is_zero_vector(&xi) {
            let h = a.module().algebra();
            let zeta2 = h.subalgebra(&Subspace::span(h.dim(), std::slice::from_ref(&xi))).unwrap();
            let b = zeta2.image_of_basis(0);
            let p = xi.iter().position(|x| *x != q(0)).unwrap();
            let scale = &b[p] / &xi[p];
            let j2 = Matrix::from_columns(a.module_dim(), &[hamflux::linear::scale_vector(&scale, &v)]);
            let m2 = MomentumMap::new(&a, &zeta2, j2).unwrap();
            let report = commuting_actions_check(&a, &m, &m2).unwrap();
            prop_assert!(report.conclusion_ok);
            for i in 0..m.g_algebra().dim() {
                let bracket = h.bracket(&zeta.image_of_basis(i), &b);
                prop_assert!(a.rad.contains(&bracket));
            }
        }

        let moved = a.v_omega.basis_vectors().into_iter().find(|u| !invariant_vectors(m.g_module()).contains(u));
        if let Some(u) = moved {
            let eta = hamiltonian_lift(&a, &u).unwrap();
            let outcome = invariant_flow_check(&a, &m, &u, &eta);
            prop_assert!(matches!(outcome, Err(Error::HypothesisViolation(_))), "{:?}", outcome);
        }
    }
}
