#![allow(dead_code)]

use hamflux::complex::Cochain;
use hamflux::gallery::{random_instance, InstanceBundle};
use hamflux::linear::{q, zero_vector, Rational};
use hamflux::Module;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()
}

pub fn dims_for(seed: u64) -> (usize, usize) {
    (1 + (seed % 4) as usize, 1 + ((seed / 4) % 4) as usize)
}

pub fn instance(seed: u64) -> InstanceBundle {
    random_instance(dims_for(seed), seed).expect("random instance")
}

fn add_into(acc: &mut [Rational], sign: i64, v: &[Rational]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += q(sign) * x;
    }
}

/// The Chevalley–Eilenberg differential evaluated directly on arbitrary
/// vectors, independent of the basis-level implementation.
pub fn naive_d(module: &Module, c: &Cochain, args: &[Vec<Rational>]) -> Vec<Rational> {
    let p = c.degree();
    assert_eq!(args.len(), p + 1);
    let algebra = module.algebra();
    let mut acc = zero_vector(module.dim());
    for i in 0..=p {
        let rest: Vec<&[Rational]> = (0..=p)
            .filter(|&k| k != i)
            .map(|k| args[k].as_slice())
            .collect();
        let value = module.act(&args[i], &c.eval(&rest));
        add_into(&mut acc, if i % 2 == 0 { 1 } else { -1 }, &value);
    }
    for i in 0..=p {
        for j in i + 1..=p {
            let bracket = algebra.bracket(&args[i], &args[j]);
            let mut rest: Vec<&[Rational]> = vec![bracket.as_slice()];
            rest.extend(
                (0..=p)
                    .filter(|&k| k != i && k != j)
                    .map(|k| args[k].as_slice()),
            );
            add_into(
                &mut acc,
                if (i + j) % 2 == 0 { 1 } else { -1 },
                &c.eval(&rest),
            );
        }
    }
    acc
}

/// `(i_x c)(rest) = c(x, rest)` evaluated directly.
pub fn naive_contract(x: &[Rational], c: &Cochain, rest: &[Vec<Rational>]) -> Vec<Rational> {
    let mut args: Vec<&[Rational]> = vec![x];
    args.extend(rest.iter().map(Vec::as_slice));
    c.eval(&args)
}

/// `V = L` over `L / z(L)` for a random solvable `L` with a proper nonzero center.
pub fn central_instance(seed: u64) -> Option<InstanceBundle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = hamflux::gallery::random_lie_algebra(3 + (seed % 3) as usize, &mut rng).ok()?;
    let z = l.center();
    if z.dim() == 0 || z.dim() == l.dim() {
        return None;
    }
    hamflux::gallery::from_central_extension(&l, &z).ok()
}
