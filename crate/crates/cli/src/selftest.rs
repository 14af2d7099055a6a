//! Seeded property checks over random small inputs.

use std::sync::Arc;

use eqexc_core::kmodel::{gram_of, is_unipotent_upper, mutate, Side};
use eqexc_core::reps::{character_table, projective_irreps};
use eqexc_core::{Cocycle2, FiniteGroup, KClass, Perm, PicLattice};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

fn random_perm_group(rng: &mut ChaCha8Rng) -> (FiniteGroup, Vec<Perm>) {
    let degree = rng.gen_range(2..=5);
    let ngens = rng.gen_range(1..=2);
    let gens: Vec<Perm> = (0..ngens)
        .map(|_| {
            let mut images: Vec<usize> = (0..degree).collect();
            images.shuffle(rng);
            Perm::from_images(images).unwrap()
        })
        .collect();
    let (g, _) = FiniteGroup::from_generators(degree, &gens).unwrap();
    (g, gens)
}

/// `class_order(α)` divides `|G|`, and weight-`i` irreps satisfy `Σ dim² = |G|`.
fn cocycles(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut failures = Vec::new();
    for case in 0..cases {
        let (g, gens) = random_perm_group(rng);
        if g.order() > 24 {
            continue;
        }
        let g = Arc::new(g);
        let d = rng.gen_range(2..=4);
        let mut alpha = Cocycle2::trivial(Arc::clone(&g), d);
        for c in Cocycle2::space_generators(Arc::clone(&g), d) {
            alpha = alpha.combine(&c, (1, rng.gen_range(0..d as i64))).unwrap();
        }
        let n = g.order();
        if n % alpha.class_order() != 0 {
            failures.push(format!("case {case} {gens:?}: class order {} ∤ {n}", alpha.class_order()));
        }
        let i = rng.gen_range(0..d as i64);
        match projective_irreps(&alpha, i) {
            Ok(irreps) => {
                let sq: u64 = irreps.iter().map(|x| x.dim() * x.dim()).sum();
                if sq as usize != n {
                    failures.push(format!("case {case} {gens:?}: weight {i} gives Σ dim² = {sq}"));
                }
            }
            Err(e) => failures.push(format!("case {case} {gens:?}: {e}")),
        }
    }
    Check {
        name: "cocycle class orders and weight decompositions",
        cases,
        failures,
    }
}

fn tables(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut failures = Vec::new();
    for case in 0..cases {
        let (g, gens) = random_perm_group(rng);
        match character_table(Arc::new(g)).and_then(|t| t.verify()) {
            Ok(()) => {}
            Err(e) => failures.push(format!("case {case} {gens:?}: {e}")),
        }
    }
    Check {
        name: "character table orthogonality",
        cases,
        failures,
    }
}

fn mutations(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut failures = Vec::new();
    for case in 0..cases {
        let lat = PicLattice::del_pezzo(rng.gen_range(0..=4));
        let twist: Vec<i64> = (0..lat.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let l = lat.line();
        let mut classes: Vec<KClass> = (0..3)
            .map(|k| {
                let d: Vec<i64> = l.iter().zip(&twist).map(|(a, b)| k * a + b).collect();
                KClass::line_bundle(&lat, &d)
            })
            .collect();
        for _ in 0..rng.gen_range(0..4) {
            let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
            classes = mutate(&lat, &classes, rng.gen_range(0..2), side).unwrap();
        }
        for pos in 0..2 {
            let there = mutate(&lat, &classes, pos, Side::Left);
            let back = there.as_ref().ok().and_then(|t| mutate(&lat, t, pos, Side::Right).ok());
            if back.as_ref() != Some(&classes) {
                failures.push(format!("case {case}: right after left is not the identity at {pos}"));
            }
            if let Ok(t) = there {
                if !gram_of(&lat, &t).is_ok_and(|g| is_unipotent_upper(&g)) {
                    failures.push(format!("case {case}: mutation at {pos} lost unipotence"));
                }
            }
        }
    }
    Check {
        name: "mutations invert and keep unipotence",
        cases,
        failures,
    }
}

pub fn run(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        cocycles(&mut rng, cases),
        tables(&mut rng, cases),
        mutations(&mut rng, cases),
    ]
}
