//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use eqexc_core::builder::BuildOptions;
use eqexc_core::catalogs::{permutation_character, projective};
use eqexc_core::{Cocycle2, CentralExt, ExcCollection, FiniteGroup, GroupAction, Perm};

pub fn perm_group(degree: usize, gens: &[&str]) -> (Arc<FiniteGroup>, Vec<Perm>) {
    let gens: Vec<Perm> = gens.iter().map(|s| Perm::parse_cycles(s, degree).unwrap()).collect();
    let (g, elems) = FiniteGroup::from_generators(degree, &gens).unwrap();
    (Arc::new(g), elems)
}

pub fn s4() -> Arc<FiniteGroup> {
    perm_group(4, &["(0 1 2 3)", "(0 1)"]).0
}

/// Klein four with the cocycle `α(x, y) = x₂ y₁` on `a^{x₁} b^{x₂}`.
pub fn klein_twist() -> Cocycle2 {
    let (g, _) = perm_group(4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
    let (a, b) = (g.generators()[0], g.generators()[1]);
    let mut coords = [(0, 0); 4];
    for x1 in 0..2 {
        for x2 in 0..2 {
            coords[g.mul(g.pow(a, x1), g.pow(b, x2))] = (x1, x2);
        }
    }
    let rows = (0..4).map(|x| (0..4).map(|y| coords[x].1 * coords[y].0).collect()).collect();
    Cocycle2::new(g, 2, rows).unwrap()
}

/// `P^{n-1}` with `S_n` permuting coordinates, ready for `build`.
pub fn projective_sn(n: usize) -> (ExcCollection, GroupAction, BuildOptions) {
    let cycle = format!("({})", (0..n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
    let (g, elems) = perm_group(n, &["(0 1)", &cycle]);
    let ext = Arc::new(CentralExt::new(&Cocycle2::trivial(Arc::clone(&g), 1)).unwrap());
    let v = permutation_character(&ext, &elems).unwrap();
    let coll = projective(n, ext, &v).unwrap();
    let action = GroupAction::trivial(g, n);
    (coll, action, BuildOptions::default())
}
