//! Root systems and Chevalley-style bases: counts, inner products,
//! reflections, structure constants and the Casimir element.

use rmatrix::chevalley::ChevalleyBasis;
use rmatrix::rational::{q_to_string, qi};
use rmatrix::rootsys::{RootSystem, Series};
use rmatrix::tensor::Tensor;

fn main() {
    for (s, rank) in [
        (Series::A, 2),
        (Series::B, 2),
        (Series::G, 2),
        (Series::D, 4),
    ] {
        let rs = RootSystem::build(s, rank).unwrap();
        println!(
            "{s}{rank}: {} roots, {} positive",
            rs.n_roots(),
            rs.n_pos()
        );
        let lengths: std::collections::BTreeSet<String> = rs
            .roots
            .iter()
            .map(|r| q_to_string(&rs.inner(r, r)))
            .collect();
        println!("  squared lengths: {:?}", lengths);
    }

    // the normalized form on B2: short roots have squared length 1
    let b2 = RootSystem::build(Series::B, 2).unwrap();
    assert_eq!(b2.inner(&[0, 1], &[0, 1]), qi(1));
    assert_eq!(b2.inner(&[1, 0], &[1, 0]), qi(2));

    // reflections permute the root set and preserve the form
    let g2 = RootSystem::build(Series::G, 2).unwrap();
    for r in &g2.roots {
        for i in 0..2 {
            assert!(g2.is_root(&g2.reflect(i, r)));
        }
    }
    println!("G2 reflections permute the 12 roots");

    // exact structure constants: G2 satisfies the Jacobi identity on all
    // basis triples, and the Casimir is ad-invariant
    let cb = ChevalleyBasis::build(g2);
    let om = cb.casimir();
    assert_eq!(om, om.transpose21());
    for k in 0..cb.dim() {
        let mut resid: Tensor<rmatrix::Q, 2> = Tensor::new(cb.dim());
        for (idx, v) in om.iter() {
            for (t, c) in cb.bracket(k, idx[0]) {
                resid.insert_add([*t, idx[1]], v * c);
            }
            for (t, c) in cb.bracket(k, idx[1]) {
                resid.insert_add([idx[0], *t], v * c);
            }
        }
        assert!(resid.is_zero());
    }
    println!("G2 Casimir (dim {}) is ad-invariant, exactly", cb.dim());
}
