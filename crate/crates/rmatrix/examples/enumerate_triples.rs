//! Exhaustive enumeration of (generalized) Belavin-Drinfeld triples with
//! validity annotations: nilpotency, Gamma_3, l-gradedness.

use rmatrix::cartan::CartanSubspace;
use rmatrix::rootsys::{RootSystem, Series};
use rmatrix::triples::{analyze, enumerate, EnumerationMode};

fn main() {
    let rs = RootSystem::build(Series::A, 2).unwrap();
    let bd = enumerate(&rs, EnumerationMode::Bd, None).unwrap();
    let gen = enumerate(&rs, EnumerationMode::Generalized, None).unwrap();
    println!("A2: {} nilpotent triples, {} generalized", bd.len(), gen.len());
    assert_eq!((bd.len(), gen.len()), (3, 7));

    let l = CartanSubspace::h_rho(&rs);
    println!("\nA2 generalized triples, graded by the h_rho line:");
    for t in enumerate(&rs, EnumerationMode::Generalized, Some(&l)).unwrap() {
        let a = analyze(&rs, &t);
        let tau: Vec<String> = t
            .gamma1
            .iter()
            .zip(&t.tau_images)
            .map(|(x, y)| format!("a{}->a{}", x + 1, y + 1))
            .collect();
        println!(
            "  gamma1={:?} tau=[{}] nilpotent={} gamma3={:?}",
            t.gamma1.iter().map(|i| i + 1).collect::<Vec<_>>(),
            tau.join(", "),
            a.is_bd,
            a.gamma3.iter().map(|i| i + 1).collect::<Vec<_>>(),
        );
    }

    // with the full Cartan subalgebra only identity maps survive the grading
    let lf = CartanSubspace::full(&rs);
    for t in enumerate(&rs, EnumerationMode::Generalized, Some(&lf)).unwrap() {
        assert!(t.gamma1.iter().zip(&t.tau_images).all(|(a, b)| a == b));
    }
    println!("\nfull-Cartan grading forces tau = id, as expected");

    let a3 = RootSystem::build(Series::A, 3).unwrap();
    let l3 = CartanSubspace::h_rho(&a3);
    let graded = enumerate(&a3, EnumerationMode::Generalized, Some(&l3)).unwrap();
    println!("A3: {} h_rho-graded generalized triples", graded.len());
}
