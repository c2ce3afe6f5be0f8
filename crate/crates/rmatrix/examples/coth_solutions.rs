//! Dynamical r-matrices invariant under the full Cartan subalgebra: the
//! resummed coefficients are hyperbolic-cotangent type rational functions of
//! the exponential variables, and the dynamical Yang-Baxter residual vanishes
//! identically.

use rmatrix::cartan::CartanSubspace;
use rmatrix::chevalley::ChevalleyBasis;
use rmatrix::coeff::ExpRat;
use rmatrix::rational::{q, q1, qi, Q};
use rmatrix::report::var_names;
use rmatrix::rmat::dynamical_r;
use rmatrix::rootsys::{RootSystem, Series};
use rmatrix::tensor::Tensor;
use rmatrix::triples::GBDTriple;
use rmatrix::verify::{check_cdybe_numeric, check_cdybe_symbolic, check_unitarity};

fn main() {
    let cb = ChevalleyBasis::build(RootSystem::build(Series::A, 2).unwrap());
    let l = CartanSubspace::full(&cb.rs);
    // Gamma_1 = Gamma_2 = all simple roots, tau = id
    let t = GBDTriple::validate(&cb.rs, &[0, 1], &[0, 1], &[(0, 0), (1, 1)]).unwrap();
    let zero: Tensor<Q, 2> = Tensor::new(cb.dim());
    let r = dynamical_r(&cb, &t, &l, &zero).unwrap();

    let names = var_names(r.ctx.n_vars());
    println!("wedge coefficients on x_a ^ x_-a (u_j = exp of a lattice weight):");
    for &p in &cb.rs.positives {
        let e = r.tensor.get(&[cb.x_index(p), cb.x_index(cb.rs.neg_index(p))]);
        let skew = e.sub(&ExpRat::from_rat(&q(1, 2)));
        println!("  root {:?}: {}", cb.rs.root(p), skew.render(&names));
        // each equals (1 + t)/(2(1 - t)) in the root's own monomial
        let tmono = r.ctx.monomial_for_root(&cb, p).unwrap();
        let expect = ExpRat::one()
            .add(&tmono)
            .div(&ExpRat::one().sub(&tmono).scale(&qi(2)))
            .unwrap();
        assert_eq!(skew, expect);
    }

    let (residual, ok) = check_cdybe_symbolic(&r, &cb);
    assert!(ok && residual.is_zero());
    assert!(check_unitarity(&r.tensor, &cb, &q1()));
    println!("symbolic residual: identically zero");

    let worst = check_cdybe_numeric(&r, &cb, 5, 42).unwrap();
    println!("numeric residual at 5 random points: {worst:.3e}");
    assert!(worst < 1e-6);
}
