//! The swap triple on sl3: Gamma_1 = Gamma_2 = {a, b} with tau exchanging the
//! two simple roots, graded by the line through t_rho. The K-operator resums
//! tau-cycles into sinh/tanh-type coefficients; the sign with which the
//! extended map acts on the composite root turns the cotangent family into
//! the tangent family there.

use num_complex::Complex64;
use rmatrix::cartan::CartanSubspace;
use rmatrix::chevalley::{extend_tau, ChevalleyBasis, ForwardWalk};
use rmatrix::rational::{q_to_f64, Q};
use rmatrix::report::var_names;
use rmatrix::rmat::dynamical_r;
use rmatrix::rootsys::{RootSystem, Series};
use rmatrix::tensor::Tensor;
use rmatrix::triples::GBDTriple;
use rmatrix::verify::check_cdybe_symbolic;

fn main() {
    let cb = ChevalleyBasis::build(RootSystem::build(Series::A, 2).unwrap());
    let rs = &cb.rs;
    let l = CartanSubspace::h_rho(rs);
    let t = GBDTriple::validate(rs, &[0, 1], &[0, 1], &[(0, 1), (1, 0)]).unwrap();

    // the extended map closes the 2-cycle on the simple roots with sign +1 and
    // fixes the composite root with sign -1
    let th = extend_tau(&cb, &t).unwrap();
    let a1 = rs.root_index(&[1, 0]).unwrap();
    let a12 = rs.root_index(&[1, 1]).unwrap();
    match th.forward(a1) {
        ForwardWalk::Cycle(orbit, sigma) => println!("simple-root cycle length {} sign {sigma}", orbit.len()),
        _ => unreachable!(),
    }
    match th.forward(a12) {
        ForwardWalk::Cycle(orbit, sigma) => println!("composite-root cycle length {} sign {sigma}", orbit.len()),
        _ => unreachable!(),
    }

    let zero: Tensor<Q, 2> = Tensor::new(cb.dim());
    let r = dynamical_r(&cb, &t, &l, &zero).unwrap();
    let names = var_names(r.ctx.n_vars());
    println!("\ncoefficients (u1 = exp(-(weight, lambda))):");
    let a2 = rs.root_index(&[0, 1]).unwrap();
    for (label, i, j) in [
        ("x_a  (x) x_-a ", a1, rs.neg_index(a1)),
        ("x_b  (x) x_-a ", a2, rs.neg_index(a1)),
        ("x_ab (x) x_-ab", a12, rs.neg_index(a12)),
    ] {
        let e = r.tensor.get(&[cb.x_index(i), cb.x_index(j)]);
        println!("  {label}: {}", e.render(&names));
    }

    // numeric spot check: the cross coefficient is 1/(2 sinh x) where
    // x = (bar a, lambda)
    let cross = r.tensor.get(&[cb.x_index(a2), cb.x_index(rs.neg_index(a1))]);
    let ginv = l.gram_inverse().unwrap();
    let wt = l.root_weight(rs, a1);
    let aw = q_to_f64(&(ginv[0][0].clone() * wt[0].clone()));
    let xi = 0.9;
    let u = r.ctx.u_values(&[Complex64::new(xi, 0.0)]);
    let got = cross.eval_u(&u).unwrap().re;
    let want = 1.0 / (2.0 * (xi * aw).sinh());
    println!("\ncross coefficient at xi = {xi}: {got:.12} vs 1/(2 sinh) = {want:.12}");
    assert!((got - want).abs() < 1e-12);

    let (_, ok) = check_cdybe_symbolic(&r, &cb);
    assert!(ok);
    println!("dynamical Yang-Baxter residual: identically zero");
}
