//! Constant r-matrices from nilpotent triples: solve the Cartan-part
//! constraints, assemble the tensor, and verify the Yang-Baxter equation
//! exactly over the rationals.

use rmatrix::chevalley::ChevalleyBasis;
use rmatrix::rational::{q_to_string, q1};
use rmatrix::report::{basis_names, constant_to_json};
use rmatrix::rmat::constant_bd_r;
use rmatrix::rootsys::{RootSystem, Series};
use rmatrix::solve::solve_r0;
use rmatrix::triples::{enumerate, EnumerationMode, GBDTriple};
use rmatrix::verify::{check_cybe_exact, check_unitarity};

fn main() {
    let cb = ChevalleyBasis::build(RootSystem::build(Series::A, 2).unwrap());

    // the shift triple gamma1 = {a1} -> gamma2 = {a2}
    let t = GBDTriple::validate(&cb.rs, &[0], &[1], &[(0, 1)]).unwrap();
    let sol = solve_r0(&cb, &t).unwrap();
    println!(
        "Cartan part: unique up to {} homogeneous dimensions",
        sol.homogeneous.len()
    );
    let c = constant_bd_r(&cb, &t, &sol.particular).unwrap();
    let names = basis_names(&cb);
    println!("tensor terms:");
    for (idx, v) in c.tensor.iter() {
        println!("  {} (x) {}: {}", names[idx[0]], names[idx[1]], q_to_string(v));
    }
    let (_, ok) = check_cybe_exact(&c.tensor, &cb);
    assert!(ok && check_unitarity(&c.tensor, &cb, &q1()));
    println!("CYB(r) = 0 and r + r^21 = Omega, exactly\n");

    // every nilpotent triple on A3 passes the same exact checks
    let cb3 = ChevalleyBasis::build(RootSystem::build(Series::A, 3).unwrap());
    let triples = enumerate(&cb3.rs, EnumerationMode::Bd, None).unwrap();
    for t in &triples {
        let r0 = solve_r0(&cb3, t).unwrap().particular;
        let c = constant_bd_r(&cb3, t, &r0).unwrap();
        assert!(check_cybe_exact(&c.tensor, &cb3).1);
        assert!(check_unitarity(&c.tensor, &cb3, &q1()));
    }
    println!("A3: all {} nilpotent triples verified exactly", triples.len());

    // artifacts are self-describing JSON
    let json = constant_to_json(&cb, &c);
    println!(
        "\nJSON artifact ({} terms, conventions embedded):",
        json.terms.len()
    );
    println!(
        "{}",
        serde_json::to_string_pretty(&json.metadata.conventions).unwrap()
    );
}
