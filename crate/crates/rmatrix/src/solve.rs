//! Exact rational linear algebra and the Cartan-part constraint solvers.

use crate::cartan::CartanSubspace;
use crate::chevalley::ChevalleyBasis;
use crate::rational::{q1, qz, Q};
use crate::tensor::Tensor;
use crate::triples::GBDTriple;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    NoSolution,
    /// A system the theory guarantees solvable came back inconsistent.
    Inconsistent(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NoSolution => write!(f, "no solution"),
            SolveError::Inconsistent(what) => write!(f, "internal inconsistency: {what}"),
        }
    }
}

impl std::error::Error for SolveError {}

/// Row-reduce [A | b] and return (particular, kernel basis), or None.
pub fn solve_affine(a: &[Vec<Q>], b: &[Q]) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    assert_eq!(rows, b.len(), "shape mismatch");
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, bv)| {
            let mut row = r.clone();
            row.push(bv.clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone().recip();
        for v in m[rank].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let sub = f.clone() * m[rank][j].clone();
                    m[i][j] -= sub;
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // consistency
    for row in m.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut particular = vec![qz(); cols];
    for c in 0..cols {
        if let Some(r) = pivot_of_col[c] {
            particular[c] = m[r][cols].clone();
        }
    }
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![qz(); cols];
        v[free] = q1();
        for c in 0..cols {
            if let Some(r) = pivot_of_col[c] {
                v[c] = -m[r][free].clone();
            }
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

/// Kernel basis of A.
pub fn kernel(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let b = vec![qz(); a.len()];
    solve_affine(a, &b).expect("homogeneous system is consistent").1
}

/// Inverse of a square rational matrix, or None if singular.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // solve M X = I column by column
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![qz(); n];
        e[j] = q1();
        let (x, k) = solve_affine(m, &e)?;
        if !k.is_empty() {
            return None;
        }
        cols.push(x);
    }
    let mut inv = vec![vec![qz(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            inv[i][j] = col[i].clone();
        }
    }
    Some(inv)
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).fold(qz(), |s, x| s + x))
        .collect()
}

/// Canonical reduced row-echelon basis of the span of the given vectors.
pub fn rref_basis(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let cols = vs[0].len();
    let mut m: Vec<Vec<Q>> = vs.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone().recip();
        for v in m[rank].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = f.clone() * m[rank][j].clone();
                    m[i][j] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    m.retain(|r| r.iter().any(|c| !c.is_zero()));
    m
}

/// Is v in the span of the (arbitrary) vectors?
pub fn in_span(basis: &[Vec<Q>], v: &[Q]) -> bool {
    if v.iter().all(|c| c.is_zero()) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let rows = v.len();
    let a: Vec<Vec<Q>> = (0..rows)
        .map(|r| basis.iter().map(|b| b[r].clone()).collect())
        .collect();
    solve_affine(&a, v).is_some()
}

/// Coordinates of v in the given (independent) basis, if it lies in the span.
pub fn coords_in_basis(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    if basis.is_empty() {
        return v.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let rows = v.len();
    let a: Vec<Vec<Q>> = (0..rows)
        .map(|r| basis.iter().map(|b| b[r].clone()).collect())
        .collect();
    let (p, k) = solve_affine(&a, v)?;
    k.is_empty().then_some(p)
}

/// Vectors from `big` extending a basis of `small`'s span to one of `big`'s span.
pub fn extend_basis(small: &[Vec<Q>], big: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut current: Vec<Vec<Q>> = small.to_vec();
    let mut added = Vec::new();
    for v in big {
        if !in_span(&current, v) {
            current.push(v.clone());
            added.push(v.clone());
        }
    }
    added
}

/// Affine solution set of a Cartan-part constraint system.
#[derive(Debug, Clone)]
pub struct AffineSolutionSet {
    /// A tensor satisfying the constraints exactly.
    pub particular: Tensor<Q, 2>,
    /// Basis of the homogeneous (skew) solution space.
    pub homogeneous: Vec<Tensor<Q, 2>>,
    pub ambient: String,
}

/// Skew basis element h_i wedge h_j as a degree-2 tensor on h-indices.
fn skew_unit(dim: usize, i: usize, j: usize) -> Tensor<Q, 2> {
    let mut t = Tensor::new(dim);
    t.insert_add([i, j], q1());
    t.insert_add([j, i], -q1());
    t
}

/// All r0 in h (x) h with r0 + r0^21 = Omega_h and
/// (tau(alpha) (x) 1) r0 + (1 (x) alpha) r0 = 0 for alpha in Gamma_1.
///
/// Parametrized as Omega_h/2 + s with s skew; the constraint on s reads
/// (tau(alpha) (x) 1) s + (1 (x) alpha) s = -(t_{tau alpha} + t_alpha)/2.
pub fn solve_r0(cb: &ChevalleyBasis, t: &GBDTriple) -> Result<AffineSolutionSet, SolveError> {
    let rank = cb.rs.rank;
    let pairs: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| ((i + 1)..rank).map(move |j| (i, j)))
        .collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for (&a, &ta) in t.gamma1.iter().zip(&t.tau_images) {
        // equation vector lives in h: one scalar row per h coordinate
        let alpha = cb.rs.simple_root_index(a);
        let talpha = cb.rs.simple_root_index(ta);
        let t_a = cb.t_vector(alpha);
        let t_ta = cb.t_vector(talpha);
        for k in 0..rank {
            let mut row = Vec::with_capacity(pairs.len());
            for &(i, j) in &pairs {
                // (tau(alpha) (x) 1)(hi^hj) = ta(hi) hj - ta(hj) hi
                // (1 (x) alpha)(hi^hj)     = alpha(hj) hi - alpha(hi) hj
                let mut c = qz();
                if j == k {
                    c += cb.root_on_coroot(talpha, i);
                    c -= cb.root_on_coroot(alpha, i);
                }
                if i == k {
                    c -= cb.root_on_coroot(talpha, j);
                    c += cb.root_on_coroot(alpha, j);
                }
                row.push(c);
            }
            rows.push(row);
            rhs.push(-(t_ta[k].clone() + t_a[k].clone()) / crate::rational::qi(2));
        }
    }
    if rows.is_empty() {
        rows.push(vec![qz(); pairs.len()]);
        rhs.push(qz());
    }
    let (part, kern) = solve_affine(&rows, &rhs)
        .ok_or_else(|| SolveError::Inconsistent("r0 system must be solvable for a BD triple".into()))?;
    let dim = cb.dim();
    let mut particular = cb.casimir_h().scale_q(&crate::rational::q(1, 2));
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        if !part[idx].is_zero() {
            particular = particular.add(&skew_unit(dim, i, j).scale_q(&part[idx]));
        }
    }
    let homogeneous = kern
        .iter()
        .map(|v| {
            let mut t2 = Tensor::new(dim);
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                if !v[idx].is_zero() {
                    t2 = t2.add(&skew_unit(dim, i, j).scale_q(&v[idx]));
                }
            }
            t2
        })
        .collect();
    Ok(AffineSolutionSet {
        particular,
        homogeneous,
        ambient: "h(x)h".into(),
    })
}

/// All skew r in Lambda^2 h0 with
/// (tau(alpha) (x) 1) r + (1 (x) alpha) r = ((alpha + tau(alpha)) (x) 1) Omega_{h0} / 2
/// for every alpha in Gamma_1. `NoSolution` is a legitimate outcome.
pub fn solve_rh0h0(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    h0: &CartanSubspace,
) -> Result<AffineSolutionSet, SolveError> {
    let m = h0.dim();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    // Omega_{h0} in coordinates of the h0 basis: inverse Gram.
    let ginv = match h0.gram_inverse() {
        Some(g) => g,
        None => return Err(SolveError::Inconsistent("degenerate h0".into())),
    };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    let root_on_h0 = |ridx: usize, b: usize| cb.root_on_vector(ridx, h0.basis_vec(b));
    for (&a, &ta) in t.gamma1.iter().zip(&t.tau_images) {
        let alpha = cb.rs.simple_root_index(a);
        let talpha = cb.rs.simple_root_index(ta);
        // rows indexed by the h0-basis coordinate of the (vector-valued) equation
        for k in 0..m {
            let mut row = Vec::with_capacity(pairs.len());
            for &(i, j) in &pairs {
                let mut c = qz();
                if j == k {
                    c += root_on_h0(talpha, i);
                    c -= root_on_h0(alpha, i);
                }
                if i == k {
                    c -= root_on_h0(talpha, j);
                    c += root_on_h0(alpha, j);
                }
                row.push(c);
            }
            rows.push(row);
            // RHS_k = (1/2) sum_i (alpha + tau alpha)(u_i) (Omega_h0)_{i k}
            let mut v = qz();
            for i in 0..m {
                let w = root_on_h0(alpha, i) + root_on_h0(talpha, i);
                v += w * ginv[i][k].clone();
            }
            rhs.push(v / crate::rational::qi(2));
        }
    }
    if rows.is_empty() {
        rows.push(vec![qz(); pairs.len()]);
        rhs.push(qz());
    }
    let (part, kern) = solve_affine(&rows, &rhs).ok_or(SolveError::NoSolution)?;
    let dim = cb.dim();
    let expand = |coeffs: &[Q]| -> Tensor<Q, 2> {
        let mut t2 = Tensor::new(dim);
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            if coeffs[idx].is_zero() {
                continue;
            }
            // (u_i (x) u_j - u_j (x) u_i) expanded into h coordinates
            let ui = h0.basis_vec(i);
            let uj = h0.basis_vec(j);
            for (a, ca) in ui.iter().enumerate() {
                for (b, cbv) in uj.iter().enumerate() {
                    let v = &coeffs[idx] * &(ca * cbv);
                    if !v.is_zero() {
                        t2.insert_add([a, b], v.clone());
                        t2.insert_add([b, a], -v);
                    }
                }
            }
        }
        t2
    };
    Ok(AffineSolutionSet {
        particular: expand(&part),
        homogeneous: kern.iter().map(|v| expand(v)).collect(),
        ambient: "Lambda^2 h0".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::rootsys::{RootSystem, Series};
    use crate::triples::GBDTriple;

    #[test]
    fn affine_solver_identity_and_zero() {
        let a = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let b = vec![qi(3), qi(4)];
        let (p, k) = solve_affine(&a, &b).unwrap();
        assert_eq!(p, vec![qi(3), qi(4)]);
        assert!(k.is_empty());

        let a0 = vec![vec![qz(), qz()]];
        let (p0, k0) = solve_affine(&a0, &[qz()]).unwrap();
        assert_eq!(p0, vec![qz(), qz()]);
        assert_eq!(k0.len(), 2);
    }

    #[test]
    fn random_rectangular_resubstitutes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let rows = 5;
            let cols = 7;
            let a: Vec<Vec<Q>> = (0..rows)
                .map(|_| (0..cols).map(|_| qi(rng.gen_range(-4..=4))).collect())
                .collect();
            let x0: Vec<Q> = (0..cols).map(|_| q(rng.gen_range(-6..=6), 2)).collect();
            let b = mat_vec(&a, &x0);
            let (p, kern) = solve_affine(&a, &b).expect("consistent by construction");
            assert_eq!(mat_vec(&a, &p), b);
            for k in &kern {
                let z = mat_vec(&a, k);
                assert!(z.iter().all(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn inconsistent_detected() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert!(solve_affine(&a, &[qi(1), qi(3)]).is_none());
    }

    #[test]
    fn invert_small() {
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![qi(1), qi(-1)], vec![qi(-1), qi(2)]]);
        let sing = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(invert(&sing).is_none());
    }

    #[test]
    fn r0_empty_triple_dimensions() {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        let cb = ChevalleyBasis::build(rs);
        let t = GBDTriple::validate(&cb.rs, &[], &[], &[]).unwrap();
        let sol = solve_r0(&cb, &t).unwrap();
        assert!(sol.homogeneous.is_empty()); // Lambda^2 h = 0 at rank 1
        assert_eq!(sol.particular, cb.casimir_h().scale_q(&q(1, 2)));

        let rs2 = RootSystem::build(Series::A, 2).unwrap();
        let cb2 = ChevalleyBasis::build(rs2);
        let t2 = GBDTriple::validate(&cb2.rs, &[], &[], &[]).unwrap();
        let sol2 = solve_r0(&cb2, &t2).unwrap();
        assert_eq!(sol2.homogeneous.len(), 1); // all of Lambda^2 h
    }

    #[test]
    fn r0_a2_shift_triple_unique_skew_part() {
        // A2, Gamma1 = {a1}, Gamma2 = {a2}: skew part sigma (h1^h2) with sigma = 1/6.
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let cb = ChevalleyBasis::build(rs);
        let t = GBDTriple::validate(&cb.rs, &[0], &[1], &[(0, 1)]).unwrap();
        let sol = solve_r0(&cb, &t).unwrap();
        assert!(sol.homogeneous.is_empty());
        let skew = sol.particular.sub(&cb.casimir_h().scale_q(&q(1, 2)));
        assert_eq!(skew.get(&[0, 1]), q(1, 6));
        assert_eq!(skew.get(&[1, 0]), q(-1, 6));
        // re-substitution: Eq. (3)
        let sym = sol.particular.add(&sol.particular.transpose21());
        assert_eq!(sym, cb.casimir_h());
    }
}
