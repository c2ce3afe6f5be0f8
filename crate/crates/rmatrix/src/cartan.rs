//! Rational subspaces of the Cartan subalgebra: the dynamical subalgebra l,
//! its orthocomplement h0, restricted Gram data and dual bases.
//!
//! Vectors are rational coordinate vectors in the coroot basis {h_i}.

use crate::rational::{qz, Q};
use crate::rootsys::RootSystem;
use crate::solve::{invert, kernel, mat_vec};
use crate::tensor::Tensor;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateForm;

impl fmt::Display for DegenerateForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "restricted form is degenerate")
    }
}

impl std::error::Error for DegenerateForm {}

/// Gram matrix of the invariant form on the coroot basis:
/// (h_i, h_j) = (alpha_i, alpha_j) / (d_i d_j).
pub fn coroot_gram(rs: &RootSystem) -> Vec<Vec<Q>> {
    let r = rs.rank;
    let mut g = vec![vec![qz(); r]; r];
    for i in 0..r {
        let ei: Vec<i64> = (0..r).map(|k| i64::from(k == i)).collect();
        for j in 0..r {
            let ej: Vec<i64> = (0..r).map(|k| i64::from(k == j)).collect();
            g[i][j] = rs.inner(&ei, &ej) / (rs.d[i].clone() * rs.d[j].clone());
        }
    }
    g
}

/// alpha(sum_j v_j h_j) for a root (by index) and h-coordinates v.
pub fn root_on_vector(rs: &RootSystem, ridx: usize, v: &[Q]) -> Q {
    let root = rs.root(ridx);
    v.iter()
        .enumerate()
        .map(|(j, c)| c * crate::rational::qi(rs.pair_coroot(root, j)))
        .fold(qz(), |a, b| a + b)
}

/// A commutative subspace of h with restricted form data.
#[derive(Debug, Clone)]
pub struct CartanSubspace {
    basis: Vec<Vec<Q>>,
    gram: Vec<Vec<Q>>,
    gram_inv: Option<Vec<Vec<Q>>>,
    /// dual basis w_i (in h coordinates) with (w_i, x_j) = delta_ij; empty if degenerate
    dual: Vec<Vec<Q>>,
}

impl CartanSubspace {
    pub fn new(rs: &RootSystem, basis: Vec<Vec<Q>>) -> CartanSubspace {
        let g = coroot_gram(rs);
        let m = basis.len();
        let mut gram = vec![vec![qz(); m]; m];
        for i in 0..m {
            let gi = mat_vec(&g, &basis[i]);
            for j in 0..m {
                gram[i][j] = gi.iter().zip(&basis[j]).map(|(a, b)| a * b).fold(qz(), |s, x| s + x);
            }
        }
        let gram_inv = invert(&gram);
        let dual = match &gram_inv {
            Some(inv) => (0..m)
                .map(|i| {
                    let mut w = vec![qz(); rs.rank];
                    for (k, row) in inv.iter().enumerate() {
                        let c = row[i].clone();
                        if !c.is_zero() {
                            for (a, xa) in basis[k].iter().enumerate() {
                                w[a] += c.clone() * xa;
                            }
                        }
                    }
                    w
                })
                .collect(),
            None => Vec::new(),
        };
        CartanSubspace {
            basis,
            gram,
            gram_inv,
            dual,
        }
    }

    /// l = h, the full Cartan subalgebra.
    pub fn full(rs: &RootSystem) -> CartanSubspace {
        let r = rs.rank;
        let basis = (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| if k == i { crate::rational::q1() } else { qz() })
                    .collect()
            })
            .collect();
        CartanSubspace::new(rs, basis)
    }

    /// l = Q t_rho, the line through the dual of the half-sum of positive roots.
    pub fn h_rho(rs: &RootSystem) -> CartanSubspace {
        let r = rs.rank;
        let mut coords = vec![qz(); r];
        for &p in &rs.positives {
            let root = rs.root(p);
            for (i, &c) in root.iter().enumerate() {
                coords[i] += crate::rational::q(c, 2) * rs.d[i].clone();
            }
        }
        CartanSubspace::new(rs, vec![coords])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram_inv.is_some()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn basis_vec(&self, i: usize) -> &[Q] {
        &self.basis[i]
    }

    pub fn dual_vec(&self, i: usize) -> &[Q] {
        &self.dual[i]
    }

    pub fn gram(&self) -> &Vec<Vec<Q>> {
        &self.gram
    }

    pub fn gram_inverse(&self) -> Option<&Vec<Vec<Q>>> {
        self.gram_inv.as_ref()
    }

    /// Weight of a root restricted to this subspace: (alpha(x_1), ..., alpha(x_m)).
    pub fn root_weight(&self, rs: &RootSystem, ridx: usize) -> Vec<Q> {
        self.basis
            .iter()
            .map(|x| root_on_vector(rs, ridx, x))
            .collect()
    }

    /// True iff no root restricts to zero on this subspace.
    pub fn is_regular(&self, rs: &RootSystem) -> bool {
        rs.positives.iter().all(|&p| {
            self.basis
                .iter()
                .any(|x| !root_on_vector(rs, p, x).is_zero())
        })
    }

    /// Orthogonal complement within h; requires a nondegenerate restriction.
    pub fn orthocomplement_in_h(&self, rs: &RootSystem) -> Result<CartanSubspace, DegenerateForm> {
        if !self.is_nondegenerate() {
            return Err(DegenerateForm);
        }
        let g = coroot_gram(rs);
        let rows: Vec<Vec<Q>> = self.basis.iter().map(|x| mat_vec(&g, x)).collect();
        let comp = kernel(&rows);
        Ok(CartanSubspace::new(rs, comp))
    }

    /// Inverse element of the restricted form as a tensor on h-indices
    /// (the ambient tensor dimension is supplied by the caller).
    pub fn casimir_tensor(&self, dim: usize) -> Result<Tensor<Q, 2>, DegenerateForm> {
        let inv = self.gram_inv.as_ref().ok_or(DegenerateForm)?;
        let mut t = Tensor::new(dim);
        let m = self.dim();
        for i in 0..m {
            for j in 0..m {
                if inv[i][j].is_zero() {
                    continue;
                }
                for (a, ca) in self.basis[i].iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (b, cbv) in self.basis[j].iter().enumerate() {
                        let v = inv[i][j].clone() * ca * cbv;
                        if !v.is_zero() {
                            t.insert_add([a, b], v);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    /// Orthogonal projection of an h-vector onto this subspace.
    pub fn project(&self, rs: &RootSystem, v: &[Q]) -> Vec<Q> {
        let g = coroot_gram(rs);
        let gv = mat_vec(&g, v);
        let mut out = vec![qz(); rs.rank];
        for i in 0..self.dim() {
            // (v, w_i) x_i
            let c = gv
                .iter()
                .zip(&self.dual[i])
                .map(|(a, b)| a * b)
                .fold(qz(), |s, x| s + x);
            if !c.is_zero() {
                for (a, xa) in self.basis[i].iter().enumerate() {
                    out[a] += c.clone() * xa;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q1, qi};
    use crate::rootsys::Series;

    #[test]
    fn full_cartan_is_regular_and_nondegenerate() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let h = CartanSubspace::full(&rs);
        assert!(h.is_nondegenerate());
        assert!(h.is_regular(&rs));
        let h0 = h.orthocomplement_in_h(&rs).unwrap();
        assert_eq!(h0.dim(), 0);
    }

    #[test]
    fn a2_hrho_line() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let l = CartanSubspace::h_rho(&rs);
        assert_eq!(l.dim(), 1);
        // t_rho = h1 + h2 in A2
        assert_eq!(l.basis_vec(0), &[q1(), q1()]);
        assert!(l.is_regular(&rs));
        // (t_rho, t_rho) = 2 for A2
        assert_eq!(l.gram()[0][0], qi(2));
        let h0 = l.orthocomplement_in_h(&rs).unwrap();
        assert_eq!(h0.dim(), 1);
        // h0 = span(h1 - h2) up to scale
        let v = h0.basis_vec(0);
        assert_eq!(v[0].clone() + v[1].clone(), qz());
        // dim l + dim h0 = rank
        assert_eq!(l.dim() + h0.dim(), rs.rank);
    }

    #[test]
    fn regularity_cases() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        // l = span(h1): alpha1(h1)=2, alpha2(h1)=-1, (a1+a2)(h1)=1 -> regular
        let l = CartanSubspace::new(&rs, vec![vec![q1(), qz()]]);
        assert!(l.is_regular(&rs));
        // l = span(h1 + 2 h2): alpha1 vanishes -> not regular
        let l2 = CartanSubspace::new(&rs, vec![vec![q1(), qi(2)]]);
        assert!(!l2.is_regular(&rs));
    }

    #[test]
    fn restricted_casimirs() {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        let h = CartanSubspace::full(&rs);
        let t = h.casimir_tensor(3).unwrap();
        // (h,h) = 2, so Omega_h = h(x)h / 2
        assert_eq!(t.get(&[0, 0]), q(1, 2));

        let rs2 = RootSystem::build(Series::A, 2).unwrap();
        let l = CartanSubspace::h_rho(&rs2);
        let h0 = l.orthocomplement_in_h(&rs2).unwrap();
        let om = h0.casimir_tensor(8).unwrap();
        // y = c(h1 - h2): Omega_h0 = y(x)y/(y,y); with y = h1-h2, (y,y) = 6
        let scale = om.get(&[0, 0]);
        assert_eq!(scale, q(1, 6));
        assert_eq!(om.get(&[0, 1]), q(-1, 6));
        // zero subspace -> zero tensor
        let z = CartanSubspace::new(&rs2, vec![]);
        assert!(z.casimir_tensor(8).unwrap().is_zero());
    }

    #[test]
    fn dual_basis_pairing() {
        let rs = RootSystem::build(Series::B, 2).unwrap();
        let h = CartanSubspace::full(&rs);
        let g = coroot_gram(&rs);
        for i in 0..2 {
            for j in 0..2 {
                let gw = mat_vec(&g, h.dual_vec(i));
                let p = gw
                    .iter()
                    .zip(h.basis_vec(j))
                    .map(|(a, b)| a * b)
                    .fold(qz(), |s, x| s + x);
                assert_eq!(p, if i == j { q1() } else { qz() });
            }
        }
    }

    #[test]
    fn projection() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let l = CartanSubspace::h_rho(&rs);
        // project h1: onto span(h1+h2) orthogonally
        let p = l.project(&rs, &[q1(), qz()]);
        assert_eq!(p, vec![q(1, 2), q(1, 2)]);
        // idempotent
        assert_eq!(l.project(&rs, &p), p);
    }
}
