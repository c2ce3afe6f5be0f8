//! Sparse tensors of low degree over a pluggable coefficient ring, with the
//! CYB map, Alt, Alt(dr), leg-wise adjoint actions and subspace membership.

use crate::cartan::CartanSubspace;
use crate::chevalley::ChevalleyBasis;
use crate::coeff::CoeffRing;
use crate::rational::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor<R, const K: usize> {
    dim: usize,
    entries: BTreeMap<[usize; K], R>,
}

impl<R: CoeffRing, const K: usize> Tensor<R, K> {
    pub fn new(dim: usize) -> Self {
        Tensor {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize; K]) -> R {
        self.entries.get(idx).cloned().unwrap_or_else(R::ring_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize; K], &R)> {
        self.entries.iter()
    }

    pub fn insert_add(&mut self, idx: [usize; K], v: R) {
        if v.ring_is_zero() {
            return;
        }
        match self.entries.get_mut(&idx) {
            Some(e) => {
                let s = e.add_ref(&v);
                if s.ring_is_zero() {
                    self.entries.remove(&idx);
                } else {
                    *e = s;
                }
            }
            None => {
                self.entries.insert(idx, v);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, v) in &other.entries {
            out.insert_add(*idx, v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Tensor {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.neg_ref()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.ring_is_zero() {
            return Tensor::new(self.dim);
        }
        let mut out = Tensor::new(self.dim);
        for (idx, v) in &self.entries {
            out.insert_add(*idx, v.mul_ref(c));
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Tensor::new(self.dim);
        }
        let mut out = Tensor::new(self.dim);
        for (idx, v) in &self.entries {
            out.insert_add(*idx, v.scale(c));
        }
        out
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> Tensor<S, K> {
        let mut out = Tensor::new(self.dim);
        for (idx, v) in &self.entries {
            out.insert_add(*idx, f(v));
        }
        out
    }

    /// Reindex legs by a permutation: out[idx] = self[idx o perm] in the sense
    /// that entry at position p moves to position (p[perm[0]], .., p[perm[K-1]]).
    pub fn permute(&self, perm: [usize; K]) -> Self {
        let mut out = Tensor::new(self.dim);
        for (idx, v) in &self.entries {
            let mut j = [0usize; K];
            for (slot, &src) in perm.iter().enumerate() {
                j[slot] = idx[src];
            }
            out.insert_add(j, v.clone());
        }
        out
    }
}

impl<R: CoeffRing> Tensor<R, 2> {
    pub fn transpose21(&self) -> Self {
        self.permute([1, 0])
    }
}

/// Lift a rational tensor into any coefficient ring.
pub fn embed<R: CoeffRing, const K: usize>(t: &Tensor<Q, K>) -> Tensor<R, K> {
    t.map_coeffs(|c| R::from_rat(c))
}

/// e_a (x) e_b - e_b (x) e_a.
pub fn wedge_units<R: CoeffRing>(dim: usize, a: usize, b: usize) -> Tensor<R, 2> {
    let mut t = Tensor::new(dim);
    t.insert_add([a, b], R::ring_one());
    t.insert_add([b, a], R::ring_one().neg_ref());
    t
}

/// CYB(r) = [r12, r13] + [r12, r23] + [r13, r23], via structure constants.
pub fn cyb<R: CoeffRing>(r: &Tensor<R, 2>, cb: &ChevalleyBasis) -> Tensor<R, 3> {
    let mut out = Tensor::new(r.dim());
    for (i1, v1) in r.iter() {
        let [a, b] = *i1;
        for (i2, v2) in r.iter() {
            let [c, d] = *i2;
            let v = v1.mul_ref(v2);
            // [r12, r13]: bracket on leg 1
            for (k, q) in cb.bracket(a, c) {
                out.insert_add([*k, b, d], v.scale(q));
            }
            // [r12, r23]: bracket on leg 2
            for (k, q) in cb.bracket(b, c) {
                out.insert_add([a, *k, d], v.scale(q));
            }
            // [r13, r23]: bracket on leg 3
            for (k, q) in cb.bracket(b, d) {
                out.insert_add([a, c, *k], v.scale(q));
            }
        }
    }
    out
}

/// Alt(x) = x^{123} + x^{231} + x^{312}: e_a(x)e_b(x)e_c picks up its two
/// cyclic placements c,a,b and b,c,a.
pub fn alt3<R: CoeffRing>(x: &Tensor<R, 3>) -> Tensor<R, 3> {
    let mut out = x.clone();
    for (idx, v) in x.iter() {
        let [a, b, c] = *idx;
        out.insert_add([c, a, b], v.clone());
        out.insert_add([b, c, a], v.clone());
    }
    out
}

/// Alt(dr) for an l-invariant r with coefficient derivatives supplied by
/// `diff(coeff, i)` = the derivative in the i-th coordinate (dual to the
/// i-th l basis vector). `l` fixes the basis x_i placed on the new leg.
pub fn alt_dr<R: CoeffRing>(
    r: &Tensor<R, 2>,
    l: &CartanSubspace,
    diff: &dyn Fn(&R, usize) -> R,
) -> Tensor<R, 3> {
    let mut out = Tensor::new(r.dim());
    for i in 0..l.dim() {
        let xi = l.basis_vec(i);
        for (idx, v) in r.iter() {
            let [p, q] = *idx;
            let dv = diff(v, i);
            if dv.ring_is_zero() {
                continue;
            }
            for (h, c) in xi.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let scaled = dv.scale(c);
                // x_i^{(1)} dr^{23} + x_i^{(2)} dr^{31} + x_i^{(3)} dr^{12}
                out.insert_add([h, p, q], scaled.clone());
                out.insert_add([q, h, p], scaled.clone());
                out.insert_add([p, q, h], scaled);
            }
        }
    }
    out
}

/// [k (x) 1 + 1 (x) k, x] = 0 for every basis element k of l.
pub fn check_l_invariance<R: CoeffRing>(
    x: &Tensor<R, 2>,
    cb: &ChevalleyBasis,
    l: &CartanSubspace,
) -> bool {
    for i in 0..l.dim() {
        let k = l.basis_vec(i);
        let mut resid: Tensor<R, 2> = Tensor::new(x.dim());
        for (idx, v) in x.iter() {
            let [a, b] = *idx;
            for (h, c) in k.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (t, q) in cb.bracket(h, a) {
                    resid.insert_add([*t, b], v.scale(&(c * q)));
                }
                for (t, q) in cb.bracket(h, b) {
                    resid.insert_add([a, *t], v.scale(&(c * q)));
                }
            }
        }
        if !resid.is_zero() {
            return false;
        }
    }
    true
}

/// Change of h-coordinates adapting the basis to l + h0: returns the matrix
/// M with h_i = sum_a M[i][a] b_a where (b_a) = l basis then h0 basis.
fn adapted_h_matrix(cb: &ChevalleyBasis, l: &CartanSubspace) -> Option<Vec<Vec<Q>>> {
    let rank = cb.rank();
    let h0 = l.orthocomplement_in_h(&cb.rs).ok()?;
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(rank);
    rows.extend(l.basis().iter().cloned());
    rows.extend(h0.basis().iter().cloned());
    if rows.len() != rank {
        return None;
    }
    crate::solve::invert(&rows)
}

/// Membership in Alt(l (x) g (x) g), decided exactly.
///
/// After adapting the h coordinates to l + h0, Alt(Y) for Y in l(x)g(x)g is
/// constant on each cyclic index orbit and supported on orbits containing a
/// position whose first leg lies in l; these conditions are also sufficient,
/// which turns the linear system Alt(Y) = x into independent per-orbit solves.
pub fn in_alt_lgg<R: CoeffRing>(x: &Tensor<R, 3>, cb: &ChevalleyBasis, l: &CartanSubspace) -> bool {
    let rank = cb.rank();
    let m = match adapted_h_matrix(cb, l) {
        Some(m) => m,
        None => return false,
    };
    // re-express h legs in the adapted basis
    let mut adapted: Tensor<R, 3> = Tensor::new(x.dim());
    for (idx, v) in x.iter() {
        let legs: Vec<Vec<(usize, Q)>> = idx
            .iter()
            .map(|&i| {
                if i < rank {
                    m[i].iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(a, c)| (a, c.clone()))
                        .collect()
                } else {
                    vec![(i, crate::rational::q1())]
                }
            })
            .collect();
        for (a, ca) in &legs[0] {
            for (b, cbv) in &legs[1] {
                for (c, cc) in &legs[2] {
                    adapted.insert_add([*a, *b, *c], v.scale(&(ca * cbv * cc)));
                }
            }
        }
    }
    let ldim = l.dim();
    let is_l = |i: usize| i < ldim;
    let mut seen: std::collections::BTreeSet<[usize; 3]> = std::collections::BTreeSet::new();
    for (idx, _) in adapted.iter() {
        let [a, b, c] = *idx;
        let orbit = [[a, b, c], [b, c, a], [c, a, b]];
        let rep = *orbit.iter().min().unwrap();
        if !seen.insert(rep) {
            continue;
        }
        let vals: Vec<R> = orbit.iter().map(|p| adapted.get(p)).collect();
        if vals[0] != vals[1] || vals[1] != vals[2] {
            return false;
        }
        if !orbit.iter().any(|p| is_l(p[0])) {
            return false;
        }
    }
    true
}
