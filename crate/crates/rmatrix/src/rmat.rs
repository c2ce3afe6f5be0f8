//! Assembly of r-matrices: the constant Belavin-Drinfeld tensor, the K(lambda)
//! operator, dynamical r-matrices, the phi endomorphism and its Cayley
//! transform, diagonal gauge transformations, and asymptotic limits.

use crate::cartan::CartanSubspace;
use crate::chevalley::{extend_tau, ChevalleyBasis, ForwardWalk, TauHom};
use crate::coeff::exprat::CoeffError;
use crate::coeff::{ExpRat, WeightLattice};
use crate::rational::{q, q1, qz, Q};
use crate::solve::{coords_in_basis, extend_basis, in_span, mat_vec, rref_basis};
use crate::tensor::{embed, wedge_units, Tensor};
use crate::triples::{GBDTriple, TripleError};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RmatError {
    NotNilpotent,
    R0Invalid(String),
    Rh0h0Invalid(String),
    NotLGraded,
    NotRegular,
    DegenerateL,
    LatticeExtensionFailed,
    DivergesAlongRay,
    SingularAtBasePoint,
    Triple(TripleError),
    Coeff(CoeffError),
}

impl fmt::Display for RmatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RmatError::NotNilpotent => write!(f, "triple is not nilpotent"),
            RmatError::R0Invalid(s) => write!(f, "r0 fails its constraints: {s}"),
            RmatError::Rh0h0Invalid(s) => write!(f, "r_h0h0 fails its constraints: {s}"),
            RmatError::NotLGraded => write!(f, "triple is not l-graded"),
            RmatError::NotRegular => write!(f, "l contains no regular element"),
            RmatError::DegenerateL => write!(f, "form degenerate on l"),
            RmatError::LatticeExtensionFailed => write!(f, "cannot extend weight lattice"),
            RmatError::DivergesAlongRay => write!(f, "coefficient diverges along ray"),
            RmatError::SingularAtBasePoint => write!(f, "singular at chosen base point"),
            RmatError::Triple(e) => write!(f, "{e}"),
            RmatError::Coeff(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RmatError {}

impl From<TripleError> for RmatError {
    fn from(e: TripleError) -> Self {
        RmatError::Triple(e)
    }
}

impl From<CoeffError> for RmatError {
    fn from(e: CoeffError) -> Self {
        RmatError::Coeff(e)
    }
}

/// Shared context for lambda-dependent computations: the subalgebra l with its
/// dual basis, the weight lattice indexing the u variables, and the pairing
/// table between lattice generators and the dual basis of l.
#[derive(Debug, Clone)]
pub struct DynContext {
    pub l: CartanSubspace,
    pub lattice: WeightLattice,
    /// diff_table[j][i] = g_j(w_i)
    diff_table: Vec<Vec<Q>>,
}

impl DynContext {
    pub fn new(cb: &ChevalleyBasis, l: CartanSubspace) -> Result<DynContext, RmatError> {
        if !l.is_nondegenerate() {
            return Err(RmatError::DegenerateL);
        }
        let weights: Vec<Vec<Q>> = (0..cb.rs.n_roots())
            .map(|r| l.root_weight(&cb.rs, r))
            .collect();
        let lattice = WeightLattice::new(&weights);
        let diff_table = Self::build_diff_table(&l, &lattice);
        Ok(DynContext {
            l,
            lattice,
            diff_table,
        })
    }

    pub fn from_parts(l: CartanSubspace, lattice: WeightLattice) -> Result<DynContext, RmatError> {
        if !l.is_nondegenerate() {
            return Err(RmatError::DegenerateL);
        }
        let diff_table = Self::build_diff_table(&l, &lattice);
        Ok(DynContext {
            l,
            lattice,
            diff_table,
        })
    }

    fn build_diff_table(l: &CartanSubspace, lattice: &WeightLattice) -> Vec<Vec<Q>> {
        let ginv = l.gram_inverse().expect("nondegenerate l");
        lattice
            .generators()
            .iter()
            .map(|g| {
                (0..l.dim())
                    .map(|i| {
                        g.iter()
                            .zip(ginv[i].iter())
                            .map(|(gj, c)| gj * c)
                            .fold(qz(), |s, x| s + x)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn n_vars(&self) -> usize {
        self.lattice.n_gens()
    }

    pub fn weight_of_root(&self, cb: &ChevalleyBasis, ridx: usize) -> Vec<Q> {
        self.l.root_weight(&cb.rs, ridx)
    }

    /// t_{i* alpha} = exp(-(i* alpha, lambda)) as a Laurent monomial.
    pub fn monomial_for_root(&self, cb: &ChevalleyBasis, ridx: usize) -> Result<ExpRat, RmatError> {
        Ok(self.lattice.monomial(&self.weight_of_root(cb, ridx))?)
    }

    pub fn monomial(&self, mu: &[Q]) -> Result<ExpRat, RmatError> {
        Ok(self.lattice.monomial(mu)?)
    }

    /// Generator pairings against the dir-th dual basis vector of l.
    pub fn diff_weights(&self, dir: usize) -> Vec<Q> {
        self.diff_table.iter().map(|row| row[dir].clone()).collect()
    }

    /// Derivative in the coordinate dual to the dir-th basis vector of l.
    pub fn diff(&self, c: &ExpRat, dir: usize) -> ExpRat {
        c.differentiate(&self.diff_weights(dir))
    }

    /// u_j values at the sample point with coordinates xi_i = lambda(x_i).
    pub fn u_values(&self, xi: &[Complex64]) -> Vec<Complex64> {
        self.diff_table
            .iter()
            .map(|row| {
                let mut e = Complex64::new(0.0, 0.0);
                for (i, w) in row.iter().enumerate() {
                    e += xi[i] * crate::rational::q_to_f64(w);
                }
                (-e).exp()
            })
            .collect()
    }

    /// Linear forms for series expansion: log u_j moves by -sum_i g_j(w_i) d_i.
    pub fn series_lin(&self) -> Vec<Vec<Q>> {
        self.diff_table
            .iter()
            .map(|row| row.iter().map(|w| -w.clone()).collect())
            .collect()
    }

    /// Ray weights g_j(d) for the direction d = sum_i dir[i] x_i in l.
    pub fn ray_weights(&self, dir: &[Q]) -> Vec<Q> {
        self.lattice
            .generators()
            .iter()
            .map(|g| {
                g.iter()
                    .zip(dir)
                    .map(|(gx, c)| gx * c)
                    .fold(qz(), |s, x| s + x)
            })
            .collect()
    }

    /// Refine the lattice to include extra weights; returns the new context and
    /// the exponent remap for existing coefficients.
    pub fn refine(&self, extra: &[Vec<Q>]) -> Option<(DynContext, Vec<Vec<i64>>)> {
        let (lattice, remap) = self.lattice.refine(extra)?;
        let diff_table = Self::build_diff_table(&self.l, &lattice);
        Some((
            DynContext {
                l: self.l.clone(),
                lattice,
                diff_table,
            },
            remap,
        ))
    }
}

/// A constant r-matrix assembled from a Belavin-Drinfeld triple.
#[derive(Debug, Clone)]
pub struct ConstantR {
    pub tensor: Tensor<Q, 2>,
    pub triple: GBDTriple,
    pub r0: Tensor<Q, 2>,
}

fn check_r0(cb: &ChevalleyBasis, t: &GBDTriple, r0: &Tensor<Q, 2>) -> Result<(), String> {
    let rank = cb.rank();
    for (idx, _) in r0.iter() {
        if idx[0] >= rank || idx[1] >= rank {
            return Err("r0 has legs outside h".into());
        }
    }
    if r0.add(&r0.transpose21()) != cb.casimir_h() {
        return Err("r0 + r0^21 != Omega_h".into());
    }
    for (&a, &ta) in t.gamma1.iter().zip(&t.tau_images) {
        let alpha = cb.rs.simple_root_index(a);
        let talpha = cb.rs.simple_root_index(ta);
        let mut lhs = vec![qz(); rank];
        for (idx, v) in r0.iter() {
            let [i, j] = *idx;
            lhs[j] += cb.root_on_coroot(talpha, i) * v;
            lhs[i] += cb.root_on_coroot(alpha, j) * v;
        }
        if lhs.iter().any(|c| !c.is_zero()) {
            return Err(format!("(tau(a)(x)1 + 1(x)a) r0 != 0 for simple index {a}"));
        }
    }
    Ok(())
}

/// The constant tensor r0 + sum_{a>0} x_{-a}(x)x_a + sum_{a<b} x_{-a} ^ x_b
/// in the admissible basis of the triple.
pub fn constant_bd_r(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    r0: &Tensor<Q, 2>,
) -> Result<ConstantR, RmatError> {
    if !t.check_nilpotency() {
        return Err(RmatError::NotNilpotent);
    }
    check_r0(cb, t, r0).map_err(RmatError::R0Invalid)?;
    let th = extend_tau(cb, t)?;
    let pairs = t.order_pairs(&cb.rs)?;
    let mut r = r0.clone();
    for &p in &cb.rs.positives {
        r.insert_add([cb.x_index(cb.rs.neg_index(p)), cb.x_index(p)], q1());
    }
    for (a, b) in pairs {
        let na = cb.rs.neg_index(a);
        let coeff = th.scale_of(na) * th.scale_of(b);
        let w: Tensor<Q, 2> = wedge_units(cb.dim(), cb.x_index(na), cb.x_index(b));
        r = r.add(&w.scale_q(&coeff));
    }
    Ok(ConstantR {
        tensor: r,
        triple: t.clone(),
        r0: r0.clone(),
    })
}

/// K(lambda) on the positive part of <Gamma_1> in the admissible basis:
/// rows[alpha] lists (target root, coefficient).
pub struct KMap {
    pub rows: BTreeMap<usize, Vec<(usize, ExpRat)>>,
}

pub fn k_map(cb: &ChevalleyBasis, th: &TauHom, ctx: &DynContext) -> Result<KMap, RmatError> {
    if !th.triple.is_l_graded(&cb.rs, &ctx.l) {
        return Err(RmatError::NotLGraded);
    }
    let span = cb.rs.span_subset(&th.triple.gamma1).span;
    let mut rows = BTreeMap::new();
    for &a in &span {
        if !cb.rs.is_positive(a) {
            continue;
        }
        let t = ctx.monomial_for_root(cb, a)?;
        let half = ExpRat::from_rat(&q(1, 2));
        let mut row: Vec<(usize, ExpRat)> = Vec::new();
        match th.forward(a) {
            ForwardWalk::Exits(chain) => {
                row.push((a, half));
                let mut tn = ExpRat::one();
                for &target in chain.iter().skip(1) {
                    tn = tn.mul(&t);
                    row.push((target, tn.clone()));
                }
            }
            ForwardWalk::Cycle(orbit, sigma) => {
                let m = orbit.len();
                let mut tm = ExpRat::one();
                for _ in 0..m {
                    tm = tm.mul(&t);
                }
                let stm = tm.scale(&sigma);
                let denom = ExpRat::one().sub(&stm);
                let diag = ExpRat::one()
                    .add(&stm)
                    .div(&denom.scale(&crate::rational::qi(2)))
                    .map_err(RmatError::Coeff)?;
                row.push((a, diag));
                let mut tj = ExpRat::one();
                for &target in orbit.iter().skip(1) {
                    tj = tj.mul(&t);
                    let c = tj.div(&denom).map_err(RmatError::Coeff)?;
                    row.push((target, c));
                }
            }
        }
        rows.insert(a, row);
    }
    Ok(KMap { rows })
}

/// A dynamical r-matrix with exact exponential-rational coefficients.
#[derive(Debug, Clone)]
pub struct DynamicalR {
    pub tensor: Tensor<ExpRat, 2>,
    pub triple: GBDTriple,
    pub ctx: DynContext,
    pub rh0h0: Tensor<Q, 2>,
}

fn check_rh0h0(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    l: &CartanSubspace,
    r: &Tensor<Q, 2>,
) -> Result<(), String> {
    let rank = cb.rank();
    let h0 = l
        .orthocomplement_in_h(&cb.rs)
        .map_err(|_| "degenerate l".to_string())?;
    if *r != r.transpose21().neg() {
        return Err("r_h0h0 is not skew".into());
    }
    for (idx, _) in r.iter() {
        if idx[0] >= rank || idx[1] >= rank {
            return Err("r_h0h0 has legs outside h".into());
        }
    }
    for leg in 0..2 {
        let mut vecs: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for (idx, v) in r.iter() {
            let e = vecs.entry(idx[1 - leg]).or_insert_with(|| vec![qz(); rank]);
            e[idx[leg]] += v.clone();
        }
        for v in vecs.values() {
            if !in_span(h0.basis(), v) {
                return Err("r_h0h0 not supported on h0 (x) h0".into());
            }
        }
    }
    let ginv = h0.gram_inverse().ok_or("degenerate h0")?;
    let m = h0.dim();
    for (&a, &ta) in t.gamma1.iter().zip(&t.tau_images) {
        let alpha = cb.rs.simple_root_index(a);
        let talpha = cb.rs.simple_root_index(ta);
        let mut lhs = vec![qz(); rank];
        for (idx, v) in r.iter() {
            let [i, j] = *idx;
            lhs[j] += cb.root_on_coroot(talpha, i) * v;
            lhs[i] += cb.root_on_coroot(alpha, j) * v;
        }
        let mut rhs = vec![qz(); rank];
        for i in 0..m {
            for jj in 0..m {
                let w = (crate::cartan::root_on_vector(&cb.rs, alpha, h0.basis_vec(i))
                    + crate::cartan::root_on_vector(&cb.rs, talpha, h0.basis_vec(i)))
                    * ginv[i][jj].clone()
                    / crate::rational::qi(2);
                if !w.is_zero() {
                    for (k, c) in h0.basis_vec(jj).iter().enumerate() {
                        rhs[k] += w.clone() * c;
                    }
                }
            }
        }
        if lhs != rhs {
            return Err(format!("Eq.(16)-type constraint fails for simple index {a}"));
        }
    }
    Ok(())
}

/// r(lambda) = Omega/2 + r_h0h0 + sum_{a in <G1>+} K(y_a) ^ y_{-a}
///           + sum_{a in Delta+ outside <G1>} y_a ^ y_{-a} / 2.
pub fn dynamical_r(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    l: &CartanSubspace,
    rh0h0: &Tensor<Q, 2>,
) -> Result<DynamicalR, RmatError> {
    if !l.is_nondegenerate() {
        return Err(RmatError::DegenerateL);
    }
    if !l.is_regular(&cb.rs) {
        return Err(RmatError::NotRegular);
    }
    if !t.is_l_graded(&cb.rs, l) {
        return Err(RmatError::NotLGraded);
    }
    check_rh0h0(cb, t, l, rh0h0).map_err(RmatError::Rh0h0Invalid)?;
    let ctx = DynContext::new(cb, l.clone())?;
    let th = extend_tau(cb, t)?;
    let km = k_map(cb, &th, &ctx)?;
    let dim = cb.dim();
    let mut r: Tensor<ExpRat, 2> = embed(&cb.casimir().scale_q(&q(1, 2)).add(rh0h0));
    let span = cb.rs.span_subset(&t.gamma1).span;
    for &p in &cb.rs.positives {
        if span.contains(&p) {
            let np = cb.rs.neg_index(p);
            let s_neg = th.scale_of(np);
            for (target, c) in &km.rows[&p] {
                let coeff = c.scale(&(th.scale_of(*target) * s_neg.clone()));
                let w: Tensor<ExpRat, 2> = wedge_units(dim, cb.x_index(*target), cb.x_index(np));
                r = r.add(&w.scale(&coeff));
            }
        } else {
            let w: Tensor<ExpRat, 2> =
                wedge_units(dim, cb.x_index(p), cb.x_index(cb.rs.neg_index(p)));
            r = r.add(&w.scale(&ExpRat::from_rat(&q(1, 2))));
        }
    }
    Ok(DynamicalR {
        tensor: r,
        triple: t.clone(),
        ctx,
        rh0h0: rh0h0.clone(),
    })
}

/// Blockwise endomorphism phi(lambda) of l-perp.
#[derive(Debug, Clone)]
pub struct PhiMap {
    /// nonzero-weight blocks: column j of `mat` is phi(y_{roots[j]}).
    pub blocks: BTreeMap<Vec<Q>, PhiBlock>,
    /// the zero-weight block: h0 with constant matrix entries.
    pub h0: CartanSubspace,
    pub h0_mat: Vec<Vec<Q>>,
}

#[derive(Debug, Clone)]
pub struct PhiBlock {
    pub roots: Vec<usize>,
    pub mat: Vec<Vec<ExpRat>>,
}

pub fn phi_map(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    l: &CartanSubspace,
    rh0h0: &Tensor<Q, 2>,
) -> Result<PhiMap, RmatError> {
    if !l.is_nondegenerate() {
        return Err(RmatError::DegenerateL);
    }
    if !l.is_regular(&cb.rs) {
        return Err(RmatError::NotRegular);
    }
    if !t.is_l_graded(&cb.rs, l) {
        return Err(RmatError::NotLGraded);
    }
    check_rh0h0(cb, t, l, rh0h0).map_err(RmatError::Rh0h0Invalid)?;
    let ctx = DynContext::new(cb, l.clone())?;
    let th = extend_tau(cb, t)?;
    let km = k_map(cb, &th, &ctx)?;
    let span = cb.rs.span_subset(&t.gamma1).span;

    let mut groups: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
    for r in 0..cb.rs.n_roots() {
        groups.entry(ctx.weight_of_root(cb, r)).or_default().push(r);
    }
    // positive-root blocks from K, then the opposite blocks by the adjoint
    // relation phi_{-w} = -(phi_w)^*.
    let mut blocks: BTreeMap<Vec<Q>, PhiBlock> = BTreeMap::new();
    for (w, roots) in &groups {
        if !roots.iter().any(|&r| cb.rs.is_positive(r)) {
            continue;
        }
        debug_assert!(roots.iter().all(|&r| cb.rs.is_positive(r)), "regular l");
        let n = roots.len();
        let mut mat = vec![vec![ExpRat::zero(); n]; n];
        for (j, &rj) in roots.iter().enumerate() {
            if span.contains(&rj) {
                let s_inv = th.scale_of(rj).recip();
                for (target, c) in &km.rows[&rj] {
                    let i = roots
                        .iter()
                        .position(|&r| r == *target)
                        .expect("l-graded K stays in the weight block");
                    mat[i][j] = c.scale(&(th.scale_of(*target) * s_inv.clone()));
                }
            } else {
                mat[j][j] = ExpRat::from_rat(&q(1, 2));
            }
        }
        blocks.insert(w.clone(), PhiBlock { roots: roots.clone(), mat });
    }
    let positive_keys: Vec<Vec<Q>> = blocks.keys().cloned().collect();
    for w in positive_keys {
        let pos_block = blocks[&w].clone();
        let neg_w: Vec<Q> = w.iter().map(|c| -c.clone()).collect();
        let neg_roots: Vec<usize> = pos_block.roots.iter().map(|&r| cb.rs.neg_index(r)).collect();
        let n = neg_roots.len();
        let mut mat = vec![vec![ExpRat::zero(); n]; n];
        for jc in 0..n {
            for id in 0..n {
                let c = pos_block.mat[jc][id].clone();
                if !c.is_zero() {
                    mat[id][jc] = c.neg();
                }
            }
        }
        blocks.insert(neg_w, PhiBlock { roots: neg_roots, mat });
    }

    // h0 block: (phi_0 (x) 1) Omega_h0 = r_h0h0, i.e. phi_0(v) = sum (b_j, v) a_j.
    let h0 = l
        .orthocomplement_in_h(&cb.rs)
        .map_err(|_| RmatError::DegenerateL)?;
    let m = h0.dim();
    let gram = crate::cartan::coroot_gram(&cb.rs);
    let mut h0_mat = vec![vec![qz(); m]; m];
    for k in 0..m {
        let g_uk = mat_vec(&gram, h0.basis_vec(k));
        let mut img = vec![qz(); cb.rank()];
        for (idx, v) in rh0h0.iter() {
            let [i, j] = *idx;
            img[i] += v.clone() * g_uk[j].clone();
        }
        let coords = coords_in_basis(h0.basis(), &img)
            .ok_or_else(|| RmatError::Rh0h0Invalid("h0 block not closed".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            h0_mat[i][k] = c;
        }
    }
    Ok(PhiMap { blocks, h0, h0_mat })
}

impl PhiMap {
    /// phi applied to a root vector as (root, coefficient) pairs.
    pub fn apply_root(
        &self,
        cb: &ChevalleyBasis,
        l: &CartanSubspace,
        ridx: usize,
    ) -> Vec<(usize, ExpRat)> {
        let w = l.root_weight(&cb.rs, ridx);
        let block = &self.blocks[&w];
        let j = block.roots.iter().position(|&r| r == ridx).unwrap();
        block
            .roots
            .iter()
            .enumerate()
            .filter_map(|(i, &r)| {
                let c = block.mat[i][j].clone();
                (!c.is_zero()).then_some((r, c))
            })
            .collect()
    }
}

/// Gaussian elimination over the ExpRat field (unique solutions only).
pub fn exprat_solve(a: &[Vec<ExpRat>], b: &[ExpRat]) -> Option<Vec<ExpRat>> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<ExpRat>> = a
        .iter()
        .zip(b)
        .map(|(r, bv)| {
            let mut row = r.clone();
            row.push(bv.clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![None; cols];
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].inv().ok()?;
        for v in m[rank].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for jj in 0..=cols {
                    let sub = f.mul(&m[rank][jj]);
                    m[i][jj] = m[i][jj].sub(&sub);
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    for row in m.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![ExpRat::zero(); cols];
    for c in 0..cols {
        if let Some(r) = pivot_of_col[c] {
            x[c] = m[r][cols].clone();
        }
    }
    Some(x)
}

/// The subspaces A+/-, I+/- (lambda-independent, verified at two rational base
/// points) and the constant map psi_0 on representatives of A+/I+.
#[derive(Debug, Clone)]
pub struct CayleyData {
    pub a_plus: Vec<Vec<Q>>,
    pub a_minus: Vec<Vec<Q>>,
    pub i_plus: Vec<Vec<Q>>,
    pub i_minus: Vec<Vec<Q>>,
    /// (representative, psi_0 image), both in full g coordinates.
    pub psi0: Vec<(Vec<Q>, Vec<Q>)>,
    /// psi(lambda) = exp(-(w,lambda)) psi_0 held as an exact identity.
    pub scaling_law_ok: bool,
}

struct BlockView {
    members: Vec<Vec<Q>>,
    weight: Vec<Q>,
    mat: Vec<Vec<ExpRat>>,
}

fn phi_block_views(cb: &ChevalleyBasis, phi: &PhiMap, l: &CartanSubspace) -> Vec<BlockView> {
    let dim = cb.dim();
    let mut views = Vec::new();
    for (w, b) in &phi.blocks {
        let members = b
            .roots
            .iter()
            .map(|&r| {
                let mut v = vec![qz(); dim];
                v[cb.x_index(r)] = q1();
                v
            })
            .collect();
        views.push(BlockView {
            members,
            weight: w.clone(),
            mat: b.mat.clone(),
        });
    }
    if phi.h0.dim() > 0 {
        let members = phi
            .h0
            .basis()
            .iter()
            .map(|u| {
                let mut v = vec![qz(); dim];
                for (i, c) in u.iter().enumerate() {
                    v[i] = c.clone();
                }
                v
            })
            .collect();
        views.push(BlockView {
            members,
            weight: vec![qz(); l.dim()],
            mat: phi
                .h0_mat
                .iter()
                .map(|row| row.iter().map(ExpRat::from_rat).collect())
                .collect(),
        });
    }
    views
}

pub fn cayley(cb: &ChevalleyBasis, phi: &PhiMap, ctx: &DynContext) -> Result<CayleyData, RmatError> {
    let views = phi_block_views(cb, phi, &ctx.l);
    let nvars = ctx.n_vars();
    let base_candidates: [Vec<Q>; 3] = [
        vec![q(1, 2); nvars],
        vec![q(1, 3); nvars],
        vec![q(2, 5); nvars],
    ];
    let eval_at = |mat: &[Vec<ExpRat>], base: &[Q]| -> Option<Vec<Vec<Q>>> {
        mat.iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let n = e.numerator().eval_rational(base)?;
                        let d = e.denominator().eval_rational(base)?;
                        (!d.is_zero()).then(|| n / d)
                    })
                    .collect()
            })
            .collect()
    };
    type Spaces = (Vec<Vec<Q>>, Vec<Vec<Q>>, Vec<Vec<Q>>, Vec<Vec<Q>>);
    let subspaces_at = |base: &[Q]| -> Option<Spaces> {
        let mut ap = Vec::new();
        let mut am = Vec::new();
        let mut ip = Vec::new();
        let mut im = Vec::new();
        for view in &views {
            let m = eval_at(&view.mat, base)?;
            let n = view.members.len();
            let cols_of_shift = |sign: i64| -> Vec<Vec<Q>> {
                (0..n)
                    .map(|j| {
                        let mut v = vec![qz(); cb.dim()];
                        for i in 0..n {
                            let mut c = m[i][j].clone();
                            if i == j {
                                c += q(sign, 2);
                            }
                            if !c.is_zero() {
                                for (k, mv) in view.members[i].iter().enumerate() {
                                    v[k] += c.clone() * mv;
                                }
                            }
                        }
                        v
                    })
                    .collect()
            };
            ap.extend(cols_of_shift(1));
            am.extend(cols_of_shift(-1));
            let kernel_of_shift = |sign: i64| -> Vec<Vec<Q>> {
                let mut a = m.clone();
                for i in 0..n {
                    a[i][i] += q(sign, 2);
                }
                crate::solve::kernel(&a)
                    .into_iter()
                    .map(|coords| {
                        let mut v = vec![qz(); cb.dim()];
                        for (i, c) in coords.iter().enumerate() {
                            if !c.is_zero() {
                                for (k, mv) in view.members[i].iter().enumerate() {
                                    v[k] += c.clone() * mv;
                                }
                            }
                        }
                        v
                    })
                    .collect()
            };
            // I+ = Ker(phi - 1/2), I- = Ker(phi + 1/2)
            ip.extend(kernel_of_shift(-1));
            im.extend(kernel_of_shift(1));
        }
        Some((rref_basis(&ap), rref_basis(&am), rref_basis(&ip), rref_basis(&im)))
    };
    let mut found = None;
    for base in &base_candidates {
        if let Some(s) = subspaces_at(base) {
            found = Some((base.clone(), s));
            break;
        }
    }
    let (base1, (a_plus, a_minus, i_plus, i_minus)) =
        found.ok_or(RmatError::SingularAtBasePoint)?;
    let base2 = base_candidates
        .iter()
        .find(|b| **b != base1 && subspaces_at(b).is_some())
        .cloned()
        .ok_or(RmatError::SingularAtBasePoint)?;
    let s2 = subspaces_at(&base2).unwrap();
    if (a_plus.clone(), a_minus.clone(), i_plus.clone(), i_minus.clone()) != (s2.0, s2.1, s2.2, s2.3)
    {
        return Err(RmatError::SingularAtBasePoint);
    }

    let mut psi0 = Vec::new();
    let mut scaling_law_ok = true;
    for view in &views {
        let n = view.members.len();
        let m1 = eval_at(&view.mat, &base1).unwrap();
        let mut shifted_p = m1.clone();
        for i in 0..n {
            shifted_p[i][i] += q(1, 2);
        }
        let cols: Vec<Vec<Q>> = (0..n)
            .map(|j| (0..n).map(|i| shifted_p[i][j].clone()).collect())
            .collect();
        let a_loc = rref_basis(&cols);
        let mut shifted_m = m1.clone();
        for i in 0..n {
            shifted_m[i][i] -= q(1, 2);
        }
        let i_loc = crate::solve::kernel(&shifted_m);
        let reps = extend_basis(&i_loc, &a_loc);
        if reps.is_empty() {
            continue;
        }
        // I- of this block, in reduced echelon form: psi is well-defined only
        // modulo I-, so images are canonically reduced against it.
        let i_minus_loc = {
            let mut a = m1.clone();
            for i in 0..n {
                a[i][i] += q(1, 2);
            }
            rref_basis(&crate::solve::kernel(&a))
        };
        let pivot_of = |b: &Vec<Q>| -> usize {
            b.iter().position(|c| !c.is_zero()).expect("nonzero basis vector")
        };
        let mut aplus_sym = view.mat.clone();
        for (i, row) in aplus_sym.iter_mut().enumerate() {
            row[i] = row[i].add(&ExpRat::from_rat(&q(1, 2)));
        }
        let tw = ctx.monomial(&view.weight)?;
        let tw_inv = tw.inv().map_err(RmatError::Coeff)?;
        for rep in reps {
            let bvec: Vec<ExpRat> = rep.iter().map(ExpRat::from_rat).collect();
            let Some(wsol) = exprat_solve(&aplus_sym, &bvec) else {
                scaling_law_ok = false;
                continue;
            };
            let mut img = vec![ExpRat::zero(); n];
            for j in 0..n {
                if wsol[j].is_zero() {
                    continue;
                }
                for i in 0..n {
                    let mut c = view.mat[i][j].clone();
                    if i == j {
                        c = c.sub(&ExpRat::from_rat(&q(1, 2)));
                    }
                    img[i] = img[i].add(&c.mul(&wsol[j]));
                }
            }
            for b in &i_minus_loc {
                let p = pivot_of(b);
                let f = img[p].clone();
                if f.is_zero() {
                    continue;
                }
                for (i, c) in b.iter().enumerate() {
                    if !c.is_zero() {
                        img[i] = img[i].sub(&f.scale(c));
                    }
                }
            }
            let mut const_img = vec![qz(); n];
            for (i, e) in img.iter().enumerate() {
                match e.mul(&tw_inv).constant_value() {
                    Some(c) => const_img[i] = c,
                    None => scaling_law_ok = false,
                }
            }
            let mut rep_full = vec![qz(); cb.dim()];
            let mut img_full = vec![qz(); cb.dim()];
            for i in 0..n {
                if !rep[i].is_zero() {
                    for (k, mv) in view.members[i].iter().enumerate() {
                        rep_full[k] += rep[i].clone() * mv;
                    }
                }
                if !const_img[i].is_zero() {
                    for (k, mv) in view.members[i].iter().enumerate() {
                        img_full[k] += const_img[i].clone() * mv;
                    }
                }
            }
            psi0.push((rep_full, img_full));
        }
    }
    Ok(CayleyData {
        a_plus,
        a_minus,
        i_plus,
        i_minus,
        psi0,
        scaling_law_ok,
    })
}

/// Diagonal gauge by g(lambda) = exp(u(lambda)) with u(lambda) = sum_i xi_i u_i,
/// u_i in h, plus an optional constant skew shift c in Lambda^2 l:
/// r -> (G(x)G)(r - eta + eta^21 + c)(G^-1(x)G^-1) with eta = sum_i x_i (x) u_i.
pub fn gauge_diagonal(
    cb: &ChevalleyBasis,
    r: &DynamicalR,
    u_vecs: &[Vec<Q>],
    c_shift: Option<&Tensor<Q, 2>>,
) -> Result<DynamicalR, RmatError> {
    let l = &r.ctx.l;
    assert_eq!(u_vecs.len(), l.dim(), "one gauge vector per l basis element");
    let dim = cb.dim();
    let mut eta: Tensor<Q, 2> = Tensor::new(dim);
    for (i, u) in u_vecs.iter().enumerate() {
        let xi = l.basis_vec(i);
        for (a, ca) in xi.iter().enumerate() {
            for (b, cbv) in u.iter().enumerate() {
                let v = ca * cbv;
                if !v.is_zero() {
                    eta.insert_add([a, b], v);
                }
            }
        }
    }
    let mut shift = eta.transpose21().sub(&eta);
    if let Some(c) = c_shift {
        for (idx, _) in c.iter() {
            if idx[0] >= cb.rank() || idx[1] >= cb.rank() {
                return Err(RmatError::R0Invalid("shift c must live in l (x) l".into()));
            }
        }
        if *c != c.transpose21().neg() {
            return Err(RmatError::R0Invalid("shift c must be skew".into()));
        }
        shift = shift.add(c);
    }

    let gram = l.gram().clone();
    let mu_for_root = |ridx: usize| -> Vec<Q> {
        // exp(beta(u(lambda))) = monomial of mu with mu(w_i) = -beta(u_i)
        let c: Vec<Q> = (0..l.dim())
            .map(|i| -crate::cartan::root_on_vector(&cb.rs, ridx, &u_vecs[i]))
            .collect();
        (0..l.dim())
            .map(|j| {
                gram[j]
                    .iter()
                    .zip(&c)
                    .map(|(g, ci)| g * ci)
                    .fold(qz(), |s, x| s + x)
            })
            .collect()
    };
    let needed: Vec<Vec<Q>> = (0..cb.rs.n_roots()).map(mu_for_root).collect();
    let (ctx, remap) = r
        .ctx
        .refine(&needed)
        .ok_or(RmatError::LatticeExtensionFailed)?;

    let shifted = r.tensor.add(&embed(&shift));
    let mut out: Tensor<ExpRat, 2> = Tensor::new(dim);
    for (idx, v) in shifted.iter() {
        let mut coeff = v.remap_exponents(&remap);
        for &leg in idx.iter() {
            if let Some(ridx) = cb.root_of(leg) {
                let mono = ctx.monomial(&mu_for_root(ridx))?;
                coeff = coeff.mul(&mono);
            }
        }
        out.insert_add(*idx, coeff);
    }
    Ok(DynamicalR {
        tensor: out,
        triple: r.triple.clone(),
        ctx,
        rh0h0: r.rh0h0.clone(),
    })
}

/// Coefficientwise limit along the ray lambda = s*d as s -> +infinity,
/// d = sum_i dir[i] x_i in l.
pub fn asymptotic_limit(r: &DynamicalR, dir: &[Q]) -> Result<Tensor<Q, 2>, RmatError> {
    let w = r.ctx.ray_weights(dir);
    let mut out = Tensor::new(r.tensor.dim());
    for (idx, v) in r.tensor.iter() {
        let lim = v.limit_along(&w).map_err(|e| match e {
            CoeffError::DivergesAlongRay => RmatError::DivergesAlongRay,
            other => RmatError::Coeff(other),
        })?;
        out.insert_add(*idx, lim);
    }
    Ok(out)
}

/// Gauge vectors making the K-chain cross terms constant: solves
/// (tau(a) - a)(u_i) = (bar a)(w_i) for a running over Gamma_1 with one
/// condition dropped per tau-cycle (the conditions around a cycle telescope
/// inconsistently, matching the fact that only Gamma_3-free triples gauge to
/// constants). For a nilpotent triple every condition is imposed and the
/// gauged dynamical r-matrix is constant.
pub fn interpolation_gauge(
    cb: &ChevalleyBasis,
    t: &GBDTriple,
    l: &CartanSubspace,
) -> Option<Vec<Vec<Q>>> {
    let rank = cb.rank();
    let m = l.dim();
    if t.gamma1.is_empty() {
        return Some(vec![vec![qz(); rank]; m]);
    }
    let ginv = l.gram_inverse()?;
    // orbit structure of tau on the simple indices of Gamma_1
    let mut imposed: Vec<usize> = Vec::new();
    let mut visited: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    let image_set: std::collections::BTreeSet<usize> = t
        .gamma1
        .iter()
        .filter_map(|&a| t.tau_of(a).filter(|img| t.gamma1.contains(img)))
        .collect();
    let mut starts: Vec<usize> = t
        .gamma1
        .iter()
        .copied()
        .filter(|a| !image_set.contains(a))
        .collect();
    starts.sort();
    for &s in &starts {
        let mut cur = s;
        loop {
            visited.insert(cur);
            imposed.push(cur);
            match t.tau_of(cur) {
                Some(next) if t.gamma1.contains(&next) => cur = next,
                _ => break,
            }
        }
    }
    let mut remaining: Vec<usize> = t
        .gamma1
        .iter()
        .copied()
        .filter(|a| !visited.contains(a))
        .collect();
    remaining.sort();
    for &s in &remaining {
        if visited.contains(&s) {
            continue;
        }
        // cycle: impose all edges except the one closing the cycle
        let mut cur = s;
        loop {
            visited.insert(cur);
            let next = t.tau_of(cur).expect("cycle");
            if next == s {
                break;
            }
            imposed.push(cur);
            cur = next;
        }
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &a in &imposed {
        let ta = t.tau_of(a).expect("in Gamma_1");
        let alpha = cb.rs.simple_root_index(a);
        let talpha = cb.rs.simple_root_index(ta);
        for i in 0..m {
            let mut row = vec![qz(); m * rank];
            for k in 0..rank {
                row[i * rank + k] = cb.root_on_coroot(talpha, k) - cb.root_on_coroot(alpha, k);
            }
            rows.push(row);
            let wv = (0..m)
                .map(|j| {
                    ginv[i][j].clone()
                        * crate::cartan::root_on_vector(&cb.rs, alpha, l.basis_vec(j))
                })
                .fold(qz(), |s, x| s + x);
            rhs.push(wv);
        }
    }
    let (sol, _) = crate::solve::solve_affine(&rows, &rhs)?;
    Some((0..m).map(|i| sol[i * rank..(i + 1) * rank].to_vec()).collect())
}

/// epsilon-rescaling r(lambda) -> eps r(eps lambda): coefficients scale by eps
/// and every lattice weight scales by eps.
pub fn rescale_epsilon(r: &DynamicalR, eps: &Q) -> Result<DynamicalR, RmatError> {
    if eps.is_zero() {
        return Err(RmatError::R0Invalid("epsilon must be nonzero".into()));
    }
    let gens = r.ctx.lattice.generators().to_vec();
    let scaled: Vec<Vec<Q>> = gens
        .iter()
        .map(|g| g.iter().map(|c| c * eps).collect())
        .collect();
    let new_lat = WeightLattice::new(&scaled);
    let remap: Option<Vec<Vec<i64>>> = scaled.iter().map(|g| new_lat.decompose(g)).collect();
    let remap = remap.ok_or(RmatError::LatticeExtensionFailed)?;
    let ctx = DynContext::from_parts(r.ctx.l.clone(), new_lat)?;
    let tensor = r.tensor.map_coeffs(|c| c.remap_exponents(&remap).scale(eps));
    Ok(DynamicalR {
        tensor,
        triple: r.triple.clone(),
        ctx,
        rh0h0: r.rh0h0.scale_q(eps),
    })
}
