//! The simple Lie algebra in a Chevalley-style basis with exact rational
//! structure constants.
//!
//! Structure constants are fixed by the extraspecial-pair sign convention
//! (positive sign on extraspecial pairs), then root vectors are rescaled so
//! (x_alpha, x_{-alpha}) = 1. In this normalization [x_alpha, x_{-alpha}] is
//! the form-dual t_alpha of alpha in h, and the Casimir is
//! Omega_h + sum_alpha x_alpha (x) x_{-alpha}.

use crate::cartan::coroot_gram;
use crate::rational::{q1, qz, Q};
use crate::rootsys::RootSystem;
use crate::tensor::Tensor;
use crate::triples::{GBDTriple, TripleError};
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct ChevalleyBasis {
    pub rs: RootSystem,
    /// bracket[a][b] as a sparse combination of basis elements
    bracket: Vec<Vec<Vec<(usize, Q)>>>,
    cartan_gram: Vec<Vec<Q>>,
    cartan_gram_inv: Vec<Vec<Q>>,
    /// rescale factors from the classical Chevalley basis: y_mu = c_mu e_mu
    c_scale: Vec<Q>,
}

impl ChevalleyBasis {
    pub fn dim(&self) -> usize {
        self.rs.rank + self.rs.n_roots()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    /// Basis index of the coroot h_i.
    pub fn h_index(&self, i: usize) -> usize {
        i
    }

    /// Basis index of the root vector x_mu.
    pub fn x_index(&self, ridx: usize) -> usize {
        self.rs.rank + ridx
    }

    /// Root index of a basis index, if it is a root vector.
    pub fn root_of(&self, idx: usize) -> Option<usize> {
        (idx >= self.rs.rank).then(|| idx - self.rs.rank)
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.bracket[a][b]
    }

    /// Bracket of sparse linear combinations.
    pub fn bracket_vec(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Vec<(usize, Q)> {
        let mut acc: HashMap<usize, Q> = HashMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (k, ck) in &self.bracket[*a][*b] {
                    let e = acc.entry(*k).or_insert_with(qz);
                    *e += ca * cb * ck;
                }
            }
        }
        let mut out: Vec<(usize, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Invariant form on basis elements.
    pub fn form(&self, a: usize, b: usize) -> Q {
        let r = self.rs.rank;
        match (a < r, b < r) {
            (true, true) => self.cartan_gram[a][b].clone(),
            (false, false) => {
                let ra = a - r;
                let rb = b - r;
                if self.rs.neg_index(ra) == rb {
                    q1()
                } else {
                    qz()
                }
            }
            _ => qz(),
        }
    }

    /// alpha(h_i) for a root index.
    pub fn root_on_coroot(&self, ridx: usize, i: usize) -> Q {
        crate::rational::qi(self.rs.pair_coroot(self.rs.root(ridx), i))
    }

    /// alpha(sum_j v_j h_j).
    pub fn root_on_vector(&self, ridx: usize, v: &[Q]) -> Q {
        crate::cartan::root_on_vector(&self.rs, ridx, v)
    }

    /// Coordinates in the coroot basis of t_mu, the form-dual of the root mu:
    /// t_mu = sum_i mu_i d_i h_i.
    pub fn t_vector(&self, ridx: usize) -> Vec<Q> {
        self.rs
            .root(ridx)
            .iter()
            .enumerate()
            .map(|(i, &c)| crate::rational::qi(c) * self.rs.d[i].clone())
            .collect()
    }

    /// d_mu = (mu, mu)/2.
    pub fn half_norm(&self, ridx: usize) -> Q {
        let v = self.rs.root(ridx);
        self.rs.inner(v, v) / crate::rational::qi(2)
    }

    pub fn c_scale(&self, ridx: usize) -> &Q {
        &self.c_scale[ridx]
    }

    /// Omega_h, the inverse element of the form restricted to h.
    pub fn casimir_h(&self) -> Tensor<Q, 2> {
        let r = self.rs.rank;
        let mut t = Tensor::new(self.dim());
        for i in 0..r {
            for j in 0..r {
                let v = self.cartan_gram_inv[i][j].clone();
                if !v.is_zero() {
                    t.insert_add([i, j], v);
                }
            }
        }
        t
    }

    /// The Casimir Omega = Omega_h + sum_{mu in Delta} x_mu (x) x_{-mu}.
    pub fn casimir(&self) -> Tensor<Q, 2> {
        let mut t = self.casimir_h();
        for ridx in 0..self.rs.n_roots() {
            t.insert_add([self.x_index(ridx), self.x_index(self.rs.neg_index(ridx))], q1());
        }
        t
    }

    /// Image of a basis element under the Chevalley-type involution
    /// (h -> -h, x_mu -> -(c_mu/c_{-mu}) x_{-mu}), an automorphism swapping
    /// the polarizations.
    pub fn involution_image(&self, idx: usize) -> (usize, Q) {
        match self.root_of(idx) {
            None => (idx, -q1()),
            Some(ridx) => {
                let neg = self.rs.neg_index(ridx);
                let c = -(self.c_scale[ridx].clone() / self.c_scale[neg].clone());
                (self.x_index(neg), c)
            }
        }
    }

    /// Applies the involution on both legs of a degree-2 tensor.
    pub fn apply_involution2(&self, t: &Tensor<Q, 2>) -> Tensor<Q, 2> {
        let mut out = Tensor::new(self.dim());
        for (idx, v) in t.iter() {
            let (a, ca) = self.involution_image(idx[0]);
            let (b, cb) = self.involution_image(idx[1]);
            out.insert_add([a, b], v * &ca * cb);
        }
        out
    }

    /// Builds the algebra from a root system.
    pub fn build(rs: RootSystem) -> ChevalleyBasis {
        let npos = rs.n_pos();
        let nroots = rs.n_roots();
        let rank = rs.rank;

        // p(a, b) = max { k : beta - k alpha in Delta } for root indices a, b
        let p_of = |a: usize, b: usize| -> i64 {
            let alpha = rs.root(a);
            let beta = rs.root(b);
            let mut k = 0i64;
            loop {
                let probe: Vec<i64> = beta
                    .iter()
                    .zip(alpha)
                    .map(|(x, y)| x - (k + 1) * y)
                    .collect();
                if rs.is_root(&probe) {
                    k += 1;
                } else {
                    return k;
                }
            }
        };
        let sum_idx = |a: usize, b: usize| -> Option<usize> {
            let v: Vec<i64> = rs
                .root(a)
                .iter()
                .zip(rs.root(b))
                .map(|(x, y)| x + y)
                .collect();
            rs.root_index(&v)
        };
        let norm = |a: usize| {
            let v = rs.root(a);
            rs.inner(v, v)
        };

        // extraspecial pair of each non-simple positive root
        let mut extraspecial: HashMap<usize, (usize, usize)> = HashMap::new();
        for g in 0..npos {
            if crate::rootsys::height(rs.root(g)) == 1 {
                continue;
            }
            'search: for a in 0..npos {
                for b in (a + 1)..npos {
                    if sum_idx(a, b) == Some(g) {
                        extraspecial.insert(g, (a, b));
                        break 'search;
                    }
                }
            }
        }

        // Classical Chevalley constants N for positive special pairs, computed
        // in increasing height of the sum. Sign conventions beyond the
        // extraspecial ones follow from the relations
        //   N_{a,b} = -N_{b,a},  N_{-a,-b} = -N_{a,b},
        //   N_{a,b}/(c,c) = N_{b,c}/(a,a)  for a + b + c = 0,
        // and the Jacobi identity on (e_{-delta}, e_alpha, e_beta).
        let mut special: HashMap<(usize, usize), Q> = HashMap::new();

        struct Ctx<'a> {
            rs: &'a RootSystem,
        }
        impl<'a> Ctx<'a> {
            fn n_any(
                &self,
                special: &HashMap<(usize, usize), Q>,
                a: usize,
                b: usize,
            ) -> Q {
                let rs = self.rs;
                let npos = rs.n_pos();
                let pos_a = a < npos;
                let pos_b = b < npos;
                match (pos_a, pos_b) {
                    (true, true) => {
                        if a < b {
                            special.get(&(a, b)).cloned().expect("computed earlier")
                        } else {
                            -special.get(&(b, a)).cloned().expect("computed earlier")
                        }
                    }
                    (false, false) => -self.n_any(special, rs.neg_index(a), rs.neg_index(b)),
                    (true, false) => {
                        // N_{mu, -nu}
                        let mu = a;
                        let nu = rs.neg_index(b);
                        let diff: Vec<i64> = rs
                            .root(mu)
                            .iter()
                            .zip(rs.root(nu))
                            .map(|(x, y)| x - y)
                            .collect();
                        let rho = rs.root_index(&diff).expect("caller ensures root sum");
                        if rs.is_positive(rho) {
                            // N_{mu,-nu} = -N_{nu,rho} (rho,rho)/(mu,mu)
                            let n = self.n_any(special, nu, rho);
                            let rr = rs.inner(rs.root(rho), rs.root(rho));
                            let mm = rs.inner(rs.root(mu), rs.root(mu));
                            -n * rr / mm
                        } else {
                            // N_{mu,-nu} = N_{nu,-mu} = -N_{mu,rho'} (rho',rho')/(nu,nu)
                            let rho_p = rs.neg_index(rho);
                            let n = self.n_any(special, mu, rho_p);
                            let rr = rs.inner(rs.root(rho_p), rs.root(rho_p));
                            let nn = rs.inner(rs.root(nu), rs.root(nu));
                            -n * rr / nn
                        }
                    }
                    (false, true) => -self.n_any(special, b, a),
                }
            }
        }
        let ctx = Ctx { rs: &rs };

        for g in 0..npos {
            let Some(&(delta, eps)) = extraspecial.get(&g) else {
                continue;
            };
            for a in 0..npos {
                for b in (a + 1)..npos {
                    if sum_idx(a, b) != Some(g) {
                        continue;
                    }
                    if (a, b) == (delta, eps) {
                        special.insert((a, b), crate::rational::qi(p_of(a, b) + 1));
                        continue;
                    }
                    // N_{a,b} N_{g,-delta} = -N_{-delta,a} N_{a-delta,b} - N_{b,-delta} N_{b-delta,a}
                    let n_g_negdelta = {
                        let n_de = special.get(&(delta, eps)).cloned().expect("extraspecial first");
                        -n_de * norm(eps) / norm(g)
                    };
                    let term = |x: usize| -> Q {
                        // N_{-delta,x} N_{x-delta, other}
                        let diff: Vec<i64> = rs
                            .root(x)
                            .iter()
                            .zip(rs.root(delta))
                            .map(|(p, q)| p - q)
                            .collect();
                        match rs.root_index(&diff) {
                            None => qz(),
                            Some(xd) => {
                                let other = if x == a { b } else { a };
                                let n1 =
                                    ctx.n_any(&special, rs.neg_index(delta), x);
                                let n2 = ctx.n_any(&special, xd, other);
                                n1 * n2
                            }
                        }
                    };
                    let t1 = term(a);
                    let t2 = {
                        // N_{b,-delta} N_{b-delta,a} = -N_{-delta,b} N_{b-delta,a}
                        let diff: Vec<i64> = rs
                            .root(b)
                            .iter()
                            .zip(rs.root(delta))
                            .map(|(p, q)| p - q)
                            .collect();
                        match rs.root_index(&diff) {
                            None => qz(),
                            Some(bd) => {
                                let n1 = ctx.n_any(&special, b, rs.neg_index(delta));
                                let n2 = ctx.n_any(&special, bd, a);
                                n1 * n2
                            }
                        }
                    };
                    let n_ab = (-t1 - t2) / n_g_negdelta;
                    special.insert((a, b), n_ab);
                }
            }
        }

        // admissible rescaling: c_mu = 1 for positive mu, d_mu for negative mu
        let mut c_scale = vec![q1(); nroots];
        for p in 0..npos {
            let neg = rs.neg_index(p);
            let v = rs.root(p);
            c_scale[neg] = rs.inner(v, v) / crate::rational::qi(2);
        }

        // full bracket table
        let dim = rank + nroots;
        let mut bracket: Vec<Vec<Vec<(usize, Q)>>> = vec![vec![Vec::new(); dim]; dim];
        // [h_i, x_mu] and [x_mu, h_i]
        for i in 0..rank {
            for ridx in 0..nroots {
                let c = crate::rational::qi(rs.pair_coroot(rs.root(ridx), i));
                if !c.is_zero() {
                    bracket[i][rank + ridx] = vec![(rank + ridx, c.clone())];
                    bracket[rank + ridx][i] = vec![(rank + ridx, -c)];
                }
            }
        }
        // [x_mu, x_nu]
        for a in 0..nroots {
            for b in 0..nroots {
                if a == b {
                    continue;
                }
                if rs.neg_index(a) == b {
                    // [y_mu, y_{-mu}] = t_mu
                    let tv: Vec<(usize, Q)> = rs
                        .root(a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, crate::rational::qi(c) * rs.d[i].clone()))
                        .collect();
                    bracket[rank + a][rank + b] = tv;
                    continue;
                }
                if let Some(sum) = sum_idx(a, b) {
                    let n = ctx.n_any(&special, a, b);
                    let m = c_scale[a].clone() * c_scale[b].clone() / c_scale[sum].clone() * n;
                    if !m.is_zero() {
                        bracket[rank + a][rank + b] = vec![(rank + sum, m)];
                    }
                }
            }
        }

        let cartan_gram = coroot_gram(&rs);
        let cartan_gram_inv = crate::solve::invert(&cartan_gram).expect("Cartan form nondegenerate");

        ChevalleyBasis {
            rs,
            bracket,
            cartan_gram,
            cartan_gram_inv,
            c_scale,
        }
    }
}

/// The extension of tau to a Lie algebra homomorphism on g_{Gamma_1},
/// together with the per-triple admissible rescaling of root vectors.
#[derive(Debug, Clone)]
pub struct TauHom {
    pub triple: GBDTriple,
    /// tau_hat(y_mu) = eps[mu] * y_{tau mu}, in the unscaled basis.
    eps: HashMap<usize, Q>,
    /// admissible rescale: y'_mu = scale[mu] * y_mu; covers <Gamma_1> and the
    /// exit targets of tau-chains, with inverses on negatives.
    scale: HashMap<usize, Q>,
    /// root-level tau on the span of Gamma_1 (both signs).
    tau_target: HashMap<usize, usize>,
}

/// Forward tau-orbit of a positive root in <Gamma_1>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForwardWalk {
    /// [alpha, tau alpha, ..., tau^L alpha] with tau^L alpha outside <Gamma_1>.
    Exits(Vec<usize>),
    /// One period [alpha, ..., tau^{m-1} alpha] and the sign of tau_hat^m on g_alpha.
    Cycle(Vec<usize>, Q),
}

impl TauHom {
    /// tau_hat on the scaled basis: tau_hat(y'_mu) = coeff * y'_{tau mu}.
    pub fn scaled_image(&self, ridx: usize) -> Option<(usize, Q)> {
        let (img, eps) = self.image(ridx)?;
        let s_from = self.scale.get(&ridx)?;
        let s_to = self.scale.get(&img)?;
        Some((img, s_from.clone() * eps / s_to.clone()))
    }

    /// tau_hat on the unscaled basis.
    pub fn image(&self, ridx: usize) -> Option<(usize, Q)> {
        self.eps.get(&ridx).map(|e| {
            (
                self.tau_root_unchecked(ridx),
                e.clone(),
            )
        })
    }

    fn tau_root_unchecked(&self, ridx: usize) -> usize {
        self.tau_target[&ridx]
    }

    pub fn scale_of(&self, ridx: usize) -> Q {
        self.scale.get(&ridx).cloned().unwrap_or_else(q1)
    }

    /// Walks the forward orbit of a positive root of <Gamma_1>, in the scaled
    /// basis (so consecutive images have coefficient 1 and a cycle closes with
    /// the sign sigma).
    pub fn forward(&self, start: usize) -> ForwardWalk {
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            match self.tau_target.get(&cur) {
                None => return ForwardWalk::Exits(chain),
                Some(&next) => {
                    if next == start {
                        // wrap: sigma is the accumulated coefficient
                        let mut sigma = q1();
                        for &r in &chain {
                            let (_, c) = self.scaled_image(r).expect("in domain");
                            sigma *= c;
                        }
                        return ForwardWalk::Cycle(chain, sigma);
                    }
                    chain.push(next);
                    cur = next;
                }
            }
        }
    }
}

/// Builds tau_hat on g_{Gamma_1} and the admissible per-triple rescaling.
///
/// Within each tau-orbit of <Gamma_1> cap Delta_+ the first representative in
/// root order keeps scale 1 and the others are defined by applying tau_hat;
/// negative root vectors are rescaled to keep (x_alpha, x_{-alpha}) = 1.
pub fn extend_tau(cb: &ChevalleyBasis, t: &GBDTriple) -> Result<TauHom, TripleError> {
    let rs = &cb.rs;
    let span = rs.span_subset(&t.gamma1).span;
    let span_pos: Vec<usize> = span.iter().copied().filter(|&r| rs.is_positive(r)).collect();

    // root-level map on the whole span
    let mut tau_target: HashMap<usize, usize> = HashMap::new();
    for &r in &span {
        let img = t.tau_root(rs, r).ok_or(TripleError::NotNormPreserving)?;
        tau_target.insert(r, img);
    }

    // eps on positive span roots by height, then on negatives by duality
    let mut eps: HashMap<usize, Q> = HashMap::new();
    let mut by_height = span_pos.clone();
    by_height.sort_by_key(|&r| crate::rootsys::height(rs.root(r)));
    for &r in &by_height {
        if crate::rootsys::height(rs.root(r)) == 1 {
            eps.insert(r, q1());
            continue;
        }
        // find a simple summand within Gamma_1
        let mut found = None;
        for &i in &t.gamma1 {
            let si = rs.simple_root_index(i);
            let diff: Vec<i64> = rs
                .root(r)
                .iter()
                .zip(rs.root(si))
                .map(|(a, b)| a - b)
                .collect();
            if let Some(g) = rs.root_index(&diff) {
                if rs.is_positive(g) && span.contains(&g) {
                    found = Some((si, g));
                    break;
                }
            }
        }
        let (si, g) = found.expect("positive non-simple root has a simple summand in its subsystem");
        let m_fwd = bracket_coeff(cb, si, g, r);
        let ti = tau_target[&si];
        let tg = tau_target[&g];
        let tr = tau_target[&r];
        let m_img = bracket_coeff(cb, ti, tg, tr);
        let e = eps[&si].clone() * eps[&g].clone() * m_img / m_fwd;
        eps.insert(r, e);
    }
    for &r in &span_pos {
        let neg = rs.neg_index(r);
        eps.insert(neg, eps[&r].clone().recip());
    }

    // admissible scaling along chains and cycles of the partial map on positives
    let in_domain: std::collections::BTreeSet<usize> = span_pos.iter().copied().collect();
    let image_set: std::collections::BTreeSet<usize> = span_pos
        .iter()
        .filter_map(|&r| {
            let img = tau_target[&r];
            in_domain.contains(&img).then_some(img)
        })
        .collect();
    let mut scale: HashMap<usize, Q> = HashMap::new();
    let mut starts: Vec<usize> = span_pos
        .iter()
        .copied()
        .filter(|r| !image_set.contains(r))
        .collect();
    starts.sort();
    // chains first
    for &s in &starts {
        let mut cur = s;
        scale.insert(cur, q1());
        while let Some(&next) = tau_target.get(&cur) {
            let e = eps[&cur].clone();
            let sc = scale[&cur].clone() * e;
            scale.insert(next, sc);
            if !in_domain.contains(&next) {
                break;
            }
            cur = next;
        }
    }
    // remaining positives form cycles; start each at its smallest root index
    let mut remaining: Vec<usize> = span_pos
        .iter()
        .copied()
        .filter(|r| !scale.contains_key(r))
        .collect();
    remaining.sort();
    for &s in &remaining {
        if scale.contains_key(&s) {
            continue;
        }
        let mut cur = s;
        scale.insert(cur, q1());
        loop {
            let next = tau_target[&cur];
            if next == s {
                break;
            }
            let sc = scale[&cur].clone() * eps[&cur].clone();
            scale.insert(next, sc);
            cur = next;
        }
    }
    // negatives keep the pairing normalized
    let keys: Vec<usize> = scale.keys().copied().collect();
    for r in keys {
        let neg = rs.neg_index(r);
        scale.insert(neg, scale[&r].clone().recip());
    }

    let th = TauHom {
        triple: t.clone(),
        eps,
        scale,
        tau_target,
    };
    // cycles must close with sign +-1
    for &r in &span_pos {
        if let ForwardWalk::Cycle(_, sigma) = th.forward(r) {
            assert!(
                sigma == q1() || sigma == -q1(),
                "tau-cycle closes with non-sign factor {sigma}"
            );
        }
    }
    Ok(th)
}

fn bracket_coeff(cb: &ChevalleyBasis, a: usize, b: usize, expect: usize) -> Q {
    let br = cb.bracket(cb.x_index(a), cb.x_index(b));
    for (k, c) in br {
        if *k == cb.x_index(expect) {
            return c.clone();
        }
    }
    panic!("expected bracket component missing");
}
