//! Multivariate Laurent polynomials over Q with exact gcd.
//!
//! Exponent keys are stored with trailing zeros trimmed, so a polynomial in
//! fewer variables is directly compatible with one in more.

use crate::rational::{q1, qz, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    /// exponent vector (trimmed) -> nonzero coefficient
    terms: BTreeMap<Vec<i64>, Q>,
}

fn trim(mut e: Vec<i64>) -> Vec<i64> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn deglex(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let ta: i64 = a.iter().sum();
    let tb: i64 = b.iter().sum();
    ta.cmp(&tb).then_with(|| {
        let n = a.len().max(b.len());
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            match x.cmp(&y) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    })
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(q1())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly { terms }
    }

    pub fn monomial(exps: Vec<i64>, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        LaurentPoly { terms }
    }

    /// Single variable u_v.
    pub fn var(v: usize) -> Self {
        let mut e = vec![0i64; v + 1];
        e[v] = 1;
        Self::monomial(e, q1())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Vec::new()))
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(qz())
        } else if self.is_constant() {
            self.terms.get(&Vec::new()).cloned()
        } else {
            None
        }
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: &Q) {
        if c.is_zero() {
            return;
        }
        let key = trim(exps);
        let entry = self.terms.entry(key.clone()).or_insert_with(qz);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let mut e = vec![0i64; n];
                for (i, item) in e.iter_mut().enumerate() {
                    *item = e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0);
                }
                out.add_term(e, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiply by the monomial u^shift (entries may be negative).
    pub fn shift(&self, shift: &[i64]) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let n = e.len().max(shift.len());
            let mut f = vec![0i64; n];
            for (i, item) in f.iter_mut().enumerate() {
                *item = e.get(i).copied().unwrap_or(0) + shift.get(i).copied().unwrap_or(0);
            }
            out.add_term(f, c);
        }
        out
    }

    /// Per-variable minimum exponent over all terms (0 for absent variables).
    pub fn min_exponents(&self, nvars: usize) -> Vec<i64> {
        let mut m = vec![i64::MAX; nvars];
        for e in self.terms.keys() {
            for (i, item) in m.iter_mut().enumerate() {
                let v = e.get(i).copied().unwrap_or(0);
                if v < *item {
                    *item = v;
                }
            }
        }
        m.into_iter().map(|v| if v == i64::MAX { 0 } else { v }).collect()
    }

    /// Leading term under degree-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Vec<i64>, &Q)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| deglex(a, b))
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(qz)
    }

    /// Term-wise multiply by -(sum_v e_v * w_v): the derivative rule for
    /// monomials u^e standing for exp(-(sum e_v g_v, lambda)).
    pub fn weighted_derivative(&self, w: &[Q]) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let mut factor = qz();
            for (v, &ev) in e.iter().enumerate() {
                if ev != 0 {
                    factor -= w[v].clone() * crate::rational::qi(ev);
                }
            }
            out.add_term(e.clone(), &(c * &factor));
        }
        out
    }

    /// Numeric evaluation; also returns the magnitude scale (sum of |term|).
    pub fn eval_complex(&self, u: &[Complex64]) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0f64;
        for (e, c) in &self.terms {
            let mut m = Complex64::new(crate::rational::q_to_f64(c), 0.0);
            for (v, &ev) in e.iter().enumerate() {
                if ev != 0 {
                    m *= u[v].powi(ev as i32);
                }
            }
            acc += m;
            scale += m.norm();
        }
        (acc, scale)
    }

    /// Substitute exact rational values (requires e_v >= 0 wherever base is 0;
    /// returns None if a negative power of 0 occurs).
    pub fn eval_rational(&self, base: &[Q]) -> Option<Q> {
        let mut acc = qz();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &ev) in e.iter().enumerate() {
                if ev == 0 {
                    continue;
                }
                let b = base.get(v).cloned().unwrap_or_else(qz);
                if b.is_zero() {
                    if ev > 0 {
                        m = qz();
                        break;
                    } else {
                        return None;
                    }
                }
                let p = if ev > 0 {
                    num_traits::pow::pow(b, ev as usize)
                } else {
                    num_traits::pow::pow(b.recip(), (-ev) as usize)
                };
                m *= p;
            }
            acc += m;
        }
        Some(acc)
    }

    /// Collapse terms by rational weight w(e) = sum_v e_v * ray_w[v];
    /// returns the (weight -> coefficient-sum) map with zero sums dropped.
    pub fn weight_profile(&self, ray_w: &[Q]) -> BTreeMap<Q, Q> {
        let mut map: BTreeMap<Q, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut w = qz();
            for (v, &ev) in e.iter().enumerate() {
                if ev != 0 {
                    w += ray_w[v].clone() * crate::rational::qi(ev);
                }
            }
            let entry = map.entry(w).or_insert_with(qz);
            *entry += c;
        }
        map.retain(|_, v| !v.is_zero());
        map
    }

    /// Remap exponent vectors by an integer matrix: new_e = old_e * m
    /// (m[j] is the row of new-generator exponents for old variable j).
    pub fn remap_exponents(&self, m: &[Vec<i64>]) -> Self {
        let mut out = LaurentPoly::zero();
        let width = m.iter().map(|r| r.len()).max().unwrap_or(0);
        for (e, c) in &self.terms {
            let mut f = vec![0i64; width];
            for (j, &ej) in e.iter().enumerate() {
                if ej != 0 {
                    for (k, item) in f.iter_mut().enumerate() {
                        *item += ej * m[j].get(k).copied().unwrap_or(0);
                    }
                }
            }
            out.add_term(f, c);
        }
        out
    }
}

// ---- exact division and gcd (on polynomials with nonnegative exponents) ----

fn exp_sub(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    let n = a.len().max(b.len());
    let mut out = vec![0i64; n];
    for (i, item) in out.iter_mut().enumerate() {
        let d = a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0);
        if d < 0 {
            return None;
        }
        *item = d;
    }
    Some(out)
}

/// Exact multivariate division; `None` when not divisible.
pub fn exact_div(f: &LaurentPoly, g: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!g.is_zero(), "division by zero polynomial");
    let mut rem = f.clone();
    let mut quot = LaurentPoly::zero();
    let (ge, gc) = {
        let (e, c) = g.leading_term().unwrap();
        (e.clone(), c.clone())
    };
    while !rem.is_zero() {
        let (re, rc) = {
            let (e, c) = rem.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let de = exp_sub(&re, &ge)?;
        let dc = rc / gc.clone();
        let t = LaurentPoly::monomial(de, dc);
        quot = quot.add(&t);
        rem = rem.sub(&t.mul(g));
    }
    Some(quot)
}

/// Highest variable index actually appearing, or None for constants.
fn main_var(f: &LaurentPoly) -> Option<usize> {
    let mut mv = None;
    for e in f.terms.keys() {
        for (i, &ev) in e.iter().enumerate() {
            if ev != 0 {
                mv = Some(mv.map_or(i, |m: usize| m.max(i)));
            }
        }
    }
    mv
}

/// View as univariate in `var`: degree -> coefficient polynomial.
fn split_var(f: &LaurentPoly, var: usize) -> BTreeMap<i64, LaurentPoly> {
    let mut map: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (e, c) in &f.terms {
        let d = e.get(var).copied().unwrap_or(0);
        let mut rest = e.clone();
        if rest.len() > var {
            rest[var] = 0;
        }
        map.entry(d)
            .or_insert_with(LaurentPoly::zero)
            .add_term(rest, c);
    }
    map.retain(|_, p| !p.is_zero());
    map
}

fn join_var(map: &BTreeMap<i64, LaurentPoly>, var: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (&d, p) in map {
        let mut shift = vec![0i64; var + 1];
        shift[var] = d;
        out = out.add(&p.shift(&shift));
    }
    out
}

fn univ_degree(map: &BTreeMap<i64, LaurentPoly>) -> i64 {
    map.keys().next_back().copied().unwrap_or(-1)
}

/// Pseudo-remainder of f by g, both as univariate-in-`var` views.
fn pseudo_rem(
    f: &BTreeMap<i64, LaurentPoly>,
    g: &BTreeMap<i64, LaurentPoly>,
) -> BTreeMap<i64, LaurentPoly> {
    let dg = univ_degree(g);
    let lcg = g[&dg].clone();
    let mut r = f.clone();
    while univ_degree(&r) >= dg && !r.is_empty() {
        let dr = univ_degree(&r);
        let lcr = r[&dr].clone();
        // r = lcg * r - lcr * x^(dr-dg) * g
        let mut next: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (&d, p) in &r {
            next.entry(d)
                .or_insert_with(LaurentPoly::zero)
                .add_assign(&p.mul(&lcg));
        }
        for (&d, p) in g {
            next.entry(d + dr - dg)
                .or_insert_with(LaurentPoly::zero)
                .add_assign(&p.mul(&lcr).neg());
        }
        next.retain(|_, p| !p.is_zero());
        r = next;
    }
    r
}

trait AddAssignPoly {
    fn add_assign(&mut self, other: &LaurentPoly);
}
impl AddAssignPoly for LaurentPoly {
    fn add_assign(&mut self, other: &LaurentPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }
}

/// GCD of polynomials over Q (nonnegative exponents), normalized monic
/// under deglex. Primitive PRS, recursive in the number of variables.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = poly_gcd_raw(a, b);
    let lc = g.leading_coeff();
    if lc.is_zero() || lc.is_one() {
        g
    } else {
        g.scale(&lc.recip())
    }
}

fn poly_gcd_raw(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let mv = match (main_var(a), main_var(b)) {
        (None, _) | (_, None) => return LaurentPoly::one(),
        (Some(x), Some(y)) => x.max(y),
    };
    let fa = split_var(a, mv);
    let fb = split_var(b, mv);
    // content = gcd of coefficients (recursively fewer variables)
    let cont = |m: &BTreeMap<i64, LaurentPoly>| -> LaurentPoly {
        let mut c = LaurentPoly::zero();
        for p in m.values() {
            c = poly_gcd_raw(&c, p);
        }
        c
    };
    let ca = cont(&fa);
    let cb = cont(&fb);
    let prim = |m: &BTreeMap<i64, LaurentPoly>, c: &LaurentPoly| -> BTreeMap<i64, LaurentPoly> {
        m.iter()
            .map(|(&d, p)| (d, exact_div(p, c).expect("content divides")))
            .collect()
    };
    let mut f = prim(&fa, &ca);
    let mut g = prim(&fb, &cb);
    if univ_degree(&f) < univ_degree(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let r = pseudo_rem(&f, &g);
        f = g;
        if r.is_empty() {
            g = BTreeMap::new();
        } else {
            let cr = cont(&r);
            g = prim(&r, &cr);
        }
    }
    let cfg = poly_gcd_raw(&ca, &cb);
    join_var(&f, mv).mul(&cfg)
}
