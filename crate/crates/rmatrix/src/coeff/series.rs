//! Multivariate power series over Q truncated at a total degree.

use super::CoeffRing;
use crate::rational::{q1, qz, Q};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Truncation order for context-free constants; unified to the minimum
/// when combined with genuinely truncated values.
const EXACT: usize = usize::MAX;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    order: usize,
    /// exponent vector (trimmed trailing zeros) -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, Q>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn total(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        TruncSeries {
            order: EXACT,
            terms,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms
            .get(&trim(e.to_vec()))
            .cloned()
            .unwrap_or_else(qz)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: &Q) {
        if c.is_zero() || total(&e) > self.order {
            return;
        }
        let key = trim(e);
        let entry = self.terms.entry(key.clone()).or_insert_with(qz);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn truncated(&self, order: usize) -> Self {
        let mut out = TruncSeries::zero(order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = TruncSeries::zero(self.order.min(other.order));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c);
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TruncSeries::zero(self.order.min(other.order));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let n = e1.len().max(e2.len());
                let mut e = vec![0u32; n];
                for (i, item) in e.iter_mut().enumerate() {
                    *item = e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0);
                }
                if total(&e) <= out.order {
                    out.add_term(e, &(c1 * c2));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return TruncSeries::zero(self.order);
        }
        TruncSeries {
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// d/d(variable i).
    pub fn derivative(&self, i: usize) -> Self {
        let order = if self.order == EXACT {
            EXACT
        } else {
            self.order.saturating_sub(1)
        };
        let mut out = TruncSeries::zero(order);
        for (e, c) in &self.terms {
            let ei = e.get(i).copied().unwrap_or(0);
            if ei == 0 {
                continue;
            }
            let mut f = e.clone();
            if f.len() <= i {
                f.resize(i + 1, 0);
            }
            f[i] -= 1;
            out.add_term(f, &(c * crate::rational::qi(ei as i64)));
        }
        out
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: usize) -> Self {
        let mut out = TruncSeries::zero(self.order);
        for (e, c) in &self.terms {
            if total(e) == degree {
                out.add_term(e.clone(), c);
            }
        }
        out
    }

    /// Multiply by the variable d_i.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = TruncSeries::zero(self.order);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            if f.len() <= i {
                f.resize(i + 1, 0);
            }
            f[i] += 1;
            out.add_term(f, c);
        }
        out
    }

    /// exp(form . d) expanded to the given total order, exact over Q.
    pub fn exp_linear(form: &[Q], order: usize) -> Self {
        let mut lin = TruncSeries::zero(order);
        for (i, a) in form.iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0u32; i + 1];
                e[i] = 1;
                lin.add_term(e, a);
            }
        }
        let mut acc = TruncSeries::zero(order);
        acc.add_term(Vec::new(), &q1());
        let mut pow = TruncSeries::zero(order);
        pow.add_term(Vec::new(), &q1());
        let mut fact = q1();
        for d in 1..=order {
            pow = pow.mul(&lin);
            if pow.is_zero() {
                break;
            }
            fact *= crate::rational::qi(d as i64);
            acc = acc.add(&pow.scale(&fact.clone().recip()));
        }
        acc
    }

    /// Series division; None when the divisor has zero constant term.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let c0 = other.coeff(&[]);
        if c0.is_zero() {
            return None;
        }
        let order = self.order.min(other.order);
        // invert by Newton-free iteration on homogeneous degrees:
        // inv = (1/c0) * sum_k (-(other/c0 - 1))^k
        let rest = other.scale(&c0.clone().recip()).sub(&TruncSeries::constant(q1()));
        let mut inv = TruncSeries::constant(q1()).truncated(order);
        let mut pow = TruncSeries::constant(q1()).truncated(order);
        for _ in 1..=order {
            pow = pow.mul(&rest.neg()).truncated(order);
            if pow.is_zero() {
                break;
            }
            inv = inv.add(&pow);
        }
        inv = inv.scale(&c0.recip());
        Some(self.mul(&inv))
    }

    pub fn render(&self, var_prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        let mut keys: Vec<_> = self.terms.keys().cloned().collect();
        keys.sort_by_key(|e| (total(e), e.clone()));
        for e in keys {
            let c = &self.terms[&e];
            let cs = crate::rational::q_to_string(c);
            let mut factors = Vec::new();
            for (v, &ev) in e.iter().enumerate() {
                if ev == 0 {
                    continue;
                }
                let name = format!("{var_prefix}{}", v + 1);
                if ev == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{ev}"));
                }
            }
            if factors.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(factors.join("*"));
            } else if cs == "-1" {
                parts.push(format!("-{}", factors.join("*")));
            } else {
                parts.push(format!("{cs}*{}", factors.join("*")));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl CoeffRing for TruncSeries {
    fn ring_zero() -> Self {
        TruncSeries::zero(EXACT)
    }
    fn ring_one() -> Self {
        TruncSeries::constant(q1())
    }
    fn ring_is_zero(&self) -> bool {
        TruncSeries::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn from_rat(q: &Q) -> Self {
        TruncSeries::constant(q.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn exp_expansion() {
        // exp(2 d1) to order 3: 1 + 2d + 2d^2 + 4/3 d^3
        let s = TruncSeries::exp_linear(&[qi(2)], 3);
        assert_eq!(s.coeff(&[0]), qi(1));
        assert_eq!(s.coeff(&[1]), qi(2));
        assert_eq!(s.coeff(&[2]), qi(2));
        assert_eq!(s.coeff(&[3]), q(4, 3));
    }

    #[test]
    fn division_geometric() {
        // 1/(1 - d) = 1 + d + d^2 + ...
        let one = TruncSeries::constant(qi(1)).truncated(4);
        let mut d = TruncSeries::zero(4);
        d.add_term(vec![1], &qi(1));
        let s = one.div(&one.sub(&d)).unwrap();
        for k in 0..=4u32 {
            assert_eq!(s.coeff(&[k]), qi(1));
        }
        assert!(one.div(&d).is_none());
    }

    #[test]
    fn derivative_and_truncation() {
        let mut s = TruncSeries::zero(3);
        s.add_term(vec![2, 1], &qi(5)); // 5 d1^2 d2
        let ds = s.derivative(0);
        assert_eq!(ds.coeff(&[1, 1]), qi(10));
        assert_eq!(ds.order(), 2);
        // truncation drops high terms
        assert!(s.truncated(2).is_zero());
    }

    #[test]
    fn exactness_of_two_var_product() {
        let a = TruncSeries::exp_linear(&[qi(1), qi(0)], 5);
        let b = TruncSeries::exp_linear(&[qi(0), qi(1)], 5);
        let c = TruncSeries::exp_linear(&[qi(1), qi(1)], 5);
        assert_eq!(a.mul(&b), c);
    }
}
