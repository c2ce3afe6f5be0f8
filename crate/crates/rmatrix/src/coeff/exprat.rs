//! The field of rational functions in exponential Laurent monomials.
//!
//! An `ExpRat` value is p(u)/q(u) where each u_j stands for
//! exp(-(g_j, lambda)) for a weight-lattice generator g_j. Differentiation
//! along l, numeric evaluation, Taylor expansion at a base point, and limits
//! along rays all act through the exponent vectors.

use super::laurent::{exact_div, poly_gcd, LaurentPoly};
use super::series::TruncSeries;
use super::CoeffRing;
use crate::rational::{q1, qz, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpRat {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    DivisionByZero,
    PoleAtPoint,
    PoleAtBase,
    DivergesAlongRay,
    NotInLattice,
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoeffError::DivisionByZero => "division by zero",
            CoeffError::PoleAtPoint => "pole at evaluation point",
            CoeffError::PoleAtBase => "pole at series base point",
            CoeffError::DivergesAlongRay => "diverges along ray",
            CoeffError::NotInLattice => "weight not in lattice",
        };
        write!(f, "{s}")
    }
}

impl std::error::Error for CoeffError {}

impl ExpRat {
    pub fn zero() -> Self {
        ExpRat {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        ExpRat {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rat(c: &Q) -> Self {
        ExpRat {
            num: LaurentPoly::constant(c.clone()),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        ExpRat {
            num: p,
            den: LaurentPoly::one(),
        }
        .reduced()
    }

    pub fn monomial(exps: Vec<i64>) -> Self {
        ExpRat {
            num: LaurentPoly::monomial(exps, q1()),
            den: LaurentPoly::one(),
        }
    }

    pub fn fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(ExpRat { num, den }.reduced())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == ExpRat::one()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.num.is_constant() && self.den.is_constant() {
            let n = self.num.constant_value()?;
            let d = self.den.constant_value()?;
            Some(n / d)
        } else {
            None
        }
    }

    /// Canonical form: denominator a polynomial with per-variable minimum
    /// exponent zero, coprime to the polynomial part of the numerator,
    /// monic under deglex.
    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return ExpRat::zero();
        }
        let nvars = self.num.nvars().max(self.den.nvars());
        // shift so den is a genuine polynomial with per-var min exponent 0
        let dmin = self.den.min_exponents(nvars);
        let neg_dmin: Vec<i64> = dmin.iter().map(|v| -v).collect();
        let mut num = self.num.shift(&neg_dmin);
        let mut den = self.den.shift(&neg_dmin);
        // factor the numerator's monomial part off before gcd
        let nmin = num.min_exponents(nvars);
        let shift_pos: Vec<i64> = nmin.iter().map(|v| -v).collect();
        let num_poly = num.shift(&shift_pos);
        let g = poly_gcd(&num_poly, &den);
        if !g.is_constant() {
            let nq = exact_div(&num_poly, &g).expect("gcd divides numerator");
            let dq = exact_div(&den, &g).expect("gcd divides denominator");
            num = nq.shift(&nmin);
            den = dq;
            // renormalize den min exponents after division (gcd may carry monomials)
            let dmin2 = den.min_exponents(nvars);
            if dmin2.iter().any(|&v| v != 0) {
                let neg: Vec<i64> = dmin2.iter().map(|v| -v).collect();
                num = num.shift(&neg);
                den = den.shift(&neg);
            }
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ExpRat { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        ExpRat {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn neg(&self) -> Self {
        ExpRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExpRat {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(ExpRat {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .reduced())
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return ExpRat::zero();
        }
        ExpRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact derivative along an element x of l, given the pairings
    /// w[j] = g_j(x) of the lattice generators against x:
    /// d/dx u^e = -(sum_j e_j w_j) u^e.
    pub fn differentiate(&self, w: &[Q]) -> Self {
        let dn = self.num.weighted_derivative(w);
        let dd = self.den.weighted_derivative(w);
        ExpRat {
            num: dn.mul(&self.den).sub(&self.num.mul(&dd)),
            den: self.den.mul(&self.den),
        }
        .reduced()
    }

    /// Numeric evaluation at given values of the u variables.
    pub fn eval_u(&self, u: &[Complex64]) -> Result<Complex64, CoeffError> {
        let (nv, _) = self.num.eval_complex(u);
        let (dv, scale) = self.den.eval_complex(u);
        if dv.norm() < 1e-12 * scale.max(1e-300) {
            return Err(CoeffError::PoleAtPoint);
        }
        Ok(nv / dv)
    }

    /// Taylor expansion at a base point: u_j := base_j * exp(sum_i lin[j][i] d_i),
    /// exact over Q to the given total order. `lin[j]` is the linear form in the
    /// series variables that the log of u_j moves by.
    pub fn series_at(
        &self,
        base: &[Q],
        lin: &[Vec<Q>],
        order: usize,
    ) -> Result<TruncSeries, CoeffError> {
        let expand = |p: &LaurentPoly| -> Result<TruncSeries, CoeffError> {
            let mut acc = TruncSeries::zero(order);
            for (e, c) in p.iter() {
                let mut coef = c.clone();
                let nvars_lin = lin.first().map(|l| l.len()).unwrap_or(0);
                let mut form = vec![qz(); nvars_lin];
                let mut vanishes = false;
                for (j, &ej) in e.iter().enumerate() {
                    if ej == 0 {
                        continue;
                    }
                    let b = base.get(j).cloned().unwrap_or_else(qz);
                    if b.is_zero() {
                        if ej > 0 {
                            vanishes = true;
                            break;
                        } else {
                            return Err(CoeffError::PoleAtBase);
                        }
                    }
                    let p = if ej > 0 {
                        num_traits::pow::pow(b, ej as usize)
                    } else {
                        num_traits::pow::pow(b.recip(), (-ej) as usize)
                    };
                    coef *= p;
                    for (i, item) in form.iter_mut().enumerate() {
                        *item += lin[j][i].clone() * crate::rational::qi(ej);
                    }
                }
                if vanishes {
                    continue;
                }
                acc = acc.add(&TruncSeries::exp_linear(&form, order).scale(&coef));
            }
            Ok(acc)
        };
        let ns = expand(&self.num)?;
        let ds = expand(&self.den)?;
        ns.div(&ds).ok_or(CoeffError::PoleAtBase)
    }

    /// Limit along a ray: u_j ~ exp(-s * ray_w[j]) as s -> +infinity.
    pub fn limit_along(&self, ray_w: &[Q]) -> Result<Q, CoeffError> {
        let np = self.num.weight_profile(ray_w);
        let dp = self.den.weight_profile(ray_w);
        if np.is_empty() {
            return Ok(qz());
        }
        let (wn, cn) = np.iter().next().map(|(w, c)| (w.clone(), c.clone())).unwrap();
        let (wd, cd) = dp
            .iter()
            .next()
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or(CoeffError::DivergesAlongRay)?;
        match wn.cmp(&wd) {
            std::cmp::Ordering::Less => Err(CoeffError::DivergesAlongRay),
            std::cmp::Ordering::Greater => Ok(qz()),
            std::cmp::Ordering::Equal => Ok(cn / cd),
        }
    }

    /// Multiply exponents into a refined lattice basis (see `WeightLattice::refine`).
    pub fn remap_exponents(&self, m: &[Vec<i64>]) -> Self {
        ExpRat {
            num: self.num.remap_exponents(m),
            den: self.den.remap_exponents(m),
        }
        .reduced()
    }

    pub fn render(&self, var_names: &[String]) -> String {
        let poly = |p: &LaurentPoly| -> String {
            if p.is_zero() {
                return "0".to_string();
            }
            let mut parts = Vec::new();
            for (e, c) in p.iter() {
                let mut factors = Vec::new();
                let cs = crate::rational::q_to_string(c);
                for (v, &ev) in e.iter().enumerate() {
                    if ev == 0 {
                        continue;
                    }
                    let name = var_names
                        .get(v)
                        .cloned()
                        .unwrap_or_else(|| format!("u{}", v + 1));
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
        };
        if self.den.is_constant() && self.den.constant_value().map(|d| d.is_one()) == Some(true) {
            poly(&self.num)
        } else {
            format!("({})/({})", poly(&self.num), poly(&self.den))
        }
    }
}

impl fmt::Display for ExpRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl CoeffRing for ExpRat {
    fn ring_zero() -> Self {
        ExpRat::zero()
    }
    fn ring_one() -> Self {
        ExpRat::one()
    }
    fn ring_is_zero(&self) -> bool {
        ExpRat::is_zero(self)
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
        ExpRat::from_rat(q)
    }
    fn scale(&self, q: &Q) -> Self {
        ExpRat::scale(self, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn u() -> ExpRat {
        ExpRat::monomial(vec![1])
    }

    fn c(n: i64, d: i64) -> ExpRat {
        ExpRat::from_rat(&q(n, d))
    }

    /// (1+u)/(2(1-u)), the resummed coth-type coefficient.
    fn coth_coeff() -> ExpRat {
        let num = ExpRat::one().add(&u());
        let den = c(2, 1).mul(&ExpRat::one().sub(&u()));
        num.div(&den).unwrap()
    }

    #[test]
    fn field_basics() {
        let a = coth_coeff();
        let b = a.sub(&a);
        assert!(b.is_zero());
        let prod = a.mul(&a.inv().unwrap());
        assert!(prod.is_one());
        // reduction: (1-u^2)/(1-u) = 1+u
        let n = ExpRat::one().sub(&u().mul(&u()));
        let d = ExpRat::one().sub(&u());
        let r = n.div(&d).unwrap();
        assert_eq!(r, ExpRat::one().add(&u()));
    }

    #[test]
    fn derivative_of_coth_coeff() {
        // With g_1(x) = 1: d/dx [(1+u)/(2(1-u))] = -u/(1-u)^2.
        let a = coth_coeff();
        let d = a.differentiate(&[qi(1)]);
        let expected = {
            let num = u().neg();
            let one_minus = ExpRat::one().sub(&u());
            num.div(&one_minus.mul(&one_minus)).unwrap()
        };
        assert_eq!(d, expected);
        // Leibniz on a product
        let p = a.mul(&u());
        let dp = p.differentiate(&[qi(1)]);
        let leibniz = d.mul(&u()).add(&a.mul(&u().differentiate(&[qi(1)])));
        assert_eq!(dp, leibniz);
        assert!(ExpRat::one().differentiate(&[qi(1)]).is_zero());
        assert_eq!(u().differentiate(&[qi(1)]), u().neg());
    }

    #[test]
    fn eval_matches_coth_identity() {
        // at (g_1, lambda) = 1: value is (1/2) coth(1/2)
        let a = coth_coeff();
        let uval = Complex64::new((-1.0f64).exp(), 0.0);
        let v = a.eval_u(&[uval]).unwrap();
        let coth_half = 0.5 / (0.5f64).tanh();
        assert!((v.re - coth_half).abs() < 1e-12, "{v}");
        assert!(v.im.abs() < 1e-15);
        assert!((ExpRat::one().eval_u(&[uval]).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_pole() {
        let e = ExpRat::one().sub(&u()).inv().unwrap();
        let res = e.eval_u(&[Complex64::new(1.0, 0.0)]);
        assert_eq!(res.unwrap_err(), CoeffError::PoleAtPoint);
    }

    #[test]
    fn series_expansion() {
        // u at base 1/2 with lin = [-1]: 1/2 - (1/2) d + (1/4) d^2 - ...
        let s = u().series_at(&[q(1, 2)], &[vec![qi(-1)]], 2).unwrap();
        assert_eq!(s.coeff(&[0]), q(1, 2));
        assert_eq!(s.coeff(&[1]), q(-1, 2));
        assert_eq!(s.coeff(&[2]), q(1, 4));
        // constants expand to themselves
        let cs = c(7, 3).series_at(&[q(1, 2)], &[vec![qi(-1)]], 3).unwrap();
        assert_eq!(cs.coeff(&[0]), q(7, 3));
        assert_eq!(cs.coeff(&[1]), q(0, 1));
        // pole at base u = 1
        let e = ExpRat::one().sub(&u()).inv().unwrap();
        assert_eq!(
            e.series_at(&[qi(1)], &[vec![qi(-1)]], 2).unwrap_err(),
            CoeffError::PoleAtBase
        );
    }

    #[test]
    fn series_derivative_consistency() {
        // Expanding the exact derivative equals differentiating the expansion.
        let a = coth_coeff();
        let base = vec![q(1, 2)];
        let lin = vec![vec![qi(-1)]];
        let s = a.series_at(&base, &lin, 6).unwrap();
        let ds_direct = a.differentiate(&[qi(1)]).series_at(&base, &lin, 5).unwrap();
        let ds_series = s.derivative(0).truncated(5);
        assert_eq!(ds_direct, ds_series);
    }

    #[test]
    fn limits() {
        let a = coth_coeff();
        // positive ray: u -> 0, limit 1/2
        assert_eq!(a.limit_along(&[qi(1)]).unwrap(), q(1, 2));
        // negative ray: u -> infinity, limit -1/2
        assert_eq!(a.limit_along(&[qi(-1)]).unwrap(), q(-1, 2));
        // u itself diverges along the negative ray
        assert_eq!(u().limit_along(&[qi(-1)]).unwrap_err(), CoeffError::DivergesAlongRay);
        assert_eq!(u().limit_along(&[qi(1)]).unwrap(), qi(0));
        assert_eq!(c(5, 2).limit_along(&[qi(1)]).unwrap(), q(5, 2));
    }

    #[test]
    fn finite_difference_cross_check() {
        // d/dx of eval agrees with central differences at random non-pole points.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = coth_coeff();
        let da = a.differentiate(&[qi(1)]);
        for _ in 0..10 {
            let x: f64 = rng.gen_range(0.3..3.0);
            let h = 1e-6;
            let at = |xx: f64| {
                a.eval_u(&[Complex64::new((-xx).exp(), 0.0)])
                    .unwrap()
                    .re
            };
            let fd = (at(x + h) - at(x - h)) / (2.0 * h);
            let exact = da.eval_u(&[Complex64::new((-x).exp(), 0.0)]).unwrap().re;
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "x={x}: fd={fd} exact={exact}"
            );
        }
    }
}
