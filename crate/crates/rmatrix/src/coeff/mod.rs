//! Exact coefficient arithmetic for lambda-dependent objects.
//!
//! `ExpRat` is the field of rational functions over Q in Laurent monomials
//! u_j = exp(-(g_j, lambda)) indexed by a weight lattice in l*; `TruncSeries`
//! is the ring of multivariate power series over Q truncated at a total
//! degree, used by the series integrator.

pub mod laurent;
pub mod exprat;
pub mod series;
pub mod lattice;

pub use exprat::ExpRat;
pub use laurent::LaurentPoly;
pub use lattice::WeightLattice;
pub use series::TruncSeries;

use crate::rational::Q;

/// Commutative coefficient ring that sparse tensors are generic over.
pub trait CoeffRing: Clone + PartialEq + std::fmt::Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_rat(q: &Q) -> Self;
    fn scale(&self, q: &Q) -> Self {
        self.mul_ref(&Self::from_rat(q))
    }
}

impl CoeffRing for Q {
    fn ring_zero() -> Self {
        crate::rational::qz()
    }
    fn ring_one() -> Self {
        crate::rational::q1()
    }
    fn ring_is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rat(q: &Q) -> Self {
        q.clone()
    }
}

impl CoeffRing for num_complex::Complex64 {
    fn ring_zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn ring_one() -> Self {
        num_complex::Complex64::new(1.0, 0.0)
    }
    fn ring_is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rat(q: &Q) -> Self {
        num_complex::Complex64::new(crate::rational::q_to_f64(q), 0.0)
    }
}
