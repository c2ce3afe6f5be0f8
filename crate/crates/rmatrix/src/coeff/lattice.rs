//! Integer lattice of l-weights, used to index the exponential variables.
//!
//! Weights are rational vectors of pairings against a fixed basis of l.
//! The lattice basis is computed by integer row reduction so that every
//! input weight has integer exponents.

use super::exprat::{CoeffError, ExpRat};
use crate::rational::{qz, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone)]
pub struct WeightLattice {
    /// Generators as rational weight vectors (pairings against the l basis).
    gens: Vec<Vec<Q>>,
    /// Common denominator: den * gens are integer vectors in echelon form.
    den: BigInt,
    /// Integer matrix den*gens, echelon with pivot columns.
    mat: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::from(1);
    }
    (a * b / num_bigint::BigInt::from(num_integer_gcd(a, b))).abs()
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Integer row echelon form (Hermite-style): returns reduced rows and pivots.
fn echelon(mut rows: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in &mut rows {
        r.resize(ncols, BigInt::zero());
    }
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots = Vec::new();
    let mut col = 0;
    while col < ncols && !rows.is_empty() {
        // reduce column col among remaining rows by Euclid
        loop {
            let mut nz: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .map(|(i, _)| i)
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| rows[i][col].abs());
            let (small, other) = (nz[0], nz[1]);
            let qfac = &rows[other][col] / &rows[small][col];
            for c in 0..ncols {
                let sub = &qfac * &rows[small][c];
                rows[other][c] -= sub;
            }
        }
        if let Some(i) = rows.iter().position(|r| !r[col].is_zero()) {
            let mut row = rows.remove(i);
            if row[col].is_negative() {
                for c in row.iter_mut() {
                    *c = -c.clone();
                }
            }
            out.push(row);
            pivots.push(col);
        }
        col += 1;
    }
    (out, pivots)
}

impl WeightLattice {
    /// Builds the lattice generated by the given weight vectors.
    pub fn new(weights: &[Vec<Q>]) -> WeightLattice {
        let nonzero: Vec<&Vec<Q>> = weights
            .iter()
            .filter(|w| w.iter().any(|c| !c.is_zero()))
            .collect();
        let mut den = BigInt::from(1);
        for w in &nonzero {
            for c in w.iter() {
                den = lcm(&den, c.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = nonzero
            .iter()
            .map(|w| {
                w.iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        let (mat, pivots) = echelon(rows);
        let gens = mat
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| Q::new(v.clone(), den.clone()))
                    .collect()
            })
            .collect();
        WeightLattice {
            gens,
            den,
            mat,
            pivots,
        }
    }

    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        &self.gens
    }

    /// Integer coordinates of a weight in the generator basis.
    pub fn decompose(&self, mu: &[Q]) -> Option<Vec<i64>> {
        let ncols = self.mat.first().map(|r| r.len()).unwrap_or(mu.len());
        let mut v: Vec<BigInt> = Vec::with_capacity(ncols);
        for i in 0..ncols {
            let c = mu.get(i).cloned().unwrap_or_else(qz);
            let scaled_num = c.numer() * &self.den;
            if (&scaled_num % c.denom()).is_zero() {
                v.push(scaled_num / c.denom());
            } else {
                return None;
            }
        }
        let mut coeffs = vec![0i64; self.mat.len()];
        for (r, row) in self.mat.iter().enumerate() {
            let p = self.pivots[r];
            if v[p].is_zero() {
                continue;
            }
            if (&v[p] % &row[p]).is_zero() {
                let k = &v[p] / &row[p];
                let k64: i64 = k.to_string().parse().ok()?;
                coeffs[r] = k64;
                for c in 0..ncols {
                    let sub = &k * &row[c];
                    v[c] -= sub;
                }
            } else {
                return None;
            }
        }
        if v.iter().all(|c| c.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// The Laurent monomial representing exp(-(mu, lambda)).
    pub fn monomial(&self, mu: &[Q]) -> Result<ExpRat, CoeffError> {
        if mu.iter().all(|c| c.is_zero()) {
            return Ok(ExpRat::one());
        }
        let exps = self.decompose(mu).ok_or(CoeffError::NotInLattice)?;
        Ok(ExpRat::monomial(exps))
    }

    /// Refines the lattice to also contain the extra weights. Returns the new
    /// lattice together with a remap matrix: old generator j equals the integer
    /// combination `remap[j]` of the new generators (feed to
    /// `ExpRat::remap_exponents`).
    pub fn refine(&self, extra: &[Vec<Q>]) -> Option<(WeightLattice, Vec<Vec<i64>>)> {
        let mut all = self.gens.clone();
        all.extend_from_slice(extra);
        let new = WeightLattice::new(&all);
        let mut remap = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            remap.push(new.decompose(g)?);
        }
        Some((new, remap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn sl3_hrho_lattice() {
        // i*(alpha1) = i*(alpha2) = (1), i*(alpha1+alpha2) = (2)
        let w = vec![vec![qi(1)], vec![qi(1)], vec![qi(2)], vec![qi(-1)]];
        let lat = WeightLattice::new(&w);
        assert_eq!(lat.n_gens(), 1);
        assert_eq!(lat.decompose(&[qi(2)]).unwrap(), vec![2]);
        let m = lat.monomial(&[qi(2)]).unwrap();
        assert_eq!(m, ExpRat::monomial(vec![2]));
        // monomial is a homomorphism
        let a = lat.monomial(&[qi(1)]).unwrap();
        assert_eq!(a.mul(&a), m);
        // mu = 0 -> 1
        assert!(lat.monomial(&[qi(0)]).unwrap().is_one());
        // not in lattice
        assert!(lat.monomial(&[q(1, 2)]).is_err());
    }

    #[test]
    fn two_dim_sublattice() {
        // A2 with l = h: weights (2,-1), (-1,2), (1,1): index-3 sublattice of Z^2
        let w = vec![
            vec![qi(2), qi(-1)],
            vec![qi(-1), qi(2)],
            vec![qi(1), qi(1)],
        ];
        let lat = WeightLattice::new(&w);
        assert_eq!(lat.n_gens(), 2);
        for v in &w {
            assert!(lat.decompose(v).is_some(), "{v:?}");
        }
        // (1,0) is not in the sublattice
        assert!(lat.decompose(&[qi(1), qi(0)]).is_none());
    }

    #[test]
    fn fractional_weights() {
        let w = vec![vec![q(1, 2)], vec![q(3, 2)]];
        let lat = WeightLattice::new(&w);
        assert_eq!(lat.n_gens(), 1);
        assert_eq!(lat.decompose(&[q(1, 2)]).unwrap(), vec![1]);
        assert_eq!(lat.decompose(&[qi(3)]).unwrap(), vec![6]);
    }

    #[test]
    fn refinement_remaps() {
        let lat = WeightLattice::new(&[vec![qi(1)]]);
        let (fine, remap) = lat.refine(&[vec![q(1, 2)]]).unwrap();
        assert_eq!(fine.n_gens(), 1);
        // old u = new u^2
        assert_eq!(remap, vec![vec![2]]);
        let old = ExpRat::monomial(vec![1]);
        let remapped = old.remap_exponents(&remap);
        assert_eq!(remapped, ExpRat::monomial(vec![2]));
    }
}
