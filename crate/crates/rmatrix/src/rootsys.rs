//! Root systems of the simple Lie algebras A-G.
//!
//! Roots are integer coordinate vectors in the simple-root basis, with
//! Bourbaki numbering of the simple roots. The invariant form is normalized
//! so long roots have squared length 2; all form values are exact rationals.

use crate::rational::{q1, qi, qz, Q};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl std::str::FromStr for Series {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            other => Err(format!("unknown series {other:?}")),
        }
    }
}

/// Parses a compact type label like "A2", "G2", "E6".
pub fn parse_type(s: &str) -> Result<(Series, usize), String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty type".into());
    }
    let series: Series = s[..1].parse()?;
    let rank: usize = s[1..]
        .parse()
        .map_err(|e| format!("bad rank in {s:?}: {e}"))?;
    Ok((series, rank))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    InvalidType(Series, usize),
}

impl fmt::Display for RootSystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystemError::InvalidType(s, r) => write!(f, "invalid simple type {s}{r}"),
        }
    }
}

impl std::error::Error for RootSystemError {}

/// A root system with exact inner-product data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    /// cartan[i][j] = 2(alpha_i, alpha_j)/(alpha_j, alpha_j)
    pub cartan: Vec<Vec<i64>>,
    /// d[i] = (alpha_i, alpha_i)/2, so (alpha_i, alpha_j) = d[j] * cartan[i][j].
    pub d: Vec<Q>,
    /// All roots, positives first (sorted by height then lexicographically),
    /// then the negatives in the mirrored order.
    pub roots: Vec<Vec<i64>>,
    /// Indices into `roots` of the positive roots (0..n_pos).
    pub positives: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
}

fn cartan_matrix(series: Series, rank: usize) -> Result<Vec<Vec<i64>>, RootSystemError> {
    let n = rank;
    let bad = RootSystemError::InvalidType(series, rank);
    let admissible = match series {
        Series::A => n >= 1,
        Series::B => n >= 2,
        Series::C => n >= 3,
        Series::D => n >= 4,
        Series::E => (6..=8).contains(&n),
        Series::F => n == 4,
        Series::G => n == 2,
    };
    if !admissible {
        return Err(bad);
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let bond = |m: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        m[i][j] = -1;
        m[j][i] = -1;
    };
    match series {
        Series::A => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
        }
        Series::B => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
            // alpha_n short: 2(a_{n-1}, a_n)/(a_n, a_n) = -2
            a[n - 2][n - 1] = -2;
        }
        Series::C => {
            for i in 0..n - 1 {
                bond(&mut a, i, i + 1);
            }
            // alpha_n long
            a[n - 1][n - 2] = -2;
        }
        Series::D => {
            for i in 0..n - 2 {
                bond(&mut a, i, i + 1);
            }
            bond(&mut a, n - 3, n - 1);
            // undo the chain bond (n-2, n-1) created above when n >= 4:
            // chain is 1..n-2 with both n-1 and n attached to n-2.
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            bond(&mut a, n - 3, n - 2);
        }
        Series::E => {
            // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to 4.
            let chain = [0usize, 2, 3, 4, 5, 6, 7];
            for w in chain[..n - 1].windows(2) {
                bond(&mut a, w[0], w[1]);
            }
            bond(&mut a, 1, 3);
        }
        Series::F => {
            bond(&mut a, 0, 1);
            bond(&mut a, 1, 2);
            bond(&mut a, 2, 3);
            a[1][2] = -2; // alpha_1, alpha_2 long; alpha_3, alpha_4 short
        }
        Series::G => {
            a[0][1] = -1;
            a[1][0] = -3; // alpha_1 short, alpha_2 long
        }
    }
    Ok(a)
}

/// Symmetrizers from the Cartan matrix: d_i/d_j = a_ij/a_ji on bonds,
/// normalized so max d_i = 1 (long roots squared length 2).
fn symmetrizers(cartan: &[Vec<i64>]) -> Vec<Q> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(q1());
    // propagate over the (connected) Dynkin graph
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i != j && cartan[i][j] != 0 {
                    if let (Some(di), None) = (d[i].clone(), &d[j]) {
                        // d_i * a_ji = d_j * a_ij  =>  d_j = d_i * a_ji / a_ij
                        d[j] = Some(di * qi(cartan[j][i]) / qi(cartan[i][j]));
                        changed = true;
                    }
                }
            }
        }
    }
    let mut d: Vec<Q> = d.into_iter().map(|x| x.expect("connected diagram")).collect();
    let dmax = d.iter().cloned().max().unwrap();
    for v in &mut d {
        *v /= dmax.clone();
    }
    d
}

pub fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}

fn root_sort_key(v: &[i64]) -> (i64, Vec<i64>) {
    (height(v), v.iter().map(|c| -c).collect())
}

impl RootSystem {
    /// Builds the root system for the given simple type.
    ///
    /// Roots are generated as the closure of the simple roots under the
    /// simple reflections (every root is Weyl-conjugate to a simple root).
    pub fn build(series: Series, rank: usize) -> Result<RootSystem, RootSystemError> {
        let cartan = cartan_matrix(series, rank)?;
        let d = symmetrizers(&cartan);
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            seen.insert(v.clone());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for i in 0..rank {
                let w = reflect_coords(&cartan, i, &v);
                if seen.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        let mut pos: Vec<Vec<i64>> = seen.iter().filter(|v| height(v) > 0).cloned().collect();
        pos.sort_by_key(|v| root_sort_key(v));
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|v| v.iter().map(|c| -c).collect::<Vec<_>>()));
        let index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let positives = (0..pos.len()).collect();
        Ok(RootSystem {
            series,
            rank,
            cartan,
            d,
            roots,
            positives,
            index,
        })
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn n_pos(&self) -> usize {
        self.positives.len()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn root(&self, idx: usize) -> &[i64] {
        &self.roots[idx]
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_pos()
    }

    /// Index of -root given the index of root.
    pub fn neg_index(&self, idx: usize) -> usize {
        let n = self.n_pos();
        if idx < n {
            idx + n
        } else {
            idx - n
        }
    }

    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut v = vec![0i64; self.rank];
        v[i] = 1;
        self.index[&v]
    }

    /// Normalized invariant form on integer vectors in the simple-root basis.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Q {
        let mut acc = qz();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc += qi(ai * bj * self.cartan[i][j]) * self.d[j].clone();
            }
        }
        acc
    }

    /// Pairing <v, alpha_i^vee> = 2(v, alpha_i)/(alpha_i, alpha_i), always an integer.
    pub fn pair_coroot(&self, v: &[i64], i: usize) -> i64 {
        v.iter()
            .enumerate()
            .map(|(j, &c)| c * self.cartan[j][i])
            .sum()
    }

    /// Simple reflection s_{alpha_i} applied to an integer vector.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Vec<i64> {
        reflect_coords(&self.cartan, i, v)
    }

    /// The subset <Gamma> = Z Gamma intersect Delta for a set of simple indices.
    pub fn span_subset(&self, gamma: &[usize]) -> RootSubset {
        let gset: BTreeSet<usize> = gamma.iter().copied().collect();
        let span = self
            .roots
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                v.iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || gset.contains(&j))
            })
            .map(|(i, _)| i)
            .collect();
        RootSubset {
            gamma: gset.into_iter().collect(),
            span,
        }
    }
}

fn reflect_coords(cartan: &[Vec<i64>], i: usize, v: &[i64]) -> Vec<i64> {
    let pairing: i64 = v
        .iter()
        .enumerate()
        .map(|(j, &c)| c * cartan[j][i])
        .sum();
    let mut w = v.to_vec();
    w[i] -= pairing;
    w
}

/// The span <Gamma> of a subset of simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSubset {
    pub gamma: Vec<usize>,
    /// Indices into `RootSystem::roots`.
    pub span: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Independent oracle: generate the root set by root-string closure from
    /// the Cartan matrix (no reflections). For roots beta != +-alpha_i,
    /// beta + alpha_i is a root iff q - <beta, alpha_i^vee> >= 1 where
    /// q = max { k : beta - k alpha_i is already a root }.
    fn root_string_closure(rs: &RootSystem) -> BTreeSet<Vec<i64>> {
        let n = rs.rank;
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            set.insert(v.clone());
            set.insert(v.iter().map(|c| -c).collect());
        }
        loop {
            let mut added = Vec::new();
            for beta in set.iter() {
                for i in 0..n {
                    let mut alpha = vec![0i64; n];
                    alpha[i] = 1;
                    let neg_alpha: Vec<i64> = alpha.iter().map(|c| -c).collect();
                    if *beta == alpha || *beta == neg_alpha {
                        continue;
                    }
                    let mut qdown = 0i64;
                    loop {
                        let probe: Vec<i64> = beta
                            .iter()
                            .zip(&alpha)
                            .map(|(b, a)| b - (qdown + 1) * a)
                            .collect();
                        if set.contains(&probe) {
                            qdown += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing = rs.pair_coroot(beta, i);
                    if qdown - pairing >= 1 {
                        let up: Vec<i64> =
                            beta.iter().zip(&alpha).map(|(b, a)| b + a).collect();
                        if !set.contains(&up) {
                            added.push(up.iter().map(|c| -c).collect());
                            added.push(up);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            set.extend(added);
        }
        set
    }

    fn all_small_types() -> Vec<(Series, usize)> {
        vec![
            (Series::A, 1),
            (Series::A, 2),
            (Series::A, 3),
            (Series::A, 4),
            (Series::B, 2),
            (Series::B, 3),
            (Series::B, 4),
            (Series::C, 3),
            (Series::C, 4),
            (Series::D, 4),
            (Series::F, 4),
            (Series::G, 2),
        ]
    }

    #[test]
    fn a1_roots() {
        let rs = RootSystem::build(Series::A, 1).unwrap();
        assert_eq!(rs.n_roots(), 2);
        assert_eq!(rs.roots[0], vec![1]);
        assert_eq!(rs.roots[1], vec![-1]);
    }

    #[test]
    fn a2_positives() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        assert_eq!(rs.n_roots(), 6);
        let pos: BTreeSet<Vec<i64>> = rs
            .positives
            .iter()
            .map(|&i| rs.roots[i].clone())
            .collect();
        let expect: BTreeSet<Vec<i64>> =
            [vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
        assert_eq!(pos, expect);
    }

    #[test]
    fn g2_counts_and_lengths() {
        let rs = RootSystem::build(Series::G, 2).unwrap();
        assert_eq!(rs.n_roots(), 12);
        let mut lengths: BTreeSet<Q> = BTreeSet::new();
        for r in &rs.roots {
            lengths.insert(rs.inner(r, r));
        }
        let lengths: Vec<Q> = lengths.into_iter().collect();
        assert_eq!(lengths.len(), 2);
        assert_eq!(lengths[1].clone() / lengths[0].clone(), qi(3));
        assert_eq!(lengths[1], qi(2));
    }

    #[test]
    fn closure_oracle_matches_reflection_closure() {
        for (s, r) in all_small_types() {
            let rs = RootSystem::build(s, r).unwrap();
            let oracle = root_string_closure(&rs);
            let ours: BTreeSet<Vec<i64>> = rs.roots.iter().cloned().collect();
            assert_eq!(ours, oracle, "{s}{r}");
        }
    }

    #[test]
    fn root_counts_match_classical_table() {
        let table = [
            (Series::A, 1, 2),
            (Series::A, 2, 6),
            (Series::A, 3, 12),
            (Series::A, 4, 20),
            (Series::B, 2, 8),
            (Series::B, 3, 18),
            (Series::B, 4, 32),
            (Series::C, 3, 18),
            (Series::C, 4, 32),
            (Series::D, 4, 24),
            (Series::F, 4, 48),
            (Series::G, 2, 12),
        ];
        for (s, r, count) in table {
            let rs = RootSystem::build(s, r).unwrap();
            assert_eq!(rs.n_roots(), count, "{s}{r}");
        }
    }

    #[test]
    fn inner_products() {
        let a2 = RootSystem::build(Series::A, 2).unwrap();
        let a1 = vec![1, 0];
        let a2v = vec![0, 1];
        assert_eq!(a2.inner(&a1, &a1), qi(2));
        assert_eq!(a2.inner(&a1, &a2v), qi(-1));
        let b2 = RootSystem::build(Series::B, 2).unwrap();
        let short = vec![0, 1];
        assert_eq!(b2.inner(&short, &short), qi(1));
        assert_eq!(b2.inner(&vec![1, 0], &vec![1, 0]), qi(2));
        // symmetry of the form on all root pairs
        for a in &b2.roots {
            for b in &b2.roots {
                assert_eq!(b2.inner(a, b), b2.inner(b, a));
            }
        }
        // d_short = 1/2 of long
        assert_eq!(b2.d, vec![q(1, 1), q(1, 2)]);
    }

    #[test]
    fn span_subsets() {
        let a2 = RootSystem::build(Series::A, 2).unwrap();
        let s = a2.span_subset(&[0]);
        let got: BTreeSet<Vec<i64>> = s.span.iter().map(|&i| a2.roots[i].clone()).collect();
        assert_eq!(got, [vec![1, 0], vec![-1, 0]].into_iter().collect());
        assert_eq!(a2.span_subset(&[0, 1]).span.len(), 6);

        let a3 = RootSystem::build(Series::A, 3).unwrap();
        let s = a3.span_subset(&[0, 2]);
        let got: BTreeSet<Vec<i64>> = s.span.iter().map(|&i| a3.roots[i].clone()).collect();
        let expect: BTreeSet<Vec<i64>> = [
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn reflections() {
        let a2 = RootSystem::build(Series::A, 2).unwrap();
        assert_eq!(a2.reflect(0, &[1, 0]), vec![-1, 0]);
        assert_eq!(a2.reflect(0, &[0, 1]), vec![1, 1]);
        for (s, r) in all_small_types() {
            let rs = RootSystem::build(s, r).unwrap();
            for root in &rs.roots {
                for i in 0..rs.rank {
                    let w = rs.reflect(i, root);
                    // Weyl invariance of the root set
                    assert!(rs.is_root(&w), "{s}{r}: s_{i}({root:?}) = {w:?}");
                    // involution
                    assert_eq!(rs.reflect(i, &w), *root);
                }
            }
            // isometry on all root pairs
            for a in &rs.roots {
                for b in &rs.roots {
                    for i in 0..rs.rank {
                        let ra = rs.reflect(i, a);
                        let rb = rs.reflect(i, b);
                        assert_eq!(rs.inner(&ra, &rb), rs.inner(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_types() {
        assert!(RootSystem::build(Series::B, 1).is_err());
        assert!(RootSystem::build(Series::C, 2).is_err());
        assert!(RootSystem::build(Series::D, 3).is_err());
        assert!(RootSystem::build(Series::E, 9).is_err());
        assert!(RootSystem::build(Series::E, 5).is_err());
        assert!(RootSystem::build(Series::F, 3).is_err());
        assert!(RootSystem::build(Series::G, 3).is_err());
    }

    #[test]
    fn parse_type_labels() {
        assert_eq!(parse_type("A2").unwrap(), (Series::A, 2));
        assert_eq!(parse_type("g2").unwrap(), (Series::G, 2));
        assert!(parse_type("H3").is_err());
        assert!(parse_type("").is_err());
    }
}
