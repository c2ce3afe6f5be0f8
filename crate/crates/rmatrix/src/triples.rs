//! (Generalized) Belavin-Drinfeld triples: validation, nilpotency, Gamma_3,
//! l-gradedness, the induced partial order on positive roots, and exhaustive
//! enumeration at small rank.

use crate::cartan::CartanSubspace;
use crate::rootsys::RootSystem;
use std::collections::BTreeSet;
use std::fmt;

pub const ENUMERATION_RANK_GUARD: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripleError {
    NotBijective,
    NotNormPreserving,
    NotNilpotent,
    RankTooLarge,
}

impl fmt::Display for TripleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TripleError::NotBijective => "tau is not a bijection gamma1 -> gamma2",
            TripleError::NotNormPreserving => "tau does not preserve the inner products on gamma1",
            TripleError::NotNilpotent => "triple fails the nilpotency condition",
            TripleError::RankTooLarge => "rank exceeds the enumeration guard",
        };
        write!(f, "{s}")
    }
}

impl std::error::Error for TripleError {}

/// A generalized Belavin-Drinfeld triple (Gamma_1, Gamma_2, tau).
/// Simple-root indices are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GBDTriple {
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    /// tau_images[k] is the image of gamma1[k].
    pub tau_images: Vec<usize>,
}

impl GBDTriple {
    /// Validates (Gamma_1, Gamma_2, tau) given tau as pairs (from, to).
    ///
    /// Norm preservation is enforced as full Cartan-pairing preservation on
    /// Gamma_1, the condition needed for tau to induce a Lie algebra
    /// isomorphism; a lengths-only check would admit invalid maps.
    pub fn validate(
        rs: &RootSystem,
        gamma1: &[usize],
        gamma2: &[usize],
        tau: &[(usize, usize)],
    ) -> Result<GBDTriple, TripleError> {
        let g1: BTreeSet<usize> = gamma1.iter().copied().collect();
        let g2: BTreeSet<usize> = gamma2.iter().copied().collect();
        if g1.len() != gamma1.len()
            || g2.len() != gamma2.len()
            || g1.len() != g2.len()
            || tau.len() != g1.len()
            || g1.iter().any(|&i| i >= rs.rank)
            || g2.iter().any(|&i| i >= rs.rank)
        {
            return Err(TripleError::NotBijective);
        }
        let mut images = vec![usize::MAX; g1.len()];
        let g1v: Vec<usize> = g1.iter().copied().collect();
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for &(from, to) in tau {
            let Some(pos) = g1v.iter().position(|&x| x == from) else {
                return Err(TripleError::NotBijective);
            };
            if !g2.contains(&to) || images[pos] != usize::MAX || !used.insert(to) {
                return Err(TripleError::NotBijective);
            }
            images[pos] = to;
        }
        if images.iter().any(|&x| x == usize::MAX) {
            return Err(TripleError::NotBijective);
        }
        let t = GBDTriple {
            gamma1: g1v,
            gamma2: g2.iter().copied().collect(),
            tau_images: images,
        };
        // full pairing preservation on Gamma_1
        for (k, &a) in t.gamma1.iter().enumerate() {
            for (l, &b) in t.gamma1.iter().enumerate() {
                let ea = simple_vec(rs, a);
                let eb = simple_vec(rs, b);
                let ia = simple_vec(rs, t.tau_images[k]);
                let ib = simple_vec(rs, t.tau_images[l]);
                if rs.inner(&ea, &eb) != rs.inner(&ia, &ib) {
                    return Err(TripleError::NotNormPreserving);
                }
            }
        }
        Ok(t)
    }

    pub fn is_empty(&self) -> bool {
        self.gamma1.is_empty()
    }

    pub fn tau_of(&self, simple: usize) -> Option<usize> {
        self.gamma1
            .iter()
            .position(|&x| x == simple)
            .map(|k| self.tau_images[k])
    }

    pub fn tau_inv_of(&self, simple: usize) -> Option<usize> {
        self.tau_images
            .iter()
            .position(|&x| x == simple)
            .map(|k| self.gamma1[k])
    }

    /// Root-level tau on <Gamma_1>: defined when the root is supported on
    /// Gamma_1; the image is again a root by norm preservation.
    pub fn tau_root(&self, rs: &RootSystem, ridx: usize) -> Option<usize> {
        let v = rs.root(ridx);
        let mut w = vec![0i64; rs.rank];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                let img = self.tau_of(i)?;
                w[img] += c;
            }
        }
        let idx = rs
            .root_index(&w)
            .expect("norm-preserving tau maps roots to roots");
        Some(idx)
    }

    /// Every element of Gamma_1 eventually leaves Gamma_1 under iterated tau.
    pub fn check_nilpotency(&self) -> bool {
        for &g in &self.gamma1 {
            let mut cur = g;
            let mut steps = 0;
            loop {
                match self.tau_of(cur) {
                    None => break,
                    Some(next) => {
                        if !self.gamma1.contains(&next) {
                            break;
                        }
                        cur = next;
                        steps += 1;
                        if steps > self.gamma1.len() {
                            return false; // cycle
                        }
                    }
                }
            }
        }
        true
    }

    /// Largest tau-stable subset of Gamma_1 intersect Gamma_2, by deletion fixpoint.
    pub fn gamma3(&self) -> Vec<usize> {
        let mut s: BTreeSet<usize> = self
            .gamma1
            .iter()
            .copied()
            .filter(|g| self.gamma2.contains(g))
            .collect();
        loop {
            let doomed: Vec<usize> = s
                .iter()
                .copied()
                .filter(|&x| {
                    self.tau_of(x).map(|t| s.contains(&t)) != Some(true)
                        || self.tau_inv_of(x).map(|t| s.contains(&t)) != Some(true)
                })
                .collect();
            if doomed.is_empty() {
                break;
            }
            for x in doomed {
                s.remove(&x);
            }
        }
        s.into_iter().collect()
    }

    /// tau preserves l-weights: i*(tau alpha) = i*(alpha) on Gamma_1.
    pub fn is_l_graded(&self, rs: &RootSystem, l: &CartanSubspace) -> bool {
        self.gamma1.iter().zip(&self.tau_images).all(|(&a, &b)| {
            let ra = rs.simple_root_index(a);
            let rb = rs.simple_root_index(b);
            l.root_weight(rs, ra) == l.root_weight(rs, rb)
        })
    }

    /// All pairs (alpha, beta) of positive roots with tau^n(alpha) = beta for
    /// some n > 0. Errors with `NotNilpotent` if a tau-cycle is met, since the
    /// order is only used for the constant construction.
    pub fn order_pairs(&self, rs: &RootSystem) -> Result<Vec<(usize, usize)>, TripleError> {
        let mut pairs = Vec::new();
        let span = rs.span_subset(&self.gamma1).span;
        for &a in &span {
            if !rs.is_positive(a) {
                continue;
            }
            let mut cur = a;
            let mut seen = 0usize;
            while let Some(next) = self.tau_root(rs, cur) {
                pairs.push((a, next));
                seen += 1;
                if seen > rs.n_pos() {
                    return Err(TripleError::NotNilpotent);
                }
                if !span.contains(&next) {
                    break;
                }
                cur = next;
            }
        }
        pairs.sort();
        pairs.dedup();
        Ok(pairs)
    }
}

fn simple_vec(rs: &RootSystem, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; rs.rank];
    v[i] = 1;
    v
}

/// Derived combinatorial data for a triple.
#[derive(Debug, Clone)]
pub struct TripleAnalysis {
    pub gamma3: Vec<usize>,
    pub is_bd: bool,
    pub order_pairs: Option<Vec<(usize, usize)>>,
}

pub fn analyze(rs: &RootSystem, t: &GBDTriple) -> TripleAnalysis {
    let is_bd = t.check_nilpotency();
    TripleAnalysis {
        gamma3: t.gamma3(),
        is_bd,
        order_pairs: t.order_pairs(rs).ok(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Bd,
    Generalized,
}

/// All valid triples, in canonical (Gamma_1, Gamma_2, tau-graph) order,
/// filtered by nilpotency in BD mode and by l-gradedness when l is given.
pub fn enumerate(
    rs: &RootSystem,
    mode: EnumerationMode,
    l: Option<&CartanSubspace>,
) -> Result<Vec<GBDTriple>, TripleError> {
    if rs.rank > ENUMERATION_RANK_GUARD {
        return Err(TripleError::RankTooLarge);
    }
    let n = rs.rank;
    let subsets: Vec<Vec<usize>> = (0..(1u32 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    let mut out = Vec::new();
    for g1 in &subsets {
        for g2 in &subsets {
            if g1.len() != g2.len() {
                continue;
            }
            // all bijections g1 -> g2 by backtracking with pairing pruning
            let mut images: Vec<usize> = Vec::with_capacity(g1.len());
            let mut used = vec![false; g2.len()];
            backtrack(rs, g1, g2, &mut images, &mut used, &mut |imgs| {
                let tau: Vec<(usize, usize)> =
                    g1.iter().copied().zip(imgs.iter().copied()).collect();
                if let Ok(t) = GBDTriple::validate(rs, g1, g2, &tau) {
                    let keep = match mode {
                        EnumerationMode::Bd => t.check_nilpotency(),
                        EnumerationMode::Generalized => true,
                    };
                    let keep = keep && l.map(|cs| t.is_l_graded(rs, cs)).unwrap_or(true);
                    if keep {
                        out.push(t);
                    }
                }
            });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn backtrack(
    rs: &RootSystem,
    g1: &[usize],
    g2: &[usize],
    images: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut impl FnMut(&[usize]),
) {
    if images.len() == g1.len() {
        emit(images);
        return;
    }
    let k = images.len();
    for (pos, &cand) in g2.iter().enumerate() {
        if used[pos] {
            continue;
        }
        // prune: pairings with already-assigned elements must match
        let a = simple_vec(rs, g1[k]);
        let ca = simple_vec(rs, cand);
        let ok = (0..k).all(|j| {
            let b = simple_vec(rs, g1[j]);
            let cb = simple_vec(rs, images[j]);
            rs.inner(&a, &b) == rs.inner(&ca, &cb)
        }) && rs.inner(&a, &a) == rs.inner(&ca, &ca);
        if !ok {
            continue;
        }
        used[pos] = true;
        images.push(cand);
        backtrack(rs, g1, g2, images, used, emit);
        images.pop();
        used[pos] = false;
    }
}
