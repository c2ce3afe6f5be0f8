//! JSON schemas for triples, r-matrices and verification reports.
//!
//! Every artifact embeds a conventions block (form normalization, wedge
//! convention, structure-constant signs, simple-root numbering) and the
//! lattice dictionary mapping u variables to l-weights, so output files are
//! self-describing. Simple-root indices are 1-based (Bourbaki) in JSON.

use crate::cartan::CartanSubspace;
use crate::chevalley::ChevalleyBasis;
use crate::coeff::{ExpRat, LaurentPoly, WeightLattice};
use crate::rational::{q_from_str, q_to_string, Q};
use crate::rmat::{ConstantR, DynContext, DynamicalR};
use crate::rootsys::{RootSystem, Series};
use crate::tensor::Tensor;
use crate::triples::GBDTriple;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TripleJson {
    pub series: String,
    pub rank: usize,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub tau: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConventionsJson {
    pub form_normalization: String,
    pub wedge: String,
    pub structure_constant_signs: String,
    pub simple_root_numbering: String,
}

pub fn conventions() -> ConventionsJson {
    ConventionsJson {
        form_normalization: "long roots have squared length 2".into(),
        wedge: "a^b = a(x)b - b(x)a".into(),
        structure_constant_signs: "extraspecial pairs positive, (x_a, x_{-a}) = 1".into(),
        simple_root_numbering: "Bourbaki, 1-based".into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialJson {
    pub c: String,
    pub e: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub i: usize,
    pub j: usize,
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub num: Vec<MonomialJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub den: Vec<MonomialJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeVarJson {
    pub name: String,
    /// weight of the variable: pairings against the stored basis of l
    pub weight: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct LatticeJson {
    pub variables: Vec<LatticeVarJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MetaJson {
    pub mode: String,
    pub triple: TripleJson,
    pub epsilon: String,
    pub conventions: ConventionsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RMatrixJson {
    pub basis: Vec<String>,
    pub terms: Vec<TermJson>,
    #[serde(default)]
    pub lattice: LatticeJson,
    pub metadata: MetaJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

pub fn basis_names(cb: &ChevalleyBasis) -> Vec<String> {
    let mut names: Vec<String> = (1..=cb.rank()).map(|i| format!("h{i}")).collect();
    for r in 0..cb.rs.n_roots() {
        let coords: Vec<String> = cb.rs.root(r).iter().map(|c| c.to_string()).collect();
        names.push(format!("x[{}]", coords.join(",")));
    }
    names
}

pub fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("u{j}")).collect()
}

pub fn triple_to_json(rs: &RootSystem, t: &GBDTriple, l: Option<&CartanSubspace>) -> TripleJson {
    TripleJson {
        series: rs.series.to_string(),
        rank: rs.rank,
        gamma1: t.gamma1.iter().map(|i| i + 1).collect(),
        gamma2: t.gamma2.iter().map(|i| i + 1).collect(),
        tau: t
            .gamma1
            .iter()
            .zip(&t.tau_images)
            .map(|(&a, &b)| ((a + 1).to_string(), b + 1))
            .collect(),
        l: l.map(|cs| {
            cs.basis()
                .iter()
                .map(|v| v.iter().map(q_to_string).collect())
                .collect()
        }),
    }
}

pub fn triple_from_json(
    j: &TripleJson,
) -> Result<(RootSystem, GBDTriple, Option<Vec<Vec<Q>>>), String> {
    let series: Series = j.series.parse()?;
    let rs = RootSystem::build(series, j.rank).map_err(|e| e.to_string())?;
    let g1: Vec<usize> = j
        .gamma1
        .iter()
        .map(|&i| i.checked_sub(1).ok_or("gamma1 indices are 1-based"))
        .collect::<Result<_, _>>()?;
    let g2: Vec<usize> = j
        .gamma2
        .iter()
        .map(|&i| i.checked_sub(1).ok_or("gamma2 indices are 1-based"))
        .collect::<Result<_, _>>()?;
    let tau: Vec<(usize, usize)> = j
        .tau
        .iter()
        .map(|(k, &v)| {
            let from: usize = k.parse().map_err(|_| format!("bad tau key {k:?}"))?;
            if from == 0 || v == 0 {
                return Err("tau indices are 1-based".to_string());
            }
            Ok((from - 1, v - 1))
        })
        .collect::<Result<_, _>>()?;
    let t = GBDTriple::validate(&rs, &g1, &g2, &tau).map_err(|e| e.to_string())?;
    let l = match &j.l {
        None => None,
        Some(rows) => {
            let mut basis = Vec::new();
            for row in rows {
                if row.len() != rs.rank {
                    return Err("l vectors must have length = rank".into());
                }
                basis.push(row.iter().map(|s| q_from_str(s)).collect::<Result<_, _>>()?);
            }
            Some(basis)
        }
    };
    Ok((rs, t, l))
}

fn poly_to_json(p: &LaurentPoly) -> Vec<MonomialJson> {
    p.iter()
        .map(|(e, c)| MonomialJson {
            c: q_to_string(c),
            e: e.clone(),
        })
        .collect()
}

fn poly_from_json(ms: &[MonomialJson]) -> Result<LaurentPoly, String> {
    let mut p = LaurentPoly::zero();
    for m in ms {
        p.add_term(m.e.clone(), &q_from_str(&m.c)?);
    }
    Ok(p)
}

pub fn constant_to_json(cb: &ChevalleyBasis, c: &ConstantR) -> RMatrixJson {
    let terms = c
        .tensor
        .iter()
        .map(|(idx, v)| TermJson {
            i: idx[0],
            j: idx[1],
            coeff: q_to_string(v),
            num: Vec::new(),
            den: Vec::new(),
        })
        .collect();
    RMatrixJson {
        basis: basis_names(cb),
        terms,
        lattice: LatticeJson::default(),
        metadata: MetaJson {
            mode: "constant".into(),
            triple: triple_to_json(&cb.rs, &c.triple, None),
            epsilon: "1".into(),
            conventions: conventions(),
        },
    }
}

pub fn dynamical_to_json(cb: &ChevalleyBasis, r: &DynamicalR) -> RMatrixJson {
    let names = var_names(r.ctx.n_vars());
    let terms = r
        .tensor
        .iter()
        .map(|(idx, v)| TermJson {
            i: idx[0],
            j: idx[1],
            coeff: v.render(&names),
            num: poly_to_json(v.numerator()),
            den: poly_to_json(v.denominator()),
        })
        .collect();
    let variables = r
        .ctx
        .lattice
        .generators()
        .iter()
        .enumerate()
        .map(|(j, g)| LatticeVarJson {
            name: format!("u{}", j + 1),
            weight: g.iter().map(q_to_string).collect(),
        })
        .collect();
    RMatrixJson {
        basis: basis_names(cb),
        terms,
        lattice: LatticeJson { variables },
        metadata: MetaJson {
            mode: "dynamical".into(),
            triple: triple_to_json(&cb.rs, &r.triple, Some(&r.ctx.l)),
            epsilon: "1".into(),
            conventions: conventions(),
        },
    }
}

/// A parsed r-matrix file.
pub enum LoadedRMatrix {
    Constant {
        cb: ChevalleyBasis,
        triple: GBDTriple,
        tensor: Tensor<Q, 2>,
    },
    Dynamical {
        cb: ChevalleyBasis,
        r: DynamicalR,
    },
}

pub fn rmatrix_from_json(j: &RMatrixJson) -> Result<LoadedRMatrix, String> {
    let (rs, triple, lvecs) = triple_from_json(&j.metadata.triple)?;
    let cb = ChevalleyBasis::build(rs);
    if j.basis.len() != cb.dim() {
        return Err(format!(
            "basis dictionary has {} entries, expected {}",
            j.basis.len(),
            cb.dim()
        ));
    }
    match j.metadata.mode.as_str() {
        "constant" => {
            let mut tensor = Tensor::new(cb.dim());
            for t in &j.terms {
                tensor.insert_add([t.i, t.j], q_from_str(&t.coeff)?);
            }
            Ok(LoadedRMatrix::Constant { cb, triple, tensor })
        }
        "dynamical" => {
            let lvecs = lvecs.ok_or("dynamical r-matrix needs l in metadata")?;
            let l = CartanSubspace::new(&cb.rs, lvecs);
            // rebuild the lattice from the stored variable weights, remapping
            // exponents in case the canonical generator basis differs
            let stored: Vec<Vec<Q>> = j
                .lattice
                .variables
                .iter()
                .map(|v| v.weight.iter().map(|s| q_from_str(s)).collect())
                .collect::<Result<_, _>>()?;
            let lattice = WeightLattice::new(&stored);
            let remap: Option<Vec<Vec<i64>>> =
                stored.iter().map(|w| lattice.decompose(w)).collect();
            let remap = remap.ok_or("stored lattice weights are inconsistent")?;
            let mut tensor: Tensor<ExpRat, 2> = Tensor::new(cb.dim());
            for t in &j.terms {
                let num = poly_from_json(&t.num)?;
                let den = if t.den.is_empty() {
                    LaurentPoly::one()
                } else {
                    poly_from_json(&t.den)?
                };
                let e = ExpRat::fraction(num, den)
                    .map_err(|e| e.to_string())?
                    .remap_exponents(&remap);
                tensor.insert_add([t.i, t.j], e);
            }
            let ctx = DynContext::from_parts(l, lattice).map_err(|e| e.to_string())?;
            // recover the constant skew h-part relative to Omega_h/2
            let mut hpart = Tensor::new(cb.dim());
            for (idx, v) in tensor.iter() {
                if idx[0] < cb.rank() && idx[1] < cb.rank() {
                    if let Some(c) = v.constant_value() {
                        hpart.insert_add(*idx, c);
                    }
                }
            }
            let rh0h0 = hpart.sub(&cb.casimir_h().scale_q(&crate::rational::q(1, 2)));
            Ok(LoadedRMatrix::Dynamical {
                cb,
                r: DynamicalR {
                    tensor,
                    triple,
                    ctx,
                    rh0h0,
                },
            })
        }
        other => Err(format!("unknown mode {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::solve_r0;
    use crate::tensor::Tensor;

    #[test]
    fn triple_roundtrip() {
        let rs = RootSystem::build(Series::A, 2).unwrap();
        let t = GBDTriple::validate(&rs, &[0], &[1], &[(0, 1)]).unwrap();
        let l = CartanSubspace::h_rho(&rs);
        let j = triple_to_json(&rs, &t, Some(&l));
        assert_eq!(j.gamma1, vec![1]);
        assert_eq!(j.tau["1"], 2);
        let (rs2, t2, lv) = triple_from_json(&j).unwrap();
        assert_eq!(rs2.rank, 2);
        assert_eq!(t2, t);
        assert_eq!(lv.unwrap(), l.basis().to_vec());
        let s = serde_json::to_string(&j).unwrap();
        let back: TripleJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn constant_rmatrix_roundtrip() {
        let cb = ChevalleyBasis::build(RootSystem::build(Series::A, 2).unwrap());
        let t = GBDTriple::validate(&cb.rs, &[0], &[1], &[(0, 1)]).unwrap();
        let r0 = solve_r0(&cb, &t).unwrap().particular;
        let c = crate::rmat::constant_bd_r(&cb, &t, &r0).unwrap();
        let j = constant_to_json(&cb, &c);
        let s = serde_json::to_string_pretty(&j).unwrap();
        let back: RMatrixJson = serde_json::from_str(&s).unwrap();
        match rmatrix_from_json(&back).unwrap() {
            LoadedRMatrix::Constant { tensor, .. } => assert_eq!(tensor, c.tensor),
            _ => panic!("wrong mode"),
        }
    }

    #[test]
    fn dynamical_rmatrix_roundtrip_preserves_residual() {
        let cb = ChevalleyBasis::build(RootSystem::build(Series::A, 2).unwrap());
        let l = CartanSubspace::h_rho(&cb.rs);
        let t = GBDTriple::validate(&cb.rs, &[0, 1], &[0, 1], &[(0, 1), (1, 0)]).unwrap();
        let zero: Tensor<Q, 2> = Tensor::new(cb.dim());
        let r = crate::rmat::dynamical_r(&cb, &t, &l, &zero).unwrap();
        let j = dynamical_to_json(&cb, &r);
        let s = serde_json::to_string(&j).unwrap();
        let back: RMatrixJson = serde_json::from_str(&s).unwrap();
        match rmatrix_from_json(&back).unwrap() {
            LoadedRMatrix::Dynamical { cb: cb2, r: r2 } => {
                assert_eq!(r2.tensor, r.tensor);
                assert!(crate::verify::check_cdybe_symbolic(&r2, &cb2).1);
                assert!(r2.rh0h0.is_zero());
            }
            _ => panic!("wrong mode"),
        }
    }
}
