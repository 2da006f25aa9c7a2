//! JSON-facing representations. Indices are 1-based, ∞ is the label 0 and
//! rationals are strings `"p/q"` or `"n"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix};
use crate::coxeter::{CoxeterError, CoxeterMatrix};
use crate::forge::{Certificates, Construction, CycleCertificate, ForgeOutput};
use crate::linalg::{Matrix, Rational};
use crate::represent::{RepError, ReflectionRep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("cannot parse {0:?} as a rational number")]
    BadRational(String),
    #[error("declared rank/dimension {declared} does not match the data ({actual})")]
    SizeMismatch { declared: usize, actual: usize },
    #[error("generator {index} is not Id - v⊗α for the given alpha and v")]
    GeneratorMismatch { index: usize },
    #[error("unknown construction {0:?}")]
    BadConstruction(String),
    #[error("no Coxeter matrix given for the representation")]
    MissingCoxeter,
    #[error("index {0} is out of range (indices are 1-based)")]
    BadIndex(usize),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, WireError> {
    s.trim().parse::<Rational>().map_err(|_| WireError::BadRational(s.to_string()))
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(v: &[String]) -> Result<Vec<Rational>, WireError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

pub fn format_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| format_vector(r)).collect()
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Matrix, WireError> {
    let parsed = rows.iter().map(|r| parse_vector(r)).collect::<Result<Vec<_>, _>>()?;
    let width = parsed.first().map_or(0, Vec::len);
    if let Some(bad) = parsed.iter().find(|r| r.len() != width) {
        return Err(WireError::SizeMismatch {
            declared: width,
            actual: bad.len(),
        });
    }
    Ok(Matrix::from_rows(parsed))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn zero_based(v: &[usize]) -> Result<Vec<usize>, WireError> {
    v.iter().map(|&i| i.checked_sub(1).ok_or(WireError::BadIndex(i))).collect()
}

fn check_size(declared: usize, actual: usize) -> Result<(), WireError> {
    if declared == actual {
        Ok(())
    } else {
        Err(WireError::SizeMismatch { declared, actual })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterJson {
    pub rank: usize,
    pub m: Vec<Vec<u32>>,
}

impl CoxeterJson {
    pub fn new(m: &CoxeterMatrix) -> Self {
        CoxeterJson {
            rank: m.rank(),
            m: m.to_wire(),
        }
    }

    pub fn to_matrix(&self) -> Result<CoxeterMatrix, WireError> {
        check_size(self.rank, self.m.len())?;
        Ok(CoxeterMatrix::from_wire(&self.m)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanJson {
    pub rank: usize,
    pub a: Vec<Vec<String>>,
}

impl CartanJson {
    pub fn new(a: &CartanMatrix) -> Self {
        CartanJson {
            rank: a.rank(),
            a: format_matrix(a.matrix()),
        }
    }

    pub fn to_matrix(&self) -> Result<CartanMatrix, WireError> {
        check_size(self.rank, self.a.len())?;
        let m = parse_matrix(&self.a)?;
        check_size(self.rank, m.cols())?;
        Ok(CartanMatrix::validate(m)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub dim: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    pub alphas: Vec<Vec<String>>,
    pub vs: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coxeter: Option<CoxeterJson>,
}

impl RepJson {
    pub fn new(rep: &ReflectionRep) -> Self {
        RepJson {
            dim: rep.dim(),
            generators: rep.generators().iter().map(format_matrix).collect(),
            alphas: rep.alphas().iter().map(|a| format_vector(a)).collect(),
            vs: rep.vs().iter().map(|v| format_vector(v)).collect(),
            coxeter: Some(CoxeterJson::new(rep.coxeter())),
        }
    }

    /// Rebuilds the representation. `coxeter` overrides the embedded matrix.
    /// Listed generators that differ from `Id − v⊗α` are kept as given, so a
    /// corrupted generator reaches the relation check instead of being
    /// silently repaired.
    pub fn to_rep(&self, coxeter: Option<&CoxeterMatrix>) -> Result<ReflectionRep, WireError> {
        let m = match (coxeter, &self.coxeter) {
            (Some(m), _) => m.clone(),
            (None, Some(c)) => c.to_matrix()?,
            (None, None) => return Err(WireError::MissingCoxeter),
        };
        let alphas = self.alphas.iter().map(|a| parse_vector(a)).collect::<Result<Vec<_>, _>>()?;
        let vs = self.vs.iter().map(|v| parse_vector(v)).collect::<Result<Vec<_>, _>>()?;
        if let Some(a) = alphas.first() {
            check_size(self.dim, a.len())?;
        }
        let mut rep = ReflectionRep::from_parts(alphas, vs, m)?;
        if !self.generators.is_empty() {
            check_size(rep.generators().len(), self.generators.len())?;
            for (index, g) in self.generators.iter().enumerate() {
                let g = parse_matrix(g)?;
                if g != rep.generators()[index] {
                    if g.rows() != rep.dim() || g.cols() != rep.dim() {
                        return Err(WireError::GeneratorMismatch { index });
                    }
                    rep = rep.with_generator_replaced(index, g);
                }
            }
        }
        Ok(rep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatesJson {
    pub compatible: bool,
    pub non_symmetrizable: bool,
    pub witness_cycle: Vec<usize>,
    pub forward: String,
    pub reverse: String,
    pub rank: usize,
    pub integer_cyclic_products: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub heavy_cycle: Vec<usize>,
    pub heavy_product: String,
    pub light_product: String,
}

/// Certificate bundle for a constructed Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForgeJson {
    pub construction: String,
    pub parameter: u64,
    pub coxeter: CoxeterJson,
    pub cartan: CartanJson,
    pub certificates: CertificatesJson,
    #[serde(default)]
    pub scaled_pairs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<CycleJson>,
}

impl ForgeJson {
    pub fn new(out: &ForgeOutput) -> Self {
        let c = &out.certificates;
        ForgeJson {
            construction: out.construction.name().to_string(),
            parameter: out.parameter,
            coxeter: CoxeterJson::new(&out.coxeter),
            cartan: CartanJson::new(&out.cartan),
            certificates: CertificatesJson {
                compatible: c.compatible,
                non_symmetrizable: c.non_symmetrizable,
                witness_cycle: one_based(&c.witness_cycle),
                forward: format_rational(&c.forward),
                reverse: format_rational(&c.reverse),
                rank: c.rank,
                integer_cyclic_products: c.integer_cyclic_products,
            },
            scaled_pairs: out.scaled_pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            cycle: out.cycle.as_ref().map(|cc| CycleJson {
                heavy_cycle: one_based(&cc.heavy_cycle),
                heavy_product: format_rational(&cc.heavy_product),
                light_product: format_rational(&cc.light_product),
            }),
        }
    }

    pub fn to_output(&self) -> Result<ForgeOutput, WireError> {
        let construction = match self.construction.as_str() {
            "spanning-tree" => Construction::SpanningTree,
            "rank-bump" => Construction::RankBump,
            "general" => Construction::General,
            "seed" => Construction::Seed,
            other => return Err(WireError::BadConstruction(other.to_string())),
        };
        let c = &self.certificates;
        let scaled_pairs = self
            .scaled_pairs
            .iter()
            .map(|p| Ok((zero_based(&[p[0]])?[0], zero_based(&[p[1]])?[0])))
            .collect::<Result<_, WireError>>()?;
        let cycle = match &self.cycle {
            None => None,
            Some(cc) => Some(CycleCertificate {
                heavy_cycle: zero_based(&cc.heavy_cycle)?,
                heavy_product: parse_rational(&cc.heavy_product)?,
                light_product: parse_rational(&cc.light_product)?,
            }),
        };
        Ok(ForgeOutput {
            cartan: self.cartan.to_matrix()?,
            coxeter: self.coxeter.to_matrix()?,
            construction,
            parameter: self.parameter,
            certificates: Certificates {
                compatible: c.compatible,
                non_symmetrizable: c.non_symmetrizable,
                witness_cycle: zero_based(&c.witness_cycle)?,
                forward: parse_rational(&c.forward)?,
                reverse: parse_rational(&c.reverse)?,
                rank: c.rank,
                integer_cyclic_products: c.integer_cyclic_products,
            },
            scaled_pairs,
            cycle,
        })
    }
}
