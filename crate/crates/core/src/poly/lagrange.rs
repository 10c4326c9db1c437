use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactarith::{GaussianRational, Scalar};

use super::Poly;

/// Lagrange basis at the (simple) roots of `p = lead · Π (z − λ_k)`.
///
/// The leading coefficient matters: the multicentric variable is `w = p(z)`,
/// so rescaling `p` rescales every series in `w`.
#[derive(Clone, PartialEq, Debug)]
pub struct LagrangeBasis<S> {
    nodes: Vec<S>,
    p: Poly<S>,
    basis: Vec<Poly<S>>,
    dp: Vec<S>,
}

impl<S: Scalar> LagrangeBasis<S> {
    /// Basis for the monic `p` with the given roots.
    pub fn new(nodes: Vec<S>) -> Result<Self> {
        Self::with_leading(nodes, S::one())
    }

    pub fn with_leading(nodes: Vec<S>, lead: S) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("at least one node is required".into()));
        }
        if lead.is_zero() {
            return Err(Error::InvalidArgument("leading coefficient of p is zero".into()));
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i] == nodes[j] {
                    return Err(Error::DuplicateNodes(i, j));
                }
            }
        }
        let p = Poly::from_roots(&nodes, lead.clone());
        let mut basis = Vec::with_capacity(nodes.len());
        let mut dp = Vec::with_capacity(nodes.len());
        for (k, lk) in nodes.iter().enumerate() {
            let others: Vec<S> = nodes
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, l)| l.clone())
                .collect();
            let denom = others
                .iter()
                .fold(S::one(), |acc, lm| acc * (lk.clone() - lm.clone()));
            let inv = denom.inv().ok_or(Error::DivisionByZero)?;
            basis.push(Poly::from_roots(&others, inv));
            dp.push(lead.clone() * denom);
        }
        Ok(Self { nodes, p, basis, dp })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &S {
        &self.nodes[k]
    }

    /// The polynomial `p` whose roots are the nodes.
    pub fn p(&self) -> &Poly<S> {
        &self.p
    }

    /// `δ_k`, of degree `d − 1`.
    pub fn delta(&self, k: usize) -> &Poly<S> {
        &self.basis[k]
    }

    pub fn deltas(&self) -> &[Poly<S>] {
        &self.basis
    }

    /// `p′(λ_k)`.
    pub fn dp(&self, k: usize) -> &S {
        &self.dp[k]
    }

    pub fn dps(&self) -> &[S] {
        &self.dp
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> LagrangeBasis<T> {
        LagrangeBasis {
            nodes: self.nodes.iter().map(f).collect(),
            p: self.p.map(f),
            basis: self.basis.iter().map(|b| b.map(f)).collect(),
            dp: self.dp.iter().map(f).collect(),
        }
    }
}

impl LagrangeBasis<GaussianRational> {
    /// Rounds every stored exact quantity to binary64.
    pub fn to_float(&self) -> Result<LagrangeBasis<Complex64>> {
        let conv = |v: &[GaussianRational]| v.iter().map(GaussianRational::to_float).collect::<Result<Vec<_>>>();
        Ok(LagrangeBasis {
            nodes: conv(&self.nodes)?,
            p: self.p.to_float()?,
            basis: self.basis.iter().map(Poly::to_float).collect::<Result<_>>()?,
            dp: conv(&self.dp)?,
        })
    }
}
