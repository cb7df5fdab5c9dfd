use super::operator::{Operator, C64};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// A real linear combination of Hermitian Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn from_terms(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut obs = Self::new(n);
        for (c, s) in terms {
            obs.push(c, s)?;
        }
        Ok(obs)
    }

    /// Adds `c·σ`; a `−1` phase on σ is folded into the coefficient.
    pub fn push(&mut self, c: f64, s: PauliString) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::InvalidSize(format!(
                "{}-qubit term in a {}-qubit observable",
                s.len(),
                self.n
            )));
        }
        if !s.is_hermitian() {
            return Err(Error::InvalidTarget(format!("term {s} is not Hermitian")));
        }
        let c = if s.phase() == 2 { -c } else { c };
        self.terms.push((c, s.unsigned()));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let mut acc = Operator::zeros(self.n)?;
        for (c, s) in &self.terms {
            let mut p = Operator::pauli(s)?;
            p.scale(C64::new(*c, 0.0));
            acc = acc + p;
        }
        Ok(acc)
    }
}
