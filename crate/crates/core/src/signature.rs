//! Diagonal ±1 signature matrices.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signature `J = diag(J_1, …, J_r)`, stored in leading-minor order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Signature {
    signs: Vec<i8>,
}

impl Signature {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidArgument(format!("signature entry {bad} is not ±1")));
        }
        Ok(Self { signs })
    }

    pub fn identity(r: usize) -> Self {
        Self { signs: vec![1; r] }
    }

    /// Parses strings such as `"+-+"` (ASCII or U+2212 minus).
    pub fn parse(spec: &str) -> Result<Self> {
        let signs = spec
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in signature"
                ))),
            })
            .collect::<Result<Vec<i8>>>()?;
        if signs.is_empty() {
            return Err(Error::InvalidArgument("empty signature".into()));
        }
        Ok(Self { signs })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign(&self, k: usize) -> f64 {
        f64::from(self.signs[k])
    }

    /// Number of `+1` entries.
    pub fn p(&self) -> usize {
        self.signs.iter().filter(|s| **s > 0).count()
    }

    /// Number of `-1` entries.
    pub fn q(&self) -> usize {
        self.signs.len() - self.p()
    }

    pub fn leading(&self, m: usize) -> Self {
        Self {
            signs: self.signs[..m].to_vec(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.len(), self.len(), |i, j| {
            if i == j {
                Complex64::new(self.sign(i), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Stable permutation listing the `+1` indices first, then the `-1` ones.
    /// Column `k` of `S₊P` is column `perm[k]` of `S₊`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.len()).filter(|&k| self.signs[k] > 0).collect();
        perm.extend((0..self.len()).filter(|&k| self.signs[k] < 0));
        perm
    }

    /// `diag(I_p, -I_q)`.
    pub fn canonical(&self) -> Self {
        let perm = self.canonical_permutation();
        Self {
            signs: perm.iter().map(|&k| self.signs[k]).collect(),
        }
    }
}

impl TryFrom<Vec<i8>> for Signature {
    type Error = Error;
    fn try_from(signs: Vec<i8>) -> Result<Self> {
        Self::new(signs)
    }
}

impl From<Signature> for Vec<i8> {
    fn from(s: Signature) -> Self {
        s.signs
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.signs.iter().all(|s| *s > 0) {
            return write!(f, "I");
        }
        let parts: Vec<&str> = self
            .signs
            .iter()
            .map(|s| if *s > 0 { "+1" } else { "-1" })
            .collect();
        write!(f, "diag({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_count() {
        let s = Signature::parse("-+").unwrap();
        assert_eq!(s.signs(), &[-1, 1]);
        assert_eq!((s.p(), s.q()), (1, 1));
        assert_eq!(Signature::parse("+\u{2212}+").unwrap().signs(), &[1, -1, 1]);
        assert!(Signature::parse("+x").is_err());
        assert!(Signature::parse("").is_err());
        assert!(Signature::new(vec![1, 0]).is_err());
    }

    #[test]
    fn canonical_groups_positive_first() {
        let s = Signature::parse("-+-+").unwrap();
        assert_eq!(s.canonical_permutation(), vec![1, 3, 0, 2]);
        assert_eq!(s.canonical().signs(), &[1, 1, -1, -1]);
    }

    #[test]
    fn display() {
        assert_eq!(Signature::identity(2).to_string(), "I");
        assert_eq!(Signature::parse("-+").unwrap().to_string(), "diag(-1, +1)");
    }
}
