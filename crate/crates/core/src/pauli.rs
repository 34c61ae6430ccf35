//! Pauli operators and tensor-product strings.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::{kron_all, ComplexMatrix, C64};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        match self {
            Pauli::I => ComplexMatrix::from_rows([[o, z], [z, o]]),
            Pauli::X => ComplexMatrix::from_rows([[z, o], [o, z]]),
            Pauli::Y => ComplexMatrix::from_rows([[z, -i], [i, z]]),
            Pauli::Z => ComplexMatrix::from_rows([[o, z], [z, -o]]),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i % 4]
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Paulis, wire 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let factors: Vec<ComplexMatrix> = self.0.iter().map(|p| p.matrix()).collect();
        kron_all(&factors)
    }

    /// Positions carrying a non-identity factor.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.0[k] != Pauli::I).collect()
    }

    /// Two strings commute iff they anticommute on an even number of wires.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let clashes = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        clashes % 2 == 0
    }

    /// All `4^n` strings on `n` wires in lexicographic `I < X < Y < Z` order,
    /// wire 0 most significant.
    pub fn all(n: usize) -> Vec<PauliString> {
        (0..4usize.pow(n as u32))
            .map(|mut idx| {
                let mut v = alloc::vec![Pauli::I; n];
                for w in (0..n).rev() {
                    v[w] = Pauli::from_index(idx % 4);
                    idx /= 4;
                }
                PauliString(v)
            })
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|p| p.symbol()).collect();
        f.write_str(&s)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::Unsupported(alloc::format!("Pauli symbol {ch:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PauliString)
    }
}
