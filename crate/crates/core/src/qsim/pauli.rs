use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// True for I and Z, the operators diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(self, Pauli::I | Pauli::Z)
    }
}

/// Tensor product of single-qubit Paulis, leftmost symbol on the most
/// significant bit of the basis index (standard Kronecker ordering).
///
/// The operator acts on a basis state `|b>` as
/// `P|b> = i^{#Y} (-1)^{popcount(b & z_mask)} |b ^ x_mask>`
/// where `x_mask` marks X/Y positions and `z_mask` marks Z/Y positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    symbols: Vec<Pauli>,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

/// Largest qubit count representable by the bit masks.
pub const MAX_QUBITS: usize = usize::BITS as usize - 2;

impl PauliString {
    pub fn new(symbols: Vec<Pauli>) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::InvalidParameter("Pauli string must be non-empty".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "Pauli string of length {n} exceeds {MAX_QUBITS} qubits"
            )));
        }
        let mut x_mask = 0usize;
        let mut z_mask = 0usize;
        let mut y_count = 0u32;
        for (k, p) in symbols.iter().enumerate() {
            let bit = 1usize << (n - 1 - k);
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Z => z_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
            }
        }
        Ok(Self {
            symbols,
            x_mask,
            z_mask,
            y_count,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.symbols
    }

    pub fn x_mask(&self) -> usize {
        self.x_mask
    }

    pub fn z_mask(&self) -> usize {
        self.z_mask
    }

    /// Whether the string is built only from I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// `<0^n|P|0^n>`: 1 for diagonal strings, 0 otherwise.
    pub fn vacuum_expectation(&self) -> f64 {
        if self.is_diagonal() {
            1.0
        } else {
            0.0
        }
    }

    /// Phase `i^{#Y}` shared by every basis state.
    pub(crate) fn global_phase(&self) -> Complex64 {
        match self.y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Sign `(-1)^{popcount(b & z_mask)}` for basis index `b`.
    #[inline]
    pub(crate) fn sign(&self, basis: usize) -> f64 {
        if (basis & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Two strings commute iff their symplectic product is even.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        anti.is_multiple_of(2)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.symbols {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("invalid Pauli symbol {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(symbols)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p: PauliString = "xIzY".parse().unwrap();
        assert_eq!(p.to_string(), "XIZY");
        assert_eq!(p.len(), 4);
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn masks_follow_kronecker_order() {
        let p: PauliString = "XZ".parse().unwrap();
        assert_eq!(p.x_mask(), 0b10);
        assert_eq!(p.z_mask(), 0b01);
        let y: PauliString = "IY".parse().unwrap();
        assert_eq!((y.x_mask(), y.z_mask()), (0b01, 0b01));
        assert_eq!(y.global_phase(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn commutation() {
        let xx: PauliString = "XX".parse().unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let xi: PauliString = "XI".parse().unwrap();
        let zi: PauliString = "ZI".parse().unwrap();
        assert!(xx.commutes_with(&zz));
        assert!(!xi.commutes_with(&zi));
        assert!(xi.commutes_with(&xi));
    }

    #[test]
    fn vacuum_expectation_closed_form() {
        assert_eq!("ZIZ".parse::<PauliString>().unwrap().vacuum_expectation(), 1.0);
        assert_eq!("ZYZ".parse::<PauliString>().unwrap().vacuum_expectation(), 0.0);
    }
}
