//! Z/2 parity of variables and homogeneous polynomials.

use std::fmt;
use std::ops::Add;

/// Parity (Grassmann degree mod 2) of a variable or a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `true` for [`Parity::Odd`].
    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Odd)
    }

    /// Parity as an element of {0, 1}.
    pub fn as_u8(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Parity from an integer (reduced mod 2).
    pub fn from_usize(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The opposite parity.
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// `(-1)^{self * other}`: `-1` iff both parities are odd, else `1`.
    pub fn koszul_sign(self, other: Parity) -> i8 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_usize((self.as_u8() + rhs.as_u8()) as usize)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}
