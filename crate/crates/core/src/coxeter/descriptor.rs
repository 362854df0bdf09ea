//! Type descriptors such as `B3` or `A1xA2` and the Cartan data they determine.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Family letter of an irreducible Weyl type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// One irreducible factor `(family, rank)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub family: Family,
    pub rank: usize,
}

impl Factor {
    pub fn new(family: Family, rank: usize) -> Result<Factor> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType(format!(
                "{}{} is not an irreducible Weyl type",
                family.letter(),
                rank
            )));
        }
        Ok(Factor { family, rank })
    }

    /// Order of the Weyl group of this factor.
    pub fn group_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1_152,
            Family::G => 12,
        }
    }

    /// Cartan matrix with `a[i][j] = <alpha_j, alpha_i^vee>`.
    ///
    /// Numbering follows Bourbaki. For the doubly and triply laced families the
    /// entry `-2` (or `-3`) sits in the row of the long root.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => {
                for i in 0..n.saturating_sub(1) {
                    link(i, i + 1, -1, -1);
                }
            }
            Family::B => {
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                // alpha_n short
                link(n - 2, n - 1, -1, -2);
            }
            Family::C => {
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                // alpha_n long
                link(n - 2, n - 1, -2, -1);
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(i, i + 1, -1, -1);
                }
                link(n - 3, n - 1, -1, -1);
            }
            Family::E => {
                // 1-3-4-5-...-n with 2 attached to 4
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                for i in 2..n - 1 {
                    link(i, i + 1, -1, -1);
                }
            }
            Family::F => {
                link(0, 1, -1, -1);
                link(1, 2, -2, -1);
                link(2, 3, -1, -1);
            }
            Family::G => {
                link(0, 1, -1, -3);
            }
        }
        a
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A (possibly reducible) Weyl type, written `FACTOR ("x" FACTOR)*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeDescriptor {
    pub factors: Vec<Factor>,
}

impl TypeDescriptor {
    pub fn new(factors: Vec<Factor>) -> Result<TypeDescriptor> {
        if factors.is_empty() {
            return Err(Error::InvalidType("empty descriptor".into()));
        }
        Ok(TypeDescriptor { factors })
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    pub fn group_order(&self) -> u128 {
        self.factors
            .iter()
            .map(Factor::group_order)
            .fold(1u128, |acc, k| acc.saturating_mul(k))
    }

    /// Block-diagonal Cartan matrix of all factors, in descriptor order.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        let mut offset = 0;
        for factor in &self.factors {
            let block = factor.cartan();
            for (i, row) in block.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    a[offset + i][offset + j] = v;
                }
            }
            offset += factor.rank;
        }
        a
    }
}

impl FromStr for TypeDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<TypeDescriptor> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(Error::InvalidType("empty descriptor".into()));
        }
        let mut factors = Vec::new();
        for part in trimmed.split(['x', 'X']) {
            let mut chars = part.chars();
            let family = chars
                .next()
                .and_then(Family::from_letter)
                .ok_or_else(|| Error::InvalidType(format!("bad factor {part:?} in {s:?}")))?;
            let digits = chars.as_str();
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidType(format!("bad rank in factor {part:?}")));
            }
            let rank: usize = digits
                .parse()
                .map_err(|_| Error::InvalidType(format!("bad rank in factor {part:?}")))?;
            factors.push(Factor::new(family, rank)?);
        }
        TypeDescriptor::new(factors)
    }
}

impl fmt::Display for TypeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("x")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}
