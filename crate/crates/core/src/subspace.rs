//! Exact subspaces of `Q^n` in reduced row echelon form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A vector of exact rationals in the basis `{v_s}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn zero(n: usize) -> RationalVector {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> RationalVector {
        RationalVector(v.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }
}

impl std::ops::Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|c| c.to_string()))
            .finish()
    }
}

/// Subspace of `Q^n`, stored as the unique reduced row echelon basis.
///
/// Two subspaces are equal iff their RREF matrices are equal, so the derived
/// `PartialEq` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSubspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
}

impl RationalSubspace {
    pub fn zero(ambient: usize) -> RationalSubspace {
        RationalSubspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> RationalSubspace {
        let rows = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        RationalSubspace { ambient, rows }
    }

    /// Span of arbitrary (possibly dependent) row vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<RationalSubspace> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(Error::RankMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        Ok(RationalSubspace {
            ambient,
            rows: rref(vectors, ambient),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.ambient {
            return Err(Error::RankMismatch {
                expected: self.ambient,
                found: n,
            });
        }
        Ok(())
    }

    pub fn add_line(&self, v: &RationalVector) -> Result<RationalSubspace> {
        self.check(v.dim())?;
        let mut rows = self.rows.clone();
        rows.push(v.0.clone());
        Ok(RationalSubspace {
            ambient: self.ambient,
            rows: rref(rows, self.ambient),
        })
    }

    pub fn sum(&self, other: &RationalSubspace) -> Result<RationalSubspace> {
        self.check(other.ambient)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(RationalSubspace {
            ambient: self.ambient,
            rows: rref(rows, self.ambient),
        })
    }

    /// Exact membership test by reduction against the RREF basis.
    pub fn contains(&self, v: &RationalVector) -> Result<bool> {
        self.check(v.dim())?;
        let mut rest = v.0.clone();
        for row in &self.rows {
            let p = pivot(row).expect("RREF rows are nonzero");
            if rest[p].is_zero() {
                continue;
            }
            let c = rest[p].clone();
            for (r, a) in rest.iter_mut().zip(row) {
                *r -= &c * a;
            }
        }
        Ok(rest.iter().all(Zero::is_zero))
    }

    pub fn contains_subspace(&self, other: &RationalSubspace) -> Result<bool> {
        self.check(other.ambient)?;
        for row in &other.rows {
            if !self.contains(&RationalVector(row.clone()))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| pivot(r).expect("RREF rows are nonzero"))
            .collect()
    }

    /// Image under `v -> m v` for an integer matrix given row-major.
    pub fn map_int(&self, m: &dyn Fn(usize, usize) -> i64) -> RationalSubspace {
        let n = self.ambient;
        let rows = self
            .rows
            .iter()
            .map(|v| {
                (0..n)
                    .map(|i| {
                        let mut acc = Rational::zero();
                        for (j, vj) in v.iter().enumerate() {
                            let a = m(i, j);
                            if a != 0 && !vj.is_zero() {
                                acc += vj * Rational::from_integer(BigInt::from(a));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        RationalSubspace {
            ambient: n,
            rows: rref(rows, n),
        }
    }

    /// Keeps only the coordinates in `keep` (in order), i.e. the image under
    /// the coordinate projection.
    pub fn project(&self, keep: &[usize]) -> RationalSubspace {
        let rows = self
            .rows
            .iter()
            .map(|r| keep.iter().map(|&k| r[k].clone()).collect())
            .collect();
        RationalSubspace {
            ambient: keep.len(),
            rows: rref(rows, keep.len()),
        }
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson {
            dim: self.dim(),
            basis: self
                .rows
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(ambient: usize, json: &SubspaceJson) -> Result<RationalSubspace> {
        let rows = json
            .basis
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let space = RationalSubspace::span(ambient, rows)?;
        if space.dim() != json.dim {
            return Err(Error::Parse(format!(
                "declared dim {} but basis spans {}",
                json.dim,
                space.dim()
            )));
        }
        Ok(space)
    }
}

impl fmt::Debug for RationalSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "RationalSubspace(dim={}, {:?})", self.dim(), rows)
    }
}

/// `{"dim": r, "basis": [["p/q", ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

/// Always `numerator/denominator`, denominator positive.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn pivot(row: &[Rational]) -> Option<usize> {
    row.iter().position(|c| !c.is_zero())
}

/// Gauss–Jordan elimination, pivoting by column order. Returns the nonzero
/// rows of the RREF.
fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip();
        if !inv.is_one() {
            for c in rows[rank].iter_mut() {
                *c *= &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *c -= &factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        RationalVector::from_ints(v).0
    }

    #[test]
    fn rref_shape() {
        let s = RationalSubspace::span(3, vec![ints(&[2, 4, 0]), ints(&[1, 2, 1]), ints(&[3, 6, 1])]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis(), &[ints(&[1, 2, 0]), ints(&[0, 0, 1])]);
        assert_eq!(s.pivots(), vec![0, 2]);
    }

    #[test]
    fn basic_ops() {
        let z = RationalSubspace::zero(2);
        let v0 = RationalVector::from_ints(&[1, 0]);
        let v1 = RationalVector::from_ints(&[0, 1]);
        let l = z.add_line(&v0).unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.sum(&l).unwrap(), l);
        assert!(!l.contains(&v1).unwrap());
        assert!(l.contains(&v0.scaled(&q(-7, 3))).unwrap());
        assert!(matches!(
            l.add_line(&RationalVector::from_ints(&[1, 2, 3])),
            Err(Error::RankMismatch { .. })
        ));
        assert_eq!(l.add_line(&v1).unwrap(), RationalSubspace::full(2));
    }

    #[test]
    fn json_form() {
        let s = RationalSubspace::span(2, vec![vec![q(2, 1), q(1, 1)]]).unwrap();
        let j = s.to_json();
        assert_eq!(j.basis, vec![vec!["1/1".to_string(), "1/2".to_string()]]);
        assert_eq!(RationalSubspace::from_json(2, &j).unwrap(), s);
        assert_eq!(parse_rational("-3").unwrap(), q(-3, 1));
        assert!(parse_rational("1/0").is_err());
    }

    fn small_rows(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, n), 0..=n)
    }

    proptest! {
        // random invertible row mixes do not change the canonical form
        #[test]
        fn presentation_independent(rows in small_rows(4), mix in prop::collection::vec(-3i64..4, 16)) {
            let base = RationalSubspace::span(4, rows.iter().map(|r| ints(r)).collect()).unwrap();
            let k = rows.len();
            // unit lower triangular mixing matrix is always invertible
            let mixed: Vec<Vec<Rational>> = (0..k)
                .map(|i| {
                    (0..4)
                        .map(|c| {
                            let mut acc = Rational::from_integer(BigInt::from(rows[i][c]));
                            for j in 0..i {
                                acc += Rational::from_integer(BigInt::from(mix[i * 4 + j] * rows[j][c]));
                            }
                            acc
                        })
                        .collect()
                })
                .rev()
                .collect();
            let other = RationalSubspace::span(4, mixed).unwrap();
            prop_assert_eq!(base, other);
        }

        #[test]
        fn spanning_vectors_are_members(rows in small_rows(3)) {
            let s = RationalSubspace::span(3, rows.iter().map(|r| ints(r)).collect()).unwrap();
            for r in &rows {
                prop_assert!(s.contains(&RationalVector::from_ints(r)).unwrap());
            }
            prop_assert!(s.dim() <= rows.len());
        }
    }
}
