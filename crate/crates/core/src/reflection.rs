//! The reflection representation on simple-root coordinates.
//!
//! `v_s` is the coordinate vector of the simple root `alpha_s`, the coroot
//! pairing is `<v_t, alpha_s^vee> = a(s, t)`, and `s` acts by
//! `v -> v - <v, alpha_s^vee> v_s`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coxeter::{CoxeterSystem, GroupElement, IntMatrix};
use crate::error::{Error, Result};
use crate::subspace::{Rational, RationalSubspace, RationalVector};

fn check_index(sys: &CoxeterSystem, s: usize) -> Result<()> {
    if s >= sys.rank() {
        return Err(Error::IndexOutOfRange {
            index: s,
            rank: sys.rank(),
        });
    }
    Ok(())
}

fn check_dim(sys: &CoxeterSystem, v: &RationalVector) -> Result<()> {
    if v.dim() != sys.rank() {
        return Err(Error::RankMismatch {
            expected: sys.rank(),
            found: v.dim(),
        });
    }
    Ok(())
}

pub fn basis_vector(sys: &CoxeterSystem, s: usize) -> Result<RationalVector> {
    check_index(sys, s)?;
    let mut v = vec![0; sys.rank()];
    v[s] = 1;
    Ok(RationalVector::from_ints(&v))
}

/// `<v, alpha_s^vee>`.
pub fn pairing(sys: &CoxeterSystem, s: usize, v: &RationalVector) -> Result<Rational> {
    check_index(sys, s)?;
    check_dim(sys, v)?;
    let mut acc = Rational::zero();
    for (t, c) in v.coords().iter().enumerate() {
        let a = sys.cartan_entry(s, t);
        if a != 0 {
            acc += c * Rational::from_integer(BigInt::from(a));
        }
    }
    Ok(acc)
}

pub fn reflect(sys: &CoxeterSystem, s: usize, v: &RationalVector) -> Result<RationalVector> {
    let p = pairing(sys, s, v)?;
    let mut out = v.clone();
    out.0[s] -= p;
    Ok(out)
}

/// `g` applied to a vector through its matrix.
pub fn act_vector(g: &GroupElement, v: &RationalVector) -> RationalVector {
    let m = g.matrix();
    let n = m.dim();
    RationalVector(
        (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, c) in v.coords().iter().enumerate() {
                    let a = m.get(i, j);
                    if a != 0 {
                        acc += c * Rational::from_integer(BigInt::from(a));
                    }
                }
                acc
            })
            .collect(),
    )
}

/// `g(U)`, re-canonicalized.
pub fn act(g: &GroupElement, u: &RationalSubspace) -> RationalSubspace {
    act_matrix(g.matrix(), u)
}

pub fn act_matrix(m: &IntMatrix, u: &RationalSubspace) -> RationalSubspace {
    u.map_int(&|i, j| m.get(i, j))
}

/// Multiplicative order of an integer matrix, if it is at most `limit`.
pub fn matrix_order(m: &IntMatrix, limit: usize) -> Option<usize> {
    let mut p = m.clone();
    for k in 1..=limit {
        if p.is_identity() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(d: &str) -> CoxeterSystem {
        CoxeterSystem::build(&d.parse().unwrap()).unwrap()
    }

    #[test]
    fn basis_vectors() {
        assert_eq!(basis_vector(&sys("A1"), 0).unwrap(), RationalVector::from_ints(&[1]));
        assert_eq!(basis_vector(&sys("A2"), 0).unwrap(), RationalVector::from_ints(&[1, 0]));
        assert_eq!(basis_vector(&sys("B2"), 1).unwrap(), RationalVector::from_ints(&[0, 1]));
        assert!(basis_vector(&sys("B2"), 2).is_err());
    }

    #[test]
    fn reflection_of_own_root() {
        for d in ["A3", "B3", "G2", "F4"] {
            let s = sys(d);
            for i in 0..s.rank() {
                let v = basis_vector(&s, i).unwrap();
                assert_eq!(pairing(&s, i, &v).unwrap(), Rational::from_integer(2.into()));
                assert_eq!(reflect(&s, i, &v).unwrap(), -&v);
            }
        }
    }

    #[test]
    fn a2_neighbour() {
        let s = sys("A2");
        let v1 = basis_vector(&s, 1).unwrap();
        assert_eq!(reflect(&s, 0, &v1).unwrap(), RationalVector::from_ints(&[1, 1]));
    }

    #[test]
    fn fixed_by_kernel_of_pairing() {
        let s = sys("B2");
        // a(0,1) = -1, so <(1,2), alpha_0^vee> = 2 - 2 = 0
        let v = RationalVector::from_ints(&[1, 2]);
        assert!(pairing(&s, 0, &v).unwrap().is_zero());
        assert_eq!(reflect(&s, 0, &v).unwrap(), v);
    }

    #[test]
    fn braid_orders() {
        for d in ["A3", "B3", "C3", "D4", "G2", "F4", "A1xA2"] {
            let s = sys(d);
            for i in 0..s.rank() {
                for j in 0..s.rank() {
                    let m = s.generator_matrix(i).mul(s.generator_matrix(j));
                    assert_eq!(matrix_order(&m, 12), Some(s.coxeter_m()[i][j] as usize), "{d} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn act_basics() {
        let s = sys("A2");
        let v0 = basis_vector(&s, 0).unwrap();
        let line = RationalSubspace::zero(2).add_line(&v0).unwrap();
        let s0 = s.simple_reflection(0).unwrap();
        assert_eq!(act(&s0, &line), line);
        assert_eq!(act(&s.identity(), &line), line);
        assert!(act(&s0, &RationalSubspace::zero(2)).is_zero());
    }

    proptest! {
        #[test]
        fn reflect_is_involution_and_matches_matrix(coords in prop::collection::vec(-9i64..10, 4), i in 0usize..4) {
            let s = sys("F4");
            let v = RationalVector::from_ints(&coords);
            let once = reflect(&s, i, &v).unwrap();
            prop_assert_eq!(reflect(&s, i, &once).unwrap(), v.clone());
            prop_assert_eq!(act_vector(&s.simple_reflection(i).unwrap(), &v), once);
        }
    }
}
