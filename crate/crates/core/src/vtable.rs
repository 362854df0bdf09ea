//! The subspaces `V(x, y)` of the reflection representation, for `y <= x`,
//! and their images under singular quotients.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::coxeter::{ElemId, WeylGroup};
use crate::error::{Error, Result};
use crate::reflection::{act_matrix, basis_vector};
use crate::rpoly::not_comparable;
use crate::subspace::{Rational, RationalSubspace, RationalVector};

/// The subset `S_lambda` of simple reflections fixing a singular weight,
/// as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SingularSpec {
    mask: u64,
}

impl SingularSpec {
    pub fn new(group: &WeylGroup, indices: &[usize]) -> Result<SingularSpec> {
        let mut mask = 0;
        for &i in indices {
            if i >= group.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: group.rank(),
                });
            }
            mask |= 1 << i;
        }
        Ok(SingularSpec { mask })
    }

    pub fn regular() -> SingularSpec {
        SingularSpec { mask: 0 }
    }

    pub fn from_mask(mask: u64) -> SingularSpec {
        SingularSpec { mask }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|i| self.mask >> i & 1 == 1).collect()
    }
}

/// One row of the membership report: for `y <= x` and `s` with `xs > x`,
/// `ys > y`, whether `v_s` lies in `V(x, y)` and whether `x >= ys`.
///
/// `rank2` marks rows where `x` and `y` both lie in a coset `w0 <s, s'>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipRow {
    pub x: ElemId,
    pub y: ElemId,
    pub s: usize,
    pub member: bool,
    pub x_geq_ys: bool,
    pub rank2: bool,
}

/// Memo table of `V(x, y)` keyed by `(x, y)` with `y <= x`.
#[derive(Debug, Clone)]
pub struct VTable {
    fingerprint: String,
    ambient: usize,
    lines: Vec<RationalVector>,
    entries: HashMap<(ElemId, ElemId), RationalSubspace>,
}

impl VTable {
    pub fn new(group: &WeylGroup) -> VTable {
        let sys = group.system();
        let lines = (0..sys.rank())
            .map(|s| basis_vector(sys, s).expect("index in range"))
            .collect();
        VTable {
            fingerprint: sys.fingerprint(),
            ambient: sys.rank(),
            lines,
            entries: HashMap::new(),
        }
    }

    /// Uses `scale[s] * alpha_s` in place of `v_s`. Any nonzero scaling spans
    /// the same lines, so every `V(x, y)` is unchanged.
    pub fn with_line_scale(group: &WeylGroup, scale: &[i64]) -> Result<VTable> {
        let mut table = VTable::new(group);
        if scale.len() != table.ambient {
            return Err(Error::RankMismatch {
                expected: table.ambient,
                found: scale.len(),
            });
        }
        if scale.contains(&0) {
            return Err(Error::Invariant("v_s must be nonzero".into()));
        }
        for (line, &c) in table.lines.iter_mut().zip(scale) {
            *line = line.scaled(&Rational::from_integer(BigInt::from(c)));
        }
        Ok(table)
    }

    /// Computes every comparable pair.
    pub fn compute_all(group: &WeylGroup) -> Result<VTable> {
        let mut table = VTable::new(group);
        table.fill_all(group)?;
        Ok(table)
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: ElemId, y: ElemId) -> Option<&RationalSubspace> {
        self.entries.get(&(x, y))
    }

    /// Entries ordered by `(x, y)`.
    pub fn sorted_entries(&self) -> Vec<((ElemId, ElemId), &RationalSubspace)> {
        let mut out: Vec<_> = self.entries.iter().map(|(&k, v)| (k, v)).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// `V(x, y)` for `y <= x`.
    ///
    /// Strips the policy's descent `s` from `x` (so `x = x's` with `x' < x`):
    /// `V(x, y) = s(V(x', ys))` when `ys < y`, and
    /// `V(x, y) = K v_s + s(V(x', y))` when `ys > y`.
    pub fn compute_v(&mut self, group: &WeylGroup, x: ElemId, y: ElemId) -> Result<RationalSubspace> {
        if !group.bruhat_leq(y, x) {
            return Err(not_comparable(group, x, y));
        }
        self.ensure(group, x, y)?;
        Ok(self.entries[&(x, y)].clone())
    }

    fn ensure(&mut self, group: &WeylGroup, x: ElemId, y: ElemId) -> Result<()> {
        if self.entries.contains_key(&(x, y)) {
            return Ok(());
        }
        if x != y {
            let (xs, dep_y) = dependency(group, x, y)?;
            self.ensure(group, xs, dep_y)?;
        }
        let v = step(group, &self.lines, &self.entries, x, y)?;
        self.entries.insert((x, y), v);
        Ok(())
    }

    /// Fills all comparable pairs stratum by stratum in `l(x)`; pairs within a
    /// stratum only read the previous stratum and run in parallel on the
    /// current rayon pool.
    pub fn fill_all(&mut self, group: &WeylGroup) -> Result<()> {
        group.check_pair_budget()?;
        for stratum in group.strata() {
            let entries = &self.entries;
            let lines = &self.lines;
            let fresh: Vec<((ElemId, ElemId), RationalSubspace)> = stratum
                .par_iter()
                .flat_map_iter(|&x| {
                    group
                        .lower_interval(x)
                        .into_iter()
                        .filter(move |&y| !entries.contains_key(&(x, y)))
                        .map(move |y| step(group, lines, entries, x, y).map(|v| ((x, y), v)))
                })
                .collect::<Result<_>>()?;
            self.entries.extend(fresh);
        }
        Ok(())
    }

    /// Image of `V(x, y)` in `V / span{v_s : s in S_lambda}`, written in the
    /// coordinates `t not in S_lambda`.
    pub fn singular_v(
        &mut self,
        group: &WeylGroup,
        spec: &SingularSpec,
        x: ElemId,
        y: ElemId,
    ) -> Result<RationalSubspace> {
        let v = self.compute_v(group, x, y)?;
        Ok(quotient(&v, spec))
    }

    /// Rows for every comparable pair and every common ascent `s` of `x` and
    /// `y`.
    pub fn membership_report(&mut self, group: &WeylGroup) -> Result<Vec<MembershipRow>> {
        let sys = group.system();
        let w0 = group.element(group.longest());
        let left_w0_support: Vec<u64> = group
            .elements()
            .iter()
            .map(|g| {
                let id = group
                    .id_of(&sys.multiply(w0, g))
                    .expect("group is closed");
                group.support(id)
            })
            .collect();
        let mut rows = Vec::new();
        for (x, y) in group.comparable_pairs() {
            let v = self.compute_v(group, x, y)?;
            let joint = left_w0_support[x] | left_w0_support[y];
            for s in 0..group.rank() {
                if group.is_descent(x, s) || group.is_descent(y, s) {
                    continue;
                }
                let ys = group.mul_simple(y, s);
                rows.push(MembershipRow {
                    x,
                    y,
                    s,
                    member: v.contains(&self.lines[s])?,
                    x_geq_ys: group.bruhat_leq(ys, x),
                    rank2: (joint & !(1u64 << s)).count_ones() <= 1,
                });
            }
        }
        Ok(rows)
    }
}

/// Coordinate projection killing the `S_lambda` coordinates.
pub fn quotient(v: &RationalSubspace, spec: &SingularSpec) -> RationalSubspace {
    let keep: Vec<usize> = (0..v.ambient())
        .filter(|&t| spec.mask() >> t & 1 == 0)
        .collect();
    v.project(&keep)
}

/// The pair `V(x, y)` is built from, checking the lifting preconditions.
fn dependency(group: &WeylGroup, x: ElemId, y: ElemId) -> Result<(ElemId, ElemId)> {
    let s = group.chosen_descent(x).ok_or_else(|| {
        Error::LiftingViolation(format!("[{}] has no descent", group.word_string(x)))
    })?;
    let xs = group.mul_simple(x, s);
    let dep_y = if group.is_descent(y, s) {
        group.mul_simple(y, s)
    } else {
        y
    };
    if !group.bruhat_leq(dep_y, xs) {
        return Err(Error::LiftingViolation(format!(
            "[{}] !<= [{}] while stripping s{} from x = [{}], y = [{}]",
            group.word_string(dep_y),
            group.word_string(xs),
            s,
            group.word_string(x),
            group.word_string(y)
        )));
    }
    Ok((xs, dep_y))
}

fn step(
    group: &WeylGroup,
    lines: &[RationalVector],
    entries: &HashMap<(ElemId, ElemId), RationalSubspace>,
    x: ElemId,
    y: ElemId,
) -> Result<RationalSubspace> {
    if x == y {
        return Ok(RationalSubspace::zero(group.rank()));
    }
    let (xs, dep_y) = dependency(group, x, y)?;
    let s = group.chosen_descent(x).expect("checked by dependency");
    let prev = entries
        .get(&(xs, dep_y))
        .expect("dependency computed before use");
    let moved = act_matrix(group.system().generator_matrix(s), prev);
    if dep_y == y {
        moved.add_line(&lines[s])
    } else {
        Ok(moved)
    }
}
