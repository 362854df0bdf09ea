//! A fully enumerated Weyl group with index-based tables.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::matrix::IntMatrix;
use super::system::{format_word, CoxeterSystem, DescentPolicy, GroupElement};
use crate::error::{Error, Result};

/// Index into [`WeylGroup::elements`].
pub type ElemId = usize;

/// Enumerated group. Element `0` is the identity and the last element is the
/// longest element; ids are ordered by `(length, matrix)`.
///
/// Bruhat order is memoized one row at a time: row `y` is the bitset of all
/// `x <= y`, derived from the row of `ys` by the lifting recursion. Rows live
/// in `OnceLock`s so concurrent readers may fill them.
pub struct WeylGroup {
    system: CoxeterSystem,
    elements: Vec<GroupElement>,
    index: HashMap<IntMatrix, ElemId>,
    right_mul: Vec<ElemId>,
    descents: Vec<u64>,
    policy: DescentPolicy,
    bruhat_rows: Vec<OnceLock<Vec<u64>>>,
}

impl WeylGroup {
    pub fn new(system: CoxeterSystem) -> Result<WeylGroup> {
        WeylGroup::with_policy(system, DescentPolicy::Smallest)
    }

    pub fn with_policy(system: CoxeterSystem, policy: DescentPolicy) -> Result<WeylGroup> {
        let elements = system.enumerate()?;
        let n = system.rank();
        let index: HashMap<IntMatrix, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(k, g)| (g.matrix().clone(), k))
            .collect();
        let mut right_mul = vec![0; elements.len() * n];
        let mut descents = vec![0u64; elements.len()];
        for (k, g) in elements.iter().enumerate() {
            descents[k] = system.right_descents(g);
            for i in 0..n {
                let h = system.right_multiply_simple(g, i);
                right_mul[k * n + i] = index[h.matrix()];
            }
        }
        let bruhat_rows = (0..elements.len()).map(|_| OnceLock::new()).collect();
        Ok(WeylGroup {
            system,
            elements,
            index,
            right_mul,
            descents,
            policy,
            bruhat_rows,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn policy(&self) -> DescentPolicy {
        self.policy
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, id: ElemId) -> &GroupElement {
        &self.elements[id]
    }

    pub fn id_of(&self, g: &GroupElement) -> Option<ElemId> {
        self.index.get(g.matrix()).copied()
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn longest(&self) -> ElemId {
        self.elements.len() - 1
    }

    #[inline]
    pub fn length(&self, x: ElemId) -> usize {
        self.elements[x].length()
    }

    /// `x * s_i`.
    #[inline]
    pub fn mul_simple(&self, x: ElemId, i: usize) -> ElemId {
        self.right_mul[x * self.rank() + i]
    }

    #[inline]
    pub fn right_descents(&self, x: ElemId) -> u64 {
        self.descents[x]
    }

    #[inline]
    pub fn is_descent(&self, x: ElemId, i: usize) -> bool {
        self.descents[x] >> i & 1 == 1
    }

    /// The descent the configured policy would strip from `x`.
    #[inline]
    pub fn chosen_descent(&self, x: ElemId) -> Option<usize> {
        self.policy.pick(self.descents[x])
    }

    pub fn element_from_word(&self, word: &[usize]) -> Result<ElemId> {
        let mut x = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
            x = self.mul_simple(x, i);
        }
        Ok(x)
    }

    /// Canonical reduced word (smallest-index policy), independent of the
    /// policy this group was built with.
    pub fn word(&self, x: ElemId) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length(x));
        let mut cur = x;
        while let Some(i) = DescentPolicy::Smallest.pick(self.descents[cur]) {
            word.push(i);
            cur = self.mul_simple(cur, i);
        }
        word.reverse();
        word
    }

    pub fn word_string(&self, x: ElemId) -> String {
        format_word(&self.word(x))
    }

    /// Set of letters appearing in any reduced word of `x`.
    pub fn support(&self, x: ElemId) -> u64 {
        self.word(x).iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Bruhat order, `x <= y`.
    pub fn bruhat_leq(&self, x: ElemId, y: ElemId) -> bool {
        let row = self.bruhat_row(y);
        row[x / 64] >> (x % 64) & 1 == 1
    }

    /// Bruhat order on elements that need not be indexed yet.
    pub fn bruhat_leq_elements(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        let xi = self.lookup(x)?;
        let yi = self.lookup(y)?;
        Ok(self.bruhat_leq(xi, yi))
    }

    fn lookup(&self, g: &GroupElement) -> Result<ElemId> {
        self.id_of(g)
            .ok_or_else(|| Error::Invariant("element does not belong to this group".into()))
    }

    /// Row of the Bruhat relation: bitset of all `x <= y`.
    ///
    /// If `y = e` only `e` qualifies. Otherwise with `ys < y`:
    /// `x <= y` iff `xs <= ys` when `xs < x`, and iff `x <= ys` when `xs > x`.
    fn bruhat_row(&self, y: ElemId) -> &[u64] {
        if let Some(row) = self.bruhat_rows[y].get() {
            return row;
        }
        let words = self.len().div_ceil(64);
        let row = match self.chosen_descent(y) {
            None => {
                let mut row = vec![0u64; words];
                row[0] = 1;
                row
            }
            Some(s) => {
                let below = self.bruhat_row(self.mul_simple(y, s));
                let mut row = vec![0u64; words];
                for x in 0..self.len() {
                    let probe = if self.is_descent(x, s) {
                        self.mul_simple(x, s)
                    } else {
                        x
                    };
                    if below[probe / 64] >> (probe % 64) & 1 == 1 {
                        row[x / 64] |= 1 << (x % 64);
                    }
                }
                row
            }
        };
        self.bruhat_rows[y].get_or_init(|| row)
    }

    /// All `x` with `x <= y`, in id order.
    pub fn lower_interval(&self, y: ElemId) -> Vec<ElemId> {
        (0..self.len()).filter(|&x| self.bruhat_leq(x, y)).collect()
    }

    /// All comparable pairs `(x, y)` with `y <= x`, ordered by `x` then `y`.
    pub fn comparable_pairs(&self) -> Vec<(ElemId, ElemId)> {
        (0..self.len())
            .flat_map(|x| self.lower_interval(x).into_iter().map(move |y| (x, y)))
            .collect()
    }

    /// Minimal length representatives of `W / W_J`: elements with no right
    /// descent in `J` (a bitmask).
    pub fn min_coset_reps(&self, j_mask: u64) -> Vec<ElemId> {
        (0..self.len())
            .filter(|&w| self.descents[w] & j_mask == 0)
            .collect()
    }

    /// Elements of the parabolic subgroup `W_J`.
    pub fn parabolic_subgroup(&self, j_mask: u64) -> Vec<ElemId> {
        (0..self.len())
            .filter(|&w| self.support(w) & !j_mask == 0)
            .collect()
    }

    /// Ids grouped by length; index `k` holds all elements of length `k`.
    pub fn strata(&self) -> Vec<Vec<ElemId>> {
        let top = self.length(self.longest());
        let mut out = vec![Vec::new(); top + 1];
        for x in 0..self.len() {
            out[self.length(x)].push(x);
        }
        out
    }

    /// Checks that `pairs` tabulation fits the pair budget.
    pub fn check_pair_budget(&self) -> Result<()> {
        let pairs = (self.len() as u128).pow(2);
        let budget = self.system.budget();
        if pairs > budget as u128 {
            return Err(Error::RankOverflow {
                what: "element pairs",
                size: pairs,
                budget,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::system::DEFAULT_ORACLE_BUDGET;

    fn group(d: &str, policy: DescentPolicy) -> WeylGroup {
        let sys = CoxeterSystem::build(&d.parse().unwrap()).unwrap();
        WeylGroup::with_policy(sys, policy).unwrap()
    }

    #[test]
    fn identity_and_longest() {
        let w = group("B3", DescentPolicy::Smallest);
        assert_eq!(w.len(), 48);
        assert_eq!(w.length(w.identity()), 0);
        assert_eq!(w.length(w.longest()), 9);
        assert_eq!(w.right_descents(w.longest()), 0b111);
        assert_eq!(w.elements().iter().filter(|g| g.length() == 9).count(), 1);
    }

    #[test]
    fn bruhat_base_cases() {
        let w = group("A3", DescentPolicy::Smallest);
        for y in 0..w.len() {
            assert!(w.bruhat_leq(w.identity(), y));
            assert!(w.bruhat_leq(y, y));
            assert!(w.bruhat_leq(y, w.longest()));
        }
        let b2 = group("B2", DescentPolicy::Smallest);
        let x = b2.element_from_word(&[0, 1, 0]).unwrap();
        let y = b2.element_from_word(&[1, 0, 1]).unwrap();
        assert!(!b2.bruhat_leq(x, y));
        assert!(!b2.bruhat_leq(y, x));
    }

    #[test]
    fn a2_has_nineteen_comparable_pairs() {
        // brute force via the subword oracle
        let w = group("A2", DescentPolicy::Smallest);
        let sys = w.system();
        let mut count = 0;
        for x in w.elements() {
            for y in w.elements() {
                if sys.bruhat_leq_oracle(y, x, DEFAULT_ORACLE_BUDGET).unwrap() {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 19);
        assert_eq!(w.comparable_pairs().len(), 19);
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for d in ["A3", "B2", "G2", "A1xA2"] {
            let w = group(d, DescentPolicy::Smallest);
            let sys = w.system();
            for y in 0..w.len() {
                let below = sys
                    .subword_products(w.element(y), DEFAULT_ORACLE_BUDGET)
                    .unwrap();
                for x in 0..w.len() {
                    assert_eq!(w.bruhat_leq(x, y), below.contains(w.element(x)), "{d}");
                }
            }
        }
    }

    #[test]
    fn bruhat_is_policy_independent() {
        let a = group("B3", DescentPolicy::Smallest);
        let b = group("B3", DescentPolicy::Largest);
        for x in 0..a.len() {
            for y in 0..a.len() {
                assert_eq!(a.bruhat_leq(x, y), b.bruhat_leq(x, y));
            }
        }
    }

    #[test]
    fn lifting_property() {
        for d in ["A3", "B3"] {
            let w = group(d, DescentPolicy::Smallest);
            for big in 0..w.len() {
                for v in 0..w.len() {
                    if v == big || !w.bruhat_leq(v, big) {
                        continue;
                    }
                    for s in 0..w.rank() {
                        if !w.is_descent(big, s) {
                            continue;
                        }
                        let vs = w.mul_simple(v, s);
                        let ws = w.mul_simple(big, s);
                        assert!(w.bruhat_leq(vs, big));
                        if w.is_descent(v, s) {
                            assert!(w.bruhat_leq(vs, ws));
                        } else {
                            assert!(w.bruhat_leq(v, ws));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coset_reps() {
        let w = group("A2", DescentPolicy::Smallest);
        assert_eq!(w.min_coset_reps(0).len(), 6);
        assert_eq!(w.min_coset_reps(0b11), vec![w.identity()]);
        let reps: Vec<String> = w
            .min_coset_reps(0b01)
            .into_iter()
            .map(|x| w.word_string(x))
            .collect();
        assert_eq!(reps, vec!["", "1", "0,1"]);

        let b3 = group("B3", DescentPolicy::Smallest);
        for mask in 0..8u64 {
            let reps = b3.min_coset_reps(mask).len();
            let sub = b3.parabolic_subgroup(mask).len();
            assert_eq!(reps * sub, 48);
        }
    }

    #[test]
    fn closed_under_multiplication_and_inverse() {
        let w = group("A1xA2", DescentPolicy::Smallest);
        let sys = w.system();
        for g in w.elements() {
            assert!(w.id_of(&sys.inverse(g)).is_some());
            for h in w.elements() {
                assert!(w.id_of(&sys.multiply(g, h)).is_some());
            }
        }
    }
}
