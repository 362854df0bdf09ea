//! Cartan data, group elements as integer matrices, and word-level operations.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use sha2::{Digest, Sha256};

use super::descriptor::TypeDescriptor;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Default budget: at most this many group elements are enumerated, and at
/// most this many element pairs are tabulated.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// Default cap on the number of subwords visited by the subword oracle
/// (`2^12`, i.e. `l(y) <= 12`).
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 12;

/// Which descent a recursion strips when several are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DescentPolicy {
    #[default]
    Smallest,
    Largest,
}

impl DescentPolicy {
    /// Picks an index from a non-empty descent bitmask.
    #[inline]
    pub fn pick(self, mask: u64) -> Option<usize> {
        if mask == 0 {
            return None;
        }
        Some(match self {
            DescentPolicy::Smallest => mask.trailing_zeros() as usize,
            DescentPolicy::Largest => 63 - mask.leading_zeros() as usize,
        })
    }
}

impl std::str::FromStr for DescentPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smallest" => Ok(DescentPolicy::Smallest),
            "largest" => Ok(DescentPolicy::Largest),
            other => Err(Error::Parse(format!("unknown descent policy {other:?}"))),
        }
    }
}

/// An element of W, stored as its action on simple-root coordinates.
///
/// Column `j` of the matrix holds the coordinates of `g(alpha_j)`.
#[derive(Clone)]
pub struct GroupElement {
    matrix: IntMatrix,
    length: usize,
}

impl GroupElement {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorted by length first, then by matrix entries.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.matrix.cmp(&other.matrix))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement(l={}, {:?})", self.length, self.matrix)
    }
}

/// A finite Weyl group together with its root datum.
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    descriptor: TypeDescriptor,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    coxeter_m: Vec<Vec<u32>>,
    positive_roots: Vec<Vec<i64>>,
    group_order: u64,
    budget: u64,
    generators: Vec<IntMatrix>,
}

impl CoxeterSystem {
    pub fn build(desc: &TypeDescriptor) -> Result<CoxeterSystem> {
        CoxeterSystem::build_with_budget(desc, DEFAULT_BUDGET)
    }

    pub fn build_with_budget(desc: &TypeDescriptor, budget: u64) -> Result<CoxeterSystem> {
        let order = desc.group_order();
        if order > budget as u128 {
            return Err(Error::RankOverflow {
                what: "group order",
                size: order,
                budget,
            });
        }
        let rank = desc.rank();
        if rank > 64 {
            return Err(Error::InvalidType(format!("rank {rank} exceeds 64")));
        }
        let cartan = desc.cartan();
        let coxeter_m = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        if i == j {
                            1
                        } else {
                            match cartan[i][j] * cartan[j][i] {
                                0 => 2,
                                1 => 3,
                                2 => 4,
                                _ => 6,
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        let generators = (0..rank)
            .map(|i| {
                // s_i(alpha_j) = alpha_j - a(i,j) alpha_i: column j is e_j - a(i,j) e_i
                let mut rows: Vec<Vec<i64>> = IntMatrix::identity(rank).rows();
                for j in 0..rank {
                    rows[i][j] -= cartan[i][j];
                }
                IntMatrix::from_rows(&rows)
            })
            .collect::<Vec<_>>();
        let positive_roots = close_roots(rank, &generators);
        Ok(CoxeterSystem {
            descriptor: desc.clone(),
            rank,
            cartan,
            coxeter_m,
            positive_roots,
            group_order: order as u64,
            budget,
            generators,
        })
    }

    pub fn descriptor(&self) -> &TypeDescriptor {
        &self.descriptor
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `a(i, j) = <alpha_j, alpha_i^vee>`.
    #[inline]
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn coxeter_m(&self) -> &[Vec<u32>] {
        &self.coxeter_m
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Mask with one bit per simple reflection.
    pub fn full_mask(&self) -> u64 {
        if self.rank == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank) - 1
        }
    }

    /// Descriptor plus a short hash of the Cartan matrix, e.g. `B3#1f0c...`.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for row in &self.cartan {
            for v in row {
                hasher.update(v.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("{}#{}", self.descriptor, hex)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            });
        }
        Ok(())
    }

    fn element(&self, matrix: IntMatrix) -> GroupElement {
        let length = self.count_inversions(&matrix);
        GroupElement { matrix, length }
    }

    fn count_inversions(&self, m: &IntMatrix) -> usize {
        self.positive_roots
            .iter()
            .filter(|beta| is_negative(&m.apply(beta)))
            .count()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            matrix: IntMatrix::identity(self.rank),
            length: 0,
        }
    }

    pub fn simple_reflection(&self, i: usize) -> Result<GroupElement> {
        self.check_index(i)?;
        Ok(GroupElement {
            matrix: self.generators[i].clone(),
            length: 1,
        })
    }

    pub fn generator_matrix(&self, i: usize) -> &IntMatrix {
        &self.generators[i]
    }

    /// The composite action `g ∘ h`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.element(g.matrix.mul(&h.matrix))
    }

    /// `g * s_i`, with the length updated from the descent test instead of a
    /// full recount.
    pub fn right_multiply_simple(&self, g: &GroupElement, i: usize) -> GroupElement {
        let down = self.is_right_descent(g, i);
        GroupElement {
            matrix: g.matrix.mul(&self.generators[i]),
            length: if down { g.length - 1 } else { g.length + 1 },
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let word = self.reduced_word(g, DescentPolicy::Smallest);
        let mut out = self.identity();
        for &i in word.iter().rev() {
            out = self.right_multiply_simple(&out, i);
        }
        out
    }

    pub fn length(&self, g: &GroupElement) -> usize {
        g.length
    }

    /// `s_i` is a right descent of `g` iff `g(alpha_i)` is a negative root.
    #[inline]
    pub fn is_right_descent(&self, g: &GroupElement, i: usize) -> bool {
        let n = self.rank;
        (0..n).any(|r| g.matrix.get(r, i) < 0)
    }

    /// Bitmask of right descents.
    pub fn right_descents(&self, g: &GroupElement) -> u64 {
        (0..self.rank)
            .filter(|&i| self.is_right_descent(g, i))
            .fold(0u64, |m, i| m | (1 << i))
    }

    /// Reduced word, read left to right, so that multiplying the simple
    /// reflections in order reproduces `g`.
    pub fn reduced_word(&self, g: &GroupElement, policy: DescentPolicy) -> Vec<usize> {
        let mut word = Vec::with_capacity(g.length);
        let mut cur = g.clone();
        while let Some(i) = policy.pick(self.right_descents(&cur)) {
            word.push(i);
            cur = self.right_multiply_simple(&cur, i);
        }
        debug_assert_eq!(cur.length, 0);
        word.reverse();
        word
    }

    pub fn from_word(&self, word: &[usize]) -> Result<GroupElement> {
        let mut g = self.identity();
        for &i in word {
            self.check_index(i)?;
            g = self.element(g.matrix.mul(&self.generators[i]));
        }
        Ok(g)
    }

    /// All elements of W, sorted by `(length, matrix)`.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        if self.group_order > self.budget {
            return Err(Error::RankOverflow {
                what: "group order",
                size: self.group_order as u128,
                budget: self.budget,
            });
        }
        let e = self.identity();
        let mut seen: HashSet<IntMatrix> = HashSet::new();
        seen.insert(e.matrix.clone());
        let mut out = vec![e.clone()];
        let mut queue = VecDeque::from([e]);
        while let Some(g) = queue.pop_front() {
            for i in 0..self.rank {
                let h = self.right_multiply_simple(&g, i);
                if seen.insert(h.matrix.clone()) {
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The unique element sending every positive root to a negative root.
    pub fn longest_element(&self) -> GroupElement {
        let mut g = self.identity();
        // climb along ascents until none remain
        while let Some(i) = (0..self.rank).find(|&i| !self.is_right_descent(&g, i)) {
            g = self.right_multiply_simple(&g, i);
        }
        g
    }

    /// Bruhat order by the subword criterion: `x <= y` iff some subword of a
    /// fixed reduced word for `y` multiplies to `x`. Exponential; meant as an
    /// oracle only.
    pub fn bruhat_leq_oracle(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        oracle_budget: u64,
    ) -> Result<bool> {
        if x.length > y.length {
            // still charge the budget so the contract is uniform
            self.check_oracle_budget(y, oracle_budget)?;
            return Ok(false);
        }
        Ok(self.subword_products(y, oracle_budget)?.contains(x))
    }

    fn check_oracle_budget(&self, y: &GroupElement, oracle_budget: u64) -> Result<()> {
        let needed = 1u128 << y.length.min(127);
        if needed > oracle_budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: oracle_budget,
            });
        }
        Ok(())
    }

    /// Every product of a subword of the smallest-policy reduced word of `y`,
    /// visiting all `2^l(y)` subwords.
    pub fn subword_products(
        &self,
        y: &GroupElement,
        oracle_budget: u64,
    ) -> Result<HashSet<GroupElement>> {
        self.check_oracle_budget(y, oracle_budget)?;
        let word = self.reduced_word(y, DescentPolicy::Smallest);
        let mut out = HashSet::new();
        let mut stack = vec![(0usize, IntMatrix::identity(self.rank))];
        while let Some((pos, prefix)) = stack.pop() {
            if pos == word.len() {
                out.insert(self.element(prefix));
                continue;
            }
            let taken = prefix.mul(&self.generators[word[pos]]);
            stack.push((pos + 1, prefix));
            stack.push((pos + 1, taken));
        }
        Ok(out)
    }
}

fn is_negative(v: &[i64]) -> bool {
    v.iter().any(|&c| c < 0)
}

/// Positive roots, by closing the simple roots under simple reflections.
fn close_roots(rank: usize, generators: &[IntMatrix]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..rank {
        let mut e = vec![0; rank];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(root) = queue.pop_front() {
        for g in generators {
            let image = g.apply(&root);
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    let mut positive: Vec<Vec<i64>> = seen.into_iter().filter(|r| !is_negative(r)).collect();
    positive.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    positive
}

/// Formats a word as comma-separated indices; the empty word is `""`.
pub fn format_word(word: &[usize]) -> String {
    word.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `"0,1,0"`; `""` and `"e"` denote the identity.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad letter {t:?} in word {s:?}")))
        })
        .collect()
}
