//! Kazhdan–Lusztig `R`-polynomials and the coefficient of `q` in
//! `(-1)^(l(y) - l(x) - 1) R_{y,x}`, computed by two independent routes.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::coxeter::{parse_word, ElemId, WeylGroup};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub(crate) fn not_comparable(group: &WeylGroup, x: ElemId, y: ElemId) -> Error {
    Error::NotComparable {
        x: group.word_string(x),
        y: group.word_string(y),
    }
}

/// Memo table of `R_{y,x}` for comparable pairs `y <= x`.
#[derive(Debug, Clone)]
pub struct RTable {
    fingerprint: String,
    entries: HashMap<(ElemId, ElemId), IntPolynomial>,
    computed: u64,
}

const CACHE_HEADER: &str = "# rpoly-cache system=";

impl RTable {
    pub fn new(group: &WeylGroup) -> RTable {
        RTable {
            fingerprint: group.system().fingerprint(),
            entries: HashMap::new(),
            computed: 0,
        }
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of polynomials produced by the recursion (cache loads excluded).
    pub fn computed(&self) -> u64 {
        self.computed
    }

    pub fn get(&self, y: ElemId, x: ElemId) -> Option<&IntPolynomial> {
        self.entries.get(&(y, x))
    }

    /// `R_{y,x}`; zero unless `y <= x`.
    ///
    /// With `s` a right descent of `x`: `R_{y,x} = R_{ys,xs}` if `ys < y`, and
    /// `R_{y,x} = (q - 1) R_{y,xs} + q R_{ys,xs}` otherwise.
    pub fn r_polynomial(&mut self, group: &WeylGroup, y: ElemId, x: ElemId) -> IntPolynomial {
        if !group.bruhat_leq(y, x) {
            return IntPolynomial::zero();
        }
        if let Some(p) = self.entries.get(&(y, x)) {
            return p.clone();
        }
        let p = match group.chosen_descent(x) {
            None => IntPolynomial::one(),
            Some(s) => {
                let xs = group.mul_simple(x, s);
                let ys = group.mul_simple(y, s);
                if group.is_descent(y, s) {
                    self.r_polynomial(group, ys, xs)
                } else {
                    let a = self.r_polynomial(group, y, xs);
                    let b = self.r_polynomial(group, ys, xs);
                    combine(&a, &b)
                }
            }
        };
        self.computed += 1;
        self.entries.insert((y, x), p.clone());
        p
    }

    /// Fills every comparable pair, one length stratum of `x` at a time.
    /// Pairs within a stratum are independent and computed in parallel on the
    /// current rayon pool.
    pub fn fill_all(&mut self, group: &WeylGroup) -> Result<()> {
        group.check_pair_budget()?;
        for stratum in group.strata() {
            let entries = &self.entries;
            let fresh: Vec<((ElemId, ElemId), IntPolynomial)> = stratum
                .par_iter()
                .flat_map_iter(|&x| {
                    group
                        .lower_interval(x)
                        .into_iter()
                        .filter(move |&y| !entries.contains_key(&(y, x)))
                        .map(move |y| ((y, x), step(group, entries, y, x)))
                })
                .collect();
            self.computed += fresh.len() as u64;
            self.entries.extend(fresh);
        }
        Ok(())
    }

    /// Writes the cache file: a header line, then `y_word;x_word;c0,...,cd`
    /// rows ordered by `(x, y)` id.
    pub fn write_csv<W: Write>(&self, group: &WeylGroup, mut out: W) -> Result<()> {
        writeln!(out, "{CACHE_HEADER}{}", self.fingerprint)?;
        let mut keys: Vec<&(ElemId, ElemId)> = self.entries.keys().collect();
        keys.sort_by_key(|&&(y, x)| (x, y));
        for &(y, x) in keys {
            writeln!(
                out,
                "{};{};{}",
                group.word_string(y),
                group.word_string(x),
                self.entries[&(y, x)].format_coeffs()
            )?;
        }
        Ok(())
    }

    /// Loads a cache file, validating the fingerprint and, for every row,
    /// that `y <= x`, the degree is `l(x) - l(y)`, the constant term is
    /// `(-1)^(l(x) - l(y))` and the polynomial is monic.
    pub fn read_csv<R: BufRead>(group: &WeylGroup, input: R) -> Result<RTable> {
        let mut table = RTable::new(group);
        let mut lines = input.lines();
        let header = lines
            .next()
            .transpose()?
            .ok_or_else(|| Error::Parse("empty cache file".into()))?;
        let found = header
            .strip_prefix(CACHE_HEADER)
            .ok_or_else(|| Error::Parse(format!("bad cache header {header:?}")))?;
        if found != table.fingerprint {
            return Err(Error::FingerprintMismatch {
                expected: table.fingerprint.clone(),
                found: found.to_string(),
            });
        }
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(';').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected 3 fields", lineno + 2)));
            }
            let y = group.element_from_word(&parse_word(fields[0])?)?;
            let x = group.element_from_word(&parse_word(fields[1])?)?;
            let p = IntPolynomial::parse_coeffs(fields[2])?;
            check_invariants(group, y, x, &p)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))?;
            table.entries.insert((y, x), p);
        }
        Ok(table)
    }
}

fn combine(r_y_xs: &IntPolynomial, r_ys_xs: &IntPolynomial) -> IntPolynomial {
    let q_minus_one = IntPolynomial::new(vec![-1, 1]);
    &(&q_minus_one * r_y_xs) + &r_ys_xs.shift()
}

/// One recursion step whose dependencies are already in `entries`.
fn step(
    group: &WeylGroup,
    entries: &HashMap<(ElemId, ElemId), IntPolynomial>,
    y: ElemId,
    x: ElemId,
) -> IntPolynomial {
    let lookup = |y: ElemId, x: ElemId| -> IntPolynomial {
        if group.bruhat_leq(y, x) {
            entries
                .get(&(y, x))
                .cloned()
                .expect("lower stratum must be complete")
        } else {
            IntPolynomial::zero()
        }
    };
    match group.chosen_descent(x) {
        None => IntPolynomial::one(),
        Some(s) => {
            let xs = group.mul_simple(x, s);
            let ys = group.mul_simple(y, s);
            if group.is_descent(y, s) {
                lookup(ys, xs)
            } else {
                combine(&lookup(y, xs), &lookup(ys, xs))
            }
        }
    }
}

/// Structural facts every `R_{y,x}` with `y <= x` satisfies.
pub fn check_invariants(
    group: &WeylGroup,
    y: ElemId,
    x: ElemId,
    p: &IntPolynomial,
) -> std::result::Result<(), String> {
    if !group.bruhat_leq(y, x) {
        return Err("pair is not Bruhat comparable".into());
    }
    let d = group.length(x) - group.length(y);
    if p.degree() != Some(d) {
        return Err(format!("degree {:?}, expected {d}", p.degree()));
    }
    let constant = if d.is_multiple_of(2) { 1 } else { -1 };
    if p.coeff(0) != constant {
        return Err(format!("constant term {}, expected {constant}", p.coeff(0)));
    }
    if p.leading() != 1 {
        return Err(format!("leading coefficient {}", p.leading()));
    }
    if d > 0 && p.eval(1) != 0 {
        return Err(format!("R(1) = {}", p.eval(1)));
    }
    Ok(())
}

/// Coefficient of `q` in `(-1)^(l(y) - l(x) - 1) R_{y,x}(q)` for `y <= x`.
///
/// The sign is taken from the parity of `l(x) - l(y) + 1`. A negative value
/// is reported as an invariant violation.
pub fn gj_coefficient(
    table: &mut RTable,
    group: &WeylGroup,
    x: ElemId,
    y: ElemId,
) -> Result<u64> {
    if !group.bruhat_leq(y, x) {
        return Err(not_comparable(group, x, y));
    }
    let p = table.r_polynomial(group, y, x);
    signed_q_coefficient(group, x, y, &p)
}

pub(crate) fn signed_q_coefficient(
    group: &WeylGroup,
    x: ElemId,
    y: ElemId,
    p: &IntPolynomial,
) -> Result<u64> {
    let parity = (group.length(x) - group.length(y) + 1) % 2;
    let c = if parity == 0 { p.coeff(1) } else { -p.coeff(1) };
    u64::try_from(c).map_err(|_| {
        Error::Invariant(format!(
            "negative q-coefficient {c} for x = [{}], y = [{}]",
            group.word_string(x),
            group.word_string(y)
        ))
    })
}

/// The same coefficient, computed from three rules on a right descent `s` of
/// `x` (write `x' = xs < x`), without ever building a polynomial:
///
/// * `ys < y`: `r(x, y) = r(x', ys)`;
/// * `ys > y` and `x' >= ys`: `r(x, y) = r(x', y)`;
/// * `ys > y` and `x' !>= ys`: `r(x, y) = r(x', y) + 1`;
///
/// with `r(x, x) = 0`.
#[derive(Debug, Clone, Default)]
pub struct DirectCoefficients {
    entries: HashMap<(ElemId, ElemId), u64>,
}

impl DirectCoefficients {
    pub fn new() -> DirectCoefficients {
        DirectCoefficients::default()
    }

    pub fn r_coeff_direct(&mut self, group: &WeylGroup, x: ElemId, y: ElemId) -> Result<u64> {
        if !group.bruhat_leq(y, x) {
            return Err(not_comparable(group, x, y));
        }
        Ok(self.coeff(group, x, y))
    }

    fn coeff(&mut self, group: &WeylGroup, x: ElemId, y: ElemId) -> u64 {
        if x == y {
            return 0;
        }
        if let Some(&c) = self.entries.get(&(x, y)) {
            return c;
        }
        let s = group
            .chosen_descent(x)
            .expect("x > y forces a descent");
        let xs = group.mul_simple(x, s);
        let ys = group.mul_simple(y, s);
        let c = if group.is_descent(y, s) {
            self.coeff(group, xs, ys)
        } else {
            let bump = u64::from(!group.bruhat_leq(ys, xs));
            self.coeff(group, xs, y) + bump
        };
        self.entries.insert((x, y), c);
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, DescentPolicy};

    fn group(d: &str) -> WeylGroup {
        WeylGroup::new(CoxeterSystem::build(&d.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn base_case_is_one() {
        let w = group("A2");
        let mut t = RTable::new(&w);
        for x in 0..w.len() {
            assert_eq!(t.r_polynomial(&w, x, x), IntPolynomial::one());
            assert_eq!(gj_coefficient(&mut t, &w, x, x).unwrap(), 0);
        }
    }

    #[test]
    fn a1_single_step() {
        let w = group("A1");
        let mut t = RTable::new(&w);
        let (e, s) = (w.identity(), w.longest());
        assert_eq!(t.r_polynomial(&w, e, s), IntPolynomial::new(vec![-1, 1]));
        assert_eq!(gj_coefficient(&mut t, &w, s, e).unwrap(), 1);
        assert_eq!(DirectCoefficients::new().r_coeff_direct(&w, s, e).unwrap(), 1);
    }

    #[test]
    fn a2_longest() {
        // hand unrolled: R_{e,w0} = (q-1)^3 + q(q-1)
        let w = group("A2");
        let mut t = RTable::new(&w);
        let p = t.r_polynomial(&w, w.identity(), w.longest());
        assert_eq!(p, IntPolynomial::new(vec![-1, 2, -2, 1]));
        assert_eq!(p.to_string(), "q^3-2q^2+2q-1");
        assert_eq!(gj_coefficient(&mut t, &w, w.longest(), w.identity()).unwrap(), 2);
    }

    #[test]
    fn incomparable_is_zero_and_rejected() {
        let w = group("A2");
        let mut t = RTable::new(&w);
        let a = w.element_from_word(&[0]).unwrap();
        let b = w.element_from_word(&[1]).unwrap();
        assert!(t.r_polynomial(&w, a, b).is_zero());
        assert!(matches!(
            gj_coefficient(&mut t, &w, b, a),
            Err(Error::NotComparable { .. })
        ));
        assert!(matches!(
            DirectCoefficients::new().r_coeff_direct(&w, w.identity(), w.longest()),
            Err(Error::NotComparable { .. })
        ));
    }

    #[test]
    fn routes_agree_on_b2() {
        let w = group("B2");
        let mut t = RTable::new(&w);
        let mut d = DirectCoefficients::new();
        for (x, y) in w.comparable_pairs() {
            assert_eq!(
                gj_coefficient(&mut t, &w, x, y).unwrap(),
                d.r_coeff_direct(&w, x, y).unwrap()
            );
        }
    }

    #[test]
    fn fill_all_matches_lazy_recursion() {
        let w = group("B3");
        let mut lazy = RTable::new(&w);
        let mut filled = RTable::new(&w);
        filled.fill_all(&w).unwrap();
        assert_eq!(filled.len(), w.comparable_pairs().len());
        for (x, y) in w.comparable_pairs() {
            assert_eq!(filled.get(y, x).unwrap(), &lazy.r_polynomial(&w, y, x));
        }
    }

    #[test]
    fn policy_does_not_change_polynomials() {
        let sys = CoxeterSystem::build(&"A3".parse().unwrap()).unwrap();
        let a = WeylGroup::with_policy(sys.clone(), DescentPolicy::Smallest).unwrap();
        let b = WeylGroup::with_policy(sys, DescentPolicy::Largest).unwrap();
        let (mut ta, mut tb) = (RTable::new(&a), RTable::new(&b));
        ta.fill_all(&a).unwrap();
        tb.fill_all(&b).unwrap();
        for (x, y) in a.comparable_pairs() {
            assert_eq!(ta.get(y, x), tb.get(y, x));
        }
    }

    #[test]
    fn csv_roundtrip_and_validation() {
        let w = group("A2");
        let mut t = RTable::new(&w);
        t.fill_all(&w).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains(";0,1,0;-1,2,-2,1\n"));
        assert_eq!(text.lines().count(), 1 + 19);

        let back = RTable::read_csv(&w, buf.as_slice()).unwrap();
        assert_eq!(back.len(), 19);
        assert_eq!(back.computed(), 0);

        let corrupt = text.replace(";0,1,0;-1,2,-2,1", ";0,1,0;1,2,-2,1");
        assert!(RTable::read_csv(&w, corrupt.as_bytes()).is_err());

        let other = group("B2");
        assert!(matches!(
            RTable::read_csv(&other, buf.as_slice()),
            Err(Error::FingerprintMismatch { .. })
        ));
    }
}
