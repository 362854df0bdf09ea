//! Verification suites run by `verify`.
//!
//! T: `dim V(x, y)` against the signed `q`-coefficient of `R_{y,x}`.
//! G: reflection representation. B: Bruhat order against the subword oracle.
//! R: R-polynomial invariants and the direct coefficient rules.
//! S: singular quotients. M: rank-2 membership criterion.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use verma_ext_core::coxeter::{ElemId, WeylGroup, DEFAULT_ORACLE_BUDGET};
use verma_ext_core::reflection::{act_vector, basis_vector, matrix_order, pairing, reflect};
use verma_ext_core::rpoly::{check_invariants, gj_coefficient, DirectCoefficients, RTable};
use verma_ext_core::subspace::{Rational, RationalSubspace, RationalVector, SubspaceJson};
use verma_ext_core::vtable::{SingularSpec, VTable};
use verma_ext_core::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subject: String,
    pub expected: String,
    pub got: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    /// Checks not run because they exceed the oracle budget.
    pub skipped: u64,
    pub witnesses: Vec<Witness>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub system: String,
    pub suites: Vec<SuiteReport>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn failing_suites(&self) -> Vec<&str> {
        self.suites
            .iter()
            .filter(|s| !s.passed())
            .map(|s| s.name.as_str())
            .collect()
    }
}

/// Counts checks and keeps the first failure.
struct Tally {
    name: &'static str,
    checked: u64,
    failed: u64,
    skipped: u64,
    witnesses: Vec<Witness>,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            checked: 0,
            failed: 0,
            skipped: 0,
            witnesses: Vec::new(),
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.is_empty() {
                self.witnesses.push(witness());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            checked: self.checked,
            failed: self.failed,
            skipped: self.skipped,
            witnesses: self.witnesses,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn pair_subject(group: &WeylGroup, x: ElemId, y: ElemId) -> String {
    format!("x=[{}] y=[{}]", group.word_string(x), group.word_string(y))
}

fn witness(subject: String, expected: impl ToString, got: impl ToString) -> Witness {
    Witness {
        subject,
        expected: expected.to_string(),
        got: got.to_string(),
        subspace: None,
    }
}

/// Everything the suites share. Building it fills both tables.
pub struct Verifier<'a> {
    group: &'a WeylGroup,
    vtable: VTable,
    rtable: RTable,
    masks: Vec<u64>,
    pub oracle_budget: u64,
}

impl<'a> Verifier<'a> {
    /// `rtable` may be pre-loaded from a cache; missing entries are filled.
    pub fn new(group: &'a WeylGroup, mut rtable: RTable, masks: Vec<u64>) -> Result<Verifier<'a>> {
        group.check_pair_budget()?;
        rtable.fill_all(group)?;
        let mut vtable = VTable::new(group);
        vtable.fill_all(group)?;
        Ok(Verifier {
            group,
            vtable,
            rtable,
            masks,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
        })
    }

    pub fn rtable(&self) -> &RTable {
        &self.rtable
    }

    pub fn into_rtable(self) -> RTable {
        self.rtable
    }

    pub fn vtable(&self) -> &VTable {
        &self.vtable
    }

    pub fn run_all(&mut self) -> Result<VerifyReport> {
        let start = Instant::now();
        let suites = vec![
            self.theorem()?,
            self.geometry()?,
            self.bruhat()?,
            self.rpoly()?,
            self.singular()?,
            self.membership()?,
        ];
        Ok(VerifyReport {
            system: self.group.system().fingerprint(),
            suites,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    fn v(&self, x: ElemId, y: ElemId) -> &RationalSubspace {
        self.vtable.get(x, y).expect("table is filled")
    }

    /// Suite T.
    pub fn theorem(&mut self) -> Result<SuiteReport> {
        let g = self.group;
        let mut t = Tally::new("T");
        for (x, y) in g.comparable_pairs() {
            let v = self.v(x, y).clone();
            let gj = gj_coefficient(&mut self.rtable, g, x, y);
            let ok = matches!(gj, Ok(c) if c == v.dim() as u64);
            t.check(ok, || Witness {
                subspace: Some(v.to_json()),
                ..witness(
                    pair_subject(g, x, y),
                    match &gj {
                        Ok(c) => format!("dim {c}"),
                        Err(e) => e.to_string(),
                    },
                    format!("dim {}", v.dim()),
                )
            });
        }
        Ok(t.finish())
    }

    /// Suite G.
    pub fn geometry(&self) -> Result<SuiteReport> {
        let g = self.group;
        let sys = g.system();
        let n = sys.rank();
        let mut t = Tally::new("G");
        let two = Rational::from_integer(2.into());
        let probes: Vec<RationalVector> = (0..n)
            .map(|i| basis_vector(sys, i))
            .chain(std::iter::once(Ok(RationalVector::from_ints(
                &(1..=n as i64).collect::<Vec<_>>(),
            ))))
            .collect::<Result<_>>()?;
        for s in 0..n {
            let gen = sys.simple_reflection(s)?;
            let vs = basis_vector(sys, s)?;
            t.check(sys.generator_matrix(s).mul(sys.generator_matrix(s)).is_identity(), || {
                witness(format!("s{s}^2"), "identity", "non-identity matrix")
            });
            let p = pairing(sys, s, &vs)?;
            t.check(p == two, || witness(format!("alpha_{s}(v_{s})"), 2, &p));
            let r = reflect(sys, s, &vs)?;
            t.check(r == -&vs, || witness(format!("s{s}(v_{s})"), "-v_s", format!("{r:?}")));
            for v in &probes {
                let once = reflect(sys, s, v)?;
                t.check(reflect(sys, s, &once)? == *v, || {
                    witness(format!("s{s} twice on {v:?}"), format!("{v:?}"), "different vector")
                });
                let by_matrix = act_vector(&gen, v);
                t.check(by_matrix == once, || {
                    witness(format!("s{s} on {v:?}"), format!("{once:?}"), format!("{by_matrix:?}"))
                });
            }
            for u in (0..n).filter(|&u| u != s) {
                let m = sys.coxeter_m()[s][u] as usize;
                let prod = sys.generator_matrix(s).mul(sys.generator_matrix(u));
                let order = matrix_order(&prod, 12);
                t.check(order == Some(m), || {
                    witness(format!("order of s{s} s{u}"), m, format!("{order:?}"))
                });
            }
        }
        let trivial = g.elements().iter().filter(|e| e.matrix().is_identity()).count();
        t.check(trivial == 1, || witness("elements acting trivially".into(), 1, trivial));
        Ok(t.finish())
    }

    /// Suite B. Rows `y` whose reduced word has more subwords than the oracle
    /// budget are skipped.
    pub fn bruhat(&self) -> Result<SuiteReport> {
        let g = self.group;
        let sys = g.system();
        let mut t = Tally::new("B");
        for y in 0..g.len() {
            if (1u128 << g.length(y).min(127)) > self.oracle_budget as u128 {
                t.skipped += g.len() as u64;
                continue;
            }
            let below = sys.subword_products(g.element(y), self.oracle_budget)?;
            for x in 0..g.len() {
                let fast = g.bruhat_leq(x, y);
                let oracle = below.contains(g.element(x));
                t.check(fast == oracle, || {
                    witness(format!("[{}] <= [{}]", g.word_string(x), g.word_string(y)), oracle, fast)
                });
            }
        }
        Ok(t.finish())
    }

    /// Suite R.
    pub fn rpoly(&mut self) -> Result<SuiteReport> {
        let g = self.group;
        let mut t = Tally::new("R");
        let mut direct = DirectCoefficients::new();
        for x in 0..g.len() {
            for y in 0..g.len() {
                let p = self.rtable.r_polynomial(g, y, x);
                if !g.bruhat_leq(y, x) {
                    t.check(p.is_zero(), || witness(pair_subject(g, x, y), 0, &p));
                    continue;
                }
                let inv = check_invariants(g, y, x, &p);
                t.check(inv.is_ok(), || {
                    witness(pair_subject(g, x, y), "R invariants", format!("{p}: {}", inv.clone().unwrap_err()))
                });
                let gj = gj_coefficient(&mut self.rtable, g, x, y).map_err(|e| e.to_string());
                let rc = direct.r_coeff_direct(g, x, y).map_err(|e| e.to_string());
                t.check(gj.is_ok() && gj == rc, || {
                    witness(pair_subject(g, x, y), format!("{gj:?}"), format!("{rc:?}"))
                });
            }
        }
        Ok(t.finish())
    }

    /// Suite S: `dim V_lambda(w0, e) = #(S \ S_lambda)` for each configured
    /// subset, and the image of `V(x, y)` depends only on the coset `y W_J`.
    pub fn singular(&self) -> Result<SuiteReport> {
        let g = self.group;
        let (w0, e) = (g.longest(), g.identity());
        let mut t = Tally::new("S");
        let pairs = g.comparable_pairs();
        for &mask in &self.masks {
            let spec = SingularSpec::from_mask(mask);
            let q = verma_ext_core::vtable::quotient(self.v(w0, e), &spec);
            let expected = g.rank() - spec.len();
            t.check(q.dim() == expected, || Witness {
                subspace: Some(q.to_json()),
                ..witness(format!("(w0, e) with S_lambda={:?}", spec.indices()), expected, q.dim())
            });
            if mask == 0 {
                continue;
            }
            let failures: Vec<(ElemId, ElemId, ElemId)> = pairs
                .par_iter()
                .filter_map(|&(x, z)| {
                    let y = min_rep(g, z, mask);
                    (y != z).then_some((x, z, y))
                })
                .filter(|&(x, z, y)| {
                    let a = verma_ext_core::vtable::quotient(self.v(x, z), &spec);
                    let b = verma_ext_core::vtable::quotient(self.v(x, y), &spec);
                    a != b
                })
                .collect();
            let candidates = pairs
                .iter()
                .filter(|&&(_, z)| g.right_descents(z) & mask != 0)
                .count() as u64;
            t.checked += candidates;
            t.failed += failures.len() as u64;
            if let (Some(&(x, z, y)), true) = (failures.first(), t.witnesses.is_empty()) {
                let got = verma_ext_core::vtable::quotient(self.v(x, z), &spec);
                t.witnesses.push(Witness {
                    subspace: Some(got.to_json()),
                    ..witness(
                        format!("{} S_lambda={:?}", pair_subject(g, x, z), spec.indices()),
                        format!("{:?}", verma_ext_core::vtable::quotient(self.v(x, y), &spec)),
                        format!("{got:?}"),
                    )
                });
            }
        }
        Ok(t.finish())
    }

    /// Suite M: `v_s in V(x, y)` iff `x >= ys` on rows flagged rank 2.
    pub fn membership(&mut self) -> Result<SuiteReport> {
        let g = self.group;
        let mut t = Tally::new("M");
        for row in self.vtable.membership_report(g)?.into_iter().filter(|r| r.rank2) {
            t.check(row.member == row.x_geq_ys, || {
                witness(
                    format!("{} s={}", pair_subject(g, row.x, row.y), row.s),
                    format!("member={}", row.x_geq_ys),
                    format!("member={}", row.member),
                )
            });
        }
        Ok(t.finish())
    }
}

/// Minimal representative of `z W_J`.
fn min_rep(g: &WeylGroup, mut z: ElemId, mask: u64) -> ElemId {
    while let Some(s) = (0..g.rank()).find(|&s| mask >> s & 1 == 1 && g.is_descent(z, s)) {
        z = g.mul_simple(z, s);
    }
    z
}
