//! The five subcommands. Each returns the text to print on stdout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::json;

use verma_ext_core::coxeter::{parse_word, CoxeterSystem, ElemId, WeylGroup};
use verma_ext_core::rpoly::{gj_coefficient, RTable};
use verma_ext_core::subspace::RationalSubspace;
use verma_ext_core::vtable::{SingularSpec, VTable};

use crate::cache::CacheDir;
use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::suites::{Verifier, VerifyReport};

pub fn build_group(config: &RunConfig) -> Result<WeylGroup, CliError> {
    config.validate()?;
    let sys = CoxeterSystem::build_with_budget(&config.type_descriptor, config.budget)?;
    Ok(WeylGroup::with_policy(sys, config.descent_policy)?)
}

fn element(group: &WeylGroup, word: &str) -> Result<ElemId, CliError> {
    Ok(group.element_from_word(&parse_word(word)?)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn basis_text(v: &RationalSubspace) -> String {
    let rows: Vec<String> = v
        .to_json()
        .basis
        .iter()
        .map(|r| format!("[{}]", r.join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn cmd_enumerate(config: &RunConfig) -> Result<String, CliError> {
    let sys = CoxeterSystem::build_with_budget(&config.type_descriptor, config.budget)?;
    config.validate()?;
    let elements = sys.enumerate()?;
    let words: Vec<String> = elements
        .iter()
        .map(|g| verma_ext_core::coxeter::format_word(&sys.reduced_word(g, Default::default())))
        .collect();
    let longest = elements.last().map_or(0, |g| g.length());
    let mut out = String::new();
    match config.output_format {
        OutputFormat::Json => {
            let list: Vec<_> = elements
                .iter()
                .zip(&words)
                .map(|(g, w)| json!({"length": g.length(), "word": w}))
                .collect();
            out = to_json(&json!({
                "system": sys.fingerprint(),
                "order": elements.len(),
                "longest_length": longest,
                "elements": list,
            }));
        }
        OutputFormat::Csv => {
            out.push_str("index;length;word\n");
            for (i, (g, w)) in elements.iter().zip(&words).enumerate() {
                writeln!(out, "{i};{};{w}", g.length()).unwrap();
            }
        }
        OutputFormat::Text => {
            writeln!(out, "{}: |W| = {}, l(w0) = {longest}", sys.descriptor(), elements.len()).unwrap();
            for (i, (g, w)) in elements.iter().zip(&words).enumerate() {
                let w = if w.is_empty() { "e" } else { w };
                writeln!(out, "{i:>6} {:>3}  {w}", g.length()).unwrap();
            }
        }
    }
    Ok(out)
}

pub fn cmd_rpoly(config: &RunConfig, x_word: &str, y_word: &str) -> Result<String, CliError> {
    let group = build_group(config)?;
    let (x, y) = (element(&group, x_word)?, element(&group, y_word)?);
    let cache = CacheDir::new(&config.cache_dir, &group);
    let mut table = cache.load_rtable(&group);
    let before = table.len();
    let gj = gj_coefficient(&mut table, &group, x, y)?;
    let p = table.r_polynomial(&group, y, x);
    if table.len() != before {
        cache.store_rtable(&group, &table)?;
    }
    Ok(match config.output_format {
        OutputFormat::Json => to_json(&json!({
            "system": group.system().fingerprint(),
            "x": group.word_string(x),
            "y": group.word_string(y),
            "r": p.coeffs(),
            "display": p.to_string(),
            "gj": gj,
        })),
        OutputFormat::Csv => format!(
            "y_word;x_word;coeffs;gj\n{};{};{};{gj}\n",
            group.word_string(y),
            group.word_string(x),
            p.format_coeffs()
        ),
        OutputFormat::Text => format!("{p}, gj={gj}\n"),
    })
}

pub fn cmd_vspace(config: &RunConfig, x_word: &str, y_word: &str) -> Result<String, CliError> {
    let group = build_group(config)?;
    let (x, y) = (element(&group, x_word)?, element(&group, y_word)?);
    let mut table = VTable::new(&group);
    let v = table.compute_v(&group, x, y)?;
    let singular: Vec<(Vec<usize>, RationalSubspace)> = match &config.singular_subsets {
        None => Vec::new(),
        Some(_) => config
            .singular_masks()
            .into_iter()
            .map(|m| {
                let spec = SingularSpec::from_mask(m);
                Ok((spec.indices(), table.singular_v(&group, &spec, x, y)?))
            })
            .collect::<Result<_, CliError>>()?,
    };
    Ok(match config.output_format {
        OutputFormat::Json => {
            let sing: Vec<_> = singular
                .iter()
                .map(|(s, q)| json!({"singular": s, "image": q.to_json()}))
                .collect();
            to_json(&json!({
                "system": group.system().fingerprint(),
                "x": group.word_string(x),
                "y": group.word_string(y),
                "v": v.to_json(),
                "singular": sing,
            }))
        }
        OutputFormat::Csv => {
            let mut out = String::from("singular;dim;basis\n");
            writeln!(out, ";{};{}", v.dim(), basis_text(&v)).unwrap();
            for (s, q) in &singular {
                let s: Vec<String> = s.iter().map(usize::to_string).collect();
                writeln!(out, "{};{};{}", s.join(","), q.dim(), basis_text(q)).unwrap();
            }
            out
        }
        OutputFormat::Text => {
            let mut out = format!("dim {} basis {}\n", v.dim(), basis_text(&v));
            for (s, q) in &singular {
                writeln!(out, "S_lambda={s:?}: dim {} basis {}", q.dim(), basis_text(q)).unwrap();
            }
            out
        }
    })
}

/// Runs every suite, reusing and refreshing the R-polynomial cache.
pub fn run_verify(config: &RunConfig) -> Result<(VerifyReport, u64), CliError> {
    let group = build_group(config)?;
    let cache = CacheDir::new(&config.cache_dir, &group);
    let loaded = cache.load_rtable(&group);
    let mut verifier = Verifier::new(&group, loaded, config.singular_masks())?;
    let computed = verifier.rtable().computed();
    let report = verifier.run_all()?;
    if computed > 0 {
        cache.store_rtable(&group, verifier.rtable())?;
    }
    Ok((report, computed))
}

pub fn render_report(report: &VerifyReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = String::from("suite;checked;failed;skipped;elapsed_ms\n");
            for s in &report.suites {
                writeln!(out, "{};{};{};{};{}", s.name, s.checked, s.failed, s.skipped, s.elapsed_ms).unwrap();
            }
            out
        }
        OutputFormat::Text => {
            let mut out = format!("system {}\n", report.system);
            for s in &report.suites {
                let status = if s.passed() { "pass" } else { "FAIL" };
                writeln!(
                    out,
                    "{} {status}: checked {}, failed {}, skipped {} ({} ms)",
                    s.name, s.checked, s.failed, s.skipped, s.elapsed_ms
                )
                .unwrap();
                for w in &s.witnesses {
                    writeln!(out, "  first failure {}: expected {}, got {}", w.subject, w.expected, w.got).unwrap();
                    if let Some(sub) = &w.subspace {
                        writeln!(out, "  basis {:?}", sub.basis).unwrap();
                    }
                }
            }
            writeln!(out, "total {} ms", report.elapsed_ms).unwrap();
            out
        }
    }
}

/// Result of `report`: paths written and how many polynomials were computed
/// rather than read from the cache.
#[derive(Debug, Clone, Serialize)]
pub struct ReportOutcome {
    pub system: String,
    pub files: Vec<String>,
    pub pairs: usize,
    pub rpoly_computed: u64,
}

#[derive(Serialize)]
struct Summary<'a> {
    system: &'a str,
    generated: u64,
    pairs: usize,
    max_dim: usize,
    mismatches: usize,
    dim_histogram: BTreeMap<usize, usize>,
    gj_histogram: BTreeMap<u64, usize>,
}

#[derive(Serialize)]
struct VEntry {
    x: String,
    y: String,
    v: verma_ext_core::subspace::SubspaceJson,
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Writes the dimension CSV, the subspace JSON, the summary and the
/// R-polynomial cache into the cache directory.
pub fn run_report(config: &RunConfig) -> Result<ReportOutcome, CliError> {
    let group = build_group(config)?;
    group.check_pair_budget()?;
    let cache = CacheDir::new(&config.cache_dir, &group);
    let fingerprint = group.system().fingerprint();
    let mut rtable: RTable = cache.load_rtable(&group);
    rtable.fill_all(&group)?;
    let computed = rtable.computed();
    let mut vtable = VTable::new(&group);
    vtable.fill_all(&group)?;

    let stamp = timestamp();
    let mut rows = Vec::new();
    let mut dim_hist = BTreeMap::new();
    let mut gj_hist = BTreeMap::new();
    let mut mismatches = 0;
    for (x, y) in group.comparable_pairs() {
        let dim = vtable.get(x, y).expect("filled").dim();
        let gj = gj_coefficient(&mut rtable, &group, x, y)?;
        *dim_hist.entry(dim).or_insert(0) += 1;
        *gj_hist.entry(gj).or_insert(0) += 1;
        mismatches += usize::from(dim as u64 != gj);
        rows.push((x, y, dim, gj));
    }

    let dims_path = cache.path("dims.csv");
    cache.write_with(&dims_path, |w| {
        let io = |source| CliError::Write {
            path: dims_path.display().to_string(),
            source,
        };
        writeln!(w, "# dims system={fingerprint}").map_err(io)?;
        writeln!(w, "# generated {stamp}").map_err(io)?;
        writeln!(w, "x_word;y_word;dimV;gj_coeff;match").map_err(io)?;
        for &(x, y, dim, gj) in &rows {
            writeln!(
                w,
                "{};{};{dim};{gj};{}",
                group.word_string(x),
                group.word_string(y),
                dim as u64 == gj
            )
            .map_err(io)?;
        }
        Ok(())
    })?;

    let vspace_path = cache.path("vspace.json");
    let entries: Vec<VEntry> = vtable
        .sorted_entries()
        .into_iter()
        .map(|((x, y), v)| VEntry {
            x: group.word_string(x),
            y: group.word_string(y),
            v: v.to_json(),
        })
        .collect();
    let vspace = to_json(&json!({"system": fingerprint, "entries": entries}));
    cache.write_with(&vspace_path, |w| {
        w.write_all(vspace.as_bytes()).map_err(|source| CliError::Write {
            path: vspace_path.display().to_string(),
            source,
        })
    })?;

    let summary_path = cache.path("summary.json");
    let summary = to_json(&Summary {
        system: &fingerprint,
        generated: stamp,
        pairs: rows.len(),
        max_dim: dim_hist.keys().copied().max().unwrap_or(0),
        mismatches,
        dim_histogram: dim_hist,
        gj_histogram: gj_hist,
    });
    cache.write_with(&summary_path, |w| {
        w.write_all(summary.as_bytes()).map_err(|source| CliError::Write {
            path: summary_path.display().to_string(),
            source,
        })
    })?;

    let rpoly_path = cache.store_rtable(&group, &rtable)?;
    Ok(ReportOutcome {
        system: fingerprint,
        files: [dims_path, vspace_path, summary_path, rpoly_path]
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
        pairs: rows.len(),
        rpoly_computed: computed,
    })
}

pub fn render_outcome(outcome: &ReportOutcome, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(outcome),
        OutputFormat::Csv => {
            let mut out = String::from("file\n");
            for f in &outcome.files {
                writeln!(out, "{f}").unwrap();
            }
            out
        }
        OutputFormat::Text => {
            let mut out = format!(
                "system {}: {} pairs, rpoly_computed={}\n",
                outcome.system, outcome.pairs, outcome.rpoly_computed
            );
            for f in &outcome.files {
                writeln!(out, "wrote {f}").unwrap();
            }
            out
        }
    }
}
