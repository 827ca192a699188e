//! Command dispatch for the `fpf` binary.
//!
//! Every command is deterministic: re-running with the same configuration
//! produces byte-identical output. Wall-clock timings therefore go to stderr
//! as notes, and serialized reports carry a zeroed timing field.
//!
//! Exit codes: 0 success, 1 verification failure (a claimed property was
//! falsified), 2 usage error, 3 resource-cap error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use fpf_core::bruhat::interval;
use fpf_core::ds::compare_posets;
use fpf_core::el::{shelling_order, verify_el, ELReport};
use fpf_core::involution::enumerate_fpf;
use fpf_core::poset::{ball_certificate, mobius, q_double_factorial, rank_genfun, GradedPoset, Verdict};
use fpf_core::rises::{build_f_poset, classify_rises, Rise, RiseKind};
use fpf_core::{Caps, Direction, Error, FpfInvolution, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetChoice {
    F,
    Ds,
}

#[derive(Clone, Debug)]
pub enum Command {
    Enumerate,
    Hasse { poset: PosetChoice, labels: bool },
    Rises { element: Option<String> },
    VerifyEl,
    Shelling,
    CompareDs,
    Genfun,
    Mobius { lower: Option<String>, upper: Option<String> },
    Topology,
    Interval { lower: String, upper: String },
}

/// A fully resolved invocation. Flag parsing and environment-variable
/// precedence live in the binary; everything here is already decided.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub command: Command,
    /// `None` picks the command's natural format.
    pub format: Option<OutputFormat>,
    pub direction: Direction,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub caps: Caps,
}

/// What a command produced: the (deterministic) body for stdout or `--out`,
/// side notes for stderr, and whether a verified claim failed.
#[derive(Debug)]
pub struct CommandOutput {
    pub body: String,
    pub notes: Vec<String>,
    pub failed_verification: bool,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        CommandOutput {
            body,
            notes: Vec::new(),
            failed_verification: false,
        }
    }
}

/// Executes a command and writes the body to `--out` or stdout.
pub fn run(config: &RunConfig) -> i32 {
    if let Some(w) = config.workers {
        // best effort: the global pool can only be sized once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match execute(config) {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("{note}");
            }
            let written = match &config.out {
                Some(path) => std::fs::write(path, out.body.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout
                        .write_all(out.body.as_bytes())
                        .and_then(|_| stdout.flush())
                        .map_err(|e| format!("cannot write stdout: {e}"))
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return 2;
            }
            i32::from(out.failed_verification)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Exit-code classification of library errors.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::EnumerationLimit { .. }
        | Error::ChainCapExceeded { .. }
        | Error::RidgeCapExceeded { .. } => 3,
        Error::Parse(_)
        | Error::InvalidInvolution(_)
        | Error::MalformedBrackets(_)
        | Error::SizeMismatch { .. }
        | Error::NotComparable { .. }
        | Error::UnsuitableRise { .. }
        | Error::Degenerate(_) => 2,
        Error::SubposetViolation { .. }
        | Error::ShellingViolation { .. }
        | Error::ElNotVerified
        | Error::NonCoverStep { .. }
        | Error::UnlabeledEdge { .. }
        | Error::InvalidPoset(_)
        | Error::InvariantFailure(_) => 1,
    }
}

pub fn execute(config: &RunConfig) -> Result<CommandOutput> {
    if config.n == 0 {
        return Err(Error::Parse("--n must be at least 1".into()));
    }
    match &config.command {
        Command::Enumerate => enumerate_cmd(config),
        Command::Hasse { poset, labels } => hasse_cmd(config, *poset, *labels),
        Command::Rises { element } => rises_cmd(config, element.as_deref()),
        Command::VerifyEl => verify_el_cmd(config),
        Command::Shelling => shelling_cmd(config),
        Command::CompareDs => compare_ds_cmd(config),
        Command::Genfun => genfun_cmd(config),
        Command::Mobius { lower, upper } => {
            mobius_cmd(config, lower.as_deref(), upper.as_deref())
        }
        Command::Topology => topology_cmd(config),
        Command::Interval { lower, upper } => interval_cmd(config, lower, upper),
    }
}

fn format_or(config: &RunConfig, natural: OutputFormat, allowed: &[OutputFormat]) -> Result<OutputFormat> {
    let f = config.format.unwrap_or(natural);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::Parse(format!(
            "format {f:?} is not supported by this command"
        )))
    }
}

fn json_body<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

// ---- enumerate ------------------------------------------------------------

#[derive(Serialize)]
struct EnumerateRow {
    index: usize,
    involution: String,
    length: u64,
}

#[derive(Serialize)]
struct EnumerateDoc {
    n: usize,
    elements: Vec<EnumerateRow>,
}

fn enumerate_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(
        config,
        OutputFormat::Text,
        &[OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json],
    )?;
    let rows: Vec<EnumerateRow> = enumerate_fpf(config.n, config.caps.enumeration_cap)?
        .iter()
        .enumerate()
        .map(|(index, x)| EnumerateRow {
            index,
            involution: x.to_string(),
            length: x.length(),
        })
        .collect();
    let body = match format {
        OutputFormat::Json => json_body(&EnumerateDoc {
            n: config.n,
            elements: rows,
        }),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "involution", "length"]).expect("in-memory csv");
            for r in &rows {
                w.write_record([
                    r.index.to_string(),
                    r.involution.clone(),
                    r.length.to_string(),
                ])
                .expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
        }
        _ => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "{}\t{}", r.involution, r.length).expect("string write");
            }
            s
        }
    };
    Ok(CommandOutput::ok(body))
}

// ---- hasse and interval ---------------------------------------------------

/// DOT text for a graded poset: one `rank=same` group per rank (nodes in
/// enumeration order) and one edge line per cover (sorted by endpoint
/// indices). Byte-stable.
pub fn export_hasse(p: &GradedPoset, labeled: bool) -> String {
    let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); p.poset_length() as usize + 1];
    for i in 0..p.len() {
        by_rank[p.rank_of(i) as usize].push(i);
    }
    for group in &by_rank {
        s.push_str("  { rank=same;");
        for &i in group {
            write!(s, " \"{}\";", p.element(i)).expect("string write");
        }
        s.push_str(" }\n");
    }
    for from in 0..p.len() {
        for e in p.up_edges(from) {
            match e.label.filter(|_| labeled) {
                Some(l) => writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    p.element(from),
                    p.element(e.to),
                    l
                )
                .expect("string write"),
                None => writeln!(s, "  \"{}\" -> \"{}\";", p.element(from), p.element(e.to))
                    .expect("string write"),
            }
        }
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct PosetNode {
    index: usize,
    involution: String,
    rank: u32,
}

#[derive(Serialize)]
struct PosetEdge {
    from: usize,
    to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize)]
struct PosetDoc {
    n: usize,
    nodes: Vec<PosetNode>,
    edges: Vec<PosetEdge>,
}

fn poset_doc(n: usize, p: &GradedPoset, labeled: bool) -> PosetDoc {
    let nodes = (0..p.len())
        .map(|i| PosetNode {
            index: i,
            involution: p.element(i).to_string(),
            rank: p.rank_of(i),
        })
        .collect();
    let mut edges = Vec::with_capacity(p.edge_count());
    for from in 0..p.len() {
        for e in p.up_edges(from) {
            edges.push(PosetEdge {
                from,
                to: e.to,
                label: e.label.filter(|_| labeled).map(|l| l.to_string()),
            });
        }
    }
    PosetDoc { n, nodes, edges }
}

fn hasse_cmd(config: &RunConfig, poset: PosetChoice, labels: bool) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Dot, &[OutputFormat::Dot, OutputFormat::Json])?;
    let p = match poset {
        PosetChoice::F => build_f_poset(config.n, &config.caps)?,
        PosetChoice::Ds => fpf_core::ds::build_ds_poset(config.n, &config.caps)?,
    };
    let body = match format {
        OutputFormat::Json => json_body(&poset_doc(config.n, &p, labels)),
        _ => export_hasse(&p, labels),
    };
    Ok(CommandOutput::ok(body))
}

fn interval_cmd(config: &RunConfig, lower: &str, upper: &str) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Dot, &[OutputFormat::Dot, OutputFormat::Json])?;
    let x: FpfInvolution = lower.parse()?;
    let y: FpfInvolution = upper.parse()?;
    if x.half_size() != config.n || y.half_size() != config.n {
        return Err(Error::Parse(format!(
            "interval endpoints must live in F_{}",
            2 * config.n
        )));
    }
    let p = interval(&x, &y, &config.caps)?;
    let body = match format {
        OutputFormat::Json => json_body(&poset_doc(config.n, &p, true)),
        _ => export_hasse(&p, true),
    };
    Ok(CommandOutput::ok(body))
}

// ---- rises ----------------------------------------------------------------

fn kind_str(kind: RiseKind) -> &'static str {
    match kind {
        RiseKind::EeNoncrossing => "ee_noncrossing",
        RiseKind::EeCrossing => "ee_crossing",
        RiseKind::Ed => "ed",
        RiseKind::De => "de",
        RiseKind::Dd => "dd",
    }
}

#[derive(Serialize)]
struct RiseRow {
    element: String,
    i1: u32,
    i2: u32,
    kind: &'static str,
    free: bool,
    suitable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
}

fn rise_row(x: &FpfInvolution, r: &Rise) -> RiseRow {
    let target = r
        .is_suitable()
        .then(|| fpf_core::rises::apply_ct(x, r).expect("suitable rise").to_string());
    RiseRow {
        element: x.to_string(),
        i1: r.i1,
        i2: r.i2,
        kind: kind_str(r.kind),
        free: r.free,
        suitable: r.is_suitable(),
        target,
    }
}

fn rises_cmd(config: &RunConfig, element: Option<&str>) -> Result<CommandOutput> {
    let format = format_or(
        config,
        OutputFormat::Text,
        &[OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json],
    )?;
    let rows: Vec<RiseRow> = match element {
        Some(s) => {
            let x: FpfInvolution = s.parse()?;
            if x.half_size() != config.n {
                return Err(Error::Parse(format!(
                    "element {x} does not live in F_{}",
                    2 * config.n
                )));
            }
            classify_rises(&x).iter().map(|r| rise_row(&x, r)).collect()
        }
        None => enumerate_fpf(config.n, config.caps.enumeration_cap)?
            .iter()
            .flat_map(|x| {
                classify_rises(x)
                    .into_iter()
                    .filter(Rise::is_suitable)
                    .map(|r| rise_row(x, &r))
                    .collect::<Vec<_>>()
            })
            .collect(),
    };
    let body = match format {
        OutputFormat::Json => json_body(&rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["element", "i1", "i2", "kind", "free", "suitable", "target"])
                .expect("in-memory csv");
            for r in &rows {
                w.write_record([
                    r.element.clone(),
                    r.i1.to_string(),
                    r.i2.to_string(),
                    r.kind.to_string(),
                    r.free.to_string(),
                    r.suitable.to_string(),
                    r.target.clone().unwrap_or_default(),
                ])
                .expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
        }
        _ => {
            let mut s = String::new();
            for r in &rows {
                write!(s, "{}\t({},{})\t{}", r.element, r.i1, r.i2, r.kind).expect("string write");
                if let Some(t) = &r.target {
                    write!(s, "\t-> {t}").expect("string write");
                } else {
                    write!(s, "\tfree={}", r.free).expect("string write");
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(CommandOutput::ok(body))
}

// ---- verification commands -------------------------------------------------

fn run_verify(config: &RunConfig, direction: Direction) -> Result<(ELReport, String)> {
    let p = build_f_poset(config.n, &config.caps)?;
    let report = verify_el(&p, direction, config.caps.chain_cap)?;
    let note = format!(
        "verify-el: {} intervals, {} failures, {:.3}s",
        report.intervals_checked,
        report.failures.len(),
        report.timing
    );
    Ok((report, note))
}

fn verify_el_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let (mut report, note) = run_verify(config, config.direction)?;
    let failed = !report.verified();
    // timing is wall-clock noise; keep the serialized output reproducible
    report.timing = 0.0;
    let body = match format {
        OutputFormat::Text => {
            let mut s = format!(
                "n={} direction={:?} intervals={} max_length={}\n",
                report.n,
                report.direction,
                report.intervals_checked,
                report.max_interval_length
            );
            if report.failures.is_empty() {
                s.push_str("verified: every interval has a unique monotone chain, lexicographically first\n");
            } else {
                for f in &report.failures {
                    writeln!(
                        s,
                        "FAIL [{}, {}]: {} monotone chains, lex mismatch: {}",
                        f.lower, f.upper, f.increasing_chains, f.lex_first_mismatch
                    )
                    .expect("string write");
                }
            }
            s
        }
        _ => json_body(&report),
    };
    Ok(CommandOutput {
        body,
        notes: vec![note],
        failed_verification: failed,
    })
}

#[derive(Serialize)]
struct ShellingRow {
    index: usize,
    word: Vec<String>,
    chain: Vec<String>,
}

fn shelling_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let p = build_f_poset(config.n, &config.caps)?;
    let report = verify_el(&p, Direction::Reversed, config.caps.chain_cap)?;
    if !report.verified() {
        return Err(Error::ElNotVerified);
    }
    let facets = shelling_order(&p, &report, config.caps.chain_cap)?;
    let rows: Vec<ShellingRow> = facets
        .iter()
        .enumerate()
        .map(|(index, f)| ShellingRow {
            index,
            word: f.word.iter().map(|l| l.to_string()).collect(),
            chain: f.chain.iter().map(|&i| p.element(i).to_string()).collect(),
        })
        .collect();
    let note = format!("shelling: {} facets", rows.len());
    let body = match format {
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "{}\t{}\t{}", r.index, r.word.join(""), r.chain.join(" < "))
                    .expect("string write");
            }
            s
        }
        _ => json_body(&rows),
    };
    Ok(CommandOutput {
        body,
        notes: vec![note],
        failed_verification: false,
    })
}

fn compare_ds_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let report = compare_posets(config.n, &config.caps)?;
    let body = match format {
        OutputFormat::Text => {
            let mut s = format!(
                "n={} elements_equal={} rank_function_equal={} ds_edges={} f_edges={}\n",
                report.n,
                report.elements_equal,
                report.rank_function_equal,
                report.ds_edges,
                report.f_edges
            );
            for (a, b) in &report.edges_in_f_not_ds {
                writeln!(s, "in F not DS: {a} -> {b}").expect("string write");
            }
            s
        }
        _ => json_body(&report),
    };
    // a subposet violation surfaces as an error from compare_posets
    Ok(CommandOutput::ok(body))
}

// ---- genfun, mobius, topology ----------------------------------------------

#[derive(Serialize)]
struct GenfunDoc {
    n: usize,
    coefficients: Vec<u64>,
    q_double_factorial: Vec<u64>,
    matches: bool,
}

fn polynomial_text(coefficients: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coefficients.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let t = match k {
            0 => format!("{c}"),
            1 if c == 1 => "q".to_string(),
            1 => format!("{c}q"),
            _ if c == 1 => format!("q^{k}"),
            _ => format!("{c}q^{k}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

fn genfun_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let p = build_f_poset(config.n, &config.caps)?;
    let coefficients = rank_genfun(&p);
    let expected = q_double_factorial(config.n);
    let doc = GenfunDoc {
        n: config.n,
        matches: coefficients == expected,
        coefficients,
        q_double_factorial: expected,
    };
    let body = match format {
        OutputFormat::Text => format!(
            "{}\nq-double-factorial match: {}\n",
            polynomial_text(&doc.coefficients),
            doc.matches
        ),
        _ => json_body(&doc),
    };
    Ok(CommandOutput {
        body,
        notes: Vec::new(),
        failed_verification: !doc.matches,
    })
}

#[derive(Serialize)]
struct MobiusDoc {
    n: usize,
    lower: String,
    upper: String,
    mobius: i64,
}

fn mobius_cmd(config: &RunConfig, lower: Option<&str>, upper: Option<&str>) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let p = build_f_poset(config.n, &config.caps)?;
    let lower_idx = match lower {
        Some(s) => locate(&p, s, config.n)?,
        None => p.bottom(),
    };
    let upper_idx = match upper {
        Some(s) => locate(&p, s, config.n)?,
        None => p.top(),
    };
    let value = mobius(&p, lower_idx, upper_idx)?;
    let doc = MobiusDoc {
        n: config.n,
        lower: p.element(lower_idx).to_string(),
        upper: p.element(upper_idx).to_string(),
        mobius: value,
    };
    let body = match format {
        OutputFormat::Text => format!("mobius({}, {}) = {}\n", doc.lower, doc.upper, doc.mobius),
        _ => json_body(&doc),
    };
    Ok(CommandOutput::ok(body))
}

fn locate(p: &GradedPoset, s: &str, n: usize) -> Result<usize> {
    let x: FpfInvolution = s.parse()?;
    if x.half_size() != n {
        return Err(Error::Parse(format!("element {x} does not live in F_{}", 2 * n)));
    }
    p.index_of(&x)
        .ok_or_else(|| Error::Parse(format!("element {x} not found")))
}

fn topology_cmd(config: &RunConfig) -> Result<CommandOutput> {
    let format = format_or(config, OutputFormat::Json, &[OutputFormat::Json, OutputFormat::Text])?;
    let p = build_f_poset(config.n, &config.caps)?;
    let report = verify_el(&p, Direction::Reversed, config.caps.chain_cap)?;
    if !report.verified() {
        return Err(Error::ElNotVerified);
    }
    let cert = ball_certificate(&p, &report, config.caps.ridge_mem_cap)?;
    let note = format!(
        "topology: {} facets, EL verification {:.3}s",
        cert.facet_count, report.timing
    );
    let failed = !matches!(cert.verdict, Verdict::BallConsistent | Verdict::Degenerate);
    let body = match format {
        OutputFormat::Text => format!(
            "n={} dimension={} facets={} ridge_max={} boundary_ridge={} mobius={} verdict={:?}\n",
            cert.n,
            cert.complex_dimension,
            cert.facet_count,
            cert.ridge_max_multiplicity,
            cert.boundary_ridge_exists,
            cert.mobius_bottom_top,
            cert.verdict
        ),
        _ => json_body(&cert),
    };
    Ok(CommandOutput {
        body,
        notes: vec![note],
        failed_verification: failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_rendering() {
        assert_eq!(polynomial_text(&[1]), "1");
        assert_eq!(polynomial_text(&[1, 1, 1]), "1 + q + q^2");
        assert_eq!(
            polynomial_text(&[1, 2, 3, 3, 3, 2, 1]),
            "1 + 2q + 3q^2 + 3q^3 + 3q^4 + 2q^5 + q^6"
        );
    }

    #[test]
    fn usage_errors() {
        let config = RunConfig {
            n: 0,
            command: Command::Enumerate,
            format: None,
            direction: Direction::Reversed,
            workers: None,
            out: None,
            caps: Caps::default(),
        };
        let err = execute(&config).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);

        let config = RunConfig {
            n: 3,
            command: Command::Enumerate,
            format: Some(OutputFormat::Dot),
            direction: Direction::Reversed,
            workers: None,
            out: None,
            caps: Caps::default(),
        };
        let err = execute(&config).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);
    }

    #[test]
    fn cap_errors_are_exit_3() {
        let config = RunConfig {
            n: 9,
            command: Command::Enumerate,
            format: None,
            direction: Direction::Reversed,
            workers: None,
            out: None,
            caps: Caps::default(),
        };
        let err = execute(&config).unwrap_err();
        assert_eq!(exit_code_for(&err), 3);
    }
}
