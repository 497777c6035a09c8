//! Command-line definitions and their execution.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use itertools::Itertools;
use lpres_core::abelian::abelian_invariants_truncated;
use lpres_core::cosets::{enumerate_finite, verify_table};
use lpres_core::{
    abelian_invariants, act_word, analyze_subgroup, best_strategy, classify_subgroup, closure,
    enumerate_cosets, iterating_endomorphisms, low_index_tables, present_with, CosetTable,
    EnumerationLimits, LPresentation, Permutation, Strategy,
};
use serde::Serialize;

use crate::error::CliError;
use crate::format::format_presentation;
use crate::json::*;
use crate::parse::{parse_presentation, PresentationFile, HEADER};

#[derive(Debug, Parser)]
#[command(name = "lpres", version, about = "Finite-index subgroups of L-presented groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,

    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Maximum number of cosets during enumeration
    #[arg(long, global = true)]
    pub max_cosets: Option<usize>,

    /// Comma-separated instantiation depths tried in turn
    #[arg(long, global = true, value_delimiter = ',')]
    pub depth_schedule: Option<Vec<usize>>,

    /// Reserved for randomized methods; currently unused
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    /// Presentation file
    pub file: PathBuf,

    /// Name of a subgroup declared in the file
    #[arg(long, short)]
    pub subgroup: String,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Enumerate a subgroup's cosets and classify it
    Analyze(SubgroupArgs),

    /// Compute an L-presentation of a subgroup
    Present {
        #[command(flatten)]
        target: SubgroupArgs,

        /// auto, classical, invariant-normal, leaf-invariant, weak-normal or general
        #[arg(long, default_value = "auto")]
        strategy: String,
    },

    /// Abelian invariants of the group or of a subgroup
    Abelian {
        /// Presentation file
        file: PathBuf,

        #[arg(long, short)]
        subgroup: Option<String>,

        /// Use instantiations at this depth and the next instead of the exact closure
        #[arg(long)]
        depth: Option<usize>,
    },

    /// Count subgroups of small index by type
    Lowindex {
        /// Presentation file
        file: PathBuf,

        /// Largest index searched
        #[arg(long)]
        max: usize,
    },

    /// Enumerate at one instantiation depth and check the table exactly
    Verify {
        #[command(flatten)]
        target: SubgroupArgs,

        #[arg(long)]
        depth: usize,
    },
}

/// Result of a command: rendered text, the JSON view and the exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: serde_json::Value,
    pub code: i32,
}

impl Output {
    fn new(text: String, view: impl Serialize) -> Self {
        Output {
            text,
            json: serde_json::to_value(view).expect("views serialize"),
            code: 0,
        }
    }
}

pub fn limits(cli: &Cli) -> Result<EnumerationLimits, CliError> {
    let mut limits = EnumerationLimits::default();
    if let Some(n) = cli.max_cosets {
        limits.max_cosets = n;
    }
    if let Some(s) = &cli.depth_schedule {
        limits.depth_schedule = s.clone();
    }
    limits.validate()?;
    Ok(limits)
}

pub fn read_file(path: &Path) -> Result<PresentationFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_presentation(&text)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".into()
    } else {
        items.join(", ")
    }
}

fn load(target: &SubgroupArgs, limits: &EnumerationLimits) -> Result<(PresentationFile, CosetTable), CliError> {
    let file = read_file(&target.file)?;
    let gens = file.subgroup(&target.subgroup)?.generators.clone();
    let table = enumerate_cosets(&file.presentation, &gens, limits)?;
    Ok((file, table))
}

/// Order and shape of the permutation group `G / N` of a normal subgroup.
pub fn quotient(table: &CosetTable, cap: usize) -> Result<QuotientJson, CliError> {
    let elements = closure(table.action(), cap)?;
    let order = elements.len();
    let gens = table.action().perms();
    let abelian = gens
        .iter()
        .tuple_combinations()
        .all(|(x, y)| x.then(y) == y.then(x));
    let cyclic = elements.iter().any(|p| p.order() == order);
    let powers = |r: &Permutation| -> Vec<Permutation> {
        std::iter::successors(Some(r.clone()), |p| Some(p.then(r)))
            .take(r.order())
            .collect()
    };
    let dihedral = order >= 6
        && order % 2 == 0
        && elements.iter().filter(|r| r.order() == order / 2).any(|r| {
            let rotations = powers(r);
            let r_inv = r.inverse();
            elements.iter().any(|s| {
                s.order() == 2 && !rotations.contains(s) && s.then(r).then(s) == r_inv
            })
        });
    Ok(QuotientJson {
        order,
        abelian,
        cyclic,
        dihedral,
    })
}

fn analyze(target: &SubgroupArgs, limits: &EnumerationLimits) -> Result<Output, CliError> {
    let (file, table) = load(target, limits)?;
    let lp = &file.presentation;
    let names = lp.alphabet().names();
    let analysis = analyze_subgroup(lp, &table, limits)?;
    let r = &analysis.report;
    let quotient = if r.normal {
        Some(quotient(&table, limits.closure_cap)?)
    } else {
        None
    };
    let mut lines = vec![
        format!("subgroup {}: index {}", target.subgroup, r.index),
        format!(
            "action: {}",
            names
                .iter()
                .zip(table.action().perms())
                .map(|(n, p)| format!("{n} -> {p}"))
                .join(", ")
        ),
        format!("normal: {}", yes(r.normal)),
        format!("maximal: {}", yes(r.maximal)),
    ];
    if let Some(q) = &quotient {
        let mut shape = vec![format!("order {}", q.order)];
        for (flag, word) in [(q.abelian, "abelian"), (q.cyclic, "cyclic"), (q.dihedral, "dihedral")] {
            if flag {
                shape.push(word.into());
            }
        }
        lines.push(format!("quotient: {}", shape.join(", ")));
    }
    lines.extend([
        format!("substitution-invariant: {}", yes(r.phi_invariant)),
        format!("V: {}", list(&r.v)),
        format!("V~: {}", list(&r.vtilde)),
        format!("leafs: {}", list(&r.phi_leafs)),
        format!("leaf-invariant: {}", yes(r.leaf_invariant)),
        format!("weakly leaf-invariant (V): {}", yes(r.weakly_leaf_invariant_v)),
        format!("weakly leaf-invariant (V~): {}", yes(r.weakly_leaf_invariant_vtilde)),
        format!("recommended strategy: {}", r.recommended),
    ]);
    let view = AnalyzeJson {
        subgroup: target.subgroup.clone(),
        table: TableJson::new(&table, names),
        report: r.into(),
        quotient,
    };
    Ok(Output::new(lines.join("\n"), view))
}

fn present(target: &SubgroupArgs, strategy: &str, limits: &EnumerationLimits) -> Result<Output, CliError> {
    let (file, table) = load(target, limits)?;
    let lp = &file.presentation;
    let p = match strategy {
        "auto" => best_strategy(lp, &table, limits)?,
        tag => present_with(tag.parse::<Strategy>()?, lp, &table, limits)?,
    };
    let names = lp.alphabet().names();
    let definitions: Vec<DefinitionJson> = p
        .generators
        .iter()
        .map(|(name, w)| DefinitionJson {
            name: name.clone(),
            word: w.display(names).to_string(),
        })
        .collect();
    let body = format_presentation(&p.presentation, &[]);
    let mut lines = vec![
        HEADER.to_string(),
        format!("# subgroup {} of index {}, strategy {}", target.subgroup, table.index(), p.strategy),
    ];
    lines.extend(definitions.iter().map(|d| format!("# {} = {}", d.name, d.word)));
    lines.extend(body.lines().skip(1).map(str::to_string));
    let view = PresentJson {
        subgroup: target.subgroup.clone(),
        strategy: p.strategy.tag().to_string(),
        presentation: PresentationJson::new(&p.presentation),
        definitions,
    };
    Ok(Output::new(lines.join("\n"), view))
}

fn abelian(
    path: &Path,
    subgroup: Option<&str>,
    depth: Option<usize>,
    limits: &EnumerationLimits,
) -> Result<Output, CliError> {
    let file = read_file(path)?;
    let lp: LPresentation = match subgroup {
        None => file.presentation.clone(),
        Some(name) => {
            let gens = &file.subgroup(name)?.generators;
            let table = enumerate_cosets(&file.presentation, gens, limits)?;
            best_strategy(&file.presentation, &table, limits)?.presentation
        }
    };
    let invariants = match depth {
        None => abelian_invariants(&lp)?,
        Some(d) => abelian_invariants_truncated(&lp, d)?,
    };
    let display = invariants.to_string();
    let text = match (subgroup, depth) {
        (None, None) => display.clone(),
        (Some(s), None) => format!("{s}: {display}"),
        (None, Some(d)) => format!("{display} (truncated at depth {d})"),
        (Some(s), Some(d)) => format!("{s}: {display} (truncated at depth {d})"),
    };
    let view = AbelianJson {
        subgroup: subgroup.map(str::to_string),
        invariants,
        display,
        heuristic: depth.is_some(),
        depth,
    };
    Ok(Output::new(text, view))
}

fn lowindex(path: &Path, max: usize, limits: &EnumerationLimits) -> Result<Output, CliError> {
    let file = read_file(path)?;
    let lp = &file.presentation;
    let tables = low_index_tables(lp, max, limits)?;
    let mut rows: Vec<LowIndexRow> = (1..=max)
        .map(|index| LowIndexRow {
            index,
            subgroups: 0,
            normal: 0,
            maximal: 0,
            leaf_invariant: 0,
            weakly_leaf_invariant: 0,
            normal_weakly_leaf_invariant: 0,
        })
        .collect();
    for t in &tables {
        let r = classify_subgroup(lp, t, limits)?;
        let row = &mut rows[t.index() - 1];
        let wli = r.weakly_leaf_invariant_vtilde;
        row.subgroups += 1;
        row.normal += r.normal as usize;
        row.maximal += r.maximal as usize;
        row.leaf_invariant += r.leaf_invariant as usize;
        row.weakly_leaf_invariant += wli as usize;
        row.normal_weakly_leaf_invariant += (r.normal && wli) as usize;
    }
    let mut lines = vec![format!(
        "{:>5} {:>9} {:>6} {:>7} {:>5} {:>6} {:>13}",
        "index", "subgroups", "normal", "maximal", "l.i.", "w.l.i.", "normal+w.l.i."
    )];
    lines.extend(rows.iter().map(|r| {
        format!(
            "{:>5} {:>9} {:>6} {:>7} {:>5} {:>6} {:>13}",
            r.index,
            r.subgroups,
            r.normal,
            r.maximal,
            r.leaf_invariant,
            r.weakly_leaf_invariant,
            r.normal_weakly_leaf_invariant
        )
    }));
    Ok(Output::new(lines.join("\n"), LowIndexJson { max_index: max, rows }))
}

fn verify(target: &SubgroupArgs, depth: usize, limits: &EnumerationLimits) -> Result<Output, CliError> {
    let file = read_file(&target.file)?;
    let lp = &file.presentation;
    let names = lp.alphabet().names();
    let gens = &file.subgroup(&target.subgroup)?.generators;
    let relators = lp.instantiate(depth).relators;
    let action = enumerate_finite(lp.rank(), &relators, gens, limits.max_cosets).ok_or_else(|| {
        lpres_core::Error::ResourceLimit(format!(
            "more than {} cosets at depth {depth}",
            limits.max_cosets
        ))
    })?;
    let mut violations = Vec::new();
    for q in lp.fixed() {
        if !act_word(&action, q)?.is_identity() {
            violations.push(q.display(names).to_string());
        }
    }
    let subs = lp.substitution_names();
    let tree = iterating_endomorphisms(&lp.endomorphisms(), &action)?;
    for node in tree.nodes() {
        for r in lp.iterated() {
            if !act_word(&node.action, r)?.is_identity() {
                violations.push(format!("{}({})", node.element.display(&subs), r.display(names)));
            }
        }
    }
    let verified = violations.is_empty();
    debug_assert_eq!(verified, verify_table(lp, &action)?);
    let mut text = format!(
        "subgroup {}: {} cosets at depth {depth} ({} relators)\n",
        target.subgroup,
        action.degree(),
        relators.len()
    );
    if verified {
        text.push_str("verified: every relator of the group acts trivially");
    } else {
        text.push_str("not verified; relators acting nontrivially:");
        for v in &violations {
            text.push_str(&format!("\n  {v}"));
        }
    }
    let view = VerifyJson {
        subgroup: target.subgroup.clone(),
        index: action.degree(),
        depth,
        relators_checked: relators.len(),
        violations,
        verified,
    };
    let mut out = Output::new(text, view);
    if !verified {
        out.code = 2;
    }
    Ok(out)
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let limits = limits(cli)?;
    match &cli.command {
        Commands::Analyze(target) => analyze(target, &limits),
        Commands::Present { target, strategy } => present(target, strategy, &limits),
        Commands::Abelian { file, subgroup, depth } => abelian(file, subgroup.as_deref(), *depth, &limits),
        Commands::Lowindex { file, max } => lowindex(file, *max, &limits),
        Commands::Verify { target, depth } => verify(target, *depth, &limits),
    }
}

/// Runs the command line `argv` (including the program name) and returns the
/// exit code with standard output and standard error.
pub fn run_command<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                (0, rendered, String::new())
            } else {
                (1, String::new(), rendered)
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json values print")
            } else {
                out.text
            };
            stdout.push('\n');
            (out.code, stdout, String::new())
        }
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
