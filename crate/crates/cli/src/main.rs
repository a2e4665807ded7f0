use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperprover::backward::{decide_backward, BackwardConfig};
use hyperprover::calculus::{builtin_rule, parse_rules_dsl};
use hyperprover::checker::check_derivation;
use hyperprover::derivation::{DerivationTree, Verdict};
use hyperprover::formula::classify_hierarchy;
use hyperprover::forward::{decide_forward, ForwardConfig, SaturationState};
use hyperprover::hyperseq::encode_sharp;
use hyperprover::semantics::{eval_chain, ChainKind, ChainVerdict, ExactChain};
use hyperprover::wqo::ControlledSequence;
use hyperprover::{builtin_calculus, parse_formula, parse_hypersequent, Calculus, Hypersequent, OmegaSet};

const DERIVABLE: u8 = 0;
const NOT_DERIVABLE: u8 = 1;
const INDETERMINATE: u8 = 2;
const USAGE: u8 = 3;

/// Decision procedures for structural extensions of hypersequent
/// substructural calculi.
#[derive(Parser)]
#[command(name = "hyperprover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula or hypersequent.
    Prove(ProveArgs),
    /// Check a derivation file (indented text or JSON).
    Check {
        #[command(flatten)]
        calc: CalcArgs,
        file: PathBuf,
    },
    /// Saturate the subformulas of the given formulas and print the final set.
    Saturate(SaturateArgs),
    /// List the rules of a calculus.
    Rules {
        #[command(flatten)]
        calc: CalcArgs,
        /// Also report where this formula sits in the substructural hierarchy.
        #[arg(long)]
        classify: Option<String>,
    },
    /// Print the vector encoding of a hypersequent over the subformulas of
    /// its formulas and of `--with`.
    Encode {
        hypersequent: String,
        #[arg(long = "with", value_name = "FORMULA")]
        with: Vec<String>,
    },
    /// Evaluate a formula on a finite chain.
    Oracle {
        formula: String,
        #[arg(long, value_enum, default_value_t = Chain::Lukasiewicz)]
        chain: Chain,
        /// Number of chain elements.
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
}

#[derive(Args)]
struct CalcArgs {
    /// Preset: hfle, hflelw, hflew, hflec or mtl, optionally with `+rule`.
    #[arg(long, default_value = "hfle")]
    logic: String,
    /// Extra rule: com, wem, mingle, lw, c, rw, bwk:k, bck:k or knot:n,m.
    #[arg(long = "rule", value_name = "RULE")]
    rules: Vec<String>,
    /// Rule DSL file with extra rules.
    #[arg(long = "rules-file", value_name = "FILE")]
    rules_files: Vec<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Wall-clock limit in seconds.
    #[arg(long, env = "HYPERPROVER_TIMEOUT_SECS")]
    timeout: Option<f64>,
    /// Write statistics as JSON lines to this file (`-` for stdout).
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
    /// Write the recorded controlled sequence as JSON lines to this file.
    #[arg(long = "record-bad-sequence", value_name = "FILE")]
    record_bad_sequence: Option<PathBuf>,
}

#[derive(Args)]
struct ProveArgs {
    #[command(flatten)]
    calc: CalcArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value_t = Engine::Auto)]
    engine: Engine,
    /// Write the derivation here; `.json` selects JSON, anything else text.
    #[arg(long = "proof-out", value_name = "FILE")]
    proof_out: Option<PathBuf>,
    /// A formula `F` (read as `=> F`) or a hypersequent.
    input: String,
}

#[derive(Args)]
struct SaturateArgs {
    #[command(flatten)]
    calc: CalcArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(required = true)]
    formulas: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Forward,
    Backward,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Chain {
    Lukasiewicz,
    Godel,
}

impl CalcArgs {
    fn build(&self) -> Result<Calculus> {
        let mut calc = builtin_calculus(&self.logic)?;
        for r in &self.rules {
            let rule = builtin_rule(r)?;
            calc = calc.with_rule(rule)?;
        }
        for path in &self.rules_files {
            let text = read(path)?;
            let rules = parse_rules_dsl(&text).with_context(|| path.display().to_string())?;
            calc = calc.extend(rules)?;
        }
        Ok(calc)
    }
}

impl RunArgs {
    fn deadline(&self) -> Result<Option<Instant>> {
        match self.timeout {
            None => Ok(None),
            Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Instant::now() + Duration::from_secs_f64(s))),
            Some(s) => bail!("invalid timeout {s}"),
        }
    }

    fn write_stats(&self, lines: &[String]) -> Result<()> {
        if let Some(path) = &self.stats {
            let mut text = lines.join("\n");
            text.push('\n');
            write_out(path, &text)?;
        }
        Ok(())
    }

    fn write_sequence(&self, seq: Option<&ControlledSequence>) -> Result<()> {
        if let (Some(path), Some(seq)) = (&self.record_bad_sequence, seq) {
            let mut buf = Vec::new();
            seq.write_jsonl(&mut buf)?;
            write_out(path, &String::from_utf8(buf)?)?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())?;
        return Ok(());
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn parse_input(text: &str) -> Result<Hypersequent> {
    let parsed = if text.contains("=>") {
        parse_hypersequent(text)
    } else {
        parse_formula(text).map(|f| parse_hypersequent(&format!("=> {f}")).expect("printed formula parses"))
    };
    parsed.map_err(|e| anyhow!("cannot parse `{text}`: {e}"))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Derivable => DERIVABLE,
        Verdict::NotDerivable => NOT_DERIVABLE,
        Verdict::Indeterminate => INDETERMINATE,
    }
}

fn forward_stats(st: &SaturationState) -> Vec<String> {
    st.stats()
        .iter()
        .map(|r| serde_json::to_string(r).expect("stats serialize"))
        .collect()
}

fn prove(args: &ProveArgs) -> Result<u8> {
    let calc = args.calc.build()?;
    let goal = parse_input(&args.input)?;
    let deadline = args.run.deadline()?;
    let forward = match args.engine {
        Engine::Forward => true,
        Engine::Backward => false,
        Engine::Auto => match (calc.has_lw(), calc.has_c()) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => bail!("the calculus has both (lw) and (c); choose --engine"),
            (false, false) => bail!("the calculus has neither (lw) nor (c); no engine applies"),
        },
    };
    let (verdict, derivation, stats, sequence) = if forward {
        let cfg = ForwardConfig {
            deadline,
            ..Default::default()
        };
        let out = decide_forward(&goal, &calc, &cfg)?;
        let stats = forward_stats(&out.state);
        let seq = out.state.bad_sequence().clone();
        (out.verdict, out.derivation, stats, Some(seq))
    } else {
        let cfg = BackwardConfig {
            deadline,
            ..Default::default()
        };
        let out = decide_backward(&goal, &calc, &cfg)?;
        let stats = vec![serde_json::to_string(&out.stats).expect("stats serialize")];
        let seq = out.paths.first().map(|p| p.sequence.clone());
        (out.verdict, out.derivation, stats, seq)
    };
    let mut report = format!("{verdict}\n");
    if let Some(d) = &derivation {
        report.push_str(&d.to_text());
        report.push('\n');
        if let Some(path) = &args.proof_out {
            let text = if path.extension().is_some_and(|e| e == "json") {
                d.to_json()
            } else {
                d.to_text()
            };
            write_out(path, &format!("{}\n", text.trim_end()))?;
        }
    }
    print!("{report}");
    args.run.write_stats(&stats)?;
    args.run.write_sequence(sequence.as_ref())?;
    Ok(verdict_code(verdict))
}

fn check(calc: &CalcArgs, file: &Path) -> Result<u8> {
    let calc = calc.build()?;
    let text = read(file)?;
    let tree = DerivationTree::parse(&text).with_context(|| file.display().to_string())?;
    match check_derivation(&tree, &calc) {
        Ok(()) => {
            println!("ACCEPT {} nodes", tree.num_nodes());
            Ok(DERIVABLE)
        }
        Err(r) => {
            println!("REJECT {r}");
            Ok(NOT_DERIVABLE)
        }
    }
}

fn saturate(args: &SaturateArgs) -> Result<u8> {
    let calc = args.calc.build()?;
    let fs = args
        .formulas
        .iter()
        .map(|f| parse_formula(f).map_err(|e| anyhow!("cannot parse `{f}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let omega = OmegaSet::closure_of(fs.iter());
    let mut st = SaturationState::new(omega, calc)?;
    let cfg = ForwardConfig {
        deadline: args.run.deadline()?,
        early_exit: false,
        ..Default::default()
    };
    let mut finished = true;
    loop {
        match st.step(&cfg) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => {
                finished = false;
                break;
            }
        }
    }
    let last = st.last_round();
    let mut out = format!("omega {}\nrounds {last}\n", st.omega());
    for h in st.set_hypersequents(last) {
        out.push_str(&format!("{h}\n"));
    }
    if !finished {
        out.push_str("INDETERMINATE\n");
    }
    print!("{out}");
    args.run.write_stats(&forward_stats(&st))?;
    args.run.write_sequence(Some(st.bad_sequence()))?;
    Ok(if finished { DERIVABLE } else { INDETERMINATE })
}

fn rules(calc: &CalcArgs, classify: Option<&str>) -> Result<u8> {
    let calc = calc.build()?;
    let mut out = String::new();
    for r in calc.rules() {
        out.push_str(&format!("{r}\n\n"));
    }
    if let Some(text) = classify {
        let f = parse_formula(text).map_err(|e| anyhow!("cannot parse `{text}`: {e}"))?;
        let c = classify_hierarchy(&f);
        let level = |v: [bool; 4], name: &str| {
            (0..4)
                .filter(|&i| v[i])
                .map(|i| format!("{name}{i}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!(
            "{f}: {} {}{}\n",
            level(c.p, "P"),
            level(c.n, "N"),
            if c.p3_prime { " P3' (acyclicity unchecked)" } else { "" }
        ));
    }
    print!("{out}");
    Ok(DERIVABLE)
}

fn encode(text: &str, with: &[String]) -> Result<u8> {
    let h = parse_hypersequent(text).map_err(|e| anyhow!("cannot parse `{text}`: {e}"))?;
    let extra = with
        .iter()
        .map(|f| parse_formula(f).map_err(|e| anyhow!("cannot parse `{f}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let omega = OmegaSet::closure_of(h.formulas().chain(extra.iter()));
    let v = encode_sharp(&h, &omega)?;
    let mut out = format!("omega {omega}\n");
    for (i, g) in v.groups().iter().enumerate() {
        let succ = if i == 0 {
            "(empty)".to_string()
        } else {
            omega.formulas()[i - 1].to_string()
        };
        let tuples: Vec<String> = g
            .iter()
            .map(|t| format!("({})", t.values().iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        out.push_str(&format!("{succ}: {{{}}}\n", tuples.join(", ")));
    }
    print!("{out}");
    Ok(DERIVABLE)
}

fn oracle(text: &str, chain: Chain, size: usize) -> Result<u8> {
    let f = parse_formula(text).map_err(|e| anyhow!("cannot parse `{text}`: {e}"))?;
    if size < 2 {
        bail!("a chain has at least two elements");
    }
    let kind = match chain {
        Chain::Lukasiewicz => ChainKind::Lukasiewicz,
        Chain::Godel => ChainKind::Godel,
    };
    let ev = eval_chain(&f, &ExactChain::new(kind, size));
    println!("value {}\n{}", ev.value, ev.verdict);
    Ok(match ev.verdict {
        ChainVerdict::ValidAtOne => DERIVABLE,
        ChainVerdict::Countermodel(_) => NOT_DERIVABLE,
    })
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Prove(args) => prove(args),
        Command::Check { calc, file } => check(calc, file),
        Command::Saturate(args) => saturate(args),
        Command::Rules { calc, classify } => rules(calc, classify.as_deref()),
        Command::Encode { hypersequent, with } => encode(hypersequent, with),
        Command::Oracle { formula, chain, size } => oracle(formula, *chain, *size),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { DERIVABLE };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_read_as_theorems() {
        assert_eq!(parse_input("p -> p").unwrap(), parse_hypersequent("=> p -> p").unwrap());
        assert_eq!(parse_input("p => p | => q").unwrap().num_components(), 2);
        assert!(parse_input("p ->").is_err());
    }
}
