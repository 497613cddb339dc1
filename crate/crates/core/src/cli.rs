//! Command-line front end.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::census::{self, ResidueReport, ZnFactorization};
use crate::error::{Error, Result};
use crate::ideal::{self, Ideal, IdealChain};
use crate::lifting;
use crate::oracle::{self, AuditStatus};
use crate::ring::{Element, Ring, DEFAULT_CAP};

#[derive(Parser, Debug)]
#[command(
    name = "qrlift",
    version,
    about = "Invertible quadratic residues in finite commutative rings"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    /// Largest ring that may be enumerated element by element.
    #[arg(long, env = "QRLIFT_CAP", default_value_t = DEFAULT_CAP, global = true)]
    pub cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ring information.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Residuosity, square roots and censuses.
    #[command(subcommand)]
    Qr(QrCommand),
    /// Lift a root or apply the power map.
    Lift(LiftArgs),
    /// Ideal chain checks.
    #[command(subcommand)]
    Cnc(CncCommand),
    /// Exhaustive audits.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum RingCommand {
    /// Cardinality, characteristic, units and nilradical.
    Describe(RingArg),
}

#[derive(Subcommand, Debug)]
pub enum QrCommand {
    /// Whether an element is an invertible quadratic residue.
    Test(ValueArgs),
    /// All square roots of an element.
    Sqrt(SqrtArgs),
    /// Count invertible residues along an ideal chain.
    Census(CensusArgs),
}

#[derive(Subcommand, Debug)]
pub enum CncCommand {
    /// Check the chain, nilpotency and characteristic conditions.
    Verify(ChainArgs),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Compare the census against exhaustive squaring tables.
    Check(ChainArgs),
}

#[derive(Args, Debug)]
pub struct RingArg {
    /// Ring spec, e.g. `Z25`, `Z25[x]/(x^2)`, `Z9[C2]`, `Z9 * Z25`.
    #[arg(long)]
    pub ring: String,
}

#[derive(Args, Debug)]
pub struct ValueArgs {
    #[command(flatten)]
    pub ring: RingArg,
    /// Element literal.
    #[arg(long, allow_hyphen_values = true)]
    pub value: String,
}

#[derive(Args, Debug)]
pub struct SqrtArgs {
    #[command(flatten)]
    pub target: ValueArgs,
    /// Factorization of an odd modulus, e.g. `3^3,5^2`.
    #[arg(long)]
    pub factors: Option<String>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub ring: RingArg,
    /// Ideals separated by `;`, generators by `,`, e.g. `5,x;25`. Defaults
    /// to the powers of the nilradical.
    #[arg(long, allow_hyphen_values = true)]
    pub chain: Option<String>,
    /// Replace the chain by the powers of its first ideal.
    #[arg(long)]
    pub powers: bool,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// One chain per factor of a product ring, separated by `|`.
    #[arg(long, conflicts_with = "chain", allow_hyphen_values = true)]
    pub factor_chains: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMode {
    /// `g^S` as a root of `a^S`, with `S` the product of the chain's characteristics.
    Chain,
    /// The unique root of `a` in the coset `g + N_1`.
    Eta,
    /// `g^s` with `s N_1 = 0`.
    Power,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, value_enum, default_value_t = LiftMode::Chain)]
    pub mode: LiftMode,
    /// Approximate root (or the argument of the power map).
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Value whose root is lifted; unused by `power`.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<String>,
    /// Exponents to use in place of the minimal characteristics, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<u128>>,
}

/// Rendered output plus whether the command's claim held.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, ok: true }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Table => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).unwrap()),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Table => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let cap = cli.cap;
    match &cli.command {
        Command::Ring(RingCommand::Describe(a)) => describe(&ring(&a.ring, cap)?),
        Command::Qr(QrCommand::Test(a)) => qr_test(a, cap),
        Command::Qr(QrCommand::Sqrt(a)) => qr_sqrt(a, cap),
        Command::Qr(QrCommand::Census(a)) => qr_census(a, cap),
        Command::Lift(a) => lift(a, cap),
        Command::Cnc(CncCommand::Verify(a)) => cnc_verify(a, cap),
        Command::Oracle(OracleCommand::Check(a)) => oracle_check(a, cap),
    }
}

fn ring(spec: &str, cap: u64) -> Result<Ring> {
    Ring::with_cap(&crate::ring::parse_ring_spec(spec)?, cap)
}

/// The ideals named by `--chain`, before any verification.
fn chain_ideals(r: &Ring, args: &ChainArgs) -> Result<Option<Vec<Ideal>>> {
    let Some(text) = &args.chain else {
        return Ok(None);
    };
    let mut ideals = ideal::parse_chain(r, text)?;
    if args.powers {
        ideals = ideal::power_chain(&ideals[0])?;
    }
    Ok(Some(ideals))
}

fn chain_for(r: &Ring, args: &ChainArgs) -> Result<IdealChain> {
    match chain_ideals(r, args)? {
        Some(ideals) => ideal::verify_chain(r, &ideals),
        None => ideal::canonical_chain(r),
    }
}

fn describe(r: &Ring) -> Result<Outcome> {
    let units = r.unit_count().ok();
    let radical = ideal::nilradical(r).ok();
    let mut text = String::new();
    writeln!(text, "ring            {r}").unwrap();
    writeln!(text, "cardinality     {}", r.cardinality()).unwrap();
    writeln!(text, "characteristic  {}", r.characteristic()).unwrap();
    writeln!(text, "enumerable      {}", r.is_enumerable()).unwrap();
    match units {
        Some(u) => writeln!(text, "units           {u}").unwrap(),
        None => writeln!(text, "units           unknown").unwrap(),
    }
    if let Some(j) = &radical {
        writeln!(text, "nilradical      {j} ({} elements)", j.size()).unwrap();
    }
    let json = json!({
        "ring_spec": r.label(),
        "cardinality": r.cardinality(),
        "characteristic": r.characteristic(),
        "enumerable": r.is_enumerable(),
        "units_count": units,
        "nilradical": radical.as_ref().map(|j| j.rendered_generators()),
        "nilradical_size": radical.as_ref().map(|j| j.size()),
    });
    Ok(Outcome::ok(text, json))
}

fn qr_test(a: &ValueArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.ring.ring, cap)?;
    let x = r.parse_element(&a.value)?;
    let unit = r.is_unit(&x);
    let qr = census::is_qr_unit(&r, &x)?;
    let shown = r.render(&x);
    let text = if qr {
        format!("{shown} is an invertible quadratic residue of {r}\n")
    } else if unit {
        format!("{shown} is a unit but not a square in {r}\n")
    } else {
        format!("{shown} is not a unit of {r}\n")
    };
    let json = json!({ "ring_spec": r.label(), "value": shown, "unit": unit, "qr_unit": qr });
    Ok(Outcome::ok(text, json))
}

fn parse_factors(text: &str) -> Result<Vec<(u64, u32)>> {
    text.split(',')
        .map(|f| {
            let f = f.trim();
            let (p, k) = f.split_once('^').unwrap_or((f, "1"));
            match (p.trim().parse(), k.trim().parse()) {
                (Ok(p), Ok(k)) => Ok((p, k)),
                _ => Err(Error::InvalidArgument(format!("cannot read prime power '{f}'"))),
            }
        })
        .collect()
}

fn qr_sqrt(a: &SqrtArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.target.ring.ring, cap)?;
    let x = r.parse_element(&a.target.value)?;
    let roots = match (&a.factors, r.zmod_modulus()) {
        (Some(f), Some(n)) => {
            let f = ZnFactorization::from_pairs(n, &parse_factors(f)?)?;
            census::sqrt_zn(n, x.residue(), Some(&f))?
        }
        (Some(_), None) => return Err(Error::InvalidArgument("--factors applies to Z<n> rings only".into())),
        (None, _) => census::sqrt_all(&r, &x)?,
    };
    let rendered = roots.rendered();
    let mut text = format!("{} square root(s) of {} in {r}\n", rendered.len(), r.render(&x));
    for y in &rendered {
        writeln!(text, "  {y}").unwrap();
    }
    let json = json!({
        "ring_spec": r.label(),
        "value": r.render(&x),
        "count": rendered.len(),
        "roots": rendered,
    });
    Ok(Outcome::ok(text, json))
}

fn report_outcome(report: ResidueReport) -> Outcome {
    let mut text = String::new();
    writeln!(text, "ring              {}", report.ring_spec).unwrap();
    let chain: Vec<String> = report.chain.iter().map(|g| format!("<{}>", g.join(", "))).collect();
    writeln!(text, "chain             {}", chain.join(" > ")).unwrap();
    if !report.factors.is_empty() {
        let f: Vec<String> = report.factors.iter().map(|f| format!("{}^{}", f.p, f.k)).collect();
        writeln!(text, "factors           {}", f.join(" * ")).unwrap();
    }
    writeln!(text, "method            {}", report.method).unwrap();
    writeln!(text, "units             {}", report.units_count).unwrap();
    writeln!(text, "|N1|              {}", report.n1_size).unwrap();
    writeln!(text, "q in R/N1         {}", report.q_quotient_count).unwrap();
    writeln!(text, "q predicted       {}", report.q_predicted).unwrap();
    writeln!(text, "q actual          {}", report.q_actual).unwrap();
    writeln!(text, "alpha             {}", report.alpha).unwrap();
    writeln!(text, "checks").unwrap();
    for c in &report.checks {
        let mark = if c.pass { "pass" } else { "FAIL" };
        writeln!(text, "  {mark}  {:<24} {} = {}", c.name, c.lhs, c.rhs).unwrap();
    }
    let ok = report.all_pass();
    let json = serde_json::to_value(&report).expect("reports serialize");
    Outcome { text, json, ok }
}

fn qr_census(a: &CensusArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.chain.ring.ring, cap)?;
    if let Some(text) = &a.factor_chains {
        let factors = r
            .product_factors()
            .map(<[Ring]>::to_vec)
            .unwrap_or_else(|| vec![r.clone()]);
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != factors.len() {
            return Err(Error::InvalidArgument(format!(
                "{r} has {} factors but {} chains were given",
                factors.len(),
                parts.len()
            )));
        }
        let chains = factors
            .iter()
            .zip(parts)
            .map(|(f, part)| {
                let args = ChainArgs {
                    ring: RingArg { ring: String::new() },
                    chain: Some(part.to_string()),
                    powers: a.chain.powers,
                };
                chain_for(f, &args)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(report_outcome(census::product_ring_census(&r, &chains)?));
    }
    if a.chain.chain.is_none() {
        return Ok(report_outcome(census::ring_census(&r)?));
    }
    let chain = chain_for(&r, &a.chain)?;
    Ok(report_outcome(census::chain_census(&chain)?))
}

fn lift(a: &LiftArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.chain.ring.ring, cap)?;
    let g = r.parse_element(&a.g)?;
    let value = || -> Result<Element> {
        let v = a
            .value
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--value is required for this mode".into()))?;
        r.parse_element(v)
    };
    match a.mode {
        LiftMode::Chain => {
            let ideals = match chain_ideals(&r, &a.chain)? {
                Some(i) => i,
                None => ideal::canonical_chain(&r)?.ideals().to_vec(),
            };
            let chain = ideal::verify_cnc(&r, &ideals)?;
            let target = value()?;
            let w = match &a.exponents {
                Some(e) => lifting::chain_power_lift_with(&chain, &g, &target, e)?,
                None => lifting::chain_power_lift(&chain, &g, &target)?,
            };
            let text = format!(
                "({})^2 = {} in {r}, exponent {} = {:?}\n",
                r.render(w.root()),
                r.render(w.target()),
                w.exponent(),
                w.exponent_trace()
            );
            let json = json!({
                "ring_spec": r.label(),
                "mode": "chain",
                "root": r.render(w.root()),
                "target": r.render(w.target()),
                "exponents": w.exponent_trace(),
            });
            Ok(Outcome::ok(text, json))
        }
        LiftMode::Eta => {
            let n = first_ideal(&r, &a.chain)?;
            let b = value()?;
            let y = lifting::root_in_coset(&r, &n, &g, &b)?;
            let text = format!(
                "({})^2 = {} with {} in {} + {n}\n",
                r.render(&y),
                r.render(&b),
                r.render(&y),
                r.render(&g)
            );
            let json = json!({
                "ring_spec": r.label(),
                "mode": "eta",
                "ideal": n.rendered_generators(),
                "root": r.render(&y),
                "target": r.render(&b),
            });
            Ok(Outcome::ok(text, json))
        }
        LiftMode::Power => {
            let n = first_ideal(&r, &a.chain)?;
            let map = lifting::PowerMap::new(&r, &n)?;
            let h = map.apply(&g);
            let text = format!(
                "H({} + {n}) = ({})^{} = {}\n",
                r.render(&g),
                r.render(&g),
                map.exponent(),
                r.render(&h)
            );
            let json = json!({
                "ring_spec": r.label(),
                "mode": "power",
                "ideal": n.rendered_generators(),
                "exponent": map.exponent(),
                "value": r.render(&h),
            });
            Ok(Outcome::ok(text, json))
        }
    }
}

fn first_ideal(r: &Ring, args: &ChainArgs) -> Result<Ideal> {
    match chain_ideals(r, args)? {
        Some(ideals) => Ok(ideals[0].clone()),
        None => ideal::nilradical(r),
    }
}

fn cnc_verify(a: &ChainArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.ring.ring, cap)?;
    let ideals = match chain_ideals(&r, a)? {
        Some(i) => i,
        None => ideal::canonical_chain(&r)?.ideals().to_vec(),
    };
    let chain = ideal::verify_cnc(&r, &ideals)?;
    let mut text = format!("CNC condition holds for {r}\n");
    for (i, ((t, s), n)) in chain
        .nilpotency_indices()
        .iter()
        .zip(chain.characteristics())
        .zip(chain.ideals())
        .enumerate()
    {
        writeln!(text, "  N{} = {:<16} t = {t}  s = {s}", i + 1, n.to_string()).unwrap();
    }
    writeln!(text, "  N{} = {{0}}", chain.ideals().len()).unwrap();
    let json = json!({
        "ring_spec": r.label(),
        "chain": chain.generator_lists(),
        "nilpotency_indices": chain.nilpotency_indices(),
        "characteristics": chain.characteristics(),
        "cnc": true,
    });
    Ok(Outcome::ok(text, json))
}

fn oracle_check(a: &ChainArgs, cap: u64) -> Result<Outcome> {
    let r = ring(&a.ring.ring, cap)?;
    let chain = chain_for(&r, a)?;
    let entries = oracle::audit(&r, &chain)?;
    let mut text = format!(
        "audit of {r} over {}\n",
        chain
            .generator_lists()
            .iter()
            .map(|g| format!("<{}>", g.join(", ")))
            .collect::<Vec<_>>()
            .join(" > ")
    );
    for e in &entries {
        writeln!(text, "  {:<18} {:<26} {}", e.status, e.name, e.details).unwrap();
    }
    let ok = oracle::audit_passes(&entries);
    let json = json!({
        "ring_spec": r.label(),
        "chain": chain.generator_lists(),
        "entries": entries,
        "pass": ok,
        "hypothesis_met": !entries.iter().any(|e| e.status == AuditStatus::HypothesisNotMet),
    });
    Ok(Outcome { text, json, ok })
}
