//! Command-line surface: every construction and check in the library is
//! reachable as a subcommand that writes circuit files, DIMACS, and JSON
//! reports into an output directory.
//!
//! Exit codes: 0 success, 2 validation failure, 3 brute-force cap
//! exceeded, 1 I/O failure. All randomness comes from --seed, so a rerun
//! with identical arguments produces byte-identical artifacts.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use taugen::bits::BitString;
use taugen::circuit::{Circuit, CircuitError, DEFAULT_RANGE_CAP};
use taugen::experiments::{
    axiom_disjunction, cover_probability, find_outside_range,
    gadget_substitute_and_decompose, shift_translation_check,
    shift_translation_check_with_target, sipser_cover_check, ExperimentError,
    TauDisjunction,
};
use taugen::formula::{FormulaError, DEFAULT_ATOM_CAP};
use taugen::generators::{
    gadget_generator, nw_design, nw_generator, shifted_generator, tt_generator,
    universal_gadget, BaseTable, Family, GadgetSpec, GeneratorError, GeneratorInstance,
    ShiftFamily,
};
use taugen::random::{random_subset, seeded_rng};
use taugen::tau::{
    emit_dimacs, tau_formula, verify_tau_capped, TauError, VerifyReport, TOOLKIT_VERSION,
};
use taugen::formula::{CopyTag, Namespace};

#[derive(Parser)]
#[command(
    name = "taugen",
    version,
    about = "Generator constructions and range-avoidance tautologies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Directory artifacts are written into.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for randomized commands; required wherever randomness is used.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the brute-force caps (exhaustive range and atom sweeps).
    #[arg(long)]
    cap: Option<usize>,
    /// Print the JSON report to stdout.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn range_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_RANGE_CAP)
    }

    fn atom_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_ATOM_CAP)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the tautology candidate and CNF for one circuit and target.
    Tau(TauArgs),
    /// Assemble the replicated-gadget generator.
    Gadget(GadgetArgs),
    /// Build the truth-table generator for k-input, s-gate descriptions.
    Ttgen(TtArgs),
    /// XOR a base generator with an indexed shift family.
    Shift(ShiftArgs),
    /// Build the combinatorial-design generator.
    Nw(NwArgs),
    /// Check and estimate shift coverage of the output space.
    Cover(CoverArgs),
    /// Demonstrate the substitution decomposition on one gadget instance.
    Decompose(DecomposeArgs),
    /// Build the range disjunction axioms for a pair of generators.
    Axiom(AxiomArgs),
    /// Build a disjunction of tautology candidates over listed targets.
    Vhard(VhardArgs),
    /// Evaluate one tautology candidate against the exhaustive oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TauArgs {
    /// Circuit file in the line-based text format.
    #[arg(long)]
    circuit: PathBuf,
    /// Target output string.
    #[arg(long)]
    b: String,
    /// Family label recorded in the DIMACS header.
    #[arg(long, default_value = "custom")]
    family: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GadgetArgs {
    /// Per-copy input width of the gadget function.
    #[arg(long)]
    k: usize,
    /// Gadget function circuit file (ℓ is inferred from its input count).
    #[arg(long)]
    gadget_file: Option<PathBuf>,
    /// Use the universal circuit as the gadget function.
    #[arg(long)]
    universal: bool,
    /// Gate budget of the simulated circuits (with --universal).
    #[arg(long)]
    s: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TtArgs {
    /// Input count of the described circuits.
    #[arg(long)]
    k: usize,
    /// Gate count of the described circuits.
    #[arg(long)]
    s: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ShiftArgs {
    /// Base generator circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Shift vector; repeat the flag for a family.
    #[arg(long = "shift", required = true)]
    shifts: Vec<String>,
    /// Base-generator target: runs the translation check against it.
    #[arg(long)]
    a: Option<String>,
    /// Shift index used by the translation check.
    #[arg(long)]
    j: Option<usize>,
    /// Shifted-generator target override for the translation check
    /// (defaults to a XOR shift[j]).
    #[arg(long)]
    target: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct NwArgs {
    /// Field size; must be prime.
    #[arg(long)]
    q: usize,
    /// Degree bound of the polynomial design.
    #[arg(long)]
    d: usize,
    /// Output count; defaults to the full design, q^d sets.
    #[arg(long)]
    r: Option<usize>,
    /// Base function: parity, majority, const0, const1, or random.
    #[arg(long, default_value = "parity")]
    base: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CoverArgs {
    /// Output-space width.
    #[arg(long)]
    m: usize,
    /// Size of the sampled set.
    #[arg(long)]
    density: usize,
    /// Shifts drawn per trial.
    #[arg(long)]
    shifts: usize,
    /// Monte Carlo trial count.
    #[arg(long)]
    trials: usize,
    /// Density parameter for the theoretical bound; derived from the
    /// complement size when omitted.
    #[arg(long)]
    sigma: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Gadget function circuit file.
    #[arg(long)]
    gadget_file: PathBuf,
    /// Per-copy input width.
    #[arg(long)]
    k: usize,
    /// Shared argument substituted into the assembled candidate.
    #[arg(long)]
    c: String,
    /// Target for the assembled generator.
    #[arg(long)]
    b: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AxiomArgs {
    /// Circuit whose range supplies the targets.
    #[arg(long)]
    h_file: PathBuf,
    /// Gadget function circuit file (ℓ inferred).
    #[arg(long)]
    gadget_file: Option<PathBuf>,
    /// Use the universal circuit as the gadget function.
    #[arg(long)]
    universal: bool,
    /// Per-copy input width of the gadget function.
    #[arg(long)]
    k: usize,
    /// Gate budget of the simulated circuits (with --universal).
    #[arg(long)]
    s: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VhardArgs {
    /// Generator circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Target string; repeat the flag for several disjuncts.
    #[arg(long = "b", required = true)]
    targets: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit file.
    #[arg(long)]
    circuit: PathBuf,
    /// Target output string.
    #[arg(long)]
    b: String,
    #[command(flatten)]
    common: Common,
}

enum CliError {
    Validation(String),
    Cap(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Cap(m) | CliError::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::RangeCapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::TooManyAtoms { .. } => CliError::Cap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<TauError> for CliError {
    fn from(e: TauError) -> Self {
        match e {
            TauError::RangeCap { .. } | TauError::AtomCap { .. } => {
                CliError::Cap(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            ExperimentError::Circuit(inner) => inner.into(),
            ExperimentError::Formula(inner) => inner.into(),
            ExperimentError::Tau(inner) => inner.into(),
            ExperimentError::Generator(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Tau(a) => cmd_tau(a),
        Cmd::Gadget(a) => cmd_gadget(a),
        Cmd::Ttgen(a) => cmd_ttgen(a),
        Cmd::Shift(a) => cmd_shift(a),
        Cmd::Nw(a) => cmd_nw(a),
        Cmd::Cover(a) => cmd_cover(a),
        Cmd::Decompose(a) => cmd_decompose(a),
        Cmd::Axiom(a) => cmd_axiom(a),
        Cmd::Vhard(a) => cmd_vhard(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_bits(s: &str, what: &str) -> Result<BitString, CliError> {
    s.parse().map_err(|_| validation(format!("{} is not a bit string: {:?}", what, s)))
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path)?;
    let name = file_stem(path);
    Ok(Circuit::parse_named(&name, &text)
        .map_err(|e| validation(format!("{}: {}", path.display(), e)))?)
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "circuit".into())
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<String, CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

fn write_report(common: &Common, name: &str, report: &Value) -> Result<(), CliError> {
    let text = format!("{:#}\n", report);
    write_artifact(&common.out, name, &text)?;
    if common.json {
        print!("{}", text);
    }
    Ok(())
}

fn instance_to_generator(circuit: Circuit) -> GeneratorInstance {
    let n = circuit.input_count();
    let m = circuit.output_count();
    GeneratorInstance {
        circuit,
        n,
        m,
        family: Family::Custom,
        params: Default::default(),
        stretching: m > n,
    }
}

fn params_json(instance: &GeneratorInstance) -> Value {
    let mut map = serde_json::Map::new();
    for (k, v) in &instance.params {
        map.insert(k.clone(), Value::String(v.clone()));
    }
    Value::Object(map)
}

fn manifest(
    instance: &GeneratorInstance,
    seed: Option<u64>,
    files: Value,
    extra: Value,
) -> Value {
    json!({
        "family": instance.family.as_str(),
        "params": params_json(instance),
        "n": instance.n,
        "m": instance.m,
        "stretching": instance.stretching,
        "seed": seed,
        "files": files,
        "extra": extra,
        "toolkit_version": TOOLKIT_VERSION,
    })
}

fn verify_json(report: &VerifyReport) -> Value {
    json!({
        "in_range": report.in_range,
        "witness": report.witness.as_ref().map(|w| w.to_string()),
        "tautology": report.tautology,
        "cnf_satisfiable": report.cnf_satisfiable,
        "consistent": report.consistent,
    })
}

fn cmd_tau(args: TauArgs) -> Result<(), CliError> {
    let circuit = read_circuit(&args.circuit)?;
    let b = parse_bits(&args.b, "--b")?;
    let mut instance = tau_formula(&circuit, &b, Namespace::Root, CopyTag::Shared)?;
    instance.cnf.provenance.family = args.family.clone();

    let stem = format!("{}_b{}", file_stem(&args.circuit), b);
    let cnf_file = write_artifact(&args.common.out, &format!("{}.cnf", stem), &emit_dimacs(&instance.cnf))?;
    let tau_file = write_artifact(
        &args.common.out,
        &format!("{}.tau.txt", stem),
        &format!("{}\n", instance.tau),
    )?;

    // The exhaustive oracles run only when the instance fits the caps;
    // artifacts are written either way.
    let verify = match verify_tau_capped(&circuit, &b, args.common.range_cap(), args.common.atom_cap()) {
        Ok(r) => verify_json(&r),
        Err(TauError::RangeCap { .. }) | Err(TauError::AtomCap { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "command": "tau",
        "circuit": circuit.name,
        "b": b.to_string(),
        "family": args.family,
        "variables": instance.cnf.var_count(),
        "clauses": instance.cnf.clause_count(),
        "files": {"cnf": cnf_file, "tau": tau_file},
        "verify": verify,
        "toolkit_version": TOOLKIT_VERSION,
    });
    write_report(&args.common, &format!("{}.report.json", stem), &report)
}

fn load_gadget_spec(
    k: usize,
    gadget_file: &Option<PathBuf>,
    universal: bool,
    s: Option<usize>,
) -> Result<(GadgetSpec, String), CliError> {
    match (gadget_file, universal) {
        (Some(path), false) => {
            let f = read_circuit(path)?;
            let ell = f
                .input_count()
                .checked_sub(k)
                .filter(|&ell| ell >= 1)
                .ok_or_else(|| {
                    validation(format!(
                        "gadget function has {} inputs, too few for k = {}",
                        f.input_count(),
                        k
                    ))
                })?;
            let spec = GadgetSpec::new(f, k, ell)?;
            Ok((spec, format!("gadget_{}_k{}", file_stem(path), k)))
        }
        (None, true) => {
            let s = s.ok_or_else(|| validation("--universal requires --s"))?;
            let spec = universal_gadget(k, s)?;
            Ok((spec, format!("gadget_u_k{}_s{}", k, s)))
        }
        (Some(_), true) => Err(validation("--gadget-file and --universal are exclusive")),
        (None, false) => Err(validation("one of --gadget-file or --universal is required")),
    }
}

fn cmd_gadget(args: GadgetArgs) -> Result<(), CliError> {
    let (spec, stem) = load_gadget_spec(args.k, &args.gadget_file, args.universal, args.s)?;
    let instance = gadget_generator(&spec);

    let circ_file =
        write_artifact(&args.common.out, &format!("{}.circ", stem), &instance.circuit.render())?;
    let report_name = format!("{}.manifest.json", stem);
    let report = manifest(
        &instance,
        None,
        json!({"circuit": circ_file, "manifest": report_name}),
        json!({"copies": spec.copies(), "shared": spec.shared()}),
    );
    write_report(&args.common, &report_name, &report)
}

fn cmd_ttgen(args: TtArgs) -> Result<(), CliError> {
    let instance = tt_generator(args.k, args.s)?;
    let stem = format!("tt_k{}_s{}", args.k, args.s);
    let circ_file =
        write_artifact(&args.common.out, &format!("{}.circ", stem), &instance.circuit.render())?;
    let report_name = format!("{}.manifest.json", stem);
    let report = manifest(
        &instance,
        None,
        json!({"circuit": circ_file, "manifest": report_name}),
        Value::Null,
    );
    write_report(&args.common, &report_name, &report)
}

fn cmd_shift(args: ShiftArgs) -> Result<(), CliError> {
    let base = instance_to_generator(read_circuit(&args.circuit)?);
    let shifts = ShiftFamily::new(
        args.shifts
            .iter()
            .map(|s| parse_bits(s, "--shift"))
            .collect::<Result<Vec<_>, _>>()?,
    )?;
    let instance = shifted_generator(&base, &shifts)?;

    let stem = format!("{}_shifted", file_stem(&args.circuit));
    let circ_file =
        write_artifact(&args.common.out, &format!("{}.circ", stem), &instance.circuit.render())?;

    let translation = match (&args.a, args.j) {
        (Some(a), Some(j)) => {
            let a = parse_bits(a, "--a")?;
            let equivalent = match &args.target {
                Some(t) => {
                    let b = parse_bits(t, "--target")?;
                    shift_translation_check_with_target(&base, &shifts, &a, j, &b)?
                }
                None => shift_translation_check(&base, &shifts, &a, j)?,
            };
            json!({
                "a": a.to_string(),
                "j": j,
                "target": args.target,
                "equivalent": equivalent,
            })
        }
        (None, None) => Value::Null,
        _ => return Err(validation("--a and --j must be given together")),
    };

    let report_name = format!("{}.manifest.json", stem);
    let report = manifest(
        &instance,
        None,
        json!({"circuit": circ_file, "manifest": report_name}),
        json!({
            "shifts": args.shifts,
            "translation_check": translation,
        }),
    );
    write_report(&args.common, &report_name, &report)
}

fn cmd_nw(args: NwArgs) -> Result<(), CliError> {
    let r = args.r.unwrap_or_else(|| {
        // Full design by default; q^d fits usize at the scales q is prime.
        args.q.pow(args.d as u32)
    });
    let design = nw_design(args.q, args.d, r)?;
    let base = match args.base.as_str() {
        "parity" => BaseTable::parity(args.q),
        "majority" => BaseTable::majority(args.q),
        "const0" => BaseTable::constant(args.q, false),
        "const1" => BaseTable::constant(args.q, true),
        "random" => {
            let seed = args
                .common
                .seed
                .ok_or_else(|| validation("--base random requires --seed"))?;
            BaseTable::random(args.q, &mut seeded_rng(seed))
        }
        other => return Err(validation(format!("unknown base function {:?}", other))),
    };
    let instance = nw_generator(&design, &base, r)?;

    let max_overlap = design
        .sets()
        .iter()
        .enumerate()
        .flat_map(|(i, si)| {
            design.sets()[i + 1..]
                .iter()
                .map(move |sj| si.iter().filter(|x| sj.contains(x)).count())
        })
        .max()
        .unwrap_or(0);

    let stem = format!("nw_q{}_d{}_r{}_{}", args.q, args.d, r, base.name);
    let circ_file =
        write_artifact(&args.common.out, &format!("{}.circ", stem), &instance.circuit.render())?;
    let design_name = format!("{}.design.json", stem);
    let design_json = json!({
        "q": args.q,
        "d": args.d,
        "r": r,
        "sets": design.sets(),
        "max_pairwise_overlap": max_overlap,
    });
    write_artifact(&args.common.out, &design_name, &format!("{:#}\n", design_json))?;

    let report_name = format!("{}.manifest.json", stem);
    let report = manifest(
        &instance,
        args.common.seed,
        json!({"circuit": circ_file, "design": design_name, "manifest": report_name}),
        json!({"max_pairwise_overlap": max_overlap}),
    );
    write_report(&args.common, &report_name, &report)
}

fn cmd_cover(args: CoverArgs) -> Result<(), CliError> {
    let seed = args.common.seed.ok_or_else(|| validation("cover requires --seed"))?;
    if args.m > 20 {
        return Err(CliError::Cap(format!("m = {} exceeds the cap of 20", args.m)));
    }
    let total = 1usize << args.m;
    if args.density > total {
        return Err(validation(format!(
            "density {} exceeds the {} points of the output space",
            args.density, total
        )));
    }

    // The set is sampled from stream 0 of the seed; Monte Carlo trials use
    // streams 1.. so the draws never overlap.
    let set: BTreeSet<BitString> = random_subset(&mut seeded_rng(seed), total, args.density)
        .into_iter()
        .map(|i| BitString::from_index(i, args.m))
        .collect();
    let sigma = args.sigma.or_else(|| {
        let complement = total - args.density;
        (complement > 0).then(|| total / complement + 1)
    });

    let mc = cover_probability(&set, args.shifts, args.trials, seed, args.m, sigma)?;

    // Also check the first trial's shifts exactly, to surface uncovered
    // witnesses for eyeballing.
    let mut rng = seeded_rng(seed);
    rng.set_stream(1);
    let sample_shifts = ShiftFamily::new(
        (0..args.shifts)
            .map(|_| {
                use rand::Rng;
                BitString::from_index(rng.gen_range(0..total), args.m)
            })
            .collect(),
    )?;
    let exact = sipser_cover_check(&set, &sample_shifts, sigma)?;

    let report = json!({
        "command": "cover",
        "monte_carlo": mc.to_json(),
        "first_trial_exact": exact.to_json(),
        "sigma": sigma,
        "toolkit_version": TOOLKIT_VERSION,
    });
    let report_name = format!(
        "cover_m{}_a{}_n{}_t{}_seed{}.report.json",
        args.m, args.density, args.shifts, args.trials, seed
    );
    write_report(&args.common, &report_name, &report)
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let f = read_circuit(&args.gadget_file)?;
    let ell = f
        .input_count()
        .checked_sub(args.k)
        .filter(|&ell| ell >= 1)
        .ok_or_else(|| {
            validation(format!(
                "gadget function has {} inputs, too few for k = {}",
                f.input_count(),
                args.k
            ))
        })?;
    let spec = GadgetSpec::new(f, args.k, ell)?;
    let c = parse_bits(&args.c, "--c")?;
    let b = parse_bits(&args.b, "--b")?;
    let report = gadget_substitute_and_decompose(&spec, &c, &b, args.common.atom_cap())?;

    let stem = format!("decompose_{}_c{}_b{}", file_stem(&args.gadget_file), c, b);
    let report_json = json!({
        "command": "decompose",
        "k": args.k,
        "ell": ell,
        "c": c.to_string(),
        "b": b.to_string(),
        "report": report.to_json(),
        "toolkit_version": TOOLKIT_VERSION,
    });
    write_report(&args.common, &format!("{}.report.json", stem), &report_json)
}

/// Writes one DIMACS file per disjunct and summarizes the disjunction,
/// including its tautology verdict when the per-disjunct sweeps fit the cap.
fn disjunction_artifacts(
    common: &Common,
    stem: &str,
    family: &str,
    d: &TauDisjunction,
) -> Result<(Vec<String>, Value), CliError> {
    let mut files = Vec::new();
    for (i, inst) in d.instances.iter().enumerate() {
        let mut cnf = inst.cnf.clone();
        cnf.provenance.family = format!("{}[{}]", family, i);
        files.push(write_artifact(
            &common.out,
            &format!("{}_d{}.cnf", stem, i),
            &emit_dimacs(&cnf),
        )?);
    }
    let tautology = match d.disjunction.is_tautology_by_parts(common.atom_cap()) {
        Ok(v) => Value::Bool(v),
        Err(FormulaError::TooManyAtoms { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok((files, tautology))
}

fn cmd_axiom(args: AxiomArgs) -> Result<(), CliError> {
    let h = instance_to_generator(read_circuit(&args.h_file)?);
    let (spec, _) = load_gadget_spec(args.k, &args.gadget_file, args.universal, args.s)?;
    let gadf = gadget_generator(&spec);
    let disjunction = axiom_disjunction(&h, &gadf, args.common.range_cap())?;

    let stem = format!("axiom_{}", file_stem(&args.h_file));
    let (files, tautology) = disjunction_artifacts(&args.common, &stem, "axiom", &disjunction)?;

    // The witness search needs the gadget range too; skip it when that
    // sweep would blow the cap, and say so.
    let witness = if gadf.n <= args.common.range_cap() {
        find_outside_range(&h, &gadf, args.common.range_cap())?.to_json()
    } else {
        Value::Null
    };

    let report = json!({
        "command": "axiom",
        "h": h.circuit.name,
        "gadget_n": gadf.n,
        "gadget_m": gadf.m,
        "disjunction": disjunction.to_json(),
        "tautology": tautology,
        "outside_range": witness,
        "files": files,
        "toolkit_version": TOOLKIT_VERSION,
    });
    write_report(&args.common, &format!("{}.report.json", stem), &report)
}

fn cmd_vhard(args: VhardArgs) -> Result<(), CliError> {
    let g = instance_to_generator(read_circuit(&args.circuit)?);
    let targets = args
        .targets
        .iter()
        .map(|s| parse_bits(s, "--b"))
        .collect::<Result<Vec<_>, _>>()?;
    let disjunction = taugen::experiments::vee_hard_disjunction(&g, &targets)?;

    let stem = format!("vhard_{}", file_stem(&args.circuit));
    let (files, tautology) = disjunction_artifacts(&args.common, &stem, "vhard", &disjunction)?;

    let report = json!({
        "command": "vhard",
        "circuit": g.circuit.name,
        "disjunction": disjunction.to_json(),
        "tautology": tautology,
        "files": files,
        "toolkit_version": TOOLKIT_VERSION,
    });
    write_report(&args.common, &format!("{}.report.json", stem), &report)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let circuit = read_circuit(&args.circuit)?;
    let b = parse_bits(&args.b, "--b")?;
    let report =
        verify_tau_capped(&circuit, &b, args.common.range_cap(), args.common.atom_cap())?;

    let stem = format!("verify_{}_b{}", file_stem(&args.circuit), b);
    let report_json = json!({
        "command": "verify",
        "circuit": circuit.name,
        "b": b.to_string(),
        "report": verify_json(&report),
        "toolkit_version": TOOLKIT_VERSION,
    });
    write_report(&args.common, &format!("{}.report.json", stem), &report_json)?;
    if !args.common.json {
        println!(
            "b={} in_range={} tautology={} cnf_satisfiable={} consistent={}",
            b, report.in_range, report.tautology, report.cnf_satisfiable, report.consistent
        );
    }
    Ok(())
}
