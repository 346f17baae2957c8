//! The range-avoidance tautology: compiling the claim "b is outside the
//! range of circuit C" into propositional form.
//!
//! The claim's negation — "some input makes C output exactly b" — is a CNF
//! over one variable per input wire and one per gate: gate-definition
//! clauses tie each gate variable to its operands, and one unit clause per
//! output bit pins the output to b. The tautology candidate is the
//! disjunction of the negated clauses, so it is true under an assignment
//! exactly when the assignment violates some clause. It is a tautology iff
//! the CNF is unsatisfiable iff b is outside the range.
//!
//! Constant operands (from [`Circuit::substitute_constants`]) are absorbed
//! literal by literal while clauses are built: a literal made true drops its
//! whole clause, a literal made false drops out of the clause. This mirrors
//! exactly what [`crate::formula::substitute`] does to the negated-clause
//! disjunction, which is what makes substituting into a built formula and
//! building from a substituted circuit agree clause-for-clause.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Circuit, CircuitError, GateOp, Operand, WireRef};
use crate::formula::{
    self, AtomId, CopyTag, Formula, FormulaError, Namespace, DEFAULT_ATOM_CAP,
};
use crate::semantic;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TauError {
    #[error("target has {got} bits, circuit outputs {expected}")]
    TargetWidth { got: usize, expected: usize },
    #[error("range check over {n} inputs exceeds the cap of {cap}")]
    RangeCap { n: usize, cap: usize },
    #[error("{atoms} atoms exceed the brute-force cap of {cap}")]
    AtomCap { atoms: usize, cap: usize },
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

impl From<CircuitError> for TauError {
    fn from(e: CircuitError) -> TauError {
        match e {
            CircuitError::RangeCapExceeded { n, cap } => TauError::RangeCap { n, cap },
            other => unreachable!("unexpected circuit error: {}", other),
        }
    }
}

impl From<FormulaError> for TauError {
    fn from(e: FormulaError) -> TauError {
        match e {
            FormulaError::TooManyAtoms { atoms, cap } => TauError::AtomCap { atoms, cap },
            other => unreachable!("unexpected formula error: {}", other),
        }
    }
}

/// Where an instance came from, carried into DIMACS comments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Provenance {
    pub family: String,
    pub circuit: String,
    pub b: BitString,
    pub n: usize,
    pub m: usize,
}

/// A CNF expressing "C(x) = b": satisfiable exactly when b is in range.
/// Variables are the circuit's inputs then its gates, DIMACS index =
/// position + 1; clauses use signed indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfInstance {
    pub variables: Vec<AtomId>,
    pub clauses: Vec<Vec<i32>>,
    pub provenance: Provenance,
}

impl CnfInstance {
    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Exhaustive satisfiability sweep; the assignment is indexed like
    /// `variables`.
    pub fn satisfying_assignment(&self, cap: usize) -> Result<Option<Vec<bool>>, TauError> {
        if self.variables.len() > cap {
            return Err(TauError::AtomCap { atoms: self.variables.len(), cap });
        }
        Ok(semantic::cnf_satisfying_assignment(self.variables.len(), &self.clauses))
    }
}

/// The tautology candidate together with the CNF it negates.
#[derive(Clone, Debug)]
pub struct TauInstance {
    pub tau: Formula,
    pub cnf: CnfInstance,
    pub circuit: Circuit,
    pub b: BitString,
}

/// One clause-table row: slot 0 is the gate's own wire, slots 1 and 2 its
/// operands; the flag is the literal's polarity.
type Template = &'static [&'static [(usize, bool)]];

fn clause_table(op: GateOp) -> Template {
    const W: usize = 0;
    const A: usize = 1;
    const B: usize = 2;
    match op {
        GateOp::And => &[
            &[(W, false), (A, true)],
            &[(W, false), (B, true)],
            &[(W, true), (A, false), (B, false)],
        ],
        GateOp::Or => &[
            &[(W, true), (A, false)],
            &[(W, true), (B, false)],
            &[(W, false), (A, true), (B, true)],
        ],
        GateOp::Xor => &[
            &[(W, false), (A, true), (B, true)],
            &[(W, false), (A, false), (B, false)],
            &[(W, true), (A, true), (B, false)],
            &[(W, true), (A, false), (B, true)],
        ],
        GateOp::Nand => &[
            &[(W, true), (A, true)],
            &[(W, true), (B, true)],
            &[(W, false), (A, false), (B, false)],
        ],
        GateOp::Not => &[&[(W, true), (A, true)], &[(W, false), (A, false)]],
        GateOp::Const0 => &[&[(W, false)]],
        GateOp::Const1 => &[&[(W, true)]],
    }
}

fn effective_copy(tag: CopyTag, call: CopyTag) -> CopyTag {
    match tag {
        CopyTag::Shared => call,
        explicit => explicit,
    }
}

/// Builds the CNF for "c(x) = b" with atoms minted under the given
/// namespace; wires tagged as belonging to a replicated block keep their
/// block index, untagged (shared) wires take `copy`.
pub fn range_avoidance_cnf(
    c: &Circuit,
    b: &BitString,
    namespace: Namespace,
    copy: CopyTag,
) -> Result<CnfInstance, TauError> {
    if b.len() != c.output_count() {
        return Err(TauError::TargetWidth { got: b.len(), expected: c.output_count() });
    }
    let n = c.input_count();
    let variables: Vec<AtomId> = (0..n)
        .map(|p| {
            let (tag, local) = c.input_tag(p);
            AtomId::input(namespace, effective_copy(tag, copy), local)
        })
        .chain((0..c.gate_count()).map(|t| {
            let (tag, local) = c.gate_tag(t);
            AtomId::gate(namespace, effective_copy(tag, copy), local)
        }))
        .collect();

    // Signed DIMACS index of a wire operand, or the constant truth value of
    // a constant operand under the requested polarity.
    let literal = |operand: &Operand, positive: bool| -> Result<i32, bool> {
        match operand {
            Operand::Const(v) => Err(if positive { *v } else { !*v }),
            Operand::Wire(WireRef::Input(p)) => {
                let var = *p as i32 + 1;
                Ok(if positive { var } else { -var })
            }
            Operand::Wire(WireRef::Gate(t)) => {
                let var = (n + t) as i32 + 1;
                Ok(if positive { var } else { -var })
            }
        }
    };

    let mut clauses = Vec::new();
    for (t, gate) in c.gates().iter().enumerate() {
        let own = Operand::Wire(WireRef::Gate(t));
        'template: for &row in clause_table(gate.op) {
            let mut clause = Vec::with_capacity(row.len());
            for &(slot, positive) in row {
                let operand = if slot == 0 { &own } else { &gate.fanins[slot - 1] };
                match literal(operand, positive) {
                    Ok(lit) => {
                        if !clause.contains(&lit) {
                            clause.push(lit);
                        }
                    }
                    Err(true) => continue 'template,
                    Err(false) => {}
                }
            }
            clauses.push(clause);
        }
    }
    for (p, out) in c.outputs().iter().enumerate() {
        match literal(out, b.get(p)) {
            Ok(lit) => clauses.push(vec![lit]),
            // A constant output matching its target bit constrains nothing;
            // a mismatch is the one place an empty (unsatisfiable) clause
            // is produced.
            Err(true) => {}
            Err(false) => clauses.push(Vec::new()),
        }
    }

    Ok(CnfInstance {
        variables,
        clauses,
        provenance: Provenance {
            family: "custom".into(),
            circuit: c.name.clone(),
            b: b.clone(),
            n,
            m: c.output_count(),
        },
    })
}

/// Builds the tautology candidate: the disjunction, in clause order, of
/// each CNF clause's literal-wise negation. Every disjunct is a conjunction
/// (possibly empty, possibly unit) so that formula-level substitution keeps
/// one recognizable disjunct per surviving clause.
pub fn tau_formula(
    c: &Circuit,
    b: &BitString,
    namespace: Namespace,
    copy: CopyTag,
) -> Result<TauInstance, TauError> {
    let cnf = range_avoidance_cnf(c, b, namespace, copy)?;
    let cubes = cnf
        .clauses
        .iter()
        .map(|clause| {
            Formula::And(
                clause
                    .iter()
                    .map(|&lit| {
                        let atom = cnf.variables[lit.unsigned_abs() as usize - 1];
                        Formula::literal(atom, lit < 0)
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(TauInstance { tau: Formula::Or(cubes), cnf, circuit: c.clone(), b: b.clone() })
}

/// Renders the CNF in DIMACS format with a provenance comment header.
/// Deterministic: identical instances yield identical bytes.
pub fn emit_dimacs(cnf: &CnfInstance) -> String {
    use fmt::Write;
    let mut out = String::new();
    let p = &cnf.provenance;
    writeln!(out, "c family={}", p.family).unwrap();
    writeln!(out, "c circuit={}", p.circuit).unwrap();
    writeln!(out, "c b={}", p.b).unwrap();
    writeln!(out, "c n={}", p.n).unwrap();
    writeln!(out, "c m={}", p.m).unwrap();
    writeln!(out, "c toolkit-version={}", TOOLKIT_VERSION).unwrap();
    writeln!(out, "p cnf {} {}", cnf.var_count(), cnf.clause_count()).unwrap();
    for clause in &cnf.clauses {
        for lit in clause {
            write!(out, "{} ", lit).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Variable count and clauses read back from DIMACS text.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParsedDimacs {
    pub var_count: usize,
    pub clauses: Vec<Vec<i32>>,
}

pub fn parse_dimacs(text: &str) -> Result<ParsedDimacs, TauError> {
    let err = |line: usize, msg: &str| TauError::Dimacs { line, msg: msg.into() };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("p cnf") {
            if header.is_some() {
                return Err(err(line, "duplicate header"));
            }
            let mut parts = rest.split_whitespace();
            let vars = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(line, "malformed variable count"))?;
            let count = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(line, "malformed clause count"))?;
            if parts.next().is_some() {
                return Err(err(line, "trailing tokens after header"));
            }
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| err(line, "clause before header"))?;
        for tok in content.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| err(line, "malformed literal"))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(err(line, "literal out of the declared variable range"));
                }
                current.push(lit);
            }
        }
    }
    let (vars, count) = header.ok_or_else(|| err(0, "missing header"))?;
    if !current.is_empty() {
        return Err(TauError::Dimacs { line: 0, msg: "unterminated clause".into() });
    }
    if clauses.len() != count {
        return Err(TauError::Dimacs {
            line: 0,
            msg: format!("header declares {} clauses, found {}", count, clauses.len()),
        });
    }
    Ok(ParsedDimacs { var_count: vars, clauses })
}

/// Three independent verdicts on one (circuit, target) pair plus their
/// required agreement: the target is outside the range iff the tautology
/// candidate is a tautology iff the CNF is unsatisfiable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub in_range: bool,
    /// An input mapped to b, when one exists.
    pub witness: Option<BitString>,
    pub tautology: bool,
    pub cnf_satisfiable: bool,
    pub consistent: bool,
}

pub fn verify_tau(c: &Circuit, b: &BitString) -> Result<VerifyReport, TauError> {
    verify_tau_capped(c, b, crate::circuit::DEFAULT_RANGE_CAP, DEFAULT_ATOM_CAP)
}

pub fn verify_tau_capped(
    c: &Circuit,
    b: &BitString,
    range_cap: usize,
    atom_cap: usize,
) -> Result<VerifyReport, TauError> {
    let instance = tau_formula(c, b, Namespace::Root, CopyTag::Shared)?;
    let n = c.input_count();
    if n > range_cap {
        return Err(TauError::RangeCap { n, cap: range_cap });
    }
    let mut witness = None;
    for x in 0..1usize << n {
        let input = BitString::from_index(x, n);
        if &c.eval(&input).expect("width checked") == b {
            witness = Some(input);
            break;
        }
    }
    let in_range = witness.is_some();
    let tautology = formula::is_tautology(&instance.tau, atom_cap)?;
    let cnf_satisfiable = instance.cnf.satisfying_assignment(atom_cap)?.is_some();
    let consistent = (in_range != tautology) && (in_range == cnf_satisfiable);
    Ok(VerifyReport { in_range, witness, tautology, cnf_satisfiable, consistent })
}
