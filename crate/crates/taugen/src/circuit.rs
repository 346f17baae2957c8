//! Boolean circuits with named wires and an explicit, topologically ordered
//! gate list.
//!
//! The text format is line based: `inputs` lines declare input wires, `gate`
//! lines define one gate each (`gate g1 = AND x1 x2`), `outputs` names the
//! output wires in order, and `#` starts a comment. Gate operands are wire
//! names or the constant tokens `0` and `1`; constants normally appear only
//! in circuits produced by [`Circuit::substitute_constants`], which records
//! an assigned input as a constant operand instead of rewriting the gates
//! around it. Keeping the gate list intact under substitution is what makes
//! the clause-level view of a substituted circuit coincide with substituting
//! into the clause-level view of the original.
//!
//! Inputs and gates carry a copy tag used when a circuit is assembled from
//! replicated blocks ([`Circuit::replicate_shared`]); the tautology encoder
//! derives variable identities from these tags so that block-local wires of
//! different blocks get distinct, predictable atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::bits::BitString;
use crate::formula::CopyTag;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GateOp {
    And,
    Or,
    Xor,
    Nand,
    Not,
    Const0,
    Const1,
}

impl GateOp {
    pub fn arity(self) -> usize {
        match self {
            GateOp::And | GateOp::Or | GateOp::Xor | GateOp::Nand => 2,
            GateOp::Not => 1,
            GateOp::Const0 | GateOp::Const1 => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateOp::And => "AND",
            GateOp::Or => "OR",
            GateOp::Xor => "XOR",
            GateOp::Nand => "NAND",
            GateOp::Not => "NOT",
            GateOp::Const0 => "CONST0",
            GateOp::Const1 => "CONST1",
        }
    }

    pub fn from_name(s: &str) -> Option<GateOp> {
        Some(match s {
            "AND" => GateOp::And,
            "OR" => GateOp::Or,
            "XOR" => GateOp::Xor,
            "NAND" => GateOp::Nand,
            "NOT" => GateOp::Not,
            "CONST0" => GateOp::Const0,
            "CONST1" => GateOp::Const1,
            _ => return None,
        })
    }

    /// Applies the operation; unary ops read `a`, constants ignore both.
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateOp::And => a && b,
            GateOp::Or => a || b,
            GateOp::Xor => a ^ b,
            GateOp::Nand => !(a && b),
            GateOp::Not => !a,
            GateOp::Const0 => false,
            GateOp::Const1 => true,
        }
    }
}

/// A wire: either the `i`-th input or the output of the `i`-th gate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WireRef {
    Input(usize),
    Gate(usize),
}

/// A gate operand or circuit output: a wire or a constant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Operand {
    Wire(WireRef),
    Const(bool),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gate {
    pub name: String,
    pub op: GateOp,
    pub fanins: Vec<Operand>,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate wire name '{0}'")]
    DuplicateName(String),
    #[error("invalid wire name '{0}'")]
    InvalidName(String),
    #[error("gate '{gate}': {op} takes {expected} operand(s), got {got}")]
    Arity { gate: String, op: &'static str, expected: usize, got: usize },
    #[error("gate '{gate}' references a wire that is not defined yet")]
    ForwardReference { gate: String },
    #[error("unknown input '{0}'")]
    UnknownInput(String),
    #[error("circuit must have at least one output")]
    NoOutputs,
    #[error("output references an undefined wire")]
    BadOutput,
    #[error("input width {got}, circuit has {expected} inputs")]
    InputWidth { got: usize, expected: usize },
    #[error("range enumeration over {n} inputs exceeds the cap of {cap}")]
    RangeCapExceeded { n: usize, cap: usize },
    #[error("replication shares {shared} inputs but the circuit has {n}")]
    BadSharedCount { shared: usize, n: usize },
    #[error("replication needs at least one copy")]
    NoCopies,
}

/// Default ceiling on the input width of an exhaustive range enumeration.
pub const DEFAULT_RANGE_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct Circuit {
    pub name: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<Operand>,
    input_tags: Vec<(CopyTag, u32)>,
    gate_tags: Vec<(CopyTag, u32)>,
}

/// Structural equality: wiring, wire names and outputs, ignoring the
/// circuit-level name and copy tags (both are provenance, not structure).
impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.gates == other.gates && self.outputs == other.outputs
    }
}

impl Eq for Circuit {}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Circuit {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<Operand>,
    ) -> Result<Circuit, CircuitError> {
        let mut seen: HashSet<&str> = HashSet::new();
        for n in inputs.iter().chain(gates.iter().map(|g| &g.name)) {
            if !valid_name(n) {
                return Err(CircuitError::InvalidName(n.clone()));
            }
            if !seen.insert(n) {
                return Err(CircuitError::DuplicateName(n.clone()));
            }
        }
        for (i, gate) in gates.iter().enumerate() {
            if gate.fanins.len() != gate.op.arity() {
                return Err(CircuitError::Arity {
                    gate: gate.name.clone(),
                    op: gate.op.name(),
                    expected: gate.op.arity(),
                    got: gate.fanins.len(),
                });
            }
            for fanin in &gate.fanins {
                let ok = match fanin {
                    Operand::Const(_) => true,
                    Operand::Wire(WireRef::Input(p)) => *p < inputs.len(),
                    Operand::Wire(WireRef::Gate(t)) => *t < i,
                };
                if !ok {
                    return Err(CircuitError::ForwardReference { gate: gate.name.clone() });
                }
            }
        }
        if outputs.is_empty() {
            return Err(CircuitError::NoOutputs);
        }
        for out in &outputs {
            let ok = match out {
                Operand::Const(_) => true,
                Operand::Wire(WireRef::Input(p)) => *p < inputs.len(),
                Operand::Wire(WireRef::Gate(t)) => *t < gates.len(),
            };
            if !ok {
                return Err(CircuitError::BadOutput);
            }
        }
        let input_tags = (0..inputs.len()).map(|i| (CopyTag::Shared, i as u32)).collect();
        let gate_tags = (0..gates.len()).map(|i| (CopyTag::Shared, i as u32)).collect();
        Ok(Circuit { name: name.into(), inputs, gates, outputs, input_tags, gate_tags })
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Operand] {
        &self.outputs
    }

    pub fn input_tag(&self, i: usize) -> (CopyTag, u32) {
        self.input_tags[i]
    }

    pub fn gate_tag(&self, i: usize) -> (CopyTag, u32) {
        self.gate_tags[i]
    }

    pub fn wire_text(&self, operand: &Operand) -> &str {
        match operand {
            Operand::Const(false) => "0",
            Operand::Const(true) => "1",
            Operand::Wire(WireRef::Input(p)) => &self.inputs[*p],
            Operand::Wire(WireRef::Gate(t)) => &self.gates[*t].name,
        }
    }

    pub fn eval(&self, input: &BitString) -> Result<BitString, CircuitError> {
        if input.len() != self.inputs.len() {
            return Err(CircuitError::InputWidth { got: input.len(), expected: self.inputs.len() });
        }
        let mut wires = Vec::with_capacity(self.gates.len());
        let mut out = Vec::with_capacity(self.outputs.len());
        self.eval_into(input.bits(), &mut wires, &mut out);
        Ok(BitString::new(out))
    }

    fn operand_value(&self, operand: &Operand, input: &[bool], wires: &[bool]) -> bool {
        match operand {
            Operand::Const(b) => *b,
            Operand::Wire(WireRef::Input(p)) => input[*p],
            Operand::Wire(WireRef::Gate(t)) => wires[*t],
        }
    }

    fn eval_into(&self, input: &[bool], wires: &mut Vec<bool>, out: &mut Vec<bool>) {
        wires.clear();
        for gate in &self.gates {
            let a = gate.fanins.first().map_or(false, |f| self.operand_value(f, input, wires));
            let b = gate.fanins.get(1).map_or(false, |f| self.operand_value(f, input, wires));
            wires.push(gate.op.apply(a, b));
        }
        out.clear();
        out.extend(self.outputs.iter().map(|o| self.operand_value(o, input, wires)));
    }

    /// The set of outputs over all 2^n inputs, in lexicographic order.
    pub fn enumerate_range(&self, cap: usize) -> Result<BTreeSet<BitString>, CircuitError> {
        let n = self.inputs.len();
        if n > cap {
            return Err(CircuitError::RangeCapExceeded { n, cap });
        }
        let mut range = BTreeSet::new();
        let mut wires = Vec::new();
        let mut out = Vec::new();
        let mut input = vec![false; n];
        for x in 0..1usize << n {
            for (i, slot) in input.iter_mut().enumerate() {
                *slot = x >> (n - 1 - i) & 1 == 1;
            }
            self.eval_into(&input, &mut wires, &mut out);
            range.insert(BitString::new(out.clone()));
        }
        Ok(range)
    }

    /// Pins the named inputs to constants. Assigned inputs disappear from
    /// the input list (the remaining ones keep their order); every gate
    /// survives with the pinned inputs appearing as constant operands.
    /// The result computes the original function restricted to the
    /// assignment.
    pub fn substitute_constants(
        &self,
        assignment: &BTreeMap<String, bool>,
    ) -> Result<Circuit, CircuitError> {
        for name in assignment.keys() {
            if !self.inputs.contains(name) {
                return Err(CircuitError::UnknownInput(name.clone()));
            }
        }
        let mut kept = Vec::new();
        let mut kept_tags = Vec::new();
        let mut map: Vec<Operand> = Vec::with_capacity(self.inputs.len());
        for (p, name) in self.inputs.iter().enumerate() {
            match assignment.get(name) {
                Some(&v) => map.push(Operand::Const(v)),
                None => {
                    map.push(Operand::Wire(WireRef::Input(kept.len())));
                    kept_tags.push((self.input_tags[p].0, kept.len() as u32));
                    kept.push(name.clone());
                }
            }
        }
        let remap = |operand: &Operand| match operand {
            Operand::Wire(WireRef::Input(p)) => map[*p],
            other => *other,
        };
        let gates = self
            .gates
            .iter()
            .map(|g| Gate {
                name: g.name.clone(),
                op: g.op,
                fanins: g.fanins.iter().map(remap).collect(),
            })
            .collect();
        let outputs = self.outputs.iter().map(remap).collect();
        let mut c = Circuit::new(self.name.clone(), kept, gates, outputs)?;
        c.input_tags = kept_tags;
        c.gate_tags = self.gate_tags.clone();
        Ok(c)
    }

    /// Builds the circuit computing `x, u^1, ..., u^copies` to
    /// `(f(x, u^1), ..., f(x, u^copies))`: the first `shared` inputs are
    /// common to every copy, the rest of the input block is replicated per
    /// copy, and so is every gate. Copy-local wires are tagged with their
    /// 1-based copy index and their position within the copy.
    pub fn replicate_shared(&self, shared: usize, copies: usize) -> Result<Circuit, CircuitError> {
        if shared > self.inputs.len() {
            return Err(CircuitError::BadSharedCount { shared, n: self.inputs.len() });
        }
        if copies == 0 {
            return Err(CircuitError::NoCopies);
        }
        let per_copy = self.inputs.len() - shared;
        let mut names: HashSet<String> = self.inputs[..shared].iter().cloned().collect();
        let mut fresh = |base: String| {
            let mut candidate = base;
            while !names.insert(candidate.clone()) {
                candidate.push('_');
            }
            candidate
        };

        let mut inputs: Vec<String> = self.inputs[..shared].to_vec();
        let mut input_tags: Vec<(CopyTag, u32)> =
            (0..shared).map(|p| (CopyTag::Shared, p as u32)).collect();
        let mut gates = Vec::with_capacity(copies * self.gates.len());
        let mut gate_tags = Vec::with_capacity(copies * self.gates.len());
        let mut outputs = Vec::with_capacity(copies * self.outputs.len());

        for copy in 1..=copies {
            for (p, name) in self.inputs[shared..].iter().enumerate() {
                inputs.push(fresh(format!("c{}_{}", copy, name)));
                input_tags.push((CopyTag::Copy(copy as u32), p as u32));
            }
            let gate_base = (copy - 1) * self.gates.len();
            let map = |operand: &Operand| match operand {
                Operand::Wire(WireRef::Input(p)) if *p < shared => {
                    Operand::Wire(WireRef::Input(*p))
                }
                Operand::Wire(WireRef::Input(p)) => {
                    Operand::Wire(WireRef::Input(shared + (copy - 1) * per_copy + (p - shared)))
                }
                Operand::Wire(WireRef::Gate(t)) => Operand::Wire(WireRef::Gate(gate_base + t)),
                Operand::Const(b) => Operand::Const(*b),
            };
            for (t, gate) in self.gates.iter().enumerate() {
                gates.push(Gate {
                    name: fresh(format!("c{}_{}", copy, gate.name)),
                    op: gate.op,
                    fanins: gate.fanins.iter().map(&map).collect(),
                });
                gate_tags.push((CopyTag::Copy(copy as u32), t as u32));
            }
            outputs.extend(self.outputs.iter().map(&map));
        }

        let mut c = Circuit::new(format!("{}_rep{}", self.name, copies), inputs, gates, outputs)?;
        c.input_tags = input_tags;
        c.gate_tags = gate_tags;
        Ok(c)
    }

    /// Constructor for assembled circuits whose wires belong to named
    /// replicated blocks; tag vectors must match the wire counts.
    pub(crate) fn with_tags(
        name: impl Into<String>,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<Operand>,
        input_tags: Vec<(CopyTag, u32)>,
        gate_tags: Vec<(CopyTag, u32)>,
    ) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(name, inputs, gates, outputs)?;
        assert_eq!(input_tags.len(), c.inputs.len());
        assert_eq!(gate_tags.len(), c.gates.len());
        c.input_tags = input_tags;
        c.gate_tags = gate_tags;
        Ok(c)
    }

    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        Circuit::parse_named("circuit", text)
    }

    pub fn parse_named(name: &str, text: &str) -> Result<Circuit, CircuitError> {
        let mut inputs: Vec<String> = Vec::new();
        let mut gates: Vec<Gate> = Vec::new();
        let mut outputs: Vec<Operand> = Vec::new();
        // Wires are resolvable once declared, so references to later lines
        // come out as parse errors rather than cycles.
        let mut wires: HashMap<String, WireRef> = HashMap::new();
        let err = |line: usize, msg: String| CircuitError::Parse { line, msg };

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            match tokens.next().unwrap() {
                "inputs" => {
                    let mut any = false;
                    for name in tokens {
                        any = true;
                        if !valid_name(name) {
                            return Err(err(line, format!("invalid wire name '{}'", name)));
                        }
                        if wires.contains_key(name) {
                            return Err(err(line, format!("duplicate wire name '{}'", name)));
                        }
                        wires.insert(name.to_string(), WireRef::Input(inputs.len()));
                        inputs.push(name.to_string());
                    }
                    if !any {
                        return Err(err(line, "inputs line names no wires".into()));
                    }
                }
                "gate" => {
                    let name = tokens.next().ok_or_else(|| err(line, "missing gate name".into()))?;
                    if !valid_name(name) {
                        return Err(err(line, format!("invalid wire name '{}'", name)));
                    }
                    if tokens.next() != Some("=") {
                        return Err(err(line, "expected '=' after the gate name".into()));
                    }
                    let op_str =
                        tokens.next().ok_or_else(|| err(line, "missing gate operation".into()))?;
                    let op = GateOp::from_name(op_str)
                        .ok_or_else(|| err(line, format!("unknown operation '{}'", op_str)))?;
                    let mut fanins = Vec::new();
                    for tok in tokens {
                        let operand = match tok {
                            "0" => Operand::Const(false),
                            "1" => Operand::Const(true),
                            w => Operand::Wire(*wires.get(w).ok_or_else(|| {
                                err(line, format!("wire '{}' is not defined here", w))
                            })?),
                        };
                        fanins.push(operand);
                    }
                    if fanins.len() != op.arity() {
                        return Err(err(
                            line,
                            format!(
                                "{} takes {} operand(s), got {}",
                                op.name(),
                                op.arity(),
                                fanins.len()
                            ),
                        ));
                    }
                    if wires.contains_key(name) {
                        return Err(err(line, format!("duplicate wire name '{}'", name)));
                    }
                    wires.insert(name.to_string(), WireRef::Gate(gates.len()));
                    gates.push(Gate { name: name.to_string(), op, fanins });
                }
                "outputs" => {
                    for tok in tokens {
                        let operand = match tok {
                            "0" => Operand::Const(false),
                            "1" => Operand::Const(true),
                            w => Operand::Wire(*wires.get(w).ok_or_else(|| {
                                err(line, format!("wire '{}' is not defined here", w))
                            })?),
                        };
                        outputs.push(operand);
                    }
                }
                other => return Err(err(line, format!("unknown directive '{}'", other))),
            }
        }
        if outputs.is_empty() {
            return Err(CircuitError::NoOutputs);
        }
        Circuit::new(name, inputs, gates, outputs)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.inputs.is_empty() {
            out.push_str("inputs");
            for name in &self.inputs {
                out.push(' ');
                out.push_str(name);
            }
            out.push('\n');
        }
        for gate in &self.gates {
            out.push_str("gate ");
            out.push_str(&gate.name);
            out.push_str(" = ");
            out.push_str(gate.op.name());
            for fanin in &gate.fanins {
                out.push(' ');
                out.push_str(self.wire_text(fanin));
            }
            out.push('\n');
        }
        out.push_str("outputs");
        for o in &self.outputs {
            out.push(' ');
            out.push_str(self.wire_text(o));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Incremental construction helper for the generated circuits. Gate names
/// are auto-assigned (`t0`, `t1`, ...) unless pushed with an explicit name.
pub(crate) struct CircuitBuilder {
    inputs: Vec<String>,
    gates: Vec<Gate>,
    used: HashSet<String>,
    cached_const: [Option<Operand>; 2],
}

impl CircuitBuilder {
    pub fn new(inputs: Vec<String>) -> CircuitBuilder {
        let used = inputs.iter().cloned().collect();
        CircuitBuilder { inputs, gates: Vec::new(), used, cached_const: [None, None] }
    }

    pub fn input(&self, p: usize) -> Operand {
        Operand::Wire(WireRef::Input(p))
    }

    pub fn push(&mut self, op: GateOp, fanins: Vec<Operand>) -> Operand {
        let mut name = format!("t{}", self.gates.len());
        while !self.used.insert(name.clone()) {
            name.push('_');
        }
        self.gates.push(Gate { name, op, fanins });
        Operand::Wire(WireRef::Gate(self.gates.len() - 1))
    }

    pub fn not(&mut self, a: Operand) -> Operand {
        self.push(GateOp::Not, vec![a])
    }

    pub fn and(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateOp::And, vec![a, b])
    }

    pub fn or(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateOp::Or, vec![a, b])
    }

    pub fn xor(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateOp::Xor, vec![a, b])
    }

    pub fn nand(&mut self, a: Operand, b: Operand) -> Operand {
        self.push(GateOp::Nand, vec![a, b])
    }

    pub fn constant(&mut self, v: bool) -> Operand {
        if let Some(w) = self.cached_const[v as usize] {
            return w;
        }
        let w = self.push(if v { GateOp::Const1 } else { GateOp::Const0 }, vec![]);
        self.cached_const[v as usize] = Some(w);
        w
    }

    pub fn or_chain(&mut self, xs: &[Operand]) -> Operand {
        match xs.split_first() {
            None => self.constant(false),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.or(acc, x)),
        }
    }

    pub fn and_chain(&mut self, xs: &[Operand]) -> Operand {
        match xs.split_first() {
            None => self.constant(true),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &x| self.and(acc, x)),
        }
    }

    /// All 2^w conjunctions over the field wires, indexed by the field value
    /// read most significant bit first. Inverters are shared per field bit.
    pub fn minterms(&mut self, field: &[Operand]) -> Vec<Operand> {
        let negs: Vec<Operand> = field.iter().map(|&w| self.not(w)).collect();
        let w = field.len();
        (0..1usize << w)
            .map(|value| {
                let literals: Vec<Operand> = (0..w)
                    .map(|i| if value >> (w - 1 - i) & 1 == 1 { field[i] } else { negs[i] })
                    .collect();
                self.and_chain(&literals)
            })
            .collect()
    }

    pub fn finish(self, name: impl Into<String>, outputs: Vec<Operand>) -> Circuit {
        Circuit::new(name, self.inputs, self.gates, outputs)
            .expect("builder produced an inconsistent circuit")
    }
}
