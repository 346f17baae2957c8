//! Fixed-width binary descriptions of circuits, and the universal circuit
//! that evaluates a described circuit on a separate input block.
//!
//! A description with parameters `(k, s)` lists `s` gates. Each gate takes
//! `2 + 2w` bits, `w = ceil(log2(k + s))`: a 2-bit operation (`00` AND,
//! `01` OR, `10` XOR, `11` NAND) and two `w`-bit fanin fields, most
//! significant bit first. Gate `i` (0-based) may use the `k` inputs and the
//! `i` earlier gates, so a fanin field is reduced modulo `k + i`; the
//! reduction makes decoding total — every bit string of the right length
//! names a circuit, which the generator constructions rely on.

use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Circuit, CircuitBuilder, Gate, GateOp, Operand, WireRef};

/// Shape of a circuit description: `k` inputs, `s` gates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircuitEncoding {
    k: usize,
    s: usize,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum EncodingError {
    #[error("encoding needs at least one input and one gate (got k={k}, s={s})")]
    EmptyShape { k: usize, s: usize },
    #[error("code is {got} bits, this encoding takes {expected}")]
    CodeLength { got: usize, expected: usize },
    #[error("{requested} output wires requested, circuit description has {gates} gates")]
    BadOutputCount { requested: usize, gates: usize },
    #[error("gate '{gate}': {op} has no 2-bit opcode")]
    UnencodableOp { gate: String, op: &'static str },
    #[error("gate '{gate}': constant operands cannot be encoded")]
    UnencodableConst { gate: String },
    #[error("circuit has {got} {what}, the encoding expects {expected}")]
    ShapeMismatch { what: &'static str, got: usize, expected: usize },
}

/// The four encodable operations, indexed by opcode.
const ENCODED_OPS: [GateOp; 4] = [GateOp::And, GateOp::Or, GateOp::Xor, GateOp::Nand];

fn opcode_of(op: GateOp) -> Option<usize> {
    ENCODED_OPS.iter().position(|&o| o == op)
}

fn ceil_log2(n: usize) -> usize {
    debug_assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

impl CircuitEncoding {
    pub fn new(k: usize, s: usize) -> Result<CircuitEncoding, EncodingError> {
        if k == 0 || s == 0 {
            return Err(EncodingError::EmptyShape { k, s });
        }
        Ok(CircuitEncoding { k, s })
    }

    pub fn input_count(&self) -> usize {
        self.k
    }

    pub fn gate_count(&self) -> usize {
        self.s
    }

    /// Width of one fanin field: enough bits to name any of the k + s − 1
    /// wires a fanin could refer to.
    pub fn field_width(&self) -> usize {
        ceil_log2(self.k + self.s)
    }

    /// Bits per described gate: opcode plus two fanin fields.
    pub fn gate_span(&self) -> usize {
        2 + 2 * self.field_width()
    }

    /// Total description length.
    pub fn code_len(&self) -> usize {
        self.s * self.gate_span()
    }
}

fn wire_for(index: usize, k: usize) -> Operand {
    if index < k {
        Operand::Wire(WireRef::Input(index))
    } else {
        Operand::Wire(WireRef::Gate(index - k))
    }
}

/// Decodes a description into a circuit named `x1..xk`, `g1..gs`, with the
/// last `output_count` gate wires (in gate order) designated as outputs.
/// Total: every code of the right length decodes.
pub fn decode_circuit(
    code: &BitString,
    enc: CircuitEncoding,
    output_count: usize,
) -> Result<Circuit, EncodingError> {
    if code.len() != enc.code_len() {
        return Err(EncodingError::CodeLength { got: code.len(), expected: enc.code_len() });
    }
    if output_count == 0 || output_count > enc.s {
        return Err(EncodingError::BadOutputCount { requested: output_count, gates: enc.s });
    }
    let w = enc.field_width();
    let span = enc.gate_span();
    let inputs: Vec<String> = (1..=enc.k).map(|i| format!("x{}", i)).collect();
    let mut gates = Vec::with_capacity(enc.s);
    for i in 0..enc.s {
        let base = i * span;
        let op = ENCODED_OPS[(code.get(base) as usize) << 1 | code.get(base + 1) as usize];
        let field = |start: usize| code.slice(start, start + w).to_index() % (enc.k + i);
        let fanins = vec![
            wire_for(field(base + 2), enc.k),
            wire_for(field(base + 2 + w), enc.k),
        ];
        gates.push(Gate { name: format!("g{}", i + 1), op, fanins });
    }
    let outputs =
        (enc.s - output_count..enc.s).map(|t| Operand::Wire(WireRef::Gate(t))).collect();
    Ok(Circuit::new(format!("decoded_k{}_s{}", enc.k, enc.s), inputs, gates, outputs)
        .expect("decoded circuits are well-formed by construction"))
}

/// Writes a circuit as a description. The circuit must match the encoding's
/// shape exactly and use only the four encodable operations with wire
/// operands; fanin fields are written unreduced, so decoding gives back the
/// same wiring.
pub fn encode_circuit(c: &Circuit, enc: CircuitEncoding) -> Result<BitString, EncodingError> {
    if c.input_count() != enc.k {
        return Err(EncodingError::ShapeMismatch {
            what: "inputs",
            got: c.input_count(),
            expected: enc.k,
        });
    }
    if c.gate_count() != enc.s {
        return Err(EncodingError::ShapeMismatch {
            what: "gates",
            got: c.gate_count(),
            expected: enc.s,
        });
    }
    let w = enc.field_width();
    let mut bits = Vec::with_capacity(enc.code_len());
    let push_field = |bits: &mut Vec<bool>, value: usize| {
        for t in 0..w {
            bits.push(value >> (w - 1 - t) & 1 == 1);
        }
    };
    for gate in c.gates() {
        let opcode = opcode_of(gate.op).ok_or_else(|| EncodingError::UnencodableOp {
            gate: gate.name.clone(),
            op: gate.op.name(),
        })?;
        bits.push(opcode & 2 != 0);
        bits.push(opcode & 1 != 0);
        for fanin in &gate.fanins {
            let index = match fanin {
                Operand::Wire(WireRef::Input(p)) => *p,
                Operand::Wire(WireRef::Gate(t)) => enc.k + t,
                Operand::Const(_) => {
                    return Err(EncodingError::UnencodableConst { gate: gate.name.clone() })
                }
            };
            push_field(&mut bits, index);
        }
    }
    Ok(BitString::new(bits))
}

/// Selects `values[field mod modulus]` with a minterm tree over the field
/// wires. Every field value picks exactly one candidate, so the OR over the
/// guarded candidates is the selected value.
fn mux_field(
    b: &mut CircuitBuilder,
    field: &[Operand],
    values: &[Operand],
    modulus: usize,
) -> Operand {
    let minterms = b.minterms(field);
    let picked: Vec<Operand> = (0..modulus)
        .map(|j| {
            let matching: Vec<Operand> =
                (j..minterms.len()).step_by(modulus).map(|rv| minterms[rv]).collect();
            let guard = b.or_chain(&matching);
            b.and(guard, values[j])
        })
        .collect();
    b.or_chain(&picked)
}

/// Builds the circuit `U(v, u)` that evaluates the circuit described by `v`
/// on input `u`: inputs are the `code_len` description bits `v1..` followed
/// by `u1..uk`; outputs are the simulated circuit's last `output_count` gate
/// wires. For every fixed `v`, `U(v, ·)` computes what
/// [`decode_circuit`]`(v)` computes.
pub fn universal_circuit(
    enc: CircuitEncoding,
    output_count: usize,
) -> Result<Circuit, EncodingError> {
    if output_count == 0 || output_count > enc.s {
        return Err(EncodingError::BadOutputCount { requested: output_count, gates: enc.s });
    }
    let w = enc.field_width();
    let span = enc.gate_span();
    let names: Vec<String> = (1..=enc.code_len())
        .map(|i| format!("v{}", i))
        .chain((1..=enc.k).map(|i| format!("u{}", i)))
        .collect();
    let mut b = CircuitBuilder::new(names);

    // Simulated wire values: the u inputs, then one entry per decoded gate.
    let mut values: Vec<Operand> = (0..enc.k).map(|p| b.input(enc.code_len() + p)).collect();
    for i in 0..enc.s {
        let base = i * span;
        let field1: Vec<Operand> = (0..w).map(|t| b.input(base + 2 + t)).collect();
        let field2: Vec<Operand> = (0..w).map(|t| b.input(base + 2 + w + t)).collect();
        let a = mux_field(&mut b, &field1, &values, enc.k + i);
        let bb = mux_field(&mut b, &field2, &values, enc.k + i);
        let candidates =
            [b.and(a, bb), b.or(a, bb), b.xor(a, bb), b.nand(a, bb)];
        let op_minterms = b.minterms(&[b.input(base), b.input(base + 1)]);
        let picked: Vec<Operand> = candidates
            .iter()
            .zip(&op_minterms)
            .map(|(&cand, &min)| b.and(min, cand))
            .collect();
        values.push(b.or_chain(&picked));
    }
    let outputs = values[enc.k + enc.s - output_count..].to_vec();
    Ok(b.finish(format!("universal_k{}_s{}", enc.k, enc.s), outputs))
}
