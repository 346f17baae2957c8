//! The generator constructions: stretching maps whose range-avoidance
//! tautologies are the toolkit's object of study.
//!
//! Four families are built here. The truth-table generator maps a circuit
//! description to the described circuit's truth table. The gadget generator
//! replicates a fixed gadget function over a shared first argument; with the
//! universal circuit as the gadget function it becomes a single uniform map
//! whose gadget is chosen by the shared input. The shifted generator XORs a
//! base generator's output with one of a family of shift vectors picked by
//! extra index inputs. The combinatorial-design generator computes each
//! output bit by applying a base Boolean function to a small subset of the
//! seed, subsets pairwise overlapping in few positions.
//!
//! Every constructor returns a [`GeneratorInstance`] carrying the circuit
//! and a parameter record; each family also has a direct reference
//! evaluator, deliberately independent of the circuit machinery, that tests
//! compare against.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::{Circuit, CircuitBuilder, Gate, Operand, WireRef};
use crate::encoding::{
    decode_circuit, universal_circuit, CircuitEncoding, EncodingError,
};
use crate::formula::CopyTag;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    TruthTable,
    Gadget,
    Shifted,
    NisanWigderson,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::TruthTable => "tt",
            Family::Gadget => "gadget",
            Family::Shifted => "shifted",
            Family::NisanWigderson => "nw",
            Family::Custom => "custom",
        }
    }
}

/// A constructed generator: a circuit from n to m bits plus the parameters
/// that produced it. `stretching` records whether m > n; desk-scale
/// parameters often are not, and stay usable for everything but the
/// stretch-dependent constructions.
#[derive(Clone, PartialEq, Debug)]
pub struct GeneratorInstance {
    pub circuit: Circuit,
    pub n: usize,
    pub m: usize,
    pub family: Family,
    pub params: BTreeMap<String, String>,
    pub stretching: bool,
}

impl GeneratorInstance {
    fn new(
        circuit: Circuit,
        family: Family,
        params: BTreeMap<String, String>,
    ) -> GeneratorInstance {
        let n = circuit.input_count();
        let m = circuit.output_count();
        GeneratorInstance { circuit, n, m, family, params, stretching: m > n }
    }

    pub fn eval(&self, x: &BitString) -> BitString {
        self.circuit.eval(x).expect("input width mismatch")
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("gadget function has {inputs} inputs and {outputs} outputs, expected {expected_in} and {expected_out}")]
    BadGadgetShape { inputs: usize, outputs: usize, expected_in: usize, expected_out: usize },
    #[error("{what} = {got} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },
    #[error("{what} must be at least 1")]
    Empty { what: &'static str },
    #[error("universal gadget needs at least k+1 = {needed} gates, got s = {s}")]
    UniversalTooFewGates { needed: usize, s: usize },
    #[error("shift {index} has {got} bits, the family is over {expected} bits")]
    ShiftWidth { index: usize, got: usize, expected: usize },
    #[error("shifted generator would not stretch: base maps {n} to {m} bits and the index adds {index_width}")]
    NotStretching { n: usize, m: usize, index_width: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("degree bound d = {d} must satisfy 1 <= d < q = {q}")]
    BadDegree { d: usize, q: usize },
    #[error("{r} sets requested, only {max} distinct polynomials exist")]
    TooManySets { r: usize, max: usize },
    #[error("base table has {got} entries, a {q}-bit function needs {expected}")]
    BadTable { got: usize, q: usize, expected: usize },
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

fn ceil_log2(n: usize) -> usize {
    debug_assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Ceiling on the truth-table generator's input parameter k (the table has
/// 2^k entries, each a universal-circuit block).
pub const TT_K_CAP: usize = 4;

/// The truth-table generator: input v describes a circuit with k inputs and
/// s gates; output is the 2^k-entry truth table of the described circuit's
/// designated single output, entry order following the input value.
pub fn tt_generator(k: usize, s: usize) -> Result<GeneratorInstance, GeneratorError> {
    if k == 0 || s == 0 {
        return Err(GeneratorError::Empty { what: "k and s" });
    }
    if k > TT_K_CAP {
        return Err(GeneratorError::CapExceeded { what: "k", got: k, cap: TT_K_CAP });
    }
    let enc = CircuitEncoding::new(k, s)?;
    let block = universal_circuit(enc, 1)?;
    let code_len = enc.code_len();

    // One universal block per table entry, its evaluation inputs pinned to
    // the entry index; all blocks share the description inputs.
    let inputs: Vec<String> = (1..=code_len).map(|i| format!("v{}", i)).collect();
    let input_tags = (0..code_len).map(|p| (CopyTag::Shared, p as u32)).collect();
    let mut gates: Vec<Gate> = Vec::new();
    let mut gate_tags = Vec::new();
    let mut outputs = Vec::new();
    for entry in 0..1usize << k {
        let sigma: BTreeMap<String, bool> = (0..k)
            .map(|p| (format!("u{}", p + 1), entry >> (k - 1 - p) & 1 == 1))
            .collect();
        let pinned = block.substitute_constants(&sigma).expect("u wires exist");
        debug_assert_eq!(pinned.inputs(), inputs.as_slice());
        let base = gates.len();
        let remap = |o: &Operand| match o {
            Operand::Wire(WireRef::Gate(t)) => Operand::Wire(WireRef::Gate(base + t)),
            other => *other,
        };
        for (t, gate) in pinned.gates().iter().enumerate() {
            gates.push(Gate {
                name: format!("e{}_{}", entry, gate.name),
                op: gate.op,
                fanins: gate.fanins.iter().map(remap).collect(),
            });
            gate_tags.push((CopyTag::Copy(entry as u32 + 1), t as u32));
        }
        outputs.extend(pinned.outputs().iter().map(remap));
    }
    let circuit = Circuit::with_tags(
        format!("tt_k{}_s{}", k, s),
        inputs,
        gates,
        outputs,
        input_tags,
        gate_tags,
    )
    .expect("stacked blocks are well-formed");

    let params = BTreeMap::from([("k".into(), k.to_string()), ("s".into(), s.to_string())]);
    Ok(GeneratorInstance::new(circuit, Family::TruthTable, params))
}

/// Reference semantics of the truth-table generator: decode, then evaluate
/// the decoded circuit on every entry.
pub fn tt_reference(k: usize, s: usize, v: &BitString) -> BitString {
    let enc = CircuitEncoding::new(k, s).expect("shape validated by caller");
    let decoded = decode_circuit(v, enc, 1).expect("length validated by caller");
    BitString::new(
        (0..1usize << k)
            .map(|entry| decoded.eval(&BitString::from_index(entry, k)).expect("width").get(0))
            .collect(),
    )
}

/// A gadget function and its dimensions: f maps an ℓ-bit shared argument and
/// a k-bit per-copy argument to k+1 bits.
#[derive(Clone, PartialEq, Debug)]
pub struct GadgetSpec {
    f: Circuit,
    k: usize,
    ell: usize,
}

impl GadgetSpec {
    pub fn new(f: Circuit, k: usize, ell: usize) -> Result<GadgetSpec, GeneratorError> {
        if k == 0 || ell == 0 {
            return Err(GeneratorError::Empty { what: "k and the shared length" });
        }
        if f.input_count() != ell + k || f.output_count() != k + 1 {
            return Err(GeneratorError::BadGadgetShape {
                inputs: f.input_count(),
                outputs: f.output_count(),
                expected_in: ell + k,
                expected_out: k + 1,
            });
        }
        Ok(GadgetSpec { f, k, ell })
    }

    pub fn gadget_function(&self) -> &Circuit {
        &self.f
    }

    pub fn per_copy(&self) -> usize {
        self.k
    }

    pub fn shared(&self) -> usize {
        self.ell
    }

    pub fn copies(&self) -> usize {
        self.ell + 1
    }

    /// Input length of the assembled generator: ℓ + k(ℓ+1).
    pub fn input_len(&self) -> usize {
        self.ell + self.k * (self.ell + 1)
    }
}

/// Replicates the gadget function over ℓ+1 copies sharing the first
/// argument: N = ℓ + k(ℓ+1) inputs to (k+1)(ℓ+1) = N+1 outputs — a
/// stretching map by exactly one bit, for every spec.
pub fn gadget_generator(spec: &GadgetSpec) -> GeneratorInstance {
    let circuit = spec
        .f
        .replicate_shared(spec.ell, spec.copies())
        .expect("spec shape was validated");
    let params = BTreeMap::from([
        ("k".into(), spec.k.to_string()),
        ("ell".into(), spec.ell.to_string()),
        ("N".into(), spec.input_len().to_string()),
    ]);
    GeneratorInstance::new(circuit, Family::Gadget, params)
}

/// Reference semantics: split x into v and ℓ+1 per-copy arguments, apply f
/// to each (v, uⁱ), concatenate.
pub fn gadget_reference(spec: &GadgetSpec, x: &BitString) -> BitString {
    let v = x.slice(0, spec.ell);
    let mut out = Vec::new();
    for i in 0..spec.copies() {
        let start = spec.ell + i * spec.k;
        let u = x.slice(start, start + spec.k);
        out.extend(spec.f.eval(&v.concat(&u)).expect("width").bits().iter().copied());
    }
    BitString::new(out)
}

/// The uniform gadget: the gadget function is the universal circuit, so the
/// shared argument both selects the simulated circuit and is the argument
/// every copy shares.
pub fn universal_gadget(k: usize, s: usize) -> Result<GadgetSpec, GeneratorError> {
    if k == 0 || s == 0 {
        return Err(GeneratorError::Empty { what: "k and s" });
    }
    if s < k + 1 {
        return Err(GeneratorError::UniversalTooFewGates { needed: k + 1, s });
    }
    let enc = CircuitEncoding::new(k, s)?;
    let f = universal_circuit(enc, k + 1)?;
    GadgetSpec::new(f, k, enc.code_len())
}

/// A family of equal-length shift vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftFamily {
    shifts: Vec<BitString>,
    m: usize,
}

impl ShiftFamily {
    pub fn new(shifts: Vec<BitString>) -> Result<ShiftFamily, GeneratorError> {
        let m = match shifts.first() {
            None => return Err(GeneratorError::Empty { what: "shift count" }),
            Some(first) => first.len(),
        };
        for (index, s) in shifts.iter().enumerate() {
            if s.len() != m {
                return Err(GeneratorError::ShiftWidth { index, got: s.len(), expected: m });
            }
        }
        Ok(ShiftFamily { shifts, m })
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn count(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[BitString] {
        &self.shifts
    }

    /// Bits needed to index a shift; an index word value is reduced modulo
    /// the count, keeping the map total.
    pub fn index_width(&self) -> usize {
        ceil_log2(self.count())
    }

    pub fn shift_for(&self, raw_index: usize) -> &BitString {
        &self.shifts[raw_index % self.count()]
    }
}

/// XORs the base generator's output with a selected shift: input is the
/// base input followed by an index word; shift chosen by the word value
/// modulo the family size. Requires the result to stretch, i.e.
/// m > n + index_width.
pub fn shifted_generator(
    base: &GeneratorInstance,
    shifts: &ShiftFamily,
) -> Result<GeneratorInstance, GeneratorError> {
    if shifts.width() != base.m {
        return Err(GeneratorError::ShiftWidth {
            index: 0,
            got: shifts.width(),
            expected: base.m,
        });
    }
    let w = shifts.index_width();
    if base.m <= base.n + w {
        return Err(GeneratorError::NotStretching { n: base.n, m: base.m, index_width: w });
    }

    let base_circuit = &base.circuit;
    let names: Vec<String> = base_circuit
        .inputs()
        .iter()
        .cloned()
        .chain((1..=w).map(|i| format!("j{}", i)))
        .collect();
    let mut b = CircuitBuilder::new(names);
    for gate in base_circuit.gates() {
        b.push(gate.op, gate.fanins.clone());
    }
    // Gate t of the base is gate t here, so base output operands carry over
    // unchanged.
    let base_outputs: Vec<Operand> = base_circuit.outputs().to_vec();

    let index_field: Vec<Operand> = (0..w).map(|t| b.input(base.n + t)).collect();
    let minterms = if w == 0 { Vec::new() } else { b.minterms(&index_field) };
    let outputs: Vec<Operand> = (0..base.m)
        .map(|p| {
            let matching: Vec<Operand> = (0..minterms.len())
                .filter(|&raw| shifts.shift_for(raw).get(p))
                .map(|raw| minterms[raw])
                .collect();
            if minterms.is_empty() {
                // Single shift, no index inputs: fold the fixed shift bit.
                if shifts.shifts()[0].get(p) {
                    let sel = b.constant(true);
                    b.xor(base_outputs[p], sel)
                } else {
                    base_outputs[p]
                }
            } else if matching.is_empty() {
                base_outputs[p]
            } else {
                let sel = b.or_chain(&matching);
                b.xor(base_outputs[p], sel)
            }
        })
        .collect();
    let assembled = b.finish(format!("{}_shifted", base_circuit.name), outputs);

    // The base's wires sit first and unchanged, so they keep their block
    // tags; the index inputs and selector gates are shared machinery.
    let input_tags = (0..base.n)
        .map(|p| base_circuit.input_tag(p))
        .chain((0..w).map(|t| (CopyTag::Shared, (base.n + t) as u32)))
        .collect();
    let gate_tags = (0..base_circuit.gate_count())
        .map(|t| base_circuit.gate_tag(t))
        .chain(
            (base_circuit.gate_count()..assembled.gate_count())
                .map(|t| (CopyTag::Shared, t as u32)),
        )
        .collect();
    let circuit = Circuit::with_tags(
        assembled.name.clone(),
        assembled.inputs().to_vec(),
        assembled.gates().to_vec(),
        assembled.outputs().to_vec(),
        input_tags,
        gate_tags,
    )
    .expect("assembled circuit is well-formed");

    let params = BTreeMap::from([
        ("base".into(), base.family.as_str().to_string()),
        ("shift_count".into(), shifts.count().to_string()),
        ("index_width".into(), w.to_string()),
    ]);
    Ok(GeneratorInstance::new(circuit, Family::Shifted, params))
}

/// Reference semantics: decode the index word, reduce it modulo the count,
/// XOR the base output with that shift.
pub fn shifted_reference(
    base: &GeneratorInstance,
    shifts: &ShiftFamily,
    x: &BitString,
) -> BitString {
    let u = x.slice(0, base.n);
    let j = x.slice(base.n, x.len()).to_index();
    base.eval(&u).xor(shifts.shift_for(j))
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A combinatorial design: r many q-subsets of [q²] with pairwise
/// intersections below the degree bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NwDesign {
    q: usize,
    d: usize,
    sets: Vec<Vec<usize>>,
}

impl NwDesign {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    /// Seed length: q².
    pub fn seed_len(&self) -> usize {
        self.q * self.q
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}

/// Builds the polynomial design: set i is the graph {(a, p_i(a)) : a ∈ F_q}
/// of the i-th polynomial of degree < d over F_q, flattened into [q²] as
/// a·q + p_i(a). Coefficients are the base-q digits of i, least significant
/// digit as the constant term. Distinct polynomials of degree < d agree on
/// at most d−1 points, bounding pairwise intersections.
pub fn nw_design(q: usize, d: usize, r: usize) -> Result<NwDesign, GeneratorError> {
    if !is_prime(q) {
        return Err(GeneratorError::NotPrime(q));
    }
    if d == 0 || d >= q {
        return Err(GeneratorError::BadDegree { d, q });
    }
    let max = q.checked_pow(d as u32).unwrap_or(usize::MAX);
    if r > max {
        return Err(GeneratorError::TooManySets { r, max });
    }
    if r == 0 {
        return Err(GeneratorError::Empty { what: "set count" });
    }
    let sets = (0..r)
        .map(|i| {
            let mut coeffs = Vec::with_capacity(d);
            let mut rest = i;
            for _ in 0..d {
                coeffs.push(rest % q);
                rest /= q;
            }
            (0..q)
                .map(|a| {
                    // Horner evaluation of p_i at a, everything mod q.
                    let p = coeffs.iter().rev().fold(0, |acc, &c| (acc * a + c) % q);
                    a * q + p
                })
                .collect()
        })
        .collect();
    Ok(NwDesign { q, d, sets })
}

/// The base function plugged into the design generator, as an explicit
/// truth table over q bits (index = restricted-seed value, high bit first).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseTable {
    pub name: String,
    pub table: Vec<bool>,
}

impl BaseTable {
    pub fn parity(q: usize) -> BaseTable {
        BaseTable {
            name: "parity".into(),
            table: (0..1usize << q).map(|v| v.count_ones() % 2 == 1).collect(),
        }
    }

    pub fn majority(q: usize) -> BaseTable {
        BaseTable {
            name: "majority".into(),
            table: (0..1usize << q).map(|v| v.count_ones() as usize * 2 > q).collect(),
        }
    }

    pub fn constant(q: usize, value: bool) -> BaseTable {
        BaseTable {
            name: if value { "const1".into() } else { "const0".into() },
            table: vec![value; 1 << q],
        }
    }

    pub fn random(q: usize, rng: &mut impl Rng) -> BaseTable {
        BaseTable { name: "random".into(), table: (0..1usize << q).map(|_| rng.gen()).collect() }
    }

    pub fn eval(&self, index: usize) -> bool {
        self.table[index]
    }
}

/// The design generator: output bit i applies the base function to the seed
/// bits at set i's positions (ascending). Each output is a sum-of-minterms
/// block over its q-bit window.
pub fn nw_generator(
    design: &NwDesign,
    base: &BaseTable,
    r: usize,
) -> Result<GeneratorInstance, GeneratorError> {
    let q = design.q;
    if base.table.len() != 1 << q {
        return Err(GeneratorError::BadTable { got: base.table.len(), q, expected: 1 << q });
    }
    if r == 0 {
        return Err(GeneratorError::Empty { what: "output count" });
    }
    if r > design.sets.len() {
        return Err(GeneratorError::TooManySets { r, max: design.sets.len() });
    }

    let names: Vec<String> = (1..=design.seed_len()).map(|i| format!("y{}", i)).collect();
    let mut b = CircuitBuilder::new(names);
    let outputs: Vec<Operand> = design.sets[..r]
        .iter()
        .map(|set| {
            let window: Vec<Operand> = set.iter().map(|&pos| b.input(pos)).collect();
            let ones: Vec<usize> = (0..base.table.len()).filter(|&v| base.table[v]).collect();
            if ones.is_empty() {
                return b.constant(false);
            }
            if ones.len() == base.table.len() {
                return b.constant(true);
            }
            let negs: Vec<Operand> = window.iter().map(|&wire| b.not(wire)).collect();
            let minterms: Vec<Operand> = ones
                .iter()
                .map(|&v| {
                    let literals: Vec<Operand> = (0..q)
                        .map(|t| if v >> (q - 1 - t) & 1 == 1 { window[t] } else { negs[t] })
                        .collect();
                    b.and_chain(&literals)
                })
                .collect();
            b.or_chain(&minterms)
        })
        .collect();
    let circuit = b.finish(format!("nw_q{}_d{}_{}", q, design.d, base.name), outputs);

    let params = BTreeMap::from([
        ("q".into(), q.to_string()),
        ("d".into(), design.d.to_string()),
        ("r".into(), r.to_string()),
        ("base".into(), base.name.clone()),
    ]);
    Ok(GeneratorInstance::new(circuit, Family::NisanWigderson, params))
}

/// Reference semantics: restrict the seed to each set and look the value up
/// in the base table.
pub fn nw_reference(design: &NwDesign, base: &BaseTable, r: usize, seed: &BitString) -> BitString {
    BitString::new(
        design.sets[..r]
            .iter()
            .map(|set| {
                let value = set.iter().fold(0usize, |acc, &pos| acc << 1 | seed.get(pos) as usize);
                base.eval(value)
            })
            .collect(),
    )
}
