//! Desk-scale verification of the proof-pipeline steps that the generator
//! constructions feed: shift covering of the output space, translation of
//! shifted tautologies to base tautologies, range-disjunction axioms, the
//! gadget decomposition identity, out-of-range witness search, and the
//! disjunctions whose hardness the theory is about.
//!
//! Every operation here is exact (exhaustive sweeps behind caps) except the
//! Monte Carlo coverage estimate, whose randomness is fully determined by a
//! seed and a trial index.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bits::BitString;
use crate::circuit::CircuitError;
use crate::formula::{
    self, clause_multiset_eq, dotted_or, substitute, AtomId, CopyTag, DottedDisjunction,
    Formula, FormulaError, Namespace, DEFAULT_ATOM_CAP,
};
use crate::generators::{
    gadget_generator, shifted_generator, GadgetSpec, GeneratorError, GeneratorInstance,
    ShiftFamily,
};
use crate::semantic::equivalent_under_projection;
use crate::tau::{tau_formula, TauError, TauInstance};

/// Output-space width cap for the exact covering sweep (the bitset has 2^m
/// entries).
pub const COVER_M_CAP: usize = 20;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("{what} = {got} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },
    #[error("{what} is {got} bits, expected {expected}")]
    WidthMismatch { what: &'static str, got: usize, expected: usize },
    #[error("shift index {index} out of range for {count} shifts")]
    BadIndex { index: usize, count: usize },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

/// Exact coverage verdict for one explicit set and one shift family.
#[derive(Clone, PartialEq, Debug)]
pub struct CoverReport {
    pub m: usize,
    pub shift_count: usize,
    pub set_size: usize,
    pub covered: bool,
    /// First uncovered points in ascending order, at most ten.
    pub uncovered: Vec<BitString>,
    pub uncovered_count: usize,
    /// 1 − (σ−1)^{−n'}·2^m, present when σ was supplied and the set is
    /// dense enough for the bound's hypothesis.
    pub bound: Option<f64>,
}

impl CoverReport {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "shift_count": self.shift_count,
            "set_size": self.set_size,
            "covered": self.covered,
            "uncovered": self.uncovered.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "uncovered_count": self.uncovered_count,
            "bound": self.bound,
        })
    }
}

fn set_to_bitset(
    set: &BTreeSet<BitString>,
    m: usize,
) -> Result<Vec<bool>, ExperimentError> {
    if m > COVER_M_CAP {
        return Err(ExperimentError::CapExceeded { what: "m", got: m, cap: COVER_M_CAP });
    }
    let mut bitset = vec![false; 1usize << m];
    for y in set {
        if y.len() != m {
            return Err(ExperimentError::WidthMismatch {
                what: "set member",
                got: y.len(),
                expected: m,
            });
        }
        bitset[y.to_index()] = true;
    }
    Ok(bitset)
}

/// Returns the first point not covered, sweeping y ascending; shifts are
/// given as index words so y ⊕ s is integer XOR.
fn first_uncovered(bitset: &[bool], shifts: &[usize], from: usize) -> Option<usize> {
    (from..bitset.len()).find(|&y| !shifts.iter().any(|&s| bitset[y ^ s]))
}

/// The coverage lower bound 1 − (σ−1)^{−n'}·2^m, valid only when the
/// complement is small: |A| ≥ (1 − 1/(σ−1))·2^m.
fn coverage_bound(m: usize, set_size: usize, shift_count: usize, sigma: usize) -> Option<f64> {
    if sigma < 2 {
        return None;
    }
    let total = 1u128 << m;
    let dense_enough =
        (set_size as u128) * (sigma as u128 - 1) >= (sigma as u128 - 2) * total;
    if !dense_enough {
        return None;
    }
    Some(1.0 - (total as f64) / ((sigma - 1) as f64).powi(shift_count as i32))
}

/// Decides exactly whether every m-bit point lands in some shift of the
/// set: y is covered iff y ⊕ s_j ∈ A for some j.
pub fn sipser_cover_check(
    set: &BTreeSet<BitString>,
    shifts: &ShiftFamily,
    sigma: Option<usize>,
) -> Result<CoverReport, ExperimentError> {
    let m = shifts.width();
    let bitset = set_to_bitset(set, m)?;
    let shift_words: Vec<usize> = shifts.shifts().iter().map(|s| s.to_index()).collect();

    let mut uncovered = Vec::new();
    let mut uncovered_count = 0;
    let mut y = 0;
    while let Some(bad) = first_uncovered(&bitset, &shift_words, y) {
        uncovered_count += 1;
        if uncovered.len() < 10 {
            uncovered.push(BitString::from_index(bad, m));
        }
        y = bad + 1;
    }

    Ok(CoverReport {
        m,
        shift_count: shifts.count(),
        set_size: set.len(),
        covered: uncovered_count == 0,
        uncovered,
        uncovered_count,
        bound: sigma.and_then(|s| coverage_bound(m, set.len(), shifts.count(), s)),
    })
}

/// Monte Carlo estimate of the probability that a uniformly random shift
/// tuple covers the space.
#[derive(Clone, PartialEq, Debug)]
pub struct CoverProbabilityReport {
    pub m: usize,
    pub set_size: usize,
    pub shift_count: usize,
    pub trials: usize,
    pub seed: u64,
    pub covered_trials: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub bound: Option<f64>,
    /// Whether the interval is statistically consistent with the bound:
    /// its lower end is not more than three error-widths below it.
    pub bound_consistent: Option<bool>,
}

impl CoverProbabilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "set_size": self.set_size,
            "shift_count": self.shift_count,
            "trials": self.trials,
            "seed": self.seed,
            "covered_trials": self.covered_trials,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "wilson_low": self.wilson_low,
            "wilson_high": self.wilson_high,
            "bound": self.bound,
            "bound_consistent": self.bound_consistent,
        })
    }
}

fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (((center - half) / denom).max(0.0), ((center + half) / denom).min(1.0))
}

/// Estimates Pr over uniform shift tuples (s_1..s_{n'}) that the set's
/// shifts cover {0,1}^m. Trial t draws from the seeded stream t+1, so
/// results are independent of scheduling and stream 0 stays free for
/// sampling the set itself.
pub fn cover_probability(
    set: &BTreeSet<BitString>,
    shift_count: usize,
    trials: usize,
    seed: u64,
    m: usize,
    sigma: Option<usize>,
) -> Result<CoverProbabilityReport, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    if shift_count == 0 {
        return Err(ExperimentError::CapExceeded { what: "shift count", got: 0, cap: 0 });
    }
    let bitset = set_to_bitset(set, m)?;

    let mut covered_trials = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let shift_words: Vec<usize> =
            (0..shift_count).map(|_| rng.gen_range(0..1usize << m)).collect();
        if first_uncovered(&bitset, &shift_words, 0).is_none() {
            covered_trials += 1;
        }
    }

    let estimate = covered_trials as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    let (wilson_low, wilson_high) = wilson_interval(covered_trials, trials);
    let bound = sigma.and_then(|s| coverage_bound(m, set.len(), shift_count, s));
    // The analytic error is zero at the boundary estimates 0 and 1, where
    // the Wilson half-width still reflects the trial count; take the wider.
    let scale = std_error.max((wilson_high - wilson_low) / 2.0);
    let bound_consistent = bound.map(|b| wilson_low >= b - 3.0 * scale);

    Ok(CoverProbabilityReport {
        m,
        set_size: set.len(),
        shift_count,
        trials,
        seed,
        covered_trials,
        estimate,
        std_error,
        wilson_low,
        wilson_high,
        bound,
        bound_consistent,
    })
}

/// Checks the semantic content of the shift-translation step: pinning the
/// index inputs of the shifted generator's tautology candidate to j turns
/// it into a formula equivalent to the base tautology candidate for
/// a = b ⊕ s_j, once the selector machinery's atoms are projected out.
pub fn shift_translation_check(
    base: &GeneratorInstance,
    shifts: &ShiftFamily,
    a: &BitString,
    j: usize,
) -> Result<bool, ExperimentError> {
    if a.len() != base.m {
        return Err(ExperimentError::WidthMismatch {
            what: "target a",
            got: a.len(),
            expected: base.m,
        });
    }
    if j >= shifts.count() {
        return Err(ExperimentError::BadIndex { index: j, count: shifts.count() });
    }
    let b = a.xor(shifts.shift_for(j));
    shift_translation_check_with_target(base, shifts, a, j, &b)
}

/// The same check with the shifted target supplied explicitly, so callers
/// can demonstrate that a mismatched target fails.
pub fn shift_translation_check_with_target(
    base: &GeneratorInstance,
    shifts: &ShiftFamily,
    a: &BitString,
    j: usize,
    b: &BitString,
) -> Result<bool, ExperimentError> {
    if a.len() != base.m {
        return Err(ExperimentError::WidthMismatch {
            what: "target a",
            got: a.len(),
            expected: base.m,
        });
    }
    if j >= shifts.count() {
        return Err(ExperimentError::BadIndex { index: j, count: shifts.count() });
    }
    let shifted = shifted_generator(base, shifts)?;
    let base_tau = tau_formula(&base.circuit, a, Namespace::Root, CopyTag::Shared)?;
    let shifted_tau = tau_formula(&shifted.circuit, b, Namespace::Root, CopyTag::Shared)?;

    // Pin the index inputs (the w inputs after the base's) to j's bits.
    let w = shifts.index_width();
    let sigma = (0..w)
        .map(|t| {
            let atom = AtomId::input(Namespace::Root, CopyTag::Shared, (base.n + t) as u32);
            (atom, j >> (w - 1 - t) & 1 == 1)
        })
        .collect();
    let pinned = substitute(&shifted_tau.tau, &sigma);

    let shared: Vec<AtomId> = base_tau.tau.atoms().into_iter().collect();
    let shared_set: BTreeSet<AtomId> = shared.iter().copied().collect();
    let aux: Vec<AtomId> =
        pinned.atoms().into_iter().filter(|a| !shared_set.contains(a)).collect();
    let total = shared.len() + aux.len();
    if total > DEFAULT_ATOM_CAP {
        return Err(ExperimentError::CapExceeded {
            what: "atoms",
            got: total,
            cap: DEFAULT_ATOM_CAP,
        });
    }
    Ok(equivalent_under_projection(&pinned, &base_tau.tau, &shared, &aux))
}

/// A disjunction of tautology candidates over pairwise-fresh atom
/// namespaces, one per target.
#[derive(Clone, Debug)]
pub struct TauDisjunction {
    pub targets: Vec<BitString>,
    pub instances: Vec<TauInstance>,
    pub disjunction: DottedDisjunction,
}

impl TauDisjunction {
    pub fn to_json(&self) -> Value {
        json!({
            "disjuncts": self.targets.len(),
            "targets": self.targets.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "clauses": self.instances.iter().map(|i| i.cnf.clause_count()).collect::<Vec<_>>(),
        })
    }
}

fn disjunction_over_targets(
    circuit: &crate::circuit::Circuit,
    targets: Vec<BitString>,
) -> Result<TauDisjunction, ExperimentError> {
    let instances: Vec<TauInstance> = targets
        .iter()
        .enumerate()
        .map(|(d, b)| {
            tau_formula(circuit, b, Namespace::Disjunct(d as u32), CopyTag::Shared)
        })
        .collect::<Result<_, _>>()?;
    let disjunction = dotted_or(instances.iter().map(|i| i.tau.clone()).collect())?;
    Ok(TauDisjunction { targets, instances, disjunction })
}

/// The extra-axiom disjunction: one tautology candidate for the second
/// generator per point of the first generator's range (deduplicated, in
/// ascending order, disjunct d built in namespace d). The whole disjunction
/// is a tautology exactly when some range point of the first generator
/// escapes the second's range.
pub fn axiom_disjunction(
    h: &GeneratorInstance,
    gadf: &GeneratorInstance,
    range_cap: usize,
) -> Result<TauDisjunction, ExperimentError> {
    if h.m != gadf.m {
        return Err(ExperimentError::WidthMismatch {
            what: "output widths",
            got: gadf.m,
            expected: h.m,
        });
    }
    let targets: Vec<BitString> =
        h.circuit.enumerate_range(range_cap)?.into_iter().collect();
    disjunction_over_targets(&gadf.circuit, targets)
}

/// One tautology candidate per listed target, each in its own namespace;
/// this is the shape of disjunction whose provability the hardness notion
/// quantifies over.
pub fn vee_hard_disjunction(
    g: &GeneratorInstance,
    targets: &[BitString],
) -> Result<TauDisjunction, ExperimentError> {
    for b in targets {
        if b.len() != g.m {
            return Err(ExperimentError::WidthMismatch {
                what: "target",
                got: b.len(),
                expected: g.m,
            });
        }
    }
    disjunction_over_targets(&g.circuit, targets.to_vec())
}

/// Both routes from the replicated gadget's tautology candidate to the
/// per-copy decomposition, with the verdicts comparing them.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    /// Per-copy targets b¹..b^{ℓ+1}, each of width k+1.
    pub targets: Vec<BitString>,
    /// τ of the pinned gadget function at b^i, atoms in copy i's namespace.
    pub disjuncts: Vec<TauInstance>,
    /// Substitute the shared bits into the assembled tautology candidate.
    pub path_a: Formula,
    /// Pin the circuit first, then disjoin the per-copy candidates.
    pub path_b: Formula,
    pub clause_multiset_eq: bool,
    pub logically_equivalent: bool,
    pub atoms_disjoint: bool,
}

impl DecompositionReport {
    pub fn all_verdicts_hold(&self) -> bool {
        self.clause_multiset_eq && self.logically_equivalent && self.atoms_disjoint
    }

    pub fn to_json(&self) -> Value {
        json!({
            "disjuncts": self.targets.len(),
            "targets": self.targets.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "clause_multiset_eq": self.clause_multiset_eq,
            "logically_equivalent": self.logically_equivalent,
            "atoms_disjoint": self.atoms_disjoint,
        })
    }
}

/// Demonstrates the decomposition identity on one instance: substituting
/// the shared argument c into τ(gadget)_b equals, clause for clause, the
/// disjunction over copies of τ(f with v pinned to c) at the b-slices.
pub fn gadget_substitute_and_decompose(
    spec: &GadgetSpec,
    c: &BitString,
    b: &BitString,
    atom_cap: usize,
) -> Result<DecompositionReport, ExperimentError> {
    let ell = spec.shared();
    let k = spec.per_copy();
    if c.len() != ell {
        return Err(ExperimentError::WidthMismatch {
            what: "shared argument c",
            got: c.len(),
            expected: ell,
        });
    }
    let gadf = gadget_generator(spec);
    if b.len() != gadf.m {
        return Err(ExperimentError::WidthMismatch {
            what: "target b",
            got: b.len(),
            expected: gadf.m,
        });
    }

    // Path A: build the assembled candidate, then substitute the shared
    // input atoms.
    let assembled = tau_formula(&gadf.circuit, b, Namespace::Root, CopyTag::Shared)?;
    let sigma = (0..ell)
        .map(|p| (AtomId::input(Namespace::Root, CopyTag::Shared, p as u32), c.get(p)))
        .collect();
    let path_a = substitute(&assembled.tau, &sigma);

    // Path B: pin the gadget function's shared inputs at the circuit
    // level, then build one candidate per copy.
    let f = spec.gadget_function();
    let name_sigma = (0..ell).map(|p| (f.inputs()[p].clone(), c.get(p))).collect();
    let pinned_f = f.substitute_constants(&name_sigma)?;
    let mut targets = Vec::with_capacity(spec.copies());
    let mut disjuncts = Vec::with_capacity(spec.copies());
    for i in 0..spec.copies() {
        let slice = b.slice(i * (k + 1), (i + 1) * (k + 1));
        let inst = tau_formula(
            &pinned_f,
            &slice,
            Namespace::Root,
            CopyTag::Copy(i as u32 + 1),
        )?;
        targets.push(slice);
        disjuncts.push(inst);
    }
    let atoms_disjoint = {
        let mut seen: BTreeSet<AtomId> = BTreeSet::new();
        disjuncts
            .iter()
            .all(|inst| inst.tau.atoms().into_iter().all(|a| seen.insert(a)))
    };
    let path_b = Formula::Or(disjuncts.iter().map(|i| i.tau.clone()).collect());

    let clause_eq = clause_multiset_eq(&path_a, &path_b)?;
    let logically_equivalent = formula::equivalent(&path_a, &path_b, atom_cap)?;

    Ok(DecompositionReport {
        targets,
        disjuncts,
        path_a,
        path_b,
        clause_multiset_eq: clause_eq,
        logically_equivalent,
        atoms_disjoint,
    })
}

/// Result of looking for a point of the first range outside the second.
#[derive(Clone, PartialEq, Debug)]
pub struct OutsideRangeReport {
    /// Lexicographically least such point, when one exists.
    pub witness: Option<BitString>,
    /// An input the first generator maps to the witness.
    pub preimage: Option<BitString>,
    pub h_range_size: usize,
    pub g_range_size: usize,
}

impl OutsideRangeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "witness": self.witness.as_ref().map(|b| b.to_string()),
            "preimage": self.preimage.as_ref().map(|b| b.to_string()),
            "h_range_size": self.h_range_size,
            "g_range_size": self.g_range_size,
        })
    }
}

/// Searches Rng(h) \ Rng(g) exhaustively. A found witness is re-verified by
/// direct evaluation on both sides: a preimage under h is produced, and
/// every g input is re-checked to miss it. At toy scale the difference may
/// be empty; that is reported, not treated as an error.
pub fn find_outside_range(
    h: &GeneratorInstance,
    g: &GeneratorInstance,
    range_cap: usize,
) -> Result<OutsideRangeReport, ExperimentError> {
    if h.m != g.m {
        return Err(ExperimentError::WidthMismatch {
            what: "output widths",
            got: g.m,
            expected: h.m,
        });
    }
    let h_range = h.circuit.enumerate_range(range_cap)?;
    let g_range = g.circuit.enumerate_range(range_cap)?;
    let witness = h_range.iter().find(|b| !g_range.contains(*b)).cloned();

    let mut preimage = None;
    if let Some(b) = &witness {
        for x in 0..1usize << h.n {
            let input = BitString::from_index(x, h.n);
            if &h.eval(&input) == b {
                preimage = Some(input);
                break;
            }
        }
        assert!(preimage.is_some(), "witness came from the enumerated range");
        for x in 0..1usize << g.n {
            assert_ne!(
                &g.eval(&BitString::from_index(x, g.n)),
                b,
                "witness re-check: claimed point must miss the second range"
            );
        }
    }

    Ok(OutsideRangeReport {
        witness,
        preimage,
        h_range_size: h_range.len(),
        g_range_size: g_range.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::circuit::Circuit;
    use crate::generators::Family;
    use crate::random::{random_bitstring, random_subset, seeded_rng};
    use crate::tau::verify_tau;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn set_of(strings: &[&str]) -> BTreeSet<BitString> {
        strings.iter().map(|s| bits(s)).collect()
    }

    fn custom(circuit: Circuit) -> GeneratorInstance {
        let n = circuit.input_count();
        let m = circuit.output_count();
        GeneratorInstance {
            circuit,
            n,
            m,
            family: Family::Custom,
            params: BTreeMap::new(),
            stretching: m > n,
        }
    }

    fn padding_generator() -> GeneratorInstance {
        custom(
            Circuit::parse("inputs x1 x2\ngate c0 = CONST0\noutputs x1 x2 c0 c0\n").unwrap(),
        )
    }

    /// gad for f(v, u) = (u, u xor v) with k = 1, ℓ = 1.
    fn example_gadget() -> (GadgetSpec, GeneratorInstance) {
        let f = Circuit::parse("inputs v u\ngate g1 = XOR u v\noutputs u g1\n").unwrap();
        let spec = GadgetSpec::new(f, 1, 1).unwrap();
        let gad = gadget_generator(&spec);
        (spec, gad)
    }

    #[test]
    fn hand_checked_cover_verdicts() {
        // Two shifts of {00,01,11}: 00 and 01 are in A directly, 10⊕10=00
        // and 11⊕00=11 are in A, so everything is covered.
        let shifts = ShiftFamily::new(vec![bits("00"), bits("10")]).unwrap();
        let report = sipser_cover_check(&set_of(&["00", "01", "11"]), &shifts, None).unwrap();
        assert!(report.covered);
        assert!(report.uncovered.is_empty());

        // A single zero shift covers nothing outside the set itself.
        let identity = ShiftFamily::new(vec![bits("00")]).unwrap();
        let report = sipser_cover_check(&set_of(&["00", "01", "11"]), &identity, None).unwrap();
        assert!(!report.covered);
        assert_eq!(report.uncovered, vec![bits("10")]);
        assert_eq!(report.uncovered_count, 1);

        // The full set is covered under any shifts.
        let full = set_of(&["00", "01", "10", "11"]);
        let report = sipser_cover_check(&full, &shifts, None).unwrap();
        assert!(report.covered);
    }

    #[test]
    fn covered_iff_no_uncovered_witnesses() {
        let mut rng = seeded_rng(42);
        for m in 1..=6usize {
            for _ in 0..5 {
                let size = rng.gen_range(1..=1usize << m);
                let set: BTreeSet<BitString> = random_subset(&mut rng, 1 << m, size)
                    .into_iter()
                    .map(|i| BitString::from_index(i, m))
                    .collect();
                let count = rng.gen_range(1..=3usize);
                let shifts = ShiftFamily::new(
                    (0..count).map(|_| random_bitstring(&mut rng, m)).collect(),
                )
                .unwrap();
                let report = sipser_cover_check(&set, &shifts, None).unwrap();
                assert_eq!(report.covered, report.uncovered.is_empty());
                assert_eq!(report.covered, report.uncovered_count == 0);
            }
        }
    }

    #[test]
    fn exact_checker_agrees_with_double_loop_oracle() {
        let mut rng = seeded_rng(7);
        for _ in 0..100 {
            let m = rng.gen_range(1..=6usize);
            let size = rng.gen_range(0..=1usize << m);
            let set: BTreeSet<BitString> = random_subset(&mut rng, 1 << m, size)
                .into_iter()
                .map(|i| BitString::from_index(i, m))
                .collect();
            let count = rng.gen_range(1..=4usize);
            let shifts = ShiftFamily::new(
                (0..count).map(|_| random_bitstring(&mut rng, m)).collect(),
            )
            .unwrap();

            let report = sipser_cover_check(&set, &shifts, None).unwrap();
            // Naive oracle: loop over points and shifts with BitString xor.
            let mut naive_uncovered = Vec::new();
            for y in 0..1usize << m {
                let y = BitString::from_index(y, m);
                if !shifts.shifts().iter().any(|s| set.contains(&y.xor(s))) {
                    naive_uncovered.push(y);
                }
            }
            assert_eq!(report.covered, naive_uncovered.is_empty());
            assert_eq!(report.uncovered_count, naive_uncovered.len());
            let shown = naive_uncovered.len().min(10);
            assert_eq!(report.uncovered, naive_uncovered[..shown]);
        }
    }

    #[test]
    fn frozen_bound_value() {
        // σ = 17, n' = 8, m = 8: 1 − 2^8·16^{−8} = 1 − 2^{−24}, and the
        // density hypothesis holds with equality at |A| = 240.
        assert_eq!(coverage_bound(8, 240, 8, 17), Some(1.0 - (-24.0f64).exp2()));
        assert_eq!(coverage_bound(8, 239, 8, 17), None, "just below the density cutoff");
    }

    #[test]
    fn cover_probability_extremes() {
        let m = 3;
        let full: BTreeSet<BitString> =
            (0..8).map(|i| BitString::from_index(i, m)).collect();
        let report = cover_probability(&full, 2, 50, 3, m, None).unwrap();
        assert_eq!(report.estimate, 1.0);
        assert_eq!(report.covered_trials, 50);

        // One shift of a set missing a point never covers: the miss just
        // moves.
        let mut deficient = full.clone();
        deficient.remove(&bits("101"));
        let report = cover_probability(&deficient, 1, 50, 3, m, None).unwrap();
        assert_eq!(report.estimate, 0.0);
    }

    #[test]
    fn cover_probability_is_reproducible() {
        let set: BTreeSet<BitString> =
            random_subset(&mut seeded_rng(9), 16, 13)
                .into_iter()
                .map(|i| BitString::from_index(i, 4))
                .collect();
        let a = cover_probability(&set, 3, 200, 11, 4, Some(5)).unwrap();
        let b = cover_probability(&set, 3, 200, 11, 4, Some(5)).unwrap();
        assert_eq!(a, b);
        let c = cover_probability(&set, 3, 200, 12, 4, Some(5)).unwrap();
        assert!(a.covered_trials != c.covered_trials || a == c, "seed change may move counts");
    }

    #[test]
    fn dense_set_estimate_meets_the_bound() {
        // The acceptance-scale configuration, shrunk: m=8, |A|=240, σ=17,
        // n'=8 shifts; coverage is near-certain and the interval must sit
        // consistently against the bound.
        let set: BTreeSet<BitString> = random_subset(&mut seeded_rng(7), 256, 240)
            .into_iter()
            .map(|i| BitString::from_index(i, 8))
            .collect();
        let report = cover_probability(&set, 8, 200, 7, 8, Some(17)).unwrap();
        assert_eq!(report.bound, Some(1.0 - (-24.0f64).exp2()));
        assert!(report.estimate >= 0.999, "estimate {}", report.estimate);
        assert_eq!(report.bound_consistent, Some(true));
    }

    #[test]
    fn translation_holds_for_the_identity_shift() {
        let base = padding_generator();
        let shifts = ShiftFamily::new(vec![bits("0000")]).unwrap();
        for a in 0..16usize {
            let a = BitString::from_index(a, 4);
            assert_eq!(shift_translation_check(&base, &shifts, &a, 0), Ok(true), "a={}", a);
        }
    }

    #[test]
    fn translation_holds_across_shift_choices() {
        let base = padding_generator();
        let shifts = ShiftFamily::new(vec![bits("0000"), bits("1111")]).unwrap();
        for j in 0..2usize {
            for a in ["0011", "0000", "1111", "0110"] {
                assert_eq!(
                    shift_translation_check(&base, &shifts, &bits(a), j),
                    Ok(true),
                    "a={} j={}",
                    a,
                    j
                );
            }
        }
    }

    #[test]
    fn translation_rejects_a_mismatched_target() {
        let base = padding_generator();
        let shifts = ShiftFamily::new(vec![bits("0000"), bits("1111")]).unwrap();
        // a is in the base range, so the two formulas genuinely differ
        // somewhere; the correct target for j=1 would be 1100.
        let a = bits("0011");
        assert_eq!(base.eval(&bits("00")), bits("0000"));
        assert_eq!(
            shift_translation_check_with_target(&base, &shifts, &a, 1, &bits("0011")),
            Ok(false)
        );
        assert_eq!(
            shift_translation_check_with_target(&base, &shifts, &a, 1, &bits("1100")),
            Ok(true)
        );
    }

    #[test]
    fn translation_validates_arguments() {
        let base = padding_generator();
        let shifts = ShiftFamily::new(vec![bits("0000"), bits("1111")]).unwrap();
        assert_eq!(
            shift_translation_check(&base, &shifts, &bits("000"), 0),
            Err(ExperimentError::WidthMismatch { what: "target a", got: 3, expected: 4 })
        );
        assert_eq!(
            shift_translation_check(&base, &shifts, &bits("0000"), 2),
            Err(ExperimentError::BadIndex { index: 2, count: 2 })
        );
    }

    #[test]
    fn axiom_disjunction_over_a_constant_range() {
        let (_, gad) = example_gadget();
        let h = custom(
            Circuit::parse(
                "inputs x1\ngate c1 = CONST1\noutputs c1 c1 c1 c1\n",
            )
            .unwrap(),
        );
        let d = axiom_disjunction(&h, &gad, 20).unwrap();
        assert_eq!(d.targets, vec![bits("1111")]);
        assert_eq!(d.disjunction.len(), 1);
        // 1111 is in the gadget's range, so the lone disjunct is open.
        assert_eq!(d.disjunction.is_tautology_by_parts(22), Ok(false));
    }

    #[test]
    fn axiom_disjunction_tracks_range_escape() {
        let (_, gad) = example_gadget();
        // H whose range is {0000, 0100}: 0100 avoids the gadget range, so
        // the disjunction must be a tautology.
        let h = custom(
            Circuit::parse("inputs x1\ngate c0 = CONST0\noutputs c0 x1 c0 c0\n").unwrap(),
        );
        let d = axiom_disjunction(&h, &gad, 20).unwrap();
        assert_eq!(d.targets, vec![bits("0000"), bits("0100")]);
        assert_eq!(d.disjunction.is_tautology_by_parts(22), Ok(true));

        // Namespaces are per-disjunct, so atoms never collide.
        for (i, inst) in d.instances.iter().enumerate() {
            for atom in inst.tau.atoms() {
                assert_eq!(atom.namespace, Namespace::Disjunct(i as u32));
            }
        }
    }

    #[test]
    fn axiom_disjunction_law_on_sampled_pairs() {
        // is_tautology(disjunction) ⇔ ∃ b ∈ Rng(H) \ Rng(gad), with the
        // right side decided by independent enumeration.
        let (_, gad) = example_gadget();
        let mut rng = seeded_rng(23);
        let gad_range = gad.circuit.enumerate_range(20).unwrap();
        for trial in 0..20 {
            let h = custom(crate::random::random_circuit(&mut rng, 3, 4, 4));
            let d = axiom_disjunction(&h, &gad, 20).unwrap();
            let h_range = h.circuit.enumerate_range(20).unwrap();
            let escapes = h_range.iter().any(|b| !gad_range.contains(b));
            assert_eq!(
                d.disjunction.is_tautology_by_parts(22),
                Ok(escapes),
                "trial {}",
                trial
            );
        }
    }

    #[test]
    fn axiom_disjunction_checks_widths() {
        let (_, gad) = example_gadget();
        let h = custom(Circuit::parse("inputs x1\noutputs x1 x1\n").unwrap());
        assert!(matches!(
            axiom_disjunction(&h, &gad, 20),
            Err(ExperimentError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn decomposition_on_the_worked_example() {
        let (spec, _) = example_gadget();
        let report =
            gadget_substitute_and_decompose(&spec, &bits("1"), &bits("0100"), 22).unwrap();
        assert_eq!(report.targets, vec![bits("01"), bits("00")]);
        assert_eq!(report.disjuncts.len(), 2);
        assert!(report.clause_multiset_eq);
        assert!(report.logically_equivalent);
        assert!(report.atoms_disjoint);
        assert!(report.all_verdicts_hold());
    }

    #[test]
    fn decomposition_with_a_degenerate_pinned_gadget() {
        // f ignores u entirely; pinning v makes every copy's function
        // constant, collapsing the per-copy candidates to output units.
        let f = Circuit::parse("inputs v u\ngate g1 = NOT v\noutputs v g1\n").unwrap();
        let spec = GadgetSpec::new(f, 1, 1).unwrap();
        for c in ["0", "1"] {
            for b in 0..16usize {
                let b = BitString::from_index(b, 4);
                let report =
                    gadget_substitute_and_decompose(&spec, &bits(c), &b, 22).unwrap();
                assert!(report.all_verdicts_hold(), "c={} b={}", c, b);
            }
        }
    }

    #[test]
    fn decomposition_verdicts_hold_on_sampled_instances() {
        let mut rng = seeded_rng(31);
        for trial in 0..25 {
            let k = rng.gen_range(1..=2usize);
            let ell = rng.gen_range(1..=3usize);
            let f = crate::random::random_circuit(&mut rng, ell + k, 3, k + 1);
            let spec = GadgetSpec::new(f, k, ell).unwrap();
            let c = random_bitstring(&mut rng, ell);
            let b = random_bitstring(&mut rng, spec.input_len() + 1);
            let report = gadget_substitute_and_decompose(&spec, &c, &b, 22).unwrap();
            assert!(report.all_verdicts_hold(), "trial {}", trial);
        }
    }

    #[test]
    fn decomposition_checks_widths() {
        let (spec, _) = example_gadget();
        assert!(matches!(
            gadget_substitute_and_decompose(&spec, &bits("11"), &bits("0100"), 22),
            Err(ExperimentError::WidthMismatch { what: "shared argument c", .. })
        ));
        assert!(matches!(
            gadget_substitute_and_decompose(&spec, &bits("1"), &bits("010"), 22),
            Err(ExperimentError::WidthMismatch { what: "target b", .. })
        ));
    }

    #[test]
    fn outside_range_witness_is_least_and_verified() {
        let (_, gad) = example_gadget();
        let h = custom(
            Circuit::parse("inputs x1 x2 x3 x4\noutputs x1 x2 x3 x4\n").unwrap(),
        );
        let report = find_outside_range(&h, &gad, 20).unwrap();
        // The gadget range contains half of {0,1}^4; the least point
        // missing from it is 0001.
        assert_eq!(report.witness, Some(bits("0001")));
        assert_eq!(report.preimage, Some(bits("0001")));
        assert_eq!((report.h_range_size, report.g_range_size), (16, 8));

        let verdict = verify_tau(&gad.circuit, &report.witness.unwrap()).unwrap();
        assert!(verdict.tautology && verdict.consistent);
    }

    #[test]
    fn exhaustion_is_reported_not_asserted() {
        let (_, gad) = example_gadget();
        let h = custom(
            Circuit::parse("inputs x1\ngate c1 = CONST1\noutputs c1 c1 c1 c1\n").unwrap(),
        );
        let report = find_outside_range(&h, &gad, 20).unwrap();
        assert_eq!(report.witness, None);
        assert_eq!(report.preimage, None);
        assert_eq!(report.h_range_size, 1);
    }

    #[test]
    fn vee_hard_single_out_of_range_target() {
        let g = custom(Circuit::parse("inputs x1\ngate g1 = NOT x1\noutputs x1 g1\n").unwrap());
        let d = vee_hard_disjunction(&g, &[bits("00")]).unwrap();
        assert_eq!(d.disjunction.len(), 1);
        assert_eq!(d.disjunction.is_tautology_by_parts(22), Ok(true));
    }

    #[test]
    fn vee_hard_over_the_whole_range_is_open() {
        let g = custom(Circuit::parse("inputs x1\ngate g1 = NOT x1\noutputs x1 g1\n").unwrap());
        let range: Vec<BitString> =
            g.circuit.enumerate_range(20).unwrap().into_iter().collect();
        let d = vee_hard_disjunction(&g, &range).unwrap();
        assert_eq!(d.disjunction.len(), 2);
        assert_eq!(d.disjunction.is_tautology_by_parts(22), Ok(false));
        // Cross-check directly: the union formula is small enough here.
        assert_eq!(formula::is_tautology(&d.disjunction.to_formula(), 22), Ok(false));

        let mut with_escape = range;
        with_escape.push(bits("00"));
        let d = vee_hard_disjunction(&g, &with_escape).unwrap();
        assert_eq!(d.disjunction.is_tautology_by_parts(22), Ok(true));
    }

    #[test]
    fn vee_hard_validates_target_widths() {
        let g = custom(Circuit::parse("inputs x1\ngate g1 = NOT x1\noutputs x1 g1\n").unwrap());
        assert!(matches!(
            vee_hard_disjunction(&g, &[bits("000")]),
            Err(ExperimentError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn cover_cap_is_enforced() {
        let shifts = ShiftFamily::new(vec![BitString::zeros(21)]).unwrap();
        assert_eq!(
            sipser_cover_check(&BTreeSet::new(), &shifts, None),
            Err(ExperimentError::CapExceeded { what: "m", got: 21, cap: COVER_M_CAP })
        );
    }
}
