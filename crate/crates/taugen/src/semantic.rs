//! Exhaustive truth-table sweeps, 64 assignments per machine word.
//!
//! Assignment index bit `i` is the value of atom `i` in the caller-supplied
//! atom order. The low six index bits are packed into word lanes; the
//! remaining bits select the word.

use std::collections::BTreeMap;

use crate::formula::{AtomId, Formula};

/// Lane pattern for atom `i` (i < 6): bit `l` of `LANE[i]` is bit `i` of `l`.
const LANE: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Formula with atoms replaced by indices into an assignment vector.
enum Compiled {
    True,
    False,
    Atom(usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

fn compile(f: &Formula, index: &BTreeMap<AtomId, usize>) -> Compiled {
    match f {
        Formula::True => Compiled::True,
        Formula::False => Compiled::False,
        Formula::Atom(a) => Compiled::Atom(index[a]),
        Formula::Not(g) => Compiled::Not(Box::new(compile(g, index))),
        Formula::And(fs) => Compiled::And(fs.iter().map(|g| compile(g, index)).collect()),
        Formula::Or(fs) => Compiled::Or(fs.iter().map(|g| compile(g, index)).collect()),
    }
}

fn eval_word(c: &Compiled, vals: &[u64]) -> u64 {
    match c {
        Compiled::True => !0,
        Compiled::False => 0,
        Compiled::Atom(i) => vals[*i],
        Compiled::Not(g) => !eval_word(g, vals),
        Compiled::And(fs) => fs.iter().fold(!0, |acc, g| acc & eval_word(g, vals)),
        Compiled::Or(fs) => fs.iter().fold(0, |acc, g| acc | eval_word(g, vals)),
    }
}

struct Sweep {
    vals: Vec<u64>,
    blocks: u64,
    mask: u64,
}

impl Sweep {
    fn new(atom_count: usize) -> Sweep {
        assert!(atom_count < 48, "assignment space too large to sweep");
        let lanes = atom_count.min(6);
        let mut vals = vec![0; atom_count];
        vals[..lanes].copy_from_slice(&LANE[..lanes]);
        Sweep {
            vals,
            blocks: 1u64 << atom_count.saturating_sub(6),
            mask: if atom_count >= 6 { !0 } else { (1u64 << (1usize << atom_count)) - 1 },
        }
    }

    fn load_block(&mut self, block: u64) {
        for i in 6..self.vals.len() {
            self.vals[i] = if block >> (i - 6) & 1 == 1 { !0 } else { 0 };
        }
    }

    fn assignment(&self, block: u64, lane: u32, atom_count: usize) -> Vec<bool> {
        (0..atom_count)
            .map(|i| if i < 6 { lane >> i & 1 == 1 } else { block >> (i - 6) & 1 == 1 })
            .collect()
    }
}

fn index_of(atoms: &[AtomId]) -> BTreeMap<AtomId, usize> {
    atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect()
}

/// First assignment (in index order) falsifying `f`, or `None` if `f` holds
/// on all 2^len(atoms) assignments. `atoms` must cover the formula's atoms.
pub(crate) fn falsifying_assignment(f: &Formula, atoms: &[AtomId]) -> Option<Vec<bool>> {
    let compiled = compile(f, &index_of(atoms));
    let mut sweep = Sweep::new(atoms.len());
    for block in 0..sweep.blocks {
        sweep.load_block(block);
        let word = eval_word(&compiled, &sweep.vals) & sweep.mask;
        if word != sweep.mask {
            let lane = (!word & sweep.mask).trailing_zeros();
            return Some(sweep.assignment(block, lane, atoms.len()));
        }
    }
    None
}

/// First assignment satisfying `f` but not `g`, or `None` if `f` implies `g`.
pub(crate) fn implication_counterexample(
    f: &Formula,
    g: &Formula,
    atoms: &[AtomId],
) -> Option<Vec<bool>> {
    let index = index_of(atoms);
    let cf = compile(f, &index);
    let cg = compile(g, &index);
    let mut sweep = Sweep::new(atoms.len());
    for block in 0..sweep.blocks {
        sweep.load_block(block);
        let viol = eval_word(&cf, &sweep.vals) & !eval_word(&cg, &sweep.vals) & sweep.mask;
        if viol != 0 {
            let lane = viol.trailing_zeros();
            return Some(sweep.assignment(block, lane, atoms.len()));
        }
    }
    None
}

/// Satisfying assignment for a clause list over 1-based variables, or `None`
/// when unsatisfiable. An empty clause makes the formula unsatisfiable.
pub(crate) fn cnf_satisfying_assignment(
    var_count: usize,
    clauses: &[Vec<i32>],
) -> Option<Vec<bool>> {
    let mut sweep = Sweep::new(var_count);
    for block in 0..sweep.blocks {
        sweep.load_block(block);
        let mut word = sweep.mask;
        for clause in clauses {
            let mut cw = 0u64;
            for &lit in clause {
                let v = sweep.vals[lit.unsigned_abs() as usize - 1];
                cw |= if lit > 0 { v } else { !v };
            }
            word &= cw;
            if word == 0 {
                break;
            }
        }
        if word != 0 {
            let lane = word.trailing_zeros();
            return Some(sweep.assignment(block, lane, var_count));
        }
    }
    None
}

/// Checks `g == forall(aux) f` pointwise over assignments of `shared`,
/// where `aux` are the atoms of `f` absent from `g`. This is the right
/// notion of "the same constraint" when `f` carries helper atoms whose
/// values `g` never mentions.
pub(crate) fn equivalent_under_projection(
    f: &Formula,
    g: &Formula,
    shared: &[AtomId],
    aux: &[AtomId],
) -> bool {
    let mut all: Vec<AtomId> = shared.to_vec();
    all.extend_from_slice(aux);
    let index = index_of(&all);
    let cf = compile(f, &index);
    let cg = compile(g, &index);
    let mut vals = vec![0u64; all.len()];
    // Scalar sweep: lanes carry a single assignment (all-ones or all-zeros).
    for s in 0..1u64 << shared.len() {
        for (i, v) in vals.iter_mut().enumerate().take(shared.len()) {
            *v = if s >> i & 1 == 1 { !0 } else { 0 };
        }
        let g_holds = eval_word(&cg, &vals) & 1 == 1;
        let mut f_always = true;
        for x in 0..1u64 << aux.len() {
            for (j, v) in vals.iter_mut().enumerate().skip(shared.len()) {
                *v = if x >> (j - shared.len()) & 1 == 1 { !0 } else { 0 };
            }
            if eval_word(&cf, &vals) & 1 == 0 {
                f_always = false;
                break;
            }
        }
        if g_holds != f_always {
            return false;
        }
    }
    true
}
