//! Propositional formulas over structured atoms.
//!
//! Atoms carry a four-part identity `(namespace, copy, kind, local)` instead
//! of a flat name. The namespace separates the branches of a disjunction that
//! must stay atom-disjoint; the copy tag separates replicated blocks of a
//! circuit that share their remaining inputs. Keeping the structure explicit
//! lets disjointness be checked, not hoped for.
//!
//! The tautology encoder in [`crate::tau`] produces formulas in a fixed
//! normal form: an n-ary OR whose children are conjunctions of literals
//! (each conjunction the literal-wise negation of one CNF clause). The
//! operations here preserve that shape where possible; in particular
//! [`substitute`] deletes a conjunction whose clause became satisfied and
//! drops the literals whose clause literals became false, and never
//! collapses an emptied conjunction into the constant `True` (an empty
//! conjunction is still a valid, vacuously true disjunct).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::semantic;

/// Which branch of a dotted disjunction an atom belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Namespace {
    Root,
    Disjunct(u32),
}

/// Which replicated block of a circuit an atom belongs to. `Shared` marks
/// wires common to every block; block indices start at 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CopyTag {
    Shared,
    Copy(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomKind {
    Input,
    Gate,
}

/// Identity of a propositional variable. The derived `Ord` is lexicographic
/// over (namespace, copy, kind, local), giving atoms one total order that is
/// used everywhere a deterministic ordering is needed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomId {
    pub namespace: Namespace,
    pub copy: CopyTag,
    pub kind: AtomKind,
    pub local: u32,
}

impl AtomId {
    pub fn input(namespace: Namespace, copy: CopyTag, local: u32) -> Self {
        AtomId { namespace, copy, kind: AtomKind::Input, local }
    }

    pub fn gate(namespace: Namespace, copy: CopyTag, local: u32) -> Self {
        AtomId { namespace, copy, kind: AtomKind::Gate, local }
    }
}

impl fmt::Display for AtomId {
    /// Renders as `<ns>.<copy>.<kind>.<local>`, e.g. `r.cs.input.0` for a
    /// shared input in the root namespace or `d2.c1.gate.3` for gate 3 of
    /// copy 1 inside disjunct 2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.namespace {
            Namespace::Root => f.write_str("r")?,
            Namespace::Disjunct(d) => write!(f, "d{}", d)?,
        }
        match self.copy {
            CopyTag::Shared => f.write_str(".cs")?,
            CopyTag::Copy(i) => write!(f, ".c{}", i)?,
        }
        let kind = match self.kind {
            AtomKind::Input => "input",
            AtomKind::Gate => "gate",
        };
        write!(f, ".{}.{}", kind, self.local)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    True,
    False,
    Atom(AtomId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum FormulaError {
    #[error("atom {atom} appears in both disjunct {first} and disjunct {second}")]
    SharedAtom { atom: AtomId, first: usize, second: usize },
    #[error("not a disjunction of negated clauses: {reason}")]
    NotNormalForm { reason: String },
    #[error("rename maps {a} and {b} to the same atom {target}")]
    NonInjectiveRename { a: AtomId, b: AtomId, target: AtomId },
    #[error("{atoms} atoms exceed the brute-force cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
}

/// Default ceiling on the number of distinct atoms a brute-force semantic
/// check will enumerate (2^22 assignments).
pub const DEFAULT_ATOM_CAP: usize = 22;

impl Formula {
    pub fn atom(id: AtomId) -> Formula {
        Formula::Atom(id)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// A positive or negated atom.
    pub fn literal(id: AtomId, positive: bool) -> Formula {
        if positive {
            Formula::Atom(id)
        } else {
            Formula::not(Formula::Atom(id))
        }
    }

    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<AtomId>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(*a);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_atoms(out);
                }
            }
        }
    }

    /// Evaluates under a total assignment of the formula's atoms.
    pub fn eval(&self, assignment: &BTreeMap<AtomId, bool>) -> bool {
        self.eval_with(&mut |a| {
            *assignment
                .get(&a)
                .unwrap_or_else(|| panic!("assignment missing atom {}", a))
        })
    }

    pub fn eval_with(&self, lookup: &mut impl FnMut(AtomId) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => lookup(*a),
            Formula::Not(f) => !f.eval_with(lookup),
            Formula::And(fs) => fs.iter().all(|f| f.eval_with(lookup)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_with(lookup)),
        }
    }
}

impl fmt::Display for Formula {
    /// Prefix notation: `(or (not r.cs.input.0) r.cs.gate.1)`. An empty
    /// conjunction renders as `(and)` and an empty disjunction as `(or)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{}", a),
            Formula::Not(g) => write!(f, "(not {})", g),
            Formula::And(fs) => write_list(f, "and", fs),
            Formula::Or(fs) => write_list(f, "or", fs),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({}", head)?;
    for item in items {
        write!(f, " {}", item)?;
    }
    f.write_str(")")
}

/// Replaces the atoms in `sigma`'s domain by constants and simplifies.
///
/// The simplifier absorbs constants one connective at a time: a conjunction
/// with a false member is deleted, true members are dropped; a disjunction
/// with a true member collapses, false members are dropped. Singleton
/// connectives unwrap. Emptied connectives stay as they are (`(and)` is
/// vacuously true, `(or)` vacuously false) so that a disjunction of negated
/// clauses keeps one recognizable disjunct per surviving clause.
pub fn substitute(f: &Formula, sigma: &BTreeMap<AtomId, bool>) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(a) => match sigma.get(a) {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => Formula::Atom(*a),
        },
        Formula::Not(g) => match substitute(g, sigma) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::not(other),
        },
        Formula::And(fs) => {
            let mut kept = Vec::new();
            for g in fs {
                match substitute(g, sigma) {
                    Formula::False => return Formula::False,
                    Formula::True => {}
                    other => kept.push(other),
                }
            }
            if kept.len() == 1 {
                kept.pop().unwrap()
            } else {
                Formula::And(kept)
            }
        }
        Formula::Or(fs) => {
            let mut kept = Vec::new();
            for g in fs {
                match substitute(g, sigma) {
                    Formula::True => return Formula::True,
                    Formula::False => {}
                    other => kept.push(other),
                }
            }
            if kept.len() == 1 {
                kept.pop().unwrap()
            } else {
                Formula::Or(kept)
            }
        }
    }
}

/// Applies an atom renaming. Atoms outside the map are kept; the effective
/// map (including the implicit identity part) must be injective on the
/// formula's atoms.
pub fn rename_atoms(f: &Formula, map: &BTreeMap<AtomId, AtomId>) -> Result<Formula, FormulaError> {
    let mut seen: BTreeMap<AtomId, AtomId> = BTreeMap::new();
    for a in f.atoms() {
        let target = *map.get(&a).unwrap_or(&a);
        if let Some(prev) = seen.insert(target, a) {
            if prev != a {
                return Err(FormulaError::NonInjectiveRename { a: prev, b: a, target });
            }
        }
    }
    Ok(apply_rename(f, map))
}

fn apply_rename(f: &Formula, map: &BTreeMap<AtomId, AtomId>) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(a) => Formula::Atom(*map.get(a).unwrap_or(a)),
        Formula::Not(g) => Formula::not(apply_rename(g, map)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| apply_rename(g, map)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| apply_rename(g, map)).collect()),
    }
}

/// True when the formula holds under every assignment of its atoms.
/// Exhaustive; refuses formulas with more than `cap` atoms.
pub fn is_tautology(f: &Formula, cap: usize) -> Result<bool, FormulaError> {
    let atoms: Vec<AtomId> = f.atoms().into_iter().collect();
    if atoms.len() > cap {
        return Err(FormulaError::TooManyAtoms { atoms: atoms.len(), cap });
    }
    Ok(semantic::falsifying_assignment(f, &atoms).is_none())
}

/// True when every assignment satisfying `f` satisfies `g` (over the union
/// of their atoms). Exhaustive; capped like [`is_tautology`].
pub fn implies(f: &Formula, g: &Formula, cap: usize) -> Result<bool, FormulaError> {
    let mut atoms = f.atoms();
    atoms.extend(g.atoms());
    let atoms: Vec<AtomId> = atoms.into_iter().collect();
    if atoms.len() > cap {
        return Err(FormulaError::TooManyAtoms { atoms: atoms.len(), cap });
    }
    Ok(semantic::implication_counterexample(f, g, &atoms).is_none())
}

/// Mutual implication over the union of atom sets.
pub fn equivalent(f: &Formula, g: &Formula, cap: usize) -> Result<bool, FormulaError> {
    Ok(implies(f, g, cap)? && implies(g, f, cap)?)
}

/// One signed literal of a negated-clause conjunction.
pub type CubeLiteral = (AtomId, bool);

/// Reads a formula in negated-clause-disjunction form back as a list of
/// literal sets, flattening nested ORs. Accepted disjunct shapes: a
/// conjunction of literals (possibly empty), or a bare literal.
pub fn disjunction_cubes(f: &Formula) -> Result<Vec<BTreeSet<CubeLiteral>>, FormulaError> {
    let mut cubes = Vec::new();
    collect_cubes(f, &mut cubes)?;
    Ok(cubes)
}

fn collect_cubes(
    f: &Formula,
    out: &mut Vec<BTreeSet<CubeLiteral>>,
) -> Result<(), FormulaError> {
    match f {
        Formula::Or(fs) => {
            for g in fs {
                collect_cubes(g, out)?;
            }
            Ok(())
        }
        other => {
            out.push(cube_literals(other)?);
            Ok(())
        }
    }
}

fn cube_literals(f: &Formula) -> Result<BTreeSet<CubeLiteral>, FormulaError> {
    match f {
        Formula::And(fs) => fs.iter().map(literal_of).collect(),
        other => Ok(BTreeSet::from([literal_of(other)?])),
    }
}

fn literal_of(f: &Formula) -> Result<CubeLiteral, FormulaError> {
    match f {
        Formula::Atom(a) => Ok((*a, true)),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Ok((*a, false)),
            other => Err(FormulaError::NotNormalForm {
                reason: format!("negation of a non-atom: {}", other),
            }),
        },
        other => Err(FormulaError::NotNormalForm { reason: format!("not a literal: {}", other) }),
    }
}

/// Compares two negated-clause disjunctions as multisets of literal sets,
/// ignoring disjunct order and literal order.
pub fn clause_multiset_eq(f: &Formula, g: &Formula) -> Result<bool, FormulaError> {
    let mut a = disjunction_cubes(f)?;
    let mut b = disjunction_cubes(g)?;
    a.sort();
    b.sort();
    Ok(a == b)
}

/// A disjunction whose branches are pairwise atom-disjoint, checked at
/// construction.
#[derive(Clone, Debug)]
pub struct DottedDisjunction {
    disjuncts: Vec<Formula>,
}

/// Builds a [`DottedDisjunction`], reporting the first atom shared between
/// two branches.
pub fn dotted_or(disjuncts: Vec<Formula>) -> Result<DottedDisjunction, FormulaError> {
    let mut owner: BTreeMap<AtomId, usize> = BTreeMap::new();
    for (i, d) in disjuncts.iter().enumerate() {
        for atom in d.atoms() {
            if let Some(&first) = owner.get(&atom) {
                return Err(FormulaError::SharedAtom { atom, first, second: i });
            }
            owner.insert(atom, i);
        }
    }
    Ok(DottedDisjunction { disjuncts })
}

impl DottedDisjunction {
    pub fn disjuncts(&self) -> &[Formula] {
        &self.disjuncts
    }

    pub fn len(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::Or(self.disjuncts.clone())
    }

    /// Tautology check exploiting disjointness: an OR of formulas over
    /// pairwise-disjoint atoms is valid iff some disjunct is valid, because
    /// falsifying assignments of non-valid disjuncts combine freely. Each
    /// disjunct is checked against the cap separately, so disjunctions far
    /// wider than the cap stay decidable.
    pub fn is_tautology_by_parts(&self, cap: usize) -> Result<bool, FormulaError> {
        for d in &self.disjuncts {
            if is_tautology(d, cap)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
