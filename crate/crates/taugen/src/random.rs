//! Seeded sampling helpers. Every randomized entry point in the toolkit
//! takes an explicit seed and derives its randomness from a ChaCha stream,
//! so identical (parameters, seed) pairs reproduce identical artifacts on
//! any platform.

use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate, GateOp, Operand, WireRef};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bitstring(rng: &mut impl Rng, width: usize) -> BitString {
    BitString::new((0..width).map(|_| rng.gen()).collect())
}

/// A uniformly random size-`size` subset of `0..universe`, ascending.
pub fn random_subset(rng: &mut impl Rng, universe: usize, size: usize) -> Vec<usize> {
    let mut picked = index::sample(rng, universe, size).into_vec();
    picked.sort_unstable();
    picked
}

/// A random circuit with `n` inputs named `x1..`, `gates` gates named
/// `g1..`, and `m` outputs drawn from all wires. Binary operations dominate;
/// inverters and constants appear occasionally so that degenerate ranges
/// show up in test corpora.
pub fn random_circuit(rng: &mut impl Rng, n: usize, gates: usize, m: usize) -> Circuit {
    assert!(n >= 1 && m >= 1);
    let inputs: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
    let mut gate_list = Vec::with_capacity(gates);
    for t in 0..gates {
        let wires = n + t;
        let pick = |rng: &mut dyn rand::RngCore| -> Operand {
            let w = rng.gen_range(0..wires);
            if w < n {
                Operand::Wire(WireRef::Input(w))
            } else {
                Operand::Wire(WireRef::Gate(w - n))
            }
        };
        let (op, fanins) = match rng.gen_range(0..10u32) {
            0 | 1 => (GateOp::And, vec![pick(rng), pick(rng)]),
            2 | 3 => (GateOp::Or, vec![pick(rng), pick(rng)]),
            4 | 5 => (GateOp::Xor, vec![pick(rng), pick(rng)]),
            6 | 7 => (GateOp::Nand, vec![pick(rng), pick(rng)]),
            8 => (GateOp::Not, vec![pick(rng)]),
            _ => {
                if rng.gen() {
                    (GateOp::Const1, vec![])
                } else {
                    (GateOp::Const0, vec![])
                }
            }
        };
        gate_list.push(Gate { name: format!("g{}", t + 1), op, fanins });
    }
    let outputs = (0..m)
        .map(|_| {
            let w = rng.gen_range(0..n + gates);
            if w < n {
                Operand::Wire(WireRef::Input(w))
            } else {
                Operand::Wire(WireRef::Gate(w - n))
            }
        })
        .collect();
    Circuit::new("random", inputs, gate_list, outputs).expect("random circuits are well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_artifacts() {
        let mut r1 = seeded_rng(42);
        let mut r2 = seeded_rng(42);
        assert_eq!(random_bitstring(&mut r1, 16), random_bitstring(&mut r2, 16));
        assert_eq!(random_circuit(&mut r1, 4, 6, 3), random_circuit(&mut r2, 4, 6, 3));
        assert_eq!(random_subset(&mut r1, 20, 5), random_subset(&mut r2, 20, 5));

        let mut r3 = seeded_rng(43);
        assert_ne!(random_bitstring(&mut seeded_rng(42), 32), random_bitstring(&mut r3, 32));
    }

    #[test]
    fn random_circuits_have_the_requested_shape() {
        let mut rng = seeded_rng(7);
        for _ in 0..20 {
            let c = random_circuit(&mut rng, 3, 8, 5);
            assert_eq!(c.input_count(), 3);
            assert_eq!(c.gate_count(), 8);
            assert_eq!(c.output_count(), 5);
            // Always evaluable.
            c.eval(&BitString::zeros(3)).unwrap();
        }
    }

    #[test]
    fn random_subsets_are_sorted_and_in_range() {
        let mut rng = seeded_rng(9);
        let s = random_subset(&mut rng, 64, 10);
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&x| x < 64));
    }
}
