#!/usr/bin/env python3
"""Smoke test for the taugen_py extension module.

Builds nothing itself: run `cargo build -p taugen-py` first, then
`python3 python/smoke_test.py`. The script locates the compiled cdylib
under target/, stages it under an importable name, and exercises the
main types and operations end to end.
"""

import shutil
import sys
import sysconfig
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libtaugen_py.so", "libtaugen_py.dylib", "taugen_py.dll")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("taugen_py cdylib not found; run `cargo build -p taugen-py` first")
    stage = Path(tempfile.mkdtemp(prefix="taugen_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(built, stage / f"taugen_py{suffix}")
    return stage


sys.path.insert(0, str(stage_module()))
import taugen_py as tg  # noqa: E402

checks = 0


def check(cond, label):
    global checks
    if not cond:
        sys.exit(f"FAIL: {label}")
    checks += 1
    print(f"ok: {label}")


# Circuits: parse, evaluate, render round-trip.
c = tg.Circuit.parse("inputs x1\ngate g1 = NOT x1\noutputs x1 g1\n", name="c1")
check((c.input_count, c.output_count, c.gate_count) == (1, 2, 1), "circuit shape")
check(c.eval("0") == "01" and c.eval("1") == "10", "circuit eval")
check(tg.Circuit.parse(c.render()).eval("1") == "10", "render round-trip")
check(sorted(c.enumerate_range()) == ["01", "10"], "range enumeration")

# Tautology candidates and their verification.
check(tg.tau_text(c, "00").startswith("(or "), "tau prefix text")
dimacs = tg.tau_dimacs(c, "00", family="custom")
check("p cnf 2 4" in dimacs, "tau DIMACS header")
report = tg.verify(c, "00")
check(report["tautology"] and not report["in_range"] and report["consistent"],
      "verify: 00 avoids the range")
report = tg.verify(c, "10")
check(not report["tautology"] and report["witness"] == "1", "verify: 10 is hit by x=1")

# Generator constructions.
tt = tg.tt_generator(2, 1)
check((tt.n, tt.m) == (6, 4) and tt.family == "tt", "truth-table generator shape")
check(tt.eval("000001") == "0001", "code for AND(x1, x2) maps to AND's table")

f = tg.Circuit.parse("inputs v u\ngate g1 = XOR u v\noutputs u g1\n", name="f")
gadget = tg.gadget_generator(f, 1)
check((gadget.n, gadget.m, gadget.params["N"]) == (3, 4, "3"), "gadget generator shape")
check("0100" not in gadget.circuit.enumerate_range(), "gadget range avoids 0100")

uni = tg.universal_gadget(2, 3)
check((uni.n, uni.m) == (74, 75) and uni.stretching, "universal gadget stretches by one")

pad = tg.custom_generator(
    tg.Circuit.parse("inputs x1 x2\ngate c0 = CONST0\noutputs x1 x2 c0 c0\n", name="pad"))
shifted = tg.shifted_generator(pad, ["0000", "1111"])
check((shifted.n, shifted.m) == (3, 4), "shifted generator adds one index input")
check(shifted.eval("011") == "1011", "shift index 1 flips the padded output")
check(tg.shift_translation_check(pad, ["0000", "1111"], "0011", 1),
      "shifted instance projects to the base instance")

design = tg.nw_design(3, 2, 9)
check(design[3] == [0, 4, 8], "design set S_3")
check(all(len(set(a) & set(b)) <= 1 for a in design for b in design if a != b),
      "design pairwise overlap <= d - 1")
nw = tg.nw_generator(3, 2, base="parity")
check((nw.n, nw.m) == (9, 9), "design generator shape")
check(nw.eval("100000000") == "100100100",
      "parity outputs read seed bits through the design")

# Experiments.
cover = tg.sipser_cover_check(["00", "01", "10"], ["00", "11"])
check(cover["covered"] and cover["uncovered_count"] == 0, "two shifts cover everything")
cover = tg.sipser_cover_check(["00"], ["00", "01"])
check(not cover["covered"] and cover["uncovered_count"] == 2, "deficient cover detected")
mc = tg.cover_probability(["00", "01", "10"], 2, 200, 7, 2)
check(mc["trials"] == 200 and 0.0 <= mc["estimate"] <= 1.0, "Monte Carlo estimate in range")
check(mc == tg.cover_probability(["00", "01", "10"], 2, 200, 7, 2),
      "Monte Carlo is deterministic in the seed")

dec = tg.gadget_substitute_and_decompose(f, 1, "1", "0100")
check(dec["clause_multiset_eq"] and dec["logically_equivalent"] and dec["atoms_disjoint"],
      "substitution decomposes into independent copies")
check(dec["targets"] == ["01", "00"], "decomposition splits the target")

h = tg.custom_generator(
    tg.Circuit.parse("inputs x1\ngate c0 = CONST0\noutputs c0 x1 c0 c0\n", name="h"))
axiom = tg.axiom_disjunction(h, gadget)
check(axiom["tautology"] is True and len(axiom["targets"]) == 2,
      "axiom disjunction holds when the ranges escape")
outside = tg.find_outside_range(h, gadget)
check(outside["witness"] == "0100" and outside["preimage"] == "1",
      "outside-range witness with verified preimage")

vhard = tg.vee_hard_disjunction(gadget, ["0100", "0000"])
check(len(vhard["targets"]) == 2, "explicit-target disjunction built")

r = tg.random_circuit(42, 3, 5, 4)
check(r.eval("000") == tg.random_circuit(42, 3, 5, 4).eval("000"),
      "random circuits are seed-deterministic")

check(tg.__version__, "version string present")

print(f"\nall {checks} checks passed (taugen_py {tg.__version__})")
