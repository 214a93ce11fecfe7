"""Single-entry mutations of certified fixtures, one per axiom check.

Each mutation edits one entry of a spec (or the integral vector) and names
the check it is meant to break.  Other checks may fail as well; the target
one must, with a witness that can be recomputed independently.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import CHAlgebra, load_algebra


@dataclass(frozen=True)
class Mutation:
    name: str
    fixture: str
    target: str
    edit: Callable[[dict], None]
    note: str = ""
    raw: bool = False  # edit the loaded tables; the loader would reject the result

    def build(self, spec: dict) -> CHAlgebra:
        if not self.raw:
            return load_algebra(json.dumps(self.apply(spec)))
        alg = load_algebra(json.dumps(spec))
        mul = copy.deepcopy(alg.mul)
        self.edit(mul)
        return CHAlgebra(alg.space, mul, alg.Q, alg.Gm, alg.h0, alg.blocks, alg.integral,
                         f"{alg.name}~{self.name}")

    def apply(self, spec: dict) -> dict:
        s = copy.deepcopy(spec)
        self.edit(s)
        s["name"] = f"{spec.get('name', self.fixture)}~{self.name}"
        return s


def _add_mul(i, j, k, c="1"):
    return lambda s: s["multiplication"].append([i, j, k, c])


def _set_integral(idx, val):
    def f(s):
        s["integral"][idx] = val
    return f


def _zero_integral(s):
    s["integral"] = ["0"] * s["dimension"]


def _scale_entry(key, match, factor):
    def f(s):
        for e in s[key]:
            if e[:len(match)] == list(match):
                e[-1] = str(Fraction(e[-1]) * factor)
                return
        raise KeyError(match)
    return f


def _raw_mul(i, j, k, c=1):
    def f(mul):
        mul.setdefault(i, {}).setdefault(j, {})[k] = Fraction(c)
    return f


def _add_op(key, row, col, c="1"):
    return lambda s: s[key].append([row, col, c])


# Indices refer to block8: 1 x y L e f g h  and block7: 1 x L e f g h.
MUTATIONS = (
    Mutation("zero_integral", "block8", "nondegenerate_pairing", _zero_integral),
    Mutation("odd_integral", "block8", "integral_even", _set_integral(4, "1")),
    Mutation("x_times_e_to_L", "block8", "multiplication_parity", _raw_mul(1, 4, 3), raw=True),
    Mutation("y_times_x_disagrees", "block8", "supercommutativity", _add_mul(2, 1, 3)),
    Mutation("e_times_f_to_h", "block8", "associativity", _add_mul(4, 5, 7)),
    Mutation("Q_f_to_h", "block8", "Q_squared_zero", _add_op("Q", 7, 5)),
    Mutation("Gminus_g_to_h", "block8", "Gminus_squared_zero", _add_op("Gminus", 7, 6)),
    Mutation("Q_doubled_on_g", "block8", "Q_Gminus_anticommute", _scale_entry("Q", (7, 6), 2)),
    Mutation("Q_on_unit", "block8", "hodge_decomposition", _add_op("Q", 4, 0)),
    Mutation("f_times_f_to_g", "block8", "Q_derivation", _add_mul(5, 5, 6)),
    Mutation("x_times_x_to_x", "block7", "seven_term_relation", _add_mul(1, 1, 1)),
    Mutation("f_times_f_to_L", "block8", "integral_Q_invariance", _add_mul(5, 5, 3)),
    Mutation("x_times_g_to_L", "block8", "integral_Gminus_invariance", _add_mul(1, 6, 3)),
    Mutation("L_times_g_to_L", "block8", "one_twelfth_axiom", _add_mul(3, 6, 3)),
)


def mutated_algebra(m: Mutation, spec: dict) -> CHAlgebra:
    return m.build(spec)
