"""Reductions between SLP problems.

Instance transforms map one program to another (plus a parameter). Drivers
solve one problem with counted oracle queries to others; they only touch
oracles through :class:`~slptools.deciders.OracleHandle`-like callables.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from slptools import numtheory
from slptools.deciders import random_prime, true_oracle
from slptools.evaluate import (
    EvalBudget,
    eval_mod,
    expand_poly_mod,
)
from slptools.slp import Slp, SlpBuilder, serialize, shift_slp

Oracle = Callable[..., bool]


@dataclass
class ReductionRecord:
    name: str
    input: dict
    outputs: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    input_size: int = 0
    output_size: int = 0
    size_bound: Optional[int] = None
    answer: Optional[bool] = None
    note: str = ""

    def within_bound(self) -> bool:
        return self.size_bound is None or self.output_size <= self.size_bound

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ReductionRecord":
        return cls(**json.loads(line))


def instance_dict(slp: Slp, **params) -> dict:
    return {"slp": serialize(slp), **params}


# --- gadgets ---------------------------------------------------------------

def _require_constant(slp: Slp) -> None:
    if slp.num_vars:
        raise ValueError("this reduction takes a variable-free program")


def equ_to_3sos(slp: Slp) -> Slp:
    """Program for ``7 * N**8``, which is a sum of three squares iff ``N == 0``.

    Adds 7 gates: three squarings, three doublings and one subtraction.
    """
    _require_constant(slp)
    b = SlpBuilder()
    b.instrs.extend(slp.instrs)
    n2 = b.mul(slp.output, slp.output)
    n4 = b.mul(n2, n2)
    n8 = b.mul(n4, n4)
    eight = n8
    for _ in range(3):
        eight = b.add(eight, eight)
    return b.build(b.sub(eight, n8))


def equ_to_2sos(slp: Slp) -> Slp:
    """Program for ``3 * N**4``, which is a sum of two squares iff ``N == 0``. Adds 4 gates."""
    _require_constant(slp)
    b = SlpBuilder()
    b.instrs.extend(slp.instrs)
    n2 = b.mul(slp.output, slp.output)
    n4 = b.mul(n2, n2)
    twice = b.add(n4, n4)
    return b.build(b.add(twice, n4))


EQU_TO_3SOS_EXTRA = 7
EQU_TO_2SOS_EXTRA = 4


# --- PosSLP with a 3SoS oracle ------------------------------------------------

def pos_via_3sos(slp: Slp, oracle3sos: Oracle) -> bool:
    """Sign test with at most five 3SoS queries.

    First rule out ``N in {0, -1, -2}`` through the ``7 M**8`` gadget, then:
    ``N`` 3SoS means ``N >= 0``; otherwise ``N + 2`` 3SoS means ``N > 0``
    because one of any two integers two apart and non-negative is 3SoS.
    """
    _require_constant(slp)
    for c in (0, 1, 2):
        if oracle3sos(equ_to_3sos(shift_slp(slp, c))):
            return False
    if oracle3sos(slp):
        return True
    return oracle3sos(shift_slp(slp, 2))


# --- 3SoS with Div2 and Pos oracles -------------------------------------------

def plus_pow2(slp: Slp, t: int) -> Slp:
    """Program for ``N + 2**t``."""
    b = SlpBuilder(slp.num_vars)
    b.instrs.extend(slp.instrs)
    out = slp.output
    return b.build(b.add(out, b.pow2(t)))


def three_sos_via_div2_pos(slp: Slp, div2_oracle: Oracle, pos_oracle: Oracle) -> bool:
    """3SoS test from one sign query and at most ``size + 2`` divisibility queries.

    Uses ``|N| <= 2**(2**size)``: the number of trailing zeros ``t`` lies in
    ``[0, 2**size]`` and is found by binary search. A positive ``N`` is not
    3SoS exactly when ``t`` is even and the odd part is ``7 mod 8``, i.e. when
    ``N + 2**t`` is divisible by ``2**(t+3)``.
    """
    _require_constant(slp)
    bound = 1 << slp.size
    if not pos_oracle(slp):
        # zero is the only non-positive 3SoS value
        return div2_oracle(slp, l=bound + 1)
    lo, hi = 0, bound + 1  # div2(lo) holds, div2(hi) fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if div2_oracle(slp, l=mid):
            lo = mid
        else:
            hi = mid
    t = lo
    if t % 2:
        return True
    return not div2_oracle(plus_pow2(slp, t), l=t + 3)


# --- reversal, Deg and Ord ----------------------------------------------------

def reverse_slp(slp: Slp) -> tuple[int, Slp]:
    """``(m, q)`` with ``q`` computing ``x**m * f(1/x)``, ``m`` the gate degree bound.

    Every gate ``g`` carries ``m_g`` and two gates: ``x**m_g`` and
    ``x**m_g * f_g(1/x)``. For ``g = a +- b`` the latter is
    ``R_a * P_b +- R_b * P_a``; for ``g = a * b`` it is ``R_a * R_b``.
    At most four new gates per source gate, plus one variable gate.
    """
    if slp.num_vars > 1:
        raise ValueError("reversal takes a univariate program")
    b = SlpBuilder(slp.num_vars)
    n = slp.size + 1
    m = [0] * n
    pw = [0] * n  # gate holding x**m_g
    rev = [0] * n  # gate holding x**m_g * f_g(1/x)
    x_gate = None
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            if x_gate is None:
                x_gate = b.var(1)
            m[p], pw[p], rev[p] = 1, x_gate, 0
            continue
        m[p] = m[i] + m[j]
        pw[p] = _mul(b, pw[i], pw[j])
        if op == "mul":
            rev[p] = _mul(b, rev[i], rev[j])
        else:
            left = _mul(b, rev[i], pw[j])
            right = _mul(b, rev[j], pw[i])
            rev[p] = b.add(left, right) if op == "add" else b.sub(left, right)
    out = slp.output
    return m[out], b.build(rev[out])


def _mul(b: SlpBuilder, i: int, j: int) -> int:
    # multiplying by the constant gate 1 is a no-op
    if i == 0:
        return j
    if j == 0:
        return i
    return b.mul(i, j)


def reversal_size_bound(s: int) -> int:
    return 4 * s + 2


def deg_to_ord(slp: Slp, d: int) -> tuple[Slp, int]:
    """``deg f <= d`` iff ``ord(x**m f(1/x)) >= m - d``."""
    if d < 0:
        raise ValueError("d must be non-negative")
    m, q = reverse_slp(slp)
    return q, max(m - d, 0)


def ord_to_deg(slp: Slp, l: int) -> tuple[Slp, int]:
    """``ord f >= l`` iff ``deg(x**m f(1/x)) <= m - l`` for ``l <= m``.

    For ``l > m >= deg f`` the answer is "f is zero", posed as the degree
    instance ``(x * q, 0)``.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    m, q = reverse_slp(slp)
    if l <= m:
        return q, m - l
    b = SlpBuilder(1)
    b.instrs.extend(q.instrs)
    return b.build(b.mul(q.output, b.var(1))), 0


# --- OrdSLP to Div2SLP ----------------------------------------------------------

def ord_to_div2(slp: Slp, l: int, exponent_override: int | None = None) -> tuple[Slp, int]:
    """Evaluate at ``B = 2**(2**e)``: ``ord f >= l`` iff ``2**(l * 2**e)`` divides ``f(B)``.

    ``e`` defaults to ``3 * size``. The equivalence needs the lowest nonzero
    coefficient of ``f`` to be smaller than ``B`` in absolute value; see
    :func:`ord_to_div2_sound`.
    """
    if slp.num_vars > 1:
        raise ValueError("ord_to_div2 takes a univariate program")
    if l < 0:
        raise ValueError("l must be non-negative")
    e = 3 * slp.size if exponent_override is None else exponent_override
    b = SlpBuilder()
    if slp.num_vars:
        base = b.tower(e)
        out = b.splice(slp, [base])
    else:
        out = b.splice(slp)
    return b.build(out), l << e


def ord_to_div2_sound(coefficient_bits: int, e: int) -> bool:
    """Sufficient condition for :func:`ord_to_div2` with exponent ``e``."""
    return coefficient_bits < (1 << e)


# --- multivariate degree to univariate degree -----------------------------------

def mdeg_to_deg(slp: Slp, d: int) -> tuple[Slp, int]:
    """Substitute ``x_i := y * 2**(2**(i * s * s))``; the total degree becomes the degree in ``y``.

    The squaring chains for the different ``i`` are shared, so the output has
    ``size + n*s*s + 2n + 2`` gates at most.
    """
    n = slp.num_vars
    if n < 1:
        raise ValueError("mdeg_to_deg takes a program with at least one variable")
    s = slp.size
    b = SlpBuilder(1)
    y = b.var(1)
    alpha = b.add(0, 0)
    bound = []
    for _ in range(n):
        alpha = b.tower(s * s, alpha)
        bound.append(b.mul(y, alpha))
    return b.build(b.splice(slp, bound)), d


def mdeg_size_bound(s: int, n: int) -> int:
    return s + n * s * s + 2 * n + 2


def certify_degree(slp: Slp, expected: int, seed: int = 0, rounds: int = 8,
                   budget: EvalBudget | None = None) -> bool:
    """``True`` when some random prime ``p`` shows ``deg_y(slp) >= expected`` modulo ``p``.

    Degrees can only drop modulo ``p``, so a hit proves the lower bound.
    """
    rng = random.Random(seed)
    for _ in range(rounds):
        p = random_prime(rng, 61)
        f = expand_poly_mod(slp, p, budget)
        deg = f.degree if f.coeffs else -math.inf
        if deg >= expected:
            return True
    return False


# --- PosSLP from 2SoS: witness verification and search --------------------------

class MalformedWitness(ValueError):
    pass


class GapBoundExhausted(RuntimeError):
    """No shift up to the gap bound was accepted; the answer is unknown, not "no"."""


@dataclass(frozen=True)
class TwoSosWitness:
    kind: str  # "small" or "shift"
    value: int

    @classmethod
    def small(cls, n: int) -> "TwoSosWitness":
        return cls("small", n)

    @classmethod
    def shift(cls, s: int) -> "TwoSosWitness":
        return cls("shift", s)


@dataclass(frozen=True)
class VerifyResult:
    accepted: bool
    positive: bool = False
    queries: int = 0

    @property
    def yes(self) -> bool:
        return self.accepted and self.positive


def small_value_bound(s: int) -> int:
    return 1 << (3 * s)


def small_representative(slp: Slp) -> int:
    """The value of ``slp`` modulo ``2M + 1``, lifted into ``[-M, M]``."""
    big_m = small_value_bound(slp.size)
    t = 2 * big_m + 1
    r = eval_mod(slp, (), t)
    return r - t if r > big_m else r


def _equ_via_2sos(two_sos_oracle: Oracle) -> Oracle:
    return lambda prog: two_sos_oracle(equ_to_2sos(prog))


def _is_value(slp: Slp, candidate: int, equ: Oracle) -> bool:
    return equ(shift_slp(slp, -candidate))


def pos_via_2sos_verify(slp: Slp, witness: TwoSosWitness, equ_oracle: Oracle | None,
                        two_sos_oracle: Oracle) -> VerifyResult:
    """Check one witness for the sign of ``N``.

    ``small(N')`` is accepted when ``N == N'`` (``|N'| <= M``); the sign of
    ``N'`` is then the answer. ``shift(S)`` is accepted, meaning ``N > 0``,
    when ``N`` is not small and ``N + S`` is a sum of two squares. Equality
    tests go to ``equ_oracle``, or through the ``3 M**4`` gadget to the 2SoS
    oracle when it is ``None``.
    """
    _require_constant(slp)
    equ = equ_oracle or _equ_via_2sos(two_sos_oracle)
    big_m = small_value_bound(slp.size)
    if witness.kind == "small":
        if abs(witness.value) > big_m:
            raise MalformedWitness(f"small-value witness {witness.value} exceeds {big_m}")
        if witness.value != small_representative(slp):
            return VerifyResult(False)
        if not _is_value(slp, witness.value, equ):
            return VerifyResult(False, queries=1)
        return VerifyResult(True, witness.value > 0, 1)
    if witness.kind == "shift":
        if not 0 <= witness.value <= big_m:
            raise MalformedWitness(f"shift witness {witness.value} outside [0, {big_m}]")
        # a shift is only meaningful once |N| > M is established
        if _is_value(slp, small_representative(slp), equ):
            return VerifyResult(False, queries=1)
        return VerifyResult(bool(two_sos_oracle(shift_slp(slp, witness.value))), True, 2)
    raise MalformedWitness(f"unknown witness kind {witness.kind!r}")


def honest_witness(value: int, s: int) -> TwoSosWitness | None:
    """A witness proving the sign of ``value``, or ``None`` when ``value < -M``."""
    big_m = small_value_bound(s)
    if abs(value) <= big_m:
        return TwoSosWitness.small(value)
    if value < 0:
        return None
    shift = numtheory.next_prime_1mod4(value) - value
    if shift > big_m:
        return None
    return TwoSosWitness.shift(shift)


def default_gap_bound(s: int) -> int:
    """``ceil(4 * ln(2**(2**s))**2)``, capped at 10**6."""
    if s >= 12:
        return 10**6
    return min(math.ceil(4 * ((1 << s) * math.log(2)) ** 2), 10**6)


def pos_via_2sos_search(slp: Slp, two_sos_oracle: Oracle, equ_oracle: Oracle | None = None,
                        gap_bound: int | None = None) -> bool:
    """Decide ``N > 0`` by the small-value branch, then by enumerating shifts.

    Raises :class:`GapBoundExhausted` when no shift up to ``gap_bound`` works
    and the bound does not cover every admissible shift.
    """
    _require_constant(slp)
    equ = equ_oracle or _equ_via_2sos(two_sos_oracle)
    big_m = small_value_bound(slp.size)
    rep = small_representative(slp)
    if _is_value(slp, rep, equ):
        return rep > 0
    bound = default_gap_bound(slp.size) if gap_bound is None else gap_bound
    bound = min(bound, big_m)
    for shift in range(bound + 1):
        if two_sos_oracle(shift_slp(slp, shift)):
            return True
    if bound >= big_m:
        return False
    raise GapBoundExhausted(f"no accepted shift in [0, {bound}]")


# --- records --------------------------------------------------------------------

TRANSFORMS = ("equ-to-3sos", "equ-to-2sos", "reverse", "deg-to-ord", "ord-to-deg",
              "ord-to-div2", "mdeg-to-deg")
DRIVERS = ("pos-via-3sos", "3sos-via-div2", "pos-via-2sos")
REDUCTIONS = TRANSFORMS + DRIVERS


def ord_to_div2_size_bound(s: int, e: int) -> int:
    return s + e + 2


def run_reduction(name: str, slp: Slp, l: int | None = None, d: int | None = None,
                  exponent_override: int | None = None, seed: int = 0) -> ReductionRecord:
    """Apply a transform, or run a driver against the desk-scale oracles, and record it."""
    s = slp.size
    params = {k: v for k, v in (("l", l), ("d", d)) if v is not None}
    rec = ReductionRecord(name, instance_dict(slp, **params), input_size=s)

    def need(value, label):
        if value is None:
            raise ValueError(f"{name} needs --{label}")
        return value

    def emit(prog: Slp, bound: int, **out_params):
        rec.outputs.append(instance_dict(prog, **out_params))
        rec.output_size = prog.size
        rec.size_bound = bound

    if name == "equ-to-3sos":
        emit(equ_to_3sos(slp), s + EQU_TO_3SOS_EXTRA)
    elif name == "equ-to-2sos":
        emit(equ_to_2sos(slp), s + EQU_TO_2SOS_EXTRA)
    elif name == "reverse":
        m, q = reverse_slp(slp)
        emit(q, reversal_size_bound(s), m=m)
    elif name == "deg-to-ord":
        q, ll = deg_to_ord(slp, need(d, "d"))
        emit(q, reversal_size_bound(s), l=ll)
    elif name == "ord-to-deg":
        q, dd = ord_to_deg(slp, need(l, "l"))
        emit(q, reversal_size_bound(s) + 2, d=dd)
    elif name == "ord-to-div2":
        e = 3 * s if exponent_override is None else exponent_override
        q, ll = ord_to_div2(slp, need(l, "l"), exponent_override)
        emit(q, ord_to_div2_size_bound(s, e), l=ll)
        rec.note = f"B = 2**(2**{e})"
    elif name == "mdeg-to-deg":
        q, dd = mdeg_to_deg(slp, need(d, "d"))
        emit(q, mdeg_size_bound(s, slp.num_vars), d=dd)
    elif name == "pos-via-3sos":
        oracle = true_oracle("ThreeSoSSLP", seed=seed)
        rec.answer = pos_via_3sos(slp, oracle)
        rec.trace = oracle.trace
    elif name == "3sos-via-div2":
        div2, pos = true_oracle("Div2SLP", seed=seed), true_oracle("PosSLP", seed=seed)
        rec.answer = three_sos_via_div2_pos(slp, div2, pos)
        rec.trace = pos.trace + div2.trace
    elif name == "pos-via-2sos":
        two = true_oracle("TwoSoSSLP", seed=seed)
        rec.answer = pos_via_2sos_search(slp, two)
        rec.trace = two.trace
    else:
        raise ValueError(f"unknown reduction {name!r}; known: {', '.join(REDUCTIONS)}")
    return rec
