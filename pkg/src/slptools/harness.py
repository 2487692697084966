"""Program generators and verification campaigns.

A campaign draws programs (exhaustively or at random), runs one reduction or
decider against an independent oracle on each, and produces a JSON-lines
report: a config line, one record per instance, and a summary line.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from slptools import numtheory, reductions
from slptools.deciders import (
    DIV2_CAP,
    decide_2sos,
    decide_3sos,
    decide_deg,
    decide_div2,
    decide_ord,
    decide_squ,
    decide_squ_poly_rand,
    true_oracle,
)
from slptools.evaluate import (
    BudgetExceeded,
    EvalBudget,
    degree_upper_bound,
    eval_exact,
    expand_multivariate,
    expand_univariate,
)
from slptools.polyreal import PositivityBoundInput, is_poly_square, min_value_lower_bound
from slptools.slp import Instruction, Slp, SlpBuilder, parse, serialize

EXHAUSTIVE_MAX = 6


# --- generation -------------------------------------------------------------

def gen_random_slp(size: int, num_vars: int = 0, seed: int | None = 0,
                   op_weights: dict | None = None, profile: str = "uniform") -> Slp:
    """Random program with a uniform opcode choice and uniform operands among earlier gates.

    ``op_weights`` reweights the opcodes. ``profile="grow"`` instead extends
    the latest gate at every step (squaring it, or combining it with an
    earlier gate) so values and degrees grow quickly; plain uniform programs
    mostly compute tiny values.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if profile == "grow":
        return _grow_slp(size, num_vars, rng)
    if profile != "uniform":
        raise ValueError(f"unknown profile {profile!r}")
    ops = (["var"] if num_vars else []) + ["add", "sub", "mul"]
    weights = [1.0] * len(ops) if op_weights is None else [op_weights.get(op, 0.0) for op in ops]
    instrs = []
    for p in range(1, size + 1):
        op = rng.choices(ops, weights)[0]
        if op == "var":
            instrs.append(Instruction.var(rng.randint(1, num_vars)))
        else:
            instrs.append(Instruction(op, rng.randrange(p), rng.randrange(p)))
    return Slp(num_vars, tuple(instrs))


_GROW_MOVES = ("square", "add", "sub", "mul", "var")
_GROW_WEIGHTS = (4, 3, 2, 1, 1)


def _grow_slp(size: int, num_vars: int, rng: random.Random) -> Slp:
    first = Instruction.var(rng.randint(1, num_vars)) if num_vars else Instruction.add(0, 0)
    instrs = [first]
    for p in range(2, size + 1):
        last = p - 1
        k = 5 if num_vars else 4
        move = rng.choices(_GROW_MOVES[:k], _GROW_WEIGHTS[:k])[0]
        other = rng.randrange(p - 1)  # strictly earlier than the latest gate
        if move == "square":
            ins = Instruction.mul(last, last)
        elif move == "var":
            ins = Instruction.var(rng.randint(1, num_vars))
        elif rng.random() < 0.5 and move == "sub":
            ins = Instruction.sub(other, last)
        else:
            ins = Instruction(move, last, other)
        instrs.append(ins)
    return Slp(num_vars, tuple(instrs))


def _gate_choices(p: int, num_vars: int) -> list[Instruction]:
    out = [Instruction.var(k) for k in range(1, num_vars + 1)]
    for op in ("add", "sub", "mul"):
        out.extend(Instruction(op, i, j) for i in range(p) for j in range(p))
    return out


def enumerate_slps(max_size: int, num_vars: int = 0) -> Iterator[Slp]:
    """Every program with ``1 <= size <= max_size``, shortest first."""
    if max_size > EXHAUSTIVE_MAX:
        raise ValueError(f"exhaustive enumeration is limited to size {EXHAUSTIVE_MAX}")
    frontier: list[tuple] = [()]
    for p in range(1, max_size + 1):
        choices = _gate_choices(p, num_vars)
        frontier = [prefix + (ins,) for prefix in frontier for ins in choices]
        for instrs in frontier:
            yield Slp(num_vars, instrs)


# --- configuration and report ---------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    campaign: str
    exhaustive: int = 0  # > 0 selects exhaustive mode up to this size
    count: int = 100
    size: int = 6
    seed: int = 0
    max_bits: int = 1 << 14
    max_degree: int = 1 << 12
    override_exp: int = 16
    sample_exp: int = 64
    dishonest: int = 10
    grow_fraction: float = 0.5  # share of random draws from the "grow" profile
    false_yes_tolerance: float = 0.05
    oracles: str = "true"
    workers: int = 1

    def __post_init__(self):
        if self.exhaustive > EXHAUSTIVE_MAX:
            raise ValueError(f"exhaustive size is limited to {EXHAUSTIVE_MAX}")
        if self.exhaustive < 0 or self.count < 1 or self.size < 1:
            raise ValueError("count, size and exhaustive must be positive")
        if self.oracles != "true":
            raise ValueError("only true oracles can be wired from a config; pass mocks to the drivers")

    @property
    def budget(self) -> EvalBudget:
        return EvalBudget(self.max_bits, self.max_degree)


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "inconclusive": 0}
        for r in self.records:
            counts[r["status"]] += 1
        false_yes = sum(1 for r in self.records if r.get("false_yes"))
        total = len(self.records)
        ok = counts["fail"] == 0
        if self.config.campaign == "squ-poly":
            negatives = sum(1 for r in self.records if r["expected"] is False)
            ok = ok and false_yes <= self.config.false_yes_tolerance * max(negatives, 1)
        return {"total": total, **counts, "false_yes": false_yes, "ok": ok}

    @property
    def ok(self) -> bool:
        return self.summary["ok"]

    def failures(self) -> list:
        return [r for r in self.records if r["status"] == "fail"]

    def to_jsonl(self) -> str:
        lines = [json.dumps({"type": "config", **asdict(self.config)}, sort_keys=True)]
        lines += [json.dumps({"type": "instance", **r}, sort_keys=True) for r in self.records]
        lines.append(json.dumps({"type": "summary", **self.summary}, sort_keys=True))
        return "\n".join(lines) + "\n"


# --- campaigns --------------------------------------------------------------------

def _result(expected, got, ok: bool | None, calls: int = 0, **extra) -> dict:
    status = "inconclusive" if ok is None else ("pass" if ok else "fail")
    return {"expected": expected, "got": got, "status": status, "oracle_calls": calls, **extra}


@lru_cache(maxsize=None)
def _brute_sos_tables(limit: int) -> tuple[frozenset, frozenset]:
    squares = [k * k for k in range(math.isqrt(limit) + 1)]
    two = {a + b for a in squares for b in squares if a + b < limit}
    three = {t + c for t in two for c in squares if t + c < limit}
    return frozenset(two), frozenset(three)


CHARACTERIZATION_LIMIT = 1 << 16


def _check_characterization(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    n = eval_exact(slp, (), cfg.budget)
    got = [decide_3sos(slp, cfg.budget).answer, decide_2sos(slp, cfg.budget).answer,
           decide_squ(slp, cfg.budget).answer]
    if n < 0:
        expected = [False, False, False]
    elif n < CHARACTERIZATION_LIMIT:
        two, three = _brute_sos_tables(CHARACTERIZATION_LIMIT)
        expected = [n in three, n in two, math.isqrt(n) ** 2 == n]
    else:
        return _result(None, got, None, value_bits=n.bit_length())
    return _result(expected, got, expected == got)


def _check_nn23sos(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    n = abs(eval_exact(slp, (), cfg.budget))
    got = numtheory.is_3sos(n) or numtheory.is_3sos(n + 2)
    return _result(True, got, got)


def _check_gadget(kind: str):
    def check(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
        n = eval_exact(slp, (), cfg.budget)
        if kind == "3sos":
            prog, extra, value = reductions.equ_to_3sos(slp), reductions.EQU_TO_3SOS_EXTRA, 7 * n ** 8
        else:
            prog, extra, value = reductions.equ_to_2sos(slp), reductions.EQU_TO_2SOS_EXTRA, 3 * n ** 4
        oracle = true_oracle("ThreeSoSSLP" if kind == "3sos" else "TwoSoSSLP")
        got = oracle(prog)
        ok = (got == (n == 0) and prog.size <= slp.size + extra
              and eval_exact(prog) == value)
        return _result(n == 0, got, ok, oracle.calls)
    return check


def _check_pos_via_3sos(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    n = eval_exact(slp, (), cfg.budget)
    oracle = true_oracle("ThreeSoSSLP")
    got = reductions.pos_via_3sos(slp, oracle)
    return _result(n > 0, got, got == (n > 0) and oracle.calls <= 5, oracle.calls)


def _check_3sos_via_div2(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    n = eval_exact(slp, (), cfg.budget)
    div2, pos = true_oracle("Div2SLP"), true_oracle("PosSLP")
    got = reductions.three_sos_via_div2_pos(slp, div2, pos)
    expected = numtheory.is_3sos(n)
    limit = 2 * slp.size + 3
    return _result(expected, got, got == expected and div2.calls <= limit,
                   div2.calls + pos.calls, div2_calls=div2.calls, div2_limit=limit)


def _check_reversal(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    f = expand_univariate(slp, cfg.budget)
    m, q = reductions.reverse_slp(slp)
    want = f.reversal(m)
    got = expand_univariate(q, cfg.budget)
    ok = (got == want and m <= 1 << slp.size
          and q.size <= reductions.reversal_size_bound(slp.size))
    return _result(list(want.coeffs), list(got.coeffs), ok, m=m, out_size=q.size)


def _boundary_params(m: int, anchor) -> list[int]:
    """Parameters where an answer can flip: around ``anchor`` and around ``m``."""
    values = {0, 1, m, m + 1}
    if isinstance(anchor, int):
        values |= {anchor - 1, anchor, anchor + 1}
    return sorted(v for v in values if v >= 0)


def _check_deg_ord(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    f = expand_univariate(slp, cfg.budget)
    m, _ = reductions.reverse_slp(slp)
    mismatches = []
    for d in _boundary_params(m, f.degree):
        q, l = reductions.deg_to_ord(slp, d)
        if decide_deg(slp, d, cfg.budget).answer != decide_ord(q, l, cfg.budget).answer:
            mismatches.append(["deg", d])
    for l in _boundary_params(m, f.order):
        q, d = reductions.ord_to_deg(slp, l)
        if decide_ord(slp, l, cfg.budget).answer != decide_deg(q, d, cfg.budget).answer:
            mismatches.append(["ord", l])
    return _result([], mismatches, not mismatches, m=m)


def _check_ord_div2(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    f = expand_univariate(slp, cfg.budget)
    m = degree_upper_bound(slp)
    bits = max(1, f.height().bit_length())
    exponents = [cfg.override_exp]
    if slp.size <= 3:
        exponents.append(None)  # faithful 3 * size
    checked, mismatches = 0, []
    for e in exponents:
        ee = 3 * slp.size if e is None else e
        if not reductions.ord_to_div2_sound(bits, ee):
            continue
        params = {0, 1, m + 1} | ({f.order, f.order + 1} if f.coeffs else set())
        for l in sorted(p for p in params if 0 <= p <= m + 1 and p << ee <= DIV2_CAP):
            prog, l2 = reductions.ord_to_div2(slp, l, e)
            checked += 1
            if decide_ord(slp, l, cfg.budget).answer != decide_div2(prog, l2).answer:
                mismatches.append([ee, l])
    if not checked:
        return _result([], None, None, note="soundness condition fails")
    return _result([], mismatches, not mismatches, checked=checked)


MDEG_EXACT_LIMIT = 16


def _check_mdeg(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    big = expand_multivariate(slp, cfg.budget)
    degree = big.degree
    q, _ = reductions.mdeg_to_deg(slp, 0)
    s, n = slp.size, slp.num_vars
    if q.size > reductions.mdeg_size_bound(s, n):
        return _result(degree, None, False, note="size bound")
    if n * s * s <= MDEG_EXACT_LIMIT:
        uni = expand_univariate(q, EvalBudget(1 << 22, cfg.max_degree))
        got = uni.degree
        method = "exact"
    elif big.is_zero():
        # degree cannot rise under substitution; zero stays zero
        got = degree
        method = "identity"
    elif reductions.certify_degree(q, degree, seed):
        got = degree
        method = "modular"
    else:
        return _result(str(degree), None, None, note="degree not certified")
    params = [d for d in (0, 1, degree - 1, degree, degree + 1) if isinstance(d, int) and d >= 0]
    ok = all((big.degree <= d) == (got <= d) for d in params)
    return _result(str(degree), str(got), ok, method=method)


def _squ_poly_target(slp: Slp, index: int) -> Slp:
    if index % 2:
        return slp
    b = SlpBuilder(1)
    g = b.splice(slp)
    return b.build(b.mul(g, g))


def _check_squ_poly(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    f = expand_univariate(slp, cfg.budget)
    expected = is_poly_square(f) is not None
    got = decide_squ_poly_rand(slp, cfg.sample_exp, seed, EvalBudget(1 << 20)).answer
    if expected:
        return _result(True, got, got)
    # a "yes" for a non-square is the tolerated one-sided error
    return _result(False, got, None if got else True, false_yes=got)


def _check_pos_via_2sos(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    n = eval_exact(slp, (), cfg.budget)
    s = slp.size
    two = true_oracle("TwoSoSSLP")
    w = reductions.honest_witness(n, s)
    got = bool(w) and reductions.pos_via_2sos_verify(slp, w, None, two).yes
    violations = 0
    if n <= 0 and cfg.dishonest:
        rng = random.Random(seed)
        big_m = reductions.small_value_bound(s)
        for _ in range(cfg.dishonest):
            if rng.random() < 0.5:
                cand = reductions.TwoSosWitness.small(rng.randint(1, big_m))
            else:
                cand = reductions.TwoSosWitness.shift(rng.randint(0, big_m))
            violations += reductions.pos_via_2sos_verify(slp, cand, None, two).yes
    return _result(n > 0, got, got == (n > 0) and not violations, two.calls,
                   witness=None if w is None else [w.kind, w.value], violations=violations)


GRID = range(-5000, 5000)


def _minval_target(slp: Slp) -> Slp:
    b = SlpBuilder(1)
    g = b.splice(slp)
    return b.build(b.add(b.mul(g, g), 0))


def _check_minval(slp: Slp, cfg: CampaignConfig, seed: int) -> dict:
    f = expand_univariate(slp, cfg.budget)
    d, tau = f.degree, f.bitsize()
    bound = min_value_lower_bound(PositivityBoundInput(d, tau))
    # 100**d * f(k/100) as an integer, for the grid k/100
    scaled = [c * 100 ** (d - i) for i, c in enumerate(f.coeffs)]
    lowest = min(sum(c * k ** i for i, c in enumerate(scaled)) for k in GRID)
    sampled = Fraction(lowest, 100 ** d)
    return _result(float(bound), float(sampled), sampled >= bound, degree=d, bitsize=tau)


@dataclass(frozen=True)
class Campaign:
    check: Callable
    num_vars: int | str = 0  # "multi" draws 1..3 variables per instance
    admit: Callable | None = None
    transform: Callable | None = None  # instance builder from (slp, index)


def _admit_value(slp: Slp, cfg: CampaignConfig) -> bool:
    eval_exact(slp, (), cfg.budget)
    return True


def _admit_poly(slp: Slp, cfg: CampaignConfig) -> bool:
    expand_univariate(slp, cfg.budget)
    return True


def _admit_minval(slp: Slp, cfg: CampaignConfig) -> bool:
    # the instance is g*g + 1; keep 1 <= deg g <= 6
    return 2 <= expand_univariate(slp, cfg.budget).degree <= 12


def _admit_mdeg(slp: Slp, cfg: CampaignConfig) -> bool:
    if slp.num_vars * slp.size ** 2 > 40:
        return False
    expand_multivariate(slp, cfg.budget)
    return True


CAMPAIGNS = {
    "characterization": Campaign(_check_characterization, 0, _admit_value),
    "nn23sos": Campaign(_check_nn23sos, 0, _admit_value),
    "gadget-3sos": Campaign(_check_gadget("3sos"), 0, _admit_value),
    "gadget-2sos": Campaign(_check_gadget("2sos"), 0, _admit_value),
    "pos-via-3sos": Campaign(_check_pos_via_3sos, 0, _admit_value),
    "3sos-via-div2": Campaign(_check_3sos_via_div2, 0, _admit_value),
    "reversal": Campaign(_check_reversal, 1, _admit_poly),
    "deg-ord": Campaign(_check_deg_ord, 1, _admit_poly),
    "ord-div2": Campaign(_check_ord_div2, 1, _admit_poly),
    "mdeg-deg": Campaign(_check_mdeg, "multi", _admit_mdeg),
    "squ-poly": Campaign(_check_squ_poly, 1, _admit_poly, lambda s, k: _squ_poly_target(s, k)),
    "pos-via-2sos": Campaign(_check_pos_via_2sos, 0, _admit_value),
    "minval": Campaign(_check_minval, 1, _admit_minval, lambda s, k: _minval_target(s)),
}


def _instances(cfg: CampaignConfig, camp: Campaign) -> Iterator[tuple[Slp, int]]:
    """``(program, per-instance seed)`` in report order; random draws come from one stream."""
    rng = random.Random(cfg.seed)
    if cfg.exhaustive:
        nv = 2 if camp.num_vars == "multi" else camp.num_vars
        for k, slp in enumerate(enumerate_slps(cfg.exhaustive, nv)):
            yield slp, cfg.seed + k
        return
    while True:
        if camp.num_vars == "multi":
            nv = rng.randint(1, 3)
            top = min(cfg.size, math.isqrt(40 // nv))
        else:
            nv, top = camp.num_vars, cfg.size
        size = rng.randint(1, top)
        seed = rng.getrandbits(63)
        profile = "grow" if rng.random() < cfg.grow_fraction else "uniform"
        yield gen_random_slp(size, nv, seed, profile=profile), seed


def _admitted(cfg: CampaignConfig, camp: Campaign) -> list[tuple[int, str, int]]:
    out = []
    attempts = 0
    limit = None if cfg.exhaustive else 200 * cfg.count
    for slp, seed in _instances(cfg, camp):
        attempts += 1
        if limit is not None and attempts > limit:
            raise RuntimeError(f"only {len(out)} of {cfg.count} instances fit the budget")
        if camp.transform is not None:
            slp = camp.transform(slp, attempts)
        try:
            keep = camp.admit is None or camp.admit(slp, cfg)
        except BudgetExceeded:
            keep = False
        if keep:
            out.append((len(out), serialize(slp), seed))
            if not cfg.exhaustive and len(out) == cfg.count:
                break
    return out


def _run_one(args) -> dict:
    cfg, index, text, seed = args
    camp = CAMPAIGNS[cfg.campaign]
    slp = parse(text)
    try:
        res = camp.check(slp, cfg, seed)
    except BudgetExceeded as exc:
        res = _result(None, None, None, note=str(exc))
    except Exception as exc:  # a crash is a failure, with the instance kept for replay
        res = _result(None, None, False, error=f"{type(exc).__name__}: {exc}")
    return {"index": index, "instance": text, "seed": seed, **res}


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    if cfg.campaign not in CAMPAIGNS:
        raise ValueError(f"unknown campaign {cfg.campaign!r}; known: {', '.join(CAMPAIGNS)}")
    jobs = [(cfg, index, text, seed) for index, text, seed in _admitted(cfg, CAMPAIGNS[cfg.campaign])]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=64))
    else:
        records = [_run_one(job) for job in jobs]
    return CampaignReport(cfg, records)
