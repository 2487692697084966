"""The straight-line program IR, its text format, and constant-circuit builders.

Gate 0 is the implicit constant 1. The instruction written on line ``p`` of a
program body (1-based) defines gate ``p`` and may only reference gates
``< p``. The last gate is the program's output; an empty body outputs 1.

Text format::

    slp <num_vars>
    var <k>
    add <i> <j>
    sub <i> <j>
    mul <i> <j>

``#`` starts a comment on input. :func:`serialize` emits the canonical form:
lowercase keywords, single spaces, LF endings, no comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

BINARY_OPS = ("add", "sub", "mul")
OPS = ("var",) + BINARY_OPS


class SlpSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SlpValidationError(ValueError):
    def __init__(self, violations: Sequence["Violation"]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class Instruction(NamedTuple):
    """One gate. For ``var`` the variable index (1-based) lives in ``i``."""

    op: str
    i: int
    j: int = 0

    @classmethod
    def var(cls, k: int) -> "Instruction":
        return cls("var", k)

    @classmethod
    def add(cls, i: int, j: int) -> "Instruction":
        return cls("add", i, j)

    @classmethod
    def sub(cls, i: int, j: int) -> "Instruction":
        return cls("sub", i, j)

    @classmethod
    def mul(cls, i: int, j: int) -> "Instruction":
        return cls("mul", i, j)

    def operands(self) -> tuple[int, ...]:
        return () if self.op == "var" else (self.i, self.j)

    def __str__(self) -> str:
        if self.op == "var":
            return f"var {self.i}"
        return f"{self.op} {self.i} {self.j}"


@dataclass(frozen=True)
class Slp:
    num_vars: int
    instrs: tuple[Instruction, ...]

    def __post_init__(self):
        if not isinstance(self.instrs, tuple):
            object.__setattr__(self, "instrs", tuple(self.instrs))

    @property
    def size(self) -> int:
        return len(self.instrs)

    @property
    def output(self) -> int:
        return len(self.instrs)

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class Violation:
    index: int  # gate index (1-based position), 0 for header problems
    rule: str
    message: str

    def __str__(self) -> str:
        return f"gate {self.index}: {self.message}"


def validate(slp: Slp) -> list[Violation]:
    """Return all invariant violations; an empty list means the program is well formed."""
    out = []
    if slp.num_vars < 0:
        out.append(Violation(0, "num_vars", f"negative variable count {slp.num_vars}"))
    for p, ins in enumerate(slp.instrs, start=1):
        if ins.op not in OPS:
            out.append(Violation(p, "opcode", f"unknown operation {ins.op!r}"))
        elif ins.op == "var":
            if not 1 <= ins.i <= slp.num_vars:
                out.append(Violation(p, "var-range", f"variable index out of range: {ins.i}"))
        else:
            for operand in ins.operands():
                if not 0 <= operand < p:
                    out.append(Violation(p, "forward-ref", f"operand {operand} >= position {p}"
                                         if operand >= p else f"negative operand {operand}"))
    return out


def check(slp: Slp) -> Slp:
    violations = validate(slp)
    if violations:
        raise SlpValidationError(violations)
    return slp


def _parse_int(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise SlpSyntaxError(lineno, f"expected a non-negative decimal integer, got {tok!r}")
    return int(tok)


def parse(text: str | bytes) -> Slp:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    num_vars = None
    instrs = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if num_vars is None:
            if toks[0] != "slp" or len(toks) != 2:
                raise SlpSyntaxError(lineno, "expected header 'slp <num_vars>'")
            num_vars = _parse_int(toks[1], lineno)
            continue
        op = toks[0]
        if op == "div":
            raise SlpSyntaxError(lineno, "division gates are not supported")
        if op not in OPS:
            raise SlpSyntaxError(lineno, f"unknown instruction {op!r}")
        arity = 1 if op == "var" else 2
        if len(toks) != arity + 1:
            raise SlpSyntaxError(lineno, f"{op} takes {arity} operand(s)")
        args = [_parse_int(t, lineno) for t in toks[1:]]
        instrs.append(Instruction(op, *args))
    if num_vars is None:
        raise SlpSyntaxError(1, "missing header 'slp <num_vars>'")
    return check(Slp(num_vars, tuple(instrs)))


def serialize(slp: Slp) -> str:
    lines = [f"slp {slp.num_vars}"]
    lines.extend(str(ins) for ins in slp.instrs)
    return "\n".join(lines) + "\n"


class SlpBuilder:
    """Append-only program under construction; every method returns a gate index."""

    def __init__(self, num_vars: int = 0):
        self.num_vars = num_vars
        self.instrs: list[Instruction] = []

    def _emit(self, ins: Instruction) -> int:
        self.instrs.append(ins)
        return len(self.instrs)

    def var(self, k: int) -> int:
        return self._emit(Instruction.var(k))

    def add(self, i: int, j: int) -> int:
        return self._emit(Instruction.add(i, j))

    def sub(self, i: int, j: int) -> int:
        return self._emit(Instruction.sub(i, j))

    def mul(self, i: int, j: int) -> int:
        return self._emit(Instruction.mul(i, j))

    def zero(self) -> int:
        return self.sub(0, 0)

    def const(self, k: int) -> int:
        """Horner evaluation of the binary expansion of ``k``; negatives as ``0 - |k|``."""
        if k == 1:
            return 0
        if k == 0:
            return self.zero()
        if k < 0:
            mag = self.const(-k)
            return self.sub(self.zero(), mag)
        g = 0
        for bit in bin(k)[3:]:
            g = self.add(g, g)
            if bit == "1":
                g = self.add(g, 0)
        return g

    def pow2(self, t: int) -> int:
        """Gate computing ``2**t`` by square-and-double over the bits of ``t``."""
        if t < 0:
            raise ValueError("exponent must be non-negative")
        if t == 0:
            return 0
        g = self.add(0, 0)
        for bit in bin(t)[3:]:
            g = self.mul(g, g)
            if bit == "1":
                g = self.add(g, g)
        return g

    def tower(self, e: int, start: int | None = None) -> int:
        """``e`` successive squarings of ``start`` (default: a fresh gate for 2)."""
        g = self.add(0, 0) if start is None else start
        for _ in range(e):
            g = self.mul(g, g)
        return g

    def splice(self, slp: Slp, var_gates: Sequence[int] | None = None) -> int:
        """Copy ``slp`` into this program and return the gate holding its output.

        With ``var_gates``, variable ``k`` of ``slp`` is bound to existing gate
        ``var_gates[k - 1]`` instead of being emitted.
        """
        remap = [0] * (slp.size + 1)
        for p, ins in enumerate(slp.instrs, start=1):
            if ins.op == "var":
                remap[p] = var_gates[ins.i - 1] if var_gates is not None else self.var(ins.i)
            else:
                remap[p] = self._emit(Instruction(ins.op, remap[ins.i], remap[ins.j]))
        return remap[slp.size]

    def build(self, out: int | None = None) -> Slp:
        """Finish the program with ``out`` as the last gate (copied via ``mul out 0`` if needed)."""
        if out is None:
            out = len(self.instrs)
        if not self.instrs or out != len(self.instrs):
            self.mul(out, 0)
        return Slp(self.num_vars, tuple(self.instrs))


def int_to_slp(k: int) -> Slp:
    b = SlpBuilder()
    return b.build(b.const(k))


def pow2_slp(t: int) -> Slp:
    b = SlpBuilder()
    return b.build(b.pow2(t))


def shift_slp(slp: Slp, c: int) -> Slp:
    """Program computing the value of ``slp`` plus the constant ``c``."""
    if c == 0:
        return slp
    b = SlpBuilder(slp.num_vars)
    b.instrs.extend(slp.instrs)
    out = slp.output
    k = b.const(abs(c))
    return b.build(b.add(out, k) if c > 0 else b.sub(out, k))


def concat(slps: Iterable[Slp]) -> tuple[SlpBuilder, list[int]]:
    """Splice several programs over shared variables into one builder."""
    slps = list(slps)
    b = SlpBuilder(max((s.num_vars for s in slps), default=0))
    outs = [b.splice(s) for s in slps]
    return b, outs
