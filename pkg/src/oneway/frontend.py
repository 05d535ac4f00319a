"""OpenQASM 2.0 subset frontend.

Three passes, each a pure value transformation::

    parse_qasm          text            -> Circuit (source vocabulary)
    transpile_to_basis  Circuit         -> Circuit over {rx, rz, h, cx, cz}
    rewrite_to_native   Circuit (basis) -> NativeSeq over {HRZ, CZ}

Gate semantics follow qelib1.inc, with ``rz(t)`` read as ``diag(1, e^{it})``
(identical to ``u1``) since every comparison downstream is up to global phase.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from . import phase as ph
from .phase import Phase

__all__ = [
    "Gate",
    "Circuit",
    "HRZ",
    "CZ",
    "NativeSeq",
    "QasmError",
    "QasmSyntaxError",
    "UnsupportedConstruct",
    "UnknownGate",
    "parse_qasm",
    "transpile_to_basis",
    "rewrite_to_native",
    "BASIS_GATES",
    "SOURCE_GATES",
]


class QasmError(Exception):
    """Base class for frontend failures."""


class QasmSyntaxError(QasmError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnsupportedConstruct(QasmError):
    def __init__(self, construct: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unsupported construct '{construct}'{where}")
        self.construct = construct


class UnknownGate(QasmError):
    def __init__(self, name: str):
        super().__init__(f"no known decomposition for gate '{name}'")
        self.gate = name


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[Phase, ...] = ()

    def __str__(self) -> str:
        ps = f"({', '.join(ph.fmt(p) for p in self.params)})" if self.params else ""
        return f"{self.name}{ps} {','.join(map(str, self.qubits))}"


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    measured: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        for g in self.gates:
            _check_operands(g.qubits, self.num_qubits, g.name)

    def append(self, name: str, qubits: tuple[int, ...] | list[int], params=()) -> None:
        qs = tuple(qubits)
        _check_operands(qs, self.num_qubits, name)
        self.gates.append(Gate(name, qs, tuple(params)))

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if len(g.qubits) == 2)


def _check_operands(qubits: tuple[int, ...], n: int, name: str) -> None:
    if any(q < 0 or q >= n for q in qubits):
        raise QasmError(f"gate '{name}' addresses qubit outside register of size {n}")
    if len(set(qubits)) != len(qubits):
        raise QasmError(f"gate '{name}' has repeated operands {qubits}")


@dataclass(frozen=True)
class HRZ:
    """``H * Rz(angle)`` on one qubit (Rz acts first)."""

    qubit: int
    angle: Phase


@dataclass(frozen=True)
class CZ:
    a: int
    b: int


NativeOp = Union[HRZ, CZ]


@dataclass
class NativeSeq:
    num_qubits: int
    ops: list[NativeOp] = field(default_factory=list)

    @property
    def hrz_count(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, HRZ))

    @property
    def cz_count(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, CZ))

    def with_zero_init(self) -> "NativeSeq":
        """Prefix ``HRZ(q, 0)`` on every qubit.

        Executed on a graph state whose input photons sit in ``|+>``, the
        prefixed pattern realizes the circuit on ``|0...0>``.
        """
        pre: list[NativeOp] = [HRZ(q, Fraction(0)) for q in range(self.num_qubits)]
        return NativeSeq(self.num_qubits, pre + list(self.ops))


# ---------------------------------------------------------------------------
# Lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(\d+\.\d*|\.\d+)([eE][-+]?\d+)?|\d+[eE][-+]?\d+)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[\[\](){};,+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# ---------------------------------------------------------------------------
# Parameter expressions
#
# Values are kept symbolic as coef * pi**power while possible so that
# literals such as ``pi/4`` or ``-3*pi/8`` stay exact.


@dataclass(frozen=True)
class _Sym:
    coef: Fraction
    power: int

    def to_float(self) -> float:
        return float(self.coef) * math.pi**self.power


_Val = Union[_Sym, float]

_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


def _as_float(v: _Val) -> float:
    return v.to_float() if isinstance(v, _Sym) else v


def _binop(op: str, a: _Val, b: _Val) -> _Val:
    if isinstance(a, _Sym) and isinstance(b, _Sym):
        if op in "+-":
            if a.coef == 0:
                return b if op == "+" else _Sym(-b.coef, b.power)
            if b.coef == 0:
                return a
            if a.power == b.power:
                c = a.coef + b.coef if op == "+" else a.coef - b.coef
                return _Sym(c, a.power if c != 0 else 0)
        elif op == "*":
            c = a.coef * b.coef
            return _Sym(c, a.power + b.power if c != 0 else 0)
        elif op == "/":
            if b.coef == 0:
                raise ZeroDivisionError("division by zero in parameter expression")
            return _Sym(a.coef / b.coef, a.power - b.power)
        elif op == "^" and b.power == 0 and b.coef.denominator == 1:
            return _Sym(a.coef ** int(b.coef), a.power * int(b.coef))
    x, y = _as_float(a), _as_float(b)
    return {"+": x + y, "-": x - y, "*": x * y, "/": x / y, "^": x**y}[op]


def _to_phase(v: _Val) -> Phase:
    if isinstance(v, _Sym):
        if v.coef == 0:
            return Fraction(0)
        if v.power == 1:
            return ph.normalize(v.coef)
        return ph.normalize(v.to_float())
    return ph.normalize(float(v))


# ---------------------------------------------------------------------------
# Parser


@dataclass
class _GateDef:
    params: list[str]
    qargs: list[str]
    body: list[tuple[str, list, list[str], _Tok]]


_BUILTIN_ARITY: dict[str, tuple[int, int]] = {
    # name: (num params, num qubits)
    "U": (3, 1), "CX": (0, 2),
    "u3": (3, 1), "u2": (2, 1), "u1": (1, 1), "u": (3, 1), "p": (1, 1), "u0": (1, 1),
    "id": (0, 1), "x": (0, 1), "y": (0, 1), "z": (0, 1), "h": (0, 1),
    "s": (0, 1), "sdg": (0, 1), "t": (0, 1), "tdg": (0, 1), "sx": (0, 1), "sxdg": (0, 1),
    "rx": (1, 1), "ry": (1, 1), "rz": (1, 1),
    "cx": (0, 2), "cy": (0, 2), "cz": (0, 2), "ch": (0, 2), "swap": (0, 2),
    "crz": (1, 2), "cu1": (1, 2), "cp": (1, 2), "rzz": (1, 2),
    "ccx": (0, 3), "cswap": (0, 3),
}

SOURCE_GATES = frozenset(_BUILTIN_ARITY)
BASIS_GATES = frozenset({"rx", "rz", "h", "cx", "cz"})

_UNSUPPORTED_KEYWORDS = {"if", "while", "for", "opaque", "reset", "OPENQASM 3"}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.qregs: dict[str, tuple[int, int]] = {}
        self.cregs: dict[str, int] = {}
        self.nq = 0
        self.gates: list[Gate] = []
        self.measured: list[int] = []
        self.defs: dict[str, _GateDef] = {}

    # token helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str | None = None, kind: str | None = None) -> _Tok:
        t = self.next()
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            raise QasmSyntaxError(f"expected {want}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def accept(self, text: str) -> bool:
        if self.peek().text == text:
            self.i += 1
            return True
        return False

    # grammar
    def parse(self) -> Circuit:
        if self.peek().text == "OPENQASM":
            self.next()
            ver = self.next()
            if not ver.text.startswith("2"):
                raise UnsupportedConstruct(f"OPENQASM {ver.text}", ver.line)
            self.expect(";")
        while self.peek().kind != "eof":
            self.statement()
        circ = Circuit(self.nq, self.gates, self.measured)
        return circ

    def statement(self) -> None:
        t = self.peek()
        if t.kind != "id":
            raise QasmSyntaxError(f"unexpected token {t.text!r}", t.line, t.col)
        word = t.text
        if word in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(word, t.line)
        if word == "include":
            self.next()
            self.expect(kind="string")
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.next()
            name = self.expect(kind="id").text
            self.expect("[")
            size = int(self.expect(kind="int").text)
            self.expect("]")
            self.expect(";")
            if word == "qreg":
                self.qregs[name] = (self.nq, size)
                self.nq += size
            else:
                self.cregs[name] = size
        elif word == "barrier":
            self.next()
            while not self.accept(";"):
                if self.peek().kind == "eof":
                    raise QasmSyntaxError("unterminated barrier", t.line, t.col)
                self.next()
        elif word == "measure":
            self.next()
            qs = self.qarg()
            self.expect("->")
            self.carg()
            self.expect(";")
            for q in qs:
                if q not in self.measured:
                    self.measured.append(q)
        elif word == "gate":
            self.gate_def()
        else:
            self.gate_call()

    def qarg(self) -> list[int]:
        tok = self.expect(kind="id")
        if tok.text not in self.qregs:
            raise QasmSyntaxError(f"unknown quantum register {tok.text!r}", tok.line, tok.col)
        start, size = self.qregs[tok.text]
        if self.accept("["):
            idx_tok = self.expect(kind="int")
            idx = int(idx_tok.text)
            self.expect("]")
            if idx >= size:
                raise QasmSyntaxError(f"index {idx} out of range for {tok.text}[{size}]", idx_tok.line, idx_tok.col)
            return [start + idx]
        return list(range(start, start + size))

    def carg(self) -> None:
        tok = self.expect(kind="id")
        if tok.text not in self.cregs:
            raise QasmSyntaxError(f"unknown classical register {tok.text!r}", tok.line, tok.col)
        if self.accept("["):
            self.expect(kind="int")
            self.expect("]")

    def gate_def(self) -> None:
        self.next()
        name = self.expect(kind="id").text
        params: list[str] = []
        if self.accept("("):
            if not self.accept(")"):
                params.append(self.expect(kind="id").text)
                while self.accept(","):
                    params.append(self.expect(kind="id").text)
                self.expect(")")
        qargs = [self.expect(kind="id").text]
        while self.accept(","):
            qargs.append(self.expect(kind="id").text)
        self.expect("{")
        body = []
        while not self.accept("}"):
            tok = self.peek()
            if tok.kind == "eof":
                raise QasmSyntaxError("unterminated gate body", tok.line, tok.col)
            if tok.text == "barrier":
                while not self.accept(";"):
                    self.next()
                continue
            if tok.text in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(tok.text, tok.line)
            gname = self.expect(kind="id").text
            exprs = self.param_exprs()
            names = [self.expect(kind="id").text]
            while self.accept(","):
                names.append(self.expect(kind="id").text)
            self.expect(";")
            body.append((gname, exprs, names, tok))
        self.defs[name] = _GateDef(params, qargs, body)

    def param_exprs(self) -> list[list[_Tok]]:
        """Collect raw token lists for each comma-separated parameter."""
        if not self.accept("("):
            return []
        exprs: list[list[_Tok]] = [[]]
        depth = 0
        while True:
            t = self.next()
            if t.kind == "eof":
                raise QasmSyntaxError("unterminated parameter list", t.line, t.col)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                if depth == 0:
                    break
                depth -= 1
            elif t.text == "," and depth == 0:
                exprs.append([])
                continue
            exprs[-1].append(t)
        if exprs == [[]]:
            return []
        return exprs

    def gate_call(self) -> None:
        tok = self.next()
        name = tok.text
        exprs = self.param_exprs()
        params = [_ExprEval(e, {}).run() for e in exprs]
        args = [self.qarg()]
        while self.accept(","):
            args.append(self.qarg())
        self.expect(";")
        width = max(len(a) for a in args)
        if any(len(a) not in (1, width) for a in args):
            raise QasmSyntaxError("mismatched register sizes in broadcast", tok.line, tok.col)
        for k in range(width):
            qs = [a[0] if len(a) == 1 else a[k] for a in args]
            self.emit(name, params, qs, tok)

    def emit(self, name: str, params: list[_Val], qubits: list[int], tok: _Tok) -> None:
        if name in self.defs:
            d = self.defs[name]
            if len(params) != len(d.params) or len(qubits) != len(d.qargs):
                raise QasmSyntaxError(f"wrong arity for gate {name!r}", tok.line, tok.col)
            env = dict(zip(d.params, params))
            qmap = dict(zip(d.qargs, qubits))
            for gname, exprs, names, gtok in d.body:
                sub = [_ExprEval(e, env).run() for e in exprs]
                try:
                    qs = [qmap[n] for n in names]
                except KeyError as exc:
                    raise QasmSyntaxError(f"unknown gate argument {exc.args[0]!r}", gtok.line, gtok.col) from None
                self.emit(gname, sub, qs, gtok)
            return
        if name not in _BUILTIN_ARITY:
            raise UnknownGate(name)
        npar, nqb = _BUILTIN_ARITY[name]
        if len(params) != npar or len(qubits) != nqb:
            raise QasmSyntaxError(
                f"gate {name!r} expects {npar} parameter(s) and {nqb} qubit(s)", tok.line, tok.col
            )
        if len(set(qubits)) != len(qubits):
            raise QasmSyntaxError(f"gate {name!r} has repeated operands", tok.line, tok.col)
        canonical = {"U": "u3", "CX": "cx", "u": "u3", "p": "u1", "cp": "cu1"}.get(name, name)
        self.gates.append(Gate(canonical, tuple(qubits), tuple(_to_phase(v) for v in params)))


class _ExprEval:
    """Recursive-descent evaluator over a pre-collected token list."""

    def __init__(self, toks: list[_Tok], env: dict[str, _Val]):
        self.toks = toks
        self.env = env
        self.i = 0

    def _peek(self) -> str:
        return self.toks[self.i].text if self.i < len(self.toks) else ""

    def _err(self, msg: str) -> QasmSyntaxError:
        t = self.toks[min(self.i, len(self.toks) - 1)] if self.toks else _Tok("", "", 0, 0)
        return QasmSyntaxError(msg, t.line, t.col)

    def run(self) -> _Val:
        if not self.toks:
            raise self._err("empty parameter expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise self._err(f"unexpected {self._peek()!r} in expression")
        return v

    def expr(self) -> _Val:
        v = self.term()
        while self._peek() in ("+", "-"):
            op = self.toks[self.i].text
            self.i += 1
            v = _binop(op, v, self.term())
        return v

    def term(self) -> _Val:
        v = self.unary()
        while self._peek() in ("*", "/"):
            op = self.toks[self.i].text
            self.i += 1
            v = _binop(op, v, self.unary())
        return v

    def unary(self) -> _Val:
        if self._peek() == "-":
            self.i += 1
            return _binop("*", _Sym(Fraction(-1), 0), self.unary())
        if self._peek() == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> _Val:
        base = self.atom()
        if self._peek() == "^":
            self.i += 1
            return _binop("^", base, self.unary())
        return base

    def atom(self) -> _Val:
        if self.i >= len(self.toks):
            raise self._err("truncated expression")
        t = self.toks[self.i]
        self.i += 1
        if t.kind in ("int", "real"):
            return _Sym(Fraction(t.text), 0)
        if t.text == "(":
            v = self.expr()
            if self._peek() != ")":
                raise self._err("expected ')'")
            self.i += 1
            return v
        if t.kind == "id":
            if t.text == "pi":
                return _Sym(Fraction(1), 1)
            if t.text in self.env:
                return self.env[t.text]
            if t.text in _FUNCS:
                if self._peek() != "(":
                    raise self._err(f"expected '(' after {t.text}")
                self.i += 1
                v = self.expr()
                if self._peek() != ")":
                    raise self._err("expected ')'")
                self.i += 1
                return _FUNCS[t.text](_as_float(v))
        raise QasmSyntaxError(f"unexpected {t.text!r} in expression", t.line, t.col)


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 source into a :class:`Circuit`.

    Measurements only mark output qubits; barriers are dropped. Raises
    :class:`QasmSyntaxError` with a position, or :class:`UnsupportedConstruct`
    naming the offending construct (classical control, opaque gates, reset).
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Step 1: source vocabulary -> {rx, rz, h, cx, cz}

_HALF = Fraction(1, 2)


def _expand(g: Gate) -> list[Gate]:
    """One level of decomposition. Every rule is exact up to global phase and
    exact (no phase) for gates built as conjugations of ``cx``."""
    n, q, p = g.name, g.qubits, g.params
    G = Gate
    if n in BASIS_GATES:
        return [g]
    if n == "id":
        return []
    if n == "x":
        return [G("rx", q, (Fraction(1),))]
    if n == "y":
        # X Z = -iY
        return [G("rz", q, (Fraction(1),)), G("rx", q, (Fraction(1),))]
    if n == "z":
        return [G("rz", q, (Fraction(1),))]
    if n in ("s", "sdg", "t", "tdg"):
        ang = {"s": Fraction(1, 2), "sdg": Fraction(3, 2), "t": Fraction(1, 4), "tdg": Fraction(7, 4)}[n]
        return [G("rz", q, (ang,))]
    if n == "sx":
        return [G("rx", q, (Fraction(1, 2),))]
    if n == "sxdg":
        return [G("rx", q, (Fraction(3, 2),))]
    if n in ("u1", "u0"):
        return [G("rz", q, p)] if n == "u1" else []
    if n == "ry":
        # S Rx(t) S^dagger, time order reads right to left
        return [G("rz", q, (Fraction(3, 2),)), G("rx", q, p), G("rz", q, (Fraction(1, 2),))]
    if n == "u3":
        theta, phi, lam = p
        return [G("rz", q, (lam,)), G("ry", q, (theta,)), G("rz", q, (phi,))]
    if n == "u2":
        phi, lam = p
        return [G("u3", q, (_HALF, phi, lam))]
    a, b = q[0], q[1]
    if n == "cy":
        return [G("rz", (b,), (Fraction(3, 2),)), G("cx", q), G("rz", (b,), (Fraction(1, 2),))]
    if n == "ch":
        # H = Ry(-pi/4) X Ry(pi/4)
        return [G("ry", (b,), (Fraction(1, 4),)), G("cx", q), G("ry", (b,), (Fraction(7, 4),))]
    if n == "swap":
        return [G("cx", (a, b)), G("cx", (b, a)), G("cx", (a, b))]
    if n == "crz":
        lam = p[0]
        return [
            G("rz", (b,), (ph.scale(lam, _HALF),)),
            G("cx", q),
            G("rz", (b,), (ph.neg(ph.scale(lam, _HALF)),)),
            G("cx", q),
        ]
    if n == "cu1":
        lam = p[0]
        half = ph.scale(lam, _HALF)
        return [
            G("rz", (a,), (half,)),
            G("cx", q),
            G("rz", (b,), (ph.neg(half),)),
            G("cx", q),
            G("rz", (b,), (half,)),
        ]
    if n == "rzz":
        return [G("cx", q), G("rz", (b,), p), G("cx", q)]
    if n == "ccx":
        c = q[2]
        t, tdg = (Fraction(1, 4),), (Fraction(7, 4),)
        return [
            G("h", (c,)), G("cx", (b, c)), G("rz", (c,), tdg), G("cx", (a, c)),
            G("rz", (c,), t), G("cx", (b, c)), G("rz", (c,), tdg), G("cx", (a, c)),
            G("rz", (b,), t), G("rz", (c,), t), G("h", (c,)), G("cx", (a, b)),
            G("rz", (a,), t), G("rz", (b,), tdg), G("cx", (a, b)),
        ]
    if n == "cswap":
        c = q[2]
        return [G("cx", (c, b)), G("ccx", (a, b, c)), G("cx", (c, b))]
    raise UnknownGate(n)


def _lower(g: Gate) -> Iterator[Gate]:
    for sub in _expand(g):
        if sub is g:
            yield g
        else:
            yield from _lower(sub)


def transpile_to_basis(c: Circuit) -> Circuit:
    """Lower every gate to the universal basis {rx, rz, h, cx, cz}."""
    out = Circuit(c.num_qubits, measured=list(c.measured))
    for g in c.gates:
        out.gates.extend(_lower(g))
    return out


# ---------------------------------------------------------------------------
# Step 2: basis -> native {HRZ, CZ}


def rewrite_to_native(c: Circuit) -> NativeSeq:
    """Apply the four native identities left to right over the gate list.

    A bracket product ``[A][B]`` executes ``B`` first, so ``Rz(t)`` becomes
    ``HRZ(t)`` followed by ``HRZ(0)`` and ``Rx(t)`` the reverse.
    """
    zero = Fraction(0)
    ops: list[NativeOp] = []
    for g in c.gates:
        n = g.name
        if n == "h":
            ops.append(HRZ(g.qubits[0], zero))
        elif n == "rz":
            q = g.qubits[0]
            ops += [HRZ(q, g.params[0]), HRZ(q, zero)]
        elif n == "rx":
            q = g.qubits[0]
            ops += [HRZ(q, zero), HRZ(q, g.params[0])]
        elif n == "cx":
            a, b = g.qubits
            ops += [HRZ(b, zero), CZ(a, b), HRZ(b, zero)]
        elif n == "cz":
            ops.append(CZ(*g.qubits))
        else:
            raise QasmError(f"gate '{n}' is not in the basis; run transpile_to_basis first")
    return NativeSeq(c.num_qubits, ops)
