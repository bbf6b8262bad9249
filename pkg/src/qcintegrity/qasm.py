"""OpenQASM 2.0 frontend: text -> Circuit and Circuit -> text.

Supported subset: version header, include (qelib1.inc is built in), qreg/creg,
the built-in gate set, custom `gate` definitions composed of supported gates
(inlined at parse time), measure, barrier.  Multiple registers are flattened
into a single 0-based index space in declaration order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import Circuit, GateKind, Operation, PARAM_ARITY, ARITY
from .errors import QasmParseError


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<real>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?|pi\b)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"]*")
  | (?P<arrow>->)
  | (?P<punct>==|[{}()\[\];,+\-*/^])
    """,
    re.VERBOSE,
)

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}

_GATE_ALIASES = {"U": "u3", "CX": "cx", "u": "u3", "cnot": "cx", "toffoli": "ccx"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"_Token({self.kind!r}, {self.text!r}, {self.line}:{self.col})"


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise QasmParseError(
                [ParseDiagnostic(line, col, f"unexpected character {source[pos]!r}")]
            )
        kind = m.lastgroup
        text = m.group(0)
        if kind not in ("ws", "comment"):
            tok_kind = kind if kind != "punct" and kind != "arrow" else "sym"
            if kind == "arrow":
                tokens.append(_Token("sym", "->", line, col))
            else:
                tokens.append(_Token(tok_kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _GateDef:
    __slots__ = ("name", "params", "qargs", "body")

    def __init__(self, name, params, qargs, body):
        self.name = name
        self.params = params  # formal parameter names
        self.qargs = qargs  # formal qubit argument names
        self.body = body  # list of (gate name, [expr ast], [qarg name], token)


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0
        self.qregs: list[tuple[str, int, int]] = []  # (name, size, offset)
        self.cregs: list[tuple[str, int, int]] = []
        self.gate_defs: dict[str, _GateDef] = {}
        self.ops: list[Operation] = []

    # --- token helpers -------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            self.fail(tok, f"expected '{text}', found '{tok.text or 'end of input'}'")
        return tok

    def fail(self, tok: _Token, message: str):
        raise QasmParseError([ParseDiagnostic(tok.line, tok.col, message)])

    # --- expressions ---------------------------------------------------
    def parse_expr(self):
        return self._expr_add()

    def _expr_add(self):
        node = self._expr_mul()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            node = ("bin", op, node, self._expr_mul())
        return node

    def _expr_mul(self):
        node = self._expr_unary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            node = ("bin", op, node, self._expr_unary())
        return node

    def _expr_unary(self):
        tok = self.peek()
        if tok.text == "-":
            self.next()
            return ("neg", self._expr_unary())
        if tok.text == "+":
            self.next()
            return self._expr_unary()
        return self._expr_pow()

    def _expr_pow(self):
        node = self._expr_atom()
        if self.peek().text == "^":
            self.next()
            node = ("bin", "^", node, self._expr_unary())
        return node

    def _expr_atom(self):
        tok = self.next()
        if tok.text == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.kind == "real":
            if tok.text == "pi":
                return ("num", math.pi)
            return ("num", float(tok.text))
        if tok.kind == "id":
            if tok.text in _FUNCTIONS:
                self.expect("(")
                arg = self.parse_expr()
                self.expect(")")
                return ("fn", tok.text, arg)
            return ("var", tok.text)
        self.fail(tok, f"expected expression, found '{tok.text}'")

    @staticmethod
    def eval_expr(node, env: dict[str, float], tok: _Token):
        tag = node[0]
        if tag == "num":
            return node[1]
        if tag == "var":
            if node[1] not in env:
                raise QasmParseError(
                    [ParseDiagnostic(tok.line, tok.col, f"unknown identifier '{node[1]}'")]
                )
            return env[node[1]]
        if tag == "neg":
            return -_Parser.eval_expr(node[1], env, tok)
        if tag == "fn":
            return _FUNCTIONS[node[1]](_Parser.eval_expr(node[2], env, tok))
        op, lhs, rhs = node[1], node[2], node[3]
        a = _Parser.eval_expr(lhs, env, tok)
        b = _Parser.eval_expr(rhs, env, tok)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "^":
            return a**b
        return a / b

    # --- register lookup ----------------------------------------------
    def _find_reg(self, regs, name):
        for reg in regs:
            if reg[0] == name:
                return reg
        return None

    def parse_qubit_arg(self):
        """Return ('idx', flat_index) or ('reg', name, size, offset)."""
        tok = self.next()
        if tok.kind != "id":
            self.fail(tok, f"expected register name, found '{tok.text}'")
        reg = self._find_reg(self.qregs, tok.text)
        if reg is None:
            self.fail(tok, f"unknown quantum register '{tok.text}'")
        name, size, offset = reg
        if self.peek().text == "[":
            self.next()
            idx_tok = self.next()
            if idx_tok.kind != "real" or "." in idx_tok.text:
                self.fail(idx_tok, "expected integer index")
            idx = int(idx_tok.text)
            self.expect("]")
            if idx >= size:
                self.fail(idx_tok, f"index out of range: {name}[{idx}] (size {size})")
            return ("idx", offset + idx)
        return ("reg", name, size, offset)

    def parse_clbit_arg(self):
        tok = self.next()
        if tok.kind != "id":
            self.fail(tok, f"expected register name, found '{tok.text}'")
        reg = self._find_reg(self.cregs, tok.text)
        if reg is None:
            self.fail(tok, f"unknown classical register '{tok.text}'")
        name, size, offset = reg
        if self.peek().text == "[":
            self.next()
            idx_tok = self.next()
            idx = int(idx_tok.text)
            self.expect("]")
            if idx >= size:
                self.fail(idx_tok, f"index out of range: {name}[{idx}] (size {size})")
            return ("idx", offset + idx)
        return ("reg", name, size, offset)

    # --- statements ----------------------------------------------------
    def parse_program(self) -> Circuit:
        if self.peek().text == "OPENQASM":
            self.next()
            v = self.next()
            if v.text != "2.0":
                self.fail(v, f"unsupported OpenQASM version '{v.text}'")
            self.expect(";")
        while self.peek().kind != "eof":
            self.parse_statement()
        num_qubits = sum(r[1] for r in self.qregs)
        num_clbits = sum(r[1] for r in self.cregs)
        return Circuit("", num_qubits, num_clbits, tuple(self.ops))

    def parse_statement(self):
        tok = self.peek()
        text = tok.text
        if text == "include":
            self.next()
            fname = self.next()
            self.expect(";")
            return
        if text in ("qreg", "creg"):
            self.next()
            name_tok = self.next()
            self.expect("[")
            size_tok = self.next()
            self.expect("]")
            self.expect(";")
            size = int(size_tok.text)
            if text == "qreg":
                if self._find_reg(self.qregs, name_tok.text):
                    self.fail(name_tok, f"duplicate qreg '{name_tok.text}'")
                offset = sum(r[1] for r in self.qregs)
                self.qregs.append((name_tok.text, size, offset))
            else:
                if self._find_reg(self.cregs, name_tok.text):
                    self.fail(name_tok, f"duplicate creg '{name_tok.text}'")
                offset = sum(r[1] for r in self.cregs)
                self.cregs.append((name_tok.text, size, offset))
            return
        if text == "gate":
            self.parse_gate_def()
            return
        if text in ("opaque", "if", "reset"):
            self.fail(tok, f"unsupported construct '{text}'")
        if text == "measure":
            self.parse_measure()
            return
        if text == "barrier":
            self.parse_barrier()
            return
        if tok.kind == "id":
            self.parse_gate_application()
            return
        self.fail(tok, f"unexpected token '{text}'")

    def parse_gate_def(self):
        self.expect("gate")
        name_tok = self.next()
        params = []
        if self.peek().text == "(":
            self.next()
            while self.peek().text != ")":
                params.append(self.next().text)
                if self.peek().text == ",":
                    self.next()
            self.expect(")")
        qargs = []
        while self.peek().text != "{":
            t = self.next()
            if t.kind == "id":
                qargs.append(t.text)
            elif t.text != ",":
                self.fail(t, f"unexpected token '{t.text}' in gate signature")
        self.expect("{")
        body = []
        while self.peek().text != "}":
            g_tok = self.next()
            if g_tok.text == "barrier":
                # barriers inside definitions carry no metric weight; skip
                while self.peek().text != ";":
                    self.next()
                self.expect(";")
                continue
            if g_tok.kind != "id":
                self.fail(g_tok, f"unexpected token '{g_tok.text}' in gate body")
            exprs = []
            if self.peek().text == "(":
                self.next()
                while self.peek().text != ")":
                    exprs.append(self.parse_expr())
                    if self.peek().text == ",":
                        self.next()
                self.expect(")")
            args = []
            while self.peek().text != ";":
                t = self.next()
                if t.kind == "id":
                    args.append(t.text)
                elif t.text != ",":
                    self.fail(t, f"unexpected token '{t.text}' in gate body")
            self.expect(";")
            body.append((g_tok.text, exprs, args, g_tok))
        self.expect("}")
        self.gate_defs[name_tok.text] = _GateDef(name_tok.text, params, qargs, body)

    def parse_measure(self):
        self.expect("measure")
        q = self.parse_qubit_arg()
        self.expect("->")
        c = self.parse_clbit_arg()
        tok = self.peek()
        self.expect(";")
        if q[0] == "idx" and c[0] == "idx":
            self.ops.append(Operation(GateKind.MEASURE, (q[1],), (), (c[1],)))
        elif q[0] == "reg" and c[0] == "reg":
            if q[2] != c[2]:
                self.fail(tok, "measure register size mismatch")
            for k in range(q[2]):
                self.ops.append(
                    Operation(GateKind.MEASURE, (q[3] + k,), (), (c[3] + k,))
                )
        else:
            self.fail(tok, "measure requires both operands indexed or both registers")

    def parse_barrier(self):
        self.expect("barrier")
        qubits = []
        while self.peek().text != ";":
            arg = self.parse_qubit_arg()
            if arg[0] == "idx":
                qubits.append(arg[1])
            else:
                qubits.extend(range(arg[3], arg[3] + arg[2]))
            if self.peek().text == ",":
                self.next()
        self.expect(";")
        self.ops.append(Operation(GateKind.BARRIER, tuple(qubits)))

    def parse_gate_application(self):
        name_tok = self.next()
        exprs = []
        if self.peek().text == "(":
            self.next()
            while self.peek().text != ")":
                exprs.append(self.parse_expr())
                if self.peek().text == ",":
                    self.next()
            self.expect(")")
        args = []
        while self.peek().text != ";":
            args.append(self.parse_qubit_arg())
            if self.peek().text == ",":
                self.next()
        self.expect(";")
        params = [self.eval_expr(e, {}, name_tok) for e in exprs]
        # broadcast whole-register operands
        sizes = {a[2] for a in args if a[0] == "reg"}
        if len(sizes) > 1:
            self.fail(name_tok, "mismatched register sizes in broadcast application")
        reps = sizes.pop() if sizes else 1
        for k in range(reps):
            qubits = [a[1] if a[0] == "idx" else a[3] + k for a in args]
            self.emit_gate(name_tok.text, params, qubits, name_tok)

    def emit_gate(self, name: str, params: list[float], qubits: list[int], tok: _Token):
        name = _GATE_ALIASES.get(name, name)
        try:
            kind = GateKind(name)
        except ValueError:
            kind = None
        if kind is not None and kind not in (GateKind.MEASURE, GateKind.BARRIER):
            if len(params) != PARAM_ARITY[kind]:
                self.fail(tok, f"gate '{name}' expects {PARAM_ARITY[kind]} params")
            if len(qubits) != ARITY[kind]:
                self.fail(tok, f"gate '{name}' expects {ARITY[kind]} qubits")
            if len(set(qubits)) != len(qubits):
                self.fail(tok, f"duplicate qubit operand for gate '{name}'")
            self.ops.append(Operation(kind, tuple(qubits), tuple(params)))
            return
        gdef = self.gate_defs.get(name)
        if gdef is None:
            self.fail(tok, f"unsupported gate '{name}'")
        if len(params) != len(gdef.params) or len(qubits) != len(gdef.qargs):
            self.fail(tok, f"wrong argument count for gate '{name}'")
        env = dict(zip(gdef.params, params))
        qmap = dict(zip(gdef.qargs, qubits))
        for sub_name, sub_exprs, sub_args, sub_tok in gdef.body:
            sub_params = [self.eval_expr(e, env, sub_tok) for e in sub_exprs]
            try:
                sub_qubits = [qmap[a] for a in sub_args]
            except KeyError as exc:
                self.fail(sub_tok, f"unknown qubit argument '{exc.args[0]}' in '{name}'")
            self.emit_gate(sub_name, sub_params, sub_qubits, sub_tok)


def parse_qasm(source: str, name: str = "circuit") -> Circuit:
    """Parse OpenQASM 2.0 text; raises QasmParseError with diagnostics."""
    parser = _Parser(source)
    circ = parser.parse_program()
    return Circuit(name, circ.num_qubits, circ.num_clbits, circ.ops)


def _fmt_angle(x: float) -> str:
    # repr round-trips exactly, covering the >=15 significant digit contract
    return repr(float(x))


def emit_qasm(circuit: Circuit) -> str:
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";']
    lines.append(f"qreg q[{max(circuit.num_qubits, 1)}];")
    if circuit.num_clbits > 0:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for op in circuit.ops:
        if op.kind is GateKind.MEASURE:
            lines.append(f"measure q[{op.qubits[0]}] -> c[{op.clbits[0]}];")
        elif op.kind is GateKind.BARRIER:
            args = ",".join(f"q[{q}]" for q in op.qubits)
            lines.append(f"barrier {args};")
        else:
            head = op.kind.value
            if op.params:
                head += "(" + ",".join(_fmt_angle(p) for p in op.params) + ")"
            args = ",".join(f"q[{q}]" for q in op.qubits)
            lines.append(f"{head} {args};")
    return "\n".join(lines) + "\n"
