import math

import pytest
from hypothesis import given, settings, strategies as st

from qcintegrity.circuit import Circuit, GateKind, Operation, PARAM_ARITY, ARITY, is_unitary_kind
from qcintegrity.errors import QasmParseError
from qcintegrity.qasm import emit_qasm, parse_qasm

K = GateKind


def test_minimal_bell_program():
    src = 'OPENQASM 2.0; include "qelib1.inc"; qreg q[2]; h q[0]; cx q[0],q[1];'
    circ = parse_qasm(src)
    assert circ.num_qubits == 2
    assert [op.kind for op in circ.ops] == [K.H, K.CX]
    assert circ.ops[1].qubits == (0, 1)


def test_register_flattening_declaration_order():
    circ = parse_qasm("qreg a[1]; qreg b[1]; cx a[0],b[0];")
    assert circ.num_qubits == 2
    assert circ.ops[0].qubits == (0, 1)


def test_index_out_of_range_diagnostic():
    with pytest.raises(QasmParseError) as exc:
        parse_qasm("qreg q[2]; h q[5];")
    diag = exc.value.diagnostics[0]
    assert "index out of range" in diag.message
    assert diag.line == 1
    assert diag.column > 0


def test_unsupported_constructs_are_loud():
    with pytest.raises(QasmParseError, match="unsupported construct"):
        parse_qasm('qreg q[1]; creg c[1]; if(c==1) x q[0];')
    with pytest.raises(QasmParseError, match="unsupported gate"):
        parse_qasm("qreg q[1]; mystery q[0];")
    with pytest.raises(QasmParseError, match="unsupported construct"):
        parse_qasm("opaque foo q;")


def test_angle_expression_grammar():
    circ = parse_qasm("qreg q[1]; rz(pi/2) q[0]; rx(-pi) q[0]; ry(2*pi - 0.5) q[0]; u1((1+2)/4) q[0];")
    assert circ.ops[0].params[0] == pytest.approx(math.pi / 2)
    assert circ.ops[1].params[0] == pytest.approx(-math.pi)
    assert circ.ops[2].params[0] == pytest.approx(2 * math.pi - 0.5)
    assert circ.ops[3].params[0] == pytest.approx(0.75)


def test_custom_gate_definition_is_inlined():
    src = """
    OPENQASM 2.0;
    qreg q[2];
    gate foo(theta) a, b { h a; rz(theta) b; cx a, b; }
    foo(0.5) q[0], q[1];
    """
    circ = parse_qasm(src)
    assert [op.kind for op in circ.ops] == [K.H, K.RZ, K.CX]
    assert circ.ops[1].params == (0.5,)
    assert circ.ops[2].qubits == (0, 1)


def test_measure_broadcast_and_barrier():
    src = "qreg q[2]; creg c[2]; barrier q; measure q -> c;"
    circ = parse_qasm(src)
    assert circ.ops[0].kind is K.BARRIER
    assert circ.ops[0].qubits == (0, 1)
    measures = [op for op in circ.ops if op.kind is K.MEASURE]
    assert [(m.qubits[0], m.clbits[0]) for m in measures] == [(0, 0), (1, 1)]


def test_gate_broadcast_over_register():
    circ = parse_qasm("qreg q[3]; h q;")
    assert [op.qubits for op in circ.ops] == [(0,), (1,), (2,)]


def test_emit_single_gate():
    circ = Circuit("c", 1, 0, (Operation(K.X, (0,)),))
    assert "x q[0];" in emit_qasm(circ)


def test_round_trip_bell(bell):
    parsed = parse_qasm(emit_qasm(bell))
    assert parsed.ops == bell.ops
    assert parsed.num_qubits == bell.num_qubits


def test_round_trip_angle_precision():
    circ = Circuit("c", 1, 0, (Operation(K.RZ, (0,), (0.123456789012345,)),))
    parsed = parse_qasm(emit_qasm(circ))
    assert abs(parsed.ops[0].params[0] - 0.123456789012345) < 1e-12


_UNITARY_KINDS = [k for k in GateKind if is_unitary_kind(k)]


@st.composite
def circuits(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    ops = []
    for _ in range(draw(st.integers(min_value=0, max_value=12))):
        kind = draw(st.sampled_from([k for k in _UNITARY_KINDS if ARITY[k] <= n]))
        qubits = tuple(draw(st.permutations(range(n)))[: ARITY[kind]])
        params = tuple(
            draw(st.floats(min_value=-10, max_value=10, allow_nan=False))
            for _ in range(PARAM_ARITY[kind])
        )
        ops.append(Operation(kind, qubits, params))
    return Circuit("gen", n, 0, tuple(ops))


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_round_trip_property(circ):
    parsed = parse_qasm(emit_qasm(circ))
    assert parsed.num_qubits == circ.num_qubits
    assert len(parsed.ops) == len(circ.ops)
    for a, b in zip(circ.ops, parsed.ops):
        assert a.kind is b.kind
        assert a.qubits == b.qubits
        assert all(abs(x - y) < 1e-12 for x, y in zip(a.params, b.params))


def test_whitespace_insensitive():
    compact = "qreg q[2];h q[0];cx q[0],q[1];"
    spaced = "qreg q[ 2 ] ;\n  h   q[0] ;\n\tcx q[0] , q[1] ;"
    assert parse_qasm(compact).ops == parse_qasm(spaced).ops
