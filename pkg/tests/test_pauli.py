"""Pauli-word algebra, checked against explicit dense matrices."""

import numpy as np
import pytest

from qecprobe.pauli import PauliOperator, commutes, cyclic_shift, identity, multiply, parse, weight


def random_pauli(rng, n, hermitian=False):
    letters = "".join(rng.choice(list("IXYZ"), size=n))
    prefix = rng.choice(["", "-"] if hermitian else ["", "-", "+i", "-i"])
    return parse(prefix + letters)


# -- parsing and formatting -----------------------------------------------------

def test_parse_basic():
    p = parse("ZZI")
    assert p.n == 3
    assert p.letters == "ZZI"
    assert p.sign == 1

def test_parse_identity():
    p = parse("III")
    assert p == identity(3)
    assert p.weight == 0

def test_parse_sign_prefixes():
    assert parse("-YZYII").sign == -1
    assert parse("-YZYII").letters == "YZYII"
    assert parse("+XY").sign == 1
    assert parse("+iZ").sign == 1j
    assert parse("-iZ").sign == -1j

def test_parse_errors_name_position():
    with pytest.raises(ValueError, match="position 1"):
        parse("ZQZ")
    with pytest.raises(ValueError, match="position 2"):
        parse("-iQ")
    with pytest.raises(ValueError, match="empty"):
        parse("")
    with pytest.raises(ValueError, match="empty"):
        parse("-")

def test_roundtrip():
    rng = np.random.default_rng(1)
    for _ in range(100):
        p = random_pauli(rng, int(rng.integers(1, 7)))
        assert parse(str(p)) == p


# -- multiplication --------------------------------------------------------------

def test_multiply_componentwise():
    assert multiply(parse("ZII"), parse("ZZI")) == parse("IZI")

def test_multiply_phase_convention():
    # X*Z = -iY is the fixed convention; verified against dense matrices below
    assert multiply(parse("XII"), parse("ZII")) == parse("-iYII")
    assert multiply(parse("ZII"), parse("XII")) == parse("+iYII")

def test_multiply_identity():
    rng = np.random.default_rng(2)
    for _ in range(20):
        p = random_pauli(rng, 4)
        assert p * identity(4) == p
        assert identity(4) * p == p

def test_multiply_matrix_oracle():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        for _ in range(60):
            p, q = random_pauli(rng, n), random_pauli(rng, n)
            assert np.allclose((p * q).to_matrix(), p.to_matrix() @ q.to_matrix(), atol=1e-12)

def test_multiply_associative_including_sign():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        p, q, r = (random_pauli(rng, n) for _ in range(3))
        assert (p * q) * r == p * (q * r)

def test_hermitian_squares_to_identity():
    rng = np.random.default_rng(5)
    for _ in range(100):
        p = random_pauli(rng, int(rng.integers(1, 7)), hermitian=True)
        assert p * p == identity(p.n)

def test_hermitian_inverse_property():
    # P * (P * Q) == Q for Hermitian P
    rng = np.random.default_rng(6)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        p = random_pauli(rng, n, hermitian=True)
        q = random_pauli(rng, n)
        assert p * (p * q) == q

def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        multiply(parse("XI"), parse("XII"))


# -- commutation -------------------------------------------------------------------

def test_commutes_examples():
    assert commutes(parse("ZZI"), parse("IZZ"))
    assert not commutes(parse("XII"), parse("ZII"))
    assert commutes(parse("YZYII"), parse("IYZYI"))

def test_commutes_matrix_oracle_five_qubits():
    p, q = parse("YZYII"), parse("IYZYI")
    pm, qm = p.to_matrix(), q.to_matrix()
    assert np.allclose(pm @ qm - qm @ pm, 0.0)

def test_commutes_matrix_oracle_random():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for _ in range(60):
            p, q = random_pauli(rng, n), random_pauli(rng, n)
            pm, qm = p.to_matrix(), q.to_matrix()
            zero = np.allclose(pm @ qm - qm @ pm, 0.0, atol=1e-12)
            assert commutes(p, q) == zero

def test_commutes_symmetric():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        p, q = random_pauli(rng, n), random_pauli(rng, n)
        assert commutes(p, q) == commutes(q, p)

def test_commutes_ignores_signs():
    assert commutes(parse("-XZ"), parse("+iZZ")) == commutes(parse("XZ"), parse("ZZ"))


# -- weight and cyclic shifts ---------------------------------------------------------

def test_weight_examples():
    assert weight(parse("XZZXI")) == 4
    assert weight(parse("III")) == 0
    assert weight(parse("YZYII")) == 3

def test_cyclic_shift_examples():
    assert cyclic_shift(parse("YZYII"), 1) == parse("IYZYI")
    assert cyclic_shift(parse("YZYII"), 3) == parse("YIIYZ")

def test_cyclic_shift_identity_and_period():
    rng = np.random.default_rng(9)
    for _ in range(50):
        n = int(rng.integers(1, 8))
        p = random_pauli(rng, n)
        assert cyclic_shift(p, 0) == p
        assert cyclic_shift(p, n) == p
        assert cyclic_shift(p, -1) == cyclic_shift(p, n - 1)

def test_cyclic_shift_preserves_weight_and_sign():
    rng = np.random.default_rng(10)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        p = random_pauli(rng, n)
        s = int(rng.integers(0, 2 * n))
        shifted = cyclic_shift(p, s)
        assert shifted.weight == p.weight
        assert shifted.sign == p.sign
