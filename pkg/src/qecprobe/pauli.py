"""Signed n-qubit Pauli words with exact phase arithmetic.

The single phase convention everything else derives from is ``Y = i X Z``
(equivalently ``X Z = -i Y``).  Operators are stored as a pair of bitmasks
plus a power of i::

    P = i**phase_exp * X^x_bits * Z^z_bits

where ``X^x Z^z`` means the tensor product of per-qubit factors
``X^{x_j} Z^{z_j}``.  Bit ``n-1-j`` of each mask holds the letter at string
position ``j``, so the leftmost letter is qubit 0 and occupies the most
significant bit -- the same ordering used for statevector basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = [
    "PauliOperator",
    "parse",
    "multiply",
    "commutes",
    "weight",
    "cyclic_shift",
    "identity",
]

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)
_SIGN_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1j], [1j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

MATRIX_QUBIT_LIMIT = 10


@dataclass(frozen=True)
class PauliOperator:
    """A phase-tracked Pauli word ``sign * L_0 L_1 ... L_{n-1}``.

    Values are immutable; every operation returns a new operator.  The
    letters/sign view (used by :func:`parse` and ``str()``) and the
    bitmask/phase view are two faces of the same data.
    """

    n: int
    x_bits: int
    z_bits: int
    phase_exp: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        mask = (1 << self.n) - 1
        if not 0 <= self.x_bits <= mask or not 0 <= self.z_bits <= mask:
            raise ValueError(f"bitmask out of range for n={self.n}")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_letters(cls, letters: str) -> "PauliOperator":
        """Build the +1-signed operator with the given letter string."""
        return parse(letters)

    # -- views -------------------------------------------------------------

    @property
    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[(self.x_bits >> b) & 1, (self.z_bits >> b) & 1]
            for b in range(self.n - 1, -1, -1)
        )

    @property
    def _y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def sign(self) -> complex:
        """Global phase factor, one of 1, -1, 1j, -1j."""
        return _I_POWERS[(self.phase_exp - self._y_count) % 4]

    @property
    def is_hermitian(self) -> bool:
        """True iff the global sign is real (+1 or -1)."""
        return (self.phase_exp - self._y_count) % 2 == 0

    @property
    def is_identity_word(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if not isinstance(other, PauliOperator):
            return NotImplemented
        self._check_same_n(other)
        # moving Z^z1 past X^x2 picks up (-1) per overlapping bit
        exp = self.phase_exp + other.phase_exp + 2 * (self.z_bits & other.x_bits).bit_count()
        return PauliOperator(self.n, self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits, exp)

    def __neg__(self) -> "PauliOperator":
        return self.times_i(2)

    def times_i(self, k: int = 1) -> "PauliOperator":
        """Return ``i**k * self``."""
        return PauliOperator(self.n, self.x_bits, self.z_bits, self.phase_exp + k)

    def unsigned(self) -> "PauliOperator":
        """The same word with sign +1."""
        return PauliOperator(self.n, self.x_bits, self.z_bits, self._y_count)

    def commutes_with(self, other: "PauliOperator") -> bool:
        """Symplectic commutation test; signs are irrelevant."""
        self._check_same_n(other)
        overlap = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return overlap % 2 == 0

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def cyclic_shift(self, s: int) -> "PauliOperator":
        """Rotate the letter string right by ``s`` positions, sign unchanged."""
        s %= self.n
        if s == 0:
            return self
        mask = (1 << self.n) - 1
        ror = lambda m: ((m >> s) | (m << (self.n - s))) & mask
        return PauliOperator(self.n, ror(self.x_bits), ror(self.z_bits), self.phase_exp)

    # -- dense form (test oracle) -------------------------------------------

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; for small-n verification only."""
        if self.n > MATRIX_QUBIT_LIMIT:
            raise ValueError(f"dense matrix limited to n <= {MATRIX_QUBIT_LIMIT}, got n={self.n}")
        mat = reduce(np.kron, (_MATRICES[ch] for ch in self.letters))
        return self.sign * mat

    # -- misc ----------------------------------------------------------------

    def _check_same_n(self, other: "PauliOperator") -> None:
        if self.n != other.n:
            raise ValueError(f"operator size mismatch: n={self.n} vs n={other.n}")

    def __str__(self) -> str:
        return _SIGN_PREFIX[(self.phase_exp - self._y_count) % 4] + self.letters

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"


def parse(text: str) -> PauliOperator:
    """Parse an optional sign prefix (+, -, +i, -i) followed by I/X/Y/Z letters."""
    if not isinstance(text, str):
        raise TypeError(f"expected str, got {type(text).__name__}")
    body = text
    prefix_exp = 0
    for prefix, exp in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
        if text.startswith(prefix):
            prefix_exp = exp
            body = text[len(prefix):]
            break
    if not body:
        raise ValueError(f"empty Pauli body in {text!r}")
    offset = len(text) - len(body)
    x = z = 0
    for pos, ch in enumerate(body):
        bits = _LETTER_BITS.get(ch)
        if bits is None:
            raise ValueError(f"invalid Pauli letter {ch!r} at position {offset + pos} in {text!r}")
        x = (x << 1) | bits[0]
        z = (z << 1) | bits[1]
    y_count = (x & z).bit_count()
    return PauliOperator(len(body), x, z, prefix_exp + y_count)


def identity(n: int) -> PauliOperator:
    return PauliOperator.identity(n)


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    return p * q


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return p.commutes_with(q)


def weight(p: PauliOperator) -> int:
    return p.weight


def cyclic_shift(p: PauliOperator, s: int) -> PauliOperator:
    return p.cyclic_shift(s)
