"""Stabilizer codes: validation, group enumeration, operator classification.

Codes here encode exactly one logical qubit (n physical qubits, n-1
independent commuting generators).  Classification of a Pauli P against a
code is purely symplectic: P either anticommutes with some generator
(detectable) or lies in the normalizer, in which case it factors as
``c * L * S`` with L one of {I, logical X, logical Z, logical Y}, S a signed
stabilizer-group element and c = +/-1 the scalar with which P acts on the
codespace.  The statevector engine provides an independent oracle for the
same classification (see simulator.logical_action_oracle).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path

from .pauli import PauliOperator, identity, parse

GROUP_QUBIT_LIMIT = 16
DISTANCE_QUBIT_LIMIT = 8


class ClassificationKind(str, enum.Enum):
    STABILIZER = "stabilizer"
    DETECTABLE = "detectable"
    LOGICAL_ACTION = "logical_action"


@dataclass(frozen=True)
class Classification:
    """How a Pauli acts relative to a code.

    For stabilizer/logical kinds, the operator equals
    ``action_sign * L * S`` with L the logical representative named by
    ``logical_letter`` ("I" for stabilizer kind) and S in the signed
    stabilizer group; it therefore acts on the codespace as
    ``action_sign * L``.  Detectable operators carry no letter or sign.
    """

    kind: ClassificationKind
    logical_letter: str | None = None
    action_sign: int | None = None

    def __str__(self) -> str:
        if self.kind is ClassificationKind.DETECTABLE:
            return "detectable"
        sign = "+" if self.action_sign == 1 else "-"
        return f"{self.kind.value} {sign}{self.logical_letter}"


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n, 1, d]] code: generators plus chosen logical representatives."""

    n: int
    generators: tuple[PauliOperator, ...]
    logical_x: PauliOperator
    logical_z: PauliOperator
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @classmethod
    def from_strings(cls, n, generators, logical_x, logical_z, name="") -> "StabilizerCode":
        return cls(n, tuple(parse(g) for g in generators), parse(logical_x), parse(logical_z), name)

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "(none)"
        return f"{self.name or 'code'}: n={self.n}, generators [{gens}]"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return "fail:\n" + "\n".join(f"  - {v}" for v in self.violations)


@lru_cache(maxsize=None)
def validate_code(code: StabilizerCode) -> ValidationReport:
    """Check every code invariant; returns a report rather than raising."""
    v: list[str] = []
    gens = code.generators
    if len(gens) != code.n - 1:
        v.append(
            f"expected n-1 = {code.n - 1} generators for a single encoded qubit, got {len(gens)}"
        )
    for g in gens:
        if g.n != code.n:
            v.append(f"generator {g} has size {g.n}, code has n={code.n}")
        if not (g.is_hermitian and g.sign in (1, -1)):
            v.append(f"generator {g} is not Hermitian with a real sign")
    for logical, label in ((code.logical_x, "logical_x"), (code.logical_z, "logical_z")):
        if logical.n != code.n:
            v.append(f"{label} {logical} has size {logical.n}, code has n={code.n}")
        if not logical.is_hermitian:
            v.append(f"{label} {logical} is not Hermitian")
    if v:
        return ValidationReport(tuple(v))  # sizes wrong; later checks would throw

    for i, j in combinations(range(len(gens)), 2):
        if not gens[i].commutes_with(gens[j]):
            v.append(f"generators anticommute: {gens[i]} vs {gens[j]}")
    if _gf2_rank([(g.x_bits << code.n) | g.z_bits for g in gens]) != len(gens):
        v.append("generators are dependent: some nonempty product collapses to +/-identity")
    for logical, label in ((code.logical_x, "logical_x"), (code.logical_z, "logical_z")):
        for g in gens:
            if not logical.commutes_with(g):
                v.append(f"{label} anticommutes with generator {g}")
    if code.logical_x.commutes_with(code.logical_z):
        v.append("logical_x and logical_z commute; they must anticommute")
    if not v:
        words = {(s.x_bits, s.z_bits) for s in enumerate_group(code)}
        for logical, label in ((code.logical_x, "logical_x"), (code.logical_z, "logical_z")):
            if (logical.x_bits, logical.z_bits) in words:
                v.append(f"{label} lies in the stabilizer group")
    return ValidationReport(tuple(v))


def require_valid(code: StabilizerCode) -> None:
    report = validate_code(code)
    if not report.ok:
        raise ValueError(f"invalid stabilizer code {code.name or ''}: {report}")


def _gf2_rank(rows: list[int]) -> int:
    rank = 0
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            rank += 1
    return rank


@lru_cache(maxsize=None)
def enumerate_group(code: StabilizerCode) -> tuple[PauliOperator, ...]:
    """All 2^(n-1) signed products of generator subsets (identity included)."""
    if code.n > GROUP_QUBIT_LIMIT:
        raise ValueError(
            f"group enumeration limited to n <= {GROUP_QUBIT_LIMIT}, got n={code.n}"
        )
    elements = [identity(code.n)]
    for g in code.generators:
        elements += [g * e for e in elements]
    return tuple(elements)


@lru_cache(maxsize=None)
def _group_index(code: StabilizerCode) -> dict[tuple[int, int], PauliOperator]:
    return {(s.x_bits, s.z_bits): s for s in enumerate_group(code)}


@lru_cache(maxsize=None)
def _logical_y(code: StabilizerCode) -> PauliOperator:
    """Hermitian logical Y representative, i * logical_x * logical_z."""
    ly = (code.logical_x * code.logical_z).times_i()
    assert ly.is_hermitian
    return ly


def _check_operand(code: StabilizerCode, p: PauliOperator) -> None:
    if p.n != code.n:
        raise ValueError(f"operator size mismatch: n={p.n} vs code n={code.n}")
    if not p.is_hermitian:
        raise ValueError(f"operator {p} is not Hermitian")


def classify(code: StabilizerCode, p: PauliOperator) -> Classification:
    """Symplectic classification of ``p`` against ``code`` (kind, letter, sign)."""
    require_valid(code)
    _check_operand(code, p)
    if any(not p.commutes_with(g) for g in code.generators):
        return Classification(ClassificationKind.DETECTABLE)
    x_component = not p.commutes_with(code.logical_z)
    z_component = not p.commutes_with(code.logical_x)
    if x_component and z_component:
        letter, rep = "Y", _logical_y(code)
    elif x_component:
        letter, rep = "X", code.logical_x
    elif z_component:
        letter, rep = "Z", code.logical_z
    else:
        letter, rep = "I", identity(code.n)
    residue = rep * p  # p = rep * residue since rep^2 = I
    group_elem = _group_index(code).get((residue.x_bits, residue.z_bits))
    if group_elem is None:
        raise AssertionError(f"normalizer element {p} did not reduce to the stabilizer group")
    sign = residue.sign * group_elem.sign  # both +/-1; residue = sign * group_elem
    kind = ClassificationKind.STABILIZER if letter == "I" else ClassificationKind.LOGICAL_ACTION
    return Classification(kind, letter, int(sign.real))


@dataclass(frozen=True)
class CorrectabilityReport:
    ok: bool
    violating_pair: tuple[PauliOperator, PauliOperator] | None = None
    reason: str | None = None

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        a, b = self.violating_pair
        return f"fail: pair ({a}, {b}): {self.reason}"


def correctable_set_check(code: StabilizerCode, errors) -> CorrectabilityReport:
    """Pairwise correctability condition over the error set plus the identity.

    For every ordered pair, E_i E_j must lie in the stabilizer group (as a
    word) or anticommute with at least one generator.  The identity is
    included so that a single undetectable non-stabilizer error fails on
    its own.
    """
    require_valid(code)
    ops = [identity(code.n)] + list(errors)
    for e in ops[1:]:
        _check_operand(code, e)
    words = {(s.x_bits, s.z_bits) for s in enumerate_group(code)}
    for ei in ops:
        for ej in ops:
            prod = ei * ej
            if (prod.x_bits, prod.z_bits) in words:
                continue
            if any(not prod.commutes_with(g) for g in code.generators):
                continue
            return CorrectabilityReport(
                False,
                (ei, ej),
                f"product {prod.unsigned()} is a logical operator "
                "(undetectable, outside the stabilizer group)",
            )
    return CorrectabilityReport(True)


@lru_cache(maxsize=None)
def _logical_scan(code: StabilizerCode, letter_filter: str | None) -> PauliOperator:
    """Minimum-weight logical operator by brute force over all 4^n words.

    Words are visited in lexicographic letter order (I < X < Y < Z), so the
    returned witness is the lexicographically smallest at minimum weight.
    ``letter_filter`` restricts the search to one logical letter.
    """
    require_valid(code)
    if code.n > DISTANCE_QUBIT_LIMIT:
        raise ValueError(
            f"brute-force distance limited to n <= {DISTANCE_QUBIT_LIMIT}, got n={code.n}"
        )
    gen_masks = [(g.x_bits, g.z_bits) for g in code.generators]
    lx = (code.logical_x.x_bits, code.logical_x.z_bits)
    lz = (code.logical_z.x_bits, code.logical_z.z_bits)
    bits = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    best: PauliOperator | None = None
    best_weight = code.n + 1
    for letters in product("IXYZ", repeat=code.n):
        x = z = 0
        for ch in letters:
            bx, bz = bits[ch]
            x = (x << 1) | bx
            z = (z << 1) | bz
        if x == 0 and z == 0:
            continue
        if any(((x & gz).bit_count() + (z & gx).bit_count()) % 2 for gx, gz in gen_masks):
            continue  # detectable
        anti_z = ((x & lz[1]).bit_count() + (z & lz[0]).bit_count()) % 2
        anti_x = ((x & lx[1]).bit_count() + (z & lx[0]).bit_count()) % 2
        if not (anti_z or anti_x):
            continue  # stabilizer word
        letter = "Y" if (anti_z and anti_x) else ("X" if anti_z else "Z")
        if letter_filter is not None and letter != letter_filter:
            continue
        w = (x | z).bit_count()
        if w < best_weight:
            best_weight = w
            best = PauliOperator(code.n, x, z, (x & z).bit_count())
    if best is None:
        raise ValueError(f"no logical operator found (letter filter {letter_filter!r})")
    return best


def distance(code: StabilizerCode) -> int:
    """Minimum weight of any logical (normalizer minus stabilizer) operator."""
    return _logical_scan(code, None).weight


def min_weight_logical(code: StabilizerCode, letter: str | None = None) -> PauliOperator:
    """Witness for :func:`distance`, optionally restricted to one logical letter."""
    if letter is not None and letter not in ("X", "Y", "Z"):
        raise ValueError(f"letter filter must be X, Y or Z, got {letter!r}")
    return _logical_scan(code, letter)


def logical_coset(code: StabilizerCode, which: str) -> list[tuple[PauliOperator, int]]:
    """Every physically distinct implementation of one logical rotation.

    Returns (operator, action_sign) pairs: each +1-signed word L*S over the
    stabilizer group together with the scalar it applies to the codespace.
    Sorted by (weight, letters); length is exactly 2^(n-1).
    """
    require_valid(code)
    if which.upper() == "X":
        rep = code.logical_x
    elif which.upper() == "Z":
        rep = code.logical_z
    elif which.upper() == "Y":
        rep = _logical_y(code)
    else:
        raise ValueError(f"logical coset selector must be X, Y or Z, got {which!r}")
    out = []
    for s in enumerate_group(code):
        elem = rep * s  # acts as +1 * rep on the codespace
        out.append((elem.unsigned(), int(elem.sign.real)))
    out.sort(key=lambda pair: (pair[0].weight, pair[0].letters))
    return out


def cyclic_orbit_report(
    code: StabilizerCode, p: PauliOperator
) -> list[tuple[int, PauliOperator, Classification]]:
    """Classify every cyclic shift of ``p`` (shift s = 0 .. n-1)."""
    return [(s, p.cyclic_shift(s), classify(code, p.cyclic_shift(s))) for s in range(code.n)]


def redundancy_formula(n: int) -> int:
    """Quadratic redundancy estimate n(n-1)/2 + 1 for an [[n,1,d]] code.

    An often-quoted count of the physically distinct ways to implement one
    logical rotation.  Exhaustive coset enumeration gives 2^(n-1) instead,
    so reports surface both figures and flag any mismatch.
    """
    return n * (n - 1) // 2 + 1


# -- built-in codes ----------------------------------------------------------

BUILTIN_CODES: dict[str, StabilizerCode] = {
    "trivial": StabilizerCode.from_strings(1, (), "X", "Z", name="trivial"),
    "repetition3": StabilizerCode.from_strings(
        3, ("ZZI", "IZZ"), "XXX", "ZII", name="repetition3"
    ),
    "fivequbit": StabilizerCode.from_strings(
        5, ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"), "XXXXX", "ZZZZZ", name="fivequbit"
    ),
}


def get_builtin(name: str) -> StabilizerCode:
    try:
        return BUILTIN_CODES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_CODES))
        raise ValueError(f"unknown built-in code {name!r} (known: {known})") from None


# -- code definition files ---------------------------------------------------

def parse_code_text(text: str, name: str = "") -> StabilizerCode:
    """Parse a code-definition file: ``n=<int>``, ``gen``/``logical_x``/``logical_z`` lines."""
    n = None
    gens: list[PauliOperator] = []
    logical_x = logical_z = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n"):
            key, _, value = line.partition("=")
            if key.strip() != "n":
                raise ValueError(f"line {lineno}: expected 'n=<int>', got {raw!r}")
            n = int(value.strip())
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected '<directive> <pauli>', got {raw!r}")
        directive, word = fields
        if directive == "gen":
            gens.append(parse(word))
        elif directive == "logical_x":
            logical_x = parse(word)
        elif directive == "logical_z":
            logical_z = parse(word)
        else:
            raise ValueError(f"line {lineno}: unknown directive {directive!r}")
    if n is None:
        raise ValueError("missing 'n=<int>' line")
    if logical_x is None or logical_z is None:
        raise ValueError("missing logical_x or logical_z line")
    return StabilizerCode(n, tuple(gens), logical_x, logical_z, name=name)


def load_code_file(path) -> StabilizerCode:
    path = Path(path)
    return parse_code_text(path.read_text(encoding="utf-8"), name=path.stem)
