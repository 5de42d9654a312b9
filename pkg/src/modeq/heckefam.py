"""The three concrete Hecke correspondence families.

* elliptic curves at level 1 with isogenies of prime degree ``ell``;
* principally polarized abelian surfaces with ``(ell, ell)``-isogenies,
  written in Igusa invariants;
* abelian surfaces with real multiplication by Q(sqrt 5) and
  ``beta``-isogenies, ``beta = a + b*phi`` totally positive and prime,
  written in Gundlach invariants.

Elements of Z[phi], phi = (1 + sqrt 5)/2, are stored as pairs ``(a, b)``
meaning ``a + b*phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

ELLIPTIC = "elliptic"
SIEGEL = "siegel"
HILBERT = "hilbert"
KINDS = (ELLIPTIC, SIEGEL, HILBERT)


class InvalidLevelError(ValueError):
    pass


class UnsupportedFamilyError(ValueError):
    pass


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24, which covers 64-bit input."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def phi_mul(x: tuple, y: tuple) -> tuple:
    """Product in Z[phi] using phi^2 = phi + 1."""
    a, b = x
    c, d = y
    return (a * c + b * d, a * d + b * c + b * d)


def _totally_positive(a: int, b: int) -> bool:
    # a + b*phi and its conjugate a + b*(1 - phi) are both positive exactly
    # when their sum 2a + b and their product (the norm) are positive.
    return 2 * a + b > 0 and a * a + a * b - b * b > 0


def quadratic_norm(a: int, b: int) -> tuple:
    """(norm, totally positive, prime element) for ``a + b*phi``."""
    if a == 0 and b == 0:
        raise ValueError("zero is not a valid element")
    n = a * a + a * b - b * b
    m = abs(n)
    prime = is_prime(m)
    if not prime:
        r = isqrt(m)
        prime = r * r == m and is_prime(r) and r % 5 in (2, 3)
    return n, _totally_positive(a, b), prime


@dataclass(frozen=True)
class HeckeFamily:
    """One Hecke family at a fixed level.

    ``level`` is the prime ``ell`` for elliptic and Siegel families and the
    pair ``(a, b)`` for the Hilbert family.
    """

    kind: str
    level: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedFamilyError(f"unknown family {self.kind!r}")
        if self.kind == HILBERT:
            try:
                a, b = self.level
            except (TypeError, ValueError):
                raise InvalidLevelError("Hilbert level must be a pair (a, b)") from None
            object.__setattr__(self, "level", (int(a), int(b)))
            if (a, b) == (0, 0):
                raise InvalidLevelError("beta must be nonzero")
            _, pos, prime = quadratic_norm(a, b)
            if not pos:
                raise InvalidLevelError(f"{a} + {b}*phi is not totally positive")
            if not prime:
                raise InvalidLevelError(f"{a} + {b}*phi is not a prime element")
        else:
            if not isinstance(self.level, int) or not is_prime(self.level):
                raise InvalidLevelError(f"level {self.level!r} is not a prime")

    # constructors

    @classmethod
    def elliptic(cls, ell: int) -> "HeckeFamily":
        return cls(ELLIPTIC, ell)

    @classmethod
    def siegel(cls, ell: int) -> "HeckeFamily":
        return cls(SIEGEL, ell)

    @classmethod
    def hilbert(cls, a: int, b: int) -> "HeckeFamily":
        return cls(HILBERT, (a, b))

    @classmethod
    def parse(cls, kind: str, level: str) -> "HeckeFamily":
        """Build from CLI-style strings, e.g. ("hilbert", "6,1")."""
        kind = kind.lower()
        try:
            if kind == HILBERT:
                a, b = (int(x) for x in level.split(","))
                return cls.hilbert(a, b)
            return cls(kind, int(level))
        except ValueError as exc:
            if isinstance(exc, (InvalidLevelError, UnsupportedFamilyError)):
                raise
            raise InvalidLevelError(f"cannot parse level {level!r} for {kind}") from None

    # derived data

    @property
    def norm(self) -> int:
        if self.kind == HILBERT:
            return quadratic_norm(*self.level)[0]
        return self.level

    @property
    def n_invariants(self) -> int:
        """Number of non-constant invariants, which is also the number of equations."""
        return {ELLIPTIC: 1, SIEGEL: 3, HILBERT: 2}[self.kind]

    @property
    def sigma_order(self) -> int:
        return 2 if self.kind == HILBERT else 1

    @property
    def presentation_name(self) -> str:
        return {ELLIPTIC: "elliptic", SIEGEL: "igusa", HILBERT: "gundlach_q5"}[self.kind]

    def describe(self) -> str:
        if self.kind == HILBERT:
            a, b = self.level
            return f"hilbert beta={a}+{b}*phi (norm {self.norm})"
        return f"{self.kind} ell={self.level}"

    def to_json(self) -> dict:
        level = list(self.level) if self.kind == HILBERT else self.level
        return {"kind": self.kind, "level": level}

    @classmethod
    def from_json(cls, obj: dict) -> "HeckeFamily":
        level = obj["level"]
        if obj["kind"] == HILBERT:
            level = tuple(level)
        return cls(obj["kind"], level)


def hecke_degree(fam: HeckeFamily) -> int:
    if fam.kind == ELLIPTIC:
        return fam.level + 1
    if fam.kind == SIEGEL:
        ell = fam.level
        return ell**3 + ell**2 + ell + 1
    return fam.norm + 1


def isogeny_degree(fam: HeckeFamily) -> int:
    if fam.kind == ELLIPTIC:
        return fam.level
    if fam.kind == SIEGEL:
        return fam.level**2
    return fam.norm


# weight of the form chi whose powers clear the denominators, and the
# exponent attached to each equation index m
_CHI_WEIGHT = {ELLIPTIC: 12, SIEGEL: 10, HILBERT: 10}
_ALPHA = {ELLIPTIC: (1,), SIEGEL: (1, 2, 2), HILBERT: (1, 1)}


def check_m(fam: HeckeFamily, m: int) -> None:
    if not 1 <= m <= fam.n_invariants:
        raise ValueError(f"m={m} out of range 1..{fam.n_invariants} for {fam.kind}")


def denominator_weight(fam: HeckeFamily, m: int) -> int:
    """Weight of the modular form clearing the denominators of the m-th equation."""
    check_m(fam, m)
    return fam.sigma_order * hecke_degree(fam) * _ALPHA[fam.kind][m - 1] * _CHI_WEIGHT[fam.kind]


def degree_ratio_bound(N_level: int, dimV: int, l: int, d: int) -> tuple:
    """((N_level*l)^(dimV^2), d <= that bound)."""
    if min(N_level, dimV, l, d) < 1:
        raise ValueError("all inputs must be positive")
    bound = (N_level * l) ** (dimV * dimV)
    return bound, d <= bound


def dim_v(fam: HeckeFamily) -> int:
    """Dimension of the symplectic space: 2 for elliptic, 4 for the surfaces."""
    return 2 if fam.kind == ELLIPTIC else 4
