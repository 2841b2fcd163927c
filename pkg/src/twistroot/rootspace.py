"""Exact weights, the indefinite form, and the four twisted root-system families.

Weights live in the basis eps_1..eps_m, del_1..del_n, delta with
(eps_i, eps_j) = [i == j], (del_p, del_q) = -[p == q] and delta isotropic and
orthogonal to everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

from ._exact import frac_str, to_fraction
from ._schema import SchemaError, child, expect_dict, expect_list, expect_rational, require

KINDS = ("A-even-odd-2", "A-odd-odd-2", "A-even-even-4", "D-2")

_ALIASES = {
    "a2m,2n-1^2": "A-even-odd-2",
    "a(2m,2n-1)^(2)": "A-even-odd-2",
    "a2m-1,2n-1^2": "A-odd-odd-2",
    "a(2m-1,2n-1)^(2)": "A-odd-odd-2",
    "a2m,2n^4": "A-even-even-4",
    "a(2m,2n)^(4)": "A-even-even-4",
    "dm+1,n^2": "D-2",
    "d(m+1,n)^(2)": "D-2",
}
for _k in KINDS:
    _ALIASES[_k.lower()] = _k


@dataclass(frozen=True, order=True)
class Weight:
    eps: tuple
    dels: tuple
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(to_fraction(x) for x in self.eps))
        object.__setattr__(self, "dels", tuple(to_fraction(x) for x in self.dels))
        object.__setattr__(self, "delta", to_fraction(self.delta))

    @classmethod
    def zero(cls, m, n):
        return cls((0,) * m, (0,) * n, 0)

    @classmethod
    def eps_unit(cls, m, n, i):
        """eps_i with 1-based index i."""
        w = [0] * m
        w[i - 1] = 1
        return cls(tuple(w), (0,) * n, 0)

    @classmethod
    def del_unit(cls, m, n, p):
        w = [0] * n
        w[p - 1] = 1
        return cls((0,) * m, tuple(w), 0)

    @classmethod
    def null(cls, m, n, k=1):
        return cls((0,) * m, (0,) * n, k)

    @classmethod
    def from_finite(cls, coords, m, delta=0):
        coords = tuple(coords)
        return cls(coords[:m], coords[m:], delta)

    @property
    def m(self):
        return len(self.eps)

    @property
    def n(self):
        return len(self.dels)

    def _check(self, other):
        if self.m != other.m or self.n != other.n:
            raise ValueError(f"dimension mismatch: ({self.m},{self.n}) vs ({other.m},{other.n})")

    def __add__(self, other):
        self._check(other)
        return Weight(
            tuple(a + b for a, b in zip(self.eps, other.eps)),
            tuple(a + b for a, b in zip(self.dels, other.dels)),
            self.delta + other.delta,
        )

    def __neg__(self):
        return Weight(tuple(-a for a in self.eps), tuple(-a for a in self.dels), -self.delta)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_fraction(c)
        return Weight(tuple(c * a for a in self.eps), tuple(c * a for a in self.dels), c * self.delta)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k):
        """Add k*delta."""
        return Weight(self.eps, self.dels, self.delta + to_fraction(k))

    @property
    def finite(self):
        return Weight(self.eps, self.dels, 0)

    @property
    def coords(self):
        """Finite coordinates eps then del, as one tuple."""
        return self.eps + self.dels

    def is_integral(self):
        return all(x.denominator == 1 for x in self.eps + self.dels + (self.delta,))

    def is_zero(self):
        return not any(self.eps) and not any(self.dels) and self.delta == 0

    def sort_key(self):
        return (self.coords, self.delta)

    def to_json(self):
        return {
            "eps": [frac_str(x) for x in self.eps],
            "del": [frac_str(x) for x in self.dels],
            "delta": frac_str(self.delta),
        }

    @classmethod
    def from_json(cls, obj, m=None, n=None, path=""):
        expect_dict(obj, path)
        eps = expect_list(require(obj, "eps", path), child(path, "eps"), m)
        dels = expect_list(require(obj, "del", path), child(path, "del"), n)
        delta = obj.get("delta", "0")
        return cls(
            tuple(expect_rational(x, child(child(path, "eps"), i)) for i, x in enumerate(eps)),
            tuple(expect_rational(x, child(child(path, "del"), i)) for i, x in enumerate(dels)),
            expect_rational(delta, child(path, "delta")),
        )

    def __str__(self):
        parts = []
        for name, vals in (("e", self.eps), ("d", self.dels)):
            for i, x in enumerate(vals, 1):
                if x:
                    parts.append(f"{x}*{name}{i}")
        if self.delta:
            parts.append(f"{self.delta}*delta")
        return " + ".join(parts) if parts else "0"


def form(a: Weight, b: Weight) -> Fraction:
    a._check(b)
    return sum((x * y for x, y in zip(a.eps, b.eps)), Fraction(0)) - sum(
        (x * y for x, y in zip(a.dels, b.dels)), Fraction(0)
    )


def coord_form(a, b, m):
    """The form on bare finite coordinate tuples (eps first, then del)."""
    return sum(x * y for x, y in zip(a[:m], b[:m])) - sum(x * y for x, y in zip(a[m:], b[m:]))


@dataclass(frozen=True)
class FamilyId:
    kind: str
    m: int
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        m, n = self.m, self.n
        if m < 0 or n < 0:
            raise ValueError("m and n must be nonnegative")
        ok = {
            "A-even-odd-2": n != 0,
            "A-odd-odd-2": m > 0 and n > 0 and (m, n) != (1, 1),
            "A-even-even-4": (m, n) != (0, 0),
            "D-2": n != 0,
        }[self.kind]
        if not ok:
            raise ValueError(f"(m,n)=({m},{n}) is not admissible for {self.kind}")

    def label(self):
        return {
            "A-even-odd-2": "A2m,2n-1^2",
            "A-odd-odd-2": "A2m-1,2n-1^2",
            "A-even-even-4": "A2m,2n^4",
            "D-2": "Dm+1,n^2",
        }[self.kind]


def parse_kind(text: str) -> str:
    key = text.strip().lower().replace(" ", "")
    if key not in _ALIASES:
        raise ValueError(f"unknown family {text!r}; expected one of {sorted(set(_ALIASES))}")
    return _ALIASES[key]


# Shape of a finite vector: which basic pattern it matches.
E, D, EE, DD, ED, E2, D2 = "e", "d", "ee", "dd", "ed", "2e", "2d"
REAL_SHAPES = (E, D, EE, DD, E2, D2)


def shape_of(coords, m):
    """Return the shape tag of a finite coordinate tuple, "0", or None."""
    nz = [(i, x) for i, x in enumerate(coords) if x != 0]
    if not nz:
        return "0"
    if len(nz) == 1:
        i, x = nz[0]
        side = "e" if i < m else "d"
        if abs(x) == 1:
            return side
        if abs(x) == 2:
            return "2" + side
        return None
    if len(nz) == 2 and all(abs(x) == 1 for _, x in nz):
        sides = "".join("e" if i < m else "d" for i, _ in nz)
        return {"ee": EE, "dd": DD, "ed": ED}[sides]
    return None


# Membership rows per shape: (shapes, allowed delta coefficients).  Rules name the set of k.
_ALL, _ODD, _EVEN, _4Z2, _4Z = "Z", "2Z+1", "2Z", "4Z+2", "4Z"
_TABLE1 = {
    "A-even-odd-2": [({E, D, EE, DD, ED}, _ALL), ({E2}, _ODD), ({D2}, _EVEN)],
    "A-odd-odd-2": [({EE, DD, ED}, _ALL), ({E2}, _ODD), ({D2}, _EVEN)],
    "A-even-even-4": [({E, D}, _ALL), ({EE, DD, ED}, _EVEN), ({E2}, _4Z2), ({D2}, _4Z)],
    "D-2": [({E, D}, _ALL), ({D2, EE, DD, ED}, _EVEN)],
}


def _rule_holds(rule, k):
    return {
        _ALL: True,
        _ODD: k % 2 == 1,
        _EVEN: k % 2 == 0,
        _4Z2: k % 4 == 2,
        _4Z: k % 4 == 0,
    }[rule]


# Root-string data (r, k) per shape, kept separate from the row patterns above.
_STRINGS = {
    "A-even-odd-2": {E: (1, 0), D: (1, 0), EE: (1, 0), DD: (1, 0), ED: (1, 0), E2: (2, 1), D2: (2, 0)},
    "A-odd-odd-2": {EE: (1, 0), DD: (1, 0), ED: (1, 0), E2: (2, 1), D2: (2, 0)},
    "A-even-even-4": {E: (1, 0), D: (1, 0), EE: (2, 0), DD: (2, 0), ED: (2, 0), E2: (4, 2), D2: (4, 0)},
    "D-2": {E: (1, 0), D: (1, 0), EE: (2, 0), DD: (2, 0), ED: (2, 0), D2: (2, 0)},
}

# Parity of root spaces: shape -> (period, parities indexed by k mod period).
# Generated by the matrix realization in `quadratic.twisted_root_data` and
# re-checked against it in the test suite.
PARITY_TABLE = {
    "A-even-odd-2": {"0": (1, ("even",)), E: (1, ("even",)), D: (1, ("odd",)), EE: (1, ("even",)),
                     DD: (1, ("even",)), ED: (1, ("odd",)), E2: (1, ("even",)), D2: (1, ("even",))},
    "A-odd-odd-2": {"0": (1, ("even",)), EE: (1, ("even",)), DD: (1, ("even",)), ED: (1, ("odd",)),
                    E2: (1, ("even",)), D2: (1, ("even",))},
    "A-even-even-4": {"0": (2, ("even", "odd")), E: (2, ("even", "odd")), D: (2, ("odd", "even")),
                      EE: (1, ("even",)), DD: (1, ("even",)), ED: (1, ("odd",)), E2: (1, ("even",)),
                      D2: (1, ("even",))},
    "D-2": {"0": (1, ("even",)), E: (1, ("even",)), D: (1, ("odd",)), EE: (1, ("even",)),
            DD: (1, ("even",)), ED: (1, ("odd",)), D2: (1, ("even",))},
}


@lru_cache(maxsize=None)
def _finite_roots(kind, m, n):
    out = [(0,) * (m + n)]
    dim = m + n
    shapes = _STRINGS[kind]
    for i in range(dim):
        for s in (1, -1):
            for mult in (1, 2):
                v = [0] * dim
                v[i] = s * mult
                out.append(tuple(v))
    for i, j in combinations(range(dim), 2):
        for si in (1, -1):
            for sj in (1, -1):
                v = [0] * dim
                v[i], v[j] = si, sj
                out.append(tuple(v))
    roots = [v for v in out if shape_of(v, m) == "0" or shape_of(v, m) in shapes]
    return tuple(sorted(roots))


class RootSystem:
    """Root system of one twisted family at rank (m, n)."""

    def __init__(self, family: FamilyId):
        self.family = family

    @classmethod
    def of(cls, kind, m, n):
        return cls(FamilyId(parse_kind(kind), m, n))

    @property
    def kind(self):
        return self.family.kind

    @property
    def m(self):
        return self.family.m

    @property
    def n(self):
        return self.family.n

    @property
    def dim(self):
        return self.family.m + self.family.n

    @property
    def kappa(self):
        return 2 if self.kind == "A-odd-odd-2" else 1

    @property
    def parity_table(self):
        return PARITY_TABLE[self.kind]

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.family == other.family

    def __hash__(self):
        return hash(self.family)

    def __repr__(self):
        return f"RootSystem({self.kind}, m={self.m}, n={self.n})"

    def _check(self, w: Weight):
        if w.m != self.m or w.n != self.n:
            raise ValueError(f"weight has shape ({w.m},{w.n}), root system has ({self.m},{self.n})")

    def zero(self):
        return Weight.zero(self.m, self.n)

    def weight(self, coords, delta=0):
        return Weight.from_finite(coords, self.m, delta)

    def form(self, a, b):
        return form(a, b)

    def contains_coords(self, coords, k):
        """Membership of (finite coordinate tuple, delta coefficient) from the row patterns."""
        if any(Fraction(x).denominator != 1 for x in coords) or Fraction(k).denominator != 1:
            return False
        k = int(k)
        shp = shape_of(tuple(int(x) for x in coords), self.m)
        if shp == "0":
            return True
        if shp is None:
            return False
        return any(shp in shapes and _rule_holds(rule, k) for shapes, rule in _TABLE1[self.kind])

    def contains(self, w: Weight) -> bool:
        self._check(w)
        return self.contains_coords(w.coords, w.delta)

    def classify(self, w: Weight) -> str:
        if not self.contains(w):
            return "NotARoot"
        if not any(w.coords):
            return "Imaginary"
        return "Real" if form(w, w) != 0 else "Nonsingular"

    def shape(self, coords):
        return shape_of(tuple(coords), self.m)

    def string_data_coords(self, coords):
        shp = shape_of(tuple(coords), self.m)
        if shp is None or shp == "0" or shp not in _STRINGS[self.kind]:
            raise ValueError(f"{coords} is not a nonzero finite root of {self.kind}")
        return _STRINGS[self.kind][shp]

    def string_data(self, a_dot: Weight):
        """(r, k) with (a_dot + Z delta) cap R = a_dot + k delta + r Z delta."""
        self._check(a_dot)
        if not a_dot.is_integral():
            raise ValueError(f"{a_dot} is not a finite root")
        return self.string_data_coords(tuple(int(x) for x in a_dot.coords))

    @cached_property
    def finite_root_coords(self):
        """Sorted finite roots as int tuples, including 0."""
        return _finite_roots(self.kind, self.m, self.n)

    def finite_roots(self):
        return [self.weight(c) for c in self.finite_root_coords]

    @cached_property
    def real_coords(self):
        return tuple(c for c in self.finite_root_coords if any(c) and coord_form(c, c, self.m) != 0)

    @cached_property
    def ns_coords(self):
        return tuple(c for c in self.finite_root_coords if any(c) and coord_form(c, c, self.m) == 0)

    def parity_coords(self, coords, k):
        if not self.contains_coords(coords, k):
            raise ValueError(f"({coords}, {k}) is not a root")
        period, pattern = PARITY_TABLE[self.kind][shape_of(tuple(int(x) for x in coords), self.m)]
        return pattern[int(k) % period]

    def parity(self, w: Weight) -> str:
        self._check(w)
        return self.parity_coords(w.coords, w.delta)

    def enumerate(self, depth):
        """All roots with |delta coefficient| <= depth, canonical order."""
        out = []
        for c in self.finite_root_coords:
            if any(c):
                r, k0 = self.string_data_coords(c)
                ks = [k for k in range(-depth, depth + 1) if (k - k0) % r == 0]
            else:
                ks = list(range(-depth, depth + 1))
            out.extend(self.weight(c, k) for k in ks)
        return out

    def to_json(self):
        return {"family": self.family.label(), "kind": self.kind, "m": self.m, "n": self.n}


def root_system_from_json(obj, path=""):
    expect_dict(obj, path)
    kind = require(obj, "family", path) if "family" in obj else require(obj, "kind", path)
    try:
        return RootSystem.of(str(kind), int(require(obj, "m", path)), int(require(obj, "n", path)))
    except (TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from None
