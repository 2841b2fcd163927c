"""Finite descriptions of infinite delta-periodic subsets of a root system.

A ZSet is an eventually periodic subset of the integers: below ``lo`` it follows
one residue pattern mod ``period``, above ``hi`` another, and in between it is
listed explicitly.  A CylinderSet attaches a ZSet of delta coefficients to each
finite root.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from fractions import Fraction
from math import ceil, floor, gcd, lcm

from ._schema import SchemaError, child, expect_dict, expect_int, expect_list, require
from .rootspace import PARITY_TABLE, RootSystem, Weight, coord_form


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _periodic_under(pattern, period, d):
    return all(((r + d) % period in pattern) == (r in pattern) for r in range(period))


@dataclass(frozen=True)
class ZSet:
    period: int
    down: frozenset
    up: frozenset
    lo: int
    hi: int
    mid: frozenset

    def __post_init__(self):
        # a purely periodic set has no distinguished window; pin it so equality is structural
        if self.lo > self.hi and self.down == self.up:
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "hi", -1)

    # construction ---------------------------------------------------------

    @staticmethod
    def _raw(period, down, up, lo, hi, member):
        """Normalize from patterns, a window [lo, hi] and a membership callback on it."""
        down = frozenset(r % period for r in down)
        up = frozenset(r % period for r in up)
        for d in _divisors(period):
            if _periodic_under(down, period, d) and _periodic_under(up, period, d):
                down = frozenset(r % d for r in down)
                up = frozenset(r % d for r in up)
                period = d
                break

        def f(k):
            if k < lo:
                return k % period in down
            if k > hi:
                return k % period in up
            return member(k)

        span_lo = min(lo, hi + 1) - period
        span_hi = max(hi, lo - 1) + period
        diff_up = [k for k in range(span_lo, span_hi + 1) if f(k) != (k % period in up)]
        diff_down = [k for k in range(span_lo, span_hi + 1) if f(k) != (k % period in down)]
        if not diff_up and not diff_down:
            return ZSet(period, down, up, 0, -1, frozenset())
        new_hi = max(diff_up) if diff_up else min(diff_down) - 1
        new_lo = min(diff_down) if diff_down else max(diff_up) + 1
        mid = frozenset(k for k in range(new_lo, new_hi + 1) if f(k))
        return ZSet(period, down, up, new_lo, new_hi, mid)

    @staticmethod
    def empty():
        return _EMPTY

    @staticmethod
    def full():
        return _FULL

    @staticmethod
    def finite(points):
        pts = frozenset(int(p) for p in points)
        if not pts:
            return _EMPTY
        return ZSet._raw(1, (), (), min(pts), max(pts), pts.__contains__)

    @staticmethod
    def progression(offset, period):
        if period <= 0:
            raise ValueError("period must be positive")
        return ZSet._raw(period, {offset % period}, {offset % period}, 0, -1, lambda k: False)

    @staticmethod
    def up_ray(start, period=1):
        """{start + period*j : j >= 0}."""
        if period <= 0:
            raise ValueError("period must be positive")
        return ZSet._raw(period, (), {start % period}, start, start - 1, lambda k: False)

    @staticmethod
    def down_ray(end, period=1):
        """{end - period*j : j >= 0}."""
        if period <= 0:
            raise ValueError("period must be positive")
        return ZSet._raw(period, {end % period}, (), end + 1, end, lambda k: False)

    @staticmethod
    def interval(a, b):
        return ZSet.finite(range(a, b + 1))

    # queries --------------------------------------------------------------

    def __contains__(self, k):
        k = int(k)
        if k < self.lo:
            return k % self.period in self.down
        if k > self.hi:
            return k % self.period in self.up
        return k in self.mid

    def is_empty(self):
        return self is _EMPTY or self == _EMPTY

    def is_full(self):
        return self == _FULL

    def is_finite(self):
        return not self.down and not self.up

    def is_bounded_below(self):
        return not self.down

    def is_bounded_above(self):
        return not self.up

    def members(self, a, b):
        """Sorted members in [a, b]."""
        return [k for k in range(a, b + 1) if k in self]

    def boundary(self):
        """Largest absolute value of a window endpoint (0 when fully periodic)."""
        if self.lo > self.hi and self.down == self.up:
            return 0
        return max(abs(self.lo), abs(self.hi))

    def min(self):
        if self.down:
            raise ValueError("unbounded below")
        cands = sorted(self.mid)
        if cands:
            return cands[0]
        if not self.up:
            raise ValueError("empty set")
        return min(self.hi + 1 + ((r - self.hi - 1) % self.period) for r in self.up)

    def max(self):
        return -(-self).min()

    def nearest(self):
        """An element of least absolute value (ties go to the nonnegative one)."""
        if self.is_empty():
            raise ValueError("empty set")
        reach = max(abs(self.lo), abs(self.hi)) + self.period + 1
        for a in range(reach + 1):
            if a in self:
                return a
            if -a in self:
                return -a
        raise AssertionError("unreachable for a nonempty eventually periodic set")

    # algebra --------------------------------------------------------------

    def _pointwise(self, other, op):
        period = lcm(self.period, other.period)
        down = {r for r in range(period) if op(r % self.period in self.down, r % other.period in other.down)}
        up = {r for r in range(period) if op(r % self.period in self.up, r % other.period in other.up)}
        los = [z.lo for z in (self, other) if not (z.lo > z.hi and z.down == z.up)]
        his = [z.hi for z in (self, other) if not (z.lo > z.hi and z.down == z.up)]
        lo = min(los) if los else 0
        hi = max(his) if his else -1
        return ZSet._raw(period, down, up, lo, hi, lambda k: op(k in self, k in other))

    def __or__(self, other):
        return _union(self, other)

    def __and__(self, other):
        return _inter(self, other)

    def __sub__(self, other):
        return _diff(self, other)

    def __neg__(self):
        return _neg(self)

    def shift(self, s):
        s = int(s)
        if s == 0:
            return self
        p = self.period
        return ZSet(p, frozenset((r + s) % p for r in self.down), frozenset((r + s) % p for r in self.up),
                    self.lo + s, self.hi + s, frozenset(k + s for k in self.mid))

    def scale_preimage(self, c):
        """{k : c*k in self} for a positive integer c."""
        if c <= 0:
            raise ValueError("scale must be positive")
        p = self.period
        down = {r for r in range(p) if (c * r) % p in self.down}
        up = {r for r in range(p) if (c * r) % p in self.up}
        lo = -((-self.lo) // c)
        hi = self.hi // c
        return ZSet._raw(p, down, up, lo, hi, lambda k: c * k in self)

    def issubset(self, other):
        return (self - other).is_empty()

    def __add__(self, other):
        return _sumset(self, other)

    def atoms(self):
        """Decompose into points, two-sided progressions and one-sided rays."""
        p = self.period
        out = []
        if self.lo > self.hi and self.down == self.up:
            return [("prog", r, p) for r in sorted(self.down)]
        skip = set()
        for r in sorted(self.down & self.up):
            if all(k in self.mid for k in range(self.lo, self.hi + 1) if k % p == r):
                out.append(("prog", r, p))
                skip.add(r)
        for r in sorted(self.down - skip):
            end = self.lo - 1 - ((self.lo - 1 - r) % p)
            out.append(("down", end, p))
        for r in sorted(self.up - skip):
            start = self.hi + 1 + ((r - self.hi - 1) % p)
            out.append(("up", start, p))
        for k in sorted(self.mid):
            if k % p not in skip:
                out.append(("point", k, 1))
        return out

    # serialization --------------------------------------------------------

    def to_json(self):
        out = {"finite": [], "prog": [], "up": [], "down": []}
        for kind, a, p in self.atoms():
            if kind == "point":
                out["finite"].append(a)
            else:
                out[kind].append([a, p])
        return out

    @staticmethod
    def from_json(obj, path=""):
        expect_dict(obj, path)
        acc = ZSet.finite(expect_int(x, child(child(path, "finite"), i))
                          for i, x in enumerate(expect_list(obj.get("finite", []), child(path, "finite"))))
        makers = {"prog": ZSet.progression, "up": ZSet.up_ray, "down": ZSet.down_ray}
        for key, make in makers.items():
            kp = child(path, key)
            for i, pair in enumerate(expect_list(obj.get(key, []), kp)):
                ip = child(kp, i)
                a, per = expect_list(pair, ip, 2)
                per = expect_int(per, child(ip, 1))
                if per <= 0:
                    raise SchemaError(child(ip, 1), "period must be positive")
                acc = acc | make(expect_int(a, child(ip, 0)), per)
        return acc

    def describe(self):
        return self.to_json()


_EMPTY = ZSet(1, frozenset(), frozenset(), 0, -1, frozenset())
_FULL = ZSet(1, frozenset({0}), frozenset({0}), 0, -1, frozenset())


@lru_cache(maxsize=1 << 16)
def _union(a, b):
    return a._pointwise(b, lambda x, y: x or y)


@lru_cache(maxsize=1 << 16)
def _inter(a, b):
    return a._pointwise(b, lambda x, y: x and y)


@lru_cache(maxsize=1 << 16)
def _diff(a, b):
    return a._pointwise(b, lambda x, y: x and not y)


@lru_cache(maxsize=1 << 16)
def _neg(a):
    p = a.period
    return ZSet(p, frozenset((-r) % p for r in a.up), frozenset((-r) % p for r in a.down),
                -a.hi, -a.lo, frozenset(-k for k in a.mid))


def _semigroup_ray(base, p1, p2):
    """{base + p1*a + p2*b : a, b >= 0}."""
    g = gcd(p1, p2)
    a, b = p1 // g, p2 // g
    frob = a * b - a - b
    if frob < 0:
        return ZSet.up_ray(base, g)
    reach = {0}
    pts = [x for x in range(frob + 1) if any(x - a * i >= 0 and (x - a * i) % b == 0 for i in range(x // a + 1))]
    reach.update(pts)
    finite = ZSet.finite(base + g * x for x in reach)
    return finite | ZSet.up_ray(base + g * (frob + 1), g)


def _atom_sum(x, y):
    kx, ax, px = x
    ky, ay, py = y
    if kx == "point" and ky == "point":
        return ZSet.finite([ax + ay])
    if kx == "point":
        x, y = y, x
        kx, ax, px, ky, ay, py = ky, ay, py, kx, ax, px
    if ky == "point":
        return {"prog": ZSet.progression, "up": ZSet.up_ray, "down": ZSet.down_ray}[kx](ax + ay, px)
    g = gcd(px, py)
    if kx == "prog" or ky == "prog" or {kx, ky} == {"up", "down"}:
        return ZSet.progression(ax + ay, g)
    if kx == "up":
        return _semigroup_ray(ax + ay, px, py)
    return -_semigroup_ray(-(ax + ay), px, py)


@lru_cache(maxsize=1 << 16)
def _sumset(a, b):
    if a.is_empty() or b.is_empty():
        return _EMPTY
    parts = [_atom_sum(x, y) for x in a.atoms() for y in b.atoms()]
    return reduce(_union, parts, _EMPTY)


@lru_cache(maxsize=None)
def root_string(rs: RootSystem, coords):
    """ZSet of delta coefficients k with coords + k*delta in R."""
    if not any(coords):
        return ZSet.full()
    r, k0 = rs.string_data_coords(coords)
    return ZSet.progression(k0, r)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _negc(a):
    return tuple(-x for x in a)


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    bound: int
    witness: tuple | None = None

    def to_json(self, rs):
        out = {"closed": self.closed, "window_bound": self.bound}
        if self.witness:
            a, b, s = self.witness
            out["witness"] = {"alpha": a.to_json(), "beta": b.to_json(), "sum": s.to_json()}
        return out


class CylinderSet:
    """A subset of R described coset by coset."""

    __slots__ = ("rs", "components", "_hash")

    def __init__(self, rs: RootSystem, components=None, check=True):
        comps = {}
        for key, zs in (components or {}).items():
            key = tuple(int(x) for x in key)
            if zs.is_empty():
                continue
            if check:
                if len(key) != rs.dim or key not in set(rs.finite_root_coords):
                    raise ValueError(f"{key} is not a finite root")
                if not zs.issubset(root_string(rs, key)):
                    raise ValueError(f"component at {key} contains non-roots")
            comps[key] = zs
        self.rs = rs
        self.components = dict(sorted(comps.items()))
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def empty(cls, rs):
        return cls(rs, {}, check=False)

    @classmethod
    def full(cls, rs):
        return cls(rs, {c: root_string(rs, c) for c in rs.finite_root_coords}, check=False)

    @classmethod
    def imaginary(cls, rs, zs=None):
        """Subset of Z*delta; the whole line by default."""
        return cls(rs, {(0,) * rs.dim: ZSet.full() if zs is None else zs}, check=False)

    @classmethod
    def coset(cls, rs, coords, zs=None):
        """The part of (coords + Z delta) cap R selected by zs (all of it by default)."""
        coords = tuple(int(x) for x in coords)
        string = root_string(rs, coords)
        return cls(rs, {coords: string if zs is None else zs & string}, check=False)

    @classmethod
    def from_weights(cls, rs, weights):
        comps = {}
        for w in weights:
            if not rs.contains(w):
                raise ValueError(f"{w} is not a root")
            key = tuple(int(x) for x in w.coords)
            comps.setdefault(key, set()).add(int(w.delta))
        return cls(rs, {k: ZSet.finite(v) for k, v in comps.items()}, check=False)

    # basics ---------------------------------------------------------------

    def _same(self, other):
        if self.rs != other.rs:
            raise ValueError("cylinder sets over different root systems")

    def get(self, coords):
        return self.components.get(tuple(coords), ZSet.empty())

    def __eq__(self, other):
        return isinstance(other, CylinderSet) and self.rs == other.rs and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rs, tuple(self.components.items())))
        return self._hash

    def __repr__(self):
        return f"CylinderSet({self.rs!r}, {len(self.components)} cosets)"

    def is_empty(self):
        return not self.components

    def member(self, w: Weight) -> bool:
        if w.m != self.rs.m or w.n != self.rs.n or not w.is_integral():
            return False
        return int(w.delta) in self.get(tuple(int(x) for x in w.coords))

    __contains__ = member

    def member_coords(self, coords, k):
        return k in self.get(coords)

    def _map(self, other, op):
        self._same(other)
        keys = set(self.components) | set(other.components)
        return CylinderSet(self.rs, {k: op(self.get(k), other.get(k)) for k in keys}, check=False)

    def union(self, other):
        return self._map(other, _union)

    def intersect(self, other):
        return self._map(other, _inter)

    def difference(self, other):
        return self._map(other, _diff)

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def negate(self):
        return CylinderSet(self.rs, {_negc(k): -z for k, z in self.components.items()}, check=False)

    __neg__ = negate

    def issubset(self, other):
        return self.difference(other).is_empty()

    def minkowski(self, other):
        """(S + T) cap R."""
        self._same(other)
        roots = set(self.rs.finite_root_coords)
        acc = {}
        for a, za in self.components.items():
            for b, zb in other.components.items():
                c = _add(a, b)
                if c not in roots:
                    continue
                part = _sumset(za, zb) & root_string(self.rs, c)
                acc[c] = acc[c] | part if c in acc else part
        return CylinderSet(self.rs, acc, check=False)

    def filter(self, pred):
        """Keep the components whose finite part satisfies pred."""
        return CylinderSet(self.rs, {k: z for k, z in self.components.items() if pred(k)}, check=False)

    # predicates from the theory -------------------------------------------

    def sdot(self):
        return [self.rs.weight(k) for k in self.components]

    def sdot_coords(self):
        return list(self.components)

    def is_symmetric(self):
        return self == self.negate()

    def window_bound(self):
        bmax = max((z.boundary() for z in self.components.values()), default=0)
        per = reduce(lcm, (z.period for z in self.components.values()), 1)
        return 2 * bmax + 2 * per

    def closure_report(self) -> ClosureReport:
        bound = self.window_bound()
        roots = set(self.rs.finite_root_coords)
        for a, za in self.components.items():
            for b, zb in self.components.items():
                c = _add(a, b)
                if c not in roots:
                    continue
                missing = (_sumset(za, zb) & root_string(self.rs, c)) - self.get(c)
                if missing.is_empty():
                    continue
                k = missing.nearest()
                ka = _split(za, zb, k)
                w = self.rs.weight
                return ClosureReport(False, bound, (w(a, ka), w(b, k - ka), w(c, k)))
        return ClosureReport(True, bound)

    def is_closed(self):
        return self.closure_report().closed

    def parts(self):
        """(S_re, S_ns, S_im, S_cross) for this subset."""
        m = self.rs.m
        re = self.filter(lambda k: any(k) and coord_form(k, k, m) != 0)
        ns = self.filter(lambda k: any(k) and coord_form(k, k, m) == 0)
        im = self.filter(lambda k: not any(k))
        cross = self.filter(lambda k: any(k))
        return re, ns, im, cross

    def is_finite(self):
        return all(z.is_finite() for z in self.components.values())

    def elements(self, depth):
        """Sorted elements with |delta coefficient| <= depth."""
        out = []
        for key, z in self.components.items():
            out.extend(self.rs.weight(key, k) for k in z.members(-depth, depth))
        return out

    # serialization --------------------------------------------------------

    def to_json(self):
        comps = []
        for key, z in self.components.items():
            entry = {"root": self.rs.weight(key).to_json()}
            entry.update(z.to_json())
            comps.append(entry)
        return {"components": comps}

    @classmethod
    def from_json(cls, rs, obj, path=""):
        expect_dict(obj, path)
        cp = child(path, "components")
        comps = {}
        for i, entry in enumerate(expect_list(require(obj, "components", path), cp)):
            ep = child(cp, i)
            expect_dict(entry, ep)
            w = Weight.from_json(require(entry, "root", ep), rs.m, rs.n, child(ep, "root"))
            if not w.is_integral() or w.delta != 0:
                raise SchemaError(child(ep, "root"), "root must be an integral finite weight with delta 0")
            key = tuple(int(x) for x in w.coords)
            if key not in set(rs.finite_root_coords):
                raise SchemaError(child(ep, "root"), "not a finite root of this family")
            zs = ZSet.from_json(entry, ep)
            if not zs.issubset(root_string(rs, key)):
                bad = (zs - root_string(rs, key)).nearest()
                raise SchemaError(ep, f"delta coefficient {bad} does not give a root")
            comps[key] = comps[key] | zs if key in comps else zs
        return cls(rs, comps, check=False)


def _split(za, zb, k):
    """Some ka in za with k - ka in zb (k is known to lie in za + zb)."""
    reach = abs(k) + 2 * (za.boundary() + zb.boundary()) + 4 * lcm(za.period, zb.period) + 8
    for a in range(reach + 1):
        for ka in (a, -a):
            if ka in za and (k - ka) in zb:
                return ka
    raise AssertionError("sumset element without a decomposition")


def sign_split(c, d, within):
    """Split ``within`` by the sign of c + k*d: returns (positive, zero, negative) ZSets."""
    c, d = Fraction(c), Fraction(d)
    if d == 0:
        if c > 0:
            return within, ZSet.empty(), ZSet.empty()
        if c < 0:
            return ZSet.empty(), ZSet.empty(), within
        return ZSet.empty(), within, ZSet.empty()
    x = -c / d
    above = ZSet.up_ray(floor(x) + 1)
    below = ZSet.down_ray(ceil(x) - 1)
    zero = ZSet.finite([int(x)]) if x.denominator == 1 else ZSet.empty()
    pos, neg = (above, below) if d > 0 else (below, above)
    return pos & within, zero & within, neg & within


def lex_nonneg(levels, within):
    """{k in within : (c_i + k*d_i)_i is lexicographically >= 0} for levels [(c_i, d_i)]."""
    if not levels:
        return within
    (c, d), rest = levels[0], levels[1:]
    pos, zero, _ = sign_split(c, d, within)
    if zero.is_empty():
        return pos
    return pos | lex_nonneg(rest, zero)


def parity_zset(rs, coords, parity):
    """Delta coefficients k where coords + k*delta is a root of the given parity."""
    coords = tuple(coords)
    string = root_string(rs, coords)
    period, pattern = PARITY_TABLE[rs.kind][rs.shape(coords)]
    hits = [r for r in range(period) if pattern[r] == parity]
    acc = ZSet.empty()
    for r in hits:
        acc = acc | ZSet.progression(r, period)
    return acc & string
