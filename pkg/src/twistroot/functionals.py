"""Rational functionals on the weight space and what they cut out of root subsets.

Includes an exact Fourier-Motzkin solver for homogeneous strict/weak
inequality systems, used to realize a prescribed "nonnegative part" of a
delta-periodic root subset as the nonnegative set of a single functional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._exact import frac_str, nullspace, simplest_between, solve
from ._schema import expect_dict, expect_list, expect_rational, child
from .cylsets import CylinderSet, ZSet, lex_nonneg, parity_zset, sign_split
from .rootspace import RootSystem, Weight, coord_form
from .shadow import PreconditionError, ShadowAssignment, build_T, hybrid_direction, verify_main_i


@dataclass(frozen=True)
class Functional:
    eps_vals: tuple
    del_vals: tuple
    delta_val: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eps_vals", tuple(Fraction(x) for x in self.eps_vals))
        object.__setattr__(self, "del_vals", tuple(Fraction(x) for x in self.del_vals))
        object.__setattr__(self, "delta_val", Fraction(self.delta_val))

    @classmethod
    def zero(cls, m, n):
        return cls((0,) * m, (0,) * n, 0)

    @classmethod
    def from_vector(cls, vec, m):
        vec = list(vec)
        return cls(vec[:m], vec[m:-1], vec[-1])

    @property
    def vector(self):
        return self.eps_vals + self.del_vals + (self.delta_val,)

    @property
    def finite_vals(self):
        return self.eps_vals + self.del_vals

    def on_coords(self, coords):
        return sum((a * x for a, x in zip(self.finite_vals, coords)), Fraction(0))

    def __call__(self, w: Weight):
        return self.on_coords(w.coords) + self.delta_val * w.delta

    def levels(self, coords):
        return (self.on_coords(coords), self.delta_val)

    def to_json(self):
        return {"eps": [frac_str(x) for x in self.eps_vals], "del": [frac_str(x) for x in self.del_vals],
                "delta": frac_str(self.delta_val)}

    @classmethod
    def from_json(cls, obj, m=None, n=None, path=""):
        expect_dict(obj, path)
        eps = expect_list(obj.get("eps", []), child(path, "eps"), m)
        dels = expect_list(obj.get("del", []), child(path, "del"), n)
        return cls(
            tuple(expect_rational(x, child(child(path, "eps"), i)) for i, x in enumerate(eps)),
            tuple(expect_rational(x, child(child(path, "del"), i)) for i, x in enumerate(dels)),
            expect_rational(obj.get("delta", "0"), child(path, "delta")),
        )


@dataclass
class TriDecomp:
    plus: CylinderSet
    zero: CylinderSet
    minus: CylinderSet

    def to_json(self):
        return {"plus": self.plus.to_json(), "zero": self.zero.to_json(), "minus": self.minus.to_json()}


def tri_decompose(S: CylinderSet, z: Functional) -> TriDecomp:
    parts = ({}, {}, {})
    for key, comp in S.components.items():
        for store, piece in zip(parts, sign_split(z.on_coords(key), z.delta_val, comp)):
            store[key] = piece
    return TriDecomp(*(CylinderSet(S.rs, p, check=False) for p in parts))


@dataclass
class ParabolicSet:
    P: CylinderSet
    levi: CylinderSet
    nilpart: CylinderSet
    covers: bool
    closed: bool

    def to_json(self):
        return {"P": self.P.to_json(), "levi": self.levi.to_json(), "nilpart": self.nilpart.to_json(),
                "covers": self.covers, "closed": self.closed}


def parabolic(rs: RootSystem, lam: Functional, mu: Functional | None = None) -> ParabolicSet:
    """P = {lam > 0} union ({lam = 0} cap {mu >= 0}) inside the full root system."""
    full = CylinderSet.full(rs)
    comps = {}
    for key, comp in full.components.items():
        levels = [lam.levels(key)]
        if mu is not None:
            levels.append(mu.levels(key))
        else:
            levels.append((Fraction(0), Fraction(0)))
        comps[key] = lex_nonneg(levels, comp)
    P = CylinderSet(rs, comps, check=False)
    neg = P.negate()
    covers = (P | neg) == full
    closed = P.minkowski(P).issubset(P)
    if not (covers and closed):
        raise AssertionError("parabolic axioms failed; this indicates a bug")
    return ParabolicSet(P, P & neg, P - neg, covers, closed)


# ---------------------------------------------------------------------------
# exact homogeneous inequality solving


@dataclass(frozen=True)
class Ineq:
    """coeffs . x > 0 when strict, >= 0 otherwise."""

    coeffs: tuple
    strict: bool

    def normalized(self):
        lead = next((abs(c) for c in self.coeffs if c != 0), None)
        if lead is None:
            return self
        return Ineq(tuple(c / lead for c in self.coeffs), self.strict)

    def holds(self, x):
        v = sum(a * b for a, b in zip(self.coeffs, x))
        return v > 0 if self.strict else v >= 0


class Infeasible(Exception):
    def __init__(self, certificate):
        super().__init__("inequality system has no solution")
        self.certificate = certificate


def _dedupe(ineqs):
    best = {}
    for q in ineqs:
        q = q.normalized()
        if not any(q.coeffs):
            if q.strict:
                raise Infeasible(q)
            continue
        prev = best.get(q.coeffs)
        if prev is None or (q.strict and not prev.strict):
            best[q.coeffs] = q
    return list(best.values())


def fourier_motzkin(ineqs, nvars):
    """A rational point satisfying every inequality, or raise Infeasible."""
    system = _dedupe(ineqs)
    stages = []
    remaining = list(range(nvars))
    while remaining:
        def cost(v):
            pos = sum(1 for q in system if q.coeffs[v] > 0)
            neg = sum(1 for q in system if q.coeffs[v] < 0)
            return pos * neg - pos - neg

        var = min(remaining, key=cost)
        remaining.remove(var)
        stages.append((var, system))
        pos = [q for q in system if q.coeffs[var] > 0]
        neg = [q for q in system if q.coeffs[var] < 0]
        rest = [q for q in system if q.coeffs[var] == 0]
        for p in pos:
            for n in neg:
                a, b = p.coeffs[var], -n.coeffs[var]
                coeffs = tuple(x / a + y / b for x, y in zip(p.coeffs, n.coeffs))
                rest.append(Ineq(coeffs, p.strict or n.strict))
        system = _dedupe(rest)
    x = [Fraction(0)] * nvars
    for var, sys_at in reversed(stages):
        lo = hi = None
        lo_s = hi_s = False
        for q in sys_at:
            a = q.coeffs[var]
            if a == 0:
                continue
            other = sum(c * x[i] for i, c in enumerate(q.coeffs) if i != var)
            bound = -other / a
            if a > 0:
                if lo is None or bound > lo or (bound == lo and q.strict):
                    lo, lo_s = bound, q.strict
            else:
                if hi is None or bound < hi or (bound == hi and q.strict):
                    hi, hi_s = bound, q.strict
        x[var] = simplest_between(lo, lo_s, hi, hi_s)
    for q in ineqs:
        if not q.holds(x):
            raise AssertionError("back-substitution produced a violating point")
    return x


def _value_row(coords, k):
    return tuple(Fraction(c) for c in coords) + (Fraction(k),)


def _delta_row(dim, sign):
    return (Fraction(0),) * dim + (Fraction(sign),)


def _atom_constraints(coords, zs, nonneg):
    """Constraints forcing value(k) >= 0 (nonneg) or < 0 on every k in zs."""
    dim = len(coords)
    out = []

    def val(k, sign=1):
        row = _value_row(coords, k)
        return tuple(sign * c for c in row)

    for kind, a, _ in zs.atoms():
        if nonneg:
            out.append(Ineq(val(a), False))
        else:
            out.append(Ineq(val(a, -1), True))
        if kind == "prog":
            out += [Ineq(_delta_row(dim, 1), False), Ineq(_delta_row(dim, -1), False)]
        elif kind == "up":
            out.append(Ineq(_delta_row(dim, 1 if nonneg else -1), False))
        elif kind == "down":
            out.append(Ineq(_delta_row(dim, -1 if nonneg else 1), False))
    return out


def _without_ns(S: CylinderSet):
    re, _, im, _ = S.parts()
    return re | im


def solve_zeta(S: CylinderSet, P: CylinderSet) -> Functional | None:
    """A functional zeta with {alpha in S minus R_ns : zeta(alpha) >= 0} = P, or None."""
    rs = S.rs
    base = _without_ns(S)
    if not P.issubset(base):
        bad = P - base
        key, z = next(iter(bad.components.items()))
        raise PreconditionError("P is not inside S minus its nonsingular roots",
                                {"element": rs.weight(key, z.nearest()).to_json()})
    cover = P | P.negate()
    if cover != base:
        key, z = next(iter((base - cover).components.items()))
        raise PreconditionError("P and -P do not cover S minus its nonsingular roots",
                                {"element": rs.weight(key, z.nearest()).to_json()})
    missing = P.minkowski(P).intersect(base) - P
    if not missing.is_empty():
        key, z = next(iter(missing.components.items()))
        raise PreconditionError("P is not closed under addition inside S",
                                {"element": rs.weight(key, z.nearest()).to_json()})
    ineqs = []
    for key, comp in base.components.items():
        pk = P.get(key)
        ineqs += _atom_constraints(key, pk, True)
        ineqs += _atom_constraints(key, comp - pk, False)
    try:
        x = fourier_motzkin(ineqs, rs.dim + 1)
    except Infeasible:
        return None
    zeta = Functional.from_vector(x, rs.m)
    if nonneg_part(base, zeta) != P:
        raise AssertionError("reconstruction mismatch; this indicates a bug")
    return zeta


def nonneg_part(S: CylinderSet, zeta: Functional) -> CylinderSet:
    tri = tri_decompose(S, zeta)
    return tri.plus | tri.zero


# ---------------------------------------------------------------------------
# finite root systems


def _as_coords(weights):
    out = set()
    for w in weights:
        if isinstance(w, Weight):
            out.add(tuple(Fraction(x) for x in w.coords))
        else:
            out.add(tuple(Fraction(x) for x in w))
    return out


def is_root_system(finite_set, m) -> bool:
    """Reflection closure and integral Cartan numbers for the nonzero elements."""
    roots = {c for c in _as_coords(finite_set) if any(c)}
    for a in roots:
        aa = coord_form(a, a, m)
        if aa == 0:
            return False
        for b in roots:
            cart = 2 * coord_form(b, a, m) / aa
            if cart.denominator != 1:
                return False
            if tuple(x - cart * y for x, y in zip(b, a)) not in roots:
                return False
    return True


_PRIMES = (101, 1009, 10007, 100003)


def find_base(finite_set, m) -> list:
    """Indecomposable positive roots for a generic functional, as coordinate tuples."""
    roots = sorted(c for c in _as_coords(finite_set) if any(c))
    if not is_root_system(roots, m):
        raise ValueError("input is not a finite root system")
    if not roots:
        return []
    dim = len(roots[0])
    for p in _PRIMES:
        f = [Fraction(1, p ** i) for i in range(dim)]
        vals = {c: sum(a * x for a, x in zip(f, c)) for c in roots}
        if all(v != 0 for v in vals.values()):
            break
    else:
        raise RuntimeError("no generic functional found")
    positive = [c for c in roots if vals[c] > 0]
    sums = {tuple(x + y for x, y in zip(a, b)) for a in positive for b in positive}
    base = sorted(c for c in positive if c not in sums)
    for c in roots:
        coeffs = solve([[b[i] for b in base] for i in range(dim)], list(c), len(base))
        if coeffs is None or any(x.denominator != 1 for x in coeffs):
            raise AssertionError("base does not span the roots integrally")
        if not (all(x >= 0 for x in coeffs) or all(x <= 0 for x in coeffs)):
            raise AssertionError("root is not a one-signed combination of the base")
    return base


def even_real_dots(S: CylinderSet):
    """Finite parts of real roots of S that occur with even parity."""
    rs = S.rs
    out = []
    for key, z in S.components.items():
        if not any(key) or coord_form(key, key, rs.m) == 0:
            continue
        if not (z & parity_zset(rs, key, "even")).is_empty():
            out.append(key)
    return out


def build_zeta1(T1: CylinderSet, T2: CylinderSet, rng: random.Random | None = None, tries=64) -> Functional:
    """Positive on a base of the even real part of T(1), zero on T(2) and delta,
    nonzero on the nonsingular finite roots of T(1)."""
    rs = T1.rs
    re1, ns1, _, _ = T1.parts()
    if re1.is_empty():
        raise PreconditionError("T(1)_re is empty")
    rng = rng or random.Random(0)
    dim = rs.dim
    base = find_base(even_real_dots(T1), rs.m)
    kernel_rows = [list(map(Fraction, key)) + [Fraction(0)] for key in T2.components if any(key)]
    kernel_rows.append([Fraction(0)] * dim + [Fraction(1)])
    ns_dots = list(ns1.components)
    rows = kernel_rows + [list(map(Fraction, b)) + [Fraction(0)] for b in base]
    free = nullspace(rows, dim + 1)
    for attempt in range(tries):
        targets = [Fraction(1)] * len(base) if attempt == 0 else [Fraction(rng.randint(1, 6)) for _ in base]
        rhs = [Fraction(0)] * len(kernel_rows) + targets
        x = solve(rows, rhs, dim + 1)
        if x is None:
            continue
        if attempt and free:
            for v in free:
                x = [a + Fraction(rng.randint(-3, 3), rng.randint(1, 4)) * b for a, b in zip(x, v)]
        zeta = Functional.from_vector(x, rs.m)
        if all(zeta.on_coords(k) != 0 for k in ns_dots):
            return zeta
    offender = next(iter(ns_dots), None)
    raise PreconditionError("no functional separates the nonsingular roots of T(1) from the kernel",
                            {"root": None if offender is None else rs.weight(offender).to_json()})


# ---------------------------------------------------------------------------
# three-stage pipeline


class PipelineError(ValueError):
    def __init__(self, stage, message, witness=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.witness = witness


def hybrid_parabolic(sa: ShadowAssignment, S: CylinderSet, direction: str) -> CylinderSet:
    """ln part of S, minus the injective part, plus the half of Z delta on the nilpotent side."""
    rs = sa.rs
    ln = sa.ln_set() & S
    inj = sa.in_set() & S
    zero = (0,) * rs.dim
    ray = ZSet.up_ray(0) if direction == "AllUp" else ZSet.down_ray(0)
    im = CylinderSet.imaginary(rs, S.get(zero) & ray)
    return ln | inj.negate() | im


def pipeline(sa: ShadowAssignment, rng: random.Random | None = None) -> dict:
    rs = sa.rs
    try:
        report = verify_main_i(sa)
    except PreconditionError as exc:
        raise PipelineError("precondition", str(exc), exc.witness) from None
    if not report["ok"]:
        bad = next(c for c in report["checks"] if not c["passed"])
        raise PipelineError("main-i", bad["name"], bad.get("witness"))
    ts = build_T(sa)
    direction = hybrid_direction(sa, ts.T2)
    if direction == "Mixed":
        raise PipelineError("precondition",
                            "hybrid real roots of T(2) mix up- and down-nilpotent cosets; a module with "
                            "shadow forces one direction for a symmetric closed hybrid subset")
    try:
        zeta1 = build_zeta1(ts.T1, ts.T2, rng)
    except PreconditionError as exc:
        raise PipelineError("zeta1", str(exc), exc.witness) from None
    stage1 = tri_decompose(ts.T, zeta1)
    expected = ts.T2 | CylinderSet.imaginary(rs)
    if stage1.zero != expected:
        diff = (stage1.zero - expected) | (expected - stage1.zero)
        key, z = next(iter(diff.components.items()))
        raise PipelineError("zeta1", "zero set of zeta1 on T differs from T(2) with Z delta",
                            {"element": rs.weight(key, z.nearest()).to_json()})
    S2 = stage1.zero
    P2 = hybrid_parabolic(sa, _without_ns(S2), direction)
    zeta2 = solve_zeta(S2, P2)
    if zeta2 is None:
        raise PipelineError("zeta2", "no functional realizes the hybrid parabolic subset")
    stage2 = tri_decompose(S2, zeta2)
    t_prime = stage2.zero
    finite = t_prime.is_finite()
    if not finite:
        raise PipelineError("finite", "the final zero set is infinite", t_prime.to_json())
    elements = t_prime.elements(max((z.boundary() for z in t_prime.components.values()), default=0) + 1)
    return {
        "ok": True,
        "direction": direction,
        "zeta1": zeta1.to_json(),
        "zeta2": zeta2.to_json(),
        "stages": [
            {"stage": 1, "functional": "zeta1", "k_plus": stage1.plus.to_json(), "k_zero": stage1.zero.to_json(),
             "k_minus": stage1.minus.to_json(), "zero_equals_T2_with_Zdelta": True},
            {"stage": 2, "functional": "zeta2", "P": P2.to_json(), "k_plus": stage2.plus.to_json(),
             "k_zero": stage2.zero.to_json(), "k_minus": stage2.minus.to_json()},
            {"stage": 3, "functional": "zeta3", "descriptor": "decomposition of the finite set T'",
             "T_prime": [w.to_json() for w in elements]},
        ],
        "T_prime_finite": finite,
        "T_prime_size": len(elements),
        "parity_conditional": True,
    }
