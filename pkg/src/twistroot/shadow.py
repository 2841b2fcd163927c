"""Coset classes of locally nilpotent / injective real roots and what they force.

A shadow assignment fixes, for every real delta-coset, which of its roots act
locally nilpotently ("ln"); the rest act injectively ("in").  From it we build
the symmetric closed subsets T(1), T(2), T and run the support-saturation
engine.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd, lcm

from ._exact import frac_str
from ._schema import SchemaError, child, expect_dict, expect_int, expect_list, require
from .cylsets import CylinderSet, ZSet, _split, lex_nonneg, parity_zset, root_string
from .rootspace import D, E, RootSystem, Weight, coord_form, root_system_from_json

TAGS = ("FullLN", "FullIN", "DownHybrid", "UpHybrid")
HYBRID = ("DownHybrid", "UpHybrid")


class InvalidAssignment(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class CosetClass:
    tag: str
    r: int | None = None
    t: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown class {self.tag!r}")
        if self.tag in HYBRID:
            if self.r is None or self.t is None:
                raise ValueError("hybrid classes need r and t")
            if self.t not in (-1, 0, 1):
                raise ValueError("t must be -1, 0 or 1")
        elif self.r is not None or self.t is not None:
            raise ValueError("full classes carry no offsets")

    def to_json(self):
        out = {"class": self.tag}
        if self.tag in HYBRID:
            out.update(r=self.r, t=self.t)
        return out


def _neg(c):
    return tuple(-x for x in c)


def class_ln_sets(rs: RootSystem, coords, cls: CosetClass):
    """ln parts of the cosets of coords and -coords forced by a class on coords.

    For full classes only the first entry is meaningful (the second is None).
    """
    string = root_string(rs, coords)
    other = root_string(rs, _neg(coords))
    _, k0 = rs.string_data_coords(coords)
    if cls.tag == "FullLN":
        return string, None
    if cls.tag == "FullIN":
        return ZSet.empty(), None
    a = k0 + cls.r
    if cls.tag == "UpHybrid":
        return string & ZSet.up_ray(a), other & ZSet.up_ray(-a + 1 - cls.t)
    return string & ZSet.down_ray(a), other & ZSet.down_ray(-a + cls.t - 1)


def describe_coset(rs, coords, ln, ln_neg):
    """Recover the class of coords from the ln parts of its coset and the opposite one."""
    string = root_string(rs, coords)
    _, k0 = rs.string_data_coords(coords)
    if ln == string:
        return CosetClass("FullLN")
    if ln.is_empty():
        return CosetClass("FullIN")
    inj = string - ln
    # offsets between consecutive string elements cut the same ray; try the extreme one first
    step = string.period
    if ln.is_bounded_below() and inj.is_bounded_above() and ln.min() > inj.max():
        tag, offsets = "UpHybrid", [ln.min() - k0 - j for j in range(step)]
    elif ln.is_bounded_above() and inj.is_bounded_below() and ln.max() < inj.min():
        tag, offsets = "DownHybrid", [ln.max() - k0 + j for j in range(step)]
    else:
        return None
    for r in offsets:
        for t in (0, 1, -1):
            cls = CosetClass(tag, r, t)
            if class_ln_sets(rs, coords, cls) == (ln, ln_neg):
                return cls
    return None


@dataclass
class Problem:
    rule: str
    message: str
    witness: dict | None = None

    def to_json(self):
        return {"rule": self.rule, "message": self.message, "witness": self.witness}


class ShadowAssignment:
    """ln parts of every real coset, with their coset classes."""

    def __init__(self, rs: RootSystem, ln: dict, validate=True):
        self.rs = rs
        self.ln = {tuple(c): z for c, z in ln.items()}
        self._classes = None
        if validate:
            problems = self.problems()
            if problems:
                raise InvalidAssignment(problems[0].message, problems[0].witness)

    @classmethod
    def from_classes(cls, rs, classes: dict, validate=True):
        ln = {}
        forced = {}
        for coords, c in classes.items():
            coords = tuple(coords)
            if coords not in rs.real_coords:
                raise InvalidAssignment(f"{coords} is not a real finite root")
            own, mirror = class_ln_sets(rs, coords, c)
            for key, val, src in ((coords, own, coords), (_neg(coords), mirror, coords)):
                if val is None:
                    continue
                if key in ln and ln[key] != val:
                    raise InvalidAssignment(
                        f"classes on {src} and {forced.get(key, key)} disagree on coset {key}",
                        {"coset": list(key)},
                    )
                ln[key] = val
                forced.setdefault(key, src)
        missing = [c for c in rs.real_coords if c not in ln]
        if missing:
            raise InvalidAssignment(f"real coset {missing[0]} is not assigned", {"coset": list(missing[0])})
        return cls(rs, ln, validate)

    @classmethod
    def uniform(cls, rs, tag="FullLN"):
        return cls.from_classes(rs, {c: CosetClass(tag) for c in rs.real_coords})

    # derived data ---------------------------------------------------------

    @property
    def classes(self):
        if self._classes is None:
            self._classes = {
                c: describe_coset(self.rs, c, self.ln[c], self.ln[_neg(c)]) for c in self.rs.real_coords
            }
        return self._classes

    def tag(self, coords):
        cls = self.classes.get(tuple(coords))
        return None if cls is None else cls.tag

    def is_full_ln(self, coords):
        return self.ln[coords] == root_string(self.rs, coords)

    def ln_set(self):
        return CylinderSet(self.rs, self.ln, check=False)

    def in_set(self):
        return CylinderSet(self.rs, {c: root_string(self.rs, c) - z for c, z in self.ln.items()}, check=False)

    # validation -----------------------------------------------------------

    def problems(self):
        rs = self.rs
        out = []
        for c in rs.real_coords:
            if c not in self.ln:
                out.append(Problem("structure", f"real coset {c} is not assigned", {"coset": list(c)}))
                return out
            if not self.ln[c].issubset(root_string(rs, c)):
                out.append(Problem("structure", f"ln part of {c} contains non-roots", {"coset": list(c)}))
                return out
        for c in rs.real_coords:
            cls = self.classes[c]
            if cls is None:
                out.append(Problem("structure", f"coset {c} fits none of the four classes",
                                   {"coset": list(c), "ln": self.ln[c].to_json()}))
                continue
            other = self.classes[_neg(c)]
            if cls.tag in HYBRID and (other is None or other.tag != cls.tag):
                out.append(Problem("structure", f"hybrid coset {c} has an inconsistent opposite coset",
                                   {"coset": list(c)}))
        if out:
            return out
        out += self._doubling_problems()
        out += self._closure_problems()
        return out

    def _doubling_problems(self):
        rs = self.rs
        out = []
        real = set(rs.real_coords)
        for c in rs.real_coords:
            if rs.shape(c) not in (E, D):
                continue
            dbl = tuple(2 * x for x in c)
            if dbl not in real:
                continue
            odd = parity_zset(rs, c, "odd") & root_string(rs, dbl).scale_preimage(2)
            lhs = self.ln[c] & odd
            rhs = self.ln[dbl].scale_preimage(2) & odd
            if lhs != rhs:
                k = (lhs - rhs).nearest() if not (lhs - rhs).is_empty() else (rhs - lhs).nearest()
                out.append(Problem(
                    "doubling",
                    f"{c}+{k}delta and its double disagree on local nilpotence",
                    {"root": rs.weight(c, k).to_json(), "double": rs.weight(dbl, 2 * k).to_json()},
                ))
        return out

    def _closure_problems(self):
        rs = self.rs
        out = []
        real = set(rs.real_coords)
        for name, part in (("ln", self.ln_set()), ("in", self.in_set())):
            comps = part.components
            for a, za in comps.items():
                for b, zb in comps.items():
                    c = tuple(x + y for x, y in zip(a, b))
                    if c not in real:
                        continue
                    bad = (za + zb) & root_string(rs, c)
                    bad = bad - part.get(c)
                    if bad.is_empty():
                        continue
                    k = bad.nearest()
                    ka = _split(za, zb, k)
                    out.append(Problem(
                        "closure",
                        f"sum of two {name} real roots is a real root outside {name}",
                        {"alpha": rs.weight(a, ka).to_json(), "beta": rs.weight(b, k - ka).to_json(),
                         "sum": rs.weight(c, k).to_json()},
                    ))
                    return out
        return out

    # serialization --------------------------------------------------------

    def to_json(self):
        cosets = []
        for c in self.rs.real_coords:
            entry = {"root": self.rs.weight(c).to_json()}
            entry.update(self.classes[c].to_json())
            cosets.append(entry)
        out = self.rs.to_json()
        out["cosets"] = cosets
        return out

    @classmethod
    def from_json(cls, rs, obj, path=""):
        expect_dict(obj, path)
        cp = child(path, "cosets")
        classes = {}
        for i, entry in enumerate(expect_list(require(obj, "cosets", path), cp)):
            ep = child(cp, i)
            expect_dict(entry, ep)
            w = Weight.from_json(require(entry, "root", ep), rs.m, rs.n, child(ep, "root"))
            if not w.is_integral() or w.delta != 0:
                raise SchemaError(child(ep, "root"), "coset roots are integral finite weights")
            key = tuple(int(x) for x in w.coords)
            if key not in rs.real_coords:
                raise SchemaError(child(ep, "root"), "not a real finite root of this family")
            tag = require(entry, "class", ep)
            try:
                if tag in HYBRID:
                    c = CosetClass(tag, expect_int(require(entry, "r", ep), child(ep, "r")),
                                   expect_int(require(entry, "t", ep), child(ep, "t")))
                else:
                    c = CosetClass(tag)
            except ValueError as exc:
                raise SchemaError(ep, str(exc)) from None
            classes[key] = c
        return cls.from_classes(rs, classes)


# ---------------------------------------------------------------------------
# T(1), T(2), T


def _cosets(rs, coords_list):
    return CylinderSet(rs, {c: root_string(rs, c) for c in coords_list}, check=False)


def ns_cover(rs, dots):
    """Nonsingular finite roots c with kappa*c = a + b for a, b in dots."""
    dots = list(dots)
    sums = {tuple(x + y for x, y in zip(a, b)) for a in dots for b in dots}
    k = rs.kappa
    return [c for c in rs.ns_coords if tuple(k * x for x in c) in sums]


@dataclass
class TSets:
    T1: CylinderSet
    T2: CylinderSet
    T: CylinderSet
    t1_re: list
    t2_re: list
    t1_ns: list
    t2_ns: list

    def to_json(self):
        return {"T1": self.T1.to_json(), "T2": self.T2.to_json(), "T": self.T.to_json()}


def build_T(sa: ShadowAssignment) -> TSets:
    rs = sa.rs
    t1_re = [c for c in rs.real_coords if sa.is_full_ln(c) and sa.is_full_ln(_neg(c))]
    t2_re = [c for c in rs.real_coords if sa.tag(c) in HYBRID]
    zero = (0,) * rs.dim
    built = []
    for re_dots in (t1_re, t2_re):
        ns = ns_cover(rs, re_dots)
        cross = _cosets(rs, re_dots + ns)
        im = cross.minkowski(cross).get(zero)
        built.append((cross | CylinderSet.imaginary(rs, im), ns))
    (T1, t1_ns), (T2, t2_ns) = built
    T = CylinderSet.imaginary(rs) | _cosets(rs, t1_re + t2_re + ns_cover(rs, t1_re + t2_re))
    return TSets(T1, T2, T, t1_re, t2_re, t1_ns, t2_ns)


def _symmetry_witness(S: CylinderSet):
    neg = S.negate()
    diff = S - neg
    if diff.is_empty():
        return None
    key, z = next(iter(diff.components.items()))
    k = z.nearest()
    return {"element": S.rs.weight(key, k).to_json(), "negative_missing": S.rs.weight(key, k).__neg__().to_json()}


def verify_main_i(sa: ShadowAssignment, tsets: TSets | None = None):
    """Check that T, T(1), T(2) are symmetric and closed, with the imaginary and parity claims."""
    ts = tsets or build_T(sa)
    if not ts.t1_re or not ts.t2_re:
        raise PreconditionError("needs both T(1)_re and T(2)_re nonempty",
                                {"T1_re": len(ts.t1_re), "T2_re": len(ts.t2_re)})
    rs = sa.rs
    checks = []
    bound = 0
    for name, S in (("T", ts.T), ("T1", ts.T1), ("T2", ts.T2)):
        wit = _symmetry_witness(S)
        checks.append({"name": f"{name} symmetric", "passed": wit is None, "witness": wit})
        rep = S.closure_report()
        bound = max(bound, rep.bound)
        checks.append({"name": f"{name} closed", "passed": rep.closed, "window_bound": rep.bound,
                       "witness": rep.to_json(rs).get("witness")})
    zero = (0,) * rs.dim
    lines = (ZSet.full(), ZSet.progression(0, 2))
    for name, S in (("T1", ts.T1), ("T2", ts.T2)):
        im = S.get(zero)
        checks.append({"name": f"{name} imaginary part is Z delta or 2Z delta", "passed": im in lines,
                       "witness": None if im in lines else im.to_json()})
    parity_ok, wit = True, None
    if ts.T2.get(zero) == ZSet.progression(0, 2):
        for key, z in ts.T2.components.items():
            bad = z & parity_zset(rs, key, "odd")
            if not bad.is_empty():
                parity_ok = False
                wit = {"odd_root": rs.weight(key, bad.nearest()).to_json()}
                break
    checks.append({"name": "T2 even when T2_im = 2Z delta", "passed": parity_ok, "witness": wit,
                   "parity_conditional": True})
    return {"ok": all(c["passed"] for c in checks), "checks": checks, "window_bound": bound}


def hybrid_direction(sa: ShadowAssignment, S: CylinderSet):
    """AllUp, AllDown or Mixed for the hybrid real roots of a symmetric closed subset."""
    rs = sa.rs
    wit = _symmetry_witness(S)
    if wit:
        raise PreconditionError("subset is not symmetric", wit)
    rep = S.closure_report()
    if not rep.closed:
        raise PreconditionError("subset is not closed", rep.to_json(rs).get("witness"))
    re, _, _, cross = S.parts()
    if re.is_empty():
        raise PreconditionError("subset has no real roots")
    for key, z in cross.components.items():
        even = parity_zset(rs, key, "even")
        if not even.issubset(z):
            k = (even - z).nearest()
            raise PreconditionError("(S + Z delta) cap R_0 is not contained in S",
                                    {"missing": rs.weight(key, k).to_json()})
    tags = {sa.tag(c) for c in re.components if sa.tag(c) in HYBRID}
    if not tags:
        raise PreconditionError("subset has no hybrid real roots")
    if tags == {"UpHybrid"}:
        return "AllUp"
    if tags == {"DownHybrid"}:
        return "AllDown"
    return "Mixed"


# ---------------------------------------------------------------------------
# random assignments


def _side(rs, coords):
    return "eps" if any(coords[: rs.m]) else "del"


def _rand_q(rng, lo=-4, hi=4, den=2):
    return Fraction(rng.randint(lo, hi), den)


def functional_assignment(rs, side_levels):
    """ln = lexicographically nonnegative values of per-side functional levels.

    side_levels maps "eps"/"del" to a list of (coefficient vector, delta value)
    or to the string "in" for an all-injective side.
    """
    ln = {}
    for c in rs.real_coords:
        levels = side_levels[_side(rs, c)]
        string = root_string(rs, c)
        if levels == "in":
            ln[c] = ZSet.empty()
            continue
        lv = [(sum(a * x for a, x in zip(vec, c)), dval) for vec, dval in levels]
        ln[c] = lex_nonneg(lv, string)
    return ln


def _draw_levels(rs, rng, mode):
    dim = rs.dim
    if mode == "ln":
        return []
    if mode == "in":
        return "in"
    vec1 = [_rand_q(rng) if rng.random() < 0.7 else Fraction(0) for _ in range(dim)]
    vec2 = [Fraction(rng.randint(-5, 5)) for _ in range(dim)]
    vec3 = [Fraction(rng.randint(1, 50), 7) for _ in range(dim)]
    if mode == "up":
        return [(vec1, Fraction(1)), (vec2, Fraction(rng.randint(-1, 1))), (vec3, Fraction(0))]
    if mode == "down":
        return [(vec1, Fraction(-1)), (vec2, Fraction(rng.randint(-1, 1))), (vec3, Fraction(0))]
    if mode == "split":
        return [(vec1, Fraction(0)), (vec2, Fraction(rng.choice((-1, 1)))), (vec3, Fraction(0))]
    raise ValueError(mode)


def random_assignment(rs: RootSystem, rng: random.Random, need_both=False, perturb=2, style="structured",
                      max_tries=200):
    """A random valid assignment.

    The structured style gives each irreducible side (eps or del roots) a mode
    and derives ln from a lexicographic functional, then nudges hybrid offsets.
    The independent style draws a class per coset pair, repairs doubling and
    rejects anything invalid; it returns None when every try fails.
    """
    if style == "independent":
        return _independent_assignment(rs, rng, max_tries)
    sides = [s for s, size in (("eps", rs.m), ("del", rs.n)) if size]
    for _ in range(max_tries):
        if need_both:
            if len(sides) < 2:
                raise PreconditionError("both T(1) and T(2) need two nonempty sides")
            first = rng.choice(sides)
            modes = {first: "ln", ("del" if first == "eps" else "eps"): rng.choice(["up", "down", "split"])}
        else:
            modes = {s: rng.choice(["ln", "in", "up", "down", "split"]) for s in sides}
        levels = {s: _draw_levels(rs, rng, modes.get(s, "ln")) for s in ("eps", "del")}
        sa = ShadowAssignment(rs, functional_assignment(rs, levels), validate=False)
        if sa.problems():
            continue
        for _ in range(perturb):
            sa = _nudge(sa, rng)
        if need_both:
            ts = build_T(sa)
            if not ts.t1_re or not ts.t2_re:
                continue
        return sa
    raise RuntimeError("could not draw a valid assignment")


def _nudge(sa, rng):
    hybrids = [c for c in sa.rs.real_coords if sa.tag(c) in HYBRID]
    if not hybrids:
        return sa
    c = rng.choice(hybrids)
    cls = sa.classes[c]
    new = CosetClass(cls.tag, cls.r + rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1)))
    ln = dict(sa.ln)
    own, mirror = class_ln_sets(sa.rs, c, new)
    ln[c], ln[_neg(c)] = own, mirror
    cand = ShadowAssignment(sa.rs, ln, validate=False)
    return cand if not cand.problems() else sa


def _independent_assignment(rs, rng, max_tries):
    pairs = sorted({max(c, _neg(c)) for c in rs.real_coords})
    for _ in range(max_tries):
        ln = {}
        for c in pairs:
            tag = rng.choice(TAGS)
            if tag in HYBRID:
                own, mirror = class_ln_sets(rs, c, CosetClass(tag, rng.randint(-2, 2), rng.choice((-1, 0, 1))))
                ln[c], ln[_neg(c)] = own, mirror
            else:
                for side in (c, _neg(c)):
                    ln[side] = class_ln_sets(rs, side, CosetClass(rng.choice(("FullLN", "FullIN"))))[0]
        real = set(rs.real_coords)
        for c in rs.real_coords:
            dbl = tuple(2 * x for x in c)
            if rs.shape(c) in (E, D) and dbl in real:
                odd = parity_zset(rs, c, "odd") & root_string(rs, dbl).scale_preimage(2)
                forced = _stretch(ln[c] & odd, 2)
                ln[dbl] = (ln[dbl] - _stretch(odd, 2)) | forced
        sa = ShadowAssignment(rs, ln, validate=False)
        if not sa.problems():
            return sa
    return None


def _stretch(z, c):
    """{c*k : k in z}."""
    acc = ZSet.empty()
    for kind, a, p in z.atoms():
        if kind == "point":
            acc = acc | ZSet.finite([c * a])
        elif kind == "prog":
            acc = acc | ZSet.progression(c * a, c * p)
        elif kind == "up":
            acc = acc | ZSet.up_ray(c * a, c * p)
        else:
            acc = acc | ZSet.down_ray(c * a, c * p)
    return acc


# ---------------------------------------------------------------------------
# support saturation


@dataclass(frozen=True)
class Family:
    """base + s*step for s = 1, 2, 3, ..."""

    base: Weight
    step: Weight

    def __post_init__(self):
        if self.step.is_zero():
            raise ValueError("family step must be nonzero")

    def to_json(self):
        return {"base": self.base.to_json(), "step": self.step.to_json()}


def _primitive(vec):
    """Positive rational rescaling of vec to a primitive integer vector."""
    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass
class SuppState:
    concrete: dict = field(default_factory=dict)  # (finite coords, delta mod 1) -> ZSet of integer shifts
    families: list = field(default_factory=list)

    @classmethod
    def from_seeds(cls, seeds=(), families=()):
        st = cls()
        for w in seeds:
            st.add_weight(w)
        st.families = list(families)
        return st

    def add_weight(self, w: Weight):
        frac = w.delta - (w.delta.numerator // w.delta.denominator)
        key = (w.coords, frac)
        shift = int(w.delta - frac)
        self.concrete[key] = self.concrete.get(key, ZSet.empty()) | ZSet.finite([shift])

    def copy(self):
        return SuppState(dict(self.concrete), list(self.families))

    def contains(self, w: Weight):
        frac = w.delta - (w.delta.numerator // w.delta.denominator)
        return int(w.delta - frac) in self.concrete.get((w.coords, frac), ZSet.empty())

    def to_json(self, m):
        out = []
        for (coords, frac), z in sorted(self.concrete.items()):
            out.append({"finite": Weight.from_finite(coords, m).to_json(), "delta_offset": frac_str(frac),
                        "delta_shifts": z.to_json()})
        return {"concrete": out, "families": [f.to_json() for f in self.families]}


@dataclass
class SaturationResult:
    status: str  # Consistent | Contradiction | BudgetExhausted
    state: SuppState
    applications: int
    witness: list | None = None

    def to_json(self, m):
        return {"status": self.status, "applications": self.applications, "state": self.state.to_json(m),
                "witness": self.witness}


def saturate(state: SuppState, sa: ShadowAssignment, budget: int) -> SaturationResult:
    """Close the support under the ln-reflection rule and the family moves.

    Concrete weights use: mu in supp, +-alpha ln and 2(mu,alpha)/(alpha,alpha) > 0
    give mu - alpha in supp.  Families additionally use that an injective
    -gamma lets any member drop by gamma.  A family whose direction is a
    positive multiple of a fully ln real root is a contradiction.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    rs = sa.rs
    m = rs.m
    st = state.copy()
    real = [tuple(Fraction(x) for x in c) for c in rs.real_coords]
    both_ln, inj_shift, full = {}, {}, {}
    for c in rs.real_coords:
        neg = _neg(c)
        fc = tuple(Fraction(x) for x in c)
        both_ln[fc] = sa.ln[c] & -sa.ln[neg]
        inj_shift[fc] = -(root_string(rs, neg) - sa.ln[neg])
        full[fc] = sa.is_full_ln(c)
    full_dirs = {_primitive(c): c for c in real if full[c]}
    used = 0

    def cartan(mu, c):
        return 2 * coord_form(mu, c, m) / coord_form(c, c, m)

    # families
    seen = {}
    queue = deque()
    for fam in st.families:
        d = fam.step.coords
        if not any(d):
            continue
        key = _primitive(d)
        if key in seen:
            continue
        seen[key] = (fam, None, None)
        if key in full_dirs:
            return SaturationResult("Contradiction", st, used, _chain(seen, key, full_dirs[key], m))
        queue.append(key)
    while queue:
        key = queue.popleft()
        fam = seen[key][0]
        v = fam.step.coords
        for c in real:
            q = coord_form(v, c, m) / coord_form(c, c, m)
            if q <= 0:
                continue
            if not both_ln[c].is_empty():
                rule, j = "ln-reflect", both_ln[c].nearest()
                c0 = cartan(fam.base.coords, c)
                s0 = 0 if c0 > -2 else int(ceil((-2 - c0) / (2 * q))) + 1
                while cartan(fam.base.coords, c) + 2 * q * s0 <= -2:
                    s0 += 1
            elif not inj_shift[c].is_empty():
                rule, j, s0 = "in-shift", inj_shift[c].nearest(), 0
            else:
                continue
            used += 1
            if used > budget:
                return SaturationResult("BudgetExhausted", st, used - 1, None)
            N = q.denominator
            gamma = Weight.from_finite(c, m, j)
            base = fam.base + fam.step.scale(s0)
            step = fam.step.scale(N) - gamma.scale(q * N)
            if not any(step.coords):
                continue
            nkey = _primitive(step.coords)
            if nkey in seen:
                continue
            new = Family(base, step)
            st.families.append(new)
            move = {"rule": rule, "root": gamma.to_json(), "multiplier": frac_str(q), "subsample": N, "shift": s0}
            seen[nkey] = (new, key, move)
            if nkey in full_dirs:
                return SaturationResult("Contradiction", st, used, _chain(seen, nkey, full_dirs[nkey], m))
            queue.append(nkey)

    # concrete weights
    pending = deque(sorted(st.concrete))
    queued = set(pending)
    while pending:
        key = pending.popleft()
        queued.discard(key)
        mu, frac = key
        z = st.concrete[key]
        for c in real:
            if both_ln[c].is_empty() or cartan(mu, c) <= 0:
                continue
            used += 1
            if used > budget:
                return SaturationResult("BudgetExhausted", st, used - 1, None)
            target = (tuple(a - b for a, b in zip(mu, c)), frac)
            new = z + (-both_ln[c])
            old = st.concrete.get(target, ZSet.empty())
            merged = old | new
            if merged != old:
                st.concrete[target] = merged
                if target not in queued:
                    pending.append(target)
                    queued.add(target)
    return SaturationResult("Consistent", st, used, None)


def _chain(seen, key, root, m):
    steps = []
    while key is not None:
        fam, parent, move = seen[key]
        steps.append({"family": fam.to_json(), "via": move})
        key = parent
    steps.reverse()
    steps.append({"contradiction": "family direction is a positive multiple of a fully ln real root",
                  "root": Weight.from_finite(root, m).to_json()})
    return steps


def scenario_from_json(obj, path=""):
    """(root system, assignment, state, budget) from a saturation scenario object."""
    expect_dict(obj, path)
    rs = root_system_from_json(obj, path)
    if "assignment" in obj:
        sa = ShadowAssignment.from_json(rs, obj["assignment"], child(path, "assignment"))
    else:
        sa = ShadowAssignment.uniform(rs, obj.get("preset", "FullLN"))
    seeds = [Weight.from_json(w, rs.m, rs.n, child(child(path, "seeds"), i))
             for i, w in enumerate(expect_list(obj.get("seeds", []), child(path, "seeds")))]
    fams = []
    fp = child(path, "families")
    for i, f in enumerate(expect_list(obj.get("families", []), fp)):
        ip = child(fp, i)
        expect_dict(f, ip)
        base = Weight.from_json(require(f, "base", ip), rs.m, rs.n, child(ip, "base"))
        step = Weight.from_json(require(f, "step", ip), rs.m, rs.n, child(ip, "step"))
        if step.is_zero():
            raise SchemaError(child(ip, "step"), "family step must be nonzero")
        fams.append(Family(base, step))
    budget = expect_int(obj.get("budget", 10000), child(path, "budget"))
    return rs, sa, SuppState.from_seeds(seeds, fams), budget
