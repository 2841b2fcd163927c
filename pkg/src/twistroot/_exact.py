"""Exact scalars and small dense linear algebra shared by the other modules."""

from fractions import Fraction
import math


def to_fraction(value):
    """Parse an int, Fraction or a ``"p/q"`` / ``"p"`` string into a Fraction."""
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        return Fraction(text)
    raise ValueError(f"cannot read {value!r} as an exact rational")


def frac_str(value):
    return str(Fraction(value))


class QI:
    """Gaussian rational a + b*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def lift(x):
        if isinstance(x, QI):
            return x
        return QI(x, 0)

    def __add__(self, other):
        o = QI.lift(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        o = QI.lift(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QI.lift(other) - self

    def __mul__(self, other):
        o = QI.lift(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.lift(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * QI(o.re, -o.im)
        return QI(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return QI.lift(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QI)):
            o = QI.lift(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def simplify(self):
        """Return a Fraction when the imaginary part vanishes."""
        return self.re if self.im == 0 else self


def scalar_str(x):
    if isinstance(x, QI):
        if x.im == 0:
            return frac_str(x.re)
        return [frac_str(x.re), frac_str(x.im)]
    return frac_str(x)


def parse_scalar(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("a Gaussian rational is a pair [re, im]")
        return QI(to_fraction(value[0]), to_fraction(value[1])).simplify()
    return to_fraction(value)


def rref(rows, ncols):
    """Row-reduce a list of rows in place; return the pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c] if not isinstance(rows[r][c], int) else Fraction(1, rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def nullspace(matrix, ncols):
    """Basis of {x : matrix x = 0} as a list of column vectors."""
    rows = [list(row) for row in matrix]
    pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -rows[i][f]
        basis.append(vec)
    return basis


def rank(matrix, ncols):
    rows = [list(row) for row in matrix]
    return len(rref(rows, ncols))


def solve(matrix, rhs, ncols):
    """One solution of matrix x = rhs (free variables set to zero), or None."""
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots = rref(rows, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = rows[i][ncols]
    return x


def simplest_between(lo, lo_strict, hi, hi_strict):
    """Simplest rational in an interval whose bounds may be None (unbounded).

    Preference: 0, then the integer of least magnitude, then the fraction with
    the smallest denominator.
    """

    def inside(x):
        if lo is not None and (x < lo or (lo_strict and x == lo)):
            return False
        if hi is not None and (x > hi or (hi_strict and x == hi)):
            return False
        return True

    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_strict or hi_strict)):
            raise ValueError("empty interval")
    if inside(Fraction(0)):
        return Fraction(0)
    if lo is not None and lo >= 0:
        cand = Fraction(math.floor(lo)) + (1 if (lo_strict or lo.denominator != 1) else 0)
    else:
        cand = Fraction(math.ceil(hi)) - (1 if (hi_strict or hi.denominator != 1) else 0)
    if inside(cand):
        return cand
    den = 2
    while True:
        num = math.floor(lo * den)
        for k in (num, num + 1, num + 2):
            if inside(Fraction(k, den)):
                return Fraction(k, den)
        den += 1
