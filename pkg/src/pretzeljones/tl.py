"""Temperley-Lieb algebra over crossingless matchings.

A Matching pairs up 2n boundary points of a square: 0..n-1 across the top,
n..2n-1 across the bottom, both left to right.  Composition stacks the first
square above the second.  Loop closures contribute the scalar -q - q^(-1),
so coefficients live in qring.

The projector table W(n) holds [n]! times the projector, which keeps every
coefficient an integer Laurent polynomial; the recursion asserts the exact
divisions that make that true.  Dividing by [n]! only when a caller asks for
the projector itself keeps the hot paths fraction-free.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from . import qring
from .qring import ONE, HalfLaurent, RatFunc, qfact, qint, qbinom

DELTA = -qint(2)  # loop value


@lru_cache(maxsize=None)
def delta_power(k: int) -> HalfLaurent:
    return ONE if k == 0 else delta_power(k - 1) * DELTA


class Matching:
    """Fixed-point-free planar involution on the 2n boundary points."""

    __slots__ = ("n", "mate", "_hash")

    def __init__(self, mate: Tuple[int, ...]):
        if len(mate) % 2:
            raise ValueError("odd number of boundary points")
        self.n = len(mate) // 2
        self.mate = tuple(mate)
        for i, j in enumerate(self.mate):
            if j == i or self.mate[j] != i:
                raise ValueError("pairing is not a fixed-point-free involution")
        if not _noncrossing(self.mate):
            raise ValueError("pairing is not planar")
        self._hash = hash(self.mate)

    def __eq__(self, other):
        return isinstance(other, Matching) and self.mate == other.mate

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.mate < other.mate

    def __repr__(self):
        return f"Matching{self.to_text()!r}"

    def to_text(self) -> str:
        """1-indexed pair list, e.g. '(1 4)(2 3)'."""
        pairs = sorted((i + 1, j + 1) for i, j in enumerate(self.mate) if i < j)
        return "".join(f"({a} {b})" for a, b in pairs)

    @staticmethod
    def from_text(s: str) -> "Matching":
        pairs = [tuple(map(int, p.split())) for p in s.strip("()").split(")(") if p]
        size = 2 * len(pairs)
        mate = [-1] * size
        for a, b in pairs:
            mate[a - 1], mate[b - 1] = b - 1, a - 1
        return Matching(tuple(mate))

    @staticmethod
    def identity(n: int) -> "Matching":
        return Matching(tuple(list(range(n, 2 * n)) + list(range(n))))

    @staticmethod
    def cupcap(n: int, i: int) -> "Matching":
        """The generator U_i in TL_n, 1 <= i <= n-1."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"U_{i} does not exist in TL_{n}")
        mate = list(range(n, 2 * n)) + list(range(n))
        mate[i - 1], mate[i] = i, i - 1
        mate[n + i - 1], mate[n + i] = n + i, n + i - 1
        return Matching(tuple(mate))

    def through_count(self) -> int:
        """Number of strands joining top to bottom."""
        return sum(1 for i in range(self.n) if self.mate[i] >= self.n)

    def hmirror(self) -> "Matching":
        """Reflection across the horizontal axis (swap top and bottom)."""
        n = self.n
        f = lambda p: p + n if p < n else p - n
        return Matching(tuple(f(self.mate[f(p)]) for p in range(2 * n)))

    def vmirror(self) -> "Matching":
        """Reflection across the vertical axis."""
        n = self.n
        g = lambda p: n - 1 - p if p < n else 3 * n - 1 - p
        return Matching(tuple(g(self.mate[g(p)]) for p in range(2 * n)))

    def tensor_id(self, extra: int = 1) -> "Matching":
        """Append `extra` through strands on the right."""
        n, m = self.n, self.n + extra
        def shift(p):
            return p if p < n else p + extra
        mate = [0] * (2 * m)
        for p in range(2 * n):
            mate[shift(p)] = shift(self.mate[p])
        for j in range(extra):
            mate[n + j] = m + n + j
            mate[m + n + j] = n + j
        return Matching(tuple(mate))


def _disk_position(n: int, p: int) -> int:
    # cyclic boundary order: across the top, then back along the bottom
    return p if p < n else 3 * n - 1 - p


def _noncrossing(mate: Tuple[int, ...]) -> bool:
    n = len(mate) // 2
    pos = [_disk_position(n, p) for p in range(2 * n)]
    stack: List[int] = []
    where = [0] * (2 * n)
    for p in range(2 * n):
        where[pos[p]] = p
    for s in range(2 * n):
        p = where[s]
        if stack and stack[-1] == p:
            stack.pop()
        else:
            stack.append(mate[p])
    return not stack


@lru_cache(maxsize=None)
def enumerate_basis(n: int) -> Tuple[Matching, ...]:
    """All crossingless matchings of TL_n, sorted by their pairing tuples."""
    out: List[Matching] = []
    mate = [-1] * (2 * n)
    # point index at each disk position (inverse of _disk_position)
    pt_at = [s if s < n else n + (2 * n - 1 - s) for s in range(2 * n)]

    def rec(s: int):
        if s == 2 * n:
            out.append(Matching(tuple(mate)))
            return
        a = pt_at[s]
        if mate[a] != -1:
            rec(s + 1)
            return
        for t in range(s + 1, 2 * n, 2):
            b = pt_at[t]
            if mate[b] != -1:
                continue
            # anything already paired strictly inside must stay inside
            if any(mate[pt_at[u]] != -1
                   and not (s < _disk_position(n, mate[pt_at[u]]) < t)
                   for u in range(s + 1, t)):
                continue
            mate[a], mate[b] = b, a
            rec(s + 1)
            mate[a], mate[b] = -1, -1

    if n == 0:
        return (Matching(()),)
    rec(0)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def compose(a: Matching, b: Matching) -> Tuple[Matching, int]:
    """Stack a above b; returns the resulting matching and the loop count."""
    if a.n != b.n:
        raise ValueError(f"composing TL_{a.n} with TL_{b.n}")
    n = a.n
    am, bm = a.mate, b.mate
    # merged points 0..4n-1: a's 2n, then b's 2n; a bottom n+i glues to b top i
    seen = [False] * (4 * n)
    mate = [-1] * (2 * n)

    def other_end(pt: int) -> int:
        return am[pt] if pt < 2 * n else 2 * n + bm[pt - 2 * n]

    def glue(pt: int) -> Optional[int]:
        if n <= pt < 2 * n:
            return pt + n
        if 2 * n <= pt < 3 * n:
            return pt - n
        return None

    for s in list(range(n)) + list(range(3 * n, 4 * n)):
        if seen[s]:
            continue
        seen[s] = True
        cur = other_end(s)
        seen[cur] = True
        while (g := glue(cur)) is not None:
            seen[g] = True
            cur = other_end(g)
            seen[cur] = True
        o1 = s if s < n else n + (s - 3 * n)
        o2 = cur if cur < n else n + (cur - 3 * n)
        mate[o1], mate[o2] = o2, o1
    loops = 0
    for p in range(n, 3 * n):
        if seen[p]:
            continue
        loops += 1
        cur = p
        while True:
            seen[cur] = True
            nxt = other_end(cur)
            seen[nxt] = True
            cur = glue(nxt)
            if cur == p:
                break
    return Matching(tuple(mate)), loops


class TLElement:
    """Linear combination of matchings with qring coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Dict[Matching, object]] = None):
        self.n = n
        self.terms: Dict[Matching, object] = {}
        if terms:
            for m, c in terms.items():
                if m.n != n:
                    raise ValueError("matching size does not match element size")
                if c:
                    self.terms[m] = c

    @staticmethod
    def basis(m: Matching) -> "TLElement":
        return TLElement(m.n, {m: ONE})

    @staticmethod
    def identity(n: int) -> "TLElement":
        return TLElement.basis(Matching.identity(n))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TLElement) or self.n != other.n:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = 0
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    __hash__ = None

    def __add__(self, other: "TLElement") -> "TLElement":
        if self.n != other.n:
            raise ValueError("mixed strand counts")
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        r = TLElement(self.n)
        r.terms = out
        return r

    def __neg__(self):
        r = TLElement(self.n)
        r.terms = {m: -c for m, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TLElement":
        r = TLElement(self.n)
        if c:
            r.terms = {m: v * c for m, v in self.terms.items()}
        return r

    def tensor_id(self, extra: int = 1) -> "TLElement":
        r = TLElement(self.n + extra)
        r.terms = {m.tensor_id(extra): c for m, c in self.terms.items()}
        return r

    def __mul__(self, other):
        if isinstance(other, TLElement):
            return tl_mul(self, other)
        return self.scale(other)

    __rmul__ = scale


def _all_int_halflaurent(terms: Iterable[object]) -> bool:
    for c in terms:
        if not isinstance(c, HalfLaurent):
            return False
        for _, v in c._c.items():
            if not isinstance(v, int):
                return False
    return True


def tl_mul(x: TLElement, y: TLElement) -> TLElement:
    if x.n != y.n:
        raise ValueError("mixed strand counts")
    if len(x.terms) * len(y.terms) >= 256 and \
            _all_int_halflaurent(x.terms.values()) and _all_int_halflaurent(y.terms.values()):
        return _tl_mul_packed(x, y)
    out = TLElement(x.n)
    acc = out.terms
    for ma, ca in x.terms.items():
        for mb, cb in y.terms.items():
            r, loops = compose(ma, mb)
            c = ca * cb
            if loops:
                c = c * delta_power(loops)
            s = acc.get(r, 0) + c
            if s:
                acc[r] = s
            elif r in acc:
                del acc[r]
    return out


def _tl_mul_packed(x: TLElement, y: TLElement) -> TLElement:
    """Packed-integer accumulation: every coefficient is evaluated at 2^64
    on a shared exponent frame, so a term-by-term product plus add is a
    big-int multiply-accumulate.  A sound L1-norm bound guards digit overflow.
    """
    n = x.n
    import math

    def frame(cs):
        emin = min(min(c._c) for c in cs)
        g, l1sum = 0, 0
        for c in cs:
            for e, v in c._c.items():
                g = math.gcd(g, e - emin)
                l1sum += abs(v)
        return emin, g, l1sum

    xs = list(x.terms.items())
    ys = list(y.terms.items())
    ex, gx, l1x = frame([c for _, c in xs])
    ey, gy, l1y = frame([c for _, c in ys])
    ed = -2 * n  # frame low enough for any delta_power(loops), loops <= n
    g = math.gcd(math.gcd(gx, gy), 2) or 1
    if l1x * l1y * (2 ** n) >= qring._COEFF_LIMIT:
        # fall back rather than risk digit overflow
        out = TLElement(n)
        acc = out.terms
        for ma, ca in xs:
            for mb, cb in ys:
                r, loops = compose(ma, mb)
                c = ca * cb * delta_power(loops)
                s = acc.get(r, 0) + c
                if s:
                    acc[r] = s
                elif r in acc:
                    del acc[r]
        return out
    px = [(m, qring._pack(c._c, ex, g)) for m, c in xs]
    py = [(m, qring._pack(c._c, ey, g)) for m, c in ys]
    pd = [qring._pack(delta_power(k)._c, ed, g) for k in range(n + 1)]
    acc: Dict[Matching, int] = {}
    for ma, ca in px:
        for mb, cb in py:
            r, loops = compose(ma, mb)
            v = ca * cb * pd[loops]
            acc[r] = acc.get(r, 0) + v
    out = TLElement(n)
    base = ex + ey + ed
    for r, v in acc.items():
        if v:
            c = HalfLaurent(qring._unpack(v, base, g), _raw=True)
            if c:
                out.terms[r] = c
    return out


# ---------------------------------------------------------------------------
# projectors


@lru_cache(maxsize=None)
def _w_table(n: int) -> TLElement:
    """[n]! times the projector, with integer Laurent coefficients."""
    if n == 1:
        return TLElement.identity(1)
    prev = _w_table(n - 1)
    wide = prev.tensor_id()
    u = TLElement.basis(Matching.cupcap(n, n - 1))
    m = tl_mul(tl_mul(wide, u), wide)
    fact = qfact(n - 1)
    first = wide.scale(qint(n))
    second = TLElement(n)
    mult = qint(n - 1)
    for mm, c in m.terms.items():
        second.terms[mm] = (c * mult).exact_div(fact)
    return first + second


def jones_wenzl(n: int) -> TLElement:
    """The projector in TL_n: idempotent, killed by every U_i."""
    if n < 1:
        raise ValueError("projectors start at n = 1")
    w = _w_table(n)
    dq = {j: 1 for j in range(2, n + 1)}
    out = TLElement(n)
    for m, c in w.terms.items():
        out.terms[m] = RatFunc.from_qint_factors(c, dq)
    return out


def jw_coefficient(d: Matching) -> HalfLaurent:
    """Coefficient of d in [n]! times the projector (an exact polynomial)."""
    c = _w_table(d.n).terms.get(d, qring.ZERO)
    return c


# ---------------------------------------------------------------------------
# the closed-form coefficient family


def rect_matching(x: int, y: int, z: int, t: int) -> Matching:
    """The staircase family: x left throughs, y nested arcs whose feet shift
    past z slanting strands, then t right throughs; lives in TL_(x+2y+z+t).
    """
    if min(x, y, z, t) < 0:
        raise ValueError("parameters must be non-negative")
    n = x + 2 * y + z + t
    if n == 0:
        raise ValueError("empty diagram")
    mate = [-1] * (2 * n)

    def pair(a, b):
        mate[a], mate[b] = b, a

    for i in range(x):
        pair(i, n + i)
    for i in range(y):
        pair(x + i, x + 2 * y - 1 - i)
        pair(n + x + z + i, n + x + z + 2 * y - 1 - i)
    for j in range(z):
        pair(x + 2 * y + j, n + x + j)
    for j in range(t):
        pair(x + 2 * y + z + j, n + x + z + 2 * y + j)
    return Matching(tuple(mate))


def kho_coeff_rect(x: int, y: int, z: int, t: int) -> HalfLaurent:
    """Closed-form coefficient of rect_matching(x,y,z,t) in [n]! times the
    projector: [x+y ch y][t+y ch y][y]![x+z+t+y]!.  Positive leading sign in
    this loop convention (checked against jw_coefficient in the tests).
    """
    if min(x, y, z, t) < 0 or x + y + z + t < 1:
        raise ValueError("need non-negative parameters with x+y+z+t >= 1")
    return qbinom(x + y, y) * qbinom(t + y, y) * qfact(y) * qfact(x + z + t + y)


def kho_coeff_cupshift(x: int, y: int) -> HalfLaurent:
    """Ratio of coefficients for diagrams differing by sliding a block of y
    nested arcs across x parallel strands: [x+y ch x].
    """
    if x < 0 or y < 0:
        raise ValueError("parameters must be non-negative")
    return qbinom(x + y, x)
