"""Exact arithmetic in Z[q^(1/2), q^(-1/2)] and its fraction field.

Exponents are stored as integers counting half-powers of q, so the entry
e -> c means c * q^(e/2).  Coefficients are exact ints or Fractions, never
floats.  RatFunc keeps its denominator in factored form (a multiset of
quantum integers [j] times a leftover polynomial) because every denominator
produced by the fusion formulas is such a product; keeping the factorization
makes degree queries O(1) and keeps cross-multiplication sizes down.

Quantum combinatorics ([n], [n]!, binomials, the theta coefficient, twist
eigenvalues, circle-removal and framing factors) live here too since they
are plain ring elements.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple, Union

Coeff = Union[int, Fraction]
Scalar = Union[int, Fraction, "HalfLaurent", "RatFunc"]


class InexactDivision(ArithmeticError):
    """Polynomial division left a remainder where exactness was required."""


def _coerce_coeff(c) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else c
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


# ---------------------------------------------------------------------------
# packed (Kronecker) multiplication helpers
#
# A Laurent polynomial with integer coefficients is evaluated at 2^64 after
# shifting its exponents to start at zero; products of the resulting big ints
# are products of the polynomials as long as every true coefficient stays
# below 2^63 in absolute value, which the callers guarantee with a crude
# bound check.  Negative coefficients are fine: unpacking uses balanced
# base-2^64 digits.

_MASK64 = (1 << 64) - 1
_HALF64 = 1 << 63
_COEFF_LIMIT = 1 << 62  # one bit of slack under the 2^63 digit bound


def _frame(c: Dict[int, Coeff]) -> Tuple[int, int]:
    """(min exponent, gcd stride) of a nonzero int-coefficient poly."""
    emin = min(c)
    g = 0
    for e in c:
        g = math.gcd(g, e - emin)
    return emin, (g or 1)


def _pack(c: Dict[int, Coeff], emin: int, stride: int) -> int:
    v = 0
    for e, co in c.items():
        v += co << (64 * ((e - emin) // stride))
    return v


def _unpack(v: int, emin: int, stride: int) -> Dict[int, Coeff]:
    out: Dict[int, Coeff] = {}
    pos = 0
    while v:
        d = v & _MASK64
        if d >= _HALF64:
            d -= 1 << 64
        if d:
            out[emin + pos * stride] = d
        v = (v - d) >> 64
        pos += 1
    return out


def _dict_mul(a: Dict[int, Coeff], b: Dict[int, Coeff]) -> Dict[int, Coeff]:
    out: Dict[int, Coeff] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            elif e in out:
                del out[e]
    return out


def _poly_mul(a: Dict[int, Coeff], b: Dict[int, Coeff]) -> Dict[int, Coeff]:
    if not a or not b:
        return {}
    la, lb = len(a), len(b)
    if la * lb < 32:
        return _dict_mul(a, b)
    maxa = maxb = 0
    for c in a.values():
        if not isinstance(c, int):
            return _dict_mul(a, b)
        if -c > maxa or c > maxa:
            maxa = abs(c)
    for c in b.values():
        if not isinstance(c, int):
            return _dict_mul(a, b)
        if -c > maxb or c > maxb:
            maxb = abs(c)
    if maxa * maxb * min(la, lb) >= _COEFF_LIMIT:
        return _dict_mul(a, b)
    emina, ga = _frame(a)
    eminb, gb = _frame(b)
    g = math.gcd(ga, gb)
    spread = (max(a) - emina + max(b) - eminb) // g + 1
    if spread > 2 * la * lb + 64:  # too sparse for dense packing
        return _dict_mul(a, b)
    return _unpack(_pack(a, emina, g) * _pack(b, eminb, g), emina + eminb, g)


class HalfLaurent:
    """Sparse Laurent polynomial in q^(1/2) with exact coefficients.

    Immutable once constructed; the term map never stores zeros.
    """

    __slots__ = ("_c",)

    def __init__(self, terms: Optional[Dict[int, Coeff]] = None, _raw: bool = False):
        if terms is None:
            self._c: Dict[int, Coeff] = {}
        elif _raw:
            self._c = terms
        else:
            clean: Dict[int, Coeff] = {}
            for e, c in terms.items():
                if not isinstance(e, int):
                    raise TypeError("exponents are ints (half-units of q)")
                c = _coerce_coeff(c)
                if c:
                    clean[e] = c
            self._c = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def monomial(half_exp: int, coeff: Coeff = 1) -> "HalfLaurent":
        c = _coerce_coeff(coeff)
        return HalfLaurent({half_exp: c} if c else {}, _raw=True)

    @staticmethod
    def from_terms(terms: Iterable[Tuple[int, str]]) -> "HalfLaurent":
        """Inverse of to_terms: pairs of (half-unit exponent, coeff string)."""
        out: Dict[int, Coeff] = {}
        for e, s in terms:
            out[int(e)] = _coerce_coeff(Fraction(s))
        return HalfLaurent(out)

    # -- views --------------------------------------------------------------

    def items(self) -> List[Tuple[int, Coeff]]:
        return sorted(self._c.items())

    def to_terms(self) -> List[Tuple[int, str]]:
        """Terms as (half-unit exponent, exact coefficient string), descending."""
        return [(e, str(self._c[e])) for e in sorted(self._c, reverse=True)]

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return other == self
        other = _as_half(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    __hash__ = None  # mutable-dict-backed; use to_terms() tuples if needed

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        bits = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            if e == 0:
                bits.append(f"{c}")
            else:
                ex = f"q^{e // 2}" if e % 2 == 0 else f"q^({e}/2)"
                bits.append(ex if c == 1 else f"-{ex}" if c == -1 else f"{c}*{ex}")
        return " + ".join(bits).replace("+ -", "- ")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "HalfLaurent":
        other = _as_half(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return HalfLaurent(out, _raw=True)

    __radd__ = __add__

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent({e: -c for e, c in self._c.items()}, _raw=True)

    def __sub__(self, other):
        other = _as_half(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return other * self
        other = _as_half(other)
        if other is NotImplemented:
            return NotImplemented
        return HalfLaurent(_poly_mul(self._c, other._c), _raw=True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HalfLaurent":
        if not isinstance(k, int) or k < 0:
            raise ValueError("HalfLaurent powers are non-negative ints")
        out = _ONE_DICT.copy()
        base = self._c
        while k:
            if k & 1:
                out = _poly_mul(out, base)
            k >>= 1
            if k:
                base = _poly_mul(base, base)
        return HalfLaurent(out, _raw=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            inv = Fraction(1, 1) / other
            return HalfLaurent({e: _coerce_coeff(c * inv) for e, c in self._c.items()})
        if isinstance(other, HalfLaurent):
            return RatFunc(self, other)
        if isinstance(other, RatFunc):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return RatFunc(other) / RatFunc(self)

    # -- queries ------------------------------------------------------------

    def degree(self) -> Fraction:
        """Top q-degree as an exact rational.  Zero has none: raises."""
        if not self._c:
            raise ValueError("the zero polynomial has no degree")
        return Fraction(max(self._c), 2)

    def min_degree(self) -> Fraction:
        if not self._c:
            raise ValueError("the zero polynomial has no degree")
        return Fraction(min(self._c), 2)

    def leading_coeff(self) -> Coeff:
        if not self._c:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self._c[max(self._c)]

    def leading_sign(self) -> int:
        return 1 if self.leading_coeff() > 0 else -1

    def coeff(self, half_exp: int) -> Coeff:
        return self._c.get(half_exp, 0)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def mirror(self) -> "HalfLaurent":
        """Substitute q -> q^(-1)."""
        return HalfLaurent({-e: c for e, c in self._c.items()}, _raw=True)

    # -- division -----------------------------------------------------------

    def exact_div(self, other: "HalfLaurent") -> "HalfLaurent":
        """Divide, requiring a zero remainder."""
        q = self.try_div(other)
        if q is None:
            raise InexactDivision(f"{self!r} is not divisible by {other!r}")
        return q

    def try_div(self, other: "HalfLaurent") -> Optional["HalfLaurent"]:
        other = _as_half(other)
        if not other._c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return HalfLaurent()
        rem = dict(self._c)
        d = other._c
        d_emax = max(d)
        d_lead = d[d_emax]
        qmin = min(rem) - min(d)  # exact quotients cannot reach below this
        quot: Dict[int, Coeff] = {}
        while rem:
            e = max(rem)
            qe = e - d_emax
            if qe < qmin:
                return None
            qc = _coerce_coeff(Fraction(rem[e]) / Fraction(d_lead))
            quot[qe] = qc
            for de, dc in d.items():
                t = qe + de
                s = rem.get(t, 0) - qc * dc
                if s:
                    rem[t] = s
                elif t in rem:
                    del rem[t]
        return HalfLaurent(quot, _raw=True)


_ONE_DICT: Dict[int, Coeff] = {0: 1}
ONE = HalfLaurent({0: 1})
ZERO = HalfLaurent()


def _as_half(x) -> "HalfLaurent":
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        c = _coerce_coeff(x)
        return HalfLaurent({0: c} if c else {}, _raw=True)
    return NotImplemented


class RatFunc:
    """Quotient of HalfLaurent values with a factored denominator.

    The denominator is held as a multiset of quantum-integer factors [j]
    (j >= 2) times a leftover polynomial, which is 1 in practice: every
    denominator the fusion formulas produce is a product of [j]'s.  Monomial
    leftovers are folded into the numerator immediately.  Reduction against
    the [j] factors is lazy and only attempted once the numerator grows past
    a size threshold, since equality is cross-multiplicative anyway.
    """

    __slots__ = ("num", "_dq", "_rest")

    REDUCE_LIMIT = 200

    def __init__(self, num: Scalar = 0, den: Scalar = 1):
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            r = _as_ratfunc(num) / _as_ratfunc(den)
            self.num, self._dq, self._rest = r.num, r._dq, r._rest
            return
        n = _as_half(num)
        d = _as_half(den)
        if n is NotImplemented or d is NotImplemented:
            raise TypeError("RatFunc parts must be polynomials or exact scalars")
        if not d:
            raise ZeroDivisionError("RatFunc denominator is zero")
        self.num, self._dq, self._rest = _normalize(n, {}, d)

    @staticmethod
    def _build(num: HalfLaurent, dq: Dict[int, int], rest: HalfLaurent) -> "RatFunc":
        r = object.__new__(RatFunc)
        r.num, r._dq, r._rest = _normalize(num, dq, rest)
        return r

    @staticmethod
    def from_qint_factors(num: Scalar, factors: Dict[int, int]) -> "RatFunc":
        """num / prod over j of [j]^factors[j]; factors may include j = 1."""
        dq = {j: e for j, e in factors.items() if j >= 2 and e}
        if any(e < 0 for e in dq.values()):
            raise ValueError("factor exponents must be non-negative")
        return RatFunc._build(_as_half(num), dq, ONE)

    # -- structure ----------------------------------------------------------

    @property
    def den(self) -> HalfLaurent:
        d = self._rest
        for j, e in sorted(self._dq.items()):
            d = d * qint(j) ** e
        return d

    def den_factors(self) -> Dict[int, int]:
        return dict(self._dq)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __repr__(self) -> str:
        if not self._dq and not (self._rest - 1):
            return f"({self.num!r})"
        facs = "".join(f"[{j}]^{e}" if e > 1 else f"[{j}]" for j, e in sorted(self._dq.items()))
        if self._rest - 1:
            facs += f"*({self._rest!r})"
        return f"({self.num!r}) / {facs}"

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = _as_ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        # shared factored part cancels without materializing
        common = {j: min(e, o._dq.get(j, 0)) for j, e in self._dq.items() if j in o._dq}
        da = _materialize({j: e - common.get(j, 0) for j, e in self._dq.items()}, self._rest)
        db = _materialize({j: e - common.get(j, 0) for j, e in o._dq.items()}, o._rest)
        return self.num * db == o.num * da

    __hash__ = None

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other):
        o = _as_ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        dq = dict(self._dq)
        for j, e in o._dq.items():
            dq[j] = dq.get(j, 0) + e
        return RatFunc._build(self.num * o.num, dq, self._rest * o._rest)

    __rmul__ = __mul__

    def __neg__(self):
        return RatFunc._build(-self.num, dict(self._dq), self._rest)

    def __add__(self, other):
        o = _as_ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num:
            return o
        if not o.num:
            return self
        dq = {j: max(e, o._dq.get(j, 0)) for j, e in self._dq.items()}
        for j, e in o._dq.items():
            dq.setdefault(j, e)
        lift_a = _materialize({j: e - self._dq.get(j, 0) for j, e in dq.items()}, ONE)
        lift_b = _materialize({j: e - o._dq.get(j, 0) for j, e in dq.items()}, ONE)
        if self._rest == o._rest:
            num = self.num * lift_a + o.num * lift_b
            return RatFunc._build(num, dq, self._rest)
        num = self.num * lift_a * o._rest + o.num * lift_b * self._rest
        return RatFunc._build(num, dq, self._rest * o._rest)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        new_num = _materialize(self._dq, self._rest)
        return RatFunc._build(new_num, {}, self.num)

    def __truediv__(self, other):
        o = _as_ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return _as_ratfunc(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- queries -------------------------------------------------------------

    def degree(self) -> Fraction:
        if not self.num:
            raise ValueError("the zero function has no degree")
        d = self.num.degree() - self._rest.degree()
        for j, e in self._dq.items():
            d -= e * (j - 1)
        return d

    def min_degree(self) -> Fraction:
        if not self.num:
            raise ValueError("the zero function has no degree")
        d = self.num.min_degree() - self._rest.min_degree()
        for j, e in self._dq.items():
            d += e * (j - 1)
        return d

    def leading_sign(self) -> int:
        # every [j] has leading coefficient +1
        return self.num.leading_sign() * self._rest.leading_sign()

    def mirror(self) -> "RatFunc":
        # [j] is palindromic, so the factored part is mirror-invariant
        return RatFunc._build(self.num.mirror(), dict(self._dq), self._rest.mirror())

    def as_laurent(self) -> HalfLaurent:
        """Collapse to a polynomial; raises InexactDivision if impossible."""
        n = self.num
        for j, e in sorted(self._dq.items(), reverse=True):
            f = qint(j)
            for _ in range(e):
                n = n.exact_div(f)
        if self._rest - 1:
            n = n.exact_div(self._rest)
        return n

    def reduced(self) -> "RatFunc":
        """Divide out whatever [j] factors happen to cancel exactly."""
        return RatFunc._build(*_reduce(self.num, dict(self._dq), self._rest))


def _materialize(dq: Dict[int, int], rest: HalfLaurent) -> HalfLaurent:
    d = rest
    for j, e in sorted(dq.items()):
        if e:
            d = d * qint(j) ** e
    return d


def _reduce(num, dq, rest):
    for j in sorted(dq, reverse=True):
        f = qint(j)
        while dq[j]:
            q = num.try_div(f)
            if q is None:
                break
            num, dq[j] = q, dq[j] - 1
        if not dq[j]:
            del dq[j]
    if rest - 1:
        q = num.try_div(rest)
        if q is not None:
            num, rest = q, ONE
    return num, dq, rest


def _normalize(num: HalfLaurent, dq: Dict[int, int], rest: HalfLaurent):
    if not num:
        return ZERO, {}, ONE
    if rest.is_monomial():
        if rest != ONE:
            ((e, c),) = rest._c.items()
            num = HalfLaurent({ne - e: _coerce_coeff(Fraction(nc) / Fraction(c)) for ne, nc in num._c.items()})
            rest = ONE
    if dq and len(num) > RatFunc.REDUCE_LIMIT:
        num, dq, rest = _reduce(num, dq, rest)
    return num, dq, rest


def _as_ratfunc(x) -> "RatFunc":
    if isinstance(x, RatFunc):
        return x
    h = _as_half(x)
    if h is NotImplemented:
        return NotImplemented
    return RatFunc._build(h, {}, ONE)


# ---------------------------------------------------------------------------
# quantum combinatorics


@lru_cache(maxsize=None)
def qint(n: int) -> HalfLaurent:
    """[n] = (q^n - q^-n)/(q - q^-1): exponents n-1, n-3, ..., 1-n."""
    if n < 0:
        raise ValueError("quantum integers take n >= 0")
    return HalfLaurent({2 * (n - 1 - 2 * i): 1 for i in range(n)})


@lru_cache(maxsize=None)
def qfact(n: int) -> HalfLaurent:
    """[n]! with [0]! = 1."""
    if n < 0:
        raise ValueError("quantum factorials take n >= 0")
    return ONE if n == 0 else qfact(n - 1) * qint(n)


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> HalfLaurent:
    """Gaussian binomial [n]!/([k]![n-k]!) by exact division."""
    if not 0 <= k <= n:
        raise ValueError(f"qbinom needs 0 <= k <= n, got ({n}, {k})")
    return qfact(n).exact_div(qfact(k) * qfact(n - k))


def admissible(a: int, b: int, c: int) -> bool:
    """Triangle inequalities plus even total; entries non-negative ints."""
    if not all(isinstance(v, int) and v >= 0 for v in (a, b, c)):
        return False
    return (a + b + c) % 2 == 0 and a <= b + c and b <= a + c and c <= a + b


class AdmissibleTriple:
    """An admissible triple of even labels, validated on construction."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a: int, b: int, c: int):
        if any(v % 2 for v in (a, b, c)) or not admissible(a, b, c):
            raise ValueError(f"({a}, {b}, {c}) is not an admissible even triple")
        self.a, self.b, self.c = a, b, c

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __repr__(self):
        return f"AdmissibleTriple({self.a}, {self.b}, {self.c})"


def _fact_counter(counter: Dict[int, int], m: int, sign: int) -> None:
    # tally the [j] factors of [m]! into a shared exponent counter
    for j in range(2, m + 1):
        counter[j] = counter.get(j, 0) + sign


def theta(a: int, b: int, c: int) -> RatFunc:
    """Evaluation of the trivalent theta network with edge labels a, b, c.

    Signed: the value carries (-1)^((a+b+c)/2) relative to the all-positive
    factorial quotient, matching the bracket with loop value -q - q^(-1).
    The unsigned quotient is recovered on even triples by leading_sign.
    """
    t = AdmissibleTriple(a, b, c)
    x = (t.a + t.b - t.c) // 2
    y = (t.b + t.c - t.a) // 2
    z = (t.c + t.a - t.b) // 2
    fac: Dict[int, int] = {}
    for m in (x + y + z + 1, x, y, z):
        _fact_counter(fac, m, +1)
    for m in (y + z, z + x, x + y):
        _fact_counter(fac, m, -1)
    num = ONE if (x + y + z) % 2 == 0 else -ONE
    dq: Dict[int, int] = {}
    for j, e in fac.items():
        if e > 0:
            num = num * qint(j) ** e
        elif e < 0:
            dq[j] = -e
    return RatFunc._build(num, dq, ONE)


def twist_coeff(w: int, k: int, n: int) -> HalfLaurent:
    """Full-twist eigenvalue ((-1)^(n-k) q^(n-k+n^2/2-k^2))^w on channel 2k."""
    if not 0 <= k <= n:
        raise ValueError(f"channel k = {k} outside 0..{n}")
    sign = -1 if ((n - k) * w) % 2 else 1
    return HalfLaurent.monomial(w * (2 * (n - k) + n * n - 2 * k * k), sign)


def circle_removal(c: int, n: int) -> RatFunc:
    """(-1)^c [n+2]/[n+2-c]: coefficient left by removing c circles."""
    if c < 0 or c > n + 1:
        raise ValueError(f"cannot remove {c} circles at strand count {n}")
    if c == 0:
        return RatFunc(1)
    num = qint(n + 2) if c % 2 == 0 else -qint(n + 2)
    d = n + 2 - c
    return RatFunc._build(num, {d: 1} if d >= 2 else {}, ONE)


def framing_factor(writhe: int, n: int) -> HalfLaurent:
    """((-1)^n q^(1/2))^(writhe (n^2+2n)), the framing-correction monomial."""
    e = writhe * (n * n + 2 * n)
    sign = -1 if (n * e) % 2 else 1
    return HalfLaurent.monomial(e, sign)


def degree(x) -> Fraction:
    """Top q-degree of a nonzero polynomial or rational function."""
    if isinstance(x, (HalfLaurent, RatFunc)):
        return x.degree()
    h = _as_half(x)
    if h is NotImplemented:
        raise TypeError(f"no degree for {type(x).__name__}")
    return h.degree()


def leading_sign(x) -> int:
    if isinstance(x, (HalfLaurent, RatFunc)):
        return x.leading_sign()
    h = _as_half(x)
    if h is NotImplemented:
        raise TypeError(f"no leading sign for {type(x).__name__}")
    return h.leading_sign()
