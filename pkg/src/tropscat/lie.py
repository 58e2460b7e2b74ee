"""The Lie algebra of monomial derivations ``w^m (x) d_n`` with ``<m, n> = 0``.

Elements are stored as a map ``(monomial, t-exponent) -> rational vector``;
the vector is the ``n`` of ``d_n`` with the rational coefficient folded in.
This form is canonical, so equality is structural.  The derivation acts on
the model algebra by ``d_n(w^m') = <m', n> w^m'``.

Group elements of ``exp(h (x) m)`` are represented by their logarithm;
composition is :func:`bch` and inversion is negation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Iterable, Iterator

from .series import Series, SeriesError, format_fraction, format_w, parse_fraction

Vec = tuple[Fraction, ...]


class LieError(ValueError):
    pass


def pairing(m, n) -> int:
    if len(m) != len(n):
        raise LieError(f"rank mismatch in pairing: {m} vs {n}")
    return sum(a * b for a, b in zip(m, n))


def primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise LieError("zero vector has no primitive direction")
    return tuple(int(x) // g for x in v)


def rotate_ccw(v) -> tuple[int, int]:
    """Quarter turn anticlockwise in the plane."""
    a, b = v
    return (-b, a)


def rotate_cw(v) -> tuple[int, int]:
    a, b = v
    return (b, -a)


def canonical_direction(monomial, vec) -> tuple[tuple[int, ...], Fraction]:
    """Split a rational vector into ``q * n`` with ``n`` primitive and integral.

    In rank 2 the sign of ``n`` is fixed to ``rotate_ccw(primitive(-monomial))``
    (so the wall with mode ``(1,1)`` reads ``d_(-1,1)``); otherwise the first
    nonzero coordinate of ``n`` is positive.
    """
    den = 1
    for x in vec:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(x * den) for x in vec]
    n = primitive(ints)
    if len(n) == 2 and any(monomial):
        ref = rotate_ccw(primitive([-x for x in monomial]))
        if pairing(ref, n) < 0:
            n = tuple(-x for x in n)
    else:
        first = next(x for x in n if x)
        if first < 0:
            n = tuple(-x for x in n)
    i = next(k for k, x in enumerate(n) if x)
    return n, Fraction(vec[i]) / n[i]


@dataclass(frozen=True)
class LieTerm:
    """``coeff * w^monomial (x) d_direction``; ``coeff`` is a pure t-series."""

    monomial: tuple[int, ...]
    direction: tuple[int, ...]
    coeff: Series

    def __post_init__(self):
        object.__setattr__(self, "monomial", tuple(int(x) for x in self.monomial))
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))
        if not any(self.monomial):
            raise LieError("monomial of a Lie term must be nonzero")
        if not any(self.direction):
            raise LieError("direction of a Lie term must be nonzero")
        if len(self.monomial) != len(self.direction) or len(self.monomial) != self.coeff.rank:
            raise LieError("rank mismatch in Lie term")
        if pairing(self.monomial, self.direction) != 0:
            raise LieError(f"direction {self.direction} is not perpendicular to monomial {self.monomial}")
        if not self.coeff.is_pure_t():
            raise LieError("Lie term coefficient must be a pure t-series")


class LieElement:
    __slots__ = ("_data", "nparams", "rank", "order", "_hash")

    def __init__(self, terms: Iterable[LieTerm] = (), *, nparams: int, rank: int, order: int):
        self.nparams, self.rank, self.order = nparams, rank, order
        acc: dict = {}
        for t in terms:
            if t.coeff.nparams != nparams or t.coeff.rank != rank:
                raise LieError("Lie term ambient mismatch")
            for (j, _), c in t.coeff.items():
                if sum(j) > order:
                    continue
                _accumulate(acc, (t.monomial, j), tuple(c * x for x in t.direction))
        self._data = _normalized(acc)
        self._hash = None

    @classmethod
    def _raw(cls, data: dict, nparams: int, rank: int, order: int) -> LieElement:
        e = object.__new__(cls)
        e._data = _normalized(data)
        e.nparams, e.rank, e.order = nparams, rank, order
        e._hash = None
        return e

    @classmethod
    def zero(cls, *, nparams: int, rank: int, order: int) -> LieElement:
        return cls._raw({}, nparams, rank, order)

    @classmethod
    def single(cls, monomial, direction, coeff: Series) -> LieElement:
        return cls([LieTerm(monomial, direction, coeff)], nparams=coeff.nparams, rank=coeff.rank,
                   order=coeff.order)

    @classmethod
    def from_series(cls, f: Series, direction) -> LieElement:
        """``f (x) d_direction`` for a series ``f`` in the ``w`` variables.

        Convenient for wall factors such as ``log(1 + t w^(-m)) (x) d_n``.
        """
        data: dict = {}
        for (j, m), c in f.items():
            if not any(m):
                raise LieError("constant-in-w part cannot carry a derivation")
            if pairing(m, direction) != 0:
                raise LieError(f"direction {tuple(direction)} not perpendicular to {m}")
            _accumulate(data, (m, j), tuple(c * x for x in direction))
        return cls._raw(data, f.nparams, f.rank, f.order)

    def like_zero(self) -> LieElement:
        return LieElement._raw({}, self.nparams, self.rank, self.order)

    # inspection

    def raw_items(self) -> Iterator[tuple[tuple, Vec]]:
        """``((monomial, j), vector)`` pairs in canonical order."""
        return iter(self._data.items())

    def is_zero(self) -> bool:
        return not self._data

    def __bool__(self) -> bool:
        return bool(self._data)

    def monomials(self) -> list[tuple[int, ...]]:
        return sorted({m for m, _ in self._data})

    def valuation(self) -> int | None:
        if not self._data:
            return None
        return min(sum(j) for _, j in self._data)

    def terms(self) -> list[LieTerm]:
        """Canonical decomposition into :class:`LieTerm` records."""
        grouped: dict = {}
        for (m, j), vec in self._data.items():
            n, q = canonical_direction(m, vec)
            grouped.setdefault((m, n), {})[(j, (0,) * self.rank)] = q
        terms = [LieTerm(m, n, Series(c, nparams=self.nparams, rank=self.rank, order=self.order))
                 for (m, n), c in grouped.items()]
        return sorted(terms, key=lambda t: (t.coeff.valuation(), t.monomial, t.direction))

    def coefficient_along(self, monomial, direction) -> Series:
        """The series ``c`` with ``(w^monomial part) = c * w^monomial (x) d_direction``."""
        monomial = tuple(monomial)
        direction = tuple(direction)
        i = next(k for k, x in enumerate(direction) if x)
        out = {}
        for (m, j), vec in self._data.items():
            if m != monomial:
                continue
            q = Fraction(vec[i]) / direction[i]
            if any(vec[k] != q * direction[k] for k in range(self.rank)):
                raise LieError(f"component at {monomial} is not parallel to {direction}")
            out[(j, (0,) * self.rank)] = q
        return Series(out, nparams=self.nparams, rank=self.rank, order=self.order)

    def restrict(self, predicate) -> LieElement:
        """Keep the terms whose monomial satisfies ``predicate``."""
        return LieElement._raw({k: v for k, v in self._data.items() if predicate(k[0])},
                               self.nparams, self.rank, self.order)

    def homogeneous_part(self, degree: int) -> LieElement:
        return LieElement._raw({k: v for k, v in self._data.items() if sum(k[1]) == degree},
                               self.nparams, self.rank, self.order)

    def truncate(self, order: int) -> LieElement:
        return LieElement._raw({k: v for k, v in self._data.items() if sum(k[1]) <= order},
                               self.nparams, self.rank, order)

    def with_order(self, order: int) -> LieElement:
        return self.truncate(order)

    def in_maximal_ideal(self) -> bool:
        return all(sum(j) >= 1 for _, j in self._data)

    # linear structure

    def _check(self, other: LieElement):
        if not isinstance(other, LieElement):
            raise TypeError(f"expected LieElement, got {type(other).__name__}")
        if (self.nparams, self.rank) != (other.nparams, other.rank):
            raise LieError("rank or parameter count mismatch")
        if self.order != other.order:
            raise LieError(f"truncation order mismatch: {self.order} vs {other.order}")

    def __add__(self, other: LieElement) -> LieElement:
        self._check(other)
        out = dict(self._data)
        for k, v in other._data.items():
            _accumulate(out, k, v)
        return LieElement._raw(out, self.nparams, self.rank, self.order)

    def __neg__(self) -> LieElement:
        return LieElement._raw({k: tuple(-x for x in v) for k, v in self._data.items()},
                               self.nparams, self.rank, self.order)

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def scale(self, c) -> LieElement:
        c = Fraction(c)
        return LieElement._raw({k: tuple(c * x for x in v) for k, v in self._data.items()},
                               self.nparams, self.rank, self.order)

    def __mul__(self, c) -> LieElement:
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self.nparams, self.rank, self.order) == (other.nparams, other.rank, other.order) \
            and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nparams, self.rank, self.order, tuple(self._data.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LieElement({self})"

    def __str__(self) -> str:
        if not self._data:
            return "0"
        parts = []
        for term in self.terms():
            parts.append(f"({term.coeff}) {format_w(term.monomial)} ∂({','.join(map(str, term.direction))})")
        return " + ".join(parts)

    # serialization

    def to_records(self) -> list[dict]:
        out = []
        for term in self.terms():
            coeff = {",".join(map(str, j)): format_fraction(c) for (j, _), c in term.coeff.items()}
            out.append({"monomial": list(term.monomial), "direction": list(term.direction), "coeff": coeff})
        return out

    @classmethod
    def from_records(cls, records, *, nparams: int, rank: int, order: int) -> LieElement:
        terms = []
        for rec in records:
            coeff = {}
            for key, value in rec["coeff"].items():
                j = tuple(int(x) for x in str(key).split(",")) if str(key).strip() else ()
                coeff[(j, (0,) * rank)] = parse_fraction(value)
            try:
                series = Series(coeff, nparams=nparams, rank=rank, order=order)
            except SeriesError as exc:
                raise LieError(str(exc)) from exc
            terms.append(LieTerm(tuple(rec["monomial"]), tuple(rec["direction"]), series))
        return cls(terms, nparams=nparams, rank=rank, order=order)


def _accumulate(acc: dict, key, vec):
    old = acc.get(key)
    if old is not None:
        vec = tuple(a + b for a, b in zip(old, vec))
    if any(vec):
        acc[key] = tuple(Fraction(x) for x in vec)
    else:
        acc.pop(key, None)


def _normalized(data: dict) -> dict:
    return {k: data[k] for k in sorted(data, key=lambda k: (sum(k[1]), k[1], k[0])) if any(data[k])}


def _add_t(j1, j2):
    return tuple(a + b for a, b in zip(j1, j2))


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """``[c w^a d_n, c' w^b d_n'] = c c' w^(a+b) d_(<b,n> n' - <a,n'> n)``, bilinearly."""
    x._check(y)
    N = x.order
    out: dict = {}
    ys = [(b, j2, sum(j2), v2) for (b, j2), v2 in y._data.items()]
    for (a, j1), v1 in x._data.items():
        room = N - sum(j1)
        for b, j2, d2, v2 in ys:
            if d2 > room:
                continue
            bn = sum(p * q for p, q in zip(b, v1))
            an = sum(p * q for p, q in zip(a, v2))
            if not bn and not an:
                continue
            vec = tuple(bn * p - an * q for p, q in zip(v2, v1))
            if any(vec):
                _accumulate(out, (_add_t(a, b), _add_t(j1, j2)), vec)
    return LieElement._raw(out, x.nparams, x.rank, N)


def derivation_apply(x: LieElement, s: Series) -> Series:
    """Infinitesimal action: ``(c w^a d_n)(w^m') = c <m', n> w^(a+m')``."""
    if (x.nparams, x.rank, x.order) != (s.nparams, s.rank, s.order):
        raise LieError("ambient mismatch between Lie element and series")
    N = x.order
    out: dict = {}
    for (a, j1), v in x._data.items():
        d1 = sum(j1)
        for (j2, m), c in s.items():
            if d1 + sum(j2) > N:
                continue
            p = pairing(m, v)
            if p:
                key = (_add_t(j1, j2), _add_t(a, m))
                val = out.get(key, 0) + c * p
                if val:
                    out[key] = val
                else:
                    del out[key]
    return Series(out, nparams=s.nparams, rank=s.rank, order=N)


def _require_m(x: LieElement, what: str):
    if not x.in_maximal_ideal():
        raise LieError(f"{what} needs coefficients in the maximal ideal (|j| >= 1)")


def group_act(log_theta: LieElement, s: Series) -> Series:
    """Apply ``exp(log_theta)`` to ``s``: ``sum_k D^k(s)/k!``."""
    _require_m(log_theta, "group_act")
    result = s
    term = s
    k = 0
    while True:
        k += 1
        term = derivation_apply(log_theta, term).scale(Fraction(1, k))
        if not term:
            return result
        result = result + term


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bch(x: LieElement, y: LieElement) -> LieElement:
    """``log(exp(x) exp(y))`` truncated at the ambient order.

    Uses the recursion for the homogeneous components ``Z_n`` (degree ``n``
    in ``x, y`` jointly):

        Z_1 = x + y
        (n+1) Z_(n+1) = 1/2 [x - y, Z_n]
            + sum_(p>=1, 2p<=n) B_2p/(2p)! sum_(k_1+..+k_2p = n)
                  [Z_k1, [Z_k2, ... [Z_k2p, x + y] ...]]

    Since ``x, y`` lie in ``h (x) m``, ``Z_n`` has t-order at least ``n`` and
    the recursion stops at the truncation order.
    """
    x._check(y)
    _require_m(x, "bch")
    _require_m(y, "bch")
    if not x:
        return y
    if not y:
        return x
    N = x.order
    s = x + y
    diff = x - y
    Z = [None, s]
    # chains[r, m]: sum over k_1 + .. + k_r = m of [Z_k1, [.., [Z_kr, x + y] ..]]
    chains = {(0, 0): s}
    for n in range(1, N):
        for r in range(1, n + 1):
            total = s.like_zero()
            for k in range(1, n - r + 2):
                inner = chains.get((r - 1, n - k))
                if inner:
                    total = total + bracket(Z[k], inner)
            chains[r, n] = total
        acc = bracket(diff, Z[n]).scale(Fraction(1, 2))
        for p in range(1, n // 2 + 1):
            chain = chains[2 * p, n]
            if chain:
                acc = acc + chain.scale(bernoulli(2 * p) / factorial(2 * p))
        Z.append(acc.scale(Fraction(1, n + 1)))
    out = Z[1]
    for z in Z[2:]:
        out = out + z
    return out


def bch_many(elements: Iterable[LieElement], *, nparams: int, rank: int, order: int) -> LieElement:
    """``log(exp(e_r) ... exp(e_1))`` for ``elements = [e_1, ..., e_r]``."""
    acc = LieElement.zero(nparams=nparams, rank=rank, order=order)
    for e in elements:
        acc = bch(e, acc)
    return acc
