"""Truncated formal series over exact rationals.

A :class:`Series` lives in ``Q[t_1..t_l]/m^(N+1) (x) Q[M]``: every term is a
rational coefficient times ``t^j w^m`` where ``j`` is a multi-index of
non-negative integers and ``m`` a Laurent exponent in a rank-``r`` lattice.
Truncation is by total ``t``-degree ``|j|``; the lattice exponents are
unconstrained.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

Key = tuple[tuple[int, ...], tuple[int, ...]]


class SeriesError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not supported")
    return Fraction(value)


def format_fraction(q: Fraction) -> str:
    """Canonical ``"p/q"`` text, lowest terms, ``q > 0``."""
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SeriesError(f"bad rational {text!r}") from exc


def _sort_key(key: Key):
    j, m = key
    return (sum(j), j, m)


class Series:
    """Sparse truncated series; immutable once built.

    ``nparams`` is ``l`` (number of formal parameters), ``rank`` is ``r``
    and ``order`` is the truncation order ``N``.
    """

    __slots__ = ("_terms", "nparams", "rank", "order", "_hash")

    def __init__(self, terms: Mapping[Key, object] | Iterable[tuple[Key, object]] = (),
                 *, nparams: int, rank: int, order: int):
        if order < 0:
            raise SeriesError("truncation order must be non-negative")
        self.nparams = nparams
        self.rank = rank
        self.order = order
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Key, Fraction] = {}
        for (j, m), c in items:
            j = tuple(int(x) for x in j)
            m = tuple(int(x) for x in m)
            if len(j) != nparams or len(m) != rank:
                raise SeriesError(f"term {(j, m)} does not match nparams={nparams}, rank={rank}")
            if any(x < 0 for x in j):
                raise SeriesError(f"negative t-exponent in {j}")
            if sum(j) > order:
                continue
            c = as_fraction(c)
            acc[(j, m)] = acc.get((j, m), 0) + c
        self._terms = {k: acc[k] for k in sorted(acc, key=_sort_key) if acc[k] != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, *, nparams: int, rank: int, order: int) -> Series:
        return cls((), nparams=nparams, rank=rank, order=order)

    @classmethod
    def one(cls, *, nparams: int, rank: int, order: int) -> Series:
        return cls.monomial((0,) * nparams, (0,) * rank, 1, nparams=nparams, rank=rank, order=order)

    @classmethod
    def monomial(cls, j, m, coeff=1, *, nparams: int, rank: int, order: int) -> Series:
        return cls({(tuple(j), tuple(m)): coeff}, nparams=nparams, rank=rank, order=order)

    def like(self, terms) -> Series:
        """A series in the same ambient ring as ``self``."""
        return Series(terms, nparams=self.nparams, rank=self.rank, order=self.order)

    @classmethod
    def _raw(cls, terms: dict[Key, Fraction], nparams: int, rank: int, order: int) -> Series:
        # trusted constructor: terms already normalized and truncated
        s = object.__new__(cls)
        s._terms = {k: terms[k] for k in sorted(terms, key=_sort_key)}
        s.nparams, s.rank, s.order = nparams, rank, order
        s._hash = None
        return s

    # inspection

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, j, m) -> Fraction:
        return self._terms.get((tuple(j), tuple(m)), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def valuation(self) -> int | None:
        """Lowest total t-degree present, ``None`` for zero."""
        if not self._terms:
            return None
        return min(sum(j) for j, _ in self._terms)

    def is_pure_t(self) -> bool:
        return all(not any(m) for _, m in self._terms)

    def lattice_support(self) -> set[tuple[int, ...]]:
        return {m for _, m in self._terms}

    def homogeneous_part(self, degree: int) -> Series:
        return Series._raw({k: c for k, c in self._terms.items() if sum(k[0]) == degree},
                           self.nparams, self.rank, self.order)

    def lowest_part(self) -> Series:
        v = self.valuation()
        return self if v is None else self.homogeneous_part(v)

    # ambient checks

    def _check(self, other: Series):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if (self.nparams, self.rank) != (other.nparams, other.rank):
            raise SeriesError("rank or parameter count mismatch")
        if self.order != other.order:
            raise SeriesError(f"truncation order mismatch: {self.order} vs {other.order}")

    def _coerce(self, other) -> Series:
        if isinstance(other, Series):
            self._check(other)
            return other
        c = as_fraction(other)
        return Series.monomial((0,) * self.nparams, (0,) * self.rank, c,
                               nparams=self.nparams, rank=self.rank, order=self.order)

    def truncate(self, order: int) -> Series:
        """Reduce modulo ``m^(order+1)``; may also lower the stored order."""
        return Series._raw({k: c for k, c in self._terms.items() if sum(k[0]) <= order},
                           self.nparams, self.rank, order)

    def with_order(self, order: int) -> Series:
        """Move to another truncation order (dropping terms above it)."""
        return self.truncate(order)

    # arithmetic

    def __add__(self, other) -> Series:
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Series._raw(out, self.nparams, self.rank, self.order)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series._raw({k: -c for k, c in self._terms.items()}, self.nparams, self.rank, self.order)

    def __sub__(self, other) -> Series:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Series:
        return (-self) + other

    def scale(self, c) -> Series:
        c = as_fraction(c)
        if c == 0:
            return Series._raw({}, self.nparams, self.rank, self.order)
        return Series._raw({k: c * v for k, v in self._terms.items()}, self.nparams, self.rank, self.order)

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            return self.scale(other)
        self._check(other)
        N = self.order
        out: dict[Key, Fraction] = {}
        b_terms = [(j, sum(j), m, c) for (j, m), c in other._terms.items()]
        for (j1, m1), c1 in self._terms.items():
            d1 = sum(j1)
            for j2, d2, m2, c2 in b_terms:
                if d1 + d2 > N:
                    continue
                key = (tuple(a + b for a, b in zip(j1, j2)), tuple(a + b for a, b in zip(m1, m2)))
                v = out.get(key, 0) + c1 * c2
                if v:
                    out[key] = v
                else:
                    del out[key]
        return Series._raw(out, self.nparams, self.rank, N)

    def __rmul__(self, other) -> Series:
        return self.scale(other)

    def __pow__(self, k: int) -> Series:
        if not isinstance(k, int) or k < 0:
            raise SeriesError("only non-negative integer powers are defined")
        result = Series.one(nparams=self.nparams, rank=self.rank, order=self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_lattice(self, f) -> Series:
        """Apply ``f`` to every lattice exponent (used for shifts)."""
        return Series([((j, f(m)), c) for (j, m), c in self._terms.items()],
                      nparams=self.nparams, rank=self.rank, order=self.order)

    def shift(self, m) -> Series:
        """Multiply by ``w^m``."""
        m = tuple(m)
        return Series._raw({(j, tuple(a + b for a, b in zip(mm, m))): c for (j, mm), c in self._terms.items()},
                           self.nparams, self.rank, self.order)

    # equality

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return (self.nparams, self.rank, self.order) == (other.nparams, other.rank, other.order) \
                and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nparams, self.rank, self.order, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Series({self}, order={self.order})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (j, m), c in self._terms.items():
            factors = format_t(j)
            if any(m):
                factors.append(format_w(m))
            body = " ".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c} {body}")
        return " + ".join(parts).replace("+ -", "- ")


def format_t(j) -> list[str]:
    out = []
    for i, e in enumerate(j, 1):
        if e == 1:
            out.append(f"t{i}")
        elif e:
            out.append(f"t{i}^{e}")
    return out


def format_w(m) -> str:
    return "w^(" + ",".join(str(x) for x in m) + ")"


def _require_maximal_ideal(a: Series, name: str):
    bad = [j for j, _ in a if sum(j) == 0]
    if bad:
        raise SeriesError(f"{name} needs every term in the maximal ideal (|j| >= 1)")


def exp_positive(a: Series) -> Series:
    """``sum_k a^k/k!`` for ``a`` in the maximal ideal; finite mod ``m^(N+1)``."""
    _require_maximal_ideal(a, "exp_positive")
    result = Series.one(nparams=a.nparams, rank=a.rank, order=a.order)
    power = result
    for k in range(1, a.order + 1):
        power = power * a
        if not power:
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def log_one_plus(a: Series) -> Series:
    """``log(1 + a) = sum_k (-1)^(k+1) a^k / k`` for ``a`` in the maximal ideal."""
    _require_maximal_ideal(a, "log_one_plus")
    result = a.like(())
    power = a.like({((0,) * a.nparams, (0,) * a.rank): 1})
    for k in range(1, a.order + 1):
        power = power * a
        if not power:
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result
