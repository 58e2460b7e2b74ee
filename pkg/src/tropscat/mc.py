"""Kuranishi solutions of the Maurer-Cartan equation.

Given a dgLa with homotopy data ``(H, P, iota)`` satisfying
``dH + Hd = I - iota P``, the fixed-point equation

    Phi = Pi - 1/2 H [Phi, Phi]

is solved order by order in a formal parameter ``s``, either by iteration
or by summing bracket trees (internal and outgoing edges carry ``-1/2 H``).
Both routes must agree exactly.

:class:`PolyFormDgLa` is an exactly computable instance built from
polynomial forms on the plane with values in strictly upper-triangular
matrices.  Its homotopy is radial and its projection evaluates at the origin.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Iterable

from .series import format_fraction, parse_fraction
from .trees import enumerate_trees, evaluate_tree

HALF = Fraction(1, 2)


class MCError(ValueError):
    pass


class DgLa(ABC):
    """Contract used by the solvers.

    Elements form a rational vector space under the usual operators and
    carry an order in the formal parameter.
    """

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def d(self, x): ...

    @abstractmethod
    def bracket(self, x, y): ...

    @abstractmethod
    def homotopy(self, x): ...

    @abstractmethod
    def project(self, x): ...

    @abstractmethod
    def include(self, x): ...

    @abstractmethod
    def truncate(self, x, order: int): ...

    @abstractmethod
    def valuation(self, x) -> int | None:
        """Lowest order in the formal parameter, ``None`` for zero."""

    @abstractmethod
    def degrees(self, x) -> set[int]: ...


# -- Grassmann monomials ------------------------------------------------------

def _wedge(g1: tuple[int, ...], g2: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted generator tuple of ``g1 ^ g2`` (sign 0 if they overlap)."""
    if set(g1) & set(g2):
        return 0, ()
    inversions = sum(1 for a in g1 for b in g2 if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(g1 + g2))


class MatForm:
    """Element of ``g (x) Omega[x1, x2] (x) Lambda[xi] [[s]]``.

    Keys are ``((i, j), (a, b), gens, order)``: the matrix unit ``E_ij``, the
    polynomial ``x1^a x2^b``, the sorted odd generators (``0 = dx1``,
    ``1 = dx2``, ``2.. = xi1..``) and the power of ``s``.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            c = Fraction(c)
            v = acc.get(k, 0) + c
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
        self._terms = dict(sorted(acc.items()))

    def items(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other: MatForm) -> MatForm:
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return MatForm(out)

    def __neg__(self) -> MatForm:
        return MatForm({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: MatForm) -> MatForm:
        return self + (-other)

    def __mul__(self, c) -> MatForm:
        c = Fraction(c)
        return MatForm({k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatForm):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        return f"MatForm({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for ((i, j), (a, b), gens, o), c in self._terms.items():
            factors = []
            if o:
                factors.append("s" if o == 1 else f"s^{o}")
            for name, e in (("x1", a), ("x2", b)):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            if gens:
                factors.append("^".join(generator_name(g) for g in gens))
            parts.append(f"{c} E{i}{j}" + ("" if not factors else " " + " ".join(factors)))
        return " + ".join(parts).replace("+ -", "- ")


def generator_name(g: int) -> str:
    return ("dx1", "dx2")[g] if g < 2 else f"xi{g - 1}"


def generator_index(name: str, odd_generators: int) -> int:
    if name == "dx1":
        return 0
    if name == "dx2":
        return 1
    if name.startswith("xi") and name[2:].isdigit() and 1 <= int(name[2:]) <= odd_generators:
        return int(name[2:]) + 1
    raise MCError(f"unknown form generator {name!r}")


class PolyFormDgLa(DgLa):
    """Matrix-valued polynomial forms on the plane.

    ``size`` fixes the Lie algebra of strictly upper-triangular
    ``size x size`` rational matrices (``size=3`` is step-2 nilpotent,
    ``size=2`` abelian).  ``odd_generators`` adjoins closed constant odd
    generators ``xi`` untouched by ``d`` and ``H``; they give a nonzero
    degree-2 cohomology so that the obstruction ``P[Phi, Phi]`` can be
    nonzero.  The homotopy on a form with ``p >= 1`` differentials is

        H(x^a dx_I) = 1/(|a| + p) * x^a * iota_E(dx_I),   E = x1 d/dx1 + x2 d/dx2,

    and ``H = 0`` on functions, so ``dH + Hd = I - iota P`` with ``P``
    evaluating the function part at the origin.
    """

    def __init__(self, size: int = 3, odd_generators: int = 0):
        if size < 2:
            raise MCError("matrix size must be at least 2")
        self.size = size
        self.odd_generators = odd_generators

    def zero(self) -> MatForm:
        return MatForm()

    def basis(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(1, self.size + 1) for j in range(i + 1, self.size + 1)]

    def element(self, records: Iterable) -> MatForm:
        """Build from ``(matrix (i, j), x exponent (a, b), generator names, coeff, order)``."""
        terms = []
        for mat, xexp, names, coeff, order in records:
            i, j = mat
            if not (1 <= i < j <= self.size):
                raise MCError(f"E{i}{j} is not strictly upper triangular in size {self.size}")
            gens = [generator_index(n, self.odd_generators) for n in names]
            sign, g = _wedge((), ())
            for x in gens:
                s2, g = _wedge(g, (x,))
                sign *= s2
            if sign == 0:
                continue
            if any(e < 0 for e in xexp) or order < 0:
                raise MCError("exponents and orders must be non-negative")
            terms.append((((i, j), tuple(xexp), g, order), sign * Fraction(coeff)))
        return MatForm(terms)

    def _commutator(self, A, B):
        (i, j), (k, l) = A, B
        out = []
        if j == k:
            out.append(((i, l), 1))
        if l == i:
            out.append(((k, j), -1))
        return out

    def bracket(self, x: MatForm, y: MatForm) -> MatForm:
        out: dict = {}
        ys = list(y.items())
        for (A, xa, ga, oa), ca in x.items():
            for (B, xb, gb, ob), cb in ys:
                comm = self._commutator(A, B)
                if not comm:
                    continue
                sign, g = _wedge(ga, gb)
                if not sign:
                    continue
                xe = (xa[0] + xb[0], xa[1] + xb[1])
                for C, s in comm:
                    key = (C, xe, g, oa + ob)
                    out[key] = out.get(key, 0) + s * sign * ca * cb
        return MatForm(out)

    def d(self, x: MatForm) -> MatForm:
        out: dict = {}
        for (A, (a, b), g, o), c in x.items():
            for var, e in ((0, a), (1, b)):
                if not e or var in g:
                    continue
                sign, g2 = _wedge((var,), g)
                xe = (a - 1, b) if var == 0 else (a, b - 1)
                key = (A, xe, g2, o)
                out[key] = out.get(key, 0) + sign * e * c
        return MatForm(out)

    def homotopy(self, x: MatForm) -> MatForm:
        out: dict = {}
        for (A, (a, b), g, o), c in x.items():
            p = sum(1 for v in g if v < 2)
            if p == 0:
                continue
            weight = Fraction(1, a + b + p)
            for pos, v in enumerate(g):
                if v >= 2:
                    break
                rest = g[:pos] + g[pos + 1:]
                xe = (a + 1, b) if v == 0 else (a, b + 1)
                key = (A, xe, rest, o)
                out[key] = out.get(key, 0) + (-1) ** pos * weight * c
        return MatForm(out)

    def project(self, x: MatForm) -> MatForm:
        return MatForm({k: c for k, c in x.items() if k[1] == (0, 0) and all(v >= 2 for v in k[2])})

    def include(self, x: MatForm) -> MatForm:
        return x

    def truncate(self, x: MatForm, order: int) -> MatForm:
        return MatForm({k: c for k, c in x.items() if k[3] <= order})

    def valuation(self, x: MatForm) -> int | None:
        return min((k[3] for k, _ in x.items()), default=None)

    def degrees(self, x: MatForm) -> set[int]:
        return {len(k[2]) for k, _ in x.items()}

    # file records

    def to_records(self, x: MatForm) -> list[dict]:
        return [{"matrix": list(A), "x": list(xe), "forms": [generator_name(v) for v in g],
                 "coeff": format_fraction(c), "order": o}
                for (A, xe, g, o), c in x.items()]

    def from_records(self, records) -> MatForm:
        return self.element((tuple(r["matrix"]), tuple(r["x"]), r.get("forms", []),
                             parse_fraction(r["coeff"]), int(r["order"])) for r in records)


def _check_input(L: DgLa, Pi, N: int):
    if N < 1:
        raise MCError("order must be at least 1")
    v = L.valuation(Pi)
    if v is not None and v < 1:
        raise MCError("Pi must have no order-0 part")
    if L.degrees(Pi) - {1}:
        raise MCError(f"Pi must have degree 1, found degrees {sorted(L.degrees(Pi))}")


def solve_fixed_point(L: DgLa, Pi, N: int, return_iterations: bool = False):
    """Iterate ``Phi <- Pi - 1/2 H[Phi, Phi]`` modulo order ``N+1``."""
    _check_input(L, Pi, N)
    Pi = L.truncate(Pi, N)
    phi = Pi
    for it in range(1, N + 1):
        nxt = Pi - L.homotopy(L.truncate(L.bracket(phi, phi), N)) * HALF
        if nxt == phi:
            return (phi, it) if return_iterations else phi
        phi = nxt
    return (phi, N + 1) if return_iterations else phi


def tree_operation(L: DgLa, tree, inputs, N: int):
    """``l_{k,T}``: brackets at vertices, ``-1/2 H`` on internal and root edges."""

    def minus_half_h(value, _label):
        return L.homotopy(value) * -HALF

    def vertex(a, b):
        return L.truncate(L.bracket(a, b), N)

    if tree.is_leaf:
        return inputs[0]
    return evaluate_tree(tree, inputs, vertex, edge_op=minus_half_h, root_op=minus_half_h)


def solve_tree_sum(L: DgLa, Pi, N: int):
    """``Phi = sum_k sum_T l_{k,T}(Pi, ..., Pi)`` with ``l_1`` the identity."""
    _check_input(L, Pi, N)
    Pi = L.truncate(Pi, N)
    phi = Pi
    for k in range(2, N + 1):
        for t in enumerate_trees(k):
            phi = phi + tree_operation(L, t, [Pi] * k, N)
    return phi


def mc_residual(L: DgLa, phi, order: int | None = None):
    """``d Phi + 1/2 [Phi, Phi]``, optionally modulo order ``order+1``."""
    r = L.d(phi) + L.bracket(phi, phi) * HALF
    return r if order is None else L.truncate(r, order)


def obstruction(L: DgLa, phi, order: int | None = None):
    """``P[Phi, Phi]``, which vanishes exactly when a fixed point solves MC."""
    r = L.project(L.bracket(phi, phi))
    return r if order is None else L.truncate(r, order)
