"""Scattering diagrams in a rank-2 base and their consistent completion.

Every wall passes through the origin.  A wall with primitive mode ``m``
carries a log factor built from monomials ``w^(-k m)`` and is supported on
the ray ``R>=0 m`` (or the line ``R m``).  Lines are split into two rays that
share one coorientation and one factor.

Crossing convention: the standard loop runs anticlockwise around the origin.
Crossing a ray with direction ``d`` the tangent is ``rotate_ccw(d)``; the wall
factor enters the product with exponent ``+1`` when the tangent pairs
negatively with the wall's coorientation ``nu`` and ``-1`` otherwise.  Walls
created by :func:`complete` get ``nu = rotate_ccw(d)``, so the loop crosses
them with exponent ``-1`` and a new wall's factor equals the defect it
cancels.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from .lie import LieElement, bch, bracket, primitive, rotate_ccw
from .series import Series, log_one_plus

log = logging.getLogger(__name__)


class DiagramError(ValueError):
    """Malformed wall or diagram, or an unusable loop."""


class ConeViolation(ArithmeticError):
    """A defect term points outside the open cone spanned by the seed modes."""


class MonodromyError(ArithmeticError):
    """The path-ordered product failed to vanish after a completion stage."""


def cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v) -> int:
    return u[0] * v[0] + u[1] * v[1]


def _is_primitive(v) -> bool:
    return any(v) and primitive(v) == tuple(v)


@dataclass(frozen=True)
class Support:
    kind: str
    direction: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))
        if self.kind not in ("ray", "line"):
            raise DiagramError(f"support kind must be 'ray' or 'line', got {self.kind!r}")
        if len(self.direction) != 2 or not _is_primitive(self.direction):
            raise DiagramError(f"support direction {self.direction} must be a primitive vector in Z^2")

    def rays(self) -> list[tuple[int, int]]:
        if self.kind == "ray":
            return [self.direction]
        d = self.direction
        return [d, (-d[0], -d[1])]


@dataclass(frozen=True)
class Wall:
    mode: tuple[int, int]
    support: Support
    log_factor: LieElement
    coorientation: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "mode", tuple(int(x) for x in self.mode))
        object.__setattr__(self, "coorientation", tuple(int(x) for x in self.coorientation))
        m = self.mode
        if len(m) != 2 or not _is_primitive(m):
            raise DiagramError(f"wall mode {m} must be primitive in Z^2")
        if self.log_factor.rank != 2:
            raise DiagramError("wall factors must live in rank 2")
        if cross(self.support.direction, m) != 0:
            raise DiagramError(f"support {self.support.direction} is not parallel to mode {m}")
        nu = self.coorientation
        if len(nu) != 2 or not _is_primitive(nu) or _dot(nu, self.support.direction) != 0:
            raise DiagramError(f"coorientation {nu} must be primitive and normal to the support")
        for mono in self.log_factor.monomials():
            if cross(mono, m) != 0 or _dot(mono, m) >= 0:
                raise DiagramError(f"monomial {mono} is not a negative multiple of mode {m}")
        if not self.log_factor.in_maximal_ideal():
            raise DiagramError("wall factor must have all coefficients in the maximal ideal")

    @classmethod
    def ray(cls, mode, log_factor: LieElement) -> Wall:
        """A completion-style ray wall ``R>=0 mode`` with ``nu = rotate_ccw(mode)``."""
        mode = tuple(mode)
        return cls(mode, Support("ray", mode), log_factor, rotate_ccw(mode))

    @classmethod
    def line(cls, mode, log_factor: LieElement, coorientation=None) -> Wall:
        mode = tuple(mode)
        nu = rotate_ccw(mode) if coorientation is None else tuple(coorientation)
        return cls(mode, Support("line", mode), log_factor, nu)

    def truncate(self, order: int) -> Wall:
        return replace(self, log_factor=self.log_factor.truncate(order))


@dataclass(frozen=True)
class Diagram:
    walls: tuple[Wall, ...]
    params: int
    max_order: int
    rank: int = 2

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        if self.rank != 2:
            raise DiagramError("only rank-2 bases are supported")
        if self.max_order < 1:
            raise DiagramError("max_order must be at least 1")
        for w in self.walls:
            f = w.log_factor
            if (f.nparams, f.rank, f.order) != (self.params, self.rank, self.max_order):
                raise DiagramError("wall factor ambient does not match the diagram")

    @classmethod
    def empty(cls, params: int, max_order: int) -> Diagram:
        return cls((), params, max_order)

    def with_order(self, order: int) -> Diagram:
        return Diagram(tuple(w.truncate(order) for w in self.walls), self.params, order, self.rank)

    def add(self, *walls: Wall) -> Diagram:
        return replace(self, walls=self.walls + tuple(walls))

    def zero_element(self) -> LieElement:
        return LieElement.zero(nparams=self.params, rank=self.rank, order=self.max_order)

    def ray_directions(self) -> list[tuple[int, int]]:
        seen = []
        for w in self.walls:
            for r in w.support.rays():
                if r not in seen:
                    seen.append(r)
        return seen


@dataclass(frozen=True)
class Loop:
    """Anticlockwise loop around the origin starting on ``start_ray``."""

    start_ray: tuple[int, int] = field(default=(-1, -1))

    def __post_init__(self):
        object.__setattr__(self, "start_ray", tuple(int(x) for x in self.start_ray))
        if len(self.start_ray) != 2 or not any(self.start_ray):
            raise DiagramError("start ray must be a nonzero vector in Z^2")


def crossing_sign(ray, coorientation) -> int:
    tangent = rotate_ccw(ray)
    return 1 if _dot(tangent, coorientation) < 0 else -1


def _angle_key(start, v):
    # exact angular position of v measured anticlockwise from start
    c = cross(start, v)
    half = 0 if c > 0 or (c == 0 and _dot(start, v) > 0) else 1
    return half, v


class _AngleOrder:
    __slots__ = ("half", "v")

    def __init__(self, start, v):
        self.half, self.v = _angle_key(start, v)

    def __lt__(self, other):
        if self.half != other.half:
            return self.half < other.half
        return cross(self.v, other.v) > 0

    def __eq__(self, other):
        return self.half == other.half and cross(self.v, other.v) == 0


def crossings(d: Diagram, loop: Loop) -> list[tuple[int, int, tuple[int, int]]]:
    """``(wall index, sign, ray direction)`` in the order the loop meets them."""
    s = loop.start_ray
    rays = []
    for i, w in enumerate(d.walls):
        for r in w.support.rays():
            if cross(s, r) == 0 and _dot(s, r) > 0:
                raise DiagramError(f"start ray {s} lies on the support of wall {i}")
            rays.append((_AngleOrder(s, r), w.mode, i, r))
    rays.sort(key=lambda t: t[0])
    # walls sharing a direction: canonical order by mode, then index
    out = []
    k = 0
    while k < len(rays):
        group = [rays[k]]
        while k + 1 < len(rays) and rays[k + 1][0] == rays[k][0]:
            k += 1
            group.append(rays[k])
        group.sort(key=lambda t: (t[1], t[2]))
        for _, _, i, r in group:
            out.append((i, crossing_sign(r, d.walls[i].coorientation), r))
        k += 1
    return out


def crossing_sequence(d: Diagram, loop: Loop | None = None) -> list[tuple[int, int]]:
    loop = loop or standard_loop(d)
    return [(i, sign) for i, sign, _ in crossings(d, loop)]


def path_ordered_product(d: Diagram, loop: Loop | None = None, order: int | None = None) -> LieElement:
    """Log of ``Theta_r ... Theta_1`` along the loop, modulo ``m^(order+1)``."""
    loop = loop or standard_loop(d)
    order = d.max_order if order is None else order
    acc = LieElement.zero(nparams=d.params, rank=d.rank, order=order)
    for i, sign, _ in crossings(d, loop):
        f = d.walls[i].log_factor.truncate(order)
        if not f:
            continue
        acc = bch(f if sign > 0 else -f, acc)
    return acc


def sector_start_rays(d: Diagram) -> list[tuple[int, int]]:
    """One start ray strictly inside each sector cut out by the supports."""
    dirs = d.ray_directions()
    if not dirs:
        return [(1, 0)]
    ref = (1, 0) if all(cross((1, 0), r) != 0 for r in dirs) else (1, 2)
    while any(cross(ref, r) == 0 for r in dirs):
        ref = (ref[0] + 1, ref[1] + 3)
    distinct = []
    for r in sorted(dirs, key=lambda v: _AngleOrder(ref, v)):
        if not distinct or not (_AngleOrder(ref, r) == _AngleOrder(ref, distinct[-1])):
            distinct.append(r)
    if len(distinct) == 1:
        return [primitive(rotate_ccw(distinct[0]))]
    starts = []
    for u, v in zip(distinct, distinct[1:] + distinct[:1]):
        c = cross(u, v)
        if c > 0:
            mid = (u[0] + v[0], u[1] + v[1])
        elif c == 0:
            mid = rotate_ccw(u)
        else:
            mid = (-u[0] - v[0], -u[1] - v[1])
        starts.append(primitive(mid))
    return starts


def _seed_lines(d: Diagram) -> list[int]:
    return [i for i, w in enumerate(d.walls) if w.support.kind == "line"]


def standard_loop(d: Diagram) -> Loop:
    """The default loop: starts opposite the seed cone when there is one."""
    lines = _seed_lines(d)
    dirs = d.ray_directions()
    if len(lines) == 2:
        m1, m2 = d.walls[lines[0]].mode, d.walls[lines[1]].mode
        if cross(m1, m2) != 0:
            s = primitive((-m1[0] - m2[0], -m1[1] - m2[1]))
            if all(cross(s, r) != 0 or _dot(s, r) < 0 for r in dirs):
                return Loop(s)
    return Loop(sector_start_rays(d)[0])


def minimalize(d: Diagram) -> Diagram:
    """Drop trivial walls and merge walls sharing support and mode."""
    merged: list[Wall] = []
    index: dict = {}
    for w in d.walls:
        key = (w.support, w.mode)
        if key in index:
            k = index[key]
            prev = merged[k]
            f = w.log_factor if prev.coorientation == w.coorientation else -w.log_factor
            merged[k] = replace(prev, log_factor=prev.log_factor + f)
        else:
            index[key] = len(merged)
            merged.append(w)
    return replace(d, walls=tuple(w for w in merged if w.log_factor))


def is_consistent(d: Diagram, loop: Loop | None = None) -> bool:
    """Monodromy-free check around the origin.

    Uses the standard loop and one loop starting in a different sector; the
    two answers must agree, since consistency does not depend on the base
    point.
    """
    first = loop or standard_loop(d)
    answer = not path_ordered_product(d, first)
    others = [s for s in sector_start_rays(d) if cross(s, first.start_ray) != 0 or _dot(s, first.start_ray) < 0]
    if others:
        second = not path_ordered_product(d, Loop(others[0]))
        if second != answer:
            raise MonodromyError("consistency depends on the base point of the loop")
    return answer


def cone_coordinates(v, m1, m2) -> tuple[Fraction, Fraction]:
    """``(alpha, beta)`` with ``v = alpha m1 + beta m2``."""
    det = cross(m1, m2)
    if det == 0:
        raise DiagramError("seed modes are parallel")
    return Fraction(cross(v, m2), det), Fraction(cross(m1, v), det)


def in_open_cone(v, m1, m2, integral: bool = False) -> bool:
    a, b = cone_coordinates(v, m1, m2)
    if integral and (a.denominator != 1 or b.denominator != 1):
        return False
    return a > 0 and b > 0


def _check_seed(d: Diagram, lines: list[int]):
    if len(lines) > 2:
        raise DiagramError("completion accepts at most two seed lines")
    used = []
    for i in lines:
        w = d.walls[i]
        params = set()
        for (_, j), _v in w.log_factor.raw_items():
            params |= {p for p, e in enumerate(j) if e}
        if len(params) > 1:
            raise DiagramError(f"seed wall {i} involves more than one formal parameter")
        used.append(params)
    if len(lines) == 2:
        m1, m2 = (d.walls[i].mode for i in lines)
        if cross(m1, m2) == 0:
            raise DiagramError("seed walls must be non-parallel")
        if used[0] and used[0] == used[1]:
            raise DiagramError("seed walls must use distinct formal parameters")


def decompose_defect(defect: LieElement) -> dict[tuple[int, int], LieElement]:
    """Group terms by the primitive direction of ``-monomial``."""
    groups: dict = {}
    for mono in defect.monomials():
        a = primitive((-mono[0], -mono[1]))
        groups.setdefault(a, set()).add(mono)
    return {a: defect.restrict(lambda m, ms=ms: m in ms) for a, ms in sorted(groups.items())}


def complete(d: Diagram, order: int | None = None, loop: Loop | None = None,
             check_centrality: bool = False) -> Diagram:
    """Order-by-order completion to a monodromy-free diagram.

    At stage ``k`` the path-ordered product ``D_k`` vanishes modulo ``m^k``
    and is central modulo ``m^(k+1)``.  Each group of ``D_k`` sharing a
    primitive direction ``a`` becomes a new ray wall on ``R>=0 a`` whose
    factor cancels it.  Raises :class:`ConeViolation` if a defect points
    outside the open cone of the seed modes and :class:`MonodromyError` if a
    stage fails to close.
    """
    N = d.max_order if order is None else order
    if N != d.max_order:
        d = d.with_order(N)
    lines = _seed_lines(d)
    _check_seed(d, lines)
    seed_modes = [d.walls[i].mode for i in lines]
    d = minimalize(d)
    loop = loop or standard_loop(d)
    for k in range(1, N + 1):
        defect = path_ordered_product(d, loop, order=k)
        if not defect:
            continue
        low = defect.valuation()
        if low < k:
            raise MonodromyError(f"stage {k}: product nonzero at order {low}")
        if check_centrality:
            _assert_central(defect, d, k)
        if len(seed_modes) != 2:
            raise ConeViolation(f"stage {k}: nonzero defect without a pair of seed walls")
        new_walls = []
        for a, part in decompose_defect(defect).items():
            for mono in part.monomials():
                if not in_open_cone((-mono[0], -mono[1]), *seed_modes, integral=True):
                    raise ConeViolation(
                        f"stage {k}: defect monomial {mono} lies outside the open cone of {seed_modes}")
            probe = Wall.ray(a, part.with_order(N))
            sign = crossing_sign(a, probe.coorientation)
            factor = -part.with_order(N) if sign > 0 else part.with_order(N)
            new_walls.append(replace(probe, log_factor=factor))
            log.debug("stage %d: wall on %s with factor %s", k, a, factor)
        d = minimalize(d.add(*new_walls))
        if not _stable_start(d, loop):
            loop = standard_loop(d)
        residual = path_ordered_product(d, loop, order=k)
        if residual:
            raise MonodromyError(f"stage {k}: product still nonzero after insertion: {residual}")
    return minimalize(d)


def _stable_start(d: Diagram, loop: Loop) -> bool:
    s = loop.start_ray
    return all(cross(s, r) != 0 or _dot(s, r) < 0 for r in d.ray_directions())


def _assert_central(defect: LieElement, d: Diagram, k: int):
    lifted = defect.with_order(k)
    for w in d.walls:
        f = w.log_factor.truncate(k)
        if f and bracket(lifted, f):
            raise MonodromyError(f"stage {k}: defect is not central modulo m^{k + 1}")


def seed_diagram(m1, m2, f1: LieElement, f2: LieElement, coorientations=None) -> Diagram:
    """Two seed lines through the origin with the given log factors."""
    nu1, nu2 = coorientations or (None, None)
    walls = (Wall.line(m1, f1, nu1), Wall.line(m2, f2, nu2))
    return Diagram(walls, f1.nparams, f1.order)


def log_seed(order: int, multiplicities=(1, 1), m1=(1, 0), m2=(0, 1)) -> Diagram:
    """Seed lines with factors ``l_i log(1 + t_i w^(-m_i))`` on ``R m_i``.

    ``multiplicities=(2, 2)`` is the example with new walls at (1,1), (1,2),
    (2,1), ...; ``(1, 1)`` gives the pentagon.
    """
    factors = []
    for i, (m, mult) in enumerate(((m1, multiplicities[0]), (m2, multiplicities[1]))):
        j = tuple(int(p == i) for p in range(2))
        u = Series({(j, (-m[0], -m[1])): 1}, nparams=2, rank=2, order=order)
        factors.append(LieElement.from_series(log_one_plus(u).scale(mult), rotate_ccw(m)))
    return seed_diagram(m1, m2, *factors)


def new_walls(completed: Diagram, seed: Diagram) -> list[Wall]:
    """Walls of ``completed`` that are not seed walls."""
    seed_keys = {(w.support, w.mode) for w in seed.walls}
    return [w for w in completed.walls if (w.support, w.mode) not in seed_keys]


__all__ = [
    "ConeViolation", "Diagram", "DiagramError", "Loop", "MonodromyError", "Support", "Wall",
    "complete", "cone_coordinates", "crossing_sequence", "crossing_sign", "crossings",
    "decompose_defect", "in_open_cone", "is_consistent", "log_seed", "minimalize", "new_walls",
    "path_ordered_product", "sector_start_rays", "seed_diagram", "standard_loop",
]
