"""Finite permutations of {1..n} acting on the right.

``g * h`` (equivalently ``compose(g, h)``) applies ``g`` first and then ``h``,
so ``(g * h)(i) == h(g(i))``.  Conjugation follows the same convention:
``g ** h == ~h * g * h``.

Points are 1-based at every interface.  The image tuple is stored 0-based.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence

from .errors import DegreeMismatch, PointOutOfRange, RepeatedPoint

Cycle = tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Perm:
    """Immutable permutation of {1..degree}."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int]):
        n = len(images)
        if n < 1:
            raise ValueError("degree must be at least 1")
        img = tuple(int(i) - 1 for i in images)
        seen = [False] * n
        for v in img:
            if not 0 <= v < n:
                raise PointOutOfRange(f"image {v + 1} outside 1..{n}")
            if seen[v]:
                raise RepeatedPoint(f"image {v + 1} occurs twice")
            seen[v] = True
        self._img = img
        self._hash = None

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> Perm:
        # trusted 0-based constructor, no validation
        g = object.__new__(cls)
        g._img = img
        g._hash = None
        return g

    @classmethod
    def identity(cls, degree: int) -> Perm:
        if degree < 1:
            raise ValueError("degree must be at least 1")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Perm:
        if degree < 1:
            raise ValueError("degree must be at least 1")
        img = list(range(degree))
        used = set()
        for cyc in cycles:
            cyc = [int(c) for c in cyc]
            for pt in cyc:
                if not 1 <= pt <= degree:
                    raise PointOutOfRange(f"point {pt} outside 1..{degree}")
                if pt in used:
                    raise RepeatedPoint(f"point {pt} occurs twice")
                used.add(pt)
            for i, pt in enumerate(cyc):
                img[pt - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls._raw(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Perm:
        """Parse cycle notation such as ``"(1,2,3)(4,5)"`` or ``"()"``.

        Points inside a cycle may be separated by commas or whitespace.  The
        degree defaults to the largest point mentioned (at least 1).
        """
        stripped = text.strip()
        if _CYCLE_RE.sub("", stripped).strip():
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            body = body.strip()
            if body:
                cycles.append([int(t) for t in re.split(r"[,\s]+", body) if t])
        if degree is None:
            degree = max((max(c) for c in cycles if c), default=1)
        return cls.from_cycles(cycles, degree)

    # -- basic accessors -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self._img)

    def __call__(self, point: int) -> int:
        if not 1 <= point <= len(self._img):
            raise PointOutOfRange(f"point {point} outside 1..{len(self._img)}")
        return self._img[point - 1] + 1

    apply = __call__

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self._img == other._img

    def __lt__(self, other: Perm) -> bool:
        return self._img < other._img

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._img)
        return self._hash

    def __repr__(self):
        return f"Perm.parse({str(self)!r}, {self.degree})"

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)

    # -- arithmetic ------------------------------------------------------

    def __mul__(self, other: Perm) -> Perm:
        if not isinstance(other, Perm):
            return NotImplemented
        if len(self._img) != len(other._img):
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        o = other._img
        return Perm._raw(tuple([o[i] for i in self._img]))

    def inverse(self) -> Perm:
        inv = [0] * len(self._img)
        for i, v in enumerate(self._img):
            inv[v] = i
        return Perm._raw(tuple(inv))

    __invert__ = inverse

    def __pow__(self, n):
        if isinstance(n, Perm):
            return n.inverse() * self * n
        n = int(n)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = Perm.identity(self.degree)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure -------------------------------------------------------

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self._img))

    def cycles(self) -> list[Cycle]:
        """Nontrivial cycles, each starting at its minimum, sorted by minimum."""
        img = self._img
        seen = [False] * len(img)
        out = []
        for start in range(len(img)):
            if seen[start] or img[start] == start:
                continue
            cyc = [start + 1]
            seen[start] = True
            j = img[start]
            while j != start:
                seen[j] = True
                cyc.append(j + 1)
                j = img[j]
            out.append(tuple(cyc))
        return out

    def cycle_of(self, point: int) -> Cycle:
        """The cycle through ``point`` starting at ``point`` (length 1 if fixed)."""
        if not 1 <= point <= len(self._img):
            raise PointOutOfRange(f"point {point} outside 1..{len(self._img)}")
        cyc = [point]
        j = self._img[point - 1] + 1
        while j != point:
            cyc.append(j)
            j = self._img[j - 1] + 1
        return tuple(cyc)

    def cycle_type(self) -> tuple[int, ...]:
        """Lengths of all cycles including fixed points, descending."""
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (self.degree - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def sign(self) -> int:
        transpositions = sum(len(c) - 1 for c in self.cycles())
        return -1 if transpositions % 2 else 1

    def parity(self) -> str:
        return "even" if self.sign() == 1 else "odd"

    def is_even(self) -> bool:
        return self.sign() == 1

    def fixed_points(self) -> frozenset[int]:
        return frozenset(i + 1 for i, v in enumerate(self._img) if i == v)

    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, v in enumerate(self._img) if i != v)

    # -- relabelling -----------------------------------------------------

    def extend(self, degree: int) -> Perm:
        """Same permutation on a larger domain, fixing the new points."""
        if degree < self.degree:
            raise DegreeMismatch(f"cannot shrink degree {self.degree} to {degree}")
        return Perm._raw(self._img + tuple(range(self.degree, degree)))

    def shift(self, offset: int, degree: int | None = None) -> Perm:
        """Relabel point i as i + offset; points 1..offset become fixed."""
        if offset < 0:
            raise ValueError("offset must be nonnegative")
        n = self.degree + offset if degree is None else degree
        if n < self.degree + offset:
            raise DegreeMismatch(f"degree {n} too small for offset {offset}")
        img = list(range(n))
        for i, v in enumerate(self._img):
            img[i + offset] = v + offset
        return Perm._raw(tuple(img))

    def restrict(self, points: Sequence[int]) -> Perm:
        """Action on an invariant subset, relabelled 1..len(points) in the given order."""
        index = {pt: i for i, pt in enumerate(points)}
        try:
            return Perm._raw(tuple(index[self._img[pt - 1] + 1] for pt in points))
        except KeyError:
            raise ValueError("points are not an invariant subset") from None


def perm_from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> Perm:
    return Perm.from_cycles(cycles, degree)


def compose(g: Perm, h: Perm) -> Perm:
    """Apply ``g`` first, then ``h``."""
    return g * h


def inverse(g: Perm) -> Perm:
    return g.inverse()


def power(g: Perm, n: int) -> Perm:
    return g ** n


def apply(g: Perm, point: int) -> int:
    return g(point)


def cycle_decomposition(g: Perm) -> list[Cycle]:
    return g.cycles()


def order(g: Perm) -> int:
    return g.order()


def parity(g: Perm) -> str:
    return g.parity()


def fixed_points(g: Perm) -> frozenset[int]:
    return g.fixed_points()


def format_cycles(cycles: Iterable[Sequence[int]]) -> str:
    text = "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)
    return text or "()"
