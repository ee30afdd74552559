"""Pole-code schemes over n-bit Hamming space.

A scheme reserves two codewords (the poles) for logic 0 and logic 1.  Every
other codeword is a *faulty code* and is attracted to whichever pole is
strictly nearer in Hamming distance; codewords equidistant from both poles
form Class_H and can be detected but not corrected.

Schemes are written ``(p0,p1)_n``, e.g. ``(2,5)_3``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

MAX_WIDTH = 16
MAX_ENUM_WIDTH = 8


class ClassLabel(enum.Enum):
    CLASS0 = "Class_0"
    CLASS1 = "Class_1"
    CLASS_H = "Class_H"


class HPolicy(enum.Enum):
    """How a Class_H codeword is read as a logic value."""

    AS_ZERO = "AsZero"
    AS_ONE = "AsOne"
    STRICT = "Strict"

    @classmethod
    def parse(cls, text: str) -> "HPolicy":
        for member in cls:
            if text.lower() in (member.value.lower(), member.name.lower()):
                return member
        raise ValueError(f"unknown Class_H policy {text!r}")


class UncorrectableCodeError(ValueError):
    """A Class_H codeword was met under the strict policy."""


@dataclass(frozen=True)
class Codeword:
    value: int
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"codeword width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"codeword {self.value} out of range for width {self.width}")

    def __int__(self):
        return self.value

    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")


def hamming_distance(x, y) -> int:
    """Number of differing bits between two codewords.

    Plain ints are accepted; two :class:`Codeword` objects must share a width.
    """
    if isinstance(x, Codeword) and isinstance(y, Codeword) and x.width != y.width:
        raise ValueError(f"width mismatch: {x.width} vs {y.width}")
    return (int(x) ^ int(y)).bit_count()


@dataclass(frozen=True)
class SchemeQuality:
    pole_distance: int
    class_h_empty: bool
    max_correctable_distance: int


@dataclass(frozen=True)
class CodingScheme:
    width: int
    pole0: int
    pole1: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"scheme width must be in [1, {MAX_WIDTH}], got {self.width}")
        for pole in (self.pole0, self.pole1):
            if not 0 <= pole < self.size:
                raise ValueError(f"pole {pole} out of range for width {self.width}")
        if self.pole0 == self.pole1:
            raise ValueError(f"poles must differ, both are {self.pole0}")

    @property
    def size(self) -> int:
        return 1 << self.width

    @property
    def notation(self) -> str:
        return f"({self.pole0},{self.pole1})_{self.width}"

    def __str__(self):
        return self.notation

    def pole(self, logic: int) -> int:
        return self.pole1 if logic else self.pole0

    @cached_property
    def partition(self) -> tuple[ClassLabel, ...]:
        labels = []
        for c in range(self.size):
            d0 = (c ^ self.pole0).bit_count()
            d1 = (c ^ self.pole1).bit_count()
            if d0 < d1:
                labels.append(ClassLabel.CLASS0)
            elif d1 < d0:
                labels.append(ClassLabel.CLASS1)
            else:
                labels.append(ClassLabel.CLASS_H)
        return tuple(labels)

    @cached_property
    def transition(self) -> tuple[int | None, ...]:
        """Nearest pole for each codeword; ``None`` marks Class_H."""
        target = {ClassLabel.CLASS0: self.pole0, ClassLabel.CLASS1: self.pole1, ClassLabel.CLASS_H: None}
        return tuple(target[label] for label in self.partition)

    def members(self, label: ClassLabel) -> tuple[int, ...]:
        return tuple(c for c, lab in enumerate(self.partition) if lab is label)

    @property
    def class0(self) -> tuple[int, ...]:
        return self.members(ClassLabel.CLASS0)

    @property
    def class1(self) -> tuple[int, ...]:
        return self.members(ClassLabel.CLASS1)

    @property
    def class_h(self) -> tuple[int, ...]:
        return self.members(ClassLabel.CLASS_H)

    def _value(self, c) -> int:
        if isinstance(c, Codeword):
            if c.width != self.width:
                raise ValueError(f"codeword width {c.width} does not match scheme {self.notation}")
            return c.value
        c = int(c)
        if not 0 <= c < self.size:
            raise ValueError(f"codeword {c} out of range for scheme {self.notation}")
        return c

    def classify(self, c) -> ClassLabel:
        return self.partition[self._value(c)]

    def decode(self, c, h_policy: HPolicy = HPolicy.AS_ZERO) -> int:
        """Logic value carried by codeword ``c``."""
        label = self.classify(c)
        if label is ClassLabel.CLASS0:
            return 0
        if label is ClassLabel.CLASS1:
            return 1
        if h_policy is HPolicy.STRICT:
            raise UncorrectableCodeError(
                f"codeword {self._value(c)} is equidistant from both poles of {self.notation}"
            )
        return 1 if h_policy is HPolicy.AS_ONE else 0

    def correct(self, c, h_policy: HPolicy = HPolicy.AS_ZERO) -> int:
        return self.pole(self.decode(c, h_policy))

    def decode_table(self, h_policy: HPolicy = HPolicy.AS_ZERO) -> tuple[int, ...]:
        """Logic value of every codeword, raising under STRICT if Class_H is non-empty."""
        return tuple(self.decode(c, h_policy) for c in range(self.size))


_NOTATION = re.compile(r"^\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*_?\s*(\d+)\s*$")
_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


def parse_scheme(text: str) -> CodingScheme:
    """Parse ``(p0,p1)_n``; subscript digits (``(2,5)₃``) are also accepted."""
    m = _NOTATION.match(text.translate(_SUBSCRIPTS))
    if not m:
        raise ValueError(f"bad scheme notation {text!r}, expected (p0,p1)_n")
    p0, p1, n = (int(g) for g in m.groups())
    return build_scheme(n, p0, p1)


def build_scheme(n: int, pole0: int, pole1: int) -> CodingScheme:
    return CodingScheme(n, pole0, pole1)


CONVENTIONAL = CodingScheme(1, 0, 1)


def classify(scheme: CodingScheme, c) -> ClassLabel:
    return scheme.classify(c)


def correct(scheme: CodingScheme, c, h_policy: HPolicy = HPolicy.AS_ZERO) -> int:
    return scheme.correct(c, h_policy)


def enumerate_schemes(n: int) -> list[CodingScheme]:
    """All ordered pole pairs of the n-bit space, pole0 then pole1 ascending."""
    if not 1 <= n <= MAX_ENUM_WIDTH:
        raise ValueError(f"full enumeration supports 1 <= n <= {MAX_ENUM_WIDTH}, got {n}")
    size = 1 << n
    return [CodingScheme(n, p0, p1) for p0 in range(size) for p1 in range(size) if p0 != p1]


def scheme_quality(scheme: CodingScheme) -> SchemeQuality:
    # Correctable distance is the farthest any class member sits from its own pole.
    reach = 0
    for c, target in enumerate(scheme.transition):
        if target is not None:
            reach = max(reach, (c ^ target).bit_count())
    return SchemeQuality(
        pole_distance=(scheme.pole0 ^ scheme.pole1).bit_count(),
        class_h_empty=ClassLabel.CLASS_H not in scheme.partition,
        max_correctable_distance=reach,
    )


def rank_schemes(n: int) -> list[tuple[CodingScheme, SchemeQuality]]:
    """Schemes best-first: empty Class_H, then pole distance, then correction reach."""
    rated = [(s, scheme_quality(s)) for s in enumerate_schemes(n)]
    order = sorted(
        range(len(rated)),
        key=lambda i: (
            not rated[i][1].class_h_empty,
            -rated[i][1].pole_distance,
            -rated[i][1].max_correctable_distance,
            i,
        ),
    )
    return [rated[i] for i in order]


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite point set with a symmetric distance that vanishes on the diagonal."""

    points: tuple[Hashable, ...]
    distance: Callable[[Hashable, Hashable], float] = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")
        for i, x in enumerate(self.points):
            if self.distance(x, x) != 0:
                raise ValueError(f"distance({x!r}, {x!r}) must be 0")
            for y in self.points[i + 1:]:
                dxy = self.distance(x, y)
                if dxy < 0 or dxy != self.distance(y, x):
                    raise ValueError(f"distance between {x!r} and {y!r} is negative or asymmetric")

    def __contains__(self, x):
        return x in self.points

    @classmethod
    def from_matrix(cls, points: Sequence[Hashable], matrix: Sequence[Sequence[float]]):
        index = {p: i for i, p in enumerate(points)}
        return cls(tuple(points), lambda x, y: matrix[index[x]][index[y]])

    @classmethod
    def from_pairs(cls, points: Iterable[Hashable], pairs: dict):
        """Build from ``{(x, y): d}``; missing symmetric entries are mirrored."""
        table = {}
        for (x, y), d in pairs.items():
            table[(x, y)] = d
            table.setdefault((y, x), d)
        return cls(tuple(points), lambda x, y: 0 if x == y else table[(x, y)])

    @classmethod
    def hamming(cls, n: int):
        return cls(tuple(range(1 << n)), hamming_distance)


def generalized_decode(space: FiniteMetricSpace, pole0, pole1, x, tie=None):
    """Return the pole nearer to ``x`` under the space's metric.

    Ties go to ``tie`` (``pole0`` when unset).
    """
    for p in (pole0, pole1, x):
        if p not in space:
            raise ValueError(f"{p!r} is not a point of the space")
    d0 = space.distance(x, pole0)
    d1 = space.distance(x, pole1)
    if d0 < d1:
        return pole0
    if d1 < d0:
        return pole1
    return pole0 if tie is None else tie
