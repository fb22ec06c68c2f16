"""Ground sets, subset masks and the set-function abstraction.

Subsets are stored as Python integers used as bit vectors (bit ``i`` set
means element ``i`` belongs to the subset). Python integers are arbitrary
precision and word-packed, so union/intersection/difference cost O(n/64).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Union

__all__ = [
    "GroundSet",
    "SubsetMask",
    "Props",
    "SetFunction",
    "ShiftedFunction",
    "ScaledFunction",
    "CurvatureError",
    "as_bits",
    "iter_bits",
    "marginal_gain",
    "curvature",
]

MAX_N = 1 << 20


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class GroundSet:
    """The ground set ``{0, ..., n-1}``."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ground set size must be a positive integer, got {self.n!r}")
        if self.n > MAX_N:
            raise ValueError(f"ground set size {self.n} exceeds the supported maximum {MAX_N}")

    @property
    def full_bits(self) -> int:
        return (1 << self.n) - 1

    def empty(self) -> "SubsetMask":
        return SubsetMask(self.n, 0)

    def full(self) -> "SubsetMask":
        return SubsetMask(self.n, self.full_bits)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(range(self.n))


class SubsetMask:
    """A subset of ``{0, ..., n-1}`` backed by an integer bit vector.

    Masks are immutable and hashable. Set algebra is only defined between
    masks over the same ground set size.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if bits < 0 or bits >> n:
            raise ValueError(f"bits {bits:#x} do not fit a ground set of size {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("SubsetMask is immutable")

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "SubsetMask":
        bits = 0
        for i in elements:
            i = int(i)
            if not 0 <= i < n:
                raise ValueError(f"element {i} outside ground set of size {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def empty(cls, n: int) -> "SubsetMask":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "SubsetMask":
        return cls(n, (1 << n) - 1)

    def cardinality(self) -> int:
        return self.bits.bit_count()

    __len__ = cardinality

    def elements(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __iter__(self):
        return iter_bits(self.bits)

    def __contains__(self, i) -> bool:
        return 0 <= i < self.n and bool(self.bits >> i & 1)

    def _check(self, other) -> int:
        if not isinstance(other, SubsetMask):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"mask sizes differ: {self.n} vs {other.n}")
        return other.bits

    def __or__(self, other):
        bits = self._check(other)
        if bits is NotImplemented:
            return bits
        return SubsetMask(self.n, self.bits | bits)

    def __and__(self, other):
        bits = self._check(other)
        if bits is NotImplemented:
            return bits
        return SubsetMask(self.n, self.bits & bits)

    def __sub__(self, other):
        bits = self._check(other)
        if bits is NotImplemented:
            return bits
        return SubsetMask(self.n, self.bits & ~bits)

    def __xor__(self, other):
        bits = self._check(other)
        if bits is NotImplemented:
            return bits
        return SubsetMask(self.n, self.bits ^ bits)

    union = __or__
    intersection = __and__
    difference = __sub__

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.n, ((1 << self.n) - 1) & ~self.bits)

    def add(self, i: int) -> "SubsetMask":
        if not 0 <= i < self.n:
            raise ValueError(f"element {i} outside ground set of size {self.n}")
        return SubsetMask(self.n, self.bits | (1 << i))

    def issubset(self, other: "SubsetMask") -> bool:
        bits = self._check(other)
        return self.bits & ~bits == 0

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, SubsetMask):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self):
        return hash((self.n, self.bits))

    def __repr__(self):
        return f"SubsetMask(n={self.n}, elements={self.elements()})"


SubsetLike = Union[SubsetMask, int, Iterable[int]]


def as_bits(S: SubsetLike, n: int) -> int:
    """Convert a mask, raw bit integer or iterable of elements to bits."""
    if type(S) is int:
        if S < 0 or S >> n:
            raise ValueError(f"bits {S:#x} do not fit a ground set of size {n}")
        return S
    if isinstance(S, SubsetMask):
        if S.n != n:
            raise ValueError(f"mask over {S.n} elements used with a function over {n}")
        return S.bits
    return SubsetMask.from_elements(n, S).bits


@dataclass(frozen=True)
class Props:
    """Structural properties declared by the author of a set function.

    Flags are trusted, never verified at construction; see
    :mod:`submod.checks` for exhaustive verification on small ground sets.
    """

    monotone: bool = False
    submodular: bool = False
    modular: bool = False
    normalized: bool = False
    positive: bool = False


class SetFunction:
    """Evaluation oracle for a set function over ``{0, ..., n-1}``.

    Subclasses implement :meth:`_eval` on raw bit integers. Calling the
    function accepts a :class:`SubsetMask`, a bit integer or an iterable of
    elements and increments :attr:`eval_count` by one.
    """

    def __init__(self, n: int, props: Props = Props()):
        GroundSet(n)
        self.n = n
        self.props = props
        self._count = 0
        self._lock = threading.Lock()

    def _eval(self, bits: int) -> float:
        raise NotImplementedError

    def __call__(self, S: SubsetLike) -> float:
        bits = as_bits(S, self.n)
        with self._lock:
            self._count += 1
        return self._eval(bits)

    @property
    def eval_count(self) -> int:
        return self._count

    def reset_count(self) -> None:
        with self._lock:
            self._count = 0

    @property
    def ground_set(self) -> GroundSet:
        return GroundSet(self.n)

    def peek(self, S: SubsetLike) -> float:
        """Evaluate without touching the call counter (for bookkeeping only)."""
        return self._eval(as_bits(S, self.n))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class ShiftedFunction(SetFunction):
    """``S -> base(S) + shift``; calls are counted on ``base``."""

    def __init__(self, base: SetFunction, shift: float):
        self.base = base
        self.shift = shift
        p = base.props
        if p.monotone:
            positive = base.peek(0) + shift > 0
        else:
            positive = p.positive and shift >= 0
        props = replace(p, normalized=shift == 0 and p.normalized, positive=positive)
        super().__init__(base.n, props)

    def __call__(self, S):
        return self.base(S) + self.shift

    def _eval(self, bits):
        return self.base._eval(bits) + self.shift

    @property
    def eval_count(self):
        return self.base.eval_count

    def reset_count(self):
        self.base.reset_count()


class ScaledFunction(SetFunction):
    """``S -> factor * base(S)`` for a non-negative ``factor``."""

    def __init__(self, base: SetFunction, factor: float):
        if not factor >= 0:
            raise ValueError(f"scale factor must be non-negative, got {factor}")
        self.base = base
        self.factor = factor
        p = base.props
        props = replace(p, positive=p.positive and factor > 0)
        super().__init__(base.n, props)

    def __call__(self, S):
        return self.factor * self.base(S)

    def _eval(self, bits):
        return self.factor * self.base._eval(bits)

    @property
    def eval_count(self):
        return self.base.eval_count

    def reset_count(self):
        self.base.reset_count()


class CurvatureError(ValueError):
    """Raised when the curvature ratio divides by a zero singleton gain."""


def marginal_gain(f: SetFunction, i: int, A: SubsetLike) -> float:
    """Return ``f(A + i) - f(A)``; ``i`` must not belong to ``A``."""
    if not 0 <= i < f.n:
        raise ValueError(f"element {i} outside ground set of size {f.n}")
    bits = as_bits(A, f.n)
    if bits >> i & 1:
        raise ValueError(f"element {i} already belongs to the context set")
    return f(bits | (1 << i)) - f(bits)


def curvature(f: SetFunction) -> float:
    """Total curvature ``1 - min_i f(i | V - i) / f(i | {})``.

    Uses ``2n + 2`` oracle calls. Elements with both marginals equal to zero
    are inert and skipped. An element with a zero singleton gain but a
    non-zero gain on top of the rest of the ground set makes the ratio
    undefined and raises :class:`CurvatureError`.

    Functions declared modular return ``0.0`` after the same oracle calls,
    since floating-point summation may otherwise leave a residue of a few
    ulps.
    """
    n = f.n
    full = (1 << n) - 1
    f_empty = f(0)
    f_full = f(full)
    worst = 1.0
    for i in range(n):
        bit = 1 << i
        first = f(bit) - f_empty
        last = f_full - f(full ^ bit)
        if first == 0:
            if last == 0:
                continue
            raise CurvatureError(
                f"element {i} has zero singleton gain but gain {last} on the rest of the ground set"
            )
        worst = min(worst, last / first)
    if f.props.modular:
        return 0.0
    return min(1.0, max(0.0, 1.0 - worst))

