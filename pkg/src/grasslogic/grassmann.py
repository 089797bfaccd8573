"""Sparse arithmetic in a finite Grassmann algebra with involution.

Elements are sums of monomials in anticommuting generators drawn from a
shared :class:`GeneratorPool`.  A monomial is stored as an integer bitmask
over generator indices and is always kept in canonical order (generators by
ascending pool index); every reordering sign is absorbed into the complex
coefficient.  This gives a unique normal form, so equality is plain
coefficient comparison.

The pool is extensible: symbol computations and Berezin integrals allocate
fresh intermediate generators without disturbing existing elements, because
allocation only ever appends to the generator order.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from numbers import Complex
from typing import Iterable, Mapping, Sequence

#: Coefficients with magnitude below this are dropped during canonicalization.
#: All arithmetic here is short products of small integers and unit-modulus
#: trig values, so 1e-12 cleanly separates true zeros from rounding noise.
ZERO_TOLERANCE = 1e-12


class PoolMismatchError(ValueError):
    """Raised when operands belong to different generator pools."""


class UnpairedGeneratorError(ValueError):
    """Raised when the involution meets a generator without a conjugate."""


@dataclass(frozen=True)
class GeneratorId:
    """One anticommuting generator: a fixed position in the pool order.

    ``conjugate`` is the pool index of the involution partner, if any.
    """

    index: int
    name: str
    conjugate: int | None = None


class GeneratorPool:
    """Ordered registry of generators.

    Allocation only appends; a generator's index never changes, so bitmask
    monomials stay valid while the pool grows.  Allocation is not
    thread-safe: callers that share a pool across threads must serialize
    allocation themselves.  Elements are immutable and freely shareable.
    """

    def __init__(self) -> None:
        self._generators: list[GeneratorId] = []

    def __len__(self) -> int:
        return len(self._generators)

    @property
    def generators(self) -> tuple[GeneratorId, ...]:
        return tuple(self._generators)

    def get(self, index: int) -> GeneratorId:
        return self._generators[index]

    def fresh(self, name: str) -> GeneratorId:
        """Allocate a single generator with no conjugate partner."""
        gid = GeneratorId(len(self._generators), name)
        self._generators.append(gid)
        return gid

    def pair(self, base: str) -> tuple[GeneratorId, GeneratorId]:
        """Allocate a conjugate pair; returns ``(plain, starred)``."""
        i = len(self._generators)
        plain = GeneratorId(i, base, conjugate=i + 1)
        star = GeneratorId(i + 1, base + "*", conjugate=i)
        self._generators.append(plain)
        self._generators.append(star)
        return plain, star

    def pairs(self, base: str, count: int, start: int = 1) -> list[tuple[GeneratorId, GeneratorId]]:
        """Allocate ``count`` numbered conjugate pairs ``base1, base1*, ...``."""
        return [self.pair(f"{base}{k}") for k in range(start, start + count)]

    def conjugate_of(self, g: GeneratorId) -> GeneratorId:
        if g.conjugate is None:
            raise UnpairedGeneratorError(f"generator {g.name} has no conjugate partner")
        return self._generators[g.conjugate]

    # ---- element factories ------------------------------------------------

    def element(self, terms: Mapping[int, complex]) -> "GrassmannElement":
        return GrassmannElement(self, terms)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return GrassmannElement(self, {0: 1.0 + 0j})

    def scalar(self, value: Complex) -> "GrassmannElement":
        return GrassmannElement(self, {0: complex(value)})

    def gen(self, g: GeneratorId) -> "GrassmannElement":
        return GrassmannElement(self, {1 << g.index: 1.0 + 0j})

    def monomial(self, gens: Iterable[GeneratorId], coeff: Complex = 1.0) -> "GrassmannElement":
        """Product of the given generators in the given order."""
        acc = self.scalar(coeff)
        for g in gens:
            acc = acc * self.gen(g)
        return acc


def _merge_sign(a: int, b: int) -> int:
    """Sign from interleaving two canonically ordered monomials ``a * b``.

    Counts, for every generator of ``b``, the generators of ``a`` above it;
    that is the number of adjacent transpositions needed to merge the two
    ascending sequences into one.
    """
    swaps = 0
    while b:
        i = (b & -b).bit_length()  # one past the lowest set bit
        swaps += (a >> i).bit_count()
        b &= b - 1
    return 1 - ((swaps & 1) << 1)


def _sequence_sign(seq: Sequence[int]) -> int:
    """Parity of the permutation sorting a distinct-integer sequence."""
    inversions = 0
    for pos, value in enumerate(seq):
        for other in seq[:pos]:
            if other > value:
                inversions += 1
    return 1 - ((inversions & 1) << 1)


def _mask_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class GrassmannElement:
    """Immutable sparse element: monomial bitmask -> complex coefficient.

    The stored form is canonical (ascending generator order, tiny
    coefficients dropped), so ``==`` is exact structural equality.  Use
    :func:`max_abs_diff` for tolerance-based comparison.
    """

    __slots__ = ("pool", "terms")

    def __init__(self, pool: GeneratorPool, terms: Mapping[int, complex]):
        self.pool = pool
        self.terms = {m: complex(c) for m, c in terms.items() if abs(c) >= ZERO_TOLERANCE}

    # ---- basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def scalar_part(self) -> complex:
        return self.terms.get(0, 0j)

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(m.bit_count() for m in self.terms)

    @property
    def parity(self) -> int | None:
        """0 for even, 1 for odd, None for mixed or zero-ambiguous elements."""
        parities = {m.bit_count() & 1 for m in self.terms}
        if len(parities) == 1:
            return parities.pop()
        return None if parities else 0

    def parity_split(self) -> tuple["GrassmannElement", "GrassmannElement"]:
        """Split into (even, odd) by generator count mod 2."""
        even = {m: c for m, c in self.terms.items() if not (m.bit_count() & 1)}
        odd = {m: c for m, c in self.terms.items() if m.bit_count() & 1}
        return GrassmannElement(self.pool, even), GrassmannElement(self.pool, odd)

    # ---- ring structure ---------------------------------------------------

    def _check_pool(self, other: "GrassmannElement") -> None:
        if self.pool is not other.pool:
            raise PoolMismatchError("operands belong to different generator pools")

    def _coerce(self, value) -> "GrassmannElement":
        if isinstance(value, GrassmannElement):
            self._check_pool(value)
            return value
        if isinstance(value, Complex):
            return self.pool.scalar(value)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) + c
        return GrassmannElement(self.pool, out)

    __radd__ = __add__

    def __sub__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(self.pool, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "GrassmannElement":
        if isinstance(other, Complex):
            return GrassmannElement(self.pool, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        self._check_pool(other)
        out: dict[int, complex] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue  # repeated generator: monomial vanishes
                m = ma | mb
                value = ca * cb * _merge_sign(ma, mb)
                out[m] = out.get(m, 0j) + value
        return GrassmannElement(self.pool, out)

    def __rmul__(self, other) -> "GrassmannElement":
        if isinstance(other, Complex):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "GrassmannElement":
        if isinstance(other, Complex):
            return self * (1.0 / complex(other))
        return NotImplemented

    # ---- involution -------------------------------------------------------

    def involution(self) -> "GrassmannElement":
        """Antilinear antihomomorphism: conjugate coefficients, map each
        generator to its partner, and reverse every monomial."""
        out: dict[int, complex] = {}
        for mask, coeff in self.terms.items():
            indices = _mask_indices(mask)
            mapped = []
            for i in indices:
                g = self.pool.get(i)
                if g.conjugate is None:
                    raise UnpairedGeneratorError(f"generator {g.name} has no conjugate partner")
                mapped.append(g.conjugate)
            mapped.reverse()  # (g1 g2 ... gk)* = gk* ... g2* g1*
            sign = _sequence_sign(mapped)
            new_mask = 0
            for i in mapped:
                new_mask |= 1 << i
            out[new_mask] = out.get(new_mask, 0j) + sign * coeff.conjugate()
        return GrassmannElement(self.pool, out)

    # ---- comparison and display -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Complex):
            other = self.pool.scalar(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.pool is other.pool and self.terms == other.terms

    def __hash__(self):
        raise TypeError("GrassmannElement is not hashable")

    def __repr__(self) -> str:
        text = render_element(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"<GrassmannElement {text}>"


def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def parity_split(x: GrassmannElement) -> tuple[GrassmannElement, GrassmannElement]:
    return x.parity_split()


def involution(x: GrassmannElement) -> GrassmannElement:
    return x.involution()


def left_derivative(x: GrassmannElement, g: GeneratorId) -> GrassmannElement:
    """Left partial derivative: anticommute ``g`` to the front, then drop it.

    On a canonical monomial the sign is (-1)**(number of generators with a
    smaller index present in the monomial).
    """
    bit = 1 << g.index
    below = bit - 1
    out: dict[int, complex] = {}
    for mask, coeff in x.terms.items():
        if mask & bit:
            sign = -1 if (mask & below).bit_count() & 1 else 1
            rest = mask ^ bit
            out[rest] = out.get(rest, 0j) + sign * coeff
    return GrassmannElement(x.pool, out)


def berezin_integrate(x: GrassmannElement, gens: Sequence[GeneratorId]) -> GrassmannElement:
    """Iterated Berezin integral over ``gens``.

    The single-variable integral coincides with the left derivative
    (so that the generator integrates to 1 and constants to 0).  The list is
    read like a written measure ``d g1 d g2 ...``: the last entry is the
    innermost integral and is applied first.  In particular integrating the
    pair ``[g*, g]`` applies ``g`` first, which makes the normalized pair
    measure of the coherent-state calculus integrate to +1.
    """
    for g in reversed(list(gens)):
        x = left_derivative(x, g)
    return x


def grassmann_exp(x: GrassmannElement) -> GrassmannElement:
    """Exponential via the (finite) power series.

    A scalar part ``s`` factors out as ``exp(s) * exp(x - s)`` so the series
    for the nilpotent remainder terminates.
    """
    s = x.scalar_part()
    n = x - s
    acc = x.pool.one()
    term = x.pool.one()
    k = 0
    limit = len(x.pool) + 1
    while True:
        k += 1
        term = term * n / k
        if term.is_zero:
            break
        acc = acc + term
        if k > limit:  # pragma: no cover - nilpotency guarantees termination
            raise RuntimeError("exponential series failed to terminate")
    if abs(s) > 0:
        acc = acc * cmath.exp(s)
    return acc


def grassmann_log(x: GrassmannElement) -> GrassmannElement:
    """Logarithm of an element with invertible scalar part.

    Computed as ``log(s) + log(1 + n/s)`` with the Mercator series in the
    nilpotent part ``n``; the series is finite.
    """
    s = x.scalar_part()
    if abs(s) < ZERO_TOLERANCE:
        raise ValueError("logarithm requires a nonzero scalar part")
    u = x / s - 1.0
    acc = x.pool.scalar(cmath.log(s))
    power = x.pool.one()
    k = 0
    limit = len(x.pool) + 1
    while True:
        k += 1
        power = power * u
        if power.is_zero:
            break
        acc = acc + power * ((-1.0) ** (k + 1) / k)
        if k > limit:  # pragma: no cover
            raise RuntimeError("logarithm series failed to terminate")
    return acc


def substitute(
    x: GrassmannElement,
    mapping: Mapping[GeneratorId, "GrassmannElement | GeneratorId"],
) -> GrassmannElement:
    """Replace generators by elements, rebuilding each monomial in order.

    Every monomial is expanded as the left-to-right product of the images of
    its generators (taken in canonical order), so relabelings and sign flips
    pick up exactly the anticommutation signs they should.
    """
    pool = x.pool
    images: dict[int, GrassmannElement] = {}
    for g, value in mapping.items():
        if isinstance(value, GeneratorId):
            images[g.index] = pool.gen(value)
        else:
            if value.pool is not pool:
                raise PoolMismatchError("substitution image from a different pool")
            images[g.index] = value
    out = pool.zero()
    for mask, coeff in x.terms.items():
        factor = pool.scalar(coeff)
        for i in _mask_indices(mask):
            image = images.get(i)
            factor = factor * (image if image is not None else pool.gen(pool.get(i)))
            if factor.is_zero:
                break
        out = out + factor
    return out


def drop_overlapping(x: GrassmannElement, mask: int) -> GrassmannElement:
    """Keep only the terms whose monomials avoid all generators in ``mask``."""
    return GrassmannElement(x.pool, {m: c for m, c in x.terms.items() if not (m & mask)})


def max_abs_diff(a: GrassmannElement, b: GrassmannElement) -> float:
    """Largest coefficient-wise deviation between two elements."""
    keys = set(a.terms) | set(b.terms)
    if not keys:
        return 0.0
    return max(abs(a.terms.get(m, 0j) - b.terms.get(m, 0j)) for m in keys)


# ---- canonical text rendering ---------------------------------------------


def format_complex(z: complex) -> str:
    """Render a coefficient as ``a+bi`` with 12 significant digits.

    Components below the zero threshold are omitted; a pure real or pure
    imaginary value prints as a single component.
    """
    re, im = z.real, z.imag
    if abs(im) < ZERO_TOLERANCE:
        return f"{re:.12g}"
    if abs(re) < ZERO_TOLERANCE:
        return f"{im:.12g}i"
    return f"{re:.12g}{im:+.12g}i"


def render_element(x: GrassmannElement, names: Mapping[int, str] | None = None) -> str:
    """Canonical text form: terms sorted by (degree, mask), factors joined
    with ``^``, the empty monomial printed as a bare coefficient."""
    if x.is_zero:
        return "0"
    parts = []
    for mask in sorted(x.terms, key=lambda m: (m.bit_count(), m)):
        coeff = format_complex(x.terms[mask])
        if mask == 0:
            parts.append(coeff)
            continue
        labels = []
        for i in _mask_indices(mask):
            labels.append(names[i] if names is not None else x.pool.get(i).name)
        parts.append(f"{coeff}*" + "^".join(labels))
    return " + ".join(parts)
