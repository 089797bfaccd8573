"""Coherent states, operator symbols, Berezin convolution, and the
differential-operator (Fock-Bargmann) realization.

Conventions, fixed once and checked by the identity-resolution and
eigenstate tests:

* Ket coefficients sit to the right of basis kets; the coherent ket over
  generators ``b_1..b_N`` has coefficient ``b_{k1} b_{k2} ...`` (ascending
  cells) on the basis state with those cells occupied.
* Bra coefficients sit to the left of basis bras and come out in descending
  cell order, which is exactly the involution of the ket coefficient.
* Pair measures integrate the plain generator first (list ``[g*, g]``), so
  the normalized Gaussian pair integrates to +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .fock import FockOperator, FockVector, annihilation, creation
from .grassmann import (
    GeneratorId,
    GeneratorPool,
    GrassmannElement,
    ZERO_TOLERANCE,
    berezin_integrate,
    drop_overlapping,
    format_complex,
    grassmann_exp,
    left_derivative,
    max_abs_diff,
    substitute,
)


class SymbolArityError(ValueError):
    """Cell counts of two symbols do not line up."""


@dataclass(frozen=True)
class SymbolExpr:
    """A gate or state symbol: a Grassmann element plus its variable lists.

    ``out_gens`` are the starred generators of the output cells, ``in_gens``
    the plain generators of the input cells.  ``kind`` is one of
    ``"matrix"``, ``"covariant"``, ``"state"``.
    """

    value: GrassmannElement
    out_gens: tuple[GeneratorId, ...]
    in_gens: tuple[GeneratorId, ...]
    kind: str

    @property
    def pool(self) -> GeneratorPool:
        return self.value.pool

    @property
    def n_out(self) -> int:
        return len(self.out_gens)

    @property
    def n_in(self) -> int:
        return len(self.in_gens)

    def __repr__(self) -> str:
        return f"<SymbolExpr {self.kind} {self.n_out}<-{self.n_in}: {render_symbol(self)}>"


@dataclass(frozen=True)
class CoherentVector:
    """Fock vector with Grassmann-element amplitudes; houses coherent states."""

    entries: tuple[GrassmannElement, ...]
    n_cells: int
    side: str  # "ket" or "bra"

    def apply(self, op: FockOperator) -> "CoherentVector":
        if self.side != "ket":
            raise ValueError("apply acts on kets")
        if op.n_in != self.n_cells:
            raise SymbolArityError("operator input cells do not match the vector")
        pool = self.entries[0].pool
        out = []
        for m in range(2**op.n_out):
            acc = pool.zero()
            for n in range(2**op.n_in):
                a = op.entries[m, n]
                if a:
                    acc = acc + self.entries[n] * a
            out.append(acc)
        return CoherentVector(tuple(out), op.n_out, "ket")

    def scale_right(self, g: GrassmannElement) -> "CoherentVector":
        return CoherentVector(tuple(e * g for e in self.entries), self.n_cells, self.side)


def _ket_coefficients(pool: GeneratorPool, gens: Sequence[GeneratorId]) -> list[GrassmannElement]:
    """Coefficient of each basis state in the coherent ket: ascending products."""
    coeffs = [pool.one()]
    for index in range(1, 2 ** len(gens)):
        low = (index & -index).bit_length() - 1
        rest = index ^ (1 << low)
        coeffs.append(pool.gen(gens[low]) * coeffs[rest])
    return coeffs


def _bra_coefficients(pool: GeneratorPool, star_gens: Sequence[GeneratorId]) -> list[GrassmannElement]:
    """Coefficient of each dual basis state in the coherent bra: descending products."""
    coeffs = [pool.one()]
    for index in range(1, 2 ** len(star_gens)):
        high = index.bit_length() - 1
        rest = index ^ (1 << high)
        coeffs.append(pool.gen(star_gens[high]) * coeffs[rest])
    return coeffs


def coherent_ket(pool: GeneratorPool, gens: Sequence[GeneratorId]) -> CoherentVector:
    """Eigenvector of every annihilation operator, eigenvalue the cell's generator."""
    return CoherentVector(tuple(_ket_coefficients(pool, gens)), len(gens), "ket")


def coherent_bra(pool: GeneratorPool, star_gens: Sequence[GeneratorId]) -> CoherentVector:
    return CoherentVector(tuple(_bra_coefficients(pool, star_gens)), len(star_gens), "bra")


def overlap(pool: GeneratorPool, star_gens: Sequence[GeneratorId], plain_gens: Sequence[GeneratorId]) -> GrassmannElement:
    """Coherent bra-ket overlap exp(sum_k star_k * plain_k)."""
    if len(star_gens) != len(plain_gens):
        raise SymbolArityError("overlap needs matching cell counts")
    acc = pool.zero()
    for s, p in zip(star_gens, plain_gens):
        acc = acc + pool.gen(s) * pool.gen(p)
    return grassmann_exp(acc)


def _overlap_factor(pool, star_gens, plain_gens, sign: float) -> GrassmannElement:
    acc = pool.one()
    for s, p in zip(star_gens, plain_gens):
        acc = acc * (pool.one() + pool.gen(s) * pool.gen(p) * sign)
    return acc


def matrix_symbol(
    op: FockOperator,
    pool: GeneratorPool,
    out_name: str = "α",
    in_name: str = "β",
) -> SymbolExpr:
    """Coherent-state matrix element of ``op`` over fresh generators.

    Defined for rectangular operators as well; the result is the pairing of
    the coherent bra on the output cells with ``op`` applied to the coherent
    ket on the input cells.
    """
    out_pairs = pool.pairs(out_name, op.n_out)
    in_pairs = pool.pairs(in_name, op.n_in)
    out_stars = tuple(star for _, star in out_pairs)
    in_plains = tuple(plain for plain, _ in in_pairs)
    kets = _ket_coefficients(pool, in_plains)
    bras = _bra_coefficients(pool, out_stars)
    value = pool.zero()
    mat = op.entries
    for m in range(2**op.n_out):
        row = pool.zero()
        for n in range(2**op.n_in):
            a = mat[m, n]
            if a:
                row = row + kets[n] * a
        if not row.is_zero:
            value = value + bras[m] * row
    return SymbolExpr(value, out_stars, in_plains, "matrix")


def normalize_matrix_symbol(sym: SymbolExpr) -> SymbolExpr:
    """Divide a square matrix symbol by the overlap, giving the covariant symbol.

    The overlap is even with unit scalar part, so division is multiplication
    by the finite inverse exp(-sum star*plain); this is exact.
    """
    if sym.kind != "matrix":
        raise ValueError("expected a matrix symbol")
    if sym.n_in != sym.n_out:
        raise SymbolArityError(
            "covariant symbols are undefined when input and output cell counts differ"
        )
    pool = sym.pool
    value = sym.value * _overlap_factor(pool, sym.out_gens, sym.in_gens, -1.0)
    return SymbolExpr(value, sym.out_gens, sym.in_gens, "covariant")


def covariant_symbol(op: FockOperator, pool: GeneratorPool) -> SymbolExpr:
    if op.n_in != op.n_out:
        raise SymbolArityError(
            "covariant symbols are undefined when input and output cell counts differ"
        )
    return normalize_matrix_symbol(matrix_symbol(op, pool))


def state_symbol(vec: FockVector, pool: GeneratorPool, name: str = "α") -> SymbolExpr:
    """Symbol of a state: a function of the starred generators only."""
    pairs = pool.pairs(name, vec.n_cells)
    stars = tuple(star for _, star in pairs)
    bras = _bra_coefficients(pool, stars)
    value = pool.zero()
    for m, amp in enumerate(vec.amplitudes):
        if amp:
            value = value + bras[m] * complex(amp)
    return SymbolExpr(value, stars, (), "state")


def fock_from_state_symbol(sym: SymbolExpr) -> FockVector:
    """Inverse of :func:`state_symbol`; used by oracle comparisons."""
    if sym.kind != "state":
        raise ValueError("expected a state symbol")
    coeffs = canonical_coeffs(sym)
    n = sym.n_out
    amps = np.zeros(2**n, dtype=complex)
    bras = _bra_signs(n)
    for (omask, imask), c in coeffs.items():
        if imask:
            raise ValueError("state symbol contains input generators")
        amps[omask] = c * bras[omask]
    return FockVector(amps, n)


def _bra_signs(n: int) -> list[float]:
    """Sign relating the ascending canonical monomial to the descending
    bra coefficient monomial, per occupation mask."""
    signs = []
    for mask in range(2**n):
        k = mask.bit_count()
        signs.append(-1.0 if (k * (k - 1) // 2) % 2 else 1.0)
    return signs


# ---- convolution and operator action ----------------------------------------


def convolve(a: SymbolExpr, b: SymbolExpr) -> SymbolExpr:
    """Berezin convolution of covariant symbols; represents operator product.

    Fresh intermediate generators are allocated, coupled through the
    normalized Gaussian kernel, and integrated out, so the result only
    involves ``a``'s output and ``b``'s input generators.
    """
    if a.kind != "covariant" or b.kind != "covariant":
        raise ValueError("convolution is defined for covariant symbols")
    if a.pool is not b.pool:
        raise ValueError("symbols live in different pools")
    if a.n_in != b.n_out:
        raise SymbolArityError("inner cell counts do not match")
    pool = a.pool
    n = a.n_in
    mid = pool.pairs("γ", n)
    plains = [p for p, _ in mid]
    stars = [s for _, s in mid]
    left = substitute(a.value, {a.in_gens[k]: plains[k] for k in range(n)})
    right = substitute(b.value, {b.out_gens[k]: stars[k] for k in range(n)})
    value = left * right
    one = pool.one()
    for k in range(n):
        value = value * (one + pool.gen(a.out_gens[k]) * pool.gen(plains[k]))
        value = value * (one + pool.gen(stars[k]) * pool.gen(b.in_gens[k]))
        value = value * (one - pool.gen(stars[k]) * pool.gen(plains[k]))
        value = berezin_integrate(value, [stars[k], plains[k]])
    value = value * _overlap_factor(pool, a.out_gens, b.in_gens, -1.0)
    return SymbolExpr(value, a.out_gens, b.in_gens, "covariant")


def convolve_matrix_symbols(a: SymbolExpr, b: SymbolExpr) -> SymbolExpr:
    """Composition kernel for matrix symbols (rectangular operators allowed)."""
    if a.kind != "matrix" or b.kind != "matrix":
        raise ValueError("expected matrix symbols")
    if a.pool is not b.pool:
        raise ValueError("symbols live in different pools")
    if a.n_in != b.n_out:
        raise SymbolArityError("inner cell counts do not match")
    pool = a.pool
    n = a.n_in
    mid = pool.pairs("γ", n)
    plains = [p for p, _ in mid]
    stars = [s for _, s in mid]
    left = substitute(a.value, {a.in_gens[k]: plains[k] for k in range(n)})
    right = substitute(b.value, {b.out_gens[k]: stars[k] for k in range(n)})
    value = left * right
    one = pool.one()
    for k in range(n):
        value = value * (one - pool.gen(stars[k]) * pool.gen(plains[k]))
        value = berezin_integrate(value, [stars[k], plains[k]])
    return SymbolExpr(value, a.out_gens, b.in_gens, "matrix")


def apply_symbol(a: SymbolExpr, f: SymbolExpr) -> SymbolExpr:
    """Action of a covariant gate symbol on a state symbol."""
    if a.kind != "covariant":
        raise ValueError("apply_symbol needs a covariant gate symbol")
    if f.kind != "state":
        raise ValueError("apply_symbol acts on state symbols")
    if a.pool is not f.pool:
        raise ValueError("symbols live in different pools")
    if a.n_in != f.n_out:
        raise SymbolArityError("gate input cells do not match the state")
    pool = a.pool
    n = a.n_in
    mid = pool.pairs("γ", n)
    plains = [p for p, _ in mid]
    stars = [s for _, s in mid]
    left = substitute(a.value, {a.in_gens[k]: plains[k] for k in range(n)})
    right = substitute(f.value, {f.out_gens[k]: stars[k] for k in range(n)})
    value = left * right
    one = pool.one()
    for k in range(n):
        value = value * (one + pool.gen(a.out_gens[k]) * pool.gen(plains[k]))
        value = value * (one - pool.gen(stars[k]) * pool.gen(plains[k]))
        value = berezin_integrate(value, [stars[k], plains[k]])
    return SymbolExpr(value, a.out_gens, (), "state")


def scalar_product(f: SymbolExpr, g: SymbolExpr) -> complex:
    """Hermitian inner product of two states from their symbols."""
    if f.kind != "state" or g.kind != "state":
        raise ValueError("scalar_product acts on state symbols")
    if f.n_out != g.n_out:
        raise SymbolArityError("states live on different cell counts")
    pool = f.pool
    aligned = substitute(g.value, {g.out_gens[k]: f.out_gens[k] for k in range(g.n_out)})
    value = f.value.involution() * aligned
    one = pool.one()
    for star in f.out_gens:
        plain = pool.conjugate_of(star)
        value = value * (one - pool.gen(star) * pool.gen(plain))
        value = berezin_integrate(value, [star, plain])
    if value.degree() > 0:
        raise RuntimeError("scalar product left unintegrated generators")
    return value.scalar_part()


def resolution_of_identity_check(n_cells: int, pool: GeneratorPool) -> np.ndarray:
    """Assemble the coherent-state identity resolution entry-wise.

    Returns the resulting matrix; it must equal the identity, which also
    pins the orientation convention of the pair measure.
    """
    pairs = pool.pairs("α", n_cells)
    plains = [p for p, _ in pairs]
    stars = [s for _, s in pairs]
    kets = _ket_coefficients(pool, plains)
    bras = _bra_coefficients(pool, stars)
    kernel = _overlap_factor(pool, stars, plains, -1.0)
    dim = 2**n_cells
    out = np.zeros((dim, dim), dtype=complex)
    measure = []
    for p, s in zip(plains, stars):
        measure.extend([s, p])
    for m in range(dim):
        for n in range(dim):
            integrand = kets[m] * bras[n] * kernel
            value = berezin_integrate(integrand, measure)
            out[m, n] = value.scalar_part()
            if value.degree() > 0:
                raise RuntimeError("identity resolution left unintegrated generators")
    return out


# ---- Fock-Bargmann (differential-operator) realization ----------------------


@dataclass(frozen=True)
class FBOperator:
    """Normal-ordered differential-operator form of a gate.

    Each term is ``(star_mask, derivative_cells, coefficient)``: left
    multiplication by the ascending product of output stars in ``star_mask``
    after taking left derivatives in ``derivative_cells`` (listed ascending,
    applied right to left).  ``shares_variables`` marks the square form that
    reads and writes the same generators; the rectangular form uses separate
    output variables and projects away unconsumed input stars.
    """

    n_out: int
    n_in: int
    terms: tuple[tuple[int, tuple[int, ...], complex], ...]
    shares_variables: bool


def to_fb_operator(op: FockOperator) -> FBOperator:
    """Normal-ordered decomposition of a square operator.

    Coefficients are found by matching matrix elements against the matrix
    elements of normal-ordered ladder monomials (a square linear system,
    upper triangular in monomial degree).
    """
    if not op.is_square:
        raise SymbolArityError("normal-ordered form here expects a square operator")
    n = op.n_in
    dim = 2**n
    cre = [creation(k, n).entries for k in range(1, n + 1)]
    ann = [annihilation(k, n).entries for k in range(1, n + 1)]
    columns = []
    keys: list[tuple[int, tuple[int, ...]]] = []
    for smask in range(dim):
        for tmask in range(dim):
            mat = np.eye(dim, dtype=complex)
            for i in range(n):
                if smask >> i & 1:
                    mat = mat @ cre[i]
            for j in range(n):
                if tmask >> j & 1:
                    mat = mat @ ann[j]
            columns.append(mat.reshape(-1))
            keys.append((smask, tuple(i for i in range(n) if tmask >> i & 1)))
    system = np.array(columns).T
    coeffs = np.linalg.solve(system, op.entries.reshape(-1))
    terms = tuple(
        (keys[j][0], keys[j][1], complex(c))
        for j, c in enumerate(coeffs)
        if abs(c) > ZERO_TOLERANCE
    )
    return FBOperator(n, n, terms, shares_variables=True)


def _term_scale(pool: GeneratorPool, smask: int, tcells: tuple[int, ...], n_out: int, n_in: int) -> complex:
    """Scalar a unit term produces on the matching input monomial, expressed
    against the matching output monomial.  Used to read coefficients off
    matrix entries for the rectangular (projected) form."""
    out_pairs = pool.pairs("σ", n_out)
    in_pairs = pool.pairs("τ", n_in)
    out_stars = [s for _, s in out_pairs]
    in_stars = [s for _, s in in_pairs]
    bras_in = _bra_coefficients(pool, in_stars)
    bras_out = _bra_coefficients(pool, out_stars)
    tmask = 0
    for t in tcells:
        tmask |= 1 << t
    g = bras_in[tmask]
    for t in reversed(tcells):
        g = left_derivative(g, in_stars[t])
    scalar = g.scalar_part()
    mono = pool.one()
    for s in range(n_out):
        if smask >> s & 1:
            mono = mono * pool.gen(out_stars[s])
    target = bras_out[smask]
    produced = mono * scalar
    ratio = None
    for mask, c in target.terms.items():
        ratio = produced.terms.get(mask, 0j) / c
        break
    if ratio is None:  # smask == 0
        ratio = produced.scalar_part()
    return ratio


def projected_fb_operator(op: FockOperator, pool: GeneratorPool) -> FBOperator:
    """Differential-operator form for rectangular gates.

    The action takes derivatives in the input stars, projects out whatever
    input stars remain, and rebuilds the output monomial on fresh variables;
    the coefficients come straight from the matrix entries scaled by the
    sign bookkeeping of the two monomial conventions."""
    terms = []
    for smask in range(2**op.n_out):
        for tmask in range(2**op.n_in):
            a = op.entries[smask, tmask]
            if abs(a) <= ZERO_TOLERANCE:
                continue
            tcells = tuple(i for i in range(op.n_in) if tmask >> i & 1)
            scale = _term_scale(pool, smask, tcells, op.n_out, op.n_in)
            terms.append((smask, tcells, complex(a) / scale))
    return FBOperator(op.n_out, op.n_in, tuple(terms), shares_variables=False)


def fb_apply(op: FBOperator, f: SymbolExpr) -> SymbolExpr:
    """Apply a differential-operator gate form to a state symbol."""
    if f.kind != "state":
        raise ValueError("fb_apply acts on state symbols")
    if op.n_in != f.n_out:
        raise SymbolArityError("operator input cells do not match the state")
    pool = f.pool
    if op.shares_variables:
        gens = f.out_gens
        acc = pool.zero()
        for smask, tcells, coeff in op.terms:
            g = f.value
            for t in reversed(tcells):
                g = left_derivative(g, gens[t])
            if g.is_zero:
                continue
            mono = pool.one()
            for s in range(op.n_out):
                if smask >> s & 1:
                    mono = mono * pool.gen(gens[s])
            acc = acc + mono * g * coeff
        return SymbolExpr(acc, gens, (), "state")
    out_pairs = pool.pairs("α", op.n_out)
    out_stars = tuple(s for _, s in out_pairs)
    in_mask = 0
    for g in f.out_gens:
        in_mask |= 1 << g.index
    acc = pool.zero()
    for smask, tcells, coeff in op.terms:
        g = f.value
        for t in reversed(tcells):
            g = left_derivative(g, f.out_gens[t])
        g = drop_overlapping(g, in_mask)  # unconsumed input stars vanish
        scalar = g.scalar_part()
        if not scalar:
            continue
        mono = pool.one()
        for s in range(op.n_out):
            if smask >> s & 1:
                mono = mono * pool.gen(out_stars[s])
        acc = acc + mono * (scalar * coeff)
    return SymbolExpr(acc, out_stars, (), "state")


# ---- alignment, comparison, rendering ----------------------------------------


def canonical_coeffs(sym: SymbolExpr) -> dict[tuple[int, int], complex]:
    """Coefficients keyed by (output cell mask, input cell mask).

    The monomial is normalized to output stars ascending followed by input
    generators ascending, so symbols computed over different pools or fresh
    generator batches become directly comparable.
    """
    position: dict[int, tuple[int, int]] = {}
    for cell, g in enumerate(sym.out_gens):
        position[g.index] = (0, cell)
    for cell, g in enumerate(sym.in_gens):
        position[g.index] = (1, cell)
    out: dict[tuple[int, int], complex] = {}
    for mask, coeff in sym.value.terms.items():
        keys = []
        m = mask
        while m:
            low = m & -m
            idx = low.bit_length() - 1
            m ^= low
            if idx not in position:
                raise ValueError("symbol value uses a generator outside its variables")
            keys.append(position[idx])
        inversions = 0
        for p in range(len(keys)):
            for q in range(p):
                if keys[q] > keys[p]:
                    inversions += 1
        sign = -1.0 if inversions & 1 else 1.0
        omask = 0
        imask = 0
        for group, cell in keys:
            if group == 0:
                omask |= 1 << cell
            else:
                imask |= 1 << cell
        out[(omask, imask)] = sign * coeff
    return out


def symbol_max_dev(a: SymbolExpr, b: SymbolExpr) -> float:
    """Largest coefficient deviation between two symbols, cell-aligned."""
    ca = canonical_coeffs(a)
    cb = canonical_coeffs(b)
    keys = set(ca) | set(cb)
    if not keys:
        return 0.0
    return max(abs(ca.get(k, 0j) - cb.get(k, 0j)) for k in keys)


def render_symbol(sym: SymbolExpr) -> str:
    """Canonical text form with positional generator names α1*.., β1.. .

    Terms are sorted by (degree, position mask); within a monomial the
    output stars come first, all ascending by cell.
    """
    coeffs = canonical_coeffs(sym)
    if not coeffs:
        return "0"
    n_out = sym.n_out
    entries = []
    for (omask, imask), coeff in coeffs.items():
        degree = omask.bit_count() + imask.bit_count()
        combined = omask | (imask << n_out)
        entries.append((degree, combined, omask, imask, coeff))
    entries.sort(key=lambda e: (e[0], e[1]))
    parts = []
    for degree, _, omask, imask, coeff in entries:
        text = format_complex(coeff)
        if degree == 0:
            parts.append(text)
            continue
        labels = [f"α{k + 1}*" for k in range(n_out) if omask >> k & 1]
        labels += [f"β{k + 1}" for k in range(sym.n_in) if imask >> k & 1]
        parts.append(f"{text}*" + "^".join(labels))
    return " + ".join(parts)
