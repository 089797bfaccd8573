"""Word evolution for quantum automata over qubit memory.

A word is evaluated three independent ways: the ordered matrix product, the
fold of Berezin convolutions, and a discrete path integral whose action
carries the cross terms quadratic in the odd parts of the per-letter
generators.  The three must agree; their pairwise deviations are recorded
in the report, never discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fock
from .fock import FockOperator
from .gates import Gate, make_gate
from .grassmann import (
    GeneratorId,
    GeneratorPool,
    GrassmannElement,
    berezin_integrate,
    grassmann_exp,
    grassmann_log,
    substitute,
)
from .symbols import SymbolExpr, convolve, covariant_symbol, symbol_max_dev

WORD_TOLERANCE = 1e-10


class EmptyWordError(ValueError):
    """Words must contain at least one letter."""


class MissingExponentialFormError(ValueError):
    """Path integration needs every letter in exponential form."""


@dataclass(frozen=True)
class Letter:
    gate_name: str
    param: float | None = None


Word = tuple[Letter, ...]


def parse_word(letters) -> Word:
    return tuple(Letter(name, param) for name, param in letters)


@dataclass
class DiscreteAction:
    """Assembled discrete action of a word's path integral.

    ``slice_pairs[k]`` holds the (plain, star) pairs of trajectory slice k;
    slice 0 reuses the boundary input pairs and slice n the boundary output
    pairs.  ``hamiltonians[k]`` is the k-th letter's generator written on
    slices (k+1, k); ``cross_terms[k]`` couples its odd part to all earlier
    odd parts.  The full exponent is kinetic + sum of both lists.
    ``cross_included`` records whether the cross terms are the canonical
    ones (True) or were deliberately zeroed (False).
    """

    n_cells: int
    slice_pairs: tuple[tuple[tuple[GeneratorId, GeneratorId], ...], ...]
    kinetic: GrassmannElement
    hamiltonians: tuple[GrassmannElement, ...]
    cross_terms: tuple[GrassmannElement, ...]
    cross_included: bool = True

    @property
    def out_stars(self) -> tuple[GeneratorId, ...]:
        return tuple(star for _, star in self.slice_pairs[-1])

    @property
    def in_plains(self) -> tuple[GeneratorId, ...]:
        return tuple(plain for plain, _ in self.slice_pairs[0])

    def exponent(self) -> GrassmannElement:
        acc = self.kinetic
        for h in self.hamiltonians:
            acc = acc + h
        for o in self.cross_terms:
            acc = acc + o
        return acc


def _letter_gates(pool: GeneratorPool, word: Word) -> list[Gate]:
    if not word:
        raise EmptyWordError("word must contain at least one letter")
    cache: dict[Letter, Gate] = {}
    out = []
    for letter in word:
        if letter not in cache:
            cache[letter] = make_gate(pool, letter.gate_name, letter.param)
        out.append(cache[letter])
    return out


def word_matrix(word: Word, pool: GeneratorPool | None = None) -> FockOperator:
    """Ordered product of the letter matrices; the first letter acts first."""
    pool = pool or GeneratorPool()
    gates = _letter_gates(pool, word)
    n = gates[0].n_in
    acc = FockOperator.identity(n)
    for gate in gates:
        if gate.n_in != n or gate.n_out != n:
            raise ValueError("automaton letters must be square gates on equal cells")
        acc = gate.matrix @ acc
    return acc


def word_symbol_convolution(word: Word, pool: GeneratorPool) -> SymbolExpr:
    """Fold of Berezin convolutions; later letters convolve from the left."""
    gates = _letter_gates(pool, word)
    sym = gates[0].covariant_sym
    if sym is None:
        raise ValueError("automaton letters must be square gates")
    for gate in gates[1:]:
        sym = convolve(gate.covariant_sym, sym)
    return sym


def _step_generators(
    pool: GeneratorPool, generators: list[GrassmannElement], sources: list[SymbolExpr], n_cells: int
) -> DiscreteAction:
    """Assemble the discrete action from per-step exponent generators.

    ``generators[k]`` must be written over ``sources[k]``'s variables; it is
    relabeled onto trajectory slices (k+1, k).
    """
    n = len(generators)
    in_pairs = tuple(pool.pairs("β", n_cells))
    interior = [tuple(pool.pairs(f"γ{k}_", n_cells)) for k in range(1, n)]
    out_pairs = tuple(pool.pairs("α", n_cells))
    slices = [in_pairs, *interior, out_pairs]

    hams = []
    odds = []
    for k, (gen, src) in enumerate(zip(generators, sources)):
        mapping: dict[GeneratorId, GeneratorId] = {}
        for c in range(n_cells):
            mapping[src.out_gens[c]] = slices[k + 1][c][1]  # stars of the later slice
            mapping[src.in_gens[c]] = slices[k][c][0]  # plains of the earlier slice
        h = substitute(gen, mapping)
        hams.append(h)
        odds.append(h.parity_split()[1])

    crosses = []
    for k in range(n):
        if k == 0:
            crosses.append(pool.zero())
            continue
        earlier = pool.zero()
        for j in range(k):
            earlier = earlier + odds[j]
        crosses.append(odds[k] * earlier)

    kinetic = pool.zero()
    for k in range(n):
        for c in range(n_cells):
            kinetic = kinetic + pool.gen(slices[k + 1][c][1]) * pool.gen(slices[k][c][0])
    for k in range(1, n):
        for c in range(n_cells):
            kinetic = kinetic - pool.gen(slices[k][c][1]) * pool.gen(slices[k][c][0])
    for c in range(n_cells):
        kinetic = kinetic - pool.gen(out_pairs[c][1]) * pool.gen(in_pairs[c][0])

    return DiscreteAction(
        n_cells=n_cells,
        slice_pairs=tuple(tuple(s) for s in slices),
        kinetic=kinetic,
        hamiltonians=tuple(hams),
        cross_terms=tuple(crosses),
    )


def build_discrete_action(
    word: Word, pool: GeneratorPool, include_odd_cross: bool = True
) -> DiscreteAction:
    gates = _letter_gates(pool, word)
    n_cells = gates[0].n_in
    generators = []
    sources = []
    for gate, letter in zip(gates, word):
        if gate.exp_generator is None:
            raise MissingExponentialFormError(
                f"letter {letter.gate_name!r} has no exponential form"
            )
        generators.append(gate.exp_generator)
        sources.append(gate.covariant_sym)
    action = _step_generators(pool, generators, sources, n_cells)
    if not include_odd_cross:
        action = DiscreteAction(
            n_cells=action.n_cells,
            slice_pairs=action.slice_pairs,
            kinetic=action.kinetic,
            hamiltonians=action.hamiltonians,
            cross_terms=tuple(pool.zero() for _ in action.cross_terms),
            cross_included=False,
        )
    return action


def integrate_action(action: DiscreteAction, pool: GeneratorPool) -> SymbolExpr:
    """Berezin-integrate exp(action) over all interior trajectory slices.

    With the canonical cross terms the exponential of the action factors
    exactly into the time-ordered product of the per-step exponentials
    (that is what the cross terms encode), so each interior slice can be
    integrated out as soon as the factors touching it are in; the
    accumulator then stays small even for many slices.  Without the cross
    terms the exponent does not factor and is exponentiated as one element.
    """
    n = len(action.hamiltonians)
    slices = action.slice_pairs
    one = pool.one()

    if action.cross_included:
        value = grassmann_exp(action.hamiltonians[0])
        for c in range(action.n_cells):
            value = value * (one + pool.gen(slices[1][c][1]) * pool.gen(slices[0][c][0]))
        for k in range(1, n):
            value = grassmann_exp(action.hamiltonians[k]) * value
            for c in range(action.n_cells):
                value = value * (
                    one + pool.gen(slices[k + 1][c][1]) * pool.gen(slices[k][c][0])
                )
            for c in range(action.n_cells):
                value = value * (
                    one - pool.gen(slices[k][c][1]) * pool.gen(slices[k][c][0])
                )
            for c in range(action.n_cells):
                value = berezin_integrate(value, [slices[k][c][1], slices[k][c][0]])
    else:
        gen_part = pool.zero()
        for h in action.hamiltonians:
            gen_part = gen_part + h
        for o in action.cross_terms:
            gen_part = gen_part + o
        value = grassmann_exp(gen_part)
        for k in range(n):
            for c in range(action.n_cells):
                value = value * (
                    one + pool.gen(slices[k + 1][c][1]) * pool.gen(slices[k][c][0])
                )
            if k >= 1:
                for c in range(action.n_cells):
                    value = value * (
                        one - pool.gen(slices[k][c][1]) * pool.gen(slices[k][c][0])
                    )
                for c in range(action.n_cells):
                    value = berezin_integrate(value, [slices[k][c][1], slices[k][c][0]])
    for c in range(action.n_cells):
        value = value * (
            one - pool.gen(slices[-1][c][1]) * pool.gen(slices[0][c][0])
        )
    return SymbolExpr(value, action.out_stars, action.in_plains, "covariant")


def word_symbol_path_integral(
    word: Word, pool: GeneratorPool, include_odd_cross: bool = True
) -> SymbolExpr:
    action = build_discrete_action(word, pool, include_odd_cross)
    return integrate_action(action, pool)


@dataclass
class EvolutionReport:
    """Three-way evaluation of a word with all pairwise deviations kept."""

    word: Word
    matrix: FockOperator
    matrix_sym: SymbolExpr
    convolution: SymbolExpr
    path_integral: SymbolExpr | None
    deviations: dict[str, float] = field(default_factory=dict)
    tolerance: float = WORD_TOLERANCE

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def norms(self) -> dict[str, float]:
        out = {"matrix": float(np.linalg.norm(self.matrix.entries))}
        out["convolution"] = _symbol_norm(self.convolution)
        if self.path_integral is not None:
            out["path_integral"] = _symbol_norm(self.path_integral)
        return out

    def table(self) -> str:
        word_text = " ".join(
            f"{l.gate_name}({l.param:g})" if l.param is not None else l.gate_name
            for l in self.word
        )
        lines = [f"word: {word_text}"]
        for name, norm in self.norms().items():
            lines.append(f"  norm[{name}] = {norm:.12g}")
        for name, dev in sorted(self.deviations.items()):
            lines.append(f"  dev[{name}] = {dev:.3e}")
        lines.append(
            f"  max deviation {self.max_deviation:.3e} "
            f"{'PASS' if self.passed else 'FAIL'} (tol {self.tolerance:.0e})"
        )
        return "\n".join(lines)


def _symbol_norm(sym: SymbolExpr) -> float:
    return float(np.sqrt(sum(abs(c) ** 2 for c in sym.value.terms.values())))


def evolve_word(
    word: Word,
    pool: GeneratorPool | None = None,
    methods: tuple[str, ...] = ("matrix", "convolution", "pathint"),
    include_odd_cross: bool = True,
    tolerance: float = WORD_TOLERANCE,
) -> EvolutionReport:
    """Evaluate a word by the requested methods and compare them pairwise."""
    pool = pool or GeneratorPool()
    matrix = word_matrix(word, pool)
    matrix_sym = covariant_symbol(matrix, pool)
    conv = word_symbol_convolution(word, pool)
    path = None
    if "pathint" in methods:
        path = word_symbol_path_integral(word, pool, include_odd_cross)
    deviations = {"matrix_vs_convolution": symbol_max_dev(matrix_sym, conv)}
    if path is not None:
        deviations["matrix_vs_pathint"] = symbol_max_dev(matrix_sym, path)
        deviations["convolution_vs_pathint"] = symbol_max_dev(conv, path)
    return EvolutionReport(word, matrix, matrix_sym, conv, path, deviations, tolerance)


def autonomous_evolve(
    h_sym: SymbolExpr,
    h_mat: FockOperator,
    t: float,
    n_slices: int,
    pool: GeneratorPool | None = None,
    tolerance: float = 1e-2,
) -> EvolutionReport:
    """Time-sliced evolution under a Hermitian generator.

    Each slice contributes the exponent generator ``-i dt H`` written on
    neighbouring trajectory slices; the reference is the exact matrix
    exponential from a dense eigendecomposition.  The per-slice symbol is
    first-order in dt, so the deviation must shrink as slices are refined.
    """
    if n_slices < 1:
        raise ValueError("need at least one slice")
    if not h_mat.is_square:
        raise ValueError("generator must be square")
    pool = pool or h_sym.pool
    dev_h = float(np.abs(h_mat.entries - h_mat.entries.conj().T).max())
    if dev_h > 1e-10:
        raise ValueError(f"generator is not Hermitian (deviation {dev_h:.3e})")
    check = covariant_symbol(h_mat, pool)
    if symbol_max_dev(check, h_sym) > 1e-10:
        raise ValueError("symbol does not match the matrix generator")

    dt = t / n_slices
    step = h_sym.value * (-1j * dt)
    generators = [step] * n_slices
    sources = [h_sym] * n_slices
    action = _step_generators(pool, generators, sources, h_sym.n_out)
    path = integrate_action(action, pool)

    step_sym = SymbolExpr(grassmann_exp(step), h_sym.out_gens, h_sym.in_gens, "covariant")
    conv = step_sym
    for _ in range(n_slices - 1):
        conv = convolve(step_sym, conv)

    exact = fock.hermitian_evolution(h_mat, t)
    exact_sym = covariant_symbol(exact, pool)
    word = tuple(Letter("autonomous-step", dt) for _ in range(n_slices))
    deviations = {
        "matrix_vs_pathint": symbol_max_dev(exact_sym, path),
        "matrix_vs_convolution": symbol_max_dev(exact_sym, conv),
        "convolution_vs_pathint": symbol_max_dev(conv, path),
    }
    return EvolutionReport(word, exact, exact_sym, conv, path, deviations, tolerance)


__all__ = [
    "Letter",
    "Word",
    "DiscreteAction",
    "EvolutionReport",
    "EmptyWordError",
    "MissingExponentialFormError",
    "WORD_TOLERANCE",
    "autonomous_evolve",
    "build_discrete_action",
    "evolve_word",
    "integrate_action",
    "parse_word",
    "word_matrix",
    "word_symbol_convolution",
    "word_symbol_path_integral",
]
