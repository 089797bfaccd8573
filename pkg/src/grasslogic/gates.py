"""Named gate constructors bundling every representation of a gate.

Each gate carries its matrix, matrix symbol, covariant symbol (square gates
only), differential-operator form, and, for the parametric family, the
exponential generator.  All representations are cross-checked against each
other at construction time, so a Gate instance is internally consistent by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fock
from .fock import FockOperator
from .grassmann import GeneratorPool, GrassmannElement, grassmann_exp, max_abs_diff
from .symbols import (
    FBOperator,
    SymbolExpr,
    fb_apply,
    matrix_symbol,
    normalize_matrix_symbol,
    projected_fb_operator,
    state_symbol,
    symbol_max_dev,
    to_fb_operator,
)

CROSS_CHECK_TOL = 1e-12

#: Gates with an exponential generator: covariant symbol minus one squares
#: to zero for these, so the finite exponential reproduces the symbol.
_EXPONENTIAL_GATES = {"deutsch", "deutsch_prime", "identity"}


class GateConsistencyError(RuntimeError):
    """A gate's representations disagree beyond tolerance."""


@dataclass(frozen=True)
class Gate:
    """Immutable bundle of one gate's representations."""

    name: str
    param: float | None
    n_in: int
    n_out: int
    matrix: FockOperator
    matrix_sym: SymbolExpr
    covariant_sym: SymbolExpr | None
    fb: FBOperator
    exp_generator: GrassmannElement | None

    @property
    def symbol(self) -> SymbolExpr:
        """Covariant symbol when square, matrix symbol otherwise."""
        return self.covariant_sym if self.covariant_sym is not None else self.matrix_sym

    @property
    def is_square(self) -> bool:
        return self.n_in == self.n_out

    @property
    def pool(self) -> GeneratorPool:
        return self.matrix_sym.pool

    def __repr__(self) -> str:
        arg = "" if self.param is None else f"({self.param:g})"
        return f"<Gate {self.name}{arg} {self.n_out}<-{self.n_in}>"


def gate_names() -> tuple[str, ...]:
    return tuple(fock.GATE_SHAPES)


def gate_arity(name: str) -> tuple[int, int]:
    if name not in fock.GATE_SHAPES:
        raise ValueError(f"unknown gate name: {name!r}")
    n_in, n_out, _ = fock.GATE_SHAPES[name]
    return n_in, n_out


def is_parametric(name: str) -> bool:
    if name not in fock.GATE_SHAPES:
        raise ValueError(f"unknown gate name: {name!r}")
    return fock.GATE_SHAPES[name][2]


def gate_from_matrix(
    pool: GeneratorPool,
    name: str,
    matrix: FockOperator,
    param: float | None = None,
    exponential_form: bool = False,
) -> Gate:
    """Populate and cross-check every representation from a matrix."""
    msym = matrix_symbol(matrix, pool)
    cov = normalize_matrix_symbol(msym) if matrix.is_square else None
    fb = to_fb_operator(matrix) if matrix.is_square else projected_fb_operator(matrix, pool)

    exp_gen = None
    if exponential_form:
        if cov is None:
            raise GateConsistencyError(f"{name}: exponential form needs a square gate")
        exp_gen = cov.value - 1.0
        dev = max_abs_diff(grassmann_exp(exp_gen), cov.value)
        if dev > CROSS_CHECK_TOL:
            raise GateConsistencyError(f"{name}: exponential form deviates by {dev:.3e}")

    _check_representations(name, matrix, msym, cov, fb, pool)
    return Gate(
        name=name,
        param=param,
        n_in=matrix.n_in,
        n_out=matrix.n_out,
        matrix=matrix,
        matrix_sym=msym,
        covariant_sym=cov,
        fb=fb,
        exp_generator=exp_gen,
    )


def _check_representations(name, matrix, msym, cov, fb, pool) -> None:
    if cov is not None:
        roundtrip = normalize_matrix_symbol(msym)
        dev = symbol_max_dev(roundtrip, cov)
        if dev > CROSS_CHECK_TOL:
            raise GateConsistencyError(f"{name}: covariant symbol round trip off by {dev:.3e}")
    # differential form must act exactly like the matrix on every basis state
    worst = 0.0
    for idx in range(2**matrix.n_in):
        vec = fock.basis_state(idx, matrix.n_in)
        f = state_symbol(vec, pool)
        lhs = fb_apply(fb, f)
        rhs = state_symbol(matrix @ vec, pool)
        worst = max(worst, symbol_max_dev(lhs, rhs))
    if worst > CROSS_CHECK_TOL:
        raise GateConsistencyError(f"{name}: differential form deviates by {worst:.3e}")


def make_gate(pool: GeneratorPool, name: str, param: float | None = None) -> Gate:
    """Build a library gate by name; ``param`` for the parametric family."""
    matrix = fock.gate_matrix(name, param)
    return gate_from_matrix(
        pool, name, matrix, param=param, exponential_form=name in _EXPONENTIAL_GATES
    )


def deutsch_prime(pool: GeneratorPool, phi: float) -> Gate:
    """One-parameter semigroup member: the phase-corrected parametric gate."""
    return make_gate(pool, "deutsch_prime", phi)
