"""Composite gates: serial composition, input plugging, circuit folding,
and composition of differential-operator forms.

Every composite is built along two independent routes, a matrix route and a
Berezin-integral route, and the two are required to agree coefficient-wise.
A mismatch raises instead of being silently normalized away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FockOperator
from .gates import CROSS_CHECK_TOL, Gate, gate_arity, gate_from_matrix, make_gate
from .grassmann import (
    GeneratorPool,
    GrassmannElement,
    berezin_integrate,
    drop_overlapping,
    left_derivative,
    substitute,
)
from .symbols import (
    FBOperator,
    SymbolExpr,
    _bra_coefficients,
    _term_scale,
    canonical_coeffs,
    convolve,
    convolve_matrix_symbols,
    projected_fb_operator,
    symbol_max_dev,
)


class CompositionError(ValueError):
    """Arity violation or cross-representation disagreement."""


@dataclass(frozen=True)
class Wire:
    """Pass-through input cell, 1-based to match the text grammar."""

    index: int


@dataclass(frozen=True)
class CircuitNode:
    """A gate applied to a mix of wires and nested single-output circuits."""

    gate_name: str
    children: tuple["CircuitNode | Wire", ...]
    param: float | None = None

    def n_inputs(self) -> int:
        total = 0
        for child in self.children:
            total += 1 if isinstance(child, Wire) else child.n_inputs()
        return total


def serial(a: Gate, b: Gate) -> Gate:
    """Compose two gates in series (``a`` after ``b``)."""
    if a.pool is not b.pool:
        raise CompositionError("gates live in different generator pools")
    if a.n_in != b.n_out:
        raise CompositionError(
            f"serial: {a.name} expects {a.n_in} cells, {b.name} outputs {b.n_out}"
        )
    matrix = a.matrix @ b.matrix
    composite = gate_from_matrix(a.pool, f"{a.name}*{b.name}", matrix)
    if a.is_square and b.is_square:
        folded = convolve(a.covariant_sym, b.covariant_sym)
        dev = symbol_max_dev(folded, composite.covariant_sym)
    else:
        folded = convolve_matrix_symbols(a.matrix_sym, b.matrix_sym)
        dev = symbol_max_dev(folded, composite.matrix_sym)
    if dev > CROSS_CHECK_TOL:
        raise CompositionError(f"serial: symbol and matrix routes disagree by {dev:.3e}")
    return composite


def _embedded_matrix(a: Gate, k: int, b: Gate) -> FockOperator:
    """Tensor-embed ``b`` at input slot ``k`` of ``a`` and compose."""
    before = np.eye(2 ** (k - 1), dtype=complex)
    after = np.eye(2 ** (a.n_in - k), dtype=complex)
    embed = np.kron(after, np.kron(b.matrix.entries, before))
    total_in = a.n_in + b.n_in - 1
    return a.matrix @ FockOperator(embed, total_in, a.n_in)


def _plug_symbol(a: Gate, k: int, b: Gate, pool: GeneratorPool) -> SymbolExpr:
    """Matrix symbol of the plug composite by the even/odd split integral.

    The gate ``b`` feeds slot ``k`` of ``a`` through a fresh pair that is
    integrated out against the normalized Gaussian.  The odd part of ``b``'s
    symbol is carried across the trailing coherent factors by flipping the
    sign of the trailing input generators inside ``a``'s symbol.
    """
    total_in = a.n_in + b.n_in - 1
    in_pairs = pool.pairs("β", total_in)
    in_plains = [p for p, _ in in_pairs]
    mid_plain, mid_star = pool.pair("γ")

    plain_map: dict = {}
    flipped_map: dict = {}
    for j in range(1, a.n_in + 1):
        gen_a = a.matrix_sym.in_gens[j - 1]
        if j < k:
            image = pool.gen(in_plains[j - 1])
            plain_map[gen_a] = image
            flipped_map[gen_a] = image
        elif j == k:
            plain_map[gen_a] = pool.gen(mid_plain)
            flipped_map[gen_a] = pool.gen(mid_plain)
        else:
            image = pool.gen(in_plains[j + b.n_in - 2])
            plain_map[gen_a] = image
            flipped_map[gen_a] = -1.0 * image  # trailing block sign flip

    a_plain = substitute(a.matrix_sym.value, plain_map)
    a_flipped = substitute(a.matrix_sym.value, flipped_map)

    b_map = {b.matrix_sym.out_gens[0]: pool.gen(mid_star)}
    for i in range(b.n_in):
        b_map[b.matrix_sym.in_gens[i]] = pool.gen(in_plains[k - 1 + i])
    b_value = substitute(b.matrix_sym.value, b_map)
    b_even, b_odd = b_value.parity_split()

    integrand = a_plain * b_even + a_flipped * b_odd
    integrand = integrand * (pool.one() - pool.gen(mid_star) * pool.gen(mid_plain))
    value = berezin_integrate(integrand, [mid_star, mid_plain])
    return SymbolExpr(value, a.matrix_sym.out_gens, tuple(in_plains), "matrix")


def plug_input(a: Gate, k: int, b: Gate) -> Gate:
    """Replace the k-th input of ``a`` with the single-output gate ``b``."""
    if a.pool is not b.pool:
        raise CompositionError("gates live in different generator pools")
    if b.n_out != 1:
        raise CompositionError(f"plug_input needs a single-output gate, got {b.n_out}")
    if not 1 <= k <= a.n_in:
        raise CompositionError(f"input position {k} out of range 1..{a.n_in}")
    pool = a.pool
    matrix = _embedded_matrix(a, k, b)
    composite = gate_from_matrix(pool, f"{a.name}[{k}<-{b.name}]", matrix)
    formula = _plug_symbol(a, k, b, pool)
    dev = symbol_max_dev(formula, composite.matrix_sym)
    if dev > CROSS_CHECK_TOL:
        raise CompositionError(
            f"plug_input: split-formula symbol and matrix route disagree by {dev:.3e}"
        )
    return composite


def _validate_wires(node: CircuitNode) -> None:
    leaves: list[int] = []

    def walk(n):
        for child in n.children:
            if isinstance(child, Wire):
                leaves.append(child.index)
            else:
                walk(child)

    walk(node)
    if leaves != list(range(1, len(leaves) + 1)):
        raise CompositionError(
            "wire indices must be w1, w2, ... consecutively from left to right"
        )


def build_circuit(pool: GeneratorPool, node: CircuitNode) -> Gate:
    """Fold a circuit tree into a fully cross-checked composite gate."""
    _validate_wires(node)
    return _build(pool, node)


def _build(pool: GeneratorPool, node: CircuitNode) -> Gate:
    gate = make_gate(pool, node.gate_name, node.param)
    if len(node.children) != gate.n_in:
        raise CompositionError(
            f"{node.gate_name} takes {gate.n_in} inputs, got {len(node.children)}"
        )
    composite = gate
    position = 1
    for child in node.children:
        if isinstance(child, Wire):
            position += 1
            continue
        sub = _build(pool, child)
        composite = plug_input(composite, position, sub)
        position += sub.n_in
    return composite


# ---- differential-operator composition ---------------------------------------


def _fb_block_apply(
    pool: GeneratorPool,
    op: FBOperator,
    value: GrassmannElement,
    in_vars: list,
    out_vars: list,
) -> GrassmannElement:
    """Apply a projected differential form on a block of variables, leaving
    spectator generators untouched."""
    in_mask = 0
    for g in in_vars:
        in_mask |= 1 << g.index
    acc = pool.zero()
    for smask, tcells, coeff in op.terms:
        g = value
        for t in reversed(tcells):
            g = left_derivative(g, in_vars[t])
        g = drop_overlapping(g, in_mask)
        if g.is_zero:
            continue
        mono = pool.one()
        for s in range(op.n_out):
            if smask >> s & 1:
                mono = mono * pool.gen(out_vars[s])
        acc = acc + mono * g * coeff
    return acc


def fb_compose(pool: GeneratorPool, node: CircuitNode) -> FBOperator:
    """Differential-operator form of a circuit, built by composing the
    children's forms rather than from the composite matrix."""
    _validate_wires(node)
    total_in = node.n_inputs()
    in_pairs = pool.pairs("β", total_in)
    in_stars = [s for _, s in in_pairs]
    next_wire = iter(range(total_in))

    def build_action(n: CircuitNode):
        gate = make_gate(pool, n.gate_name, n.param)
        if len(n.children) != gate.n_in:
            raise CompositionError(
                f"{n.gate_name} takes {gate.n_in} inputs, got {len(n.children)}"
            )
        child_fns = []
        my_vars = []
        for child in n.children:
            if isinstance(child, Wire):
                my_vars.append(in_stars[next(next_wire)])
            else:
                if gate_arity(child.gate_name)[1] != 1:
                    raise CompositionError("nested circuits must have a single output")
                fn, child_out = build_action(child)
                child_fns.append(fn)
                my_vars.append(child_out[0])
        fbop = projected_fb_operator(gate.matrix, pool)
        node_out = [pool.pair("γ")[1] for _ in range(gate.n_out)]

        def action(value: GrassmannElement) -> GrassmannElement:
            for fn in child_fns:
                value = fn(value)
            return _fb_block_apply(pool, fbop, value, my_vars, node_out)

        return action, node_out

    action, out_list = build_action(node)
    n_out = gate_arity(node.gate_name)[1]

    # normalize the composed action into a term list by probing it with
    # every input basis monomial
    bras_in = _bra_coefficients(pool, in_stars)
    terms = []
    for tmask in range(2**total_in):
        tcells = tuple(i for i in range(total_in) if tmask >> i & 1)
        result = action(bras_in[tmask])
        probe = SymbolExpr(result, tuple(out_list), (), "state")
        coeffs = canonical_coeffs(probe)
        for (omask, imask), c in coeffs.items():
            if imask:
                raise CompositionError("composed action leaked input generators")
            scale = _term_scale(pool, omask, tcells, n_out, total_in)
            # express against the descending output monomial convention
            k = omask.bit_count()
            desc_sign = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
            terms.append((omask, tcells, c * desc_sign / scale))
    return FBOperator(n_out, total_in, tuple(terms), shares_variables=False)
