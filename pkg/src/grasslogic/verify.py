"""Verification suites behind the ``verify`` command.

Each check recomputes its oracle side at run time (matrix products, brute
force truth tables, dense inner products) and reports the worst deviation
of the symbolic route against it.  The same functions back the acceptance
tests, which pin the tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .automaton import (
    Letter,
    autonomous_evolve,
    evolve_word,
    word_matrix,
    word_symbol_convolution,
    word_symbol_path_integral,
)
from .compose import CircuitNode, Wire, build_circuit, fb_compose, plug_input
from .gates import make_gate
from .grassmann import (
    GeneratorPool,
    GrassmannElement,
    berezin_integrate,
    grassmann_exp,
    left_derivative,
    max_abs_diff,
)
from .symbols import (
    apply_symbol,
    canonical_coeffs,
    coherent_ket,
    convolve,
    covariant_symbol,
    fb_apply,
    fock_from_state_symbol,
    resolution_of_identity_check,
    scalar_product,
    state_symbol,
    symbol_max_dev,
    to_fb_operator,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: max_dev={self.deviation:.3e} tol={self.tolerance:.0e} {status}"


def _random_element(pool, rng, gens, max_terms=6, nilpotent=False) -> GrassmannElement:
    terms = {}
    n = len(gens)
    for _ in range(rng.integers(1, max_terms + 1)):
        mask_cells = int(rng.integers(1 if nilpotent else 0, 2**n))
        mask = 0
        for i in range(n):
            if mask_cells >> i & 1:
                mask |= 1 << gens[i].index
        terms[mask] = complex(rng.normal(), rng.normal())
    return pool.element(terms)


def _random_operator(rng, n) -> fock.FockOperator:
    dim = 2**n
    return fock.FockOperator(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)), n, n)


# ---- algebra ---------------------------------------------------------------


def check_associativity(samples: int = 40, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    gens = [pool.fresh(f"θ{i}") for i in range(1, 7)]
    worst = 0.0
    for _ in range(samples):
        a, b, c = (_random_element(pool, rng, gens) for _ in range(3))
        worst = max(worst, max_abs_diff((a * b) * c, a * (b * c)))
    return CheckResult("algebra.associativity", worst, 1e-12)


def check_graded_commutativity(seed: int = 12) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    gens = [pool.fresh(f"θ{i}") for i in range(1, 7)]
    worst = 0.0
    for _ in range(40):
        x = _random_element(pool, rng, gens)
        y = _random_element(pool, rng, gens)
        for a in x.parity_split():
            for b in y.parity_split():
                if a.is_zero or b.is_zero:
                    continue
                sign = -1.0 if (a.parity and b.parity) else 1.0
                worst = max(worst, max_abs_diff(a * b, b * a * sign))
    return CheckResult("algebra.graded_commutativity", worst, 1e-12)


def check_derivative_nilpotency(seed: int = 13) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    gens = [pool.fresh(f"θ{i}") for i in range(1, 7)]
    worst = 0.0
    for _ in range(20):
        x = _random_element(pool, rng, gens)
        for g in gens:
            d2 = left_derivative(left_derivative(x, g), g)
            worst = max(worst, max_abs_diff(d2, pool.zero()))
    return CheckResult("algebra.derivative_nilpotency", worst, 1e-15)


def check_involution_antihomomorphism(seed: int = 14) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    pairs = pool.pairs("θ", 4)
    gens = [g for pair in pairs for g in pair]
    worst = 0.0
    for _ in range(40):
        x = _random_element(pool, rng, gens)
        y = _random_element(pool, rng, gens)
        worst = max(worst, max_abs_diff((x * y).involution(), y.involution() * x.involution()))
        worst = max(worst, max_abs_diff(x.involution().involution(), x))
    return CheckResult("algebra.involution_antihomomorphism", worst, 1e-12)


def check_fubini_sign(seed: int = 15) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    gens = [pool.fresh(f"θ{i}") for i in range(1, 7)]
    worst = 0.0
    for _ in range(20):
        x = _random_element(pool, rng, gens)
        a, b = gens[0], gens[1]
        one_way = berezin_integrate(x, [a, b])
        other = berezin_integrate(x, [b, a])
        worst = max(worst, max_abs_diff(one_way, -1.0 * other))
    return CheckResult("algebra.fubini_sign", worst, 1e-15)


def check_pair_measure_orientation() -> CheckResult:
    pool = GeneratorPool()
    plain, star = pool.pair("γ")
    kernel = grassmann_exp(-1.0 * (pool.gen(star) * pool.gen(plain)))
    value = berezin_integrate(kernel, [star, plain])
    return CheckResult(
        "algebra.pair_measure_orientation", max_abs_diff(value, pool.one()), 1e-15
    )


def check_exp_composition_rule(samples: int = 100, seed: int = 16) -> CheckResult:
    """exp(x) exp(y) = exp(x + y + x_odd y_odd) on random nilpotent pairs."""
    rng = np.random.default_rng(seed)
    pool = GeneratorPool()
    gens = [pool.fresh(f"θ{i}") for i in range(1, 9)]
    worst = 0.0
    for _ in range(samples):
        x = _random_element(pool, rng, gens, nilpotent=True)
        y = _random_element(pool, rng, gens, nilpotent=True)
        lhs = grassmann_exp(x) * grassmann_exp(y)
        cross = x.parity_split()[1] * y.parity_split()[1]
        rhs = grassmann_exp(x + y + cross)
        worst = max(worst, max_abs_diff(lhs, rhs))
    return CheckResult("algebra.exp_composition_rule", worst, 1e-10)


def suite_algebra() -> list[CheckResult]:
    return [
        check_associativity(),
        check_graded_commutativity(),
        check_derivative_nilpotency(),
        check_involution_antihomomorphism(),
        check_fubini_sign(),
        check_pair_measure_orientation(),
        check_exp_composition_rule(),
    ]


# ---- symbols ----------------------------------------------------------------


def check_anticommutation(max_cells: int = 4) -> CheckResult:
    worst = 0.0
    for n in range(1, max_cells + 1):
        eye = np.eye(2**n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                ap = fock.creation(i, n).entries
                am = fock.annihilation(j, n).entries
                delta = eye if i == j else 0.0
                worst = max(worst, float(np.abs(ap @ am + am @ ap - delta).max()))
                ap2 = fock.creation(j, n).entries
                worst = max(worst, float(np.abs(ap @ ap2 + ap2 @ ap).max()))
                am2 = fock.annihilation(i, n).entries
                worst = max(worst, float(np.abs(am2 @ am + am @ am2).max()))
    return CheckResult("symbols.anticommutation", worst, 0.0)


def check_identity_resolution(max_cells: int = 3) -> CheckResult:
    worst = 0.0
    for n in range(1, max_cells + 1):
        pool = GeneratorPool()
        mat = resolution_of_identity_check(n, pool)
        worst = max(worst, float(np.abs(mat - np.eye(2**n)).max()))
    return CheckResult("symbols.identity_resolution", worst, 1e-12)


def check_eigenstate_property(max_cells: int = 3) -> CheckResult:
    worst = 0.0
    for n in range(1, max_cells + 1):
        pool = GeneratorPool()
        pairs = pool.pairs("β", n)
        plains = [p for p, _ in pairs]
        ket = coherent_ket(pool, plains)
        for k in range(1, n + 1):
            lhs = ket.apply(fock.annihilation(k, n))
            rhs = ket.scale_right(pool.gen(plains[k - 1]))
            worst = max(
                worst,
                max(max_abs_diff(a, b) for a, b in zip(lhs.entries, rhs.entries)),
            )
    return CheckResult("symbols.eigenstate_property", worst, 1e-15)


def check_ladder_correspondence(max_cells: int = 3) -> CheckResult:
    """Covariant symbols of the ladder operators are the bare generators."""
    worst = 0.0
    for n in range(1, max_cells + 1):
        for k in range(1, n + 1):
            pool = GeneratorPool()
            sym = covariant_symbol(fock.annihilation(k, n), pool)
            expected = {(0, 1 << (k - 1)): 1.0 + 0j}
            worst = max(worst, _coeff_dev(canonical_coeffs(sym), expected))
            pool = GeneratorPool()
            sym = covariant_symbol(fock.creation(k, n), pool)
            expected = {(1 << (k - 1), 0): 1.0 + 0j}
            worst = max(worst, _coeff_dev(canonical_coeffs(sym), expected))
    return CheckResult("symbols.ladder_correspondence", worst, 1e-15)


def _coeff_dev(got: dict, expected: dict) -> float:
    keys = set(got) | set(expected)
    if not keys:
        return 0.0
    return max(abs(got.get(k, 0j) - expected.get(k, 0j)) for k in keys)


def check_convolution_homomorphism(pairs_per_n: int = 50, seed: int = 21) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(pairs_per_n):
            a = _random_operator(rng, n)
            b = _random_operator(rng, n)
            pool = GeneratorPool()
            sym = convolve(covariant_symbol(a, pool), covariant_symbol(b, pool))
            direct = covariant_symbol(a @ b, pool)
            worst = max(worst, symbol_max_dev(sym, direct))
    return CheckResult("symbols.convolution_homomorphism", worst, 1e-10)


def check_apply_symbol(seed: int = 22) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(10):
            a = _random_operator(rng, n)
            vec = fock.FockVector(rng.normal(size=2**n) + 1j * rng.normal(size=2**n), n)
            pool = GeneratorPool()
            out = apply_symbol(covariant_symbol(a, pool), state_symbol(vec, pool))
            direct = state_symbol(a @ vec, pool)
            worst = max(worst, symbol_max_dev(out, direct))
    return CheckResult("symbols.apply_symbol", worst, 1e-10)


def check_scalar_product(seed: int = 23) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(10):
            fv = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
            gv = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
            pool = GeneratorPool()
            f = state_symbol(fock.FockVector(fv, n), pool)
            g = state_symbol(fock.FockVector(gv, n), pool)
            worst = max(worst, abs(scalar_product(f, g) - complex(np.vdot(fv, gv))))
    return CheckResult("symbols.scalar_product", worst, 1e-12)


def check_fb_faithfulness() -> CheckResult:
    worst = 0.0
    for name in ("identity", "not", "cc_not", "deutsch", "deutsch_prime"):
        pool = GeneratorPool()
        gate = make_gate(pool, name, 0.3 if name.startswith("deutsch") else None)
        for idx in range(2**gate.n_in):
            vec = fock.basis_state(idx, gate.n_in)
            lhs = fb_apply(gate.fb, state_symbol(vec, pool))
            rhs = state_symbol(gate.matrix @ vec, pool)
            worst = max(worst, symbol_max_dev(lhs, rhs))
    for name in ("and", "or", "xor", "nand"):
        pool = GeneratorPool()
        gate = make_gate(pool, name)
        for idx in range(2**gate.n_in):
            vec = fock.basis_state(idx, gate.n_in)
            lhs = fb_apply(gate.fb, state_symbol(vec, pool))
            rhs = state_symbol(gate.matrix @ vec, pool)
            worst = max(worst, symbol_max_dev(lhs, rhs))
    return CheckResult("symbols.fb_faithfulness", worst, 1e-12)


def suite_symbols() -> list[CheckResult]:
    return [
        check_anticommutation(),
        check_identity_resolution(),
        check_eigenstate_property(),
        check_ladder_correspondence(),
        check_convolution_homomorphism(),
        check_apply_symbol(),
        check_scalar_product(),
        check_fb_faithfulness(),
    ]


# ---- gates -------------------------------------------------------------------


def _printed_form_dev(name: str, expected: dict, kind: str = "covariant") -> float:
    pool = GeneratorPool()
    mat = fock.gate_matrix(name)
    if kind == "covariant":
        sym = covariant_symbol(mat, pool)
    else:
        from .symbols import matrix_symbol

        sym = matrix_symbol(mat, pool)
    return _coeff_dev(canonical_coeffs(sym), expected)


def check_printed_closed_forms() -> CheckResult:
    """Closed forms of the simple gates, coefficient for coefficient."""
    worst = 0.0
    worst = max(worst, _printed_form_dev("not", {(1, 0): 1, (0, 1): 1}))
    worst = max(
        worst,
        _printed_form_dev("and", {(0, 0): 1, (0, 1): 1, (0, 2): 1, (1, 3): 1}, kind="matrix"),
    )
    worst = max(
        worst,
        _printed_form_dev("or", {(0, 0): 1, (1, 1): 1, (1, 2): 1, (1, 3): 1}, kind="matrix"),
    )
    return CheckResult("gates.simple_closed_forms", worst, 1e-12)


def deutsch_family_expected(phi: float) -> dict:
    """Projector-derived covariant coefficients of the parametric gate."""
    ic = 1j * math.cos(phi)
    s = math.sin(phi)
    return {(0, 0): 1, (6, 6): 1 - ic, (6, 7): -s, (7, 6): -s}


def check_deutsch_forms() -> CheckResult:
    worst = 0.0
    pool = GeneratorPool()
    cc = covariant_symbol(fock.gate_matrix("cc_not"), pool)
    worst = max(worst, _coeff_dev(canonical_coeffs(cc), deutsch_family_expected(math.pi / 2)))
    for phi in (0.0, 0.3, math.pi / 2, 1.7):
        pool = GeneratorPool()
        sym = covariant_symbol(fock.gate_matrix("deutsch", phi), pool)
        worst = max(worst, _coeff_dev(canonical_coeffs(sym), deutsch_family_expected(phi)))
    return CheckResult("gates.deutsch_family_forms", worst, 1e-12)


def check_toffoli_identities() -> CheckResult:
    cc = fock.gate_matrix("cc_not").entries
    d = fock.gate_matrix("deutsch", math.pi / 2).entries
    worst = float(np.abs(cc - d).max())
    # classical truth table: flips cell 1 exactly when cells 2 and 3 are set
    for idx in range(8):
        expected = idx ^ 1 if (idx >> 1 & 1) and (idx >> 2 & 1) else idx
        col = cc[:, idx]
        worst = max(worst, float(np.abs(col - np.eye(8)[expected]).max()))
    worst = max(worst, float(np.abs(cc @ cc - np.eye(8)).max()))
    return CheckResult("gates.toffoli_identities", worst, 1e-12)


def check_unitarity() -> CheckResult:
    worst = 0.0
    for phi in (0.0, 0.3, math.pi / 2, 1.7, math.pi):
        for name in ("deutsch", "deutsch_prime"):
            u = fock.gate_matrix(name, phi).entries
            worst = max(worst, float(np.abs(u.conj().T @ u - np.eye(8)).max()))
    u = fock.gate_matrix("cc_not").entries
    worst = max(worst, float(np.abs(u.conj().T @ u - np.eye(8)).max()))
    return CheckResult("gates.unitarity", worst, 1e-12)


def check_semigroup() -> CheckResult:
    worst = 0.0
    for a, b in ((0.3, 0.4), (math.pi / 2, math.pi / 2), (1.0, -1.0)):
        lhs = fock.gate_matrix("deutsch_prime", a).entries @ fock.gate_matrix("deutsch_prime", b).entries
        rhs = fock.gate_matrix("deutsch_prime", a + b).entries
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return CheckResult("gates.semigroup", worst, 1e-10)


def check_boolean_scan() -> CheckResult:
    """The semigroup family is a classical gate exactly when it is the identity."""
    worst = 0.0
    for k in range(17):
        phi = k * math.pi / 8
        u = fock.gate_matrix("deutsch_prime", phi).entries
        boolean = bool(np.all(np.abs(u * (1 - u)) < 1e-9) and np.all(np.abs(u.imag) < 1e-9))
        identity = bool(np.abs(u - np.eye(8)).max() < 1e-9)
        if boolean != identity:
            worst = max(worst, 1.0)
    return CheckResult("gates.boolean_scan", worst, 0.0)


def check_exponential_forms() -> CheckResult:
    worst = 0.0
    for phi in (0.0, 0.3, math.pi / 2, 1.7):
        pool = GeneratorPool()
        gate = make_gate(pool, "deutsch", phi)
        worst = max(
            worst,
            max_abs_diff(grassmann_exp(gate.exp_generator), gate.covariant_sym.value),
        )
        odd = gate.exp_generator.parity_split()[1]
        expected_odd = {(6, 7): -math.sin(phi), (7, 6): -math.sin(phi)}
        got = canonical_coeffs(
            type(gate.covariant_sym)(odd, gate.covariant_sym.out_gens, gate.covariant_sym.in_gens, "covariant")
        )
        worst = max(worst, _coeff_dev(got, expected_odd))
    return CheckResult("gates.exponential_forms", worst, 1e-12)


def check_fb_printed_not() -> CheckResult:
    fbop = to_fb_operator(fock.gate_matrix("not"))
    expected = {(1, ()): 1.0 + 0j, (0, (0,)): 1.0 + 0j}
    got = {(s, t): c for s, t, c in fbop.terms}
    worst = _coeff_dev(got, expected)
    return CheckResult("gates.fb_not_form", worst, 1e-15)


def suite_gates() -> list[CheckResult]:
    return [
        check_printed_closed_forms(),
        check_deutsch_forms(),
        check_toffoli_identities(),
        check_unitarity(),
        check_semigroup(),
        check_boolean_scan(),
        check_exponential_forms(),
        check_fb_printed_not(),
    ]


# ---- composer ----------------------------------------------------------------


def _classical_table(gate) -> list[int]:
    out = []
    for idx in range(2**gate.n_in):
        col = gate.matrix.entries[:, idx]
        nz = np.nonzero(np.abs(col) > 1e-9)[0]
        if len(nz) != 1 or abs(col[nz[0]] - 1) > 1e-9:
            raise AssertionError("composite is not classical on basis states")
        out.append(int(nz[0]))
    return out


def check_composite_truth_tables() -> CheckResult:
    pool = GeneratorPool()
    a = make_gate(pool, "and")
    o = make_gate(pool, "or")
    table1 = _classical_table(plug_input(a, 2, o))
    table2 = _classical_table(plug_input(a, 1, o))
    worst = 0.0
    for idx in range(8):
        n1, n2, n3 = idx & 1, idx >> 1 & 1, idx >> 2 & 1
        worst = max(worst, abs(table1[idx] - (n1 & (n2 | n3))))
        worst = max(worst, abs(table2[idx] - ((n1 | n2) & n3)))
    return CheckResult("composer.truth_tables", float(worst), 0.0)


def check_composite_fb_routes() -> CheckResult:
    worst = 0.0
    tree1 = CircuitNode("and", (Wire(1), CircuitNode("or", (Wire(2), Wire(3)))))
    tree2 = CircuitNode("and", (CircuitNode("or", (Wire(1), Wire(2))), Wire(3)))
    for tree in (tree1, tree2):
        pool = GeneratorPool()
        gate = build_circuit(pool, tree)
        fb = fb_compose(pool, tree)
        for idx in range(2**gate.n_in):
            vec = fock.basis_state(idx, gate.n_in)
            lhs = fb_apply(fb, state_symbol(vec, pool))
            rhs = state_symbol(gate.matrix @ vec, pool)
            worst = max(worst, symbol_max_dev(lhs, rhs))
    return CheckResult("composer.fb_routes", worst, 1e-12)


def check_even_split_degeneracy() -> CheckResult:
    """Plugging a gate with a purely even symbol must reduce to plain
    factorization: the odd branch contributes nothing."""
    pool = GeneratorPool()
    x = make_gate(pool, "xor")
    parity = {m.bit_count() & 1 for m in x.matrix_sym.value.terms}
    worst = 0.0 if parity == {0} else 1.0
    a = make_gate(pool, "and")
    composite = plug_input(a, 1, x)  # raises if the routes disagree
    worst = max(worst, 0.0 if composite.n_in == 3 else 1.0)
    return CheckResult("composer.even_split_degeneracy", worst, 0.0)


def check_classical_closure() -> CheckResult:
    trees = [
        CircuitNode("nand", (Wire(1), CircuitNode("and", (Wire(2), Wire(3))))),
        CircuitNode("xor", (CircuitNode("or", (Wire(1), Wire(2))), Wire(3))),
        CircuitNode("not", (CircuitNode("and", (Wire(1), Wire(2))),)),
    ]
    worst = 0.0
    for tree in trees:
        pool = GeneratorPool()
        gate = build_circuit(pool, tree)
        _classical_table(gate)  # raises if any column is not a basis vector
    return CheckResult("composer.classical_closure", worst, 0.0)


def suite_composer() -> list[CheckResult]:
    return [
        check_composite_truth_tables(),
        check_composite_fb_routes(),
        check_even_split_degeneracy(),
        check_classical_closure(),
    ]


# ---- automaton ----------------------------------------------------------------


def check_three_way_agreement(seed: int = 31) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for length in (1, 2, 3, 4):
        word = tuple(Letter("deutsch", float(rng.uniform(0, 2 * math.pi))) for _ in range(length))
        report = evolve_word(word)
        worst = max(worst, report.max_deviation)
    return CheckResult("automaton.three_way_agreement", worst, 1e-10)


def check_odd_cross_necessity() -> CheckResult:
    word = (Letter("deutsch", 0.7), Letter("deutsch", 0.7))
    conv = word_symbol_convolution(word, GeneratorPool())
    dropped = word_symbol_path_integral(word, GeneratorPool(), include_odd_cross=False)
    gap = symbol_max_dev(dropped, conv)
    # the check passes when the gap is LARGE: dropping the cross terms must break agreement
    return CheckResult("automaton.odd_cross_necessity", 0.0 if gap > 1e-6 else 1.0, 0.0)


def check_semigroup_words(seed: int = 32) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for length in (2, 3, 4):
        phis = [float(rng.uniform(-2, 2)) for _ in range(length)]
        word = tuple(Letter("deutsch_prime", p) for p in phis)
        m = word_matrix(word)
        ref = fock.gate_matrix("deutsch_prime", sum(phis))
        worst = max(worst, float(np.abs(m.entries - ref.entries).max()))
    return CheckResult("automaton.semigroup_words", worst, 1e-10)


def check_autonomous_convergence() -> CheckResult:
    h = fock.FockOperator(np.array([[0, 1], [1, 0]], dtype=complex), 1, 1)
    pool = GeneratorPool()
    h_sym = covariant_symbol(h, pool)
    errors = []
    for n in (4, 8, 16, 32):
        report = autonomous_evolve(h_sym, h, 1.0, n, pool)
        errors.append(report.deviations["matrix_vs_pathint"])
    monotone = all(errors[i + 1] < errors[i] for i in range(len(errors) - 1))
    return CheckResult("automaton.slicing_monotonicity", 0.0 if monotone else 1.0, 0.0)


def suite_automaton() -> list[CheckResult]:
    return [
        check_three_way_agreement(),
        check_odd_cross_necessity(),
        check_semigroup_words(),
        check_autonomous_convergence(),
    ]


SCOPES = {
    "algebra": suite_algebra,
    "symbols": suite_symbols,
    "gates": suite_gates,
    "composer": suite_composer,
    "automaton": suite_automaton,
}


def run_scope(scope: str) -> list[CheckResult]:
    if scope == "all":
        results = []
        for suite in SCOPES.values():
            results.extend(suite())
        return results
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; choose from {', '.join(SCOPES)} or all")
    return SCOPES[scope]()
