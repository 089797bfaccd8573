"""Dense matrix side of the engine: qubit basis, ladder operators, gates.

Cell 1 is the least significant bit of the basis index.  Ladder operators
carry the diagonal parity factor on the cells *after* their site, which is
what makes distinct cells anticommute.  All matrices are plain complex
numpy arrays wrapped with their cell counts; rectangular operators (gates
whose input and output widths differ) are allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_AP = np.array([[0, 0], [1, 0]], dtype=complex)  # raises |0> to |1>
_AM = np.array([[0, 1], [0, 0]], dtype=complex)
_PARITY = np.array([[1, 0], [0, -1]], dtype=complex)  # third Pauli matrix


@dataclass(frozen=True)
class BasisIndex:
    """Occupation bits per cell; cell 1 is bits[0] and the low index bit."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("basis bits must be 0 or 1")

    @property
    def n_cells(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    @classmethod
    def from_index(cls, index: int, n_cells: int) -> "BasisIndex":
        if not 0 <= index < 2**n_cells:
            raise ValueError(f"index {index} out of range for {n_cells} cells")
        return cls(tuple((index >> k) & 1 for k in range(n_cells)))


def dual_pairing(bra: BasisIndex, ket: BasisIndex) -> complex:
    """Kronecker pairing of a dual basis element with a basis element.

    The dual basis is built with reversed tensor order, which leaves the
    pairing itself orthonormal.
    """
    if bra.n_cells != ket.n_cells:
        raise ValueError("bra and ket live on different cell counts")
    return 1.0 + 0j if bra.bits == ket.bits else 0j


@dataclass(frozen=True)
class FockVector:
    """State vector over the binary basis of ``n_cells`` qubit cells."""

    amplitudes: np.ndarray
    n_cells: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (2**self.n_cells,):
            raise ValueError("amplitude vector has wrong dimension")
        amp = amp.copy()
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)


def basis_state(index: int, n_cells: int) -> FockVector:
    amp = np.zeros(2**n_cells, dtype=complex)
    amp[index] = 1.0
    return FockVector(amp, n_cells)


@dataclass(frozen=True)
class FockOperator:
    """Complex matrix acting from ``n_in`` cells to ``n_out`` cells."""

    entries: np.ndarray
    n_in: int
    n_out: int

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.shape != (2**self.n_out, 2**self.n_in):
            raise ValueError(
                f"matrix shape {mat.shape} does not match cells "
                f"{self.n_out} out / {self.n_in} in"
            )
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)

    @property
    def is_square(self) -> bool:
        return self.n_in == self.n_out

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            if self.n_in != other.n_out:
                raise ValueError("cell counts do not compose")
            return FockOperator(self.entries @ other.entries, other.n_in, self.n_out)
        if isinstance(other, FockVector):
            if self.n_in != other.n_cells:
                raise ValueError("operator and vector cell counts differ")
            return FockVector(self.entries @ other.amplitudes, self.n_out)
        return NotImplemented

    def dag(self) -> "FockOperator":
        return FockOperator(self.entries.conj().T, self.n_out, self.n_in)

    @staticmethod
    def identity(n_cells: int) -> "FockOperator":
        return FockOperator(np.eye(2**n_cells, dtype=complex), n_cells, n_cells)


def _embed(site: np.ndarray, k: int, n_cells: int) -> np.ndarray:
    """Single-cell operator at cell k, identity before, parity factor after."""
    mat = np.eye(1, dtype=complex)
    for j in range(1, n_cells + 1):
        if j < k:
            factor = np.eye(2, dtype=complex)
        elif j == k:
            factor = site
        else:
            factor = _PARITY
        mat = np.kron(factor, mat)  # cell 1 stays the least significant bit
    return mat


def creation(k: int, n_cells: int) -> FockOperator:
    if not 1 <= k <= n_cells:
        raise ValueError(f"cell index {k} out of range 1..{n_cells}")
    return FockOperator(_embed(_AP, k, n_cells), n_cells, n_cells)


def annihilation(k: int, n_cells: int) -> FockOperator:
    if not 1 <= k <= n_cells:
        raise ValueError(f"cell index {k} out of range 1..{n_cells}")
    return FockOperator(_embed(_AM, k, n_cells), n_cells, n_cells)


def pauli_string_identity_checks(n_cells: int) -> dict[str, float]:
    """Single-cell consistency report for the parity-string construction."""
    if n_cells < 1:
        raise ValueError("need at least one cell")
    eye = np.eye(2)
    report = {
        "parity_squares_to_identity": float(np.abs(_PARITY @ _PARITY - eye).max()),
        "parity_anticommutes_with_raise": float(np.abs(_PARITY @ _AP + _AP @ _PARITY).max()),
        "parity_anticommutes_with_lower": float(np.abs(_PARITY @ _AM + _AM @ _PARITY).max()),
        "parity_action_on_basis": float(
            np.abs(_PARITY @ np.array([1, 0]) - np.array([1, 0])).max()
            + np.abs(_PARITY @ np.array([0, 1]) + np.array([0, 1])).max()
        ),
    }
    return report


# ---- gate matrices ----------------------------------------------------------


def _e(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def _not_matrix() -> np.ndarray:
    # raise + lower on a single cell
    return _AP + _AM


def _and_matrix() -> np.ndarray:
    # |0>(<00| + <10| + <01|) + |1><11|
    m = np.zeros((2, 4), dtype=complex)
    m += np.outer(_e(0, 2), _e(0, 4) + _e(1, 4) + _e(2, 4))
    m += np.outer(_e(1, 2), _e(3, 4))
    return m


def _or_matrix() -> np.ndarray:
    # |0><00| + |1>(<10| + <01| + <11|)
    m = np.zeros((2, 4), dtype=complex)
    m += np.outer(_e(0, 2), _e(0, 4))
    m += np.outer(_e(1, 2), _e(1, 4) + _e(2, 4) + _e(3, 4))
    return m


def _truth_table_matrix(table: dict[tuple[int, int], int]) -> np.ndarray:
    m = np.zeros((2, 4), dtype=complex)
    for (n1, n2), out in table.items():
        m[out, n1 + 2 * n2] = 1.0
    return m


def _cc_not_matrix() -> np.ndarray:
    # identity plus a rank-one update swapping the two states with both
    # controls (cells 2 and 3) set; the flipped bit is cell 1
    active0 = 0b110  # cells 2,3 set, cell 1 clear
    active1 = 0b111
    m = np.eye(8, dtype=complex)
    m += np.outer(_e(active1, 8) - _e(active0, 8), _e(active0, 8) - _e(active1, 8))
    return m


def _deutsch_matrix(phi: float) -> np.ndarray:
    active0 = 0b110
    active1 = 0b111
    ic = 1j * math.cos(phi)
    s = math.sin(phi)
    m = np.eye(8, dtype=complex)
    m += np.outer(_e(active0, 8), (ic - 1) * _e(active0, 8) + s * _e(active1, 8))
    m += np.outer(_e(active1, 8), s * _e(active0, 8) + (ic - 1) * _e(active1, 8))
    return m


def _deutsch_prime_matrix(phi: float) -> np.ndarray:
    # J is -i on the two-dimensional active block and identity elsewhere;
    # this is the unique block reading for which the family is a semigroup
    j = np.eye(8, dtype=complex)
    j[0b110, 0b110] = -1j
    j[0b111, 0b111] = -1j
    return j @ _deutsch_matrix(phi)


#: gate name -> (n_in, n_out, needs parameter)
GATE_SHAPES: dict[str, tuple[int, int, bool]] = {
    "identity": (1, 1, False),
    "not": (1, 1, False),
    "and": (2, 1, False),
    "or": (2, 1, False),
    "xor": (2, 1, False),
    "nand": (2, 1, False),
    "cc_not": (3, 3, False),
    "deutsch": (3, 3, True),
    "deutsch_prime": (3, 3, True),
}


def gate_matrix(name: str, phi: float | None = None) -> FockOperator:
    """Matrix form of a named gate; ``phi`` only for the parametric family."""
    if name not in GATE_SHAPES:
        raise ValueError(f"unknown gate name: {name!r}")
    n_in, n_out, needs_phi = GATE_SHAPES[name]
    if needs_phi and phi is None:
        raise ValueError(f"gate {name!r} requires a parameter")
    if not needs_phi and phi is not None:
        raise ValueError(f"gate {name!r} takes no parameter")
    if name == "identity":
        mat = np.eye(2, dtype=complex)
    elif name == "not":
        mat = _not_matrix()
    elif name == "and":
        mat = _and_matrix()
    elif name == "or":
        mat = _or_matrix()
    elif name == "xor":
        mat = _truth_table_matrix({(a, b): a ^ b for a in (0, 1) for b in (0, 1)})
    elif name == "nand":
        mat = _truth_table_matrix({(a, b): 1 - (a & b) for a in (0, 1) for b in (0, 1)})
    elif name == "cc_not":
        mat = _cc_not_matrix()
    elif name == "deutsch":
        mat = _deutsch_matrix(float(phi))
    else:
        mat = _deutsch_prime_matrix(float(phi))
    return FockOperator(mat, n_in, n_out)


def hermitian_evolution(h: FockOperator, t: float) -> FockOperator:
    """exp(-i t H) for Hermitian H, by dense eigendecomposition."""
    if not h.is_square:
        raise ValueError("evolution requires a square operator")
    dev = float(np.abs(h.entries - h.entries.conj().T).max())
    if dev > 1e-10:
        raise ValueError(f"operator is not Hermitian (max deviation {dev:.3e})")
    w, v = np.linalg.eigh(h.entries)
    mat = (v * np.exp(-1j * t * w)) @ v.conj().T
    return FockOperator(mat, h.n_in, h.n_out)
