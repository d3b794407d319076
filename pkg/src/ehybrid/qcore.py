"""Dense truncated-Hilbert-space linear algebra.

Operators are small (a few hundred states at most), so everything is a
dense complex matrix tagged with its tensor-factor dimensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import ContractError, DimensionError, ShapeError

HERMITIAN_RTOL = 1e-12
AMBIGUITY_THRESHOLD = 1 / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class HilbertOp:
    """Dense operator on a tensor-product space with factor sizes `dims`."""

    dims: tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"invalid dims {self.dims}")
        data = np.array(self.data, dtype=complex)
        n = int(np.prod(dims))
        if data.shape != (n, n):
            raise ShapeError(f"matrix shape {data.shape} does not match dims {dims}")
        data.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def dag(self) -> HilbertOp:
        return HilbertOp(self.dims, self.data.conj().T)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, HilbertOp):
            if other.dims != self.dims:
                raise ShapeError(f"dims {other.dims} != {self.dims}")
            return other.data
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other):
        return HilbertOp(self.dims, self.data + self._other(other))

    def __sub__(self, other):
        return HilbertOp(self.dims, self.data - self._other(other))

    def __neg__(self):
        return HilbertOp(self.dims, -self.data)

    def __matmul__(self, other):
        return HilbertOp(self.dims, self.data @ self._other(other))

    def __mul__(self, scalar):
        if isinstance(scalar, HilbertOp):
            raise TypeError("use @ for operator products")
        return HilbertOp(self.dims, self.data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return HilbertOp(self.dims, self.data / scalar)

    def hermiticity_error(self) -> float:
        """max|H - H^dagger| relative to max|H| (0 for the zero operator)."""
        scale = np.abs(self.data).max()
        if scale == 0:
            return 0.0
        return float(np.abs(self.data - self.data.conj().T).max() / scale)

    def is_hermitian(self, rtol: float = HERMITIAN_RTOL) -> bool:
        return self.hermiticity_error() <= rtol

    def trace(self) -> complex:
        return complex(np.trace(self.data))


def identity(dims: Sequence[int]) -> HilbertOp:
    dims = tuple(dims)
    return HilbertOp(dims, np.eye(int(np.prod(dims))))


def ladder(dim: int) -> tuple[HilbertOp, HilbertOp]:
    """Truncated annihilation and creation operators on `dim` Fock states."""
    if int(dim) != dim or dim < 2:
        raise DimensionError(f"ladder dimension must be an integer >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    op = HilbertOp((dim,), a)
    return op, op.dag()


def number(dim: int) -> HilbertOp:
    a, ad = ladder(dim)
    return ad @ a


def qubit_ops() -> tuple[HilbertOp, HilbertOp, HilbertOp]:
    """(sigma_z, sigma_minus, sigma_plus) in the basis (g, e), sigma_z|e> = +|e>."""
    sz = HilbertOp((2,), np.diag([-1.0, 1.0]))
    sm = HilbertOp((2,), np.array([[0.0, 1.0], [0.0, 0.0]]))
    return sz, sm, sm.dag()


def transition(dim: int, i: int, j: int) -> HilbertOp:
    """|i><j| on a `dim`-level system."""
    m = np.zeros((dim, dim))
    m[i, j] = 1.0
    return HilbertOp((dim,), m)


def tensor(*ops: HilbertOp) -> HilbertOp:
    data = np.ones((1, 1), dtype=complex)
    dims: list[int] = []
    for op in ops:
        data = np.kron(data, op.data)
        dims.extend(op.dims)
    return HilbertOp(tuple(dims), data)


def embed(op: HilbertOp, slot: int, dims: Sequence[int]) -> HilbertOp:
    """Place a single-factor operator at position `slot` of a product space."""
    dims = tuple(int(d) for d in dims)
    if not 0 <= slot < len(dims):
        raise ShapeError(f"slot {slot} out of range for {len(dims)} factors")
    if op.dims != (dims[slot],):
        raise ShapeError(f"operator dims {op.dims} do not fit factor {slot} of {dims}")
    factors = [identity((d,)) for d in dims]
    factors[slot] = op
    return tensor(*factors)


def commutator(a: HilbertOp, b: HilbertOp) -> HilbertOp:
    return a @ b - b @ a


def product_labels(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """Labels of the product basis in matrix order (last factor fastest)."""
    return list(itertools.product(*(range(d) for d in dims)))


@dataclass(frozen=True)
class EigenResult:
    """Spectrum of a Hermitian operator with bare-state bookkeeping.

    ``assignments[label]`` is the index of the eigenvector with the largest
    overlap amplitude on that bare basis state; ``overlaps[label]`` is the
    amplitude.  Labels whose amplitude does not exceed 1/sqrt(2), or that
    collide with another label, are listed in ``ambiguous``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    labels: tuple[Hashable, ...]
    assignments: dict = field(repr=False)
    overlaps: dict = field(repr=False)
    ambiguous: frozenset = frozenset()

    def energy(self, label) -> float:
        return float(self.eigenvalues[self.assignments[label]])

    def is_ambiguous(self, label) -> bool:
        return label in self.ambiguous


def eig_hermitian(H: HilbertOp, bare_labels: Sequence[Hashable] | None = None) -> EigenResult:
    """Full eigendecomposition of a Hermitian operator.

    Raises :class:`ContractError` if `H` fails the Hermiticity tolerance.
    """
    if not H.is_hermitian():
        raise ContractError(
            f"operator is not Hermitian (relative error {H.hermiticity_error():.3g})"
        )
    if bare_labels is None:
        bare_labels = product_labels(H.dims)
    labels = tuple(bare_labels)
    if len(labels) != H.size:
        raise ShapeError(f"{len(labels)} labels for a {H.size}-dimensional space")

    # symmetrize so that round-off asymmetry does not leak into eigh
    M = 0.5 * (H.data + H.data.conj().T)
    w, v = np.linalg.eigh(M)

    amp = np.abs(v)
    best = amp.argmax(axis=1)
    best_amp = amp[np.arange(len(labels)), best]
    assignments = {lab: int(k) for lab, k in zip(labels, best)}
    overlaps = {lab: float(a) for lab, a in zip(labels, best_amp)}

    ambiguous = {lab for lab, a in overlaps.items() if a * a <= 0.5 + 1e-12}
    counts = np.bincount(best, minlength=len(labels))
    ambiguous |= {lab for lab, k in assignments.items() if counts[k] > 1}
    return EigenResult(w, v, labels, assignments, overlaps, frozenset(ambiguous))
