"""Finite-dimensional tracial operator algebras.

An algebra here is a direct sum of full complex matrix blocks, with a trace
that weights block k by a positive scalar.  Every finite-dimensional von
Neumann algebra has this form, so positive density kernels represent all
weights and plain hermitian eigendecomposition covers all functional
calculus.  Elements are immutable; every operation returns a new element.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

# Relative eigenvalue clamp below which "positive" tolerates roundoff noise.
EPS_PSD = 1e-10
# Relative singular-value cutoff for the support of a partial isometry.
EPS_RANK = 1e-12


class AlgebraError(Exception):
    """Base class for algebra-level failures."""


class ShapeMismatchError(AlgebraError):
    """Operands live on different block structures."""


class NotPositiveError(AlgebraError):
    """A (nearly) positive semidefinite hermitian input was required."""


class DomainError(AlgebraError):
    """A scalar function is undefined on part of the spectrum."""


class ParameterError(AlgebraError, ValueError):
    """Invalid numeric parameter, e.g. a norm exponent below 1."""


@dataclass(frozen=True)
class AlgebraShape:
    """Block structure: matrix sizes and the trace weight of each block."""

    block_dims: tuple[int, ...]
    trace_weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.block_dims) != len(self.trace_weights):
            raise ShapeMismatchError("block_dims and trace_weights differ in length")
        if len(self.block_dims) == 0:
            raise ShapeMismatchError("algebra needs at least one block")
        if any(int(n) < 1 or int(n) != n for n in self.block_dims):
            raise ShapeMismatchError("block dimensions must be positive integers")
        if any(not (w > 0) for w in self.trace_weights):
            raise ShapeMismatchError("trace weights must be positive")
        object.__setattr__(self, "block_dims", tuple(int(n) for n in self.block_dims))
        object.__setattr__(self, "trace_weights", tuple(float(w) for w in self.trace_weights))

    @property
    def total_dim(self) -> int:
        """Real dimension of the linearization, sum of n_k^2."""
        return int(sum(n * n for n in self.block_dims))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [np.zeros((n, n), dtype=complex) for n in self.block_dims])

    def identity(self) -> AlgebraElement:
        return AlgebraElement(self, [np.eye(n, dtype=complex) for n in self.block_dims])

    def scalar(self, c: complex) -> AlgebraElement:
        return AlgebraElement(self, [c * np.eye(n, dtype=complex) for n in self.block_dims])

    def element(self, blocks) -> AlgebraElement:
        return AlgebraElement(self, blocks)

    def basis(self) -> Iterator[AlgebraElement]:
        """Matrix-unit basis, block by block, row-major inside each block."""
        for k, n in enumerate(self.block_dims):
            for i in range(n):
                for j in range(n):
                    blocks = [np.zeros((m, m), dtype=complex) for m in self.block_dims]
                    blocks[k][i, j] = 1.0
                    yield AlgebraElement(self, blocks)


class AlgebraElement:
    """Immutable element of a block algebra."""

    __slots__ = ("shape", "blocks")

    def __init__(self, shape: AlgebraShape, blocks, copy: bool = True):
        if len(blocks) != len(shape.block_dims):
            raise ShapeMismatchError("wrong number of blocks")
        stored = []
        for n, b in zip(shape.block_dims, blocks):
            arr = np.array(b, dtype=complex, copy=copy)
            if arr.shape != (n, n):
                raise ShapeMismatchError(f"block of shape {arr.shape}, expected {(n, n)}")
            arr.setflags(write=False)
            stored.append(arr)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "blocks", tuple(stored))

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _require_same_shape(self, other: AlgebraElement) -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError("elements live on different algebras")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._require_same_shape(other)
        return AlgebraElement(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)], copy=False)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        self._require_same_shape(other)
        return AlgebraElement(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)], copy=False)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.shape, [-a for a in self.blocks], copy=False)

    def __mul__(self, c) -> AlgebraElement:
        c = complex(c)
        return AlgebraElement(self.shape, [c * a for a in self.blocks], copy=False)

    __rmul__ = __mul__

    def __matmul__(self, other: AlgebraElement) -> AlgebraElement:
        self._require_same_shape(other)
        return AlgebraElement(self.shape, [a @ b for a, b in zip(self.blocks, other.blocks)], copy=False)

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.shape, [a.conj().T for a in self.blocks], copy=False)

    def hermitian_defect(self) -> float:
        return max(float(np.abs(a - a.conj().T).max()) for a in self.blocks)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return self.hermitian_defect() <= tol * (1.0 + self.max_abs_entry())

    def max_abs_entry(self) -> float:
        return max(float(np.abs(a).max()) for a in self.blocks)

    def vec(self) -> np.ndarray:
        """Row-major concatenation of all blocks; basis order matches AlgebraShape.basis."""
        return np.concatenate([a.ravel() for a in self.blocks])

    def __repr__(self) -> str:
        dims = "+".join(str(n) for n in self.shape.block_dims)
        return f"AlgebraElement(dims={dims}, sup={self.max_abs_entry():.3e})"


def from_vec(shape: AlgebraShape, v: np.ndarray) -> AlgebraElement:
    """Inverse of AlgebraElement.vec."""
    blocks = []
    pos = 0
    for n in shape.block_dims:
        blocks.append(np.asarray(v[pos:pos + n * n], dtype=complex).reshape(n, n))
        pos += n * n
    return AlgebraElement(shape, blocks)


def sup_distance(a: AlgebraElement, b: AlgebraElement) -> float:
    """Largest absolute entry of a - b, a cheap proxy for the operator norm gap."""
    return (a - b).max_abs_entry()


def trace(x: AlgebraElement) -> complex:
    """Weighted trace: sum of trace_weights[k] * tr(block k)."""
    return complex(sum(w * np.trace(b) for w, b in zip(x.shape.trace_weights, x.blocks)))


def _singular_values(x: AlgebraElement) -> list[np.ndarray]:
    return [np.linalg.svd(b, compute_uv=False) for b in x.blocks]


def op_norm(x: AlgebraElement) -> float:
    """Operator norm: the largest singular value over all blocks."""
    return max(float(s[0]) if s.size else 0.0 for s in _singular_values(x))


def p_norm(x: AlgebraElement, p: float) -> float:
    """Trace p-norm (trace of |x|^p) ** (1/p); p = inf gives the operator norm."""
    if p == math.inf:
        return op_norm(x)
    p = float(p)
    if p < 1.0:
        raise ParameterError(f"norm exponent must be >= 1, got {p}")
    total = 0.0
    for w, s in zip(x.shape.trace_weights, _singular_values(x)):
        total += w * float(np.sum(s ** p))
    return float(total ** (1.0 / p))


def eigh_blocks(x: AlgebraElement, herm_tol: float = 1e-9) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-block hermitian eigendecompositions; rejects non-hermitian input."""
    scale = 1.0 + x.max_abs_entry()
    if x.hermitian_defect() > herm_tol * scale:
        raise NotPositiveError("element is not hermitian within tolerance")
    return [np.linalg.eigh(0.5 * (b + b.conj().T)) for b in x.blocks]


def func_calc(x: AlgebraElement, f: Callable[[float], float]) -> AlgebraElement:
    """Apply a real scalar function to a hermitian element through its spectrum."""
    out = []
    for w, v in eigh_blocks(x):
        try:
            vals = np.asarray(f(w), dtype=float)
            if vals.shape != w.shape:
                raise TypeError
        except (TypeError, ValueError):
            vals = np.array([f(t) for t in w], dtype=float)
        if not np.all(np.isfinite(vals)):
            raise DomainError("function undefined on part of the spectrum")
        out.append((v * vals) @ v.conj().T)
    return AlgebraElement(x.shape, out, copy=False)


def positive_sqrt(x: AlgebraElement) -> AlgebraElement:
    """Positive square root of a hermitian PSD element (noise-level negatives clamped)."""
    scale = op_norm(x)
    out = []
    for w, v in eigh_blocks(x):
        if w.size and w.min() < -EPS_PSD * max(scale, 1e-300):
            raise NotPositiveError(f"eigenvalue {w.min():.3e} below positivity clamp")
        wc = np.sqrt(np.clip(w, 0.0, None))
        out.append((v * wc) @ v.conj().T)
    return AlgebraElement(x.shape, out, copy=False)


def power(x: AlgebraElement, t: float) -> AlgebraElement:
    """Spectral power x^t of a hermitian PSD element.

    Noise-level negative eigenvalues are clamped to zero first.  Non-positive
    eigenvalues under a negative or fractional-negative power raise DomainError.
    """
    scale = op_norm(x)
    out = []
    for w, v in eigh_blocks(x):
        if w.size and w.min() < -EPS_PSD * max(scale, 1e-300):
            raise NotPositiveError(f"eigenvalue {w.min():.3e} below positivity clamp")
        wc = np.clip(w, 0.0, None)
        if t < 0 and np.any(wc == 0.0):
            raise DomainError("negative power of a singular element")
        with np.errstate(divide="raise", invalid="raise"):
            vals = wc ** t
        out.append((v * vals) @ v.conj().T)
    return AlgebraElement(x.shape, out, copy=False)


def polar(x: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """Polar decomposition x = u |x| with u a partial isometry.

    u is supported only on singular directions whose singular value exceeds
    EPS_RANK relative to the largest one, so u u* u = u holds to roundoff.
    """
    us, abss = [], []
    for b in x.blocks:
        uu, s, vh = np.linalg.svd(b)
        cutoff = EPS_RANK * (s[0] if s.size else 0.0)
        r = int(np.sum(s > cutoff))
        us.append(uu[:, :r] @ vh[:r, :])
        abss.append((vh.conj().T * s) @ vh)
    return AlgebraElement(x.shape, us, copy=False), AlgebraElement(x.shape, abss, copy=False)


@dataclass(frozen=True)
class WeightKernel:
    """Density kernel of a weight: phi(x) = trace(kernel @ x).

    The kernel must be hermitian and positive semidefinite up to the
    positivity clamp; noise-level negative eigenvalues are clamped away on
    construction.
    """

    kernel: AlgebraElement

    def __post_init__(self) -> None:
        k = self.kernel
        scale = 1.0 + k.max_abs_entry()
        if k.hermitian_defect() > 1e-9 * scale:
            raise NotPositiveError("weight kernel is not hermitian")
        clamped = []
        for w, v in eigh_blocks(k):
            if w.size and w.min() < -EPS_PSD * scale:
                raise NotPositiveError(f"weight kernel eigenvalue {w.min():.3e} is negative")
            clamped.append((v * np.clip(w, 0.0, None)) @ v.conj().T)
        object.__setattr__(self, "kernel", AlgebraElement(k.shape, clamped, copy=False))

    def sqrt(self) -> AlgebraElement:
        return positive_sqrt(self.kernel)

    def __call__(self, x: AlgebraElement) -> complex:
        return weight_apply(self, x)


def weight_apply(K: WeightKernel, x: AlgebraElement) -> complex:
    """Evaluate the weight with kernel K on x: trace(K.kernel @ x)."""
    return trace(K.kernel @ x)


def random_element(shape: AlgebraShape, rng: np.random.Generator, scale: float = 1.0) -> AlgebraElement:
    """Seeded complex Gaussian element."""
    blocks = [
        scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        for n in shape.block_dims
    ]
    return AlgebraElement(shape, blocks, copy=False)


def random_positive_element(
    shape: AlgebraShape, rng: np.random.Generator, floor: float = 1e-6
) -> AlgebraElement:
    """Seeded positive element z*z + delta*1 with delta = floor * ||z*z||_inf.

    The floor keeps spectra away from the singular corner so that negative
    powers stay well conditioned.
    """
    z = random_element(shape, rng)
    zz = z.adjoint() @ z
    delta = floor * op_norm(zz)
    return zz + shape.scalar(delta)
