"""Scalar and matrix arithmetic over the real normed division algebras.

Every scalar is stored as ``beta`` real components (1: real, 2: complex,
4: quaternion ``a + bi + cj + dk``, 8: octonion via Cayley-Dickson doubling of
the quaternions).  Matrices are ``(rows, cols, beta)`` float64 arrays; the
batched helpers accept any number of leading axes, which is what the Monte
Carlo code uses to orthonormalize a whole chunk of samples at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

BETAS = (1, 2, 4, 8)
SAMPLING_BETAS = (1, 2, 4)

ORTHO_TOL = 1e-10
HERMITIAN_TOL = 1e-10
PAIRING_TOL = 1e-8


class AlgebraError(ValueError):
    """Base class for invalid algebra inputs."""


class UnsupportedAlgebraError(AlgebraError):
    pass


class DegenerateInputError(AlgebraError):
    pass


class ShapeError(AlgebraError):
    pass


@dataclass(frozen=True)
class AlgebraTag:
    beta: int

    def __post_init__(self) -> None:
        if self.beta not in BETAS:
            raise UnsupportedAlgebraError(f"beta must be one of {BETAS}, got {self.beta!r}")

    @property
    def can_sample(self) -> bool:
        return self.beta in SAMPLING_BETAS

    @property
    def alpha(self):
        from fractions import Fraction

        return Fraction(2, self.beta)

    @property
    def name(self) -> str:
        return {1: "real", 2: "complex", 4: "quaternion", 8: "octonion"}[self.beta]


def as_tag(tag: AlgebraTag | int) -> AlgebraTag:
    return tag if isinstance(tag, AlgebraTag) else AlgebraTag(int(tag))


# -- scalar kernels on component arrays -------------------------------------

def conj(a: np.ndarray) -> np.ndarray:
    out = -a
    out[..., 0] = a[..., 0]
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Algebra product of broadcastable component arrays (last axis = beta)."""
    beta = a.shape[-1]
    if b.shape[-1] != beta:
        raise ShapeError("component count mismatch")
    if beta == 1:
        return a * b
    if beta == 2:
        a0, a1 = a[..., 0], a[..., 1]
        b0, b1 = b[..., 0], b[..., 1]
        return np.stack([a0 * b0 - a1 * b1, a0 * b1 + a1 * b0], axis=-1)
    if beta == 4:
        a0, a1, a2, a3 = (a[..., i] for i in range(4))
        b0, b1, b2, b3 = (b[..., i] for i in range(4))
        return np.stack(
            [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
            axis=-1,
        )
    # (p, q)(r, s) = (pr - s̄q, sp + q r̄) over quaternion halves
    p, q = a[..., :4], a[..., 4:]
    r, s = b[..., :4], b[..., 4:]
    return np.concatenate([mul(p, r) - mul(conj(s), q), mul(s, p) + mul(q, conj(r))], axis=-1)


def norm2(a: np.ndarray) -> np.ndarray:
    return np.sum(a * a, axis=-1)


# -- batched matrix kernels -------------------------------------------------

def conj_transpose_array(a: np.ndarray) -> np.ndarray:
    return conj(np.swapaxes(a, -3, -2))


def matmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b`` for component arrays of shape (..., r, s, beta) x (..., s, t, beta)."""
    # (..., r, s, 1, beta) * (..., 1, s, t, beta) summed over s
    prod = mul(a[..., :, :, None, :], b[..., None, :, :, :])
    return prod.sum(axis=-3)


def orthonormalize_array(g: np.ndarray, tol: float = ORTHO_TOL) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of (..., n, m, beta) arrays.

    The inner product is ``<u, v> = sum_r conj(u_r) v_r`` and projections are
    removed by right multiplication, ``v <- v - u <u, v>``, which keeps
    ``H* H = I`` exact in any associative algebra.
    """
    beta = g.shape[-1]
    if beta == 8:
        raise UnsupportedAlgebraError("octonion Gram-Schmidt is not associative")
    n, m = g.shape[-3], g.shape[-2]
    if m > n:
        raise ShapeError(f"need rows >= cols, got {n}x{m}")
    if beta == 1:
        return _mgs_real(np.array(g[..., 0], dtype=np.float64), tol)[..., None]
    if beta == 2:
        h = _mgs_complex(g[..., 0] + 1j * g[..., 1], tol)
        return np.stack([h.real, h.imag], axis=-1)
    z, w = _mgs_quaternion(g[..., 0] + 1j * g[..., 1], g[..., 2] + 1j * g[..., 3], tol)
    return np.stack([z.real, z.imag, w.real, w.imag], axis=-1)


def _unit(v: np.ndarray, nrm2: np.ndarray, tol: float) -> np.ndarray:
    nrm = np.sqrt(nrm2)
    if np.any(nrm < tol):
        raise DegenerateInputError("matrix is numerically rank deficient")
    return nrm


def _mgs_real(h: np.ndarray, tol: float) -> np.ndarray:
    for j in range(h.shape[-1]):
        v = h[..., j]
        for i in range(j):
            u = h[..., i]
            v = v - u * np.sum(u * v, axis=-1, keepdims=True)
        h[..., j] = v / _unit(v, np.sum(v * v, axis=-1), tol)[..., None]
    return h


def _mgs_complex(h: np.ndarray, tol: float) -> np.ndarray:
    h = np.array(h, dtype=np.complex128)
    for j in range(h.shape[-1]):
        v = h[..., j]
        for i in range(j):
            u = h[..., i]
            v = v - u * np.sum(u.conj() * v, axis=-1, keepdims=True)
        h[..., j] = v / _unit(v, np.sum(v.real**2 + v.imag**2, axis=-1), tol)[..., None]
    return h


def _mgs_quaternion(z: np.ndarray, w: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    # entry q = z + w j; (z1 + w1 j)(z2 + w2 j) = (z1 z2 - w1 conj(w2)) + (z1 w2 + w1 conj(z2)) j
    z = np.array(z, dtype=np.complex128)
    w = np.array(w, dtype=np.complex128)
    for j in range(z.shape[-1]):
        vz, vw = z[..., j], w[..., j]
        for i in range(j):
            uz, uw = z[..., i], w[..., i]
            cz = np.sum(uz.conj() * vz + uw * vw.conj(), axis=-1, keepdims=True)
            cw = np.sum(uz.conj() * vw - uw * vz.conj(), axis=-1, keepdims=True)
            vz = vz - (uz * cz - uw * cw.conj())
            vw = vw - (uz * cw + uw * cz.conj())
        nrm2 = np.sum(vz.real**2 + vz.imag**2 + vw.real**2 + vw.imag**2, axis=-1)
        nrm = _unit(vz, nrm2, tol)[..., None]
        z[..., j], w[..., j] = vz / nrm, vw / nrm
    return z, w


def orthonormalize_reference(g: np.ndarray, tol: float = ORTHO_TOL) -> np.ndarray:
    """Component-wise Gram-Schmidt using :func:`mul`; slow, kept as a cross-check."""
    m = g.shape[-2]
    h = np.array(g, dtype=np.float64, copy=True)
    for j in range(m):
        v = h[..., :, j, :]
        for i in range(j):
            u = h[..., :, i, :]
            coef = mul(conj(u), v).sum(axis=-2)
            v = v - mul(u, coef[..., None, :])
        h[..., :, j, :] = v / _unit(v, norm2(v).sum(axis=-1), tol)[..., None, None]
    return h


def trace_inner_array(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Re tr(X H) for X (m, n, beta) against a batch H (..., n, m, beta)."""
    sign = np.ones(x.shape[-1])
    sign[1:] = -1.0
    return np.einsum("ijr,...jir->...", x * sign, h)


# -- MatrixF ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MatrixF:
    """Dense matrix over the algebra selected by ``tag``; immutable."""

    entries: np.ndarray
    tag: AlgebraTag

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[-1] != self.tag.beta:
            raise ShapeError(
                f"expected (rows, cols, {self.tag.beta}) components, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise AlgebraError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def from_real(cls, a: Any, tag: AlgebraTag | int = 1) -> "MatrixF":
        """Embed a real (or, for beta=2, complex) 2-D array."""
        tag = as_tag(tag)
        a = np.asarray(a)
        if a.ndim == 1:
            a = a[:, None]
        out = np.zeros(a.shape + (tag.beta,))
        if np.iscomplexobj(a):
            if tag.beta < 2:
                raise AlgebraError("complex entries need beta >= 2")
            out[..., 0], out[..., 1] = a.real, a.imag
        else:
            out[..., 0] = a
        return cls(out, tag)

    def to_complex(self) -> np.ndarray:
        if self.tag.beta != 2:
            raise AlgebraError("to_complex is only defined for beta=2")
        return self.entries[..., 0] + 1j * self.entries[..., 1]

    def __matmul__(self, other: "MatrixF") -> "MatrixF":
        _check_same_tag(self, other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return MatrixF(matmul_array(self.entries, other.entries), self.tag)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.tag == other.tag and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.tag.beta, self.entries.tobytes(), self.entries.shape))

    def scale(self, a: float) -> "MatrixF":
        return MatrixF(self.entries * a, self.tag)

    def to_json(self) -> list:
        """Row-major literal: numbers for beta=1, component lists otherwise."""
        if self.tag.beta == 1:
            return self.entries[..., 0].tolist()
        return self.entries.tolist()

    @classmethod
    def from_json(cls, rows: Sequence, tag: AlgebraTag | int | None = None) -> "MatrixF":
        if not rows or not isinstance(rows[0], (list, tuple)):
            raise AlgebraError("matrix literal must be a non-empty array of rows")
        first = rows[0][0] if rows[0] else None
        inferred = 1 if isinstance(first, (int, float)) else len(first)
        if tag is None:
            tag = AlgebraTag(inferred)
        tag = as_tag(tag)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged matrix literal")
        if inferred == 1:
            arr = np.zeros((len(rows), width, tag.beta))
            arr[..., 0] = np.asarray(rows, dtype=float)
        elif inferred == tag.beta:
            arr = np.asarray(rows, dtype=float)
        else:
            raise AlgebraError(f"entries have {inferred} components, expected {tag.beta}")
        return cls(arr, tag)


def _check_same_tag(a: MatrixF, b: MatrixF) -> None:
    if a.tag != b.tag:
        raise AlgebraError(f"algebra mismatch: beta={a.tag.beta} vs beta={b.tag.beta}")


def conj_transpose(a: MatrixF) -> MatrixF:
    return MatrixF(conj_transpose_array(a.entries), a.tag)


def trace_inner(x: MatrixF, h1: MatrixF) -> float:
    """Re tr(X H1) with X m x n and H1 n x m."""
    _check_same_tag(x, h1)
    if x.cols != h1.rows or x.rows != h1.cols:
        raise ShapeError(f"trace_inner needs (m, n) x (n, m), got {x.shape} x {h1.shape}")
    return float(trace_inner_array(x.entries, h1.entries))


def gaussian_array(size: tuple[int, ...], tag: AlgebraTag, rng: np.random.Generator) -> np.ndarray:
    if not tag.can_sample:
        raise UnsupportedAlgebraError(f"sampling over beta={tag.beta} is not supported")
    return rng.standard_normal(size + (tag.beta,))


def gaussian_matrix(rows: int, cols: int, tag: AlgebraTag | int, stream) -> MatrixF:
    """Matrix whose real components are i.i.d. N(0, 1) draws from ``stream``.

    ``stream`` is a :class:`~jackmoments.montecarlo.RandomStream` or a numpy
    ``Generator``.
    """
    tag = as_tag(tag)
    rng = stream.generator() if hasattr(stream, "generator") else stream
    return MatrixF(gaussian_array((rows, cols), tag, rng), tag)


def orthonormalize(g: MatrixF) -> MatrixF:
    return MatrixF(orthonormalize_array(g.entries), g.tag)


def gram(x: MatrixF) -> MatrixF:
    """X X*."""
    return x @ conj_transpose(x)


def complex_adjoint(b: MatrixF) -> np.ndarray:
    """2m x 2m complex matrix of a quaternion matrix ``Z + W j``."""
    if b.tag.beta != 4:
        raise AlgebraError("complex adjoint is defined for quaternion matrices")
    e = b.entries
    z = e[..., 0] + 1j * e[..., 1]
    w = e[..., 2] + 1j * e[..., 3]
    return np.block([[z, w], [-w.conj(), z.conj()]])


def _octonion_hermitian_eigs(e: np.ndarray) -> np.ndarray:
    m = e.shape[0]
    if m == 1:
        return np.array([e[0, 0, 0]])
    offdiag = e.copy()
    offdiag[np.arange(m), np.arange(m)] = 0.0
    if not np.any(offdiag):
        return e[np.arange(m), np.arange(m), 0].copy()
    if m == 2:
        a, d = e[0, 0, 0], e[1, 1, 0]
        b2 = float(norm2(e[0, 1]))
        mid, rad = 0.5 * (a + d), np.hypot(0.5 * (a - d), np.sqrt(b2))
        return np.array([mid + rad, mid - rad])
    raise UnsupportedAlgebraError("octonion eigenvalues are only supported for m <= 2 or diagonal input")


def hermitian_eigenvalues(b: MatrixF) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Quaternion input goes through the complex adjoint, whose spectrum repeats
    every eigenvalue twice; one copy of each pair is returned.
    """
    if b.rows != b.cols:
        raise ShapeError("hermitian_eigenvalues needs a square matrix")
    e = b.entries
    dev = np.max(np.abs(e - conj_transpose_array(e))) if e.size else 0.0
    scale = max(1.0, float(np.max(np.abs(e)))) if e.size else 1.0
    if dev > HERMITIAN_TOL * scale:
        raise AlgebraError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    beta = b.tag.beta
    if beta == 1:
        vals = np.linalg.eigvalsh(e[..., 0])
    elif beta == 2:
        vals = np.linalg.eigvalsh(b.to_complex())
    elif beta == 4:
        doubled = np.sort(np.linalg.eigvalsh(complex_adjoint(b)))
        lo, hi = doubled[0::2], doubled[1::2]
        tol = PAIRING_TOL * max(1.0, float(np.max(np.abs(doubled))))
        if np.any(np.abs(hi - lo) > tol):
            raise AlgebraError("quaternion adjoint spectrum is not paired")
        vals = lo
    else:
        vals = _octonion_hermitian_eigs(e)
    return np.sort(np.asarray(vals, dtype=float))[::-1]
