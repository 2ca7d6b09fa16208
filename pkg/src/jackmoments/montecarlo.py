"""Haar sampling on Stiefel manifolds and chunked, reproducible moment estimates.

Samples are split into fixed-size chunks; chunk ``i`` draws from
``RandomStream(seed, i)`` and chunk statistics are merged in chunk order, so
the result does not depend on how many workers ran the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    AlgebraError,
    AlgebraTag,
    MatrixF,
    UnsupportedAlgebraError,
    as_tag,
    gaussian_array,
    orthonormalize_array,
    trace_inner_array,
)

DEFAULT_CHUNK = 2**16


@dataclass(frozen=True)
class RandomStream:
    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    samples: int


def haar_batch(m: int, n: int, tag: AlgebraTag | int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Haar-distributed n x m frames as a (size, n, m, beta) array."""
    tag = as_tag(tag)
    if not n >= m >= 1:
        raise AlgebraError(f"need n >= m >= 1, got m={m}, n={n}")
    return orthonormalize_array(gaussian_array((size, n, m), tag, rng))


def haar_sample(m: int, n: int, tag: AlgebraTag | int, stream: RandomStream) -> MatrixF:
    tag = as_tag(tag)
    return MatrixF(haar_batch(m, n, tag, 1, stream.generator())[0], tag)


def _chunk_stats(values: np.ndarray) -> tuple[int, float, float]:
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, qa + qb + delta * delta * na * nb / n


def _run(x: MatrixF, tag: AlgebraTag | int | None, samples: int, seed: int,
         integrand: Callable[[np.ndarray], np.ndarray], chunk_size: int, workers: int) -> MomentEstimate:
    tag = x.tag if tag is None else as_tag(tag)
    if tag != x.tag:
        raise AlgebraError(f"X is over beta={x.tag.beta} but beta={tag.beta} was requested")
    if not tag.can_sample:
        raise UnsupportedAlgebraError(f"Monte Carlo over beta={tag.beta} is not supported")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    m, n = x.shape
    if m > n:
        raise AlgebraError(f"X must be m x n with m <= n, got {m}x{n}")
    sizes = [min(chunk_size, samples - start) for start in range(0, samples, chunk_size)]
    xe = x.entries

    def work(i: int) -> tuple[int, float, float]:
        h = haar_batch(m, n, tag, sizes[i], RandomStream(seed, i).generator())
        return _chunk_stats(integrand(trace_inner_array(xe, h)))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    total = parts[0]
    for p in parts[1:]:
        total = _merge(total, p)
    count, mean, sq = total
    stderr = math.sqrt(sq / (count - 1) / count)
    return MomentEstimate(mean, stderr, count)


def moment_estimate(x: MatrixF, power: int, samples: int, tag: AlgebraTag | int | None = None,
                    seed: int = 0, *, chunk_size: int = DEFAULT_CHUNK, workers: int = 1) -> MomentEstimate:
    """Mean and standard error of (Re tr(X H1))^power for H1 Haar on V_{m,n}.

    The Haar measure is normalized to total mass one, so ``power=0`` gives
    exactly 1 with zero standard error.
    """
    if power < 0:
        raise ValueError("power must be >= 0")
    return _run(x, tag, samples, seed, lambda t: t**power, chunk_size, workers)


def etr_estimate(x: MatrixF, samples: int, tag: AlgebraTag | int | None = None, seed: int = 0, *,
                 chunk_size: int = DEFAULT_CHUNK, workers: int = 1) -> MomentEstimate:
    """Mean and standard error of exp(Re tr(X H1))."""
    return _run(x, tag, samples, seed, np.exp, chunk_size, workers)
