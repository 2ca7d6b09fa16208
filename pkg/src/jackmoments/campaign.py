"""Verification campaigns: grids of (beta, m, n, k) cells run with derived seeds."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .algebra import BETAS, AlgebraTag, MatrixF, gaussian_array
from .hyper import hyper_0F1
from .montecarlo import DEFAULT_CHUNK, RandomStream
from .verify import (
    DEFAULT_THRESHOLD,
    VerificationReport,
    bessel_consistency,
    exact_only_report,
    odd_moment_check,
    theorem_rhs,
    verify_moment_identity,
    xx_star_eigenvalues,
)
from .jack import build_jack_table

MODES = ("moment", "odd", "bessel")
DEMO_SHAPES = ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4))
DEMO_BETAS = (1, 2, 4)
# stream index for the cell's test matrix; chunk streams use 0, 1, 2, ...
MATRIX_STREAM = 2**32

CSV_FIELDS = ("kind", "beta", "m", "n", "k", "samples", "seed", "lhs_mean", "lhs_stderr", "rhs_exact",
              "z_score", "pass", "threshold", "mc_verifiable", "runtime_ms", "matrix")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    beta: int
    m: int
    n: int
    k: int


@dataclass
class CampaignConfig:
    cells: list[Cell]
    mode: str = "moment"
    samples: int = 10**6
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD
    max_degree: int = 12
    chunk_size: int = DEFAULT_CHUNK
    gate: float = 0.95
    matrix: MatrixF | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if not self.cells:
            raise ConfigError("campaign has no cells")
        if self.samples < 2:
            raise ConfigError("samples must be >= 2")
        for c in self.cells:
            if c.beta not in BETAS:
                raise ConfigError(f"beta must be one of {BETAS}: {c}")
            if not c.n >= c.m >= 1:
                raise ConfigError(f"cell needs n >= m >= 1: {c}")
            if c.k < 0:
                raise ConfigError(f"cell needs k >= 0: {c}")
            if self.mode == "odd" and c.k % 2 != 1:
                raise ConfigError(f"odd mode needs odd powers: {c}")
            if self.matrix is not None and (c.beta, c.m, c.n) != (self.matrix.tag.beta, *self.matrix.shape):
                raise ConfigError(f"cell {c} does not match the supplied matrix")

    @classmethod
    def grid(cls, betas: Iterable[int], shapes: Iterable[tuple[int, int]], ks: Iterable[int],
             **kwargs) -> "CampaignConfig":
        cells = [Cell(b, m, n, k) for b, (m, n), k in product(betas, shapes, ks)]
        return cls(cells=cells, **kwargs)

    @classmethod
    def demo(cls, mode: str = "moment", **kwargs) -> "CampaignConfig":
        ks = {"moment": (0, 1, 2, 3, 4), "odd": (1, 3, 5), "bessel": (12,)}[mode]
        if mode == "bessel":
            kwargs.setdefault("max_degree", 12)
        return cls.grid(DEMO_BETAS, DEMO_SHAPES, ks, mode=mode, **kwargs)


def cell_seed(seed: int, index: int) -> int:
    state = np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, np.uint64)[0]
    return int(state) >> 1


def cell_matrix(cell: Cell, seed: int, unit_norm: bool = False) -> MatrixF:
    """Gaussian test matrix for a cell, reproducible from the cell seed.

    Octonion cells with m >= 2 put the Gaussian entries on the diagonal so that
    X X* is diagonal; general octonion Hermitian spectra are not supported.
    """
    tag = AlgebraTag(cell.beta)
    rng = RandomStream(seed, MATRIX_STREAM).generator()
    if cell.beta == 8:
        entries = np.zeros((cell.m, cell.n, 8))
        if cell.m == 1:
            entries[:] = rng.standard_normal((1, cell.n, 8))
        else:
            idx = np.arange(cell.m)
            entries[idx, idx] = rng.standard_normal((cell.m, 8))
    else:
        entries = gaussian_array((cell.m, cell.n), tag, rng)
    if unit_norm:
        entries = entries / np.sqrt(np.sum(entries**2))
    return MatrixF(entries, tag)


def run_cell(config: CampaignConfig, index: int) -> VerificationReport:
    cell = config.cells[index]
    seed = cell_seed(config.seed, index)
    x = config.matrix if config.matrix is not None else cell_matrix(cell, seed, unit_norm=config.mode == "bessel")
    opts = dict(chunk_size=config.chunk_size)
    if config.mode == "moment":
        if cell.beta == 8:
            return exact_only_report("moment", x, cell.k, config.samples, seed, theorem_rhs(x, cell.k),
                                     config.threshold)
        return verify_moment_identity(x, cell.k, samples=config.samples, seed=seed,
                                      threshold=config.threshold, **opts)
    if config.mode == "odd":
        if cell.beta == 8:
            return exact_only_report("odd", x, cell.k, config.samples, seed, 0.0, config.threshold)
        return odd_moment_check(x, cell.k, samples=config.samples, seed=seed, threshold=config.threshold, **opts)
    table = build_jack_table(config.max_degree, cell.beta)
    if cell.beta == 8:
        series = hyper_0F1(4 * cell.n, xx_star_eigenvalues(x) / 4, 8, table, config.max_degree)
        return exact_only_report("bessel", x, config.max_degree, config.samples, seed, series.value,
                                 config.threshold)
    return bessel_consistency(x, table=table, max_degree=config.max_degree, samples=config.samples,
                              seed=seed, threshold=config.threshold, **opts)


def run_campaign(config: CampaignConfig, workers: int = 1) -> list[VerificationReport]:
    """Run every cell; results come back in cell order whatever the worker count."""
    indices = range(len(config.cells))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: run_cell(config, i), indices))
    return [run_cell(config, i) for i in indices]


@dataclass(frozen=True)
class GateSummary:
    cells: int
    verifiable: int
    passed: int
    exact_only: int
    k0_ok: bool
    gate: float

    @property
    def fraction(self) -> float:
        return self.passed / self.verifiable if self.verifiable else 1.0

    @property
    def ok(self) -> bool:
        return self.k0_ok and self.fraction >= self.gate

    def to_dict(self) -> dict:
        return {"cells": self.cells, "verifiable": self.verifiable, "passed": self.passed,
                "exact_only": self.exact_only, "pass_fraction": self.fraction, "gate": self.gate,
                "k0_exact": self.k0_ok, "ok": self.ok}


def summarize(reports: Sequence[VerificationReport], gate: float = 0.95) -> GateSummary:
    mc = [r for r in reports if r.mc_verifiable]
    k0 = [r for r in mc if r.kind == "moment" and r.k == 0]
    k0_ok = all(r.passed and r.z_score == 0 for r in k0)
    return GateSummary(len(reports), len(mc), sum(bool(r.passed) for r in mc), len(reports) - len(mc), k0_ok, gate)


def format_reports(reports: Sequence[VerificationReport], fmt: str = "jsonl", timing: bool = False) -> str:
    rows = [r.to_dict(timing=timing) for r in reports]
    if fmt == "jsonl":
        return "".join(json.dumps(row) + "\n" for row in rows)
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        fields = [f for f in CSV_FIELDS if timing or f != "runtime_ms"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            row = dict(row, matrix=json.dumps(row["matrix"]))
            writer.writerow(row)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
