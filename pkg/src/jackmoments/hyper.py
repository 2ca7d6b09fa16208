"""Truncated hypergeometric series of one matrix argument and Stiefel volumes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraTag, as_tag
from .jack import JackTable, MonomialEvaluator, PoleError, gen_pochhammer, jack_C, mv_log_gamma
from .partitions import partitions_of


@dataclass(frozen=True)
class SeriesResult:
    value: float
    max_degree: int
    last_shell: float
    terms_evaluated: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "max_degree": self.max_degree,
            "last_shell": self.last_shell,
            "terms_evaluated": self.terms_evaluated,
        }


def hyper_pFq(a: Sequence[float], b: Sequence[float], x: Sequence[float], beta: AlgebraTag | int,
              table: JackTable, max_degree: int) -> SeriesResult:
    """Sum over k <= max_degree and kappa |- k of
    prod [a_i]_kappa / prod [b_j]_kappa * C_kappa(x) / k!.

    ``x`` holds the eigenvalues of the matrix argument.  Only the
    denominator parameters are checked against the Pochhammer domain.  Partitions with more
    parts than ``len(x)`` vanish and are skipped.  ``last_shell`` is the sum
    of absolute term values at degree ``max_degree``; it is the only
    truncation diagnostic, nothing adapts the degree automatically.
    """
    tag = as_tag(beta)
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    table._check_weight(max_degree)
    x = [float(v) for v in x]
    mono = MonomialEvaluator(x)
    shells: list[float] = []
    last_shell = 0.0
    used = 0
    for k in range(max_degree + 1):
        terms = []
        fact = math.factorial(k)
        for kappa in partitions_of(k, len(x)):
            used += 1
            num = 1.0
            for ai in a:
                num *= gen_pochhammer(float(ai), kappa, tag, check_domain=False)
            den = 1.0
            for bj in b:
                den *= gen_pochhammer(float(bj), kappa, tag)
            if den == 0:
                raise PoleError(f"denominator Pochhammer vanishes at kappa={kappa}")
            terms.append(num / den * jack_C(table, kappa, x, evaluator=mono) / fact)
        shells.append(math.fsum(terms))
        last_shell = math.fsum(abs(t) for t in terms)
    return SeriesResult(math.fsum(shells), max_degree, last_shell, used)


def hyper_0F1(b: float, x: Sequence[float], beta: AlgebraTag | int, table: JackTable,
              max_degree: int) -> SeriesResult:
    return hyper_pFq((), (b,), x, beta, table, max_degree)


def stiefel_log_volume(m: int, n: int, beta: AlgebraTag | int) -> float:
    """log of 2^m pi^(m n beta/2) / Gamma_m^beta[n beta/2] (unnormalized Haar volume)."""
    beta = as_tag(beta).beta
    if not n >= m >= 1:
        raise ValueError(f"need n >= m >= 1, got m={m}, n={n}")
    return m * math.log(2) + m * n * beta / 2 * math.log(math.pi) - mv_log_gamma(m, beta, n * beta / 2)
