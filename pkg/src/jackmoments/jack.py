"""Jack polynomials in C-normalization, Pochhammer symbols and multivariate gamma.

Coefficients are kept as exact :class:`fractions.Fraction` values in the
monomial basis.  Two independent constructions of the monic ``P`` basis are
provided:

``"operator"``
    eigenvectors of the Laplace-Beltrami type operator
    ``D = (alpha/2) sum x_i^2 d_i^2 + sum_{i != j} x_i^2/(x_i - x_j) d_i``,
    which acts triangularly on monomial symmetric functions (the default;
    it needs no basis inversions and is fast up to weight 12 and beyond).
``"gram_schmidt"``
    Gram-Schmidt on monomials, ordered by a linear extension of dominance,
    against ``<p_lam, p_mu> = delta z_lam alpha^len(lam)``.

Either way the ``C`` scale is pinned by solving ``sum_kappa C_kappa = p_1^k``.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraTag, as_tag
from .partitions import Partition, format_partition, partitions_of


class PoleError(ValueError):
    """A gamma or Pochhammer argument is outside its domain."""


class TableTooSmallError(ValueError):
    pass


# -- scalar machinery -------------------------------------------------------

def rising_factorial(a, i: int):
    """(a)_i = a (a+1) ... (a+i-1); works for floats, ints and Fractions."""
    if i < 0:
        raise ValueError("rising factorial needs i >= 0")
    out = 1
    for j in range(i):
        out = out * (a + j)
    return out


def _half_beta(a, beta: int):
    if isinstance(a, (int, Fraction)):
        return Fraction(beta, 2)
    return beta / 2


def gen_pochhammer(a, kappa: Sequence[int], beta: AlgebraTag | int, *, check_domain: bool = True):
    """[a]_kappa = prod_i (a - (i-1) beta/2)_{k_i}.

    Raises :class:`PoleError` unless ``a > (l-1) beta/2 - k_l`` with
    ``l = len(kappa)``.  The product itself is a polynomial in ``a``; pass
    ``check_domain=False`` where it only appears in a numerator.
    """
    beta = as_tag(beta).beta
    if not kappa:
        return 1
    hb = _half_beta(a, beta)
    l = len(kappa)
    if check_domain and not a > (l - 1) * hb - kappa[-1]:
        raise PoleError(f"[{a}]_{tuple(kappa)} with beta={beta} is outside a > {(l - 1) * hb - kappa[-1]}")
    out = 1
    for i, k in enumerate(kappa):
        out = out * rising_factorial(a - i * hb, k)
    return out


def mv_log_gamma(m: int, beta: AlgebraTag | int, a: float) -> float:
    """log Gamma_m^beta[a] = m(m-1)beta/4 log(pi) + sum_i log Gamma(a - (i-1)beta/2)."""
    beta = as_tag(beta).beta
    if m < 1:
        raise ValueError("m must be >= 1")
    if not a > (m - 1) * beta / 2:
        raise PoleError(f"multivariate gamma needs a > {(m - 1) * beta / 2}, got {a}")
    out = m * (m - 1) * beta / 4 * math.log(math.pi)
    for i in range(m):
        out += math.lgamma(a - i * beta / 2)
    return out


# -- symmetric-function helpers ---------------------------------------------

def z_lambda(p: Partition) -> int:
    out = 1
    for part, mult in Counter(p).items():
        out *= part**mult * math.factorial(mult)
    return out


def p1_power_coefficient(lam: Partition) -> int:
    """Coefficient of m_lam in (x_1 + ... + x_N)^k: the multinomial k!/prod lam_i!."""
    out = math.factorial(sum(lam))
    for part in lam:
        out //= math.factorial(part)
    return out


def _powersum_row(lam: Partition, targets: list[Partition]) -> list[int]:
    """Coefficients of m_mu in p_lam for every mu in targets (all of equal weight)."""
    parts = list(lam)

    @lru_cache(maxsize=None)
    def count(i: int, remaining: tuple[int, ...]) -> int:
        if i == len(parts):
            return int(not any(remaining))
        total = 0
        for j, r in enumerate(remaining):
            if r >= parts[i]:
                nxt = list(remaining)
                nxt[j] -= parts[i]
                total += count(i + 1, tuple(nxt))
        return total

    return [count(0, mu) if len(mu) <= len(lam) else 0 for mu in targets]


# -- the two P-basis constructions --------------------------------------------

def _operator_column(mu: Partition, nvars: int, alpha: Fraction):
    """Diagonal entry and incoming off-diagonal entries of D at m_mu.

    Returns ``(diag, {src: coeff})`` where coeff is the coefficient of m_mu
    in D m_src.
    """
    padded = list(mu) + [0] * (nvars - len(mu))
    diag = alpha / 2 * sum(v * (v - 1) for v in mu) + sum(v * (nvars - 1 - i) for i, v in enumerate(padded))
    counts = Counter(padded)
    values = sorted(counts)
    incoming: dict[Partition, Fraction] = {}
    base = Counter(padded)
    for a, u in enumerate(values):
        for v in values[a:]:
            if u == v:
                npairs = counts[u] * (counts[u] - 1) // 2
            else:
                npairs = counts[u] * counts[v]
            if not npairs:
                continue
            total = u + v
            for q in range(u):
                p = total - q
                multiset = base.copy()
                multiset[u] -= 1
                multiset[v] -= 1
                multiset[p] += 1
                multiset[q] += 1
                src = tuple(sorted((x for x in multiset.elements() if x), reverse=True))
                incoming[src] = incoming.get(src, 0) + (p - q) * npairs
    return diag, incoming


def _p_basis_operator(k: int, alpha: Fraction) -> dict[Partition, dict[Partition, Fraction]]:
    parts = partitions_of(k)
    columns = {mu: _operator_column(mu, k, alpha) for mu in parts}
    out: dict[Partition, dict[Partition, Fraction]] = {}
    for idx, kappa in enumerate(parts):
        eig = columns[kappa][0]
        u: dict[Partition, Fraction] = {kappa: Fraction(1)}
        for lam in parts[idx + 1:]:
            diag, incoming = columns[lam]
            num = sum((u[src] * c for src, c in incoming.items() if src in u), Fraction(0))
            if num == 0:
                continue
            den = eig - diag
            if den == 0:
                raise ArithmeticError(f"degenerate operator spectrum at {kappa} vs {lam}")
            u[lam] = num / den
        out[kappa] = u
    return out


def _p_basis_gram_schmidt(k: int, alpha: Fraction) -> dict[Partition, dict[Partition, Fraction]]:
    parts = partitions_of(k)  # descending lex; dominance implies earlier
    n = len(parts)
    # p_lam = sum_mu L[lam][mu] m_mu, lower triangular in this ordering
    L = [_powersum_row(lam, parts) for lam in parts]
    # m_mu written in the power-sum basis: forward substitution
    m_in_p: list[list[Fraction]] = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(1)
        for j in range(i):
            c = L[i][j]
            if c:
                row = [r - c * s for r, s in zip(row, m_in_p[j])]
        m_in_p.append([r / L[i][i] for r in row])
    w = [Fraction(z_lambda(p)) * alpha ** len(p) for p in parts]

    def inner(f: list[Fraction], g: list[Fraction]) -> Fraction:
        return sum((a * b * c for a, b, c in zip(f, g, w) if a and b), Fraction(0))

    done: list[tuple[list[Fraction], dict[int, Fraction], Fraction]] = []
    out: dict[Partition, dict[Partition, Fraction]] = {}
    for i in reversed(range(n)):  # smallest in lex order first
        vec_p = list(m_in_p[i])
        vec_m: dict[int, Fraction] = {i: Fraction(1)}
        for prev_p, prev_m, prev_norm in done:
            c = inner(m_in_p[i], prev_p) / prev_norm
            if c:
                vec_p = [a - c * b for a, b in zip(vec_p, prev_p)]
                for j, val in prev_m.items():
                    vec_m[j] = vec_m.get(j, Fraction(0)) - c * val
        done.append((vec_p, vec_m, inner(vec_p, vec_p)))
        out[parts[i]] = {parts[j]: val for j, val in sorted(vec_m.items()) if val}
    return {p: out[p] for p in parts}


ROUTES = {"operator": _p_basis_operator, "gram_schmidt": _p_basis_gram_schmidt}


def p_basis(k: int, alpha: Fraction, route: str = "operator") -> dict[Partition, dict[Partition, Fraction]]:
    """Monic Jack P polynomials of weight k in the monomial basis."""
    try:
        builder = ROUTES[route]
    except KeyError:
        raise ValueError(f"unknown route {route!r}; choose from {sorted(ROUTES)}") from None
    return builder(k, Fraction(alpha))


def c_normalize(P: Mapping[Partition, Mapping[Partition, Fraction]], k: int) -> dict[Partition, dict[Partition, Fraction]]:
    """Scale each P_kappa by d_kappa so that sum_kappa d_kappa P_kappa = p_1^k."""
    parts = partitions_of(k)
    d: dict[Partition, Fraction] = {}
    for kappa in parts:
        acc = Fraction(p1_power_coefficient(kappa))
        for nu, dn in d.items():
            acc -= dn * P[nu].get(kappa, 0)
        d[kappa] = acc
    return {
        kappa: {lam: d[kappa] * c for lam, c in P[kappa].items() if c}
        for kappa in parts
    }


# -- tables -------------------------------------------------------------------

@dataclass(frozen=True)
class JackTable:
    """Exact monomial expansions C_kappa = sum_lam coeffs[kappa][lam] m_lam."""

    alpha: Fraction
    max_weight: int
    coeffs: dict[Partition, dict[Partition, Fraction]]
    beta: int | None = None
    _floats: dict = field(default_factory=dict, repr=False, compare=False)

    def expansion(self, kappa: Partition) -> dict[Partition, Fraction]:
        self._check_weight(sum(kappa))
        return self.coeffs[tuple(kappa)]

    def float_terms(self, kappa: Partition) -> list[tuple[Partition, float]]:
        terms = self._floats.get(kappa)
        if terms is None:
            exp = self.expansion(kappa)
            terms = sorted(((lam, float(c)) for lam, c in exp.items()), key=lambda t: -abs(t[1]))
            self._floats[kappa] = terms
        return terms

    def _check_weight(self, k: int) -> None:
        if k > self.max_weight:
            raise TableTooSmallError(f"weight {k} exceeds table max_weight {self.max_weight}")

    def check_sum_identity(self) -> bool:
        """Exact check of sum_{kappa |- k} C_kappa = p_1^k for every stored k."""
        for k in range(self.max_weight + 1):
            total: dict[Partition, Fraction] = {}
            for kappa in partitions_of(k):
                for lam, c in self.coeffs[kappa].items():
                    total[lam] = total.get(lam, 0) + c
            expected = {lam: p1_power_coefficient(lam) for lam in partitions_of(k)}
            if {lam: c for lam, c in total.items() if c} != expected:
                return False
        return True

    def to_json(self) -> str:
        """Byte-stable dump: {"kappa": {"lam": "num/den"}} in partition order."""
        doc = {}
        for k in range(self.max_weight + 1):
            for kappa in partitions_of(k):
                exp = self.coeffs[kappa]
                doc[format_partition(kappa)] = {
                    format_partition(lam): f"{exp[lam].numerator}/{exp[lam].denominator}"
                    for lam in partitions_of(k)
                    if lam in exp
                }
        return json.dumps({"alpha": str(self.alpha), "max_weight": self.max_weight, "coeffs": doc}, indent=None)


def _resolve_alpha(beta, alpha) -> tuple[Fraction, int | None]:
    if alpha is not None:
        a = Fraction(alpha)
        if a <= 0:
            raise ValueError("alpha must be positive")
        return a, None
    if beta is None:
        raise ValueError("give beta or alpha")
    tag = as_tag(beta)
    return tag.alpha, tag.beta


_TABLE_CACHE: dict[tuple[Fraction, int | None, str], JackTable] = {}


def build_jack_table(max_weight: int, beta: AlgebraTag | int | None = None, *, alpha=None,
                     route: str = "operator", cache: bool = True) -> JackTable:
    """Exact C-normalized Jack polynomials for every partition of weight <= max_weight.

    The Jack parameter is ``alpha = 2/beta`` unless ``alpha`` is given.
    Weight-k polynomials are built in k variables, so one table serves every
    number of variables.
    """
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    a, b = _resolve_alpha(beta, alpha)
    key = (a, b, route)
    cached = _TABLE_CACHE.get(key) if cache else None
    if cached is not None and cached.max_weight >= max_weight:
        return cached if cached.max_weight == max_weight else _truncate(cached, max_weight)
    coeffs: dict[Partition, dict[Partition, Fraction]] = {(): {(): Fraction(1)}}
    for k in range(1, max_weight + 1):
        coeffs.update(c_normalize(p_basis(k, a, route), k))
    table = JackTable(alpha=a, max_weight=max_weight, coeffs=coeffs, beta=b)
    if not table.check_sum_identity():
        raise ArithmeticError("C-normalization identity failed")
    if cache:
        _TABLE_CACHE[key] = table
    return table


def _truncate(table: JackTable, max_weight: int) -> JackTable:
    coeffs = {kappa: c for kappa, c in table.coeffs.items() if sum(kappa) <= max_weight}
    return JackTable(alpha=table.alpha, max_weight=max_weight, coeffs=coeffs, beta=table.beta)


# -- evaluation -------------------------------------------------------------

class MonomialEvaluator:
    """Memoized m_lam(x_1, ..., x_m) for one fixed point x."""

    def __init__(self, x: Iterable, exact: bool = False):
        self.x = tuple(Fraction(v) if exact else float(v) for v in x)
        self._memo: dict[tuple[Partition, int], object] = {}

    def __call__(self, lam: Partition):
        return self._eval(tuple(lam), len(self.x))

    def _eval(self, parts: Partition, nvars: int):
        if not parts:
            return 1
        if len(parts) > nvars:
            return 0
        key = (parts, nvars)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        xi = self.x[nvars - 1]
        total = self._eval(parts, nvars - 1) if len(parts) < nvars else 0
        seen = set()
        for j, v in enumerate(parts):
            if v in seen:
                continue
            seen.add(v)
            total = total + xi**v * self._eval(parts[:j] + parts[j + 1:], nvars - 1)
        self._memo[key] = total
        return total


def jack_C(table: JackTable, kappa: Sequence[int], x: Sequence, *, exact: bool = False,
           evaluator: MonomialEvaluator | None = None):
    """C_kappa(x) at eigenvalues x.

    Returns 0 when kappa has more parts than x has entries.  With
    ``exact=True`` and rational x the result is an exact Fraction.
    """
    kappa = tuple(kappa)
    table._check_weight(sum(kappa))
    if len(kappa) > len(x):
        return Fraction(0) if exact else 0.0
    mono = evaluator or MonomialEvaluator(x, exact=exact)
    if exact:
        return sum((c * mono(lam) for lam, c in table.expansion(kappa).items() if len(lam) <= len(x)),
                   Fraction(0))
    return math.fsum(c * mono(lam) for lam, c in table.float_terms(kappa) if len(lam) <= len(x))


def jack_values(table: JackTable, k: int, x: Sequence) -> dict[Partition, float]:
    """C_kappa(x) for every kappa |- k with at most len(x) parts, sharing monomial work."""
    mono = MonomialEvaluator(x)
    return {kappa: jack_C(table, kappa, x, evaluator=mono) for kappa in partitions_of(k, len(x))}
