"""Linear-Gaussian parametrisation of regression graphs.

Used as an independent numerical check: graph separation must coincide
with vanishing partial covariance for generic parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import NumericalFailure, SingularConditioningBlock, TooLarge
from .graph import RegressionGraph
from .separation import separates

COEF_LOW = 0.1
COEF_HIGH = 1.0


@dataclass
class ResponseBlock:
    members: list[int]
    past: list[int]
    coef: np.ndarray  # rows: members, cols: past
    resid_cov: np.ndarray


@dataclass
class ContextBlock:
    members: list[int]
    concentration: np.ndarray


@dataclass
class GaussianParams:
    n: int
    responses: list[ResponseBlock] = field(default_factory=list)
    contexts: list[ContextBlock] = field(default_factory=list)


@dataclass(frozen=True)
class CovMatrix:
    sigma: np.ndarray

    def __post_init__(self) -> None:
        s = self.sigma
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("covariance matrix must be square")
        if not np.allclose(s, s.T, atol=1e-12, rtol=0):
            raise NumericalFailure("covariance matrix is not symmetric")

    @property
    def n(self) -> int:
        return self.sigma.shape[0]

    def concentration(self) -> np.ndarray:
        return np.linalg.inv(self.sigma)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.sigma)[0])


def _coef(rng: np.random.Generator) -> float:
    return float(rng.uniform(COEF_LOW, COEF_HIGH) * rng.choice((-1.0, 1.0)))


def _dominant(members: list[int], pairs: set[tuple[int, int]], rng: np.random.Generator) -> np.ndarray:
    """Symmetric, strictly diagonally dominant matrix with the given off-diagonal support."""
    m = len(members)
    a = np.zeros((m, m))
    for x, y in combinations(range(m), 2):
        if (members[x], members[y]) in pairs or (members[y], members[x]) in pairs:
            a[x, y] = a[y, x] = _coef(rng)
    for x in range(m):
        a[x, x] = np.abs(a[x]).sum() + rng.uniform(0.5, 1.5)
    return a


def sample_parameters(g: RegressionGraph, seed: int) -> GaussianParams:
    """Random parameters whose zero pattern matches ``g`` exactly."""
    rng = np.random.default_rng(seed)
    p = GaussianParams(g.n)
    pairs_dashed = {e.pair for e in g.edges() if e.kind.value == "dashed"}
    pairs_full = {e.pair for e in g.edges() if e.kind.value == "full"}
    # generate from the last component backwards, as the factorisation does
    for comp in reversed(g.ordered_components()):
        members = sorted(comp)
        if members[0] in g.context:
            p.contexts.append(ContextBlock(members, _dominant(members, pairs_full, rng)))
            continue
        past = sorted(g.past(members[0]))
        coef = np.zeros((len(members), len(past)))
        for r, i in enumerate(members):
            for c, k in enumerate(past):
                if k in g.parents[i]:
                    coef[r, c] = _coef(rng)
        p.responses.append(ResponseBlock(members, past, coef, _dominant(members, pairs_dashed, rng)))
    return p


def implied_covariance(p: GaussianParams, g: RegressionGraph | None = None) -> CovMatrix:
    """Joint covariance of the linear system, built from the last block forward.

    Context blocks contribute inverse concentrations; a response block with
    coefficients ``B`` and residual covariance ``W`` contributes
    ``B S B' + W`` and cross terms ``B S`` where ``S`` covers its past.
    """
    n = p.n
    sigma = np.zeros((n, n))
    for blk in p.contexts:
        idx = np.ix_(blk.members, blk.members)
        sigma[idx] = np.linalg.inv(blk.concentration)
    for blk in p.responses:
        if blk.past:
            s_pp = sigma[np.ix_(blk.past, blk.past)]
            cross = blk.coef @ s_pp
            sigma[np.ix_(blk.members, blk.past)] = cross
            sigma[np.ix_(blk.past, blk.members)] = cross.T
            sigma[np.ix_(blk.members, blk.members)] = cross @ blk.coef.T + blk.resid_cov
        else:
            sigma[np.ix_(blk.members, blk.members)] = blk.resid_cov
    sigma = (sigma + sigma.T) / 2
    if n and np.linalg.eigvalsh(sigma)[0] <= 0:
        raise NumericalFailure("implied covariance is not positive definite")
    return CovMatrix(sigma)


def sweep(a: np.ndarray, pivots) -> np.ndarray:
    """Sweep a symmetric matrix on the given pivot indices."""
    a = np.array(a, dtype=float, copy=True)
    for k in pivots:
        d = a[k, k]
        if abs(d) < 1e-13:
            raise SingularConditioningBlock(f"zero pivot while sweeping on {k}")
        row = a[k, :].copy()
        col = a[:, k].copy()
        a -= np.outer(col, row) / d
        a[k, :] = row / d
        a[:, k] = col / d
        a[k, k] = -1.0 / d
    return a


def partial_covariance(cov: CovMatrix | np.ndarray, i: int, k: int, c=()) -> float:
    """Covariance of ``i`` and ``k`` after linear adjustment for ``c``."""
    s = cov.sigma if isinstance(cov, CovMatrix) else np.asarray(cov, dtype=float)
    c = sorted(c)
    if i == k or i in c or k in c:
        raise ValueError("i, k must differ and lie outside c")
    if not c:
        return float(s[i, k])
    idx = [i, k] + c
    sub = s[np.ix_(idx, idx)]
    swept = sweep(sub, range(2, len(idx)))
    return float(swept[0, 1])


def partial_correlation(cov: CovMatrix | np.ndarray, i: int, k: int, c=()) -> float:
    s = cov.sigma if isinstance(cov, CovMatrix) else np.asarray(cov, dtype=float)
    sik = partial_covariance(s, i, k, c)
    sii = partial_covariance_diag(s, i, c)
    skk = partial_covariance_diag(s, k, c)
    return sik / np.sqrt(sii * skk)


def partial_covariance_diag(s: np.ndarray, i: int, c) -> float:
    c = sorted(c)
    if not c:
        return float(s[i, i])
    s_ic = s[np.ix_([i], c)]
    return float(s[i, i] - (s_ic @ np.linalg.solve(s[np.ix_(c, c)], s_ic.T))[0, 0])


@dataclass(frozen=True)
class RecursionResiduals:
    regression: float
    concentration: float
    covariance: float

    @property
    def max(self) -> float:
        return max(self.regression, self.concentration, self.covariance)


def recursion_identity_checks(cov: CovMatrix | np.ndarray) -> RecursionResiduals:
    """Residuals of the three recursive relations for a 3x3 covariance.

    Nodes 1, 2, 3 map to rows 0, 1, 2.  Each side is computed from its own
    definition: regression coefficients from the normal equations,
    concentrations from matrix inverses, partial covariances by formula.
    """
    s = cov.sigma if isinstance(cov, CovMatrix) else np.asarray(cov, dtype=float)
    if s.shape != (3, 3):
        raise ValueError("recursion checks need a 3x3 covariance matrix")
    # regression of Y1 on (Y2, Y3)
    b_12_3, b_13_2 = np.linalg.solve(s[np.ix_([1, 2], [1, 2])], s[[1, 2], 0])
    b_13 = s[0, 2] / s[2, 2]
    b_23 = s[1, 2] / s[2, 2]
    r_reg = abs(b_13 - (b_13_2 + b_12_3 * b_23))

    conc = np.linalg.inv(s)
    conc_23_marg = np.linalg.inv(s[np.ix_([1, 2], [1, 2])])[0, 1]
    r_con = abs(conc_23_marg - (conc[1, 2] - conc[0, 1] * conc[0, 2] / conc[0, 0]))

    s_12_3 = partial_covariance(s, 0, 1, [2])
    r_cov = abs(s_12_3 - (s[0, 1] - s[0, 2] * s[1, 2] / s[2, 2]))
    return RecursionResiduals(float(r_reg), float(r_con), float(r_cov))


@dataclass(frozen=True)
class FaithfulnessViolation:
    i: int
    k: int
    c: tuple[int, ...]
    value: float
    verdict: str  # "nonzero-but-separated" or "zero-but-connected"

    def format(self, labels) -> str:
        cs = ",".join(labels[x] for x in self.c)
        return f"{labels[self.i]} {labels[self.k]} {{{cs}}} {self.value:.3e} {self.verdict}"


@dataclass
class FaithfulnessReport:
    separated: int = 0
    connected: int = 0
    zero_violations: list[FaithfulnessViolation] = field(default_factory=list)
    nonzero_violations: list[FaithfulnessViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.zero_violations

    def to_lines(self, labels) -> list[str]:
        lines = [
            f"separated: {self.separated}",
            f"connected: {self.connected}",
            f"zero_violations: {len(self.zero_violations)}",
            f"nonzero_violations: {len(self.nonzero_violations)}",
        ]
        for v in self.zero_violations + self.nonzero_violations:
            lines.append(v.format(labels))
        return lines


MAX_FAITHFULNESS_NODES = 10


def faithfulness_check(
    g: RegressionGraph,
    seed: int = 0,
    draws: int = 5,
    tol_zero: float = 1e-8,
    tol_nonzero: float = 1e-6,
) -> FaithfulnessReport:
    """Compare separation with vanishing partial covariance over random draws."""
    if g.n > MAX_FAITHFULNESS_NODES:
        raise TooLarge(f"faithfulness check is limited to {MAX_FAITHFULNESS_NODES} nodes")
    ss = np.random.SeedSequence(seed)
    covs = [implied_covariance(sample_parameters(g, int(child.generate_state(1)[0])), g) for child in ss.spawn(draws)]
    rep = FaithfulnessReport()
    nodes = range(g.n)
    for i, k in combinations(nodes, 2):
        rest = [x for x in nodes if x not in (i, k)]
        for r in range(len(rest) + 1):
            for c in combinations(rest, r):
                vals = [abs(partial_covariance(s, i, k, c)) for s in covs]
                worst = max(vals) if vals else 0.0
                if separates(g, {i}, {k}, c):
                    rep.separated += 1
                    if worst > tol_zero:
                        rep.zero_violations.append(FaithfulnessViolation(i, k, c, worst, "nonzero-but-separated"))
                else:
                    rep.connected += 1
                    if worst < tol_nonzero:
                        rep.nonzero_violations.append(FaithfulnessViolation(i, k, c, worst, "zero-but-connected"))
    return rep


# -- chain-graph parametrisations, used to cross-check class membership --------


def chain_graph_covariance(g: RegressionGraph, interpretation: str, seed: int) -> CovMatrix:
    """Covariance of a Gaussian chain graph with the components of ``g``.

    Dashed lines are read as undirected chain-graph edges.  ``"amp"``: each
    block is ``Y_j = B Y_past + e`` with ``e`` having a concentration matrix
    supported on the block's edges.  ``"lwf"``: the conditional concentration
    of the block given its past has that support and the block-to-parent
    concentration entries are supported on the arrows.
    """
    if interpretation not in ("amp", "lwf"):
        raise ValueError("interpretation must be 'amp' or 'lwf'")
    rng = np.random.default_rng(seed)
    p = GaussianParams(g.n)
    pairs = {e.pair for e in g.edges() if e.kind.value != "arrow"}
    for comp in reversed(g.ordered_components()):
        members = sorted(comp)
        k_jj = _dominant(members, pairs, rng)
        if members[0] in g.context:
            p.contexts.append(ContextBlock(members, k_jj))
            continue
        past = sorted(g.past(members[0]))
        support = np.zeros((len(members), len(past)))
        for r, i in enumerate(members):
            for c, k in enumerate(past):
                if k in g.parents[i]:
                    support[r, c] = _coef(rng)
        inv_k = np.linalg.inv(k_jj)
        coef = support if interpretation == "amp" else -inv_k @ support
        p.responses.append(ResponseBlock(members, past, coef, inv_k))
    return implied_covariance(p)
