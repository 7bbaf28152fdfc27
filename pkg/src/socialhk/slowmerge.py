"""Constructions and decision procedures for arbitrarily slow merging.

Two opinion clusters sitting on disjoint vertex sets of the physical graph
can be made to merge arbitrarily late exactly when the spectra of their
induced subgraphs admit certain sign patterns.  This module provides:

* the classic 4-path family of slow-merging states;
* the sufficient condition (an eigenvalue in (0,1) of the contracting side
  whose eigenspace contains a vector that is strictly one-signed on the
  boundary-adjacent vertices) together with the explicit state construction
  and its predicted merge time;
* the necessary condition on boundary-restricted eigenspaces (a nonzero
  one-signed boundary vector for some eigenvalue in (0,1)), decided by exact
  LP feasibility;
* the sign-ratio machinery (window ratios, their floor over an eigenspace,
  the perturbation-persistence check) and the parity elimination of signed
  geometric rates that powers the necessity argument;
* an exhaustive verifier that complete multipartite graphs admit no slow
  merging across any split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import spectral
from .dynamics import OpinionState
from .errors import (
    DeltaOutOfRange,
    DeltaTooLarge,
    DisconnectedPart,
    EmptyVertexSet,
    GraphTooLarge,
    NoBoundary,
    PreconditionViolated,
    SpilloverVertices,
    ZeroOnWindow,
)
from .graphs import Graph, induced_subgraph
from .linprog import max_min_margin, nonneg_nonzero_vector

EIG_TOL = 1e-9
MARGIN_TOL = 1e-9

SUFFICIENT_HOLDS = "sufficient_holds"
SUFFICIENT_FAILS = "sufficient_fails"
NECESSARY_HOLDS = "necessary_holds"
NECESSARY_FAILS = "necessary_fails"


@dataclass(frozen=True)
class SplitSpec:
    """Two disjoint vertex sets plus the boundary edges joining them.

    Boundary edges are the physical edges crossing from ``vp`` to ``vq``,
    listed lexicographically; ``boundary_adjacent`` are the distinct
    vp-endpoints of those edges, in ascending order.
    """

    vp: tuple
    vq: tuple
    boundary_edges: tuple

    @property
    def b(self) -> int:
        return len(self.boundary_edges)

    @property
    def boundary_adjacent(self) -> tuple:
        return tuple(sorted({i for i, _ in self.boundary_edges}))

    @property
    def l(self) -> int:
        return len(self.boundary_adjacent)


def make_split(gph: Graph, vp, vq) -> SplitSpec:
    vp = tuple(sorted(set(vp)))
    vq = tuple(sorted(set(vq)))
    if not vp or not vq:
        raise EmptyVertexSet("both sides of a split must be nonempty")
    if set(vp) & set(vq):
        raise ValueError("split sides must be disjoint")
    for v in vp + vq:
        if not 0 <= v < gph.n:
            raise ValueError(f"vertex {v} out of range")
    boundary = tuple(
        sorted((i, j) for i in vp for j in vq if gph.has_edge(i, j))
    )
    return SplitSpec(vp, vq, boundary)


@dataclass(frozen=True)
class EigenRecord:
    """Per-eigenvalue outcome of a sign-condition feasibility question."""

    eigenvalue: float
    dim: int
    feasible: bool
    margin: float = float("nan")


@dataclass(frozen=True)
class MergeVerdict:
    kind: str
    eigenvalue: float | None = None
    witness: np.ndarray | None = None
    records: tuple = ()


@lru_cache(maxsize=4096)
def _cached_decompose(g: Graph) -> spectral.SpectralDecomposition:
    return spectral.decompose(g)


@lru_cache(maxsize=4096)
def _rational_eigenspace(g: Graph, lam_float: float):
    """Exact eigenpair when the eigenvalue is a small rational.

    The normalized adjacency matrix is rational, so rational eigenvalues
    admit exact eigenspaces by Fraction elimination.  Snapping to them keeps
    constructed states (and hence merge times) exact at every precision;
    irrational eigenvalues return None and callers keep the float basis.
    """
    from fractions import Fraction

    lam = Fraction(lam_float).limit_denominator(10_000)
    if abs(float(lam) - lam_float) > 1e-9:
        return None
    n = g.n
    deg = [g.degree(i) for i in range(n)]
    m = [
        [
            (Fraction(1, deg[i]) if g.has_edge(i, j) else Fraction(0))
            - (lam if i == j else 0)
            for j in range(n)
        ]
        for i in range(n)
    ]
    # Fraction RREF to extract the nullspace.
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, n) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = m[row][col]
        m[row] = [x / inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -m[r][f]
        denom = math.lcm(*[x.denominator for x in vec])
        ints = [x * denom for x in vec]
        g_all = 0
        for x in ints:
            g_all = math.gcd(g_all, abs(int(x)))
        basis.append(np.array([float(x / g_all) for x in ints]))
    return float(lam), np.column_stack(basis)


# -- the 4-path family -------------------------------------------------------


def four_path_family(delta: float, bound: float = 1.0):
    """The slow-merging family on the 4-path: [-R, 0, R, -(R - delta)].

    Agent 4 starts just outside agent 3's confidence; the left trio contracts
    by 1/2 each step, so the merge happens at the smallest k with
    R / 2^k <= delta, i.e. ceil(log2(R / delta)) steps.  Requires
    0 < delta < R/2.  Returns (state, predicted merge time).
    """
    if not 0 < delta < bound / 2:
        raise DeltaOutOfRange(f"delta must lie in (0, {bound / 2})")
    state = OpinionState([-bound, 0.0, bound, -(bound - delta)], bound)
    return state, _geometric_hitting_time(bound, 0.5, delta)


def _geometric_hitting_time(start: float, rate: float, target: float) -> int:
    """Smallest k >= 1 with start * rate^k <= target, evaluated in the same
    float arithmetic the simulator uses (repeated multiplication, so powers
    of two stay exact)."""
    t = start
    k = 0
    while t > target:
        t *= rate
        k += 1
        if k > 10_000_000:
            raise RuntimeError("hitting time exceeds iteration cap")
    return k


# -- sufficient condition ----------------------------------------------------


def sufficient_check(gph: Graph, split: SplitSpec) -> MergeVerdict:
    """Decide whether the split admits the sufficient slow-merging pattern.

    Scans every eigenvalue cluster of the vp-induced subgraph lying strictly
    inside (0, 1), and asks (by LP margin maximization over the eigenspace)
    for a vector that is strictly one-signed on all boundary-adjacent
    vertices.  Holds with the largest such eigenvalue; the witness is
    oriented negative on the boundary window.
    """
    sub, vs = induced_subgraph(gph, split.vp)
    if not sub.is_connected():
        raise DisconnectedPart("the vp-induced subgraph must be connected")
    local = {v: k for k, v in enumerate(vs)}
    window = [local[v] for v in split.boundary_adjacent]
    if not window:
        raise NoBoundary("split has no boundary edges")
    dec = _cached_decompose(sub)

    records = []
    hit = None
    for cluster in dec.clusters:
        lam = float(dec.eigenvalues[cluster[0]])
        if not EIG_TOL < lam < 1.0 - EIG_TOL:
            continue
        exact = _rational_eigenspace(sub, lam)
        if exact is not None:
            lam, basis = exact
        else:
            basis = dec.eigenvectors[:, list(cluster)]
        margin, coeffs = max_min_margin(basis[window, :])
        feasible = margin > MARGIN_TOL
        records.append(EigenRecord(lam, basis.shape[1], feasible, margin))
        if feasible and (hit is None or lam > hit[0]):
            hit = (lam, basis @ coeffs)
    records.sort(key=lambda r: -r.eigenvalue)
    if hit is None:
        return MergeVerdict(SUFFICIENT_FAILS, records=tuple(records))
    return MergeVerdict(SUFFICIENT_HOLDS, hit[0], hit[1], tuple(records))


def construct_slow_state(
    gph: Graph, split: SplitSpec, verdict: MergeVerdict, delta: float, bound: float = 1.0
):
    """Build the initial state that delays the merge to ceil(log_{1/lambda}(v0/delta)).

    The witness eigenvector is scaled to opinion spread exactly R with its
    boundary-adjacent entries negative; v0 is the smallest magnitude among
    those entries.  The vq side (and any leftover vertices) sit at R - delta,
    just outside confidence of the boundary until the vp side has contracted
    by a factor of delta / v0.  Returns (state, predicted merge time).
    """
    if verdict.kind != SUFFICIENT_HOLDS or verdict.witness is None:
        raise PreconditionViolated("need a sufficient_holds verdict with a witness")
    sub, vs = induced_subgraph(gph, split.vp)
    local = {v: k for k, v in enumerate(vs)}
    window = [local[v] for v in split.boundary_adjacent]

    v = np.array(verdict.witness, dtype=float)
    if np.max(v[window]) > -MARGIN_TOL:
        raise PreconditionViolated("witness must be strictly negative on the boundary window")
    return _assemble_slow_state(gph, split, vs, v, float(verdict.eigenvalue), delta, bound)


def _assemble_slow_state(gph, split, vs, v, lam, delta, bound: float = 1.0):
    spread = float(np.max(v) - np.min(v))
    v = (v / spread) * bound  # divide first: symmetric witnesses scale exactly
    local = {vv: k for k, vv in enumerate(vs)}
    window = [local[u] for u in split.boundary_adjacent]
    v0 = -float(np.max(v[window]))
    if not 0 < delta < v0:
        raise DeltaTooLarge(f"delta must lie in (0, {v0})")

    outside = [u for u in range(gph.n) if u not in set(split.vp) | set(split.vq)]
    spill = sorted(u for u in outside if any(gph.has_edge(u, w) for w in split.vp))
    if spill:
        raise SpilloverVertices(spill)

    x = np.full(gph.n, bound - delta)
    for u in vs:
        x[u] = v[local[u]]
    state = OpinionState(x, bound)
    return state, _geometric_hitting_time(v0, lam, delta)


# -- sign ratios --------------------------------------------------------------


@dataclass(frozen=True)
class SignRatio:
    """min(|min/max|, |max/min|) over a window, with a mixed-signs flag."""

    value: float
    mixed: bool


def mixed_sign_ratio(v, l: int) -> SignRatio:
    """Window sign ratio of the first ``l`` coordinates.

    Zero (flagged unmixed) when the window extrema do not straddle zero;
    raises when the window vanishes identically.
    """
    w = np.asarray(v, dtype=float)[:l]
    if not np.any(w != 0.0):
        raise ZeroOnWindow("vector is zero on the whole window")
    lo, hi = float(np.min(w)), float(np.max(w))
    if not lo < 0.0 < hi:
        return SignRatio(0.0, False)
    return SignRatio(min(abs(lo / hi), abs(hi / lo)), True)


@dataclass(frozen=True)
class SignRatioFloor:
    """Lower bound on the window sign ratio over a subspace.

    ``exact`` marks the one-dimensional case; otherwise ``value`` is the
    minimum over a seeded sample of the unit sphere and only estimates the
    floor from above.  ``same_sign_exists`` short-circuits everything: the
    space contains a nonzero vector that is one-signed (or zero) on the
    window, so no positive floor exists.
    """

    value: float | None
    exact: bool
    same_sign_exists: bool


_FLOOR_SAMPLES = 10_000
_FLOOR_SEED = 20_240_601


def sign_ratio_floor(basis: np.ndarray, l: int) -> SignRatioFloor:
    basis = np.asarray(basis, dtype=float)
    if basis.ndim == 1:
        basis = basis[:, None]
    dim = basis.shape[1]
    window = basis[:l, :]

    if np.linalg.matrix_rank(window, tol=1e-12) < dim:
        return SignRatioFloor(None, False, True)  # some vector vanishes on the window
    if nonneg_nonzero_vector(window) is not None:
        return SignRatioFloor(None, False, True)

    if dim == 1:
        return SignRatioFloor(mixed_sign_ratio(basis[:, 0], l).value, True, False)

    rng = np.random.Generator(np.random.Philox(_FLOOR_SEED))
    n_global = int(0.8 * _FLOOR_SAMPLES)
    coeffs = rng.normal(size=(n_global, dim))
    coeffs /= np.linalg.norm(coeffs, axis=1)[:, None]
    best_val, best_c = np.inf, None
    for c in coeffs:
        val = mixed_sign_ratio(window @ c, l).value
        if val < best_val:
            best_val, best_c = val, c
    radius = 0.5
    for c in rng.normal(size=(_FLOOR_SAMPLES - n_global, dim)):
        cand = best_c + radius * c / np.linalg.norm(c)
        cand /= np.linalg.norm(cand)
        val = mixed_sign_ratio(window @ cand, l).value
        if val < best_val:
            best_val, best_c = val, cand
            radius = max(radius * 0.9, 1e-3)
    return SignRatioFloor(float(best_val), False, False)


@dataclass(frozen=True)
class SignPersistenceReport:
    """Outcome of the perturbation-persistence check for one (v, u, gamma)."""

    plus_holds: bool
    minus_holds: bool
    extra_applicable: bool
    extra_holds: bool

    @property
    def ok(self) -> bool:
        return (self.plus_holds or self.minus_holds) and (
            not self.extra_applicable or self.extra_holds
        )


def sign_persistence_check(v, u, gamma: float) -> SignPersistenceReport:
    """Check that adding or subtracting any perturbation keeps a positive
    maximum with window ratio at least gamma / (gamma + 2).

    Requires v to have strictly mixed signs and 0 < gamma <= max(v)/|min(v)|.
    When the plus branch holds and min(v - u) < 0, additionally checks
    max(v + u) >= (gamma |min(v - u)| - max(0, max(v - u))) / (gamma + 1).
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    if v.shape != u.shape:
        raise PreconditionViolated("v and u must have equal length")
    vmax, vmin = float(np.max(v)), float(np.min(v))
    if not vmin < 0.0 < vmax:
        raise PreconditionViolated("v must have strictly mixed signs")
    if not 0.0 < gamma <= vmax / abs(vmin) * (1.0 + 1e-12):
        raise PreconditionViolated("gamma must lie in (0, max(v)/|min(v)|]")
    gp = gamma / (gamma + 2.0)

    def branch(w):
        hi, lo = float(np.max(w)), float(np.min(w))
        return hi > 0.0 and abs(hi) >= gp * abs(lo)

    plus, minus = branch(v + u), branch(v - u)
    applicable = plus and float(np.min(v - u)) < 0.0
    extra = True
    if applicable:
        m2 = abs(float(np.min(v - u)))
        p2 = max(0.0, float(np.max(v - u)))
        extra = float(np.max(v + u)) >= (gamma * m2 - p2) / (gamma + 1.0) - 1e-12
    return SignPersistenceReport(plus, minus, applicable, extra)


# -- parity elimination of signed rates ---------------------------------------


@dataclass(frozen=True)
class EliminationResult:
    """Paired-rate form of a signed geometric sum restricted to a window.

    For rates lambda_i with vectors u_i, the window sums
    S_j[k] = sum_i lambda_i^k u_ij split by parity of k into
    sum_i alpha_i mu_i^k v_ij (k even) and sum_i zeta_i mu_i^k z_ij (k odd),
    where mu pairs +/- rates, alpha/zeta are window-max weights, and v/z are
    window vectors with max-abs entry 1 (or zero).
    """

    mu: np.ndarray
    alpha: np.ndarray
    zeta: np.ndarray
    even_vectors: np.ndarray  # m x l
    odd_vectors: np.ndarray   # m x l

    def even_sum(self, k: int) -> np.ndarray:
        return (self.alpha * self.mu**k) @ self.even_vectors

    def odd_sum(self, k: int) -> np.ndarray:
        return (self.zeta * self.mu**k) @ self.odd_vectors

    def window_sum(self, k: int) -> np.ndarray:
        return self.even_sum(k) if k % 2 == 0 else self.odd_sum(k)


def parity_elimination(rates, vectors, l: int) -> EliminationResult:
    """Pair +/- rates of equal magnitude into even-k and odd-k window vectors.

    Inputs sharing the same signed rate are summed first (eigenspaces are
    linear, so this loses nothing); exact-zero rates are discarded (they
    contribute nothing for k >= 1).  Indices whose weights both vanish are
    dropped and the rate list re-enumerated.
    """
    if len(rates) != len(vectors):
        raise ValueError("rates and vectors must align")
    by_rate: dict = {}
    for lam, u in zip(rates, vectors):
        lam = float(lam)
        u = np.asarray(u, dtype=float)[:l]
        if lam in by_rate:
            by_rate[lam] = by_rate[lam] + u
        else:
            by_rate[lam] = u.copy()
    mags = sorted({abs(lam) for lam in by_rate if lam != 0.0}, reverse=True)

    mu, alpha, zeta, evens, odds = [], [], [], [], []
    zero = np.zeros(l)
    for m in mags:
        up = by_rate.get(m, zero)
        um = by_rate.get(-m, zero)
        a = float(np.max(np.abs(up + um)))
        z = float(np.max(np.abs(up - um)))
        if a == 0.0 and z == 0.0:
            continue
        mu.append(m)
        alpha.append(a)
        zeta.append(z)
        evens.append((up + um) / a if a != 0.0 else zero)
        odds.append((up - um) / z if z != 0.0 else zero)
    return EliminationResult(
        np.array(mu),
        np.array(alpha),
        np.array(zeta),
        np.array(evens).reshape(len(mu), l),
        np.array(odds).reshape(len(mu), l),
    )


# -- boundary-restricted eigenspaces and the necessary condition --------------


@dataclass(frozen=True)
class BoundaryEigenspace:
    """Span of eigenvector restrictions to the boundary-edge coordinates.

    Coordinate e is the vp-endpoint value (for vp-side eigenvectors) or the
    vq-endpoint value (for vq-side ones) of the e-th boundary edge; the space
    is the joint span over both sides for one eigenvalue.
    """

    eigenvalue: float
    basis: np.ndarray  # b x dim


def boundary_eigenspaces(gph: Graph, split: SplitSpec) -> list:
    """Boundary-restricted eigenspaces for every non-unit eigenvalue of the
    two induced subgraphs, merged across sides within 1e-9 and rank-reduced.
    Ordered by descending eigenvalue."""
    if split.b == 0:
        raise NoBoundary("split has no boundary edges")
    contributions = []
    for side_vertices, positions in (
        (split.vp, [i for i, _ in split.boundary_edges]),
        (split.vq, [j for _, j in split.boundary_edges]),
    ):
        sub, vs = induced_subgraph(gph, side_vertices)
        local = {v: k for k, v in enumerate(vs)}
        rows = [local[p] for p in positions]
        dec = _cached_decompose(sub)
        for cluster in dec.clusters:
            lam = float(dec.eigenvalues[cluster[0]])
            if abs(lam - 1.0) <= EIG_TOL:
                continue
            contributions.append((lam, dec.eigenvectors[np.ix_(rows, list(cluster))]))

    contributions.sort(key=lambda t: -t[0])
    spaces = []
    idx = 0
    while idx < len(contributions):
        lam = contributions[idx][0]
        stack = [contributions[idx][1]]
        idx += 1
        while idx < len(contributions) and abs(contributions[idx][0] - lam) <= EIG_TOL:
            stack.append(contributions[idx][1])
            idx += 1
        joint = np.hstack(stack)
        basis = _column_space(joint)
        spaces.append(BoundaryEigenspace(lam, basis))
    return spaces


def _column_space(mat: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the column space, deterministic signs."""
    if mat.size == 0 or np.max(np.abs(mat)) <= tol:
        return np.zeros((mat.shape[0], 0))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    cols = []
    for c in range(rank):
        col = u[:, c]
        lead = next(x for x in col if abs(x) > 1e-12)
        cols.append(col if lead > 0 else -col)
    return np.column_stack(cols) if cols else np.zeros((mat.shape[0], 0))


def necessary_check(gph: Graph, split: SplitSpec) -> MergeVerdict:
    """Decide whether the split satisfies the necessary slow-merging pattern:
    some eigenvalue in (0, 1) whose boundary-restricted eigenspace contains a
    nonzero vector with no two opposite-signed boundary entries.

    A failing verdict certifies (by contraposition) that merging across this
    split cannot be delayed arbitrarily long.
    """
    spaces = boundary_eigenspaces(gph, split)
    records = []
    hit = None
    for sp in spaces:
        if not EIG_TOL < sp.eigenvalue < 1.0 - EIG_TOL:
            continue
        dim = sp.basis.shape[1]
        witness = nonneg_nonzero_vector(sp.basis) if dim else None
        records.append(EigenRecord(sp.eigenvalue, dim, witness is not None))
        if witness is not None and hit is None:
            hit = (sp.eigenvalue, witness)
    if hit is None:
        return MergeVerdict(NECESSARY_FAILS, records=tuple(records))
    return MergeVerdict(NECESSARY_HOLDS, hit[0], hit[1], tuple(records))


@dataclass(frozen=True)
class NoSlowMergeReport:
    """Exhaustive necessary-condition scan over every split of a graph."""

    n: int
    checked: int
    skipped_no_boundary: int
    holds: tuple  # (vp, vq, eigenvalue) for any split where the condition held

    @property
    def all_fail(self) -> bool:
        return not self.holds


def rpartite_no_slow_merge(spec, max_n: int = 8) -> NoSlowMergeReport:
    """Run the necessary check on every ordered pair of disjoint nonempty
    vertex sets of a complete multipartite graph joined by at least one edge.

    Complete multipartite graphs admit no split where the condition holds,
    so each is expected to fail; the report lists any that held instead.
    """
    from .graphs import complete_r_partite

    if spec.n > max_n:
        raise GraphTooLarge(spec.n, max_n)
    g = complete_r_partite(spec)
    return scan_all_splits(g)


def scan_all_splits(g: Graph) -> NoSlowMergeReport:
    n = g.n
    vertices = list(range(n))
    checked = skipped = 0
    holds = []
    for vp_mask in range(1, 1 << n):
        vp = tuple(v for v in vertices if vp_mask >> v & 1)
        rest = [v for v in vertices if not vp_mask >> v & 1]
        if not rest:
            continue
        m = len(rest)
        for vq_mask in range(1, 1 << m):
            vq = tuple(rest[i] for i in range(m) if vq_mask >> i & 1)
            split = make_split(g, vp, vq)
            if split.b == 0:
                skipped += 1
                continue
            checked += 1
            verdict = necessary_check(g, split)
            if verdict.kind == NECESSARY_HOLDS:
                holds.append((vp, vq, verdict.eigenvalue))
    return NoSlowMergeReport(n, checked, skipped, tuple(holds))
