"""Eigenstructure of row-normalized adjacency matrices of self-looped graphs.

The normalized adjacency matrix A = D^{-1} A_adj of an undirected self-looped
graph is similar to the symmetric matrix M = D^{1/2} A D^{-1/2}, so its
spectrum is real and it is diagonalizable.  All decompositions here exploit
that similarity: a cyclic Jacobi sweep diagonalizes M, and eigenvectors are
mapped back through D^{-1/2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, PreconditionViolated, SpreadTooLarge
from .graphs import Graph, PartiteSpec, complete_r_partite, normalized_adjacency

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
CLUSTER_TOL = 1e-9


def jacobi_eigh(sym: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted.  Stops when the
    largest off-diagonal magnitude drops to ``tol``; raises NoConvergence if
    the sweep budget runs out first.
    """
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n)
    if n == 1:
        return np.array([a[0, 0]]), v
    for _ in range(max_sweeps):
        off = np.max(np.abs(a - np.diag(np.diag(a))))
        if off <= tol:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                a[p, :], a[q, :] = c * a[p, :] - s * a[q, :], s * a[p, :] + c * a[q, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                vp = c * v[:, p] - s * v[:, q]
                vq = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
    off = np.max(np.abs(a - np.diag(np.diag(a))))
    if off <= tol:
        return np.diag(a).copy(), v
    raise NoConvergence(max_sweeps)


def _sign_normalize(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    for x in vec:
        if abs(x) > tol:
            return vec if x > 0 else -vec
    return vec


def _cluster(values: np.ndarray, tol: float = CLUSTER_TOL) -> list[list[int]]:
    """Group indices of (sorted-adjacent) equal values within ``tol``."""
    clusters: list[list[int]] = []
    for idx in range(len(values)):
        if clusters and abs(values[idx] - values[clusters[-1][0]]) <= tol:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return clusters


@dataclass(frozen=True)
class SpectralDecomposition:
    """Real eigendecomposition of a normalized adjacency matrix.

    Eigenvalues are sorted by descending absolute value, ties broken by
    descending value; eigenvectors are unit columns with their first
    significant entry positive.  ``clusters`` partitions indices into groups
    of eigenvalues equal within ``CLUSTER_TOL`` (grouping by value, so +m and
    -m land in different clusters).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: tuple
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def cluster_of(self, index: int) -> tuple:
        for cl in self.clusters:
            if index in cl:
                return cl
        raise IndexError(index)

    def eigenvalues_by_value(self) -> np.ndarray:
        return np.sort(self.eigenvalues)[::-1]

    def second_largest_abs(self) -> float:
        """max |lambda| over eigenvalues other than the top one (0 for n=1)."""
        if self.n == 1:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues[1:])))


def decompose(g: Graph) -> SpectralDecomposition:
    """Eigendecomposition of A = D^{-1} A_adj via the symmetric similarity.

    M = D^{1/2} A D^{-1/2} is symmetric and shares A's eigenvalues; Jacobi
    diagonalizes M and eigenvectors return through D^{-1/2}.
    """
    deg = g.degrees.astype(float)
    root = np.sqrt(deg)
    adj = g.adjacency_matrix()
    sym = adj / np.outer(root, root)
    vals, vecs = jacobi_eigh(sym)
    back = vecs / root[:, None]
    back /= np.linalg.norm(back, axis=0)
    order = sorted(range(len(vals)), key=lambda i: (-abs(vals[i]), -vals[i]))
    vals = vals[order]
    back = back[:, order]
    back = np.column_stack([_sign_normalize(back[:, i]) for i in range(back.shape[1])])
    clusters = tuple(tuple(cl) for cl in _cluster(vals))
    return SpectralDecomposition(vals, back, clusters, g.degrees.copy())


def eigenspace_basis(dec: SpectralDecomposition, cluster) -> np.ndarray:
    """Columns spanning the eigenspace of one eigenvalue cluster."""
    return dec.eigenvectors[:, list(cluster)]


# -- spectrum report for connected incomplete graphs ------------------------


@dataclass(frozen=True)
class SpectrumReport:
    """Sanity flags for the spectrum of a connected incomplete self-looped graph."""

    top_eigenvalue_simple: bool
    second_abs_positive: bool
    has_positive_secondary: bool

    @property
    def all_ok(self) -> bool:
        return self.top_eigenvalue_simple and self.second_abs_positive and self.has_positive_secondary


def incomplete_spectrum_report(g: Graph, dec: SpectralDecomposition, tol: float = 1e-9) -> SpectrumReport:
    """Check that lambda_1 = 1 is simple, |lambda_2| > 0, and some other
    eigenvalue is strictly positive.

    These hold for every connected, incomplete, self-looped graph (the trace
    of A exceeds 1, forcing a positive eigenvalue below the top).
    """
    if not g.is_connected():
        raise PreconditionViolated("graph must be connected")
    if g.is_complete():
        raise PreconditionViolated("graph must be incomplete")
    vals = dec.eigenvalues
    top_cluster = dec.cluster_of(0)
    simple = len(top_cluster) == 1 and abs(vals[0] - 1.0) <= tol
    second = abs(vals[1]) > tol if dec.n > 1 else False
    positive = bool(np.any(vals[1:] > tol))
    return SpectrumReport(simple, second, positive)


# -- non-termination certificate --------------------------------------------


@dataclass(frozen=True)
class NonterminationCertificate:
    """Spectral-coefficient certificate that a trajectory never reaches its limit.

    A state with spread strictly below the confidence bound keeps the influence
    graph equal to the physical graph forever, so the dynamics are the fixed
    linear map A.  If the expansion of the state carries weight on the
    second-largest-|lambda| eigenvalue level, the deviation from the limit is
    a nonzero multiple of lambda_2^k at every finite k.
    """

    certified: bool
    c2_magnitude: float
    lambda2_abs: float


def nontermination_certificate(
    g: Graph, opinions: np.ndarray, confidence_bound: float, tol: float = 1e-9
) -> NonterminationCertificate:
    x0 = np.asarray(opinions, dtype=float)
    if not g.is_connected():
        raise PreconditionViolated("graph must be connected")
    if g.is_complete():
        raise PreconditionViolated("graph must be incomplete")
    if x0.shape != (g.n,):
        raise PreconditionViolated(f"state must have length {g.n}")
    spread = float(np.max(x0) - np.min(x0))
    if spread >= confidence_bound:
        raise SpreadTooLarge(f"spread {spread} must be < {confidence_bound}")
    dec = decompose(g)
    coeffs = np.linalg.solve(dec.eigenvectors, x0)
    lam2 = dec.second_largest_abs()
    level = [i for i in range(1, dec.n) if abs(abs(dec.eigenvalues[i]) - lam2) <= CLUSTER_TOL]
    c2 = float(np.linalg.norm(coeffs[level])) if level else 0.0
    return NonterminationCertificate(c2 > tol, c2, lam2)


# -- complete multipartite eigenbasis ----------------------------------------


@dataclass(frozen=True)
class RPartiteEigenbasis:
    """Closed-form eigenbasis of a complete multipartite self-looped graph.

    Within each part of size >= 2 the difference vectors (+1 at the part's
    first vertex, -1 at another) are eigenvectors with eigenvalue
    1/(n - n_i + 1).  The remaining eigenvectors are lifts of the
    eigenvectors of the r x r part-averaged matrix B, constant on parts.
    """

    spec: PartiteSpec
    local_vectors: np.ndarray      # n x k, difference vectors
    local_eigenvalues: np.ndarray  # k
    local_parts: tuple             # part index of each local vector
    lifted_vectors: np.ndarray     # n x r
    b_matrix: np.ndarray           # r x r
    b_eigenvalues: np.ndarray      # r

    def all_vectors(self) -> np.ndarray:
        return np.hstack([self.local_vectors, self.lifted_vectors])

    def all_eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.local_eigenvalues, self.b_eigenvalues])


def rpartite_eigenbasis(spec: PartiteSpec) -> RPartiteEigenbasis:
    """Build the closed-form eigenbasis for ``complete_r_partite(spec)``.

    B has entries B_ii = 1/(n - n_i + 1) and B_ij = n_j/(n - n_i + 1); it is
    similar to the symmetric matrix D_B S D_B with S_ii = 1/n_i and S_ij = 1
    via the diagonal D_A = (D_1 D_2^{-1})^{1/2}, which is how it is
    diagonalized here.
    """
    n, r = spec.n, spec.r
    sizes = np.array(spec.part_sizes, dtype=float)
    parts = spec.parts()

    locals_, local_vals, local_parts = [], [], []
    for i, block in enumerate(parts):
        lam = 1.0 / (n - sizes[i] + 1.0)
        for t in range(1, len(block)):
            vec = np.zeros(n)
            vec[block[0]] = 1.0
            vec[block[t]] = -1.0
            locals_.append(vec)
            local_vals.append(lam)
            local_parts.append(i)

    d1 = 1.0 / (n - sizes + 1.0)
    b = np.outer(d1, sizes)
    np.fill_diagonal(b, d1)

    s = np.ones((r, r))
    np.fill_diagonal(s, 1.0 / sizes)
    d_a = np.sqrt(d1 / sizes)
    d_b = np.sqrt(d1 * sizes)
    sym = d_b[:, None] * s * d_b[None, :]
    w_vals, w_vecs = jacobi_eigh(sym)
    order = sorted(range(r), key=lambda i: (-abs(w_vals[i]), -w_vals[i]))
    w_vals = w_vals[order]
    w_vecs = d_a[:, None] * w_vecs[:, order]

    lifted = np.zeros((n, r))
    for col in range(r):
        for j, block in enumerate(parts):
            lifted[list(block), col] = w_vecs[j, col]
    norms = np.linalg.norm(lifted, axis=0)
    lifted /= norms
    lifted = np.column_stack([_sign_normalize(lifted[:, c]) for c in range(r)])

    local_mat = (
        np.column_stack(locals_) if locals_ else np.zeros((n, 0))
    )
    return RPartiteEigenbasis(
        spec=spec,
        local_vectors=local_mat,
        local_eigenvalues=np.array(local_vals),
        local_parts=tuple(local_parts),
        lifted_vectors=lifted,
        b_matrix=b,
        b_eigenvalues=w_vals,
    )


@dataclass(frozen=True)
class RPartiteReport:
    """Verification clauses for the multipartite eigenbasis construction."""

    eigenpairs_ok: bool
    nonunit_b_nonpositive: bool
    full_rank: bool
    lifted_orthogonal_to_local: bool
    failures: tuple

    @property
    def all_ok(self) -> bool:
        return not self.failures


def verify_rpartite_eigenbasis(
    spec: PartiteSpec, basis: RPartiteEigenbasis, tol: float = 1e-9
) -> RPartiteReport:
    """Check the construction against the generic matrix: residuals, sign of
    non-unit B-eigenvalues, rank, and orthogonality of lifts to difference
    vectors."""
    if spec.n < 2:
        raise PreconditionViolated("need at least two vertices")
    a = normalized_adjacency(complete_r_partite(spec))
    failures = []

    vecs = basis.all_vectors()
    vals = basis.all_eigenvalues()
    residuals = np.linalg.norm(a @ vecs - vecs * vals[None, :], axis=0)
    pairs_ok = bool(np.all(residuals <= tol))
    if not pairs_ok:
        failures.append("eigenpair residual")

    nonunit = basis.b_eigenvalues[np.abs(basis.b_eigenvalues - 1.0) > tol]
    b_ok = bool(np.all(nonunit <= tol))
    if not b_ok:
        failures.append("positive non-unit B eigenvalue")

    rank = np.linalg.matrix_rank(vecs, tol=1e-8)
    rank_ok = rank == spec.n
    if not rank_ok:
        failures.append("rank deficiency")

    if basis.local_vectors.shape[1]:
        dots = basis.lifted_vectors.T @ basis.local_vectors
        ortho_ok = bool(np.max(np.abs(dots)) <= tol)
    else:
        ortho_ok = True
    if not ortho_ok:
        failures.append("lift not orthogonal to difference vectors")

    return RPartiteReport(pairs_ok, b_ok, rank_ok, ortho_ok, tuple(failures))
