"""Graph machinery for real equiangular tight frames.

A real unit-norm equiangular frame decomposes its Gram matrix as
I + mu*S where S is a symmetric sign matrix with zero diagonal; reading
the -1 entries of S as edges gives a simple graph. After flipping
columns so one anchor column has negative inner products with all
others, removing the anchor leaves a strongly regular graph whose
parameters depend only on the frame dimensions. This module builds and
checks all of that, plus quadratic-residue (Paley) graphs, exact clique
numbers by branch and bound, the clique identity for the exact isometry
constant, the expander mixing inequality, and the sign-walk expansion of
trace powers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .certification import (
    CHECK_SLACK,
    SubsetSearch,
    coherence,
    ric_exact_search,
    verify_etf,
)
from .constructions import Frame, negate_columns
from .errors import (
    AmbiguousSignError,
    CongruenceError,
    EnumerationBudgetError,
    InfeasibleSizeError,
    InvalidParameterError,
    InvalidSelectionError,
    MatrixShapeError,
    NotEtfError,
    NotJoinError,
    NotRealError,
    NotRegularError,
    PreconditionError,
)
from .linalg import DenseMatrix, trace_power
from .modular import is_prime, legendre_symbol, quadratic_residues

DEFAULT_CLIQUE_BUDGET = 10_000_000
DEFAULT_TUPLE_BUDGET = 10_000_000


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertices 0..n-1 stored as a boolean adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise MatrixShapeError(f"adjacency must be square, got {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise InvalidParameterError("adjacency must be symmetric")
        if np.any(np.diagonal(adj)):
            raise InvalidParameterError("self-loops are not allowed")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def is_regular(self) -> bool:
        degs = self.degrees
        return bool(degs.size == 0 or np.all(degs == degs[0]))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.adjacency[v]))

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        adj = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if a == b:
                raise InvalidParameterError(f"self-loop at {a}")
            adj[a, b] = adj[b, a] = True
        return cls(adj)


@dataclass(frozen=True)
class SeidelMatrix:
    """Symmetric sign matrix: zero diagonal, +/-1 off the diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MatrixShapeError(f"entries must be square, got {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise InvalidParameterError("sign matrix must be symmetric")
        if np.any(np.diagonal(arr) != 0):
            raise InvalidParameterError("diagonal must be zero")
        off = arr[~np.eye(arr.shape[0], dtype=bool)]
        if off.size and not np.all(np.abs(off) == 1):
            raise InvalidParameterError("off-diagonal entries must be +/-1")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SrgParams:
    """Strong-regularity parameters (v, k, lambda, mu)."""

    v: int
    k: int
    lam: int
    mu: int

    def __post_init__(self):
        if min(self.v, self.k, self.lam, self.mu) < 0:
            raise InvalidParameterError("parameters must be nonnegative")
        if self.k * (self.k - self.lam - 1) != (self.v - self.k - 1) * self.mu:
            raise InvalidParameterError(
                f"infeasible parameters srg({self.v},{self.k},{self.lam},{self.mu}):"
                " k(k-lam-1) != (v-k-1)mu"
            )

    def __str__(self) -> str:
        return f"srg({self.v},{self.k},{self.lam},{self.mu})"


@dataclass(frozen=True)
class SrgCheckResult:
    """Outcome of strong-regularity verification."""

    status: str  # "srg", "not-srg" or "degenerate"
    params: SrgParams | None
    reason: str = ""

    @property
    def is_srg(self) -> bool:
        return self.status == "srg"


# ---------------------------------------------------------------------------
# Number-theoretic graphs
# ---------------------------------------------------------------------------


def legendre(k: int, p: int) -> int:
    """Quadratic-residuosity sign of k mod p (+1 residue, 0 multiple, -1 otherwise)."""
    return legendre_symbol(k, p)


def paley_graph(p: int) -> SimpleGraph:
    """Graph on Z_p joining residues that differ by a nonzero square, p = 1 (mod 4)."""
    if not is_prime(p):
        raise InvalidParameterError(f"p={p} is not prime")
    if p % 4 != 1:
        raise CongruenceError(f"paley graphs need p = 1 (mod 4), got {p}")
    residues = set(quadratic_residues(p)) - {0}
    adj = np.zeros((p, p), dtype=bool)
    for a in range(p):
        for b in range(a + 1, p):
            if (b - a) % p in residues:
                adj[a, b] = adj[b, a] = True
    return SimpleGraph(adj)


# ---------------------------------------------------------------------------
# Seidel matrices and canonicalization
# ---------------------------------------------------------------------------


def seidel_from_gram(frame: Frame, tol: float = 1e-12) -> tuple[SeidelMatrix, float]:
    """Sign pattern S and magnitude mu of a real equiangular frame's Gram.

    Requires the tight-frame axioms at ``tol`` and a real Gram matrix;
    every off-diagonal entry must match the coherence in magnitude
    within ``tol``, and entries indistinguishable from zero are refused.
    """
    g = frame.gram.data
    if float(np.abs(g.imag).max()) > tol:
        raise NotRealError("gram matrix is not real; realify the frame first")
    report = verify_etf(frame, tol)
    if not report.all_ok:
        raise NotEtfError(
            "frame fails the tight-frame axioms: "
            f"unit-norm dev {report.unit_norm_dev:.3e}, "
            f"tightness dev {report.tight_dev:.3e}, "
            f"equiangularity spread {report.equiangular_spread:.3e}"
        )
    mu = coherence(frame)
    if mu <= tol:
        raise AmbiguousSignError("off-diagonal Gram entries vanish; signs are undefined")
    off = g.real.copy()
    np.fill_diagonal(off, 0.0)
    mask = ~np.eye(frame.n, dtype=bool)
    if float(np.abs(np.abs(off[mask]) - mu).max()) > tol:
        raise NotEtfError("off-diagonal Gram magnitudes do not all equal the coherence")
    signs = np.where(off > 0, 1, -1).astype(np.int8)
    np.fill_diagonal(signs, 0)
    return SeidelMatrix(signs), mu


def flip_canonical(frame: Frame, anchor: int, tol: float = 1e-12) -> Frame:
    """Negate columns until the anchor's inner products are all negative.

    This is a flipping equivalence: Gram magnitudes, the axioms and all
    isometry constants are unchanged.
    """
    if not 0 <= anchor < frame.n:
        raise InvalidSelectionError(f"anchor {anchor} out of range")
    g = frame.gram.data
    if float(np.abs(g.imag).max()) > tol:
        raise NotRealError("canonical flipping needs a real Gram matrix")
    row = g.real[anchor].copy()
    row[anchor] = -1.0
    if float(np.abs(row).min()) <= tol:
        raise AmbiguousSignError(
            "anchor has a vanishing inner product; canonical flipping is ambiguous"
        )
    positive = [j for j in range(frame.n) if j != anchor and row[j] > 0]
    if not positive:
        return frame
    flipped = negate_columns(frame, positive)
    return Frame(flipped.matrix, label=f"{frame.label} flipped@{anchor}".strip())


def graph_from_seidel(s: SeidelMatrix) -> SimpleGraph:
    """Graph whose edges sit exactly where the sign matrix is -1."""
    return SimpleGraph(s.entries == -1)


def join_decompose(g: SimpleGraph, vertex: int) -> SimpleGraph:
    """Remove a vertex adjacent to everything, returning the induced rest."""
    if not 0 <= vertex < g.n:
        raise InvalidSelectionError(f"vertex {vertex} out of range")
    row = g.adjacency[vertex].copy()
    row[vertex] = True
    if not row.all():
        raise NotJoinError(f"vertex {vertex} is not adjacent to every other vertex")
    keep = [i for i in range(g.n) if i != vertex]
    return SimpleGraph(g.adjacency[np.ix_(keep, keep)])


# ---------------------------------------------------------------------------
# Strong regularity
# ---------------------------------------------------------------------------


def srg_check(g: SimpleGraph) -> SrgCheckResult:
    """Verify strong regularity by exhaustive common-neighbor counting.

    Graphs with no adjacent pairs or no non-adjacent pairs leave one
    parameter undefined and are reported as degenerate rather than
    silently assigned.
    """
    n = g.n
    adj = g.adjacency
    degs = g.degrees
    if n == 0:
        return SrgCheckResult("degenerate", None, "empty vertex set")
    if not g.is_regular():
        return SrgCheckResult("not-srg", None, "graph is not regular")
    k = int(degs[0])
    common = (adj.astype(np.int64) @ adj.astype(np.int64))
    offdiag = ~np.eye(n, dtype=bool)
    adjacent = adj & offdiag
    nonadjacent = ~adj & offdiag
    if not adjacent.any():
        return SrgCheckResult("degenerate", None, "no adjacent pairs; lambda undefined")
    if not nonadjacent.any():
        return SrgCheckResult("degenerate", None, "no non-adjacent pairs; mu undefined")
    lam_vals = np.unique(common[adjacent])
    if lam_vals.size != 1:
        return SrgCheckResult(
            "not-srg", None, f"adjacent pairs see {lam_vals.size} distinct counts"
        )
    mu_vals = np.unique(common[nonadjacent])
    if mu_vals.size != 1:
        return SrgCheckResult(
            "not-srg", None, f"non-adjacent pairs see {mu_vals.size} distinct counts"
        )
    params = SrgParams(n, k, int(lam_vals[0]), int(mu_vals[0]))
    return SrgCheckResult("srg", params)


def predicted_srg(m: int, n: int) -> SrgParams:
    """Strong-regularity parameters forced by the frame dimensions alone.

    A real m x n equiangular tight frame with n > m + 1 canonicalizes to
    a vertex joined with an srg(n-1, L, (3L-n)/2, L/2) graph, where
    L = n/2 - 1 + (1 - n/(2m)) sqrt(m(n-1)/(n-m)). Non-integer values
    mean no real frame of that size exists.
    """
    if n <= m + 1:
        raise InvalidParameterError(f"need n > m+1, got m={m}, n={n}")
    ell = n / 2.0 - 1.0 + (1.0 - n / (2.0 * m)) * math.sqrt(m * (n - 1) / (n - m))
    lam = (3.0 * ell - n) / 2.0
    mu = ell / 2.0
    values = (ell, lam, mu)
    if any(abs(x - round(x)) > 1e-9 for x in values):
        raise InfeasibleSizeError(
            f"no real frame of size {m}x{n}: parameters ({ell}, {lam}, {mu}) "
            "are not integers"
        )
    return SrgParams(n - 1, round(ell), round(lam), round(mu))


# ---------------------------------------------------------------------------
# Cliques
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CliqueResult:
    """Largest clique found; exact unless the node budget ran out."""

    size: int
    clique: tuple[int, ...]
    exact: bool
    nodes: int


class _BudgetExhausted(Exception):
    pass


def clique_number(g: SimpleGraph, budget: int = DEFAULT_CLIQUE_BUDGET) -> CliqueResult:
    """Exact maximum clique via branch and bound with greedy coloring.

    Vertices are ordered by descending degree with index tie-break, so
    the search (and any budget-limited partial result) is deterministic.
    """
    n = g.n
    if n == 0:
        return CliqueResult(0, (), True, 0)
    order = sorted(range(n), key=lambda v: (-int(g.degrees[v]), v))
    position = {v: i for i, v in enumerate(order)}
    masks = [0] * n  # adjacency over reordered labels
    for v in range(n):
        mv = position[v]
        for w in g.neighbors(v):
            masks[mv] |= 1 << position[w]

    best_size = 0
    best_clique: list[int] = []
    nodes = 0

    def color_sort(candidates: int) -> list[tuple[int, int]]:
        # greedy coloring; returns (vertex, bound) with bounds non-decreasing
        classes: list[int] = []
        ordered: list[tuple[int, int]] = []
        rest = candidates
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            for ci, cmask in enumerate(classes):
                if not (cmask & masks[v]):
                    classes[ci] |= 1 << v
                    break
            else:
                classes.append(1 << v)
        for ci, cmask in enumerate(classes):
            while cmask:
                v = (cmask & -cmask).bit_length() - 1
                cmask &= cmask - 1
                ordered.append((v, ci + 1))
        return ordered

    def expand(current: list[int], candidates: int) -> None:
        nonlocal best_size, best_clique, nodes
        nodes += 1
        if nodes > budget:
            raise _BudgetExhausted
        ordered = color_sort(candidates)
        remaining = candidates
        for v, bound in reversed(ordered):
            if len(current) + bound <= best_size:
                return
            remaining &= ~(1 << v)
            current.append(v)
            new_candidates = remaining & masks[v]
            if new_candidates:
                expand(current, new_candidates)
            elif len(current) > best_size:
                best_size = len(current)
                best_clique = current.copy()
            current.pop()

    exact = True
    try:
        expand([], (1 << n) - 1)
    except _BudgetExhausted:
        exact = False
    clique = tuple(sorted(order[v] for v in best_clique))
    return CliqueResult(best_size, clique, exact, nodes)


@dataclass(frozen=True)
class CliqueRicReport:
    """Exact isometry constant against its clique-forced value (k-1)*mu."""

    k: int
    mu: float
    exact: SubsetSearch
    predicted: float
    clique_columns: tuple[int, ...]
    clique_value: float

    @property
    def ok(self) -> bool:
        return (
            abs(self.exact.value - self.predicted) <= CHECK_SLACK
            and abs(self.clique_value - self.predicted) <= CHECK_SLACK
        )


def clique_ric_identity(
    frame: Frame,
    g: SimpleGraph,
    k: int,
    anchor: int,
    budget: int = 5_000_000,
    clique_budget: int = DEFAULT_CLIQUE_BUDGET,
) -> CliqueRicReport:
    """Check that the exact isometry constant equals (k-1)*mu for k <= omega+1.

    ``g`` is the graph left after removing the universal anchor vertex,
    its vertex i standing for frame column i (shifted past the anchor).
    The witness is a (k-1)-clique of g joined with the anchor, whose
    hollow sub-Gram has norm exactly (k-1)*mu.
    """
    if g.n != frame.n - 1:
        raise MatrixShapeError("graph must have one vertex per non-anchor column")
    if not 0 <= anchor < frame.n:
        raise InvalidSelectionError(f"anchor {anchor} out of range")
    clique = clique_number(g, clique_budget)
    if not clique.exact:
        raise PreconditionError("clique search budget exhausted; omega unknown")
    omega = clique.size
    if not 1 <= k <= omega + 1:
        raise PreconditionError(f"need 1 <= k <= omega+1 = {omega + 1}, got k={k}")
    mu = coherence(frame)
    search = ric_exact_search(frame, k, budget)
    predicted = (k - 1) * mu

    members = clique.clique[: k - 1]
    cols = sorted([anchor] + [v if v < anchor else v + 1 for v in members])
    sub = frame.gram_array[np.ix_(cols, cols)].astype(np.complex128)
    hollow = sub - np.eye(k)
    value = float(np.abs(np.linalg.eigvalsh(hollow)).max())
    return CliqueRicReport(k, mu, search, predicted, tuple(cols), value)


# ---------------------------------------------------------------------------
# Expander mixing and trace expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixingCheck:
    """Edge-count deviation against the spectral bound for one subset pair."""

    lhs: float
    rhs: float
    second_eigenvalue: float
    edge_count: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs + CHECK_SLACK


def _validate_vertex_set(g: SimpleGraph, vertices, what: str) -> list[int]:
    idx = [int(v) for v in vertices]
    if len(set(idx)) != len(idx):
        raise InvalidSelectionError(f"duplicate vertices in {what}")
    for v in idx:
        if not 0 <= v < g.n:
            raise InvalidSelectionError(f"vertex {v} out of range in {what}")
    return idx


def expander_mixing_check(g: SimpleGraph, i_set, j_set) -> MixingCheck:
    """Compare |E(I,J) - (d/n)|I||J|| with lambda * sqrt(|I||J|).

    E(I,J) counts ordered adjacent pairs (the quadratic-form convention,
    so an edge inside the intersection counts twice), and lambda is the
    largest magnitude among non-principal adjacency eigenvalues.
    """
    if not g.is_regular():
        raise NotRegularError("mixing bound needs a regular graph")
    i_idx = _validate_vertex_set(g, i_set, "I")
    j_idx = _validate_vertex_set(g, j_set, "J")
    n = g.n
    d = int(g.degrees[0]) if n else 0
    adj = g.adjacency.astype(np.float64)
    ones_i = np.zeros(n)
    ones_i[i_idx] = 1.0
    ones_j = np.zeros(n)
    ones_j[j_idx] = 1.0
    edges = float(ones_i @ adj @ ones_j)
    lhs = abs(edges - d / n * len(i_idx) * len(j_idx)) if n else 0.0
    w = np.linalg.eigvalsh(adj)
    lam = float(max(abs(w[0]), abs(w[-2]))) if n >= 2 else 0.0
    rhs = lam * math.sqrt(len(i_idx) * len(j_idx))
    return MixingCheck(lhs, rhs, lam, edges)


@dataclass(frozen=True)
class TraceExpansion:
    """Trace power of a hollow sub-Gram against its sign-walk expansion."""

    direct: float
    expansion: float
    tuple_sum: int
    q2_first_term: int | None
    q2_residual: int | None

    @property
    def ok(self) -> bool:
        scale = max(1.0, abs(self.direct))
        agree = abs(self.direct - self.expansion) <= 1e-9 * scale
        if self.q2_first_term is not None:
            agree = agree and (self.q2_first_term + self.q2_residual == self.tuple_sum)
        return agree


def seidel_trace_expansion(
    frame: Frame, kset, q: int, budget: int = DEFAULT_TUPLE_BUDGET
) -> TraceExpansion:
    """Evaluate Tr[(sub-Gram - I)^(2q)] two independent ways.

    Directly by matrix powers, and as mu^(2q) times the sum over closed
    sign walks: 2q-tuples of subset elements with no two cyclically
    consecutive entries equal, each contributing the product of sign
    matrix entries along the walk. For q = 2 the walk sum splits into
    the backtracking term k(k-1)^2 plus a residual, both returned.
    """
    if not isinstance(q, int) or q < 1:
        raise InvalidParameterError(f"need integer q >= 1, got {q}")
    cols = sorted({int(x) for x in kset})
    if len(cols) != len(list(kset)):
        raise InvalidSelectionError("subset contains duplicates")
    for c in cols:
        if not 0 <= c < frame.n:
            raise InvalidSelectionError(f"column {c} out of range")
    k = len(cols)
    if k < 2:
        raise InvalidParameterError("need at least two columns")
    tuples_needed = k ** (2 * q)
    if tuples_needed > budget:
        raise EnumerationBudgetError(tuples_needed, budget, "sign-walk expansion")
    seidel, mu = seidel_from_gram(frame)
    s_sub = seidel.entries[np.ix_(cols, cols)].astype(np.int64)
    sub = frame.gram_array[np.ix_(cols, cols)].astype(np.complex128)
    hollow = sub - np.eye(k)
    direct = trace_power(DenseMatrix(hollow), 2 * q)

    total = 0
    for walk in itertools.product(range(k), repeat=2 * q):
        if any(walk[i] == walk[(i + 1) % (2 * q)] for i in range(2 * q)):
            continue
        prod = 1
        for i in range(2 * q):
            prod *= int(s_sub[walk[i], walk[(i + 1) % (2 * q)]])
        total += prod
    expansion = mu ** (2 * q) * total

    first_term = residual = None
    if q == 2:
        paths = s_sub @ s_sub  # path counts of length 2 through the subset
        first_term = int(np.sum(np.diagonal(paths) ** 2))
        residual = int(np.sum(paths**2) - np.sum(np.diagonal(paths) ** 2))
    return TraceExpansion(direct, expansion, total, first_term, residual)
