"""Constructors for every matrix family the certifier studies.

Covers pair and triple Steiner systems with their incidence matrices,
Sylvester and DFT Hadamard matrices, the block-design equiangular tight
frames assembled from them, the quadratic-residue (Paley) frames built
from partial DFT rows plus one identity column, the rotation of a
complex frame with real Gram onto real coordinates, and seeded
Gaussian/Bernoulli random frames.

Random frames draw from a counter-based Philox generator keyed by the
caller's seed, so identical seeds reproduce matrices bit for bit on any
worker layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CongruenceError,
    InvalidParameterError,
    MatrixShapeError,
    NotRealError,
    RipcertError,
)
from .linalg import DEFAULT_TOL, DenseMatrix, gram, semidefinite_cholesky, spectral_norm
from .modular import is_prime, quadratic_residues

#: row-norm threshold below which rows of L^T count as structurally zero
ROW_DROP_TOL = 1e-9

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SteinerSystem:
    """Blocks of a (2, k, v) design: every point pair lies in exactly one block.

    Construction validates the covering property exhaustively, so any
    instance that exists is a genuine design.
    """

    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.v < 2 or self.k < 2:
            raise InvalidParameterError("need v >= 2 and k >= 2")
        expected = self.v * (self.v - 1) // (self.k * (self.k - 1))
        if len(blocks) != expected:
            raise InvalidParameterError(
                f"(2,{self.k},{self.v}) design needs {expected} blocks, got {len(blocks)}"
            )
        seen: set[tuple[int, int]] = set()
        for b in blocks:
            if len(b) != self.k or len(set(b)) != self.k:
                raise InvalidParameterError(f"block {b} is not a {self.k}-subset")
            if b[0] < 0 or b[-1] >= self.v:
                raise InvalidParameterError(f"block {b} out of range for v={self.v}")
            for i in range(self.k):
                for j in range(i + 1, self.k):
                    pair = (b[i], b[j])
                    if pair in seen:
                        raise InvalidParameterError(f"pair {pair} covered twice")
                    seen.add(pair)
        if len(seen) != self.v * (self.v - 1) // 2:
            raise InvalidParameterError("not every pair is covered by a block")

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def replication(self) -> int:
        """Number of blocks through each point, (v-1)/(k-1)."""
        return (self.v - 1) // (self.k - 1)


@dataclass(frozen=True)
class Frame:
    """A dense matrix read as a dictionary of column vectors.

    Carries a provenance label and caches the Gram matrix and coherence,
    which almost every certification formula consumes.
    """

    matrix: DenseMatrix
    label: str = ""

    def __post_init__(self):
        norms = np.linalg.norm(self.matrix.data, axis=0)
        if not np.all(np.isfinite(norms)) or float(norms.min()) <= 0.0:
            raise InvalidParameterError("every frame column must have finite positive norm")

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols

    @cached_property
    def gram(self) -> DenseMatrix:
        return gram(self.matrix)

    @cached_property
    def gram_array(self) -> np.ndarray:
        """Gram matrix as an ndarray, real when the imaginary part vanishes."""
        g = self.gram.data
        if float(np.abs(g.imag).max()) <= DEFAULT_TOL:
            g = np.array(g.real)
            g.setflags(write=False)
        return g

    @cached_property
    def column_norms_squared(self) -> np.ndarray:
        return np.abs(np.diagonal(self.gram.data).real.copy())

    @cached_property
    def coherence(self) -> float:
        """Largest off-diagonal Gram magnitude (needs at least two columns)."""
        if self.n < 2:
            raise InvalidParameterError("coherence is undefined for fewer than 2 columns")
        offdiag = np.abs(self.gram.data).copy()
        np.fill_diagonal(offdiag, 0.0)
        return float(offdiag.max())


def negate_columns(frame: Frame, indices) -> Frame:
    """Flip the sign of the selected columns (a flipping-equivalent frame)."""
    idx = sorted({int(i) for i in indices})
    for i in idx:
        if not 0 <= i < frame.n:
            raise InvalidParameterError(f"column {i} out of range")
    data = np.array(frame.matrix.data)
    data[:, idx] *= -1.0
    return Frame(DenseMatrix(data), label=frame.label)


# ---------------------------------------------------------------------------
# Steiner systems
# ---------------------------------------------------------------------------


def all_pairs_steiner(v: int) -> SteinerSystem:
    """The (2, 2, v) design whose blocks are all pairs, in lexicographic order."""
    if v < 2:
        raise InvalidParameterError(f"need v >= 2, got {v}")
    blocks = tuple((i, j) for i in range(v) for j in range(i + 1, v))
    return SteinerSystem(v, 2, blocks)


def _idempotent_quasigroup(n: int):
    # commutative idempotent quasigroup on Z_n for odd n
    half = (n + 1) // 2

    def op(i, j):
        return ((i + j) * half) % n

    return op


def _half_idempotent_quasigroup(n: int):
    # commutative quasigroup on Z_n (n even) with i*i == i for i < n // 2
    t = n // 2

    def op(i, j):
        s = (i + j) % n
        return s // 2 if s % 2 == 0 else t + (s - 1) // 2

    return op


def steiner_triple(v: int) -> SteinerSystem:
    """A (2, 3, v) triple system for v = 3 or 1 mod 6 (Bose / Skolem builds)."""
    if v < 7 or v % 6 not in (1, 3):
        raise CongruenceError(
            f"triple systems exist only for v = 1 or 3 (mod 6) with v >= 7, got v={v}"
        )
    blocks: list[tuple[int, int, int]] = []
    if v % 6 == 3:
        n = v // 3
        op = _idempotent_quasigroup(n)

        def pt(i, j):
            return i + n * j

        for i in range(n):
            blocks.append((pt(i, 0), pt(i, 1), pt(i, 2)))
        for i in range(n):
            for k in range(i + 1, n):
                for j in range(3):
                    blocks.append((pt(i, j), pt(k, j), pt(op(i, k), (j + 1) % 3)))
    else:
        t = v // 6
        n = 2 * t
        op = _half_idempotent_quasigroup(n)
        inf = 3 * n

        def pt(i, j):
            return i + n * j

        for i in range(t):
            blocks.append((pt(i, 0), pt(i, 1), pt(i, 2)))
        for i in range(t):
            for j in range(3):
                blocks.append((inf, pt(t + i, j), pt(i, (j + 1) % 3)))
        for i in range(n):
            for k in range(i + 1, n):
                for j in range(3):
                    blocks.append((pt(i, j), pt(k, j), pt(op(i, k), (j + 1) % 3)))
    canon = sorted(tuple(sorted(b)) for b in blocks)
    return SteinerSystem(v, 3, tuple(canon))


def incidence_matrix(system: SteinerSystem) -> DenseMatrix:
    """0/1 block-by-point incidence matrix of a design."""
    a = np.zeros((system.num_blocks, system.v))
    for i, b in enumerate(system.blocks):
        for j in b:
            a[i, j] = 1.0
    return DenseMatrix(a)


# ---------------------------------------------------------------------------
# Hadamard matrices
# ---------------------------------------------------------------------------


def hadamard(n: int, kind: str = "sylvester") -> DenseMatrix:
    """Unit-modulus matrix with pairwise orthogonal rows (H*H = nI).

    ``sylvester`` gives the +/-1 doubling construction (n a power of 2),
    ``dft`` the discrete Fourier matrix exp(-2*pi*i*j*k/n) for any n.
    The first row is all ones in both kinds.
    """
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    if kind == "sylvester":
        if n & (n - 1):
            raise InvalidParameterError(f"sylvester requires n a power of 2, got {n}")
        h = np.ones((1, 1))
        block = np.array([[1.0, 1.0], [1.0, -1.0]])
        while h.shape[0] < n:
            h = np.kron(block, h)
        return DenseMatrix(h)
    if kind == "dft":
        jk = np.outer(np.arange(n), np.arange(n))
        return DenseMatrix(np.exp(-2j * np.pi * jk / n))
    raise InvalidParameterError(f"unknown hadamard kind {kind!r}")


# ---------------------------------------------------------------------------
# Equiangular tight frames
# ---------------------------------------------------------------------------


def steiner_etf(system: SteinerSystem, h: DenseMatrix) -> Frame:
    """Equiangular tight frame assembled from a design and a Hadamard matrix.

    Each point contributes one block of 1 + (v-1)/(k-1) columns: the rows
    of its incidence column holding a one receive, in increasing row
    order, rows 2, 3, ... of the Hadamard matrix (the all-ones first row
    is never used), and everything is scaled by ((k-1)/(v-1))^(1/2).
    """
    r = system.replication
    size = r + 1
    if h.rows != size or h.cols != size:
        raise MatrixShapeError(
            f"hadamard must be {size}x{size} for this design, got {h.rows}x{h.cols}"
        )
    b = system.num_blocks
    out = np.zeros((b, system.v * size), dtype=np.complex128)
    a = incidence_matrix(system).data.real
    for j in range(system.v):
        rows = np.flatnonzero(a[:, j] > 0.5)
        for pos, row in enumerate(rows):
            out[row, j * size : (j + 1) * size] = h.data[pos + 1]
    out *= math.sqrt((system.k - 1) / (system.v - 1))
    return Frame(
        DenseMatrix(out),
        label=f"steiner-etf v={system.v} k={system.k}",
    )


def paley_etf(p: int, require_1mod4: bool = True) -> Frame:
    """Quadratic-residue frame: residue-indexed DFT rows plus one identity column.

    Produces an M x 2M frame with M = (p+1)/2. Rows are indexed by the
    quadratic residues mod p (zero included, increasing order); the
    zero-residue row is scaled by p^(-1/2) and the others by (2/p)^(1/2).
    With p = 1 (mod 4) the Gram matrix is real, which the graph
    correspondence requires; pass ``require_1mod4=False`` to allow the
    complex-Gram frames of p = 3 (mod 4).
    """
    if not is_prime(p) or p == 2:
        raise InvalidParameterError(f"p={p} is not an odd prime")
    if require_1mod4 and p % 4 != 1:
        raise CongruenceError(f"p={p} is not 1 (mod 4); pass require_1mod4=False to override")
    qs = np.array(quadratic_residues(p))
    m = (p + 1) // 2
    h = np.exp(-2j * np.pi * np.outer(qs, np.arange(p)) / p)
    d = np.full(m, math.sqrt(2.0 / p))
    d[0] = math.sqrt(1.0 / p)  # residue list starts at zero
    phi = np.zeros((m, p + 1), dtype=np.complex128)
    phi[:, :p] = d[:, None] * h
    phi[0, p] = 1.0
    return Frame(DenseMatrix(phi), label=f"paley-etf p={p}")


def realify(frame: Frame, tol: float = DEFAULT_TOL) -> Frame:
    """Rotate a frame with real Gram onto real coordinates.

    Factor the Gram as L L^T and keep the nonzero rows of L^T, giving a
    real frame with the same Gram matrix and one row per Gram rank.
    """
    if tol <= 0:
        raise InvalidParameterError("tol must be positive")
    g = frame.gram.data
    imag_max = float(np.abs(g.imag).max())
    if imag_max > tol:
        raise NotRealError(
            f"gram matrix has imaginary part {imag_max:.3e} > tol; cannot realify"
        )
    greal = DenseMatrix(0.5 * (g.real + g.real.T))
    lower = semidefinite_cholesky(greal, tol=tol)
    lt = lower.data.real.T
    keep = np.linalg.norm(lt, axis=1) > ROW_DROP_TOL
    psi = lt[keep]
    newg = psi.T @ psi
    resid = spectral_norm((newg - greal.data.real).astype(np.complex128))
    if resid > 10.0 * tol * max(spectral_norm(greal.data), 1.0):
        raise RipcertError(f"realified gram deviates by {resid:.3e}")
    return Frame(DenseMatrix(psi), label=f"{frame.label} realified".strip())


# ---------------------------------------------------------------------------
# Random ensembles
# ---------------------------------------------------------------------------


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & _SEED_MASK))


def gaussian_matrix(m: int, n: int, seed: int) -> Frame:
    """i.i.d. Gaussian entries of mean zero and variance 1/m, seeded."""
    if m < 1 or n < 1:
        raise InvalidParameterError("need m, n >= 1")
    rng = _generator(seed)
    entries = rng.normal(0.0, 1.0 / math.sqrt(m), size=(m, n))
    return Frame(DenseMatrix(entries), label=f"gaussian m={m} n={n} seed={seed}")


def bernoulli_matrix(m: int, n: int, seed: int) -> Frame:
    """i.i.d. entries +/- 1/sqrt(m) with equal probability, seeded."""
    if m < 1 or n < 1:
        raise InvalidParameterError("need m, n >= 1")
    rng = _generator(seed)
    signs = rng.integers(0, 2, size=(m, n)) * 2 - 1
    return Frame(
        DenseMatrix(signs / math.sqrt(m)),
        label=f"bernoulli m={m} n={n} seed={seed}",
    )
