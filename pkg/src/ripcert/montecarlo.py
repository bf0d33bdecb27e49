"""Seeded Monte Carlo reproductions of the probabilistic guarantees.

Random frames tend to have small flat-orthogonality constants and small
trace-power estimates once the number of rows is large enough; these
trials measure how often the certification criteria hold at desk scale,
always under explicit seeding so every outcome is reproducible bit for
bit. Empirical tail frequencies are compared against their exponential
bounds only where those bounds are actually theorems; the comparisons
carry binomial standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .certification import (
    DEFAULT_BUDGET,
    FRO_C,
    delta1_witness,
    fro_constant_search,
    ric_power_search,
)
from .constructions import Frame, bernoulli_matrix, gaussian_matrix
from .errors import InvalidParameterError

#: fraction of the isometry target budgeted to column-norm deviations
DEFAULT_ALPHA = 0.01
#: trials are simulated in fixed-size blocks so results never depend on workers
_TRIAL_BLOCK = 20_000

_SEED_MASK = (1 << 64) - 1


def trial_seed(base_seed: int, trial: int) -> int:
    """Split a base seed into one independent stream key per trial."""
    return (int(base_seed) + int(trial)) & _SEED_MASK


@dataclass(frozen=True)
class TrialConfig:
    """Shape, thresholds and seeding of one ensemble experiment."""

    m: int
    n: int
    k: int
    trials: int
    base_seed: int
    ensemble: str = "gaussian"
    q: int | None = None
    delta: float | None = None
    theta_hat: float | None = None
    alpha: float = DEFAULT_ALPHA
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameterError("need trials >= 1")
        if not 1 <= self.k <= self.n:
            raise InvalidParameterError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.ensemble not in ("gaussian", "bernoulli"):
            raise InvalidParameterError(f"unknown ensemble {self.ensemble!r}")
        if self.delta is not None and self.delta <= 0:
            raise InvalidParameterError("delta must be positive")
        if self.theta_hat is not None and self.theta_hat <= 0:
            raise InvalidParameterError("theta_hat must be positive")
        if not 0 < self.alpha < 1:
            raise InvalidParameterError("alpha must lie in (0, 1)")

    def with_m(self, m: int) -> "TrialConfig":
        return replace(self, m=m)

    def draw(self, trial: int) -> Frame:
        seed = trial_seed(self.base_seed, trial)
        if self.ensemble == "gaussian":
            return gaussian_matrix(self.m, self.n, seed)
        return bernoulli_matrix(self.m, self.n, seed)


@dataclass(frozen=True)
class FailureWitness:
    """Enough information to regenerate and re-check one failed trial."""

    trial: int
    seed: int
    reason: str
    value: float
    subsets: tuple[tuple[int, ...], ...]


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidParameterError("need trials >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class TrialOutcome:
    """Aggregate of one experiment: frequency, interval and failure witnesses."""

    trials: int
    successes: int
    values: tuple[float, ...]
    delta1_values: tuple[float, ...]
    failures: tuple[FailureWitness, ...]
    thresholds: tuple[tuple[str, float], ...]
    meets_measurement_bound: bool | None = None

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    @property
    def confidence_interval(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)


def run_fro_trials(cfg: TrialConfig) -> TrialOutcome:
    """Frequency with which seeded frames meet the flat-orthogonality criterion.

    Success at target delta means the flat constant is at most
    (1-alpha) * delta / (2 * 75 * ln k) and the column-norm deviation is
    at most alpha * delta; passing ``theta_hat`` instead compares the
    flat constant against it directly.
    """
    if cfg.k < 2:
        raise InvalidParameterError("flat-orthogonality trials need k >= 2")
    if cfg.delta is None and cfg.theta_hat is None:
        raise InvalidParameterError("need a delta or theta_hat target")
    if cfg.theta_hat is not None:
        theta_thr = cfg.theta_hat
    else:
        theta_thr = (1.0 - cfg.alpha) * cfg.delta / (2.0 * FRO_C * math.log(cfg.k))
    d1_thr = cfg.alpha * cfg.delta if cfg.delta is not None else None

    successes = 0
    values: list[float] = []
    d1_values: list[float] = []
    failures: list[FailureWitness] = []
    for t in range(cfg.trials):
        seed = trial_seed(cfg.base_seed, t)
        frame = cfg.draw(t)
        search = fro_constant_search(frame, cfg.k, cfg.budget)
        d1, d1_col = delta1_witness(frame)
        values.append(search.value)
        d1_values.append(d1)
        ok = search.value <= theta_thr
        d1_ok = d1_thr is None or d1 <= d1_thr
        if ok and d1_ok:
            successes += 1
        if not ok:
            failures.append(
                FailureWitness(t, seed, "fro-constant", search.value,
                               (search.witness_i, search.witness_j))
            )
        if not d1_ok:
            failures.append(FailureWitness(t, seed, "delta1", d1, ((d1_col,),)))
    thresholds = [("theta_hat", theta_thr)]
    if d1_thr is not None:
        thresholds.append(("delta1", d1_thr))
    return TrialOutcome(
        cfg.trials,
        successes,
        tuple(values),
        tuple(d1_values),
        tuple(failures),
        tuple(thresholds),
    )


def run_power_trials(cfg: TrialConfig) -> TrialOutcome:
    """Frequency with which the trace power estimate stays at or below delta.

    The outcome also records whether the configuration meets the
    measurement-count threshold m >= (81/delta^2) k^(1+1/q) ln(e n / k)
    under which high-probability success is guaranteed.
    """
    if cfg.q is None or cfg.q < 1:
        raise InvalidParameterError("power trials need q >= 1")
    if cfg.delta is None:
        raise InvalidParameterError("power trials need a delta target")
    successes = 0
    values: list[float] = []
    failures: list[FailureWitness] = []
    for t in range(cfg.trials):
        seed = trial_seed(cfg.base_seed, t)
        frame = cfg.draw(t)
        search = ric_power_search(frame, cfg.k, cfg.q, cfg.budget)
        values.append(search.value)
        if search.value <= cfg.delta:
            successes += 1
        else:
            failures.append(
                FailureWitness(t, seed, "power", search.value, (search.witness,))
            )
    needed = 81.0 / cfg.delta**2 * cfg.k ** (1.0 + 1.0 / cfg.q) * math.log(
        math.e * cfg.n / cfg.k
    )
    return TrialOutcome(
        cfg.trials,
        successes,
        tuple(values),
        (),
        tuple(failures),
        (("delta", cfg.delta),),
        meets_measurement_bound=bool(cfg.m >= needed),
    )


def sweep_m(cfg: TrialConfig, m_values, runner) -> list[tuple[int, TrialOutcome]]:
    """Run one experiment per row count, preserving everything else."""
    return [(int(m), runner(cfg.with_m(int(m)))) for m in m_values]


# ---------------------------------------------------------------------------
# Column-sum tail simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailRow:
    """One grid point of the column-sum tail table."""

    theta_hat: float
    threshold: float
    count: int
    trials: int
    bound: float
    pos_count: int
    neg_count: int

    @property
    def empirical(self) -> float:
        return self.count / self.trials

    @property
    def stderr(self) -> float:
        p = self.empirical
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def ok(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.stderr

    @property
    def symmetric_ok(self) -> bool:
        p_pos = self.pos_count / self.trials
        p_neg = self.neg_count / self.trials
        se = math.sqrt(
            (p_pos * (1 - p_pos) + p_neg * (1 - p_neg)) / self.trials
        )
        return abs(p_pos - p_neg) <= 3.0 * se + 1e-12


@dataclass(frozen=True)
class TailTable:
    """Empirical two-sided tails of sums of Gaussian products, with bounds."""

    m: int
    k1: int
    k2: int
    trials: int
    seed: int
    rows: tuple[TailRow, ...]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def all_symmetric(self) -> bool:
        return all(r.symmetric_ok for r in self.rows)


def column_sum_tail(
    m: int, k1: int, k2: int, trials: int, seed: int, grid=None
) -> TailTable:
    """Simulate sums of m independent Gaussian products and tabulate tails.

    Each trial draws X_i ~ N(0, k1/m) and Y_i ~ N(0, k2/m) and sums the
    products. For every grid value the two-sided tail frequency at
    threshold theta_hat * sqrt(k1 k2) is compared with the exponential
    bound 2 exp(-m theta_hat^2 / 4). The bound is a theorem for
    theta_hat <= 1/2 and holds empirically well beyond; the default grid
    stops at 1.
    """
    if m < 1 or k1 < 1 or k2 < 1:
        raise InvalidParameterError("need m, k1, k2 >= 1")
    if trials < 1:
        raise InvalidParameterError("need trials >= 1")
    if grid is None:
        grid = tuple(i / 10 for i in range(11))
    thresholds = np.array([th * math.sqrt(k1 * k2) for th in grid])
    counts = np.zeros(len(grid), dtype=np.int64)
    pos = np.zeros(len(grid), dtype=np.int64)
    neg = np.zeros(len(grid), dtype=np.int64)
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _SEED_MASK))
    done = 0
    while done < trials:
        block = min(_TRIAL_BLOCK, trials - done)
        x = rng.normal(0.0, math.sqrt(k1 / m), size=(block, m))
        y = rng.normal(0.0, math.sqrt(k2 / m), size=(block, m))
        sums = np.einsum("ij,ij->i", x, y)
        counts += (np.abs(sums)[:, None] >= thresholds[None, :]).sum(axis=0)
        pos += (sums[:, None] >= thresholds[None, :]).sum(axis=0)
        neg += (sums[:, None] <= -thresholds[None, :]).sum(axis=0)
        done += block
    rows = tuple(
        TailRow(
            theta_hat=float(th),
            threshold=float(thresholds[i]),
            count=int(counts[i]),
            trials=trials,
            bound=2.0 * math.exp(-m * float(th) ** 2 / 4.0),
            pos_count=int(pos[i]),
            neg_count=int(neg[i]),
        )
        for i, th in enumerate(grid)
    )
    return TailTable(m, k1, k2, trials, seed, rows)


# ---------------------------------------------------------------------------
# Tail bounds in their provable regimes
# ---------------------------------------------------------------------------


def fro_failure_bound(m: int, n: int, k: int, theta_hat: float) -> float:
    """Union bound 2 exp(-m theta_hat^2/4) n^(2k) on missing flat orthogonality.

    Valid as a theorem for Gaussian frames when theta_hat <= 1/2.
    """
    return 2.0 * math.exp(-m * theta_hat**2 / 4.0 + 2 * k * math.log(n))


def delta1_tail_bound(m: int, n: int, d: float) -> float:
    """Union bound 2 n exp(-m d^2 / 16) on the column-norm deviation tail.

    Follows from the chi-square concentration of squared column norms
    for d <= 4; the looser linear-exponent form printed alongside it is
    not a theorem at small d and is deliberately not used here.
    """
    if not 0 < d <= 4:
        raise InvalidParameterError("the bound applies for 0 < d <= 4")
    return 2.0 * n * math.exp(-m * d * d / 16.0)


def observed_tail(values, threshold: float) -> float:
    """Fraction of recorded values strictly above a threshold."""
    vals = list(values)
    if not vals:
        raise InvalidParameterError("no values recorded")
    return sum(1 for v in vals if v > threshold) / len(vals)
