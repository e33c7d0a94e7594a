"""Average-case machinery: lazy random-walk expectation, the digit-probability
recurrence, the bit-zeroing game, Monte Carlo experiments, count normalization."""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import Partition, new_partition, sample_partition
from .errors import AllZero, BadProbability
from .matcher import min_rules
from .signed import lpm_bounds


def rw(p, n: int):
    """Expected |displacement| of an n-step walk moving +-1 each with
    probability p (else staying).  Exact DP over the displacement
    distribution; arithmetic follows the type of p (Fraction stays exact).
    """
    if not 0 <= 2 * p <= 1:
        raise BadProbability(f"need 0 <= 2p <= 1, got p={p}")
    if n < 0:
        raise BadProbability(f"negative step count {n}")
    stay = 1 - 2 * p
    # dist[i] = probability of displacement i - n after the steps so far
    dist = [p * 0] * (2 * n + 1)
    dist[n] = p * 0 + 1
    for _ in range(n):
        nxt = [p * 0] * (2 * n + 1)
        for i, q in enumerate(dist):
            if not q:
                continue
            nxt[i] += stay * q
            if i > 0:
                nxt[i - 1] += p * q
            if i < 2 * n:
                nxt[i + 1] += p * q
        dist = nxt
    return sum(abs(i - n) * q for i, q in enumerate(dist))


def c_of_k(k: int) -> float:
    """Per-part excess of the average rules-per-bit over 1/6."""
    return (1 + rw(1 / 6, k - 1)) / (2 * k)


def c_prime_of_k(k: int) -> float:
    return rw(1 / 6, k) / (2 * k)


def p_levels(count: int) -> list[Fraction]:
    """Exact probabilities of a +1 (equivalently -1) digit at levels 0..count-1
    for a uniform value; p_0 = 1/4, then contraction toward 1/6."""
    sixth = Fraction(1, 6)
    out = [Fraction(1, 4)]
    while len(out) < count:
        out.append(sixth + (sixth - out[-1]) / 2)
    return out


@dataclass(frozen=True)
class GameTrace:
    strategy: str
    m: int
    turns: int
    first_level: int
    gains: tuple[int, ...]


def play_game(strategy: str, m: int, rng: random.Random) -> GameTrace:
    """Single-player game: repeatedly add or subtract 2**d at the lowest set
    bit d until the m low bits are all zero.

    The value starts with m uniform low bits; higher bits are materialized
    lazily (64 at a time) whenever an operation would look past the frontier.
    "opt" adds iff bit d+1 is set, "rnd" flips a coin, "mix" flips a coin
    between the two.
    """
    strategy = strategy.lower()
    if strategy not in ("opt", "rnd", "mix"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if m < 1:
        raise ValueError("need m >= 1")
    v = rng.getrandbits(m)
    nbits = m

    def extend():
        nonlocal v, nbits
        v |= rng.getrandbits(64) << nbits
        nbits += 64

    def lowest() -> int:
        nonlocal v
        while v == 0:
            extend()
        return (v & -v).bit_length() - 1

    low_mask = (1 << m) - 1
    turns = 0
    gains = []
    d = lowest()
    first_level = d
    while v & low_mask:
        if strategy == "opt" or (strategy == "mix" and rng.getrandbits(1)):
            while d + 1 >= nbits:
                extend()
            add = (v >> (d + 1)) & 1
        else:
            add = rng.getrandbits(1)
        if add:
            while ((v >> d) + 1) >> (nbits - d):
                extend()  # carry would cross the frontier
            v += 1 << d
        else:
            v -= 1 << d
        turns += 1
        nd = lowest()
        gains.append(nd - d)
        d = nd
    return GameTrace(strategy, m, turns, first_level, tuple(gains))


@dataclass(frozen=True)
class ExperimentStats:
    k: int
    width: int
    trials: int
    seed: int
    mean_lambda_over_kw: float
    se_lambda_over_kw: float
    mean_lb_ratio: float
    se_lb_ratio: float
    mean_ub_ratio: float
    se_ub_ratio: float

    def csv_header(self) -> str:
        return "k,W,trials,mean_lambda_per_kw,se,mean_lb_ratio,mean_ub_ratio"

    def csv_row(self) -> str:
        return (
            f"{self.k},{self.width},{self.trials},"
            f"{self.mean_lambda_over_kw:.6f},{self.se_lambda_over_kw:.6f},"
            f"{self.mean_lb_ratio:.6f},{self.mean_ub_ratio:.6f}"
        )


def trial_rng(seed: int, index: int) -> random.Random:
    """Stable per-trial generator so trials can run in any order."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def _mean_se(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in values) / (n - 1)
    return mean, math.sqrt(var / n)


def run_experiment(k: int, width: int, trials: int, seed: int) -> ExperimentStats:
    """Sample `trials` uniform partitions; aggregate rules-per-bit and the
    signed-digit bound ratios.  Deterministic given (k, width, trials, seed)."""
    if trials < 1:
        raise ValueError("need trials >= 1")
    lam_sum = 0  # exact integer sum
    per_kw: list[float] = []
    lb_ratios: list[float] = []
    ub_ratios: list[float] = []
    kw = k * width
    for t in range(trials):
        p = sample_partition(k, width, trial_rng(seed, t))
        lam = min_rules(p)
        lo, hi = lpm_bounds(p)
        lam_sum += lam
        per_kw.append(lam / kw)
        lb_ratios.append(lo / lam)
        ub_ratios.append(hi / lam)
    mean_lam, se_lam = _mean_se(per_kw)
    assert abs(mean_lam - lam_sum / (trials * kw)) < 1e-12
    mean_lb, se_lb = _mean_se(lb_ratios)
    mean_ub, se_ub = _mean_se(ub_ratios)
    return ExperimentStats(
        k=k,
        width=width,
        trials=trials,
        seed=seed,
        mean_lambda_over_kw=lam_sum / (trials * kw),
        se_lambda_over_kw=se_lam,
        mean_lb_ratio=mean_lb,
        se_lb_ratio=se_lb,
        mean_ub_ratio=mean_ub,
        se_ub_ratio=se_ub,
    )


def normalize_counts(counts, width_multiple: int) -> Partition:
    """Scale raw (possibly real) counts to a partition summing to a power of
    two whose width is a multiple of width_multiple, minimizing L1 distance
    (largest-remainder rounding with a positivity floor of 1)."""
    vals = [float(c) for c in counts if c > 0]
    if not vals:
        raise AllZero("no positive counts")
    if any(c < 0 for c in counts):
        raise AllZero("negative counts are not meaningful")
    k = len(vals)
    raw = math.fsum(vals)
    need = max(k, math.ceil(raw))
    width = 0
    while (1 << width) < need:
        width += width_multiple
    total = 1 << width
    ideal = [c * total / raw for c in vals]
    base = [math.floor(x) for x in ideal]
    rest = total - sum(base)
    order = sorted(range(k), key=lambda i: (base[i] - ideal[i], i))
    for i in order[:rest]:
        base[i] += 1
    # positivity floor: steal from the most over-allocated parts
    donors = sorted(range(k), key=lambda i: ideal[i] - base[i])
    for i in range(k):
        if base[i] == 0:
            for j in donors:
                if base[j] > 1:
                    base[j] -= 1
                    base[i] = 1
                    break
    return new_partition(base, width)


def read_counts(text: str) -> list[float]:
    """One non-negative number per line; blank lines and '#' comments skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(float(line))
    return out
