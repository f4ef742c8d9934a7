"""SAC-distance estimators: classical Monte Carlo, QSAC shots, and the n-qubit variants.

Conventions
-----------
* Classical: per direction a = e_i the sample mean s of f(x) f(x + a) over
  uniform x, bias estimate 2^n s (signed).
* QSAC: X^i is the fraction of target outcomes equal to 1, so it estimates
  p_i = Pr[eps_i = 1].  The bias magnitude is 2^n |1 - 2 X^i|; the sign is
  dropped because only magnitudes enter the distance.
* DIRECT: X^i is the fraction of 0_n outcomes, estimating
  (autocorrelation / 2^n)^2, so the bias magnitude is 2^n sqrt(X^i).
* FORRELATION: X^i estimates Phi^2 = (1 - 2 g^(0)^2)^2.  The square hides the
  sign of Phi, so no bias estimate is derived; only the verdict is reported.

Every direction i draws from its own stream ``rng_stream(seed, i)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from sacq import circuits, qsim
from sacq.boolfn import BooleanFunction, direction_index

CLASSICAL = "CLASSICAL"
QSAC = circuits.QSAC
DIRECT = circuits.DIRECT
FORRELATION = circuits.FORRELATION
ESTIMATORS = (CLASSICAL, QSAC, DIRECT, FORRELATION)

# sample-size variants
PLAN_QSAC = "QSAC"  # also the autocorrelation algorithm
PLAN_CLASSICAL = "CLASSICAL"
PLAN_NQUBIT = "NQUBIT"  # direct and Forrelation
_PLAN_ALIASES = {
    "QSAC": PLAN_QSAC, "AUTOCORRELATION": PLAN_QSAC,
    "CLASSICAL": PLAN_CLASSICAL,
    "NQUBIT": PLAN_NQUBIT, "DIRECT": PLAN_NQUBIT, "FORRELATION": PLAN_NQUBIT,
}


def _check_t_delta(t: float, delta: float) -> None:
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t > 0):
        raise ValueError(f"margin t must be > 0, got {t!r}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")


def sample_formula(variant: str, t: float, delta: float, n: int) -> float:
    """Un-rounded Hoeffding sample count (natural log)."""
    _check_t_delta(t, delta)
    try:
        variant = _PLAN_ALIASES[variant.upper()]
    except KeyError:
        raise ValueError(f"unknown planning variant {variant!r}") from None
    log_term = math.log(2.0 / delta)
    if variant == PLAN_QSAC:
        return log_term / (2 * t * t)
    if variant == PLAN_CLASSICAL:
        return (2 ** n) * log_term / (t * t)
    return (2 ** n - 1) * log_term / (2 * t * t)


def plan_samples(t: float, delta: float, variant: str = PLAN_QSAC, n: int = 1) -> int:
    return math.ceil(sample_formula(variant, t, delta, n))


def hoeffding_margin(m: int, delta: float, range_width: float = 1.0) -> float:
    """t solving 2 exp(-2 m t^2 / range_width^2) = delta."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    if range_width <= 0:
        raise ValueError("range_width must be positive")
    return range_width * math.sqrt(math.log(2.0 / delta) / (2.0 * m))


def confidence_interval(mean: float, m: int, delta: float,
                        range_width: float = 1.0) -> tuple[float, float]:
    t = hoeffding_margin(m, delta, range_width)
    return mean - t, mean + t


@dataclass
class ExperimentConfig:
    algorithm: str
    t: Optional[float] = None
    delta: float = 0.05
    m: Optional[int] = None
    seed: int = 0
    exhaustive: bool = False  # classical: full sweep; quantum: exact distribution

    def __post_init__(self):
        self.algorithm = self.algorithm.upper()
        if self.algorithm not in ESTIMATORS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if self.t is not None:
            _check_t_delta(self.t, self.delta)
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")
        if self.m is None and self.t is None and not self.exhaustive:
            raise ValueError("give m, or t to plan m, or use exhaustive mode")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def samples(self, n: int) -> int:
        if self.m is not None:
            return self.m
        variant = {CLASSICAL: PLAN_CLASSICAL, QSAC: PLAN_QSAC}.get(self.algorithm, PLAN_NQUBIT)
        return plan_samples(self.t, self.delta, variant, n)


@dataclass
class DirectionEstimate:
    i: int
    direction: int  # table index of e_i
    sample_mean: float
    bias_estimate: Optional[float]
    interval: tuple[float, float]  # for the quantity sample_mean estimates
    oracle_calls: int
    counts: Optional[list[int]] = None


@dataclass
class EstimateReport:
    algorithm: str
    n: int
    m: Optional[int]  # None in exact mode
    seed: int
    delta: float
    exhaustive: bool
    directions: list[DirectionEstimate]
    aggregate: Optional[float]
    aggregate_margin: Optional[float]
    verdict: Optional[bool]  # observation consistent with SAC
    planned_m: Optional[int] = None
    notes: list[str] = field(default_factory=list)
    prng: str = qsim.PRNG_NAME

    @property
    def oracle_calls(self) -> int:
        return sum(d.oracle_calls for d in self.directions)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["oracle_calls"] = self.oracle_calls
        for d in out["directions"]:
            d["interval"] = list(d["interval"])
        return out


def _aggregate(biases) -> float:
    return 0.5 * sum(abs(b) for b in biases)


def classical_estimate(f: BooleanFunction, cfg: ExperimentConfig) -> EstimateReport:
    """Monte Carlo estimate of each weight-1 autocorrelation and of the distance.

    Intervals are in bias units and use the standard Hoeffding form with
    range 2^{n+1}.  Exhaustive mode sweeps every x once.
    """
    if cfg.algorithm != CLASSICAL:
        raise ValueError("classical_estimate needs a CLASSICAL config")
    n, size = f.n, f.size
    chi = f.character
    m = size if cfg.exhaustive else cfg.samples(n)
    records = []
    for i in range(1, n + 1):
        a = direction_index(n, i)
        if cfg.exhaustive:
            x = np.arange(size)
        else:
            x = qsim.rng_stream(cfg.seed, i).integers(0, size, size=m)
        total = int(np.dot(chi[x], chi[x ^ a]))
        if cfg.exhaustive:
            bias_est = float(total)
            interval = (bias_est, bias_est)
        else:
            s = total / m
            bias_est = size * s
            interval = confidence_interval(bias_est, m, cfg.delta, 2.0 * size)
        records.append(DirectionEstimate(i, a, total / m, bias_est, interval, 2 * m))
    margin = 0.0 if cfg.exhaustive else 0.5 * n * hoeffding_margin(m, cfg.delta, 2.0 * size)
    notes = ["aggregate_margin is the sum of per-direction margins halved"]
    planned = plan_samples(cfg.t, cfg.delta, PLAN_CLASSICAL, n) if cfg.t is not None else None
    agg = _aggregate(r.bias_estimate for r in records)
    return EstimateReport(CLASSICAL, n, m, cfg.seed, cfg.delta, cfg.exhaustive, records, agg,
                          margin, agg == 0 if cfg.exhaustive else None, planned, notes)


def qsac_estimate(f: BooleanFunction, cfg: ExperimentConfig) -> EstimateReport:
    """Shot-based estimate from the QSAC target qubit, one circuit per coordinate."""
    if cfg.algorithm != QSAC:
        raise ValueError("qsac_estimate needs a QSAC config")
    n, size = f.n, f.size
    m = None if cfg.exhaustive else cfg.samples(n)
    records = []
    for i in range(1, n + 1):
        res = circuits.qsac_iteration(f, i)
        if cfg.exhaustive:
            x_bar = float(res.exact[1])
            # 2^n (1 - 2 p_i) is an autocorrelation, hence an integer
            bias_est = float(round(size * abs(1.0 - 2.0 * x_bar)))
            interval = (x_bar, x_bar)
            counts, calls = None, 1
        else:
            res = res.sampled(m, cfg.seed, i)
            x_bar = int(res.counts[1]) / m
            bias_est = size * abs(1.0 - 2.0 * x_bar)
            interval = confidence_interval(x_bar, m, cfg.delta, 1.0)
            counts, calls = res.counts.tolist(), m
        records.append(DirectionEstimate(i, direction_index(n, i), x_bar, bias_est, interval,
                                         calls, counts))
    agg = _aggregate(r.bias_estimate for r in records)
    if cfg.exhaustive:
        margin, verdict = 0.0, agg == 0
    else:
        # |bias error| <= 2^{n+1} t per direction, halved in the sum
        margin = n * size * hoeffding_margin(m, cfg.delta, 1.0)
        verdict = None
    planned = plan_samples(cfg.t, cfg.delta, PLAN_QSAC, n) if cfg.t is not None else None
    notes = ["sample_mean estimates p_i = Pr[target = 1]",
             "aggregate_margin propagates each p_i margin through 2^n |1 - 2p|"]
    return EstimateReport(QSAC, n, m, cfg.seed, cfg.delta, cfg.exhaustive, records, agg, margin,
                          verdict, planned, notes)


def nqubit_estimate(f: BooleanFunction, cfg: ExperimentConfig) -> EstimateReport:
    """DIRECT or FORRELATION: estimate Pr[0_n] per coordinate and give a SAC verdict.

    SAC means Pr[0_n] = 0 for DIRECT and Pr[0_n] = 1 for FORRELATION, so a
    single contrary shot refutes SAC.
    """
    alg = cfg.algorithm
    if alg not in (DIRECT, FORRELATION):
        raise ValueError("nqubit_estimate needs a DIRECT or FORRELATION config")
    n, size = f.n, f.size
    m = None if cfg.exhaustive else cfg.samples(n)
    calls_per_shot = 2 if alg == DIRECT else 5
    records = []
    consistent = True
    for i in range(1, n + 1):
        res = circuits.run_iteration(alg, f, i)
        if cfg.exhaustive:
            x_bar = res.p_zero
            interval = (x_bar, x_bar)
            counts, calls = None, calls_per_shot
            hits_zero = x_bar > 1e-12
            all_zero = x_bar > 1 - 1e-12
        else:
            res = res.sampled(m, cfg.seed, i)
            zeros = int(res.counts[0])
            x_bar = zeros / m
            interval = confidence_interval(x_bar, m, cfg.delta, 1.0)
            counts, calls = [zeros, m - zeros], calls_per_shot * m
            hits_zero, all_zero = zeros > 0, zeros == m
        if alg == DIRECT:
            bias_est = size * math.sqrt(x_bar)
            if cfg.exhaustive:
                bias_est = float(round(bias_est))
            consistent &= not hits_zero
        else:
            bias_est = None
            consistent &= all_zero
        records.append(DirectionEstimate(i, direction_index(n, i), x_bar, bias_est, interval,
                                         calls, counts))
    if alg == DIRECT:
        agg = _aggregate(r.bias_estimate for r in records)
        notes = ["sample_mean estimates Pr[0_n] = (autocorrelation / 2^n)^2",
                 "counts are [zero outcomes, non-zero outcomes]"]
    else:
        agg = None
        notes = ["sample_mean estimates Pr[0_n] = Phi^2; sign of Phi unknown, no bias estimate",
                 "counts are [zero outcomes, non-zero outcomes]"]
    planned = plan_samples(cfg.t, cfg.delta, PLAN_NQUBIT, n) if cfg.t is not None else None
    return EstimateReport(alg, n, m, cfg.seed, cfg.delta, cfg.exhaustive, records, agg, None,
                          consistent, planned, notes)


def estimate(f: BooleanFunction, cfg: ExperimentConfig) -> EstimateReport:
    if cfg.algorithm == CLASSICAL:
        return classical_estimate(f, cfg)
    if cfg.algorithm == QSAC:
        return qsac_estimate(f, cfg)
    return nqubit_estimate(f, cfg)


@dataclass
class CoverageResult:
    repetitions: int
    m: int
    margin: float
    per_coordinate: list[float]  # fraction of repetitions covering p_i
    all_coordinates: float  # fraction where every p_i was covered


def qsac_coverage(f: BooleanFunction, t: float, delta: float, repetitions: int,
                  seed: int) -> CoverageResult:
    """How often the QSAC Hoeffding interval at planned m covers the true p_i."""
    m = plan_samples(t, delta, PLAN_QSAC, f.n)
    margin = hoeffding_margin(m, delta, 1.0)
    p_true = [float(circuits.qsac_iteration(f, i).exact[1]) for i in range(1, f.n + 1)]
    covered = np.zeros((repetitions, f.n), dtype=bool)
    for rep in range(repetitions):
        for k, p in enumerate(p_true):
            counts = qsim.sample_distribution([1 - p, p], m, qsim.rng_stream(seed, rep, k + 1))
            covered[rep, k] = abs(counts[1] / m - p) <= margin
    return CoverageResult(repetitions, m, margin, covered.mean(axis=0).tolist(),
                          float(covered.all(axis=1).mean()))
