"""Monte-Carlo campaigns (divergence, iteration counts, accuracy digits)
and the evaluator accuracy sweep.

Every run draws its own generator, ``PCG64(SeedSequence([seed, run]))``, so a
campaign is bit-reproducible and runs can be executed in any order or in
parallel without changing the report.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import GN_CONFIG, GNM_CONFIG, LM_CONFIG, gauss_newton_fit, kasa_fit, lm_classic_fit
from .bigcircle import evaluate_big_circle
from .errors import CenterOnDataPoint, DegenerateInput, NoConvergence
from .geometry import Circle, NormalizedPointSet, normalize, radius_for_center
from .oracle import K_MAX, dd_objective, oracle_fit, score
from .solver import FitReport, SolverConfig, Termination, fit
from .standard import evaluate_standard
from .valley import principal_rotation

ALGORITHMS = ("new", "gn", "gnm", "lm")
INIT_MODES = ("kasa", "random_center")
SAME_MINIMUM_TOL = 1e-2

CONVERGED = "converged"
DIVERGED = "diverged"
LINE = "line_fallback"
MAX_ITERS = "max_iters"
OUTCOMES = (CONVERGED, DIVERGED, LINE, MAX_ITERS)


@dataclass(frozen=True)
class Campaign:
    runs: int = 10_000
    n_points: int = 8
    point_box: float = 1.0
    init_mode: str = "kasa"
    random_center_box: float = 5.0
    seed: int = 0
    algorithms: Tuple[str, ...] = ("new",)
    score: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.n_points < 3:
            raise ValueError("n_points must be at least 3")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown or not self.algorithms:
            raise ValueError(f"algorithms must be a nonempty subset of {ALGORITHMS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class RunRecord:
    run: int
    algorithm: str
    outcome: str
    iterations: int
    a: float
    b: float
    R: float
    k: Optional[int] = None
    seconds: float = 0.0


@dataclass
class AlgorithmStats:
    runs: int = 0
    converged: int = 0
    diverged: int = 0
    line_fallback: int = 0
    max_iters: int = 0
    mean_iterations: float = math.nan
    k_histogram: List[int] = field(default_factory=lambda: [0] * (K_MAX + 1))
    mean_seconds: float = math.nan

    @property
    def divergence_pct(self) -> float:
        return 100.0 * (self.diverged + self.max_iters) / self.runs if self.runs else math.nan

    @property
    def scored(self) -> int:
        return sum(self.k_histogram)

    def to_dict(self, include_timing: bool = True) -> dict:
        d = asdict(self)
        d["divergence_pct"] = self.divergence_pct
        if not include_timing:
            d.pop("mean_seconds")
        return d


@dataclass
class CampaignReport:
    campaign: Campaign
    stats: Dict[str, AlgorithmStats]
    scored_runs: int = 0
    records: Optional[List[RunRecord]] = None

    def to_dict(self, include_timing: bool = True, include_records: bool = False) -> dict:
        out = {
            "campaign": asdict(self.campaign),
            "scored_runs": self.scored_runs,
            "algorithms": {k: v.to_dict(include_timing) for k, v in self.stats.items()},
        }
        if include_records and self.records is not None:
            out["records"] = [asdict(r) for r in self.records]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs), indent=2)

    def histogram_rows(self) -> List[list]:
        names = list(self.stats)
        return [[k] + [self.stats[a].k_histogram[k] for a in names] for k in range(K_MAX + 1)]


def run_rng(seed: int, run: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, run])))


def generate_sample(rng, n: int, half_width: float = 1.0) -> np.ndarray:
    """``n`` points uniform in ``[-w, w]**2``; ``rng`` is a Generator or an int seed."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(rng))
    if n <= 0:
        return np.empty((0, 2))
    return rng.uniform(-half_width, half_width, size=(n, 2))


def _classify(report: FitReport, baseline: bool) -> str:
    t = report.termination
    if t == Termination.LINE_FALLBACK:
        return LINE
    if t == Termination.DIVERGED:
        return DIVERGED
    if t == Termination.MAX_ITERS:
        return DIVERGED if baseline else MAX_ITERS
    return CONVERGED


def _run_algorithm(name: str, data: NormalizedPointSet, init: Circle) -> FitReport:
    if name == "new":
        return fit(data, init.center, SolverConfig())
    if name == "gn":
        return gauss_newton_fit(data, init, GN_CONFIG)
    if name == "gnm":
        return gauss_newton_fit(data, init, GNM_CONFIG)
    return lm_classic_fit(data, init, LM_CONFIG)


def _same_minimum(circles: Sequence[Circle]) -> bool:
    arrs = [c.as_array() for c in circles]
    return all(np.linalg.norm(u - v) < SAME_MINIMUM_TOL
               for i, u in enumerate(arrs) for v in arrs[i + 1:])


def run_single(c: Campaign, run: int) -> List[RunRecord]:
    """All selected algorithms on sample number ``run`` of the campaign."""
    rng = run_rng(c.seed, run)
    pts = generate_sample(rng, c.n_points, c.point_box)
    # drawn unconditionally so samples do not depend on init_mode
    center = rng.uniform(-c.random_center_box, c.random_center_box, size=2)
    data = normalize(pts)
    try:
        if c.init_mode == "kasa":
            init = kasa_fit(data)
        else:
            init = Circle(float(center[0]), float(center[1]), radius_for_center(data, center))
    except DegenerateInput:
        return [RunRecord(run, name, LINE, 0, math.nan, math.nan, math.nan)
                for name in c.algorithms]

    records = []
    for name in c.algorithms:
        t0 = time.perf_counter()
        try:
            rep = _run_algorithm(name, data, init)
            outcome = _classify(rep, baseline=name != "new")
        except CenterOnDataPoint:
            rep, outcome = None, DIVERGED
        dt = time.perf_counter() - t0
        res = rep.result if rep is not None else None
        if isinstance(res, Circle):
            a, b, R = res.a, res.b, res.R
        else:
            a = b = R = math.nan
        records.append(RunRecord(run, name, outcome, rep.iterations if rep else 0, a, b, R,
                                 seconds=dt))

    if c.score and all(r.outcome == CONVERGED for r in records):
        circles = [Circle(r.a, r.b, r.R) for r in records]
        if _same_minimum(circles):
            try:
                ref = oracle_fit(data, circles[0])
            except NoConvergence:
                ref = None
            if ref is not None:
                for r, circ in zip(records, circles):
                    r.k = score(circ, ref).k
    return records


def _run_chunk(args) -> List[RunRecord]:
    c, runs = args
    out = []
    for i in runs:
        out.extend(run_single(c, i))
    return out


def aggregate(c: Campaign, records: Sequence[RunRecord]) -> CampaignReport:
    """Order-independent aggregation of run records into per-algorithm stats."""
    stats = {name: AlgorithmStats() for name in c.algorithms}
    iters = {name: [] for name in c.algorithms}
    secs = {name: 0.0 for name in c.algorithms}
    scored = set()
    for r in records:
        s = stats[r.algorithm]
        s.runs += 1
        setattr(s, r.outcome, getattr(s, r.outcome) + 1)
        secs[r.algorithm] += r.seconds
        if r.outcome == CONVERGED:
            iters[r.algorithm].append(r.iterations)
        if r.k is not None:
            s.k_histogram[r.k] += 1
            scored.add(r.run)
    for name, s in stats.items():
        if iters[name]:
            s.mean_iterations = math.fsum(iters[name]) / len(iters[name])
        if s.runs:
            s.mean_seconds = secs[name] / s.runs
    return CampaignReport(c, stats, len(scored))


def run_campaign(c: Campaign, *, workers: int = 1, keep_records: bool = False,
                 progress=None) -> CampaignReport:
    """Run every sample of the campaign and aggregate the outcomes."""
    if workers > 1:
        chunks = [range(i, min(i + 250, c.runs)) for i in range(0, c.runs, 250)]
        with ProcessPoolExecutor(workers) as pool:
            records = [r for part in pool.map(_run_chunk, [(c, ch) for ch in chunks])
                       for r in part]
    else:
        records = []
        for i in range(c.runs):
            records.extend(run_single(c, i))
            if progress is not None:
                progress(i + 1, c.runs)
    report = aggregate(c, records)
    if keep_records:
        report.records = sorted(records, key=lambda r: (r.run, ALGORITHMS.index(r.algorithm)))
    return report


# evaluator accuracy sweep ---------------------------------------------------

# gently curved, nearly collinear points
NEAR_COLLINEAR_SAMPLE = (
    (-1.0, 0.0), (-0.7, 0.011), (-0.4, -0.004), (-0.1, 0.008),
    (0.2, 0.002), (0.5, -0.006), (0.8, 0.009), (1.0, 0.001),
)

@dataclass(frozen=True)
class SweepRow:
    D: float
    F_oracle: float
    F_standard: float
    F_big: float
    digits_standard: float
    digits_big: float

    FIELDS = ("D", "F_oracle", "F_standard", "F_big", "digits_standard", "digits_big")

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in self.FIELDS)


def accurate_digits(value: float, reference: float) -> float:
    """``-log10`` of the relative error, clamped to ``[0, 16]``."""
    if value == reference:
        return float(K_MAX)
    if not math.isfinite(value):
        return 0.0
    rel = abs(value - reference) / abs(reference) if reference != 0 else abs(value)
    return float(min(K_MAX, max(0.0, -math.log10(rel))))


def evaluator_sweep(data: NormalizedPointSet, D_values: Sequence[float],
                    direction: Optional[Sequence[float]] = None) -> List[SweepRow]:
    """Accuracy of F by the direct and big-circle formulas as the center recedes.

    The center is placed at ``D * direction``; by default the direction is the
    minor axis of the points, so the circles pass through the data.  Both
    double-precision values are compared with a double-double evaluation.
    """
    if direction is None:
        direction = principal_rotation(data)[:, 1]
    u = np.asarray(direction, dtype=float)
    u = u / np.hypot(u[0], u[1])
    rows = []
    for D in D_values:
        p = (float(D * u[0]), float(D * u[1]))
        ref = float(dd_objective(data, p))
        F_std = evaluate_standard(data, p).value
        F_big = evaluate_big_circle(data, p, min_distance=0.0).value
        rows.append(SweepRow(float(D), ref, F_std, F_big,
                             accurate_digits(F_std, ref), accurate_digits(F_big, ref)))
    return rows
