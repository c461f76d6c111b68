"""Multi-trial benchmark driver, Q-metric summaries and CSV outputs."""

from __future__ import annotations

import configparser
import csv
import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigurationError
from .optimizer import VARIANTS, OptimizerConfig, TrialRecord, run
from .testfunctions import parse_problem

logger = logging.getLogger(__name__)

CURVES_HEADER = ("algorithm", "problem", "trial", "eval_index", "best_f")
SUMMARY_HEADER = ("algorithm", "problem", "trials", "mean_final", "std_final", "q")
QTOTALS_HEADER = ("algorithm", "q_total")
MEAN_CURVE_HEADER = ("eval_index", "mean", "std", "trials")


@dataclass
class ExperimentConfig:
    algorithms: List[str] = field(default_factory=lambda: list(VARIANTS))
    problems: List[str] = field(default_factory=lambda: ["ackley30"])
    trials: int = 30
    budget: int = 500
    seed: int = 0
    out: Optional[str] = None
    jobs: int = 1
    problem_seed: int = 0

    def validate(self) -> "ExperimentConfig":
        """Check every name and setting before anything runs."""
        if not self.algorithms or not self.problems:
            raise ConfigurationError("need at least one algorithm and one problem")
        for name in self.algorithms:
            if name not in VARIANTS:
                raise ConfigurationError(f"unknown algorithm {name!r}; choose from {', '.join(VARIANTS)}")
        for name in self.problems:
            obj = parse_problem(name, seed=self.problem_seed)
            if self.budget < 2 * (obj.dimension + 1):
                raise ConfigurationError(f"budget {self.budget} is below the initial design size for {name}")
        if self.trials < 1 or self.jobs < 1:
            raise ConfigurationError("trials and jobs must be positive")
        return self


def _split_list(value) -> List[str]:
    if isinstance(value, str):
        value = value.split(",")
    return [v.strip() for v in value if v.strip()]


def load_config(path) -> dict:
    """Read an INI-style experiment file.

    ``[experiment]`` holds ``key = value`` settings; ``[algorithms]`` and
    ``[problems]`` list one name per line (or a ``names`` key with a comma list).
    """
    parser = configparser.ConfigParser(allow_no_value=True, delimiters=("=",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from exc

    values: dict = {}
    if parser.has_section("experiment"):
        for key, raw in parser.items("experiment"):
            if key in ("trials", "budget", "seed", "jobs", "problem_seed"):
                try:
                    values[key] = int(raw)
                except (TypeError, ValueError):
                    raise ConfigurationError(f"{key} must be an integer, got {raw!r}") from None
            elif key == "out":
                values[key] = raw
            else:
                raise ConfigurationError(f"unknown experiment key {key!r}")
    for section in ("algorithms", "problems"):
        if parser.has_section(section):
            names = []
            for key, raw in parser.items(section):
                names.extend(_split_list(raw) if key == "names" else [key])
            values[section] = names
    return values


def _run_one(job: Tuple[str, str, int, int, int, int]) -> TrialRecord:
    algorithm, problem, trial, seed, budget, problem_seed = job
    objective = parse_problem(problem, seed=problem_seed)
    record = run(objective, OptimizerConfig(variant=algorithm, n_max=budget, seed=seed))
    if objective.calls != budget:
        raise RuntimeError(f"{algorithm} on {problem} used {objective.calls} evaluations, expected {budget}")
    record.trial = trial
    return record


def run_experiment(config: ExperimentConfig) -> List[TrialRecord]:
    """Run every (algorithm, problem, trial) combination.

    Trial ``k`` uses seed ``config.seed + k``. Records come back ordered by
    (algorithm, problem, trial) regardless of ``jobs``. When ``config.out`` is
    set, all outputs are written there.
    """
    config.validate()
    problems = [parse_problem(p, seed=config.problem_seed).name for p in config.problems]
    jobs = [
        (alg, prob, k, config.seed + k, config.budget, config.problem_seed)
        for alg in sorted(set(config.algorithms))
        for prob in sorted(set(problems))
        for k in range(config.trials)
    ]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = []
        for job in jobs:
            records.append(_run_one(job))
            logger.info("%s %s trial %d: %.6g", job[0], job[1], job[2], records[-1].final_best_f)
    if config.out is not None:
        emit_outputs(records, summarize(records), config.out)
    return records


@dataclass
class SummaryRow:
    algorithm: str
    problem: str
    trials: int
    mean_final: float
    std_final: float
    q: float
    q_absolute: bool = False  # best mean was 0, q holds the absolute difference


@dataclass
class Summary:
    rows: List[SummaryRow]
    q_totals: Dict[str, float]

    def row(self, algorithm: str, problem: str) -> SummaryRow:
        for r in self.rows:
            if r.algorithm == algorithm and r.problem == problem:
                return r
        raise KeyError((algorithm, problem))

    def ranking(self) -> List[str]:
        return sorted(self.q_totals, key=lambda a: (self.q_totals[a], a))


def q_metric(finals: Mapping[Tuple[str, str], float],
             stats: Optional[Mapping[Tuple[str, str], Tuple[int, float]]] = None) -> Summary:
    """Relative gap of each algorithm's mean final value to the best mean on each problem.

    ``Q(A, P) = |f(A, P) - f_best(P)| / |f_best(P)|`` with ``f_best(P)`` the
    smallest mean over algorithms, and ``Q(A) = sum_P Q(A, P)``. When
    ``f_best(P) == 0`` the absolute difference is reported and flagged.
    ``stats`` optionally supplies ``(trials, std_final)`` per key.
    """
    by_problem: Dict[str, float] = {}
    for (alg, prob), value in finals.items():
        by_problem[prob] = min(value, by_problem.get(prob, math.inf))
    rows = []
    totals: Dict[str, float] = defaultdict(float)
    for (alg, prob) in sorted(finals):
        value, best = finals[(alg, prob)], by_problem[prob]
        flagged = best == 0.0
        if flagged:
            logger.warning("best mean on %s is 0; reporting absolute Q", prob)
        q = abs(value - best) if flagged else abs(value - best) / abs(best)
        trials, std = (stats or {}).get((alg, prob), (0, math.nan))
        rows.append(SummaryRow(alg, prob, trials, float(value), float(std), q, flagged))
        totals[alg] += q
    return Summary(rows, dict(sorted(totals.items())))


def summarize(records: Sequence[TrialRecord]) -> Summary:
    groups: Dict[Tuple[str, str], List[float]] = defaultdict(list)
    for r in records:
        groups[(r.algorithm, r.problem)].append(r.final_best_f)
    finals = {k: float(np.mean(v)) for k, v in groups.items()}
    stats = {k: (len(v), float(np.std(v))) for k, v in groups.items()}
    return q_metric(finals, stats)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows: Iterable[Sequence]) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc


def _sorted_records(records):
    return sorted(records, key=lambda r: (r.algorithm, r.problem, r.trial))


def emit_outputs(records: Sequence[TrialRecord], summary: Summary, out_dir) -> List[Path]:
    """Write ``curves.csv``, ``summary.csv``, ``qtotals.csv`` and per-pair mean curves.

    Output is canonical: rows are sorted and floats use 17 significant digits,
    so identical inputs give identical bytes.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    records = _sorted_records(records)
    written = [out / "curves.csv", out / "summary.csv", out / "qtotals.csv"]

    _write_csv(written[0], CURVES_HEADER,
               ((r.algorithm, r.problem, r.trial, i, f) for r in records for i, f in r.curve))
    _write_csv(written[1], SUMMARY_HEADER,
               ((s.algorithm, s.problem, s.trials, s.mean_final, s.std_final, s.q) for s in summary.rows))
    _write_csv(written[2], QTOTALS_HEADER, sorted(summary.q_totals.items()))

    groups: Dict[Tuple[str, str], List[TrialRecord]] = defaultdict(list)
    for r in records:
        groups[(r.algorithm, r.problem)].append(r)
    for (alg, prob), recs in sorted(groups.items()):
        curves = np.array([r.best_values for r in recs])
        index = [i for i, _ in recs[0].curve]
        path = out / f"curve_{alg}_{prob}.csv"
        _write_csv(path, MEAN_CURVE_HEADER,
                   zip(index, curves.mean(axis=0), curves.std(axis=0), [len(recs)] * len(index)))
        written.append(path)
    return written


def read_curves(path) -> Dict[Tuple[str, str, int], List[Tuple[int, float]]]:
    """Parse ``curves.csv`` back into ``{(algorithm, problem, trial): curve}``."""
    curves: Dict[Tuple[str, str, int], List[Tuple[int, float]]] = defaultdict(list)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CURVES_HEADER:
            raise ValueError(f"unexpected header in {path}: {header}")
        for alg, prob, trial, i, f in reader:
            curves[(alg, prob, int(trial))].append((int(i), float(f)))
    return dict(curves)


def read_summary(path) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def config_from_sources(file_values: Optional[dict] = None, **overrides) -> ExperimentConfig:
    """Merge config-file values with non-None overrides (CLI flags win)."""
    values = dict(file_values or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("algorithms", "problems"):
        if key in values:
            values[key] = _split_list(values[key])
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigurationError(f"unknown settings: {sorted(unknown)}")
    if values.get("out") is None:
        values["out"] = os.environ.get("SOSA_OUT_DIR")
    return ExperimentConfig(**values)
