"""Seeded experiment harness: configs, sweep runners, presets, flat output.

Each experiment is described by one dataclass config that round-trips
losslessly through JSON.  Runners derive every random draw from the
config's master seed, so a run is reproducible end to end: repeating a
preset with the same seed writes byte-identical result CSVs.  Wall-clock
timings are kept out of the CSVs for that reason and recorded in the run
metadata JSON instead.

Output layout per run (under the config's output directory):

* ``trials.csv``   one row per (sweep value, algorithm, trial)
* ``results.csv``  one aggregate row per (sweep value, algorithm)
* ``run_meta.json`` full config, config hash, timings
* ``*.tsv``        per-metric plot data via :func:`emit_plot_data`
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .analysis import mse as compute_mse
from .analysis import recovery_rate
from .decode import (greedy_joint_threshold_decode, independent_threshold_decode,
                     joint_threshold_decode)
from .dictionary import (Dictionary, build_gabor_1d_dictionary,
                         build_gaussian_2d_dictionary, odd_translations)
from .ensemble import generate_ensemble, load_signal_csv
from .sensing import identity_sensing, measure_ensemble, sample_sensing_matrix
from .transforms import CandidateSet, TransformVector

KIND_TRANSFORM_ERROR = "transform-error-vs-M"
KIND_RECOVERY_VS_VIEWS = "recovery-vs-J"
KIND_TWO_VIEW_1D = "two-view-1d"

EXPERIMENT_KINDS = (KIND_TRANSFORM_ERROR, KIND_RECOVERY_VS_VIEWS,
                    KIND_TWO_VIEW_1D)

# metrics worth plotting for each experiment kind, in emission order
_PLOT_METRICS = {
    KIND_TRANSFORM_ERROR: ("transform_error", "recovery", "mse"),
    KIND_RECOVERY_VS_VIEWS: ("recovery", "mse"),
    KIND_TWO_VIEW_1D: ("mse", "recovery"),
}


@dataclass
class DictionaryConfig:
    """Declarative dictionary description used inside experiment configs."""

    variant: str
    # 2D Gaussian family
    width: int | None = None
    height: int | None = None
    n_theta: int | None = None
    sx_values: list[float] | None = None
    sy_values: list[float] | None = None
    translations: str = "odd"
    # 1D modulated family
    length: int | None = None
    t_start: int = 1
    t_step: int = 10
    scales: list[float] | None = None
    omegas: list[float] | None = None
    include_negated: bool = True

    def signal_length(self) -> int:
        if self.variant == "gaussian_2d":
            return int(self.width) * int(self.height)
        if self.variant == "gabor_1d":
            return int(self.length)
        raise ValueError(f"unknown dictionary variant {self.variant!r}")

    def build(self) -> Dictionary:
        if self.variant == "gaussian_2d":
            thetas = np.linspace(0.0, np.pi, int(self.n_theta))
            if self.translations == "odd":
                shifts = odd_translations(self.width, self.height)
            elif self.translations == "all":
                shifts = [(tx, ty) for tx in range(self.width)
                          for ty in range(self.height)]
            else:
                raise ValueError(
                    f"unknown translation rule {self.translations!r}")
            return build_gaussian_2d_dictionary(
                self.width, self.height, thetas, self.sx_values,
                self.sy_values, shifts)
        if self.variant == "gabor_1d":
            return build_gabor_1d_dictionary(
                self.length, t_start=self.t_start, t_step=self.t_step,
                scales=self.scales, omegas=self.omegas,
                include_negated=self.include_negated)
        raise ValueError(f"unknown dictionary variant {self.variant!r}")


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one experiment run.

    ``views`` and ``measurements`` are scalars or sweep lists depending on
    the experiment kind; ``candidate_offsets`` holds the per-view
    translation candidates ((dx, dy) pairs for images, integers for 1D).
    """

    kind: str
    dictionary: DictionaryConfig
    sparsity: int
    views: int | list[int]
    measurements: int | list[int]
    candidate_offsets: list
    trials: int
    master_seed: int
    output_dir: str
    coeff_rule: str = "shared"
    coeff_range: list[float] = field(default_factory=lambda: [0.5, 1.5])
    identity_sensing: bool = False
    require_margin: bool = True
    require_positivity: bool = True
    fresh_ensembles: bool = True
    signal_paths: list[str] | None = None
    max_attempts: int = 10_000

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        data["dictionary"] = DictionaryConfig(**data["dictionary"])
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))


def save_config(config: ExperimentConfig, path) -> None:
    Path(path).write_text(config.to_json() + "\n", encoding="utf-8")


def load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_json(Path(path).read_text(encoding="utf-8"))


def config_hash(config: ExperimentConfig) -> str:
    """Stable hexadecimal digest of the canonicalized config.

    The output directory is excluded: it steers where results land, not
    what they are, and the hash marks runs that must agree byte for byte.
    """
    canonical_dict = config.to_dict()
    canonical_dict.pop("output_dir", None)
    canonical = json.dumps(canonical_dict, sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def validate_config(config: ExperimentConfig) -> None:
    """Raise ValueError on structurally invalid configs."""
    if config.kind not in EXPERIMENT_KINDS:
        raise ValueError(f"unknown experiment kind {config.kind!r}")
    if config.trials < 1:
        raise ValueError("trials must be at least 1")
    if config.sparsity < 1:
        raise ValueError("sparsity must be at least 1")
    if not config.candidate_offsets:
        raise ValueError("candidate offset list is empty")
    if config.coeff_rule not in ("shared", "independent"):
        raise ValueError(f"unknown coefficient rule {config.coeff_rule!r}")
    lo, hi = config.coeff_range
    if not 0.0 < lo <= hi:
        raise ValueError("coefficient range must satisfy 0 < lo <= hi")

    if config.kind == KIND_TRANSFORM_ERROR:
        if not isinstance(config.views, int) or config.views < 2:
            raise ValueError("transform-error sweeps need a fixed view count >= 2")
        if not isinstance(config.measurements, list) or not config.measurements:
            raise ValueError("transform-error sweeps need a nonempty measurement list")
        if any(m < 1 for m in config.measurements):
            raise ValueError("measurement counts must be positive")
    elif config.kind == KIND_RECOVERY_VS_VIEWS:
        if not isinstance(config.views, list) or not config.views:
            raise ValueError("view sweeps need a nonempty view-count list")
        if any(v < 1 for v in config.views):
            raise ValueError("view counts must be positive")
        if not isinstance(config.measurements, int) or config.measurements < 1:
            raise ValueError("view sweeps need one fixed measurement count")
    elif config.kind == KIND_TWO_VIEW_1D:
        if config.views != 2:
            raise ValueError("the two-view experiment is pinned to 2 views")
        if not isinstance(config.measurements, int) or config.measurements < 1:
            raise ValueError("the two-view experiment needs one measurement count")
        if config.dictionary.variant != "gabor_1d":
            raise ValueError("the two-view experiment uses the 1D dictionary")
        if config.signal_paths is not None and len(config.signal_paths) != 2:
            raise ValueError("signal ingestion needs exactly two CSV paths")

    if config.identity_sensing:
        n = config.dictionary.signal_length()
        ms = (config.measurements if isinstance(config.measurements, list)
              else [config.measurements])
        if any(m != n for m in ms):
            raise ValueError(
                "identity sensing requires measurement counts equal to the "
                "signal length")


@dataclass
class TrialRecord:
    """One decode outcome; None marks metrics undefined for the trial."""

    sweep: int
    algorithm: str
    trial: int
    seed: int
    recovery_rate: float | None
    mse: float | None
    transform_correct: bool | None
    rank_deficient: bool
    wall_time: float | None


@dataclass
class ResultTable:
    """All trial records of a run plus identifying metadata."""

    kind: str
    config_hash: str
    master_seed: int
    records: list[TrialRecord]
    config: ExperimentConfig | None = None
    wall_time_total: float | None = None

    def aggregate(self) -> list[dict]:
        """Aggregate rows per (sweep value, algorithm), in record order.

        Means come with standard errors of the mean (0 for single-trial
        groups); the transform error rate is the fraction of wrong
        transform estimates with a binomial standard error.  Metrics with
        no defined values in a group aggregate to None.
        """
        groups: dict[tuple, list[TrialRecord]] = {}
        for rec in self.records:
            groups.setdefault((rec.sweep, rec.algorithm), []).append(rec)
        rows = []
        for (sweep, algorithm), recs in groups.items():
            row = {"sweep": sweep, "algorithm": algorithm,
                   "n_trials": len(recs)}
            for metric in ("recovery_rate", "mse"):
                values = [getattr(r, metric) for r in recs
                          if getattr(r, metric) is not None]
                key = "recovery" if metric == "recovery_rate" else metric
                if values:
                    arr = np.asarray(values, dtype=float)
                    row[f"{key}_mean"] = float(arr.mean())
                    row[f"{key}_se"] = (
                        float(arr.std(ddof=1) / np.sqrt(arr.size))
                        if arr.size > 1 else 0.0)
                else:
                    row[f"{key}_mean"] = None
                    row[f"{key}_se"] = None
            flags = [r.transform_correct for r in recs
                     if r.transform_correct is not None]
            if flags:
                p = sum(1 for f in flags if not f) / len(flags)
                row["transform_error"] = p
                row["transform_error_se"] = float(
                    np.sqrt(p * (1.0 - p) / len(flags)))
            else:
                row["transform_error"] = None
                row["transform_error_se"] = None
            row["rank_deficient_rate"] = (
                sum(1 for r in recs if r.rank_deficient) / len(recs))
            rows.append(row)
        return rows

    def write(self, out_dir) -> dict[str, Path]:
        """Write trials.csv, results.csv and run_meta.json under ``out_dir``.

        The CSVs contain only seed-determined values, so rerunning the
        same config reproduces them byte for byte; timings go to the
        metadata JSON.
        """
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        preamble = (f"# kind={self.kind}\n"
                    f"# config_hash={self.config_hash}\n"
                    f"# master_seed={self.master_seed}\n")

        trial_lines = [preamble + "sweep,algorithm,trial,seed,recovery_rate,"
                                  "mse,transform_correct,rank_deficient"]
        for r in self.records:
            trial_lines.append(",".join(_format_csv(v) for v in (
                r.sweep, r.algorithm, r.trial, r.seed, r.recovery_rate,
                r.mse, r.transform_correct, r.rank_deficient)))
        trials_path = out_dir / "trials.csv"
        trials_path.write_text("\n".join(trial_lines) + "\n", encoding="utf-8")

        agg_cols = ("sweep", "algorithm", "n_trials", "recovery_mean",
                    "recovery_se", "mse_mean", "mse_se", "transform_error",
                    "transform_error_se", "rank_deficient_rate")
        result_lines = [preamble + ",".join(agg_cols)]
        for row in self.aggregate():
            result_lines.append(",".join(_format_csv(row[c]) for c in agg_cols))
        results_path = out_dir / "results.csv"
        results_path.write_text("\n".join(result_lines) + "\n",
                                encoding="utf-8")

        meta = {
            "kind": self.kind,
            "config_hash": self.config_hash,
            "master_seed": self.master_seed,
            "config": self.config.to_dict() if self.config else None,
            "wall_time_total": self.wall_time_total,
            "wall_time_by_group": self._wall_time_by_group(),
        }
        meta_path = out_dir / "run_meta.json"
        meta_path.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n",
                             encoding="utf-8")
        return {"trials": trials_path, "results": results_path,
                "meta": meta_path}

    def _wall_time_by_group(self) -> dict:
        groups: dict[str, float] = {}
        for r in self.records:
            if r.wall_time is not None:
                key = f"{r.sweep}/{r.algorithm}"
                groups[key] = groups.get(key, 0.0) + r.wall_time
        return {k: round(v, 6) for k, v in groups.items()}


def _format_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_csv_value(text: str, kind: str):
    if text == "":
        return None
    if kind == "bool":
        return text == "1"
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    return text


def read_trials_csv(path) -> ResultTable:
    """Rebuild a ResultTable (without timings) from a trials.csv file."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    meta = {"kind": None, "config_hash": None, "master_seed": None}
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            if key in meta:
                meta[key] = value
        elif line:
            body.append(line)
    if not body or meta["kind"] is None:
        raise ValueError(f"{path} is not a trials.csv written by this package")
    header = body[0].split(",")
    expected = ["sweep", "algorithm", "trial", "seed", "recovery_rate",
                "mse", "transform_correct", "rank_deficient"]
    if header != expected:
        raise ValueError(f"unexpected trials.csv columns in {path}")
    records = []
    for line in body[1:]:
        cells = line.split(",")
        records.append(TrialRecord(
            sweep=_parse_csv_value(cells[0], "int"),
            algorithm=cells[1],
            trial=_parse_csv_value(cells[2], "int"),
            seed=_parse_csv_value(cells[3], "int"),
            recovery_rate=_parse_csv_value(cells[4], "float"),
            mse=_parse_csv_value(cells[5], "float"),
            transform_correct=_parse_csv_value(cells[6], "bool"),
            rank_deficient=_parse_csv_value(cells[7], "bool"),
            wall_time=None,
        ))
    return ResultTable(kind=meta["kind"], config_hash=meta["config_hash"],
                       master_seed=int(meta["master_seed"]), records=records)


def emit_plot_data(table: ResultTable, out_dir) -> list[Path]:
    """Write one tab-separated file per metric: sweep, series, mean, stderr.

    Metrics are chosen by experiment kind; a metric with no defined values
    (for example recovery on ingested signals without ground truth) is
    skipped entirely.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = table.aggregate()
    metric_cols = {"recovery": ("recovery_mean", "recovery_se"),
                   "mse": ("mse_mean", "mse_se"),
                   "transform_error": ("transform_error",
                                       "transform_error_se")}
    written = []
    for metric in _PLOT_METRICS.get(table.kind, ("recovery", "mse")):
        mean_col, se_col = metric_cols[metric]
        defined = [row for row in rows if row[mean_col] is not None]
        if not defined:
            continue
        lines = ["sweep\tseries\tmean\tstderr"]
        for row in defined:
            lines.append("\t".join((
                _format_csv(row["sweep"]), row["algorithm"],
                repr(float(row[mean_col])), repr(float(row[se_col])))))
        path = out_dir / f"{metric}.tsv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


_ALGORITHMS = {
    "jt": joint_threshold_decode,
    "gjt": greedy_joint_threshold_decode,
}


def _decode_with(algorithm: str, measurements, dictionary, sparsity,
                 candidates):
    if algorithm == "it":
        return independent_threshold_decode(measurements, dictionary, sparsity)
    return _ALGORITHMS[algorithm](measurements, dictionary, sparsity,
                                  candidates)


def _trial_seeds(master_seed: int, count: int) -> np.ndarray:
    return np.random.SeedSequence(master_seed).generate_state(
        count, dtype=np.uint64)


def _sample_truth(candidates: CandidateSet, rng) -> TransformVector:
    picks = tuple(cands[rng.integers(0, len(cands))]
                  for cands in candidates.per_view)
    return TransformVector((candidates.identity,) + picks)


def _run_joint_trial(config: ExperimentConfig, dictionary, candidates,
                     n_measurements: int, trial_seed: int, trial_index: int,
                     sweep: int, algorithms, ensemble_cache=None):
    """Generate (or reuse) an ensemble, measure it, decode it every way."""
    trial_ss = np.random.SeedSequence(trial_seed)
    truth_ss, ensemble_ss, sensing_ss = trial_ss.spawn(3)

    if ensemble_cache is not None and ensemble_cache.get("ensemble") is not None:
        ensemble = ensemble_cache["ensemble"]
    else:
        truth = _sample_truth(candidates, np.random.default_rng(truth_ss))
        ensemble = generate_ensemble(
            dictionary, config.sparsity, truth, config.coeff_rule,
            seed=ensemble_ss, max_attempts=config.max_attempts,
            require_margin=config.require_margin,
            require_positivity=config.require_positivity,
            coeff_range=tuple(config.coeff_range))
        if ensemble_cache is not None:
            ensemble_cache["ensemble"] = ensemble

    n_views = ensemble.n_views
    if config.identity_sensing:
        matrices = [identity_sensing(dictionary.signal_length)] * n_views
    else:
        matrices = [sample_sensing_matrix(n_measurements,
                                          dictionary.signal_length, ss)
                    for ss in sensing_ss.spawn(n_views)]
    measurements = measure_ensemble(matrices, ensemble.signals)

    records = []
    for algorithm in algorithms:
        start = time.perf_counter()
        result = _decode_with(algorithm, measurements, dictionary,
                              config.sparsity, candidates)
        wall = time.perf_counter() - start
        transform_correct = (None if result.transforms is None
                             else bool(result.transforms == ensemble.transforms))
        records.append(TrialRecord(
            sweep=sweep, algorithm=algorithm, trial=trial_index,
            seed=int(trial_seed),
            recovery_rate=recovery_rate(ensemble.supports, result.supports),
            mse=compute_mse(ensemble.signals, result.reconstructions),
            transform_correct=transform_correct,
            rank_deficient=result.rank_deficient,
            wall_time=wall,
        ))
    return records


def run_transform_error_experiment(config: ExperimentConfig) -> ResultTable:
    """Sweep the per-view measurement count; decode with jt and gjt.

    Every trial draws a fresh true transformation vector from the
    candidate set, a fresh ensemble, and fresh sensing matrices.
    """
    validate_config(config)
    if config.kind != KIND_TRANSFORM_ERROR:
        raise ValueError(f"config kind {config.kind!r} does not match runner")
    started = time.perf_counter()
    dictionary = config.dictionary.build()
    candidates = CandidateSet.from_uniform_offsets(
        dictionary, config.candidate_offsets, config.views)
    seeds = _trial_seeds(config.master_seed,
                         len(config.measurements) * config.trials)
    records = []
    for sweep_index, n_measurements in enumerate(config.measurements):
        cache = None if config.fresh_ensembles else {}
        for trial in range(config.trials):
            seed = int(seeds[sweep_index * config.trials + trial])
            records.extend(_run_joint_trial(
                config, dictionary, candidates, n_measurements, seed, trial,
                sweep=n_measurements, algorithms=("jt", "gjt"),
                ensemble_cache=cache))
    return ResultTable(kind=config.kind, config_hash=config_hash(config),
                       master_seed=config.master_seed, records=records,
                       config=config,
                       wall_time_total=time.perf_counter() - started)


def run_recovery_vs_views_experiment(config: ExperimentConfig) -> ResultTable:
    """Sweep the number of views at fixed M; decode with gjt and the
    independent baseline."""
    validate_config(config)
    if config.kind != KIND_RECOVERY_VS_VIEWS:
        raise ValueError(f"config kind {config.kind!r} does not match runner")
    started = time.perf_counter()
    dictionary = config.dictionary.build()
    seeds = _trial_seeds(config.master_seed, len(config.views) * config.trials)
    records = []
    for sweep_index, n_views in enumerate(config.views):
        candidates = CandidateSet.from_uniform_offsets(
            dictionary, config.candidate_offsets, n_views)
        cache = None if config.fresh_ensembles else {}
        for trial in range(config.trials):
            seed = int(seeds[sweep_index * config.trials + trial])
            records.extend(_run_joint_trial(
                config, dictionary, candidates, config.measurements, seed,
                trial, sweep=n_views, algorithms=("gjt", "it"),
                ensemble_cache=cache))
    return ResultTable(kind=config.kind, config_hash=config_hash(config),
                       master_seed=config.master_seed, records=records,
                       config=config,
                       wall_time_total=time.perf_counter() - started)


def run_two_view_experiment(config: ExperimentConfig) -> ResultTable:
    """Two views, 1D dictionary; decode with jt and the independent baseline.

    Signals are either synthetic ensembles (fresh per trial) or a fixed
    ingested CSV pair, in which case only sensing varies across trials and
    ground-truth metrics are undefined.
    """
    validate_config(config)
    if config.kind != KIND_TWO_VIEW_1D:
        raise ValueError(f"config kind {config.kind!r} does not match runner")
    started = time.perf_counter()
    dictionary = config.dictionary.build()
    candidates = CandidateSet.from_uniform_offsets(
        dictionary, config.candidate_offsets, 2)
    seeds = _trial_seeds(config.master_seed, config.trials)
    records = []

    if config.signal_paths is not None:
        signals = [load_signal_csv(p) for p in config.signal_paths]
        for y in signals:
            if y.size != dictionary.signal_length:
                raise ValueError("ingested signal length does not match the "
                                 "dictionary's sample grid")
        for trial in range(config.trials):
            seed = int(seeds[trial])
            if config.identity_sensing:
                matrices = [identity_sensing(dictionary.signal_length)] * 2
            else:
                sensing_ss = np.random.SeedSequence(seed).spawn(3)[2]
                matrices = [sample_sensing_matrix(config.measurements,
                                                  dictionary.signal_length, ss)
                            for ss in sensing_ss.spawn(2)]
            measurements = measure_ensemble(matrices, signals)
            for algorithm in ("jt", "it"):
                start = time.perf_counter()
                result = _decode_with(algorithm, measurements, dictionary,
                                      config.sparsity, candidates)
                wall = time.perf_counter() - start
                records.append(TrialRecord(
                    sweep=config.measurements, algorithm=algorithm,
                    trial=trial, seed=seed, recovery_rate=None,
                    mse=compute_mse(signals, result.reconstructions),
                    transform_correct=None,
                    rank_deficient=result.rank_deficient, wall_time=wall))
    else:
        cache = None if config.fresh_ensembles else {}
        for trial in range(config.trials):
            seed = int(seeds[trial])
            records.extend(_run_joint_trial(
                config, dictionary, candidates, config.measurements, seed,
                trial, sweep=config.measurements, algorithms=("jt", "it"),
                ensemble_cache=cache))
    return ResultTable(kind=config.kind, config_hash=config_hash(config),
                       master_seed=config.master_seed, records=records,
                       config=config,
                       wall_time_total=time.perf_counter() - started)


_RUNNERS = {
    KIND_TRANSFORM_ERROR: run_transform_error_experiment,
    KIND_RECOVERY_VS_VIEWS: run_recovery_vs_views_experiment,
    KIND_TWO_VIEW_1D: run_two_view_experiment,
}


def decode_instance(instance: dict):
    """Decode one problem instance described by a plain dict (CLI JSON).

    Required keys: ``dictionary`` (a DictionaryConfig mapping), ``sparsity``,
    ``signal_csvs`` (one single-column CSV path per view).  Optional:
    ``algorithm`` (jt | gjt | it, default jt), ``candidate_offsets``
    (required for jt/gjt), ``measurements`` (per-view count for Gaussian
    sensing), ``identity_sensing`` (bool), ``seed`` (sensing seed,
    default 0).  Returns (DecodeResult, summary dict); the summary is
    JSON-serializable.
    """
    dict_config = DictionaryConfig(**instance["dictionary"])
    dictionary = dict_config.build()
    sparsity = int(instance["sparsity"])
    algorithm = instance.get("algorithm", "jt")
    if algorithm not in ("jt", "gjt", "it"):
        raise ValueError(f"unknown algorithm {algorithm!r}")

    paths = instance.get("signal_csvs")
    if not paths:
        raise ValueError("instance needs signal_csvs, one CSV per view")
    signals = [load_signal_csv(p) for p in paths]
    for y in signals:
        if y.size != dictionary.signal_length:
            raise ValueError("signal length does not match the dictionary's "
                             "sample grid")

    n_views = len(signals)
    if instance.get("identity_sensing", False):
        matrices = [identity_sensing(dictionary.signal_length)] * n_views
    else:
        n_measurements = instance.get("measurements")
        if n_measurements is None:
            raise ValueError("instance needs measurements unless "
                             "identity_sensing is set")
        sensing_ss = np.random.SeedSequence(int(instance.get("seed", 0)))
        matrices = [sample_sensing_matrix(int(n_measurements),
                                          dictionary.signal_length, ss)
                    for ss in sensing_ss.spawn(n_views)]
    measurements = measure_ensemble(matrices, signals)

    candidates = None
    if algorithm in ("jt", "gjt"):
        offsets = instance.get("candidate_offsets")
        if not offsets:
            raise ValueError("jt/gjt need candidate_offsets")
        candidates = CandidateSet.from_uniform_offsets(dictionary, offsets,
                                                       n_views)
    result = _decode_with(algorithm, measurements, dictionary, sparsity,
                          candidates)
    summary = {
        "algorithm": algorithm,
        "score": result.score,
        "rank_deficient": result.rank_deficient,
        "reference_support": [int(i) for i in result.reference_support],
        "supports": [[int(i) for i in sup] for sup in result.supports],
        "transforms": (None if result.transforms is None else
                       [t.spec() for t in result.transforms]),
        "coefficients": [[float(c) for c in coeffs]
                         for coeffs in result.coefficients],
    }
    return result, summary


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Validate the config and dispatch to the kind's runner."""
    validate_config(config)
    return _RUNNERS[config.kind](config)


def _full_gaussian_dictionary() -> DictionaryConfig:
    return DictionaryConfig(variant="gaussian_2d", width=32, height=32,
                            n_theta=7, sx_values=[2.0, 4.0],
                            sy_values=[0.5, 1.0], translations="odd")


def _desk_gaussian_dictionary() -> DictionaryConfig:
    return DictionaryConfig(variant="gaussian_2d", width=16, height=16,
                            n_theta=7, sx_values=[2.0, 4.0],
                            sy_values=[0.5, 1.0], translations="odd")


def _gabor_dictionary() -> DictionaryConfig:
    return DictionaryConfig(variant="gabor_1d", length=1000, t_start=1,
                            t_step=10, scales=[4.0, 8.0, 16.0],
                            omegas=[2.0, 4.0, 6.0, 8.0, 10.0],
                            include_negated=True)


_GRID_OFFSETS_2D = [[dx, dy] for dx in (-2, 0, 2) for dy in (-2, 0, 2)]


def _preset_transform_error() -> ExperimentConfig:
    # the 32x32 grid holds near-parallel atoms, so positive margins need
    # nearly equal coefficient magnitudes
    return ExperimentConfig(
        kind=KIND_TRANSFORM_ERROR, dictionary=_full_gaussian_dictionary(),
        sparsity=5, views=4, measurements=[40, 60, 80, 100, 120, 150],
        candidate_offsets=list(_GRID_OFFSETS_2D), trials=20,
        master_seed=70011, output_dir="results/transform-error-vs-m",
        coeff_range=[0.9, 1.1])


def _preset_transform_error_small() -> ExperimentConfig:
    return ExperimentConfig(
        kind=KIND_TRANSFORM_ERROR, dictionary=_desk_gaussian_dictionary(),
        sparsity=3, views=3, measurements=[20, 60],
        candidate_offsets=list(_GRID_OFFSETS_2D), trials=3,
        master_seed=70012, output_dir="results/transform-error-vs-m-small")


def _preset_recovery_vs_views() -> ExperimentConfig:
    return ExperimentConfig(
        kind=KIND_RECOVERY_VS_VIEWS, dictionary=_full_gaussian_dictionary(),
        sparsity=5, views=[2, 5, 10, 20], measurements=150,
        candidate_offsets=list(_GRID_OFFSETS_2D), trials=10,
        master_seed=70021, output_dir="results/recovery-vs-views",
        coeff_range=[0.9, 1.1])


def _preset_recovery_vs_views_desk() -> ExperimentConfig:
    return ExperimentConfig(
        kind=KIND_RECOVERY_VS_VIEWS, dictionary=_desk_gaussian_dictionary(),
        sparsity=3, views=[2, 5, 10, 20], measurements=60,
        candidate_offsets=list(_GRID_OFFSETS_2D), trials=10,
        master_seed=70022, output_dir="results/recovery-vs-views-desk")


def _preset_two_view_1d() -> ExperimentConfig:
    # the 1D dictionary pairs every atom with its negation, which caps the
    # thresholding margin at zero, so the decodability checks are waived
    return ExperimentConfig(
        kind=KIND_TWO_VIEW_1D, dictionary=_gabor_dictionary(),
        sparsity=50, views=2, measurements=150,
        candidate_offsets=[-10, 0, 10], trials=200, master_seed=70031,
        output_dir="results/two-view-1d", require_margin=False,
        require_positivity=False)


PRESETS = {
    "transform-error-vs-m": (
        _preset_transform_error,
        "Transform error and recovery vs measurements; 32x32 dictionary, "
        "4 views, 729 candidates, 20 trials"),
    "transform-error-vs-m-small": (
        _preset_transform_error_small,
        "Minutes-free smoke version of the measurement sweep on a 16x16 "
        "dictionary"),
    "recovery-vs-views": (
        _preset_recovery_vs_views,
        "Recovery rate vs number of views at M=150; 32x32 dictionary, "
        "greedy joint decoder against the independent baseline"),
    "recovery-vs-views-desk": (
        _preset_recovery_vs_views_desk,
        "Desk-scale view sweep (16x16 dictionary, M=60) showing the joint "
        "decoder pulling ahead of the baseline"),
    "two-view-1d": (
        _preset_two_view_1d,
        "Two-view 1D benchmark: S=50 modulated-Gaussian signals, 3 shift "
        "candidates, MSE of joint vs independent decoding"),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def get_preset(name: str) -> ExperimentConfig:
    """Fresh config instance for a bundled preset name."""
    try:
        factory, _ = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; "
                         f"available: {', '.join(PRESETS)}") from None
    return factory()


def describe_presets() -> list[tuple[str, str]]:
    return [(name, description) for name, (_, description) in PRESETS.items()]
