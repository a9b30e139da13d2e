"""Named experiment presets, Monte-Carlo sweeps and CSV/SVG emission.

Every named preset pins its rates; :func:`load_config` checks the branch
bandwidth arithmetic of each arm before anything runs.  Stochastic work is
split into ``(point, repetition)`` tasks, each with its own generator seeded
from :func:`point_seed`, so results do not depend on how many worker threads
evaluate them (``ORTHODAC_THREADS``).
"""
from __future__ import annotations

import contextlib
import csv
import dataclasses
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .dsp import SampledWaveform, TimeGrid, ideal_reconstruct
from .errors import InvalidInputError, InvalidSpecError, NumericFailure
from .impairments import RF_JITTER_DEFAULT, ImpairmentSpec, quantize
from .link import LinkConfig, run_link
from .metrics import MetricsReport, evm_pct, link_collapsed, qfactor_bpsk, rms_error_pct, sinad_enob
from .ortho import BranchPlan, direct_dac, orthogonal_dac
from .waveforms import map_symbols, nyquist_shape, prbs_bits, tone_samples

__all__ = [
    "SCENARIOS",
    "SWEEP_PARAMETERS",
    "ScenarioConfig",
    "ScenarioResult",
    "load_config",
    "point_seed",
    "thread_count",
    "run_scenario",
    "sweep",
]

log = logging.getLogger(__name__)

SWEEP_PARAMETERS = ("dac_jitter_rms", "osnr_db")
_DEFAULT_JITTER_PS = (0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.2, 3.5)
_DEFAULT_OSNR_DB = (20.0, 25.0, 30.0, 35.0, 40.0)


@dataclass(frozen=True)
class _Preset:
    kind: str  # waveform | enob_sweep | link_sweep | fig8
    full_rate: float
    signal: str
    arms: tuple  # branch counts; None is the direct DAC
    branch_bandwidth: dict  # N -> expected Hz
    tone_frequency: Optional[float] = None
    dac_jitter_rms: float = 0.0
    rf_jitter_rms: float = 0.0
    osnr_db: Optional[float] = None
    sweep_param: Optional[str] = None
    sweep_values: tuple = ()


def _waveform(n, rate, signal, bw, tone=None):
    return _Preset("waveform", rate, signal, (None, n), {n: bw}, tone)


SCENARIOS = {
    "fig3_sine": _waveform(3, 60e9, "tone", 10e9, 30e9),
    "fig3_bpsk": _waveform(3, 60e9, "bpsk", 10e9),
    "fig3_qam16": _waveform(3, 120e9, "qam16", 20e9),
    "fig4_sine": _waveform(5, 60e9, "tone", 6e9, 30e9),
    "fig4_bpsk": _waveform(5, 60e9, "bpsk", 6e9),
    "fig4_qam16": _waveform(5, 120e9, "qam16", 12e9),
    "fig5_enob_sweep": _Preset(
        "enob_sweep", 60e9, "tone", (None, 3, 5), {3: 10e9, 5: 6e9}, 30e9,
        rf_jitter_rms=RF_JITTER_DEFAULT, sweep_param="dac_jitter_rms",
        sweep_values=tuple(v * 1e-12 for v in _DEFAULT_JITTER_PS),
    ),
    "fig7a_q_vs_jitter": _Preset(
        "link_sweep", 60e9, "bpsk", (None, 3, 5), {3: 10e9, 5: 6e9},
        rf_jitter_rms=RF_JITTER_DEFAULT, osnr_db=40.0, sweep_param="dac_jitter_rms",
        sweep_values=tuple(v * 1e-12 for v in _DEFAULT_JITTER_PS),
    ),
    "fig7b_q_vs_osnr": _Preset(
        "link_sweep", 60e9, "bpsk", (None, 3, 5), {3: 10e9, 5: 6e9},
        dac_jitter_rms=100e-15, rf_jitter_rms=RF_JITTER_DEFAULT, osnr_db=40.0,
        sweep_param="osnr_db", sweep_values=_DEFAULT_OSNR_DB,
    ),
    # 24 GS/s covers all three: a 10 GHz tone, 24 Gb/s Nyquist BPSK and 12 Gb/s NRZ BPSK.
    "fig8_waveforms": _Preset("fig8", 24e9, "fig8", (None, 3, 5), {3: 4e9, 5: 2.4e9}),
    "custom": _Preset("waveform", 0.0, "tone", (), {}),
}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_name: str
    n_branches: Optional[int] = None
    full_rate: Optional[float] = None
    oversampling: int = 8
    samples: int = 65536
    impairments: ImpairmentSpec = field(default_factory=ImpairmentSpec)
    sweep_param: Optional[str] = None
    sweep_values: Optional[tuple] = None
    seeds: int = 30
    output_dir: str = "orthodac_out"
    seed: int = 1
    periodic: bool = True
    svg: bool = False
    signal: Optional[str] = None
    tone_frequency: Optional[float] = None
    drive_swing: float = 0.8
    prbs_order: int = 7
    waveform_points: int = 2048

    @property
    def preset(self) -> _Preset:
        return SCENARIOS[self.scenario_name]

    @property
    def arms(self) -> tuple:
        if self.scenario_name == "custom":
            return (None, self.n_branches)
        return self.preset.arms

    @property
    def n_full(self) -> int:
        """Full-rate sample count: output samples / oversampling, rounded to a whole signal period."""
        unit = 15 * _signal_period(self)
        n = (self.samples // self.oversampling) // unit * unit
        return n

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["sweep_values"] = list(self.sweep_values) if self.sweep_values is not None else None
        return json.dumps(d, indent=2, sort_keys=True)


def _signal_period(cfg: ScenarioConfig) -> int:
    """Full-rate samples per period of a tone signal (1 for data)."""
    if cfg.signal in ("tone", "fig8"):
        f = cfg.tone_frequency if cfg.signal == "tone" else 10e9
        frac = (f / cfg.full_rate)
        for q in range(1, 4097):
            if abs(frac * q - round(frac * q)) < 1e-9:
                return q
        raise InvalidInputError(f"tone {f:g} Hz has no short period at {cfg.full_rate:g} Hz; pick a rational ratio")
    return 1


def load_config(scenario_name: str, config_file: Optional[str] = None, **overrides) -> ScenarioConfig:
    """Build a validated config: preset defaults, then the JSON file, then ``overrides`` (``None`` skipped)."""
    if scenario_name not in SCENARIOS:
        raise InvalidInputError(f"unknown scenario {scenario_name!r}; choose from {', '.join(SCENARIOS)}")
    p = SCENARIOS[scenario_name]
    values: dict = {}
    if scenario_name != "custom":
        values.update(
            full_rate=p.full_rate,
            signal=p.signal,
            tone_frequency=p.tone_frequency,
            n_branches=p.arms[-1] if p.kind == "waveform" else None,
            sweep_param=p.sweep_param,
            sweep_values=p.sweep_values or None,
        )
        imp = dict(dac_jitter_rms=p.dac_jitter_rms, rf_jitter_rms=p.rf_jitter_rms, osnr_db=p.osnr_db)
    else:
        imp = {}
    if config_file is not None:
        try:
            raw = json.loads(Path(config_file).read_text())
        except OSError:
            raise
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"config file {config_file} is not valid JSON: {e}") from e
        if not isinstance(raw, dict):
            raise InvalidInputError("config file must hold a JSON object")
        raw.pop("scenario_name", None)
        imp.update(raw.pop("impairments", None) or {})
        values.update(raw)
    imp.update(overrides.pop("impairments", None) or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = set(values) - known
    if unknown:
        raise InvalidInputError(f"unknown config fields: {', '.join(sorted(unknown))}")
    try:
        spec = ImpairmentSpec(**imp)
    except TypeError as e:
        raise InvalidInputError(f"bad impairments block: {e}") from e
    if values.get("sweep_values") is not None:
        values["sweep_values"] = tuple(float(v) for v in values["sweep_values"])
    cfg = ScenarioConfig(scenario_name=scenario_name, impairments=spec, **values)
    _validate(cfg)
    return cfg


def _validate(cfg: ScenarioConfig) -> None:
    p = cfg.preset
    name = cfg.scenario_name
    if name == "custom":
        if cfg.n_branches is None or cfg.full_rate is None:
            raise InvalidSpecError("custom scenarios need n_branches and full_rate")
        if cfg.signal not in ("tone", "bpsk", "qam16"):
            raise InvalidSpecError("custom signal must be tone, bpsk or qam16")
        if cfg.signal == "tone" and not (cfg.tone_frequency and 0 < cfg.tone_frequency <= cfg.full_rate / 2):
            raise InvalidSpecError("custom tone needs 0 < tone_frequency <= full_rate / 2")
        BranchPlan(cfg.n_branches, cfg.full_rate)
    else:
        if cfg.full_rate != p.full_rate:
            raise InvalidSpecError(f"{name} fixes full_rate at {p.full_rate:g} Hz")
        if p.kind == "waveform" and cfg.n_branches != p.arms[-1]:
            raise InvalidSpecError(f"{name} fixes n_branches at {p.arms[-1]}")
        if p.kind != "waveform" and cfg.n_branches is not None:
            raise InvalidSpecError(f"{name} always compares the direct, N=3 and N=5 arms")
        for n, bw in p.branch_bandwidth.items():
            got = BranchPlan(n, cfg.full_rate).branch_bandwidth
            if abs(got - bw) > 1e-6 * bw:
                raise InvalidSpecError(f"{name}: N={n} branch bandwidth {got:g} Hz, preset expects {bw:g} Hz")
    if cfg.oversampling < 2:
        raise InvalidInputError("oversampling must be >= 2")
    if cfg.seeds < 1:
        raise InvalidInputError("seeds must be >= 1")
    if cfg.seed < 0:
        raise InvalidInputError("seed must be non-negative")
    if not cfg.drive_swing > 0:
        raise InvalidInputError("drive_swing must be positive")
    if cfg.waveform_points < 0:
        raise InvalidInputError("waveform_points must be >= 0")
    if cfg.n_full < 2 * 64 * 5:
        raise InvalidInputError(f"{cfg.samples} output samples is too few; need at least {2 * 64 * 5 * 15 * cfg.oversampling}")
    if cfg.sweep_param is not None and cfg.sweep_param not in SWEEP_PARAMETERS:
        raise InvalidInputError(f"unknown sweep parameter {cfg.sweep_param!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    if cfg.sweep_values is not None:
        _check_values(cfg.sweep_values)


def _check_values(values: Sequence[float]) -> None:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InvalidInputError("sweep needs at least one value")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("sweep values must be finite")
    d = np.diff(v)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise InvalidInputError("sweep values must be strictly monotone")


def point_seed(base_seed: int, point_index: int, repetition: int) -> int:
    return base_seed * 1_000_000 + point_index * 1_000 + repetition


def thread_count() -> int:
    raw = os.environ.get("ORTHODAC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInputError(f"ORTHODAC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidInputError(f"ORTHODAC_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(fn: Callable, tasks: list) -> list:
    """Evaluate ``fn`` over ``tasks``; results come back in task order whatever the thread count."""
    n = min(thread_count(), len(tasks))
    if n <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, tasks))


@contextlib.contextmanager
def _stage(name: str):
    try:
        with np.errstate(invalid="raise", divide="ignore", over="raise"):
            yield
    except (FloatingPointError, InvalidInputError) as e:
        raise NumericFailure(name, str(e)) from e


def _arm_name(n) -> str:
    return "direct" if n is None else f"n{n}"


def _arm_rng(seed: int, arm: Optional[int], stream: int = 0) -> np.random.Generator:
    # Each arm (and the optical-noise draw) gets its own stream of one point seed.
    return np.random.default_rng([seed, 0 if arm is None else arm, stream])


# ---------------------------------------------------------------------------
# signal sources
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Source:
    quadratures: tuple  # one or two full-rate sample arrays
    stream: object = None  # SymbolStream for data signals
    fundamental: Optional[float] = None


def _source(cfg: ScenarioConfig, signal: Optional[str] = None) -> _Source:
    n = cfg.n_full
    sig = signal or cfg.signal
    if sig == "tone":
        return _Source((tone_samples(cfg.tone_frequency, cfg.full_rate, n),), fundamental=cfg.tone_frequency)
    if sig == "tone10":
        return _Source((tone_samples(10e9, cfg.full_rate, n),), fundamental=10e9)
    if sig in ("bpsk", "nyquist24"):
        st = map_symbols(prbs_bits(cfg.prbs_order, n, 1), "BPSK", cfg.full_rate)
        return _Source((st.amplitudes("I"),), st)
    if sig == "nrz12":
        # Two full-rate samples per symbol: a 12 GBd hold sampled at 24 GS/s.
        st = map_symbols(prbs_bits(cfg.prbs_order, n // 2, 1), "BPSK", cfg.full_rate / 2)
        return _Source((np.repeat(st.amplitudes("I"), 2),), st)
    if sig == "qam16":
        st = map_symbols(prbs_bits(cfg.prbs_order, 4 * n, 1), "QAM16", cfg.full_rate)
        return _Source((st.amplitudes("I"), st.amplitudes("Q")), st)
    raise InvalidInputError(f"unknown signal {sig!r}")


def _grid(cfg: ScenarioConfig) -> TimeGrid:
    return TimeGrid.oversampled(cfg.full_rate, cfg.n_full, cfg.oversampling)


def _render(x, arm, cfg: ScenarioConfig, grid: TimeGrid, imp: ImpairmentSpec, rng) -> SampledWaveform:
    if imp.quantizer_bits is not None:
        peak = float(np.max(np.abs(x)))
        x = quantize(SampledWaveform(x, cfg.full_rate), imp.quantizer_bits, peak).samples
    if arm is None:
        return direct_dac(x, cfg.full_rate, grid, imp.dac_jitter_rms, rng, cfg.periodic)
    return orthogonal_dac(x, BranchPlan(arm, cfg.full_rate), grid, imp, rng, cfg.periodic).output


# ---------------------------------------------------------------------------
# results and writers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    files: tuple
    metrics: dict  # arm name -> MetricsReport (single-point scenarios)
    table: Optional[list] = None  # sweep rows, header first


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".10g")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([c if isinstance(c, str) else _fmt(c) for c in r])


METRIC_COLUMNS = ("arm", "n_branches", "rms_error_pct", "sinad_db", "enob", "q_db", "evm_pct")


def _metrics_rows(metrics: dict):
    for arm, rep in metrics.items():
        d = rep.as_dict()
        tail = arm.rsplit("_", 1)[-1]
        n = "" if tail == "direct" else tail[1:]
        yield [arm, n, d["rms_error_pct"], d["sinad_db"], d["enob"], d["q_db"], d["evm_pct"]]


def _prepare_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise PermissionError(f"output directory {out} is not writable")
    return out


def _display_window(n_points: int, cfg: ScenarioConfig) -> tuple:
    k = cfg.waveform_points or n_points
    k = min(k, n_points)
    start = (n_points - k) // 2
    return start, start + k


# ---------------------------------------------------------------------------
# single-realisation waveform scenarios
# ---------------------------------------------------------------------------

def _run_waveform(cfg: ScenarioConfig, signal: Optional[str] = None, prefix: str = "") -> tuple:
    grid = _grid(cfg)
    src = _source(cfg, signal)
    imp = cfg.impairments
    seed = point_seed(cfg.seed, 0, 0)
    # Quadrature reference traces: direct band-limited reconstruction of the samples.
    with _stage("reference"):
        refs = [ideal_reconstruct(x, cfg.full_rate, grid, cfg.periodic) for x in src.quadratures]
    guard = 0 if cfg.periodic else 64 * max(a or 1 for a in cfg.arms) * cfg.oversampling
    traces, metrics = {}, {}
    for arm in cfg.arms:
        rng = _arm_rng(seed, arm)
        with _stage(f"{_arm_name(arm)} synthesis"):
            outs = [_render(x, arm, cfg, grid, imp, rng) for x in src.quadratures]
        with _stage(f"{_arm_name(arm)} metrics"):
            err = np.sqrt(sum(rms_error_pct(o, r, guard) ** 2 * np.mean(r.samples ** 2) for o, r in zip(outs, refs))
                          / sum(np.mean(r.samples ** 2) for r in refs))
            sinad = evm = None
            if src.fundamental is not None and cfg.periodic:
                sinad = sinad_enob(outs[0], src.fundamental)[0]
            if len(outs) == 2:
                step = cfg.oversampling
                sl = slice(None) if cfg.periodic else slice(64 * 5, -64 * 5)
                rx = outs[0].samples[::step] + 1j * outs[1].samples[::step]
                evm = evm_pct(rx[sl], src.stream.symbols[sl])
        traces[_arm_name(arm)] = outs
        metrics[prefix + _arm_name(arm)] = MetricsReport(rms_error_pct=float(err), sinad_db=sinad, evm_pct=evm)
    return grid, traces, metrics


def _waveform_files(out: Path, grid: TimeGrid, traces: dict, cfg: ScenarioConfig, prefix: str = "") -> list:
    a, b = _display_window(grid.n_points, cfg)
    t = grid.times[a:b]
    files = []
    for arm, outs in traces.items():
        path = out / f"{prefix}waveform_{arm}.csv"
        if len(outs) == 2:
            _write_csv(path, ("t_s", "value", "value_q"), zip(t, outs[0].samples[a:b], outs[1].samples[a:b]))
        else:
            _write_csv(path, ("t_s", "value"), zip(t, outs[0].samples[a:b]))
        files.append(path)
    return files


def _scenario_waveform(cfg: ScenarioConfig) -> ScenarioResult:
    grid, traces, metrics = _run_waveform(cfg)
    out = _prepare_dir(cfg.output_dir)
    files = _waveform_files(out, grid, traces, cfg)
    files.append(out / "metrics.csv")
    _write_csv(files[-1], METRIC_COLUMNS, _metrics_rows(metrics))
    if cfg.svg:
        from . import plots

        files += plots.waveform_svgs(out, cfg, files)
    return ScenarioResult(cfg, tuple(files), metrics)


_FIG8_PANELS = (("a", "tone10"), ("b", "nyquist24"), ("c", "nrz12"))


def _scenario_fig8(cfg: ScenarioConfig) -> ScenarioResult:
    results = [(panel, *_run_waveform(cfg, sig, f"{panel}_")) for panel, sig in _FIG8_PANELS]
    out = _prepare_dir(cfg.output_dir)
    files, metrics = [], {}
    for panel, grid, traces, m in results:
        files += _waveform_files(out, grid, traces, cfg, f"fig8{panel}_")
        metrics.update(m)
    files.append(out / "metrics.csv")
    _write_csv(files[-1], METRIC_COLUMNS, _metrics_rows(metrics))
    if cfg.svg:
        from . import plots

        files += plots.waveform_svgs(out, cfg, files)
    return ScenarioResult(cfg, tuple(files), metrics)


# ---------------------------------------------------------------------------
# Monte-Carlo sweeps
# ---------------------------------------------------------------------------

def _point_impairments(cfg: ScenarioConfig, param: str, value: float) -> ImpairmentSpec:
    return dataclasses.replace(cfg.impairments, **{param: float(value)})


def _enob_task(cfg: ScenarioConfig, src: _Source, grid: TimeGrid, param: str, values):
    def run(task):
        i, rep = task
        imp = _point_impairments(cfg, param, values[i])
        seed = point_seed(cfg.seed, i, rep)
        res = []
        for arm in cfg.arms:
            with _stage(f"{_arm_name(arm)} synthesis"):
                w = _render(src.quadratures[0], arm, cfg, grid, imp, _arm_rng(seed, arm))
            with _stage(f"{_arm_name(arm)} sinad"):
                res.append(sinad_enob(w, src.fundamental)[0])
        return res

    return run


def _link_task(cfg: ScenarioConfig, src: _Source, grid: TimeGrid, param: str, values):
    with _stage("reference"):
        ideal = nyquist_shape(src.stream, "I", grid, periodic=cfg.periodic)
    # Drive scaling: the jitter-free waveform's peak maps to drive_swing * vpi.
    link0 = LinkConfig()
    scale = cfg.drive_swing * link0.vpi / float(np.max(np.abs(ideal.samples)))

    def run(task):
        i, rep = task
        imp = _point_impairments(cfg, param, values[i])
        lcfg = dataclasses.replace(link0, osnr_db=imp.osnr_db, reference_bandwidth=imp.reference_bandwidth)
        seed = point_seed(cfg.seed, i, rep)
        res = []
        for arm in cfg.arms:
            with _stage(f"{_arm_name(arm)} synthesis"):
                w = _render(src.quadratures[0], arm, cfg, grid, imp, _arm_rng(seed, arm))
            with _stage(f"{_arm_name(arm)} link"):
                r = run_link(w.with_samples(w.samples * scale), src.stream, lcfg, _arm_rng(seed, arm, 1))
            with _stage(f"{_arm_name(arm)} q-factor"):
                res.append(qfactor_bpsk(r.decisions, r.labels))
        return res

    return run


def _param_column(param: str) -> str:
    return "jitter_ps" if param == "dac_jitter_rms" else "osnr_db"


def _param_display(param: str, v: float) -> float:
    return v * 1e12 if param == "dac_jitter_rms" else v


def _aggregate(per_task: list, n_points: int, seeds: int) -> tuple:
    a = np.asarray(per_task, dtype=float).reshape(n_points, seeds, -1)
    with np.errstate(invalid="ignore"):
        mean = a.mean(axis=1)
        std = a.std(axis=1, ddof=1) if seeds > 1 else np.zeros_like(mean)
    return mean, std


def sweep(config: ScenarioConfig, parameter: Optional[str] = None, values: Optional[Sequence[float]] = None) -> ScenarioResult:
    """Monte-Carlo sweep of ``parameter`` over ``values`` for the direct, N=3 and N=5 arms.

    Jitter values are in seconds.  Each cell of the written CSV is a mean over
    ``config.seeds`` realisations, with a companion ``_std`` column.
    """
    cfg = config
    kind = cfg.preset.kind
    if kind not in ("enob_sweep", "link_sweep"):
        raise InvalidInputError(f"{cfg.scenario_name} is not a sweep scenario")
    param = parameter or cfg.sweep_param
    if param not in SWEEP_PARAMETERS:
        raise InvalidInputError(f"unknown sweep parameter {param!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    if kind == "enob_sweep" and param != "dac_jitter_rms":
        raise InvalidInputError("the ENOB sweep has no optical link; sweep dac_jitter_rms")
    vals = tuple(float(v) for v in (values if values is not None else cfg.sweep_values or ()))
    _check_values(vals)
    if param == "dac_jitter_rms" and min(vals) < 0:
        raise InvalidInputError("jitter values must be non-negative")

    grid = _grid(cfg)
    src = _source(cfg)
    make = _enob_task if kind == "enob_sweep" else _link_task
    run = make(cfg, src, grid, param, vals)
    tasks = [(i, rep) for i in range(len(vals)) for rep in range(cfg.seeds)]
    log.info("%s: %d points x %d seeds x %d arms", cfg.scenario_name, len(vals), cfg.seeds, len(cfg.arms))
    mean, std = _aggregate(_map(run, tasks), len(vals), cfg.seeds)

    arms = [_arm_name(a) for a in cfg.arms]
    col = _param_column(param)
    if kind == "enob_sweep":
        metric_cols = [f"sinad_db_{a}" for a in arms] + [f"enob_{a}" for a in arms]
        enob = (mean - 1.76) / 6.02
        data = np.concatenate([mean, enob], axis=1)
        spread = np.concatenate([std, std / 6.02], axis=1)
    else:
        metric_cols = [f"q_db_{a}" for a in arms]
        data, spread = mean, std
    header = [col] + metric_cols + [f"{c}_std" for c in metric_cols]
    rows = [[_param_display(param, v)] + list(data[i]) + list(spread[i]) for i, v in enumerate(vals)]
    if kind == "link_sweep":
        header += [f"collapsed_{a}" for a in arms]
        for i, r in enumerate(rows):
            r += [link_collapsed(q) for q in mean[i]]

    out = _prepare_dir(cfg.output_dir)
    path = out / f"{cfg.scenario_name}.csv"
    _write_csv(path, header, rows)
    files = [path]
    if cfg.svg:
        from . import plots

        files += plots.sweep_svg(out, cfg.scenario_name, header, rows)
    table = [header] + rows
    return ScenarioResult(cfg, tuple(files), {}, table)


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Run a preset (or custom) scenario and write its CSV files into ``config.output_dir``."""
    _validate(config)
    kind = config.preset.kind
    if kind == "waveform":
        return _scenario_waveform(config)
    if kind == "fig8":
        return _scenario_fig8(config)
    return sweep(config)
