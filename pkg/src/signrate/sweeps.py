"""Rate sweeps over pulse shape, signaling ratio, SNR, and alphabet.

A sweep is a full factorial grid; every cell is one :class:`RunConfig`
evaluated by :func:`rates.rate_for_config`.  Results live in a CSV file
whose first line echoes the canonical grid configuration, so a rerun can
tell whether an existing file belongs to the same grid: matching files
are resumed (only missing cells are computed), mismatching files raise
:class:`GridMismatchError` instead of being overwritten.

Cell order is fixed (alphabet, oversampling, shape, ratio, SNR, outer to
inner) and files are always rewritten in that order, so two complete
runs of the same grid produce byte-identical files regardless of worker
count or how often they were interrupted.

On top of a finished grid, :func:`find_optimum` picks the
bandwidth-normalized best (shape, ratio) cell for one alphabet, and
:func:`region_compare` maps which alphabet wins where.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .channel import component_alphabet
from .config import RunConfig
from .errors import GridMismatchError
from .rates import RateResult, rate_for_config

__all__ = [
    "Optimum",
    "RegionMap",
    "RegionRow",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "default_grid",
    "find_optimum",
    "load_sweep_csv",
    "merge_sweeps",
    "region_compare",
    "run_sweep",
    "sweep_csv_text",
    "write_region_csv",
]

SWEEP_HEADER = "alphabet,M,pulse,beta,ratio,snr_db,rate_bpcu,rate_3db,stderr,samples,seed"
REGION_HEADER = "beta,ratio,winner,margin,ftn_flag"


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """Factorial grid of rate evaluation points.

    ``beta`` holds the pulse shape axis (roll-off for the raised-cosine
    family, 3 dB bandwidth for the Gaussian family, matching the CSV
    column of the same name).
    """

    family: str
    beta: tuple
    ratio: tuple
    snr_db: tuple
    oversampling: tuple
    alphabets: tuple
    span_symbols: int = 9
    estimator: str = "mc"
    samples: int = 1000000
    seed: int = 0
    schema_version: int = 1

    def __post_init__(self):
        for name in ("beta", "ratio", "snr_db", "oversampling", "alphabets"):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"axis {name!r} must not be empty")
            if len(set(values)) != len(values):
                raise ValueError(f"axis {name!r} has duplicate values")
            object.__setattr__(self, name, values)
        for alphabet in self.alphabets:
            component_alphabet(alphabet)
        # One probe cell per axis extreme exercises the underlying
        # validation (pulse family, estimator name, budgets).
        next(iter(self.cells()))

    def cells(self):
        """All cell configurations, in the canonical order."""
        for alphabet in self.alphabets:
            for m in self.oversampling:
                for shape in self.beta:
                    for ratio in self.ratio:
                        for snr in self.snr_db:
                            yield RunConfig(
                                family=self.family, shape=shape,
                                signaling_ratio=ratio, oversampling=m,
                                alphabet=alphabet, snr_db=snr,
                                span_symbols=self.span_symbols,
                                estimator=self.estimator,
                                samples=self.samples, seed=self.seed)

    def n_cells(self) -> int:
        return (len(self.alphabets) * len(self.oversampling) * len(self.beta)
                * len(self.ratio) * len(self.snr_db))

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        fields = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - fields
        if unknown:
            raise ValueError(f"unknown sweep keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for name in ("beta", "ratio", "snr_db", "oversampling", "alphabets"):
            out[name] = list(out[name])
        return out

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))

    def fingerprint(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def default_grid(*, estimator: str = "mc", samples: int = 1000000,
                 seed: int = 0, oversampling=(1, 4),
                 snr_db=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)) -> SweepConfig:
    """The standard raised-cosine study grid."""
    return SweepConfig(
        family="rrc",
        beta=tuple(round(i / 10, 12) for i in range(11)),
        ratio=tuple(round(1 + i / 10, 12) for i in range(11)),
        snr_db=tuple(float(s) for s in snr_db),
        oversampling=tuple(oversampling),
        alphabets=("4qam", "16qam"),
        estimator=estimator, samples=samples, seed=seed)


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """One evaluated grid cell, as stored in the sweep CSV."""

    alphabet: str
    oversampling: int
    family: str
    beta: float
    ratio: float
    snr_db: float
    rate_bpcu: float
    rate_3db: float
    stderr: float
    samples: int
    seed: int

    @classmethod
    def from_result(cls, res: RateResult) -> "SweepRow":
        cfg = res.config
        return cls(alphabet=cfg.alphabet, oversampling=cfg.oversampling,
                   family=cfg.family, beta=cfg.shape,
                   ratio=cfg.signaling_ratio, snr_db=cfg.snr_db,
                   rate_bpcu=res.rate_bpcu, rate_3db=res.rate_3db,
                   stderr=res.stderr, samples=res.samples, seed=cfg.seed)

    def key(self) -> tuple:
        return (self.alphabet, self.oversampling, self.beta, self.ratio,
                self.snr_db)

    def to_csv_line(self) -> str:
        return ",".join([
            self.alphabet, str(self.oversampling), self.family,
            repr(self.beta), repr(self.ratio), repr(self.snr_db),
            repr(self.rate_bpcu), repr(self.rate_3db), repr(self.stderr),
            str(self.samples), str(self.seed)])

    @classmethod
    def from_csv_line(cls, line: str) -> "SweepRow":
        parts = line.split(",")
        if len(parts) != 11:
            raise GridMismatchError(f"malformed sweep row: {line!r}")
        return cls(alphabet=parts[0], oversampling=int(parts[1]),
                   family=parts[2], beta=float(parts[3]),
                   ratio=float(parts[4]), snr_db=float(parts[5]),
                   rate_bpcu=float(parts[6]), rate_3db=float(parts[7]),
                   stderr=float(parts[8]), samples=int(parts[9]),
                   seed=int(parts[10]))


@dataclasses.dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    rows: tuple

    def by_key(self) -> dict:
        return {row.key(): row for row in self.rows}


def _cell_key(cfg: RunConfig) -> tuple:
    return (cfg.alphabet, cfg.oversampling, cfg.shape, cfg.signaling_ratio,
            cfg.snr_db)


def sweep_csv_text(result: SweepResult) -> str:
    """Render rows in canonical cell order with the config echo line."""
    by_key = result.by_key()
    lines = [f"# config: {result.config.canonical_json()}", SWEEP_HEADER]
    for cfg in result.config.cells():
        row = by_key.get(_cell_key(cfg))
        if row is not None:
            lines.append(row.to_csv_line())
    return "\n".join(lines) + "\n"


def load_sweep_csv(path) -> SweepResult:
    """Read a sweep file, verifying the config echo and row keys."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# config: "):
        raise GridMismatchError(f"{path}: missing sweep config line")
    config = SweepConfig.from_dict(json.loads(lines[0][len("# config: "):]))
    if len(lines) < 2 or lines[1] != SWEEP_HEADER:
        raise GridMismatchError(f"{path}: missing sweep header")
    rows = [SweepRow.from_csv_line(ln) for ln in lines[2:]]
    valid = {_cell_key(cfg) for cfg in config.cells()}
    seen = set()
    for row in rows:
        if row.key() not in valid:
            raise GridMismatchError(
                f"{path}: row {row.key()} is not a cell of the stored grid")
        if row.key() in seen:
            raise GridMismatchError(f"{path}: duplicate row {row.key()}")
        seen.add(row.key())
    return SweepResult(config=config, rows=tuple(rows))


def run_sweep(config: SweepConfig, out_path, *, workers: int = 1,
              flush_every: int = 1, progress=None) -> SweepResult:
    """Evaluate a grid, resuming from ``out_path`` when it already exists.

    An existing file must echo the same canonical configuration;
    anything else raises :class:`GridMismatchError` rather than
    overwriting foreign results.  Completed cells are reused verbatim,
    missing ones are evaluated (``workers`` cells in parallel), and the
    file is rewritten in canonical order after every ``flush_every``
    completions, so an interrupted run loses at most that many cells.
    ``progress`` is called after every newly computed cell with
    (completed cells, total cells, cell key).
    """
    out_path = Path(out_path)
    done: dict = {}
    if out_path.exists():
        previous = load_sweep_csv(out_path)
        if previous.config != config:
            raise GridMismatchError(
                f"{out_path}: existing sweep was built from a different "
                f"grid (stored {previous.config.fingerprint()}, "
                f"requested {config.fingerprint()})")
        done = previous.by_key()

    todo = [cfg for cfg in config.cells() if _cell_key(cfg) not in done]
    total = config.n_cells()
    lock = threading.Lock()
    pending = 0

    def flush():
        result = SweepResult(config=config, rows=tuple(done.values()))
        out_path.write_text(sweep_csv_text(result))

    def finish(cfg: RunConfig, res: RateResult):
        nonlocal pending
        with lock:
            done[_cell_key(cfg)] = SweepRow.from_result(res)
            pending += 1
            if pending >= flush_every:
                pending = 0
                flush()
            if progress is not None:
                progress(len(done), total, _cell_key(cfg))

    if workers == 1:
        for cfg in todo:
            finish(cfg, rate_for_config(cfg))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(cfg, pool.submit(rate_for_config, cfg))
                       for cfg in todo]
            for cfg, fut in futures:
                finish(cfg, fut.result())
    flush()
    return load_sweep_csv(out_path)


def merge_sweeps(a: SweepResult, b: SweepResult) -> SweepResult:
    """Join two sweeps that differ only in their alphabet axis.

    Every other grid parameter must match exactly and the alphabet sets
    must be disjoint; anything else raises :class:`GridMismatchError`.
    """
    cfg_a, cfg_b = a.config, b.config
    base_a = dataclasses.replace(cfg_a, alphabets=("4qam",))
    base_b = dataclasses.replace(cfg_b, alphabets=("4qam",))
    if base_a != base_b:
        raise GridMismatchError(
            f"sweeps describe different grids ({cfg_a.fingerprint()} vs "
            f"{cfg_b.fingerprint()})")
    overlap = set(cfg_a.alphabets) & set(cfg_b.alphabets)
    if overlap:
        raise GridMismatchError(
            f"sweeps share alphabets {sorted(overlap)}; nothing to join")
    merged = dataclasses.replace(
        cfg_a, alphabets=cfg_a.alphabets + cfg_b.alphabets)
    return SweepResult(config=merged, rows=a.rows + b.rows)


def _require_complete(result: SweepResult, cells) -> None:
    have = set(result.by_key())
    missing = [key for key in cells if key not in have]
    if missing:
        shown = ", ".join(map(str, missing[:5]))
        more = "" if len(missing) <= 5 else f" and {len(missing) - 5} more"
        raise GridMismatchError(
            f"sweep is missing {len(missing)} cells: {shown}{more}")


@dataclasses.dataclass(frozen=True)
class Optimum:
    """Best bandwidth-normalized cell of one grid slice."""

    alphabet: str
    oversampling: int
    snr_db: float
    beta: float
    ratio: float
    rate_bpcu: float
    rate_3db: float
    stderr: float


def find_optimum(result: SweepResult, *, alphabet: str, oversampling: int,
                 snr_db: float) -> Optimum:
    """Pick the (shape, ratio) cell maximizing the normalized rate.

    The slice must be complete.  Exact rate ties resolve toward the
    smaller ratio, then the smaller shape value, so the reported optimum
    never claims more aggressive signaling than necessary.
    """
    cfg = result.config
    if alphabet not in cfg.alphabets or oversampling not in cfg.oversampling \
            or snr_db not in cfg.snr_db:
        raise GridMismatchError(
            f"slice ({alphabet}, M={oversampling}, {snr_db} dB) is not part "
            f"of the grid")
    cells = [(alphabet, oversampling, b, r, snr_db)
             for b in cfg.beta for r in cfg.ratio]
    _require_complete(result, cells)
    by_key = result.by_key()
    rows = [by_key[key] for key in cells]
    best = min(rows, key=lambda row: (-row.rate_3db, row.ratio, row.beta))
    return Optimum(alphabet=alphabet, oversampling=oversampling,
                   snr_db=snr_db, beta=best.beta, ratio=best.ratio,
                   rate_bpcu=best.rate_bpcu, rate_3db=best.rate_3db,
                   stderr=best.stderr)


@dataclasses.dataclass(frozen=True)
class RegionRow:
    beta: float
    ratio: float
    winner: str
    margin: float
    ftn_flag: int


@dataclasses.dataclass(frozen=True)
class RegionMap:
    snr_db: float
    oversampling: int
    rows: tuple

    def winners(self) -> set:
        return {row.winner for row in self.rows}


def region_compare(result: SweepResult, *, snr_db: float,
                   oversampling: int) -> RegionMap:
    """Compare alphabets cell by cell on one (shape, ratio) plane.

    ``margin`` is the 16-point rate advantage over the 4-point rate in
    normalized bits; a cell within three combined standard errors of
    zero is a tie.  ``ftn_flag`` marks cells whose signaling ratio
    exceeds 1 + shape, the regime a bandlimited linear receiver could
    not separate.
    """
    cfg = result.config
    needed = ("4qam", "16qam")
    for alphabet in needed:
        if alphabet not in cfg.alphabets:
            raise GridMismatchError(f"grid lacks alphabet {alphabet!r}")
    if oversampling not in cfg.oversampling or snr_db not in cfg.snr_db:
        raise GridMismatchError(
            f"slice (M={oversampling}, {snr_db} dB) is not part of the grid")
    cells = [(a, oversampling, b, r, snr_db)
             for a in needed for b in cfg.beta for r in cfg.ratio]
    _require_complete(result, cells)
    by_key = result.by_key()
    rows = []
    for beta in cfg.beta:
        for ratio in cfg.ratio:
            low = by_key[("4qam", oversampling, beta, ratio, snr_db)]
            high = by_key[("16qam", oversampling, beta, ratio, snr_db)]
            margin = high.rate_3db - low.rate_3db
            spread = 3.0 * float(np.hypot(low.stderr, high.stderr))
            if abs(margin) <= spread:
                winner = "tie"
            else:
                winner = "16qam" if margin > 0 else "4qam"
            rows.append(RegionRow(beta=beta, ratio=ratio, winner=winner,
                                  margin=margin,
                                  ftn_flag=int(ratio > 1.0 + beta)))
    return RegionMap(snr_db=snr_db, oversampling=oversampling,
                     rows=tuple(rows))


def write_region_csv(region: RegionMap, destination, *,
                     comment: str | None = None) -> None:
    lines = []
    if comment is not None:
        lines.append(f"# config: {comment}")
    lines.append(REGION_HEADER)
    for row in region.rows:
        lines.append(f"{row.beta!r},{row.ratio!r},{row.winner},"
                     f"{row.margin!r},{row.ftn_flag}")
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)
