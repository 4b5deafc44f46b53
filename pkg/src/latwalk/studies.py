"""Convergence experiments comparing exact finite-n laws with their limits.

A study sweeps a grid of horizons ``n`` and, for every point of a grid of
scaled coordinates (level ``a/sqrt(n)``, offset ``(x-a)/sqrt(n)``, count
``ell/sqrt(n)``), records the exact probability times its scaling
prefactor, the limiting density and their distance.  The per-n maximum of
that distance over the grid stands in for the supremum over the whole
uniform regime; it can only underestimate the true supremum.

Row conventions for kinds that do not fit the (a, x, ell) mould:

* ``omega``: ``x`` holds the value ``m`` of the excursion-length sum.
* ``identities``: ``a`` holds the identity number, ``alpha, xi, lambda``
  hold ``y, z, t``, and ``exact``/``asymptotic`` are quadrature/closed form.
* ``mc-check``: ``exact`` is the fraction of joint cells within 4 standard
  errors of the oracle and ``asymptotic`` is 1.
"""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import asymptotics as asym
from . import decomposition as dec
from . import exact
from .errors import ConfigError
from .montecarlo import compare_to_oracle, estimate_joint
from .walk import WalkSpec, load_walk

log = logging.getLogger(__name__)

KINDS = ("main1", "main2", "kaigh", "uchiyama", "omega", "survival", "tails", "identities", "gnedenko", "mc-check")
LIMIT_KINDS = ("main1", "main2", "kaigh", "uchiyama", "omega", "survival", "tails", "gnedenko")
CSV_HEADER = ["kind", "n", "a", "x", "ell", "exact", "asymptotic", "abs_error", "alpha", "xi", "lambda"]

DEFAULT_N_GRID = (64, 256, 1024, 4096)
#: DP entries below this are dropped in survival sweeps longer than SURVIVAL_EXACT_LIMIT
SURVIVAL_CUTOFF = 1e-40
SURVIVAL_EXACT_LIMIT = 8192
MC_SIGMAS = 4.0


@dataclass(frozen=True)
class RegimeGrid:
    kappa: float = 0.5
    alpha_grid: tuple[float, ...] = (0.0, 0.5, 1.0, 2.0)
    xi_grid: tuple[float, ...] = (0.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0)
    lambda_grid: tuple[float, ...] = (0.5, 1.0, 2.0)

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConfigError(f"kappa must be positive, got {self.kappa}")
        for name in ("alpha_grid", "xi_grid", "lambda_grid"):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, values)
            bad = [v for v in values if v != 0 and abs(v) < self.kappa]
            if bad:
                raise ConfigError(f"{name} values {bad} are nonzero but below kappa = {self.kappa}")


def default_regime(kind: str) -> RegimeGrid:
    dense = tuple(np.round(np.arange(0.5, 3.01, 0.25), 2))
    if kind == "kaigh":
        return RegimeGrid(alpha_grid=(0.0,) + dense + tuple(-v for v in dense), xi_grid=(), lambda_grid=())
    if kind == "uchiyama":
        return RegimeGrid(alpha_grid=(-2.0, -1.0, -0.5, 0.5, 1.0, 2.0), xi_grid=(0.0, 0.5, 1.0, 2.0, 3.0), lambda_grid=())
    if kind == "main2":
        return RegimeGrid(alpha_grid=(0.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0), xi_grid=(), lambda_grid=(0.5, 1.0, 2.0))
    if kind == "omega":
        return RegimeGrid(alpha_grid=(), xi_grid=(), lambda_grid=(1.0,))
    if kind == "tails":
        return RegimeGrid(alpha_grid=tuple(float(j) for j in range(1, 9)), xi_grid=(), lambda_grid=())
    if kind == "gnedenko":
        return RegimeGrid(alpha_grid=(), xi_grid=(0.0,) + dense + tuple(-v for v in dense), lambda_grid=())
    if kind == "mc-check":
        return RegimeGrid(alpha_grid=(0.0, 0.5, 1.0), xi_grid=(), lambda_grid=())
    return RegimeGrid()


def default_n_grid(kind: str) -> tuple[int, ...]:
    if kind == "survival":
        return (1000, 10_000, 100_000)
    if kind == "identities":
        return (1,)
    if kind == "mc-check":
        return (10, 50, 100)
    return DEFAULT_N_GRID


@dataclass(frozen=True)
class StudyConfig:
    walk: str
    kind: str
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    regime: RegimeGrid = field(default_factory=RegimeGrid)
    out_csv: str | None = None
    out_svg: str | None = None
    seed: int = 0
    trials: int = 100_000
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown study kind {self.kind!r}; choose from {', '.join(KINDS)}")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid:
            raise ConfigError("n_grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError(f"n_grid must be strictly increasing, got {grid}")
        if grid[0] < 1:
            raise ConfigError("n_grid entries must be positive")
        object.__setattr__(self, "n_grid", grid)
        if self.kind in ("main1", "main2") and any(v == 0 for v in self.regime.lambda_grid):
            raise ConfigError(f"{self.kind} needs ell >= kappa*sqrt(n); drop 0 from lambda_grid")
        if self.kind == "uchiyama" and any(v == 0 for v in self.regime.alpha_grid):
            raise ConfigError("uchiyama needs |a| >= kappa*sqrt(n); drop 0 from alpha_grid")
        if self.kind == "omega" and any(v <= 0 for v in self.regime.lambda_grid):
            raise ConfigError("omega needs positive lambda_grid values")

    @classmethod
    def for_kind(cls, walk: str, kind: str, **overrides) -> "StudyConfig":
        base = dict(walk=walk, kind=kind, n_grid=default_n_grid(kind), regime=default_regime(kind))
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class StudyRow:
    kind: str
    n: int
    a: int
    x: int
    ell: int
    exact: float
    asymptotic: float
    abs_error: float
    alpha: float
    xi: float
    lam: float

    @property
    def key(self):
        return (KINDS.index(self.kind), self.n, self.a, self.x, self.ell, self.alpha, self.xi, self.lam)

    def csv_fields(self) -> list[str]:
        def g(v: float) -> str:
            return f"{v:.17g}"

        return [self.kind, str(self.n), str(self.a), str(self.x), str(self.ell), g(self.exact),
                g(self.asymptotic), g(self.abs_error), g(self.alpha), g(self.xi), g(self.lam)]


def _row(kind, n, a, x, ell, exact_scaled, asymptotic, alpha=math.nan, xi=math.nan, lam=math.nan) -> StudyRow:
    exact_scaled, asymptotic = float(exact_scaled), float(asymptotic)
    return StudyRow(kind, int(n), int(a), int(x), int(ell), exact_scaled, asymptotic,
                    abs(exact_scaled - asymptotic), float(alpha), float(xi), float(lam))


def round_half_away(v: float) -> int:
    return int(math.copysign(math.floor(abs(v) + 0.5), v))


def lattice_coordinate(scaled: float, n: int, kappa: float) -> int:
    """``round(scaled * sqrt(n))``, pushed out to ``ceil(kappa sqrt(n))`` when nonzero."""
    if scaled == 0:
        return 0
    root = math.sqrt(n)
    v = round_half_away(scaled * root)
    floor_mag = math.ceil(kappa * root)
    return int(math.copysign(max(abs(v), floor_mag), scaled))


# ---------------------------------------------------------------------------
# per-kind work items; each returns a list of rows for one n


def _main1(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    for alpha in reg.alpha_grid:
        a = lattice_coordinate(alpha, n, reg.kappa)
        for xi in reg.xi_grid:
            x = a + lattice_coordinate(xi, n, reg.kappa)
            for lam in reg.lambda_grid:
                ell = max(1, lattice_coordinate(lam, n, reg.kappa))
                if ell > n:
                    continue
                p = dec.joint_via_decomposition(spec, n, x, a, ell)
                limit = asym.phi(spec.nu, a / root, x / root, ell / root)
                rows.append(_row("main1", n, a, x, ell, n * p, limit, alpha, xi, lam))
    return rows


def _main2(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    for alpha in reg.alpha_grid:
        a = lattice_coordinate(alpha, n, reg.kappa)
        for lam in reg.lambda_grid:
            ell = max(1, lattice_coordinate(lam, n, reg.kappa))
            if ell > n:
                continue
            p = dec.occupation_via_decomposition(spec, n, a, ell)
            limit = asym.psi(spec.nu, a / root, ell / root)
            rows.append(_row("main2", n, a, -1, ell, root * p, limit, alpha, math.nan, lam))
    return rows


def _uchiyama(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    for alpha in reg.alpha_grid:
        a = lattice_coordinate(alpha, n, reg.kappa)
        killed = exact.avoid_pmf(spec, a, n)
        for xi in reg.xi_grid:
            # x always on the starting side of the level
            x = a - int(math.copysign(1, a)) * lattice_coordinate(abs(xi), n, reg.kappa)
            limit = asym.uchiyama_avoid(spec.nu, n, x, a)
            rows.append(_row("uchiyama", n, a, x, 0, root * killed[x], limit, alpha, (x - a) / root, 0.0))
    return rows


def _kaigh(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    killed = exact.avoid_pmf(spec, 0, n)
    for alpha in reg.alpha_grid:
        a = lattice_coordinate(alpha, n, reg.kappa)
        limit = asym.kaigh_hitting_density(spec.nu, n, a)
        rows.append(_row("kaigh", n, a, a, 0, n * killed[a], limit, alpha, 0.0, 0.0))
    return rows


def _omega(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    for lam in reg.lambda_grid:
        ell = max(1, math.ceil(lam * root))
        law = dec.omega_law(spec, ell - 1, n)
        ms = np.arange(1, n + 1)
        limits = asym.stable_omega_density(spec.nu, n, ell, ms)
        for m, p, limit in zip(ms, law[1:], limits):
            rows.append(_row("omega", n, -1, m, ell, n * p, limit, math.nan, math.nan, lam))
    return rows


def _survival(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    cutoff = SURVIVAL_CUTOFF if n > SURVIVAL_EXACT_LIMIT else 0.0
    tail = exact.survival_tail(spec, n, cutoff=cutoff)
    return [_row("survival", n, 0, -1, 0, math.sqrt(n) * tail[n], asym.survival_limit(spec.nu))]


def _tails(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    unit = math.ceil(reg.kappa * root)
    for j in reg.alpha_grid:
        a = int(round(j)) * unit
        if a == 0:
            continue
        hit = float(np.sum(dec.hitting_law(spec, a, n)))
        limit = asym.avoid_prob_limit(spec.nu, n, a)
        rows.append(_row("tails", n, a, -1, 0, 1.0 - hit, limit, a / root))
    return rows


def _gnedenko(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    law = exact.marginal_pmf(spec, n)
    for xi in reg.xi_grid:
        x = round_half_away(xi * root)
        limit = asym.gaussian_density(spec.nu, x / root)
        rows.append(_row("gnedenko", n, -1, x, -1, root * law[x], limit, math.nan, xi))
    return rows


def _identities(spec: WalkSpec, n: int, reg: RegimeGrid) -> list[StudyRow]:
    rows = []
    for which, y, z, t in asym.identity_grid():
        lhs, rhs = asym.integral_identity_check(which, y, z, t)
        rows.append(_row("identities", -1, which, -1, -1, lhs, rhs, y, z, t))
    return rows


def _mc_check(spec: WalkSpec, n: int, reg: RegimeGrid, seed: int, trials: int) -> list[StudyRow]:
    rows, root = [], math.sqrt(n)
    for alpha in reg.alpha_grid:
        a = lattice_coordinate(alpha, n, reg.kappa)
        est = estimate_joint(spec, n, a, trials, seed)
        oracle = exact.joint_pmf(spec, a, n, cap=max(n, exact.JOINT_CAP))
        inside, cells = compare_to_oracle(est, oracle, MC_SIGMAS)
        rows.append(_row("mc-check", n, a, -1, -1, inside / cells, 1.0, alpha))
    return rows


_WORK: dict[str, Callable] = {
    "main1": _main1,
    "main2": _main2,
    "uchiyama": _uchiyama,
    "kaigh": _kaigh,
    "omega": _omega,
    "survival": _survival,
    "tails": _tails,
    "gnedenko": _gnedenko,
    "identities": _identities,
}


@dataclass
class StudyResult:
    config: StudyConfig
    rows: list[StudyRow]

    def sup_errors(self) -> dict[tuple[str, int], float]:
        out: dict[tuple[str, int], float] = {}
        for r in self.rows:
            out[(r.kind, r.n)] = max(out.get((r.kind, r.n), 0.0), r.abs_error)
        return out

    def error_curve(self, kind: str | None = None) -> tuple[list[int], list[float]]:
        kind = kind or self.config.kind
        sup = self.sup_errors()
        ns = sorted(n for k, n in sup if k == kind)
        return ns, [sup[(kind, n)] for n in ns]

    def to_csv(self, path: str | Path | None = None) -> str:
        text = rows_to_csv(self.rows)
        if path is not None:
            Path(path).write_text(text)
        return text


def run_study(config: StudyConfig, spec: WalkSpec | None = None) -> StudyResult:
    """Run every (n, grid point) work item and return rows in canonical order."""
    spec = spec if spec is not None else load_walk(config.walk)
    reg = config.regime
    if config.kind == "mc-check":
        def item(n):
            return _mc_check(spec, n, reg, config.seed, config.trials)
    elif config.kind == "identities":
        def item(n):
            return _identities(spec, n, reg)
    else:
        fn = _WORK[config.kind]

        def item(n):
            return fn(spec, n, reg)

    grid = (1,) if config.kind == "identities" else config.n_grid
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(item, grid))
    else:
        chunks = [item(n) for n in grid]
    rows = sorted((r for chunk in chunks for r in chunk), key=lambda r: r.key)
    for (kind, n), err in sorted(StudyResult(config, rows).sup_errors().items()):
        log.info("%s n=%d sup error %.3e", kind, n, err)
    return StudyResult(config, rows)


def rows_to_csv(rows: Iterable[StudyRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.csv_fields())
    return buf.getvalue()


def check_convergence(ns: Sequence[int], errors: Sequence[float], slack: float = 0.05) -> tuple[bool, str]:
    """Sup errors must not grow by more than ``slack`` between neighbours and must halve overall."""
    if len(errors) < 2:
        return False, "need at least two horizons"
    for (n0, e0), (n1, e1) in zip(zip(ns, errors), zip(ns[1:], errors[1:])):
        if e1 > e0 * (1.0 + slack):
            return False, f"error grew from {e0:.3e} at n={n0} to {e1:.3e} at n={n1}"
    if errors[-1] > errors[0] / 2:
        return False, f"e({ns[-1]}) = {errors[-1]:.3e} is not at most half of e({ns[0]}) = {errors[0]:.3e}"
    return True, "ok"


def assert_study(result: StudyResult) -> tuple[bool, str]:
    kind = result.config.kind
    if kind == "identities":
        worst = max(r.abs_error for r in result.rows)
        return worst <= 1e-8, f"worst identity gap {worst:.3e}"
    if kind == "mc-check":
        worst = min(r.exact for r in result.rows)
        return worst >= 0.99, f"smallest in-band fraction {worst:.5f}"
    ns, errs = result.error_curve()
    return check_convergence(ns, errs)


# ---------------------------------------------------------------------------
# config files


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(float(v)) for v in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def parse_config(text: str, base_dir: str | Path = ".") -> StudyConfig:
    """Read ``key = value`` lines under ``[study]`` and ``[regime]`` headers.

    Missing keys fall back to the defaults for the study kind; a relative
    walk path is resolved against ``base_dir``.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if not parser.has_section("study"):
        raise ConfigError("config needs a [study] section")
    study = parser["study"]
    known = {"walk", "kind", "n_grid", "out_csv", "out_svg", "seed", "trials", "workers"}
    unknown = set(study) - known
    if unknown:
        raise ConfigError(f"unknown [study] keys: {sorted(unknown)}")
    if "walk" not in study or "kind" not in study:
        raise ConfigError("[study] needs 'walk' and 'kind'")
    kind = study["kind"].strip()
    walk = study["walk"].strip()
    if not walk.startswith("builtin:") and not Path(walk).is_absolute():
        walk = str(Path(base_dir) / walk)
    try:
        overrides: dict = {}
        if "n_grid" in study:
            overrides["n_grid"] = _ints(study["n_grid"])
        for key in ("out_csv", "out_svg"):
            if key in study:
                overrides[key] = study[key].strip()
        for key in ("seed", "trials", "workers"):
            if key in study:
                overrides[key] = int(study[key])
        if parser.has_section("regime"):
            sect = parser["regime"]
            unknown = set(sect) - {"kappa", "alpha_grid", "xi_grid", "lambda_grid"}
            if unknown:
                raise ConfigError(f"unknown [regime] keys: {sorted(unknown)}")
            reg = default_regime(kind) if kind in KINDS else RegimeGrid()
            fields = {}
            if "kappa" in sect:
                fields["kappa"] = float(sect["kappa"])
            for key in ("alpha_grid", "xi_grid", "lambda_grid"):
                if key in sect:
                    fields[key] = _floats(sect[key])
            overrides["regime"] = replace(reg, **fields)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return StudyConfig.for_kind(walk, kind, **overrides)


def load_config(path: str | Path) -> StudyConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)
