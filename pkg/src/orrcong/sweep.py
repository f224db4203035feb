"""Parameter sweeps: configuration, cell enumeration, execution and reports.

Work is split into cells keyed by ``(claim_id, p)``; each cell runs every
input the configuration assigns to that claim and prime.  Cells are
independent, so they can be farmed out to worker processes.  Records are
sorted by a canonical key before the report is finalized, which makes the
report content independent of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

from . import __version__
from .checks import (
    SPECIAL_CASE_IDS,
    b_gate,
    check_binomial_product_identities,
    check_case2_expansions,
    check_clausen_congruence,
    check_corollary_b,
    check_identity_1_9,
    check_lemma_2_3,
    check_lemma_maopan,
    check_lemma_tauraso,
    check_special_cases,
    check_theorem_main,
    explore_conjecture,
)
from .errors import ConfigInvalid, DivisionUndefined, ZeroDenominator
from .gamma import check_gamma_reflection, check_gamma_shift
from .padic import ResidueRing, odd_primes, parse_rational
from .records import CLAIM_IDS, CongruenceCheck, Valuation, Verdict
from .series import check_clausen, check_clausen_special, check_orr, check_orr_special

log = logging.getLogger(__name__)

DEFAULT_Z_SET = ("0", "1", "-1", "2", "-2", "1/2", "-1/2", "1/3")
DEFAULT_X_SET = ("0", "1", "-1", "2", "-2", "1/2", "1/3", "-1/4", "2/5")
DEFAULT_T_SET = ("0", "1", "-1", "2")

# claims evaluated once per sweep rather than once per prime
PRIMELESS = frozenset({"BINOM_IDS", "CLAUSEN", "CLAUSEN_SPECIAL", "ORR", "ORR_SPECIAL"})


@dataclass
class SweepConfig:
    claims: tuple[str, ...] = ("THM_MAIN",)
    prime_min: int = 3
    prime_max: int = 97
    e: int = 2
    alpha_num_max: int = 6
    alpha_den_max: int = 6
    z_set: tuple[str, ...] = DEFAULT_Z_SET
    b_min: int = 1
    b_max: int = 12
    n_min: int = 2
    n_max: int = 3
    truncation_order: int = 30
    identity_samples: int = 20
    seed: int = 0
    k_max: int = 40
    x_set: tuple[str, ...] = DEFAULT_X_SET
    t_set: tuple[str, ...] = DEFAULT_T_SET
    gamma_bound: int = 12
    gamma_exponents: tuple[int, ...] = (1, 2)
    truncation_offset: int = 0
    workers: int = 1
    output_path: str | None = None
    output_format: str = "json"

    def validate(self) -> None:
        if not self.claims:
            raise ConfigInvalid("no claims selected")
        unknown = [c for c in self.claims if c not in CLAIM_IDS]
        if unknown:
            raise ConfigInvalid(f"unknown claim ids: {', '.join(unknown)}")
        if self.prime_min > self.prime_max:
            raise ConfigInvalid(f"prime_min {self.prime_min} exceeds prime_max {self.prime_max}")
        if self.workers < 1:
            raise ConfigInvalid("workers must be >= 1")
        if self.e < 2:
            raise ConfigInvalid("e must be >= 2 for the mod p^2 claims")
        if self.output_format not in ("json", "csv"):
            raise ConfigInvalid(f"output format must be json or csv, got {self.output_format!r}")
        if self.b_min < 1 or self.b_min > self.b_max:
            raise ConfigInvalid(f"bad b range [{self.b_min}, {self.b_max}]")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ConfigInvalid(f"bad n range [{self.n_min}, {self.n_max}]")
        if not 0 <= self.truncation_order <= 200:
            raise ConfigInvalid("truncation_order must lie in [0, 200]")
        if self.alpha_den_max < 1 or self.alpha_num_max < 0:
            raise ConfigInvalid("alpha lattice bounds must be positive")
        if any(g < 1 for g in self.gamma_exponents):
            raise ConfigInvalid("gamma exponents must be >= 1")
        try:
            for s in (*self.z_set, *self.x_set, *self.t_set):
                parse_rational(s)
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from None

    def echo(self) -> dict[str, Any]:
        """The configuration as written into reports (no output plumbing)."""
        d = asdict(self)
        for k in ("workers", "output_path", "output_format"):
            d.pop(k)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


_LIST_FIELDS = {"claims", "z_set", "x_set", "t_set", "gamma_exponents"}


def coerce_value(name: str, raw: str) -> Any:
    types = {f.name: f.type for f in fields(SweepConfig)}
    if name not in types:
        raise ConfigInvalid(f"unknown config key {name!r}")
    raw = raw.strip()
    if name in _LIST_FIELDS:
        items = tuple(s.strip() for s in raw.split(",") if s.strip())
        if name == "gamma_exponents":
            return tuple(int(s) for s in items)
        if name == "claims":
            return tuple(s.upper() for s in items)
        return items
    if name == "output_path":
        return raw or None
    if name == "output_format":
        return raw
    try:
        return int(raw)
    except ValueError:
        raise ConfigInvalid(f"{name} must be an integer, got {raw!r}") from None


def config_key(name: str) -> str:
    key = name.strip().replace("-", "_").lower()
    aliases = {"out": "output_path", "format": "output_format", "n": "truncation_order"}
    return aliases.get(key, key)


def parse_config_text(text: str) -> dict[str, Any]:
    """``key = value`` lines; ``#`` starts a comment; keys may use dashes."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigInvalid(f"line {lineno}: expected key = value")
        key, raw = line.split(sep, 1)
        name = config_key(key)
        values[name] = coerce_value(name, raw)
    return values


def load_config(path: str | os.PathLike | None = None, overrides: dict[str, Any] | None = None) -> SweepConfig:
    values: dict[str, Any] = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from None
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    cfg = SweepConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# input lattices


def alpha_lattice(p: int | None, num_max: int, den_max: int) -> list[Fraction]:
    """Distinct reduced r/s, |r| <= num_max, 1 <= s <= den_max, p not dividing s."""
    seen = set()
    for s in range(1, den_max + 1):
        if p is not None and s % p == 0:
            continue
        for r in range(-num_max, num_max + 1):
            seen.add(Fraction(r, s))
    return sorted(seen)


def p_integral_set(values: Iterable[str], p: int) -> list[Fraction]:
    out = []
    for s in values:
        x = parse_rational(s)
        if x.denominator % p:
            out.append(x)
    return out


def gamma_lattice(p: int, bound: int) -> list[Fraction]:
    """p-integral r/s with numerator and denominator in [-bound, bound]."""
    seen = set()
    for s in range(-bound, bound + 1):
        if s == 0:
            continue
        for r in range(-bound, bound + 1):
            x = Fraction(r, s)
            if x.denominator % p:
                seen.add(x)
    return sorted(seen)


def identity_samples(claim: str, cfg: SweepConfig) -> list[tuple[Fraction, ...]]:
    """Seeded rational parameter samples avoiding poles of the claim's lower parameters."""
    rng = random.Random(f"{cfg.seed}:{claim}")
    two = claim in ("CLAUSEN", "ORR")
    fn = _IDENTITY_FNS[claim]
    out: list[tuple[Fraction, ...]] = []
    attempts = 0
    while len(out) < cfg.identity_samples:
        attempts += 1
        if attempts > 100 * max(cfg.identity_samples, 1):
            raise ConfigInvalid(f"could not sample parameters for {claim}")
        draw = tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2 if two else 1)
        )
        try:
            fn(*draw, cfg.truncation_order)
        except ZeroDenominator:
            continue
        if draw not in out:
            out.append(draw)
    return out


_IDENTITY_FNS: dict[str, Callable[..., CongruenceCheck]] = {
    "CLAUSEN": check_clausen,
    "CLAUSEN_SPECIAL": check_clausen_special,
    "ORR": check_orr,
    "ORR_SPECIAL": check_orr_special,
}


# ---------------------------------------------------------------------------
# cells


def _timed(fn: Callable[..., CongruenceCheck], *args, **kwargs) -> CongruenceCheck:
    t0 = time.perf_counter()
    chk = fn(*args, **kwargs)
    return _with_elapsed(chk, time.perf_counter() - t0)


def _with_elapsed(chk: CongruenceCheck, elapsed: float) -> CongruenceCheck:
    object.__setattr__(chk, "elapsed", elapsed)
    return chk


def _undefined_conjecture(p: int, b: int, n: int, reason: str) -> CongruenceCheck:
    return CongruenceCheck.modular(
        "CONJ_1_2",
        p=p,
        e=None,
        params={"b": b, "n": n},
        achieved=Valuation(0),
        required=2,
        gate=(False, reason),
        exploratory=n >= 2,
    )


def cell_checks(claim: str, p: int | None, cfg: SweepConfig) -> Iterator[CongruenceCheck]:
    """Every check the configuration assigns to one (claim, prime) cell."""
    e = cfg.e
    if claim in ("THM_MAIN", "EQ_1_3"):
        zs = p_integral_set(cfg.z_set, p)
        for alpha in alpha_lattice(p, cfg.alpha_num_max, cfg.alpha_den_max):
            for z in zs:
                if claim == "THM_MAIN":
                    trunc = p - 1 - cfg.truncation_offset if cfg.truncation_offset else None
                    yield _timed(check_theorem_main, p, alpha, z, e, truncation=trunc)
                else:
                    yield _timed(check_clausen_congruence, p, alpha, z, e)
    elif claim == "COR_1_3":
        for b in range(cfg.b_min, cfg.b_max + 1):
            yield _timed(check_corollary_b, p, b, e)
    elif claim in SPECIAL_CASE_IDS:
        t0 = time.perf_counter()
        (chk,) = check_special_cases(p, (claim,))
        yield _with_elapsed(chk, time.perf_counter() - t0)
    elif claim == "EQ_1_9":
        for b in range(cfg.b_min, cfg.b_max + 1):
            if b % p:
                yield _timed(check_identity_1_9, p, b)
    elif claim == "LEM_TAURASO":
        if p > 3:
            for x in p_integral_set(cfg.x_set, p):
                yield _timed(check_lemma_tauraso, p, x)
    elif claim == "LEM_MAOPAN":
        lattice = alpha_lattice(p, cfg.alpha_num_max, cfg.alpha_den_max)
        for i, alpha in enumerate(lattice):
            for beta in lattice[i:]:
                yield _timed(check_lemma_maopan, p, alpha, beta, e)
    elif claim == "LEM_2_3":
        for b in range(max(2, cfg.b_min), cfg.b_max + 1):
            yield _timed(check_lemma_2_3, p, b, e)
    elif claim == "CASE2_EXP":
        if p > 3:
            zs = p_integral_set(cfg.z_set, p)
            for t in p_integral_set(cfg.t_set, p):
                for z in zs:
                    yield _timed(check_case2_expansions, p, t, z)
    elif claim == "CONJ_1_2":
        for b in range(cfg.b_min, cfg.b_max + 1):
            for n in range(cfg.n_min, cfg.n_max + 1):
                if b > 1 and not b_gate(p, b)[0]:
                    yield _undefined_conjecture(p, b, n, b_gate(p, b)[1])
                    continue
                try:
                    yield _timed(explore_conjecture, p, b, n)
                except DivisionUndefined as exc:
                    yield _undefined_conjecture(p, b, n, str(exc))
    elif claim in ("GAMMA_SHIFT", "GAMMA_REFL"):
        fn = check_gamma_shift if claim == "GAMMA_SHIFT" else check_gamma_reflection
        xs = gamma_lattice(p, cfg.gamma_bound)
        for g in cfg.gamma_exponents:
            ring = ResidueRing(p, g)
            for x in xs:
                yield _timed(fn, x, ring)
    elif claim == "BINOM_IDS":
        yield _timed(check_binomial_product_identities, cfg.k_max)
    elif claim in _IDENTITY_FNS:
        fn = _IDENTITY_FNS[claim]
        for draw in identity_samples(claim, cfg):
            yield _timed(fn, *draw, cfg.truncation_order)
    else:
        raise ConfigInvalid(f"unknown claim {claim!r}")


def run_cell(claim: str, p: int | None, cfg: SweepConfig) -> list[CongruenceCheck]:
    return list(cell_checks(claim, p, cfg))


def enumerate_cells(cfg: SweepConfig) -> list[tuple[str, int | None]]:
    primes = odd_primes(cfg.prime_min, cfg.prime_max)
    cells: list[tuple[str, int | None]] = []
    for claim in cfg.claims:
        if claim in PRIMELESS:
            cells.append((claim, None))
        else:
            cells.extend((claim, p) for p in primes)
    return cells


# ---------------------------------------------------------------------------
# reports


CSV_COLUMNS = (
    "claim_id",
    "p",
    "e",
    "params",
    "hypothesis_status",
    "achieved_valuation",
    "required_valuation",
    "verdict",
)


def csv_row(chk: CongruenceCheck) -> dict[str, Any]:
    rec = chk.to_record()
    return {
        "claim_id": chk.claim_id,
        "p": "" if chk.p is None else chk.p,
        "e": "" if chk.e is None else chk.e,
        "params": chk.params_text(),
        "hypothesis_status": chk.hypothesis_status,
        "achieved_valuation": rec["achieved_valuation"],
        "required_valuation": rec["required_valuation"],
        "verdict": chk.verdict.value,
    }


@dataclass
class Report:
    config: dict[str, Any]
    records: list[CongruenceCheck]
    generated_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    version: str = __version__

    def summary(self) -> dict[str, dict[str, Any]]:
        out: dict[str, dict[str, Any]] = {}
        for chk in self.records:
            entry = out.setdefault(chk.claim_id, {"pass": 0, "fail": 0, "skipped": 0, "first_fail": None})
            entry[chk.verdict.value] += 1
            if chk.verdict is Verdict.FAIL and entry["first_fail"] is None:
                entry["first_fail"] = chk.to_record()["inputs"]
        return dict(sorted(out.items()))

    @property
    def failures(self) -> list[CongruenceCheck]:
        return [c for c in self.records if c.verdict is Verdict.FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def to_json(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "generated_at": self.generated_at,
            "config": self.config,
            "records": [c.to_record() for c in self.records],
            "summary": self.summary(),
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> Report:
        return cls(
            config=doc["config"],
            records=[CongruenceCheck.from_record(r) for r in doc["records"]],
            generated_at=doc["generated_at"],
            version=doc["version"],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for chk in self.records:
            writer.writerow(csv_row(chk))
        return buf.getvalue()


class _StreamWriter:
    """Appends records to disk as they arrive so a crashed sweep keeps its partial results."""

    def __init__(self, path: Path | None, fmt: str) -> None:
        self.path = path
        self.fmt = fmt
        self._fh = None
        self._csv = None
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            if fmt == "json":
                self.partial = path.with_name(path.name + ".partial.jsonl")
                self._fh = self.partial.open("w")
            else:
                self.partial = path
                self._fh = path.open("w", newline="")
                self._csv = csv.DictWriter(self._fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
                self._csv.writeheader()
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc}") from exc

    def write(self, chk: CongruenceCheck) -> None:
        if self._fh is None:
            return
        if self._csv is not None:
            self._csv.writerow(csv_row(chk))
        else:
            self._fh.write(json.dumps(chk.to_record()) + "\n")
        self._fh.flush()

    def finalize(self, report: Report) -> None:
        if self._fh is None:
            return
        self._fh.close()
        # rewrite in canonical order
        tmp = self.path.with_name(self.path.name + ".tmp")
        if self.fmt == "json":
            tmp.write_text(json.dumps(report.to_json(), indent=1) + "\n")
        else:
            tmp.write_text(report.to_csv())
        os.replace(tmp, self.path)
        if self.fmt == "json":
            self.partial.unlink(missing_ok=True)


def run_sweep(cfg: SweepConfig, progress: Callable[[int, int], None] | None = None) -> Report:
    """Run every cell of ``cfg`` and return the order-normalized report."""
    cfg.validate()
    cells = enumerate_cells(cfg)
    writer = _StreamWriter(Path(cfg.output_path) if cfg.output_path else None, cfg.output_format)
    records: list[CongruenceCheck] = []
    done = 0

    def collect(batch: list[CongruenceCheck]) -> None:
        nonlocal done
        for chk in batch:
            writer.write(chk)
        records.extend(batch)
        done += 1
        if progress is not None:
            progress(done, len(cells))

    log.info("sweep: %d cells over claims %s with %d worker(s)", len(cells), ",".join(cfg.claims), cfg.workers)
    if cfg.workers == 1:
        for claim, p in cells:
            collect(run_cell(claim, p, cfg))
    else:
        # large primes first: they dominate runtime
        order = sorted(cells, key=lambda c: -(c[1] or 0))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(run_cell, claim, p, cfg) for claim, p in order]
            for fut in as_completed(futures):
                collect(fut.result())
    records.sort(key=CongruenceCheck.sort_key)
    report = Report(config=cfg.echo(), records=records)
    writer.finalize(report)
    return report


def format_summary(report: Report) -> str:
    lines = []
    for claim, s in report.summary().items():
        line = f"{claim:<16} pass {s['pass']:>6}  fail {s['fail']:>4}  skipped {s['skipped']:>6}"
        if s["first_fail"] is not None:
            inp = s["first_fail"]
            params = ", ".join(f"{k}={v}" for k, v in inp["params"].items())
            line += f"  first fail: p={inp['p']} {params}"
        lines.append(line)
    exploratory = [c for c in report.failures if c.exploratory]
    if exploratory:
        lines.append(
            f"{len(exploratory)} exploratory failure(s): possible counterexamples to the conjecture, "
            "or bugs; inspect before drawing conclusions"
        )
    return "\n".join(lines)

