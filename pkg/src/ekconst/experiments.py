"""Dyadic-range scans, summary statistics, progression-error probes, and
deterministic file emission.

A scan covers one dyadic block Q < q <= 2Q and records gamma_q next to
log q; the statistics measure how tightly the two track each other on
average. The probe measures, for every level m up to x^(1-epsilon), the
worst prime-counting error over the coprime residue classes mod m.

Emission is deliberately dumb: fixed headers, fixed significant digits,
LF line endings, records in ascending order, so identical inputs produce
byte-identical files.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .decomp import DecompositionReport
from .ekgamma import ConductorCache, conductor_total, gamma_q
from .sieve import ArithmeticTables, divisors, psi
from .stieltjes import DEFAULT_EM_TERMS

SCAN_HEADER = "q,gamma_q,log_q,ratio,abs_dev"
PROBE_HEADER = "x,epsilon,m_max,total"
PER_M_HEADER = "m,max_abs_error"
HISTOGRAM_HEADER = "bin_lo,bin_hi,count"
FORMATS = ("csv", "json", "plotdata")

#: Histogram support for gamma_q / log q; mass concentrates at 1.
RATIO_RANGE = (0.0, 2.0)


@dataclass(frozen=True)
class ScanRecord:
    q: int
    gamma_q: float
    log_q: float
    ratio: float      # nan for q <= 2, where log q is too small to divide by
    abs_dev: float


@dataclass(frozen=True)
class RatioBin:
    lo: float
    hi: float
    count: int


@dataclass(frozen=True)
class EhProbeRecord:
    x: float
    epsilon: float
    m_max: int
    total: float
    per_m: tuple[tuple[int, float], ...] = ()


@dataclass(frozen=True)
class RangeStatistic:
    n_records: int
    mean_abs_dev: float    # (1/Q) sum |gamma_q - log q| over the block
    normalized: float      # the same divided by log Q


@dataclass(frozen=True)
class MeanStatistic:
    mean: float            # (1/Q) sum gamma_q over the block
    deviation: float       # |mean - log Q|


def scan_range(block: int, cache: ConductorCache | None = None,
               n_terms: int = DEFAULT_EM_TERMS,
               workers: int | None = 1) -> list[ScanRecord]:
    """One record per q in (block, 2*block], ascending.

    Missing conductor totals are computed first (in parallel when workers
    > 1; they are independent pure functions), then every gamma_q is
    assembled from the cache, so records are reproducible bit for bit from
    a warm cache.
    """
    if block < 2:
        raise ValueError(f"block must be >= 2, got {block}")
    if cache is None:
        cache = ConductorCache()
    qs = range(block + 1, 2 * block + 1)
    missing = sorted({d for q in qs for d in divisors(q)
                      if d > 1 and cache.get(d, n_terms) is None})
    if workers is not None and workers > 1 and len(missing) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            worker = partial(conductor_total, n_terms=n_terms)
            for rec in pool.map(worker, missing, chunksize=16):
                cache.put(rec)
    else:
        for d in missing:
            cache.put(conductor_total(d, n_terms))
    out = []
    for q in qs:
        val = gamma_q(q, cache, n_terms).value
        lq = math.log(q)
        ratio = val / lq if q >= 3 else math.nan
        out.append(ScanRecord(q=q, gamma_q=val, log_q=lq, ratio=ratio,
                              abs_dev=abs(val - lq)))
    return out


def theorem_statistic(records: list[ScanRecord]) -> RangeStatistic:
    """Block average of |gamma_q - log q|, raw and divided by log Q.

    The divisor Q is recovered as the record count, which equals the dyadic
    base for a full block (Q, 2Q].
    """
    if not records:
        raise ValueError("no records to average")
    n = len(records)
    mean = math.fsum(r.abs_dev for r in records) / n
    lg = math.log(n)
    if lg > 0.0:
        normalized = mean / lg
    else:
        normalized = 0.0 if mean == 0.0 else math.inf
    return RangeStatistic(n_records=n, mean_abs_dev=mean,
                          normalized=normalized)


def dyadic_mean(records: list[ScanRecord], block: int) -> MeanStatistic:
    """Mean of gamma_q over the block against log Q."""
    if block < 1:
        raise ValueError(f"block must be >= 1, got {block}")
    if not records:
        raise ValueError("no records to average")
    mean = math.fsum(r.gamma_q for r in records) / block
    return MeanStatistic(mean=mean, deviation=abs(mean - math.log(block)))


def ratio_histogram(records: list[ScanRecord], bins: int) -> list[RatioBin]:
    """Counts of gamma_q / log q in equal bins over [0, 2], plus an
    underflow bin (-inf, 0) and an overflow bin (2, inf).

    Records without a finite ratio (q <= 2) are skipped; the returned
    counts sum to the number of counted records.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    vals = np.asarray([r.ratio for r in records if math.isfinite(r.ratio)],
                      dtype=np.float64)
    lo, hi = RATIO_RANGE
    counts, edges = np.histogram(vals, bins=bins, range=RATIO_RANGE)
    out = [RatioBin(lo=-math.inf, hi=lo,
                    count=int(np.count_nonzero(vals < lo)))]
    out.extend(RatioBin(lo=float(edges[i]), hi=float(edges[i + 1]),
                        count=int(counts[i])) for i in range(bins))
    out.append(RatioBin(lo=hi, hi=math.inf,
                        count=int(np.count_nonzero(vals > hi))))
    return out


def _weights_upto(tables: ArithmeticTables, x: float, prime_powers: bool):
    if prime_powers:
        base = tables.prime_powers
        k = int(np.searchsorted(base, math.floor(x), side="right"))
        return base[:k], tables.prime_power_logs[:k]
    base = tables.primes
    k = int(np.searchsorted(base, math.floor(x), side="right"))
    arr = base[:k]
    return arr, tables.lam[arr]


def eh_probe(x: float, epsilon: float, tables: ArithmeticTables,
             prime_powers: bool = False) -> EhProbeRecord:
    """Worst-residue progression errors totalled over levels m <= x^(1-eps).

    E(x; m, a) sums log p over primes p <= x with p = a mod m and subtracts
    psi(x)/phi(m); the maximum of |E| runs over the coprime classes a. With
    prime_powers=True the sum runs over prime powers instead (the classical
    progression count). m = 1 has the single class a = 1 and contributes
    theta(x) - psi(x).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 2.0 <= x <= tables.bound:
        raise ValueError(f"need 2 <= x <= {tables.bound}, got {x}")
    m_max = int(math.floor(x ** (1.0 - epsilon)))
    psi_x = psi(tables, x)
    arr, w = _weights_upto(tables, x, prime_powers)
    per_m = []
    for m in range(1, m_max + 1):
        sums = np.bincount(arr % m, weights=w, minlength=m)
        coprime = np.gcd(np.arange(m), m) == 1
        dev = np.abs(sums[coprime] - psi_x / int(tables.phi[m]))
        per_m.append((m, float(dev.max())))
    return EhProbeRecord(x=float(x), epsilon=float(epsilon), m_max=m_max,
                         total=math.fsum(e for _, e in per_m),
                         per_m=tuple(per_m))


def residue_sum_check(m: int, x: float, tables: ArithmeticTables,
                      prime_powers: bool = False) -> tuple[float, float]:
    """Both sides of the identity sum_{(a,m)=1} E(x; m, a) =
    sum_{p <= x, gcd(p, m) = 1} log p - psi(x), computed independently
    (residue bucketing on the left, divisibility filtering on the right)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 2.0 <= x <= tables.bound:
        raise ValueError(f"need 2 <= x <= {tables.bound}, got {x}")
    psi_x = psi(tables, x)
    arr, w = _weights_upto(tables, x, prime_powers)
    sums = np.bincount(arr % m, weights=w, minlength=m)
    coprime = np.gcd(np.arange(m), m) == 1
    n_classes = int(np.count_nonzero(coprime))
    lhs = math.fsum((sums[coprime] - psi_x / n_classes).tolist())
    rhs = math.fsum(w[np.gcd(arr, m) == 1].tolist()) - psi_x
    return lhs, rhs


def _g(value) -> str:
    return format(value, ".12g")


def _finite_or_none(value: float):
    return value if math.isfinite(value) else None


def _render_scan(records, fmt: str) -> str:
    if fmt == "csv":
        lines = [SCAN_HEADER]
        lines.extend(
            f"{r.q},{_g(r.gamma_q)},{_g(r.log_q)},{_g(r.ratio)},{_g(r.abs_dev)}"
            for r in records)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        arr = []
        for r in records:
            d = asdict(r)
            d["ratio"] = _finite_or_none(r.ratio)
            arr.append(d)
        return json.dumps(arr, indent=2) + "\n"
    lines = ["# gamma_q / log q per modulus", "# columns: q ratio"]
    lines.extend(f"{r.q} {_g(r.ratio)}" for r in records
                 if math.isfinite(r.ratio))
    return "\n".join(lines) + "\n"


def _render_report(report: DecompositionReport, fmt: str) -> str:
    fields = asdict(report)
    if fmt == "csv":
        header = ",".join(fields)
        row = ",".join(str(v) if isinstance(v, int) else _g(v)
                       for v in fields.values())
        return header + "\n" + row + "\n"
    if fmt == "json":
        return json.dumps(fields, indent=2) + "\n"
    lines = [f"# decomposition terms, q={report.q} x={_g(report.x)} "
             f"x_split={_g(report.x_split)}", "# columns: index value"]
    numeric = {k: v for k, v in fields.items()
               if k not in ("q", "x", "x_split")}
    lines.extend(f"# {i}: {name}" for i, name in enumerate(numeric, start=1))
    lines.extend(f"{i} {_g(value)}"
                 for i, value in enumerate(numeric.values(), start=1))
    return "\n".join(lines) + "\n"


def _render_probe(probe: EhProbeRecord, fmt: str) -> str:
    if fmt == "csv":
        row = f"{_g(probe.x)},{_g(probe.epsilon)},{probe.m_max},{_g(probe.total)}"
        return PROBE_HEADER + "\n" + row + "\n"
    if fmt == "json":
        d = asdict(probe)
        d["per_m"] = [[m, e] for m, e in probe.per_m]
        return json.dumps(d, indent=2) + "\n"
    lines = [f"# progression error probe: x={_g(probe.x)} "
             f"epsilon={_g(probe.epsilon)} m_max={probe.m_max} "
             f"total={_g(probe.total)}",
             "# columns: m max_abs_error"]
    lines.extend(f"{m} {_g(e)}" for m, e in probe.per_m)
    return "\n".join(lines) + "\n"


def _render_per_m(probe: EhProbeRecord, fmt: str) -> str:
    if fmt == "csv":
        lines = [PER_M_HEADER]
        lines.extend(f"{m},{_g(e)}" for m, e in probe.per_m)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([[m, e] for m, e in probe.per_m], indent=2) + "\n"
    lines = ["# columns: m max_abs_error"]
    lines.extend(f"{m} {_g(e)}" for m, e in probe.per_m)
    return "\n".join(lines) + "\n"


def _render_histogram(bins, fmt: str) -> str:
    if fmt == "csv":
        lines = [HISTOGRAM_HEADER]
        lines.extend(f"{_g(b.lo)},{_g(b.hi)},{b.count}" for b in bins)
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([asdict(b) for b in bins], indent=2) + "\n"
    regular = [b for b in bins if math.isfinite(b.lo) and math.isfinite(b.hi)]
    under = sum(b.count for b in bins if not math.isfinite(b.lo))
    over = sum(b.count for b in bins if not math.isfinite(b.hi))
    lines = ["# ratio histogram", "# columns: bin_midpoint count",
             f"# underflow: {under}", f"# overflow: {over}"]
    lines.extend(f"{_g((b.lo + b.hi) / 2.0)} {b.count}" for b in regular)
    return "\n".join(lines) + "\n"


def _payload_kind(payload) -> str:
    if isinstance(payload, EhProbeRecord):
        return "probe"
    if isinstance(payload, DecompositionReport):
        return "report"
    if isinstance(payload, (list, tuple)):
        if len(payload) == 0 or isinstance(payload[0], ScanRecord):
            return "scan"
        if isinstance(payload[0], RatioBin):
            return "histogram"
    raise TypeError(f"cannot emit payload of type {type(payload).__name__}")


def render(payload, fmt: str) -> str:
    """Text form of any emittable payload in csv, json or plotdata."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    kind = _payload_kind(payload)
    if kind == "scan":
        return _render_scan(payload, fmt)
    if kind == "report":
        return _render_report(payload, fmt)
    if kind == "probe":
        return _render_probe(payload, fmt)
    return _render_histogram(payload, fmt)


def _write(path, text: str) -> None:
    target = Path(path)
    try:
        if target.parent != Path(""):
            target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"writing {target}: {exc}") from exc


def emit(payload, fmt: str, path, per_m_path=None) -> None:
    """Write a payload to path; deterministic bytes for identical inputs.

    For probe records an optional second file receives the per-level table
    (m, max_abs_error).
    """
    text = render(payload, fmt)
    _write(path, text)
    if per_m_path is not None:
        if _payload_kind(payload) != "probe":
            raise ValueError("per_m_path only applies to probe records")
        _write(per_m_path, _render_per_m(payload, fmt))


def parse_scan_csv(path) -> list[ScanRecord]:
    """Inverse of emit(records, "csv", path) up to float formatting width."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise OSError(f"reading {path}: {exc}") from exc
    lines = [line for line in text.split("\n") if line != ""]
    if not lines or lines[0] != SCAN_HEADER:
        raise ValueError(f"{path}: missing scan header {SCAN_HEADER!r}")
    out = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"{path}: malformed row {line!r}")
        out.append(ScanRecord(q=int(parts[0]), gamma_q=float(parts[1]),
                              log_q=float(parts[2]), ratio=float(parts[3]),
                              abs_dev=float(parts[4])))
    return out
