"""Euler-Kronecker constants of cyclotomic fields.

gamma_q is gamma plus, for every divisor d > 1 of q, the sum over primitive
characters chi mod d of L'/L(1, chi). Those per-conductor totals are the unit
of work and of caching: they depend only on (d, precision tag), every modulus
reuses them through its divisors, and gamma_{2m} = gamma_m for odd m falls
out because conductors congruent to 2 mod 4 carry no primitive characters.

The batch evaluator computes all character sums of one conductor at once: the
sums sum_a chi(a) w(a/q) over the unit group are a multidimensional DFT of w
arranged on the exponent grid, so one inverse FFT per weight table yields
L(1, chi) and L'(1, chi) for every character simultaneously. The scalar
per-character route in lseries stays independent and cross-checks this one.
"""
from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .characters import build_group, conductor_grid, primitive_characters
from .lseries import MIN_ABS_L, phi_chi
from .sieve import ArithmeticTables, divisors, totient
from .stieltjes import DEFAULT_EM_TERMS, EULER_GAMMA, stieltjes_pair_table

#: Conservative per-character error allowance at the default precision tag,
#: validated against the scalar route in the test suite.
PER_CHARACTER_ERR = 5e-12

CACHE_ENV_VAR = "EKCONST_CACHE_DIR"
CACHE_FILE_NAME = "conductors.csv"
_CACHE_HEADER = "q,total,imag_residual,tag"


def precision_tag(n_terms: int) -> str:
    return f"em{n_terms}"


@dataclass(frozen=True)
class ConductorTotal:
    """Sum of Re L'/L(1, chi) over primitive chi mod q, plus diagnostics."""

    q: int
    total: float
    imag_residual: float
    tag: str


@dataclass(frozen=True)
class GammaQ:
    q: int
    value: float
    err_estimate: float
    tag: str


def conductor_total(q: int, n_terms: int = DEFAULT_EM_TERMS) -> ConductorTotal:
    """Compute one conductor's primitive-character L'/L total from scratch."""
    if q < 1:
        raise ValueError(f"conductor must be >= 1, got {q}")
    tag = precision_tag(n_terms)
    if q == 1:
        return ConductorTotal(q=1, total=0.0, imag_residual=0.0, tag=tag)
    group = build_group(q)
    cond = conductor_grid(group)
    mask = cond == q
    if not mask.any():  # q = 2 and every q = 2 mod 4 land here
        return ConductorTotal(q=q, total=0.0, imag_residual=0.0, tag=tag)
    g0, g1, _ = stieltjes_pair_table(q, n_terms)
    grid = group.unit_grid
    w0 = g0[grid - 1]
    w1 = g1[grid - 1]
    size = group.phi
    big0 = np.fft.ifftn(w0) * size
    big1 = np.fft.ifftn(w1) * size
    sel0 = big0[mask]
    sel1 = big1[mask]
    min_l = float(np.min(np.abs(sel0))) / q
    if min_l <= MIN_ABS_L:
        raise ArithmeticError(
            f"|L(1, chi)| as small as {min_l:.3e} at conductor {q}; "
            "log-derivatives would be unreliable"
        )
    logderiv = -math.log(q) - sel1 / sel0
    total = math.fsum(logderiv.real.tolist())
    imag = abs(math.fsum(logderiv.imag.tolist()))
    return ConductorTotal(q=q, total=total, imag_residual=imag, tag=tag)


class CacheCorruption(ValueError):
    """Cache file failed validation; carries the offending conductor if known."""

    def __init__(self, message: str, q: int | None = None) -> None:
        super().__init__(message)
        self.q = q


class ConductorCache:
    """File-backed memo of conductor totals, keyed by (q, precision tag).

    The file is CSV with header ``q,total,imag_residual,tag``, rows sorted by
    (q, tag), floats written with repr (shortest round-trip form, so a reload
    is bit-identical), LF line endings. Reads are lock-free once loaded;
    writes are serialized by an in-process lock and an atomic replace.
    """

    def __init__(self, path: str | os.PathLike | None = None, *,
                 load: bool = True) -> None:
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[int, str], ConductorTotal] = {}
        self._lock = threading.Lock()
        if load and self.path is not None and self.path.exists():
            self._load()

    @classmethod
    def default_path(cls, cache_dir: str | os.PathLike | None = None) -> Path:
        if cache_dir is None:
            cache_dir = os.environ.get(CACHE_ENV_VAR)
        if cache_dir is None:
            cache_dir = Path.home() / ".cache" / "ekconst"
        return Path(cache_dir) / CACHE_FILE_NAME

    def _load(self) -> None:
        for rec in self._parse_file():
            self._data[(rec.q, rec.tag)] = rec

    def _parse_file(self) -> list[ConductorTotal]:
        out: list[ConductorTotal] = []
        text = self.path.read_text(encoding="ascii")
        lines = text.split("\n")
        if not lines or lines[0] != _CACHE_HEADER:
            raise CacheCorruption(
                f"{self.path}: bad or missing header line")
        prev_key: tuple[int, str] | None = None
        for lineno, line in enumerate(lines[1:], start=2):
            if line == "":
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise CacheCorruption(
                    f"{self.path}:{lineno}: expected 4 fields, got {len(parts)}")
            try:
                q = int(parts[0])
            except ValueError as exc:
                raise CacheCorruption(
                    f"{self.path}:{lineno}: bad conductor field "
                    f"{parts[0]!r}") from exc
            try:
                total = float(parts[1])
                imag = float(parts[2])
            except ValueError as exc:
                raise CacheCorruption(
                    f"{self.path}:{lineno}: unparseable values for conductor "
                    f"{q} ({exc})", q=q) from exc
            tag = parts[3]
            if q < 1:
                raise CacheCorruption(
                    f"{self.path}:{lineno}: conductor {q} out of range", q=q)
            if not (math.isfinite(total) and math.isfinite(imag)):
                raise CacheCorruption(
                    f"{self.path}:{lineno}: non-finite value at conductor {q}",
                    q=q)
            key = (q, tag)
            if prev_key is not None and key <= prev_key:
                raise CacheCorruption(
                    f"{self.path}:{lineno}: rows not strictly sorted at "
                    f"conductor {q}", q=q)
            prev_key = key
            out.append(ConductorTotal(q=q, total=total, imag_residual=imag,
                                      tag=tag))
        return out

    def get(self, q: int, n_terms: int = DEFAULT_EM_TERMS) -> ConductorTotal | None:
        return self._data.get((q, precision_tag(n_terms)))

    def records(self) -> list[ConductorTotal]:
        """All cached totals, sorted by (conductor, tag)."""
        return [self._data[key] for key in sorted(self._data)]

    def put(self, rec: ConductorTotal) -> None:
        with self._lock:
            self._data[(rec.q, rec.tag)] = rec

    def get_or_compute(self, q: int,
                       n_terms: int = DEFAULT_EM_TERMS) -> ConductorTotal:
        rec = self.get(q, n_terms)
        if rec is None:
            rec = conductor_total(q, n_terms)
            self.put(rec)
        return rec

    def save(self) -> None:
        if self.path is None:
            raise ValueError("cache has no backing path")
        with self._lock:
            rows = [_CACHE_HEADER]
            for (q, tag) in sorted(self._data):
                rec = self._data[(q, tag)]
                rows.append(f"{q},{rec.total!r},{rec.imag_residual!r},{tag}")
            payload = "\n".join(rows) + "\n"
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(payload, encoding="ascii", newline="")
            os.replace(tmp, self.path)

    def verify(self) -> list[ConductorTotal]:
        """Re-parse the backing file, raising CacheCorruption on any defect."""
        if self.path is None or not self.path.exists():
            return []
        return self._parse_file()

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            if self.path is not None and self.path.exists():
                self.path.unlink()

    def __len__(self) -> int:
        return len(self._data)


def gamma_q(q: int, cache: ConductorCache | None = None,
            n_terms: int = DEFAULT_EM_TERMS) -> GammaQ:
    """Euler-Kronecker constant of the q-th cyclotomic field."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if cache is None:
        cache = ConductorCache()
    terms = [EULER_GAMMA]
    err_units = 0
    for d in divisors(q):
        if d == 1:
            continue
        terms.append(cache.get_or_compute(d, n_terms).total)
        err_units += totient(d)
    return GammaQ(q=q, value=math.fsum(terms),
                  err_estimate=err_units * PER_CHARACTER_ERR,
                  tag=precision_tag(n_terms))


def gamma_q_from_prime_sums(q: int, x: float,
                            tables: ArithmeticTables) -> float:
    """Heuristic estimate of gamma_q from truncated prime sums alone.

    Replaces every L'/L(1, chi) by its averaged prime-sum proxy -Phi_chi(x),
    summed over the primitive characters of each conductor dividing q. The
    proxy error shrinks as x grows (slowly and unconditionally); at x = 1e7
    it is comfortably inside 0.1 for small q. Not an exact method.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    acc = [complex(EULER_GAMMA)]
    for d in divisors(q):
        if d == 1:
            continue
        for chi in primitive_characters(build_group(d)):
            acc.append(-phi_chi(chi, x, tables))
    total = sum(acc)
    return total.real
