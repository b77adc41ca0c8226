"""Benchmark harness: time both modes on the shipped examples and check
every answer against an independent oracle.

The unfolder and interpreter phases are timed separately with
``time.perf_counter``.  As in ``timeit``, the cyclic garbage collector is
paused while a phase runs: the terms here are acyclic, and collector passes
over a heap of millions of list cells would otherwise swamp the figures.
"""

from __future__ import annotations

import gc
import hashlib
import io
import os
import re
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import VerificationMismatch
from .interp import run_original
from .meta import run_unfolded
from .programs import EXAMPLES, Example
from .engine import Registration
from .rules import StepStats
from .terms import format_term, term_equal

CSV_HEADER = "example,size,mode,unfolder_s,interpreter_s,total_s,rules_generated,applied_indices,checksum"
OUT_DIR_ENV = "RRUNFOLD_OUT_DIR"

DEFAULT_SIZES = {
    ("summation", "unfolded"): "2^25,2^50,2^100,2^200,2^25+1,2^50+1,2^100+1,2^200+1",
    ("summation", "original"): "2^15..2^18",
    ("reversal", "unfolded"): "2^12..2^17,2^12-1..2^17-1,2^12+1..2^17+1",
    ("reversal", "original"): "2^12..2^15",
    ("sorting", "unfolded"): "2^12..2^17,2^12-1..2^17-1,2^12+1..2^17+1",
    ("sorting", "original"): "2^12..2^15",
}

_SIZE = re.compile(r"^\s*(?:(\d+)\s*\^\s*(\d+)|(\d+))\s*(?:([+-])\s*(\d+))?\s*$")


def _one_size(text: str) -> Tuple[str, int, int, int]:
    m = _SIZE.match(text)
    if not m:
        raise ValueError(f"bad size expression {text!r}")
    base, exp, plain, sign, off = m.groups()
    if plain is not None:
        value, b, e = int(plain), None, None
    else:
        b, e = int(base), int(exp)
        value = b ** e
    delta = int(off) * (1 if sign == "+" else -1) if sign else 0
    return text.replace(" ", ""), value + delta, e, delta


def parse_sizes(text: str) -> List[Tuple[str, int]]:
    """Size list such as ``2^12..2^15,2^20+1,100`` as ``(label, value)`` pairs.

    ``2^a..2^b`` expands to every power in between; an offset written on
    both ends (``2^3-1..2^5-1``) is applied to each.
    """
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ".." in part:
            lo, hi = part.split("..", 1)
            _, _, e1, d1 = _one_size(lo)
            _, _, e2, d2 = _one_size(hi)
            if e1 is None or e2 is None or d1 != d2 or e2 < e1:
                raise ValueError(f"bad size range {part!r}")
            base = int(lo.split("^")[0])
            for e in range(e1, e2 + 1):
                label = f"{base}^{e}" + (f"{d1:+d}" if d1 else "")
                out.append((label, base ** e + d1))
        else:
            label, value, _, _ = _one_size(part)
            out.append((label, value))
    for label, value in out:
        if value < 1:
            raise ValueError(f"size {label} is not positive")
    return out


@dataclass
class BenchConfig:
    example: str
    mode: str = "unfolded"
    sizes: Optional[str] = None
    repetitions: int = 1
    seed: int = 0
    fmt: str = "csv"
    cache: bool = True
    jobs: int = 1

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValueError(f"unknown example {self.example!r}; choose from {', '.join(EXAMPLES)}")
        if self.mode not in ("original", "unfolded", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.fmt not in ("csv", "md", "markdown"):
            raise ValueError(f"unknown format {self.fmt!r}")

    @property
    def modes(self) -> List[str]:
        return ["original", "unfolded"] if self.mode == "both" else [self.mode]

    def size_list(self, mode: str) -> List[Tuple[str, int]]:
        text = self.sizes or DEFAULT_SIZES[(self.example, mode)]
        return parse_sizes(text)


@dataclass
class MeasurementRow:
    example: str
    size: str
    mode: str
    unfolder_s: float
    interpreter_s: float
    total_s: float
    rules_generated: int
    applied_indices: List[int]
    checksum: str
    # minima over the repetitions
    unfolder_min: float = 0.0
    interpreter_min: float = 0.0
    total_min: float = 0.0
    value: int = field(default=0, repr=False)


def checksum(term) -> str:
    return hashlib.sha256(format_term(term).encode()).hexdigest()[:16]


def _timed(fn, *args):
    enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter()
        out = fn(*args)
        return out, time.perf_counter() - t0
    finally:
        if enabled:
            gc.enable()


def run_case(example: str, label: str, size: int, mode: str, repetitions: int = 1,
             seed: int = 0, cache: bool = True) -> MeasurementRow:
    """Time one (example, size, mode) case and verify its answer."""
    ex: Example = EXAMPLES[example]
    value = ex.make_input(size, seed)
    goal, out = ex.goal(value)
    expected = ex.expected(value)
    unf_times, int_times = [], []
    answer = None
    for _ in range(repetitions):
        gc.collect()
        if mode == "original":
            answer, ti = _timed(run_original, goal, ex.program)
            tu = 0.0
        else:
            # a fresh registration per repetition: rules are rebuilt every time
            reg = Registration(ex.program.predicate, ex.program, ex.scheme, use_cache=cache)
            stats = StepStats()
            ladder, tu = _timed(reg.ladder_for, goal, stats)
            answer, ti = _timed(run_unfolded, goal, ladder, reg.max_steps, stats)
        got = answer.bindings.get(out.name)
        if got is None or not term_equal(got, expected):
            raise VerificationMismatch(
                f"{example} {mode} size {label}: answer disagrees with the oracle")
        unf_times.append(tu)
        int_times.append(ti)
        answer.value = got
    totals = [a + b for a, b in zip(unf_times, int_times)]
    st = answer.stats
    return MeasurementRow(
        example, label, mode,
        statistics.fmean(unf_times), statistics.fmean(int_times), statistics.fmean(totals),
        st.rules_generated, list(st.applied_rule_indices), checksum(answer.value),
        min(unf_times), min(int_times), min(totals), size,
    )


def _run_case_args(args):
    return run_case(*args)


def run_bench(config: BenchConfig, progress=None) -> List[MeasurementRow]:
    cases = [(config.example, label, value, mode, config.repetitions, config.seed, config.cache)
             for mode in config.modes for label, value in config.size_list(mode)]
    if config.jobs > 1:
        # independent engines in worker processes; timings are less stable
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_run_case_args, cases))
    else:
        rows = []
        for case in cases:
            row = run_case(*case)
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


# -- reporting --------------------------------------------------------------

def ratio_lines(rows: Sequence[MeasurementRow]) -> List[str]:
    """Growth of total time between rows whose sizes differ by a factor of two,
    and the speedup where both modes ran the same size."""
    lines = []
    by_mode = {}
    for r in rows:
        by_mode.setdefault(r.mode, {})[r.value] = r
    for mode, table in by_mode.items():
        for n, r in sorted(table.items()):
            r2 = table.get(2 * n)
            if r2 is not None and r.total_s > 0:
                lines.append(f"ratio {r.example} {mode} T({r2.size})/T({r.size}) = {r2.total_s / r.total_s:.2f}")
    orig, unf = by_mode.get("original", {}), by_mode.get("unfolded", {})
    for n in sorted(set(orig) & set(unf)):
        if unf[n].total_s > 0:
            lines.append(f"speedup {orig[n].example} at {orig[n].size}: "
                         f"{orig[n].total_s / unf[n].total_s:.1f}x")
    return lines


def _fmt_s(x: float) -> str:
    return f"{x:.6f}"


def format_csv(rows: Sequence[MeasurementRow], config: Optional[BenchConfig] = None) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        fields = [r.example, r.size, r.mode, _fmt_s(r.unfolder_s), _fmt_s(r.interpreter_s),
                  _fmt_s(r.total_s), str(r.rules_generated), " ".join(map(str, r.applied_indices)),
                  r.checksum]
        buf.write(",".join(fields) + "\n")
    for line in _footer(rows, config):
        buf.write(f"# {line}\n")
    return buf.getvalue()


def format_markdown(rows: Sequence[MeasurementRow], config: Optional[BenchConfig] = None) -> str:
    head = ["example", "size", "mode", "unfolder s (mean/min)", "interpreter s (mean/min)",
            "total s (mean/min)", "rules", "applied", "checksum"]
    out = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        applied = " ".join(map(str, r.applied_indices))
        if len(applied) > 40:
            applied = f"{len(r.applied_indices)} rules"
        out.append("| " + " | ".join([
            r.example, r.size, r.mode,
            f"{r.unfolder_s:.6f} / {r.unfolder_min:.6f}",
            f"{r.interpreter_s:.6f} / {r.interpreter_min:.6f}",
            f"{r.total_s:.6f} / {r.total_min:.6f}",
            str(r.rules_generated), applied, r.checksum]) + " |")
    footer = _footer(rows, config)
    if footer:
        out.append("")
        out.extend(f"- {line}" for line in footer)
    return "\n".join(out) + "\n"


def _footer(rows, config) -> List[str]:
    lines = []
    if config is not None:
        lines.append(f"seed={config.seed} repetitions={config.repetitions} cache={'on' if config.cache else 'off'}")
    lines.append("all answers verified against the oracle")
    return lines + ratio_lines(rows)


def render(rows, config: BenchConfig) -> str:
    return format_csv(rows, config) if config.fmt == "csv" else format_markdown(rows, config)


def output_path(out: Optional[str]) -> Optional[str]:
    """``out`` resolved against the default output directory, if one is set."""
    if out is None:
        return None
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.isabs(out):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, out)
    return out
