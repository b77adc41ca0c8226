"""Small version of the benchmark tables: original vs unfolded reversal and
sorting at a few sizes, with growth ratios.

    python demos/speedup_table.py
"""

from rrunfold.bench import BenchConfig, format_markdown, run_bench

for example in ("reversal", "sorting"):
    cfg = BenchConfig(example, "both", "2^8..2^11", repetitions=3, seed=7, fmt="md")
    print(f"## {example}\n")
    print(format_markdown(run_bench(cfg), cfg))
