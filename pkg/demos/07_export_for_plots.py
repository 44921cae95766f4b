"""Builds a combined CSV of several experiment records.

The output feeds the plotting frontend's figure kinds: ECDF overlays,
KS trend lines, magnitude-ratio boxes, and the dominance bars.
"""

import os
import sys

from lrdx.harness import CSV_COLUMNS, ExperimentConfig, export, run_experiment

OUT = sys.argv[1] if len(sys.argv) > 1 else "combined.csv"

configs = [
    ExperimentConfig(experiment="qlaw", beta=0.6, m=2, n_grid=(500, 5000),
                     replicas=800, seed=11),
    ExperimentConfig(experiment="main-trend", beta=0.6, m=2,
                     n_grid=(1000, 4000), replicas=300, k_trunc=64,
                     n_res=2048, seed=12),
    ExperimentConfig(experiment="big-jump", beta=0.6, m=2, n_grid=(1000, 4000),
                     replicas=300, seed=13),
    ExperimentConfig(experiment="dominance", beta=0.6, m=2, replicas=20_000,
                     n_res=2048, seed=14),
]

lines = [",".join(CSV_COLUMNS)]
for cfg in configs:
    rec = run_experiment(cfg)
    export(rec, "csv", "_tmp_part.csv")
    with open("_tmp_part.csv") as fh:
        lines.extend(fh.read().strip().splitlines()[1:])
    print(f"{cfg.experiment}: {len(rec.rows)} rows")

os.remove("_tmp_part.csv")
with open(OUT, "w") as fh:
    fh.write("\n".join(lines) + "\n")
print(f"wrote {OUT} ({len(lines) - 1} rows)")
