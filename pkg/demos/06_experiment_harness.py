"""Running registered experiments and exporting records.

Produces the JSON record and the CSV consumed by the plotting frontend.
"""

from lrdx.harness import ExperimentConfig, export, run_experiment

cfg = ExperimentConfig(experiment="intersection-prob", beta=0.6, m=2,
                       n_grid=(128, 8192), replicas=3000, seed=42)
rec = run_experiment(cfg)
print(f"experiment {rec.experiment}: {len(rec.rows)} stat rows, "
      f"{rec.wallclock:.1f}s")
for chk in rec.checks:
    print(f"  [{'PASS' if chk['passed'] else 'FAIL'}] {chk['name']} {chk['detail']}")

export(rec, "json", "intersection_record.json")
export(rec, "csv", "intersection_record.csv")
print("wrote intersection_record.json and intersection_record.csv")
print("render figures with: lrdx-plot --spec <figure.toml> (plotting frontend)")
