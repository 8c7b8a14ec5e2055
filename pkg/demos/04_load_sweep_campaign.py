"""A small sweep campaign: throughput/delay vs load for all six schedulers.

Produces the same plot-ready CSV tables as `mapcsim campaign`, then prints
the throughput-vs-load table. Increase num_deployments (and num_txops) for
smoother curves; the paper-scale experiment uses 1000 deployments at 10000
TXOPs per run.
"""

import csv
from pathlib import Path

from mapcsim import Campaign, TimingConfig, run_campaign

campaign = Campaign(
    timing=TimingConfig(num_txops=1000),
    loads_mbps=(1.0, 2.0, 4.0, 6.0, 8.0),
    gammas_db=(20.0,),
    k_values=(3,),
    num_deployments=3,
    base_seed=1,
)

out = Path("demo_results")
paths = run_campaign(campaign, out_dir=out, workers=2)
print(f"{campaign.num_runs} runs written under {out}/\n")

with open(paths["throughput_vs_load"]) as fh:
    rows = list(csv.DictReader(fh))

loads = sorted({float(r["load_mbps"]) for r in rows})
print(f"{'scheduler':>14} | " + " ".join(f"{ld:>7.0f}" for ld in loads)
      + "   [aggregate Mbps by load, mean over deployments]")
for sched in campaign.schedulers:
    cells = []
    for load in loads:
        row = next(r for r in rows
                   if r["scheduler"] == sched and float(r["load_mbps"]) == load)
        cells.append(f"{float(row['throughput_bps']) / 1e6:7.1f}")
    print(f"{sched:>14} | " + " ".join(cells))

print("\nCDF tables for the delay and occupancy figures:")
print(f"  {paths['cdf_p95_delay']}")
print(f"  {paths['cdf_occupancy']}")
