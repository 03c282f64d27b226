"""Statistical equivalence campaign at demo scale.

Matched seeds would make the two engines identical by construction, so
this check deliberately runs each engine on its own seed family and asks
a two-sample KS test whether the metric distributions are the same. CSVs
(per-run metrics, KS table, Q-Q pairs) land in demo_out/validation.

    python3 demos/equivalence_check.py
"""

from dataclasses import replace

from edgesim import load_scenario
from edgesim.harness import validate_equivalence

cfg = load_scenario("scenarios/default.json")
# trimmed so the demo finishes in seconds; the test suite runs the
# full-size campaign
cfg = replace(cfg, device_count=50, duration_min=5.0)

runs = 40
print(f"running {runs} x 2 engine simulations "
      f"({cfg.device_count} devices, {cfg.duration_min:g} min each)...")
report = validate_equivalence(cfg, runs_per_engine=runs, out_dir="demo_out/validation")

print()
print(f"{'metric':<22}{'D':>8}{'p':>9}   verdict at alpha=0.05")
print("-" * 60)
for row in report.rows:
    verdict = "distributions differ" if row.reject_at_alpha else "no evidence of difference"
    print(f"{row.metric:<22}{row.d:>8.4f}{row.p_value:>9.4f}   {verdict}")

print()
print("Q-Q pairs for avg_service_time_s (x=baseline, y=renovated); on the")
print("identity line when the engines sample the same distribution:")
pairs = report.qq["avg_service_time_s"]
step = max(1, len(pairs) // 8)
for x, y in pairs[::step]:
    print(f"  {x:10.4f}  {y:10.4f}")
print()
print("full tables: demo_out/validation/{metrics,ks_report,qq_*}.csv")
