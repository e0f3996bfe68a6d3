"""Seeded property campaigns, and how a failure would be replayed."""
import time

from equalisers.harness import CAMPAIGNS, TrialConfig, replay, run_campaign

cfg = TrialConfig(seed=7, trials=30)
for name in CAMPAIGNS:
    start = time.perf_counter()
    report = run_campaign(name, cfg)
    print(f"{name:26} {report.status}  {report.trials} trials  {time.perf_counter() - start:5.2f}s")
    for failure in report.failures:
        print("   replay:", replay(name, failure["seed"], failure["trial"], cfg))

print("\n" + report.note)
