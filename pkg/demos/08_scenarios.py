"""Run the bundled physical scenarios through the verify and defect commands."""

from idclusters import load_scenario, run_scenario
from idclusters.scenarios import bundled_scenarios, resolve_scenario

for name in bundled_scenarios():
    sc = load_scenario(resolve_scenario(name))
    report = run_scenario(sc, "verify", seed=0)
    s = report.summary()
    tag = " (illustrative)" if sc.illustrative else ""
    print(f"{name}{tag}: {s['passed']}/{s['total']} checks passed")
    if sc.states:
        for rec in run_scenario(sc, "defect").checks:
            print(f"  {rec.name} = {rec.value}")
