"""Fidelity vs event count for the bundled synthetic fixtures.

Reproduces the convergence picture: a few hundred events already give
a recognizable profile, and past ~1e4-1e5 events the sampled spectrum
is nearly indistinguishable (F > 0.99) from the exact reference.

Run:  python3 demos/demo_convergence.py
"""

from vibronic import DetectorModel, SamplerConfig, SosConfig, convergence_study
from vibronic.fixtures import (
    anthracene_like_12,
    naphthalene_like_9,
    pentacene_like_8,
)

EVENT_COUNTS = [100, 300, 1000, 3000, 10_000, 30_000, 100_000]
RUNS = 30

for molecule, k in [
    (pentacene_like_8(), 1),
    (naphthalene_like_9(), 3),
    (anthracene_like_12(), 3),
]:
    report = convergence_study(
        molecule,
        SamplerConfig(events=1, seed=1234, max_quanta=k),
        DetectorModel(),
        EVENT_COUNTS,
        runs=RUNS,
        sos_cfg=SosConfig(max_quanta=k, overflow="cap"),
    )
    print(f"\n{molecule.name} (K={k}, {molecule.n_modes} modes, {RUNS} runs)")
    print(f"{'events':>10} {'mean F':>10} {'std F':>10}")
    for p, mu, sd in zip(report.event_counts, report.mean_fidelity, report.std_fidelity):
        print(f"{p:>10} {mu:>10.6f} {sd:>10.2e}")
