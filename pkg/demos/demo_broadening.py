"""From sticks to a band profile.

Builds the exact reference spectrum of the 8-mode fixture, broadens it
with a 30 cm^-1 Lorentzian (high-resolution view) and with 100/300
cm^-1 Gaussians (the narrow kernel shows which lines build each band;
the wide one merges them into the room-temperature envelope), and
writes CSV + SVG outputs.

Run:  python3 demos/demo_broadening.py
"""

from pathlib import Path

from vibronic import (
    BroadeningKernel,
    EnergyGrid,
    SosConfig,
    broaden,
    build_reference_spectrum,
    normalize,
)
from vibronic.fixtures import pentacene_like_8
from vibronic.io import write_spectrum, write_svg

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)

molecule = pentacene_like_8()
sticks = build_reference_spectrum(molecule, SosConfig(max_quanta=2))
sticks = normalize(sticks, "zero_zero_one", e00=molecule.e00)
write_spectrum(sticks, out_dir / "sticks.csv")
print(f"{len(sticks)} sticks, 0-0 line at {molecule.e00} cm^-1")

for shape, fwhm in [("lorentzian", 30.0), ("gaussian", 100.0), ("gaussian", 300.0)]:
    kernel = BroadeningKernel(shape, fwhm)
    grid = EnergyGrid.around(sticks.energies, fwhm)
    profile = broaden(sticks, kernel, grid)
    stem = f"profile_{shape}_{int(fwhm)}"
    write_spectrum(profile, out_dir / f"{stem}.csv")
    write_svg(profile, out_dir / f"{stem}.svg")
    print(f"wrote {stem}.csv / .svg  ({len(profile)} grid points)")
