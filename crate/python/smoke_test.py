#!/usr/bin/env python3
"""Smoke test for the phaseclust_py extension module.

Builds the cdylib if needed, makes it importable under the module name the
interpreter expects, and exercises every binding: the published interaction
function, the N = 6 catalog, twist/homogeneous delay sweeps, and a short
seeded network simulation.

Run from anywhere:  python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    """Compile phaseclust-py and return an importable phaseclust_py.* path.

    The crate produces libphaseclust_py.so; CPython wants the file named
    after the module, so copy it next to this script under that name.
    """
    lib = REPO / "target" / "debug" / "libphaseclust_py.so"
    if not lib.exists():
        subprocess.run(
            ["cargo", "build", "-p", "phaseclust-py"], cwd=REPO, check=True
        )
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    dest = Path(__file__).resolve().parent / f"phaseclust_py{suffix}"
    if not dest.exists() or lib.stat().st_mtime > dest.stat().st_mtime:
        shutil.copy2(lib, dest)
    return dest


def check(name: str, ok: bool, detail: str = "") -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    return ok


def main() -> int:
    dest = build_extension()
    sys.path.insert(0, str(dest.parent))
    import phaseclust_py as pc

    ok = True

    # Published interaction function: frequency constants and a sanity
    # check that h'(0) < 0 (synchrony is stable at zero delay).
    h = pc.Interaction.published()
    ok &= check(
        "published interaction loads",
        h.order == 9
        and math.isclose(h.omega, pc.REFERENCE_OMEGA)
        and math.isclose(h.period, pc.REFERENCE_PERIOD),
        f"K={h.order}, omega={h.omega:.4f}, T={h.period:.2f}",
    )
    ok &= check(
        "h'(0) negative (sync stable at tau=0)",
        h.derivative(0.0) < 0.0,
        f"h'(0)={h.derivative(0.0):.4f}",
    )
    a0, a, b = h.coefficients()
    rebuilt = pc.Interaction(a0, a, b, h.omega)
    ok &= check(
        "coefficient round-trip",
        math.isclose(rebuilt.eval(1.0), h.eval(1.0)),
    )

    # Catalog: six symmetric states on the N = 6 ring with the expected
    # cluster counts 1C, 6C, 3C, 2C, 3C, 6C for q = 0..5.
    states = pc.catalog(6)
    counts = [s["n_clusters"] for s in states]
    ok &= check(
        "catalog(6) cluster counts",
        counts == [1, 6, 3, 2, 3, 6],
        f"counts={counts}",
    )
    sync = states[0]
    ok &= check(
        "sync state is one cluster of all six",
        sync["q"] == 0 and sync["clusters"] == [[1, 2, 3, 4, 5, 6]],
    )

    # Sweeps: synchrony on the distance-weighted ring is stable near
    # tau = 0 and again near tau = T, unstable in between; the same state
    # through the homogeneous (two-oscillator) reduction agrees.
    tw = pc.twist_intervals(h, 6, 0, grid=800)
    ok &= check(
        "sync twist sweep: two intervals hugging 0 and T",
        len(tw) == 2
        and tw[0][0] == 0.0
        and tw[0][1] < 3.0
        and tw[1][0] > 12.0
        and math.isclose(tw[1][1], h.period),
        f"intervals={[(round(a, 3), round(b, 3)) for a, b in tw]}",
    )
    hm = pc.homogeneous_intervals(h, 2, 1, grid=800)
    ok &= check(
        "homogeneous 2-oscillator sync sweep has the same shape",
        len(hm) == 2 and hm[0][0] == 0.0 and math.isclose(hm[1][1], h.period),
        f"intervals={[(round(a, 3), round(b, 3)) for a, b in hm]}",
    )

    # A delay inside the sync gap where the 3-cluster twist is stable.
    q2 = pc.twist_intervals(h, 6, 2, grid=800)
    ok &= check(
        "q=2 twist stable somewhere sync is not",
        any(a <= 2.0 <= b for a, b in q2)
        and not any(a <= 2.0 <= b for a, b in tw),
        f"q2 intervals={[(round(a, 3), round(b, 3)) for a, b in q2]}",
    )

    # Full DDE run: start near the 3-cluster state at tau = 2 with seeded
    # jitter and confirm the network settles back onto it.
    sim = pc.simulate_clusters(
        6, 2.0, q=2, epsilon=0.001, duration_periods=25.0, jitter=0.03, seed=7
    )
    ok &= check(
        "simulation recovers the 3-cluster state",
        sim["label"] is not None
        and sim["n_clusters"] == 3
        and sim["residual"] < 0.05,
        f"label={sim['label']}, residual={sim.get('residual', float('nan')):.4f}",
    )

    print("smoke test:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
