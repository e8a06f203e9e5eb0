"""Walk the membrane pressure landscape as the magnet coupling grows.

Prints the stationary points for a few coupling strengths, locates the
critical coefficient where the S-shape flattens out, and (if matplotlib is
around) draws the family of curves.
"""

import os

import numpy as np

from magpump import (MagnetoElasticParams, critical_coefficient,
                     pressure_star, stationary_points)

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

OUT_DIR = os.path.join(os.path.dirname(__file__), "output")

A_VALUES = (0.0, 0.05, 0.1, 0.13, 0.2)


def main():
    ac = critical_coefficient(1.5)
    print(f"critical coupling for z1*=1.5: a_crit = {ac:.8f}")
    print()
    print(f"{'a':>6} {'stationary points':>40}")
    for a in A_VALUES:
        params = MagnetoElasticParams.symmetric(a)
        pts = stationary_points(params)
        if pts:
            desc = ", ".join(f"{p.kind} at z*={p.z_star:.4f} "
                             f"(p*={p.p_star:.4f})" for p in pts)
        else:
            desc = "none (monotonic: no snap-through)"
        marker = "<" if a < ac else ">"
        print(f"{a:6.3f} {marker} a_crit   {desc}")
    print()
    print("below a_crit the curve folds back on itself: over a band of")
    print("pressures the membrane has two stable positions, which is what")
    print("the cycle and pump layers exploit.")

    if plt is None:
        print("\nmatplotlib not installed; skipping the figure")
        return

    os.makedirs(OUT_DIR, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for a in A_VALUES:
        params = MagnetoElasticParams.symmetric(a)
        zs = np.linspace(params.z_in_star, params.z_out_star, 400)
        ax.plot(zs, pressure_star(zs, params), label=f"a = {a:g}")
        for p in stationary_points(params):
            ax.plot([p.z_star], [p.p_star], "k.", ms=6)
    ax.set_xlabel("membrane position z*")
    ax.set_ylabel("equilibrium pressure p*")
    ax.set_title("pressure landscape vs magnet coupling")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(OUT_DIR, "pressure_landscape.png")
    fig.savefig(path, dpi=150)
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
