"""Simulated (fixed Pauli corrections) vs optimal average fidelity on the
mixed non-orthogonal channel.

The fixed table gives g(3 - r^2)/(3(1 + r^2)) + (1 - g)/2, which falls
2 g r^2 / (3 (1 + r^2)) short of (1 + nu/3)/2 whenever r > 0.
"""

import argparse

import numpy as np

from teleportlab import teleport as tp
from teleportlab.states import epsilon_bound, make_channel


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=32, help="quadrature nodes per axis")
    ap.add_argument("--theta", type=float, default=0.0)
    args = ap.parse_args()

    print(f"{'r':>5} {'eps':>5} {'g':>8} {'simulated':>10} {'optimal':>10} {'shortfall':>10} {'predicted':>10}")
    worst = 0.0
    for r in np.linspace(0.0, 0.9, 10):
        for eps in (0.05, 0.1, 0.2, 0.3, 0.4, 0.6):
            if eps > epsilon_bound(r):
                continue
            ch = make_channel("nonorth-mixed", r=r, theta=args.theta, eps=eps)
            g = ch.params["g"]
            sim = tp.avg_fidelity_numeric(ch, "quadrature", args.n)
            opt = tp.avg_fidelity_horodecki(ch)
            pred = 2 * g * r * r / (3 * (1 + r * r))
            worst = max(worst, opt - sim)
            print(f"{r:5.2f} {eps:5.2f} {g:8.5f} {sim:10.6f} {opt:10.6f} {opt - sim:10.6f} {pred:10.6f}")
    print(f"largest shortfall: {worst:.6f}")


if __name__ == "__main__":
    main()
