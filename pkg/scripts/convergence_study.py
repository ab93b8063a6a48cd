"""How fast simulated observables approach their long-time values.

Prints, per time, the worst deviation of the instantaneous entanglement entropy
from its asymptotic value over a 10 x 10 Bloch grid of local walks, the same
after averaging over a 4-step window, and the ensemble mean entropy of the
figure-3 subgrid for Gaussian Fourier walks.

    python3 scripts/convergence_study.py --times 300 600 1200 2400
"""

import argparse
import math

import numpy as np

from qwalk import FOURIER, HADAMARD, Qubit
from qwalk import kspace as K
from qwalk.ensemble import figure3_ensemble, final_observables


def local_entropy_deviation(coin, t, a, b, expected, window):
    vals = [final_observables(a, b, coin, s)[1] for s in range(t - window + 1, t + 1)]
    return float(np.max(np.abs(np.mean(vals, axis=0) - expected)))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--times", type=int, nargs="+", default=[300, 600, 1200, 2400])
    ap.add_argument("--sigma0", type=float, default=10.0)
    args = ap.parse_args()

    a, b = np.meshgrid(np.linspace(0, math.pi, 10), np.linspace(0, 2 * math.pi, 10, endpoint=False), indexing="ij")
    a, b = a.ravel(), b.ravel()
    print("coin,t,max_dev_instant,max_dev_4step,max_dev_times_sqrt_t,fig3_subgrid_mean_entropy")
    for name, coin in (("hadamard", HADAMARD), ("fourier", FOURIER)):
        expected = np.array([K.asymptotic_entropy(K.delta_local(Qubit(x, y), coin)) for x, y in zip(a, b)])
        for t in args.times:
            inst = local_entropy_deviation(coin, t, a, b, expected, 1)
            win = local_entropy_deviation(coin, t, a, b, expected, 4)
            ens = figure3_ensemble(coin, args.sigma0, t, subsample=9, sample_every=t).entropy[-1]
            print(f"{name},{t},{inst:.5f},{win:.2e},{inst * math.sqrt(t):.4f},{ens:.4f}")


if __name__ == "__main__":
    main()
