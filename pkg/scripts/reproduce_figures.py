"""Write the CSV datasets for figures 1-5 into an output directory.

    python3 scripts/reproduce_figures.py --out results/
    python3 scripts/reproduce_figures.py --out results/ --full   # 2016 qubits, 3000 steps
"""

import argparse
import pathlib
import time

from qwalk import figures
from qwalk.cli import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--full", action="store_true", help="full figure-3 ensemble instead of the 224-qubit, 300-step run")
    ap.add_argument("--stride", type=int, default=10, help="figure-3 sampling stride")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fig3 = dict(steps=3000, subsample=1) if args.full else dict(steps=300, subsample=9)
    jobs = {
        "figure1.csv": lambda: figures.figure1(),
        "figure2.csv": lambda: figures.figure2(),
        "figure3.csv": lambda: figures.figure3(sample_every=args.stride, **fig3),
        "figure4.csv": lambda: figures.figure4(),
        "figure5.csv": lambda: figures.figure5(),
    }
    for name, build in jobs.items():
        t0 = time.perf_counter()
        rows = build()
        with open(out / name, "w", newline="") as fh:
            write_csv(rows, fh)
        print(f"{name}: {len(rows)} rows in {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
