"""Write the five figure datasets (CSV) and matching gnuplot scripts.

    python3 scripts/make_figures.py --out figures
    cd figures && gnuplot fig1.gp
"""

import argparse
import os

from teleportlab import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--points", type=int, default=101)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for fig in range(1, 6):
        table = sweep.figure_dataset(fig, args.points)
        csv_name = f"fig{fig}.csv"
        with open(os.path.join(args.out, csv_name), "w", newline="\n") as fh:
            fh.write(table.to_csv())
        with open(os.path.join(args.out, f"fig{fig}.gp"), "w", newline="\n") as fh:
            fh.write(sweep.gnuplot_script(fig, table, csv_name))
        print(f"fig{fig}: {len(table.rows)} rows, columns {', '.join(table.columns)}")


if __name__ == "__main__":
    main()
