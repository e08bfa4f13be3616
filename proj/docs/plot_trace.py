#!/usr/bin/env python3
"""Plot bench trace CSVs: objective value and gradient norm vs evaluations.

Usage: python3 docs/plot_trace.py results/*.csv [-o out.png]
"""
import argparse

import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csvs", nargs="+", help="trace CSV files from `bench run`")
    ap.add_argument("-o", "--out", default="trace.png")
    args = ap.parse_args()

    fig, (ax_f, ax_g) = plt.subplots(1, 2, figsize=(10, 4))
    for path in args.csvs:
        df = pd.read_csv(path)
        label = path.rsplit("/", 1)[-1].removesuffix(".csv")
        ax_f.plot(df["cum_evals"], df["f"], label=label)
        ax_g.plot(df["cum_evals"], df["gnorm"], label=label)
    ax_f.set_xlabel("evaluations")
    ax_f.set_ylabel("f(x_k)")
    ax_f.set_yscale("symlog", linthresh=1e-3)
    ax_g.set_xlabel("evaluations")
    ax_g.set_ylabel("||g_k||")
    ax_g.set_yscale("log")
    ax_f.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
