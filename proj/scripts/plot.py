#!/usr/bin/env python3
"""Quick-look plots of qdot CSV outputs. The plot type follows the file name."""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def spectrum(df, ax):
    for l, g in df.groupby("l"):
        ax.plot(g["sweep_param"], g["E"], ".", ms=2, label=f"l={l}" if l < 4 else None)
    ax.set_xlabel("r_c")
    ax.set_ylabel("E")


def trajectory(df, ax):
    ax.plot(df["t"], df["pop_q1"], label="|c_q1|^2")
    ax.plot(df["t"], df["pop_q2"], label="|c_q2|^2")
    ax.plot(df["t"], df["leakage"], label="leakage")
    ax.set_xlabel("t")


def strength(df, ax):
    ax.loglog(df["A0"], df["L_p"], "o-")
    ax.set_xlabel("A0")
    ax.set_ylabel("L_p")


def detuning(df, ax):
    ax.semilogy(df["omega_rel"], df["L_p_rel"], "o-", ms=3)
    ax.set_xlabel("omega / omega_res")
    ax.set_ylabel("L_p / L_p(resonance)")


def v0(df, ax):
    for a0, g in df.groupby("A0"):
        ax.semilogy(g["V0"], g["L_p"], "o-", ms=3, label=f"A0={a0:g}")
    ax.set_xlabel("V0")
    ax.set_ylabel("L_p")


KINDS = {
    "spectrum": spectrum,
    "trajectory": trajectory,
    "sweep_strength": strength,
    "sweep_detuning": detuning,
    "sweep_v0": v0,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", type=Path)
    ap.add_argument("-o", "--output", type=Path, help="image path (default: CSV name with .png)")
    args = ap.parse_args()

    kind = next((k for k in KINDS if args.csv.stem.endswith(k)), None)
    if kind is None:
        sys.exit(f"don't know how to plot {args.csv.name}")
    fig, ax = plt.subplots(figsize=(6, 4))
    KINDS[kind](pd.read_csv(args.csv), ax)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=8)
    fig.tight_layout()
    out = args.output or args.csv.with_suffix(".png")
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
