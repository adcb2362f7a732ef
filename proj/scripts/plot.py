"""Plots the CSV files of one zeno output directory."""

import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def save(fig, directory, name):
    path = directory / name
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    print(path)


def timeseries(directory):
    ts = pd.read_csv(directory / "timeseries.csv")
    if "re_q" not in ts:
        return
    q = np.hypot(ts.re_q, ts.im_q)
    q0 = np.hypot(ts.re_q0, ts.im_q0)

    fig, ax = plt.subplots()
    ax.plot(ts.t, q, label="|q(t)|")
    ax.plot(ts.t, q0, "--", label="|q0(t)|")
    ax.set_xlabel("t")
    ax.legend()
    save(fig, directory, "amplitude.png")

    fig, ax = plt.subplots()
    ax.plot(ts.t, ts.re_D, label="Re D")
    ax.plot(ts.t, ts.im_D, label="Im D")
    ax.plot(ts.t, ts.abs_D, "k", label="|D|")
    ax.set_xlabel("t")
    ax.legend()
    save(fig, directory, "D.png")

    fig, ax = plt.subplots()
    ax.plot(ts.t, ts.P_sur, label="P_sur(t)")
    ax.plot(ts.t, ts.abs_D, "--", label="|D(t)|")
    ax.set_xlabel("t")
    ax.legend()
    save(fig, directory, "survival.png")


def spreading(directory):
    path = directory / "delta.csv"
    if not path.exists():
        return
    delta = pd.read_csv(path)
    fig, ax = plt.subplots()
    ax.plot(delta.E, delta.Delta)
    ax.axvline(0.0, color="grey", lw=0.5)
    ax.set_xlabel("E")
    ax.set_ylabel("Delta(E)")
    save(fig, directory, "delta.png")


def sweep(directory):
    path = directory / "sweep.csv"
    if not path.exists():
        return
    s = pd.read_csv(path).sort_values("E_fin")
    s = s[s.E_fin > 0]
    if s.empty:
        return
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True)
    top.semilogy(s.E_fin, s.Gamma0, label="Gamma0")
    top.semilogy(s.E_fin, s.Gamma.clip(lower=1e-300), "o--", label="Gamma")
    top.legend()
    bottom.plot(s.E_fin, s.Gamma_over_Gamma0, "o-")
    bottom.set_xlabel("E_fin")
    bottom.set_ylabel("Gamma / Gamma0")
    save(fig, directory, "gamma.png")


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: plot.py OUTPUT_DIR")
    directory = pathlib.Path(sys.argv[1])
    timeseries(directory)
    spreading(directory)
    sweep(directory)


if __name__ == "__main__":
    main()
