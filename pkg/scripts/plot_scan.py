"""
Plots S_q(kappa) curves from a `scan-s` CSV, one curve per q, keeping only positive values.

    python main.py scan-s --scenario chsh-dephasing --metric dtilde \
        --q 1.0,1.2,1.5,2.0,2.5 --kappa 0:1.5:0.01 --out fig1.csv
    python scripts/plot_scan.py fig1.csv fig1.png
"""
import sys

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd


def plot(csv_path: str, png_path: str):
    df = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    for q, rows in df[df['positive']].groupby('q'):
        ax.plot(rows['kappa'], rows['s_value'], label=f"q = {q:g}")
    ax.set_xlabel('kappa')
    ax.set_ylabel('S_q(kappa)')
    ax.set_title(', '.join(df['scenario'].unique()))
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == '__main__':
    plot(sys.argv[1], sys.argv[2])
