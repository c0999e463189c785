"""Plot sweep CSVs for visual comparison with published dispersion figures.

Usage:
    fracwave sweep --alpha 0.3 --out a03.csv
    fracwave sweep --family continuum-ml --alpha 0.3 --band 1e-2:1e2 --out a03_band.csv
    python tools/plot_curves.py a03.csv a03_band.csv --out fig.png

Dev tooling only; needs matplotlib (``pip install -e .[plot]``).
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from fracwave.dispersion import read_csv  # noqa: E402


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv", nargs="+", type=Path)
    parser.add_argument("--out", type=Path, default=Path("curves.png"))
    args = parser.parse_args(argv)

    fig, (ax_att, ax_cp) = plt.subplots(1, 2, figsize=(10, 4))
    for path in args.csv:
        cols = read_csv(path)
        w = cols["omega_norm"]
        att = cols["alpha_k_norm"]
        if all(x != x for x in att):
            att = cols["alpha_k"]
        ax_att.loglog(w, att, label=path.stem)
        ax_cp.semilogx(w, cols["c_p"], label=path.stem)
    ax_att.set(xlabel=r"$\omega\tau_\sigma$", ylabel=r"$\alpha_k$ (normalized)")
    ax_cp.set(xlabel=r"$\omega\tau_\sigma$", ylabel=r"$c_p$")
    for ax in (ax_att, ax_cp):
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
