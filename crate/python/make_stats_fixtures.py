"""Regenerates crates/cli/tests/fixtures/stats.json with scipy."""

import json
import pathlib

import numpy as np
from scipy import stats

CASES = [
    ("shifted", [1, 2, 3, 4, 5], [11, 12, 13, 14, 15]),
    ("overlapping", [0.82, 0.91, 0.77, 1.04, 0.88, 0.95, 0.79, 0.86, 0.93, 0.90],
     [0.97, 1.02, 0.89, 1.10, 0.94, 1.05, 0.99, 0.92, 1.08, 1.01]),
    ("unequal_variance", [1.1, 0.9, 1.0, 1.05, 0.95, 1.02],
     [0.2, 2.4, 1.9, 0.1, 3.0, 0.5, 2.2]),
    ("small_unequal_n", [2.3, 2.9, 3.1], [2.0, 2.8, 2.5, 3.6, 2.2, 2.7, 3.0, 2.4]),
    ("no_difference", [0.61, 0.72, 0.55, 0.68, 0.70, 0.59],
     [0.66, 0.58, 0.71, 0.63, 0.69, 0.57]),
]

ALPHA = 0.05


def case(name, a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    va, vb = a.var(ddof=1), b.var(ddof=1)
    f = va / vb
    dist = stats.f(len(a) - 1, len(b) - 1)
    f_p = min(1.0, 2 * min(dist.cdf(f), dist.sf(f)))
    welch = f_p < ALPHA
    t = stats.ttest_ind(a, b, equal_var=not welch)
    return {
        "name": name,
        "a": a.tolist(),
        "b": b.tolist(),
        "alpha": ALPHA,
        "f_statistic": float(f),
        "f_p_value": float(f_p),
        "welch_used": bool(welch),
        "t_statistic": float(t.statistic),
        "t_df": float(t.df),
        "t_p_value": float(t.pvalue),
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "crates/cli/tests/fixtures/stats.json"
    out.write_text(json.dumps([case(*c) for c in CASES], indent=2) + "\n")


if __name__ == "__main__":
    main()
