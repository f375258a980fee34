"""Independent oracle for the orthonormalized linear spline, k = 1.

Plain truncated sums over |l| <= L of the raw B-spline terms, no tail model:

    G_1(w) / G_0(w) = sum x^2 sinc^4(x / 2pi) / sum sinc^4(x / 2pi),  x = w + 2 pi l.

A full M x (2L + 1) table is ~2e11 terms, so the M-point grid is scanned
with a short truncation first and the best 1024 cells are recomputed at
L = 1e5.  Writes linear_spline_grid.json next to this file.
"""

import json
from pathlib import Path

import numpy as np

L = 10 ** 5
M = 2 ** 20
PILOT_L = 64
TOP = 1024


def truncated_ratio(w, n_terms, chunk=2048):
    ell = np.arange(-n_terms, n_terms + 1, dtype=float)
    num = np.zeros(w.size)
    den = np.zeros(w.size)
    for i in range(0, w.size, chunk):
        x = w[i:i + chunk, None] + 2 * np.pi * ell[None, :]
        s = np.sinc(x / (2 * np.pi)) ** 4
        num[i:i + chunk] = np.sort(x * x * s, axis=1).sum(axis=1)
        den[i:i + chunk] = np.sort(s, axis=1).sum(axis=1)
    return num / den


def main():
    grid = np.arange(M) * (2 * np.pi / M)
    pilot = np.concatenate([truncated_ratio(grid[i:i + 65536], PILOT_L) for i in range(0, M, 65536)])
    best = np.argsort(pilot)[-TOP:]
    fine = truncated_ratio(grid[best], L, chunk=8)
    j = int(np.argmax(fine))
    out = {
        "L": L,
        "M": M,
        "value": float(fine[j]),
        "argmax": float(grid[best][j]),
        # omitted terms at w = pi: sum_{|l| > L} 16 / (pi (2l + 1))^2 in G_1, divided by G_0 = 1/3
        "truncation_error": float(3 * 2 * 16 / (np.pi ** 2 * 2 * (2 * L + 1))),
    }
    Path(__file__).with_suffix(".json").write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
