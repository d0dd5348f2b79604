#!/usr/bin/env python3
"""Writes data/synthetic.csv: p1 / (1/(p2 + x) - |p3|^x) plus 1% Gaussian noise."""
import random
import sys

THETA = (0.301, 0.673, -0.453)
N = 100


def f(x):
    p1, p2, p3 = THETA
    return p1 / (1.0 / (p2 + x) - abs(p3) ** x)


def main(path):
    rng = random.Random(20240607)
    with open(path, "w") as out:
        out.write("# p1 / (1.0 / (p2 + x) - p3 ^ x), theta = %s, 1%% relative noise\n" % (list(THETA),))
        out.write("x,y\n")
        for i in range(N):
            x = 0.2 + 2.8 * i / (N - 1)
            y = f(x) * (1.0 + 0.01 * rng.gauss(0.0, 1.0))
            out.write("%.6f,%.9f\n" % (x, y))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/synthetic.csv")
