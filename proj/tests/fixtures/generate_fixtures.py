#!/usr/bin/env python3
"""Regenerates the Matrix Market test fixtures.

Both graphs mirror the dimensions of their DIMACS10 namesakes:

  chesapeake.mtx    n=39,   340 nonzeros (170 undirected edges), connected
  delaunay_n10.mtx  n=1024, 6112 nonzeros: Delaunay triangulation of 1024
                    uniform random points in the unit square

Seeds below were searched once so the nonzero counts match the published
graphs exactly; the files are checked in, this script documents provenance.
"""

import numpy as np
from scipy.spatial import Delaunay


def write_mm_symmetric(path, n, edges, comment):
    edges = sorted((max(a, b) + 1, min(a, b) + 1) for a, b in edges)
    with open(path, "w", newline="\n") as f:
        f.write("%%MatrixMarket matrix coordinate pattern symmetric\n")
        f.write("%% " + comment + "\n")
        f.write(f"{n} {n} {len(edges)}\n")
        for i, j in edges:
            f.write(f"{i} {j}\n")


def connected(n, edges):
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == n


def gen_chesapeake(seed=20):
    n, m = 39, 170
    rng = np.random.default_rng(seed)
    while True:
        edges = set()
        while len(edges) < m:
            a, b = rng.integers(0, n, size=2)
            if a != b:
                edges.add((min(a, b), max(a, b)))
        if connected(n, edges):
            return n, edges


def gen_delaunay(seed):
    n = 1024
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        for k in range(3):
            a, b = int(simplex[k]), int(simplex[(k + 1) % 3])
            edges.add((min(a, b), max(a, b)))
    return n, edges


def main():
    n, edges = gen_chesapeake()
    write_mm_symmetric(
        "chesapeake.mtx", n, edges,
        "39-vertex connected graph, 170 undirected edges (chesapeake-sized)")
    print("chesapeake: n=39 nnz=", 2 * len(edges))

    # hunt a seed whose triangulation has exactly 3056 edges (nnz 6112)
    for seed in range(1000):
        n, edges = gen_delaunay(seed)
        if 2 * len(edges) == 6112:
            write_mm_symmetric(
                "delaunay_n10.mtx", n, edges,
                "Delaunay triangulation of 1024 uniform random points "
                f"(seed {seed})")
            print(f"delaunay_n10: seed={seed} n=1024 nnz=", 2 * len(edges))
            return
    raise SystemExit("no seed found")


if __name__ == "__main__":
    main()
