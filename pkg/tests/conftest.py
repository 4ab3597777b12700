from __future__ import annotations


def brute_local_minima(g, f) -> list:
    """Every non-strict local minimum of f, by full enumeration."""
    out = []
    for v in g.vertices():
        fv = f(v)
        if all(fv <= f(w) for w in g.neighbors_of(v)):
            out.append(v)
    return out
