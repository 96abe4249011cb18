"""Brute-force reference computations used to cross-check the library.

Everything here works from raw tables (dicts and tuples) and deliberately
shares no code with ``tandisp``: cones are enumerated from scratch, the
functor orbit is found by naive iteration, and ranks over GF(2) use Python
integers as bit vectors.
"""

from __future__ import annotations

import itertools


class Tables:
    def __init__(self, cat):
        self.objects = list(cat.objects)
        self.arrows = dict(cat.arrows())
        self.comp = dict(cat.composition())
        self.ids = dict(cat.identities())

    def hom(self, a, b):
        return [f for f, (x, y) in self.arrows.items() if x == a and y == b]

    def into(self, b):
        return [f for f, (_, y) in self.arrows.items() if y == b]

    def then(self, f, g):
        return self.comp[(f, g)]


def is_mono(t: Tables, m):
    a = t.arrows[m][0]
    for x in t.objects:
        us = t.hom(x, a)
        images = [t.then(u, m) for u in us]
        if len(set(images)) != len(images):
            return False
    return True


def is_pullback(t: Tables, top, bottom, leftv, rightv):
    """Unique factorisation of every cone through (leftv, top)."""
    apex = t.arrows[top][0]
    n, e = t.arrows[bottom][0], t.arrows[rightv][0]
    for x in t.objects:
        for a in t.hom(x, n):
            for b in t.hom(x, e):
                if t.then(a, bottom) != t.then(b, rightv):
                    continue
                fac = [u for u in t.hom(x, apex) if t.then(u, leftv) == a and t.then(u, top) == b]
                if len(fac) != 1:
                    return False
    return True


def has_pullback(t: Tables, f, q):
    """Some commuting square over the cospan ``f -> . <- q`` is a pullback."""
    for top in t.arrows:
        for leftv in t.arrows:
            if t.arrows[top][0] != t.arrows[leftv][0]:
                continue
            if t.arrows[leftv][1] != t.arrows[f][0] or t.arrows[top][1] != t.arrows[q][0]:
                continue
            if t.then(leftv, f) == t.then(top, q) and is_pullback(t, top, f, leftv, q):
                return (top, leftv)
    return None


def orbit_powers(t: Tables, T_obj, T_mor):
    """List of distinct iterates (obj map, mor map), F^0 first, until a repeat."""
    ident = ({a: a for a in t.objects}, {f: f for f in t.arrows})
    powers = [ident]
    seen = {_key(ident): 0}
    while True:
        o, m = powers[-1]
        nxt = ({a: T_obj[o[a]] for a in t.objects}, {f: T_mor[m[f]] for f in t.arrows})
        k = _key(nxt)
        if k in seen:
            return powers
        seen[k] = len(powers)
        powers.append(nxt)


def _key(pair):
    o, m = pair
    return (tuple(sorted(o.items())), tuple(sorted(m.items())))


def is_t_pullback(t: Tables, powers, top, bottom, leftv, rightv):
    return all(is_pullback(t, m[top], m[bottom], m[leftv], m[rightv]) for _, m in powers)


def admits_t_pullbacks(t: Tables, powers, q):
    """Every cospan into ``q`` has a pullback, and the chosen one is a T-pullback.

    Pullbacks are unique up to iso and T preserves isos, so checking one
    representative per cospan is enough.
    """
    for f in t.into(t.arrows[q][1]):
        sq = has_pullback(t, f, q)
        if sq is None:
            return False
        top, leftv = sq
        if not is_t_pullback(t, powers, top, f, leftv, q):
            return False
    return True


def is_t_display(t: Tables, powers, q):
    return all(admits_t_pullbacks(t, powers, m[q]) for _, m in powers)


def is_etale(t: Tables, powers, p, T_mor, q):
    e, m = t.arrows[q]
    return is_t_pullback(t, powers, p[e], p[m], T_mor[q], q)


def open_scan(cat, ts):
    """Tangent monic, tangent display, etale maps found by exhaustive search."""
    t = Tables(cat)
    T_obj, T_mor = dict(ts.T.obj_map), dict(ts.T.mor_map)
    powers = orbit_powers(t, T_obj, T_mor)
    out = set()
    for q in t.arrows:
        if not all(is_mono(t, m[q]) for _, m in powers):
            continue
        if is_etale(t, powers, ts.p, T_mor, q) and is_t_display(t, powers, q):
            out.add(q)
    return out


# ---------------------------------------------------------------------------
# GF(2) linear algebra on bit vectors


def gf2_rank(rows):
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        pivot = max(rows)
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows if r != pivot]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def gf2_pushout_dim(dim_m, dim_n, dim_e, mult_n, mult_e, f, g):
    """Dimension of ``N (x)_M E`` over GF(2) from structure constants.

    ``mult_n[i][j]`` is the coordinate list of ``n_i n_j``; ``f[k]`` the
    coordinates of ``f(m_k)`` in N, likewise ``g``.  Tensors ``n_i (x) e_j``
    are bit ``i * dim_e + j``.
    """
    def times(mult, x, i):
        # coordinates of x * basis_i
        out = [0] * len(x)
        for a, xa in enumerate(x):
            if xa:
                out = [(u + v) % 2 for u, v in zip(out, mult[a][i])]
        return out

    rows = []
    for k, i, j in itertools.product(range(dim_m), range(dim_n), range(dim_e)):
        left = times(mult_n, f[k], i)
        right = times(mult_e, g[k], j)
        bits = 0
        for a in range(dim_n):
            if left[a]:
                bits ^= 1 << (a * dim_e + j)
        for b in range(dim_e):
            if right[b]:
                bits ^= 1 << (i * dim_e + b)
        rows.append(bits)
    return dim_n * dim_e - gf2_rank(rows)
