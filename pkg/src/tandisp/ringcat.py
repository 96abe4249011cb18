"""Finite commutative algebras over a prime field, dual numbers and pushouts.

Pullbacks in the opposite category of commutative rings are pushouts of
algebras, i.e. relative tensor products ``N (x)_M E``.  Everything here is
exact integer arithmetic mod ``p``; numpy arrays only hold the tables.

Vectors are rows.  A hom ``f: A -> B`` is a ``(dim A, dim B)`` matrix and
acts by ``x @ f.matrix``.  Structure constants ``mult[i, j, k]`` give the
coefficient of basis element ``k`` in ``b_i * b_j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear algebra mod p


def rref(mat: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form mod ``p``; returns the nonzero rows and pivot columns."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2 or a.shape[0] == 0:
        return np.zeros((0, a.shape[-1] if a.ndim == 2 else 0), dtype=np.int64), []
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def reduce_rows(vs: np.ndarray, basis: np.ndarray, pivots: Sequence[int], p: int) -> np.ndarray:
    """Reduce each row of ``vs`` modulo the row space of an RREF ``basis``."""
    out = np.array(vs, dtype=np.int64) % p
    for row, c in zip(basis, pivots):
        out = (out - np.outer(out[:, c], row)) % p
    return out


def inverse_matrix(mat, p: int) -> Optional[np.ndarray]:
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    r, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return r[:n, n:] % p


# ---------------------------------------------------------------------------
# algebras and homs


@dataclass
class FiniteAlgebra:
    prime: int
    basis: Tuple[str, ...]
    mult: np.ndarray
    unit: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.basis = tuple(self.basis)
        self.mult = np.array(self.mult, dtype=np.int64) % self.prime
        self.unit = np.array(self.unit, dtype=np.int64) % self.prime
        d = len(self.basis)
        if self.mult.shape != (d, d, d) or self.unit.shape != (d,):
            raise AlgebraError(f"table shapes do not match dimension {d}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.prime ** self.dim

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.prime

    def mul_many(self, xs, ys) -> np.ndarray:
        """Row-wise products of two stacks of vectors."""
        return np.einsum("ri,rj,ijk->rk", xs, ys, self.mult) % self.prime

    def elements(self):
        for coords in itertools.product(range(self.prime), repeat=self.dim):
            yield np.array(coords, dtype=np.int64)

    def validate(self) -> List[str]:
        """Names of violated ring laws, empty when the table is a commutative unital algebra."""
        p, m, d = self.prime, self.mult, self.dim
        errs = []
        if not np.array_equal(m, m.transpose(1, 0, 2)):
            errs.append("commutativity")
        left = np.einsum("ijl,lkm->ijkm", m, m) % p
        right = np.einsum("jkl,ilm->ijkm", m, m) % p
        if not np.array_equal(left, right):
            errs.append("associativity")
        if not np.array_equal(np.einsum("i,ijk->jk", self.unit, m) % p, np.eye(d, dtype=np.int64)):
            errs.append("unit")
        return errs


@dataclass
class AlgebraHom:
    source: FiniteAlgebra
    target: FiniteAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=np.int64).reshape(self.source.dim, self.target.dim) \
            % self.source.prime

    def __call__(self, x):
        return (np.asarray(x) @ self.matrix) % self.source.prime

    def then(self, other: "AlgebraHom") -> "AlgebraHom":
        return AlgebraHom(self.source, other.target, (self.matrix @ other.matrix) % self.source.prime)

    def validate(self) -> List[str]:
        A, B, p = self.source, self.target, self.source.prime
        errs = []
        if not np.array_equal(self(A.unit), B.unit):
            errs.append("unit")
        img = self.matrix
        prod_then_f = np.einsum("ijk,kl->ijl", A.mult, img) % p
        f_then_prod = np.einsum("ia,jb,abl->ijl", img, img, B.mult) % p
        if not np.array_equal(prod_then_f, f_then_prod):
            errs.append("multiplication")
        return errs

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and rank(self.matrix, self.source.prime) == self.source.dim


def identity_hom(A: FiniteAlgebra) -> AlgebraHom:
    return AlgebraHom(A, A, np.eye(A.dim, dtype=np.int64))


def enumerate_homs(A: FiniteAlgebra, B: FiniteAlgebra) -> List[AlgebraHom]:
    """All algebra homs by brute force over matrices; only for tiny algebras."""
    p = A.prime
    out = []
    for entries in itertools.product(range(p), repeat=A.dim * B.dim):
        h = AlgebraHom(A, B, np.array(entries, dtype=np.int64).reshape(A.dim, B.dim))
        if not h.validate():
            out.append(h)
    return out


def dual_numbers(A: FiniteAlgebra) -> FiniteAlgebra:
    """``A[eps]`` with ``eps^2 = 0``; basis ``b_i`` then ``eps*b_i``."""
    d = A.dim
    m = np.zeros((2 * d, 2 * d, 2 * d), dtype=np.int64)
    m[:d, :d, :d] = A.mult
    m[:d, d:, d:] = A.mult
    m[d:, :d, d:] = A.mult
    unit = np.concatenate([A.unit, np.zeros(d, dtype=np.int64)])
    labels = tuple(A.basis) + tuple(f"eps*{b}" for b in A.basis)
    return FiniteAlgebra(A.prime, labels, m, unit, name=f"{A.name}[eps]")


def dual_numbers_hom(f: AlgebraHom, source: FiniteAlgebra = None, target: FiniteAlgebra = None) -> AlgebraHom:
    """``f + f*eps`` as a block-diagonal matrix."""
    z = np.zeros_like(f.matrix)
    mat = np.block([[f.matrix, z], [z, f.matrix]])
    return AlgebraHom(source or dual_numbers(f.source), target or dual_numbers(f.target), mat)


def iterate_dual(A: FiniteAlgebra, k: int) -> FiniteAlgebra:
    for _ in range(k):
        A = dual_numbers(A)
    return A


# ---------------------------------------------------------------------------
# pushouts


@dataclass
class Pushout:
    """``N (x)_M E`` with its cocone maps and the data needed to mediate."""

    M: FiniteAlgebra
    N: FiniteAlgebra
    E: FiniteAlgebra
    f: AlgebraHom
    g: AlgebraHom
    algebra: FiniteAlgebra
    into_N: AlgebraHom  # N -> tensor
    into_E: AlgebraHom  # E -> tensor
    relations: np.ndarray = field(repr=False)
    pivots: List[int] = field(repr=False)
    # positions in N (x) E (index i*dim E + j) of the surviving basis vectors
    kept: List[int] = field(repr=False)

    def project(self, vs) -> np.ndarray:
        """Coordinates in the quotient basis of vectors of ``N (x)_p E``."""
        red = reduce_rows(np.atleast_2d(vs), self.relations, self.pivots, self.M.prime)
        return red[:, self.kept]

    def mediator(self, hN: AlgebraHom, hE: AlgebraHom) -> Optional[AlgebraHom]:
        """Unique ``u`` with ``into_N;u = hN`` and ``into_E;u = hE``; ``None`` if the cocone does not commute."""
        p = self.M.prime
        R = hN.target
        if not np.array_equal(self.f.then(hN).matrix, self.g.then(hE).matrix):
            return None
        dE = self.E.dim
        big = np.einsum("ia,jb,abk->ijk", hN.matrix, hE.matrix, R.mult) % p
        big = big.reshape(self.N.dim * dE, R.dim)
        # must kill the relations to descend to the quotient
        if self.relations.size and np.any((self.relations @ big) % p):
            return None
        return AlgebraHom(self.algebra, R, big[self.kept])

    def generated_by_cocone(self) -> bool:
        """Products ``into_N(n) into_E(e)`` span the quotient, so mediators are unique."""
        a = self.algebra
        dN, dE = self.N.dim, self.E.dim
        xs = np.repeat(self.into_N.matrix, dE, axis=0)
        ys = np.tile(self.into_E.matrix, (dN, 1))
        return rank(a.mul_many(xs, ys), a.prime) == a.dim


def _tensor_mult(N: FiniteAlgebra, E: FiniteAlgebra) -> np.ndarray:
    dN, dE = N.dim, E.dim
    m = np.einsum("ika,jlb->ijklab", N.mult, E.mult)
    # (n_i e_j)(n_k e_l) = (n_i n_k)(e_j e_l); index pairs flattened row-major
    return m.reshape(dN * dE, dN * dE, dN * dE) % N.prime


def tensor_over(M: FiniteAlgebra, N: FiniteAlgebra, E: FiniteAlgebra, f: AlgebraHom, g: AlgebraHom) -> Pushout:
    """Pushout of ``N <-f- M -g-> E`` as the quotient of ``N (x)_p E``."""
    if f.source is not M and f.source.dim != M.dim:
        raise AlgebraError("f does not start at M")
    p = M.prime
    dN, dE = N.dim, E.dim
    T = _tensor_mult(N, E)
    # relation f(m) n (x) e - n (x) g(m) e for basis m, n, e
    left = np.einsum("ka,aib->kib", f.matrix, N.mult) % p      # k, i -> coords of f(m_k) n_i
    right = np.einsum("ka,ajb->kjb", g.matrix, E.mult) % p     # k, j -> coords of g(m_k) e_j
    eN, eE = np.eye(dN, dtype=np.int64), np.eye(dE, dtype=np.int64)
    rows = (np.einsum("kia,jb->kijab", left, eE) - np.einsum("ia,kjb->kijab", eN, right)) % p
    rel, piv = rref(rows.reshape(M.dim * dN * dE, dN * dE), p)
    kept = [c for c in range(dN * dE) if c not in set(piv)]
    q = len(kept)

    def project(vs):
        return reduce_rows(vs, rel, piv, p)[:, kept]

    # surviving basis vectors are standard unit vectors, so products are table slices
    prods = T[np.ix_(kept, kept)]
    mult = project(prods.reshape(q * q, dN * dE)).reshape(q, q, q)
    unit = project(np.outer(N.unit, E.unit).reshape(1, -1))[0]
    labels = tuple(f"{N.basis[c // dE]}*{E.basis[c % dE]}" for c in kept)
    Q = FiniteAlgebra(p, labels, mult, unit, name=f"{N.name}(x){E.name}")
    iN = AlgebraHom(N, Q, project(np.einsum("ia,b->iab", np.eye(dN, dtype=np.int64), E.unit).reshape(dN, -1)))
    iE = AlgebraHom(E, Q, project(np.einsum("a,jb->jab", N.unit, np.eye(dE, dtype=np.int64)).reshape(dE, -1)))
    return Pushout(M, N, E, f, g, Q, iN, iE, rel, piv, kept)


def check_pushout(po: Pushout, cocones: Iterable[Tuple[AlgebraHom, AlgebraHom]]) -> dict:
    """Validate the pushout and its universal property against a family of cocones."""
    errs = po.algebra.validate() + po.into_N.validate() + po.into_E.validate()
    commutes = np.array_equal(po.f.then(po.into_N).matrix, po.g.then(po.into_E).matrix)
    unique = po.generated_by_cocone()
    tested = failed = 0
    for hN, hE in cocones:
        tested += 1
        u = po.mediator(hN, hE)
        if (u is None or u.validate() or not np.array_equal(po.into_N.then(u).matrix, hN.matrix)
                or not np.array_equal(po.into_E.then(u).matrix, hE.matrix)):
            failed += 1
    return {"algebra_valid": not errs, "square_commutes": commutes, "mediators_unique": unique,
            "cocones_tested": tested, "cocones_failed": failed,
            "holds": not errs and commutes and unique and failed == 0}


def commuting_cocones(po: Pushout, targets: Iterable[FiniteAlgebra]):
    """Every pair of homs ``(N -> R, E -> R)`` agreeing on ``M``, for each target ``R``."""
    for R in targets:
        hNs, hEs = enumerate_homs(po.N, R), enumerate_homs(po.E, R)
        for hN in hNs:
            fh = po.f.then(hN).matrix
            for hE in hEs:
                if np.array_equal(fh, po.g.then(hE).matrix):
                    yield hN, hE


def check_T_preserves_pushout(po: Pushout, depth: int = 2) -> dict:
    """For ``k = 1..depth`` compare ``T^k`` of the pushout with the pushout of ``T^k`` of the span.

    The canonical hom goes from ``T^k N (x)_{T^k M} T^k E`` to
    ``T^k(N (x)_M E)``, induced by ``T^k`` of the cocone; it is reported
    together with its inverse when bijective.
    """
    levels = []
    M, N, E, Q = po.M, po.N, po.E, po.algebra
    f, g, iN, iE = po.f, po.g, po.into_N, po.into_E
    holds = True
    for k in range(1, depth + 1):
        TM, TN, TE, TQ = dual_numbers(M), dual_numbers(N), dual_numbers(E), dual_numbers(Q)
        f, g = dual_numbers_hom(f, TM, TN), dual_numbers_hom(g, TM, TE)
        iN, iE = dual_numbers_hom(iN, TN, TQ), dual_numbers_hom(iE, TE, TQ)
        M, N, E, Q = TM, TN, TE, TQ
        inner = tensor_over(M, N, E, f, g)
        phi = inner.mediator(iN, iE)
        ok = phi is not None and not phi.validate() and phi.is_bijective()
        inv = inverse_matrix(phi.matrix, M.prime) if ok else None
        levels.append({"k": k, "dim_T_of_pushout": Q.dim, "dim_pushout_of_T": inner.algebra.dim,
                       "comparison_bijective": ok, "inverse_found": inv is not None})
        holds = holds and ok and inv is not None
    return {"holds": holds, "verified_to_depth": depth, "levels": levels}


# ---------------------------------------------------------------------------
# bundled algebras over F_2


def _alg(name, basis, products, unit, p=2):
    d = len(basis)
    m = np.zeros((d, d, d), dtype=np.int64)
    for (i, j), vec in products.items():
        m[i, j] = vec
        m[j, i] = vec
    return FiniteAlgebra(p, basis, m, unit, name=name)


def f2() -> FiniteAlgebra:
    return _alg("F2", ("1",), {(0, 0): [1]}, [1])


def f2_dual() -> FiniteAlgebra:
    """``F2[x]/(x^2)``."""
    return _alg("F2[x]/x2", ("1", "x"), {(0, 0): [1, 0], (0, 1): [0, 1], (1, 1): [0, 0]}, [1, 0])


def f2_squared() -> FiniteAlgebra:
    """``F2 x F2`` with orthogonal idempotent basis."""
    return _alg("F2xF2", ("e1", "e2"), {(0, 0): [1, 0], (0, 1): [0, 0], (1, 1): [0, 1]}, [1, 1])


def f4() -> FiniteAlgebra:
    """``F4 = F2[a]/(a^2 + a + 1)``."""
    return _alg("F4", ("1", "a"), {(0, 0): [1, 0], (0, 1): [0, 1], (1, 1): [1, 1]}, [1, 0])


def bundled_f2_algebras() -> List[FiniteAlgebra]:
    return [f2(), f2_dual(), f2_squared(), f4()]
