"""Finite abelian groups and exact integer linear algebra.

Smith normal form runs on Python integers (no overflow, no modular
shortcuts).  Large sparse systems first go through unit-pivot elimination,
which shrinks the matrix without changing its cokernel, and the small residual
is finished with the dense algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import InfiniteCokernel, NonAbelianQuotient, NotNested, SchemaError
from .groups import FiniteGroup, Subgroup, _own, cyclic, direct_product, quotient


# ------------------------------------------------------------------ matrices

class IntMatrix:
    """Sparse integer matrix; absent entries are zero."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows, self.cols = int(rows), int(cols)
        self.entries: dict[tuple[int, int], int] = {}
        if entries is None:
            return
        if isinstance(entries, dict):
            items = entries.items()
        else:
            items = (((i, j), v) for i, j, v in entries)
        for (i, j), v in items:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v:
                self.entries[(int(i), int(j))] = int(v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None):
        r = len(rows)
        c = len(rows[0]) if r else (ncols or 0)
        return cls(r, c, {(i, j): int(v) for i, row in enumerate(rows)
                          for j, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, int]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, {})[j] = v
        out: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntMatrix(self.rows, other.cols, out)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, doc: dict) -> "IntMatrix":
        try:
            return cls(doc["rows"], doc["cols"], [tuple(e) for e in doc["entries"]])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SchemaError(f"bad IntMatrix JSON: {exc}") from None


def _det_dense(M: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def _dense_snf(A: list[list[int]], track_v: bool = True):
    """In-place Smith form of ``A``; returns (U, Uinv, V) as dense lists.

    Pivot: smallest absolute value in the remaining block, ties by (row, col).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track_v else None

    def row_add(dst, src, c):  # row_dst += c * row_src
        if c == 0:
            return
        a, b = A[dst], A[src]
        for j in range(n):
            if b[j]:
                a[j] += c * b[j]
        u, w = U[dst], U[src]
        for j in range(m):
            if w[j]:
                u[j] += c * w[j]
        for r in Ui:  # inverse: col_src -= c * col_dst
            if r[dst]:
                r[src] -= c * r[dst]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(dst, src, c):  # col_dst += c * col_src
        if c == 0:
            return
        for r in A:
            if r[src]:
                r[dst] += c * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += c * r[src]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest leftover in row/column t to the pivot spot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(i, t)
                else:
                    col_swap(j, t)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    return U, Ui, V


def _mat_mul(X, Y):
    if not X:
        return []
    cols = len(Y[0]) if Y else 0
    out = [[0] * cols for _ in X]
    for i, row in enumerate(X):
        o = out[i]
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(Y[k]):
                    if b:
                        o[j] += a * b
    return out


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal D with ``U·M·V = D`` and d1 | d2 | ...

    The postcondition is recomputed on every call.
    """
    A = M.dense()
    orig = [row[:] for row in A]
    U, Ui, V = _dense_snf(A, track_v=True)
    D = IntMatrix.from_dense(A, M.cols) if M.rows else IntMatrix(0, M.cols)
    Um = IntMatrix.from_dense(U, M.rows) if M.rows else IntMatrix(0, 0)
    Vm = IntMatrix.from_dense(V, M.cols) if M.cols else IntMatrix(0, 0)
    assert _mat_mul(_mat_mul(U, orig), V) == A if M.rows and M.cols else True
    assert all(v == 0 for (i, j), v in D.entries.items() if i != j)
    diag = [d for d in D.diagonal()]
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:])) and all(d > 0 for d in nz)
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))
    assert abs(_det_dense(U)) == 1 and abs(_det_dense(V)) == 1
    return Um, D, Vm


# -------------------------------------------------------------- cokernels

@dataclass
class CokernelPresentation:
    """``coker(M) ≅ ⊕ Z/d_i`` (``d_i = 0`` meaning a free summand Z).

    ``coords`` is a dense integer matrix (one row per summand) sending a vector
    of the ambient free module to its coordinates; ``lifts[i]`` is a sparse
    ambient vector mapping to the i-th unit coordinate.
    """

    nrows: int
    factors: list[int]
    coords: np.ndarray  # object dtype, shape (len(factors), nrows)
    lifts: list[dict[int, int]]

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d != 0]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.factors if d == 0)

    def coordinates(self, vec: dict[int, int] | Sequence[int]) -> list[int]:
        if isinstance(vec, dict):
            out = [0] * len(self.factors)
            for r, v in vec.items():
                if v:
                    col = self.coords[:, r]
                    for i in range(len(out)):
                        out[i] += int(col[i]) * v
        else:
            out = [int(x) for x in self.coords.dot(np.array(vec, dtype=object))]
        return [x % d if d else x for x, d in zip(out, self.factors)]


def reduce_cokernel(nrows: int, columns: Iterable[dict[int, int]],
                    check: bool = True, modulus: int | None = None) -> CokernelPresentation:
    """Cokernel of the matrix whose columns are the given sparse vectors.

    Unit pivots are eliminated first (shortest-row pivot within each column,
    columns visited shortest first); the residual block gets a dense Smith
    form with recorded transforms.  With ``modulus`` q the cokernel of the
    reduction mod q is computed; summands of order q play the role of free ones.
    """
    q = modulus

    def norm(v):
        return v % q if q else v

    def is_unit(v):
        return gcd(v, q) == 1 if q else v in (1, -1)

    cols_in = [{r: w for r, v in c.items() if (w := norm(int(v)))} for c in columns]
    rows: dict[int, dict[int, int]] = {r: {} for r in range(nrows)}
    cols: dict[int, dict[int, int]] = {}
    for j, c in enumerate(cols_in):
        if c:
            cols[j] = dict(c)
            for r, v in c.items():
                rows[r][j] = v
    T: dict[int, dict[int, int]] = {r: {r: 1} for r in range(nrows)}

    progress = True
    while progress:
        progress = False
        order = sorted(cols, key=lambda j: (len(cols[j]), j))
        for j in order:
            col = cols.get(j)
            if not col:
                cols.pop(j, None)
                continue
            units = [r for r, v in col.items() if is_unit(v)]
            if not units:
                continue
            i = min(units, key=lambda r: (len(rows[r]), r))
            u = col[i]
            uinv = pow(u, -1, q) if q else u
            prow = rows[i]
            for k, v in list(col.items()):
                if k == i:
                    continue
                c = norm(uinv * v)  # row_k -= c * row_i
                rk = rows[k]
                for jj, w in prow.items():
                    nv = norm(rk.get(jj, 0) - c * w)
                    if nv:
                        rk[jj] = nv
                        cols[jj][k] = nv
                    else:
                        rk.pop(jj, None)
                        cols[jj].pop(k, None)
                tk = T[k]
                for rr, w in T[i].items():
                    nv = norm(tk.get(rr, 0) - c * w)
                    if nv:
                        tk[rr] = nv
                    else:
                        tk.pop(rr, None)
            for jj in prow:
                if jj != j:
                    cols[jj].pop(i, None)
            for k in col:
                if k != i:
                    rows[k].pop(j, None)
            del cols[j]
            del rows[i]
            del T[i]
            progress = True
        for j in [j for j, c in cols.items() if not c]:
            del cols[j]

    keep_rows = sorted(rows)
    keep_cols = sorted(cols)
    ridx = {r: a for a, r in enumerate(keep_rows)}
    A = [[0] * len(keep_cols) for _ in keep_rows]
    for b, j in enumerate(keep_cols):
        for r, v in cols[j].items():
            A[ridx[r]][b] = v
    if q:
        for a in range(len(keep_rows)):
            A[a].extend(q * int(a == b) for b in range(len(keep_rows)))
    ncols = len(A[0]) if A else 0
    orig = [row[:] for row in A]
    U, Ui, V = _dense_snf(A, track_v=ncols <= 400)
    if V is not None and keep_rows and ncols:
        assert _mat_mul(_mat_mul(U, orig), V) == A
    m = len(keep_rows)
    diag = [A[t][t] if t < ncols else 0 for t in range(m)]
    factors, coord_rows, lifts = [], [], []
    for t, d in enumerate(diag):
        if d == 1:
            continue
        factors.append(d)
        row = np.zeros(nrows, dtype=object)
        for a, r in enumerate(keep_rows):
            c = U[t][a]
            if c:
                for rr, w in T[r].items():
                    row[rr] += c * w
        if d:
            row = np.array([int(v) % d for v in row], dtype=object)
        coord_rows.append(row)
        lifts.append({keep_rows[a]: Ui[a][t] for a in range(m) if Ui[a][t]})
    coords = np.array(coord_rows, dtype=object).reshape(len(factors), nrows)
    pres = CokernelPresentation(nrows, factors, coords, lifts)
    if check:
        _certify_cokernel(pres, cols_in)
    return pres


def _certify_cokernel(pres: CokernelPresentation, cols_in: list[dict[int, int]]):
    """coords kill every relation, and coords ∘ lift is the identity."""
    for c in cols_in:
        if c:
            img = pres.coordinates(c)
            assert all(x == 0 for x in img), "relation survives in cokernel"
    for i, lift in enumerate(pres.lifts):
        img = pres.coordinates(lift)
        assert img == [int(i == k) for k in range(len(pres.factors))], "bad lift"


def modular_cokernel(M: np.ndarray, p: int, k: int) -> CokernelPresentation:
    """Cokernel of a dense matrix over Z/p^k.

    Z/p^k is local, so Smith form only needs pivots of minimal p-adic
    valuation.  Summands of order p^k stand in for free ones.
    """
    q = p ** k
    m = M.shape[0]
    A = np.array(M, dtype=np.int64) % q
    U = np.eye(m, dtype=np.int64)
    Ui = np.eye(m, dtype=np.int64)
    factors: list[int] = []
    t = 0
    while t < m:
        A = A[:, A[t:].any(axis=0)] if A.shape[1] else A
        if not A.shape[1]:
            break
        block = A[t:]
        units = block % p != 0
        if units.any():
            r, c = divmod(int(np.argmax(units)), block.shape[1])
        else:
            val = np.zeros(block.shape, dtype=np.int64)
            val[block == 0] = k
            for j in range(1, k):
                val[(block != 0) & (block % p**j == 0)] = j
            r, c = divmod(int(np.argmin(val)), block.shape[1])
        v = 0
        while int(block[r, c]) % p ** (v + 1) == 0:
            v += 1
        r += t
        if r != t:
            A[[t, r]] = A[[r, t]]
            U[[t, r]] = U[[r, t]]
            Ui[:, [t, r]] = Ui[:, [r, t]]
        a = int(A[t, c])
        uinv = pow(a // p**v, -1, q)
        # clear column c below and above row t
        coef = (A[:, c] // p**v) * uinv % q
        coef[t] = 0
        nz = np.flatnonzero(coef)
        if len(nz):
            A[nz] = (A[nz] - np.outer(coef[nz], A[t])) % q
            U[nz] = (U[nz] - np.outer(coef[nz], U[t])) % q
            Ui[:, t] = (Ui[:, t] + Ui[:, nz] @ coef[nz]) % q
        # untracked column operations clear the rest of row t
        A[t] = 0
        A = np.delete(A, c, axis=1)
        factors.append(p**v)
        t += 1
    factors += [q] * (m - t)
    keep = [i for i, d in enumerate(factors) if d != 1]
    coords = np.array([[int(x) % factors[i] for x in U[i]] for i in keep], dtype=object)
    coords = coords.reshape(len(keep), m)
    lifts = [{a: int(Ui[a, i]) for a in range(m) if Ui[a, i]} for i in keep]
    pres = CokernelPresentation(m, [factors[i] for i in keep], coords, lifts)
    # certificate: coordinates kill the relations and invert the lifts
    # exact in float64: entries stay below m * q**2 < 2**53
    img = np.rint(U.astype(np.float64) @ (np.asarray(M) % q).astype(np.float64)).astype(np.int64) % q
    for i in keep:
        assert not (img[i] % factors[i]).any(), "relation survives in cokernel"
    assert ((U @ Ui) % q == np.eye(m, dtype=np.int64)).all(), "bad lift"
    return pres


def cokernel_structure(M: IntMatrix) -> "FinAb":
    """Invariant factors of coker(M); raises if a free summand survives."""
    cols = [dict() for _ in range(M.cols)]
    for (i, j), v in M.entries.items():
        cols[j][i] = v
    pres = reduce_cokernel(M.rows, cols)
    if pres.free_rank:
        raise InfiniteCokernel(f"cokernel has free rank {pres.free_rank}")
    return FinAb(pres.factors)


# -------------------------------------------------------------- FinAb

def _invariant_chain_ok(factors: Sequence[int]) -> bool:
    return all(d >= 2 for d in factors) and all(b % a == 0 for a, b in zip(factors, factors[1:]))


class FinAb:
    """A finite abelian group ``Z/d1 ⊕ ... ⊕ Z/dk`` with d1 | d2 | ... .

    Elements are coordinate tuples reduced modulo the factors.
    """

    def __init__(self, factors: Iterable[int], witness=None):
        f = tuple(int(d) for d in factors)
        if not _invariant_chain_ok(f):
            raise ValueError(f"not an invariant-factor chain: {f}")
        self.factors = f
        self.witness = witness

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def __eq__(self, other):
        return isinstance(other, FinAb) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"FinAb({list(self.factors)})"

    def __str__(self):
        return " x ".join(f"C{d}" for d in self.factors) if self.factors else "0"

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(v) % d for v, d in zip(x, self.factors))

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def scale(self, k: int, x) -> tuple[int, ...]:
        return tuple((k * a) % d for a, d in zip(x, self.factors))

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.factors))

    def index(self, x) -> int:
        """Row-major index, matching the concrete product group."""
        i = 0
        for v, d in zip(x, self.factors):
            i = i * d + (int(v) % d)
        return i

    def element(self, idx: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.factors):
            idx, r = divmod(idx, d)
            out.append(r)
        return tuple(reversed(out))

    def element_order(self, x) -> int:
        o = 1
        for v, d in zip(x, self.factors):
            o = o * (d // gcd(v, d)) // gcd(o, d // gcd(v, d))
        return o

    def concrete(self) -> FiniteGroup:
        """The group as a product of cyclic Cayley tables (row-major indices)."""
        if not self.factors:
            G = cyclic(1)
        else:
            G = reduce(direct_product, [cyclic(d) for d in self.factors])
        G.label = str(self) if self.factors else "C1"
        return G

    def identity(self) -> "AbMorphism":
        return AbMorphism(self, self, [[int(i == j) for j in range(self.rank)]
                                       for i in range(self.rank)])

    def zero_map(self, other: "FinAb") -> "AbMorphism":
        return AbMorphism(self, other, [[0] * self.rank for _ in range(other.rank)])


TRIVIAL = FinAb(())


def finab_from_orders(orders: Sequence[int]) -> tuple[FinAb, list[list[int]], list[list[int]]]:
    """Normalize ``⊕ Z/orders[i]`` to invariant form.

    Returns ``(A, to_inv, from_inv)`` where ``to_inv`` (rank(A) x len(orders))
    maps old coordinates to invariant coordinates and ``from_inv`` the reverse.
    """
    k = len(orders)
    cols = [{i: int(d)} if d else {} for i, d in enumerate(orders)]
    pres = reduce_cokernel(k, cols)
    if pres.free_rank:
        raise InfiniteCokernel("zero order in cyclic decomposition")
    A = FinAb(pres.factors)
    to_inv = [[int(x) for x in row] for row in pres.coords] if pres.factors else []
    from_inv = [[pres.lifts[t].get(i, 0) for t in range(A.rank)] for i in range(k)]
    return A, to_inv, from_inv


class AbMorphism:
    """Homomorphism between FinAb groups given by an integer matrix on generators.

    Column j is the image of the j-th source generator, read modulo the target
    factors.  Well-definedness (d_j times column j vanishes) is checked.
    """

    def __init__(self, source: FinAb, target: FinAb, matrix, check: bool = True):
        self.source, self.target = source, target
        matrix = list(matrix)
        if len(matrix) != target.rank or any(len(r) != source.rank for r in matrix):
            raise ValueError(f"matrix shape does not match {source} -> {target}")
        M = [[int(v) % d for v in row] for row, d in zip(matrix, target.factors)]
        self.matrix = M
        if check:
            for j, dj in enumerate(source.factors):
                for i, ei in enumerate(target.factors):
                    if (dj * M[i][j]) % ei:
                        raise ValueError(
                            f"not well defined: generator {j} of order {dj} maps to order not dividing it")

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(sum(r[j] * int(x[j]) for j in range(self.source.rank)) % d
                     for r, d in zip(self.matrix, self.target.factors))

    def __eq__(self, other):
        return (isinstance(other, AbMorphism) and other.source == self.source
                and other.target == self.target and other.matrix == self.matrix)

    def __repr__(self):
        return f"AbMorphism({self.source} -> {self.target}, {self.matrix})"

    def compose(self, first: "AbMorphism") -> "AbMorphism":
        """``self ∘ first``."""
        cols = [self(tuple(first.matrix[i][j] for i in range(first.target.rank)))
                for j in range(first.source.rank)]
        M = [[cols[j][i] for j in range(first.source.rank)] for i in range(self.target.rank)]
        return AbMorphism(first.source, self.target, M, check=False)

    def __add__(self, other: "AbMorphism") -> "AbMorphism":
        M = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return AbMorphism(self.source, self.target, M, check=False)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.matrix for v in r)

    def image_set(self) -> set[tuple[int, ...]]:
        gens = [tuple(self.matrix[i][j] for i in range(self.target.rank))
                for j in range(self.source.rank)]
        return span(self.target, gens)

    def kernel_set(self) -> set[tuple[int, ...]]:
        z = self.target.zero()
        return {x for x in self.source.elements() if self(x) == z}

    @property
    def is_injective(self) -> bool:
        return len(self.kernel_set()) == 1

    @property
    def is_surjective(self) -> bool:
        return len(self.image_set()) == self.target.order

    def to_json(self) -> dict:
        return {"source": list(self.source.factors), "target": list(self.target.factors),
                "matrix": self.matrix}


def span(A: FinAb, gens: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    """The subgroup of A generated by ``gens`` (explicit element set)."""
    out = {A.zero()}
    frontier = [A.zero()]
    gens = [A.reduce(g) for g in gens]
    gens = [g for g in gens if any(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = A.add(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


# ------------------------------------------------------------- Hom and Ext

@dataclass
class HomGroup:
    """Hom(A, B) as a FinAb with an explicit morphism for every generator."""

    source: FinAb
    target: FinAb
    structure: FinAb
    basis: list[AbMorphism]
    _to_inv: list[list[int]] = field(repr=False)
    _pairs: list[tuple[int, int, int]] = field(repr=False)  # (i, j, step)

    def morphism(self, coords: Sequence[int]) -> AbMorphism:
        M = [[0] * self.source.rank for _ in range(self.target.rank)]
        for c, phi in zip(coords, self.basis):
            for i in range(self.target.rank):
                for j in range(self.source.rank):
                    M[i][j] += c * phi.matrix[i][j]
        return AbMorphism(self.source, self.target, M, check=False)

    def coordinates(self, phi: AbMorphism) -> tuple[int, ...]:
        raw = [phi.matrix[j][i] // step for (i, j, step) in self._pairs]
        out = [sum(r[k] * raw[k] for k in range(len(raw))) for r in self._to_inv]
        return self.structure.reduce(out)

    def elements(self) -> Iterator[AbMorphism]:
        for c in self.structure.elements():
            yield self.morphism(c)


def hom_group(A: FinAb, B: FinAb) -> HomGroup:
    """Hom(⊕Z/d_i, ⊕Z/e_j) = ⊕ Z/gcd(d_i, e_j) with explicit generators."""
    pairs, orders = [], []
    for i, d in enumerate(A.factors):
        for j, e in enumerate(B.factors):
            g = gcd(d, e)
            if g > 1:
                pairs.append((i, j, e // g))
                orders.append(g)
    S, to_inv, from_inv = finab_from_orders(orders)
    basis = []
    for t in range(S.rank):
        M = [[0] * A.rank for _ in range(B.rank)]
        for k, (i, j, step) in enumerate(pairs):
            M[j][i] += from_inv[k][t] * step
        basis.append(AbMorphism(A, B, M))
    return HomGroup(A, B, S, basis, to_inv, pairs)


@dataclass
class ExtGroup:
    """Ext(C, A) with a factor set for each class.

    A class is a tuple of invariant coordinates; ``cocycle(coords)`` returns the
    function ``(x, y) -> A`` on coordinate tuples of C built from carries.
    """

    source: FinAb
    coeff: FinAb
    structure: FinAb
    _pairs: list[tuple[int, int, int]] = field(repr=False)  # (i, j, unused)
    _to_inv: list[list[int]] = field(repr=False)
    _from_inv: list[list[int]] = field(repr=False)

    def raw(self, coords: Sequence[int]) -> list[int]:
        return [sum(row[t] * coords[t] for t in range(self.structure.rank))
                for row in self._from_inv]

    def cocycle(self, coords: Sequence[int]) -> Callable:
        raw = self.raw(coords)
        C, A = self.source, self.coeff

        def f(x, y):
            out = [0] * A.rank
            for (i, j, _), b in zip(self._pairs, raw):
                d = C.factors[i]
                if (x[i] % d) + (y[i] % d) >= d:
                    out[j] += b
            return A.reduce(out)

        return f


def ext_group(C: FinAb, A: FinAb) -> FinAb:
    """Ext(⊕Z/d_i, ⊕Z/e_j) = ⊕ Z/gcd(d_i, e_j)."""
    return ext_data(C, A).structure


def ext_data(C: FinAb, A: FinAb) -> ExtGroup:
    pairs, orders = [], []
    for i, d in enumerate(C.factors):
        for j, e in enumerate(A.factors):
            g = gcd(d, e)
            if g > 1:
                pairs.append((i, j, g))
                orders.append(g)
    S, to_inv, from_inv = finab_from_orders(orders)
    return ExtGroup(C, A, S, pairs, to_inv, from_inv)


# ------------------------------------------------------------ subquotients

@dataclass
class SubquotientWitness:
    """Explicit identification of ``top/bottom`` with a FinAb.

    ``generators[i]`` is an element of ``top`` whose coset is the i-th
    invariant generator; ``coords(x)`` reads off the coordinates of x's coset.
    """

    group: FiniteGroup
    top: Subgroup
    bottom: Subgroup
    generators: list[int]
    _coords: dict[int, tuple[int, ...]] = field(repr=False)

    def coords(self, x: int) -> tuple[int, ...]:
        return self._coords[int(x)]

    def element(self, c: Sequence[int]) -> int:
        G = self.group
        x = 0
        for g, k in zip(self.generators, c):
            x = G.mul(x, G.power(g, int(k)))
        return x


def abelian_structure(G: FiniteGroup, elements: Sequence[int] | None = None
                      ) -> tuple[FinAb, list[int], dict[int, tuple[int, ...]]]:
    """Invariant factors of an abelian group (or abelian subgroup given by its
    elements) with generators and a coordinate table."""
    elems = list(range(G.order)) if elements is None else sorted(elements)
    members = set(elems)
    gens: list[int] = []
    cur = {0}
    for a in elems:
        if len(cur) == len(elems):
            break
        if a not in cur:
            gens.append(a)
            cur = set(G.closure(gens))
    vec = {0: (0,) * len(gens)}
    frontier = [0]
    rels: list[dict[int, int]] = []
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = G.mul(x, g)
                v = list(vec[x])
                v[k] += 1
                if y not in vec:
                    vec[y] = tuple(v)
                    nxt.append(y)
                else:
                    diff = {i: a - b for i, (a, b) in enumerate(zip(v, vec[y])) if a != b}
                    if diff:
                        rels.append(diff)
        frontier = nxt
    assert set(vec) == members
    pres = reduce_cokernel(len(gens), rels)
    if pres.free_rank:
        raise InfiniteCokernel("finite group produced a free summand")
    A = FinAb(pres.factors)
    coords = {x: A.reduce(pres.coordinates(list(v))) for x, v in vec.items()}
    gen_elems = []
    for lift in pres.lifts:
        x = 0
        for k, c in lift.items():
            x = G.mul(x, G.power(gens[k], c))
        gen_elems.append(x)
    return A, gen_elems, coords


def subquotient_structure(G: FiniteGroup, top: Subgroup, bottom: Subgroup) -> FinAb:
    """Structure of the abelian group ``top/bottom`` with an explicit witness."""
    _own(G, top)
    _own(G, bottom)
    if not bottom.members <= top.members:
        raise NotNested("bottom is not contained in top")
    T, incl = top.as_group()
    pos = {x: i for i, x in enumerate(top.elements)}
    B = Subgroup(T, [pos[x] for x in bottom.elements], _checked=True)
    if not B.is_normal():
        raise NonAbelianQuotient("bottom is not normal in top")
    Q, proj = quotient(T, B)
    if not Q.is_abelian:
        raise NonAbelianQuotient("top/bottom is not abelian")
    A, gens_q, coords_q = abelian_structure(Q)
    # representative in top of each quotient generator: its smallest preimage
    first = {}
    for t in range(T.order):
        first.setdefault(int(proj.map[t]), top.elements[t])
    coords = {top.elements[t]: coords_q[int(proj.map[t])] for t in range(T.order)}
    wit = SubquotientWitness(G, top, bottom, [first[q] for q in gens_q], coords)
    return FinAb(A.factors, witness=wit)
