"""Brute-force ground truth for tiny parameters.

Everything here works by direct enumeration over prime fields: matrices are
tuples of tuples of ints mod p, subspaces are canonical reduced-row-echelon
bases, probabilities are exact :class:`fractions.Fraction` values.  The point
is independence: nothing in this module calls the closed-form counting code,
so agreement between the two is evidence, not circularity.

Scope is deliberately small (n, m <= 3, q prime).  Budgets are enforced with
an explicit refusal (:class:`BudgetExceededError`) so callers can distinguish
"too big by policy" from "wrong input".
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

Matrix = Tuple[Tuple[int, ...], ...]

#: Hard cap on q**(n*m) for matrix-grid enumerations.
MATRIX_ENUM_BUDGET = 2**20
#: Hard cap on |GL(n,q)| * q**(2*n*m) elementary channel terms.
CHANNEL_TERM_BUDGET = 2**24


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration would exceed the oracle's hard budget."""


def _require_prime(q: int) -> None:
    if q < 2 or any(q % d == 0 for d in range(2, int(math.isqrt(q)) + 1)):
        raise ValueError(f"oracle requires a prime field order, got q={q}")


def rank_of(mat: Sequence[Sequence[int]], q: int) -> int:
    """Rank of a matrix over F_q (q prime) by Gaussian elimination."""
    _require_prime(q)
    rows = [list(r) for r in mat]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % q), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], q - 2, q)
        rows[rank] = [(x * inv) % q for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % q:
                f = rows[i][col]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def rref_basis(vectors: Sequence[Sequence[int]], q: int) -> Matrix:
    """Canonical RREF basis (tuple of rows) of the span of ``vectors``."""
    rows = [list(r) for r in vectors]
    if not rows:
        return ()
    ncols = len(rows[0])
    out: List[List[int]] = []
    for v in rows:
        v = [x % q for x in v]
        for b in out:
            lead = next(i for i, x in enumerate(b) if x)
            if v[lead]:
                f = v[lead]
                v = [(a - f * c) % q for a, c in zip(v, b)]
        if any(v):
            lead = next(i for i, x in enumerate(v) if x)
            inv = pow(v[lead], q - 2, q)
            v = [(x * inv) % q for x in v]
            for b in out:
                if b[lead]:
                    f = b[lead]
                    b[:] = [(a - f * c) % q for a, c in zip(b, v)]
            out.append(v)
    out.sort(key=lambda b: next(i for i, x in enumerate(b) if x))
    return tuple(tuple(r) for r in out)


def enumerate_matrices(n: int, m: int, q: int) -> Iterator[Matrix]:
    """All q**(n*m) matrices in F_q^{n x m}, in lexicographic entry order."""
    _require_prime(q)
    if q ** (n * m) > MATRIX_ENUM_BUDGET:
        raise BudgetExceededError(
            f"q^(n*m) = {q ** (n * m)} exceeds the enumeration budget {MATRIX_ENUM_BUDGET}"
        )
    for flat in itertools.product(range(q), repeat=n * m):
        yield tuple(flat[i * m : (i + 1) * m] for i in range(n))


def enumerate_gl(n: int, q: int) -> Iterator[Matrix]:
    """All invertible n x n matrices over F_q (q prime), by filtering."""
    _require_prime(q)
    if q ** (n * n) > MATRIX_ENUM_BUDGET:
        raise BudgetExceededError(
            f"q^(n^2) = {q ** (n * n)} exceeds the enumeration budget {MATRIX_ENUM_BUDGET}"
        )
    for mat in enumerate_matrices(n, n, q):
        if rank_of(mat, q) == n:
            yield mat


def enumerate_subspaces(m: int, q: int, dim: int | None = None) -> List[Matrix]:
    """All subspaces of F_q^m as canonical RREF bases.

    Enumerates pivot-column patterns and free entries directly, so each
    subspace appears exactly once.  ``dim=None`` returns every dimension,
    including the zero subspace represented by the empty tuple.
    """
    _require_prime(q)
    dims = range(m + 1) if dim is None else [dim]
    out: List[Matrix] = []
    for d in dims:
        if d < 0 or d > m:
            continue
        if d == 0:
            out.append(())
            continue
        for pivots in itertools.combinations(range(m), d):
            free_positions = [
                (i, j)
                for i in range(d)
                for j in range(m)
                if j > pivots[i] and j not in pivots
            ]
            for values in itertools.product(range(q), repeat=len(free_positions)):
                rows = [[0] * m for _ in range(d)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, j), v in zip(free_positions, values):
                    rows[i][j] = v
                out.append(tuple(tuple(r) for r in rows))
    return out


def _mat_add(a: Matrix, b: Matrix, q: int) -> Matrix:
    return tuple(
        tuple((x + y) % q for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def _mat_mul(a: Matrix, b: Matrix, q: int) -> Matrix:
    cols = len(b[0])
    inner = len(b)
    return tuple(
        tuple(sum(ra[k] * b[k][j] for k in range(inner)) % q for j in range(cols))
        for ra in a
    )


def _span_eq(vectors: Sequence[Sequence[int]], basis: Matrix, q: int) -> bool:
    return rref_basis(vectors, q) == basis


def count_gl(n: int, q: int) -> int:
    """|GL(n,q)| by the closed product (used only to weight, not to verify)."""
    return math.prod(q**n - q**i for i in range(n))


def matrices_with_rowspace(n: int, m: int, q: int, basis: Matrix) -> List[Matrix]:
    """All n x m matrices whose row space is exactly ``basis``'s span."""
    return [mat for mat in enumerate_matrices(n, m, q) if rref_basis(mat, q) == basis]


def brute_f_functions(
    n: int,
    m: int,
    q: int,
    budget: int = MATRIX_ENUM_BUDGET,
    representatives_per_class: int = 3,
) -> Dict[str, Dict]:
    """Enumerated tables of the three matrix-counting functions.

    Returns ``{"f0": {u: count}, "f1": {(u,v,h,r): count}, "f2": {(r,rX,rB): count}}``
    computed purely by iterating matrices.  For f1 the count is computed for
    several distinct representatives (U, V, M) of each (u, v, h) class and the
    function raises AssertionError if any two representatives disagree, which
    checks the well-definedness claim rather than assuming it.  Likewise f2 is
    checked across representative matrices X of each rank.

    ``h`` here is dim((U+V)/V), matching the closed-form convention.
    """
    _require_prime(q)
    total = q ** (n * m)
    if total > budget:
        raise BudgetExceededError(
            f"q^(n*m) = {total} exceeds the requested budget {budget}"
        )
    mn = min(n, m)
    all_mats = list(enumerate_matrices(n, m, q))
    by_rank: Dict[int, List[Matrix]] = {r: [] for r in range(mn + 1)}
    rank_cache: Dict[Matrix, int] = {}
    rowspace_cache: Dict[Matrix, Matrix] = {}
    for mat in all_mats:
        rs = rref_basis(mat, q)
        rowspace_cache[mat] = rs
        r = len(rs)
        rank_cache[mat] = r
        by_rank[r].append(mat)

    subspaces = enumerate_subspaces(m, q)

    # f0: matrices with one fixed rowspace per dimension.
    f0: Dict[int, int] = {}
    for u in range(mn + 1):
        target = next(s for s in subspaces if len(s) == u)
        f0[u] = sum(1 for mat in all_mats if rowspace_cache[mat] == target)

    # f1: group (U, V) pairs by (u, v, h) with h = dim((U+V)/V).
    f1: Dict[Tuple[int, int, int, int], int] = {}
    reps_seen: Dict[Tuple[int, int, int], int] = {}
    for U in subspaces:
        u = len(U)
        if u > mn:
            continue
        mats_U = matrices_with_rowspace(n, m, q, U)
        for V in subspaces:
            v = len(V)
            if v > mn:
                continue
            h = len(rref_basis(list(U) + list(V), q)) - v
            key3 = (u, v, h)
            seen = reps_seen.get(key3, 0)
            if seen >= representatives_per_class:
                continue
            reps_seen[key3] = seen + 1
            for M in mats_U[:representatives_per_class]:
                counts = {r: 0 for r in range(mn + 1)}
                for B in all_mats:
                    if rowspace_cache[_mat_add(M, B, q)] == V:
                        counts[rank_cache[B]] += 1
                for r, cnt in counts.items():
                    key = (u, v, h, r)
                    if key in f1:
                        assert f1[key] == cnt, (
                            f"f1 not well defined at {key}: {f1[key]} != {cnt}"
                        )
                    else:
                        f1[key] = cnt

    # f2: for representative X of each rank, bucket B by (rank B, rank(X+B)).
    f2: Dict[Tuple[int, int, int], int] = {}
    for rx in range(mn + 1):
        for X in by_rank[rx][:representatives_per_class]:
            counts: Dict[Tuple[int, int], int] = {}
            for B in all_mats:
                key2 = (rank_cache[_mat_add(X, B, q)], rank_cache[B])
                counts[key2] = counts.get(key2, 0) + 1
            for r in range(mn + 1):
                for rb in range(mn + 1):
                    cnt = counts.get((r, rb), 0)
                    key = (r, rx, rb)
                    if key in f2:
                        assert f2[key] == cnt, (
                            f"f2 not well defined at {key}: {f2[key]} != {cnt}"
                        )
                    else:
                        f2[key] = cnt

    return {"f0": f0, "f1": f1, "f2": f2}


def _subspaces_of_span(basis: Matrix, m: int, q: int) -> List[Matrix]:
    """All subspaces of the span of ``basis``, as RREF bases in F_q^m."""
    d = len(basis)
    out: List[Matrix] = []
    for inner in enumerate_subspaces(d, q):
        vecs = [
            [sum(c[i] * basis[i][j] for i in range(d)) % q for j in range(m)]
            for c in inner
        ]
        out.append(rref_basis(vecs, q))
    return out


def realize_configuration(
    d1: Sequence[int], m: int, q: int
) -> Tuple[Matrix, Matrix, Matrix] | None:
    """Build (U, V, W) in F_q^m with profile d1 and W + V = U + V, or None.

    The construction allocates one coordinate block per indecomposable of the
    three-subspace lattice: common lines, pairwise lines, V-only lines, and
    generic planes carrying (U, V, W) = (<x>, <y>, <x+y>).
    """
    dU, dV, dW, dUV, dUW, dVW, dUVW = d1
    n_uvw = dUVW
    n_uv = dUV - dUVW
    n_uw = dUW - dUVW
    n_vw = dVW - dUVW
    g = dW + dUVW - dUW - dVW
    n_v = dV + dUW - dUV - dW
    if dU - dUV != dW - dVW:
        return None
    if min(n_uvw, n_uv, n_uw, n_vw, g, n_v) < 0:
        return None
    width = n_uvw + n_uv + n_uw + n_vw + n_v + 2 * g
    if width > m:
        return None

    def unit(j: int) -> List[int]:
        e = [0] * m
        e[j] = 1
        return e

    U: List[List[int]] = []
    V: List[List[int]] = []
    W: List[List[int]] = []
    pos = 0
    for _ in range(n_uvw):
        e = unit(pos)
        U.append(e)
        V.append(e)
        W.append(e)
        pos += 1
    for _ in range(n_uv):
        e = unit(pos)
        U.append(e)
        V.append(e)
        pos += 1
    for _ in range(n_uw):
        e = unit(pos)
        U.append(e)
        W.append(e)
        pos += 1
    for _ in range(n_vw):
        e = unit(pos)
        V.append(e)
        W.append(e)
        pos += 1
    for _ in range(n_v):
        V.append(unit(pos))
        pos += 1
    for _ in range(g):
        x, y = unit(pos), unit(pos + 1)
        U.append(x)
        V.append(y)
        W.append([(a + b) % q for a, b in zip(x, y)])
        pos += 2
    return rref_basis(U, q), rref_basis(V, q), rref_basis(W, q)


def _pair_profile(
    U: Matrix, V: Matrix, W: Matrix, Vp: Matrix, Wp: Matrix, m: int, q: int
) -> Tuple[int, ...]:
    def meet_dim(*bases: Matrix) -> int:
        current = bases[0]
        for other in bases[1:]:
            current = _intersect(current, other, q, m)
        return len(current)

    return (
        len(Vp),
        len(Wp),
        len(_intersect(U, Vp, q, m)),
        len(_intersect(U, Wp, q, m)),
        len(_intersect(V, Wp, q, m)),
        len(_intersect(W, Vp, q, m)),
        len(_intersect(Vp, Wp, q, m)),
        meet_dim(U, V, Wp),
        meet_dim(U, W, Vp),
        meet_dim(U, Vp, Wp),
    )


def _intersect(a: Matrix, b: Matrix, q: int, m: int) -> Matrix:
    """RREF basis of span(a) cap span(b) via the kernel of stacked coords."""
    if not a or not b:
        return ()
    # Solve x*A = y*B: kernel of [A; -B] acting from the left.
    rows = [list(r) for r in a] + [[(-x) % q for x in r] for r in b]
    k = len(rows)
    # Left kernel of the k x m matrix `rows`: transpose and find right kernel.
    cols = [[rows[i][j] for i in range(k)] for j in range(m)]
    kernel = _right_kernel(cols, q, k)
    vecs = []
    for coeffs in kernel:
        v = [0] * m
        for i in range(len(a)):
            if coeffs[i]:
                v = [(x + coeffs[i] * y) % q for x, y in zip(v, a[i])]
        vecs.append(v)
    return rref_basis(vecs, q)


def _right_kernel(mat: List[List[int]], q: int, ncols: int) -> List[List[int]]:
    """Basis of {x : mat @ x = 0} over F_q for a dense list-of-rows matrix."""
    rows = [list(r) for r in mat]
    nrows = len(rows)
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] % q), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], q - 2, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] % q:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for i, pc in enumerate(pivots):
            x[pc] = (-rows[i][fc]) % q
        basis.append(x)
    return basis


def pair_counts(
    d1: Sequence[int], m: int, q: int
) -> Dict[Tuple[int, ...], int] | None:
    """Enumerated c-counts: d2-profile -> number of pairs (V', W').

    Realizes a configuration (U, V, W) with W + V = U + V and profile ``d1``
    (returns None if none exists), then enumerates every pair of subspaces
    V' of V and W' of W with W' + V' = U + V' and buckets by the full
    10-dimensional profile.
    """
    config = realize_configuration(d1, m, q)
    if config is None:
        return None
    U, V, W = config
    UV = rref_basis(list(U) + list(V), q)
    counts: Dict[Tuple[int, ...], int] = {}
    subs_V = _subspaces_of_span(V, m, q)
    subs_W = _subspaces_of_span(W, m, q)
    for Vp in subs_V:
        UVp = rref_basis(list(U) + list(Vp), q)
        for Wp in subs_W:
            if rref_basis(list(Wp) + list(Vp), q) != UVp:
                continue
            key = _pair_profile(U, V, W, Vp, Wp, m, q)
            counts[key] = counts.get(key, 0) + 1
    return counts


def subspace_counts(
    m: int,
    q: int,
    U: Matrix,
    V: Matrix,
) -> Dict[Tuple[int, int, int, int], int]:
    """Enumerated l-counts: (dW, dUW, dVW, dUVW) -> number of subspaces W."""
    UV = _intersect(U, V, q, m)
    counts: Dict[Tuple[int, int, int, int], int] = {}
    for W in enumerate_subspaces(m, q):
        key = (
            len(W),
            len(_intersect(U, W, q, m)),
            len(_intersect(V, W, q, m)),
            len(_intersect(UV, W, q, m)),
        )
        counts[key] = counts.get(key, 0) + 1
    return counts


def build_channel(params) -> Dict[Matrix, Dict[Matrix, Fraction]]:
    """Exact transition law P(Y | X) for every input matrix X.

    ``params`` provides q (prime), n, m and an error rank distribution whose
    entries must be exact rationals.  The law is assembled term by term:
    P(Y|X) = (1/|GL|) * sum_A sum_rB R(rB)/N_rB * sum_{B of rank rB} [A(X+B)=Y].
    """
    q, n, m = params.q, params.n, params.m
    _require_prime(q)
    weights = list(params.error_dist)
    for w in weights:
        if not isinstance(w, (int, Fraction)):
            raise ValueError(
                "oracle channel law needs exact rational error probabilities"
            )
    gl = list(enumerate_gl(n, q))
    n_terms = len(gl) * q ** (2 * n * m)
    if n_terms > CHANNEL_TERM_BUDGET:
        raise BudgetExceededError(
            f"|GL|*q^(2nm) = {n_terms} exceeds the channel budget {CHANNEL_TERM_BUDGET}"
        )
    all_mats = list(enumerate_matrices(n, m, q))
    by_rank: Dict[int, List[Matrix]] = {}
    for mat in all_mats:
        by_rank.setdefault(rank_of(mat, q), []).append(mat)
    inv_gl = Fraction(1, len(gl))
    table: Dict[Matrix, Dict[Matrix, Fraction]] = {}
    for X in all_mats:
        row: Dict[Matrix, Fraction] = {}
        for rb, rb_weight in enumerate(weights):
            if rb_weight == 0 or rb not in by_rank:
                continue
            per_b = Fraction(rb_weight) / len(by_rank[rb])
            for B in by_rank[rb]:
                Z = _mat_add(X, B, q)
                w = per_b * inv_gl
                for A in gl:
                    Y = _mat_mul(A, Z, q)
                    row[Y] = row.get(Y, Fraction(0)) + w
        table[X] = row
    return table


def channel_output_rank_marginal(
    table: Dict[Matrix, Dict[Matrix, Fraction]],
    input_rank_probs: Sequence,
    q: int,
) -> List[Fraction]:
    """Exact output rank law for a rank-uniform input over ``table``'s alphabet."""
    inputs = list(table)
    by_rank: Dict[int, List[Matrix]] = {}
    for X in inputs:
        by_rank.setdefault(rank_of(X, q), []).append(X)
    max_rank = max(
        max((rank_of(Y, q) for Y in row), default=0) for row in table.values()
    )
    out = [Fraction(0)] * (max(len(input_rank_probs), max_rank + 1))
    for rx, p in enumerate(input_rank_probs):
        if p == 0 or rx not in by_rank:
            continue
        class_weight = Fraction(p) / len(by_rank[rx])
        for X in by_rank[rx]:
            for Y, pyx in table[X].items():
                out[rank_of(Y, q)] += class_weight * pyx
    return out


def entropy_bits(probs) -> float:
    """Shannon entropy in bits of an iterable of exact or float probabilities."""
    total = 0.0
    for p in probs:
        if p == 0:
            continue
        if isinstance(p, Fraction):
            logp = math.log2(p.numerator) - math.log2(p.denominator)
            total -= float(p) * logp
        else:
            total -= p * math.log2(p)
    return total


def row_entropy_bits(row: Dict[Matrix, Fraction]) -> float:
    return entropy_bits(row.values())


def blahut_arimoto(
    table: Dict[Matrix, Dict[Matrix, Fraction]],
    tol: float = 1e-9,
    max_iter: int = 200000,
) -> Tuple[float, List[float]]:
    """Classical Blahut-Arimoto over the full input alphabet.

    Returns (capacity bits, optimizing input distribution) once the standard
    upper and lower capacity bounds agree within ``tol`` bits; the reported
    capacity is their midpoint.
    """
    inputs = list(table)
    outputs = sorted({y for row in table.values() for y in row})
    y_index = {y: j for j, y in enumerate(outputs)}
    p_y_x = [[0.0] * len(outputs) for _ in inputs]
    for i, x in enumerate(inputs):
        for y, pr in table[x].items():
            p_y_x[i][y_index[y]] = float(pr)
    k = len(inputs)
    p = [1.0 / k] * k
    for _ in range(max_iter):
        qy = [0.0] * len(outputs)
        for i in range(k):
            pi = p[i]
            if pi == 0.0:
                continue
            row = p_y_x[i]
            for j in range(len(outputs)):
                qy[j] += pi * row[j]
        d = [0.0] * k
        for i in range(k):
            acc = 0.0
            row = p_y_x[i]
            for j in range(len(outputs)):
                pyx = row[j]
                if pyx > 0.0:
                    acc += pyx * math.log2(pyx / qy[j])
            d[i] = acc
        lower = sum(p[i] * d[i] for i in range(k))
        upper = max(d)
        if upper - lower <= tol:
            return (upper + lower) / 2.0, p
        z = [p[i] * 2.0 ** d[i] for i in range(k)]
        s = sum(z)
        p = [zi / s for zi in z]
    return (upper + lower) / 2.0, p
