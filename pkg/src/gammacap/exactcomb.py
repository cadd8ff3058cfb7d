"""Exact big-integer subspace combinatorics over a finite field.

All counts are plain Python ints (arbitrary precision, never rounded).
Conventions:

- Public functions raise ``ValueError`` on malformed input (negative
  dimensions, non-prime-power q, dimensions beyond :data:`MAX_DIMENSION`).
- Combinatorially impossible but well-formed requests return 0, because the
  higher-level summations rely on out-of-range terms vanishing.
"""

from __future__ import annotations

from functools import lru_cache

#: Dimensions above this are refused so exponents like q**(n*m) stay tractable.
#: Reassign the module attribute to raise the bound.
MAX_DIMENSION = 64


def is_prime_power(q: int) -> bool:
    """True iff q = p**k for a prime p and k >= 1, by trial division."""
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            while q % d == 0:
                q //= d
            return q == 1
        d += 1
    return True  # q itself is prime


def validate_field_order(q: int) -> int:
    """Return q unchanged if it is a prime power, else raise ValueError."""
    if not isinstance(q, int) or isinstance(q, bool):
        raise ValueError(f"field order must be an int, got {q!r}")
    if not is_prime_power(q):
        raise ValueError(f"field order must be a prime power >= 2, got {q}")
    return q


def _check_dims(**dims: int) -> None:
    for name, value in dims.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError(f"{name} must be an int, got {value!r}")
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")
        if value > MAX_DIMENSION:
            raise ValueError(
                f"{name} = {value} exceeds MAX_DIMENSION = {MAX_DIMENSION}"
            )


@lru_cache(maxsize=None)
def _qbinom_checked(m: int, d: int, q: int) -> int:
    if d > m:
        return 0
    d = min(d, m - d)
    num = 1
    den = 1
    for i in range(d):
        num *= q**m - q**i
        den *= q**d - q**i
    quotient, remainder = divmod(num, den)
    assert remainder == 0, "Gaussian binomial division must be exact"
    return quotient


def qbinom(m: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of an m-dimensional F_q-space.

    Evaluates the telescoping product prod_{i<d} (q^m - q^i)/(q^d - q^i)
    with a single exact final division; 0 when d > m.
    """
    _check_dims(m=m, d=d)
    validate_field_order(q)
    return _qbinom_checked(m, d, q)


def qbinom_ext(m: int, d: int, q: int) -> int:
    """qbinom extended by 0 to every out-of-range argument.

    Interior summations index over wide ranges and rely on impossible
    configurations contributing nothing; this variant absorbs negative or
    oversized arguments instead of raising.
    """
    if d < 0 or m < 0 or d > m:
        return 0
    return _qbinom_checked(m, d, q)


def count_rank_matrices(n: int, m: int, r: int, q: int) -> int:
    """Number of n x m matrices of rank exactly r over F_q."""
    _check_dims(n=n, m=m, r=r)
    validate_field_order(q)
    if r > min(n, m):
        return 0
    out = _qbinom_checked(m, r, q)
    for i in range(r):
        out *= q**n - q**i
    return out


def count_fix_int_and_image(dU: int, dV1: int, dV2: int, q: int) -> int:
    """Subspaces U with prescribed intersection with V1 and image in V/V1.

    For nested reference spaces V2 <= V1 <= V and a prescribed image of U in
    the quotient V/V1, exactly q^{(dU-dV2)(dV1-dV2)} subspaces U satisfy
    U cap V1 = V2 together with the prescribed image.
    """
    _check_dims(dU=dU, dV1=dV1, dV2=dV2)
    validate_field_order(q)
    if dV2 > min(dV1, dU):
        raise ValueError(
            f"dV2 = {dV2} must not exceed min(dV1, dU) = {min(dV1, dU)}"
        )
    return q ** ((dU - dV2) * (dV1 - dV2))


def count_fixed_intersection(dV: int, dV1: int, dV2: int, dU: int, q: int) -> int:
    """Subspaces U <= V of dimension dU with U cap V1 = V2 (V2 <= V1 <= V)."""
    _check_dims(dV=dV, dV1=dV1, dV2=dV2, dU=dU)
    validate_field_order(q)
    if dV2 > min(dV1, dU) or dV1 > dV or dU > dV:
        return 0
    return q ** ((dU - dV2) * (dV1 - dV2)) * qbinom_ext(dV - dV1, dU - dV2, q)


def count_fixed_image(dV1: int, dU: int, dUimg: int, q: int) -> int:
    """Subspaces U of V with a fixed dUimg-dimensional image in V/V1."""
    _check_dims(dV1=dV1, dU=dU, dUimg=dUimg)
    validate_field_order(q)
    binom = qbinom_ext(dV1, dU - dUimg, q)
    if binom == 0:
        return 0
    return q ** (dUimg * (dV1 - (dU - dUimg))) * binom


def count_fixed_dim_intersection(dV: int, dV1: int, dU: int, dUV1: int, q: int) -> int:
    """Subspaces U <= V of dimension dU with dim(U cap V1) = dUV1."""
    _check_dims(dV=dV, dV1=dV1, dU=dU, dUV1=dUV1)
    validate_field_order(q)
    binoms = qbinom_ext(dV - dV1, dU - dUV1, q) * qbinom_ext(dV1, dUV1, q)
    if binoms == 0:
        return 0
    return q ** ((dU - dUV1) * (dV1 - dUV1)) * binoms


def mobius_subspace(dV: int, dU: int, q: int) -> int:
    """Moebius coefficient mu(V, U) = (-1)^(dU-dV) q^C(dU-dV,2) for V <= U."""
    _check_dims(dV=dV, dU=dU)
    validate_field_order(q)
    if dV > dU:
        raise ValueError(f"mobius_subspace needs dV <= dU, got dV={dV} > dU={dU}")
    k = dU - dV
    return (-1) ** k * q ** (k * (k - 1) // 2)
