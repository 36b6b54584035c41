"""Pure-Python kernels for 3-dimensional complex vector arithmetic.

These are the hot primitives consumed millions of times per Monte Carlo
run.  Vectors are plain tuples of three ``complex`` numbers; no numpy
arrays appear on this path because the per-call overhead would dominate
at this size.  The compiled backend in ``_native.pyx`` mirrors every
formula (including evaluation order) so that both backends produce
bit-identical results from the same random stream.
"""

from __future__ import annotations

import math

BACKEND = "pure"

Vec = tuple[complex, complex, complex]


def inner(a: Vec, b: Vec) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    return (
        a[0].conjugate() * b[0]
        + a[1].conjugate() * b[1]
        + a[2].conjugate() * b[2]
    )


def norm_sq(v: Vec) -> float:
    a, b, c = v
    return (
        a.real * a.real + a.imag * a.imag
        + b.real * b.real + b.imag * b.imag
        + c.real * c.real + c.imag * c.imag
    )


def normalize(v: Vec) -> Vec:
    n = math.sqrt(norm_sq(v))
    if n == 0.0:
        raise ZeroDivisionError("cannot normalize the zero vector")
    s = 1.0 / n
    return (v[0] * s, v[1] * s, v[2] * s)


def cross_conj(a: Vec, b: Vec) -> Vec:
    """Conjugated formal cross product.

    The result is Hermitian-orthogonal to both inputs and vanishes
    exactly when they are linearly dependent over the complex field.
    Not normalized.
    """
    return (
        (a[1] * b[2] - a[2] * b[1]).conjugate(),
        (a[2] * b[0] - a[0] * b[2]).conjugate(),
        (a[0] * b[1] - a[1] * b[0]).conjugate(),
    )


def phase_normalize(v: Vec, eps: float) -> Vec:
    """Rotate by a global phase so the first component with modulus > eps
    becomes real and positive.  Norm is preserved exactly; a vector with
    no component above eps is returned unchanged."""
    for c in v:
        m = abs(c)
        if m > eps:
            ph = c.conjugate() / m
            return (v[0] * ph, v[1] * ph, v[2] * ph)
    return v


def born(state: Vec, axis: Vec) -> float:
    """Probability |<axis|state>|^2, clipped into [0, 1]."""
    ip = inner(axis, state)
    p = ip.real * ip.real + ip.imag * ip.imag
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


def project_onto(state: Vec, axis: Vec) -> Vec:
    """Normalized image of the state under the rank-one projector |axis><axis|."""
    ip = inner(axis, state)
    m = abs(ip)
    if m == 0.0:
        raise ZeroDivisionError("state is orthogonal to the projection axis")
    ph = ip / m
    return (axis[0] * ph, axis[1] * ph, axis[2] * ph)


def project_out(state: Vec, axis: Vec) -> Vec:
    """Normalized image of the state under 1 - |axis><axis|."""
    ip = inner(axis, state)
    return normalize(
        (state[0] - axis[0] * ip, state[1] - axis[1] * ip, state[2] - axis[2] * ip)
    )


def lueders(state: Vec, axis: Vec, rng) -> tuple[bool, Vec]:
    """Binary projective measurement {q, 1-q} with q = |axis><axis|.

    Returns (hit, post_state) where the "yes" branch fires with the Born
    probability and the post state is the normalized projection onto the
    observed branch.
    """
    p = born(state, axis)
    if rng.random() < p:
        return True, project_onto(state, axis)
    return False, project_out(state, axis)


def haar_unit(rng) -> Vec:
    """Unit vector distributed uniformly under all unitary rotations.

    Six independent standard Gaussians as real/imaginary parts, then
    normalized; resamples on the measure-zero zero draw.
    """
    while True:
        g = rng.standard_normal(6)
        v = (
            complex(g[0], g[1]),
            complex(g[2], g[3]),
            complex(g[4], g[5]),
        )
        n = norm_sq(v)
        if n > 1e-24:
            s = 1.0 / math.sqrt(n)
            return (v[0] * s, v[1] * s, v[2] * s)


def real_unit(rng) -> Vec:
    """Unit vector with real components, uniform on the real 2-sphere."""
    while True:
        g = rng.standard_normal(3)
        v = (complex(g[0], 0.0), complex(g[1], 0.0), complex(g[2], 0.0))
        n = norm_sq(v)
        if n > 1e-24:
            s = 1.0 / math.sqrt(n)
            return (v[0] * s, v[1] * s, v[2] * s)


def complement_basis(axis: Vec) -> tuple[Vec, Vec]:
    """Deterministic orthonormal basis of the plane orthogonal to a unit axis.

    Starts from the standard basis vector least aligned with the axis
    (first index wins ties) so the construction is reproducible across
    backends.
    """
    m0, m1, m2 = abs(axis[0]), abs(axis[1]), abs(axis[2])
    k = 0
    if m1 < m0:
        k = 1
        if m2 < m1:
            k = 2
    elif m2 < m0:
        k = 2
    e = [0j, 0j, 0j]
    e[k] = 1.0 + 0j
    ck = axis[k].conjugate()
    u1 = normalize((e[0] - axis[0] * ck, e[1] - axis[1] * ck, e[2] - axis[2] * ck))
    u2 = normalize(cross_conj(axis, u1))
    return u1, u2


def unit_in_complement(axis: Vec, rng) -> Vec:
    """Haar-uniform unit vector in the 2-dim orthogonal complement of axis."""
    u1, u2 = complement_basis(axis)
    while True:
        g = rng.standard_normal(4)
        c1 = complex(g[0], g[1])
        c2 = complex(g[2], g[3])
        v = (
            c1 * u1[0] + c2 * u2[0],
            c1 * u1[1] + c2 * u2[1],
            c1 * u1[2] + c2 * u2[2],
        )
        n = norm_sq(v)
        if n > 1e-24:
            s = 1.0 / math.sqrt(n)
            return (v[0] * s, v[1] * s, v[2] * s)
