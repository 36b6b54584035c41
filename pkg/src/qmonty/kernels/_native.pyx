# cython: language_level=3
"""Compiled kernels, bit-compatible with the pure-Python backend.

Every formula, branch, and random draw mirrors ``_pure.py`` exactly:
complex products use the plain schoolbook expansion, divisions by a
real modulus happen componentwise, and Gaussian/uniform variates come
one at a time from the same C generators numpy's ``Generator`` methods
loop over.  Given equal streams the two backends return equal bits.
"""

import math

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport hypot as c_hypot, sqrt as c_sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (random_standard_normal,
                                           random_standard_uniform)

BACKEND = "native"

Vec = tuple

cdef const char *CAPSULE_NAME = "BitGenerator"


cdef inline bitgen_t *_bitgen(object rng) except NULL:
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef inline double complex _cmul(double complex a, double complex b) nogil:
    # schoolbook product; avoids the library __muldc3 path so rounding
    # matches CPython's complex multiply
    return (a.real * b.real - a.imag * b.imag) + \
           (a.real * b.imag + a.imag * b.real) * 1j


cdef inline double complex _conj(double complex a) nogil:
    return a.real - a.imag * 1j


cdef inline double _cabs(double complex a) nogil:
    return c_hypot(a.real, a.imag)


cdef inline double complex _inner3(double complex a0, double complex a1,
                                   double complex a2, double complex b0,
                                   double complex b1,
                                   double complex b2) nogil:
    return _cmul(_conj(a0), b0) + _cmul(_conj(a1), b1) + _cmul(_conj(a2), b2)


def inner(a, b):
    """Hermitian inner product, conjugate-linear in the first argument."""
    cdef double complex a0 = a[0], a1 = a[1], a2 = a[2]
    cdef double complex b0 = b[0], b1 = b[1], b2 = b[2]
    return complex(_inner3(a0, a1, a2, b0, b1, b2))


def norm_sq(v):
    cdef double complex a = v[0], b = v[1], c = v[2]
    return (a.real * a.real + a.imag * a.imag
            + b.real * b.real + b.imag * b.imag
            + c.real * c.real + c.imag * c.imag)


def normalize(v):
    cdef double complex a = v[0], b = v[1], c = v[2]
    cdef double n = c_sqrt(a.real * a.real + a.imag * a.imag
                           + b.real * b.real + b.imag * b.imag
                           + c.real * c.real + c.imag * c.imag)
    if n == 0.0:
        raise ZeroDivisionError("cannot normalize the zero vector")
    cdef double s = 1.0 / n
    return (complex(a * s), complex(b * s), complex(c * s))


def cross_conj(a, b):
    """Conjugated formal cross product (see the pure backend docstring)."""
    cdef double complex a0 = a[0], a1 = a[1], a2 = a[2]
    cdef double complex b0 = b[0], b1 = b[1], b2 = b[2]
    return (
        complex(_conj(_cmul(a1, b2) - _cmul(a2, b1))),
        complex(_conj(_cmul(a2, b0) - _cmul(a0, b2))),
        complex(_conj(_cmul(a0, b1) - _cmul(a1, b0))),
    )


def phase_normalize(v, double eps):
    """Rotate by a global phase so the first component with modulus > eps
    becomes real and positive."""
    cdef double complex v0 = v[0], v1 = v[1], v2 = v[2]
    cdef double complex c, ph
    cdef double m
    cdef int k
    for k in range(3):
        c = v0 if k == 0 else (v1 if k == 1 else v2)
        m = _cabs(c)
        if m > eps:
            # componentwise division by the real modulus, matching how
            # CPython divides a complex by a float
            ph = (c.real / m) - (c.imag / m) * 1j
            return (complex(_cmul(v0, ph)), complex(_cmul(v1, ph)),
                    complex(_cmul(v2, ph)))
    return v


cdef inline double _born3(double complex s0, double complex s1,
                          double complex s2, double complex q0,
                          double complex q1, double complex q2) nogil:
    cdef double complex ip = _inner3(q0, q1, q2, s0, s1, s2)
    cdef double p = ip.real * ip.real + ip.imag * ip.imag
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


def born(state, axis):
    """Probability |<axis|state>|^2, clipped into [0, 1]."""
    cdef double complex s0 = state[0], s1 = state[1], s2 = state[2]
    cdef double complex q0 = axis[0], q1 = axis[1], q2 = axis[2]
    return _born3(s0, s1, s2, q0, q1, q2)


def project_onto(state, axis):
    """Normalized image of the state under the rank-one projector |axis><axis|."""
    cdef double complex s0 = state[0], s1 = state[1], s2 = state[2]
    cdef double complex q0 = axis[0], q1 = axis[1], q2 = axis[2]
    cdef double complex ip = _inner3(q0, q1, q2, s0, s1, s2)
    cdef double m = _cabs(ip)
    if m == 0.0:
        raise ZeroDivisionError("state is orthogonal to the projection axis")
    cdef double complex ph = (ip.real / m) + (ip.imag / m) * 1j
    return (complex(_cmul(q0, ph)), complex(_cmul(q1, ph)),
            complex(_cmul(q2, ph)))


def project_out(state, axis):
    """Normalized image of the state under 1 - |axis><axis|."""
    cdef double complex s0 = state[0], s1 = state[1], s2 = state[2]
    cdef double complex q0 = axis[0], q1 = axis[1], q2 = axis[2]
    cdef double complex ip = _inner3(q0, q1, q2, s0, s1, s2)
    cdef double complex r0 = s0 - _cmul(q0, ip)
    cdef double complex r1 = s1 - _cmul(q1, ip)
    cdef double complex r2 = s2 - _cmul(q2, ip)
    cdef double n = c_sqrt(r0.real * r0.real + r0.imag * r0.imag
                           + r1.real * r1.real + r1.imag * r1.imag
                           + r2.real * r2.real + r2.imag * r2.imag)
    if n == 0.0:
        raise ZeroDivisionError("cannot normalize the zero vector")
    cdef double s = 1.0 / n
    return (complex(r0 * s), complex(r1 * s), complex(r2 * s))


def lueders(state, axis, rng):
    """Binary projective measurement {q, 1-q} with q = |axis><axis|."""
    cdef double complex s0 = state[0], s1 = state[1], s2 = state[2]
    cdef double complex q0 = axis[0], q1 = axis[1], q2 = axis[2]
    cdef bitgen_t *bg = _bitgen(rng)
    cdef double p = _born3(s0, s1, s2, q0, q1, q2)
    if random_standard_uniform(bg) < p:
        return True, project_onto(state, axis)
    return False, project_out(state, axis)


def haar_unit(rng):
    """Unit vector distributed uniformly under all unitary rotations."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef double g0, g1, g2, g3, g4, g5, n, s
    while True:
        g0 = random_standard_normal(bg)
        g1 = random_standard_normal(bg)
        g2 = random_standard_normal(bg)
        g3 = random_standard_normal(bg)
        g4 = random_standard_normal(bg)
        g5 = random_standard_normal(bg)
        n = g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4 + g5 * g5
        if n > 1e-24:
            s = 1.0 / c_sqrt(n)
            return (complex(g0 * s, g1 * s), complex(g2 * s, g3 * s),
                    complex(g4 * s, g5 * s))


def real_unit(rng):
    """Unit vector with real components, uniform on the real 2-sphere."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef double g0, g1, g2, n, s
    while True:
        g0 = random_standard_normal(bg)
        g1 = random_standard_normal(bg)
        g2 = random_standard_normal(bg)
        n = g0 * g0 + g1 * g1 + g2 * g2
        if n > 1e-24:
            s = 1.0 / c_sqrt(n)
            return (complex(g0 * s, 0.0), complex(g1 * s, 0.0),
                    complex(g2 * s, 0.0))


def complement_basis(axis):
    """Deterministic orthonormal basis of the plane orthogonal to a unit
    axis; same pivot rule as the pure backend."""
    cdef double complex a0 = axis[0], a1 = axis[1], a2 = axis[2]
    cdef double m0 = _cabs(a0), m1 = _cabs(a1), m2 = _cabs(a2)
    cdef int k = 0
    if m1 < m0:
        k = 1
        if m2 < m1:
            k = 2
    elif m2 < m0:
        k = 2
    cdef double complex e0 = 1.0 if k == 0 else 0.0
    cdef double complex e1 = 1.0 if k == 1 else 0.0
    cdef double complex e2 = 1.0 if k == 2 else 0.0
    cdef double complex ck = _conj(a0 if k == 0 else (a1 if k == 1 else a2))
    u1 = normalize((complex(e0 - _cmul(a0, ck)), complex(e1 - _cmul(a1, ck)),
                    complex(e2 - _cmul(a2, ck))))
    u2 = normalize(cross_conj(axis, u1))
    return u1, u2


def unit_in_complement(axis, rng):
    """Haar-uniform unit vector in the 2-dim orthogonal complement of axis."""
    u1, u2 = complement_basis(axis)
    cdef double complex u10 = u1[0], u11 = u1[1], u12 = u1[2]
    cdef double complex u20 = u2[0], u21 = u2[1], u22 = u2[2]
    cdef bitgen_t *bg = _bitgen(rng)
    cdef double complex c1, c2, v0, v1, v2
    cdef double g0, g1, g2, g3, n, s
    while True:
        g0 = random_standard_normal(bg)
        g1 = random_standard_normal(bg)
        g2 = random_standard_normal(bg)
        g3 = random_standard_normal(bg)
        c1 = g0 + g1 * 1j
        c2 = g2 + g3 * 1j
        v0 = _cmul(c1, u10) + _cmul(c2, u20)
        v1 = _cmul(c1, u11) + _cmul(c2, u21)
        v2 = _cmul(c1, u12) + _cmul(c2, u22)
        n = (v0.real * v0.real + v0.imag * v0.imag
             + v1.real * v1.real + v1.imag * v1.imag
             + v2.real * v2.real + v2.imag * v2.imag)
        if n > 1e-24:
            s = 1.0 / c_sqrt(n)
            return (complex(v0 * s), complex(v1 * s), complex(v2 * s))
