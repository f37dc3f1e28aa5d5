# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the fast twin of reference.py.

Operation order matches the pure-Python implementation so both backends agree
to floating-point roundoff.  Keep any change here in sync with reference.py.
"""

from libc.math cimport cos, fabs, sin, sqrt

BACKEND = "compiled"

DEF MAX_DIM = 8
DEF MAX_STATES = 32
DEF MAX_AXES = 8

cdef double JACOBI_OFF_TOL = 1e-14
cdef int JACOBI_MAX_SWEEPS = 60


def herm2_eigvals(double a, double br, double bi, double d):
    """Eigenvalues (low, high) of the Hermitian matrix [[a, br+i*bi], [br-i*bi, d]]."""
    cdef double mid = 0.5 * (a + d)
    cdef double rad = sqrt(0.25 * (a - d) * (a - d) + br * br + bi * bi)
    return mid - rad, mid + rad


def trace_norm_herm2(double a, double br, double bi, double d):
    """Sum of absolute eigenvalues of the Hermitian matrix [[a, br+i*bi], [br-i*bi, d]]."""
    cdef double mid = 0.5 * (a + d)
    cdef double rad = sqrt(0.25 * (a - d) * (a - d) + br * br + bi * bi)
    return fabs(mid - rad) + fabs(mid + rad)


def hermitian_eigvals(double[:, :] re, double[:, :] im):
    """Eigenvalues of a small complex Hermitian matrix, ascending.

    Cyclic Jacobi with complex Givens rotations; converges when every
    off-diagonal magnitude falls below 1e-14.
    """
    cdef int k = re.shape[0]
    if k > MAX_DIM or re.shape[1] != k or im.shape[0] != k or im.shape[1] != k:
        raise ValueError(f"kernel eigensolver supports square matrices of dimension <= {MAX_DIM}")
    cdef double a[MAX_DIM][MAX_DIM]
    cdef double b[MAX_DIM][MAX_DIM]
    cdef int i, j, p, q, sweep
    cdef double off, gre, gim, g, app, aqq, wr, wi, tau, t, c, s
    cdef double jp_re, jp_im, wq_re, wq_im, new_p_re, new_p_im, new_q_re, new_q_im
    for i in range(k):
        for j in range(k):
            a[i][j] = re[i, j]
            b[i][j] = im[i, j]
    for sweep in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(k - 1):
            for q in range(p + 1, k):
                gre = a[p][q]
                gim = b[p][q]
                g = sqrt(gre * gre + gim * gim)
                if g > off:
                    off = g
                if g <= JACOBI_OFF_TOL:
                    continue
                app = a[p][p]
                aqq = a[q][q]
                wr = gre / g
                wi = -gim / g
                tau = (aqq - app) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for j in range(k):
                    if j == p or j == q:
                        continue
                    jp_re = a[j][p]
                    jp_im = b[j][p]
                    wq_re = wr * a[j][q] - wi * b[j][q]
                    wq_im = wr * b[j][q] + wi * a[j][q]
                    new_p_re = c * jp_re - s * wq_re
                    new_p_im = c * jp_im - s * wq_im
                    new_q_re = s * jp_re + c * wq_re
                    new_q_im = s * jp_im + c * wq_im
                    a[j][p] = new_p_re
                    b[j][p] = new_p_im
                    a[p][j] = new_p_re
                    b[p][j] = -new_p_im
                    a[j][q] = new_q_re
                    b[j][q] = new_q_im
                    a[q][j] = new_q_re
                    b[q][j] = -new_q_im
                a[p][p] = app - t * g
                a[q][q] = aqq + t * g
                b[p][p] = 0.0
                b[q][q] = 0.0
                a[p][q] = 0.0
                b[p][q] = 0.0
                a[q][p] = 0.0
                b[q][p] = 0.0
        if off <= JACOBI_OFF_TOL:
            break
    out = [a[j][j] for j in range(k)]
    out.sort()
    return out


def pom_success_penalty(double[:] angles, double[:, :] xsign, double[:, :] msign):
    """Success probability and total parity trace-distance of an angle-coded protocol.

    Layout and conventions as in the pure backend: (theta, phi) per
    preparation, then (theta, phi) per measurement axis.
    """
    cdef int nx = xsign.shape[0]
    cdef int n = xsign.shape[1]
    cdef int nm = msign.shape[0]
    if nx > MAX_STATES or n > MAX_AXES:
        raise ValueError("kernel objective supports at most 32 states and 8 axes")
    cdef double sx[MAX_STATES]
    cdef double sy[MAX_STATES]
    cdef double sz[MAX_STATES]
    cdef double ax[MAX_AXES]
    cdef double ay[MAX_AXES]
    cdef double az[MAX_AXES]
    cdef int x, y, j, base
    cdef double th, ph, sth, succ, w, dx, dy, dz, pen, half
    for x in range(nx):
        th = angles[2 * x]
        ph = angles[2 * x + 1]
        sth = sin(th)
        sx[x] = sth * cos(ph)
        sy[x] = sth * sin(ph)
        sz[x] = cos(th)
    base = 2 * nx
    for y in range(n):
        th = angles[base + 2 * y]
        ph = angles[base + 2 * y + 1]
        sth = sin(th)
        ax[y] = sth * cos(ph)
        ay[y] = sth * sin(ph)
        az[y] = cos(th)
    succ = 0.0
    for x in range(nx):
        for y in range(n):
            succ += 0.5 * (1.0 + xsign[x, y] * (sx[x] * ax[y] + sy[x] * ay[y] + sz[x] * az[y]))
    succ /= nx * n
    half = nx // 2
    pen = 0.0
    for j in range(nm):
        dx = 0.0
        dy = 0.0
        dz = 0.0
        for x in range(nx):
            w = msign[j, x]
            dx += w * sx[x]
            dy += w * sy[x]
            dz += w * sz[x]
        dx /= half
        dy /= half
        dz /= half
        pen += sqrt(dx * dx + dy * dy + dz * dz)
    return succ, pen


def pom_objective(double[:] angles, double[:, :] xsign, double[:, :] msign, double mu, double eps):
    """Penalized objective success - mu * smoothed_penalty (eps = 0 is exact)."""
    cdef int nx = xsign.shape[0]
    cdef int n = xsign.shape[1]
    cdef int nm = msign.shape[0]
    if nx > MAX_STATES or n > MAX_AXES:
        raise ValueError("kernel objective supports at most 32 states and 8 axes")
    cdef double sx[MAX_STATES]
    cdef double sy[MAX_STATES]
    cdef double sz[MAX_STATES]
    cdef double ax[MAX_AXES]
    cdef double ay[MAX_AXES]
    cdef double az[MAX_AXES]
    cdef int x, y, j, base
    cdef double th, ph, sth, succ, w, dx, dy, dz, pen, half, e2
    for x in range(nx):
        th = angles[2 * x]
        ph = angles[2 * x + 1]
        sth = sin(th)
        sx[x] = sth * cos(ph)
        sy[x] = sth * sin(ph)
        sz[x] = cos(th)
    base = 2 * nx
    for y in range(n):
        th = angles[base + 2 * y]
        ph = angles[base + 2 * y + 1]
        sth = sin(th)
        ax[y] = sth * cos(ph)
        ay[y] = sth * sin(ph)
        az[y] = cos(th)
    succ = 0.0
    for x in range(nx):
        for y in range(n):
            succ += 0.5 * (1.0 + xsign[x, y] * (sx[x] * ax[y] + sy[x] * ay[y] + sz[x] * az[y]))
    succ /= nx * n
    half = nx // 2
    e2 = eps * eps
    pen = 0.0
    for j in range(nm):
        dx = 0.0
        dy = 0.0
        dz = 0.0
        for x in range(nx):
            w = msign[j, x]
            dx += w * sx[x]
            dy += w * sy[x]
            dz += w * sz[x]
        dx /= half
        dy /= half
        dz /= half
        pen += sqrt(dx * dx + dy * dy + dz * dz + e2) - eps
    return succ - mu * pen
