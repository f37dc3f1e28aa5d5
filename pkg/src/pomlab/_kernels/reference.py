"""Pure-Python kernels: the fallback twin of the compiled extension.

Both backends implement the same operations in the same evaluation order so
their results agree to floating-point roundoff.  Keep any change here in sync
with _fast.pyx.
"""

from math import cos, sin, sqrt

BACKEND = "pure"

_MAX_DIM = 8
_JACOBI_OFF_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 60


def herm2_eigvals(a, br, bi, d):
    """Eigenvalues (low, high) of the Hermitian matrix [[a, br+i*bi], [br-i*bi, d]]."""
    mid = 0.5 * (a + d)
    rad = sqrt(0.25 * (a - d) * (a - d) + br * br + bi * bi)
    return mid - rad, mid + rad


def trace_norm_herm2(a, br, bi, d):
    """Sum of absolute eigenvalues of the Hermitian matrix [[a, br+i*bi], [br-i*bi, d]]."""
    lo, hi = herm2_eigvals(a, br, bi, d)
    return abs(lo) + abs(hi)


def hermitian_eigvals(re, im):
    """Eigenvalues of a small complex Hermitian matrix, ascending.

    re and im are the real and imaginary parts as k x k arrays, k <= 8.
    Cyclic Jacobi with complex Givens rotations; converges when every
    off-diagonal magnitude falls below 1e-14.
    """
    a = re.tolist() if hasattr(re, "tolist") else [list(row) for row in re]
    b = im.tolist() if hasattr(im, "tolist") else [list(row) for row in im]
    k = len(a)
    if k > _MAX_DIM:
        raise ValueError(f"kernel eigensolver supports dimension <= {_MAX_DIM}, got {k}")
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(k - 1):
            for q in range(p + 1, k):
                gre = a[p][q]
                gim = b[p][q]
                g = sqrt(gre * gre + gim * gim)
                if g > off:
                    off = g
                if g <= _JACOBI_OFF_TOL:
                    continue
                app = a[p][p]
                aqq = a[q][q]
                # phase w = conj(A[p][q]) / |A[p][q]| makes the pivot real
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
        if off <= _JACOBI_OFF_TOL:
            break
    return sorted(a[j][j] for j in range(k))


def _unpack(table):
    return table.tolist() if hasattr(table, "tolist") else table


def pom_success_penalty(angles, xsign, msign):
    """Success probability and total parity trace-distance of an angle-coded protocol.

    angles lays out (theta, phi) per preparation followed by (theta, phi) per
    measurement axis; xsign[x][y] is +1 when bit y+1 of x is 0; msign[j][x] is
    the +-1 parity character of mask j at x.  The trace distance between two
    parity mixtures equals the Euclidean distance of their mean Bloch vectors.
    """
    ang = list(map(float, angles))
    xs = _unpack(xsign)
    ms = _unpack(msign)
    nx = len(xs)
    n = len(xs[0])
    states = []
    for x in range(nx):
        th = ang[2 * x]
        ph = ang[2 * x + 1]
        sth = sin(th)
        states.append((sth * cos(ph), sth * sin(ph), cos(th)))
    base = 2 * nx
    axes = []
    for y in range(n):
        th = ang[base + 2 * y]
        ph = ang[base + 2 * y + 1]
        sth = sin(th)
        axes.append((sth * cos(ph), sth * sin(ph), cos(th)))
    succ = 0.0
    for x in range(nx):
        rx, ry, rz = states[x]
        row = xs[x]
        for y in range(n):
            ax, ay, az = axes[y]
            succ += 0.5 * (1.0 + row[y] * (rx * ax + ry * ay + rz * az))
    succ /= nx * n
    half = nx // 2
    pen = 0.0
    for j in range(len(ms)):
        row = ms[j]
        dx = dy = dz = 0.0
        for x in range(nx):
            w = row[x]
            dx += w * states[x][0]
            dy += w * states[x][1]
            dz += w * states[x][2]
        dx /= half
        dy /= half
        dz /= half
        pen += sqrt(dx * dx + dy * dy + dz * dz)
    return succ, pen


def pom_objective(angles, xsign, msign, mu, eps):
    """Penalized objective success - mu * smoothed_penalty.

    eps > 0 replaces each |d| penalty term with sqrt(d^2 + eps^2) - eps, the
    hyperbolic smoothing used by the optimizer's continuation schedule; eps = 0
    gives the exact penalty.
    """
    ang = list(map(float, angles))
    xs = _unpack(xsign)
    ms = _unpack(msign)
    nx = len(xs)
    n = len(xs[0])
    states = []
    for x in range(nx):
        th = ang[2 * x]
        ph = ang[2 * x + 1]
        sth = sin(th)
        states.append((sth * cos(ph), sth * sin(ph), cos(th)))
    base = 2 * nx
    axes = []
    for y in range(n):
        th = ang[base + 2 * y]
        ph = ang[base + 2 * y + 1]
        sth = sin(th)
        axes.append((sth * cos(ph), sth * sin(ph), cos(th)))
    succ = 0.0
    for x in range(nx):
        rx, ry, rz = states[x]
        row = xs[x]
        for y in range(n):
            ax, ay, az = axes[y]
            succ += 0.5 * (1.0 + row[y] * (rx * ax + ry * ay + rz * az))
    succ /= nx * n
    half = nx // 2
    e2 = eps * eps
    pen = 0.0
    for j in range(len(ms)):
        row = ms[j]
        dx = dy = dz = 0.0
        for x in range(nx):
            w = row[x]
            dx += w * states[x][0]
            dy += w * states[x][1]
            dz += w * states[x][2]
        dx /= half
        dy /= half
        dz /= half
        pen += sqrt(dx * dx + dy * dy + dz * dz + e2) - eps
    return succ - mu * pen
