"""Compiled spherical Nelder-Mead state machine.

Many independent searches advance in lockstep: :func:`nm_advance` consumes
the objective values of the directions each active search asked for and
writes the next request into ``T``.  Directions are coordinate vectors
``t`` inside a search basis, so every point stays on the unit sphere of
that subspace.

Phases: 0 building the simplex, 1 reflection pending, 2 expansion pending,
3 contraction pending, 4 shrink pending, 5 finished.
"""

import numpy as np
from numba import njit

INIT, REFLECT, EXPAND, CONTRACT, SHRINK, DONE = 0, 1, 2, 3, 4, 5


@njit(cache=True)
def _normalize(v):
    s = 0.0
    for k in range(v.shape[0]):
        s += v[k] * v[k]
    s = np.sqrt(s)
    if s > 0.0:
        for k in range(v.shape[0]):
            v[k] /= s
    return s


@njit(cache=True)
def geodesic_move(xo, p, coef, out):
    """Write to ``out`` the point at ``coef`` times the angle from ``xo`` to
    ``p`` along their great circle: ``cos(c*th) xo + sin(c*th) y/|y|``."""
    r = xo.shape[0]
    c = 0.0
    for k in range(r):
        c += xo[k] * p[k]
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    for k in range(r):
        out[k] = p[k] - c * xo[k]
    if _normalize(out) == 0.0:
        for k in range(r):
            out[k] = xo[k]
        return
    theta = np.arccos(c)
    ca = np.cos(coef * theta)
    sa = np.sin(coef * theta)
    for k in range(r):
        out[k] = ca * xo[k] + sa * out[k]
    _normalize(out)


@njit(cache=True)
def _swap(P, f, a, b):
    tmp = f[a]
    f[a] = f[b]
    f[b] = tmp
    for k in range(P.shape[1]):
        tmp = P[a, k]
        P[a, k] = P[b, k]
        P[b, k] = tmp


@njit(cache=True)
def _sort_simplex(P, f):
    # stable insertion sort by value
    for i in range(1, f.shape[0]):
        j = i
        while j > 0 and f[j - 1] > f[j]:
            _swap(P, f, j - 1, j)
            j -= 1


@njit(cache=True)
def _sink_last(P, f):
    j = f.shape[0] - 1
    while j > 0 and f[j - 1] > f[j]:
        _swap(P, f, j - 1, j)
        j -= 1


@njit(cache=True)
def _centroid(P, out):
    r = P.shape[0]
    for k in range(r):
        out[k] = 0.0
    for i in range(r - 1):
        for k in range(r):
            out[k] += P[i, k]
    if _normalize(out) == 0.0:
        for k in range(r):
            out[k] = P[0, k]


@njit(cache=True)
def _start_restart(q, sims, budgets, phase, vidx, restart, spent, T):
    R = budgets.shape[0]
    while restart[q] < R and budgets[restart[q]] <= 0:
        restart[q] += 1
    if restart[q] >= R:
        phase[q] = DONE
        return
    spent[q] = 0
    vidx[q] = 0
    phase[q] = INIT
    T[q, :] = sims[q, restart[q], 0]


@njit(cache=True)
def _iterate(q, P, F, XO, T, phase, alpha, tol, over):
    r = P.shape[1]
    if F[q, r - 1] - F[q, 0] < tol or over:
        return False
    _centroid(P[q], XO[q])
    geodesic_move(XO[q], P[q, r - 1], -alpha, T[q])
    phase[q] = REFLECT
    return True


@njit(cache=True)
def nm_advance(active, values, T, P, F, XO, XR, FR, phase, vidx, restart,
               spent, used, best_f, best_t, history, sims, budgets,
               alpha, gamma, rho, sigma, tol):
    """Feed ``values[m]`` for the pending request of search ``active[m]``.

    Returns the number of searches still running among ``active``.
    """
    r = P.shape[1]
    tmp = np.empty(r)
    running = 0
    for m in range(active.shape[0]):
        q = active[m]
        v = values[m]
        if v < best_f[q]:
            best_f[q] = v
            best_t[q, :] = T[q]
        if history.shape[1] > 0:
            history[q, used[q]] = best_f[q]
        used[q] += 1
        spent[q] += 1
        over = spent[q] >= budgets[restart[q]]
        ph = phase[q]
        again = True
        if ph == INIT:
            i = vidx[q]
            P[q, i, :] = T[q]
            F[q, i] = v
            vidx[q] = i + 1
            if i + 1 < r:
                if over:
                    again = False
                else:
                    T[q, :] = sims[q, restart[q], i + 1]
            else:
                _sort_simplex(P[q], F[q])
                again = _iterate(q, P, F, XO, T, phase, alpha, tol, over)
        elif ph == REFLECT:
            XR[q, :] = T[q]
            FR[q] = v
            if F[q, 0] <= v and v < F[q, r - 2]:
                P[q, r - 1, :] = T[q]
                F[q, r - 1] = v
                _sink_last(P[q], F[q])
                again = _iterate(q, P, F, XO, T, phase, alpha, tol, over)
            elif v < F[q, 0]:
                if over:
                    again = False
                else:
                    geodesic_move(XO[q], XR[q], gamma, T[q])
                    phase[q] = EXPAND
            else:
                if over:
                    again = False
                else:
                    if v < F[q, r - 1]:
                        tmp[:] = XR[q]
                    else:
                        tmp[:] = P[q, r - 1]
                    geodesic_move(XO[q], tmp, rho, T[q])
                    phase[q] = CONTRACT
        elif ph == EXPAND:
            if v < FR[q]:
                P[q, r - 1, :] = T[q]
                F[q, r - 1] = v
            else:
                P[q, r - 1, :] = XR[q]
                F[q, r - 1] = FR[q]
            _sink_last(P[q], F[q])
            again = _iterate(q, P, F, XO, T, phase, alpha, tol, over)
        elif ph == CONTRACT:
            if v < F[q, r - 1]:
                P[q, r - 1, :] = T[q]
                F[q, r - 1] = v
                _sink_last(P[q], F[q])
                again = _iterate(q, P, F, XO, T, phase, alpha, tol, over)
            elif over:
                again = False
            else:
                vidx[q] = 1
                geodesic_move(P[q, 0], P[q, 1], sigma, T[q])
                phase[q] = SHRINK
        else:  # SHRINK
            i = vidx[q]
            P[q, i, :] = T[q]
            F[q, i] = v
            vidx[q] = i + 1
            if i + 1 < r and not over:
                geodesic_move(P[q, 0], P[q, i + 1], sigma, T[q])
            elif i + 1 < r:
                again = False
            else:
                _sort_simplex(P[q], F[q])
                again = _iterate(q, P, F, XO, T, phase, alpha, tol, over)
        if not again:
            restart[q] += 1
            _start_restart(q, sims, budgets, phase, vidx, restart, spent, T)
        if phase[q] != DONE:
            running += 1
    return running


@njit(cache=True)
def nm_begin(sims, budgets, phase, vidx, restart, spent, T):
    for q in range(sims.shape[0]):
        restart[q] = 0
        _start_restart(q, sims, budgets, phase, vidx, restart, spent, T)
