"""Compiled per-sample gradient kernels shared by SGD training and the batch gradients.

Metric kinds: 0 = Euclidean (``omega`` is an unused identity of shape
``(1, M, M)``), 1 = one global factor ``omega[0]``, 2 = local factors
``omega[j]``.  Missing coordinates are flagged by ``mask == False`` and
contribute neither to distances nor to gradients.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _phi(mu, logistic):
    if logistic:
        return 1.0 / (1.0 + math.exp(-mu))
    return mu


@njit(cache=True)
def _dphi(mu, logistic):
    if logistic:
        s = 1.0 / (1.0 + math.exp(-mu))
        return s * (1.0 - s)
    return 1.0


@njit(cache=True)
def glvq_sample(x, mask, y, W, c, omega, kind, logistic, gJ, gK, gOJ, gOK):
    """Fill the gradient buffers for one sample; returns ``(mu, J, K, ok)``."""
    n, M = W.shape
    R = omega.shape[1]
    diff = np.empty((n, M))
    P = np.empty((n, R))
    d = np.empty(n)
    for j in range(n):
        for m in range(M):
            diff[j, m] = x[m] - W[j, m] if mask[m] else 0.0
        if kind == 0:
            for m in range(M):
                P[j, m] = diff[j, m]
        else:
            o = omega[0] if kind == 1 else omega[j]
            for r in range(R):
                acc = 0.0
                for m in range(M):
                    acc += o[r, m] * diff[j, m]
                P[j, r] = acc
        acc = 0.0
        for r in range(R):
            acc += P[j, r] * P[j, r]
        d[j] = acc
    J = -1
    K = -1
    for j in range(n):
        if c[j] == y:
            if J < 0 or d[j] < d[J]:
                J = j
        elif K < 0 or d[j] < d[K]:
            K = j
    if J < 0 or K < 0:
        return 0.0, J, K, False
    dp = d[J]
    dm = d[K]
    s = dp + dm
    if s <= 0.0:
        return 0.0, J, K, False
    mu = (dp - dm) / s
    g = _dphi(mu, logistic)
    a = g * 2.0 * dm / (s * s)
    b = -g * 2.0 * dp / (s * s)
    for m in range(M):
        if kind == 0:
            lj = P[J, m]
            lk = P[K, m]
        else:
            oj = omega[0] if kind == 1 else omega[J]
            ok = omega[0] if kind == 1 else omega[K]
            lj = 0.0
            lk = 0.0
            for r in range(R):
                lj += oj[r, m] * P[J, r]
                lk += ok[r, m] * P[K, r]
        gJ[m] = -2.0 * a * lj if mask[m] else 0.0
        gK[m] = -2.0 * b * lk if mask[m] else 0.0
    if kind != 0:
        for r in range(R):
            for m in range(M):
                gOJ[r, m] = 2.0 * a * P[J, r] * diff[J, m]
                gOK[r, m] = 2.0 * b * P[K, r] * diff[K, m]
    return mu, J, K, True


@njit(cache=True)
def glvq_epoch(X, masks, y, order, W, c, omega, kind, logistic, lr_w, lr_m):
    M = W.shape[1]
    R = omega.shape[1]
    gJ = np.zeros(M)
    gK = np.zeros(M)
    gOJ = np.zeros((R, M))
    gOK = np.zeros((R, M))
    for i in order:
        mu, J, K, ok = glvq_sample(X[i], masks[i], y[i], W, c, omega, kind, logistic, gJ, gK, gOJ, gOK)
        if not ok:
            continue
        W[J] -= lr_w * gJ
        W[K] -= lr_w * gK
        if kind == 1:
            omega[0] -= lr_m * (gOJ + gOK)
        elif kind == 2:
            omega[J] -= lr_m * gOJ
            omega[K] -= lr_m * gOK


@njit(cache=True)
def glvq_batch(X, masks, y, W, c, omega, kind, logistic):
    M = W.shape[1]
    R = omega.shape[1]
    gJ = np.zeros(M)
    gK = np.zeros(M)
    gOJ = np.zeros((R, M))
    gOK = np.zeros((R, M))
    gW = np.zeros_like(W)
    gO = np.zeros_like(omega)
    cost = 0.0
    for i in range(X.shape[0]):
        mu, J, K, ok = glvq_sample(X[i], masks[i], y[i], W, c, omega, kind, logistic, gJ, gK, gOJ, gOK)
        cost += _phi(mu, logistic)
        if not ok:
            continue
        gW[J] += gJ
        gW[K] += gK
        if kind == 1:
            gO[0] += gOJ + gOK
        elif kind == 2:
            gO[J] += gOJ
            gO[K] += gOK
    return cost, gW, gO


@njit(cache=True)
def rslvq_sample(x, mask, y, W, c, logprior, sigma2, g):
    """Log likelihood ratio of one sample; its prototype gradient goes into ``g``."""
    n, M = W.shape
    m_eff = 0
    for m in range(M):
        if mask[m]:
            m_eff += 1
    a = np.empty(n)
    for j in range(n):
        d = 0.0
        for m in range(M):
            if mask[m]:
                t = x[m] - W[j, m]
                d += t * t
        a[j] = logprior[j] - d / (2.0 * sigma2[j]) - 0.5 * m_eff * math.log(2.0 * math.pi * sigma2[j])
    amax = -np.inf
    ymax = -np.inf
    for j in range(n):
        amax = max(amax, a[j])
        if c[j] == y:
            ymax = max(ymax, a[j])
    sz = 0.0
    sy = 0.0
    for j in range(n):
        sz += math.exp(a[j] - amax)
        if c[j] == y:
            sy += math.exp(a[j] - ymax)
    lz = amax + math.log(sz)
    ly = ymax + math.log(sy)
    for j in range(n):
        p = math.exp(a[j] - lz)
        py = math.exp(a[j] - ly) if c[j] == y else 0.0
        w = (py - p) / sigma2[j]
        for m in range(M):
            g[j, m] = w * (x[m] - W[j, m]) if mask[m] else 0.0
    return ly - lz


@njit(cache=True)
def rslvq_epoch(X, masks, y, order, W, c, logprior, sigma2, lr):
    g = np.zeros_like(W)
    for i in order:
        rslvq_sample(X[i], masks[i], y[i], W, c, logprior, sigma2, g)
        W += lr * g


@njit(cache=True)
def rslvq_batch(X, masks, y, W, c, logprior, sigma2):
    g = np.zeros_like(W)
    gW = np.zeros_like(W)
    total = 0.0
    for i in range(X.shape[0]):
        total += rslvq_sample(X[i], masks[i], y[i], W, c, logprior, sigma2, g)
        gW += g
    return total, gW
