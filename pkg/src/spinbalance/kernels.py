"""Compiled Metropolis inner loops.

One kernel call is one read: it receives a 32-bit seed derived from the
(master_seed, read_index) stream key and is deterministic given that
seed. Local fields f_i = h_i + sum_j J_ij s_j are cached and updated
incrementally, so a flip attempt is O(1) and an accepted flip is O(n).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

JPERP_CAP = 30.0


@njit(cache=True)
def _random_spins(n):
    s = np.empty(n, dtype=np.int8)
    for i in range(n):
        s[i] = 1 if np.random.random() < 0.5 else -1
    return s


@njit(cache=True)
def _local_fields(h, J, s):
    n = h.shape[0]
    f = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = h[i]
        for j in range(n):
            acc += J[i, j] * s[j]
        f[i] = acc
    return f


@njit(cache=True)
def sa_read(h, J, betas, seed):
    """One simulated-annealing read; returns the final spin vector."""
    np.random.seed(seed)
    n = h.shape[0]
    s = _random_spins(n)
    f = _local_fields(h, J, s)
    nsweeps = betas.shape[0]
    for sweep in range(nsweeps):
        beta = betas[sweep]
        for i in range(n):
            dE = -2.0 * s[i] * f[i]
            if dE <= 0.0 or np.random.random() < math.exp(-beta * dE):
                old = s[i]
                s[i] = -old
                for j in range(n):
                    f[j] -= 2.0 * old * J[i, j]
    return s


@njit(cache=True)
def sd_read(h, J, seed):
    """One steepest-descent read: greedy single flips to a local minimum.

    Ties on the energy decrease go to the lowest spin index.
    """
    np.random.seed(seed)
    n = h.shape[0]
    s = _random_spins(n)
    f = _local_fields(h, J, s)
    while True:
        best_i = -1
        best_dE = 0.0
        for i in range(n):
            dE = -2.0 * s[i] * f[i]
            if dE < best_dE:
                best_dE = dE
                best_i = i
        if best_i < 0:
            break
        old = s[best_i]
        s[best_i] = -old
        for j in range(n):
            f[j] -= 2.0 * old * J[best_i, j]
    return s


@njit(cache=True)
def sqa_read(h, J, trotter, temperature, nsweeps, seed):
    """One path-integral quantum-annealing read.

    trotter coupled replicas of the problem sit on a ring. The driver
    weight A falls linearly 1 -> 0 while the problem weight B rises
    0 -> 1. The replica coupling is
        J_perp = -(T/2) * ln tanh(A / (trotter * T))
    capped at JPERP_CAP as A -> 0. Each sweep does Metropolis over every
    (replica, spin) pair, then proposes one global flip per logical spin
    (all replicas at once; the ring term cancels). Returns the spins of
    the lowest-problem-energy replica plus the fraction of logical spins
    whose replicas disagree at the end.
    """
    np.random.seed(seed)
    n = h.shape[0]
    P = trotter
    T = temperature
    s = np.empty((P, n), dtype=np.int8)
    for k in range(P):
        for i in range(n):
            s[k, i] = 1 if np.random.random() < 0.5 else -1
    F = np.empty((P, n), dtype=np.float64)
    for k in range(P):
        for i in range(n):
            acc = h[i]
            for j in range(n):
                acc += J[i, j] * s[k, j]
            F[k, i] = acc

    denom = nsweeps - 1 if nsweeps > 1 else 1
    for sweep in range(nsweeps):
        t = sweep / denom
        a = 1.0 - t
        b = t
        arg = a / (P * T)
        if arg <= 0.0:
            jperp = JPERP_CAP
        else:
            th = math.tanh(arg)
            jperp = -(T / 2.0) * math.log(th)
            if jperp > JPERP_CAP:
                jperp = JPERP_CAP
        bp = b / P

        for k in range(P):
            kp = k + 1 if k + 1 < P else 0
            km = k - 1 if k >= 1 else P - 1
            for i in range(n):
                dE = -2.0 * s[k, i] * bp * F[k, i] \
                    + 2.0 * jperp * s[k, i] * (s[kp, i] + s[km, i])
                if dE <= 0.0 or np.random.random() < math.exp(-dE / T):
                    old = s[k, i]
                    s[k, i] = -old
                    for j in range(n):
                        F[k, j] -= 2.0 * old * J[i, j]

        for i in range(n):
            tot = 0.0
            for k in range(P):
                tot += s[k, i] * F[k, i]
            dE = -2.0 * bp * tot
            if dE <= 0.0 or np.random.random() < math.exp(-dE / T):
                for k in range(P):
                    old = s[k, i]
                    s[k, i] = -old
                    for j in range(n):
                        F[k, j] -= 2.0 * old * J[i, j]

    best_k = 0
    best_e = np.inf
    for k in range(P):
        e = 0.0
        for i in range(n):
            e += h[i] * s[k, i] + 0.5 * s[k, i] * (F[k, i] - h[i])
        if e < best_e:
            best_e = e
            best_k = k

    disagree = 0
    for i in range(n):
        first = s[0, i]
        for k in range(1, P):
            if s[k, i] != first:
                disagree += 1
                break
    return s[best_k].copy(), disagree / n
