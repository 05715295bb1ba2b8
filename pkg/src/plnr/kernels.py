"""numba kernels for the O(q^2) bijectivity scans.

All kernels release the GIL so the worker pool can run disjoint ranges of
shifts concurrently. Each returns the first failing shift in [start, stop), or
-1 when every shift in the range passes.
"""
import numpy as np
from numba import njit


@njit(nogil=True)
def firstNonBijectiveOdd(values, digits, weights, p, start, stop):
    # x -> f(x+a) - f(x) must hit every element exactly once
    q, m = digits.shape
    seen = np.zeros(q, dtype=np.bool_)
    for a in range(start, stop):
        seen[:] = False
        for x in range(q):
            y = 0
            for i in range(m):
                y += ((digits[x, i] + digits[a, i]) % p) * weights[i]
            fy = values[y]
            fx = values[x]
            d = 0
            for i in range(m):
                d += ((digits[fy, i] - digits[fx, i] + p) % p) * weights[i]
            if seen[d]:
                return a
            seen[d] = True
    return -1


@njit(nogil=True)
def firstNonBijectiveEven(values, logTable, expTable, start, stop):
    # x -> f(x+a) + f(x) + a*x must permute GF(2^m)
    q = values.shape[0]
    seen = np.zeros(q, dtype=np.bool_)
    for a in range(start, stop):
        seen[:] = False
        la = logTable[a]
        for x in range(q):
            v = values[x ^ a] ^ values[x]
            if x != 0:
                v ^= expTable[la + logTable[x]]
            if seen[v]:
                return a
            seen[v] = True
    return -1


@njit(nogil=True)
def firstUnbalancedShift(table, formTable, start, stop):
    # f(x+a) + f(x) + B(a,x) must take the value 1 for exactly half of all x
    n = table.shape[0]
    half = n // 2
    for a in range(start, stop):
        ones = 0
        for x in range(n):
            ones += table[x ^ a] ^ table[x] ^ formTable[a, x]
        if ones != half:
            return a
    return -1

