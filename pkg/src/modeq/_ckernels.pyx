# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels``.

Coefficients stay Python objects (exact big integers and fractions); the gain
comes from typed loop indices and packed C-integer exponent keys.
"""

from fractions import Fraction
import heapq

from libc.stdint cimport int64_t


cdef inline object _norm(object c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def poly_mul(dict a, dict b):
    cdef Py_ssize_t nv, i, na, nb, ia, ib
    cdef int64_t ka, key
    cdef int total_bits
    cdef list shifts, widths, pa_keys, pb_keys, pa_c, pb_c, masks
    cdef dict acc, out
    cdef object ca, c, e
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    nv = len(next(iter(a)))
    if nv == 0:
        c = _norm(a[()] * b[()])
        return {(): c} if c else {}
    widths = []
    for i in range(nv):
        da = max([e[i] for e in a])
        db = max([e[i] for e in b])
        widths.append(max(1, (da + db).bit_length()))
    total_bits = sum(widths)
    shifts = [0] * nv
    acc_s = 0
    for i in range(nv - 1, -1, -1):
        shifts[i] = acc_s
        acc_s += widths[i]
    masks = [(1 << w) - 1 for w in widths]

    pa_keys = []
    pa_c = []
    for e, c in a.items():
        k = 0
        for i in range(nv):
            k |= (<object>e[i]) << shifts[i]
        pa_keys.append(k)
        pa_c.append(c)
    pb_keys = []
    pb_c = []
    for e, c in b.items():
        k = 0
        for i in range(nv):
            k |= (<object>e[i]) << shifts[i]
        pb_keys.append(k)
        pb_c.append(c)

    acc = {}
    na = len(pa_keys)
    nb = len(pb_keys)
    if total_bits <= 62:
        for ia in range(na):
            ka = pa_keys[ia]
            ca = pa_c[ia]
            for ib in range(nb):
                key = ka + <int64_t>pb_keys[ib]
                kobj = key
                prev = acc.get(kobj)
                if prev is None:
                    acc[kobj] = ca * pb_c[ib]
                else:
                    acc[kobj] = prev + ca * pb_c[ib]
    else:
        for ia in range(na):
            kao = pa_keys[ia]
            ca = pa_c[ia]
            for ib in range(nb):
                kobj = kao + pb_keys[ib]
                prev = acc.get(kobj)
                if prev is None:
                    acc[kobj] = ca * pb_c[ib]
                else:
                    acc[kobj] = prev + ca * pb_c[ib]
    out = {}
    for k, c in acc.items():
        if c:
            out[tuple([(k >> shifts[i]) & masks[i] for i in range(nv)])] = _norm(c)
    return out


def poly_divexact(dict a, dict b):
    cdef dict r, q
    cdef list heap, rest_b
    cdef object lead_b, lc_b, c, qc, cb, v
    cdef tuple lead, neg, shift, k, e
    cdef Py_ssize_t nv, i
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lead_b = max(b)
    lc_b = b[lead_b]
    nv = len(lead_b)
    rest_b = [(e, c) for e, c in b.items() if e != lead_b]
    r = dict(a)
    heap = [tuple([-x for x in e]) for e in r]
    heapq.heapify(heap)
    q = {}
    while r:
        while True:
            neg = heapq.heappop(heap)
            lead = tuple([-x for x in neg])
            if lead in r:
                break
        while heap and heap[0] == neg:
            heapq.heappop(heap)
        c = r.pop(lead)
        shift = tuple([lead[i] - lead_b[i] for i in range(nv)])
        for i in range(nv):
            if shift[i] < 0:
                return None
        if type(c) is int and type(lc_b) is int and not c % lc_b:
            qc = c // lc_b
        else:
            qc = _norm(Fraction(c) / lc_b)
        q[shift] = qc
        for e, cb in rest_b:
            k = tuple([e[i] + shift[i] for i in range(nv)])
            v = r.get(k)
            if v is not None:
                v = v - qc * cb
                if v:
                    r[k] = _norm(v)
                else:
                    del r[k]
            else:
                r[k] = _norm(-qc * cb)
                heapq.heappush(heap, tuple([-x for x in k]))
    return q


def series_mul(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t i, j, top, la, lb
    cdef list out = [0] * n
    cdef object ai, bj
    la = len(a)
    lb = len(b)
    for i in range(min(la, n)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


def series_inverse(list a, Py_ssize_t n):
    cdef Py_ssize_t k, i, la, top
    cdef list inv
    cdef object s, ai
    if not a or a[0] != 1:
        raise ValueError("series inverse needs constant term 1")
    inv = [0] * n
    if n:
        inv[0] = 1
    la = len(a)
    for k in range(1, n):
        s = 0
        top = min(k, la - 1)
        for i in range(1, top + 1):
            ai = a[i]
            if ai:
                s = s + ai * inv[k - i]
        inv[k] = -s
    return inv
