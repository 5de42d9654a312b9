"""Pure-Python implementations of the arithmetic hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same results; :mod:`modeq.kernels` picks one at import time.

Sparse polynomials are passed as ``dict`` objects mapping exponent tuples to
coefficients (``int`` or ``Fraction``); series are dense ``list`` objects of
integers.
"""

from fractions import Fraction
import heapq


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _packing(a, b):
    """Bit offsets so that exponent vectors of a*b pack into one int."""
    nv = len(next(iter(a)))
    widths = []
    for i in range(nv):
        da = max(e[i] for e in a)
        db = max(e[i] for e in b)
        widths.append(max(1, (da + db).bit_length()))
    shifts = [0] * nv
    acc = 0
    for i in range(nv - 1, -1, -1):
        shifts[i] = acc
        acc += widths[i]
    return shifts, widths


def poly_mul(a, b):
    """Product of two sparse polynomials."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    nv = len(next(iter(a)))
    if nv == 0:
        c = _norm(a[()] * b[()])
        return {(): c} if c else {}
    shifts, widths = _packing(a, b)

    def pack(e):
        k = 0
        for x, s in zip(e, shifts):
            k |= x << s
        return k

    pa = [(pack(e), c) for e, c in a.items()]
    pb = [(pack(e), c) for e, c in b.items()]
    acc = {}
    get = acc.get
    for ka, ca in pa:
        for kb, cb in pb:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    masks = [(1 << w) - 1 for w in widths]
    out = {}
    for k, c in acc.items():
        if c:
            out[tuple((k >> s) & m for s, m in zip(shifts, masks))] = _norm(c)
    return out


def poly_divexact(a, b):
    """Quotient a / b for sparse polynomials when b divides a exactly.

    Uses lexicographic long division. Returns ``None`` when the division is
    not exact.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lead_b = max(b)
    lc_b = b[lead_b]
    rest_b = [(e, c) for e, c in b.items() if e != lead_b]
    r = dict(a)
    heap = [tuple(-x for x in e) for e in r]
    heapq.heapify(heap)
    q = {}
    while r:
        while True:
            neg = heapq.heappop(heap)
            lead = tuple(-x for x in neg)
            if lead in r:
                break
        # duplicates of a key may sit in the heap; drop them
        while heap and heap[0] == neg:
            heapq.heappop(heap)
        c = r.pop(lead)
        shift = tuple(x - y for x, y in zip(lead, lead_b))
        if min(shift, default=0) < 0:
            return None
        if type(c) is int and type(lc_b) is int and not c % lc_b:
            qc = c // lc_b
        else:
            qc = _norm(Fraction(c) / lc_b)
        q[shift] = qc
        for e, cb in rest_b:
            k = tuple(x + y for x, y in zip(e, shift))
            if k in r:
                v = r[k] - qc * cb
                if v:
                    r[k] = _norm(v)
                else:
                    del r[k]
            else:
                r[k] = _norm(-qc * cb)
                heapq.heappush(heap, tuple(-x for x in k))
    return q


def series_mul(a, b, n):
    """First ``n`` coefficients of the product of dense series ``a`` and ``b``."""
    out = [0] * n
    lb = len(b)
    for i, ai in enumerate(a):
        if i >= n:
            break
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def series_inverse(a, n):
    """First ``n`` coefficients of 1/a for a dense integer series with a[0] = 1."""
    if not a or a[0] != 1:
        raise ValueError("series inverse needs constant term 1")
    inv = [0] * n
    if n:
        inv[0] = 1
    la = len(a)
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, la - 1) + 1):
            ai = a[i]
            if ai:
                s += ai * inv[k - i]
        inv[k] = -s
    return inv
