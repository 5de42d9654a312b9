"""Evaluation trees and exact reconstruction of multivariate fractions.

An ``(n, N1, N2)`` evaluation tree has integer labels, arity ``N1`` at depths
``0..n-2`` and arity ``N2`` at depth ``n-1``. A root-to-leaf path
``(y_1, ..., y_n)`` together with a base point ``a`` gives the point

    J = (y_1 y_n + a_1, ..., y_{n-1} y_n + a_{n-1}, y_n + a_n).

Fixing ``y_1..y_{n-1}`` gives a line through ``a``. A fraction of degree
``d`` is recovered from its values on the tree in two stages. First, a
univariate fraction is rebuilt on every line, normalized to take the
value 1 at the base point. Then each coefficient is interpolated in
``y_{n-1}``, ..., ``y_1`` level by level.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .polycore import NEG_INF, MPoly, RatFrac, as_rat


class ExhaustedSearchError(RuntimeError):
    def __init__(self, level: int, detail: str = ""):
        self.level = level
        super().__init__(f"no admissible values at level {level}" + (f": {detail}" if detail else ""))


class ReconstructionError(ArithmeticError):
    pass


class NoSolutionError(ReconstructionError):
    """No fraction within the degree bounds matches the data."""


class PoleError(ReconstructionError):
    pass


class DegenerateLinesError(NoSolutionError):
    """Too many lines lost degree; ``paths`` lists their slopes."""

    def __init__(self, msg: str, paths: tuple):
        self.paths = paths
        super().__init__(msg)


class VerificationError(NoSolutionError):
    """The reconstructed fraction disagrees with the oracle at a check point."""


# dense univariate helpers over Q; index k is the coefficient of Y^k


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _peval(p: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pdivmod(a: Sequence, b: Sequence):
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lb = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lb
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        _trim(a)
    return _trim(q), a


def _newton_interp(xs: Sequence, ys: Sequence) -> list:
    """Polynomial of degree < len(xs) through the points."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: list = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = _psub(_pmul(poly, [-Fraction(xs[i]), Fraction(1)]), [-coef[i]])
    return _trim(poly)


def _deg(p: Sequence) -> int:
    return len(p) - 1


# trees


@dataclass(frozen=True)
class EvalTree:
    """Rooted integer tree stored as a map from a path to the labels of its sons."""

    n: int
    N1: int
    N2: int
    children: dict
    D1: int
    D2: int
    M: int

    def sons(self, path: tuple) -> tuple:
        return self.children.get(tuple(path), ())

    def paths(self, depth: int) -> Iterator[tuple]:
        """The depth-th evaluation set (all label paths of that length)."""
        if depth == 0:
            yield ()
            return
        for p in self.paths(depth - 1):
            for s in self.sons(p):
                yield p + (s,)

    def amplitude(self, path: tuple) -> int:
        s = self.sons(path)
        return max(s) - min(s) if s else 0

    def check(self) -> None:
        """Raise ValueError unless arity, distinctness, amplitude and bound hold."""
        for depth in range(self.n):
            arity = self.N1 if depth < self.n - 1 else self.N2
            amp = self.D1 if depth < self.n - 1 else self.D2
            for p in self.paths(depth):
                s = self.sons(p)
                if len(s) != arity:
                    raise ValueError(f"vertex {p} has {len(s)} sons, expected {arity}")
                if len(set(s)) != len(s):
                    raise ValueError(f"vertex {p} has repeated sons")
                if self.amplitude(p) > amp:
                    raise ValueError(f"vertex {p} exceeds amplitude {amp}")
                if any(abs(x) > self.M for x in s):
                    raise ValueError(f"vertex {p} has a label above the bound {self.M}")

    def stats(self) -> dict:
        return {
            "n": self.n,
            "N1": self.N1,
            "N2": self.N2,
            "amplitude": [self.D1, self.D2],
            "bound": self.M,
            "leaves": sum(1 for _ in self.paths(self.n)),
        }


@dataclass(frozen=True)
class EvalData:
    tree: EvalTree
    a: tuple
    M: int
    conditions: dict = field(default_factory=dict)
    exclusions: tuple = ()  # per level: (number excluded, degree budget) seen at its vertices


def _scan_order(M: int) -> Iterator[int]:
    yield 0
    for k in range(1, M + 1):
        yield k
        yield -k


def tree_coordinates(n: int) -> tuple:
    return tuple(f"Y{i}" for i in range(1, n + 1))


def to_tree_coordinates(p: MPoly, a: Sequence[int]) -> MPoly:
    """p(Y1 Yn + a1, ..., Y_{n-1} Yn + a_{n-1}, Yn + an) in tree coordinates."""
    n = p.nvars
    yv = tree_coordinates(n)
    last = MPoly.gen(yv[-1], yv)
    mapping = {}
    for i, v in enumerate(p.vars):
        lin = MPoly.gen(yv[i], yv) * last if i < n - 1 else last
        mapping[v] = lin + a[i]
    return p.substitute(mapping, yv)


def _choose_base_point(den: MPoly | None, n: int, M: int) -> tuple:
    if den is None:
        return (0,) * n
    if den.is_zero():
        raise ValueError("denominator is the zero polynomial")
    cur = den
    a = []
    for i, v in enumerate(den.vars):
        for c in _scan_order(M):
            trial = cur.subs_values({v: c})
            if not trial.is_zero():
                a.append(c)
                cur = trial
                break
        else:
            raise ExhaustedSearchError(0, f"no base coordinate {v} within [-{M}, {M}]")
    return tuple(a)


def _deg_in(p: MPoly, v: str) -> int:
    d = p.degree(v)
    return 0 if d is NEG_INF else d


def build_tree(
    n: int,
    d: int,
    M: int,
    avoid: Sequence[MPoly] = (),
    den: MPoly | None = None,
    N2: int | None = None,
    strict: bool = False,
    B: float | None = None,
) -> EvalData:
    """Greedy evaluation data that avoids the zeros of every polynomial in ``avoid``.

    ``avoid`` is given in tree coordinates Y1..Yn. ``den`` (in the fraction's
    own variables) fixes the base point and is added to the avoid set after
    moving to tree coordinates. Lower levels take 2d sons inside the first
    window [5kd, 5kd + 4d] with enough admissible values. The last level takes
    N2 values scanning 0, 1, -1, 2, ... in [-M, M]; N2 defaults to 2d + 2, or
    to M in strict mode.
    """
    if n < 1 or d < 1 or M < 1:
        raise ValueError("need n, d, M >= 1")
    yv = tree_coordinates(n)
    polys = []
    for p in avoid:
        if p.is_zero():
            raise ValueError("avoid polynomials must be nonzero")
        polys.append(p.with_vars(yv) if p.vars != yv else p)
    a = _choose_base_point(den, n, M)
    if den is not None:
        polys.append(to_tree_coordinates(den, a))
    N1 = 2 * d
    if N2 is None:
        N2 = M if strict else 2 * d + 2
    if strict and N2 < M:
        raise ValueError("strict mode needs N2 >= M")
    children: dict = {}
    exclusions = []

    def restricted(prefix_polys, v, c):
        return [p.subs_values({v: c}) for p in prefix_polys]

    def grow(depth: int, path: tuple, prefix_polys: list):
        v = yv[depth]
        budget = sum(_deg_in(p, v) for p in prefix_polys)
        excluded = set()

        def ok(c):
            for p in prefix_polys:
                if p.subs_values({v: c}).is_zero():
                    excluded.add(c)
                    return False
            return True

        if depth < n - 1:
            k = 0
            chosen = None
            while 5 * k * d + 4 * d <= M:
                lo = 5 * k * d
                good = [c for c in range(lo, lo + 4 * d + 1) if ok(c)]
                if len(good) >= N1:
                    chosen = tuple(good[:N1])
                    break
                k += 1
            if chosen is None:
                raise ExhaustedSearchError(depth + 1, f"no window of amplitude {4 * d} with {N1} values below {M}")
        else:
            good = []
            for c in _scan_order(M):
                if ok(c):
                    good.append(c)
                    if len(good) == N2:
                        break
            if len(good) < N2:
                raise ExhaustedSearchError(depth + 1, f"only {len(good)} of {N2} values in [-{M}, {M}]")
            chosen = tuple(good)
        exclusions.append((depth + 1, len(excluded), budget))
        children[path] = chosen
        if depth < n - 1:
            for c in chosen:
                grow(depth + 1, path + (c,), restricted(prefix_polys, v, c))

    grow(0, (), polys)
    amp2 = max((max(s) - min(s)) for p, s in children.items() if len(p) == n - 1)
    tree = EvalTree(n, N1, N2, children, 4 * d, max(2 * M, amp2) if strict else amp2, M)
    tree.check()
    cond2 = "waived"
    if strict and B is not None:
        cond2 = "satisfied" if M >= 2 * B * math.log(B + 1) ** 2 else "violated"
    conditions = {
        "bounded": all(abs(x) <= M for x in a),
        "magnitude": cond2,
        "arity": True,
        "amplitude": True,
        "base_point_nonvanishing": den is None or den.eval(a) != 0,
    }
    return EvalData(tree, a, M, conditions, tuple(exclusions))


# restriction to lines


def line_restrict(f: RatFrac, y: Sequence[int], a: Sequence[int], var: str = "Y") -> RatFrac:
    """f(y_1 Y + a_1, ..., y_{n-1} Y + a_{n-1}, Y + a_n), reduced."""
    n = len(f.vars)
    if len(y) != n - 1 or len(a) != n:
        raise ValueError("need n-1 slopes and n base coordinates")
    vs = (var,)
    Y = MPoly.gen(var, vs)
    mapping = {}
    for i, v in enumerate(f.vars):
        slope = y[i] if i < n - 1 else 1
        mapping[v] = Y * slope + a[i]
    return f.substitute(mapping, vs).reduced()


# univariate rational reconstruction


def cauchy_interpolate(
    points: Sequence, num_deg: int, den_deg: int, norm_at=0, var: str = "Y"
):
    """Fraction p/q with deg p <= num_deg, deg q <= den_deg through all points.

    Uses the extended Euclidean algorithm on (prod (Y - x_i), interpolant).
    The result is normalized so that q(norm_at) = 1. Returns dense
    coefficient lists (p, q) when ``var`` is None, else a RatFrac.
    """
    pts = [(as_rat(x), as_rat(v)) for x, v in points]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("evaluation points must be distinct")
    if len(pts) < num_deg + den_deg + 2:
        raise ValueError(f"need at least {num_deg + den_deg + 2} points, got {len(pts)}")
    r0: list = [Fraction(1)]
    for x in xs:
        r0 = _pmul(r0, [-Fraction(x), Fraction(1)])
    r1 = _newton_interp(xs, [v for _, v in pts])
    t0: list = []
    t1: list = [Fraction(1)]
    while r1 and _deg(r1) > num_deg:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    p, q = r1, t1
    if not q or _deg(q) > den_deg:
        raise NoSolutionError("no fraction within the degree bounds fits the data")
    for x, v in pts:
        qx = _peval(q, x)
        if qx == 0:
            raise PoleError(f"reconstructed denominator vanishes at the point {x}")
        if _peval(p, x) != v * qx:
            raise NoSolutionError("reconstructed fraction is inconsistent with the data")
    qa = _peval(q, norm_at)
    if qa == 0:
        raise PoleError(f"denominator vanishes at the normalization point {norm_at}")
    p = [c / qa for c in p]
    q = [c / qa for c in q]
    if var is None:
        return p, q
    vs = (var,)
    num = MPoly(vs, {(k,): c for k, c in enumerate(p)})
    den = MPoly(vs, {(k,): c for k, c in enumerate(q)})
    return RatFrac(num, den)


# multivariate reconstruction along the tree


Oracle = Callable[[tuple], Fraction]


def fraction_oracle(f: RatFrac) -> Oracle:
    def call(point):
        return f.eval(point)

    return call


def _interp_level(vname: str, vars_: tuple, samples: list, deg: int, check: bool = True) -> MPoly:
    """Interpolate MPoly values at integer nodes as a polynomial of degree <= deg in vname."""
    if len(samples) < deg + 1:
        raise NoSolutionError("not enough usable sons to interpolate a level")
    use, rest = samples[: deg + 1], samples[deg + 1 :]
    xs = [x for x, _ in use]
    idx = vars_.index(vname)
    total = MPoly.zero(vars_)
    for i, (xi, val) in enumerate(use):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = _pmul(basis, [-Fraction(xj), Fraction(1)])
                denom *= xi - xj
        lag = MPoly(vars_, {tuple(k if t == idx else 0 for t in range(len(vars_))): c / denom for k, c in enumerate(basis)})
        total = total + val * lag
    if check:
        for x, val in rest:
            if total.subs_values({vname: x}) != val:
                raise NoSolutionError("level interpolation is inconsistent with the extra sons")
    return total


def _homogenize_shift(coeffs: dict, n: int, a: Sequence[int], target_vars: tuple) -> MPoly:
    """sum_t u_n^t c_t(u'/u_n), evaluated at u = J - a."""
    vvars = tuple(f"v{i}" for i in range(1, n))
    out: dict = {}
    for t, c in coeffs.items():
        for e, val in c.terms.items():
            s = sum(e)
            if s > t:
                raise NoSolutionError("line coefficient degree exceeds its index")
            out[tuple(e) + (t - s,)] = out.get(tuple(e) + (t - s,), 0) + val
    H = MPoly(target_vars, out)
    shift = {v: MPoly.gen(v, target_vars) - a[i] for i, v in enumerate(target_vars)}
    return H.substitute(shift, target_vars)


def reconstruct_fraction(
    oracle: Oracle,
    n: int,
    d: int,
    data: EvalData,
    num_deg: int | None = None,
    den_deg: int | None = None,
    variables: Sequence[str] | None = None,
    verify_points: int = 20,
    seed: int = 0,
) -> RatFrac:
    """Recover an n-variate fraction of total degree <= d from its values on the tree."""
    num_deg = d if num_deg is None else num_deg
    den_deg = d if den_deg is None else den_deg
    variables = tuple(variables or (f"J{i}" for i in range(1, n + 1)))
    tree = data.tree
    a = data.a
    if tree.n != n:
        raise ValueError("tree depth does not match n")
    if tree.N2 < num_deg + den_deg + 2:
        raise ValueError("the last level needs at least num_deg + den_deg + 2 sons")

    lines = {}
    for path in tree.paths(n - 1):
        pts = []
        for yn in tree.sons(path):
            J = tuple(Fraction(path[i] * yn + a[i]) for i in range(n - 1)) + (Fraction(yn + a[n - 1]),)
            try:
                val = oracle(J)
            except ZeroDivisionError:
                raise PoleError(f"oracle has a pole at tree point {J}") from None
            pts.append((yn, val))
        lines[path] = cauchy_interpolate(pts, num_deg, den_deg, norm_at=0, var=None)
    dp = max(_deg(p) for p, _ in lines.values())
    dq = max(_deg(q) for _, q in lines.values())
    # a common factor on a line lowers both degrees; a single drop is a vanishing leading term
    good = {k: v for k, v in lines.items() if _deg(v[0]) == dp or _deg(v[1]) == dq}

    vvars = tuple(f"v{i}" for i in range(1, n))

    def to_vals(path):
        p, q = good[path]
        vals = {}
        for key, poly in (("p", p), ("q", q)):
            for t in range(len(poly)):
                vals[(key, t)] = MPoly.const(poly[t], vvars)
        return vals

    failed = []

    def climb(path: tuple):
        depth = len(path)
        if depth == n - 1:
            if path in good:
                return to_vals(path)
            failed.append(path)
            return None
        samples = []
        for s in tree.sons(path):
            child = climb(path + (s,))
            if child is not None:
                samples.append((s, child))
        if len(samples) < d + 1:
            failed.append(path)
            return None
        keys = set()
        for _, v in samples:
            keys.update(v)
        v = vvars[depth]
        out = {}
        for key in keys:
            zero = MPoly.zero(vvars)
            pts = [(s, vals.get(key, zero)) for s, vals in samples]
            out[key] = _interp_level(v, vvars, pts, d)
        return out

    top = climb(())
    if top is None:
        failed_set = set(failed)

        def culprits(path):
            # a vertex whose sons all failed is excluded whole, otherwise only its failed sons
            if len(path) == n - 1:
                return [path]
            bad_sons = [path + (c,) for c in tree.sons(path) if path + (c,) in failed_set]
            if path and len(bad_sons) == len(tree.sons(path)):
                return [path]
            return [q for b in bad_sons for q in culprits(b)]

        bad = tuple(culprits(()))
        raise DegenerateLinesError("too many degenerate lines to interpolate the tree", bad)
    pc = {t: c for (k, t), c in top.items() if k == "p"}
    qc = {t: c for (k, t), c in top.items() if k == "q"}
    num = _homogenize_shift(pc, n, a, variables)
    den = _homogenize_shift(qc, n, a, variables)
    if den.is_zero():
        raise NoSolutionError("reconstructed denominator is zero")
    result = RatFrac(num, den)

    rng = random.Random(seed)
    checked = 0
    tries = 0
    while checked < verify_points and tries < 20 * verify_points + 100:
        tries += 1
        pt = tuple(Fraction(rng.randint(-10**6, 10**6)) for _ in range(n))
        dv = den.eval(pt)
        if dv == 0:
            continue
        try:
            ov = oracle(pt)
        except ZeroDivisionError:
            raise VerificationError(f"oracle has a pole at {pt} where the candidate does not") from None
        if Fraction(num.eval(pt)) / dv != ov:
            raise VerificationError(f"candidate disagrees with the oracle at {pt}")
        checked += 1
    if checked < verify_points:
        raise VerificationError("could not find enough verification points")
    return result


def _line_avoider(path: tuple, yv: tuple) -> MPoly:
    # vanishes at an integer prefix only on that exact line
    out = MPoly.zero(yv)
    for i, c in enumerate(path):
        diff = MPoly.gen(yv[i], yv) - c
        out = out + diff * diff
    return out


def reconstruct(
    oracle: Oracle,
    n: int,
    d: int,
    M: int,
    den: MPoly | None = None,
    avoid: Sequence[MPoly] = (),
    rounds: int = 8,
    **kwargs,
):
    """Build a tree and reconstruct, excluding lines that turn out degenerate.

    Returns (fraction, data). Degenerate lines are those where both degrees
    drop, which is where a common factor of numerator and denominator can
    appear. Their slopes are added to the avoid set and the tree is rebuilt.
    """
    avoid = list(avoid)
    yv = tree_coordinates(n)
    strict = kwargs.pop("strict", False)
    N2 = kwargs.pop("N2", None)
    if N2 is None and not strict:
        N2 = kwargs.get("num_deg", d) + kwargs.get("den_deg", d) + 2
        N2 = max(N2, 2 * d + 2)
    for _ in range(rounds):
        data = build_tree(n, d, M, avoid, den=den, strict=strict, N2=N2)
        try:
            return reconstruct_fraction(oracle, n, d, data, **kwargs), data
        except DegenerateLinesError as exc:
            if n == 1 or not exc.paths:
                raise
            avoid.extend(_line_avoider(p, yv) for p in exc.paths)
    raise NoSolutionError(f"degenerate lines persisted after {rounds} rebuilds")
