"""Exact and floating-point enumeration of cycle-constrained permutations.

P_n counts permutations of [n] whose every cycle length lies in a fixed set
A, and a_n = P_n/n! is the probability a uniform permutation qualifies.  The
coefficients satisfy n*a_n = sum over k in A, k <= n of a_{n-k}, which in
integer form reads

    P_n = sum_{k in A, k <= n} (n-1)(n-2)...(n-k+1) * P_{n-k}.

Three independent routes to the same numbers live here: the recurrence
(exact big-int and double), a partition-type sum n!/prod(l^m_l * m_l!), and
a full enumeration of S_n for tiny n.  They deliberately never share code.
"""

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from primecycles.cycle_classes import CycleClassSpec
from primecycles.errors import (
    InvalidArgumentError,
    OutOfRangeError,
    ResourceLimitError,
)

EXACT_CAP_DEFAULT = 2000
FLOAT_CAP_DEFAULT = 10_000_000
PARTITION_CAP = 80
BRUTE_FORCE_CAP = 9
FAST_PATH_LEAF = 64


@dataclass(frozen=True)
class CountTable:
    """Immutable coefficient table for one cycle-length set.

    p_exact[n] is the integer count P_n, a_exact[n] the exact rational
    P_n/n!, a_float the double-precision coefficients from the same
    recurrence run in floating point.  mode records which are present.
    """

    spec: CycleClassSpec
    n_max: int
    mode: str
    a_exact: Optional[list]
    p_exact: Optional[list]
    a_float: Optional[np.ndarray]


def big_str(x: int) -> str:
    """Decimal form of a big integer, raising the interpreter's print cap as needed."""
    try:
        return str(x)
    except ValueError:
        digits = int(x.bit_length() * 0.30103) + 16
        sys.set_int_max_str_digits(max(digits, sys.get_int_max_str_digits()))
        return str(x)


def int_log(x: int) -> float:
    """Natural log of a positive integer too large for float conversion."""
    if x <= 0:
        raise InvalidArgumentError(f"int_log needs a positive integer, got {x}")
    bits = x.bit_length()
    if bits <= 900:
        return math.log(x)
    shift = bits - 64
    return math.log(x >> shift) + shift * math.log(2.0)


# -- recurrence routes --------------------------------------------------------


def count_exact_upto(spec: CycleClassSpec, n_max: int,
                     exact_cap: int = EXACT_CAP_DEFAULT) -> list:
    """P_0..P_{n_max} by the integer recurrence, falling factorials incremental."""
    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be >= 0, got {n_max}")
    if n_max > exact_cap:
        raise ResourceLimitError(
            f"exact enumeration capped at n <= {exact_cap}, got {n_max}"
        )
    members = [int(k) for k in spec.members_upto(n_max)]
    P = [0] * (n_max + 1)
    P[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        ff = 1
        prev = 1
        for k in members:
            if k > n:
                break
            for j in range(prev, k):
                ff *= n - j
            prev = k
            if P[n - k]:
                total += ff * P[n - k]
        P[n] = total
    return P


def count_exact(spec: CycleClassSpec, n: int,
                exact_cap: int = EXACT_CAP_DEFAULT) -> int:
    """|S_{n,A}| as an exact big integer."""
    return count_exact_upto(spec, n, exact_cap=exact_cap)[n]


def _build_float_baseline(members: np.ndarray, n_max: int) -> np.ndarray:
    a = np.zeros(n_max + 1)
    a[0] = 1.0
    ptr = 0
    for n in range(1, n_max + 1):
        while ptr < members.size and members[ptr] <= n:
            ptr += 1
        if ptr:
            a[n] = a[n - members[:ptr]].sum() / n
    return a


def _build_float_fast(members: np.ndarray, n_max: int,
                      leaf: int = FAST_PATH_LEAF) -> np.ndarray:
    """Divide-and-conquer online convolution; matches the baseline to ~1e-15."""
    g = np.zeros(n_max + 1)
    g[members[members <= n_max]] = 1.0
    a = np.zeros(n_max + 1)
    a[0] = 1.0
    pending = np.zeros(n_max + 1)
    mem_list = [int(k) for k in members]

    def solve(lo, hi):
        if hi - lo <= leaf:
            # direct recurrence; only contributions from inside [lo, n) remain
            for n in range(max(lo, 1), hi):
                s = pending[n]
                for k in mem_list:
                    if k > n - lo:
                        break
                    s += a[n - k]
                a[n] = s / n
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        block = a[lo:mid]
        gwin = g[: hi - lo]
        size = 1
        need = (mid - lo) + (hi - lo) - 1
        while size < need:
            size <<= 1
        conv = np.fft.irfft(np.fft.rfft(block, size) * np.fft.rfft(gwin, size), size)
        pending[mid:hi] += conv[mid - lo : hi - lo]
        solve(mid, hi)

    solve(0, n_max + 1)
    # FFT crumbs can land at coefficients that are exactly zero; the true
    # values are probabilities, so anything negative is pure roundoff
    np.maximum(a, 0.0, out=a)
    return a


def build_table(spec: CycleClassSpec, n_max: int, mode: str = "exact",
                use_fast_path: bool = False,
                exact_cap: int = EXACT_CAP_DEFAULT,
                float_cap: int = FLOAT_CAP_DEFAULT) -> CountTable:
    """Coefficient table a_0..a_{n_max} in the requested mode.

    mode is one of "exact", "float", "both".  The float path runs the
    recurrence in doubles, by direct summation or (use_fast_path) by a
    divide-and-conquer FFT convolution that must agree with the baseline
    to 1e-9 relative.
    """
    if mode not in ("exact", "float", "both"):
        raise InvalidArgumentError(f"unknown mode {mode!r}")
    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be >= 0, got {n_max}")
    members = spec.members_upto(n_max)  # raises if support too small
    a_exact = p_exact = a_float = None
    if mode in ("exact", "both"):
        p_exact = count_exact_upto(spec, n_max, exact_cap=exact_cap)
        a_exact = []
        fact = 1
        for n, p in enumerate(p_exact):
            if n:
                fact *= n
            a_exact.append(Fraction(p, fact))
    if mode in ("float", "both"):
        if n_max > float_cap:
            raise ResourceLimitError(
                f"float enumeration capped at n <= {float_cap}, got {n_max}"
            )
        build = _build_float_fast if use_fast_path else _build_float_baseline
        a_float = build(members, n_max)
        a_float.flags.writeable = False
    return CountTable(spec=spec, n_max=n_max, mode=mode,
                      a_exact=a_exact, p_exact=p_exact, a_float=a_float)


# -- independent oracles ------------------------------------------------------


def count_by_cycle_types(spec: CycleClassSpec, n: int) -> int:
    """Sum of n!/prod(l^m_l * m_l!) over partitions of n with all parts in A."""
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    if n > PARTITION_CAP:
        raise ResourceLimitError(
            f"partition enumeration capped at n <= {PARTITION_CAP}, got {n}"
        )
    parts = [int(k) for k in spec.members_upto(n)[::-1]]  # descending
    nf = math.factorial(n)
    total = 0

    def rec(rem, i, denom):
        nonlocal total
        if rem == 0:
            total += nf // denom
            return
        for j in range(i, len(parts)):
            l = parts[j]
            if l > rem:
                continue
            d = denom
            r = rem
            fm = 1
            m = 0
            while r >= l:
                m += 1
                fm *= m
                r -= l
                d *= l
                rec(r, j + 1, d * fm)

    rec(n, 0, 1)
    return total


@lru_cache(maxsize=None)
def _cycle_type_census(n: int) -> dict:
    """Cycle-type multiplicities over all n! permutations, by full enumeration."""
    census = {}
    for perm in permutations(range(n)):
        seen = [False] * n
        lengths = []
        for i in range(n):
            if seen[i]:
                continue
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            lengths.append(ln)
        lengths.sort()
        key = tuple(lengths)
        census[key] = census.get(key, 0) + 1
    return census


def count_brute_force(spec: CycleClassSpec, n: int) -> int:
    """Exhaustive count over all permutations of [n]; n is capped at 9."""
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    if n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(
            f"brute force capped at n <= {BRUTE_FORCE_CAP}, got {n}"
        )
    total = 0
    for lengths, mult in _cycle_type_census(n).items():
        if all(spec.contains(l) for l in lengths):
            total += mult
    return total


# -- partial sums and table output ---------------------------------------------


def kahan_sum(values) -> float:
    total = 0.0
    comp = 0.0
    for x in values:
        y = x - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def partial_sum(table: CountTable, n: int):
    """T_n = a_0 + ... + a_n; exact Fraction when the table has exact values,
    otherwise a double via ascending Kahan summation."""
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    if n > table.n_max:
        raise OutOfRangeError(f"n={n} beyond table n_max={table.n_max}")
    if table.p_exact is not None:
        # sum P_k * n!/k! over k, then divide once by n!
        num = 0
        mult = 1
        for k in range(n, -1, -1):
            num += table.p_exact[k] * mult
            mult *= k if k else 1
        return Fraction(num, math.factorial(n))
    return kahan_sum(table.a_float[: n + 1].tolist())


def dump_table(table: CountTable, dest) -> None:
    """CSV dump: columns n, P_n (exact tables only), a_n, T_n.

    a_n and T_n carry 17 significant digits; P_n is full decimal, never
    scientific.  dest is a writable text file object or a path.
    """
    close = False
    if isinstance(dest, (str, bytes)):
        dest = open(dest, "w")
        close = True
    try:
        exact = table.p_exact is not None
        if exact:
            dest.write("n,P_n,a_n,T_n\n")
            a_vals = [float(x) for x in table.a_exact]
        else:
            dest.write("n,a_n,T_n\n")
            a_vals = table.a_float.tolist()
        total = 0.0
        comp = 0.0
        for n, a in enumerate(a_vals):
            y = a - comp
            s = total + y
            comp = (s - total) - y
            total = s
            if exact:
                dest.write(f"{n},{big_str(table.p_exact[n])},{a:.17g},{total:.17g}\n")
            else:
                dest.write(f"{n},{a:.17g},{total:.17g}\n")
    finally:
        if close:
            dest.close()
