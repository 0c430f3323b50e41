"""Slow, independent reference implementations used only by the tests.

Relations are plain frozensets of 1-based pairs; nothing here touches the
bitmask code in the package.
"""

from collections import Counter
from itertools import chain, combinations, permutations, product
from math import comb, factorial


def cells(n):
    return [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def relations(n):
    return [frozenset(s) for s in subsets(cells(n))]


def inc(r):
    return {(a, b) for a, b in r if a < b}


def dec(r):
    return {(a, b) for a, b in r if a > b}


def weak_le(r, s):
    return inc(r) >= inc(s) and dec(r) <= dec(s)


def restrict(t, xs):
    xs = sorted(xs)
    pos = {x: i + 1 for i, x in enumerate(xs)}
    return frozenset((pos[a], pos[b]) for a, b in t if a in pos and b in pos)


def shift(s, m):
    return frozenset((a + m, b + m) for a, b in s)


def shuffle(r, m, s, n):
    """Straight from the definition: R, shifted S, plus any cross pairs."""
    ups = [(a, b) for a in range(1, m + 1) for b in range(m + 1, m + n + 1)]
    downs = [(b, a) for a, b in ups]
    base = r | shift(s, m)
    return [base | set(i) | set(d) for i in subsets(ups) for d in subsets(downs)]


def is_total_cut(t, n, xs):
    ys = [y for y in range(1, n + 1) if y not in xs]
    return all((x, y) in t for x in xs for y in ys) and not any((y, x) in t for x in xs for y in ys)


def total_cuts(t, n):
    return [xs for xs in subsets(range(1, n + 1)) if is_total_cut(t, n, xs)]


def coproduct(t, n):
    """Counter over ((R, |R|), (S, |S|)) for the total-cut coproduct of F_t."""
    out = Counter()
    for xs in total_cuts(t, n):
        ys = [y for y in range(1, n + 1) if y not in xs]
        out[((restrict(t, xs), len(xs)), (restrict(t, ys), len(ys)))] += 1
    return out


def convolution(r, m, s, n):
    out = []
    for t in relations(m + n):
        for xs in combinations(range(1, m + n + 1), m):
            ys = [y for y in range(1, m + n + 1) if y not in xs]
            if is_total_cut(t, m + n, xs) and restrict(t, xs) == r and restrict(t, ys) == s:
                out.append(t)
                break
    return out


def is_poset(r, n):
    if any((b, a) in r for a, b in r):
        return False
    return all((a, c) in r for a, b in r for b2, c in r if b == b2 and a != c)


def under_decomposable(t, n):
    """Some prefix [i] sends every increasing pair across and receives none back."""
    for i in range(1, n):
        left, right = range(1, i + 1), range(i + 1, n + 1)
        if all((a, b) in t for a in left for b in right) and not any((b, a) in t for a in left for b in right):
            return True
    return False


def count_indecomposables(n):
    return sum(1 for t in relations(n) if not under_decomposable(t, n))


def count_posets(n):
    return sum(1 for t in relations(n) if is_poset(t, n))


# --- classical counts, computed from first principles --------------------------

def catalan(n):
    return comb(2 * n, n) // (n + 1)


def fubini(n):
    """Ordered set partitions, via the recurrence over the first block's size."""
    a = [1]
    for k in range(1, n + 1):
        a.append(sum(comb(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[n]


def little_schroder(n):
    """Schroder trees with n+1 leaves: plane trees, internal nodes of arity >= 2."""
    # count by leaves: s(1) = 1, s(L) = sum over compositions of L into >= 2 parts
    memo = {1: 1}

    def trees(leaves):
        if leaves in memo:
            return memo[leaves]
        total = 0
        for parts in _compositions(leaves):
            if len(parts) >= 2:
                p = 1
                for x in parts:
                    p *= trees(x)
                total += p
        memo[leaves] = total
        return total

    return trees(n + 1)


def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def tamari_intervals(n):
    return 2 * factorial(4 * n + 1) // (factorial(n + 1) * factorial(3 * n + 2))


def weak_order_intervals(n):
    """Pairs sigma <= tau of S_n, compared through inversion sets of values."""
    def inv(s):
        pos = {v: i for i, v in enumerate(s)}
        return frozenset((a, b) for a in s for b in s if a < b and pos[a] > pos[b])

    invs = [inv(s) for s in permutations(range(1, n + 1))]
    return sum(1 for a in invs for b in invs if a <= b)


def permutation_shuffle(sigma, tau):
    m, n = len(sigma), len(tau)
    shifted = tuple(t + m for t in tau)
    out = []
    for places in combinations(range(m + n), m):
        word, i, j = [], 0, 0
        for k in range(m + n):
            if k in places:
                word.append(sigma[i])
                i += 1
            else:
                word.append(shifted[j])
                j += 1
        out.append(tuple(word))
    return out
