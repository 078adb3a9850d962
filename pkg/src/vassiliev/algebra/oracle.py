"""Brute-force dimension oracle for chord diagrams on one circle.

Deliberately shares no code with the main engine: diagrams are words of
chord labels on 2n numbered positions (no canonical forms), rotations are
imposed as explicit relations, and the rank is computed by sympy.
"""

from __future__ import annotations

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

__all__ = ["labelled_words", "oracle_chord_dim"]


def _normalize(word):
    ren = {}
    out = []
    for c in word:
        if c not in ren:
            ren[c] = len(ren)
        out.append(ren[c])
    return tuple(out)


def labelled_words(n):
    """All perfect matchings of positions 0..2n-1, as first-occurrence words."""
    out = []

    def rec(word, nxt):
        if len(word) == 2 * n:
            out.append(_normalize(word))
            return
        open_labels = [c for c in set(word) if word.count(c) == 1]
        if nxt < n and len(open_labels) + len(word) < 2 * n:
            rec(word + [nxt], nxt + 1)
        for c in sorted(open_labels):
            rec(word + [c], nxt)

    rec([], 0)
    return sorted(set(out))


def _isolated(word):
    n2 = len(word)
    for c in set(word):
        i = word.index(c)
        j = n2 - 1 - word[::-1].index(c)
        inside = word[i + 1 : j]
        if all(inside.count(x) != 1 for x in set(inside)):
            return True
    return False


def oracle_chord_dim(n, one_t=True):
    """dim of chord diagrams of degree n on a circle mod 4T (and 1T)."""
    words = labelled_words(n)
    col = {w: i for i, w in enumerate(words)}
    rows = []
    for w in words:
        rot = _normalize(w[1:] + w[:1])
        if rot != w:
            rows.append({col[w]: 1, col[rot]: -1})
        if one_t and _isolated(list(w)):
            rows.append({col[w]: 1})
    # 4T: the end y sits just before a1 in w
    L = 2 * n
    for w in words:
        for p in range(L):
            y_lab = w[p - 1]
            a_lab = w[p]
            if y_lab == a_lab:
                continue
            a_pos = [i for i in range(L) if w[i] == a_lab]
            a2 = a_pos[0] if a_pos[1] == p else a_pos[1]
            # D(a1-) = w; D(a1+) swaps y and a1
            swapped = list(w)
            swapped[p - 1], swapped[p] = swapped[p], swapped[p - 1]
            rest = list(w)
            y_at = (p - 1) % L
            del rest[y_at]
            a2_new = a2 - (1 if a2 > y_at else 0)
            before = rest[:a2_new] + [y_lab] + rest[a2_new:]
            after = rest[: a2_new + 1] + [y_lab] + rest[a2_new + 1 :]
            terms = {}
            for word, s in ((w, 1), (swapped, -1), (after, -1), (before, 1)):
                c = col[_normalize(word)]
                terms[c] = terms.get(c, 0) + s
            terms = {c: v for c, v in terms.items() if v}
            if terms:
                rows.append(terms)
    if not rows:
        return len(words)
    M = DomainMatrix(
        [[QQ(r.get(c, 0)) for c in range(len(words))] for r in rows], (len(rows), len(words)), QQ
    )
    return len(words) - M.rank()
