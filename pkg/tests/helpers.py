"""Small groups used across the cohomology tests."""

import itertools

from autcoh.cohomology.tables import from_elements


def symmetric(n: int):
    perms = list(itertools.permutations(range(n)))
    return from_elements(perms, lambda a, b: tuple(a[b[i]] for i in range(n)), tuple(range(n)), name=f"S{n}")


def alternating4():
    def sign(p):
        s = 1
        for i, j in itertools.combinations(range(4), 2):
            if p[i] > p[j]:
                s = -s
        return s

    perms = [p for p in itertools.permutations(range(4)) if sign(p) == 1]
    return from_elements(perms, lambda a, b: tuple(a[b[i]] for i in range(4)), tuple(range(4)), name="A4")


# one status line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}
