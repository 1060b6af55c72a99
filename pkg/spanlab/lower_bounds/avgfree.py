"""
l-average-free label sets: l*x0 = x1 + ... + xl only has the trivial solution.

behrend_set uses a digit construction. Write x in base b with every digit
below d, where l*(d-1) < b, so adding l members never carries. Among those
numbers keep the ones on the most populous sphere of squared digit norm.
Strict convexity then rules out every nontrivial solution. With d = 2 the
sphere step is not needed, since digits in {0, 1} already force it.
"""

from collections import Counter
from dataclasses import dataclass

from dataclasses_json import dataclass_json
from loguru import logger

from spanlab.common.constants import AVGFREE_DP_CUTOFF, BRUTE_FORCE_MAX_RANGE
from spanlab.common.errors import InputError, VerificationIncomplete


@dataclass_json
@dataclass(frozen=True)
class AvgFreeSet:
    p: int
    ell: int
    members: tuple[int, ...]
    """strictly increasing, inside [1, p // ell]"""

    def __post_init__(self):
        if self.ell < 2:
            raise InputError(f"ell must be >= 2, got {self.ell}")
        if not self.members:
            raise InputError("an average-free set needs at least one member")
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise InputError("members must be strictly increasing")
        if self.members[0] < 1 or self.members[-1] > self.p // self.ell:
            raise InputError(
                f"members must lie in [1, {self.p // self.ell}], got {self.members}"
            )

    @property
    def xi(self) -> float:
        """measured p / |L[p]|"""
        return self.p / len(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _digits(x: int, base: int) -> list[int]:
    out = []
    while x:
        x, r = divmod(x, base)
        out.append(r)
    return out


def _digit_candidate(n: int, ell: int, d: int, base: int) -> list[int]:
    """numbers in [0, n) with base-`base` digits below d, on the fullest sphere"""
    picked: list[int] = []
    spheres: Counter[int] = Counter()
    norms: dict[int, int] = {}
    for x in range(n):
        digits = _digits(x, base)
        if any(c >= d for c in digits):
            continue
        picked.append(x)
        if d > 2:
            norm = sum(c * c for c in digits)
            norms[x] = norm
            spheres[norm] += 1
    if d == 2 or not picked:
        return picked
    # smallest norm wins ties
    best_norm = min(spheres, key=lambda r: (-spheres[r], r))
    return [x for x in picked if norms[x] == best_norm]


def digit_bound(p: int, ell: int) -> int:
    """
    guaranteed size of behrend_set(p, ell): 2^m for the largest m with
    ((ell+1)^m - 1) / ell <= p // ell - 1
    """
    n = p // ell
    m = 0
    while ((ell + 1) ** (m + 1) - 1) // ell <= n - 1:
        m += 1
    return 2**m


def behrend_set(p: int, ell: int) -> AvgFreeSet:
    if ell < 2:
        raise InputError(f"ell must be >= 2, got {ell}")
    if p < ell:
        raise InputError(f"need p >= ell, got p={p}, ell={ell}")
    n = p // ell

    best: list[int] = [0]
    if n >= 2:
        best = [0, 1]
    d = 2
    while ell * (d - 1) + 1 <= n - 1:
        for base in range(ell * (d - 1) + 1, ell * d + 1):
            cand = _digit_candidate(n, ell, d, base)
            if len(cand) > len(best):
                best = cand
        d += 1

    members = tuple(x + 1 for x in best)
    logger.debug(f"behrend set for p={p}, ell={ell}: {len(members)} labels")
    return AvgFreeSet(p, ell, members)


def _pair_witness(members: tuple[int, ...]) -> tuple[int, ...] | None:
    present = set(members)
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if (a + b) % 2 == 0 and (a + b) // 2 in present:
                return ((a + b) // 2, a, b)
    return None


def _multiset_counts(members: tuple[int, ...], ell: int) -> list[list[int]]:
    """counts[j][s] = number of size-j multisets summing to s, capped at 2"""
    top = ell * members[-1]
    if (ell + 1) * (top + 1) > AVGFREE_DP_CUTOFF:
        raise VerificationIncomplete(
            f"average-free check for ell={ell} over max {members[-1]} "
            f"needs more than {AVGFREE_DP_CUTOFF} states"
        )
    counts = [[0] * (top + 1) for _ in range(ell + 1)]
    counts[0][0] = 1
    for m in members:
        # ascending j reuses this item's own updates, so repeats are allowed
        for j in range(1, ell + 1):
            prev, cur = counts[j - 1], counts[j]
            for s in range(m, top + 1):
                if prev[s - m]:
                    cur[s] = min(2, cur[s] + prev[s - m])
    return counts


def _find_multiset(
    members: tuple[int, ...],
    counts: list[list[int]],
    size: int,
    total: int,
    start: int,
    avoid: int,
    chosen: list[int],
) -> list[int] | None:
    if size == 0:
        if total == 0 and any(x != avoid for x in chosen):
            return list(chosen)
        return None
    if total < 0 or counts[size][total] == 0:
        return None
    for i in range(start, len(members)):
        m = members[i]
        if m * size > total:
            break
        chosen.append(m)
        found = _find_multiset(members, counts, size - 1, total - m, i, avoid, chosen)
        chosen.pop()
        if found is not None:
            return found
    return None


def is_avgfree(s: AvgFreeSet) -> tuple[bool, tuple[int, ...] | None]:
    """
    (True, None) when only trivial solutions exist, else (False, (x0, x1, ..., xl)).
    raises VerificationIncomplete past AVGFREE_DP_CUTOFF for l >= 3.
    """
    if len(s.members) == 1:
        return True, None
    if s.ell == 2:
        witness = _pair_witness(s.members)
        return witness is None, witness

    counts = _multiset_counts(s.members, s.ell)
    for x0 in s.members:
        if counts[s.ell][s.ell * x0] >= 2:
            found = _find_multiset(
                s.members, counts, s.ell, s.ell * x0, 0, x0, []
            )
            if found is None:
                raise AssertionError("multiset count and search disagree")
            return False, (x0, *found)
    return True, None


def brute_force_max_avgfree(p: int, ell: int) -> AvgFreeSet:
    """exhaustive maximum, only for floor(p/ell) <= BRUTE_FORCE_MAX_RANGE"""
    if ell < 2 or p < ell:
        raise InputError(f"need p >= ell >= 2, got p={p}, ell={ell}")
    n = p // ell
    if n > BRUTE_FORCE_MAX_RANGE:
        raise InputError(
            f"range [1, {n}] too large for exhaustive search (max {BRUTE_FORCE_MAX_RANGE})"
        )

    best: list[int] = []

    def admits(chosen: list[int], sums: list[set[int]], x: int) -> bool:
        # x is the new maximum, so it can only appear on the right-hand side
        for t in range(1, ell):
            for x0 in chosen:
                if ell * x0 - t * x in sums[ell - t]:
                    return False
        return True

    def extend(sums: list[set[int]], x: int) -> list[set[int]]:
        grown = [set(level) for level in sums]
        for j in range(1, ell):
            for t in range(1, j + 1):
                grown[j].update(s + t * x for s in sums[j - t])
        return grown

    def search(x: int, chosen: list[int], sums: list[set[int]]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if x > n or len(chosen) + (n - x + 1) <= len(best):
            return
        if admits(chosen, sums, x):
            chosen.append(x)
            search(x + 1, chosen, extend(sums, x))
            chosen.pop()
        search(x + 1, chosen, sums)

    search(1, [], [{0}] + [set() for _ in range(ell - 1)])
    return AvgFreeSet(p, ell, tuple(best))
