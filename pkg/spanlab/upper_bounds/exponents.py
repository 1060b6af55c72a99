"""
sampling exponents, Succ/Fail stretch tables and the per-distance stretch
ceiling. everything is exact (Fraction / int).

q_i = n^(-g(i)) * r^(-h(i)); the exponents come from making every level of
the construction contribute the same number of edges.
"""

from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction

from dataclasses_json import dataclass_json

from spanlab.common.errors import InputError, InternalError
from spanlab.common.utils import iroot


class Variant(StrEnum):
    TZ_EMULATOR = "tz_emulator"
    TZ_SPANNER = "tz_spanner"
    """S_TZ(k, r), every level replaced by shortest paths"""
    NEW_SPANNER = "new_spanner"
    """S(k, r), level 1 replaced by path buying"""
    GIRTH_EMULATOR = "girth_emulator"
    GIRTH_SPANNER = "girth_spanner"

    @property
    def girth(self) -> bool:
        return self in (Variant.GIRTH_EMULATOR, Variant.GIRTH_SPANNER)

    @property
    def emulator(self) -> bool:
        return self in (Variant.TZ_EMULATOR, Variant.GIRTH_EMULATOR)


@dataclass(frozen=True)
class Exponents:
    variant: Variant
    k: int
    gamma: int
    g: tuple[Fraction, ...]
    """g[i] for i = 0..k, g[0] = 0"""
    h: tuple[Fraction, ...]
    """h[i] for i = 0..k, all zero for emulators"""


def _girth_unit(k: int, gamma: int) -> Fraction:
    """g(1)/gamma"""
    return Fraction(1, (gamma + 1) * 2**k - 1)


def _check_balance(exps: Exponents) -> None:
    """the top level must cost exactly as much as the base level"""
    k, g, h = exps.k, exps.g, exps.h
    base_n = 1 + (g[1] / exps.gamma if exps.variant.girth else g[1])
    if 2 - 2 * g[k] != base_n:
        raise InternalError(f"{exps.variant}: n-exponents unbalanced, {2 - 2 * g[k]} != {base_n}")
    if exps.variant.emulator:
        return
    if exps.variant == Variant.TZ_SPANNER:
        base_r = h[1]
    elif k >= 2:
        base_r = h[1] / exps.gamma
    else:
        return
    if k - 2 * h[k] != base_r:
        raise InternalError(f"{exps.variant}: r-exponents unbalanced, {k - 2 * h[k]} != {base_r}")


def sampling_exponents(k: int, variant: Variant | str, gamma: int = 1) -> Exponents:
    variant = Variant(variant)
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if gamma < 1:
        raise InputError(f"gamma must be >= 1, got {gamma}")
    if not variant.girth:
        gamma = 1
    top = 2 ** (k + 1) - 1

    g: list[Fraction] = [Fraction(0)]
    h: list[Fraction] = [Fraction(0)] * (k + 1)
    if variant.girth:
        unit = _girth_unit(k, gamma)
        g.append(gamma * unit)
        for i in range(2, k + 1):
            g.append(2 * g[i - 1] + unit)
    else:
        g += [Fraction(2**i - 1, top) for i in range(1, k + 1)]

    match variant:
        case Variant.TZ_SPANNER:
            h[1] = Fraction(2 ** (k + 1) - (k + 2), top)
            for i in range(2, k + 1):
                h[i] = (2**i - 1) * h[1] - 2**i + (i + 1)
        case Variant.NEW_SPANNER:
            h[1] = Fraction(3 * 2 ** (k - 1) - (k + 2), top)
            if k >= 2:
                h[2] = 3 * h[1]
            for i in range(3, k + 1):
                h[i] = 2 * h[i - 1] + h[1] - (i - 1)
        case Variant.GIRTH_SPANNER:
            per_gamma = Fraction(3 * 2 ** (k - 1) - (k + 2), (gamma + 1) * 2**k - 1)
            h[1] = gamma * per_gamma
            if k >= 2:
                h[2] = 2 * h[1] + per_gamma
            for i in range(3, k + 1):
                h[i] = 2 * h[i - 1] + per_gamma - (i - 1)

    exps = Exponents(variant, k, gamma, tuple(g), tuple(h))
    _check_balance(exps)
    return exps


def size_exponent(k: int, variant: Variant | str, gamma: int = 1) -> Fraction:
    """exponent of n in the expected size: 1 + g(1), or 1 + g(1)/gamma for girth variants"""
    exps = sampling_exponents(k, variant, gamma)
    if exps.variant.girth:
        return 1 + exps.g[1] / exps.gamma
    return 1 + exps.g[1]


def sampling_probabilities(n: int, r: int, exps: Exponents) -> tuple[float, ...]:
    """q_0..q_k, clamped to (0, 1] and made non-increasing"""
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if r < 1:
        raise InputError(f"r must be >= 1, got {r}")
    q = [1.0]
    for i in range(1, exps.k + 1):
        value = float(n) ** -float(exps.g[i]) * float(r) ** -float(exps.h[i])
        q.append(min(q[-1], max(value, 1.0 / n**2), 1.0))
    return tuple(q)


@dataclass_json
@dataclass(frozen=True)
class SuccFailTable:
    ell: int
    i_max: int
    gamma: int = 1
    succ: tuple[int, ...] = field(default_factory=tuple)
    fail: tuple[int, ...] = field(default_factory=tuple)

    @property
    def c_ell(self) -> Fraction | None:
        """l / (l - 3), only defined for l >= 4"""
        return Fraction(self.ell, self.ell - 3) if self.ell >= 4 else None


def succ_fail_table(ell: int, i_max: int, gamma: int = 1) -> SuccFailTable:
    if ell < 2:
        raise InputError(f"ell must be >= 2, got {ell}")
    if i_max < 0:
        raise InputError(f"i_max must be >= 0, got {i_max}")
    succ = [0, 6 * gamma]
    fail = [gamma, ell + 3 * gamma]
    for i in range(2, i_max + 1):
        fail.append(ell**i + 3 * fail[i - 1])
        succ.append(min(ell * succ[i - 1], (ell - 1) * succ[i - 1] + 4 * fail[i - 1]))
    return SuccFailTable(ell, i_max, gamma, tuple(succ[: i_max + 1]), tuple(fail[: i_max + 1]))


def closed_form_fail(ell: int, i: int, gamma: int = 1) -> int:
    """sum_{j=1..i} l^j 3^(i-j) + gamma 3^i"""
    if ell == 3:
        return i * 3**i + gamma * 3**i
    return (ell ** (i + 1) - ell * 3**i) // (ell - 3) + gamma * 3**i


def succ_upper(ell: int, i: int) -> Fraction:
    """closed-form ceiling on Succ(l, i)"""
    if ell == 2:
        return Fraction(3 ** (i + 1))
    if ell == 3:
        return Fraction(4 * i * 3**i)
    c = Fraction(ell, ell - 3)
    if i == 0:
        return Fraction(0)
    return min(4 * c * ell**i, (4 * c * i + 2) * Fraction(ell) ** (i - 1))


def predicted_stretch(d: int, k: int, gamma: int = 1, table: SuccFailTable | None = None) -> int:
    """
    additive ceiling at distance d, with l = floor(d^(1/k)):
    (ceil(d / l^(k-1)) - 1) Succ(l, k-1) + max(Succ(l, k-1), 4 Fail(l, k-1))
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if d < 2**k:
        raise InputError(f"d={d} is below 2^k={2**k}, outside the covered regime")
    ell = iroot(d, k)
    if table is None:
        table = succ_fail_table(ell, k - 1, gamma)
    elif table.ell != ell or table.i_max < k - 1:
        raise InputError(f"table is for ell={table.ell}, d={d} needs ell={ell}")
    succ, fail = table.succ[k - 1], table.fail[k - 1]
    intervals = -(-d // ell ** (k - 1))
    return (intervals - 1) * succ + max(succ, 4 * fail)
