"""Classical share arithmetic over Z_q and the angle encoding of shares."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    BadModulus,
    BadRandomizer,
    DegenerateInterpolation,
    DimensionError,
    InvalidArity,
    NotConsistent,
)

TWO_PI = 2.0 * math.pi
MAX_MODULUS = 1 << 61
ANGLE_SUM_TOL = 1e-9

# deterministic for every n < 3.3e24, which covers all 64-bit inputs
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(q: int) -> None:
    if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
        raise BadModulus(f"modulus must be an integer, got {q!r}")
    if q <= 2 or q >= MAX_MODULUS or not is_prime(int(q)):
        raise BadModulus(f"q={q} is not a prime in (2, 2**61)")


def check_randomizer(s: int, q: int) -> None:
    if not 1 <= s < q:
        raise BadRandomizer(f"s={s} not in {{1, ..., {q - 1}}}")


@dataclass(frozen=True)
class ShareConfig:
    """Additive n-of-n sharing: ``(k_A + sum(shares) + k_C) % q == 0``.

    ``shares`` are the values of the n-1 non-combiner shareholders in round
    order; ``k_C`` belongs to the combiner.  ``s`` is the session randomizer.
    """

    q: int
    k_A: int
    shares: tuple
    k_C: int
    s: int = 1

    def __post_init__(self):
        check_modulus(self.q)
        object.__setattr__(self, "shares", tuple(int(k) for k in self.shares))
        if not self.shares:
            raise InvalidArity("at least one non-combiner shareholder is required")
        for k in (self.k_A, self.k_C, *self.shares):
            if not 0 <= k < self.q:
                raise ValueError(f"share {k} outside Z_{self.q}")
        check_randomizer(self.s, self.q)
        if (self.k_A + sum(self.shares) + self.k_C) % self.q:
            raise NotConsistent("shares do not sum to zero modulo q")

    @property
    def n(self) -> int:
        """Number of shareholders, combiner included."""
        return len(self.shares) + 1

    def holder_shares(self) -> tuple:
        """All n shareholder values with the combiner last."""
        return self.shares + (self.k_C,)

    def with_combiner(self, index: int) -> "ShareConfig":
        """Relabel so that shareholder ``index`` (1-based over holder_shares) combines."""
        allk = self.holder_shares()
        if not 1 <= index <= len(allk):
            raise IndexError(f"combiner index {index} out of range 1..{len(allk)}")
        rest = allk[: index - 1] + allk[index:]
        return replace(self, shares=rest, k_C=allk[index - 1])

    def with_randomizer(self, s: int) -> "ShareConfig":
        return replace(self, s=s)

    def to_dict(self) -> dict:
        return {"q": self.q, "k_A": self.k_A, "shares": list(self.shares), "k_C": self.k_C, "s": self.s}


def split_secret(
    k_A: int,
    n: int,
    q: int,
    seed: Union[int, np.random.Generator, None] = None,
    *,
    shares: Optional[Sequence[int]] = None,
    s: int = 1,
) -> ShareConfig:
    """Draw n-1 uniform shares and solve for the combiner share.

    ``shares`` overrides the random draw (used to replay fixed examples).
    """
    check_modulus(q)
    if n < 2:
        raise InvalidArity("need n >= 2 shareholders")
    if not 0 <= k_A < q:
        raise ValueError(f"k_A={k_A} outside Z_{q}")
    if shares is None:
        rng = np.random.default_rng(seed)
        shares = [int(x) for x in rng.integers(0, q, size=n - 1)]
    elif len(shares) != n - 1:
        raise DimensionError(f"expected {n - 1} shares, got {len(shares)}")
    k_C = (-k_A - sum(shares)) % q
    return ShareConfig(q=q, k_A=k_A, shares=tuple(shares), k_C=k_C, s=s)


def encode_angle(s: int, k: int, q: int) -> float:
    """``(s*k/q)*2*pi`` reduced to ``[0, 2*pi)``.

    The product is reduced modulo q in exact integer arithmetic before the one
    floating-point division.
    """
    check_randomizer(s, q)
    if not 0 <= k < q:
        raise ValueError(f"k={k} outside Z_{q}")
    return (s * k % q) / q * TWO_PI


@dataclass
class AngleSet:
    """All angles of one protocol session."""

    phi_A: float
    phis: list
    phi_C: float
    masks: list = field(default_factory=list)
    thetas: list = field(default_factory=list)
    outcomes: list = field(default_factory=list)
    r: Optional[int] = None

    @classmethod
    def from_config(cls, config: ShareConfig) -> "AngleSet":
        enc = lambda k: encode_angle(config.s, k, config.q)  # noqa: E731
        return cls(enc(config.k_A), [enc(k) for k in config.shares], enc(config.k_C))

    def total(self) -> float:
        return self.phi_A + math.fsum(self.phis) + self.phi_C


def check_angle_sum(angles: AngleSet) -> int:
    """Return the integer r with ``phi_A + sum(phi_i) + phi_C = 2*pi*r``."""
    total = math.fsum([angles.phi_A, *angles.phis, angles.phi_C])
    r = round(total / TWO_PI)
    if abs(total - TWO_PI * r) >= ANGLE_SUM_TOL:
        raise NotConsistent(f"angle sum {total!r} is not a multiple of 2*pi")
    angles.r = r
    return r


# ---------------------------------------------------------------------------
# (t, n) threshold sharing
# ---------------------------------------------------------------------------


def shamir_split(secret: int, t: int, n: int, q: int, seed=None) -> list[tuple[int, int]]:
    """Points ``(x, f(x))`` for ``x = 1..n`` of a random degree t-1 polynomial."""
    check_modulus(q)
    if not 1 <= t <= n < q:
        raise InvalidArity("need 1 <= t <= n < q")
    rng = np.random.default_rng(seed)
    coeffs = [secret % q] + [int(c) for c in rng.integers(0, q, size=t - 1)]
    return [(x, sum(c * pow(x, e, q) for e, c in enumerate(coeffs)) % q) for x in range(1, n + 1)]


def lagrange_reduce(points: Sequence[tuple[int, int]], q: int) -> list[int]:
    """Turn t Shamir points into additive shares of the same secret.

    ``k'_i = y_i * prod_{j != i} x_j / (x_j - x_i)  (mod q)``.
    """
    check_modulus(q)
    xs = [x % q for x, _ in points]
    if any(x == 0 for x in xs):
        raise DegenerateInterpolation("abscissa 0 is reserved for the secret")
    if len(set(xs)) != len(xs):
        raise DegenerateInterpolation("repeated abscissa")
    out = []
    for i, (xi, yi) in enumerate(points):
        lam = 1
        for j, (xj, _) in enumerate(points):
            if j != i:
                lam = lam * xj * pow(xj - xi, -1, q) % q
        out.append(yi * lam % q)
    return out


def threshold_config(secret: int, points: Sequence[tuple[int, int]], q: int, s: int = 1) -> ShareConfig:
    """Additive configuration for the t parties holding ``points``.

    The dealer's value is ``-secret mod q`` so the additive relation holds.
    The last point's holder acts as combiner.
    """
    reduced = lagrange_reduce(points, q)
    if len(reduced) < 2:
        raise InvalidArity("the reconstruction protocol needs at least two parties")
    return ShareConfig(q=q, k_A=(-secret) % q, shares=tuple(reduced[:-1]), k_C=reduced[-1], s=s)
