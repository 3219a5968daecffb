"""Period finding and the factoring reduction built on it.

The simulation knows the hidden period when it prepares the comb state,
just as the physical register would "know" it through f. Recovery never
sees it: :func:`recover_period` consumes only a :class:`BlackBox` (f
evaluations) and a stream of measured integers, and that is the only path
:func:`find_period` uses to produce its answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .core_state import RandomSource, StateVector, measure_all
from .errors import DomainError, RecoveryError
from .qft import apply_qft_circuit, comb_distribution, comb_size

STATEVECTOR_MAX_QUBITS = 16
SIM_MAX_QUBITS = 22
EXHAUSTIVE_CHECK_MAX_BITS = 16

PeriodSampler = Callable[[RandomSource], int]


# -- modular arithmetic -----------------------------------------------------

def mod_exp(a: int, x: int, N: int) -> int:
    """``a**x mod N`` by left-to-right square-and-multiply."""
    if N < 2:
        raise DomainError(f"modulus must be at least 2, got {N}")
    if a < 0 or x < 0:
        raise DomainError("base and exponent must be non-negative")
    result = 1
    a %= N
    for bit in bin(x)[2:]:
        result = result * result % N
        if bit == "1":
            result = result * a % N
    return result


def multiplicative_order(a: int, N: int) -> int:
    """Least r > 0 with a**r = 1 (mod N), by stepping. Simulation-side only."""
    if math.gcd(a, N) != 1:
        raise DomainError(f"{a} is not invertible mod {N}")
    r, value = 1, a % N
    while value != 1:
        value = value * a % N
        r += 1
    return r


def integer_root(N: int, k: int) -> int:
    """floor(N ** (1/k)) for N >= 0, exact in integers."""
    if N < 0 or k < 1:
        raise DomainError("need N >= 0 and k >= 1")
    if N < 2 or k == 1:
        return N
    lo, hi = 1, 1 << (N.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= N:
            lo = mid
        else:
            hi = mid - 1
    return lo


def prime_power_base(N: int) -> int | None:
    """Return p if N = p**k for a prime p and k >= 2, else None."""
    for k in range(N.bit_length(), 1, -1):
        root = integer_root(N, k)
        if root > 1 and root**k == N and is_prime(root):
            return root
    return None


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(N: int) -> bool:
    """Deterministic Miller-Rabin, exact for N < 3.3e24."""
    if N < 2:
        return False
    for p in _MR_BASES:
        if N % p == 0:
            return N == p
    d, s = N - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, N)
        if x in (1, N - 1):
            continue
        for _ in range(s - 1):
            x = x * x % N
            if x == N - 1:
                break
        else:
            return False
    return True


def _prime_factors(c: int) -> list[int]:
    primes, p = [], 2
    while p * p <= c:
        if c % p == 0:
            primes.append(p)
            while c % p == 0:
                c //= p
        p += 1
    if c > 1:
        primes.append(c)
    return primes


# -- oracles ----------------------------------------------------------------

class BlackBox:
    """Query-only view of a periodic function, with a call counter."""

    __slots__ = ("_f", "num_bits", "calls")

    def __init__(self, f: Callable[[int], object], num_bits: int):
        self._f = f
        self.num_bits = num_bits
        self.calls = 0

    def __call__(self, x: int):
        self.calls += 1
        return self._f(x)


@dataclass
class PeriodicOracle:
    num_bits: int
    f: Callable[[int], object]
    period: int

    def __post_init__(self):
        if self.num_bits < 1:
            raise DomainError(f"need at least one bit, got {self.num_bits}")
        if not 1 <= self.period <= (1 << self.num_bits):
            raise DomainError(f"period {self.period} outside [1, 2**{self.num_bits}]")

    @classmethod
    def from_period(cls, num_bits: int, r: int) -> PeriodicOracle:
        return cls(num_bits, lambda x: x % r, r)

    @classmethod
    def modexp(cls, a: int, N: int, num_bits: int) -> PeriodicOracle:
        return cls(num_bits, lambda x: mod_exp(a, x, N), multiplicative_order(a, N))

    def black_box(self) -> BlackBox:
        return BlackBox(self.f, self.num_bits)


def validate_periodic_oracle(o: PeriodicOracle) -> bool:
    """Exhaustively check f(x) = f(y) iff r | x - y on the whole domain.

    Equivalent to: f(x) = f(x mod r) everywhere, and f(0), ..., f(r-1) are
    pairwise distinct.
    """
    if o.num_bits > EXHAUSTIVE_CHECK_MAX_BITS:
        raise DomainError(f"exhaustive check limited to {EXHAUSTIVE_CHECK_MAX_BITS} bits")
    values = [o.f(x) for x in range(1 << o.num_bits)]
    r = o.period
    head = values[: min(r, len(values))]
    if len(set(head)) != len(head):
        return False
    return all(values[x] == values[x % r] for x in range(len(values)))


# -- comb state and measurement ---------------------------------------------

def prepare_periodic_superposition(
    n: int, r: int, z: int | None = None, rng: RandomSource | None = None
) -> StateVector:
    """Equal-amplitude comb on z, z + r, z + 2r, ... below 2**n.

    When ``z`` is None it is drawn uniformly from [0, r) using ``rng``.
    """
    if z is None:
        if rng is None:
            raise DomainError("need an offset or a random source to draw one")
        if not 1 <= r <= (1 << n):
            raise DomainError(f"period {r} outside [1, 2**{n}]")
        z = int(rng.integers(r))
    m = comb_size(n, r, z)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[z::r] = 1 / math.sqrt(m)
    return StateVector(n, amps)


@lru_cache(maxsize=64)
def _evolved_comb(n: int, r: int, z: int) -> StateVector:
    # the post-QFT state is a pure function of (n, r, z); reuse it across shots
    return apply_qft_circuit(prepare_periodic_superposition(n, r, z))


def _measure_comb(n: int, r: int, z: int, rng: RandomSource, method: str) -> int:
    if method == "auto":
        method = "statevector" if n <= STATEVECTOR_MAX_QUBITS else "analytic"
    if method == "statevector":
        y, _ = measure_all(_evolved_comb(n, r, z), rng)
        return y
    if method == "analytic":
        probs = comb_distribution(n, r, z)
        cdf = np.cumsum(probs)
        return int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), cdf.size - 1))
    raise DomainError(f"unknown sampling method {method!r}")


def sample_period_measurement(n: int, r: int, rng: RandomSource, method: str = "auto") -> int:
    """Draw z, prepare the comb, apply the QFT and measure every qubit.

    ``method`` picks full state-vector evolution ("statevector"), the exact
    closed-form distribution ("analytic"), or statevector up to
    STATEVECTOR_MAX_QUBITS and analytic above ("auto").
    """
    if not 1 <= r <= (1 << n):
        raise DomainError(f"period {r} outside [1, 2**{n}]")
    z = int(rng.integers(r))
    return _measure_comb(n, r, z, rng, method)


def comb_sampler(n: int, r: int, method: str = "auto") -> PeriodSampler:
    """The only place the hidden period meets the recovery loop."""
    return lambda rng: sample_period_measurement(n, r, rng, method)


# -- continued fractions ----------------------------------------------------

@dataclass(frozen=True)
class ConvergentList:
    """Convergents of num/den, with denominators strictly increasing.

    When the second partial quotient is 1 the first two convergents share
    denominator 1; the weaker one (0/1) is dropped.
    """

    partial_quotients: tuple[int, ...]
    convergents: tuple[Fraction, ...]

    def __iter__(self):
        return iter(self.convergents)

    def __len__(self):
        return len(self.convergents)

    def __getitem__(self, i):
        return self.convergents[i]

    def value(self) -> Fraction:
        """Rebuild the fraction from the partial quotients alone."""
        acc = Fraction(self.partial_quotients[-1])
        for a in reversed(self.partial_quotients[:-1]):
            acc = a + 1 / acc
        return acc


def continued_fraction_expansion(num: int, den: int) -> ConvergentList:
    if den == 0:
        raise DomainError("denominator must be nonzero")
    if not 0 <= num < den:
        raise DomainError(f"need 0 <= num < den, got {num}/{den}")
    quotients = []
    a, b = num, den
    while True:
        q, rem = divmod(a, b)
        quotients.append(q)
        if rem == 0:
            break
        a, b = b, rem
    convergents = []
    p_prev, p = 1, quotients[0]
    q_prev, q = 0, 1
    convergents.append(Fraction(p, q))
    for a_k in quotients[1:]:
        p_prev, p = p, a_k * p + p_prev
        q_prev, q = q, a_k * q + q_prev
        if q == convergents[-1].denominator:
            convergents.pop()
        convergents.append(Fraction(p, q))
    return ConvergentList(tuple(quotients), tuple(convergents))


def recover_period_candidate(y: int, n: int, q_bound: int) -> int | None:
    """Denominator of the last convergent of y / 2**n not exceeding q_bound."""
    if q_bound < 1:
        raise DomainError(f"q_bound must be positive, got {q_bound}")
    if y == 0:
        return None
    best = None
    for c in continued_fraction_expansion(y, 1 << n):
        if c.denominator > q_bound:
            break
        best = c.denominator
    return best


def default_q_bound(n: int) -> int:
    return math.isqrt(1 << n)


# -- recovery ---------------------------------------------------------------

@dataclass
class PeriodAttempt:
    y: int
    convergents: list[str]
    candidate: int | None
    tested: list[int]
    verified: int | None

    def as_dict(self) -> dict:
        return {
            "y": self.y,
            "convergents": self.convergents,
            "candidate": self.candidate,
            "tested": self.tested,
            "verified": self.verified,
        }


@dataclass
class PeriodResult:
    period: int | None
    attempts: list[PeriodAttempt] = field(default_factory=list)
    queries: int = 0


def _minimal_period(box: BlackBox, c: int, f0) -> int:
    """Shrink a verified multiple of the period down to the period itself."""
    for p in _prime_factors(c):
        while c % p == 0 and box(c // p) == f0:
            c //= p
    return c


def recover_period(
    box: BlackBox,
    n: int,
    sampler: PeriodSampler,
    max_attempts: int,
    rng: RandomSource,
    q_bound: int | None = None,
) -> PeriodResult:
    """Recover the period from measured integers and f queries alone.

    Each attempt takes the continued-fraction candidate q of y / 2**n and
    tests q and lcm(previous candidates, q) against f(c) = f(0). A verified
    c is a multiple of the period and is reduced to the least one. Until
    something verifies, the running lcm covers measurements that only
    revealed a divisor of the period.
    """
    if max_attempts < 1:
        raise DomainError(f"max_attempts must be positive, got {max_attempts}")
    if q_bound is None:
        q_bound = default_q_bound(n)
    limit = max(q_bound, 1 << n)
    result = PeriodResult(None)
    f0 = box(0)
    running = 1
    for _ in range(max_attempts):
        y = sampler(rng)
        convergents = []
        if y:
            convergents = [f"{c.numerator}/{c.denominator}" for c in continued_fraction_expansion(y, 1 << n)]
        q = recover_period_candidate(y, n, q_bound)
        if q is None:
            tests = [running]
        else:
            tests = list(dict.fromkeys([q, math.lcm(running, q)]))
        tests = [c for c in tests if c <= limit]
        attempt = PeriodAttempt(y, convergents, q, tests, None)
        result.attempts.append(attempt)
        for c in tests:
            if box(c) == f0:
                attempt.verified = result.period = _minimal_period(box, c, f0)
                result.queries = box.calls
                return result
        if q is not None:
            merged = math.lcm(running, q)
            running = merged if merged <= limit else q
    result.queries = box.calls
    return result


def find_period_traced(
    o: PeriodicOracle,
    max_attempts: int,
    rng: RandomSource,
    q_bound: int | None = None,
    method: str = "auto",
) -> PeriodResult:
    n = o.num_bits
    if n > SIM_MAX_QUBITS and method != "analytic":
        method = "analytic"
    sampler = comb_sampler(n, o.period, method)
    return recover_period(o.black_box(), n, sampler, max_attempts, rng, q_bound)


def find_period(
    o: PeriodicOracle,
    max_attempts: int,
    rng: RandomSource,
    q_bound: int | None = None,
) -> int:
    result = find_period_traced(o, max_attempts, rng, q_bound)
    if result.period is None:
        raise RecoveryError(f"no verified period after {max_attempts} attempts")
    return result.period


# -- factoring ----------------------------------------------------------------

class ClassicalCase(DomainError):
    """N is outside the quantum path's domain; ``factor`` holds the classical
    answer when there is one (even N, prime powers)."""

    def __init__(self, message: str, factor: int | None = None):
        super().__init__(message)
        self.factor = factor


@dataclass(frozen=True)
class FactorResult:
    n_input: int
    factor: int
    attempts: int
    trace: tuple = ()

    def __post_init__(self):
        if not (1 < self.factor < self.n_input and self.n_input % self.factor == 0):
            raise DomainError(f"{self.factor} is not a nontrivial divisor of {self.n_input}")

    @property
    def cofactor(self) -> int:
        return self.n_input // self.factor


def check_factor_input(N: int) -> None:
    """Raise ClassicalCase unless N is odd, composite and not a prime power."""
    if N < 4:
        raise ClassicalCase(f"{N} is too small to factor")
    if N % 2 == 0:
        raise ClassicalCase(f"{N} is even", 2)
    if is_prime(N):
        raise ClassicalCase(f"{N} is prime")
    base = prime_power_base(N)
    if base is not None:
        raise ClassicalCase(f"{N} is a power of {base}", base)


def register_size(N: int) -> int:
    """ceil(2 * log2 N), capped at SIM_MAX_QUBITS for simulation."""
    # smallest n with 2**n >= N**2
    return min((N * N - 1).bit_length(), SIM_MAX_QUBITS)


def factor(N: int, max_rounds: int, rng: RandomSource, max_attempts: int = 32) -> FactorResult:
    """Split N by order finding on random bases.

    Each round draws a in [2, N-2]. A shared factor with N ends the round at
    once; otherwise the period r of a**x mod N is found and, when r is even
    and a**(r/2) != -1 mod N, gcd(a**(r/2) +- 1, N) is a proper factor.
    """
    check_factor_input(N)
    if max_rounds < 1:
        raise DomainError(f"max_rounds must be positive, got {max_rounds}")
    n = register_size(N)
    trace = []
    for round_no in range(1, max_rounds + 1):
        a = int(rng.integers(2, N - 1))
        entry = {"round": round_no, "a": a}
        trace.append(entry)
        g = math.gcd(a, N)
        if g > 1:
            entry["outcome"] = "shared factor"
            return FactorResult(N, g, round_no, tuple(trace))
        oracle = PeriodicOracle.modexp(a, N, n)
        found = find_period_traced(oracle, max_attempts, rng, q_bound=N - 1)
        entry["attempts"] = [att.as_dict() for att in found.attempts]
        r = found.period
        entry["period"] = r
        if r is None:
            entry["outcome"] = "period not recovered"
            continue
        if r % 2:
            entry["outcome"] = "odd period"
            continue
        half = mod_exp(a, r // 2, N)
        if half == N - 1:
            entry["outcome"] = "a^(r/2) = -1 mod N"
            continue
        for d in (math.gcd(half - 1, N), math.gcd(half + 1, N)):
            if 1 < d < N:
                entry["outcome"] = "split"
                return FactorResult(N, d, round_no, tuple(trace))
        entry["outcome"] = "trivial gcd"
    err = RecoveryError(f"no factor of {N} after {max_rounds} rounds")
    err.trace = tuple(trace)
    raise err
