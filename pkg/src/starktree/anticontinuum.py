"""Exact stationary states of the tilted DNLS in the zero-hopping limit.

With the hopping switched off the stationary equation decouples site by
site: mu c_l = nu c_l^3 + f l c_l.  A state is then fixed by the finite set
S of occupied sites, and on S the amplitudes are c_l = +-sqrt((mu - f l)/nu)
with mu = nu/N + (f/N) sum(S).  Reality of the amplitudes demands
nu/f > sum of the complementary set {max S - l}, which is the branch's
birth threshold.  This module enumerates the admissible sets, builds the
states, and assembles the bifurcation tree of energies over nu/f.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, DomainError, InadmissibleSetError
from .partitions import enumerate_distinct_partitions

# Margin giving finite-hopping tails below 1e-12 for the beta ranges the
# continuation targets (beta' <= 0.05).
DEFAULT_WINDOW_MARGIN = 5

# Window must exceed the support by at least this much on each side.
MIN_WINDOW_MARGIN = 2

NORMALIZATION_TOL = 1e-12


def _as_int(value, what: str) -> int:
    try:
        return operator.index(value)
    except TypeError:
        raise DomainError(f"{what} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class SolutionSet:
    """Finite set of occupied lattice sites, stored sorted.

    Canonical representatives have min = 0; translated copies (min = j) are
    produced by `translate_state` and behave identically up to the energy
    shift j*f.
    """

    sites: tuple[int, ...]

    def __post_init__(self):
        sites = tuple(_as_int(s, "site index") for s in self.sites)
        if not sites:
            raise DomainError("a solution set needs at least one site")
        if len(set(sites)) != len(sites):
            raise DomainError(f"duplicate sites in {sites}")
        object.__setattr__(self, "sites", tuple(sorted(sites)))

    @property
    def cardinality(self) -> int:
        return len(self.sites)

    @property
    def is_canonical(self) -> bool:
        return self.sites[0] == 0

    def translated(self, j: int) -> "SolutionSet":
        return SolutionSet(tuple(s + j for s in self.sites))

    def __iter__(self):
        return iter(self.sites)

    def __len__(self):
        return len(self.sites)

    def __contains__(self, site):
        return site in self.sites


@dataclass(frozen=True)
class LatticeParams:
    """Model constants: nonlinearity nu > 0, tilt f > 0, hopping beta >= 0,
    and the finite window [lo, hi] of retained sites."""

    nu: float
    f: float
    beta: float = 0.0
    window: tuple[int, int] = (-5, 5)

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu > 0):
            raise DomainError(f"nu must be finite and positive, got {self.nu}")
        if not (math.isfinite(self.f) and self.f > 0):
            raise DomainError(f"f must be finite and positive, got {self.f}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise DomainError(f"beta must be finite and non-negative, got {self.beta}")
        lo, hi = (_as_int(v, "window bound") for v in self.window)
        if lo >= hi:
            raise ConfigurationError(f"window must satisfy lo < hi, got ({lo}, {hi})")
        object.__setattr__(self, "window", (lo, hi))

    @property
    def ratio(self) -> float:
        """The dimensionless drive nu/f."""
        return self.nu / self.f

    @property
    def window_sites(self) -> np.ndarray:
        lo, hi = self.window
        return np.arange(lo, hi + 1)

    @property
    def window_size(self) -> int:
        lo, hi = self.window
        return hi - lo + 1

    def covers(self, sset: SolutionSet, margin: int = MIN_WINDOW_MARGIN) -> bool:
        lo, hi = self.window
        return lo <= sset.sites[0] - margin and hi >= sset.sites[-1] + margin

    @classmethod
    def for_set(cls, sset: SolutionSet, nu, f, beta=0.0,
                margin: int = DEFAULT_WINDOW_MARGIN) -> "LatticeParams":
        """Params with the default window: support padded by `margin` sites."""
        return cls(nu=nu, f=f, beta=beta,
                   window=(sset.sites[0] - margin, sset.sites[-1] + margin))


@dataclass
class StationaryState:
    """Coefficient vector over the window plus its energy mu.

    `set` and `signs` record the zero-hopping provenance; both become None
    once Newton continuation has smeared the support over the whole window.
    """

    params: LatticeParams
    coefficients: np.ndarray = field(repr=False)
    mu: float
    set: SolutionSet | None = None
    signs: tuple[int, ...] | None = None

    @property
    def window_sites(self) -> np.ndarray:
        return self.params.window_sites

    def coefficient_at(self, site: int) -> float:
        lo, hi = self.params.window
        if not lo <= site <= hi:
            raise ConfigurationError(f"site {site} outside window {self.params.window}")
        return self.coefficients[site - lo]

    def norm_sq(self) -> float:
        return float(np.sum(self.coefficients ** 2))


@dataclass(frozen=True)
class Branch:
    """One bifurcation branch: a set, its birth threshold, and the energy
    samples mu/f over the grid points strictly above the threshold."""

    set: SolutionSet
    birth: int
    xs: np.ndarray = field(repr=False)
    mu_over_f: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BifurcationTree:
    branches: list[Branch]
    x_grid: np.ndarray = field(repr=False)


def complementary_set(sset: SolutionSet) -> SolutionSet:
    """Reflect the set about its maximum: {max S - l : l in S}.

    Always contains 0 and has the same cardinality; an involution on
    canonical sets.
    """
    top = sset.sites[-1]
    return SolutionSet(tuple(top - s for s in sset.sites))


def birth_threshold(sset: SolutionSet) -> int:
    """Sum of the complementary set: the integer nu/f must strictly exceed
    for the branch to exist.  Translation invariant."""
    top = sset.sites[-1]
    return sum(top - s for s in sset.sites)


def admissible(sset: SolutionSet, x) -> bool:
    """True iff nu/f = x strictly exceeds the birth threshold of the set."""
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"ratio must be finite and positive, got {x}")
    return x > birth_threshold(sset)


def energy_of_set(sset: SolutionSet, nu, f) -> float:
    """Branch energy mu = nu/N + (f/N) sum(S)."""
    nu, f = float(nu), float(f)
    if nu <= 0 or f <= 0:
        raise DomainError("nu and f must be positive")
    n = sset.cardinality
    return nu / n + f * sum(sset.sites) / n


def consecutive_threshold(n_modes) -> int:
    """Birth threshold N(N-1)/2 of the consecutive-site family {0,..,N-1}."""
    n_modes = _as_int(n_modes, "mode count")
    if n_modes < 1:
        raise DomainError(f"mode count must be >= 1, got {n_modes}")
    return n_modes * (n_modes - 1) // 2


def _normalize_signs(signs, n: int) -> tuple[int, ...]:
    """Accept '+-+' strings or +-1 sequences; default all-plus."""
    if signs is None:
        return (1,) * n
    if isinstance(signs, str):
        if not all(ch in "+-" for ch in signs):
            raise DomainError(f"sign string may only contain '+'/'-', got {signs!r}")
        out = tuple(1 if ch == "+" else -1 for ch in signs)
    else:
        try:
            out = tuple(signs)
        except TypeError:
            raise DomainError(f"signs must be a '+-' string or +-1 sequence, "
                              f"got {signs!r}") from None
        if not all(s in (1, -1) for s in out):
            raise DomainError(f"signs must be +-1, got {out}")
    if len(out) != n:
        raise DomainError(f"expected {n} signs, got {len(out)}")
    return out


def zero_hopping_residual(state: StationaryState) -> np.ndarray:
    """Residual of the decoupled stationary equations,
    nu c^3 + f l c - mu c, over the window."""
    c = state.coefficients
    sites = state.window_sites
    p = state.params
    return p.nu * c ** 3 + p.f * sites * c - state.mu * c


def build_state(sset: SolutionSet, params: LatticeParams,
                signs=None) -> StationaryState:
    """Exact zero-hopping state on the set with the given sign pattern.

    Amplitudes are +-sqrt((mu - f l)/nu) on the set and zero elsewhere;
    the normalization sum c^2 = 1 holds identically and is asserted.

    Raises InadmissibleSetError below the birth threshold and
    ConfigurationError when the window does not pad the support by at
    least two sites.
    """
    threshold = birth_threshold(sset)
    x = params.ratio
    if not x > threshold:
        raise InadmissibleSetError(
            f"set {sset.sites} needs nu/f > {threshold}, got nu/f = {x}",
            threshold=threshold,
        )
    if not params.covers(sset):
        raise ConfigurationError(
            f"window {params.window} must pad support {sset.sites} "
            f"by >= {MIN_WINDOW_MARGIN} sites"
        )
    sign_tuple = _normalize_signs(signs, sset.cardinality)
    mu = energy_of_set(sset, params.nu, params.f)
    lo, _ = params.window
    coeff = np.zeros(params.window_size)
    for s, sgn in zip(sset.sites, sign_tuple):
        coeff[s - lo] = sgn * math.sqrt((mu - params.f * s) / params.nu)
    state = StationaryState(params=params, coefficients=coeff, mu=mu,
                            set=sset, signs=sign_tuple)
    assert abs(state.norm_sq() - 1.0) < NORMALIZATION_TOL
    assert np.max(np.abs(zero_hopping_residual(state))) < NORMALIZATION_TOL
    return state


def translate_state(state: StationaryState, j) -> StationaryState:
    """Shift a state j rungs down the ladder: sites l -> l + j, mu -> mu + j f.

    The window stays fixed, so the shifted support (or, after continuation,
    essentially all of the state's mass) must still fit.
    """
    j = _as_int(j, "translation")
    if j == 0:
        return replace(state, coefficients=state.coefficients.copy())
    p = state.params
    new_set = state.set.translated(j) if state.set is not None else None
    if new_set is not None and not p.covers(new_set):
        raise ConfigurationError(
            f"translated support {new_set.sites} escapes window {p.window}"
        )
    coeff = np.zeros_like(state.coefficients)
    if j > 0:
        coeff[j:] = state.coefficients[:-j]
    else:
        coeff[:j] = state.coefficients[-j:]
    lost = abs(float(np.sum(coeff ** 2)) - state.norm_sq())
    if lost > NORMALIZATION_TOL:
        raise ConfigurationError(
            f"translation by {j} pushes {lost:.3g} of the norm out of the window"
        )
    out = StationaryState(params=p, coefficients=coeff,
                          mu=state.mu + j * p.f, set=new_set, signs=state.signs)
    if new_set is not None and p.beta == 0:
        assert np.max(np.abs(zero_hopping_residual(out))) < NORMALIZATION_TOL
    return out


def enumerate_solution_sets(x, max_n: int = 64) -> list[SolutionSet]:
    """All canonical sets admissible at nu/f = x, singleton included.

    Each birth-threshold integer n < x contributes the zero-anchored
    distinct partitions of n, mapped through the (involutive) complementary
    reflection.  Ordered by threshold, then cardinality, then sites; length
    is counting_function(x) + 1.

    max_n caps the threshold integers visited; x beyond max_n + 1 raises
    rather than silently dropping branches.
    """
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"ratio must be finite and positive, got {x}")
    max_n = _as_int(max_n, "max_n")
    if max_n < 1:
        raise DomainError(f"max_n must be >= 1, got {max_n}")
    top = math.ceil(x) - 1
    if top > max_n:
        raise DomainError(
            f"ratio {x} admits birth thresholds up to {top}; raise max_n ({max_n})"
        )
    out: list[SolutionSet] = []
    for n in range(top + 1):
        batch = [
            complementary_set(SolutionSet(part.parts))
            for part in enumerate_distinct_partitions(n)
        ]
        batch.sort(key=lambda s: (s.cardinality, s.sites))
        out.extend(batch)
    return out


def bifurcation_tree(x_min, x_max, samples: int = 1001,
                     max_n: int = 64) -> BifurcationTree:
    """Energy branches mu/f over a uniform nu/f grid with the integer birth
    points inserted exactly.

    Each set admissible anywhere in [x_min, x_max] yields a branch sampled
    strictly above its threshold, where mu/f = x/N + sum(S)/N.
    """
    x_min, x_max = float(x_min), float(x_max)
    if not (math.isfinite(x_min) and math.isfinite(x_max)):
        raise DomainError("grid bounds must be finite")
    if not 0 <= x_min < x_max:
        raise DomainError(f"need 0 <= x_min < x_max, got [{x_min}, {x_max}]")
    samples = _as_int(samples, "samples")
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    base = np.linspace(x_min, x_max, samples)
    integers = np.arange(math.ceil(x_min), math.floor(x_max) + 1, dtype=float)
    grid = np.unique(np.concatenate([base, integers]))
    sets = enumerate_solution_sets(x_max, max_n=max_n)
    branches = []
    for sset in sets:
        birth = birth_threshold(sset)
        xs = grid[grid > birth]
        n = sset.cardinality
        mu_over_f = xs / n + sum(sset.sites) / n
        branches.append(Branch(set=sset, birth=birth, xs=xs, mu_over_f=mu_over_f))
    return BifurcationTree(branches=branches, x_grid=grid)
