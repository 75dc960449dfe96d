"""Finite-difference spectra of ``-d/dx (1/M) d/dx + V`` on a Dirichlet box.

The operator is discretized in flux form: ``1/M`` is sampled at cell midpoints
so the matrix is symmetric tridiagonal with negative off-diagonal.  Eigenvalues
come from Sturm-sequence counts and bisection, eigenvectors from inverse
iteration.  A three-grid ladder (h, ~2h, ~4h) estimates the observed order of
convergence and a Richardson-extrapolated value for every eigenvalue.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    BoxTooLarge,
    Inconclusive,
    NonConvergence,
    NonFiniteSample,
    NonPositiveMass,
    UnconvergedInput,
)

DEFAULT_BOX = (-12.0, 12.0)
DEFAULT_N = 8000
GRID_ENV = "PDM_ISOSPEC_GRID_N"
BISECTION_RTOL = 1e-10
ORDER_WINDOW = (1.5, 2.5)
NOISE_FLOOR = 1e-9


def default_grid_n() -> int:
    raw = os.environ.get(GRID_ENV)
    if raw is None:
        return DEFAULT_N
    n = int(raw)
    if n < 3:
        raise ValueError(f"{GRID_ENV} must be at least 3")
    return n


def _sample(f, x):
    """Plain values of a callable or a jet field."""
    try:
        out = f(x)
    except TypeError:
        out = f(x, 0)
    if hasattr(out, "value"):
        out = out.value
    out = np.asarray(out)
    if np.iscomplexobj(out):
        if np.any(np.abs(out.imag) > 1e-10 * np.maximum(1.0, np.abs(out))):
            raise NonFiniteSample("sampled function is not real")
        out = out.real
    return np.broadcast_to(out, np.shape(x)).astype(float)


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be below x_max")
        if self.n < 1:
            raise ValueError("need at least one interior point")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n + 1)

    @property
    def midpoints(self) -> np.ndarray:
        return self.x_min + self.h * (np.arange(self.n + 1) + 0.5)


@dataclass(frozen=True)
class DiscretizedHamiltonian:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def gershgorin(self) -> tuple[float, float]:
        rad = np.zeros_like(self.diag)
        rad[:-1] += np.abs(self.offdiag)
        rad[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - rad)), float(np.max(self.diag + rad))


def discretize(mass, potential, grid: Grid) -> DiscretizedHamiltonian:
    m_mid = _sample(mass, grid.midpoints)
    if np.any(np.isnan(m_mid)) or np.any(m_mid < 0):
        raise NonPositiveMass("mass must be positive on the box")
    if np.any(m_mid == 0) or np.any(~np.isfinite(1.0 / m_mid)):
        raise BoxTooLarge("1/M overflows on this box; shrink it")
    v = _sample(potential, grid.x)
    if not np.all(np.isfinite(v)):
        raise NonFiniteSample("potential is not finite on the grid")
    flux = 1.0 / m_mid / grid.h**2
    diag = flux[:-1] + flux[1:] + v
    off = -flux[1:-1]
    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
        raise BoxTooLarge("matrix entries overflow on this box")
    return DiscretizedHamiltonian(diag, off, grid)


# --- Sturm counts and bisection ------------------------------------------------


def sturm_count(H: DiscretizedHamiltonian, lam: float) -> int:
    """Number of eigenvalues strictly below ``lam``."""
    diag = H.diag.tolist()
    off2 = (H.offdiag**2).tolist()
    tiny = 1e-300
    count = 0
    d = diag[0] - lam
    if d < 0:
        count += 1
    for i in range(1, len(diag)):
        if d == 0.0:
            d = tiny
        d = diag[i] - lam - off2[i - 1] / d
        if d < 0:
            count += 1
    return count


def _bisect_index(H, j, lo, hi, rtol):
    """Eigenvalue number ``j`` (0-based) inside ``[lo, hi]``."""
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(1.0, abs(mid)) or mid in (lo, hi):
            return mid
        if sturm_count(H, mid) > j:
            hi = mid
        else:
            lo = mid
    raise NonConvergence("bisection did not converge")


def eigenvalues_lowest(H: DiscretizedHamiltonian, k: int, rtol: float = BISECTION_RTOL) -> np.ndarray:
    n = H.diag.size
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    g_lo, g_hi = H.gershgorin()
    out = []
    lo = g_lo
    for j in range(k):
        # count(lo) <= j always holds; double a step until eigenvalue j is bracketed
        step = max(1.0, abs(lo)) * 1e-3
        hi = lo + step
        while sturm_count(H, hi) <= j:
            lo = hi
            step *= 2.0
            hi = lo + step
            if hi > g_hi:
                hi = g_hi + max(1.0, abs(g_hi)) * 1e-12
                break
        val = _bisect_index(H, j, lo, hi, rtol)
        out.append(val)
        lo = val
    return np.array(out)


def eigenvector(H: DiscretizedHamiltonian, lam: float, *, maxiter: int = 50, tol: float = 1e-12):
    """Inverse iteration; L2(dx)-normalized, first significant entry positive."""
    n = H.diag.size
    shift = lam + 1e-10 * max(1.0, abs(lam))
    ab = np.zeros((3, n))
    ab[0, 1:] = H.offdiag
    ab[1] = H.diag - shift
    ab[2, :-1] = H.offdiag
    y = np.ones(n) / math.sqrt(n)
    for _ in range(maxiter):
        z = solve_banded((1, 1), ab, y, check_finite=False)
        z /= np.linalg.norm(z)
        j = int(np.argmax(np.abs(z)))
        if z[j] * y[j] < 0:
            z = -z
        if np.linalg.norm(z - y) < tol * math.sqrt(n) or np.linalg.norm(z + y) < tol * math.sqrt(n):
            y = z
            break
        y = z
    else:
        raise NonConvergence(f"inverse iteration for eigenvalue {lam} did not converge")
    y = y / math.sqrt(H.grid.h * np.sum(y * y))
    first = np.flatnonzero(np.abs(y) > 1e-3 * np.max(np.abs(y)))[0]
    return y if y[first] > 0 else -y


# --- node counting and quadrature ------------------------------------------------


@dataclass
class NodeCount:
    count: int
    nodes: list[float]
    suspicious: list[tuple[float, float]] = field(default_factory=list)


def _bisect_root(func, lo, hi, f_lo, xtol):
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = float(np.real(func(mid)))
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def count_nodes(samples, x=None, *, func=None, xtol: float = 1e-10) -> NodeCount:
    """Strict sign changes of sampled data, refined by bisection when ``func`` is given.

    A sample much smaller than both neighbours without a sign change is a
    possible double crossing; with ``func`` the interval is resampled, without
    it the interval is reported as suspicious.
    """
    f = np.real(np.asarray(samples, dtype=complex if np.iscomplexobj(samples) else float))
    if x is None:
        x = np.arange(f.size, dtype=float)
    x = np.asarray(x, dtype=float)
    nz = np.flatnonzero(f != 0)
    nodes, suspicious = [], []
    for i0, i1 in zip(nz[:-1], nz[1:]):
        if (f[i0] > 0) != (f[i1] > 0):
            if func is not None and i1 == i0 + 1:
                nodes.append(_bisect_root(func, x[i0], x[i1], f[i0], xtol))
            else:
                nodes.append(0.5 * (x[i0] + x[i1]) if i1 == i0 + 1 else float(x[(i0 + i1) // 2]))
    for i in range(1, f.size - 1):
        if f[i] == 0 or np.sign(f[i - 1]) != np.sign(f[i + 1]):
            continue
        if abs(f[i]) < 1e-13 * min(abs(f[i - 1]), abs(f[i + 1])):
            if func is None:
                suspicious.append((float(x[i - 1]), float(x[i + 1])))
                continue
            xs = np.linspace(x[i - 1], x[i + 1], 41)
            sub = count_nodes(_sample(func, xs), xs, func=func, xtol=xtol)
            nodes.extend(sub.nodes)
    nodes.sort()
    return NodeCount(len(nodes), nodes, suspicious)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


def quad(f, x_min: float, x_max: float, n: int | None = None) -> QuadResult:
    """Composite Simpson with a Richardson correction from the half-resolution rule."""
    if n is None:
        n = max(64, int(200 * (x_max - x_min)))
    n += n % 4
    x = np.linspace(x_min, x_max, n + 1)
    y = _sample(f, x) if callable(f) else np.asarray(f, dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFiniteSample("integrand is not finite")

    def simpson(vals, h):
        return h / 3 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum())

    h = (x_max - x_min) / n
    fine = simpson(y, h)
    coarse = simpson(y[::2], 2 * h)
    return QuadResult(fine + (fine - coarse) / 15, abs(fine - coarse) / 15)


class Normalizability(enum.Enum):
    NORMALIZABLE = "normalizable"
    DIVERGENT = "divergent"


def normalizability(f, lengths=(10.0, 20.0, 40.0), rtol: float = 1e-6, growth: float = 10.0):
    """Decide square-integrability of ``f`` on the line from widening windows."""

    def sq(x):
        v = np.asarray(_sample_any(f, x))
        return np.abs(v) ** 2

    vals = [quad(sq, -L, L).value for L in lengths]
    # L-doubling: the verdict rests on the last doubling step
    if abs(vals[-1] - vals[-2]) <= rtol * abs(vals[-1]):
        return Normalizability.NORMALIZABLE, vals
    if vals[-1] > growth * vals[-2]:
        return Normalizability.DIVERGENT, vals
    raise Inconclusive(f"window integrals {vals} neither settle nor blow up")


def _sample_any(f, x):
    try:
        out = f(x)
    except TypeError:
        out = f(x, 0)
    return out.value if hasattr(out, "value") else out


# --- converged spectra ------------------------------------------------------------


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    grids: list = field(default_factory=list)
    history: list = field(default_factory=list)
    observed_order: np.ndarray | None = None
    richardson: np.ndarray | None = None
    converged: bool = False
    source: str = "numerical"

    @classmethod
    def analytic(cls, values) -> "Spectrum":
        return cls(np.asarray(values, dtype=float), converged=True, source="analytic")

    def to_dict(self) -> dict:
        out = {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "converged": self.converged,
            "source": self.source,
        }
        if self.grids:
            out["grids"] = [{"x_min": g.x_min, "x_max": g.x_max, "n": g.n} for g in self.grids]
        if self.history:
            out["history"] = [[float(v) for v in row] for row in self.history]
        if self.observed_order is not None:
            out["observed_order"] = [float(v) for v in self.observed_order]
        if self.richardson is not None:
            out["richardson"] = [float(v) for v in self.richardson]
        return out


def ladder(n: int) -> list[int]:
    return [n, (n + 1) // 2 - 1, (n + 1) // 4 - 1]


def converged_spectrum(
    mass, potential, k: int, *, box=DEFAULT_BOX, n: int | None = None, vectors: bool = False
) -> Spectrum:
    """Lowest ``k`` eigenvalues on the finest grid plus refinement diagnostics."""
    n = default_grid_n() if n is None else n
    grids = [Grid(box[0], box[1], m) for m in ladder(n) if m >= max(3, k)]
    history = []
    finest = None
    for g in grids:
        H = discretize(mass, potential, g)
        history.append(eigenvalues_lowest(H, k))
        if finest is None:
            finest = H
    vals = history[0]
    spec = Spectrum(vals, grids=grids, history=history)
    if len(history) == 3:
        r = grids[1].h / grids[0].h
        d12 = history[0] - history[1]
        d23 = history[1] - history[2]
        scale = np.maximum(1.0, np.abs(vals))
        with np.errstate(divide="ignore", invalid="ignore"):
            order = np.log(np.abs(d23) / np.abs(d12)) / math.log(r)
        at_floor = np.abs(d12) <= NOISE_FLOOR * scale
        ok = at_floor | ((order >= ORDER_WINDOW[0]) & (order <= ORDER_WINDOW[1]))
        spec.observed_order = order
        spec.richardson = vals + d12 / (r**2 - 1)
        spec.converged = bool(np.all(ok))
    if vectors:
        spec.eigenvectors = np.array([eigenvector(finest, lam) for lam in vals])
    return spec


# --- spectral laws ------------------------------------------------------------------


class Law(enum.Enum):
    EQUAL = "Equal"
    SHIFT_BY_ONE = "ShiftByOne"
    SHIFT_BY_TWO = "ShiftByTwo"
    INSERT_ONE = "InsertOne"
    INSERT_TWO = "InsertTwo"


def expected_partner(spec_a, law: Law, inserted=()) -> np.ndarray:
    vals = np.asarray(spec_a, dtype=float)
    if law is Law.EQUAL:
        return vals
    if law is Law.SHIFT_BY_ONE:
        return vals[1:]
    if law is Law.SHIFT_BY_TWO:
        return vals[2:]
    need = 1 if law is Law.INSERT_ONE else 2
    if len(inserted) != need:
        raise ValueError(f"{law.value} needs {need} inserted value(s)")
    return np.sort(np.concatenate([vals, np.real(np.asarray(inserted, dtype=complex))]))


def verify_isospectral(spec_a: Spectrum, spec_b: Spectrum, law: Law, tol: float = 1e-3, inserted=()):
    """Compare ``spec_b`` with the law applied to ``spec_a``, relative to ``max(1, |E|)``."""
    from .report import VerificationReport

    for label, spec in (("reference", spec_a), ("partner", spec_b)):
        if not spec.converged:
            raise UnconvergedInput(f"{label} spectrum failed the refinement check")
    expected = expected_partner(spec_a.eigenvalues, law, inserted)
    got = np.asarray(spec_b.eigenvalues, dtype=float)
    k = min(len(expected), len(got))
    if k == 0:
        raise ValueError("nothing to compare")
    report = VerificationReport(f"spectral law {law.value}")
    for i in range(k):
        dev = abs(got[i] - expected[i]) / max(1.0, abs(expected[i]))
        report.add(f"E[{i}]", dev, tol, expected=float(expected[i]), observed=float(got[i]))
    return report
