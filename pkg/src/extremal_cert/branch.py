"""Radial shooting and continuation for Δ²u = λ e^u, u = u' = 0 at r = 1.

Floating-point evidence only; nothing here is validated.  The radial ODE is
integrated as the pair u'' + (N-1)/r u' = v, v'' + (N-1)/r v' = λ e^u, started
at r = eps from the regular series u = u0 + c2 r^2 + c4 r^4 with
c2 = u''(0)/2 and c4 = λ e^{u0} / (8N(N+2)).  Sensitivities with respect to
(λ, u0, u''(0)) are integrated alongside, so every Newton step uses an exact
Jacobian of the boundary defect.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

log = logging.getLogger(__name__)

EPS = 1e-6
RTOL = 1e-10
ATOL = 1e-13
U_BLOWUP = 600.0


class Divergence(RuntimeError):
    """The trajectory blew up before reaching r = 1."""


class NoConvergence(RuntimeError):
    """Newton iteration failed; ``diagnostics`` records the iterates."""

    def __init__(self, message: str, diagnostics: Optional[list] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class RadialState:
    r: float
    u: float
    u1: float
    u2: float
    u3: float


@dataclass(frozen=True)
class BranchPoint:
    lam: float
    u0: float
    u2_0: float
    sup_norm: float
    residual: float


@dataclass
class Trajectory:
    """Result of one integration; ``jac`` is d(u(1), u'(1)) / d(λ, u0, u2_0)."""

    N: int
    lam: float
    u0: float
    u2_0: float
    end: RadialState
    jac: Optional[np.ndarray] = None
    sol: object = None

    @property
    def defect(self) -> np.ndarray:
        return np.array([self.end.u, self.end.u1])

    def profile(self, r: Sequence[float]) -> np.ndarray:
        """u on the given radii (needs ``dense=True`` at integration time)."""
        if self.sol is None:
            raise ValueError("integrate with dense=True to sample the profile")
        r = np.asarray(r, dtype=float)
        c2 = self.u2_0 / 2
        c4 = self.lam * math.exp(self.u0) / (8 * self.N * (self.N + 2))
        inner = self.u0 + c2 * r**2 + c4 * r**4
        outer = self.sol(np.clip(r, EPS, 1.0))[0]
        return np.where(r < EPS, inner, outer)


def _initial(N: int, lam: float, u0: float, u2_0: float, eps: float) -> np.ndarray:
    e0 = math.exp(u0)
    k = 8 * N * (N + 2)
    c2, c4 = u2_0 / 2, lam * e0 / k
    y = np.zeros(16)
    y[:4] = [
        u0 + c2 * eps**2 + c4 * eps**4,
        2 * c2 * eps + 4 * c4 * eps**3,
        2 * N * c2 + 4 * (N + 2) * c4 * eps**2,
        8 * (N + 2) * c4 * eps,
    ]
    # d(c2, c4) / d(λ, u0, u2_0)
    dc2 = (0.0, 0.0, 0.5)
    dc4 = (e0 / k, c4, 0.0)
    for j in range(3):
        base = 4 + 4 * j
        y[base : base + 4] = [
            dc2[j] * eps**2 + dc4[j] * eps**4 + (1.0 if j == 1 else 0.0),
            2 * dc2[j] * eps + 4 * dc4[j] * eps**3,
            2 * N * dc2[j] + 4 * (N + 2) * dc4[j] * eps**2,
            8 * (N + 2) * dc4[j] * eps,
        ]
    return y


def _rhs(r: float, y: np.ndarray, N: int, lam: float) -> np.ndarray:
    out = np.empty_like(y)
    a = (N - 1) / r
    eu = math.exp(min(y[0], 700.0))
    out[0] = y[1]
    out[1] = y[2] - a * y[1]
    out[2] = y[3]
    out[3] = lam * eu - a * y[3]
    for j in range(3):
        b = 4 + 4 * j
        out[b] = y[b + 1]
        out[b + 1] = y[b + 2] - a * y[b + 1]
        out[b + 2] = y[b + 3]
        out[b + 3] = lam * eu * y[b] - a * y[b + 3] + (eu if j == 0 else 0.0)
    return out


def _blowup(r, y, N, lam):
    return U_BLOWUP - abs(y[0])


_blowup.terminal = True


def integrate(
    N: int,
    lam: float,
    u0: float,
    u2_0: float,
    rtol: float = RTOL,
    eps: float = EPS,
    dense: bool = False,
) -> Trajectory:
    """Integrate the radial problem from the series start at ``eps`` to r = 1.

    Raises :class:`Divergence` if |u| exceeds a blow-up threshold or the step
    size underflows before r = 1.
    """
    y0 = _initial(N, lam, u0, u2_0, eps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sol = solve_ivp(
            _rhs, (eps, 1.0), y0, method="DOP853", rtol=rtol, atol=ATOL * max(1.0, abs(u0)),
            args=(N, lam), events=_blowup, dense_output=dense,
        )
    if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
        raise Divergence(f"N={N}, λ={lam}, u0={u0}, u''(0)={u2_0}: {sol.message} at r={sol.t[-1]:.3g}")
    y = sol.y[:, -1]
    r = 1.0
    u2 = y[2] - (N - 1) * y[1]
    u3 = y[3] - (N - 1) * (u2 - y[1])
    jac = np.array([[y[4 + 4 * j] for j in range(3)], [y[5 + 4 * j] for j in range(3)]])
    return Trajectory(N, lam, u0, u2_0, RadialState(r, y[0], y[1], u2, u3), jac, sol.sol if dense else None)


def _sup_norm(traj: Trajectory, samples: int = 257) -> float:
    r = np.linspace(0.0, 1.0, samples)
    return float(np.max(np.abs(traj.profile(r))))


def _point(traj: Trajectory) -> BranchPoint:
    return BranchPoint(
        lam=traj.lam,
        u0=traj.u0,
        u2_0=traj.u2_0,
        sup_norm=_sup_norm(traj) if traj.sol is not None else abs(traj.u0),
        residual=float(np.max(np.abs(traj.defect))),
    )


def shoot(
    N: int,
    lam: float,
    guess: Optional[tuple[float, float]] = None,
    rtol: float = RTOL,
    tol: float = 1e-8,
    max_iter: int = 30,
) -> BranchPoint:
    """Minimal solution at λ by Newton on (u0, u''(0)).

    Without a guess, the branch is followed from the trivial solution in λ
    steps, starting each Newton solve from the previous one.
    """
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0:
        return BranchPoint(0.0, 0.0, 0.0, 0.0, 0.0)
    if guess is not None:
        return _newton_fixed_lambda(N, lam, guess, rtol, tol, max_iter)
    k = 8 * N * (N + 2)
    # Δ²(λ(1-r²)²/k) = λ: the linearization's solution
    lin = (lam / k, -4 * lam / k)
    try:
        return _newton_fixed_lambda(N, lam, lin, rtol, tol, max_iter)
    except (NoConvergence, Divergence):
        pass
    steps = 8
    while steps <= 1024:
        try:
            cur = (0.0, 0.0)
            point = None
            for i in range(1, steps + 1):
                point = _newton_fixed_lambda(N, lam * i / steps, cur, rtol, tol, max_iter)
                cur = (point.u0, point.u2_0)
            assert point is not None
            return point
        except (NoConvergence, Divergence):
            steps *= 2
    raise NoConvergence(f"N={N}: no solution found at λ={lam} (beyond the fold?)")


def _newton_fixed_lambda(N, lam, guess, rtol, tol, max_iter) -> BranchPoint:
    u0, u2 = guess
    history = []
    for _ in range(max_iter):
        traj = integrate(N, lam, u0, u2, rtol=rtol)
        F = traj.defect
        history.append((u0, u2, float(np.max(np.abs(F)))))
        if np.max(np.abs(F)) <= tol:
            return _point(integrate(N, lam, u0, u2, rtol=rtol, dense=True))
        J = traj.jac[:, 1:]
        try:
            du = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular Jacobian", history) from exc
        scale = min(1.0, 2.0 / max(1e-300, float(np.max(np.abs(du)))))
        u0, u2 = u0 + scale * du[0], u2 + scale * du[1]
    raise NoConvergence(f"N={N}, λ={lam}: Newton did not converge", history)


def solve_at_u0(
    N: int, u0: float, guess: tuple[float, float], rtol: float = RTOL, tol: float = 1e-10, max_iter: int = 30
) -> BranchPoint:
    """Branch point with prescribed center value: unknowns (λ, u''(0))."""
    lam, u2 = guess
    history = []
    for _ in range(max_iter):
        traj = integrate(N, lam, u0, u2, rtol=rtol)
        F = traj.defect
        history.append((lam, u2, float(np.max(np.abs(F)))))
        if np.max(np.abs(F)) <= tol:
            return _point(integrate(N, lam, u0, u2, rtol=rtol, dense=True))
        J = traj.jac[:, [0, 2]]
        d = np.linalg.solve(J, -F)
        lam, u2 = lam + d[0], u2 + d[1]
    raise NoConvergence(f"N={N}, u0={u0}: Newton did not converge", history)


# ---------------------------------------------------------------------------
# continuation

@dataclass
class BranchResult:
    N: int
    points: list[BranchPoint]
    lambda_star: float
    lambda_max: float
    fold_kind: str  # "turning-point" or "asymptotic"
    fold_point: Optional[BranchPoint]
    converged: bool
    settings: dict = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)

    @property
    def sup_at_center(self) -> bool:
        """max|u| is attained at r = 0 for every computed point (checked on the sample grid)."""
        return all(abs(p.sup_norm - abs(p.u0)) <= 1e-9 * (1 + abs(p.u0)) for p in self.points)

    def summary(self) -> dict:
        return {
            "N": self.N,
            "lambda_star": self.lambda_star,
            "lambda_max": self.lambda_max,
            "fold_kind": self.fold_kind,
            "fold_point": None if self.fold_point is None else asdict(self.fold_point),
            "converged": self.converged,
            "n_points": len(self.points),
            "sup_at_center": self.sup_at_center,
            "settings": self.settings,
            "messages": self.messages,
            "assumption": "minimality: branch followed by continuation from u = 0 at λ = 0",
        }


CSV_COLUMNS = ("lambda", "u0", "u2_0", "sup_norm", "residual")


def write_csv(points: Iterable[BranchPoint], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for p in points:
            w.writerow([repr(p.lam), repr(p.u0), repr(p.u2_0), repr(p.sup_norm), repr(p.residual)])


def write_summary(result: BranchResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")


class _Continuer:
    """Pseudo-arclength continuation in x = (λ, u0, a), a = u''(0) e^{-u0/2}.

    By the scaling u(r) -> u(sr) + 4 ln s, u''(0) grows like e^{u0/2} along
    the branch while a tends to a constant, which keeps predictors accurate.
    """

    def __init__(self, N: int, rtol: float, tol: float):
        self.N, self.rtol, self.tol = N, rtol, tol
        self.lam_scale = 8.0 * N * (N + 2)
        self.w = np.array([1.0 / self.lam_scale, 1.0, 0.0])

    @staticmethod
    def physical(x: np.ndarray) -> tuple[float, float, float]:
        return float(x[0]), float(x[1]), float(x[2] * math.exp(x[1] / 2))

    def run(self, x: np.ndarray, dense: bool = False) -> tuple[Trajectory, np.ndarray]:
        lam, u0, u2 = self.physical(x)
        traj = integrate(self.N, lam, u0, u2, rtol=self.rtol, dense=dense)
        g = math.exp(x[1] / 2)
        J = traj.jac
        jac = np.column_stack([J[:, 0], J[:, 1] + J[:, 2] * u2 / 2, J[:, 2] * g])
        return traj, jac

    def tangent(self, jac: np.ndarray, prev: Optional[np.ndarray]) -> np.ndarray:
        t = np.cross(jac[0], jac[1])
        t = t / math.sqrt(float(np.sum((self.w * t) ** 2)))
        if prev is not None and float(np.dot(self.w * t, self.w * prev)) < 0:
            t = -t
        return t

    def correct(self, x: np.ndarray, t: np.ndarray, h: float, max_iter: int = 10):
        """Newton on [F = 0, <t, y - x>_w = h]; returns (y, trajectory, jac) or None."""
        w2t = self.w * self.w * t
        y = x + h * t
        for _ in range(max_iter):
            try:
                traj, jac = self.run(y, dense=True)
            except Divergence:
                return None
            F = traj.defect
            g = float(np.dot(w2t, y - x)) - h
            if np.max(np.abs(F)) <= self.tol and abs(g) <= 1e-10 * max(1.0, abs(h)):
                return y, traj, jac
            try:
                dy = np.linalg.solve(np.vstack([jac, w2t]), -np.append(F, g))
            except np.linalg.LinAlgError:
                return None
            y = y + dy
            if not np.all(np.isfinite(y)):
                return None
        return None


def continue_branch(
    N: int,
    h0: float = 0.1,
    h_max: float = 0.75,
    h_min: float = 1e-7,
    u0_max: float = 12.0,
    max_steps: int = 400,
    rtol: float = RTOL,
    tol: float = 1e-9,
    fold_rtol: float = 1e-4,
) -> BranchResult:
    """Follow the minimal branch from (λ, u) = (0, 0) and estimate λ*.

    A turning point (sign change of dλ/ds) is located by bisection in the
    arclength step until λ is known to relative ``fold_rtol``; continuation
    stops shortly after it.  If λ keeps increasing up to ``u0_max`` the branch
    approaches λ* asymptotically, and λ* is estimated by Aitken extrapolation
    of λ sampled at equally spaced center values.
    """
    c = _Continuer(N, rtol, tol)
    x = np.zeros(3)
    _, jac = c.run(x)
    t = c.tangent(jac, None)
    if t[0] < 0:
        t = -t
    points = [BranchPoint(0.0, 0.0, 0.0, 0.0, 0.0)]
    h = h0
    fold: Optional[BranchPoint] = None
    messages: list[str] = []
    converged = True
    for _ in range(max_steps):
        out = c.correct(x, t, h)
        if out is None:
            h /= 2
            if h < h_min:
                messages.append(f"continuation stalled at λ={x[0]:.6g}, u0={x[1]:.6g}")
                converged = False
                break
            continue
        y, traj, jac = out
        t_new = c.tangent(jac, t)
        if t_new[0] < 0 <= t[0] and fold is None:
            fold = _refine_fold(c, x, t, h, fold_rtol)
            messages.append(f"turning point at λ={fold.lam:.8g}")
        x, t = y, t_new
        points.append(_point(traj))
        if fold is not None and x[0] < fold.lam * (1 - 0.05):
            break
        if x[1] >= u0_max:
            break
        h = min(h * 1.5, h_max)
    else:
        messages.append("step budget exhausted")
        converged = False

    lam_max = max(p.lam for p in points)
    if fold is not None:
        lam_star = max(fold.lam, lam_max)
        kind = "turning-point"
    else:
        kind = "asymptotic"
        lam_star, extra, ok = _extrapolate(c, points)
        if not ok:
            messages.append("tail extrapolation not geometric; λ* reported as max λ on the branch")
            converged = converged and False
        lam_star = max(lam_star, lam_max)
        fold = max(points + extra, key=lambda p: p.lam)
    return BranchResult(
        N=N,
        points=points,
        lambda_star=lam_star,
        lambda_max=lam_max,
        fold_kind=kind,
        fold_point=fold,
        converged=converged,
        settings={"rtol": rtol, "eps": EPS, "u0_max": u0_max, "h_max": h_max, "fold_rtol": fold_rtol},
        messages=messages,
    )


def _refine_fold(c: _Continuer, x: np.ndarray, t: np.ndarray, h: float, fold_rtol: float) -> BranchPoint:
    """Bisect the arclength step on the sign of dλ/ds until λ is pinned to fold_rtol."""
    lo, hi = 0.0, h
    lam_lo, lam_hi = float(x[0]), None
    best = (float(x[0]), None)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        out = c.correct(x, t, mid)
        if out is None:
            break
        y, traj, jac = out
        if best[1] is None or y[0] > best[0]:
            best = (float(y[0]), traj)
        if c.tangent(jac, t)[0] >= 0:
            lo, lam_lo = mid, float(y[0])
        else:
            hi, lam_hi = mid, float(y[0])
        # λ is stationary at the fold, so bracket values converge quadratically
        if lam_hi is not None and abs(best[0] - min(lam_lo, lam_hi)) <= fold_rtol * abs(best[0]):
            break
    if best[1] is None:
        lam, u0, u2 = c.physical(x)
        return _point(integrate(c.N, lam, u0, u2, rtol=c.rtol, dense=True))
    return _point(best[1])


def _extrapolate(c: _Continuer, points: list[BranchPoint], spacing: float = 2.0) -> tuple[float, list[BranchPoint], bool]:
    """Aitken estimate of lim λ from branch points at u0_top - 2s, u0_top - s, u0_top."""
    u = np.array([p.u0 for p in points])
    lam = np.array([p.lam for p in points])
    a = np.array([p.u2_0 * math.exp(-p.u0 / 2) for p in points])
    u_top = points[-1].u0
    samples = []
    for k in (2, 1, 0):
        u0 = u_top - k * spacing
        if k == 0:
            samples.append(points[-1])
            continue
        guess = (float(np.interp(u0, u, lam)), float(np.interp(u0, u, a)) * math.exp(u0 / 2))
        try:
            samples.append(solve_at_u0(c.N, u0, guess, rtol=c.rtol))
        except (NoConvergence, Divergence, np.linalg.LinAlgError):
            return float(lam.max()), [], False
    l1, l2, l3 = (p.lam for p in samples)
    d1, d2 = l2 - l1, l3 - l2
    if d1 <= 0 or d2 <= 0 or d2 >= d1:
        return max(l1, l2, l3), samples, False
    return l3 + d2 * d2 / (d1 - d2), samples, True


def monotone_in_lambda(N: int, points: Sequence[BranchPoint], radii: Sequence[float], rtol: float = RTOL) -> bool:
    """u_λ(r) nondecreasing in λ at every radius, over the rising part of the branch."""
    rising = []
    for p in points:
        if rising and p.lam <= rising[-1].lam:
            break
        rising.append(p)
    prev = None
    for p in rising:
        prof = integrate(N, p.lam, p.u0, p.u2_0, rtol=rtol, dense=True).profile(radii)
        if prev is not None and np.any(prof < prev - 1e-9 * (1 + np.abs(prev))):
            return False
        prev = prof
    return True
