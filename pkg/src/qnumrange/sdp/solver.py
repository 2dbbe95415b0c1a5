"""Short-step primal path-following for span-form SDPs.

Minimizes ``c.s - mu log det X(s)`` along the central path.  After an initial
damped-Newton centering, each iteration shrinks ``mu`` by ``1 - 1/(8 sqrt(nu))``
(``nu`` = matrix order) and takes one Newton step.  The dual matrix is the Newton
estimate ``mu X^{-1} - mu X^{-1} dX X^{-1}``, which meets the dual equality
constraints exactly and is PSD whenever the Newton decrement is below one; a
Euclidean least-squares correction removes round-off before the gap is reported.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..spectral import extreme_eigs
from .problem import (
    InfeasibleStartError,
    IterationLimitError,
    SdpProblem,
    SdpSolution,
    SingularSystemError,
)

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-7
CENTERING_DECREMENT = 0.25


class _Workspace:
    """Per-solve scratch: flattened constraint matrices and the current Cholesky data."""

    def __init__(self, problem: SdpProblem):
        self.p = problem
        self.N = problem.order
        self.k = problem.k

    def newton(self, s: np.ndarray, mu: float):
        x = self.p.matrix(s)
        try:
            chol = np.linalg.cholesky(x)
        except np.linalg.LinAlgError:
            raise SingularSystemError("primal matrix lost positive definiteness") from None
        linv = np.linalg.solve(chol, np.eye(self.N))
        b = linv @ self.p.Xs @ linv.T  # (k, N, N)
        bf = b.reshape(self.k, -1)
        g = np.einsum("kii->k", b)
        h = bf @ bf.T
        grad = self.p.c / mu - g
        ds = -_spd_solve(h, grad)
        decrement = math.sqrt(max(float(-grad @ ds), 0.0))
        return ds, decrement, linv

    def is_pd(self, s: np.ndarray) -> bool:
        try:
            np.linalg.cholesky(self.p.matrix(s))
            return True
        except np.linalg.LinAlgError:
            return False


def _spd_solve(h: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``h x = rhs`` for the Newton Hessian, Jacobi-scaled first.

    Close to the optimum the Hessian is badly scaled; when Cholesky still fails the
    system is solved on the numerically nonzero eigenspace.
    """
    d = np.sqrt(np.diag(h))
    if not np.all(d > 0):
        raise SingularSystemError("Newton system is singular")
    hs = h / d[:, None] / d[None, :]
    rs = rhs / d
    try:
        hc = np.linalg.cholesky(hs)
        y = np.linalg.solve(hc.T, np.linalg.solve(hc, rs))
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(hs)
        keep = w > 1e-14 * w[-1]
        if not np.any(keep):
            raise SingularSystemError("Newton system is singular") from None
        y = v[:, keep] @ ((v[:, keep].T @ rs) / w[keep])
    return y / d


def _initial_mu(ws: _Workspace, s: np.ndarray) -> float:
    x = ws.p.matrix(s)
    xinv = np.linalg.inv(x)
    g = np.einsum("ab,kba->k", xinv, ws.p.Xs)
    gg = float(g @ g)
    if gg > 0:
        mu = float(ws.p.c @ g) / gg
        if mu > 0:
            return mu
    return max(float(np.linalg.norm(ws.p.c)), 1.0)


def _dual_certificate(ws: _Workspace, s: np.ndarray, mu: float):
    ds, dec, linv = ws.newton(s, mu)
    xinv = linv.T @ linv
    dx = np.tensordot(ds, ws.p.Xs, axes=1)
    z = mu * (xinv - xinv @ dx @ xinv)
    z = 0.5 * (z + z.T)
    # least-squares cleanup of <X_i, Z> = c_i
    r = ws.p.c - np.einsum("kab,ab->k", ws.p.Xs, z)
    gram = ws.p.gram()
    alpha = np.linalg.solve(gram, r)
    z = z + np.tensordot(alpha, ws.p.Xs, axes=1)
    resid = ws.p.c - np.einsum("kab,ab->k", ws.p.Xs, z)
    return z, float(np.max(np.abs(resid), initial=0.0)), dec


def solve(
    problem: SdpProblem,
    start,
    eps: float = DEFAULT_EPS,
    max_iter: int | None = None,
    safety: float = 5.0,
) -> SdpSolution:
    """Minimize ``c.s`` over ``X0 + sum s_i X_i >= 0`` from a strictly feasible ``start``."""
    ws = _Workspace(problem)
    s = np.array(start, dtype=float).reshape(-1)
    if s.shape[0] != problem.k:
        raise ValueError(f"start has {s.shape[0]} entries, problem has {problem.k} variables")
    x0 = problem.matrix(s)
    lam_min, _ = extreme_eigs(x0)
    if lam_min < 1e-8 * (1.0 + np.linalg.norm(x0)):
        raise InfeasibleStartError(f"start is not strictly feasible (lambda_min = {lam_min:.3e})")

    nu = float(ws.N)
    mu = _initial_mu(ws, s)
    iters = 0

    # centering at the initial mu (damped Newton)
    for _ in range(200):
        ds, dec, _ = ws.newton(s, mu)
        if dec <= CENTERING_DECREMENT:
            break
        s = s + ds / (1.0 + dec)
        iters += 1

    if max_iter is None:
        init_gap = max(mu * nu, eps)
        max_iter = int(10 * math.sqrt(nu) * max(math.log(init_gap / eps), 1.0) * safety) + iters + 50
    shrink = 1.0 - 1.0 / (8.0 * math.sqrt(nu))

    while True:
        if mu * nu <= 0.5 * eps:
            z, resid, dec = _dual_certificate(ws, s, mu)
            if dec < 1.0:
                dual_value = -float(np.sum(problem.X0 * z))
                value = problem.objective(s)
                gap = value - dual_value
                if gap <= eps:
                    break
        if iters >= max_iter:
            raise IterationLimitError(f"no eps-certificate after {iters} iterations (mu = {mu:.3e})")
        mu *= shrink
        ds, dec, _ = ws.newton(s, mu)
        step = 1.0
        while not ws.is_pd(s + step * ds):
            step *= 0.5
            if step < 1e-12:
                raise SingularSystemError("could not stay interior")
        s = s + step * ds
        iters += 1

    xs = problem.matrix(s)
    plam, _ = extreme_eigs(xs)
    dlam, _ = extreme_eigs(z)
    log.debug("solve: %d iterations, gap %.3e", iters, gap)
    return SdpSolution(
        s_star=s,
        value=value,
        dual_matrix=z,
        dual_value=dual_value,
        gap=gap,
        iterations=iters,
        primal_lambda_min=plam,
        dual_lambda_min=dlam,
        dual_residual=resid,
        mu=mu,
    )
