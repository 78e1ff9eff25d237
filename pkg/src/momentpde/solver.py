"""Embedded first-order conic solver: operator splitting with exact equalities.

The problem is min c.x subject to E x = f and (A_b x + d_b) in the PSD cone
for every block b.  Splitting introduces a mirror variable S_b per block and
alternates

  1. an x-step: equality-constrained least squares pulling the block images
     toward S_b - U_b, solved through a prefactored KKT system, so the
     equality residual stays at refinement level throughout;
  2. a blockwise PSD projection (eigendecomposition, negative eigenvalues
     clamped to zero) giving the new S_b;
  3. a scaled dual update U_b.

Over-relaxation with a fixed factor speeds up the consensus.  Everything is
deterministic: no randomization, fixed iteration order, optional diagonal
equilibration of the equality rows only affects the KKT conditioning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .relaxation import ConicProblem

_DENSE_KKT_LIMIT = 2500
_KKT_REGULARIZATION = 1e-9


@dataclass
class SolverSettings:
    max_iters: int = 50000
    abs_tol: float = 1e-7
    rel_tol: float = 1e-9
    penalty: float = 1.0  # splitting parameter rho
    scaling: bool = True
    over_relaxation: float = 1.6
    adaptive_penalty: bool = True  # residual balancing, deterministic
    check_every: int = 25
    adapt_every: int = 500
    track_residuals: bool = False

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.penalty <= 0:
            raise ValueError("penalty must be positive")
        if not 0 < self.over_relaxation < 2:
            raise ValueError("over-relaxation factor must lie in (0, 2)")


@dataclass
class SolveReport:
    status: str  # "optimal" | "max_iters" | "infeasible_suspect"
    primal_objective: float
    max_equality_residual: float
    min_block_eigenvalue: float
    iterations: int
    residual_history: list[float] | None = None

    def as_dict(self) -> dict:
        out = {
            "status": self.status,
            "primal_objective": self.primal_objective,
            "max_equality_residual": self.max_equality_residual,
            "min_block_eigenvalue": self.min_block_eigenvalue,
            "iterations": self.iterations,
        }
        return out


def project_psd(mat: np.ndarray) -> np.ndarray:
    """Metric projection onto the PSD cone: clamp negative eigenvalues."""
    sym = 0.5 * (mat + mat.T)
    w, v = np.linalg.eigh(sym)
    w = np.maximum(w, 0.0)
    return (v * w) @ v.T


class _Kkt:
    """Prefactored regularized KKT system with iterative refinement.

    The regularization keeps the factorization stable under redundant
    equality rows; two refinement passes against the exact system remove its
    bias, so equalities hold to roundoff at every iteration.
    """

    def __init__(self, m: sp.csr_matrix, eq: sp.csr_matrix, rho: float):
        n = m.shape[0]
        me = eq.shape[0]
        self.n, self.me, self.rho = n, me, rho
        self.m, self.eq = m, eq
        delta = _KKT_REGULARIZATION
        kkt = sp.bmat(
            [
                [rho * m + delta * sp.eye(n), eq.T],
                [eq, -delta * sp.eye(me) if me else None],
            ],
            format="csc",
        )
        if n + me <= _DENSE_KKT_LIMIT:
            self._lu = scipy.linalg.lu_factor(kkt.toarray())
            self._solve = lambda rhs: scipy.linalg.lu_solve(self._lu, rhs)
        else:
            lu = spla.splu(kkt)
            self._solve = lu.solve

    def _apply_exact(self, y: np.ndarray) -> np.ndarray:
        x, nu = y[: self.n], y[self.n :]
        top = self.rho * (self.m @ x) + (self.eq.T @ nu if self.me else 0.0)
        bottom = self.eq @ x
        return np.concatenate([top, bottom])

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        y = self._solve(rhs)
        for _ in range(2):
            y += self._solve(rhs - self._apply_exact(y))
        return y


def solve(
    problem: ConicProblem, settings: SolverSettings | None = None
) -> tuple[np.ndarray, SolveReport]:
    """Run the splitting iteration; returns the best iterate and a report."""
    settings = settings or SolverSettings()
    n = problem.num_vars
    rho = settings.penalty
    alpha = settings.over_relaxation

    blocks = problem.blocks
    a_all = sp.vstack([b.coeffs for b in blocks], format="csr") if blocks else sp.csr_matrix((0, n))
    d_all = (
        np.concatenate([b.const for b in blocks]) if blocks else np.zeros(0)
    )
    a_all_t = a_all.T.tocsr()
    offsets = np.cumsum([0] + [b.vec_dim for b in blocks])

    eq, f = problem.eq_matrix, problem.eq_rhs
    if settings.scaling and eq.shape[0]:
        # Power-of-two equilibration: improves KKT conditioning without
        # introducing any rounding (binary-exact row scaling).
        row_max = np.maximum(np.abs(eq).max(axis=1).toarray().ravel(), 1e-12)
        row_scale = np.exp2(-np.round(np.log2(row_max)))
        eq_s, f_s = (sp.diags(row_scale) @ eq).tocsr(), f * row_scale
    else:
        eq_s, f_s = eq, f

    m_gram = (a_all_t @ a_all).tocsr()
    kkt = _Kkt(m_gram, eq_s, rho)

    c = problem.objective
    s_all = np.zeros(a_all.shape[0])
    u_all = np.zeros_like(s_all)
    x = np.zeros(n)
    history: list[float] | None = [] if settings.track_residuals else None

    def project_all(v: np.ndarray) -> np.ndarray:
        out = np.empty_like(v)
        for b, block in enumerate(blocks):
            seg = slice(offsets[b], offsets[b + 1])
            if block.diagonal:
                out[seg] = np.maximum(v[seg], 0.0)
            else:
                out[seg] = project_psd(
                    v[seg].reshape(block.size, block.size)
                ).ravel()
        return out

    def min_block_eig(v: np.ndarray) -> float:
        worst = np.inf
        for b, block in enumerate(blocks):
            seg = v[offsets[b] : offsets[b + 1]]
            if block.diagonal:
                worst = min(worst, float(seg.min()) if len(seg) else np.inf)
            else:
                mat = seg.reshape(block.size, block.size)
                worst = min(
                    worst, float(np.linalg.eigvalsh(0.5 * (mat + mat.T)).min())
                )
        return worst if blocks else 0.0

    status = "max_iters"
    iterations = settings.max_iters
    prev_obj = np.inf
    rhs = np.zeros(n + eq_s.shape[0])
    rhs[n:] = f_s

    for it in range(1, settings.max_iters + 1):
        rhs[:n] = rho * (a_all_t @ (s_all - u_all - d_all)) - c
        x = kkt.solve(rhs)[:n]
        v_all = a_all @ x + d_all
        v_relaxed = alpha * v_all + (1.0 - alpha) * s_all
        s_prev, u_prev = s_all, u_all
        s_all = project_all(v_relaxed + u_all)
        u_all = u_all + v_relaxed - s_all

        if not np.isfinite(x).all():
            status = "infeasible_suspect"
            iterations = it
            break

        primal = float(np.abs(v_all - s_all).max()) if len(s_all) else 0.0
        dual = (
            float(rho * np.abs(a_all_t @ (s_all - s_prev)).max()) if len(s_all) else 0.0
        )
        if history is not None:
            # fixed-point displacement of the splitting step; monotone
            # non-increasing for an averaged operator iteration
            history.append(
                float(
                    np.sqrt(
                        np.sum((s_all - s_prev) ** 2) + np.sum((u_all - u_prev) ** 2)
                    )
                )
            )

        if it % settings.check_every == 0 or it == settings.max_iters:
            eq_res = float(np.abs(eq @ x - f).max()) if eq.shape[0] else 0.0
            obj = float(c @ x)
            obj_stable = abs(obj - prev_obj) <= settings.rel_tol * max(1.0, abs(obj))
            prev_obj = obj
            if (
                eq_res <= settings.abs_tol
                and primal <= settings.abs_tol
                and dual <= settings.abs_tol
                and obj_stable
                and min_block_eig(v_all) >= -settings.abs_tol
            ):
                status = "optimal"
                iterations = it
                break

        if (
            settings.adaptive_penalty
            and it % settings.adapt_every == 0
            and it < settings.max_iters
        ):
            # Residual balancing; the scaled duals U = Lambda / rho follow rho.
            if primal > 10 * dual and rho < 1e5 * settings.penalty:
                rho *= 2.0
                u_all /= 2.0
                kkt = _Kkt(m_gram, eq_s, rho)
            elif dual > 10 * primal and rho > 1e-5 * settings.penalty:
                rho /= 2.0
                u_all *= 2.0
                kkt = _Kkt(m_gram, eq_s, rho)

    v_all = a_all @ x + d_all
    report = SolveReport(
        status=status,
        primal_objective=float(c @ x),
        max_equality_residual=(
            float(np.abs(eq @ x - f).max()) if eq.shape[0] else 0.0
        ),
        min_block_eigenvalue=min_block_eig(v_all),
        iterations=iterations,
        residual_history=history,
    )
    return x, report
