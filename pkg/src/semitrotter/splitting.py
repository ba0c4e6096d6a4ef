"""Suzuki stage schedules and Trotterized evolution.

A stage plan is an ordered list of (coefficient, generator) pairs; the
first stage acts first on the state, i.e. the full step is

    U = u_l ... u_2 u_1,    u_j = exp(-i dt c_j H_j),  H_j in {A, B}.

Order 1 is the Lie-Trotter product, order 2 the Strang splitting
(1/2, A)(1, B)(1/2, A), and higher even orders follow the fractal
recursion U_{2k}(dt) = U_{2k-2}(u_k dt)^2 U_{2k-2}((1-4u_k) dt)
U_{2k-2}(u_k dt)^2 with u_k = 1/(4 - 4^(1/(2k-1))). Adjacent stages with
the same generator are merged, which yields the canonical
2*5^(k-1) + 1 stage count; the intermediate coefficients 1 - 4 u_k are
negative and are exponentiated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import circulant_exp, is_circulant, is_diagonal, unitary_exp

Stage = tuple[float, str]


@dataclass(frozen=True)
class StagePlan:
    order: int
    stages: tuple[Stage, ...]

    def coefficient_sum(self, generator: str) -> float:
        return sum(c for c, g in self.stages if g == generator)

    def is_palindromic(self) -> bool:
        return self.stages == self.stages[::-1]


def _merge_adjacent(stages: list[Stage]) -> list[Stage]:
    merged: list[Stage] = []
    for c, g in stages:
        if merged and merged[-1][1] == g:
            merged[-1] = (merged[-1][0] + c, g)
        else:
            merged.append((c, g))
    return merged


def suzuki_plan(p: int) -> StagePlan:
    """Stage schedule for the order-p scheme (p = 1 or even, p <= 10)."""
    if p == 1:
        return StagePlan(1, ((1.0, "A"), (1.0, "B")))
    if p < 2 or p % 2 != 0 or p > 10:
        raise ValueError(f"order must be 1 or an even integer <= 10, got {p}")
    stages: list[Stage] = [(0.5, "A"), (1.0, "B"), (0.5, "A")]
    for k in range(2, p // 2 + 1):
        u = 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))
        scaled = []
        for factor in (u, u, 1.0 - 4.0 * u, u, u):
            scaled.extend((c * factor, g) for c, g in stages)
        stages = _merge_adjacent(scaled)
    return StagePlan(p, tuple(stages))


def _stage_unitary(generator: np.ndarray, theta: float) -> np.ndarray:
    if is_diagonal(generator):
        return np.diag(np.exp(-1j * theta * np.diag(generator)))
    if is_circulant(generator):
        return circulant_exp(generator[0], theta)
    return unitary_exp(generator, theta)


def trotter_step(plan: StagePlan, a: np.ndarray, b: np.ndarray, dt: float) -> np.ndarray:
    """One step U_p(dt) as the product of stage unitaries.

    Diagonal generators are exponentiated entrywise and circulant ones by
    DFT diagonalization; anything else goes through the dense Hermitian
    eigendecomposition.
    """
    a = linalg.as_matrix(a)
    b = linalg.as_matrix(b)
    if a.shape != b.shape:
        raise linalg.DimensionMismatchError(f"A and B differ: {a.shape} vs {b.shape}")
    generators = {"A": a, "B": b}
    cache: dict[Stage, np.ndarray] = {}
    step = np.eye(a.shape[0], dtype=np.complex128)
    for stage in plan.stages:
        if stage not in cache:
            c, g = stage
            cache[stage] = _stage_unitary(generators[g], c * dt)
        step = cache[stage] @ step
    return step


def exact_unitary(h: np.ndarray, t: float) -> np.ndarray:
    """e^{-iHt} for Hermitian H."""
    return unitary_exp(h, t)


def heisenberg_evolve(u: np.ndarray, obs: np.ndarray, n: int) -> np.ndarray:
    """(U^dagger)^n O U^n by successive conjugation."""
    u = linalg.as_matrix(u)
    obs = linalg.as_matrix(obs)
    if u.shape != obs.shape:
        raise linalg.DimensionMismatchError(f"shapes differ: {u.shape} vs {obs.shape}")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > 1e-8:
        raise linalg.NonHermitianError(f"U is not unitary (defect {defect:.3e})")
    uh = u.conj().T
    for _ in range(n):
        obs = uh @ obs @ u
    return obs


def compute_steps(t: float, eps: float, p: int, c: float) -> int:
    """Smallest step count n with C t^(p+1) / n^p <= eps."""
    if t <= 0 or eps <= 0 or c <= 0:
        raise ValueError("t, eps and C must be positive")
    n = max(1, math.ceil((c * t ** (p + 1) / eps) ** (1.0 / p) - 1e-12))
    while c * t ** (p + 1) / n**p > eps:
        n += 1
    return n
