"""Fast self-checks behind ``afdm-im validate``."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from ..analysis import mgf_closed_form, mgf_monte_carlo, pep_exact_eigs, pep_single_eigenvalue, spectral_efficiency
from ..channel import (
    apply_time_domain,
    build_path_matrix,
    closed_form_path_matrix,
    draw_gains,
    effective_channel,
    standard_profiles,
)
from ..codec import ModemConfig, encode_block
from ..daft import add_cpp, build_daft, choose_c1, daft, idaft

__all__ = ["CheckResult", "CHECKS", "run_checks", "format_table"]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_unitarity(rng) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        n = int(rng.choice([16, 32, 64, 128]))
        a = build_daft(n, rng.uniform(0, 1), rng.uniform(0, 1)).a_matrix
        worst = max(worst, np.abs(a @ a.conj().T - np.eye(n)).max())
    return CheckResult("DAFT unitarity", worst < 1e-10, f"max |AA^H - I| = {worst:.2e}")


def check_channel_pipeline(rng) -> CheckResult:
    worst = 0.0
    for profile in standard_profiles().values():
        for _ in range(5):
            cfg = ModemConfig(32, 8, 1, 2, choose_c1(profile.alpha_max, 1, 32, profile.delays, min_gap=1), 0.0, profile.l_max)
            op = build_daft(cfg.n_total, cfg.c1, cfg.c2)
            x = encode_block(rng.integers(0, 2, cfg.b), cfg).x
            gains = draw_gains(profile.n_paths, rng)
            y_time = daft(apply_time_domain(add_cpp(idaft(x, op), cfg.cpp_len, cfg.c1), profile, gains, cfg.cpp_len), op)
            y_mat = effective_channel(profile, gains, op).h_eff @ x
            worst = max(worst, np.linalg.norm(y_time - y_mat) / np.linalg.norm(y_mat))
    return CheckResult("time-domain chain == H_eff x", worst < 1e-9, f"max relative error = {worst:.2e}")


def check_closed_form(rng) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        n = int(rng.choice([16, 32, 64]))
        op = build_daft(n, rng.uniform(0, 0.2), rng.uniform(0, 0.2))
        delay, eps = int(rng.integers(0, 5)), rng.uniform(-2, 2)
        worst = max(worst, np.abs(build_path_matrix(delay, eps, op) - closed_form_path_matrix(delay, eps, op)).max())
    return CheckResult("closed-form path entries", worst < 1e-9, f"max entry error = {worst:.2e}")


def check_spectral_efficiency(rng) -> CheckResult:
    got = spectral_efficiency(ModemConfig(64, 4, 3, 4))
    return CheckResult("SE (64,4,3,4) = 2", got == 2.0, f"eta = {got}")


def check_quadrature(rng) -> CheckResult:
    worst = 0.0
    for lam in (0.5, 5.0, 50.0, 5e3):
        exact = pep_single_eigenvalue(lam, 1.0, 2)
        quad = float(pep_exact_eigs(np.array([lam, 0.0]), 1.0, 2))
        worst = max(worst, abs(exact - quad))
    return CheckResult("PEP quadrature vs closed form", worst < 1e-10, f"max abs error = {worst:.2e}")


def check_mgf(rng) -> CheckResult:
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    psi = g.conj().T @ g
    s = -0.3 / np.linalg.eigvalsh(psi).max()
    mean, se = mgf_monte_carlo(psi, s, 100_000, rng, variance=1 / 3)
    exact = mgf_closed_form(psi, s, variance=1 / 3)
    z = abs(mean - exact) / se
    return CheckResult("MGF identity (Monte Carlo)", z < 3, f"|z| = {z:.2f}")


CHECKS: tuple[Callable[[np.random.Generator], CheckResult], ...] = (
    check_unitarity,
    check_channel_pipeline,
    check_closed_form,
    check_spectral_efficiency,
    check_quadrature,
    check_mgf,
)


def run_checks(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [check(rng) for check in CHECKS]


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  result  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    return "\n".join(lines)
