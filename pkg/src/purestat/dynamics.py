"""Time evolution, dephasing, time averages, subsystem speed and purity rate."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .hamiltonians import CompositeHamiltonian, Hamiltonian, unitary_from_hamiltonian
from .linalg import commutator, dagger, partial_trace, trace_norm
from .states import DensityMatrix, PureState, purity, trace_distance

__all__ = [
    "Trajectory",
    "TimeAverageReport",
    "FunctionalTimeStats",
    "evolve",
    "dephase",
    "default_horizon",
    "empirical_time_average",
    "pure_state_samples",
    "subsystem_speed",
    "purity_rate",
    "finite_difference_speed",
    "finite_difference_purity_rate",
]


def evolve(state, h: Hamiltonian, t: float):
    """Evolve a PureState or DensityMatrix for time t in the eigenbasis of H."""
    if isinstance(state, PureState):
        if state.dim != h.dim:
            raise ValueError(f"dimension mismatch: state {state.dim}, H {h.dim}")
        c = h.to_eigenbasis(state.vector)
        c *= np.exp(-1j * h.eigenvalues * t)
        v = h.from_eigenbasis(c)
        v /= np.linalg.norm(v)  # remove float drift, |err| ~ 1e-16
        return PureState(v, dims=state.dims)
    if isinstance(state, DensityMatrix):
        if state.dim != h.dim:
            raise ValueError(f"dimension mismatch: state {state.dim}, H {h.dim}")
        u = unitary_from_hamiltonian(h, t)
        return DensityMatrix(u @ state.matrix @ dagger(u), dims=state.dims)
    raise TypeError(f"cannot evolve object of type {type(state).__name__}")


def _cluster_slices(e: np.ndarray, tol: float) -> list[slice]:
    bounds = [0]
    for k in range(1, len(e)):
        if e[k] - e[k - 1] > tol:
            bounds.append(k)
    bounds.append(len(e))
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def dephase(x, h: Hamiltonian, mode: str = "strict"):
    """Dephasing map: zero the inter-eigenspace off-diagonals in H's eigenbasis.

    Works on states and on Hermitian observables alike and equals the
    infinite-time average for non-resonant H.  mode="strict" requires H's
    gap report to certify strong non-resonance; mode="clusters" implements
    the degenerate-subspace variant (projectors onto degenerate clusters,
    cluster width 1e-9 x spectral range).
    """
    m = x.matrix if isinstance(x, DensityMatrix) else np.asarray(x, dtype=complex)
    if m.shape[0] != h.dim:
        raise ValueError(f"dimension mismatch: operator {m.shape[0]}, H {h.dim}")
    a = h.to_eigenbasis(m)
    if mode == "strict":
        if not h.gap_report.non_resonant:
            raise ValueError("Hamiltonian is resonant; use mode='clusters' for the "
                             "degenerate-subspace dephasing map")
        out = np.diag(np.diag(a))
    elif mode == "clusters":
        e = h.eigenvalues
        tol = 1e-9 * max(float(e[-1] - e[0]), 1.0)
        out = np.zeros_like(a)
        for sl in _cluster_slices(e, tol):
            out[sl, sl] = a[sl, sl]
    else:
        raise ValueError(f"unknown dephasing mode {mode!r}")
    res = h.from_eigenbasis(out)
    if isinstance(x, DensityMatrix):
        return DensityMatrix(res, dims=x.dims)
    return res


def default_horizon(h: Hamiltonian, factor: float = 1e4) -> float:
    """Averaging horizon 10^4 / (minimal gap difference), the dephasing scale."""
    mgd = h.gap_report.min_gap_difference
    if not np.isfinite(mgd) or mgd <= 0:
        raise ValueError("Hamiltonian has no usable gap-difference scale")
    return factor / mgd


def pure_state_samples(h: Hamiltonian, initial: PureState, times) -> np.ndarray:
    """State vectors psi_t at the given times, one per row (vectorized)."""
    times = np.asarray(times, dtype=float)
    c0 = h.to_eigenbasis(initial.vector)
    phases = np.exp(-1j * np.outer(times, h.eigenvalues))
    return (phases * c0[None, :]) @ h.eigenbasis.T


@dataclass
class Trajectory:
    """States sampled along an evolution, exportable as CSV."""

    times: np.ndarray
    states: list
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        if len(self.times) != len(self.states):
            raise ValueError("times and states length mismatch")

    def functional_values(self, functional) -> np.ndarray:
        return np.array([functional(s) for s in self.states], dtype=float)

    def to_csv(self, path, functionals: dict | None = None) -> None:
        """Write columns (t, <name>...) for each scalar functional."""
        functionals = functionals or {}
        cols = {name: self.functional_values(fn) for name, fn in functionals.items()}
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", *cols.keys()])
            for i, t in enumerate(self.times):
                w.writerow([repr(float(t)), *(repr(float(c[i])) for c in cols.values())])


@dataclass
class TimeAverageReport:
    """Dephased state vs empirical average over sampled times."""

    dephased: DensityMatrix
    empirical: DensityMatrix
    discrepancy: float
    horizon: float
    n_samples: int


@dataclass
class FunctionalTimeStats:
    """Scalar functional sampled along the evolution, with second moments."""

    mean: float
    variance: float
    second_moment: float
    horizon: float
    n_samples: int
    values: np.ndarray


def empirical_time_average(h: Hamiltonian, initial: PureState, horizon: float,
                           n_samples: int, rng: np.random.Generator,
                           reduce: str | None = None, functional=None,
                           dephase_mode: str = "strict"):
    """Average states, or a scalar functional of them, over random times.

    Times are drawn uniformly on [0, horizon] (a regular grid can alias
    against near-commensurate gaps).  Without a functional, returns a
    TimeAverageReport comparing the empirical mean state (optionally
    reduced) with the dephased state.  With a functional f(state) -> float,
    returns FunctionalTimeStats of f over the sampled times.
    """
    if horizon <= 0 or n_samples < 2:
        raise ValueError("need horizon > 0 and n_samples >= 2")
    times = rng.uniform(0.0, horizon, int(n_samples))
    psis = pure_state_samples(h, initial, times)
    d_s, d_b = initial.dims if initial.dims is not None else (initial.dim, 1)

    if functional is not None:
        vals = np.empty(len(times))
        for i, psi in enumerate(psis):
            state = PureState(psi / np.linalg.norm(psi), dims=(d_s, d_b))
            if reduce is not None:
                vals[i] = functional(state.reduced(reduce))
            else:
                vals[i] = functional(state)
        vals = np.asarray(vals, dtype=float)
        return FunctionalTimeStats(
            mean=float(vals.mean()), variance=float(vals.var()),
            second_moment=float((vals ** 2).mean()),
            horizon=horizon, n_samples=int(n_samples), values=vals)

    omega = dephase(initial.density(), h, mode=dephase_mode)
    if reduce is not None:
        mats = psis.reshape(len(times), d_s, d_b)
        if reduce == "S":
            emp = np.einsum("nib,njb->ij", mats, mats.conj()) / len(times)
        elif reduce == "B":
            emp = np.einsum("nia,nib->ab", mats, mats.conj()) / len(times)
        else:
            raise ValueError(f"reduce must be 'S', 'B' or None, got {reduce!r}")
        emp = 0.5 * (emp + dagger(emp))
        empirical = DensityMatrix(emp)
        target = omega.reduced(reduce)
    else:
        emp = np.einsum("ni,nj->ij", psis, psis.conj()) / len(times)
        emp = 0.5 * (emp + dagger(emp))
        empirical = DensityMatrix(emp, dims=(d_s, d_b))
        target = omega
    return TimeAverageReport(
        dephased=target, empirical=empirical,
        discrepancy=trace_distance(target, empirical),
        horizon=horizon, n_samples=int(n_samples))


def _reduced_commutant_with_interaction(rho: np.ndarray, h_sb: np.ndarray,
                                        d_s: int, d_b: int) -> np.ndarray:
    """Tr_B[rho, H_SB]."""
    return partial_trace(commutator(rho, h_sb), d_s, d_b, "S")


def subsystem_speed(rho, parts: CompositeHamiltonian) -> float:
    """v_S = (1/2) || i[rho^S, H_S] + i Tr_B[rho, H_SB] ||_1.

    Equals the instantaneous trace-norm velocity of the reduced state; the
    bath Hamiltonian enters only through the trajectory, not the formula.
    """
    d_s, d_b = parts.dims
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape[0] != d_s * d_b:
        raise ValueError("state dimension does not match the Hamiltonian split")
    rho_s = partial_trace(m, d_s, d_b, "S")
    drho_s = 1j * commutator(rho_s, parts.h_s) + 1j * _reduced_commutant_with_interaction(
        m, parts.h_sb, d_s, d_b)
    return 0.5 * trace_norm(drho_s)


def purity_rate(rho, parts: CompositeHamiltonian) -> float:
    """d p^S/dt = Tr[rho^S 2i Tr_B[rho, H_SB]].

    Also evaluates the correlation-operator form (with rho^cor =
    rho - rho^S (x) rho^B) and checks both agree to 1e-9.
    """
    d_s, d_b = parts.dims
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape[0] != d_s * d_b:
        raise ValueError("state dimension does not match the Hamiltonian split")
    rho_s = partial_trace(m, d_s, d_b, "S")
    rho_b = partial_trace(m, d_s, d_b, "B")
    rate = float(np.trace(rho_s @ (2j * _reduced_commutant_with_interaction(
        m, parts.h_sb, d_s, d_b))).real)
    rho_cor = m - np.kron(rho_s, rho_b)
    rate_cor = float(np.trace(rho_s @ (2j * _reduced_commutant_with_interaction(
        rho_cor, parts.h_sb, d_s, d_b))).real)
    scale = max(1.0, abs(rate))
    if abs(rate - rate_cor) > 1e-9 * scale:
        raise AssertionError(
            f"purity-rate forms disagree: {rate!r} vs correlation form {rate_cor!r}")
    return rate


def finite_difference_speed(h: Hamiltonian, state, t: float,
                            delta: float | None = None) -> float:
    """Central-difference D(rho^S_{t-d}, rho^S_{t+d}) / (2d) cross-check."""
    if delta is None:
        delta = 1e-6 / max(np.abs(h.eigenvalues).max(), 1.0)
    lo = evolve(state, h, t - delta)
    hi = evolve(state, h, t + delta)
    return trace_distance(lo.reduced("S"), hi.reduced("S")) / (2 * delta)


def finite_difference_purity_rate(h: Hamiltonian, state, t: float,
                                  delta: float | None = None) -> float:
    """Central-difference d(purity)/dt cross-check."""
    if delta is None:
        delta = 1e-6 / max(np.abs(h.eigenvalues).max(), 1.0)
    lo = evolve(state, h, t - delta)
    hi = evolve(state, h, t + delta)
    return (purity(hi.reduced("S")) - purity(lo.reduced("S"))) / (2 * delta)
