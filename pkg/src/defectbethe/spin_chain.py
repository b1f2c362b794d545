"""Defect spin chains: monodromy/transfer matrices, Hamiltonians, Bethe roots.

A chain has N bulk spin-1/2 sites plus one spin-S defect site carrying its
own rapidity, N+1 sites in total.  Site 1 is the first quantum Kronecker
factor; the 2-dimensional auxiliary space used by the monodromy goes in
front of everything (slot 0).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionCapExceeded, DomainError, NoConvergence,
                     PoleError, SingularJacobian)
from .lax_operators import (d_defect_lax, d_r_matrix, defect_lax,
                            permutation_matrix, r_matrix, regularity_scale,
                            two_site_operator)
from .spin_algebra import build_rep

_DEFAULT_MAX_DIM = 2 ** 14


def dimension_cap():
    """Hilbert-space size limit; override with env var DEFECTBETHE_MAX_DIM."""
    raw = os.environ.get("DEFECTBETHE_MAX_DIM")
    if raw is None:
        return _DEFAULT_MAX_DIM
    cap = int(raw)
    if cap < 2:
        raise ValueError("DEFECTBETHE_MAX_DIM must be >= 2")
    return cap


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and couplings of one defect chain.

    N            -- number of bulk spin-1/2 sites
    defect_site  -- position n of the defect within 1..N+1
    defect_spin  -- S of the defect site
    theta        -- defect rapidity
    params       -- ModelParameters (family, anisotropy)
    """

    N: int
    defect_spin: float
    params: object
    theta: float = 0.0
    defect_site: int | None = None

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be >= 0")
        n = self.defect_site if self.defect_site is not None else self.N + 1
        if not (1 <= n <= self.N + 1):
            raise ValueError("defect_site must lie in 1..N+1")
        object.__setattr__(self, "defect_site", n)

    @property
    def site_dims(self):
        d = int(round(2 * self.defect_spin + 1))
        return [d if k == self.defect_site else 2
                for k in range(1, self.N + 2)]

    @property
    def hilbert_dim(self):
        return int(np.prod(self.site_dims))

    def check_cap(self):
        cap = dimension_cap()
        if self.hilbert_dim > cap:
            raise DimensionCapExceeded(
                f"Hilbert dimension {self.hilbert_dim} exceeds cap {cap}")

    def defect_rep(self):
        return build_rep(self.defect_spin, self.params)


@dataclass(frozen=True)
class BetheState:
    """Root content of one Bethe state.

    roots   -- magnon rapidities
    holes   -- real hole rapidities (thermodynamic bookkeeping)
    strings -- (length, parity, center) templates the roots came from
    """

    M: int
    roots: tuple = ()
    holes: tuple = ()
    strings: tuple = ()

    def __post_init__(self):
        if len(self.roots) != self.M:
            raise ValueError("M must equal the number of roots")
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))

    def conjugation_defect(self):
        """Distance of the root multiset from its complex conjugate.

        Physical states are self-conjugate; a large value flags an
        unphysical or drifted configuration.
        """
        if not self.roots:
            return 0.0
        rem = list(self.roots)
        worst = 0.0
        for r in self.roots:
            best = min(rem, key=lambda x: abs(x - np.conj(r)))
            worst = max(worst, abs(best - np.conj(r)))
            rem.remove(best)
        return float(worst)


def string_seed(center, length, params=None, negative_parity=False):
    """String-template seed: center + (i/2)(length+1-2j), j = 1..length."""
    seed = [center + 0.5j * (length + 1 - 2 * j) for j in range(1, length + 1)]
    if negative_parity:
        if params is None or params.is_rational:
            raise DomainError("negative-parity strings need a trig model")
        seed = [s + 1j * math.pi / (2 * params.anisotropy) for s in seed]
    return seed


# ---------------------------------------------------------------------------
# transfer matrix machinery
# ---------------------------------------------------------------------------


def monodromy(chain, lam):
    """Ordered product of site Lax matrices on aux x (site 1 .. site N+1).

    Site N+1 acts leftmost; the defect factor is evaluated at lam - theta.
    """
    chain.check_cap()
    dims = [2] + chain.site_dims
    rep = chain.defect_rep()
    total = int(np.prod(dims))
    out = np.eye(total, dtype=complex)
    for k in range(1, chain.N + 2):
        if k == chain.defect_site:
            site = defect_lax(chain.params, rep, lam - chain.theta)
        else:
            site = r_matrix(chain.params, lam)
        out = two_site_operator(site, dims, 0, k) @ out
    return out


def transfer(chain, lam):
    """Trace of the monodromy over the auxiliary slot."""
    t_full = monodromy(chain, lam)
    d = chain.hilbert_dim
    m = t_full.reshape(2, d, 2, d)
    return m[0, :, 0, :] + m[1, :, 1, :]


def pseudovacuum(chain):
    """All spins up, defect on its highest-weight state."""
    v = np.zeros(chain.hilbert_dim, dtype=complex)
    v[0] = 1.0
    return v


def hamiltonian(chain):
    """Nearest-neighbour Hamiltonian with the defect spliced in.

    Built from the transfer matrix's logarithmic derivative at the regular
    point: the two bonds touching the defect are replaced by a term in the
    derivative of the defect Lax matrix and a conjugated bond that couples
    the defect's neighbours directly.  Needs N >= 2 so those neighbours
    are distinct sites.
    """
    if chain.N < 2:
        raise DomainError("hamiltonian needs N >= 2 bulk sites")
    chain.check_cap()
    params = chain.params
    dims = chain.site_dims
    n_sites = chain.N + 1
    n = chain.defect_site
    rep = chain.defect_rep()
    s = regularity_scale(params)

    p4 = permutation_matrix()
    rdot = p4 @ d_r_matrix(params, 0.0)  # derivative of the braided R at 0

    def idx(site):
        # periodic 1..N+1 labels to 0-based tensor slots
        return (site - 1) % n_sites

    prev_site = n - 1 if n > 1 else n_sites
    next_site = n + 1 if n < n_sites else 1

    total = chain.hilbert_dim
    h = np.zeros((total, total), dtype=complex)
    for j in range(1, n_sites + 1):
        if j in (prev_site, n):
            continue  # bonds (n-1, n) and (n, n+1) are replaced below
        j_right = j + 1 if j < n_sites else 1
        h += two_site_operator(rdot, dims, idx(j), idx(j_right))

    m_loc = defect_lax(params, rep, -chain.theta)
    mdot_loc = d_defect_lax(params, rep, -chain.theta)
    m_full = two_site_operator(m_loc, dims, idx(next_site), idx(n))
    mdot_full = two_site_operator(mdot_loc, dims, idx(next_site), idx(n))
    m_inv = np.linalg.inv(m_full)

    h += s * (mdot_full @ m_inv)
    bridged = two_site_operator(rdot, dims, idx(prev_site), idx(next_site))
    h += m_full @ bridged @ m_inv
    return -h


def hermiticity_residual(mat):
    return float(np.max(np.abs(mat - mat.conj().T)))


# ---------------------------------------------------------------------------
# Bethe equations
# ---------------------------------------------------------------------------


def _ratio(params, order, lam):
    """e_n(lam): phase ratio with poles at lam = -i n/2 (up to periodicity)."""
    if params.is_rational:
        num = lam + 0.5j * order
        den = lam - 0.5j * order
    else:
        mu = params.anisotropy
        num = np.sinh(mu * (lam + 0.5j * order))
        den = np.sinh(mu * (lam - 0.5j * order))
    if abs(den) < 1e-13 * (1.0 + abs(num)):
        raise PoleError(f"ratio function pole at lam={lam}, order={order}")
    return num / den


def _ratio_logderiv(params, order, lam):
    """d/dlam log e_n(lam)."""
    if params.is_rational:
        return 1.0 / (lam + 0.5j * order) - 1.0 / (lam - 0.5j * order)
    mu = params.anisotropy
    return mu * (1.0 / np.tanh(mu * (lam + 0.5j * order))
                 - 1.0 / np.tanh(mu * (lam - 0.5j * order)))


def _bae_terms(chain, roots):
    """Per-root product P_i = defect * bulk^N / pair products; F_i = P_i - 1.

    The pair product runs over j != i only: the diagonal factor is the
    constant -1 and cancels against the conventional sign in front of the
    right-hand side, leaving P_i = 1 as the root condition.
    """
    params = chain.params
    y = 2.0 * chain.defect_spin
    m = len(roots)
    p = np.zeros(m, dtype=complex)
    for i, lam in enumerate(roots):
        val = _ratio(params, y, lam - chain.theta) \
            * _ratio(params, 1.0, lam) ** chain.N
        for j in range(m):
            if j == i:
                continue
            val = val / _ratio(params, 2.0, lam - roots[j])
        p[i] = val
    return p


def bae_residual(chain, state):
    """Worst relative violation |LHS/RHS - 1| over the state's roots."""
    if state.M == 0:
        return 0.0
    p = _bae_terms(chain, list(state.roots))
    return float(np.max(np.abs(p - 1.0)))


def solve_bae(chain, M, seeds=None, tol=1e-12, max_iter=100,
              allow_coincident=False):
    """Newton iteration on the product form of the Bethe equations.

    Works directly with F_i = P_i - 1 = 0 where P_i is the full phase
    product, so no logarithm branch bookkeeping is needed; the Jacobian
    uses the analytic logarithmic derivatives of the ratio functions.
    Raises NoConvergence (carrying the best residual seen) when the
    iteration stalls.  Coincident roots solve the product form exactly
    but make the Bethe vector vanish, so they are rejected as
    SingularJacobian unless allow_coincident is set.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    params = chain.params
    y = 2.0 * chain.defect_spin
    if seeds is None:
        seeds = string_seed(0.2, M)
    roots = np.array(seeds, dtype=complex)
    if len(roots) != M:
        raise ValueError("need exactly M seeds")

    best = math.inf
    best_roots = roots.copy()
    for _ in range(max_iter):
        p = _bae_terms(chain, roots)
        f = p - 1.0
        res = float(np.max(np.abs(f)))
        if res < best:
            best, best_roots = res, roots.copy()
        if res <= tol:
            if M > 1 and not allow_coincident:
                sep = min(abs(roots[i] - roots[j])
                          for i in range(M) for j in range(i + 1, M))
                if sep < 1e-8:
                    raise SingularJacobian(
                        "roots coalesced; the configuration solves the "
                        "product form but the Bethe vector vanishes")
            return BetheState(M=M, roots=tuple(np.sort_complex(roots)))
        jac = np.zeros((M, M), dtype=complex)
        for i in range(M):
            diag = _ratio_logderiv(params, y, roots[i] - chain.theta) \
                + chain.N * _ratio_logderiv(params, 1.0, roots[i])
            for j in range(M):
                if j == i:
                    continue
                ld = _ratio_logderiv(params, 2.0, roots[i] - roots[j])
                diag -= ld
                jac[i, j] = p[i] * ld
            jac[i, i] = p[i] * diag
        try:
            cond_check = np.linalg.svd(jac, compute_uv=False)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if cond_check[-1] < 1e-14 * max(1.0, cond_check[0]):
            raise SingularJacobian(
                f"Jacobian near-singular at roots {roots.tolist()}")
        step = np.linalg.solve(jac, -f)
        # cap the step to keep Newton from vaulting over a pole
        biggest = float(np.max(np.abs(step)))
        if biggest > 0.5:
            step = step * (0.5 / biggest)
        roots = roots + step

    raise NoConvergence(
        f"Bethe solver stalled at residual {best:.3e} after {max_iter} steps",
        best_residual=best, last_iterate=best_roots.tolist())


def magnon_sector_sz(chain, M):
    """Total z-spin of an M-magnon state: N/2 + S - M."""
    return chain.N / 2.0 + chain.defect_spin - M


def total_sz_operator(chain):
    """Diagonal total S^z on the chain's Hilbert space."""
    dims = chain.site_dims
    rep = chain.defect_rep()
    total = chain.hilbert_dim
    out = np.zeros((total, total), dtype=complex)
    for k, d in enumerate(dims):
        if d == 2:
            local = np.diag([0.5, -0.5]).astype(complex)
        else:
            local = rep.Sz
        eye_l = np.eye(int(np.prod(dims[:k])), dtype=complex)
        eye_r = np.eye(int(np.prod(dims[k + 1:])), dtype=complex)
        out += np.kron(eye_l, np.kron(local, eye_r))
    return out
