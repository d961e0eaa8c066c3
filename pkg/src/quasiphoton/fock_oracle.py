"""Brute-force verification in a truncated occupation-number basis.

Modes are ordered (1,1), (1,2), (2,1), (2,2) as (s, lam), followed by the
Landau mode 0 in the magnetic case.  Basis states are occupation tuples in
``itertools.product`` (lexicographic) order; the last mode varies fastest.

Squares of single-mode quadratures are built on cutoff + 2 levels and then
truncated, so the truncated matrix is a compression of the exact operator
and the lowest eigenvalue can only decrease as the cutoff grows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .params import ModelParams
from .spectrum import (PHOTON_KEYS, free_roots_closed, magnetic_H0, magnetic_roots)
from .twoqubit import EntanglementReport, report_from_eigenvalues

DIM_CAP = 100_000
DENSE_LIMIT = 4000
PHOTON_MODES = PHOTON_KEYS
LANDAU = (0, 0)


class DimensionError(ValueError):
    pass


class IdentificationError(RuntimeError):
    """Target eigenvector cannot be singled out."""


@dataclass(frozen=True)
class TruncatedBasis:
    modes: tuple
    cutoff: int
    dim_cap: int = DIM_CAP

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if self.dim > self.dim_cap:
            raise DimensionError(f"basis dimension {self.dim} exceeds cap {self.dim_cap}")

    @property
    def levels(self) -> int:
        return self.cutoff + 1

    @property
    def dim(self) -> int:
        return self.levels ** len(self.modes)

    def states(self):
        return itertools.product(range(self.levels), repeat=len(self.modes))

    def occupations(self) -> np.ndarray:
        """(dim, n_modes) array of occupation numbers."""
        grids = np.indices((self.levels,) * len(self.modes)).reshape(len(self.modes), -1)
        return grids.T

    def index(self, occ) -> int:
        i = 0
        for n in occ:
            i = i * self.levels + n
        return i

    def mode_pos(self, mode) -> int:
        return self.modes.index(mode)


@dataclass
class OperatorMatrix:
    H: sp.csr_matrix
    basis: TruncatedBasis
    kind: str
    params: ModelParams
    parts: dict = field(default_factory=dict)

    @property
    def cutoff(self) -> int:
        return self.basis.cutoff

    def hermiticity(self) -> float:
        d = self.H - self.H.getH()
        return float(abs(d).max()) if d.nnz else 0.0

    def lowest(self, n: int, vectors: bool = False):
        return _lowest(self.H, n, vectors, shift=-0.5 * min(self.params.kappa))


# -- single-mode pieces -------------------------------------------------------

def _ann(levels: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, levels)), 1, shape=(levels, levels), format="csr")


def _ops(levels: int):
    """Return (number, x, p) and their compressed squares on ``levels`` levels.

    x = a + a^dag, p = i (a - a^dag); both Hermitian.
    """
    a = _ann(levels)
    ad = a.T
    big = _ann(levels + 1)
    bigx = big + big.T
    bigp = 1j * (big - big.T)
    cut = slice(0, levels)
    x2 = (bigx @ bigx)[cut, cut]
    p2 = (bigp @ bigp)[cut, cut]
    return {
        "n": (ad @ a).tocsr(),
        "x": (a + ad).tocsr(),
        "p": (1j * (a - ad)).tocsr(),
        "x2": sp.csr_matrix(x2),
        "p2": sp.csr_matrix(p2),
    }


def _embed(ops_by_pos: dict[int, sp.spmatrix], n_modes: int, levels: int) -> sp.csr_matrix:
    eye = sp.identity(levels, format="csr")
    out = None
    for pos in range(n_modes):
        f = ops_by_pos.get(pos, eye)
        out = f if out is None else sp.kron(out, f, format="csr")
    return out


def _couplings(params: ModelParams) -> dict[int, float]:
    return {s: math.sqrt(params.epsilon / (2.0 * params.kappa[s - 1])) for s in (1, 2)}


def _quadratic(basis: TruncatedBasis, terms) -> sp.csr_matrix:
    """Sum of coef * prod(op on mode); repeated-mode squares use compressions."""
    ops = _ops(basis.levels)
    n = len(basis.modes)
    H = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for coef, factors in terms:
        if coef == 0:
            continue
        by_pos: dict[int, sp.spmatrix] = {}
        for mode, name in factors:
            pos = basis.mode_pos(mode)
            if pos in by_pos:
                prev = by_pos[pos]
                if prev is ops["x"] and name == "x":
                    by_pos[pos] = ops["x2"]
                elif prev is ops["p"] and name == "p":
                    by_pos[pos] = ops["p2"]
                else:
                    raise ValueError("unsupported same-mode product")
            else:
                by_pos[pos] = ops[name]
        H = H + coef * _embed(by_pos, n, basis.levels)
    return H


def _q_terms(params: ModelParams, lam: int, name: str = "x"):
    g = _couplings(params)
    return [(g[s], ((s, lam), name)) for s in (1, 2)]


def _half_square(lin) -> list:
    """Terms of (1/2) (sum c_i O_i)^2 for a list of (c, (mode, op))."""
    out = []
    for (c1, f1), (c2, f2) in itertools.product(lin, repeat=2):
        out.append((0.5 * c1 * c2, (f1, f2)))
    return out


def _free_terms(params: ModelParams, pols=(1, 2)) -> list:
    terms = []
    for (s, lam) in PHOTON_MODES:
        if lam in pols:
            terms.append((params.kappa[s - 1], (((s, lam), "n"),)))
    for lam in pols:
        terms += _half_square(_q_terms(params, lam))
    return terms


def build_hph(params: ModelParams, cutoff: int, dim_cap: int = DIM_CAP) -> OperatorMatrix:
    """sum kappa a^dag a + 1/2 sum_lam (sum_s sqrt(eps/2 kappa_s) (a + a^dag))^2."""
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    basis = TruncatedBasis(PHOTON_MODES, cutoff, dim_cap)
    H = _quadratic(basis, _free_terms(params)).real.tocsr()
    # polarization-1 part commutes with H; used to split the lam-exchange degeneracy
    H1 = _quadratic(basis, _free_terms(params, pols=(1,))).real.tocsr()
    H.eliminate_zeros()
    return OperatorMatrix(H, basis, "free", params, {"pol1": H1})


def build_hk_magnetic(params: ModelParams, cutoff: int, mass2_over_np: float = 0.0,
                      dim_cap: int = DIM_CAP, real_gauge: bool = True) -> OperatorMatrix:
    """Photon Hamiltonian plus 1/2[(sqrt(w/2) x0 - Q1)^2 + (sqrt(w/2) p0 - Q2)^2].

    x0 = c0 + c0^dag and p0 = i (c0 - c0^dag); ``mass2_over_np`` adds m^2/(2 np).

    With ``real_gauge`` the polarization-2 photons are rephased, a -> i a,
    which turns Q2 into a combination of p quadratures and makes the matrix
    real symmetric.  Basis states then pick up a factor i^(N_pol2);
    ``two_photon_projection`` undoes it.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    basis = TruncatedBasis(PHOTON_MODES + (LANDAU,), cutoff, dim_cap)
    r = math.sqrt(params.omega / 2.0)
    terms = [(params.kappa[s - 1], (((s, lam), "n"),)) for (s, lam) in PHOTON_MODES]
    lin1 = [(r, (LANDAU, "x"))] + [(-c, f) for c, f in _q_terms(params, 1)]
    if real_gauge:
        # a -> i a maps x = a + a^dag onto p = i (a - a^dag)
        lin2 = [(r, (LANDAU, "p"))] + [(-c, f) for c, f in _q_terms(params, 2, "p")]
    else:
        lin2 = [(r, (LANDAU, "p"))] + [(-c, f) for c, f in _q_terms(params, 2)]
    terms += _half_square(lin1) + _half_square(lin2)
    H = _quadratic(basis, terms)
    if mass2_over_np:
        H = H + 0.5 * mass2_over_np * sp.identity(basis.dim, format="csr")
    if real_gauge:
        H = H.real
    H = H.tocsr()
    H.eliminate_zeros()
    return OperatorMatrix(H, basis, "magnetic", params, {"real_gauge": real_gauge})


# -- diagonalization ------------------------------------------------------------

def _lowest(H: sp.spmatrix, n: int, vectors: bool = False, sigma: float | None = None,
            shift: float = -0.5):
    """n lowest eigenpairs, or the n nearest to ``sigma`` when given.

    The Hamiltonians are non-negative, so shift-invert about a negative
    ``shift`` converges to the bottom of the spectrum.
    """
    dim = H.shape[0]
    if dim <= DENSE_LIMIT:
        w, v = np.linalg.eigh(H.toarray())
        if sigma is not None:
            order = np.argsort(np.abs(w - sigma), kind="stable")[:n]
            order = np.sort(order)
            w, v = w[order], v[:, order]
        else:
            w, v = w[:n], v[:, :n]
    else:
        w, v = eigsh(H.tocsc(), k=n, sigma=shift if sigma is None else sigma, which="LM", tol=0)
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    return (w, v) if vectors else w


def free_level_predictions(params: ModelParams, n_levels: int,
                           cutoff: int | None = None) -> np.ndarray:
    """Lowest n values of H0 + sum tau_s N_{s,lam}, multiplicities included.

    With ``cutoff`` only occupations representable in the truncated basis
    are counted.
    """
    r = free_roots_closed(params)
    taus = (r.tau[0], r.tau[0], r.tau[1], r.tau[1])  # one entry per (s, lam)
    return _ladder(taus, r.H0, n_levels, cutoff)


def magnetic_level_predictions(params: ModelParams, n_levels: int, cutoff: int | None = None,
                               guard_band: float | None = 0.05) -> np.ndarray:
    """Lowest n values of E0 + sum tau N + tau_0 N_0 with the exact vacuum E0."""
    r = magnetic_roots(params, guard_band=guard_band)
    taus = tuple(r.tau[k] for k in PHOTON_KEYS) + (r.tau_0,)
    return _ladder(taus, magnetic_H0(r) + params.omega / 2.0, n_levels, cutoff)


def _ladder(freqs, base: float, n_levels: int, cutoff: int | None = None) -> np.ndarray:
    fmin = min(f for f in freqs if f > 0) if any(f > 0 for f in freqs) else 1.0
    levels = []
    # enough quanta per mode to cover the n lowest sums
    top = n_levels + 1
    nmax = [int(math.ceil(top * fmin / f)) + 1 if f > 0 else top for f in freqs]
    if cutoff is not None:
        nmax = [min(n, cutoff) for n in nmax]
    for occ in itertools.product(*(range(m + 1) for m in nmax)):
        levels.append(base + sum(f * k for f, k in zip(freqs, occ)))
    levels.sort()
    return np.array(levels[:n_levels])


@dataclass(frozen=True)
class SpectrumReport:
    cutoff: int
    predicted: np.ndarray
    observed: np.ndarray

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.observed - self.predicted)

    @property
    def max_deviation(self) -> float:
        return float(self.deviation.max())

    @property
    def max_relative(self) -> float:
        scale = np.maximum(np.abs(self.predicted), np.finfo(float).tiny)
        return float((self.deviation / scale).max())


def spectrum_check(matrix: OperatorMatrix, predicted_levels, n_levels: int) -> SpectrumReport:
    """Lowest eigenvalues against sorted predictions (multiset comparison)."""
    pred = np.sort(np.asarray(predicted_levels, dtype=float))[:n_levels]
    obs = np.sort(matrix.lowest(n_levels))
    return SpectrumReport(matrix.cutoff, pred, obs)


@dataclass(frozen=True)
class ConvergenceReport:
    reports: tuple[SpectrumReport, ...]
    floor: float

    @property
    def deviations(self) -> list[float]:
        return [r.max_deviation for r in self.reports]

    @property
    def decreasing(self) -> bool:
        """Each step decreases, or both ends already sit at the rounding floor."""
        d = self.deviations
        return all(b < a or max(a, b) <= self.floor for a, b in zip(d, d[1:]))


def convergence_study(params: ModelParams, cutoffs, n_levels: int = 6,
                      magnetic: bool = False) -> ConvergenceReport:
    reports = []
    for c in cutoffs:
        if magnetic:
            m = build_hk_magnetic(params, c)
            pred = magnetic_level_predictions(params, n_levels, c)
        else:
            m = build_hph(params, c)
            pred = free_level_predictions(params, n_levels, c)
        reports.append(spectrum_check(m, pred, n_levels))
    top = max(float(np.abs(r.predicted).max()) for r in reports)
    return ConvergenceReport(tuple(reports), floor=64 * np.finfo(float).eps * max(top, 1.0))


# -- two-photon projection -----------------------------------------------------

@dataclass(frozen=True)
class Projection:
    amplitudes: np.ndarray     # normalized cross-frequency amplitudes, qubit order
    cross_weight: float        # |cross-frequency part|^2 before normalization
    same_weight: float         # same-frequency two-photon weight
    remainder: float           # M: norm of everything outside the two-photon subspace
    energy: float
    gap: float                 # distance to the nearest other level in the sector

    @property
    def remainder_weight(self) -> float:
        return self.remainder**2


def _sector_indices(basis: TruncatedBasis, occ: np.ndarray, parity) -> np.ndarray:
    return np.flatnonzero(parity(occ))


def _eigs_near(H: sp.spmatrix, target: float, k: int):
    dim = H.shape[0]
    k = min(k, dim - 2) if dim > DENSE_LIMIT else min(k, dim)
    return _lowest(H, k, vectors=True, sigma=target)


def _project(basis: TruncatedBasis, occ: np.ndarray, idx: np.ndarray, vec: np.ndarray,
             energy: float, gap: float, real_gauge: bool = False) -> Projection:
    full = np.zeros(basis.dim, dtype=complex)
    full[idx] = vec
    full /= np.linalg.norm(full)
    if real_gauge:
        full *= 1j ** ((occ[:, 1] + occ[:, 3]) % 4)
    photon = occ[:, :4]
    n_ph = photon.sum(axis=1)
    extra = occ[:, 4:].sum(axis=1) if occ.shape[1] > 4 else np.zeros(len(occ), dtype=int)
    two = (n_ph == 2) & (extra == 0)
    f1 = photon[:, 0] + photon[:, 1]
    f2 = photon[:, 2] + photon[:, 3]
    cross = two & (f1 == 1) & (f2 == 1)
    amps = np.zeros(4, dtype=complex)
    for i in np.flatnonzero(cross):
        la = 1 if photon[i, 0] else 2
        lb = 1 if photon[i, 2] else 2
        amps[2 * (la - 1) + (lb - 1)] = full[i]
    cw = float(np.sum(np.abs(amps) ** 2))
    sw = float(np.sum(np.abs(full[two & ~cross]) ** 2))
    rem = math.sqrt(max(0.0, 1.0 - cw - sw))
    # fix the global phase on the largest amplitude
    j = int(np.argmax(np.abs(amps)))
    amps = amps * (abs(amps[j]) / amps[j]) / math.sqrt(cw)
    return Projection(amps, cw, sw, rem, energy, gap)


def _split_cluster(H: sp.spmatrix, vecs: np.ndarray, energies: np.ndarray, target: float,
                   rel_tol: float = 1e-8):
    """Indices of the eigenvalues forming the cluster closest to ``target``."""
    j = int(np.argmin(np.abs(energies - target)))
    scale = max(abs(energies[j]), 1.0)
    members = np.flatnonzero(np.abs(energies - energies[j]) <= rel_tol * scale)
    others = np.delete(energies, members)
    gap = float(np.min(np.abs(others - energies[j]))) if others.size else math.inf
    return members, gap


def two_photon_projection(matrix: OperatorMatrix, target=(2, 1), n_candidates: int = 8,
                          rel_tol: float = 1e-8, guard_band: float | None = 0.05) -> Projection:
    """Project the eigenvector of c^dag_{1,lam1} c^dag_{2,lam2}|0> onto two photons.

    Free case: the sector is fixed by the per-polarization photon-number
    parities; the lam-exchange degeneracy inside it is lifted by the
    commuting polarization-1 Hamiltonian.  Magnetic case: total parity,
    nearest eigenvalue to E_ground + tau_{1,lam1} + tau_{2,lam2}.
    """
    params = matrix.params
    basis = matrix.basis
    occ = basis.occupations()
    lam1, lam2 = target
    if matrix.kind == "free":
        roots = free_roots_closed(params)
        t1, t2 = roots.tau
        want = [0, 0]
        want[lam1 - 1] += 1
        want[lam2 - 1] += 1
        p1 = (occ[:, 0] + occ[:, 2]) % 2
        p2 = (occ[:, 1] + occ[:, 3]) % 2
        idx = np.flatnonzero((p1 == want[0] % 2) & (p2 == want[1] % 2))
        ground = float(matrix.lowest(1)[0])
        energy_target = ground + t1 + t2
        Hs = matrix.H[idx][:, idx]
        w, v = _eigs_near(Hs, energy_target, n_candidates)
        members, gap = _split_cluster(Hs, v, w, energy_target, rel_tol)
        if abs(w[members[0]] - energy_target) > 0.1 * min(t1, t2):
            raise IdentificationError("no eigenvalue near tau_1 + tau_2 in the sector")
        sub = v[:, members]
        if len(members) > 1:
            H1 = matrix.parts["pol1"][idx][:, idx]
            small = sub.conj().T @ (H1 @ sub)
            e1, rot = np.linalg.eigh((small + small.conj().T) / 2)
            # pol-1 energy: ground share plus the quasi-photons carrying lam = 1
            pol1_target = ground / 2 + (t1 if lam1 == 1 else 0) + (t2 if lam2 == 1 else 0)
            order = np.argsort(np.abs(e1 - pol1_target))
            if len(order) > 1 and abs(e1[order[1]] - e1[order[0]]) <= rel_tol * max(abs(e1).max(), 1):
                raise IdentificationError("degenerate polarization-1 energies")
            vec = sub @ rot[:, order[0]]
        else:
            vec = sub[:, 0]
        return _project(basis, occ, idx, vec, float(w[members[0]]), gap)

    roots = magnetic_roots(params, guard_band=guard_band)
    idx = np.flatnonzero(occ.sum(axis=1) % 2 == 0)
    Hs = matrix.H[idx][:, idx]
    ground = float(_lowest(Hs, 1, shift=-0.5 * min(params.kappa))[0])
    energy_target = ground + roots.tau[(1, lam1)] + roots.tau[(2, lam2)]
    w, v = _eigs_near(Hs, energy_target, n_candidates)
    members, gap = _split_cluster(Hs, v, w, energy_target, rel_tol)
    if len(members) > 1:
        raise IdentificationError(
            f"{len(members)} eigenvalues within {rel_tol:g} of the target level")
    return _project(basis, occ, idx, v[:, members[0]], float(w[members[0]]), gap,
                    matrix.parts.get("real_gauge", False))


def entanglement_oracle(amplitudes) -> EntanglementReport:
    """Explicit |psi><psi|, index-summed trace over qubit B, 2x2 eigensolve."""
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    rho = np.outer(psi, psi.conj()).reshape(2, 2, 2, 2)
    rho_a = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for ap in range(2):
            rho_a[a, ap] = sum(rho[a, b, ap, b] for b in range(2))
    lam = np.linalg.eigvalsh(rho_a)
    lam = np.clip(lam, 0.0, 1.0)
    return report_from_eigenvalues(float(lam[0]), float(lam[1]))


# -- end-to-end run --------------------------------------------------------------

@dataclass(frozen=True)
class OracleRow:
    check: str      # "level" or "entanglement"
    cutoff: int
    level: int
    predicted: float
    observed: float

    @property
    def deviation(self) -> float:
        return abs(self.observed - self.predicted)


@dataclass(frozen=True)
class OracleRun:
    rows: tuple[OracleRow, ...]
    spectrum: ConvergenceReport
    entanglement_budget: float
    entanglement_deviation: float
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.spectrum_ok and self.entanglement_deviation <= self.entanglement_budget

    @property
    def spectrum_ok(self) -> bool:
        reps = self.spectrum.reports
        if not self.spectrum.decreasing:
            return False
        if len(reps) < 2:
            return reps[0].max_deviation <= self.spectrum.floor
        step = float(np.abs(reps[-1].observed - reps[-2].observed).max())
        return reps[-1].max_deviation <= step + self.spectrum.floor


def run_oracle(params: ModelParams, cutoffs, magnetic: bool = False, n_levels: int = 6,
               target=(2, 1), dim_cap: int = DIM_CAP) -> OracleRun:
    """Spectrum convergence plus the two-photon entanglement comparison.

    The entanglement budget is the truncation change between the last two
    cutoffs plus E_analytic * (M + same-frequency weight), the size of the
    state components the analytic construction leaves out.
    """
    from .entangle import free_measures, magnetic_measures

    cutoffs = list(cutoffs)
    if not cutoffs or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be a non-empty increasing list")
    for c in cutoffs:
        TruncatedBasis(PHOTON_MODES + ((LANDAU,) if magnetic else ()), c, dim_cap)

    rows: list[OracleRow] = []
    reports = []
    Es = []
    proj = None
    for c in cutoffs:
        if magnetic:
            m = build_hk_magnetic(params, c, dim_cap=dim_cap)
            pred = magnetic_level_predictions(params, n_levels, c)
        else:
            m = build_hph(params, c, dim_cap=dim_cap)
            pred = free_level_predictions(params, n_levels, c)
        rep = spectrum_check(m, pred, n_levels)
        reports.append(rep)
        rows += [OracleRow("level", c, i, float(p), float(o))
                 for i, (p, o) in enumerate(zip(rep.predicted, rep.observed))]
        if params.epsilon > 0:
            proj = two_photon_projection(m, target)
            Es.append(entanglement_oracle(proj.amplitudes).E)
        else:
            Es.append(0.0)
    top = max(float(np.abs(r.predicted).max()) for r in reports)
    conv = ConvergenceReport(tuple(reports), floor=64 * np.finfo(float).eps * max(top, 1.0))

    analytic = (magnetic_measures if magnetic else free_measures)(params, *target).E
    rows += [OracleRow("entanglement", c, 0, analytic, e) for c, e in zip(cutoffs, Es)]
    trunc = abs(Es[-1] - Es[-2]) if len(Es) > 1 else 0.0
    neglected = (proj.remainder + proj.same_weight) if proj is not None else 0.0
    budget = trunc + abs(analytic) * neglected + 64 * np.finfo(float).eps * abs(analytic)
    dev = abs(Es[-1] - analytic)
    msgs = [f"spectrum deviations by cutoff: {', '.join(f'{d:.3g}' for d in conv.deviations)}",
            f"entanglement |E_oracle - E_analytic| = {dev:.3g} (budget {budget:.3g})"]
    return OracleRun(tuple(rows), conv, budget, dev, tuple(msgs))
