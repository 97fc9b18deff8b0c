"""Character-level bookkeeping for homogeneous spaces X = G/H.

The group G is assumed quasi-trivial in the multiplicative sense: its
character lattice Ghat is a permutation lattice and its Picard group
vanishes.  Mhat is the character module of the largest multiplicative
quotient of H and ``restriction`` is the map Ghat -> Mhat.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import is_coflasque, is_flasque, tate_cohomology
from .errors import ConstructionFailure, TorsionInput
from .groups import FiniteGroup
from .lattice import (
    GLattice,
    GMap,
    GModule,
    _make,
    as_lattice,
    cokernel_of_map,
    cols_of,
    direct_sum,
    dual,
    from_cols,
    hstack,
    kernel_of_map,
    rows_of,
    vstack,
    zeye,
    zmul,
)
from .normal_forms import solve_integer
from .resolutions import (
    Resolution,
    Verdict,
    Verdict3,
    coflasque_resolution,
    exactness_report,
    flasque_resolution,
    is_permutation_bounded,
    permutation_embedding,
    similarity_fingerprint,
)


@dataclass(frozen=True, eq=False)
class HomSpaceSpec:
    group: FiniteGroup
    ghat: GLattice
    mhat: GModule
    restriction: GMap

    def problems(self) -> list:
        out = []
        if self.restriction.source is not self.ghat or self.restriction.target is not self.mhat:
            out.append("restriction must map ghat to mhat")
        elif not self.restriction.is_equivariant():
            out.append("restriction is not equivariant")
        if not self.ghat.is_lattice:
            out.append("ghat must be a lattice")
        elif self.ghat.permutation is None or not self.ghat.permutation.verify(self.ghat):
            out.append("ghat carries no permutation certificate")
        return out


@dataclass(frozen=True, eq=False)
class QuotientInvariants:
    u_x: GLattice
    u_inclusion: GMap
    pic_x: GModule


@dataclass(frozen=True, eq=False)
class QuasiResolutionReport:
    s0: GLattice
    e0: GLattice
    u_y0: GLattice
    pic_y0: GModule
    resolution: Resolution
    u_sequence: tuple
    permutation_verdict: Verdict3
    certificates: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Tower:
    q0: GLattice
    p0: GLattice
    e0: GLattice
    s0: GLattice
    f0: GLattice
    maps: dict
    certificates: dict


def quotient_invariants(spec: HomSpaceSpec) -> QuotientInvariants:
    """U(X) = ker(Ghat -> Mhat) and Pic = coker(Ghat -> Mhat)."""
    U, inc = kernel_of_map(spec.restriction)
    return QuotientInvariants(U, inc, cokernel_of_map(spec.restriction))


def _coords(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Integer coordinates of each column of ``vectors`` in the columns of ``basis``."""
    rows = rows_of(basis)
    out = []
    for v in cols_of(vectors):
        x = solve_integer(rows, v, basis.shape[0], basis.shape[1])
        if x is None:
            raise ConstructionFailure("vector outside the kernel lattice")
        out.append(x)
    return from_cols(out, basis.shape[1])


def second_construction(spec: HomSpaceSpec, seed: int | None = None, norm_bound: int = 2,
                        node_budget: int = 4000) -> QuasiResolutionReport:
    """Flasque quasi-resolution data: Shat0, Ehat0, Uhat(Y0), Pic(Y0bar)."""
    issues = spec.problems()
    if issues:
        raise ConstructionFailure("; ".join(issues))
    res = flasque_resolution(spec.mhat, seed=seed)
    if not res.certificates.get("exactness") or res.certificates.get("mid_class") != "flasque":
        raise ConstructionFailure("flasque resolution of mhat failed to certify")
    E0, S0 = res.sub, res.mid
    g, s = spec.ghat.rank, S0.rank
    m = spec.mhat.rank
    combined = GMap(direct_sum(spec.ghat, S0), spec.mhat,
                    hstack([spec.restriction.matrix, -res.project.matrix], m))
    U, inc = kernel_of_map(combined)
    pic = cokernel_of_map(combined)

    # E0 -> U via e -> (0, iota e); U -> Ghat via the first coordinate block
    e_in_cover = vstack([np.zeros((g, E0.rank), dtype=np.int64), res.inject.matrix], E0.rank)
    e_to_u = GMap(E0, U, _coords(inc.matrix, e_in_cover))
    first_block = hstack([zeye(g), np.zeros((g, s), dtype=np.int64)], g)
    u_to_g = GMap(U, spec.ghat, zmul(first_block, inc.matrix))
    cert = exactness_report(e_to_u, u_to_g)
    cert["pic_trivial"] = pic.is_zero()
    cert["u_flasque"] = bool(is_flasque(U))
    cert["u_coflasque"] = bool(is_coflasque(U))
    if not (cert["exactness"] and cert["pic_trivial"]):
        raise ConstructionFailure(f"diagram certificate failed: {cert}")
    verdict = is_permutation_bounded(U, norm_bound=norm_bound, node_budget=node_budget)
    if verdict.value is Verdict.NO:
        raise ConstructionFailure(f"U(Y0) is not permutation: {verdict.certificate}")
    cert["resolution"] = "flasque_resolution (quotient shape) of mhat"
    return QuasiResolutionReport(S0, E0, U, pic, res, (e_to_u, u_to_g), verdict, cert)


def coflasque_tower(mhat_tor: GModule, seed: int | None = None) -> Tower:
    """The four-lattice diagram built from a coflasque resolution of Mhat."""
    if not mhat_tor.is_lattice:
        raise TorsionInput("coflasque_tower requires a torsion-free character lattice")
    G = mhat_tor.group
    co = coflasque_resolution(mhat_tor, seed=seed)          # Q0 -> P0 -> M
    emb = permutation_embedding(co.sub, seed=None if seed is None else seed + 1)   # Q0 -> E0 -> S0
    Q0, P0, E0, S0 = co.sub, co.mid, emb.mid, emb.quot
    p, e = P0.rank, E0.rank
    rel = vstack([co.inject.matrix, -emb.inject.matrix], Q0.rank)
    cover = direct_sum(P0, E0)
    F0, pi, sigma = as_lattice(_make(G, list(cover.matrices), rel))

    def block(rows, first, second):
        return hstack([first, second], rows)

    p_to_f = GMap(P0, F0, zmul(pi, vstack([zeye(p), np.zeros((e, p), dtype=np.int64)], p)))
    e_to_f = GMap(E0, F0, zmul(pi, vstack([np.zeros((p, e), dtype=np.int64), zeye(e)], e)))
    f_to_s = GMap(F0, S0, zmul(block(S0.rank, np.zeros((S0.rank, p), dtype=np.int64), emb.project.matrix), sigma))
    f_to_m = GMap(F0, mhat_tor, zmul(block(mhat_tor.rank, co.project.matrix,
                                           np.zeros((mhat_tor.rank, e), dtype=np.int64)), sigma))
    row_p = exactness_report(p_to_f, f_to_s)
    row_e = exactness_report(e_to_f, f_to_m)
    fp_f = similarity_fingerprint(F0)
    fp_s = similarity_fingerprint(S0)
    cert = {
        "coflasque_resolution": co.certificates,
        "permutation_embedding": emb.certificates,
        "p0_f0_s0_exact": row_p["exactness"],
        "e0_f0_m_exact": row_e["exactness"],
        "fingerprint_f0_equals_s0": fp_f == fp_s,
        "s0_flasque": bool(is_flasque(S0)),
        "q0_coflasque": bool(is_coflasque(Q0)),
    }
    maps = {"q0_to_p0": co.inject, "p0_to_m": co.project, "q0_to_e0": emb.inject,
            "e0_to_s0": emb.project, "p0_to_f0": p_to_f, "e0_to_f0": e_to_f,
            "f0_to_s0": f_to_s, "f0_to_m": f_to_m}
    return Tower(Q0, P0, E0, S0, F0, maps, cert)


def homspace_r_count(spec: HomSpaceSpec, g_classes: int, seed: int | None = None):
    """Local count of the flasque part times the user-supplied |G(k)/R|."""
    if g_classes < 1:
        raise ValueError("g_classes must be a positive integer")
    report = second_construction(spec, seed=seed)
    h1 = tate_cohomology(-1, spec.group.whole(), dual(report.s0))
    return {"h1_factor": h1, "total_lower_bound": h1.order * g_classes, "report": report}

