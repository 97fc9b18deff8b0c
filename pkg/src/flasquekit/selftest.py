"""Quick invariant checks over a slice of the bundled corpus."""
from __future__ import annotations

from .cohomology import is_coflasque, is_flasque, tate_cohomology
from .corpus import corpus
from .groups import by_name
from .lattice import dual, permutation_lattice
from .resolutions import coflasque_resolution, flasque_resolution
from .tori import TorusSpec, norm_one_lattice, r_equivalence_local

SELFTEST_GROUPS = ("C2", "C3", "V4", "S3")


def _shapiro():
    bad = []
    for name in SELFTEST_GROUPS:
        G = by_name(name)
        for K in G.subgroups:
            P = permutation_lattice(G, K)
            if not (is_flasque(P) and is_coflasque(P)):
                bad.append(f"{name}: Z[G/{K.members}]")
    return not bad, bad


def _resolutions():
    bad = []
    lattices = corpus(SELFTEST_GROUPS)
    for label, L in lattices:
        co = coflasque_resolution(L)
        fl = flasque_resolution(L)
        if not (co.certified and co.certificates["fixed_point_surjectivity"] and fl.certified):
            bad.append(label)
    return not bad, {"checked": len(lattices), "failed": bad}


def _duality():
    bad = []
    for label, L in corpus(SELFTEST_GROUPS):
        for H in L.group.subgroups:
            if tate_cohomology(1, H, dual(L)).order != tate_cohomology(-1, H, L).order:
                bad.append(f"{label} at {H.members}")
    return not bad, bad


def _tori():
    expected = {"C2": 1, "C3": 1, "C4": 1, "C6": 1, "V4": 2}
    got = {}
    for name in expected:
        G = by_name(name)
        got[name] = r_equivalence_local(TorusSpec(G, norm_one_lattice(G))).count
    return got == expected, got


def run_selftest() -> dict:
    checks = []
    for name, fn in (("shapiro", _shapiro), ("resolutions", _resolutions),
                     ("duality", _duality), ("norm_one_tori", _tori)):
        ok, detail = fn()
        checks.append({"name": name, "passed": ok, "detail": detail})
    return {"passed": all(c["passed"] for c in checks), "checks": checks}
