"""The identity battery behind ``bundlehodge verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import moduli, oracle
from .errors import HodgeError
from .memo import MemoStore
from .series import specialize_diag

CHECKS = (
    "closed_form",
    "chi_closed_form",
    "euler_signature",
    "betti_two_engine",
    "jacobian_factor",
    "diamond_properties",
    "shift_invariance",
    "cap_robustness",
)

# shift invariance is checked without the memo shortcut, so keep its cap modest
SHIFT_CHECK_CAP = 24


@dataclass
class CellResult:
    n: int
    d: int
    g: int
    status: Dict[str, str] = field(default_factory=dict)  # check -> PASS / FAIL / SKIP
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _diff_message(name, a, b):
    diff = oracle.first_difference(a, b)
    if diff is None:
        return f"{name}: polynomials differ"
    p, q, va, vb = diff
    return f"{name}: first difference at x^{p} y^{q}: {va} != {vb}"


def check_cell(n: int, d: int, g: int, store: Optional[MemoStore] = None) -> CellResult:
    store = MemoStore() if store is None else store
    cell = CellResult(n, d, g)

    def run(name: str, fn: Callable[[], Optional[str]]):
        try:
            problem = fn()
        except HodgeError as exc:
            problem = f"{name}: {exc}"
        if problem is None:
            cell.status[name] = "PASS"
        elif problem == "SKIP":
            cell.status[name] = "SKIP"
        else:
            cell.status[name] = "FAIL"
            cell.failures.append(problem)

    kw = dict(store=store)

    def closed_form():
        fixed = moduli.hp_fixed_det(n, d, g, **kw)
        if n == 2:
            ref = oracle.closed_form_rank2(g)
        elif n == 3:
            ref = oracle.closed_form_rank3(g)
        else:
            return "SKIP"
        return None if fixed == ref else _diff_message("closed form", fixed, ref)

    def chi():
        got = moduli.chi_characteristic(n, d, g, **kw)
        want = oracle.chi_closed_form(n, g)
        if got != want:
            return f"chi closed form: got {got}, expected {want}"
        full = moduli.chi_characteristic(n, d, g, moduli.FULL, **kw)
        if not full.is_zero():
            return f"chi of the full moduli space is {full}, expected 0"
        return None

    def euler_signature():
        e, s = moduli.euler_and_signature(n, d, g, **kw)
        expected = (0, 0) if n >= 2 else (1, 1)
        return None if (e, s) == expected else f"euler/signature = {(e, s)}, expected {expected}"

    def betti():
        got = specialize_diag(moduli.hp_full(n, d, g, **kw)).exact()
        want = oracle.ab_poincare_full(n, d, g)
        if got != want:
            k = min(e for e in set(got.coeffs) | set(want.coeffs) if got[e] != want[e])
            return f"Betti two-engine agreement: first difference at t^{k}: {got[k]} != {want[k]}"
        return None

    def jacobian():
        full = moduli.hp_full(n, d, g, **kw)
        rebuilt = (moduli.jacobian_hp(g, full.cap) * moduli.hp_fixed_det(n, d, g, **kw).with_cap(full.cap))
        return None if rebuilt == full else _diff_message("Jacobian factor identity", rebuilt, full)

    def properties():
        moduli.check_hodge_polynomial(moduli.hp_full(n, d, g, **kw), moduli.dim_full(n, g), g, moduli.FULL)
        moduli.check_hodge_polynomial(moduli.hp_fixed_det(n, d, g, **kw), moduli.dim_fixed(n, g), g, moduli.FIXED)
        return None

    def shift():
        cap = min(SHIFT_CHECK_CAP, moduli.default_cap(n, g))
        a = moduli.F(n, d, g, cap, store=MemoStore(), reduce_degree=False)
        b = moduli.F(n, d + n, g, cap, store=MemoStore(), reduce_degree=False)
        return None if a == b else _diff_message("F degree-shift invariance", a, b)

    def cap_robust():
        base = moduli.hp_full(n, d, g, **kw)
        wider = moduli.hp_full(n, d, g, cap=moduli.default_cap(n, g) + 4, **kw)
        return None if base == wider else _diff_message("cap robustness", base, wider)

    for name, fn in zip(
        CHECKS,
        (closed_form, chi, euler_signature, betti, jacobian, properties, shift, cap_robust),
    ):
        run(name, fn)
    return cell


def cells(max_rank: int, max_genus: int):
    for n in range(1, max_rank + 1):
        for d in range(n):
            if math.gcd(n, d) != 1:
                continue
            for g in range(2, max_genus + 1):
                yield n, d, g


def run_verification(max_rank: int = 3, max_genus: int = 4, store: Optional[MemoStore] = None) -> List[CellResult]:
    store = MemoStore() if store is None else store
    results = [check_cell(n, d, g, store) for n, d, g in cells(max_rank, max_genus)]
    results.sort(key=lambda c: (c.n, c.d, c.g))
    return results


def format_matrix(results: List[CellResult]) -> str:
    header = ["n", "d", "g"] + list(CHECKS)
    rows = [[str(c.n), str(c.d), str(c.g)] + [c.status.get(k, "-") for k in CHECKS] for c in results]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines)
