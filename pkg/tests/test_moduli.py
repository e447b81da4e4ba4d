import math
import threading

import pytest

from bundlehodge import moduli, oracle
from bundlehodge.errors import ConsistencyError, CoprimalityError, DomainError, InvalidInputError
from bundlehodge.memo import MemoKey, MemoStore
from bundlehodge.series import BiSeries, UniPoly, power, specialize_diag, specialize_y_minus1

RANK2_G2 = {(0, 0): 1, (1, 1): 1, (2, 1): 2, (1, 2): 2, (2, 2): 1, (3, 3): 1}

# sympy expansion of the three-term rank 3 closed form at g = 2
RANK3_G2 = {
    (0, 0): 1, (1, 1): 1, (1, 2): 2, (2, 1): 2, (2, 2): 3, (2, 3): 4, (2, 4): 1,
    (3, 2): 4, (3, 3): 7, (3, 4): 6, (3, 5): 4, (4, 2): 1, (4, 3): 6, (4, 4): 12,
    (4, 5): 6, (4, 6): 1, (5, 3): 4, (5, 4): 6, (5, 5): 7, (5, 6): 4, (6, 4): 1,
    (6, 5): 4, (6, 6): 3, (6, 7): 2, (7, 6): 2, (7, 7): 1, (8, 8): 1,
}

COPRIME_CASES = [(n, d, g) for n in (1, 2, 3, 4) for d in range(n) if math.gcd(n, d) == 1 for g in (2, 3)]


def jac(g, cap):
    return moduli.jacobian_hp(g, cap)


def test_ambient_rank1():
    cap = 14
    for g in (2, 3):
        expected = jac(g, cap) * BiSeries({(k, k): 1 for k in range(cap)}, cap)
        assert moduli.ambient_hp(1, g, cap) == expected


def test_ambient_constant_term():
    assert moduli.ambient_hp(2, 2, 10).coefficient(0, 0) == 1


@pytest.mark.parametrize("n,g", [(1, 2), (2, 2), (3, 3), (4, 2)])
def test_ambient_diagonal_matches_univariate(n, g):
    cap = 30
    assert specialize_diag(moduli.ambient_hp(n, g, cap)) == oracle.ab_ambient(n, g, cap)


@pytest.mark.parametrize("d", [-3, 0, 4])
def test_F_rank1(d):
    cap = 12
    assert moduli.F(1, d, 3, cap, store=MemoStore()) == moduli.ambient_hp(1, 3, cap)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_F_rank2_closed_forms(g):
    cap = 20
    store = MemoStore()
    assert moduli.F(2, 1, g, cap, store=store) == oracle.closed_form_F21(g, cap)
    assert moduli.F(2, 0, g, cap, store=store) == oracle.closed_form_F20(g, cap)


def test_F_rejects_low_genus():
    with pytest.raises(DomainError):
        moduli.F(2, 1, 1, 10)


def test_F_noncoprime_is_computable():
    # no coprimality requirement for the recursion itself
    assert moduli.F(2, 2, 2, 12, store=MemoStore()) == moduli.F(2, 0, 2, 12, store=MemoStore())


@pytest.mark.parametrize("n,d,g,cap", [(2, 1, 2, 20), (3, 1, 2, 22), (3, 0, 2, 18), (4, 1, 2, 20), (4, 2, 3, 16)])
def test_grouped_strategy_matches_direct(n, d, g, cap):
    grouped = moduli.F(n, d, g, cap, store=MemoStore())
    direct = moduli.F(n, d, g, cap, store=MemoStore(), strategy="direct")
    assert grouped == direct


@pytest.mark.parametrize("n,d", [(2, 1), (3, 1), (3, 2), (2, 0)])
@pytest.mark.parametrize("e", [1, -1, 2])
def test_F_shift_invariance_without_memo_shortcut(n, d, e):
    cap = 2 * moduli.dim_full(n, 2) + 2
    a = moduli.F(n, d, 2, cap, store=MemoStore(), reduce_degree=False)
    b = moduli.F(n, d + n * e, 2, cap, store=MemoStore(), reduce_degree=False)
    assert a == b


def test_memo_key_uses_residue():
    store = MemoStore()
    a = moduli.F(3, 1, 2, 16, store=store)
    assert MemoKey(3, 1, 2, 16) in store
    assert moduli.F(3, 7, 2, 16, store=store) is a
    assert MemoKey.for_query(3, -2, 2, 16).d_residue == 1


def test_hp_full_jacobian():
    for g in (2, 3, 4):
        assert moduli.hp_full(1, 0, g) == jac(g, 2 * g)


def test_hp_full_rank2_genus2():
    hp = moduli.hp_full(2, 1, 2)
    assert hp.total_degree() == 10
    assert hp.coefficient(0, 0) == 1
    expected = (jac(2, 10) * BiSeries(RANK2_G2, 10))
    assert hp == expected


@pytest.mark.parametrize("n,d,g", [(2, 1, 3), (3, 1, 2), (3, 2, 3)])
def test_hp_full_degree_shift(n, d, g):
    assert moduli.hp_full(n, d + n, g) == moduli.hp_full(n, d, g)
    assert moduli.hp_full(n, d - 2 * n, g) == moduli.hp_full(n, d, g)


def test_hp_full_errors():
    with pytest.raises(CoprimalityError):
        moduli.hp_full(2, 2, 2)
    with pytest.raises(CoprimalityError):
        moduli.hp_full(3, 0, 2)
    with pytest.raises(DomainError):
        moduli.hp_full(2, 1, 1)
    with pytest.raises(InvalidInputError):
        moduli.hp_full(2, 1, 2, cap=10)


def test_hp_fixed_det_examples():
    assert moduli.hp_fixed_det(1, 0, 3) == BiSeries.one(0)
    assert moduli.hp_fixed_det(2, 1, 2) == BiSeries(RANK2_G2, 6)
    assert specialize_diag(moduli.hp_fixed_det(2, 1, 2)) == UniPoly([1, 0, 1, 4, 1, 0, 1])
    assert moduli.hp_fixed_det(3, 1, 2) == BiSeries(RANK3_G2, 16)
    assert moduli.hp_fixed_det(3, 1, 2) == moduli.hp_fixed_det(3, 2, 2)


def test_chi_examples():
    assert moduli.chi_characteristic(2, 1, 2) == UniPoly([1, 1, -1, -1])
    expected = UniPoly([1, 1]) * UniPoly([1, 0, -1]) ** 2 * UniPoly([1, 0, 0, 1])
    assert moduli.chi_characteristic(3, 1, 2) == expected
    assert moduli.chi_characteristic(2, 1, 2, moduli.FULL).is_zero()
    assert moduli.chi_characteristic(3, 2, 3, moduli.FULL).is_zero()


def test_euler_and_signature():
    assert moduli.euler_and_signature(2, 1, 2) == (0, 0)
    assert moduli.euler_and_signature(3, 1, 3) == (0, 0)
    assert moduli.euler_and_signature(1, 0, 2) == (1, 1)


def test_report_examples():
    r = moduli.report(2, 1, 2, moduli.FIXED)
    assert r.dim_complex == 3
    assert r.betti == [1, 0, 1, 4, 1, 0, 1]
    assert r.hodge_number(2, 1) == 2
    assert r.euler == 0 and r.signature == 0

    jac_report = moduli.report(1, 0, 2, moduli.FULL)
    assert jac_report.dim_complex == 2
    assert jac_report.betti == [1, 4, 6, 4, 1]

    full = moduli.report(2, 1, 2, moduli.FULL)
    expected = UniPoly([1, 1]) ** 4 * UniPoly([1, 0, 1, 4, 1, 0, 1])
    assert full.betti == expected.to_list()
    assert full.chi.is_zero()


def test_report_invariants():
    for n, d, g in COPRIME_CASES:
        for variant in moduli.VARIANTS:
            r = moduli.report(n, d, g, variant)
            hp = r.polynomial()
            N = r.dim_complex
            for p, q, h in r.hodge_terms:
                assert h > 0
                assert hp.coefficient(q, p) == h
                assert hp.coefficient(N - p, N - q) == h
            assert r.betti[0] == 1
            assert len(r.betti) == 2 * N + 1
            for j, b in enumerate(r.betti):
                assert sum(h for p, q, h in r.hodge_terms if p + q == j) == b
            assert r.euler == sum((-1) ** j * b for j, b in enumerate(r.betti))
            if N:
                assert r.betti[1] == (2 * g if variant == moduli.FULL else 0)


@pytest.mark.parametrize("n,d,g", COPRIME_CASES)
def test_jacobian_factor_identity(n, d, g):
    full = moduli.hp_full(n, d, g)
    fixed = moduli.hp_fixed_det(n, d, g)
    assert jac(g, full.cap) * fixed.with_cap(full.cap) == full


@pytest.mark.parametrize("n,d,g", [(2, 1, 3), (3, 1, 2), (4, 1, 2)])
def test_cap_robustness(n, d, g):
    base = moduli.hp_full(n, d, g, store=MemoStore())
    for extra in (4, 7):
        wider = moduli.hp_full(n, d, g, cap=moduli.default_cap(n, g) + extra, store=MemoStore())
        assert wider == base


def test_check_hodge_polynomial_flags_asymmetry():
    bad = BiSeries({(0, 0): 1, (1, 0): 1, (1, 1): 1}, 2)
    with pytest.raises(ConsistencyError) as err:
        moduli.check_hodge_polynomial(bad, 1, 2, moduli.FIXED)
    assert err.value.invariant == "Hodge symmetry"
    with pytest.raises(ConsistencyError):
        moduli.check_hodge_polynomial(BiSeries({(0, 0): 1, (1, 1): -1}, 2), 1, 2, moduli.FIXED)


def test_memo_threads_deterministic():
    store = MemoStore()
    results = []

    def work():
        results.append(moduli.hp_full(3, 1, 3, store=store))

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert results[0] == moduli.hp_full(3, 1, 3, store=MemoStore())


def test_disk_cache_round_trip(tmp_path):
    store = MemoStore(tmp_path)
    a = moduli.F(3, 1, 2, 14, store=store)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "F_n3_r1_g2_cap14.json" in files
    fresh = MemoStore(tmp_path)
    assert moduli.F(3, 4, 2, 14, store=fresh) == a
    assert fresh.disk_hits >= 1


def test_disk_cache_rejects_bad_header(tmp_path):
    store = MemoStore(tmp_path)
    good = moduli.F(2, 1, 2, 12, store=store)
    path = tmp_path / MemoKey(2, 1, 2, 12).filename()
    text = path.read_text().replace('"cap": 12', '"cap": 13')
    path.write_text(text)
    fresh = MemoStore(tmp_path)
    assert moduli.F(2, 1, 2, 12, store=fresh) == good
    assert fresh.disk_rejects == 1


def test_disk_cache_rejects_garbage(tmp_path):
    (tmp_path / MemoKey(2, 1, 2, 12).filename()).write_text("{not json")
    store = MemoStore(tmp_path)
    assert moduli.F(2, 1, 2, 12, store=store) == moduli.F(2, 1, 2, 12, store=MemoStore())
    assert store.disk_rejects == 1
    # the rejected entry is overwritten by the recomputed one
    assert MemoStore(tmp_path).get(MemoKey(2, 1, 2, 12)) is not None
