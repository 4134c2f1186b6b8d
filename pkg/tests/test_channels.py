import numpy as np
import pytest

from choiscope.channels import (
    Channel,
    PPWitness,
    PropertyReport,
    Verdict,
    apply,
    apply_kraus,
    apply_via_choi,
    canonical_channel,
    check_pp,
    concatenate,
    dual_channel,
    erasure_channel,
    from_kraus,
    identity_channel,
    kraus_decompose,
    max_entropy_erasure,
    partial_transpose_channel,
    property_report,
    random_channel,
    reshuffle,
    tensor_channels,
    transpose_channel,
    unitary_channel,
)
from choiscope.errors import ArgumentError, DimensionError, PropertyError
from choiscope.linalg import frobenius_norm, hs_inner
from choiscope.sampling import ginibre, random_density, random_kraus, random_unitary
from choiscope.wires import bell_state, cup, swap, vec


def choi_oracle(omega, dim_a):
    """Choi matrix straight from its definition: sum_ij |i><j| (x) omega(|i><j|)."""
    blocks = []
    for i in range(dim_a):
        for j in range(dim_a):
            e = np.zeros((dim_a, dim_a))
            e[i, j] = 1
            blocks.append((e, omega(e)))
    return sum(np.kron(e, out) for e, out in blocks)


def superop_oracle(omega, dim_a):
    """Columns are vec(omega(E_rc)) for the column-stacked basis E_rc."""
    cols = []
    for c in range(dim_a):
        for r in range(dim_a):
            e = np.zeros((dim_a, dim_a))
            e[r, c] = 1
            cols.append(omega(e).T.reshape(-1))
    return np.stack(cols, axis=1)


def test_reshuffle_identity_channel():
    for d in (1, 2, 3):
        c = cup(d).column()
        np.testing.assert_array_equal(reshuffle(np.eye(d * d), d, d), c @ c.T)
        np.testing.assert_array_equal(reshuffle(c @ c.T, d, d, inverse=True), np.eye(d * d))


def test_reshuffle_transpose_channel():
    s = swap(2, 2)
    np.testing.assert_array_equal(superop_oracle(lambda r: r.T, 2), s)
    np.testing.assert_array_equal(reshuffle(s, 2, 2), s)


def test_reshuffle_roundtrip_and_norm(rng):
    s = ginibre(9, 4, rng)
    j = reshuffle(s, 2, 3)
    assert j.shape == (6, 6)
    np.testing.assert_array_equal(reshuffle(j, 2, 3, inverse=True), s)
    assert frobenius_norm(j) == pytest.approx(frobenius_norm(s))


def test_reshuffle_index_law(rng):
    dim_a, dim_b = 2, 3
    s = ginibre(dim_b**2, dim_a**2, rng)
    j = reshuffle(s, dim_a, dim_b)
    for i in range(dim_a):
        for m in range(dim_b):
            for jj in range(dim_a):
                for n in range(dim_b):
                    assert j[i * dim_b + m, jj * dim_b + n] == s[n * dim_b + m, jj * dim_a + i]


def test_reshuffle_shape_errors():
    with pytest.raises(DimensionError):
        reshuffle(np.eye(4), 2, 3)
    with pytest.raises(DimensionError):
        reshuffle(np.eye(5), 2, 3, inverse=True)


def test_kraus_channel_matches_definition(rng):
    ops = random_kraus(3, 2, 3, rng)
    c = from_kraus(ops)
    omega = lambda r: apply_kraus(ops, r)  # noqa: E731
    np.testing.assert_allclose(c.choi, choi_oracle(omega, 3), atol=1e-13)
    np.testing.assert_allclose(c.superop, superop_oracle(omega, 3), atol=1e-13)


def test_from_kraus_examples(rng):
    assert from_kraus([np.eye(3)]).distance(identity_channel(3)) == 0
    u = random_unitary(3, rng)
    c = cup(3).column()
    expected = np.kron(np.eye(3), u) @ c @ c.T @ np.kron(np.eye(3), u.conj().T)
    np.testing.assert_allclose(from_kraus([u]).choi, expected, atol=1e-13)
    erase = from_kraus([[[1, 0], [0, 0]], [[0, 1], [0, 0]]])
    np.testing.assert_array_equal(erase.choi, np.kron(np.eye(2), np.diag([1, 0])))


def test_from_kraus_errors():
    with pytest.raises(ArgumentError):
        from_kraus([])
    with pytest.raises(DimensionError):
        from_kraus([np.eye(2), np.eye(3)])


def test_kraus_decompose_identity():
    ops = kraus_decompose(identity_channel(3))
    assert len(ops) == 1
    np.testing.assert_allclose(ops[0], np.eye(3), atol=1e-12)


def test_kraus_decompose_unitary(rng):
    u = random_unitary(3, rng)
    (f,) = kraus_decompose(unitary_channel(u))
    k = np.flatnonzero(np.abs(u.reshape(-1)) > 1e-9)[0]
    np.testing.assert_allclose(f, u * np.abs(u.flat[k]) / u.flat[k], atol=1e-12)
    assert f.flat[0].real > 0 and abs(f.flat[0].imag) < 1e-12


def test_kraus_decompose_roundtrip(rng):
    ops = random_kraus(3, 4, 3, rng)
    c = from_kraus(ops)
    got = kraus_decompose(c)
    assert len(got) == 3
    np.testing.assert_allclose(sum(f.conj().T @ f for f in got), sum(f.conj().T @ f for f in ops), atol=1e-9)
    assert from_kraus(got).distance(c) <= 1e-10


def test_kraus_decompose_rejects_non_cpp():
    with pytest.raises(PropertyError) as info:
        kraus_decompose(transpose_channel(2))
    assert info.value.value == pytest.approx(-1)


def test_apply_routes_agree(rng):
    for _ in range(5):
        c = random_channel(3, 2, 2, rng)
        rho = ginibre(3, 3, rng)
        np.testing.assert_allclose(apply(c, rho), apply_via_choi(c, rho), atol=1e-12)
        np.testing.assert_allclose(c(rho), apply_kraus(kraus_decompose(c), rho), atol=1e-10)


def test_apply_examples(rng):
    rho = random_density(3, rng)
    np.testing.assert_allclose(apply(identity_channel(3), rho), rho, atol=1e-15)
    out = random_density(2, rng)
    np.testing.assert_allclose(apply(erasure_channel(out, 3), rho), out, atol=1e-14)
    np.testing.assert_allclose(apply(transpose_channel(3), rho), rho.T, atol=1e-15)
    with pytest.raises(DimensionError):
        apply(identity_channel(2), rho)


def test_channel_is_read_only():
    c = identity_channel(2)
    with pytest.raises(ValueError):
        c.choi[0, 0] = 3
    with pytest.raises(DimensionError):
        Channel(np.eye(5), 2, 2)


def test_normalized_choi_ingest(rng):
    c = random_channel(2, 3, 2, rng)
    again = Channel.from_choi(c.choi_state(), 2, 3, normalized=True)
    assert again.distance(c) <= 1e-14
    assert np.trace(c.choi_state()).real == pytest.approx(1)


# --- verdicts -------------------------------------------------------------


def test_report_transpose_channel():
    r = property_report(transpose_channel(2))
    assert r.hp.holds and r.tp.holds and r.unital.holds and r.doubly_stochastic
    assert not r.cpp.holds and r.cpp.margin == pytest.approx(-1)
    assert r.pp.status == "no-violation-found"


def test_report_unitary_channel(rng):
    r = property_report(unitary_channel(random_unitary(3, rng)))
    assert r.cpp.holds and r.tp.holds and r.unital.holds and r.hp.holds
    assert not r.pp.violated


def test_report_erasure_channel(rng):
    r = property_report(erasure_channel(random_density(2, rng), 3))
    assert r.cpp.holds and r.tp.holds and not r.unital.holds
    r = property_report(erasure_channel(np.eye(2) / 2, 2))
    assert r.cpp.holds and r.tp.holds and r.unital.holds


def test_report_choi_trace():
    c = max_entropy_erasure(2, 3)
    r = property_report(c)
    assert r.choi_trace == pytest.approx(2)
    assert r.tp.holds and not r.unital.holds


def test_report_non_hermitian_map(rng):
    c = Channel(ginibre(4, 4, rng), 2, 2)
    r = property_report(c)
    assert not r.hp.holds and not r.cpp.holds
    assert r.pp.status == "not-hp"


def test_report_invariants_enforced():
    ok = Verdict(True, 0.0)
    no = Verdict(False, 1.0)
    pp = check_pp(identity_channel(2), restarts=1)
    with pytest.raises(DimensionError):
        PropertyReport(2, 3, ok, ok, ok, ok, pp, True, 2.0)
    with pytest.raises(ArgumentError):
        PropertyReport(2, 2, ok, ok, no, ok, pp, True, 2.0)


def test_pp_transpose_no_violation(backend):
    for d in (2, 3):
        v = check_pp(transpose_channel(d), backend=backend)
        assert v.status == "no-violation-found"
        assert v.best_value == pytest.approx(0, abs=1e-12)


def test_pp_partial_transpose_violation(backend):
    c = partial_transpose_channel(2, 2)
    v = check_pp(c, restarts=32, max_iters=200, backend=backend)
    assert v.violated
    assert v.best_value == pytest.approx(-0.5, abs=1e-6)
    assert v.witness.recompute(c.choi) == pytest.approx(v.witness.value, abs=1e-12)
    assert np.linalg.norm(v.witness.a) == pytest.approx(1) and np.linalg.norm(v.witness.b) == pytest.approx(1)


def test_pp_bell_input_gives_half_swap():
    c = partial_transpose_channel(2, 2)
    phi = bell_state(2).column()
    out = apply(c, phi @ phi.conj().T)
    np.testing.assert_allclose(out, swap(2, 2) / 2, atol=1e-15)
    assert np.linalg.eigvalsh(out)[0] == pytest.approx(-0.5)


def test_pp_cpp_channel_no_violation(rng, backend):
    c = random_channel(3, 3, 2, rng)
    v = check_pp(c, restarts=8, backend=backend)
    assert not v.violated and v.best_value >= -1e-12


def test_pp_objective_monotone(backend, rng):
    g = ginibre(12, 12, rng)
    c = Channel(g + g.conj().T, 3, 4)
    v = check_pp(c, restarts=4, backend=backend)
    assert np.all(np.diff(v.history) <= 1e-12)


def test_pp_parallel_matches_sequential(rng):
    g = ginibre(9, 9, rng)
    c = Channel(g + g.conj().T, 3, 3)
    a = check_pp(c, restarts=16, seed=5)
    b = check_pp(c, restarts=16, seed=5, workers=4)
    assert a.best_value == b.best_value and a.status == b.status
    np.testing.assert_array_equal(a.witness.a, b.witness.a)


def test_pp_witness_value_recomputes(rng):
    w = PPWitness(a=np.array([1, 0]), b=np.array([0, 1]), value=0.0)
    assert w.recompute(swap(2, 2)) == 0
    w = PPWitness(a=np.array([1, 0]), b=np.array([1, 0]), value=1.0)
    assert w.recompute(swap(2, 2)) == 1


# --- dual, composition ----------------------------------------------------


def test_dual_matches_swap_formula(rng):
    c = Channel(ginibre(6, 6, rng), 2, 3)
    expected = swap(2, 3) @ np.conj(c.choi) @ swap(3, 2)
    d = dual_channel(c)
    assert (d.dim_a, d.dim_b) == (3, 2)
    np.testing.assert_array_equal(d.choi, expected)
    np.testing.assert_allclose(d.superop, c.superop.conj().T, atol=1e-15)


def test_dual_adjoint_identity(rng):
    c = random_channel(2, 3, 2, rng)
    d = dual_channel(c)
    for _ in range(5):
        rho, obs = ginibre(2, 2, rng), ginibre(3, 3, rng)
        assert np.isclose(hs_inner(obs, apply(c, rho)), hs_inner(apply(d, obs), rho), atol=1e-12)


def test_dual_examples(rng):
    c = Channel(ginibre(6, 6, rng), 3, 2)
    assert dual_channel(dual_channel(c)).distance(c) == 0
    u = random_unitary(3, rng)
    assert dual_channel(unitary_channel(u)).distance(unitary_channel(u.conj().T)) <= 1e-12
    tp = random_channel(2, 3, 3, rng)
    assert property_report(dual_channel(tp)).unital.holds


def test_concatenate_matches_superop_product(rng):
    c1 = Channel(ginibre(6, 6, rng), 2, 3)
    c2 = Channel(ginibre(12, 12, rng), 3, 4)
    c = concatenate(c1, c2)
    assert (c.dim_a, c.dim_b) == (2, 4)
    np.testing.assert_allclose(c.superop, c2.superop @ c1.superop, atol=1e-12)


def test_concatenate_examples(rng):
    assert concatenate(identity_channel(2), identity_channel(2)).distance(identity_channel(2)) == 0
    u1, u2 = random_unitary(3, rng), random_unitary(3, rng)
    got = concatenate(unitary_channel(u1), unitary_channel(u2))
    assert got.distance(unitary_channel(u2 @ u1)) <= 1e-12
    with pytest.raises(DimensionError):
        concatenate(identity_channel(2), identity_channel(3))


def test_tensor_matches_q_formula_and_kraus(rng):
    ops1, ops2 = random_kraus(2, 3, 2, rng), random_kraus(3, 2, 2, rng)
    c1, c2 = from_kraus(ops1), from_kraus(ops2)
    t = tensor_channels(c1, c2)
    q = np.kron(np.kron(np.eye(2), swap(3, 3)), np.eye(2))
    np.testing.assert_allclose(t.choi, q @ np.kron(c1.choi, c2.choi) @ q.conj().T, atol=1e-13)
    via_kraus = from_kraus([np.kron(f, g) for f in ops1 for g in ops2])
    assert t.distance(via_kraus) <= 1e-12
    assert (t.dim_a, t.dim_b) == (6, 6)


def test_tensor_q_formula_rectangular(rng):
    c1 = Channel(ginibre(6, 6, rng), 2, 3)
    c2 = Channel(ginibre(4, 4, rng), 4, 1)
    q = np.kron(np.kron(np.eye(2), swap(3, 4)), np.eye(1))
    np.testing.assert_allclose(tensor_channels(c1, c2).choi, q @ np.kron(c1.choi, c2.choi) @ q.T, atol=1e-13)


def test_tensor_examples(rng):
    assert tensor_channels(identity_channel(2), identity_channel(3)).distance(identity_channel(6)) == 0
    c = random_channel(2, 3, 2, rng)
    lifted = tensor_channels(identity_channel(2), c)
    phi = cup(2).column()
    assert frobenius_norm(apply(lifted, phi @ phi.T) - c.choi) <= 1e-13


def test_canonical_channels(rng):
    np.testing.assert_array_equal(canonical_channel("transpose", 2).choi, swap(2, 2))
    out = random_density(3, rng)
    np.testing.assert_array_equal(canonical_channel("erasure", out, 2).choi, np.kron(np.eye(2), out))
    np.testing.assert_allclose(canonical_channel("max_entropy_erasure", 2, 3).choi, np.eye(6) / 3)
    pt = canonical_channel("partial_transpose", 2, 3)
    assert pt.distance(tensor_channels(identity_channel(2), transpose_channel(3))) == 0
    assert canonical_channel("identity", 2).distance(from_kraus([np.eye(2)])) == 0


def test_canonical_channel_validation():
    with pytest.raises(PropertyError):
        unitary_channel([[1, 1], [0, 1]])
    with pytest.raises(PropertyError):
        erasure_channel(np.diag([1.5, -0.5]), 2)
    with pytest.raises(PropertyError):
        erasure_channel(np.eye(2), 2)
    with pytest.raises(ArgumentError):
        canonical_channel("teleport", 2)


def test_partial_transpose_action(rng):
    rho = ginibre(6, 6, rng)
    expected = rho.reshape(2, 3, 2, 3).transpose(0, 3, 2, 1).reshape(6, 6)
    np.testing.assert_allclose(apply(partial_transpose_channel(2, 3), rho), expected, atol=1e-14)


def test_tp_criteria_agree_on_kraus_and_choi_routes(rng):
    for tp in (True, False):
        ops = random_kraus(3, 2, 3, rng, trace_preserving=tp)
        kraus_gap = frobenius_norm(sum(f.conj().T @ f for f in ops) - np.eye(3))
        r = property_report(from_kraus(ops))
        assert (kraus_gap <= 1e-9) == r.tp.holds == tp


def test_implication_chain(rng):
    samples = [random_channel(2, 2, k, rng) for k in (1, 2, 4)]
    g = ginibre(4, 4, rng)
    samples += [Channel(g + g.conj().T, 2, 2), Channel(g, 2, 2), transpose_channel(2), partial_transpose_channel(2, 2)]
    for c in samples:
        r = property_report(c, pp_restarts=8)
        if r.cpp.holds:
            assert not r.pp.violated
        if r.pp.status != "not-hp":
            assert r.hp.holds
