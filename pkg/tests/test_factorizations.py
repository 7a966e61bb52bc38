import numpy as np
import pytest

from ftqc import factorizations as fz
from ftqc import tensors


def _instance(n, seed):
    data = tensors.random_instance(n, seed=seed)
    return data, tensors.compute_T(data)


def test_sparse_zero_threshold_round_trip():
    data, kin = _instance(3, 0)
    rep, lam = fz.sparse_truncate(data, kin.Tprime, 0.0)
    assert np.allclose(rep.dense(), data.V, atol=1e-14)
    n = 3
    assert rep.d == tensors.count_unique_above(data.V, 0.0) + n * (n + 1) // 2
    assert lam.method == "sparse"
    assert lam.total == lam.lambda_one + lam.lambda_two


def test_sparse_strict_threshold():
    data, kin = _instance(3, 1)
    t = abs(data.V[0, 1, 2, 0])
    rep, _ = fz.sparse_truncate(data, kin.Tprime, t)
    # the entry sitting exactly at the threshold is dropped
    assert rep.dense()[0, 1, 2, 0] == 0.0
    for _, _, _, _, value in rep.entries:
        assert abs(value) > t


def test_sparse_entry_canonical_order():
    data, kin = _instance(4, 2)
    rep, _ = fz.sparse_truncate(data, kin.Tprime, 0.2)
    for p, q, r, s, _ in rep.entries:
        assert p <= q and r <= s and (p, q) <= (r, s)


def test_sparse_rep_rejects_entry_at_threshold():
    with pytest.raises(ValueError, match="not above threshold"):
        fz.SparseRep(n_spatial=2, entries=((0, 0, 0, 0, 0.1),), threshold=0.1, d=4)


def test_sparse_monotone_in_threshold():
    data, kin = _instance(4, 3)
    thresholds = np.linspace(0.0, float(np.max(np.abs(data.V))), 20)
    ds, lams = [], []
    for t in thresholds:
        rep, lam = fz.sparse_truncate(data, kin.Tprime, float(t))
        ds.append(rep.d)
        lams.append(lam.lambda_two)
    assert all(a >= b for a, b in zip(ds, ds[1:]))
    assert all(a >= b - 1e-12 for a, b in zip(lams, lams[1:]))


def test_lambda_sparse_matches_loops():
    data, kin = _instance(3, 4)
    rep, lam = fz.sparse_truncate(data, kin.Tprime, 0.1)
    n = 3
    lam_one = sum(abs(kin.Tprime[p, q]) for p in range(n) for q in range(n))
    Vt = rep.dense()
    lam_two = 0.5 * sum(
        abs(Vt[p, q, r, s])
        for p in range(n) for q in range(n) for r in range(n) for s in range(n)
    )
    assert lam.lambda_one == pytest.approx(lam_one, rel=1e-13)
    assert lam.lambda_two == pytest.approx(lam_two, rel=1e-13)


def test_single_factorize_reconstructs():
    data, _ = _instance(3, 5)
    rep = fz.single_factorize(data)
    assert np.max(np.abs(rep.reconstruct() - data.V)) < 1e-8
    for W in rep.Ws:
        assert np.allclose(W, W.T, atol=1e-12)
    assert rep.L <= 3 * 3


def test_single_factorize_rejects_indefinite():
    n = 2
    V = np.zeros((n,) * 4)
    V[0, 0, 1, 1] = V[1, 1, 0, 0] = 1.0  # flattening has a -1 eigenvalue
    data = tensors.IntegralData(h=np.zeros((n, n)), V=V)
    with pytest.raises(ValueError, match="not positive semidefinite"):
        fz.single_factorize(data)


def test_single_factorize_truncation_error_monotone():
    data, _ = _instance(4, 6)
    errs = []
    for L in range(1, 17):
        rep = fz.single_factorize(data, target_L=L)
        assert rep.L <= L
        errs.append(float(np.max(np.abs(rep.reconstruct() - data.V))))
    assert all(a >= b - 1e-12 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-8


def test_single_factorize_tolerance_stop():
    data, _ = _instance(3, 7)
    loose = fz.single_factorize(data, tolerance=1.0)
    tight = fz.single_factorize(data, tolerance=1e-12)
    assert loose.L <= tight.L


def test_lambda_sf_matches_loops():
    data, kin = _instance(3, 8)
    rep = fz.single_factorize(data)
    lam = fz.lambda_sf(rep, kin.Tprime)
    lam_two = 0.25 * sum(np.sum(np.abs(W)) ** 2 for W in rep.Ws)
    assert lam.lambda_one == pytest.approx(np.sum(np.abs(kin.Tprime)), rel=1e-13)
    assert lam.lambda_two == pytest.approx(lam_two, rel=1e-13)


def test_double_factorize_zero_threshold_matches_sf():
    data, _ = _instance(3, 9)
    sf = fz.single_factorize(data)
    df = fz.double_factorize(sf, 0.0)
    assert df.L == sf.L
    assert np.max(np.abs(df.reconstruct() - sf.reconstruct())) < 1e-10
    for U in df.Us:
        assert np.allclose(U.T @ U, np.eye(U.shape[1]), atol=1e-10)


def test_double_factorize_keep_rule():
    data, _ = _instance(4, 10)
    sf = fz.single_factorize(data)
    threshold = 0.05
    df = fz.double_factorize(sf, threshold)
    for l, f in enumerate(df.fs):
        # pre-truncation weight comes from the untruncated W_l spectrum
        weight = float(np.sum(np.abs(np.linalg.eigvalsh(sf.Ws[l]))))
        assert np.all(np.abs(f) * weight >= threshold)
        assert np.all(np.abs(f[:-1]) >= np.abs(f[1:]) - 1e-15)


def test_double_factorize_stops_at_empty_block():
    data, _ = _instance(3, 11)
    sf = fz.single_factorize(data)
    weights = [float(np.sum(np.abs(np.linalg.eigvalsh(W)))) for W in sf.Ws]
    # pick a threshold that kills some later vector entirely
    t = max(np.max(np.abs(np.linalg.eigvalsh(W))) * w for W, w in zip(sf.Ws, weights)) * 0.5
    df = fz.double_factorize(sf, float(t))
    assert df.L < sf.L
    for f in df.fs:
        assert len(f) > 0


def test_double_factorize_monotone_in_threshold():
    data, _ = _instance(4, 12)
    sf = fz.single_factorize(data)
    kin = tensors.compute_T(data)
    xis, lams = [], []
    for t in np.linspace(0.0, 0.3, 16):
        df = fz.double_factorize(sf, float(t))
        xis.append(df.Xi_total)
        lams.append(fz.lambda_df(df, kin.Tprime).lambda_two)
    assert all(a >= b for a, b in zip(xis, xis[1:]))
    assert all(a >= b - 1e-12 for a, b in zip(lams, lams[1:]))


def test_lambda_df_matches_loops():
    data, kin = _instance(3, 13)
    df = fz.double_factorize(fz.single_factorize(data), 1e-8)
    lam = fz.lambda_df(df, kin.Tprime)
    lam_one = sum(abs(x) for x in np.linalg.eigvalsh(kin.Tprime))
    lam_two = 0.25 * sum(sum(abs(x) for x in f) ** 2 for f in df.fs)
    assert lam.lambda_one == pytest.approx(lam_one, rel=1e-13)
    assert lam.lambda_two == pytest.approx(lam_two, rel=1e-13)
    assert lam.provenance["Xi_total"] == df.Xi_total


def test_thc_rep_validation():
    chi = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    zeta = np.array([[1.0, 0.2], [0.2, -0.5]])
    rep = fz.THCRep(chi=chi, zeta=zeta)
    assert rep.M == 2 and rep.n_spatial == 3
    with pytest.raises(ValueError, match="unit 2-norm"):
        fz.THCRep(chi=2.0 * chi, zeta=zeta)
    with pytest.raises(ValueError, match="zeta is not symmetric"):
        fz.THCRep(chi=chi, zeta=np.array([[1.0, 0.2], [0.3, -0.5]]))
    with pytest.raises(ValueError, match="zeta must have shape"):
        fz.THCRep(chi=chi, zeta=np.eye(3))


def test_thc_reconstruct_matches_loops():
    rng = np.random.default_rng(14)
    chi = rng.normal(size=(3, 4))
    chi /= np.linalg.norm(chi, axis=0)
    zeta = rng.normal(size=(4, 4))
    zeta = (zeta + zeta.T) / 2.0
    rep = fz.THCRep(chi=chi, zeta=zeta)
    G = fz.thc_reconstruct(rep)
    n, M = 3, 4
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    ref = sum(
                        chi[p, m] * chi[q, m] * zeta[m, v] * chi[r, v] * chi[s, v]
                        for m in range(M) for v in range(M)
                    )
                    assert G[p, q, r, s] == pytest.approx(ref, abs=1e-12)


def test_lambda_thc_and_naive_bound():
    data, kin = _instance(3, 15)
    rng = np.random.default_rng(16)
    chi = rng.normal(size=(3, 5))
    chi /= np.linalg.norm(chi, axis=0)
    zeta = rng.normal(size=(5, 5))
    zeta = (zeta + zeta.T) / 2.0
    rep = fz.THCRep(chi=chi, zeta=zeta)
    lam = fz.lambda_thc(rep, data)
    assert lam.lambda_one == pytest.approx(
        float(np.sum(np.abs(np.linalg.eigvalsh(kin.Tprime)))), rel=1e-13
    )
    assert lam.lambda_two == pytest.approx(0.5 * float(np.sum(np.abs(zeta))), rel=1e-13)
    # unit 2-norm columns have 1-norm >= 1
    assert fz.lambda_thc_naive(rep) >= 2.0 * lam.lambda_two - 1e-12


def test_reconstruction_errors():
    V = np.ones((2, 2, 2, 2))
    approx = np.zeros_like(V)
    one, two = fz.reconstruction_errors(V, approx)
    assert one == 16.0
    assert two == 4.0


def test_encoded_terms_sparse_algebra():
    data, kin = _instance(3, 17)
    rep, _ = fz.sparse_truncate(data, kin.Tprime, 0.0)
    enc = fz.encoded_terms(rep, kin.Tprime)
    Vt = rep.dense()
    B = np.einsum("pqrr->pq", Vt)
    assert np.allclose(enc.one_body, kin.Tprime - B, atol=1e-13)
    assert np.allclose(enc.two_body, Vt, atol=1e-13)
    expected_shift = float(np.trace(kin.Tprime)) - 0.5 * float(np.einsum("pprr->", Vt))
    assert enc.shift == pytest.approx(expected_shift, rel=1e-13)


def test_encoded_terms_thc_algebra():
    data, kin = _instance(3, 18)
    rng = np.random.default_rng(19)
    chi = rng.normal(size=(3, 4))
    chi /= np.linalg.norm(chi, axis=0)
    zeta = rng.normal(size=(4, 4))
    zeta = (zeta + zeta.T) / 2.0
    rep = fz.THCRep(chi=chi, zeta=zeta)
    enc = fz.encoded_terms(rep, kin.Tprime)
    assert np.allclose(enc.two_body, fz.thc_reconstruct(rep), atol=1e-12)
    c2 = np.sum(chi * chi, axis=0)
    B = np.einsum("pm,qm,m->pq", chi, chi, zeta @ c2)
    assert np.allclose(enc.one_body, kin.Tprime - B, atol=1e-12)


def test_lambda_report_dispatch():
    data, kin = _instance(3, 20)
    rep, _ = fz.sparse_truncate(data, kin.Tprime, 0.0)
    sf = fz.single_factorize(data)
    df = fz.double_factorize(sf, 1e-8)
    assert fz.lambda_report(rep, data).method == "sparse"
    assert fz.lambda_report(sf, data).method == "sf"
    assert fz.lambda_report(df, data).method == "df"
    with pytest.raises(TypeError, match="unknown representation"):
        fz.lambda_report(object(), data)


def test_lambda_report_to_dict():
    data, kin = _instance(3, 21)
    _, lam = fz.sparse_truncate(data, kin.Tprime, 0.0)
    payload = lam.to_dict()
    assert payload["method"] == "sparse"
    assert payload["total"] == pytest.approx(lam.lambda_one + lam.lambda_two)
    assert set(payload) == {"method", "one_body", "two_body", "total", "provenance"}


@pytest.mark.parametrize("kind", ["sparse", "sf", "df", "thc"])
def test_rep_serialization_round_trip(tmp_path, kind):
    data, kin = _instance(3, 22)
    if kind == "sparse":
        rep, _ = fz.sparse_truncate(data, kin.Tprime, 0.1)
    elif kind == "sf":
        rep = fz.single_factorize(data)
    elif kind == "df":
        rep = fz.double_factorize(fz.single_factorize(data), 1e-6)
    else:
        rng = np.random.default_rng(23)
        chi = rng.normal(size=(3, 4))
        chi /= np.linalg.norm(chi, axis=0)
        zeta = rng.normal(size=(4, 4))
        rep = fz.THCRep(chi=chi, zeta=(zeta + zeta.T) / 2.0)

    path = tmp_path / f"{kind}.json"
    fz.save_rep(rep, path, lam=fz.lambda_report(rep, data))
    back = fz.load_rep(path)
    assert type(back) is type(rep)
    if kind == "sparse":
        assert back.entries == rep.entries
        assert back.d == rep.d
    elif kind == "sf":
        assert all(np.array_equal(a, b) for a, b in zip(back.Ws, rep.Ws))
    elif kind == "df":
        assert all(np.array_equal(a, b) for a, b in zip(back.fs, rep.fs))
        assert all(np.array_equal(a, b) for a, b in zip(back.Us, rep.Us))
    else:
        assert np.array_equal(back.chi, rep.chi)
        assert np.array_equal(back.zeta, rep.zeta)


def test_rep_from_dict_rejects_unknown_kind():
    with pytest.raises(ValueError, match="unknown representation kind"):
        fz.rep_from_dict({"kind": "bogus"})
