import math

import numpy as np
import pytest

import strongdet as sd


def test_propagator_closed_forms():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    U = sd.make_propagator(X, math.pi)
    assert np.allclose(U, -np.eye(2), atol=1e-9)
    D = np.diag([0, 1]).astype(complex)
    assert np.allclose(sd.make_propagator(D, math.pi / 2), np.diag([1, -1j]), atol=1e-9)


def test_evolution_preserves_norm_and_trace():
    H = sd.random_hamiltonian(5, 3)
    assert np.allclose(H, H.conj().T)
    psi = np.ones(5, dtype=complex) / math.sqrt(5)
    out = sd.evolve_state(H, psi, 0.7)
    assert abs(np.linalg.norm(out) - 1) < 1e-12
    W = sd.evolve_density(H, np.eye(5, dtype=complex) / 5, 1.3)
    assert np.allclose(W, np.eye(5) / 5, atol=1e-12)
    assert sd.expectation(np.eye(5, dtype=complex), out) == pytest.approx(1.0)


def test_non_hermitian_is_rejected():
    with pytest.raises(sd.ValidationError):
        sd.make_propagator(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)
    with pytest.raises(ValueError):
        sd.make_propagator(np.eye(2, dtype=complex), float("inf"))


def test_initial_projection_purity():
    for k in range(1, 6):
        W = sd.initial_projection(f"first-{k}-of-8")
        assert np.trace(W @ W).real == pytest.approx(1 / k, abs=1e-12)


def test_strong_determinism_contrast():
    H = sd.random_hamiltonian(4, 1)
    assert sd.is_strongly_deterministic("wentaculus", H, "first-2-of-4")["strongly_deterministic"]
    v = sd.is_strongly_deterministic("mentaculus", H, "first-2-of-4")
    assert not v["strongly_deterministic"]
    a, b = v["witness"]
    assert abs(np.vdot(a, b)) < 1 - 1e-6

    refusal = sd.strong_prediction("mentaculus", H, "first-2-of-4", 1.0)
    assert refusal["missing_input"] == "initial wave function"
    W1 = sd.strong_prediction("wentaculus", H, "first-2-of-4", 1.0)
    U = sd.make_propagator(H, 1.0)
    assert np.allclose(W1, U @ sd.initial_projection("first-2-of-4") @ U.conj().T, atol=1e-12)


def test_entropy_trajectory():
    H = sd.random_hamiltonian(16, 9)
    rows = sd.entropy_trajectory("wentaculus", H, "first-2-of-16", [2, 14], [0.0, 10.0, 20.0])
    assert rows[0]["entropy"] == pytest.approx(math.log(2))
    assert rows[0]["cell"] == 0
    with pytest.raises(sd.ValidationError, match="initial wave function"):
        sd.entropy_trajectory("mentaculus", H, "first-2-of-16", [2, 14], [0.0])


def test_ensemble_equivalence():
    mean = sd.ensemble_mean_density("first-2-of-8", 20000, 5)
    assert np.linalg.norm(mean - sd.initial_projection("first-2-of-8")) < 0.03
    obs = [sd.random_observable(8, i) for i in range(3)]
    report = sd.equivalence_report("first-4-of-8", obs, 5000, 7)
    assert report["passed"]
    assert len(report["perObservable"]) == 3
    bw = sd.branch_weight_equivalence("first-1-of-4", [1, 3], 50, 2)
    assert bw["max_abs_dev"] < 1e-9


def test_decompose():
    branches = sd.decompose(np.eye(4, dtype=complex) / 4, [1, 3], ["a", "b"])
    assert [b["cell"] for b in branches] == ["a", "b"]
    assert [b["weight"] for b in branches] == pytest.approx([0.25, 0.75])


def test_modal():
    worlds = {"times": [0, 2], "worlds": [{"id": "x", "trajectory": {"0": "x0", "1": "x0", "2": "x0"}}], "actual": "x"}
    v = sd.check_model_set(worlds)
    assert v["strong_determinism"] and v["determinism"]["holds"]
    assert sd.counterfactual(worlds, {"events": [["x0", 0]], "negated": True}, {"events": [["x0", 1]]}, "x") == "vacuous-true"
    d = sd.counterfactual_dependence(worlds, {"events": [["x0", 0]]}, {"events": [["x0", 2]]}, "x")
    assert d["holds"] and d["degenerate"]
    crossing = {"times": [0, 1], "worlds": [{"id": "a", "trajectory": {"0": "p", "1": "q"}},
                                            {"id": "b", "trajectory": {"0": "p", "1": "r"}}]}
    assert not sd.check_model_set(crossing)["determinism"]["holds"]
    with pytest.raises(sd.ValidationError):
        sd.check_model_set({"times": [0, 1], "worlds": [{"id": "a", "trajectory": {"0": "p"}}]})


def test_mandelbrot():
    assert sd.mandelbrot_membership(-1)["status"] == "certified-in"
    out = sd.mandelbrot_membership(1)
    assert out["status"] == "certified-out" and out["iteration"] == 3
    assert sd.orbit(1, 6) == [0, 1, 2, 5, 26, 677, 458330]
    img = sd.render_mandelbrot((-2, 1, -1.25, 1.25), 32, 24, max_iter=64)
    assert img.shape == (24, 32) and img.dtype == np.uint8
    assert np.array_equal(img, img[::-1, :])


def test_run_cli(tmp_path):
    code, out, _ = sd.run_cli(["mandelbrot", "--width", "8", "--height", "8", "--out", str(tmp_path / "m.pgm")])
    assert code == 0
    assert (tmp_path / "m.pgm").stat().st_size == len(b"P5\n8 8\n255\n") + 64
    code, _, err = sd.run_cli(["simulate", "--theory", "mentaculus", "--out", str(tmp_path / "t.csv")])
    assert code == 2 and "initial wave function" in err
