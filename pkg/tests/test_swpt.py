import numpy as np
import pytest

from crflow.errors import FitFailed, OrderUnsupported, ResonancePole
from crflow.swpt import _compositions, _rotated_z, effective_static, fit_rotation, run_swpt, time_domain_oracle

from conftest import device, random_specs


def test_order_and_scope_checks(reference):
    with pytest.raises(OrderUnsupported):
        run_swpt(reference, 5)
    with pytest.raises(ValueError):
        run_swpt(reference, 0)
    with pytest.raises(ValueError):
        run_swpt(reference, 2, scope="nearby")


def test_compositions():
    assert sorted(_compositions(3, 2)) == [(1, 2), (2, 1)]
    assert list(_compositions(4, 1)) == [(4,)]
    assert len(list(_compositions(4, 4))) == 1


@pytest.mark.parametrize("spec", random_specs(6, seed=11), ids=lambda s: f"d{s.delta_ct:.0f}")
def test_effective_hamiltonians_are_hermitian_and_block_diagonal(spec):
    series = run_swpt(spec, 4)
    mask = series.model.blocks.mask()
    for n in range(1, 5):
        h = series.effective_fourier(n)
        assert h.is_hermitian(atol=1e-10)
        for _, m in h.terms:
            assert np.all(m[~mask] == 0)
    assert np.allclose(series.static(), series.static().conj().T, atol=1e-12)


def test_computational_scope_matches_full_scope(reference):
    comp = run_swpt(reference, 4)
    full = run_swpt(reference, 4, scope="full")
    idx = comp.model.computational_indices()
    sub = np.ix_(idx, idx)
    assert np.array_equal(comp.static()[sub], full.static()[sub])


def test_static_sums_orders(reference):
    series = run_swpt(reference, 4)
    idx = series.model.computational_indices()
    sub = np.ix_(idx, idx)
    # pruning depends on max_order, so only the computational block is comparable
    assert np.allclose(series.static(3)[sub], effective_static(reference, 3)[sub], atol=1e-12)
    # the third order has no static part
    assert np.array_equal(series.static(2), series.static(3))
    assert not np.allclose(series.static(3), series.static(4))


def test_resonance_pole_is_labelled():
    with pytest.raises(ResonancePole) as err:
        run_swpt(device(0.0), 2)
    pole = err.value
    assert pole.order == 1
    # the drive at the target frequency is now resonant with the control 0-1 transition
    pairs = {(e.row_levels, e.col_levels, e.photons) for e in pole.entries}
    assert ((1, 0), (0, 0), -1) in pairs


def test_fit_rotation_recovers_rate():
    times = np.linspace(0, 20, 801)
    rate = np.array([0.31, -0.12, 0.05])
    r = _rotated_z(rate, times)
    assert np.allclose(fit_rotation(times, r), rate, atol=1e-8)
    assert np.array_equal(fit_rotation(times, np.tile([0.0, 0.0, 1.0], (times.size, 1))), np.zeros(3))


def test_fit_rotation_rejects_noise():
    rng = np.random.default_rng(0)
    times = np.linspace(0, 20, 401)
    r = rng.normal(size=(times.size, 3))
    with pytest.raises(FitFailed):
        fit_rotation(times, r / np.linalg.norm(r, axis=1)[:, None])


def test_oracle_preconditions(reference):
    from dataclasses import replace

    with pytest.raises(ValueError):
        time_domain_oracle(replace(reference, rwa=False))
