import pytest

from core.domain import FormParity, LatticePoint
from core.drivers import PoolScanDriver, SerialScanDriver
from core.errors import BadParameter
from core.geography import (
    BMYPosition,
    Window,
    bmy_position,
    exotic_threshold,
    extend,
    l_sigma,
    lattice_scan,
    threshold_n,
)

Z3 = LatticePoint(13, 104, "Z3")


def test_extend_one_step():
    points = extend(Z3, 1)
    assert sorted(p.coordinates for p in points) == [(14, c) for c in range(104, 113)]
    top = next(p for p in points if p.c1_sq == 112)
    assert top.parity is FormParity.PER_PAPER
    assert all(p.parity is FormParity.ODD_FORM for p in points if p.c1_sq < 112)
    assert top.realized_by == "chi >= 1 and 0 <= c <= 8chi over Z3"


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_extend_count(n):
    assert len(extend(Z3, n)) == 4 * n * n + 5 * n


def test_extend_needs_a_positive_range():
    with pytest.raises(BadParameter):
        extend(Z3, 0)


@pytest.mark.parametrize("sigma_X, sigma, expected", [(1, 1, -1), (2, 0, 0), (3, 0, 0), (9, 0, 1), (0, 0, -1)])
def test_l_sigma(sigma_X, sigma, expected):
    assert l_sigma(sigma_X, sigma) == expected


def test_l_sigma_range():
    with pytest.raises(BadParameter):
        l_sigma(2, 3)
    with pytest.raises(BadParameter):
        l_sigma(2, -1)


@pytest.mark.parametrize(
    "b2_plus, sigma, k, n",
    [(27, 1, 27, 14), (25, 0, 25, 13), (29, 3, 29, 15), (23, 0, 23, 12)],
)
def test_thresholds(b2_plus, sigma, k, n):
    assert exotic_threshold(b2_plus, sigma, sigma) == k
    assert threshold_n(k) == n


def test_threshold_rounds_up_to_odd():
    assert exotic_threshold(24, 0, 0) == 25
    with pytest.raises(BadParameter):
        threshold_n(24)


def test_bmy_position():
    assert bmy_position(5, 45) is BMYPosition.ON_LINE
    assert bmy_position(13, 104) is BMYPosition.BELOW
    assert bmy_position(5, 46) is BMYPosition.VIOLATES
    with pytest.raises(BadParameter):
        bmy_position(0, 0)


def test_scan_single_point():
    result = lattice_scan(Window(14, 14, 110, 110), [Z3])
    assert [(r.chi_h, r.c1_sq, r.realized) for r in result.rows] == [(14, 110, True)]
    assert result.rows[0].citation.endswith("over Z3")


def test_scan_marks_the_base_itself():
    result = lattice_scan(Window(13, 13, 104, 105), [Z3])
    assert [r.realized for r in result.rows] == [True, False]
    assert result.rows[0].citation == "Z3"


def test_scan_without_bases_realizes_nothing():
    result = lattice_scan(Window(1, 3, 0, 10), [])
    assert len(result.rows) == 33
    assert result.realized == set()


def test_scan_order_and_duplicate_bases():
    window = Window(12, 16, 90, 130)
    bases = [Z3, LatticePoint(12, 96, "Z2")]
    once = lattice_scan(window, bases)
    twice = lattice_scan(window, bases + bases)
    assert once == twice
    keys = [(r.chi_h, r.c1_sq) for r in once.rows]
    assert keys == sorted(keys)


def test_scan_empty_window():
    with pytest.raises(BadParameter):
        lattice_scan(Window(5, 4, 0, 10), [Z3])


def test_to_csv():
    text = lattice_scan(Window(14, 14, 103, 104), [Z3]).to_csv()
    assert text.splitlines() == [
        "chi_h,c1_sq,realized,citation",
        "14,103,false,",
        "14,104,true,chi >= 1 and 0 <= c <= 8chi over Z3",
    ]


def test_window_split_covers_the_range():
    bands = Window(1, 10, 0, 5).split(3)
    assert [(b.chi_min, b.chi_max) for b in bands] == [(1, 4), (5, 8), (9, 10)]
    assert Window(1, 2, 0, 5).split(8) == [Window(1, 1, 0, 5), Window(2, 2, 0, 5)]


def test_pool_driver_matches_serial():
    window = Window(10, 20, 60, 160)
    bases = [Z3, LatticePoint(12, 96, "Z2"), LatticePoint(15, 123, "M35")]
    serial = lattice_scan(window, bases, SerialScanDriver())
    pooled = lattice_scan(window, bases, PoolScanDriver(3))
    assert serial == pooled


def test_pool_driver_rejects_zero_workers():
    with pytest.raises(BadParameter):
        PoolScanDriver(0)
