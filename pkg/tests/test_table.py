import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonpair.table import SpectrumTable, read_csv, write_csv

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(rows=st.lists(st.tuples(finite, st.floats(0, 1e6), st.floats(0, 1e300)), min_size=1, max_size=20))
def test_csv_round_trip_is_lossless(rows):
    arr = np.array(rows, dtype=float)
    tab = SpectrumTable(arr[:, 0], arr[:, 1], arr[:, 2], "riccati")
    assert SpectrumTable.from_csv(tab.to_csv()) == tab


def test_interleaved_round_trip(tmp_path):
    k = np.linspace(-1, 1, 5)
    a = SpectrumTable(k, 0.0, k**2, "riccati")
    b = SpectrumTable(k, 0.0, k**4, "fermion")
    path = tmp_path / "x.csv"
    text = write_csv([a, b], path, interleave=True)
    lines = text.splitlines()
    assert lines[0] == "k_parallel,k_perp,f,method"
    assert [ln.rsplit(",", 1)[1] for ln in lines[1:5]] == ["riccati", "fermion"] * 2
    back = read_csv(path)
    assert back == [a, b]
    with pytest.raises(ValueError):
        SpectrumTable.from_csv(text)


def test_validation():
    with pytest.raises(ValueError):
        SpectrumTable([0.0, 1.0], 0.0, [1.0])
    with pytest.raises(ValueError):
        read_csv("k,kp,f\n1,2,3\n")
    with pytest.raises(ValueError):
        write_csv([SpectrumTable([0.0], 0.0, [1.0]), SpectrumTable([0.0, 1.0], 0.0, [1.0, 2.0])],
                  interleave=True)


def test_window_and_points():
    t = SpectrumTable(np.linspace(-1, 1, 5), 0.3, np.arange(5.0))
    w = t.window(-0.5, 0.5)
    assert len(w) == 3
    assert w.points[0].k_perp == 0.3
