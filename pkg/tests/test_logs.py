import time

import numpy as np
import pytest

from gyrocarousel.logs import LogFormatError, ingest, write_log


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_small_valid_file(tmp_path):
    p = _write(tmp_path / "a.csv", "t,gx,gy,gz\n0.01,1,2,3\n0.02,4,5,6\n0.03,7,8,9\n")
    log = ingest(p)
    assert len(log) == 3
    assert log.sample_rate == pytest.approx(100.0)
    assert log.gx.tolist() == [1, 4, 7]
    assert log.axis("gz").values.tolist() == [3, 6, 9]
    assert log.gap_lines == () and log.rejected_lines == ()


def test_shuffled_timestamps_named(tmp_path):
    p = _write(tmp_path / "b.csv", "t,gx,gy,gz\n0.1,0,0,0\n0.3,0,0,0\n0.2,0,0,0\n0.4,0,0,0\n")
    with pytest.raises(LogFormatError, match=":4:"):
        ingest(p)


def test_duplicate_timestamp_rejected(tmp_path):
    p = _write(tmp_path / "b.csv", "t,gx,gy,gz\n0.1,0,0,0\n0.1,0,0,0\n")
    with pytest.raises(LogFormatError, match=":3:"):
        ingest(p)


@pytest.mark.parametrize("header", ["time,gx,gy,gz", "t,gx,gy", "t;gx;gy;gz", ""])
def test_malformed_header(tmp_path, header):
    p = _write(tmp_path / "c.csv", header + "\n0.1,0,0,0\n0.2,0,0,0\n")
    with pytest.raises(LogFormatError, match=":1:"):
        ingest(p)


def test_non_finite_rows_dropped_with_line_numbers(tmp_path):
    p = _write(tmp_path / "d.csv", "t,gx,gy,gz\n0.01,1,1,1\n0.02,nan,1,1\n0.03,1,inf,1\n0.04,1,1,1\n0.05,1,1,1\n")
    log = ingest(p)
    assert log.rejected_lines == (3, 4)
    assert len(log) == 3


def test_gap_flagged(tmp_path):
    t = [0.01, 0.02, 0.03, 0.05, 0.06, 0.07]
    rows = "".join(f"{v},0,0,0\n" for v in t)
    log = ingest(_write(tmp_path / "e.csv", "t,gx,gy,gz\n" + rows))
    assert log.gap_lines == (5,)


def test_degree_units(tmp_path):
    p = _write(tmp_path / "f.csv", "t,gx,gy,gz\n0.01,180,90,0\n0.02,0,0,0\n")
    log = ingest(p, units="deg")
    assert log.gx[0] == pytest.approx(np.pi)
    assert log.gy[0] == pytest.approx(np.pi / 2)
    with pytest.raises(ValueError):
        ingest(p, units="grad")


def test_declared_rate_mismatch(tmp_path):
    # milliseconds written where seconds are expected
    p = _write(tmp_path / "g.csv", "t,gx,gy,gz\n10,0,0,0\n20,0,0,0\n30,0,0,0\n")
    with pytest.raises(LogFormatError, match="sample rate"):
        ingest(p, sample_rate=100.0)
    assert ingest(p, sample_rate=0.1).sample_rate == 0.1


def test_unparsable_row(tmp_path):
    p = _write(tmp_path / "h.csv", "t,gx,gy,gz\n0.01,a,0,0\n")
    with pytest.raises(LogFormatError):
        ingest(p)


def test_round_trip(tmp_path):
    t = 0.01 * np.arange(1, 101)
    rng = np.random.default_rng(0)
    g = rng.standard_normal((3, 100))
    log = ingest(write_log(tmp_path / "r.csv", t, *g))
    assert np.array_equal(log.gx, g[0]) and np.array_equal(log.t, t)


def test_one_hour_log_fast(tmp_path):
    n = 360_000
    t = 0.01 * np.arange(1, n + 1)
    g = np.random.default_rng(1).standard_normal((3, n)) * 1e-3
    path = write_log(tmp_path / "hour.csv", t, *g)
    start = time.perf_counter()
    log = ingest(path)
    elapsed = time.perf_counter() - start
    assert len(log) == n
    assert elapsed < 5.0
