import numpy as np
import pytest

from rsscrb.config import ConfigError, default_config, parse_config, parse_config_text
from rsscrb.experiments import SweepSpec, sweep_noise
from rsscrb.crb import AveragingGrid
from rsscrb.io import (TraceFormatError, export_csv, export_trace, import_trace, read_csv,
                       render_csv, Table)
from rsscrb.signal import (AcquisitionSpec, QuantizerSpec, SinusoidParams, quantize,
                           synthesize_received_power)


def test_defaults_are_operating_point():
    cfg = parse_config_text("[scenario]\n")
    sc = cfg.scenario()
    assert (sc.amplitude, sc.frequency_hz, sc.sample_rate, sc.duration, sc.step) == \
        (0.1, 0.25, 10.0, 30.0, 1.0)
    assert cfg.config_hash() == default_config().config_hash()


def test_range_error_names_key_path():
    with pytest.raises(ConfigError, match=r"acquisition\.sample_rate"):
        parse_config_text("[acquisition]\nsample_rate = -1\n")


def test_duplicate_key_reports_line(tmp_path):
    p = tmp_path / "dup.ini"
    p.write_text("[scenario]\namplitude = 0.1\n\namplitude = 0.2\n")
    with pytest.raises(ConfigError, match="line  ?4"):
        parse_config(p)


def test_unknown_key_and_section():
    with pytest.raises(ConfigError, match=r"scenario\.amplitud"):
        parse_config_text("[scenario]\namplitud = 0.1\n")
    with pytest.raises(ConfigError, match="bogus"):
        parse_config_text("[bogus]\nx = 1\n")


def test_parse_errors_and_cross_checks():
    with pytest.raises(ConfigError, match=r"filter\.order"):
        parse_config_text("[filter]\norder = 3\n")
    with pytest.raises(ConfigError, match=r"quantizer\.step"):
        parse_config_text("[quantizer]\nstep = abc\n")
    with pytest.raises(ConfigError, match=r"search\.f_min"):
        parse_config_text("[search]\nf_min = 0.7\n")
    with pytest.raises(ConfigError, match=r"sweep\.values"):
        parse_config_text("[sweep]\nvalues = 0.3, 0.1\n")
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config("/nonexistent/x.ini")


def test_values_parsed():
    cfg = parse_config_text("[mitigation]\nkind = never-both\npoints = 4:2, 20:8\n"
                            "[sweep]\nvalues = 0.1 0.2 0.4\n[run]\nseed = 9\n")
    assert cfg.mitigation_policy().points == ((4.0, 2.0), (20.0, 8.0))
    assert cfg.get("sweep.values") == (0.1, 0.2, 0.4)
    assert cfg.seed == 9 and "run.seed" in cfg.explicit


def _trace(kind="continuous"):
    p = SinusoidParams.from_hz(0.1, -53.7, 0.25, 0.3, 0.25)
    tr = synthesize_received_power(p, AcquisitionSpec(10.0, 300), 11)
    if kind != "continuous":
        tr = quantize(tr, QuantizerSpec(1.0, 0.0, kind))
    return tr


@pytest.mark.parametrize("kind", ["continuous", "one-bit", "uniform"])
def test_trace_round_trip_bit_identical(tmp_path, kind):
    tr = _trace(kind)
    path = export_trace(tr, tmp_path / "t.csv")
    back = import_trace(path)
    assert back.samples.tobytes() == tr.samples.tobytes()
    assert back.kind == tr.kind and back.rng_seed == 11
    assert back.acquisition == tr.acquisition and back.noise_sigma == tr.noise_sigma


def test_truncated_trace(tmp_path):
    path = export_trace(_trace(), tmp_path / "t.csv")
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-5]) + "\n")
    with pytest.raises(TraceFormatError, match="300 rows, found 295"):
        import_trace(path)


def test_one_bit_alphabet_on_import(tmp_path):
    path = export_trace(_trace("one-bit"), tmp_path / "t.csv")
    text = path.read_text().replace("\n7,1.0\n", "\n7,0.5\n").replace("\n7,-1.0\n", "\n7,0.5\n")
    path.write_text(text)
    with pytest.raises(TraceFormatError, match="alphabet"):
        import_trace(path)


def test_bad_rows(tmp_path):
    path = export_trace(_trace(), tmp_path / "t.csv")
    lines = path.read_text().splitlines()
    i = lines.index("index,value") + 3
    bad = list(lines)
    bad[i] = "2,abc"
    path.write_text("\n".join(bad) + "\n")
    with pytest.raises(TraceFormatError, match="non-numeric"):
        import_trace(path)
    bad[i] = "5,1.0"
    path.write_text("\n".join(bad) + "\n")
    with pytest.raises(TraceFormatError, match="expected index 2"):
        import_trace(path)


def test_export_empty_and_rows(tmp_path):
    empty = Table(("a", "b"), {"a": "dB"})
    text = render_csv(empty, seed=1, config_hash="abc")
    assert text.splitlines()[-1] == "a,b"
    assert "# seed=1" in text and "# config_hash=abc" in text
    res = sweep_noise(SweepSpec("noise_sigma", (0.1, 0.2, 0.3, 0.4, 0.5), grid=AveragingGrid(4, 9)))
    p1 = export_csv(res, tmp_path / "a.csv", 3, "h")
    p2 = export_csv(res, tmp_path / "b.csv", 3, "h")
    assert p1.read_bytes() == p2.read_bytes()
    meta, cols, rows = read_csv(p1)
    assert len(rows) == 5 and cols[0] == "noise_sigma" and meta["seed"] == "3"
    assert float(rows[2][2]) == res.rows[2][2]


def test_export_io_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        export_csv(Table(("a",), {}), blocker / "sub" / "out.csv")
