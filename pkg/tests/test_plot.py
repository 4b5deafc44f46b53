import pytest

from latwalk.errors import ParseError
from latwalk.plot import emit_plot, loglog_slope, read_sup_errors
from latwalk.studies import StudyConfig, run_study

HEADER = "kind,n,a,x,ell,exact,asymptotic,abs_error,alpha,xi,lambda\n"


def _write(path, body):
    path.write_text(HEADER + body)
    return path


def test_two_points(tmp_path):
    csv = _write(tmp_path / "r.csv", "kaigh,64,8,8,-1,1,1,0.01,1,nan,nan\nkaigh,256,16,16,-1,1,1,0.0025,1,nan,nan\n")
    svg = emit_plot(csv, tmp_path / "r.svg")
    assert svg.count("<polyline") == 1
    points = svg.split('points="')[1].split('"')[0].split()
    assert len(points) == 2
    assert 'data-kind="kaigh"' in svg
    assert (tmp_path / "r.svg").read_text() == svg


def test_sup_is_taken_per_n(tmp_path):
    csv = _write(tmp_path / "r.csv", "k,4,0,0,1,0,0,0.5,0,0,0\nk,4,0,1,1,0,0,0.7,0,0,0\nk,16,0,0,1,0,0,0.1,0,0,0\n")
    assert read_sup_errors(csv) == {"k": [(4, 0.7), (16, 0.1)]}


@pytest.mark.parametrize(
    "body",
    ["", "k,64,0,0,1,0,0,0.1,0,0,0\n", "k,sixty,0,0,1,0,0,0.1,0,0,0\nk,4,0,0,1,0,0,0.1,0,0,0\n"],
)
def test_parse_errors(tmp_path, body):
    with pytest.raises(ParseError):
        read_sup_errors(_write(tmp_path / "r.csv", body))


def test_missing_columns_and_file(tmp_path):
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ParseError):
        read_sup_errors(tmp_path / "bad.csv")
    with pytest.raises(ParseError):
        read_sup_errors(tmp_path / "absent.csv")


def test_slope():
    assert loglog_slope([1, 10, 100], [1, 0.1, 0.01]) == pytest.approx(-1.0)


def test_byte_determinism(tmp_path):
    cfg = StudyConfig.for_kind("builtin:w3", "kaigh", n_grid=(64, 256, 1024))
    for name in ("a", "b"):
        run_study(cfg).to_csv(tmp_path / f"{name}.csv")
        emit_plot(tmp_path / f"{name}.csv", tmp_path / f"{name}.svg")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_multiple_kinds(tmp_path):
    csv = tmp_path / "all.csv"
    text = "".join(
        run_study(StudyConfig.for_kind("builtin:w3", k, n_grid=(64, 256))).to_csv().split("\n", 1)[1]
        for k in ("kaigh", "gnedenko")
    )
    _write(csv, text)
    svg = emit_plot(csv, tmp_path / "all.svg")
    assert svg.count('class="series"') == 2
