from sigtqft import plotting
from sigtqft.harness import asymptotics_run, figure_data
from sigtqft.numtheory import CFExpansion


def test_svg_is_reproducible(tmp_path):
    rows = figure_data("fig1", 9)
    a = plotting.figure("fig1", rows, tmp_path / "a.svg").read_bytes()
    b = plotting.figure("fig1", rows, tmp_path / "b.svg").read_bytes()
    assert a == b and b"<svg" in a


def test_asymptotics_plot(tmp_path):
    rows = [r.as_dict() for r in asymptotics_run(CFExpansion.all_ones(), 6)]
    path = plotting.asymptotics(rows, tmp_path / "asym.pdf")
    assert path.read_bytes()[:4] == b"%PDF"
