"""Campaign report rendering: delimited lines and the bar-chart figure."""

from cdkit.campaign import RunReport
from cdkit.proofs import Metrics
from cdkit.report import (
    render_report_figure,
    report_line,
    report_lines,
    write_report,
)


def proved_report():
    from cdkit.inference import ByAxiom
    from cdkit.proofs import Proof, ProofStep
    from cdkit.terms import app
    proof = Proof((ProofStep(1, app("a"), ByAxiom("a")),), "g", app("a"))
    return RunReport(3, "max_weight=12", "proof_found", proof,
                     Metrics(5, 3, 11, 41), None)


def test_report_line_fields_in_order():
    assert report_line(proved_report()) == \
        "run 3 max_weight=12 proof_found len=5 rich=3 cplx=11 size=41"


def test_report_line_unproved_uses_dashes():
    report = RunReport(1, "max_weight=3", "sos_exhausted")
    assert report_line(report) == \
        "run 1 max_weight=3 sos_exhausted len=- rich=- cplx=- size=-"


def test_report_lines_one_per_run_with_trailing_newline():
    text = report_lines([proved_report(),
                         RunReport(4, "purged", "limit_reached")])
    assert text.endswith("\n")
    assert text.count("\n") == 2
    first, second = text.splitlines()
    assert first.startswith("run 3 ") and second.startswith("run 4 ")


def test_write_report(tmp_path):
    path = tmp_path / "runs.txt"
    write_report([proved_report()], path)
    assert path.read_text() == report_line(proved_report()) + "\n"


def test_render_report_figure_writes_a_file(tmp_path):
    path = tmp_path / "campaign.png"
    render_report_figure(
        [proved_report(), RunReport(4, "purged", "limit_reached")],
        path, title="demo")
    data = path.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000
