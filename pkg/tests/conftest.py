import math

import pytest

from fracspec.analysis import ExperimentSpec
from fracspec.solver import Constant, PiecewiseConstant, ProblemSpec

# Verdict lines filled in by test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES = {}

EXP1 = ProblemSpec(alpha=1.6, r=0.2, b=Constant(0.0), c=Constant(5.0), f=Constant(1.0))
EXP2 = ProblemSpec(alpha=1.4, r=0.4, b=Constant(2.0), c=Constant(5.0), f=Constant(1.0))
EXP3 = ProblemSpec(
    alpha=1.7, r=0.3, b=Constant(2.0), c=Constant(5.0), f=PiecewiseConstant((0.5,), (0.0, 1.0))
)


def experiment(k: int, **kw) -> ExperimentSpec:
    base = {
        1: dict(problem=EXP1, N_values=(6, 8, 10, 12, 14)),
        2: dict(problem=EXP2, N_values=(12, 14, 16, 18, 20)),
        3: dict(problem=EXP3, N_values=(12, 14, 16, 18, 20), f_regularity=0.5),
    }[k]
    args = dict(N_ref=40, nodes=200, n_counts_terms=True, h_norm="u", name=f"experiment{k}")
    args.update(base)
    args.update(kw)
    args.setdefault("f_regularity", math.inf)
    return ExperimentSpec(**args)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("FRACSPEC_CACHE", str(tmp_path_factory.getbasetemp() / "cache"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
