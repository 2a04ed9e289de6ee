import sys

from hypothesis import settings, strategies as st

from tsirelson_index.ordinals import Ordinal

settings.register_profile("repo", deadline=None, max_examples=150)
settings.load_profile("repo")


def _cnf(exponents):
    # strictly decreasing exponents with positive coefficients
    return st.lists(st.tuples(exponents, st.integers(1, 4)), max_size=3).map(
        lambda ts: Ordinal(sorted({e: c for e, c in ts}.items(), reverse=True)))


finite = st.integers(0, 6).map(Ordinal.from_int)
below_w_w = _cnf(finite)
ordinals = _cnf(below_w_w | _cnf(below_w_w))


def pytest_terminal_summary(terminalreporter):
    results = {}
    for name, mod in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance":
            results.update(getattr(mod, "RESULTS", {}))
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
