import pytest

from bcod.model import FrequencyTable
from bcod.tokenizer import TokenStream, detokenize

SAMPLE_COUNTS = {2: 25, 1: 20, 3: 3, 4: 1}
FIVE_SYMBOL_COUNTS = {1: 4, 2: 2, 3: 2, 4: 1, 5: 1}


def sample_tokens():
    return [2] * 25 + [1] * 20 + [3] * 3 + [4]


@pytest.fixture
def sample_stream():
    return TokenStream(tuple(sample_tokens()), 0)


@pytest.fixture
def sample_bits():
    return detokenize(sample_tokens())


@pytest.fixture
def sample_table():
    return FrequencyTable(SAMPLE_COUNTS)


@pytest.fixture
def five_symbol_table():
    return FrequencyTable(FIVE_SYMBOL_COUNTS)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call" and outcome != "error":
                continue
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL",
                              props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict, detail in sorted(lines, key=lambda x: int(x[0].split()[0])):
            terminalreporter.write_line(f"[{verdict}] criterion {name}  {detail}".rstrip())
