"""Shared fixtures: one synthetic corpus per session, plus the acceptance
summary printed at the end of the run."""

import json
import time

import pytest

from patlink import pipeline, synth
from patlink.config import load_config


@pytest.fixture(scope="session")
def demo_corpus(tmp_path_factory):
    """The standard synthetic corpus, generated once and fully piped."""
    out = tmp_path_factory.mktemp("demo_corpus")
    config_path = synth.generate_corpus(out, seed=42)
    cfg = load_config(config_path)
    started = time.perf_counter()
    summary = pipeline.run_all(cfg)
    elapsed = time.perf_counter() - started
    truth = json.loads((out / "ground_truth.json").read_text())
    return {"dir": out, "config": cfg, "config_path": config_path,
            "summary": summary, "elapsed": elapsed, "truth": truth}


@pytest.fixture(scope="session")
def homonym_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("homonym_corpus")
    config_path = synth.generate_homonym_corpus(out, seed=7, fan_out=50)
    cfg = load_config(config_path)
    pipeline.run_all(cfg)
    return {"dir": out, "config": cfg}


def load_pairs_file(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                pairs.append(json.loads(line))
    return pairs


ACCEPTANCE_PREFIX = "test_criterion_"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            name = getattr(report, "nodeid", "")
            if "test_acceptance.py" in name and ACCEPTANCE_PREFIX in name:
                short = name.split("::")[-1]
                label = "PASS" if status == "passed" else "FAIL"
                lines.append((short, label))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for short, label in sorted(lines):
            terminalreporter.write_line(f"{label}  {short}")
