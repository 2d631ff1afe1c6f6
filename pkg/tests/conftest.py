import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from treescape import corpus_instance, corpus_names
from treescape.cli import main


@pytest.fixture(scope="session")
def corpus():
    return {name: corpus_instance(name) for name in corpus_names()}


def run_cli(*argv):
    """In-process CLI call; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def cli_report(*argv):
    code, out, err = run_cli(*argv)
    assert out, f"no stdout from {argv!r}; stderr: {err}"
    return code, json.loads(out)["report"]
