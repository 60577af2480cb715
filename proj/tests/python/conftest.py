import os
import pathlib

import pytest

import kgfuse

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS_CONFIG = ROOT / "corpus" / "mini" / "kgfuse.json"


@pytest.fixture(scope="session")
def built(tmp_path_factory):
    cfg = kgfuse.Config.load(str(CORPUS_CONFIG))
    cfg.work_dir = str(tmp_path_factory.mktemp("work"))
    cfg.snapshot = ""
    summaries = kgfuse.run_stage("all", cfg)
    return cfg, summaries


@pytest.fixture(scope="session")
def index(built):
    return kgfuse.Index(built[0])
