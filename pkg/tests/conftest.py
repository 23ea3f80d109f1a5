import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

# Directory holding the public PROMISE metric files (34 releases). Tests that
# need the real corpus skip cleanly when it is absent.
PROMISE_DIR = Path(os.environ.get("CPDP_PROMISE_DIR", Path(__file__).parent.parent / "data" / "promise"))

TARGET_STEMS = (
    "arc", "berek", "e-learning", "intercafe", "kalkulator", "nieruchomosci",
    "pdftranslator", "redaktor", "serapion", "skarbonka", "systemdata",
    "tomcat", "workflow", "zuzel",
)
SOURCE_STEMS = (
    "ant-1.3", "ant-1.4", "ant-1.5", "ant-1.6", "camel-1.0", "camel-1.4",
    "camel-1.6", "ivy-1.1", "ivy-1.4", "ivy-2.0", "jedit-4.0", "jedit-4.1",
    "jedit-4.2", "jedit-4.3", "pbeans1", "pbeans2", "synapse-1.0",
    "xalan-2.4", "xerces-1.2", "xerces-1.3",
)


def promise_available():
    return all((PROMISE_DIR / f"{s}.csv").exists() for s in TARGET_STEMS + SOURCE_STEMS)


requires_promise = pytest.mark.skipif(
    not promise_available(),
    reason=f"PROMISE corpus not found under {PROMISE_DIR} "
    "(set CPDP_PROMISE_DIR or run scripts/fetch_promise.py)",
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
