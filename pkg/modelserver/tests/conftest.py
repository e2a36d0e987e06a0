import json
from pathlib import Path

import pytest

FIXTURE_DIR = Path(__file__).parents[2] / "fixtures" / "protocol"


@pytest.fixture(scope="session")
def protocol_fixtures():
    return {
        path.stem: json.loads(path.read_text())
        for path in sorted(FIXTURE_DIR.glob("*.json"))
    }


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
