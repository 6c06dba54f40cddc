"""Shared fixtures: the bundled lexicon (no CMU dictionary), confusions and record builders."""
import pytest

from app.mondegreen.phonetics import load_lexicon
from app.mondegreen.query_model import AsrParty, QueryLogRecord
from app.mondegreen.simulator import load_confusions
from app.mondegreen.trainer import TrainerConfig


def make_record(
    user_id: str,
    timestamp: int,
    raw_text: str,
    clicks: int = 0,
    party: str = "3P",
    locale: str = "en-US",
    extended: bool = False,
    source: str = "asr-3p-a",
) -> QueryLogRecord:
    return QueryLogRecord(
        user_id=user_id,
        timestamp=timestamp,
        raw_text=raw_text,
        asr_source=source,
        asr_party=AsrParty(party),
        locale=locale,
        clicks=clicks,
        extended_interaction=extended,
    )


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(use_cmudict=False)


@pytest.fixture(scope="session")
def confusions():
    return load_confusions()


@pytest.fixture
def trainer_config():
    return TrainerConfig()


@pytest.fixture
def roxanne_corpus():
    """Ten users say 'rocks and', give up, and re-ask 'roxanne' 20 seconds later."""
    records = []
    for i in range(10):
        user = f"u{i:02d}"
        records.append(make_record(user, 1000, "rocks and", clicks=0))
        records.append(make_record(user, 1020, "roxanne", clicks=1))
    return records
