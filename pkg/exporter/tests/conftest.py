"""Corpus fixtures on a temporary filesystem."""

import pytest

DOC_1 = """The cargo vessel ran aground near the harbor entrance on Friday night.
Rescue crews reached the site within the hour. No injuries were reported.

Salvage work is expected to take several days.
"""

DOC_2 = """Port authorities closed the channel while divers inspected the hull.
Shipping traffic resumed on Sunday.
"""

SUMMARY_A = "A cargo ship ran aground near the harbor. Nobody was hurt.\n"
SUMMARY_B = "The channel was closed and later reopened. Salvage continues.\n"


def write_corpus(root, topics=("storm",)):
    for topic in topics:
        docs = root / topic / "documents"
        summs = root / topic / "summaries"
        docs.mkdir(parents=True)
        summs.mkdir(parents=True)
        (docs / "d1.txt").write_text(DOC_1)
        (docs / "d2.txt").write_text(DOC_2)
        (summs / "sysA__s1.txt").write_text(SUMMARY_A)
        (summs / "sysB__s1.txt").write_text(SUMMARY_B)
    return root


@pytest.fixture
def corpus_dir(tmp_path):
    return write_corpus(tmp_path / "corpus")
