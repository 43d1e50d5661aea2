import json

import pytest

import mythqa


def test_text_helpers():
    assert mythqa.normalize_answer("The Garlic!") == "garlic"
    assert mythqa.make_claim("Can shoes spread covid?", "yes") == "Can shoes spread covid? Answer is yes."
    assert "\n" not in mythqa.normalize_text("a\nb")


def test_corpus_and_bm25(tmp_path):
    corpus = mythqa.Corpus([("1", "garlic cures covid"), ("2", "shoes spread covid"), ("3", "football")])
    assert len(corpus) == 3
    assert "2" in corpus
    index = mythqa.Bm25Index.build(corpus)
    hits = index.search("garlic covid", k=10)
    assert [h[0] for h in hits] == ["1", "2"]
    assert hits[0][1] > hits[1][1] > 0
    index.save(tmp_path / "bm25.idx")
    again = mythqa.Bm25Index.load(tmp_path / "bm25.idx")
    assert again.search("garlic covid", k=10) == hits
    corpus.save(tmp_path / "c.jsonl")
    assert mythqa.Corpus.load(tmp_path / "c.jsonl").tweets() == corpus.tweets()


def test_errors(tmp_path):
    with pytest.raises(mythqa.ValidationError):
        mythqa.Corpus([("1", "a"), ("1", "b")])
    bad = tmp_path / "bad.idx"
    bad.write_bytes(b"nope")
    with pytest.raises(mythqa.ParseError):
        mythqa.Bm25Index.load(bad)
    assert issubclass(mythqa.ParseError, mythqa.MythqaError)


def test_lexical_stance():
    label, scores = mythqa.lexical_stance("Garlic cures covid. Answer is yes.", "garlic cures covid is a hoax")
    assert label == "refuting"
    assert len(scores) == 3
    label, _ = mythqa.lexical_stance("Garlic cures covid. Answer is yes.", "football results")
    assert label == "neutral"


def test_metrics():
    gold = [("garlic", ["1", "2"], ["3"]), ("bleach", ["4"], ["5"])]
    pred = [("Garlic", ["2"], ["9"]), ("lemon", ["1"], ["3"])]
    assert mythqa.f1_ans(pred, gold) == pytest.approx(50.0)
    assert mythqa.f1_contro(pred, gold, 1) == pytest.approx(25.0)
    assert mythqa.hits_at_k(["x", "4"], gold, 1) == 0
    assert mythqa.hits_at_k(["x", "4"], gold, 2) == 1
    assert mythqa.mhits_at_k(["x", "4"], gold, 2) == pytest.approx(0.5)


def test_cli_and_evaluate(tmp_path):
    raw = tmp_path / "raw.jsonl"
    raw.write_text(
        "\n".join(
            json.dumps(t)
            for t in [
                {"id": "1", "text": "sunlight kills the virus"},
                {"id": "2", "text": "no evidence sunlight kills the virus"},
                {"id": "3", "text": "bleach kills the virus"},
                {"id": "4", "text": "bleach does not kill the virus, a myth"},
            ]
        )
        + "\n"
    )
    dataset = tmp_path / "ds.json"
    dataset.write_text(
        json.dumps(
            [
                {
                    "id": "q1",
                    "text": "What kills the virus?",
                    "qtype": "entity",
                    "topic": "virus",
                    "answers": [
                        {"text": "sunlight", "supporting": ["1"], "refuting": ["2"], "neutral": []},
                        {"text": "bleach", "supporting": ["3"], "refuting": ["4"], "neutral": []},
                    ],
                }
            ]
        )
    )
    out = tmp_path / "c"
    code, stdout, _ = mythqa.run_cli(["ingest", "--corpus", str(raw), "--out", str(out)])
    assert code == 0
    assert stdout.startswith("lines 4 kept 4")
    code, stdout, err = mythqa.run_cli(
        ["ask", "--corpus-dir", str(out), "--dataset", str(dataset), "--all", "--mode", "intrinsic",
         "--scorer", "gold", "--extractor", "gold"]
    )
    assert code == 0, err
    preds = tmp_path / "p.jsonl"
    preds.write_text(stdout)
    report = mythqa.evaluate(dataset, preds, e=[1], k=[10])
    assert report["entity"]["f1_ans"] == pytest.approx(100.0)
    assert report["entity"]["f1_contro"]["1"] == pytest.approx(100.0)
    assert mythqa.run_cli(["ask"])[0] == 2
