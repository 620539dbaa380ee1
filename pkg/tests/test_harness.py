import functools
import json
import random

import pytest

from veritab.errors import LabelArityMismatch, MissingTable
from veritab.harness import (
    EvalReport,
    Instance,
    categorize,
    evaluate,
    load_dataset,
    verify_statement,
)
from veritab.ranker import Label
from veritab.search import SearchConfig

from tests.conftest import FIG1_ROWS, make_table


class TestCategorize:
    def test_superlative(self):
        assert categorize("xxx achieves the highest score in yyy") == {"superlative"}

    def test_negation_plus_superlative(self):
        assert categorize("xxx did not get the best score") == \
            {"negation", "superlative"}

    def test_none(self):
        assert categorize("xxx achieves 2 points in xxx game") == {"none"}

    def test_more_tags(self):
        assert "aggregation" in categorize("the total amount of scores")
        assert "comparative" in categorize("a has a higher score than b")
        assert "ordinal" in categorize("the first country to achieve it")
        assert "ordinal" in categorize("ranked 4th overall")
        assert "unique" in categorize("there are 5 different nations")
        assert "all" in categorize("all of the trains depart in the morning")
        assert "negation" in categorize("they didn't win")


def _write_dataset(root):
    (root / "all_csv").mkdir()
    (root / "all_csv" / "t1.csv").write_text(
        "party#seats\ndemocratic#12\nrepublican#7\n")
    (root / "all_csv" / "t2.csv").write_text("name#wins\nalice#3\nbob#3\n")
    examples = {
        "t1.csv": [["there are 2 parties", "republican holds 12 seats"],
                   [1, 0], "house composition"],
        "t2.csv": [["alice and bob both have 3 wins"], [1], "tournament"],
    }
    (root / "val_examples.json").write_text(json.dumps(examples))
    (root / "simple_val_id.json").write_text(json.dumps(["t1.csv"]))
    (root / "complex_val_id.json").write_text(json.dumps(["t2.csv"]))


class TestLoadDataset:
    def test_toy_fixture_resolves(self, tmp_path):
        _write_dataset(tmp_path)
        instances = load_dataset(str(tmp_path), "val")
        assert len(instances) == 3
        assert all(inst.table is not None for inst in instances)
        assert instances[0].channel == "simple"
        assert instances[2].channel == "complex"
        assert instances[0].table.caption == "house composition"
        assert {i.label for i in instances} == {0, 1}

    def test_missing_table(self, tmp_path):
        (tmp_path / "val_examples.json").write_text(
            json.dumps({"ghost.csv": [["s"], [1], "c"]}))
        with pytest.raises(MissingTable):
            load_dataset(str(tmp_path), "val")

    def test_label_arity_mismatch(self, tmp_path):
        (tmp_path / "all_csv").mkdir()
        (tmp_path / "all_csv" / "t.csv").write_text("a\n1\n")
        (tmp_path / "val_examples.json").write_text(
            json.dumps({"t.csv": [["s1", "s2"], [1], "c"]}))
        with pytest.raises(LabelArityMismatch):
            load_dataset(str(tmp_path), "val")

    def test_unknown_channel_without_id_files(self, tmp_path):
        (tmp_path / "all_csv").mkdir()
        (tmp_path / "all_csv" / "t.csv").write_text("a\n1\n")
        (tmp_path / "val_examples.json").write_text(
            json.dumps({"t.csv": [["s1"], [1], "c"]}))
        instances = load_dataset(str(tmp_path), "val")
        assert instances[0].channel == "unknown"


@functools.cache
def _pipeline_instances():
    table = make_table(["district", "incumbent", "party", "result", "candidates"],
                       FIG1_ROWS, table_id="fig1")
    statements = [
        "there are three democrats incumbents",
        "there are 2 democratic incumbents",
        "there are 5 districts",
    ]
    preds = []
    for s in statements:
        verdict, _, _ = verify_statement(table, s, cfg=SearchConfig())
        preds.append(int(verdict.label))
    return table, statements, preds


class TestEvaluate:
    def test_all_correct_and_all_wrong(self):
        table, statements, preds = _pipeline_instances()
        right = [Instance("fig1", s, p, "simple", table)
                 for s, p in zip(statements, preds)]
        report = evaluate(right, time_limit=None)
        assert report.total == 3 and report.accuracy == 1.0
        wrong = [Instance("fig1", s, 1 - p, "simple", table)
                 for s, p in zip(statements, preds)]
        report0 = evaluate(wrong, time_limit=None)
        assert report0.accuracy == 0.0

    def test_shuffle_invariance(self):
        table, statements, preds = _pipeline_instances()
        instances = [Instance("fig1", s, p, "simple", table)
                     for s, p in zip(statements, preds)]
        a = evaluate(instances, time_limit=None)
        shuffled = instances[:]
        random.Random(3).shuffle(shuffled)
        b = evaluate(shuffled, time_limit=None)
        assert a.to_json() == b.to_json()

    def test_category_counts_sum_consistently(self):
        table, statements, preds = _pipeline_instances()
        instances = [Instance("fig1", s, p, "simple", table)
                     for s, p in zip(statements, preds)]
        report = evaluate(instances, time_limit=None)
        tag_multiplicity = sum(len(categorize(s)) for s in statements)
        assert sum(r["total"] for r in report.per_category.values()) == tag_multiplicity
        assert sum(r["total"] for r in report.per_channel.values()) == report.total
        assert report.confusion["tp"] + report.confusion["tn"] + \
            report.confusion["fp"] + report.confusion["fn"] == report.total

    def test_parallel_matches_serial(self):
        table, statements, preds = _pipeline_instances()
        instances = [Instance("fig1", s, p, "simple", table)
                     for s, p in zip(statements, preds)]
        serial = evaluate(instances, workers=1, time_limit=None)
        parallel = evaluate(instances, workers=2, time_limit=None)
        assert serial.to_json() == parallel.to_json()

    def test_render_text(self):
        report = EvalReport(total=2, correct=1)
        report.per_channel["simple"] = {"total": 2, "correct": 1, "accuracy": 0.5}
        text = report.render_text()
        assert "accuracy" in text and "simple" in text


class TestVerifyStatement:
    def test_worked_example_refuted(self, fig1_table):
        verdict, candidates, linked = verify_statement(
            fig1_table, "there are three democrats incumbents")
        assert verdict.label == Label.REFUTED
        assert len(candidates.items) >= 1
        assert linked.num_seeds == [3.0]
