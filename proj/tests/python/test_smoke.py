import math

import pytest

import kgfuse


def test_version():
    assert kgfuse.__version__.count(".") == 2


def test_packet_match():
    assert kgfuse.match_api_packet("add()", None, None, "add()", "java.util.List", 2)
    assert kgfuse.match_api_packet("add()", "java.util.List", 2, "add()", "java.util.List", 2)
    assert not kgfuse.match_api_packet("add()", "java.util.List", 1, "add()", "java.util.List", 2)
    assert not kgfuse.match_api_packet(None, None, None, "add()", None, None)


def test_overlap():
    assert math.isclose(kgfuse.overlap_score({"a", "b", "c"}, {"b", "c", "d"}), 2 / 3)
    assert math.isclose(kgfuse.overlap_score({"a", "b", "c"}, {"c", "d", "e"}), 1 / 3)


def test_pipeline_summaries(built):
    cfg, summaries = built
    assert [s["stage"] for s in summaries] == ["build-api", "build-task", "train-embed", "fuse", "enrich"]
    assert summaries[-1]["counts"]["nodes"] == 77


def test_stats(index):
    s = index.stats()
    assert s["api_nodes"] + s["task_nodes"] == len(index) == 77
    assert s["edges"]["TaskAlign"] == 9


def test_text_search(index):
    r = index.search_text("how to insert an item in List with add()")
    assert r["best_task"]["task"]["id"] == "task:list/insert-an-item-into-a-list"
    ids = [h["api"]["id"] for h in r["api_knowledge"]]
    assert "api:java.util.List.add(int,E)" in ids


def test_code_search(index):
    code = 'Statement s = connection.createStatement();\ns.executeQuery("SELECT 1");\n'
    r = index.search_code(code)
    labels = {(x["label"], x["src"], x["dst"]) for x in r["extended"]}
    assert (
        "FunctionReplace",
        "api:java.sql.Statement.executeUpdate(String)",
        "api:java.sql.Statement.executeQuery(String)",
    ) in labels


def test_errors_carry_code(index):
    with pytest.raises(kgfuse.KgfuseError) as e:
        index.node("api:does.not.Exist")
    assert e.value.code == "UnknownNode"
    with pytest.raises(kgfuse.KgfuseError) as e:
        index.search_code("int x = 1;")
    assert e.value.code == "NoApiFound"


def test_service_request(index):
    status, body = index.request("GET", "/api/node/api:java.util.List/fragment", {"radius": "0"})
    assert status == 200
    assert [n["id"] for n in body["nodes"]] == ["api:java.util.List"]
    assert body["edges"] == []
    status, body = index.request("GET", "/api/node/nope")
    assert status == 404 and body["code"] == "UnknownNode"
