"""Run manifests: stable field ordering and embedding format."""

import json

from nsdcolor.manifest import RunManifest


def test_build_filters_and_sorts_overrides():
    m = RunManifest.build("solve", "family:complete(n=4)", 7,
                          budget=10, max_n=None, alpha=1)
    assert m.overrides == (("alpha", 1), ("budget", 10))
    d = m.to_json_dict()
    assert d["subcommand"] == "solve"
    assert d["seed"] == 7
    assert d["timestamp"] == "unset"
    assert d["overrides"] == {"alpha": 1, "budget": 10}
    assert "max_n" not in d["overrides"]


def test_line_is_stable_compact_json():
    m = RunManifest.build("families", "family:cycle(n=5)", 0, count=2)
    line = m.line()
    assert line.startswith("# manifest: {")
    parsed = json.loads(line.split("# manifest: ", 1)[1])
    assert parsed == m.to_json_dict()
    # two identical builds produce byte-identical lines
    assert line == RunManifest.build("families", "family:cycle(n=5)", 0, count=2).line()
    # keys are sorted so the serialization never depends on call order
    keys = list(parsed)
    assert keys == sorted(keys)


def test_timestamp_opt_in():
    m = RunManifest.build("solve", "x", 1, timestamp="2024-01-01T00:00:00")
    assert m.to_json_dict()["timestamp"] == "2024-01-01T00:00:00"
