"""Smoke tests for the ssnet Python bindings and the CLI entry point."""

import json
import math
import os
import subprocess

import pytest

import _ssnet as ssnet


def test_link_normalization():
    assert ssnet.normalize_link("http://arxiv.org/abs/1409.0210v1") == "1409.0210"
    assert ssnet.try_normalize_link("https://example.com/blog") is None
    with pytest.raises(ValueError):
        ssnet.normalize_link("https://example.com/blog")


def test_pair_weight_hand_value():
    # rt 1.0, elapsed 4 seconds inside the window -> 1/sqrt(4)
    assert ssnet.pair_weight(0, 4, 1.0) == pytest.approx(0.5)
    assert ssnet.pair_weight(0, 7 * 86400, 1.0) == 0.0


def test_build_ssn_from_events():
    events = [
        ssnet.MentionEvent("u1", "1401.00001", 1_394_582_400, 0),
        ssnet.MentionEvent("u1", "1401.00002", 1_394_582_500, 0),
    ]
    edges = ssnet.build_ssn(events)
    assert len(edges) == 1
    src, dst, weight = edges[0]
    assert (src, dst) == ("1401.00001", "1401.00002")
    assert weight == pytest.approx(1.0 / math.sqrt(100.0))


def test_two_clique_communities():
    a = [f"a{i}" for i in range(5)]
    b = [f"b{i}" for i in range(5)]
    edges = [(x, y, 1.0) for grp in (a, b) for i, x in enumerate(grp) for y in grp[i + 1:]]
    edges.append(("a0", "b0", 0.1))
    part = ssnet.detect_communities(edges, resolution=1.0, seed=1)
    labels_a = {part.assignment[v] for v in a}
    labels_b = {part.assignment[v] for v in b}
    assert len(labels_a) == 1 and len(labels_b) == 1 and labels_a != labels_b
    assert part.modularity == pytest.approx(
        ssnet.modularity(edges, part.assignment, 1.0), abs=1e-12
    )


def test_power_law_roundtrip():
    samples = ssnet.sample_power_law(gamma=2.5, x_min=1, n=5000, seed=7)
    fit = ssnet.fit_power_law(samples)
    assert abs(fit.gamma - 2.5) < 0.3
    assert not fit.low_confidence


def test_path_metrics_and_centrality():
    edges = [("a", "b", 1.0), ("b", "c", 1.0)]
    pm = ssnet.path_metrics(edges)
    assert pm.diameter == 2
    rows = {r["id"]: r for r in ssnet.centrality(edges)}
    assert rows["b"]["betweenness"] == pytest.approx(1.0)
    assert rows["b"]["closeness"] == pytest.approx(1.0)


def test_bot_filter_removes_planted_bot():
    events, _, bots = ssnet.generate_stream(papers=60, users=40, bots=2, seed=3)
    kept, removed = ssnet.filter_bots(events)
    removed_users = {r["user_id"] for r in removed}
    assert removed_users == set(bots)
    assert len(kept) < len(events)


def test_pipeline_via_python(tmp_path):
    events, _, _ = ssnet.generate_stream(papers=40, users=60, seed=11)
    mentions = tmp_path / "mentions.jsonl"
    with open(mentions, "w") as fh:
        for ev in events:
            fh.write(
                json.dumps(
                    {
                        "user_id": ev.user_id,
                        "timestamp": "2014-03-12T00:00:00Z",
                        "urls": [f"http://arxiv.org/abs/{ev.paper_id}v1"],
                        "retweet_count": ev.retweet_count,
                    }
                )
                + "\n"
            )
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps({"mentions_path": str(mentions), "resolutions": [1.0], "seed": 1})
    )
    counts = ssnet.run_pipeline(str(config), str(tmp_path / "run"))
    assert counts["events_parsed"] > 0
    assert (tmp_path / "run" / "manifest.json").exists()
    assert (tmp_path / "run" / "report" / "centrality.csv").exists()


@pytest.mark.skipif("SSNET_CLI" not in os.environ, reason="CLI binary not provided")
def test_cli_end_to_end(tmp_path):
    cli = os.environ["SSNET_CLI"]
    subprocess.run(
        [cli, "synth", "--out", str(tmp_path / "synth"),
         "--papers", "40", "--users", "60", "--seed", "4"],
        check=True,
    )
    run = subprocess.run(
        [cli, "run", "--mentions", str(tmp_path / "synth" / "mentions.jsonl"),
         "--out", str(tmp_path / "run"), "--resolution", "1.0"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stderr
    assert (tmp_path / "run" / "manifest.json").exists()

    bad = subprocess.run(
        [cli, "run", "--mentions", str(tmp_path / "missing.jsonl"),
         "--out", str(tmp_path / "run2")],
        capture_output=True,
        text=True,
    )
    assert bad.returncode == 2  # input error
