#!/usr/bin/env python3
"""Smoke test for the gpar_py extension module.

Builds (or reuses) the cdylib, copies it next to a temp directory under
an importable name, and drives the main types and operations end to end.

Usage: python3 python/smoke_test.py [--release]
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension(release: bool) -> Path:
    profile = "release" if release else "debug"
    cmd = ["cargo", "build", "-p", "gpar-py"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    lib = ROOT / "target" / profile / "libgpar_py.so"
    if not lib.exists():  # macOS fallback
        lib = ROOT / "target" / profile / "libgpar_py.dylib"
    if not lib.exists():
        sys.exit(f"extension library not found under target/{profile}")
    return lib


def main() -> None:
    release = "--release" in sys.argv[1:]
    lib = build_extension(release)
    staging = tempfile.mkdtemp(prefix="gpar-py-")
    shutil.copy2(lib, Path(staging) / "gpar_py.so")
    sys.path.insert(0, staging)

    import gpar_py as gp

    fixtures = ROOT / "fixtures"
    graph = gp.Graph.parse((fixtures / "coauthor.g").read_text())
    assert len(graph) == 3
    assert "coauthorOf" in graph.terms()

    (rule,) = gp.parse_rules((fixtures / "coauthor.rules").read_text())
    assert rule.name == "coauthor-workplace"
    assert rule.validate() == []

    # Matching: the antecedent matches exactly once.
    matches = gp.evaluate(rule.antecedent, graph)
    assert matches == [{"v1": "Alice", "v2": "Bob", "v3": "Org"}]
    assert gp.evaluate(rule.antecedent, graph, semantics="hom") != []

    # Exact metrics on the single graph.
    report = gp.metrics_single(graph, rule)
    assert (report["tau"], report["e1"], report["e2"], report["joint"]) == ("6", "1", "1", "0")
    assert report["confidence"] == "0"
    assert report["leverage"] == "-1/36"
    assert report["conviction"] == "5/6"

    # Extension adds the predicted workplace edge.
    extended = gp.extend_once(graph, [rule])
    assert len(extended) == 4
    assert "Bob worksAt Org" in extended.serialize()

    # Micro and macro metrics over the before/after bag.
    bag = gp.GraphBag.of([("g1", graph), ("g2", extended)])
    micro = gp.metrics_micro(bag, rule)
    assert micro["confidence"] == "2/3"
    assert micro["lift"] == "8/3"
    macro = gp.metrics_macro(bag, rule)
    assert macro["confidence"] == "1/2"
    assert macro["conviction"] == "inf"

    # The reframing oracle agrees metric for metric.
    correspondence = gp.check_correspondence(bag, rule, cap=100000)
    assert correspondence["all_equal"] is True
    assert correspondence["db_size"] == 12

    # Closure of the transitive chain.
    chain = gp.Graph.parse((fixtures / "chain.g").read_text())
    (trans,) = gp.parse_rules((fixtures / "transitivity.rules").read_text())
    closed, steps, fixpoint = gp.closure(chain, [trans])
    assert (len(closed), steps, fixpoint) == (6, 2, True)

    # Link prediction.
    tp_graph = gp.Graph.parse((fixtures / "tail_prediction.g").read_text())
    (tp_rule,) = gp.parse_rules((fixtures / "tail_prediction.rules").read_text())
    predictions = gp.link_predict(tp_graph, [tp_rule], "t3 t8 ?")
    assert [p[0] for p in predictions] == ["t5"]

    # Triviality and exports.
    trivial, witness = rule.is_trivial()
    assert trivial is False and witness is None
    (classx,) = gp.parse_rules((fixtures / "classx.rules").read_text())
    sparql = classx.to_sparql()
    assert sparql.count("!=") == 30
    swrl = classx.to_swrl()
    assert swrl.count("swrlb:notEqual") == 30
    (symmetric,) = gp.parse_rules((fixtures / "symmetric.rules").read_text())
    try:
        symmetric.to_swrl()
    except ValueError as e:
        assert "not allowed in SWRL" in str(e)
    else:
        sys.exit("SWRL export should reject predicate-position variables")

    # Open-consequent prediction.
    mol = gp.Graph.parse((fixtures / "carboxylic.g").read_text())
    (shape,) = gp.parse_rules((fixtures / "carboxylic.rules").read_text())
    patterns = gp.predict_patterns(mol, shape)
    assert len(patterns) == 1 and "m1 hasAtom ?v2" in patterns[0]

    # Ranking prefers broader applicability.
    ranked = gp.rank_rules(bag, [rule])
    assert ranked[0][0] == "coauthor-workplace"

    print("SMOKE OK")


if __name__ == "__main__":
    main()
