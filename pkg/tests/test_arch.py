import json
import re

import pytest

from archlang.arch import (
    Destination,
    Elaborator,
    Endpoint,
    Origin,
    autoconnect,
    build_instance_tree,
    collect_explicit,
    elaborate,
    export_graph,
    flatten,
    validate_connectors,
)
from archlang.diagnostics import CompileError, Reporter
from archlang.pipeline import build_system
from archlang.sema import ComponentKind, analyze
from archlang.syntax import format_model, parse_model

from support import FIXTURES, GOLDEN, all_origins, coffee_sources, compile_text, error_codes, hop_routes


@pytest.fixture(scope="module")
def coffee_analysis():
    return analyze([parse_model(t, n) for t, n in coffee_sources()])


@pytest.fixture(scope="module")
def coffee():
    return build_system(coffee_sources(), "CoffeeMachine")


def nested_sources():
    return coffee_sources() + [((FIXTURES / "nested_machine.arc").read_text(), "nested_machine.arc")]


def conn_tuples(ea):
    return [(c.source.owner, c.source.port, c.target.owner, c.target.port, c.origin) for c in ea.connectors]


# -- instance tree ------------------------------------------------------------

def test_instance_tree_coffee(coffee_analysis):
    root = build_instance_tree("CoffeeMachine", coffee_analysis)
    assert [c.path for c in root.children] == [("espressoBS",), ("coffeeBS",), ("cpu",), ("display",)]
    assert root.kind is ComponentKind.STRUCTURAL
    assert all(c.kind is ComponentKind.BEHAVIORAL and not c.children for c in root.children)


def test_instance_tree_behavioral_root(coffee_analysis):
    root = build_instance_tree("Display", coffee_analysis)
    assert (root.path, root.children) == ((), [])


def test_self_recursion_rejected():
    comp = compile_text("component A { component A a; }")
    assert error_codes(comp) == ["E0302"]


def test_indirect_recursion_rejected():
    comp = compile_text("component A { component B b; } component B { component A a; }")
    assert set(error_codes(comp)) == {"E0302"}


def test_unknown_subcomponent_type():
    comp = compile_text("component A { component Missing m; }")
    assert error_codes(comp) == ["E0301"]


# -- explicit and inline --------------------------------------------------------

def test_collect_explicit_coffee(coffee_analysis):
    rc = coffee_analysis.components["CoffeeMachine"]
    got = [(str(c.source), str(c.target), c.origin) for c in collect_explicit(rc, coffee_analysis)]
    assert got == [
        ("coffeeBS.beanEmpty", "cpu.coffeeEmpty", Origin.EXPLICIT),
        ("espressoBS.beanEmpty", "cpu.espressoEmpty", Origin.INLINE),
    ]


FANOUT = """
component S { port out Integer x; }
component T { port in Integer y, in Integer z; }
component M { component S a; component T b, c; connect a.x -> b.y, c.z; }
"""


def test_fan_out_yields_one_connector_per_target():
    analysis = analyze([parse_model(FANOUT)])
    conns = collect_explicit(analysis.components["M"], analysis)
    assert [(str(c.source), str(c.target)) for c in conns] == [("a.x", "b.y"), ("a.x", "c.z")]


def test_unknown_instance_or_port():
    comp = compile_text(FANOUT.replace("a.x -> b.y", "q.x -> b.y, a.nope"))
    assert error_codes(comp) == ["E0303", "E0303"]


# -- autoconnect ------------------------------------------------------------------

def test_autoconnect_coffee(coffee_analysis):
    rc = coffee_analysis.components["CoffeeMachine"]
    existing = collect_explicit(rc, coffee_analysis)
    auto = autoconnect(rc, existing, coffee_analysis)
    assert [(str(c.source), str(c.target)) for c in auto] == [
        ("selection", "cpu.selection"),
        ("milkEmpty", "cpu.milkEmpty"),
        ("cpu.message", "display.message"),
        ("cpu.milkAmount", "milkAmount"),
    ]
    assert {c.origin for c in auto} == {Origin.AUTO}


def test_autoconnect_without_matches():
    analysis = analyze([parse_model(
        "component S { port out Integer a; } component M { autoconnect port; port in Boolean b; component S s; }")])
    assert autoconnect(analysis.components["M"], [], analysis) == []


def test_autoconnect_ambiguity():
    src = """
    component Sensor { port out Boolean beanEmpty; }
    component Unit { port in Boolean beanEmpty; }
    component M { autoconnect port; component Sensor s1, s2; component Unit u; }
    """
    analysis = analyze([parse_model(src)])
    rep = Reporter()
    autoconnect(analysis.components["M"], [], analysis, reporter=rep)
    (d,) = rep.diagnostics
    assert d.code == "E0304"
    assert "s1.beanEmpty" in d.message and "s2.beanEmpty" in d.message


def test_autoconnect_requires_compatible_type():
    src = """
    component Src { port out Integer v; }
    component Dst { port in Boolean v; }
    component M { autoconnect port; component Src s; component Dst d; }
    """
    analysis = analyze([parse_model(src)])
    assert autoconnect(analysis.components["M"], [], analysis) == []


def test_explicit_overrides_autoconnect():
    src = """
    component Src { port out Integer v; }
    component Dst { port in Integer v; }
    component M { autoconnect port; port in Integer v; component Src s; component Dst d; connect v -> d.v; }
    """
    comp = compile_text(src, roots=["M"])
    ea, _ = comp.system("M")
    assert [(str(c.source.owner), c.source.port, c.origin) for c in ea.connectors
            if c.target.port == "v"] == [("()", "v", Origin.EXPLICIT)]


# -- validation -----------------------------------------------------------------

LEVEL = """
component Child {{ port in Integer i, out Integer o, in Object anything, out Object thing; }}
component M {{ port in Integer pin, out Integer pout; component Child c, d; {body} }}
"""


def validate_codes(body):
    comp = compile_text(LEVEL.format(body=body), roots=["M"])
    return [d.code for d in comp.reporter.sorted() if d.is_error]


@pytest.mark.parametrize("body", [
    "connect c.o -> pout;",
    "connect pin -> c.i;",
    "connect c.o -> d.i;",
    "connect pin -> pout;",
    "connect c.o -> c.i;",
    "connect c.o -> c.anything;",
])
def test_legal_connectors(body):
    assert validate_codes(body) == []


@pytest.mark.parametrize("body, code", [
    ("connect c.o -> pin;", "E0305"),
    ("connect pout -> c.i;", "E0305"),
    ("connect c.i -> d.i;", "E0305"),
    ("connect c.o -> d.o;", "E0305"),
    ("connect c.thing -> d.i;", "E0306"),
    ("connect pin -> c.i; connect d.o -> c.i;", "E0307"),
])
def test_illegal_connectors(body, code):
    assert validate_codes(body) == [code]


def test_unconnected_ports_warn_only():
    comp = compile_text(LEVEL.format(body=""), roots=["M"])
    assert comp.ok
    warnings = [d for d in comp.reporter.diagnostics if d.code == "W0301"]
    assert len(warnings) == 2 + 4 + 4


def test_validate_connectors_api(coffee_analysis):
    rc = coffee_analysis.components["CoffeeMachine"]
    explicit = collect_explicit(rc, coffee_analysis)
    rep = Reporter()
    validate_connectors(rc, explicit + autoconnect(rc, explicit, coffee_analysis), coffee_analysis, reporter=rep)
    assert rep.diagnostics == []


# -- elaboration ------------------------------------------------------------------

def test_elaborate_matches_golden(coffee):
    ea, _ = coffee
    doc = json.loads(export_graph(ea, "json"))
    golden = json.loads((GOLDEN / "coffee_connectors.json").read_text())
    assert doc["connectors"] == golden
    assert [c.origin for c in ea.connectors].count(Origin.AUTO) == 4


def test_elaborate_behavioral_root():
    ea, _ = build_system(coffee_sources(), "CoffeeProcessingUnit")
    assert ea.connectors == ()


def test_elaborate_without_autoconnect():
    sources = coffee_sources()
    text, name = sources[0]
    sources[0] = (text.replace("autoconnect port;", ""), name)
    comp = compile_text(*(t for t, _ in sources), roots=["CoffeeMachine"])
    assert comp.ok
    ea, _ = comp.system("CoffeeMachine")
    assert len(ea.connectors) == 2
    warnings = [d for d in comp.reporter.diagnostics if d.code == "W0301"]
    assert len(warnings) == 8


def test_each_target_fed_once_per_level(coffee):
    ea, _ = coffee
    targets = [(c.level, c.target.owner, c.target.port) for c in ea.connectors]
    assert len(targets) == len(set(targets))


def test_elaboration_idempotent_under_pretty_printing(coffee):
    ea, _ = coffee
    reprinted = [(format_model(parse_model(t, n)), n) for t, n in coffee_sources()]
    ea2, _ = build_system(reprinted, "CoffeeMachine")
    assert ea2.connectors == ea.connectors


def test_explicit_equivalent_to_autoconnect(coffee):
    ea, _ = coffee
    lines = []
    for c in ea.connectors:
        if c.origin is Origin.AUTO:
            src = c.source.port if not c.source.owner else f"{c.source.owner[-1]}.{c.source.port}"
            tgt = c.target.port if not c.target.owner else f"{c.target.owner[-1]}.{c.target.port}"
            lines.append(f"  connect {src} -> {tgt};")
    sources = coffee_sources()
    text, name = sources[0]
    sources[0] = (text.replace("autoconnect port;", "\n".join(lines)), name)
    ea2, _ = build_system(sources, "CoffeeMachine")

    def strip(e):
        return {(c.level, c.source, c.target, c.type) for c in e.connectors}
    assert strip(ea2) == strip(ea)
    assert [n.path for n in ea2.nodes()] == [n.path for n in ea.nodes()]


def test_level_diagnostics_computed_once_per_type():
    comp = compile_text(
        "component Leaf { port in Integer x; }"
        "component Mid { component Leaf l; }"
        "component Top { component Mid m1, m2; }")
    warnings = [d for d in comp.reporter.diagnostics if d.code == "W0301"]
    # Leaf.x unconnected inside Mid, and m1/m2 have no ports at Top
    assert len(warnings) == 1


# -- flattening -------------------------------------------------------------------

def test_flatten_coffee(coffee):
    _, rt = coffee
    assert rt.destinations(Endpoint((), "selection")) == (Destination(("cpu",), "selection", False),)
    assert rt.destinations(Endpoint(("cpu",), "message")) == (Destination(("display",), "message", False),)
    assert rt.destinations(Endpoint(("cpu",), "milkAmount")) == (Destination((), "milkAmount", True),)


def test_flatten_nested_matches_flat(coffee):
    _, flat = coffee
    ea, nested = build_system(nested_sources(), "NestedMachine")

    def unnest(path):
        return tuple(seg for seg in path if seg != "brewer")

    for origin, dests in flat.routes.items():
        nested_origin = Endpoint(("brewer", "cpu") if origin.path == ("cpu",) else origin.path, origin.port)
        got = tuple(Destination(unnest(d.path), d.port, d.boundary) for d in nested.destinations(nested_origin))
        assert got == dests, origin


def test_flatten_pass_through():
    src = "component Stub { port in Integer x; } component P { port in Integer a, out Integer b; component Stub s; connect a -> b; }"
    ea, rt = build_system([(src, "p.arc")], "P")
    assert rt.destinations(Endpoint((), "a")) == (Destination((), "b", True),)


def test_flatten_behavioral_root():
    _, rt = build_system(coffee_sources(), "Display")
    assert rt.destinations(Endpoint((), "message")) == (Destination((), "message", False),)


STRUCTURAL_CYCLE = """
component Leaf { port in Integer x; }
component Pass { port in Integer a, out Integer b; component Leaf l; connect a -> b; }
component Top { component Pass p; component Leaf k; connect p.b -> p.a; }
component Src { port out Integer o; }
component Root { component Pass p; component Src s; connect s.o -> p.a; connect p.b -> p.a; }
"""


def test_structural_cycle_detected():
    comp = compile_text(STRUCTURAL_CYCLE, roots=["Top"])
    assert "E0308" in error_codes(comp)


def test_flatten_agrees_with_hop_oracle(coffee):
    for ea, rt in (coffee, build_system(nested_sources(), "NestedMachine")):
        for origin in all_origins(ea):
            assert rt.destinations(origin) == hop_routes(ea, origin)


# -- export -------------------------------------------------------------------------

def test_dot_export(coffee):
    ea, _ = coffee
    dot = export_graph(ea, "dot")
    assert dot.count("subgraph") == 1
    assert len(re.findall(r"shape=box", dot)) == 4
    assert len(re.findall(r"\" -> \"", dot)) == 6
    assert '"/cpu" -> "/display"' in dot


def test_dot_behavioral_root():
    ea, _ = build_system(coffee_sources(), "Display")
    dot = export_graph(ea, "dot")
    assert "subgraph" not in dot
    assert dot.count("shape=box") == 1
    assert '" -> "' not in dot


def test_json_export_round_trip(coffee):
    ea, _ = coffee
    doc = json.loads(export_graph(ea, "json"))
    assert doc["root"] == "CoffeeMachine"
    assert len(doc["connectors"]) == len(ea.connectors)
    assert [i["path"] for i in doc["instances"]] == [[], ["espressoBS"], ["coffeeBS"], ["cpu"], ["display"]]
    assert doc["instances"][0]["kind"] == "structural"


def test_exports_deterministic():
    a, _ = build_system(coffee_sources(), "CoffeeMachine")
    b, _ = build_system(coffee_sources(), "CoffeeMachine")
    for fmt in ("dot", "json"):
        assert export_graph(a, fmt) == export_graph(b, fmt)


def test_unknown_format(coffee):
    with pytest.raises(ValueError):
        export_graph(coffee[0], "svg")


def test_elaborate_raises_without_reporter(coffee_analysis):
    comp = compile_text("component A { component A a; }")
    with pytest.raises(CompileError):
        elaborate("A", comp.analysis)
    assert elaborate("Nope", coffee_analysis) is None
