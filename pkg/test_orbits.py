"""
Tests for enumeration, braid orbits, Nielsen classes and irreducibility reports
"""
import pytest

from app.core.exceptions import CapExceededError, DomainError, TheoremViolationError
from app.services.hurwitz import make_system, stable_hash
from app.services.orbits import (
    EdgeChecker,
    braid_orbit,
    count_braid_orbits_on_nielsen_classes,
    enumerate_systems,
    nielsen_quotient,
    nonempty_predicate,
    orbit_partition,
    verify_irreducibility,
)
from app.services.parser import parse_branching, parse_spec
from app.utils.streaming import canonical_json
from conftest import rootsystem

# (spec, branching, generating systems, Nielsen classes)
COUNTS = [
    ("A1", "n=2", 1, 1),
    ("A1", "n=4", 1, 1),
    ("A1", "n=6", 1, 1),
    ("A2", "n=2", 0, 0),
    ("A2", "n=4", 24, 4),
    ("A2", "n=6", 240, 40),
    ("A3", "n=6", 2880, 120),
    ("B2", "ns=2,nl=2", 48, 12),
    ("B2", "ns=4,nl=2", 480, 120),
    ("B2", "ns=2,nl=4", 480, 120),
    ("G2", "ns=2,nl=2", 144, 24),
    ("A1+A1", "n=2;n=2", 6, 6),
]


def systems_for(label, branching, **kwargs):
    return enumerate_systems(rootsystem(label), parse_branching(branching, parse_spec(label)), **kwargs)


def small_branchings(label, limit=6):
    """Every branching with at most limit entries in total"""
    spec = parse_spec(label)
    per_component = []
    for component in spec.components:
        if component.simply_laced:
            per_component.append([f"n={n}" for n in range(limit + 1)])
        else:
            per_component.append([
                f"ns={s},nl={t}" for s in range(limit + 1) for t in range(limit + 1 - s)
            ])
    chunks = [[]]
    for options in per_component:
        chunks = [chunk + [option] for chunk in chunks for option in options]
    for chunk in chunks:
        branching = parse_branching(";".join(chunk), spec)
        if 0 < branching.total <= limit:
            yield branching


@pytest.mark.parametrize("label,branching,systems,classes", COUNTS)
def test_enumeration_counts(label, branching, systems, classes):
    found = systems_for(label, branching)
    assert len(found) == systems
    assert len(set(found)) == systems
    assert len(nielsen_quotient(found)) == classes


@pytest.mark.parametrize("label,branching,total", [
    ("A2", "n=4", 27),
    ("A2", "n=6", 243),
    ("B2", "ns=2,nl=2", 48),
    ("G2", "ns=2,nl=2", 162),
])
def test_enumeration_without_generating_condition(label, branching, total):
    assert len(systems_for(label, branching, require_generating=False)) == total


def test_enumeration_is_lexicographic(a2):
    found = systems_for("A2", "n=4")
    assert [s.indices for s in found] == sorted(s.indices for s in found)


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "A1+A1"])
def test_predicate_matches_enumeration(label):
    rs = rootsystem(label)
    for branching in small_branchings(label):
        found = enumerate_systems(rs, branching)
        assert nonempty_predicate(rs.spec, branching) == bool(found), str(branching)


def test_predicate_rejects_mismatched_branching():
    with pytest.raises(DomainError):
        nonempty_predicate(parse_spec("A2"), parse_branching("n=4", parse_spec("A3")))


def test_enumeration_cap(a2):
    with pytest.raises(CapExceededError) as exc:
        systems_for("A2", "n=6", cap=10)
    assert exc.value.cap_name == "ENUMERATION_CAP"


def test_parallel_enumeration_matches_serial():
    serial = systems_for("A2", "n=6", jobs=1)
    parallel = systems_for("A2", "n=6", jobs=2)
    assert [s.indices for s in serial] == [s.indices for s in parallel]


def test_braid_orbit_a1(a1):
    system = make_system(a1, [(1,), (1,)])
    assert braid_orbit(system) == {system}


def test_braid_orbit_is_every_generating_system(a2):
    systems = systems_for("A2", "n=4")
    checker = EdgeChecker(a2, rate=1.0)
    orbit = braid_orbit(systems[7], checker=checker)
    assert orbit == set(systems)
    assert checker.checked == 24 * 3 * 2


def test_braid_orbit_cap(a2):
    with pytest.raises(CapExceededError) as exc:
        braid_orbit(systems_for("A2", "n=4")[0], cap=5)
    assert exc.value.cap_name == "ORBIT_NODE_CAP"


def test_edge_checker_detects_changed_product(a2):
    checker = EdgeChecker(a2, rate=1.0)
    before = make_system(a2, [(1, 0), (1, 0), (0, 1), (0, 1)]).indices
    after = (before[0], before[2], before[1], before[3])
    with pytest.raises(TheoremViolationError):
        checker(before, after)


def test_edge_checker_sampling(a2):
    system = systems_for("A2", "n=4")[0]
    assert EdgeChecker(a2, rate=0.0)(system.indices, system.indices) is None
    checker = EdgeChecker(a2, rate=0.0)
    braid_orbit(system, checker=checker)
    assert checker.checked == 0


def test_orbit_partition():
    systems = systems_for("B2", "ns=2,nl=2")
    orbits = orbit_partition(systems)
    assert len(orbits) == 1
    assert orbits[0] == systems


def test_orbit_partition_rejects_partial_input():
    systems = systems_for("A2", "n=4")
    with pytest.raises(TheoremViolationError):
        orbit_partition(systems[:5])


def test_nielsen_quotient():
    classes = nielsen_quotient(systems_for("A2", "n=4"))
    assert [len(nc.members) for nc in classes] == [6, 6, 6, 6]
    hashes = [stable_hash(nc.representative) for nc in classes]
    assert hashes == sorted(hashes)
    for nc in classes:
        assert nc.representative in nc.members
        assert stable_hash(nc.representative) == min(stable_hash(m) for m in nc.members)


def test_nielsen_quotient_of_abelian_weyl_group():
    classes = nielsen_quotient(systems_for("A1+A1", "n=2;n=2"))
    assert all(len(nc.members) == 1 for nc in classes)


def test_braid_orbits_on_nielsen_classes():
    systems = systems_for("G2", "ns=2,nl=2")
    assert count_braid_orbits_on_nielsen_classes(systems) == 1
    # classes outside the input are explored too
    assert count_braid_orbits_on_nielsen_classes(systems[:1]) == 1
    assert count_braid_orbits_on_nielsen_classes([]) == 0


@pytest.mark.parametrize("label,branching,systems,classes", COUNTS)
def test_verify_irreducibility(label, branching, systems, classes):
    spec = parse_spec(label)
    report = verify_irreducibility(spec, parse_branching(branching, spec))
    assert report.total_systems == systems
    assert report.orbit_count == (1 if systems else 0)
    assert report.orbit_sizes == ([systems] if systems else [])
    assert report.nielsen_class_count == classes
    assert report.nielsen_orbit_count == report.orbit_count
    assert report.nonempty_predicted == bool(systems)
    assert report.spec == spec.label
    assert report.elapsed_seconds is None


def test_verify_is_deterministic_across_jobs():
    spec = parse_spec("G2")
    branching = parse_branching("ns=2,nl=2", spec)
    first = verify_irreducibility(spec, branching, jobs=1)
    second = verify_irreducibility(spec, branching, jobs=2)
    assert canonical_json(first) == canonical_json(second)


def test_verify_reports_caps():
    spec = parse_spec("A2")
    report = verify_irreducibility(spec, parse_branching("n=4", spec), orbit_cap=100)
    assert report.caps["ORBIT_NODE_CAP"] == 100
    with pytest.raises(CapExceededError):
        verify_irreducibility(spec, parse_branching("n=4", spec), orbit_cap=5)
