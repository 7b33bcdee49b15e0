import json

import numpy as np
import pytest

from idclusters.errors import MissingInput, ParseError, ValidationError
from idclusters.scenarios import (
    bundled_scenarios,
    encode_complex,
    load_scenario,
    parse_scenario,
    resolve_scenario,
    run_scenario,
)
from idclusters.tensor_space import kron_all, rel_residual


def pair_doc(**changes):
    doc = {
        "schema_version": 1,
        "name": "pair",
        "space": {"d": 2, "N": 2, "statistics": "fermion"},
        "clusters": [
            {"name": "E", "size": 1, "projector": {"form": "diagonal", "data": [1, 0]}},
            {"name": "F", "size": 1, "projector": {"form": "diagonal", "data": [0, 1]}},
        ],
        "state": {"form": "vector", "data": [[0, 0], [0.7071067811865476, 0], [-0.7071067811865476, 0], [0, 0]]},
    }
    doc.update(changes)
    return doc


def test_bundled_scenarios_load():
    assert bundled_scenarios() == ["earth_moon", "local_domains", "nucleons", "two_particle",
                                   "valence_electrons"]
    for name in bundled_scenarios():
        sc = load_scenario(name)
        assert sc.name == name
        assert sc.state is not None
    assert load_scenario("valence_electrons").illustrative


def test_nucleons_layout():
    sc = load_scenario("nucleons")
    assert (sc.space.d, sc.space.N) == (6, 3)
    assert sc.clusters.sizes == (2, 1)
    assert sc.cluster_names == ("protons", "neutrons")
    # proton projector = isospin-up projector x identity on the orbital factor
    assert np.allclose(sc.clusters.projectors[0], np.kron(np.diag([1, 0]), np.eye(3)))
    rep = run_scenario(sc, "verify")
    assert rep.ok
    dims = [c for c in rep.checks if c.name == "scenario.dims"][0].value
    # C(3,2) proton pairs times 3 neutron orbitals
    assert dims["dim_HD"] == dims["dim_HId"] == 9


def test_two_particle_pair_form_and_decoupled_state():
    sc = load_scenario("two_particle")
    E, F = sc.clusters.projectors
    assert rel_residual(sc.model.Q_sym, kron_all([E, F]) + kron_all([F, E])) < 1e-12
    rep = run_scenario(sc, "verify")
    names = {c.name: c for c in rep.checks}
    assert names["scenario.pair_form"].passed and names["scenario.pair_form"].residual < 1e-12
    assert names["state.decoupled"].passed


def test_local_domains_delocalized_defect():
    rep = run_scenario("local_domains", "defect")
    values = {c.name: c.value["defect"] for c in rep.checks}
    assert values["defect[state]"] == pytest.approx(0.0, abs=1e-12)
    assert 0 < values["defect[delocalized]"] < 1
    assert values["defect[delocalized]"] == pytest.approx(0.5)


@pytest.mark.parametrize("name", ["earth_moon", "local_domains", "nucleons", "two_particle", "valence_electrons"])
@pytest.mark.parametrize("command", ["verify", "measure", "evolve", "defect"])
def test_every_bundled_command_passes(name, command):
    assert run_scenario(name, command).ok


def test_selective_measure_and_missing_observable():
    rep = run_scenario("nucleons", "measure", observable="orbital_energy", outcome=1)
    assert rep.ok
    with pytest.raises(MissingInput):
        run_scenario("nucleons", "measure", observable="spin")
    rep = run_scenario("nucleons", "measure", observable="orbital_energy", outcome=0)
    assert not rep.ok and "UndetectableOutcome" in rep.failures[0].error


def test_missing_inputs():
    doc = pair_doc()
    del doc["state"]
    sc = parse_scenario(doc)
    with pytest.raises(MissingInput):
        run_scenario(sc, "defect")
    with pytest.raises(MissingInput):
        run_scenario(sc, "evolve")
    with pytest.raises(MissingInput):
        run_scenario(sc, "measure")
    with pytest.raises(ValueError):
        run_scenario(sc, "dance")


def test_noncommuting_generator_is_reported():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    doc = pair_doc(generator={"form": "one_body", "single": {"form": "matrix", "data": encode_complex(X)}})
    rep = run_scenario(parse_scenario(doc), "evolve")
    assert not rep.ok
    assert "CompatibilityViolated" in rep.failures[0].error


def test_non_hermitian_projector_is_rejected():
    bad = pair_doc()
    bad["clusters"][0]["projector"] = {"form": "matrix", "data": [[[1, 0], [1, 0]], [[0, 0], [0, 0]]]}
    with pytest.raises(ValidationError) as err:
        parse_scenario(bad)
    assert str(err.value).startswith("clusters")


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d.update(schema_version=2), ""),
    (lambda d: d["space"].update(statistics="anyon"), "space/statistics"),
    (lambda d: d["state"].update(data=[[1, 0]]), "state"),
    (lambda d: d["state"].update(data=[[1, 0], [1, 0], [0, 0], [0, 0]]), "state"),
    (lambda d: d.update(observables={"x": {"form": "matrix", "data": [[[0, 1], [0, 0]], [[0, 0], [0, 0]]]}}),
     "observables/x"),
    (lambda d: d["clusters"][1]["projector"].update(data=[1, 1]), "clusters"),
    (lambda d: d["clusters"][0].update(size=2), "clusters"),
])
def test_validation_errors_carry_field_path(mutate, where):
    doc = pair_doc()
    mutate(doc)
    with pytest.raises(ValidationError) as err:
        parse_scenario(doc)
    assert str(err.value).startswith(where)


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_scenario(bad)
    with pytest.raises(ParseError):
        resolve_scenario(tmp_path / "missing.json")


def test_roundtrip_through_a_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(pair_doc()))
    sc = load_scenario(path)
    assert sc.path == str(path)
    assert run_scenario(path, "verify").ok


def test_encode_complex_roundtrip():
    A = np.array([[1 + 2j, 0], [3, -1j]])
    assert encode_complex(A) == [[[1.0, 2.0], [0.0, 0.0]], [[3.0, 0.0], [0.0, -1.0]]]
