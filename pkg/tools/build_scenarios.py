"""Regenerate the bundled scenario files under src/idclusters/data/scenarios.

Run from the repository root:  python3 tools/build_scenarios.py
"""

import json
from pathlib import Path

import numpy as np

from idclusters.scenarios import encode_complex, parse_scenario

OUT = Path(__file__).resolve().parents[1] / "src" / "idclusters" / "data" / "scenarios"


def diag(values):
    return {"form": "diagonal", "data": [float(v) for v in values]}


def one_body(single):
    return {"form": "one_body", "single": single}


def matrix(A):
    return {"form": "matrix", "data": encode_complex(A)}


def unit(d, *terms):
    """Normalized single-particle vector from (index, amplitude) pairs."""
    v = np.zeros(d, dtype=complex)
    for k, a in terms:
        v[k] = a
    return encode_complex(v / np.linalg.norm(v))


def product(*factors):
    return {"form": "symmetrized_product", "factors": list(factors)}


def block_hopping(blocks, d, strengths):
    H = np.zeros((d, d))
    for (a, b), s in zip(blocks, strengths):
        H[a, b] = H[b, a] = s
    return H


def two_particle():
    d = 2
    return {
        "schema_version": 1,
        "name": "two_particle",
        "description": "Two fermions told apart by complementary rank-1 properties E and F.",
        "space": {"d": 2, "N": 2, "statistics": "fermion", "basis_labels": ["e", "f"]},
        "clusters": [
            {"name": "E", "size": 1, "projector": diag([1, 0])},
            {"name": "F", "size": 1, "projector": diag([0, 1])},
        ],
        "state": product(unit(d, (0, 1)), unit(d, (1, 1))),
        "observables": {"count_E": one_body(diag([1, 0]))},
        "generator": one_body(diag([0.3, -0.7])),
    }


def nucleons():
    # single-nucleon basis: isospin (proton, neutron) x three orbital-spin states
    d = 6
    orbital_hop = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
    generator = np.kron(np.eye(2), orbital_hop) + np.kron(np.diag([0.5, -0.5]), np.diag([0, 0.3, 0]))
    return {
        "schema_version": 1,
        "name": "nucleons",
        "description": (
            "Two protons and one neutron. Each nucleon is isospin x a 3-state orbital-spin "
            "surrogate; the cluster projectors are the t_z eigenprojectors times the identity."
        ),
        "space": {
            "d": d, "N": 3, "statistics": "fermion",
            "basis_labels": ["p0", "p1", "p2", "n0", "n1", "n2"],
        },
        "clusters": [
            {"name": "protons", "size": 2, "projector": diag([1, 1, 1, 0, 0, 0])},
            {"name": "neutrons", "size": 1, "projector": diag([0, 0, 0, 1, 1, 1])},
        ],
        "state": product(unit(d, (0, 1)), unit(d, (1, 1)), unit(d, (3, 1), (5, 1))),
        "states": {
            "charge_mixed": product(unit(d, (0, 1)), unit(d, (1, 1)), unit(d, (3, 1), (2, 1))),
        },
        "observables": {
            "orbital_energy": one_body(diag([0, 1, 2, 0, 1, 2])),
            "occupation_orbital_0": one_body(diag([1, 0, 0, 1, 0, 0])),
            "t_z": one_body(diag([0.5, 0.5, 0.5, -0.5, -0.5, -0.5])),
        },
        "generator": one_body(matrix(generator)),
    }


def local_domains():
    # spatial blocks: two on earth, two elsewhere
    d = 4
    return {
        "schema_version": 1,
        "name": "local_domains",
        "description": (
            "Two electrons on earth and one elsewhere. Space is discretized into four "
            "blocks; the earth projector covers the first two."
        ),
        "space": {
            "d": d, "N": 3, "statistics": "fermion",
            "basis_labels": ["earth_a", "earth_b", "away_a", "away_b"],
        },
        "clusters": [
            {"name": "earth", "size": 2, "projector": diag([1, 1, 0, 0])},
            {"name": "away", "size": 1, "projector": diag([0, 0, 1, 1])},
        ],
        "state": product(unit(d, (0, 1)), unit(d, (1, 1)), unit(d, (2, 1))),
        "states": {
            # one electron split evenly between earth and elsewhere
            "delocalized": product(unit(d, (0, 1)), unit(d, (2, 1)), unit(d, (1, 1), (3, 1))),
        },
        "observables": {
            "earth_block_b": one_body(diag([0, 1, 0, 0])),
            "away_block_b": one_body(diag([0, 0, 0, 1])),
        },
        "generator": one_body(matrix(block_hopping([(0, 1), (2, 3)], d, [1.0, 0.5]))),
    }


def earth_moon():
    d = 6
    state = product(unit(d, (0, 1)), unit(d, (2, 1)), unit(d, (4, 1), (5, 1)))
    return {
        "schema_version": 1,
        "name": "earth_moon",
        "description": (
            "One electron in each of three disjoint domains: an earth laboratory, a moon "
            "laboratory and a third region. Each domain is two blocks."
        ),
        "space": {
            "d": d, "N": 3, "statistics": "fermion",
            "basis_labels": ["earth_a", "earth_b", "moon_a", "moon_b", "third_a", "third_b"],
        },
        "clusters": [
            {"name": "earth", "size": 1, "projector": diag([1, 1, 0, 0, 0, 0])},
            {"name": "moon", "size": 1, "projector": diag([0, 0, 1, 1, 0, 0])},
            {"name": "third", "size": 1, "projector": diag([0, 0, 0, 0, 1, 1])},
        ],
        "state": state,
        "states": {
            "delocalized": product(unit(d, (0, 1), (2, 1)), unit(d, (3, 1)), unit(d, (4, 1))),
        },
        "observables": {
            "earth_lab": one_body(diag([1, -1, 0, 0, 0, 0])),
            "moon_lab": one_body(diag([0, 0, 1, -1, 0, 0])),
        },
        "generator": one_body(matrix(block_hopping([(0, 1), (2, 3), (4, 5)], d, [1.0, 0.7, 0.2]))),
    }


def valence_electrons():
    d = 5
    valence = np.array([[-1.0, 0.2, 0.0], [0.2, -0.5, 0.0], [0.0, 0.0, -0.5]])
    gen = np.zeros((d, d))
    gen[:2, :2] = -10 * np.eye(2)
    gen[2:, 2:] = valence
    return {
        "schema_version": 1,
        "name": "valence_electrons",
        "illustrative": True,
        "description": (
            "ILLUSTRATIVE: an invented shell split, not taken from any data. Two core electrons "
            "(a filled two-state shell) and one valence electron in a three-state shell."
        ),
        "space": {
            "d": d, "N": 3, "statistics": "fermion",
            "basis_labels": ["core_up", "core_down", "val_s", "val_p_plus", "val_p_minus"],
        },
        "clusters": [
            {"name": "core", "size": 2, "projector": diag([1, 1, 0, 0, 0])},
            {"name": "valence", "size": 1, "projector": diag([0, 0, 1, 1, 1])},
        ],
        "state": product(unit(d, (0, 1)), unit(d, (1, 1)), unit(d, (2, 1), (3, 1))),
        "observables": {
            "shell_energy": one_body(diag([-10, -10, -1, -0.5, -0.5])),
            "valence_p": one_body(diag([0, 0, 0, 1, 1])),
        },
        "generator": one_body(matrix(gen)),
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in (two_particle, nucleons, local_domains, earth_moon, valence_electrons):
        doc = build()
        parse_scenario(doc)
        path = OUT / f"{doc['name']}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
