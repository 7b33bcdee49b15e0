"""Scenario files: small, concrete cluster setups stored as JSON.

A scenario fixes the single-particle dimension, particle number, statistics,
the named clusters with their single-particle projectors, and optionally a
state, named observables and an evolution generator.  Complex numbers are
``[re, im]`` pairs and matrices are row-major nested arrays.  Operators come
in three forms::

    {"form": "matrix", "data": [[[re, im], ...], ...]}
    {"form": "diagonal", "data": [x0, x1, ...]}        # real diagonal
    {"form": "one_body", "single": <operator on one particle>}

``one_body`` expands to ``sum_n 1 x ... x h_n x ... x 1`` on the N-particle
space when it is used as an N-particle operator.  States are given as a
``density`` matrix, a ``vector``, or a ``symmetrized_product`` of
single-particle vectors that is (anti)symmetrized and normalized on load.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import measurement as meas
from . import transport as tr
from .cluster_model import ClusterModel, validate_clusters
from .errors import IdClustersError, MissingInput, ParseError, ValidationError
from .permutations import ClusterSpec
from .report import CheckRecord, Report
from .sampling import rng_for
from .symmetrizers import symmetrizer
from .tensor_space import (
    DEFAULT_TOL,
    SpaceSpec,
    hermiticity_residual,
    kron_all,
    rel_residual,
)

COMMANDS = ("verify", "measure", "evolve", "defect")


def _data_file(name: str):
    return resources.files("idclusters") / "data" / name


def scenario_schema() -> dict:
    return json.loads(_data_file("scenario.schema.json").read_text())


def report_schema() -> dict:
    return json.loads(_data_file("report.schema.json").read_text())


def bundled_scenarios() -> list[str]:
    folder = _data_file("scenarios")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def resolve_scenario(name_or_path) -> Path:
    """A file path as given, or the bundled scenario of that name."""
    path = Path(name_or_path)
    if path.exists():
        return path
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in bundled_scenarios():
        return Path(str(_data_file("scenarios") / f"{stem}.json"))
    raise ParseError(f"no scenario file or bundled scenario named {name_or_path!r}")


@dataclass(eq=False)
class Scenario:
    name: str
    space: SpaceSpec
    clusters: ClusterSpec
    cluster_names: tuple[str, ...]
    description: str = ""
    illustrative: bool = False
    state: np.ndarray | None = None
    states: dict[str, np.ndarray] = field(default_factory=dict)
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    generator: np.ndarray | None = None
    tol: float = DEFAULT_TOL
    cluster_eps: float = meas.DEFAULT_CLUSTER_EPS
    path: str | None = None

    @cached_property
    def model(self) -> ClusterModel:
        return ClusterModel(self.clusters, self.space, self.tol)

    def get_state(self, name: str | None = None) -> np.ndarray:
        if name is None:
            if self.state is None:
                raise MissingInput(f"scenario {self.name!r} has no state")
            return self.state
        if name not in self.states:
            raise MissingInput(f"scenario {self.name!r} has no state named {name!r}")
        return self.states[name]

    def get_observable(self, name: str | None = None) -> tuple[str, np.ndarray]:
        if not self.observables:
            raise MissingInput(f"scenario {self.name!r} has no observables")
        if name is None:
            name = next(iter(self.observables))
        if name not in self.observables:
            raise MissingInput(f"scenario {self.name!r} has no observable named {name!r}")
        return name, self.observables[name]


# -- decoding ---------------------------------------------------------------

def _complex_array(data, path) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except ValueError as exc:
        raise ValidationError("ragged array", path) from exc
    if arr.shape[-1:] != (2,):
        raise ValidationError("complex entries must be [re, im] pairs", path)
    return arr[..., 0] + 1j * arr[..., 1]


def _one_body(h: np.ndarray, N: int) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d)
    return sum(kron_all([h if m == n else eye for m in range(N)]) for n in range(N))


def _decode_operator(obj, path, N: int | None = None) -> np.ndarray:
    """Operator of a scenario; ``N`` expands ``one_body`` forms to N particles."""
    form = obj["form"]
    if form == "matrix":
        A = _complex_array(obj["data"], path + ("data",))
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"matrix must be square, got shape {A.shape}", path + ("data",))
        return A
    if form == "diagonal":
        return np.diag(np.asarray(obj["data"], dtype=float)).astype(complex)
    h = _decode_operator(obj["single"], path + ("single",))
    if N is None:
        raise ValidationError("one_body form is not allowed here", path)
    return _one_body(h, N)


def _require_hermitian(A, tol, path):
    res = hermiticity_residual(A)
    if res > tol:
        raise ValidationError(f"operator is not Hermitian (residual {res:.3e})", path)


def _require_dim(A, dim, path):
    if A.shape != (dim, dim):
        raise ValidationError(f"expected a {dim}x{dim} operator, got {A.shape}", path)


def _decode_state(obj, space: SpaceSpec, tol: float, path) -> np.ndarray:
    form = obj["form"]
    if form == "density":
        rho = _complex_array(obj["data"], path + ("data",))
        _require_dim(rho, space.dim, path + ("data",))
        _require_hermitian(rho, tol, path + ("data",))
        rho = (rho + rho.conj().T) / 2
        if abs(np.trace(rho).real - 1.0) > tol:
            raise ValidationError(f"density has trace {np.trace(rho).real:.6g}, not 1", path)
        if np.linalg.eigvalsh(rho).min() < -tol:
            raise ValidationError("density is not positive semidefinite", path)
        return rho
    if form == "vector":
        psi = _complex_array(obj["data"], path + ("data",))
        if psi.shape != (space.dim,):
            raise ValidationError(f"expected a vector of length {space.dim}", path + ("data",))
    else:
        factors = obj["factors"]
        if len(factors) != space.N:
            raise ValidationError(f"need {space.N} single-particle factors", path + ("factors",))
        vecs = []
        for k, f in enumerate(factors):
            v = _complex_array(f, path + ("factors", k))
            if v.shape != (space.d,):
                raise ValidationError(f"factor must have length {space.d}", path + ("factors", k))
            vecs.append(v)
        psi = symmetrizer(space) @ kron_all([v[:, None] for v in vecs]).ravel()
    norm = np.linalg.norm(psi)
    if form == "vector" and abs(norm - 1.0) > math.sqrt(tol):
        raise ValidationError(f"state vector has norm {norm:.6g}, not 1", path)
    if norm < 1e-12:
        raise ValidationError("symmetrized product vanishes", path)
    psi = psi / norm
    return np.outer(psi, psi.conj())


def _schema_errors(doc) -> None:
    validator = jsonschema.Draft202012Validator(scenario_schema())
    best = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if best is not None:
        raise ValidationError(best.message, tuple(best.absolute_path))


def parse_scenario(doc: dict, max_dim: int | None = None, path: str | None = None) -> Scenario:
    """Validate a decoded JSON document and build the :class:`Scenario`."""
    _schema_errors(doc)
    sp = doc["space"]
    tol = doc.get("tolerance", {}).get("tol", DEFAULT_TOL)
    cluster_eps = doc.get("tolerance", {}).get("cluster_eps", meas.DEFAULT_CLUSTER_EPS)
    try:
        space = SpaceSpec(sp["d"], sp["N"], sp["statistics"], max_dim=max_dim)
    except ValueError as exc:
        raise ValidationError(str(exc), ("space",)) from exc
    if "basis_labels" in sp and len(sp["basis_labels"]) != space.d:
        raise ValidationError(f"need {space.d} basis labels", ("space", "basis_labels"))

    projectors = []
    for j, c in enumerate(doc["clusters"]):
        where = ("clusters", j, "projector")
        P = _decode_operator(c["projector"], where)
        _require_dim(P, space.d, where)
        projectors.append(P)
    clusters = ClusterSpec(tuple(c["size"] for c in doc["clusters"]), tuple(projectors))
    try:
        validate_clusters(clusters, space, tol)
    except IdClustersError as exc:
        raise ValidationError(f"{type(exc).__name__}: {exc}", ("clusters",)) from exc

    observables = {}
    for name, obj in doc.get("observables", {}).items():
        where = ("observables", name)
        A = _decode_operator(obj, where, space.N)
        _require_dim(A, space.dim, where)
        _require_hermitian(A, tol, where)
        observables[name] = A
    generator = None
    if "generator" in doc:
        generator = _decode_operator(doc["generator"], ("generator",), space.N)
        _require_dim(generator, space.dim, ("generator",))
        _require_hermitian(generator, tol, ("generator",))
    state = _decode_state(doc["state"], space, tol, ("state",)) if "state" in doc else None
    states = {name: _decode_state(obj, space, tol, ("states", name))
              for name, obj in doc.get("states", {}).items()}
    return Scenario(
        name=doc["name"],
        space=space,
        clusters=clusters,
        cluster_names=tuple(c["name"] for c in doc["clusters"]),
        description=doc.get("description", ""),
        illustrative=doc.get("illustrative", False),
        state=state,
        states=states,
        observables=observables,
        generator=generator,
        tol=tol,
        cluster_eps=cluster_eps,
        path=path,
    )


def load_scenario(path, max_dim: int | None = None) -> Scenario:
    """Read, schema-check and decode a scenario file.

    ``path`` may also name a bundled scenario (``"nucleons"``).

    Raises
    ------
    ParseError
        The file cannot be read or is not JSON.
    ValidationError
        The content breaks the schema or a physical constraint; the message
        starts with the path of the offending field.
    """
    path = resolve_scenario(path)
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_scenario(doc, max_dim, str(path))


def encode_complex(A) -> list:
    """Nested ``[re, im]`` lists for a complex array (inverse of the decoder)."""
    A = np.asarray(A, dtype=complex)
    return np.stack([A.real, A.imag], axis=-1).tolist()


# -- running ----------------------------------------------------------------

class _Runner:
    def __init__(self, scenario: Scenario, report: Report):
        self.scenario = scenario
        self.report = report

    def run(self, name: str, identity: str, fn, threshold: float | None = None):
        threshold = self.scenario.tol if threshold is None else threshold
        rec = CheckRecord(name, identity, self.scenario.name, False, threshold=threshold)
        try:
            out = fn()
            value = None
            if isinstance(out, tuple):
                out, value = out
            rec.residual = float(out)
            rec.value = value
            rec.passed = rec.residual <= threshold
        except IdClustersError as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        return self.report.add(rec)


def _verify(sc: Scenario, run: _Runner, seed: int) -> None:
    model = sc.model
    dims = model.dims

    run.run("scenario.dims", "dim H^Id = dim H^D",
            lambda: (abs(dims.dim_HD - dims.dim_HId),
                     {"dim_HD": dims.dim_HD, "dim_HId": dims.dim_HId,
                      "coset_count": dims.coset_count, "full_dim": sc.space.dim}),
            threshold=0.0)
    if sc.space.N == 2 and sc.clusters.J == 2:
        E, F = sc.clusters.projectors

        def pair_form():
            return rel_residual(model.Q_sym, kron_all([E, F]) + kron_all([F, E]))

        run.run("scenario.pair_form", "Q_sym = E x F + F x E", pair_form, threshold=1e-12)

    iso_report = {}

    def iso(key):
        if not iso_report:
            iso_report.update(tr.verify_isomorphisms(model, rng_for(seed, f"isomorphism@{sc.name}")).residuals)
        return iso_report[key]

    for key in ("unitarity", "coupling_is_adjoint", "compose_on_D", "compose_on_Id", "scalar_products"):
        run.run(f"isomorphism.{key}", f"isomorphism law: {key.replace('_', ' ')}",
                lambda key=key: iso(key), threshold=1e-10)

    for name, B in sc.observables.items():
        def id_to_d(B=B):
            _, res = tr.id_to_d_residuals(B, model)
            return max(res.values())

        run.run(f"transport.id_to_d[{name}]", "reducee of c^2 Q B S Q = U (reducee of B) U^+", id_to_d)
        run.run(f"transport.roundtrip[{name}]", "symmetrized decoupled observable has the original reducee",
                lambda B=B: tr.roundtrip_residual(B, model))
        if sc.state is not None:
            def expectation(B=B):
                rec = tr.expectation_check(sc.state, B, model)
                return rec.residual, {"identical": rec.val_Id, "distinct": rec.val_D}

            run.run(f"expectation.equal[{name}]", "tr(rho_Id B_Id) = tr(rho_D B_D)", expectation)

    if sc.state is not None:
        def decoupled():
            rho = tr.check_identical_state(sc.state, model)
            rho_D = tr.transport_state(rho, model)
            w, vecs = np.linalg.eigh(rho)
            res = max(abs(np.trace(rho_D).real - 1.0), rel_residual(model.P_D @ rho_D, rho_D))
            if w[-1] > 1 - sc.tol:
                # pure state: the decoupling map itself sends it to a unit vector in H^D
                v = model.scale * (model.Q @ vecs[:, -1])
                res = max(res, abs(np.linalg.norm(v) - 1.0), float(np.linalg.norm(model.P_D @ v - v)))
            return res

        run.run("state.decoupled", "decoupled state is a unit-trace state on H^D", decoupled, threshold=1e-12)


def _measure(sc: Scenario, run: _Runner, observable, outcome) -> None:
    name, A = sc.get_observable(observable)
    rho = sc.get_state()
    model = sc.model
    label = name if outcome is None else f"{name}#{outcome}"

    def probabilities():
        dec = meas.spectral_decompose(A, sc.cluster_eps, sc.tol)
        probs = [float(np.trace(E @ rho).real) for E in dec.projectors]
        return abs(sum(probs) - 1.0), {"eigenvalues": list(dec.eigenvalues), "probabilities": probs}

    def update():
        out = meas.luders_reduced(rho, A, model, outcome, sc.cluster_eps)
        return abs(np.trace(out).real - 1.0), {"defect_after": meas.possession_defect(out, model.Q_sym)}

    run.run(f"measure.probabilities[{name}]", "outcome probabilities sum to 1", probabilities, threshold=1e-12)
    run.run(f"measure.trace[{label}]", "updated state has unit trace", update, threshold=1e-12)
    run.run(f"measure.reduced_vs_full[{label}]", "reduced update = full-space update",
            lambda: meas.reduced_vs_full_residual(rho, A, model, outcome, sc.cluster_eps), threshold=1e-9)
    run.run(f"measure.diagram[{label}]", "measure-then-decouple = decouple-then-measure",
            lambda: meas.measurement_diagram(rho, A, model, outcome, sc.cluster_eps).residual, threshold=1e-9)


def _evolve(sc: Scenario, run: _Runner, t: float) -> None:
    if sc.generator is None:
        raise MissingInput(f"scenario {sc.name!r} has no evolution generator")
    rho = sc.get_state()

    def evolve():
        U = tr.exp_i_hermitian(sc.generator, t)
        rec = tr.transfer_evolution(U, rho, sc.model)
        return rec.residual, {"t": t, "defect_after": meas.possession_defect(rec.rho_f_Id, sc.model.Q_sym)}

    run.run("evolve.transfer", "decoupled final state = U_D (decoupled initial state) U_D^+", evolve,
            threshold=1e-8)


def _defect(sc: Scenario, run: _Runner) -> None:
    named = ([("state", sc.state)] if sc.state is not None else []) + sorted(sc.states.items())
    if not named:
        raise MissingInput(f"scenario {sc.name!r} has no state")
    F = sc.model.Q_sym
    for name, rho in named:
        def defect(rho=rho):
            value = meas.possession_defect(rho, F)
            # report-only: the residual is the distance from the admissible range
            return 0.0, {"defect": value, "possesses": value <= sc.tol}

        run.run(f"defect[{name}]", "1 - tr(Q_sym rho) in [0, 1]", defect, threshold=0.0)


def run_scenario(scenario, command: str = "verify", observable: str | None = None,
                 outcome: int | None = None, t: float = 1.0, seed: int = 0,
                 tol: float | None = None, max_dim: int | None = None) -> Report:
    """Run one scenario command and collect the results in a report.

    ``verify`` checks the isomorphisms, transports every observable, and
    decouples the state; ``measure`` runs the reduced Lüders update and the
    measurement square for ``observable`` (nonselective unless ``outcome``
    is given); ``evolve`` replays ``exp(i t G)`` on both spaces; ``defect``
    reports ``1 - tr(Q_sym rho)`` for every bundled state.

    Errors inside a check (an inadmissible generator, say) become failed
    records.  A missing state, observable or generator raises ``MissingInput``.
    """
    if command not in COMMANDS:
        raise ValueError(f"unknown scenario command {command!r}; expected one of {COMMANDS}")
    sc = scenario if isinstance(scenario, Scenario) else load_scenario(scenario, max_dim)
    if tol is not None:
        sc.tol = tol
        sc.__dict__.pop("model", None)
    config = {"scenario": sc.name, "command": command, "seed": seed, "tol": sc.tol}
    if observable is not None:
        config["observable"] = observable
    if outcome is not None:
        config["outcome"] = outcome
    if command == "evolve":
        config["t"] = t
    report = Report("scenario", config)
    run = _Runner(sc, report)
    if command == "verify":
        _verify(sc, run, seed)
    elif command == "measure":
        _measure(sc, run, observable, outcome)
    elif command == "evolve":
        _evolve(sc, run, t)
    else:
        _defect(sc, run)
    return report
