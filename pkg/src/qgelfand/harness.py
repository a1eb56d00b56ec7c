"""Claims suites: deterministic, seeded batch runs of the verification and
falsification probes over a list of algebra instances.

Commutative instances must satisfy every probed identity; noncommutative
defects are findings and never fail a run.
"""

from __future__ import annotations

import json
import pathlib
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    FdAlgebra,
    State,
    gns,
    is_irreducible,
    is_pure,
    r_is_discrete,
    random_pure_state,
)
from .linalg import Projector, matrix_from_json
from .qspace import (
    ClaimsReport,
    QFunction,
    cstar_identity_defect,
    hat_is_characteristic_defect,
    hat_preimage_qness,
    prop9_defect,
    subset_from_projectors,
    thm3_diagnostics,
    _top_spectral_projector,
)

SUITES = ("prop1", "prop2", "prop7", "prop9", "thm3", "preimage")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    suite: str
    instances: list  # file paths or inline instance dicts
    seed: int
    samples: int = 1000
    mode: str = "superposition"
    base_dir: pathlib.Path = field(default_factory=pathlib.Path)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; pick one of {SUITES}")
        if self.seed is None or int(self.seed) < 0:
            raise ConfigError("seed is mandatory and must be a nonnegative integer")
        self.seed = int(self.seed)
        if int(self.samples) <= 0:
            raise ConfigError("samples must be positive")
        self.samples = int(self.samples)
        if self.mode not in ("superposition", "literal"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not self.instances:
            raise ConfigError("at least one instance is required")

    @classmethod
    def from_json(cls, obj: dict, base_dir: pathlib.Path | None = None) -> "RunConfig":
        try:
            return cls(
                suite=obj["suite"],
                instances=list(obj["instances"]),
                seed=obj["seed"],
                samples=obj.get("samples", 1000),
                mode=obj.get("mode", "superposition"),
                base_dir=base_dir or pathlib.Path(),
            )
        except KeyError as exc:
            raise ConfigError(f"claims config missing field {exc}") from exc


def load_instance(entry, base_dir: pathlib.Path) -> tuple[str, FdAlgebra, dict]:
    """An instance is either a path to an algebra JSON file or an inline
    dict {"name", "algebra", optional "element", "center", "radius"}."""
    if isinstance(entry, str):
        path = base_dir / entry
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read instance {entry}: {exc}") from exc
        name = pathlib.Path(entry).stem
        extras = {k: obj[k] for k in ("element", "center", "radius") if k in obj}
        return name, FdAlgebra.from_json(obj), extras
    if isinstance(entry, dict):
        try:
            alg = FdAlgebra.from_json(entry["algebra"])
        except KeyError as exc:
            raise ConfigError(f"inline instance missing field {exc}") from exc
        extras = {k: entry[k] for k in ("element", "center", "radius") if k in entry}
        return entry.get("name", "inline"), alg, extras
    raise ConfigError(f"instance entries must be paths or dicts, got {type(entry)}")


def _random_hermitian(alg: FdAlgebra, rng: np.random.Generator) -> np.ndarray:
    return alg.random_element(rng, hermitian=True)


def _suite_prop1(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    dec = alg.decomposition()
    discrete = r_is_discrete(dec)
    comm = alg.is_commutative()
    return [ClaimsReport(
        "prop1_dichotomy", name,
        {"r_discrete": discrete, "commutative": comm},
        "holds-within-tol" if discrete == comm else "fails",
        [], mode=cfg.mode, seed=cfg.seed,
    )]


def _suite_prop2(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    dec = alg.decomposition()
    n = alg.ambient_dim
    mismatches = 0
    witness = None
    for _ in range(cfg.samples):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = g @ g.conj().T
        rho = rho / np.real(np.trace(rho))
        state = State(rho)
        pure = is_pure(dec, state)
        irr = is_irreducible(gns(alg, state))
        if pure != irr:
            mismatches += 1
            if witness is None:
                witness = rho
    return [ClaimsReport(
        "prop2_purity_irreducibility", name,
        {"samples": cfg.samples, "mismatches": mismatches},
        "holds-within-tol" if mismatches == 0 else "fails",
        [witness] if witness is not None else [],
        mode=cfg.mode, seed=cfg.seed,
    )]


def _instance_projectors(alg, extras, rng) -> list[np.ndarray]:
    if "element" in extras:
        a = alg.require_member(matrix_from_json(extras["element"]))
        h = (a + a.conj().T) / 2
        return [_top_spectral_projector(alg, h)]
    return [
        _top_spectral_projector(alg, _random_hermitian(alg, rng)),
        _top_spectral_projector(alg, _random_hermitian(alg, rng)),
    ]


def _suite_prop7(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    dec = alg.decomposition()
    projs = _instance_projectors(alg, extras, rng)
    if len(projs) == 1:
        projs = projs * 2
    subsets = [
        subset_from_projectors(dec, [Projector(blk.irrep(p)) for blk in dec.blocks])
        for p in projs
    ]
    f = QFunction(dec, [(1.0 + 0j, subsets[0]), (1j, subsets[1])])
    rep = cstar_identity_defect(f, instance=name)
    rep.mode, rep.seed = cfg.mode, cfg.seed
    return [rep]


def _suite_prop9(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    dec = alg.decomposition()
    a = _random_hermitian(alg, rng)
    b = _random_hermitian(alg, rng)
    state = random_pure_state(dec, rng)
    rep = prop9_defect(alg, state, a, b, instance=name)
    rep.mode, rep.seed = cfg.mode, cfg.seed
    p = _instance_projectors(alg, extras, rng)[0]
    rep2 = hat_is_characteristic_defect(alg, p, cfg.samples, rng, instance=name)
    rep2.mode, rep2.seed = cfg.mode, cfg.seed
    return [rep, rep2]


def _suite_thm3(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    rep = thm3_diagnostics(alg, min(cfg.samples, 50), rng, instance=name)
    rep.mode, rep.seed = cfg.mode, cfg.seed
    return [rep]


def _suite_preimage(name, alg, extras, cfg, rng) -> list[ClaimsReport]:
    a = _instance_projectors(alg, extras, rng)[0]
    center = complex(*extras["center"]) if "center" in extras else 1.0 + 0j
    radius = float(extras.get("radius", 0.1))
    rep = hat_preimage_qness(alg, a, center, radius, cfg.samples, rng, instance=name)
    rep.mode, rep.seed = cfg.mode, cfg.seed
    return [rep]


_RUNNERS = {
    "prop1": _suite_prop1,
    "prop2": _suite_prop2,
    "prop7": _suite_prop7,
    "prop9": _suite_prop9,
    "thm3": _suite_thm3,
    "preimage": _suite_preimage,
}

# suites whose verdict is specified for every instance class: a failure
# here is a bug, not a finding
_ALWAYS_SPECIFIED = {"prop1", "prop2"}


def run_suite(cfg: RunConfig) -> dict:
    """Execute one claims suite; the result dict is JSON-serializable and
    byte-stable for a fixed (config, seed)."""
    rng = np.random.default_rng(cfg.seed)
    runner = _RUNNERS[cfg.suite]
    rows = []
    ok = True
    for entry in cfg.instances:
        name, alg, extras = load_instance(entry, cfg.base_dir)
        reports = runner(name, alg, extras, cfg, rng)
        commutative = alg.is_commutative()
        for rep in reports:
            rows.append(rep.to_json())
            specified = cfg.suite in _ALWAYS_SPECIFIED or commutative
            if specified and rep.verdict == "fails":
                ok = False
    return {
        "suite": cfg.suite,
        "config": {
            "seed": cfg.seed,
            "samples": cfg.samples,
            "mode": cfg.mode,
            "instances": [e if isinstance(e, str) else e.get("name", "inline")
                          for e in cfg.instances],
        },
        "rows": rows,
        "ok": ok,
    }


CSV_COLUMNS = ["suite", "claim", "instance", "mode", "verdict",
               "defect_name", "defect_value"]


def suite_result_csv(result: dict) -> str:
    """CSV projection: one row per (claim, instance, defect)."""
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in result["rows"]:
        for dname, dval in sorted(row["defects"].items()):
            w.writerow([result["suite"], row["claim"], row["instance"],
                        row["mode"], row["verdict"], dname, dval])
    return buf.getvalue()
