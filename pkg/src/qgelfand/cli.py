"""Command-line entry points.

Thin adapters over the library modules: parse inputs, dispatch, serialize
reports.  Exit codes: 0 success, 2 input error, 3 budget exceeded,
4 numerical failure.  Reports are canonical JSON (sorted keys) so a fixed
(instance, config, seed) reproduces byte-identical output.
"""

from __future__ import annotations

import json
import pathlib
import sys

import click
import numpy as np

from . import harness, oml, sasaki, spectral
from .algebra import DecompositionError, FdAlgebra
from .linalg import matrix_from_json
from .oml import FiniteOml, SetOml, StructureError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_NUMERICAL = 4


def _dump(obj: dict, out: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        pathlib.Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _write_text(text: str, out: str | None):
    if out:
        pathlib.Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_json(path: str) -> dict:
    try:
        return json.loads(pathlib.Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.exceptions.Exit(_input_error(f"cannot read {path}: {exc}"))


def _input_error(msg: str) -> int:
    click.echo(f"input error: {msg}", err=True)
    return EXIT_INPUT


def _load_lattice(path: str):
    obj = _load_json(path)
    try:
        if "ground" in obj:
            return SetOml.from_json(obj)
        return FiniteOml.from_json(obj)
    except (StructureError, ValueError, TypeError) as exc:
        raise click.exceptions.Exit(_input_error(str(exc)))


def _load_matrix(path: str) -> np.ndarray:
    obj = _load_json(path)
    try:
        m = matrix_from_json(obj)
    except (KeyError, ValueError) as exc:
        raise click.exceptions.Exit(_input_error(str(exc)))
    if m.shape[0] != m.shape[1]:
        raise click.exceptions.Exit(_input_error("matrix must be square"))
    return m


@click.group()
def main():
    """Finite-dimensional quantum-set and C*-state-space toolkit."""


# ---------------------------------------------------------------------------
# oml


@main.group("oml")
def oml_group():
    """Orthomodular lattices and their Sasaki-map semigroups."""


@oml_group.command("verify")
@click.argument("lattice_file")
@click.option("--out", default=None)
def oml_verify(lattice_file, out):
    """Check the lattice axioms (or quantum-set conditions) of an instance."""
    lat = _load_lattice(lattice_file)
    if isinstance(lat, SetOml):
        violations = oml.verify_quantum_set(lat)
        kind = "quantum-set"
    else:
        violations = oml.verify_oml(lat)
        kind = "oml"
    report = {
        "kind": kind,
        "violations": [{"axiom": v.axiom, "witnesses": list(v.witnesses)}
                       for v in violations],
        "ok": not violations,
    }
    _dump(report, out)
    sys.exit(EXIT_OK if not violations else 1)


@oml_group.command("semigroup")
@click.argument("lattice_file")
@click.option("--cap", default=10_000, type=int, help="element budget")
@click.option("--out", default=None)
def oml_semigroup(lattice_file, cap, out):
    """Enumerate the Sasaki-map semigroup and verify the lattice recovery
    from its closed projections."""
    lat = _load_lattice(lattice_file)
    if isinstance(lat, SetOml):
        lat = lat.to_finite_oml()
    try:
        sg = sasaki.enumerate_semigroup(lat, cap=cap)
    except sasaki.SemigroupBudgetError as exc:
        _dump({"ok": False, "budget": exc.budget, "found": exc.found}, out)
        sys.exit(EXIT_BUDGET)
    except StructureError as exc:
        click.echo(f"numerical/structural failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    try:
        recovered, closed, _iso = sasaki.closed_projections(sg)
        ok = True
        n_closed = recovered.n
    except StructureError as exc:
        ok = False
        n_closed = None
        click.echo(f"recovery failed: {exc}", err=True)
    report = {
        "semigroup_size": sg.size,
        "closed_projections": n_closed,
        "recovery_isomorphic": ok,
        "lattice_size": lat.n,
    }
    _dump(report, out)
    sys.exit(EXIT_OK if ok else 1)


@oml_group.command("boolean")
@click.argument("lattice_file")
@click.option("--out", default=None)
def oml_boolean(lattice_file, out):
    """Report whether the skew meet is symmetric (Boolean test) with a
    witness pair when it is not, cross-checked against distributivity."""
    lat = _load_lattice(lattice_file)
    if isinstance(lat, SetOml):
        lat = lat.to_finite_oml()
    boolean, witness = oml.is_boolean(lat)
    report = {
        "boolean": boolean,
        "distributive": oml.is_distributive(lat),
        "witness": list(witness) if witness else None,
    }
    _dump(report, out)
    sys.exit(EXIT_OK)


# ---------------------------------------------------------------------------
# alg


@main.group("alg")
def alg_group():
    """Finite-dimensional *-algebras of matrices."""


@alg_group.command("generate")
@click.argument("algebra_file")
@click.option("--out", default=None)
def alg_generate(algebra_file, out):
    """Close the given generators into a unital *-algebra."""
    obj = _load_json(algebra_file)
    try:
        alg = FdAlgebra.from_json(obj)
    except (KeyError, ValueError) as exc:
        sys.exit(_input_error(str(exc)))
    _dump({"ambient_dim": alg.ambient_dim, "dim": alg.dim,
           "commutative": alg.is_commutative()}, out)
    sys.exit(EXIT_OK)


@alg_group.command("blocks")
@click.argument("algebra_file")
@click.option("--out", default=None)
def alg_blocks(algebra_file, out):
    """Block structure (irrep dimension, multiplicity) of the algebra."""
    obj = _load_json(algebra_file)
    try:
        alg = FdAlgebra.from_json(obj)
        dec = alg.decomposition()
    except (KeyError, ValueError) as exc:
        sys.exit(_input_error(str(exc)))
    except DecompositionError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    _dump({
        "dim": alg.dim,
        "blocks": [{"irrep_dim": b.irrep_dim, "multiplicity": b.multiplicity}
                   for b in dec.blocks],
    }, out)
    sys.exit(EXIT_OK)


# ---------------------------------------------------------------------------
# claims


@main.group("claims")
def claims_group():
    """Verification and falsification suites over algebra instances."""


@claims_group.command("run")
@click.option("--config", "config_path", required=True)
@click.option("--seed", default=None, type=int, help="overrides the config seed")
@click.option("--samples", default=None, type=int)
@click.option("--mode", default=None,
              type=click.Choice(["superposition", "literal"]))
@click.option("--out", default=None)
@click.option("--format", "fmt", default="json",
              type=click.Choice(["json", "csv"]))
def claims_run(config_path, seed, samples, mode, out, fmt):
    """Run one claims suite from a config file."""
    obj = _load_json(config_path)
    if seed is not None:
        obj["seed"] = seed
    if samples is not None:
        obj["samples"] = samples
    if mode is not None:
        obj["mode"] = mode
    base = pathlib.Path(config_path).parent
    try:
        cfg = harness.RunConfig.from_json(obj, base_dir=base)
        result = harness.run_suite(cfg)
    except harness.ConfigError as exc:
        sys.exit(_input_error(str(exc)))
    except DecompositionError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    if fmt == "csv":
        _write_text(harness.suite_result_csv(result), out)
    else:
        _dump(result, out)
    sys.exit(EXIT_OK if result["ok"] else 1)


# ---------------------------------------------------------------------------
# spectral


@main.group("spectral")
def spectral_group():
    """Spectrum versus the pure-state image of an element."""


@spectral_group.command("report")
@click.argument("matrix_file")
@click.option("--seed", required=True, type=int)
@click.option("--samples", default=2000, type=int)
@click.option("--out", default=None)
@click.option("--plot-data", "plot_data", default=None,
              help="write CSV plot data (support sweep + sample cloud)")
def spectral_report(matrix_file, seed, samples, out, plot_data):
    """Spectrum, numerical-range sweep, and sample cloud for a matrix."""
    a = _load_matrix(matrix_file)
    try:
        rep = spectral.sigma_big(a, samples=samples,
                                 rng=np.random.default_rng(seed))
    except (DecompositionError, RuntimeError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    _dump(rep.to_json(), out)
    if plot_data:
        pathlib.Path(plot_data).write_text(_plot_csv(rep))
    sys.exit(EXIT_OK)


def _plot_csv(rep: spectral.SpectralReport) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "block", "theta", "support", "re", "im"])
    for i, (sup, bnd) in enumerate(zip(rep.block_supports, rep.block_boundaries)):
        for th, s, z in zip(rep.thetas, sup, bnd):
            w.writerow(["boundary", i, th, s, z.real, z.imag])
    for z in rep.cloud:
        w.writerow(["cloud", "", "", "", z.real, z.imag])
    return buf.getvalue()


@main.command("invsub")
@click.argument("matrix_file")
@click.option("--mode", default="oracle",
              type=click.Choice(["paper", "oracle", "both"]))
@click.option("--seed", required=True, type=int)
@click.option("--samples", default=2000, type=int)
@click.option("--out", default=None)
def invsub(matrix_file, mode, seed, samples, out):
    """Candidate invariant subspaces with measured invariance defects."""
    a = _load_matrix(matrix_file)
    if a.shape[0] < 2:
        sys.exit(_input_error("need a matrix of size at least 2"))
    try:
        results = spectral.invariant_subspace(
            a, mode=mode, samples=samples, rng=np.random.default_rng(seed))
    except (DecompositionError, RuntimeError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    _dump({"results": [r.to_json() for r in results]}, out)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
