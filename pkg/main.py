"""
Command-line front end.

    python main.py spectrum --N 6 9 --a 1.0 2.0 3.0
    python main.py metric --N 5 --a 1 --k 2 --source closed --verify
    python main.py metric --hamiltonian lattice.json --k 2 --source oracle
    python main.py analyze --N 4 --a 1 --k 1 --ray +1
    python main.py analyze --N 6 --a 2 --k 1 --alpha 0.05 --evolve --init e1 --format csv
    python main.py verify-paper

Data goes to stdout (or --out), diagnostics to stderr. Exit codes: 0 success,
2 configuration error, 3 numeric failure, 4 failed verification.
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams, TridiagonalHamiltonian, build_laguerre_hamiltonian
from classes.metric_family import MetricFamily
from classes.pseudometrics import PseudometricSet
from closed_forms import (MAX_CLOSED_DEGREE, closed_form, closed_form_tables, rising_product,
                          verify_closed_form)
from definitions.errors import (ConfigError, CryptohermError, DimensionError, DomainError, NumericError)
from definitions.global_constants import (Backend, ExitCode, OutputFormat, RESIDUAL_TOLERANCE, Source,
                                          THREADS_ENV_VAR, VERIFY_COUPLINGS, VERIFY_DEGREES,
                                          VERIFY_ORACLE_MAX_N)
from definitions.reference_values import REFERENCE_EXCEPTIONAL, REFERENCE_SPECTRA
from dieudonne import dieudonne_residual, pseudometrics_to_dict, solve_band_pseudometrics, solve_general_metric
from metric_analysis import classify, evolve, find_alpha_boundary, spectral_decompose
from run_config import RunConfig, config_from_args
from spectrum import compute_spectrum, spectral_data, spectrum_table
from utils.generator import generate_random_rays
from utils.loaders import hamiltonian_from_dict, load_json, parse_scalar_list
from utils.scalars import format_scalar, parse_scalar
from utils.writers import (TRAJECTORY_HEADER, emit, render_csv, render_json, rounded, spectrum_csv_header,
                           spectrum_csv_rows, spectrum_records, trajectory_rows)

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """
    Builds the argument parser with one subparser per command.

    :return: The parser.
    :rtype: argparse.ArgumentParser
    """
    # Options shared by every command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    common.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.RATIONAL.value)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--out", default=None, help="output file, stdout when omitted")

    # Options describing one model and one metric family member
    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--N", type=int, default=None)
    model.add_argument("--a", default=None, help='coupling, decimal or "p/q"')
    model.add_argument("--k", type=int, default=0)
    model.add_argument("--alpha", "--alphas", dest="alphas", default=None, help="comma-separated alpha_1..alpha_k")
    model.add_argument("--source", choices=[s.value for s in Source], default=Source.CLOSED.value)

    parser = argparse.ArgumentParser(prog="cryptoherm", description="Metrics of the non-Hermitian Laguerre lattice.")
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", parents=[common], help="energies for each (N, a) pair")
    spectrum.add_argument("--N", type=int, nargs="+", required=True)
    spectrum.add_argument("--a", nargs="+", required=True)

    metric = commands.add_parser("metric", parents=[common, model], help="pseudometrics and the assembled metric")
    metric.add_argument("--verify", action="store_true", help="check the residual and the solver equivalence")
    metric.add_argument("--hamiltonian", default=None,
                        help='JSON {"n", "diag", "super", "sub"} of a tridiagonal Hamiltonian, replaces --N and --a')

    analyze = commands.add_parser("analyze", parents=[common, model], help="positivity, boundaries and evolution")
    analyze.add_argument("--ray", action="append", default=[], help="direction in alpha space, e.g. +1 or 1,-0.5")
    analyze.add_argument("--random-rays", dest="random_rays", type=int, default=0)
    analyze.add_argument("--seed", type=int, default=None)
    analyze.add_argument("--evolve", action="store_true")
    analyze.add_argument("--init", default="e1", help='"e<s>", "psi<n>" or a comma-separated vector')
    analyze.add_argument("--tmax", type=float, default=10.0)
    analyze.add_argument("--steps", type=int, default=100)
    analyze.add_argument("--sites", default=None, help="comma-separated site coordinates")

    verify = commands.add_parser("verify-paper", parents=[common], help="run the reference verification ledger")
    verify.add_argument("--max-N", dest="max_N", type=int, default=12)
    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def worker_count() -> int:
    """ The worker pool size: CRYPTOHERM_THREADS when set, else the CPU count. """
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got '{value}'")
    if count < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be positive, got {count}")
    return count


def _pseudometrics(config: RunConfig, params: ModelParams) -> tuple[PseudometricSet, list | None]:
    """
    P_0..P_k from the requested source.

    :return: The pseudometrics and, for closed forms, their provenance bands.
    :rtype: tuple[PseudometricSet, list | None]
    """
    hamiltonian = build_laguerre_hamiltonian(params)
    if config.source == Source.ORACLE:
        return solve_band_pseudometrics(hamiltonian, config.k, params), None
    if config.k > MAX_CLOSED_DEGREE:
        raise ConfigError(f"closed forms cover k <= {MAX_CLOSED_DEGREE}; use --source oracle")
    tables = closed_form_tables(params, config.k)
    matrices = tuple(table.matrix for table in tables)
    return PseudometricSet(hamiltonian, config.k, matrices, params), [table.provenance_bands() for table in tables]


def _assemble(config: RunConfig, params: ModelParams, matrices) -> MetricFamily:
    theta = matrices[0].widen(config.k)
    for alpha, matrix in zip(config.coefficients, matrices[1:]):
        theta = theta + matrix.scale(alpha)
    return MetricFamily(params, config.k, config.coefficients, theta)


def cmd_spectrum(config: RunConfig) -> int:
    """ Energies of every requested (N, a) pair. """
    rows = spectrum_table(config.pairs)
    if config.output_format == OutputFormat.CSV:
        # One column per energy of the largest N
        width = max(N for N, _ in config.pairs)
        emit(render_csv(spectrum_csv_header(width), spectrum_csv_rows(rows, width)), config.out)
    else:
        emit(render_json({"spectra": spectrum_records(rows)}), config.out)
    return ExitCode.OK


def cmd_metric(config: RunConfig) -> int:
    """
    Dumps P_0..P_k and the assembled metric; with --verify checks the
    Dieudonne residual and the agreement of closed forms and solver.
    """
    # A Hamiltonian read from file has no closed forms, only the solver applies
    if config.hamiltonian_file is not None:
        hamiltonian = hamiltonian_from_dict(load_json(config.hamiltonian_file))
        log.info("loaded a %d-site Hamiltonian from %s", hamiltonian.n, config.hamiltonian_file)
        params = None
        pseudometrics = solve_band_pseudometrics(hamiltonian, config.k)
        theta = solve_general_metric(hamiltonian, config.k, config.coefficients, pseudometrics)
        provenance = None
    else:
        params = ModelParams(config.N, config.a)
        pseudometrics, provenance = _pseudometrics(config, params)
        hamiltonian = pseudometrics.hamiltonian
        theta = _assemble(config, params, pseudometrics.matrices).theta

    # Dump, then verify
    data = pseudometrics_to_dict(pseudometrics, theta, provenance)
    data["source"] = config.source.value
    data["alphas"] = [format_scalar(alpha) for alpha in config.coefficients]

    status = ExitCode.OK
    if config.verify:
        verification, passed = _verify_metric(config, hamiltonian, theta, params)
        data["verification"] = verification
        if not passed:
            status = ExitCode.VERIFICATION_FAILURE
    emit(render_json(data), config.out)
    return status


def _verify_metric(config: RunConfig, hamiltonian: TridiagonalHamiltonian, theta: BandedSymmetricMatrix,
                   params: ModelParams | None) -> tuple[dict, bool]:
    residual = dieudonne_residual(hamiltonian, theta)
    exact = theta.is_exact()
    if exact:
        residual_ok = residual == 0
    else:
        scale = float(hamiltonian.max_abs()) * float(theta.max_abs())
        residual_ok = float(residual) <= RESIDUAL_TOLERANCE * max(scale, 1.0)
    print(f"residual: {format_scalar(residual)} ({'exact' if exact else 'float'})", file=sys.stderr)

    # Closed forms exist only for the Laguerre model up to degree 3
    compare = params is not None and config.k <= MAX_CLOSED_DEGREE
    mismatches = []
    if compare:
        for j in range(config.k + 1):
            mismatches += [(j, *mismatch) for mismatch in verify_closed_form(params, j)]
    for j, (m, mm), closed, solved, origin in mismatches:
        print(f"mismatch P_{j}({m},{mm}) [{origin.value}]: closed {closed} != solver {solved}", file=sys.stderr)
    if compare:
        print(f"solver equivalence: {'ok' if not mismatches else 'FAILED'}", file=sys.stderr)
    verification = {
        "residual": format_scalar(residual),
        "exact": exact,
        "residual_ok": residual_ok,
        "solver_equivalent": not mismatches if compare else None,
    }
    return verification, residual_ok and not mismatches


def _initial_state(text: str, params: ModelParams, right_vectors: np.ndarray) -> np.ndarray:
    n = params.N
    for prefix, first, last in (("e", 1, n), ("psi", 0, n - 1)):
        if not text.startswith(prefix):
            continue
        try:
            index = int(text[len(prefix):])
        except ValueError as error:
            raise ConfigError(f"cannot read initial state '{text}'") from error
        if not first <= index <= last:
            raise ConfigError(f"initial state '{text}' outside {prefix}{first}..{prefix}{last}")
        if prefix == "psi":
            return right_vectors[:, index].copy()
        state = np.zeros(n)
        state[index - 1] = 1.0
        return state
    state = np.array([float(value) for value in parse_scalar_list(text, Backend.FLOAT)])
    if state.shape != (n,):
        raise ConfigError(f"initial state needs {n} components, got {len(state)}")
    return state


def cmd_analyze(config: RunConfig) -> int:
    """ Positivity verdict, boundaries along rays, spectral weights and an optional trajectory. """
    params = ModelParams(config.N, config.a)
    pseudometrics, _ = _pseudometrics(config, params)
    family = classify(_assemble(config, params, pseudometrics.matrices))
    # Explicit rays first, then the seeded random ones
    rays = list(config.rays) + generate_random_rays(config.random_rays, config.k, config.seed)
    boundaries = []
    for ray in rays:
        alpha_max, capped = find_alpha_boundary(params, config.k, ray, pseudometrics=pseudometrics.matrices)
        boundaries.append({"ray": [rounded(x) for x in ray], "alpha_max": rounded(alpha_max), "capped": capped})
    spectral = spectral_data(ModelParams(params.N, float(params.a)), unit_norm=True)
    try:
        kappa2 = spectral_decompose(family.theta, spectral)
    except DomainError as error:
        raise NumericError(str(error)) from error
    report = {
        "N": params.N,
        "a": format_scalar(params.a),
        "k": config.k,
        "alphas": [format_scalar(alpha) for alpha in family.alphas],
        "positivity": family.positivity.value,
        "alpha_max": boundaries,
        "kappa2": [rounded(weight) for weight in kappa2],
    }
    if config.evolve:
        if not family.positivity.is_positive_definite():
            print(f"positivity: {family.positivity.value}; evolution needs a positive-definite metric", file=sys.stderr)
            return ExitCode.VERIFICATION_FAILURE
        initial = _initial_state(config.init, params, spectral.right_vectors)
        times = np.linspace(0.0, config.tmax, config.steps + 1)
        result = evolve(params, family.theta, initial, times, config.sites)
        rows = trajectory_rows(result)
        if config.output_format == OutputFormat.CSV:
            emit(render_csv(TRAJECTORY_HEADER, rows), config.out)
            return ExitCode.OK
        report["trajectory"] = [dict(zip(TRAJECTORY_HEADER, row)) for row in rows]
    emit(render_json(report), config.out)
    return ExitCode.OK


def verification_cells(max_N: int) -> list[tuple]:
    """
    The grid of the verification ledger in a fixed order.

    :param max_N: The largest dimension checked.
    :type max_N: int

    :return: Cells (check, j, N, a) consumed by ``run_check``.
    :rtype: list[tuple]
    """
    cells = [("spectrum", None, N, a) for N, a in REFERENCE_SPECTRA if N <= max_N]
    for j in VERIFY_DEGREES:
        for N in range(j + 2, max_N + 1):
            cells += [("residual", j, N, a) for a in VERIFY_COUPLINGS]
    for j in VERIFY_DEGREES:
        for N in range(j + 2, min(max_N, VERIFY_ORACLE_MAX_N) + 1):
            cells += [("solver", j, N, a) for a in VERIFY_COUPLINGS]
    for index, (j, N, *_) in enumerate(REFERENCE_EXCEPTIONAL):
        if N <= max_N:
            cells += [("exceptional", index, N, a) for a in VERIFY_COUPLINGS]
    return cells


def run_check(cell: tuple) -> dict:
    """
    Evaluates one ledger cell.

    :param cell: (check, j, N, a); for "exceptional" the second entry indexes the reference table.
    :type cell: tuple

    :return: The ledger record.
    :rtype: dict
    """
    check, j, N, a = cell
    record = {"check": check, "j": j, "N": N, "a": str(a), "status": "PASS", "detail": ""}
    try:
        if check == "spectrum":
            energies = compute_spectrum(ModelParams(N, float(a)))
            expected = np.array(REFERENCE_SPECTRA[(N, a)])
            observed = energies[[0, 1, N - 2, N - 1]]
            error = float(np.max(np.abs(observed - expected) / np.abs(expected)))
            record["detail"] = f"max relative error {error:.2e}"
            passed = error <= 1e-8
        else:
            params = ModelParams(N, parse_scalar(a, Backend.RATIONAL))
            if check == "residual":
                table = closed_form(params, j, check_conjectures=False)
                residual = dieudonne_residual(build_laguerre_hamiltonian(params), table.matrix)
                record["detail"] = f"residual {format_scalar(residual)}"
                passed = residual == 0
            elif check == "solver":
                mismatches = verify_closed_form(params, j)
                record["detail"] = f"{len(mismatches)} mismatching elements"
                passed = not mismatches
            else:
                degree, _, row, col, scale, (c0, c1), m = REFERENCE_EXCEPTIONAL[j]
                record["j"] = degree
                expected = scale * (c0 + c1 * params.a) / rising_product(params.a, m)
                value = closed_form(params, degree, check_conjectures=False).matrix.theta(row, col)
                record["detail"] = f"theta({row},{col}) = {format_scalar(value)}, reference {format_scalar(expected)}"
                passed = value == expected
    except CryptohermError as error:
        record["detail"] = f"{type(error).__name__}: {error}"
        passed = False
    if not passed:
        record["status"] = "FAIL"
    return record


def cmd_verify_paper(config: RunConfig) -> int:
    """ Runs the verification ledger; exit code 4 when any cell fails. """
    cells = verification_cells(config.max_N)
    workers = worker_count()
    log.info("running %d verification cells on %d workers", len(cells), workers)
    if workers == 1:
        records = [run_check(cell) for cell in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_check, cells, chunksize=8))
    failed = [record for record in records if record["status"] != "PASS"]
    print(f"verify-paper: {len(records) - len(failed)}/{len(records)} checks passed", file=sys.stderr)
    header = ["check", "j", "N", "a", "status", "detail"]
    if config.output_format == OutputFormat.CSV:
        emit(render_csv(header, [[record[key] for key in header] for record in records]), config.out)
    else:
        emit(render_json({"passed": not failed, "checks": records}), config.out)
    return ExitCode.VERIFICATION_FAILURE if failed else ExitCode.OK


COMMAND_HANDLERS = {
    "spectrum": cmd_spectrum,
    "metric": cmd_metric,
    "analyze": cmd_analyze,
    "verify-paper": cmd_verify_paper,
}


def main(argv: list[str] | None = None) -> int:
    """
    Parses the command line, runs the command and maps errors to exit codes.

    :param argv: The arguments without the program name; sys.argv[1:] when None.
    :type argv: list[str] | None

    :return: The exit code.
    :rtype: int
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as error:
        return int(error.code or 0)
    configure_logging(args.verbose)
    try:
        config = config_from_args(args)
        return int(COMMAND_HANDLERS[config.command](config))
    except (ConfigError, DimensionError, DomainError) as error:
        print(f"error: {error}", file=sys.stderr)
        return ExitCode.CONFIG_ERROR
    except NumericError as error:
        print(f"numeric failure: {error}", file=sys.stderr)
        return ExitCode.NUMERIC_FAILURE
    except CryptohermError as error:
        print(f"verification failure: {error}", file=sys.stderr)
        return ExitCode.VERIFICATION_FAILURE


# This is the main entry point of the application.
if __name__ == "__main__":
    sys.exit(main())
