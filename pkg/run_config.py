from argparse import Namespace
from dataclasses import dataclass

from definitions.errors import ConfigError
from definitions.global_constants import (Backend, DEFAULT_STEPS, DEFAULT_TMAX, OutputFormat, Source,
                                          VERIFY_MAX_N)
from utils.loaders import parse_scalar_list
from utils.scalars import Scalar, parse_scalar

COMMANDS = ("spectrum", "metric", "analyze", "verify-paper")


@dataclass(frozen=True)
class RunConfig:
    """
    Validated configuration of one command-line run.

    :param command: The subcommand.
    :type command: str
    :param pairs: The (N, a) pairs to process; commands other than spectrum use the first.
    :type pairs: tuple[tuple[int, Scalar]]
    :param k: The band half-width.
    :type k: int
    :param alphas: alpha_1..alpha_k.
    :type alphas: tuple
    :param backend: Exact or floating-point arithmetic.
    :type backend: Backend
    :param source: Closed formulas or the exact solver.
    :type source: Source
    :param output_format: JSON or CSV.
    :type output_format: OutputFormat
    :param out: Output filename, stdout when None.
    :type out: str | None
    :param verify: Check residuals and solver equivalence.
    :type verify: bool
    :param rays: Directions in alpha space for the positivity boundary.
    :type rays: tuple[tuple[float]]
    :param evolve: Produce a trajectory.
    :type evolve: bool
    :param init: Initial state: "e<s>", "psi<n>" or a comma-separated vector.
    :type init: str
    :param tmax: The final time.
    :type tmax: float
    :param steps: The number of time steps.
    :type steps: int
    :param sites: Site coordinates, q_s = s when None.
    :type sites: tuple[float] | None
    :param random_rays: The number of sampled rays added to ``rays``.
    :type random_rays: int
    :param seed: Seed of the ray sampler.
    :type seed: int | None
    :param max_N: The largest N of the verification grid.
    :type max_N: int
    :param verbosity: 0 warnings, 1 info, 2 debug.
    :type verbosity: int
    :param hamiltonian_file: JSON file with a general tridiagonal Hamiltonian for the solver.
    :type hamiltonian_file: str | None
    """
    command: str
    pairs: tuple
    k: int = 0
    alphas: tuple = ()
    backend: Backend = Backend.RATIONAL
    source: Source = Source.CLOSED
    output_format: OutputFormat = OutputFormat.JSON
    out: str | None = None
    verify: bool = False
    rays: tuple = ()
    evolve: bool = False
    init: str = "e1"
    tmax: float = DEFAULT_TMAX
    steps: int = DEFAULT_STEPS
    sites: tuple | None = None
    random_rays: int = 0
    seed: int | None = None
    max_N: int = VERIFY_MAX_N
    verbosity: int = 0
    hamiltonian_file: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command '{self.command}'")
        if self.hamiltonian_file is not None:
            if self.command != "metric" or self.source != Source.ORACLE:
                raise ConfigError("--hamiltonian needs the metric command with --source oracle")
            if self.pairs:
                raise ConfigError("--hamiltonian replaces --N and --a")
        elif self.command != "verify-paper" and not self.pairs:
            raise ConfigError("at least one (N, a) pair is required")
        for N, _ in self.pairs:
            if N < 1:
                raise ConfigError(f"N must be positive, got {N}")
        if self.k < 0:
            raise ConfigError(f"k must be non-negative, got {self.k}")
        if self.alphas and len(self.alphas) != self.k:
            raise ConfigError(f"{self.k} coefficients expected, got {len(self.alphas)}")
        for ray in self.rays:
            if len(ray) != self.k:
                raise ConfigError(f"ray {ray} must have {self.k} components")
        if self.random_rays < 0:
            raise ConfigError(f"--random-rays must be non-negative, got {self.random_rays}")
        if self.steps < 1 or self.tmax < 0:
            raise ConfigError("the time grid needs steps >= 1 and tmax >= 0")
        if self.max_N < 1:
            raise ConfigError(f"--max-N must be positive, got {self.max_N}")

    @property
    def N(self) -> int:
        return self.pairs[0][0]

    @property
    def a(self) -> Scalar:
        return self.pairs[0][1]

    @property
    def coefficients(self) -> tuple:
        """ The alphas, zeros when none were given. """
        return self.alphas or (0,) * self.k


def _parse_ray(text: str) -> tuple:
    return tuple(float(value) for value in parse_scalar_list(text, Backend.FLOAT))


def config_from_args(args: Namespace) -> RunConfig:
    """
    Builds the run configuration from parsed command-line arguments.

    :param args: The argparse namespace.
    :type args: Namespace

    :return: The validated configuration.
    :rtype: RunConfig

    :raises ConfigError: If a value cannot be parsed or is inconsistent.
    """
    backend = Backend(getattr(args, "backend", Backend.RATIONAL.value))
    Ns = getattr(args, "N", None) or []
    couplings = getattr(args, "a", None) or []
    if not isinstance(Ns, list):
        Ns = [Ns]
    if not isinstance(couplings, list):
        couplings = [couplings]
    pairs = tuple((N, parse_scalar(a, backend)) for N in Ns for a in couplings)
    alphas = ()
    if getattr(args, "alphas", None):
        alphas = parse_scalar_list(args.alphas, backend)
    sites = None
    if getattr(args, "sites", None):
        sites = tuple(float(value) for value in parse_scalar_list(args.sites, Backend.FLOAT))
    output_format = getattr(args, "format", None)
    return RunConfig(
        command=args.command,
        pairs=pairs,
        k=getattr(args, "k", 0),
        alphas=alphas,
        backend=backend,
        source=Source(getattr(args, "source", Source.CLOSED.value)),
        output_format=OutputFormat(output_format) if output_format else OutputFormat.JSON,
        out=getattr(args, "out", None),
        verify=getattr(args, "verify", False),
        rays=tuple(_parse_ray(ray) for ray in getattr(args, "ray", None) or []),
        evolve=getattr(args, "evolve", False),
        init=getattr(args, "init", "e1"),
        tmax=getattr(args, "tmax", DEFAULT_TMAX),
        steps=getattr(args, "steps", DEFAULT_STEPS),
        sites=sites,
        random_rays=getattr(args, "random_rays", 0),
        seed=getattr(args, "seed", None),
        max_N=getattr(args, "max_N", VERIFY_MAX_N),
        verbosity=getattr(args, "verbose", 0),
        hamiltonian_file=getattr(args, "hamiltonian", None),
    )
