"""Command-line front end: config-driven sweeps with CSV and PGM output,
circuit transpilation, and randomized dilation spot checks."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .dilation import DilationError, general_dilation
from .experiment import (
    DEFAULT_ION_DIAGONAL,
    DEFAULT_ION_EPSILON,
    DEFAULT_TRANSMON_DIAGONAL,
    BackendConfig,
    BackendKind,
    ConfusionMatrix,
    ExperimentPoint,
    SweepGrid,
    load_confusion,
    sweep,
    synthetic_confusion,
)
from .gates import (
    CircuitParseError,
    UnsupportedGate,
    equivalent,
    format_circuit,
    parse_circuit,
    stats,
    transpile_ion,
    transpile_transmon,
)
from .linalg import dag

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_EQUIVALENCE = 3
EXIT_DEFECT = 4


class ConfigError(ValueError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass


class Observable(Enum):
    RETURN_PROB = "return_prob"
    POSTSELECTED = "postselected"


@dataclass
class RunConfig:
    backend: BackendKind = BackendKind.THEORY
    shots: int | None = None  # None: 512, or 8192 for the transmon backend
    seed: int = 0
    grid: SweepGrid = field(default_factory=SweepGrid)
    observable: Observable = Observable.RETURN_PROB
    ions: int = 5
    epsilon: tuple[float, ...] | None = None
    confusion_file: str | None = None
    output_csv: str = "sweep.csv"
    output_pgm: str | None = None

    def effective_shots(self) -> int:
        if self.shots is not None:
            return self.shots
        return 8192 if self.backend is BackendKind.TRANSMON else 512


_CONFIG_KEYS = frozenset(
    {
        "backend",
        "shots",
        "seed",
        "r_min",
        "r_max",
        "r_steps",
        "t_min",
        "t_max",
        "t_steps",
        "observable",
        "ions",
        "epsilon",
        "confusion_file",
        "output_csv",
        "output_pgm",
    }
)


def parse_config(text: str) -> RunConfig:
    """key = value lines; blank lines and # comments ignored; unknown keys
    rejected with their line number."""
    raw: dict[str, tuple[int, str]] = {}
    for ln, source in enumerate(text.splitlines(), start=1):
        line = source.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"line {ln}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ParseError(f"line {ln}: unknown key {key!r}")
        if not value:
            raise ParseError(f"line {ln}: empty value for {key!r}")
        raw[key] = (ln, value)  # last occurrence wins

    def number(key: str, kind: type) -> float | int:
        ln, value = raw[key]
        try:
            return kind(value)
        except ValueError:
            raise ParseError(
                f"line {ln}: cannot parse {key} value {value!r}"
            ) from None

    cfg = RunConfig()
    if "backend" in raw:
        ln, value = raw["backend"]
        try:
            cfg.backend = BackendKind(value.lower())
        except ValueError:
            raise ValidationError(
                f"line {ln}: backend must be one of theory, ion, transmon"
            ) from None
    if "shots" in raw:
        shots = int(number("shots", int))
        if shots < 1:
            raise ValidationError(f"line {raw['shots'][0]}: shots must be >= 1")
        cfg.shots = shots
    if "seed" in raw:
        seed = int(number("seed", int))
        if not 0 <= seed < 2**64:
            raise ValidationError(
                f"line {raw['seed'][0]}: seed must fit in 64 unsigned bits"
            )
        cfg.seed = seed
    grid_kwargs: dict[str, float | int] = {}
    for key in ("r_min", "r_max", "t_min", "t_max"):
        if key in raw:
            grid_kwargs[key] = float(number(key, float))
    for key in ("r_steps", "t_steps"):
        if key in raw:
            grid_kwargs[key] = int(number(key, int))
    if grid_kwargs:
        try:
            cfg.grid = SweepGrid(**grid_kwargs)
        except ValueError as exc:
            raise ValidationError(f"grid: {exc}") from None
    if "observable" in raw:
        ln, value = raw["observable"]
        try:
            cfg.observable = Observable(value.lower())
        except ValueError:
            raise ValidationError(
                f"line {ln}: observable must be return_prob or postselected"
            ) from None
    if "ions" in raw:
        ions = int(number("ions", int))
        if ions < 1:
            raise ValidationError(f"line {raw['ions'][0]}: ions must be >= 1")
        cfg.ions = ions
    if "epsilon" in raw:
        ln, value = raw["epsilon"]
        try:
            eps = tuple(float(x) for x in value.split(","))
        except ValueError:
            raise ParseError(f"line {ln}: epsilon must be a comma list of reals") from None
        if any(abs(e) >= 0.5 for e in eps):
            raise ValidationError(f"line {ln}: epsilon entries must satisfy |e| < 0.5")
        cfg.epsilon = eps
    if "confusion_file" in raw:
        cfg.confusion_file = raw["confusion_file"][1]
    if "output_csv" in raw:
        cfg.output_csv = raw["output_csv"][1]
    if "output_pgm" in raw:
        cfg.output_pgm = raw["output_pgm"][1]
    return cfg


def _default_confusion(kind: BackendKind) -> ConfusionMatrix | None:
    if kind is BackendKind.ION:
        return synthetic_confusion(DEFAULT_ION_DIAGONAL, "synthetic-ion-0.97")
    if kind is BackendKind.TRANSMON:
        return synthetic_confusion(DEFAULT_TRANSMON_DIAGONAL, "synthetic-transmon-0.876")
    return None


def build_backend(cfg: RunConfig) -> BackendConfig:
    """Resolve the backend; reads the confusion file when configured
    (OSError propagates to the caller as an I/O failure)."""
    if cfg.confusion_file is not None:
        text = Path(cfg.confusion_file).read_text()
        try:
            confusion = load_confusion(text, label=Path(cfg.confusion_file).name)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
    else:
        confusion = _default_confusion(cfg.backend)
    if cfg.epsilon is not None:
        epsilon = cfg.epsilon
    else:
        epsilon = DEFAULT_ION_EPSILON if cfg.backend is BackendKind.ION else ()
    try:
        return BackendConfig(
            kind=cfg.backend,
            shots=cfg.effective_shots(),
            confusion=confusion,
            ion_count=cfg.ions,
            epsilon=epsilon,
            seed=cfg.seed,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def render_csv(points: list[ExperimentPoint], backend: BackendConfig) -> str:
    header = "r,t,backend,p0,p1,p2,p0_raw,p0_postselected,kept,shots,seed"
    is_ion = backend.kind is BackendKind.ION
    if is_ion:
        header += ",ion"
    lines = [header]
    for pt in points:
        fields = [
            _fmt(pt.r),
            _fmt(pt.t),
            backend.kind.value,
            _fmt(float(pt.p_exact[0])),
            _fmt(float(pt.p_exact[1])),
            _fmt(float(pt.p_exact[2])),
            _fmt(pt.p0_raw),
            "" if pt.p0_postselected is None else _fmt(pt.p0_postselected),
            str(pt.postselect_kept),
            str(backend.shots),
            str(backend.seed),
        ]
        if is_ion:
            fields.append(str(pt.ion))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HeatmapImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, row 0 = r_max
    missing: tuple[tuple[int, int], ...]  # (r_index, t_index) of absent values


def _point_value(
    pt: ExperimentPoint, backend: BackendConfig, observable: Observable
) -> float | None:
    exact_like = backend.kind is BackendKind.THEORY or backend.exact
    if observable is Observable.RETURN_PROB:
        return float(pt.p_exact[0]) if exact_like else pt.p0_raw
    if exact_like:
        kept = float(pt.p_exact[0]) + float(pt.p_exact[1])
        return float(pt.p_exact[0]) / kept if kept > 0.0 else None
    return pt.p0_postselected


def render_heatmap(
    grid: SweepGrid,
    backend: BackendConfig,
    observable: Observable,
    points: list[ExperimentPoint],
) -> HeatmapImage:
    width, height = grid.t_steps, grid.r_steps
    pixels = np.zeros((height, width), dtype=np.uint8)
    missing: list[tuple[int, int]] = []
    for i_r in range(height):
        row = height - 1 - i_r
        for i_t in range(width):
            value = _point_value(points[i_r * width + i_t], backend, observable)
            if value is None:
                missing.append((i_r, i_t))
                pixels[row, i_t] = 0
            else:
                pixels[row, i_t] = int(round(255.0 * min(max(value, 0.0), 1.0)))
    return HeatmapImage(width=width, height=height, pixels=pixels, missing=tuple(missing))


def format_pgm(img: HeatmapImage, metadata: str) -> str:
    lines = ["P2"]
    if metadata:
        lines.append(f"# {metadata}")
    lines.append(f"{img.width} {img.height}")
    lines.append("255")
    for row in img.pixels:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def _confusion_label(backend: BackendConfig) -> str:
    return backend.confusion.label if backend.confusion is not None else "identity"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def run_command(args: argparse.Namespace) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = parse_config(text)
        if args.backend is not None:
            cfg.backend = BackendKind(args.backend)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ValidationError("--seed must fit in 64 unsigned bits")
            cfg.seed = args.seed
        backend = build_backend(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read confusion file: {exc}", file=sys.stderr)
        return EXIT_IO

    points = sweep(cfg.grid, backend, workers=args.workers)
    try:
        _write_text(cfg.output_csv, render_csv(points, backend))
        if cfg.output_pgm is not None:
            metadata = (
                f"backend={backend.kind.value} observable={cfg.observable.value}"
                f" confusion={_confusion_label(backend)} shots={backend.shots}"
                f" seed={backend.seed} rows=r_max..r_min cols=t_min..t_max"
            )
            img = render_heatmap(cfg.grid, backend, cfg.observable, points)
            _write_text(cfg.output_pgm, format_pgm(img, metadata))
            if img.missing:
                mask = "".join(f"{i_r} {i_t}\n" for i_r, i_t in img.missing)
                _write_text(cfg.output_pgm + ".mask", mask)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(
        f"backend={backend.kind.value} shots={backend.shots} seed={backend.seed}"
        f" confusion={_confusion_label(backend)} points={len(points)}"
        f" -> {cfg.output_csv}"
        + (f", {cfg.output_pgm}" if cfg.output_pgm is not None else "")
    )
    return EXIT_OK


def transpile_command(args: argparse.Namespace) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        print(f"error: cannot read circuit: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        circuit = parse_circuit(text)
        transpiled = (
            transpile_ion(circuit) if args.target == "ion" else transpile_transmon(circuit)
        )
    except (CircuitParseError, UnsupportedGate) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not equivalent(circuit, transpiled, 1e-10, up_to_phase=False):
        print(
            "error: transpiled circuit does not reproduce the input unitary",
            file=sys.stderr,
        )
        return EXIT_EQUIVALENCE
    try:
        _write_text(args.output, format_circuit(transpiled))
    except OSError as exc:
        print(f"error: cannot write circuit: {exc}", file=sys.stderr)
        return EXIT_IO
    st = stats(transpiled)
    print(f"physical={st.physical_count} virtual={st.virtual_count}")
    return EXIT_OK


def _haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def _random_contraction(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Contraction with exactly min(n, m) singular values inside (0, 1) and
    the rest pinned to 1, so rank(1 - a^dag a) never exceeds m."""
    s = np.ones(n)
    k = min(n, m)
    s[:k] = rng.uniform(0.1, 0.9, size=k)
    return _haar_unitary(n, rng) @ (s[:, None] * dag(_haar_unitary(n, rng)))


def dilation_check_command(args: argparse.Namespace) -> int:
    n, m, trials = args.n, args.m, args.trials
    if n < 1 or m < 0 or n + m > 16 or trials < 1:
        print(
            "config error: need n >= 1, m >= 0, n + m <= 16, trials >= 1",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
    worst_unitarity = 0.0
    worst_block = 0.0
    eye = np.eye(n + m)
    for trial in range(trials):
        a = _random_contraction(n, m, rng)
        try:
            dil = general_dilation(a, m)
        except DilationError as exc:
            print(f"trial {trial}: {type(exc).__name__}: {exc}")
            return EXIT_DEFECT
        u = dil.u
        worst_unitarity = max(worst_unitarity, float(np.max(np.abs(dag(u) @ u - eye))))
        worst_block = max(worst_block, float(np.max(np.abs(u[:n, :n] - a))))
    print(f"trials={trials} n={n} m={m} seed={args.seed}")
    print(f"max unitarity defect = {worst_unitarity:.3e}")
    print(f"max block defect = {worst_block:.3e}")
    if worst_unitarity >= 1e-9 or worst_block >= 1e-9:
        print("defect overflow: threshold 1e-9 exceeded", file=sys.stderr)
        return EXIT_DEFECT
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ptqsim",
        description="Simulate a PT-symmetric two-level system embedded in a qutrit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="sweep the (r, t) grid and write CSV/PGM output")
    p_run.add_argument("--config", required=True, help="path to a key = value config file")
    p_run.add_argument(
        "--backend",
        choices=[k.value for k in BackendKind],
        help="override the config backend",
    )
    p_run.add_argument("--seed", type=int, help="override the config seed")
    p_run.add_argument(
        "--workers", type=int, default=1, help="parallel grid evaluation (same output)"
    )

    p_tr = sub.add_parser("transpile", help="rewrite a circuit file into a native gate set")
    p_tr.add_argument("--target", required=True, choices=["ion", "transmon"])
    p_tr.add_argument("input", help="circuit file to read")
    p_tr.add_argument("output", help="circuit file to write")

    p_dc = sub.add_parser("dilation-check", help="randomized unitary-completion checks")
    p_dc.add_argument("--n", type=int, default=2, help="contraction size")
    p_dc.add_argument("--m", type=int, default=1, help="ancilla dimensions")
    p_dc.add_argument("--trials", type=int, default=200)
    p_dc.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    if args.command == "run":
        if args.workers < 1:
            print("config error: --workers must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        return run_command(args)
    if args.command == "transpile":
        return transpile_command(args)
    return dilation_check_command(args)


if __name__ == "__main__":
    sys.exit(main())
