"""
Subcommand implementations; each returns a process exit code
"""
import logging
import math

import numpy as np

from ..ChannelService import sigma_from_vnr
from ..RecipeService import build_lattice, format_recipe, load_lattice_source, load_recipe
from ..SimulationService import SimulationService, SweepConfig, format_csv, write_csv, write_metadata
from ..codes.peg import girth
from ..decode.common import DecoderConfig
from ..decode.dispatch import decode_batch
from ..errors import ConfigError
from ..lattice.construction import coding_gain, lattice_min_distance, normalized_volume
from ..lattice.geometry import exact_log2_volume, ldlc_report, tanner_graph
from ..lattice.io import write_lattice

logger = logging.getLogger('LatticeWorkbench')


def _degree_summary(values):
    if len(values) == 0:
        return "none"
    low, high = int(values.min()), int(values.max())
    return str(low) if low == high else f"{low}..{high}"


def _format_girth(value):
    return "inf" if value == math.inf else str(value)


def decoder_config(args, settings):
    return DecoderConfig(
        algorithm=settings.resolve('decoder_algorithm', args.algorithm),
        max_iterations=settings.resolve('max_iterations', args.max_iterations),
        early_stop=settings.resolve('early_stop', args.early_stop),
        damping=settings.resolve('damping', args.damping),
        llr_clip=settings.resolve('llr_clip', args.llr_clip),
    )


def sweep_config(args, settings, grid):
    return SweepConfig(
        lattice_source=str(args.lattice),
        vnr_grid=tuple(grid),
        decoder=decoder_config(args, settings),
        min_word_errors=settings.resolve('min_word_errors', args.min_word_errors),
        max_trials=settings.resolve('max_trials', args.max_trials),
        master_seed=args.seed,
        workers=settings.resolve('workers', args.workers),
        batch_size=settings.resolve('batch_size', args.batch_size),
        random_members=args.random_members,
    )


def vnr_grid(args):
    if args.vnr_grid:
        try:
            return [float(v) for v in args.vnr_grid.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"Cannot parse VNR grid '{args.vnr_grid}'")
    if args.vnr_start is None or args.vnr_stop is None:
        raise ConfigError("Give --vnr-grid or both --vnr-start and --vnr-stop")
    if args.vnr_step <= 0:
        raise ConfigError("--vnr-step must be positive")
    steps = math.floor((args.vnr_stop - args.vnr_start) / args.vnr_step + 1e-9)
    return [round(args.vnr_start + i * args.vnr_step, 10) for i in range(steps + 1)]


def lattice_summary(lat):
    parity = lat.H.base
    return [
        f"n: {lat.n}",
        f"levels: {lat.levels}",
        f"r_levels: {','.join(str(r) for r in lat.r_levels)}",
        f"det: 2^{lat.log2_det}",
        f"exact_det: 2^{exact_log2_volume(lat)}",
        f"symbol_degrees: {_degree_summary(parity.column_degrees())}",
        f"check_degrees: {_degree_summary(parity.row_degrees())}",
    ]


def cmd_construct(args, settings):
    recipe = load_recipe(args.recipe)
    lat = build_lattice(recipe)
    write_lattice(args.out, lat)
    lines = lattice_summary(lat) + [f"girth: {_format_girth(girth(lat.H.base))}", f"written: {args.out}"]
    print("\n".join(lines))
    logger.debug(f"Recipe used:\n{format_recipe(recipe)}")
    return 0


def cmd_info(args, settings):
    lat, _ = load_lattice_source(args.lattice)
    graph_girth = girth(lat.H.base)
    distance = lattice_min_distance(lat, graph_girth)
    log2_exact = exact_log2_volume(lat)
    gain = coding_gain(lat, distance.value, log2_exact)
    report = ldlc_report(lat)

    if report.generates_dual is None:
        dual = "not checked (n too large for exact arithmetic)"
    else:
        dual = "yes" if report.generates_dual else "no"
    distances = ",".join("inf" if d == math.inf else str(d) for d in distance.code_distances)
    lines = lattice_summary(lat) + [
        f"level_label: {lat.levels}-level",
        f"normalized_volume: {normalized_volume(lat, log2_exact)!r}",
        f"girth: {_format_girth(graph_girth)}",
        f"code_distances: {distances}",
        f"min_distance_sq_bounds: {distance.lower!r} {distance.upper!r}",
        f"min_distance_sq: {distance.value!r} ({distance.provenance})",
        f"coding_gain: {gain!r} ({distance.provenance})",
        f"average_row_degree: {report.average_row_degree!r}",
        f"ldlc_sparse: {'yes' if report.sparse else 'no'}",
        f"ldlc_generates_dual: {dual}",
    ]
    print("\n".join(lines))
    return 0


def _read_vector(args, n):
    if args.vector is not None:
        text = args.vector
    else:
        with open(args.vector_file, 'r') as f:
            text = f.read()
    try:
        values = np.array([float(v) for v in text.replace(",", " ").split()], dtype=np.float64)
    except ValueError:
        raise ConfigError("The received vector must be whitespace-separated reals")
    if len(values) != n:
        raise ConfigError(f"Expected {n} values, got {len(values)}")
    return values


def cmd_decode(args, settings):
    lat, _ = load_lattice_source(args.lattice)
    cfg = decoder_config(args, settings)
    r = _read_vector(args, lat.n)
    if args.sigma is not None:
        sigma = args.sigma
    elif args.vnr is not None:
        sigma = sigma_from_vnr(lat, args.vnr)
    elif cfg.algorithm == "sum-product":
        raise ConfigError("sum-product decoding needs --sigma or --vnr")
    else:
        sigma = 1.0
    output = decode_batch(lat, tanner_graph(lat), r[None, :], sigma, cfg).item(0)
    print("\n".join([
        f"point: {' '.join(str(int(v)) for v in output.point)}",
        f"label: {' '.join(str(int(v)) for v in output.label)}",
        f"iterations: {output.iterations}",
        f"converged: {'true' if output.converged else 'false'}",
    ]))
    return 0


def _run(args, settings, grid):
    lat, recipe_text = load_lattice_source(args.lattice)
    cfg = sweep_config(args, settings, grid)
    service = SimulationService(cfg.workers)
    service.status_update.connect(logger.info)
    result = service.run_sweep(lat, cfg)
    if args.out:
        write_csv(args.out, result)
        write_metadata(f"{args.out}.meta.txt", result, lat, recipe_text)
    else:
        print(format_csv(result), end="")
    return 0


def cmd_simulate(args, settings):
    return _run(args, settings, [args.vnr])


def cmd_sweep(args, settings):
    return _run(args, settings, vnr_grid(args))


def cmd_oracle_check(args, settings):
    lat, _ = load_lattice_source(args.lattice)
    cfg = sweep_config(args, settings, [args.vnr])
    report = SimulationService(cfg.workers).oracle_compare(lat, cfg, args.vnr, args.trials)
    print("\n".join([
        f"trials: {report.trials}",
        f"iterative_word_errors: {report.iterative_word_errors}",
        f"oracle_word_errors: {report.oracle_word_errors}",
        f"iterative_wer: {report.iterative_wer!r}",
        f"oracle_wer: {report.oracle_wer!r}",
        f"disagreements: {report.disagreements}",
        f"oracle_losses: {report.oracle_losses}",
    ]))
    return 0 if report.oracle_losses == 0 else 1


COMMANDS = {
    'construct': cmd_construct,
    'info': cmd_info,
    'decode': cmd_decode,
    'simulate': cmd_simulate,
    'sweep': cmd_sweep,
    'oracle-check': cmd_oracle_check,
}
