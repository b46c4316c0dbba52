import argparse
import logging
import sys

import pandas as pd

from config import SETTINGS
from src.data_io import read_form, read_ideal, to_json, write_json
from src.dist import (
    chern_json,
    cohomology_json,
    conormal_sheaf,
    integrability_check,
    lds_check,
    random_vanishing_form,
    require_positive_degree,
    sing_scheme,
    tangent_homology,
)
from src.errors import NotDescendingError, SyzFormsError
from src.forms import descends, format_form, form_to_json
from src.polyring import ORDER_KEYS, format_poly
from src.resolution import betti, format_hilbert, free_resolution, hilbert_polynomial
from src.scenarios import SCENARIOS, run_scenario
from src.syzforms import brute_force_space, form_space, same_form_span
from src.utils import Config, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def emit(args, data, text=None):
    """Escribe el resultado en JSON o texto, y en --out si se indica"""
    if args.json or text is None:
        print(to_json(data))
    else:
        print(text)
    if args.out:
        write_json(data, args.out)


def seed_of(args, config):
    return config.get("random", "seed") if args.seed is None else args.seed


def degree_range(I, args, config):
    if args.d is not None:
        return [args.d]
    bound = args.degree_bound
    if bound is None:
        bound = betti(free_resolution(I)).regularity + config.get("resolution", "degree_slack")
    return list(range(0, bound + 1))


def cmd_forms(args, config):
    """Espacios 𝒜^p(Z)_d de un ideal leído de archivo"""
    I = read_ideal(args.ideal, args.order, config.get("groebner", "selection"))
    results, spaces = [], []
    oracle_ok = True
    for d in degree_range(I, args, config):
        space = form_space(I, args.p, d)
        entry = {"d": d, **space.to_json()}
        if args.oracle:
            oracle = brute_force_space(I, args.p, d)
            entry["oracle"] = {"dim": oracle.dim, "same_span": same_form_span(space.basis, oracle.basis)}
            oracle_ok = oracle_ok and entry["oracle"]["same_span"]
        results.append(entry)
        spaces.append(space)
    data = results[0] if args.d is not None else {"p": args.p, "spaces": results}
    summary = pd.DataFrame([{"d": r["d"], "dim": r["dim"], "tor": r["split"]["tor"],
                             "radial": r["split"]["radial"]} for r in results])
    lines = [summary.to_string(index=False)]
    for r, space in zip(results, spaces):
        lines += [f"d = {r['d']}:"] + [f"  {format_form(f)}" for f in space.basis]
    emit(args, data, "\n".join(lines))
    if not oracle_ok:
        logger.error("El oráculo no coincide con la construcción por sicigias")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_analyze(args, config):
    """LDS, integrabilidad, esquema singular, Chern y cohomología de una forma"""
    ideal = read_ideal(args.ideal, args.order, config.get("groebner", "selection")) if args.ideal else None
    if args.random:
        if ideal is None:
            raise SyzFormsError("--random requiere --ideal")
        p, d = args.random
        omega = random_vanishing_form(p, d, ideal, seed_of(args, config), config.get("random", "coefficient_bound"))
    elif args.form:
        omega = read_form(args.form, args.order)
    else:
        raise SyzFormsError("Indique un archivo de forma o --random p d")
    if not descends(omega):
        raise NotDescendingError(f"ι_rad ω ≠ 0: la forma no desciende a P^{omega.n}")
    require_positive_degree(omega)
    data = {"form": form_to_json(omega), "p": omega.p, "d": omega.coefficient_degree() - 1}
    lds = lds_check(omega)
    data["lds"] = lds
    data["integrable"] = integrability_check(omega) if lds else None
    sing = sing_scheme(omega)
    data["sing"] = [format_poly(g) for g in sing.minimal_generators]
    if ideal is not None:
        data["sing_equals_ideal"] = sing == ideal
    tangent = tangent_homology(omega)
    data["tangent"] = {"rank": tangent.rank, "hilbert": format_hilbert(tangent.hilbert)}
    if lds and omega.n == 3:
        F = conormal_sheaf(omega).twist(args.twist)
        data["chern"] = chern_json(F)
        data["cohomology"] = [cohomology_json(F, i, t) for i, t in args.cohomology]
    text = "\n".join(f"{key}: {value}" for key, value in data.items() if key != "form")
    emit(args, data, f"ω = {format_form(omega)}\n{text}")
    return EXIT_OK


def cmd_example(args, config):
    result = run_scenario(args.name, args.seed, config)
    data = result.to_json()
    checks = pd.DataFrame([{"comprobación": k, "ok": v} for k, v in result.checks.items()])
    emit(args, data, f"{args.name}: {'OK' if result.passed else 'FALLO'}\n{checks.to_string(index=False)}")
    if not result.passed:
        for label, diff in result.failures.items():
            logger.error(f"{label}: esperado {diff['expected']}, obtenido {diff['got']}")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_betti(args, config):
    I = read_ideal(args.ideal, args.order, config.get("groebner", "selection"))
    resolution = free_resolution(I)
    table = betti(resolution)
    data = {**table.to_json(), "hilbert": format_hilbert(hilbert_polynomial(I)),
            "regularity": table.regularity}
    text = str(table)
    if args.dump:
        text += "\n" + resolution.dump()
    emit(args, data, text)
    return EXIT_OK


def parse_cohomology(value):
    try:
        i, d = value.split(":")
        return int(i), int(d)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Formato i:d esperado, recibido '{value}'")


def build_parser():
    parser = argparse.ArgumentParser(description="Formas diferenciales que se anulan sobre subesquemas de P^n")
    parser.add_argument("--order", choices=sorted(ORDER_KEYS), default=SETTINGS["order"])
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--degree-bound", type=int, default=None)
    parser.add_argument("--oracle", action="store_true")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true")
    output.add_argument("--text", action="store_true")
    parser.add_argument("--out", default=None)
    parser.add_argument("--log-level", default=SETTINGS["log_level"])
    parser.add_argument("--config", default=SETTINGS["config_path"])
    sub = parser.add_subparsers(dest="command", required=True)

    forms = sub.add_parser("forms", help="Base de 𝒜^p(Z)_d")
    forms.add_argument("ideal")
    forms.add_argument("p", type=int)
    forms.add_argument("d", type=int, nargs="?", default=None)
    forms.set_defaults(handler=cmd_forms)

    analyze = sub.add_parser("analyze", help="Análisis de la distribución definida por una forma")
    analyze.add_argument("form", nargs="?", default=None)
    analyze.add_argument("--ideal", default=None)
    analyze.add_argument("--random", type=int, nargs=2, metavar=("P", "D"), default=None)
    analyze.add_argument("--twist", type=int, default=0)
    analyze.add_argument("--cohomology", type=parse_cohomology, action="append", default=[])
    analyze.set_defaults(handler=cmd_analyze)

    example = sub.add_parser("example", help="Escenarios de referencia")
    example.add_argument("name", choices=list(SCENARIOS))
    example.set_defaults(handler=cmd_example)

    betti_cmd = sub.add_parser("betti", help="Tabla de Betti de un ideal")
    betti_cmd.add_argument("ideal")
    betti_cmd.add_argument("--dump", action="store_true")
    betti_cmd.set_defaults(handler=cmd_betti)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, SETTINGS["log_file"] or None)
    config = Config(args.config)
    try:
        return args.handler(args, config)
    except SyzFormsError as e:
        logger.error(f"Error en {args.command}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"Error de entrada en {args.command}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
