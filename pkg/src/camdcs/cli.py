"""Command line interface.

    camdcs step1 --config INPUT [--base-dir DIR]
    camdcs step2 --config INPUT [--select-file SEL.json] [--label NAME]
    camdcs clean-aux [--output-dir DIR]
    camdcs generate-model --example 1|2 --out DIR [...]
    camdcs report [--output-dir DIR] [--figures-dir DIR]
    camdcs serve --config INPUT [--port N] [--static-dir DIR]

Flags mirror the run-configuration keys (see config.py); any flag given on
the command line overrides the file value. Step II is scriptable through a
selections JSON file ({"seed": [re, im], "picks": {...}}); without it the
command prompts interactively with the windowed pole list per energy.

Exit codes: 0 success, 2 validation/configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from camdcs import workflow
from camdcs.config import parse_run_config
from camdcs.errors import CamdcsError, NumericalError, ValidationError
from camdcs.hardsphere import HardSphereParams, generate_hard_sphere_tables
from camdcs.tables import write_energy_file

log = logging.getLogger("camdcs")

_CONFIG_FLAGS = (
    ("theta-r", "theta_r", float),
    ("power-np", "power_np", int),
    ("froissart-eps", "froissart_eps", float),
    ("e-min", None, float),
    ("e-max", None, float),
    ("output-dir", "output_dir", str),
    ("data-dir", "data_dir", str),
)


def _add_config_flags(parser):
    parser.add_argument("--config", required=True, help="run configuration file")
    parser.add_argument("--base-dir", default=".", help="directory holding data/output dirs")
    for flag, _key, typ in _CONFIG_FLAGS:
        parser.add_argument(f"--{flag}", type=typ, default=None)


def _load_config(args):
    config = parse_run_config(args.config)
    updates = {}
    for flag, key, _typ in _CONFIG_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value is None:
            continue
        if key is not None:
            updates[key] = value
    e_min = args.e_min if args.e_min is not None else config.energy_window[0]
    e_max = args.e_max if args.e_max is not None else config.energy_window[1]
    if (e_min, e_max) != config.energy_window:
        updates["energy_window"] = (e_min, e_max)
    if updates:
        config = dataclasses.replace(config, **updates)
    return config


def _cmd_step1(args):
    config = _load_config(args)
    if not config.first_run:
        raise ValidationError("step1 requires first_run = yes in the configuration")
    session = workflow.build_session(config, args.base_dir, step=1)
    written = workflow.run_step1(session)
    for path in written:
        print(path)
    return 0


def _interactive_selector(energy, candidates):
    print(f"\npoles at E = {energy:.6f} meV (windowed, filtered):")
    for i, (pos, res) in enumerate(candidates):
        print(f"  [{i}] J = ({pos.real: .6f}, {pos.imag: .6f})   "
              f"residue = ({res.real: .3e}, {res.imag: .3e})")
    while True:
        raw = input("pick index (or 're im', or 'skip'): ").strip()
        if raw.lower() in ("skip", "s", ""):
            return None
        parts = raw.split()
        try:
            if len(parts) == 1:
                return int(parts[0])
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
        except ValueError:
            pass
        print("could not parse; try again")


def _cmd_step2(args):
    config = _load_config(args)
    if config.first_run:
        raise ValidationError("step2 requires first_run = no in the configuration")
    selections = None
    selector = None
    if args.select_file:
        selections = json.loads(Path(args.select_file).read_text(encoding="utf-8"))
    else:
        selector = _interactive_selector
    session = workflow.build_session(config, args.base_dir, step=2, selections=selections)
    trajectory, written = workflow.run_step2(session, selector=selector, label=args.label)
    print(f"followed {trajectory.label}: {len(trajectory.points)} points, "
          f"{len(trajectory.gaps)} gaps")
    for path in written:
        print(path)
    return 0


def _cmd_clean_aux(args):
    removed = workflow.clean_aux(Path(args.base_dir) / args.output_dir)
    for path in removed:
        print(path)
    return 0


_EXAMPLES = {
    "1": dict(omega=1.023, e_start=10.0, e_stop=100.0, e_step=2.0),
    "2": dict(omega=66.463, e_start=40.0, e_stop=100.0, e_step=2.0),
}


def _cmd_generate_model(args):
    preset = _EXAMPLES.get(args.example or "")
    omega = args.omega if args.omega is not None else (preset or {}).get("omega")
    if omega is None:
        raise ValidationError("give --example 1|2 or an explicit --omega")
    e_start = args.e_start if args.e_start is not None else preset["e_start"]
    e_stop = args.e_stop if args.e_stop is not None else preset["e_stop"]
    e_step = args.e_step if args.e_step is not None else preset["e_step"]
    params = HardSphereParams(
        R=args.radius, d=args.width, V=args.depth, omega=omega,
        mu=args.mu, delta_j=args.delta_j,
    )
    energies = []
    e = e_start
    while e <= e_stop + 1e-9:
        energies.append(round(e, 9))
        e += e_step
    tables = generate_hard_sphere_tables(
        params, energies, jmax=args.jmax, niter=args.niter,
        dxl=args.dxl, jfin=args.jfin,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for table in tables:
        write_energy_file(table, out / str(table.file_index))
    print(f"wrote {len(tables)} tables to {out} "
          f"(E = {energies[0]}..{energies[-1]} meV, jmax={args.jmax}, jfin={args.jfin})")
    return 0


def _cmd_report(args):
    from camdcs.figures import render_report

    out_dir = Path(args.base_dir) / args.output_dir
    figures = render_report(out_dir, args.figures_dir)
    for path in figures:
        print(path)
    return 0


def _cmd_serve(args):
    from camdcs.server import serve

    config = _load_config(args)
    try:
        serve(config, base_dir=args.base_dir, host=args.host, port=args.port,
              static_dir=args.static_dir)
    except OSError as exc:
        raise ValidationError(f"cannot bind {args.host}:{args.port}: {exc}") from exc
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="camdcs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("step1", help="reconstruct, decompose, catalog poles")
    _add_config_flags(p1)
    p1.set_defaults(func=_cmd_step1)

    p2 = sub.add_parser("step2", help="select/follow a trajectory, subtract it")
    _add_config_flags(p2)
    p2.add_argument("--select-file", default=None, help="scripted selections JSON")
    p2.add_argument("--label", default=None, help="trajectory label")
    p2.set_defaults(func=_cmd_step2)

    pc = sub.add_parser("clean-aux", help="remove Step-II accumulation state")
    pc.add_argument("--base-dir", default=".")
    pc.add_argument("--output-dir", default="output")
    pc.set_defaults(func=_cmd_clean_aux)

    pg = sub.add_parser("generate-model", help="emit exact hard-sphere test tables")
    pg.add_argument("--example", choices=("1", "2"), default=None)
    pg.add_argument("--out", required=True, help="target data directory")
    pg.add_argument("--radius", type=float, default=2.045)
    pg.add_argument("--width", type=float, default=0.592)
    pg.add_argument("--depth", type=float, default=165.0)
    pg.add_argument("--omega", type=float, default=None)
    pg.add_argument("--mu", type=float, default=1.0)
    pg.add_argument("--delta-j", type=float, default=5.0)
    pg.add_argument("--jmax", type=int, default=27)
    pg.add_argument("--jfin", type=int, default=15)
    pg.add_argument("--niter", type=int, default=3)
    pg.add_argument("--dxl", type=float, default=0.5)
    pg.add_argument("--e-start", type=float, default=None)
    pg.add_argument("--e-stop", type=float, default=None)
    pg.add_argument("--e-step", type=float, default=None)
    pg.set_defaults(func=_cmd_generate_model)

    pr = sub.add_parser("report", help="render matplotlib figures from the catalog")
    pr.add_argument("--base-dir", default=".")
    pr.add_argument("--output-dir", default="output")
    pr.add_argument("--figures-dir", default=None,
                    help="target directory (default: <output-dir>/figures)")
    pr.set_defaults(func=_cmd_report)

    ps = sub.add_parser("serve", help="start the local HTTP+JSON service")
    _add_config_flags(ps)
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--port", type=int, default=8923)
    ps.add_argument("--static-dir", default=None, help="front-end assets to serve at /")
    ps.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return 3
    except CamdcsError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
