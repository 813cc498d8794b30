"""
Command-line front end.

Subcommands and their output columns:
  entropy           q,h_x,h_y,h_xy,h_x_given_y,h_y_given_x,ht_x_given_y,ht_y_given_x,
                    mutual_information,delta,dtilde,regime
  cq                scenario,metric,q,theta,kappa,c_value[,normalized]
  scan-s            scenario,metric,q,kappa,theta_star,s_value,positive
  kappa-threshold   scenario,metric,q,kappa_s (empty when S_q(0) is not positive)
  validate-oracle   scenario,role,max_deviation,tolerance,passed

Numbers are written with 12 significant digits. Output goes to stdout unless --out is
given; relative --out paths are resolved against $QMETRIC_OUT_DIR when it is set.
"""
import argparse
import dataclasses
import io
import json
import logging
import math
import os
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from .analysis import (DEFAULT_SEARCH, SearchConfig, c_q, normalized_strength, scan,
    threshold_table)
from .consts import OUT_DIR_ENV, OUTPUT_DIGITS
from .entropy import (Direction, EntropyOrder, JointDistribution, MetricKind,
    conditional_entropy_avg, conditional_entropy_chain, joint_entropy, metric,
    mutual_information, tsallis_entropy)
from .errors import NonMetricWarning, QMetricError, UsageError
from .oracle.validate import compare_with_closed_form
from .scenarios import Scenario, ScenarioSpec

logger = logging.getLogger(__name__)

SEARCH_FLAGS = {
    'theta_min': float,
    'theta_max': float,
    'coarse_steps': int,
    'refine_tolerance': float,
    'positivity_epsilon': float,
    'kappa_max': float,
    'kappa_coarse_steps': int,
    'kappa_bisect_tolerance': float,
}


def parse_q_list(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not values or any(not (math.isfinite(v) and v > 0) for v in values):
        raise argparse.ArgumentTypeError(f"q values must be positive: {text!r}")
    return values


def parse_kappa_grid(text: str) -> List[float]:
    """`min:max:step`, inclusive of max up to rounding; a single number is a one-point grid."""
    parts = text.split(':')
    try:
        numbers = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"kappa grid must be min:max:step, got {text!r}")
    if len(numbers) == 1:
        lo, hi, step = numbers[0], numbers[0], 1.0
    elif len(numbers) == 3:
        lo, hi, step = numbers
    else:
        raise argparse.ArgumentTypeError(f"kappa grid must be min:max:step, got {text!r}")
    if lo < 0 or hi < lo or step <= 0:
        raise argparse.ArgumentTypeError(f"kappa grid needs 0 <= min <= max and step > 0, got {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def parse_positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def parse_joint(text: str) -> np.ndarray:
    """Rows separated by ';', cells by ','."""
    try:
        return np.array([[float(v) for v in row.split(',')] for row in text.split(';')])
    except ValueError:
        raise argparse.ArgumentTypeError(f"joint must look like 'a,b;c,d', got {text!r}")


@dataclass
class RunConfig:
    command: str
    out: Optional[Path]
    fmt: str
    scenario: Optional[Scenario] = None
    metric: Optional[MetricKind] = None
    q_list: List[float] = field(default_factory=list)
    theta: Optional[float] = None
    kappa: Optional[float] = None
    kappa_grid: List[float] = field(default_factory=list)
    search: SearchConfig = DEFAULT_SEARCH
    joint: Optional[np.ndarray] = None
    normalize: bool = False
    workers: int = 1
    theta_steps: int = 20
    kappa_steps: int = 10
    grid_kappa_max: float = 2.0

    @staticmethod
    def from_args(args: argparse.Namespace) -> "RunConfig":
        overrides = {k: getattr(args, k) for k in SEARCH_FLAGS if getattr(args, k, None) is not None}
        cfg = RunConfig(
            command=args.command,
            out=resolve_out(args.out),
            fmt=args.format,
            scenario=Scenario(args.scenario) if getattr(args, 'scenario', None) else None,
            metric=MetricKind(args.metric) if getattr(args, 'metric', None) else None,
            q_list=getattr(args, 'q', None) or [],
            theta=getattr(args, 'theta', None),
            kappa=getattr(args, 'kappa', None) if args.command == 'cq' else None,
            kappa_grid=getattr(args, 'kappa', None) if args.command == 'scan-s' else [],
            search=dataclasses.replace(DEFAULT_SEARCH, **overrides),
            normalize=getattr(args, 'normalize', False),
            workers=getattr(args, 'workers', 1),
            theta_steps=getattr(args, 'theta_steps', 20),
            kappa_steps=getattr(args, 'kappa_steps', 10),
            grid_kappa_max=getattr(args, 'grid_kappa_max', 2.0),
        )
        if args.command == 'entropy':
            if args.joint_file is not None:
                cfg.joint = pd.read_csv(args.joint_file, header=None).to_numpy(dtype=float)
            else:
                cfg.joint = args.joint
        return cfg


def resolve_out(out: Optional[str]) -> Optional[Path]:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{v:.{OUTPUT_DIGITS}g}")
    return v


def render(rows: List[Dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == 'json':
        return json.dumps([{c: _format_value(r[c]) for c in columns} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    pd.DataFrame(rows, columns=list(columns)).to_csv(buf, index=False,
        float_format=f"%.{OUTPUT_DIGITS}g", na_rep='', lineterminator='\n')
    return buf.getvalue()


def emit(rows: List[Dict], columns: Sequence[str], cfg: RunConfig):
    text = render(rows, columns, cfg.fmt)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with open(cfg.out, 'w', newline='') as f:
        f.write(text)
    logger.info("wrote %d rows to %s", len(rows), cfg.out)


ENTROPY_COLUMNS = ('q', 'h_x', 'h_y', 'h_xy', 'h_x_given_y', 'h_y_given_x', 'ht_x_given_y',
    'ht_y_given_x', 'mutual_information', 'delta', 'dtilde', 'regime')


def cmd_entropy(cfg: RunConfig) -> int:
    j = JointDistribution.of(cfg.joint)
    rows = []
    for q in cfg.q_list:
        order = EntropyOrder(q)
        non_metric = q < 1.0 and not order.is_shannon
        if non_metric:
            logger.warning("q=%s < 1: distances are not metrics", q)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', NonMetricWarning)
            rows.append({
                'q': q,
                'h_x': tsallis_entropy(j.x_marginal(), order),
                'h_y': tsallis_entropy(j.y_marginal(), order),
                'h_xy': joint_entropy(j, order),
                'h_x_given_y': conditional_entropy_chain(j, order, Direction.X_GIVEN_Y),
                'h_y_given_x': conditional_entropy_chain(j, order, Direction.Y_GIVEN_X),
                'ht_x_given_y': conditional_entropy_avg(j, order, Direction.X_GIVEN_Y),
                'ht_y_given_x': conditional_entropy_avg(j, order, Direction.Y_GIVEN_X),
                'mutual_information': mutual_information(j, order),
                'delta': metric(j, order, MetricKind.DELTA),
                'dtilde': metric(j, order, MetricKind.DTILDE),
                'regime': 'non-metric' if non_metric else 'metric',
            })
    emit(rows, ENTROPY_COLUMNS, cfg)
    return 0


def cmd_cq(cfg: RunConfig) -> int:
    spec = ScenarioSpec(cfg.scenario, cfg.theta, cfg.kappa)
    columns = ['scenario', 'metric', 'q', 'theta', 'kappa', 'c_value']
    if cfg.normalize:
        columns.append('normalized')
    rows = []
    for q in cfg.q_list:
        value = c_q(spec, cfg.metric, q)
        row = {
            'scenario': spec.scenario.value,
            'metric': cfg.metric.value,
            'q': q,
            'theta': spec.theta,
            'kappa': spec.kappa,
            'c_value': value,
        }
        if cfg.normalize:
            row['normalized'] = normalized_strength(spec.scenario, q, value)
        rows.append(row)
    emit(rows, columns, cfg)
    return 0


SCAN_COLUMNS = ('scenario', 'metric', 'q', 'kappa', 'theta_star', 's_value', 'positive')


def cmd_scan(cfg: RunConfig) -> int:
    records = scan(cfg.scenario, cfg.metric, cfg.q_list, cfg.kappa_grid, cfg.search, cfg.workers)
    emit([r.to_row() for r in records], SCAN_COLUMNS, cfg)
    return 0


def cmd_threshold(cfg: RunConfig) -> int:
    records = threshold_table(cfg.scenario, cfg.metric, cfg.q_list, cfg.search)
    emit([r.to_row() for r in records], ('scenario', 'metric', 'q', 'kappa_s'), cfg)
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    scenarios = [cfg.scenario] if cfg.scenario is not None else list(Scenario)
    thetas = np.linspace(math.pi / cfg.theta_steps, math.pi, cfg.theta_steps)
    kappas = np.linspace(0.0, cfg.grid_kappa_max, cfg.kappa_steps)
    rows = []
    for scenario in scenarios:
        for d in compare_with_closed_form(scenario, thetas, kappas):
            rows.append({
                'scenario': d.scenario.value,
                'role': d.role.value,
                'max_deviation': d.max_deviation,
                'tolerance': d.tolerance,
                'passed': d.passed,
            })
    emit(rows, ('scenario', 'role', 'max_deviation', 'tolerance', 'passed'), cfg)
    failed = [r for r in rows if not r['passed']]
    for r in failed:
        print(f"oracle mismatch: {r['scenario']} {r['role']} deviates by {r['max_deviation']:.3g}"
              f" > {r['tolerance']:.0e}", file=sys.stderr)
    return 1 if failed else 0


COMMANDS = {
    'entropy': cmd_entropy,
    'cq': cmd_cq,
    'scan-s': cmd_scan,
    'kappa-threshold': cmd_threshold,
    'validate-oracle': cmd_validate,
}


def _add_output(p: argparse.ArgumentParser):
    p.add_argument('--out', default=None, help=f"output file (default stdout; relative to ${OUT_DIR_ENV} if set)")
    p.add_argument('--format', choices=('csv', 'json'), default='csv')


def _add_scenario(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument('--scenario', choices=[s.value for s in Scenario], required=required)


def _add_metric(p: argparse.ArgumentParser):
    p.add_argument('--metric', choices=[m.value for m in MetricKind], default=MetricKind.DTILDE.value)


def _add_search(p: argparse.ArgumentParser):
    g = p.add_argument_group('search overrides')
    for name, kind in SEARCH_FLAGS.items():
        g.add_argument('--' + name.replace('_', '-'), dest=name, type=kind, default=None,
            help=f"default {getattr(DEFAULT_SEARCH, name)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qmetric',
        description='q-entropic Bell and Leggett-Garg violations under decoherence')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('entropy', help='entropies and distances of a joint distribution')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--joint', type=parse_joint, help="inline matrix, e.g. '0.5,0;0,0.5'")
    source.add_argument('--joint-file', help='CSV file of joint probabilities without header')
    p.add_argument('--q', type=parse_q_list, required=True)
    _add_output(p)

    p = sub.add_parser('cq', help='C_q at one (theta, kappa)')
    _add_scenario(p)
    _add_metric(p)
    p.add_argument('--q', type=parse_q_list, required=True)
    p.add_argument('--theta', type=float, required=True)
    p.add_argument('--kappa', type=float, required=True)
    p.add_argument('--normalize', action='store_true', help='add C_q / ln_q(number of outcomes)')
    _add_output(p)

    p = sub.add_parser('scan-s', help='S_q(kappa) table')
    _add_scenario(p)
    _add_metric(p)
    p.add_argument('--q', type=parse_q_list, required=True)
    p.add_argument('--kappa', type=parse_kappa_grid, required=True, help='min:max:step')
    p.add_argument('--workers', type=int, default=1)
    _add_search(p)
    _add_output(p)

    p = sub.add_parser('kappa-threshold', help='kappa_s(q) table')
    _add_scenario(p)
    _add_metric(p)
    p.add_argument('--q', type=parse_q_list, required=True)
    _add_search(p)
    _add_output(p)

    p = sub.add_parser('validate-oracle', help='closed forms against density-matrix simulation')
    _add_scenario(p, required=False)
    p.add_argument('--theta-steps', type=parse_positive_int, default=20)
    p.add_argument('--kappa-steps', type=parse_positive_int, default=10)
    p.add_argument('--grid-kappa-max', type=float, default=2.0)
    _add_output(p)
    return parser


def run(argv: Sequence[str]) -> int:
    """Runs one command; returns 0 on success, 2 on usage errors and 1 on other failures."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')

    start_time = time.perf_counter()
    try:
        cfg = RunConfig.from_args(args)
        code = COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (QMetricError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    logger.info("%s finished in %.1f sec", args.command, time.perf_counter() - start_time)
    return code
