# Copyright 2026 The Mmbeam Authors. All Rights Reserved.
#
# This file is part of Mmbeam.
#
# Mmbeam is free software: you can redistribute it and/or modify it under the
# terms of the GNU General Public License as published by the Free Software
# Foundation, either version 3 of the License, or (at your option) any later
# version.
#
# Mmbeam is distributed in the hope that it will be useful, but WITHOUT ANY
# WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS FOR
# A PARTICULAR PURPOSE. See the GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with
# Mmbeam. If not, see <https://www.gnu.org/licenses/>.
"""
Command line entry point: runs an experiment or the dominance probe
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from collections.abc import Sequence
from typing import Any

import numpy as np

from mmbeam import beamsel
from mmbeam import exceptions
from mmbeam import harness
from mmbeam import search

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_RESOURCE_CAP = 3
_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _csv_ints(text: str) -> tuple[int, ...]:
  try:
    return harness.parse_ints(text)
  except ValueError as e:
    raise argparse.ArgumentTypeError(f'expected integers: {text!r}') from e


def _build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(
      prog='mmbeam',
      description='Codebook hybrid precoding search simulator')
  parser.add_argument('-v',
                      '--verbose',
                      action='store_true',
                      help='Log every trial')
  commands = parser.add_subparsers(dest='command', required=True)

  run = commands.add_parser('run', help='Monte Carlo comparison of searches')
  run.add_argument('--config', help='INI file, defaults apply when omitted')
  run.add_argument('--out', required=True, help='Result CSV')
  run.add_argument('--summary', help='Optional summary CSV with SNR gaps')
  run.add_argument('--seed', type=int, help='Master seed')
  run.add_argument('--methods',
                   help='Comma separated subset of ' +
                   ','.join(str(m) for m in harness.Method))
  run.add_argument('--p', type=_csv_ints, help='Comma separated subset sizes')
  run.add_argument('--snr', help="'min:max:step' in dB")
  run.add_argument('--trials', type=int, help='Trials per SNR point')
  run.add_argument('--scoring',
                   choices=[str(s) for s in harness.Scoring],
                   help='How reported mutual information is computed')
  run.add_argument('--workers',
                   type=int,
                   default=1,
                   help='Processes to run trials in')

  probe = commands.add_parser('probe-lemma1',
                              help='Effective power of path beams versus '
                              'array size')
  probe.add_argument('--out', required=True, help='Probe CSV')
  probe.add_argument('--seed', type=int, default=0)
  probe.add_argument('--sides',
                     type=_csv_ints,
                     default=beamsel.DEFAULT_PROBE_SIDES,
                     help='Comma separated antennas per subarray side')
  probe.add_argument('--off-path', type=int, default=8)
  return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
  fields: dict[str, Any] = {}
  try:
    if args.seed is not None:
      fields['master_seed'] = args.seed
    if args.methods is not None:
      fields['methods'] = harness.parse_methods(args.methods)
    if args.p is not None:
      fields['p_values'] = args.p
    if args.snr is not None:
      fields['snr_db'] = harness.parse_snr(args.snr)
    if args.trials is not None:
      fields['trials'] = args.trials
    if args.scoring is not None:
      fields['scoring'] = harness.Scoring(args.scoring)
  except ValueError as e:
    raise exceptions.InvalidConfigError('command line', vars(args),
                                        str(e)) from e
  return fields


def _run(args: argparse.Namespace) -> None:
  cfg = (harness.load_config(args.config)
         if args.config else harness.ExperimentConfig())
  cfg = dataclasses.replace(cfg, **_overrides(args))
  rows = harness.run_experiment(cfg, workers=args.workers)
  harness.write_csv(rows, args.out)
  logger.info('Wrote %d rows to %s', len(rows), args.out)
  if args.summary:
    entries = harness.summarize(rows,
                                gaps=harness.Method.EXHAUSTIVE in cfg.methods)
    harness.write_summary_csv(entries, args.summary)
    for e in entries:
      if e.gap_db is not None:
        logger.info('%s p=%s at %g dB: gap %.2f dB, K_P/K = %s', e.method,
                    e.p, e.snr_db, e.gap_db, e.complexity_ratio)


def _probe(args: argparse.Namespace) -> None:
  rays, rx_cb, tx_cb = beamsel.draw_probe_channel(
      np.random.default_rng(args.seed), n_off_path=args.off_path)
  reports = beamsel.lemma1_probe(rays, rx_cb, tx_cb, n_sides=args.sides)
  beamsel.write_probe_csv(reports, args.out)
  for report in reports:
    logger.info('N = %d: rx ratio %.3g (ordered %s), tx ratio %.3g '
                '(ordered %s)', report.n_antennas, report.rx_dominance_ratio,
                report.rx_ordered, report.tx_dominance_ratio,
                report.tx_ordered)


def main(argv: Sequence[str] | None = None) -> int:
  args = _build_parser().parse_args(argv)
  logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                      format=_LOG_FORMAT)
  logging.captureWarnings(True)
  try:
    if args.command == 'run':
      _run(args)
    else:
      _probe(args)
  except exceptions.InvalidConfigError as e:
    logger.error('%s', e)
    return EXIT_INVALID_CONFIG
  except exceptions.ResourceCapExceededError as e:
    logger.error('%s. Lower the codebook sizes or raise '
                 'experiment.combination_cap (default %d)', e,
                 search.DEFAULT_COMBINATION_CAP)
    return EXIT_RESOURCE_CAP
  return EXIT_OK


if __name__ == '__main__':
  sys.exit(main())
