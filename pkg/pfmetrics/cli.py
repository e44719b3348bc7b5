"""
Command Line Interface - pfmetrics

Subcommands:

- compute: one metric between two images
- matrix: one metric over all unordered pairs of a directory of images
- verify: the bound suite on a seeded random corpus (or an image directory)
- bench: runtime table of W_1, W_2, f_{1,2} and f_{2,2} per grid size
- synth: write a seeded synthetic PGM corpus
- scatter: per-class pairwise W_1, W_2, f_{1,2} and F_{2,2} with rank correlation

Exit codes: 0 success, 1 verification failure or solver error, 2 input
error, 3 violated metric precondition.
"""

import argparse
import csv
import io
import logging
import math
import sys
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from scipy.stats import spearmanr

from . import __version__
from .core.pipeline import MATRIX_COLUMNS, PairwisePipeline
from .core.processor import MetricProcessor
from .errors import EmptyCorpus, ImageFormatError, PFMError, PreconditionError, UnknownMetric
from .imaging.loader import load_directory, read_measure
from .imaging.synth import GENERATORS, generate_corpus, verification_pairs, write_corpus
from .measures.grid_measure import from_image
from .metrics.fourier import matched_moment_order
from .metrics.selectors import build_metric
from .reports import reports_to_csv, reports_to_json, write_reports
from .transport.solver import DEFAULT_GUARD
from .validation.equivalence import EquivalenceValidator, summarize

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('compute', 'matrix', 'verify', 'bench', 'synth', 'scatter')

DEFAULT_VERIFY_SIZES = [8, 16]
DEFAULT_VERIFY_PAIRS = {8: 200, 16: 100}
DEFAULT_VERIFY_CENTERED = {8: 100, 16: 50}
DEFAULT_BENCH_SIZES = [32, 64, 128, 256, 512]
WASSERSTEIN_MAX_BENCH_SIZE = 128
# dense transport above N=32 is left out of the default bench
BENCH_DEFAULT_GUARD = 2048 ** 2
SPEARMAN_SOFT_GATE = 0.7

BENCH_COLUMNS = [
    'N', 'pairs',
    'w1_mean', 'w1_std', 'w2_mean', 'w2_std',
    'f12_mean', 'f12_std', 'f22_mean', 'f22_std', 'f22_variant',
]
SCATTER_COLUMNS = ['class', 'image_a', 'image_b', 'N', 'w1', 'w2', 'f12', 'F22']


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: Literal['compute', 'matrix', 'verify', 'bench', 'synth', 'scatter']
    metric: str = 'w1'
    s: Optional[float] = None
    p: Optional[float] = None
    alpha: Optional[float] = None
    oversample: int = Field(default=2, ge=1)
    inputs: List[Path] = Field(default_factory=list)
    out: Optional[Path] = None
    threads: int = Field(default=1, ge=1)
    seed: int = 0
    sizes: Optional[List[int]] = None
    classes: List[str] = Field(default_factory=lambda: list(GENERATORS))
    count: int = Field(default=10, ge=0)
    pairs: Optional[int] = Field(default=None, ge=0)
    centered_pairs: Optional[int] = Field(default=None, ge=0)
    guard: Optional[int] = Field(default=None, ge=1)
    format: Literal['csv', 'json'] = 'csv'

    @field_validator('metric')
    @classmethod
    def known_metric(cls, value: str) -> str:
        try:
            build_metric(value)
        except (UnknownMetric, ValueError) as e:
            raise ValueError(str(e))
        return value

    @field_validator('classes')
    @classmethod
    def known_classes(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in GENERATORS]
        if unknown:
            raise ValueError(f"Unknown image classes {unknown}; expected a subset of {list(GENERATORS)}")
        return value

    @field_validator('sizes')
    @classmethod
    def positive_sizes(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and any(n < 1 for n in value):
            raise ValueError('sizes must be positive')
        return value

    @model_validator(mode='after')
    def inputs_match_subcommand(self) -> 'RunConfig':
        expected = {'compute': 2, 'matrix': 1}.get(self.subcommand)
        if expected is not None and len(self.inputs) != expected:
            raise ValueError(f"{self.subcommand} takes {expected} input path(s), got {len(self.inputs)}")
        return self

    def transport_guard(self) -> int:
        if self.guard is not None:
            return self.guard
        return BENCH_DEFAULT_GUARD if self.subcommand == 'bench' else DEFAULT_GUARD

    def processor_config(self) -> Dict[str, Any]:
        return {'oversample': self.oversample, 'solver_guard': self.transport_guard(), 'threads': self.threads}

    def metric_args(self) -> Dict[str, Any]:
        return {'s': self.s, 'p': self.p, 'alpha': self.alpha, 'oversample': self.oversample}


# --- output helpers ---------------------------------------------------------

def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return '' if math.isnan(value) else repr(value)
    return str(value)


def _rows_to_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator='\n', extrasaction='ignore')
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _fmt(row.get(key, '')) for key in columns})
    return buffer.getvalue()


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding='utf-8')
    logger.info(f"Wrote {out}")


# --- subcommands ------------------------------------------------------------

def cmd_compute(config: RunConfig) -> int:
    mu, nu = (read_measure(path) for path in config.inputs)
    if mu.n != nu.n:
        raise ImageFormatError(f"Images have different resolutions: N={mu.n} vs N={nu.n}")
    processor = MetricProcessor(config.processor_config())
    metric = processor.get_metric(config.metric, **config.metric_args())
    result = processor.evaluate(mu, nu, metric)
    sys.stdout.write(
        f"metric={result['metric']} N={result['n']} value={result['value']!r} seconds={result['seconds']!r}\n"
    )
    return 0


def cmd_matrix(config: RunConfig) -> int:
    pipeline = PairwisePipeline(config.processor_config())
    result = pipeline.process(config.inputs[0], config.metric, **config.metric_args())
    _emit(_rows_to_csv(result['rows'], MATRIX_COLUMNS), config.out)
    for step in result['metadata']['steps']:
        if step['step'] == 'spectrum_warmup' and step['status'] == 'completed':
            logger.info(f"Spectrum warmup took {step['duration']:.4f}s")
            sys.stderr.write(f"spectrum warmup: {step['duration']:.6f}s\n")
    for error in result['errors']:
        logger.error(f"{error['image_a']} vs {error['image_b']}: {error['error_kind']}: {error['error']}")
    if result['errors']:
        return result['errors'][0]['exit_code']
    return 0


def _verify_pairs(config: RunConfig) -> List:
    if config.inputs:
        measures = load_directory(config.inputs[0])
        return [(f"{a}|{b}", mu, nu) for (a, mu), (b, nu) in combinations(measures, 2)]
    pairs = []
    for n in config.sizes or DEFAULT_VERIFY_SIZES:
        count = config.pairs if config.pairs is not None else DEFAULT_VERIFY_PAIRS.get(n, 50)
        centered = config.centered_pairs if config.centered_pairs is not None else DEFAULT_VERIFY_CENTERED.get(n, 25)
        pairs.extend(verification_pairs(config.seed, n, count, centered))
    return pairs


def cmd_verify(config: RunConfig) -> int:
    pairs = _verify_pairs(config)
    if not pairs:
        raise EmptyCorpus('no pairs')
    validator = EquivalenceValidator({'solver_guard': config.transport_guard(), 'threads': config.threads})
    reports = validator.validate_pairs(pairs)
    summary = summarize(reports)
    if config.out is not None:
        write_reports(reports, config.out, config.format, summary)
    else:
        sys.stdout.write(reports_to_json(reports, summary) if config.format == 'json' else reports_to_csv(reports))

    logger.info(
        f"Verification summary: {summary['passed']} passed, {summary['failed']} failed, "
        f"{summary['skipped']} skipped of {summary['total']}"
    )
    for name, counts in summary['by_bound'].items():
        if counts['failed']:
            logger.warning(f"Bound {name}: {counts['failed']} failure(s)")
    return 0 if summary['all_passed'] else 1


def _bench_pairs(config: RunConfig, n: int) -> List:
    corpus = generate_corpus(config.seed, max(2, config.count), n, config.classes)
    pairs = []
    for name in config.classes:
        images = corpus[name]
        pairs.extend(
            (from_image(images[i][1]), from_image(images[i + 1][1])) for i in range(0, len(images) - 1, 2)
        )
    limit = config.pairs if config.pairs is not None else 5
    return pairs[:limit]


def _timings(processor: MetricProcessor, pairs: List, selector: str) -> List[float]:
    metric = processor.get_metric(selector, oversample=processor.config['oversample'])
    seconds = []
    for mu, nu in pairs:
        try:
            seconds.append(processor.evaluate(mu, nu, metric)['seconds'])
        except PreconditionError as e:
            logger.warning(f"{selector} skipped at N={mu.n}: {str(e)}")
            return []
    return seconds


def _mean_std(seconds: List[float]) -> Dict[str, float]:
    if not seconds:
        return {'mean': math.nan, 'std': math.nan}
    return {'mean': float(np.mean(seconds)), 'std': float(np.std(seconds))}


def cmd_bench(config: RunConfig) -> int:
    rows = []
    for n in config.sizes or DEFAULT_BENCH_SIZES:
        pairs = _bench_pairs(config, n)
        # fresh processor per size so spectra are never served from cache
        processor = MetricProcessor(config.processor_config())
        row: Dict[str, Any] = {'N': n, 'pairs': len(pairs)}
        for key, selector in (('w1', 'w1'), ('w2', 'w2')):
            timings = _timings(processor, pairs, selector) if n <= WASSERSTEIN_MAX_BENCH_SIZE else []
            if n > WASSERSTEIN_MAX_BENCH_SIZE:
                logger.warning(f"{selector} skipped at N={n}: above the transport size limit")
            stats = _mean_std(timings)
            row[f"{key}_mean"], row[f"{key}_std"] = stats['mean'], stats['std']

        stats = _mean_std(_timings(processor, pairs, 'f{1,2,0}'))
        row['f12_mean'], row['f12_std'] = stats['mean'], stats['std']

        centered = [pair for pair in pairs if matched_moment_order(*pair) >= 1]
        if len(centered) == len(pairs):
            timings, variant = _timings(processor, pairs, 'f{2,2,0}'), 'f22'
        else:
            timings, variant = _timings(processor, pairs, 'f22t'), 'F22'
        stats = _mean_std(timings)
        row['f22_mean'], row['f22_std'], row['f22_variant'] = stats['mean'], stats['std'], variant
        logger.info(f"Bench N={n}: {row}")
        rows.append(row)

    _emit(_rows_to_csv(rows, BENCH_COLUMNS), config.out)
    return 0


def cmd_synth(config: RunConfig) -> int:
    out = config.out or Path('corpus')
    written = write_corpus(out, config.seed, config.count, config.sizes or [32], config.classes)
    sys.stdout.write(f"wrote {len(written)} images under {out}\n")
    return 0


def cmd_scatter(config: RunConfig) -> int:
    pipeline = PairwisePipeline(config.processor_config())
    selectors = {'w1': 'w1', 'w2': 'w2', 'f12': 'f{1,2,0}', 'F22': 'f22t'}
    rows: List[Dict[str, Any]] = []
    for n in config.sizes or [32]:
        corpus = generate_corpus(config.seed, config.count, n, config.classes)
        for name in config.classes:
            measures = [(fname, from_image(img)) for fname, img in corpus[name]]
            joined: Dict[tuple, Dict[str, Any]] = {}
            for column, selector in selectors.items():
                result = pipeline.process(measures, selector, oversample=config.oversample)
                for row in result['rows']:
                    entry = joined.setdefault(
                        (row['image_a'], row['image_b']),
                        {'class': name, 'image_a': row['image_a'], 'image_b': row['image_b'], 'N': n},
                    )
                    entry[column] = row['value']
            rows.extend(joined[key] for key in sorted(joined))

    _emit(_rows_to_csv(rows, SCATTER_COLUMNS), config.out)

    complete = [row for row in rows if 'w2' in row and 'F22' in row]
    if len(complete) >= 3:
        rho = float(spearmanr([row['w2'] for row in complete], [row['F22'] for row in complete])[0])
        if rho >= SPEARMAN_SOFT_GATE:
            logger.info(f"Spearman rank correlation W2 vs F22: {rho:.4f} over {len(complete)} pairs")
        else:
            logger.warning(f"Spearman rank correlation W2 vs F22 is {rho:.4f}, below {SPEARMAN_SOFT_GATE}")
    else:
        logger.warning('Too few pairs for a rank correlation')
    return 0


HANDLERS = {
    'compute': cmd_compute,
    'matrix': cmd_matrix,
    'verify': cmd_verify,
    'bench': cmd_bench,
    'synth': cmd_synth,
    'scatter': cmd_scatter,
}


# --- argument parsing -------------------------------------------------------

def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(',') if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--metric', default='w1', help='w1 | w2 | f{s,p,alpha} | dsup{s} | d2t | f22t | tv')
    common.add_argument('--s', type=float, help='Smoothness exponent for f and dsup')
    common.add_argument('--p', type=float, help='Integrability exponent for f (inf for the sup-metric)')
    common.add_argument('--alpha', type=float, help='Extra weight exponent for f')
    common.add_argument('--oversample', type=int, default=2, help='Frequency lattice refinement r')
    common.add_argument('--out', type=Path, help='Output file or directory (default: stdout)')
    common.add_argument('--threads', type=int, default=1, help='Worker threads')
    common.add_argument('--seed', type=int, default=0, help='Corpus seed')
    common.add_argument('--sizes', type=_int_list, help='Comma-separated grid sizes N')
    common.add_argument('--classes', type=_name_list, help=f"Comma-separated classes from {', '.join(GENERATORS)}")
    common.add_argument('--count', type=int, default=10, help='Images per class and size')
    common.add_argument('--pairs', type=int, help='Random pairs per size')
    common.add_argument('--centered-pairs', type=int, help='Equal-center pairs per size (verify)')
    common.add_argument('--guard', type=int, help=f"Transport size guard in cost entries (default {DEFAULT_GUARD}, bench {BENCH_DEFAULT_GUARD})")
    common.add_argument('--format', choices=['csv', 'json'], default='csv', help='Report format (verify)')
    common.add_argument('--verbose', '-v', action='store_true', help='Log progress at INFO')
    common.add_argument('--debug', action='store_true', help='Log at DEBUG')

    parser = argparse.ArgumentParser(
        prog='pfmetrics',
        description='Periodic Fourier-based metrics and exact Wasserstein distances on grid measures',
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='subcommand', required=True)
    sub.add_parser('compute', parents=[common], help='Distance between two images').add_argument(
        'inputs', nargs=2, type=Path)
    sub.add_parser('matrix', parents=[common], help='Pairwise distances over a directory').add_argument(
        'inputs', nargs=1, type=Path)
    sub.add_parser('verify', parents=[common], help='Run the bound suite').add_argument(
        'inputs', nargs='?', type=Path)
    sub.add_parser('bench', parents=[common], help='Runtime table per grid size')
    sub.add_parser('synth', parents=[common], help='Write a synthetic corpus')
    sub.add_parser('scatter', parents=[common], help='Pairwise W and Fourier distances per class')
    return parser


def _configure_logging(verbose: bool, debug: bool) -> None:
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        force=True,
    )


def _to_config(args: argparse.Namespace) -> RunConfig:
    inputs = args.inputs if isinstance(getattr(args, 'inputs', None), list) else (
        [args.inputs] if getattr(args, 'inputs', None) else []
    )
    options = {
        'subcommand': args.subcommand,
        'metric': args.metric,
        's': args.s,
        'p': args.p,
        'alpha': args.alpha,
        'oversample': args.oversample,
        'inputs': inputs,
        'out': args.out,
        'threads': args.threads,
        'seed': args.seed,
        'sizes': args.sizes,
        'count': args.count,
        'pairs': args.pairs,
        'centered_pairs': args.centered_pairs,
        'guard': args.guard,
        'format': args.format,
    }
    if args.classes:
        options['classes'] = args.classes
    return RunConfig(**options)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.debug)

    try:
        config = _to_config(args)
    except ValidationError as e:
        sys.stderr.write(f"error: invalid arguments: {e.errors()[0]['msg']}\n")
        return 2

    try:
        return HANDLERS[config.subcommand](config)
    except PFMError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {str(e)}\n")
        return e.exit_code
    except OSError as e:
        sys.stderr.write(f"error: {str(e)}\n")
        return 2
    except ValidationError as e:
        sys.stderr.write(f"error: invalid metric parameters: {e.errors()[0]['msg']}\n")
        return 2


__all__ = ['RunConfig', 'build_parser', 'main', 'HANDLERS', 'SUBCOMMANDS']
