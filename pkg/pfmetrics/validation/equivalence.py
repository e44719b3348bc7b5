"""
Equivalence Validator - Fourier Metrics Against Wasserstein Distances

This module checks the explicit-constant inequalities relating the
periodic Fourier metrics to W_1 and W_2 on grid measures, with T = 2*pi*N:

    f_{1,2} <= W_1 <= T^2/(2 pi) f_{1,2}
    d_1     <= W_1 <= T^2/(2 pi) d_1
    f_{2,2} <= 2 sqrt(2) W_2            (equal centers)
    W_2^2   <= T^3/pi f_{2,2}
    W_2^2   <= sqrt(2) W_1              (support in [0,1]^2)
    f_{1,2} <= d_1                      (same lattice)

Fourier sides use the refinement protocol before being compared. Each
check yields a BoundReport; a check whose hypothesis fails is reported as
skipped with the violated hypothesis in its note, and a batch never stops
on a single pair.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import CentersDiffer, PreconditionError
from ..measures.grid_measure import MeasureLike
from ..metrics.fourier import (
    ConvergedValue,
    MetricParams,
    d_sup,
    f22_translated,
    refine,
    refine_dsup,
    refine_pfm,
)
from ..reports import BoundReport
from ..transport.solver import DEFAULT_GUARD, wp_exact

logger = logging.getLogger(__name__)

Pair = Tuple[str, MeasureLike, MeasureLike]

F12 = MetricParams(s=1.0, p=2.0, alpha=0.0)
F22 = MetricParams(s=2.0, p=2.0, alpha=0.0)


def period(n: int) -> float:
    return 2.0 * math.pi * n


def w1_constant(n: int) -> float:
    """T^2 / (2 pi)."""
    t = period(n)
    return t * t / (2.0 * math.pi)


def w2_constant(n: int) -> float:
    """T^3 / pi."""
    t = period(n)
    return t ** 3 / math.pi


class EquivalenceValidator:
    """
    Runs the bound suite on pairs of probability measures.

    Shared quantities (W_1, W_2, refined f_{1,2}, f_{2,2}, d_1) are
    computed once per pair and reused by every check that needs them.
    """

    def __init__(self, config: Optional[Dict] = None):
        """
        Initialize the validator.

        Args:
            config: Overrides for the refinement and tolerance settings
        """
        self.config = {**self._get_default_config(), **(config or {})}

        logger.info("Equivalence validator initialized")

    def _get_default_config(self) -> Dict[str, Any]:
        return {
            'start_oversample': 2,
            'max_oversample': 128,
            'max_lattice_size': 2048,
            'max_sup_oversample': 16,
            'convergence_tolerance': 0.005,
            'bound_tolerance': 1e-9,
            'quadrature_allowance': 0.0,
            'center_tolerance': 1e-9,
            'solver_guard': DEFAULT_GUARD,
            'threads': 1,
        }

    # --- shared quantities --------------------------------------------------

    @staticmethod
    def _cached(context: Optional[Dict], key: str, compute: Callable[[], Any]) -> Any:
        if context is None:
            return compute()
        if key not in context:
            context[key] = compute()
        return context[key]

    def _wasserstein(self, mu, nu, p: int, context: Optional[Dict]) -> float:
        return self._cached(
            context, f"w{p}",
            lambda: wp_exact(mu, nu, p, guard=self.config['solver_guard'])[0],
        )

    def _oversample_cap(self, n: int) -> int:
        """Largest oversample for f refinement; rN per axis stays within max_lattice_size."""
        cap = min(self.config['max_oversample'], self.config['max_lattice_size'] // max(n, 1))
        return max(self.config['start_oversample'], cap)

    def _refined(self, mu, nu, params: MetricParams, context: Optional[Dict]) -> ConvergedValue:
        return self._cached(
            context, params.label(),
            lambda: refine_pfm(
                mu, nu, params,
                start=self.config['start_oversample'],
                max_oversample=self._oversample_cap(mu.n),
                tolerance=self.config['convergence_tolerance'],
            ),
        )

    def _refined_d1(self, mu, nu, context: Optional[Dict], min_oversample: int = 1) -> ConvergedValue:
        def compute() -> ConvergedValue:
            result = refine_dsup(
                mu, nu, 1.0,
                start=self.config['start_oversample'],
                max_oversample=self.config['max_sup_oversample'],
                tolerance=self.config['convergence_tolerance'],
            )
            if result.oversample < min_oversample:
                value = d_sup(mu, nu, 1.0, min_oversample)
                result = ConvergedValue(value, min_oversample, result.value, result.relative_change, result.converged)
            return result

        return self._cached(context, 'd1', compute)

    def _report(self, name: str, n: int, pair_id: str, lhs: float, rhs: float, constant: float,
                converged: bool = True, oversample: Optional[int] = None, note: str = '') -> BoundReport:
        report = BoundReport.evaluate(
            name, n, pair_id, lhs, rhs, constant,
            quadrature_converged=converged,
            tolerance=self.config['bound_tolerance'],
            allowance=self.config['quadrature_allowance'],
            oversample=oversample,
            note=note,
        )
        if report.failed:
            logger.warning(f"Bound {name} failed on pair {pair_id}: lhs={lhs!r} rhs={rhs!r}")
        return report

    # --- individual checks --------------------------------------------------

    def check_f12_upper(self, mu, nu, pair_id: str = '', context: Optional[Dict] = None) -> BoundReport:
        """f_{1,2} <= W_1."""
        f12 = self._refined(mu, nu, F12, context)
        w1 = self._wasserstein(mu, nu, 1, context)
        return self._report('f12_le_w1', mu.n, pair_id, f12.value, w1, 1.0, f12.converged, f12.oversample)

    def check_f12_lower(self, mu, nu, pair_id: str = '', context: Optional[Dict] = None) -> BoundReport:
        """W_1 <= T^2/(2 pi) f_{1,2}."""
        f12 = self._refined(mu, nu, F12, context)
        w1 = self._wasserstein(mu, nu, 1, context)
        c = w1_constant(mu.n)
        return self._report('w1_le_c_f12', mu.n, pair_id, w1, c * f12.value, c, f12.converged, f12.oversample)

    def check_d1_sandwich(
        self, mu, nu, pair_id: str = '', context: Optional[Dict] = None, min_oversample: int = 1
    ) -> Tuple[BoundReport, BoundReport]:
        """d_1 <= W_1 and W_1 <= T^2/(2 pi) d_1, with the refinement margin in the note."""
        d1 = self._refined_d1(mu, nu, context, min_oversample)
        w1 = self._wasserstein(mu, nu, 1, context)
        c = w1_constant(mu.n)
        note = f"refined r={d1.oversample} margin={d1.value - d1.previous!r}"
        left = self._report('d1_le_w1', mu.n, pair_id, d1.value, w1, 1.0, d1.converged, d1.oversample, note)
        right = self._report('w1_le_c_d1', mu.n, pair_id, w1, c * d1.value, c, d1.converged, d1.oversample, note)
        return left, right

    def check_f12_d1(self, mu, nu, pair_id: str = '', context: Optional[Dict] = None) -> BoundReport:
        """f_{1,2} <= d_1 with d_1 on a lattice at least as fine as the refined f_{1,2}."""
        f12 = self._refined(mu, nu, F12, context)
        d1 = self._refined_d1(mu, nu, context, f12.oversample)
        return self._report('f12_le_d1', mu.n, pair_id, f12.value, d1.value, 1.0, f12.converged, d1.oversample)

    def check_w2_w1(self, mu, nu, pair_id: str = '', context: Optional[Dict] = None) -> BoundReport:
        """W_2^2 <= sqrt(2) W_1."""
        w1 = self._wasserstein(mu, nu, 1, context)
        w2 = self._wasserstein(mu, nu, 2, context)
        c = math.sqrt(2.0)
        return self._report('w2sq_le_sqrt2_w1', mu.n, pair_id, w2 * w2, c * w1, c)

    def check_f22_upper(self, mu, nu, pair_id: str = '', context: Optional[Dict] = None) -> BoundReport:
        """
        f_{2,2} <= 2 sqrt(2) W_2 for measures with equal centers.

        Raises:
            CentersDiffer: when the centers differ by more than center_tolerance
        """
        gap = max(abs(a - b) for a, b in zip(mu.center().coords, nu.center().coords))
        if gap > self.config['center_tolerance']:
            raise CentersDiffer(f"f_2,2 <= 2 sqrt(2) W_2 needs equal centers (offset {gap:.3g})")
        f22 = self._refined(mu, nu, F22, context)
        w2 = self._wasserstein(mu, nu, 2, context)
        c = 2.0 * math.sqrt(2.0)
        return self._report('f22_le_c_w2', mu.n, pair_id, f22.value, c * w2, c, f22.converged, f22.oversample)

    def check_f22_lower(
        self, mu, nu, pair_id: str = '', context: Optional[Dict] = None, translated: bool = False
    ) -> BoundReport:
        """
        W_2^2 <= T^3/pi f_{2,2}.

        The plain check uses the raw pair and is skipped when f_{2,2} is
        infeasible there; translated=True compares against F_{2,2}.
        """
        c = w2_constant(mu.n)
        if translated:
            name = 'w2sq_le_c_F22'
            value = self._cached(
                context, 'F22',
                lambda: refine(
                    lambda r: f22_translated(mu, nu, r),
                    self.config['start_oversample'],
                    self._oversample_cap(mu.n),
                    self.config['convergence_tolerance'],
                ),
            )
        else:
            name = 'w2sq_le_c_f22'
            try:
                value = self._refined(mu, nu, F22, context)
            except PreconditionError as e:
                logger.info(f"Skipping {name} on pair {pair_id}: {str(e)}")
                return BoundReport.skip(name, mu.n, pair_id, c, f"{type(e).__name__}: {str(e)}")
        w2 = self._wasserstein(mu, nu, 2, context)
        return self._report(name, mu.n, pair_id, w2 * w2, c * value.value, c, value.converged, value.oversample)

    # --- batches ------------------------------------------------------------

    def validate_pair(self, mu: MeasureLike, nu: MeasureLike, pair_id: str = '') -> List[BoundReport]:
        """
        Run the whole suite on one pair.

        Returns:
            Reports in a fixed order; checks whose hypotheses fail are skipped
        """
        context: Dict[str, Any] = {}
        steps: List[Tuple[Tuple[str, ...], float, Callable[[], Any]]] = [
            (('f12_le_w1',), 1.0, lambda: self.check_f12_upper(mu, nu, pair_id, context)),
            (('w1_le_c_f12',), w1_constant(mu.n), lambda: self.check_f12_lower(mu, nu, pair_id, context)),
            (('f12_le_d1',), 1.0, lambda: self.check_f12_d1(mu, nu, pair_id, context)),
            (('d1_le_w1', 'w1_le_c_d1'), w1_constant(mu.n), lambda: self.check_d1_sandwich(mu, nu, pair_id, context)),
            (('w2sq_le_sqrt2_w1',), math.sqrt(2.0), lambda: self.check_w2_w1(mu, nu, pair_id, context)),
            (('f22_le_c_w2',), 2.0 * math.sqrt(2.0), lambda: self.check_f22_upper(mu, nu, pair_id, context)),
            (('w2sq_le_c_f22',), w2_constant(mu.n), lambda: self.check_f22_lower(mu, nu, pair_id, context)),
        ]
        reports: List[BoundReport] = []
        for names, constant, run in steps:
            try:
                outcome = run()
            except PreconditionError as e:
                note = f"{type(e).__name__}: {str(e)}"
                outcome = tuple(BoundReport.skip(name, mu.n, pair_id, constant, note) for name in names)
            except Exception as e:
                logger.error(f"Check {'/'.join(names)} errored on pair {pair_id}: {str(e)}")
                outcome = tuple(
                    BoundReport(
                        bound_name=name, n=mu.n, pair_id=pair_id, lhs=math.nan, rhs=math.nan,
                        constant=constant, slack=math.nan, quadrature_converged=False,
                        passed=False, note=f"{type(e).__name__}: {str(e)}",
                    )
                    for name in names
                )
            reports.extend(outcome if isinstance(outcome, tuple) else (outcome,))
        return reports

    def validate_pairs(self, pairs: Sequence[Pair], threads: Optional[int] = None) -> List[BoundReport]:
        """Run validate_pair over many pairs; output order follows input order."""
        threads = threads or self.config['threads']
        start = time.time()
        logger.info(f"Validating {len(pairs)} pairs on {threads} thread(s)")
        if threads <= 1:
            batches = [self.validate_pair(mu, nu, pid) for pid, mu, nu in pairs]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                batches = list(pool.map(lambda item: self.validate_pair(item[1], item[2], item[0]), pairs))
        reports = [r for batch in batches for r in batch]
        logger.info(f"Validation of {len(pairs)} pairs completed in {time.time() - start:.2f} seconds")
        return reports


def summarize(reports: Sequence[BoundReport]) -> Dict[str, Any]:
    """Aggregate pass/fail/skip counts overall and per bound."""
    by_bound: Dict[str, Dict[str, int]] = {}
    for report in reports:
        entry = by_bound.setdefault(report.bound_name, {'passed': 0, 'failed': 0, 'skipped': 0, 'unconverged': 0})
        if report.skipped:
            entry['skipped'] += 1
            continue
        entry['passed' if report.passed else 'failed'] += 1
        if not report.quadrature_converged:
            entry['unconverged'] += 1
    failed = sum(1 for r in reports if r.failed)
    # unconverged quadrature does not block; solver errors (nan sides) do
    converged_failures = sum(
        1 for r in reports if r.failed and (r.quadrature_converged or math.isnan(r.lhs))
    )
    return {
        'total': len(reports),
        'passed': sum(1 for r in reports if not r.skipped and r.passed),
        'failed': failed,
        'skipped': sum(1 for r in reports if r.skipped),
        'converged_failures': converged_failures,
        'all_passed': converged_failures == 0,
        'by_bound': dict(sorted(by_bound.items())),
    }


__all__ = [
    'EquivalenceValidator',
    'summarize',
    'period',
    'w1_constant',
    'w2_constant',
]
