"""
Metric Selectors

Concrete BaseMetric implementations and the parser that turns a selector
string such as 'w1', 'f{1,2,0}' or 'dsup{2}' into a metric instance.
"""

import logging
import re
from typing import Dict, List, Optional

from ..errors import UnknownMetric
from ..measures.grid_measure import MeasureLike
from ..measures.spectrum import SpectrumCache
from ..transport.solver import DEFAULT_GUARD, wp_exact
from .base import BaseMetric
from .fourier import (
    DEFAULT_MOMENT_TOLERANCE,
    MetricParams,
    d_sup,
    f22_translated,
    pfm,
    translated_d2,
    tv_like,
)

logger = logging.getLogger(__name__)

_SELECTOR = re.compile(r'^\s*([A-Za-z0-9_\-]+)\s*(?:[\{\(\[]([^\}\)\]]*)[\}\)\]])?\s*$')

SELECTOR_ALIASES = {
    'w1': 'w1',
    'wasserstein1': 'w1',
    'w-1': 'w1',
    'w2': 'w2',
    'wasserstein2': 'w2',
    'w-2': 'w2',
    'f': 'f',
    'pfm': 'f',
    'fourier': 'f',
    'dsup': 'dsup',
    'd': 'dsup',
    'sup': 'dsup',
    'd2t': 'd2t',
    'translated_d2': 'd2t',
    'f22t': 'f22t',
    'f22_translated': 'f22t',
    'tv': 'tv',
    'tv_like': 'tv',
}


class WassersteinMetric(BaseMetric):
    """Exact W_p through the certified transportation solver."""

    def __init__(self, p: int, config: Optional[Dict] = None):
        self.p = p
        self.selector = f"w{p}"
        super().__init__(config)

    def _get_requirements(self) -> Dict[str, bool]:
        return {'same_grid': False, 'equal_mass': True, 'probability': True}

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        value, _ = wp_exact(mu, nu, self.p, guard=self.config.get('solver_guard', DEFAULT_GUARD))
        return value


class FourierMetric(BaseMetric):
    """f_{s,p}^(alpha) by lattice quadrature (p = inf gives d_s)."""

    selector = 'f'

    def __init__(self, params: MetricParams, config: Optional[Dict] = None):
        self.params = params
        super().__init__(config)

    def _get_requirements(self) -> Dict[str, bool]:
        positive = self.params.s > 0 or self.params.alpha > 0
        return {'same_grid': True, 'equal_mass': positive, 'probability': False}

    @property
    def name(self) -> str:
        return self.params.label()

    @property
    def oversample(self) -> Optional[int]:
        return self.params.oversample

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        tol = self.config.get('moment_tolerance', DEFAULT_MOMENT_TOLERANCE)
        return pfm(mu, nu, self.params, tol=tol, cache=cache)


class SupMetric(BaseMetric):
    """Lattice sup-metric d_s."""

    selector = 'dsup'

    def __init__(self, s: float, oversample: int, config: Optional[Dict] = None):
        self.s = s
        self._oversample = oversample
        super().__init__(config)

    def _get_requirements(self) -> Dict[str, bool]:
        return {'same_grid': True, 'equal_mass': self.s > 0, 'probability': False}

    @property
    def name(self) -> str:
        return f"dsup[s={self.s:g}]"

    @property
    def oversample(self) -> Optional[int]:
        return self._oversample

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        tol = self.config.get('moment_tolerance', DEFAULT_MOMENT_TOLERANCE)
        return d_sup(mu, nu, self.s, self._oversample, tol=tol, cache=cache)


class TranslatedD2Metric(BaseMetric):
    """D_2 = sqrt(d_2(mu, nu_tau)^2 + |tau|^2)."""

    selector = 'd2t'

    def __init__(self, oversample: int, config: Optional[Dict] = None):
        self._oversample = oversample
        super().__init__(config)

    def _get_requirements(self) -> Dict[str, bool]:
        return {'same_grid': True, 'equal_mass': True, 'probability': True}

    @property
    def oversample(self) -> Optional[int]:
        return self._oversample

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        return translated_d2(mu, nu, self._oversample, cache=cache)


class TranslatedF22Metric(TranslatedD2Metric):
    """F_{2,2} = sqrt(f_{2,2}(mu, nu_tau)^2 + |tau|^2)."""

    selector = 'f22t'

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        return f22_translated(mu, nu, self._oversample, cache=cache)


class WeightNormMetric(BaseMetric):
    """Euclidean norm of the weight difference; masses may differ."""

    selector = 'tv'

    def _get_requirements(self) -> Dict[str, bool]:
        return {'same_grid': True, 'equal_mass': False, 'probability': False}

    def compute(self, mu: MeasureLike, nu: MeasureLike, cache: Optional[SpectrumCache] = None) -> float:
        return tv_like(mu, nu, cross_check=self.config.get('cross_check_tv', True))


def _parse_numbers(text: Optional[str]) -> List[float]:
    if not text or not text.strip():
        return []
    try:
        return [float(part) for part in text.replace(';', ',').split(',') if part.strip()]
    except ValueError as e:
        raise UnknownMetric(f"Bad metric arguments {text!r}: {str(e)}")


def build_metric(
    selector: str,
    s: Optional[float] = None,
    p: Optional[float] = None,
    alpha: Optional[float] = None,
    oversample: int = 2,
    config: Optional[Dict] = None,
) -> BaseMetric:
    """
    Build a metric from a selector string.

    Inline arguments ('f{1,2,0}', 'dsup{1}') take precedence over the
    keyword values, which in turn fall back to s=1, p=2, alpha=0.

    Args:
        selector: One of w1, w2, f, dsup, d2t, f22t, tv (or an alias)
        s, p, alpha: Exponents for f and dsup
        oversample: Lattice refinement for spectral metrics
        config: Shared metric options

    Returns:
        A BaseMetric instance
    """
    match = _SELECTOR.match(selector or '')
    if not match:
        raise UnknownMetric(f"Cannot parse metric selector {selector!r}")
    key = SELECTOR_ALIASES.get(match.group(1).lower().replace(' ', '_'))
    if key is None:
        raise UnknownMetric(f"Unknown metric {match.group(1)!r}; expected one of {', '.join(supported_selectors())}")
    inline = _parse_numbers(match.group(2))

    if key in ('w1', 'w2'):
        return WassersteinMetric(1 if key == 'w1' else 2, config)
    if key == 'f':
        values = inline + [None] * (3 - len(inline))
        params = MetricParams(
            s=values[0] if values[0] is not None else (1.0 if s is None else s),
            p=values[1] if values[1] is not None else (2.0 if p is None else p),
            alpha=values[2] if values[2] is not None else (0.0 if alpha is None else alpha),
            oversample=oversample,
        )
        return FourierMetric(params, config)
    if key == 'dsup':
        order = inline[0] if inline else (1.0 if s is None else s)
        return SupMetric(order, oversample, config)
    if key == 'd2t':
        return TranslatedD2Metric(oversample, config)
    if key == 'f22t':
        return TranslatedF22Metric(oversample, config)
    return WeightNormMetric(config)


def supported_selectors() -> List[str]:
    return ['w1', 'w2', 'f', 'dsup', 'd2t', 'f22t', 'tv']


__all__ = [
    'WassersteinMetric',
    'FourierMetric',
    'SupMetric',
    'TranslatedD2Metric',
    'TranslatedF22Metric',
    'WeightNormMetric',
    'SELECTOR_ALIASES',
    'build_metric',
    'supported_selectors',
]
