"""
Mechanical verification of the Fourier/Wasserstein equivalence bounds.
"""

from .equivalence import EquivalenceValidator, summarize, w1_constant, w2_constant

__all__ = ['EquivalenceValidator', 'summarize', 'w1_constant', 'w2_constant']
