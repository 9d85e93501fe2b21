"""powerlab: a desk-scale circle-method laboratory for sums of unlike powers.

Subpackages cover the exponent calculus behind the numerical constants, the
integer/modular kernel, the Farey arc dissection, the generating sums and
their major-arc approximants, exact representation counting, and the
singular series / singular integral main term.
"""

__version__ = "0.1.0"
