"""hfree: exact computations with weight modules that are free over a
Cartan polynomial algebra, for sl(n+1) and sp(2n).

Modules here work entirely over Q with zero tolerance: sparse rational
polynomials, explicit Lie algebra data, module constructors, weight-window
trace analysis, and coherent-family certification, wrapped in a small
service plus a thin command-line client.
"""

__version__ = "0.1.0"
