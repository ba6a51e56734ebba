"""Phase-space quantization on flat space, curved manifolds, and the cylinder.

Subpackage map:

* :mod:`phasequant.geometry` - charts, metrics, curvature, exponential maps.
* :mod:`phasequant.symbols` - momentum polynomials, operator orderings.
* :mod:`phasequant.flat_weyl` - closed-form calculus on flat space.
* :mod:`phasequant.curved` - quantization/dequantization with curvature
  corrections and the trace-axiom defect.
* :mod:`phasequant.cylinder` - the circle phase space, its distributional
  quantizer, and the discrete momentum lattice.
* :mod:`phasequant.harness` - named experiments, reports, and tolerances.
"""

__version__ = "0.1.0"
