"""Python surface of the semidecay laboratory.

The heavy lifting lives in the C++ extension ``_semidecay``; this module
re-exports it and wraps the JSON-string entry points with dict-based
helpers. The extension sits inside the installed package; in a CMake
build tree it is importable from the build directory instead.
"""

import json as _json

try:
    from . import _semidecay as _ext
except ImportError:  # build-tree layout: extension next to the package
    import _semidecay as _ext

OperatorModel = _ext.OperatorModel
SemidecayError = _ext.SemidecayError
apply_cbf = _ext.apply_cbf
catalog_names = _ext.catalog_names
decay_curve = _ext.decay_curve
dunford = _ext.dunford
eval_cbf = _ext.eval_cbf
eval_cbf_closed_form = _ext.eval_cbf_closed_form
evolve = _ext.evolve
fourier_r = _ext.fourier_r
frac_power_inv = _ext.frac_power_inv
laplace_orbit_infinity = _ext.laplace_orbit_infinity
laplace_orbit_infinity_zero = _ext.laplace_orbit_infinity_zero
lemma_b1_check = _ext.lemma_b1_check
log_operator = _ext.log_operator
nollau_log1p = _ext.nollau_log1p
operator_norm = _ext.operator_norm
resolvent_profile = _ext.resolvent_profile
resolvent_shift = _ext.resolvent_shift
spectrum = _ext.spectrum
weight_operator = _ext.weight_operator

__all__ = [
    "OperatorModel", "SemidecayError", "apply_cbf", "build_family",
    "catalog_names", "decay_curve", "dunford", "eval_cbf",
    "eval_cbf_closed_form", "evolve", "fourier_r", "frac_power_inv",
    "laplace_orbit_infinity", "laplace_orbit_infinity_zero",
    "lemma_b1_check", "log_operator", "nollau_log1p", "operator_norm",
    "paper_suite", "predict_decay", "resolvent_profile", "resolvent_shift",
    "run_experiment", "spectrum", "weight_operator",
]


def predict_decay(theorem, params):
    """Envelope exponents for a rate theorem; raises on hypothesis violations."""
    return _json.loads(_ext.predict_decay_json(theorem, _json.dumps(params)))


def run_experiment(spec):
    """Run one decay-bound experiment described by a spec dict."""
    return _json.loads(_ext.run_experiment_json(_json.dumps(spec)))


def paper_suite():
    """The shipped acceptance experiment matrix as a list of spec dicts."""
    return _json.loads(_ext.paper_suite_json())


def build_family(spec):
    """Synthetic operator family from a spec dict (kind, alpha, a, beta, b, g, N)."""
    return _ext.build_family_json(_json.dumps(spec))
