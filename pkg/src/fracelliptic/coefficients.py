"""Evaluable scalar fields for the diffusivity kappa (and custom forcings).

Three flavours: built-ins with exact derivatives (constant, 1 + e^x),
parsed expressions (differentiated symbolically at construction), and
tabulated samples (interpolated; no derivative).  The schemes only ever need
values at mesh points; manufactured forcings additionally need the first
derivative.
"""

from __future__ import annotations

import numpy as np

from . import exprparse

__all__ = [
    "CoefficientField",
    "ConstantField",
    "OnePlusExpField",
    "ExpressionField",
    "TabulatedField",
    "make_field",
]


class CoefficientField:
    """A scalar field on the problem domain.

    Subclasses implement value(); fields usable in manufactured forcings
    also implement derivative().
    """

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError(f"{type(self).__name__} has no exact derivative")

    def __call__(self, x):
        return self.value(x)


class ConstantField(CoefficientField):
    """kappa(x) = c."""

    def __init__(self, c: float):
        self.c = float(c)

    def value(self, x):
        return self.c * np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else self.c

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0

    def __repr__(self):
        return f"ConstantField({self.c})"


class OnePlusExpField(CoefficientField):
    """kappa(x) = 1 + e^x, the diffusivity used by the bundled benchmarks."""

    def value(self, x):
        return 1.0 + np.exp(x) if np.ndim(x) else 1.0 + float(np.exp(x))

    def derivative(self, x):
        return np.exp(x) if np.ndim(x) else float(np.exp(x))

    def __repr__(self):
        return "OnePlusExpField()"


class ExpressionField(CoefficientField):
    """Field backed by a parsed expression; derivative is symbolic."""

    def __init__(self, src: str):
        self.source = src
        self.expr = exprparse.parse(src)
        self._deriv = None

    def value(self, x):
        return exprparse.evaluate(self.expr, x)

    def derivative(self, x):
        if self._deriv is None:
            self._deriv = exprparse.differentiate(self.expr)
        return exprparse.evaluate(self._deriv, x)

    def __repr__(self):
        return f"ExpressionField({self.source!r})"


class TabulatedField(CoefficientField):
    """Field given by samples, evaluated by linear interpolation.

    Usable for assembly (values at mesh half-points) but not for
    manufactured forcings, which need an exact derivative.
    """

    def __init__(self, xs, values):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.shape != values.shape or xs.size < 2:
            raise ValueError("tabulated field needs matching 1-d arrays of >= 2 samples")
        if not np.all(np.diff(xs) > 0):
            raise ValueError("tabulated sample points must be strictly increasing")
        self.xs = xs
        self.values_ = values

    def value(self, x):
        out = np.interp(np.asarray(x, dtype=float), self.xs, self.values_)
        return out if np.ndim(x) else float(out)

    def __repr__(self):
        return f"TabulatedField(<{self.xs.size} samples>)"


def make_field(spec: str) -> CoefficientField:
    """Build a field from a CLI-style string.

    Accepted forms: "one_plus_exp", "constant:<value>", or any expression in
    the variable x (for example "1+exp(x)").
    """
    spec = spec.strip()
    if spec == "one_plus_exp":
        return OnePlusExpField()
    if spec.startswith("constant:"):
        return ConstantField(float(spec.split(":", 1)[1]))
    return ExpressionField(spec)
