"""Confidence sets for functions of the coefficients.

A functional is evaluated over every region of a RegionUnion. Linear
functionals get the exact range through the support function of each
ellipsoid; anything else is evaluated on uniform draws inside each ellipsoid
and summarized by the per-region min/max hull.
"""

import ast
from dataclasses import dataclass
import operator
from typing import Callable, Dict, List, Tuple, Union

from loguru import logger
import numpy as np
import scipy.linalg as sla

from reprosamples.core.rng import Stream
from reprosamples.inference.regions import EllipsoidRegion, IntervalUnion, RegionUnion
from reprosamples.utils.errors import InvalidConfig

Functional = Union["LinearFunctional", Callable[[np.ndarray], float]]


@dataclass(frozen=True)
class LinearFunctional:
    """h(beta) = c^T beta + offset, with beta indexed like the region union's Lambda"""

    c: np.ndarray
    offset: float = 0.0

    def __call__(self, beta: np.ndarray) -> float:
        return float(self.c @ beta + self.offset)


@dataclass(frozen=True)
class FunctionalSet:
    intervals: IntervalUnion
    per_region: Tuple[Tuple[float, float], ...]
    samples_per_region: int
    exact: bool

    def to_dict(self) -> Dict[str, object]:
        out = self.intervals.to_dict()
        out.update({
            "per_region": [list(pair) for pair in self.per_region],
            "samples_per_region": self.samples_per_region,
            "exact": self.exact,
        })
        return out


def _embed(region: EllipsoidRegion, beta_active: np.ndarray) -> np.ndarray:
    lookup = {j: k for k, j in enumerate(region.lambda_set)}
    full = np.zeros((beta_active.shape[0], len(region.lambda_set)))
    for k, j in enumerate(region.active):
        full[:, lookup[j]] = beta_active[:, k]
    return full


def linear_range(c: np.ndarray, offset: float, region: EllipsoidRegion) -> Tuple[float, float]:
    """Exact range of c^T beta + offset over one region"""
    lookup = {j: k for k, j in enumerate(region.lambda_set)}
    c_active = np.array([c[lookup[j]] for j in region.active])
    mid = offset + (float(c_active @ region.center) if region.active else 0.0)
    if not region.active or not np.any(c_active):
        return mid, mid

    inverse = sla.pinvh(region.shape)
    if not np.allclose(region.shape @ (inverse @ c_active), c_active, atol=1e-8 * max(1.0, np.abs(c_active).max())):
        return -np.inf, np.inf
    half = float(np.sqrt(max(region.radius2, 0.0) * float(c_active @ inverse @ c_active)))
    return mid - half, mid + half


def sample_ellipsoid(region: EllipsoidRegion, m: int, stream: Stream) -> np.ndarray:
    """
    Uniform draws inside the ellipsoid of a region

    Points of the unit ball (Gaussian direction, radius U^(1/k)) are mapped
    through center + sqrt(radius2) * S^(-1/2).
    """
    k = len(region.active)
    generator = stream.generator()
    if k == 0:
        return np.zeros((m, 0))
    direction = generator.standard_normal((m, k))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = generator.random(m) ** (1.0 / k)
    ball = direction * radius[:, None]

    eigvals, eigvecs = np.linalg.eigh(region.shape)
    if np.any(eigvals <= 1e-12 * max(eigvals.max(), 1e-300)):
        logger.warning(f"Region of model {region.support} is unbounded along some directions; sampling its bounded part")
    inv_sqrt = eigvecs @ np.diag(1.0 / np.sqrt(np.maximum(eigvals, 1e-12 * max(eigvals.max(), 1e-300)))) @ eigvecs.T
    return region.center + np.sqrt(max(region.radius2, 0.0)) * ball @ inv_sqrt


def functional_conf_set(h: Functional, joint: RegionUnion, samples_per_region: int, stream: Stream) -> FunctionalSet:
    """
    Range of h over every region of the union

    Args:
        h: a LinearFunctional, or any callable of the coefficient vector over Lambda
        joint: region union, usually the joint confidence set
        samples_per_region: uniform draws per region for nonlinear h
        stream: random stream; region k uses ``stream.child(k)``
    """
    if samples_per_region < 1:
        raise InvalidConfig(f"samples_per_region must be >= 1, got {samples_per_region}")

    pieces: List[Tuple[float, float]] = []
    exact = isinstance(h, LinearFunctional)
    for k, region in enumerate(joint.regions):
        if exact:
            pieces.append(linear_range(np.asarray(h.c, dtype=float), h.offset, region))
            continue
        points = np.vstack([region.center[None, :], sample_ellipsoid(region, samples_per_region, stream.child(k))])
        values = np.array([float(h(beta)) for beta in _embed(region, points)])
        pieces.append((float(values.min()), float(values.max())))

    return FunctionalSet(
        intervals=IntervalUnion.from_pieces(pieces),
        per_region=tuple(pieces),
        samples_per_region=0 if exact else samples_per_region,
        exact=exact,
    )


_BINARY = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCTIONS = {"exp": np.exp, "log": np.log, "sqrt": np.sqrt, "abs": np.abs, "sin": np.sin, "cos": np.cos, "tanh": np.tanh}
_CONSTANTS = {"pi": np.pi, "e": np.e}


class _NonLinear(Exception):
    pass


def _index(node: ast.Subscript, p: int) -> int:
    if not (isinstance(node.value, ast.Name) and node.value.id == "b"):
        raise InvalidConfig("only the coefficient vector b may be indexed")
    key = node.slice
    if not (isinstance(key, ast.Constant) and isinstance(key.value, int)):
        raise InvalidConfig("coefficient indices must be integer literals")
    if not 1 <= key.value <= p:
        raise InvalidConfig(f"coefficient index b[{key.value}] outside [1, {p}]")
    return key.value - 1


def _affine(node: ast.AST, p: int) -> Tuple[np.ndarray, float]:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return np.zeros(p), float(node.value)
    if isinstance(node, ast.Name) and node.id in _CONSTANTS:
        return np.zeros(p), float(_CONSTANTS[node.id])
    if isinstance(node, ast.Subscript):
        c = np.zeros(p)
        c[_index(node, p)] = 1.0
        return c, 0.0
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        c, k = _affine(node.operand, p)
        return (-c, -k) if isinstance(node.op, ast.USub) else (c, k)
    if isinstance(node, ast.BinOp) and type(node.op) in (ast.Add, ast.Sub):
        (c1, k1), (c2, k2) = _affine(node.left, p), _affine(node.right, p)
        sign = 1.0 if isinstance(node.op, ast.Add) else -1.0
        return c1 + sign * c2, k1 + sign * k2
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
        (c1, k1), (c2, k2) = _affine(node.left, p), _affine(node.right, p)
        if not np.any(c1):
            return k1 * c2, k1 * k2
        if not np.any(c2):
            return k2 * c1, k1 * k2
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        (c1, k1), (c2, k2) = _affine(node.left, p), _affine(node.right, p)
        if not np.any(c2) and k2 != 0.0:
            return c1 / k2, k1 / k2
    raise _NonLinear


def _compile(node: ast.AST, p: int) -> Callable[[np.ndarray], float]:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        value = float(node.value)
        return lambda b: value
    if isinstance(node, ast.Name) and node.id in _CONSTANTS:
        value = float(_CONSTANTS[node.id])
        return lambda b: value
    if isinstance(node, ast.Subscript):
        j = _index(node, p)
        return lambda b: b[j]
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        op, inner = _UNARY[type(node.op)], _compile(node.operand, p)
        return lambda b: op(inner(b))
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        op, left, right = _BINARY[type(node.op)], _compile(node.left, p), _compile(node.right, p)
        return lambda b: op(left(b), right(b))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS and len(node.args) == 1 and not node.keywords:
        fn, arg = _FUNCTIONS[node.func.id], _compile(node.args[0], p)
        return lambda b: fn(arg(b))
    raise InvalidConfig(f"unsupported expression element: {ast.dump(node)}")


def parse_functional(expression: str, p: int) -> Functional:
    """
    Parse an arithmetic expression over ``b[1] .. b[p]``

    Affine expressions become a LinearFunctional; others a callable built from
    + - * / ** and exp, log, sqrt, abs, sin, cos, tanh.
    """
    try:
        tree = ast.parse(expression, mode="eval").body
    except SyntaxError as e:
        raise InvalidConfig(f"cannot parse functional {expression!r}: {e.msg}") from e
    evaluator = _compile(tree, p)
    try:
        c, offset = _affine(tree, p)
        return LinearFunctional(c=c, offset=offset)
    except _NonLinear:
        return lambda beta: float(evaluator(np.asarray(beta, dtype=float)))
