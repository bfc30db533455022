"""Parsers for the state and pair spec strings used by the command line."""
from __future__ import annotations

import re

import numpy as np

from . import pairs as P
from . import spaces as St
from .errors import SpecSyntaxError

PAIR_GRAMMAR = """\
pair specs:
  dft:N                     unitary DFT on N points, counting measures
  identity:N                identity on N points
  fourier:L=<len>,M=<n>     M-point grid on (-L/2, L/2) against M frequencies 1/L apart
  haar:N=<n>,seed=<s>       Haar-random unitary
  tensor(SPEC,SPEC)         tensor product of two pairs
  rescale(SPEC,a=<f>,b=<f>) scale source measure by a, target measure by b
  file:PATH                 JSON with W_real[, W_imag, source_weights, target_weights]"""

STATE_GRAMMAR = """\
state specs:
  maxmixed                  I / dim
  pure:k=J                  basis vector e_J of the source
  pure:seed=S               random pure state
  mixed:rank=R,seed=S       G G^H / tr with G a seeded dim x R complex Gaussian
  gibbs:beta=B[,seed=S]     exp(-B H)/Z for a seeded random Hermitian H
  gibbs:beta=B,ham=osc      exp(-B (-Laplacian + x^2))/Z on a uniform grid source
  tensor(SPEC,SPEC)         tensor product (requires a tensor pair)"""

GRAMMAR = PAIR_GRAMMAR + "\n" + STATE_GRAMMAR


def _fail(spec, why):
    raise SpecSyntaxError(f"cannot parse {spec!r}: {why}\n{GRAMMAR}")


def split_top_level(s: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecSyntaxError(f"unbalanced parentheses in {s!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SpecSyntaxError(f"unbalanced parentheses in {s!r}")
    parts.append("".join(cur).strip())
    return parts


_CONTINUATION = re.compile(r"^\s*\w+\s*=")


def group_args(parts: list[str]) -> list[str]:
    """Re-join ``key=value`` fragments onto the spec they belong to.

    ``"haar:N=3", "seed=1", "dft:2"`` becomes ``"haar:N=3,seed=1", "dft:2"``.
    """
    out: list[str] = []
    for part in parts:
        if out and _CONTINUATION.match(part):
            out[-1] += "," + part
        else:
            out.append(part)
    return out


def _kv(spec, body) -> dict:
    out = {}
    if not body:
        return out
    for item in body.split(","):
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            _fail(spec, f"expected key=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _num(spec, params, key, cast, default=None):
    if key not in params:
        if default is None:
            _fail(spec, f"missing {key}=")
        return default
    try:
        return cast(params[key])
    except ValueError:
        _fail(spec, f"bad value for {key}: {params[key]!r}")


def _call(spec):
    """``name(a,b,...)`` -> (name, [a, b, ...]) or None."""
    if "(" in spec and spec.endswith(")"):
        name, _, inner = spec.partition("(")
        return name.strip(), split_top_level(inner[:-1])
    return None


def build_pair(spec: str) -> P.TransformPair:
    spec = spec.strip()
    call = _call(spec)
    if call:
        name, args = call
        if name == "tensor":
            args = group_args(args)
            if len(args) != 2:
                _fail(spec, "tensor takes two specs")
            return P.tensor_pair(build_pair(args[0]), build_pair(args[1]))
        if name == "rescale":
            scale = [a for a in args[-2:] if re.match(r"^\s*[ab]\s*=", a)]
            inner = group_args(args[:len(args) - len(scale)])
            if len(scale) != 2 or len(inner) != 1:
                _fail(spec, "rescale takes a spec plus a=, b=")
            kv = _kv(spec, ",".join(scale))
            return P.rescale_measures(build_pair(inner[0]), _num(spec, kv, "a", float),
                                      _num(spec, kv, "b", float))
        _fail(spec, f"unknown pair constructor {name!r}")
    name, _, body = spec.partition(":")
    if name == "file":
        if not body:
            _fail(spec, "missing path")
        return P.load_pair(body)
    if name in ("dft", "identity"):
        try:
            n = int(body)
        except ValueError:
            _fail(spec, "expected an integer size")
        if n < 1:
            _fail(spec, "size must be positive")
        return P.dft_pair(n) if name == "dft" else P.identity_pair(n)
    if name not in ("fourier", "haar"):
        _fail(spec, f"unknown pair kind {name!r}")
    kv = _kv(spec, body)
    if name == "fourier":
        return P.sampled_fourier_pair(_num(spec, kv, "L", float), _num(spec, kv, "M", int))
    n = _num(spec, kv, "N", int)
    if n < 1:
        _fail(spec, "N must be positive")
    return P.haar_pair(n, _num(spec, kv, "seed", int))


def build_state(spec: str, pair: P.TransformPair) -> St.DensityMatrix:
    """Build the state named by ``spec`` on the source space of ``pair``."""
    spec = spec.strip()
    space = pair.source
    n = space.dim
    call = _call(spec)
    if call:
        name, args = call
        args = group_args(args)
        if name != "tensor" or len(args) != 2:
            _fail(spec, "only tensor(SPEC,SPEC) takes arguments")
        if len(pair.factors) != 2:
            _fail(spec, "a tensor state needs a tensor pair")
        a = build_state(args[0], pair.factors[0])
        b = build_state(args[1], pair.factors[1])
        return St.tensor_state(a, b)
    name, _, body = spec.partition(":")
    if name not in ("maxmixed", "pure", "mixed", "gibbs"):
        _fail(spec, f"unknown state kind {name!r}")
    kv = _kv(spec, body)
    if name == "maxmixed":
        return St.maximally_mixed(space)
    if name == "pure":
        if "k" in kv:
            k = _num(spec, kv, "k", int)
            if not 0 <= k < n:
                _fail(spec, f"k must lie in [0, {n - 1}]")
            return St.basis_state(k, space)
        return St.random_density(n, 1, _num(spec, kv, "seed", int), space)
    if name == "mixed":
        rank = _num(spec, kv, "rank", int, n)
        if not 1 <= rank <= n:
            _fail(spec, f"rank must lie in [1, {n}]")
        return St.random_density(n, rank, _num(spec, kv, "seed", int), space)
    if name == "gibbs":
        beta = _num(spec, kv, "beta", float)
        if not beta > 0:
            _fail(spec, "beta must be positive")
        ham = kv.get("ham", "random")
        if ham == "osc":
            from .scenarios import oscillator_hamiltonian

            w = space.weights
            if not np.allclose(w, w[0], rtol=1e-12, atol=0):
                _fail(spec, "ham=osc needs a uniform grid source")
            H = oscillator_hamiltonian(float(w.sum()), n)
        elif ham == "random":
            H = St.random_hermitian(n, _num(spec, kv, "seed", int, 0))
        else:
            _fail(spec, f"unknown Hamiltonian {ham!r}")
        return St.make_gibbs(H, beta, space)
    _fail(spec, f"unknown state kind {name!r}")


_STATE_KINDS = {"maxmixed", "pure", "mixed", "full", "gibbs"}
_PAIR_KINDS = {"haar", "dft", "identity", "fourier"}


def model_spec(model: str, dim: int, seed: int) -> str:
    """Turn a seedless ensemble model such as ``"haar"`` or ``"mixed:rank=3"`` into a spec."""
    name, _, body = model.strip().partition(":")
    kv = _kv(model, body)
    if name in _PAIR_KINDS:
        if name == "haar":
            return f"haar:N={dim},seed={seed}"
        if name == "fourier":
            return f"fourier:L={_num(model, kv, 'L', float, float(dim))!r},M={dim}"
        return f"{name}:{dim}"
    if name in _STATE_KINDS:
        if name == "maxmixed":
            return "maxmixed"
        if name == "pure":
            return f"pure:k={kv['k']}" if "k" in kv else f"pure:seed={seed}"
        if name == "full":
            return f"mixed:rank={dim},seed={seed}"
        if name == "mixed":
            return f"mixed:rank={kv.get('rank', dim)},seed={seed}"
        return f"gibbs:beta={_num(model, kv, 'beta', float)!r},seed={seed}"
    _fail(model, f"unknown ensemble model {name!r}")
