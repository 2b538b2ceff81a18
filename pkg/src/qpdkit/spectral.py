"""The s-parameterized family of distributions built from one kernel.

Every function here takes a *phase space* object (``SpinPhaseSpace`` or
``CcrPhaseSpace``) that supplies coherent states on a quadrature grid, the
kernel powers Delta^t(xi, eta) and a grid convolution. The order-s symbol of
an operator A is the Husimi symbol <eta|A|eta> smoothed (s > 1) or sharpened
(s < 1) by Delta^{(s-1)/2}; the kernel operators are the same smoothing
applied to coherent projectors.
"""
from __future__ import annotations

import numpy as np

from .errors import QPDError
from .fields import QPDField, SWKernelField
from .linalg import as_matrix, random_hermitian

WEAK_VALUE_FLOOR = 1e-12

DEFAULT_TOLERANCES = {
    "K.1": 1e-10,
    "K.2": 1e-8,
    "K.3": 1e-10,
    "K.4": 1e-8,
    "K.5'": 1e-8,
    "S.1": 1e-10,
    "S.2": 1e-8,
    "S.3": 1e-8,
    "S.4'": 1e-8,
}


class OrthogonalSelection(QPDError):
    category = "weak_value"
    code = 8


def delta_power(space, t: float, xi=None, eta=None) -> np.ndarray:
    """Matrix of Delta^t(xi_a, eta_b); grid nodes by default."""
    return space.kernel(t, xi, eta)


def _is_hermitian(a: np.ndarray) -> bool:
    return np.allclose(a, a.conj().T, atol=1e-12)


def qpd(space, A, s: float, points=None, label: str = ""):
    """Order-s symbol of ``A``.

    Returns a :class:`QPDField` on the grid, or a plain array when
    ``points`` is given.
    """
    a = as_matrix(A)
    t = (s - 1) / 2
    space.check_power(t)
    husimi = space.husimi(a)
    if _is_hermitian(a):
        husimi = husimi.real
    if s == 1 and points is None:
        vals = husimi
    else:
        vals = space.convolve(husimi, t, points)
    if points is not None:
        return vals
    f = QPDField(s, space.grid, vals, label=label, backend=space.label)
    f.info["normalization"] = float(np.real(f.integral()))
    return f


def transform(space, field: QPDField, s_to: float) -> QPDField:
    """Move a field from order ``field.s`` to order ``s_to`` by Delta^{(s_to - s)/2}."""
    t = (s_to - field.s) / 2
    space.check_power(t)
    vals = space.convolve(field.values, t)
    f = QPDField(s_to, field.grid, vals, label=field.label, backend=field.backend)
    f.info["normalization"] = float(np.real(f.integral()))
    return f


def sw_kernel_field(space, s: float, points=None) -> SWKernelField:
    """Kernel operators int dmu(eta) |eta><eta| Delta^{(s-1)/2}(xi, eta).

    Tr[A K(xi)] is the order-s symbol of A; at s = 1 each K(xi) is the
    coherent projector at xi.
    """
    t = (s - 1) / 2
    space.check_power(t)
    pts = space.points if points is None else points
    vecs = space.coherent_states()
    wk = space.kernel(t, pts, space.points) * space.weights
    ops = np.einsum("pk,ki,kj->pij", wk, vecs, vecs.conj())
    return SWKernelField(s, np.asarray(pts), ops)


def symbols_from_kernels(field: SWKernelField, A) -> np.ndarray:
    return np.einsum("ij,kji->k", as_matrix(A), field.operators)


def _check(name, dev, tol):
    dev = float(dev)
    return {"name": name, "max_abs_deviation": dev, "tolerance": tol, "pass": bool(dev < tol)}


def axiom_report(space, field_s: SWKernelField, field_minus_s: SWKernelField,
                 n_pairs: int = 20, seed: int = 0, tolerances: dict | None = None) -> list[dict]:
    """Deviations from the kernel axioms for a pair of opposite-order fields.

    (K.1) self-adjointness, (K.2) covariance over the backend's fixed group
    samples, (K.3) unit trace, (K.4) completeness, (K.5') duality with the
    band-limited delta; then the symbol-level (S.1)-(S.3) and the trace
    duality (S.4') on random operators.
    """
    tol = dict(DEFAULT_TOLERANCES, **(tolerances or {}))
    if not np.isclose(field_s.s, -field_minus_s.s):
        raise ValueError(f"fields must have opposite orders, got {field_s.s} and {field_minus_s.s}")
    fields = (field_s, field_minus_s)
    w = space.weights
    dim = space.dim
    eye = np.eye(dim)

    herm = max(np.max(np.abs(f.operators - f.operators.conj().transpose(0, 2, 1))) for f in fields)
    trace = max(np.max(np.abs(np.trace(f.operators, axis1=1, axis2=2) - 1)) for f in fields)
    complete = max(np.max(np.abs(np.einsum("k,kij->ij", w, f.operators) - eye)) for f in fields)

    cov = 0.0
    for g in space.group_elements():
        U = space.unitary(g)
        moved = space.act(g, space.points)
        for f in fields:
            direct = sw_kernel_field(space, f.s, moved).operators
            conj = U @ f.operators @ U.conj().T
            cov = max(cov, np.max(np.abs(direct - conj)))

    pair = np.einsum("aij,bji->ab", field_s.operators, field_minus_s.operators)
    dual = np.max(np.abs(pair - space.kernel(0.0)))

    rng = np.random.default_rng(seed)
    s1 = s2 = s3 = s4 = 0.0
    groups = space.group_elements()
    for i in range(n_pairs):
        A = random_hermitian(dim, rng) / np.sqrt(dim)
        B = random_hermitian(dim, rng) / np.sqrt(dim)
        C = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2 * dim)
        for f in fields:
            fA = symbols_from_kernels(f, A)
            s1 = max(s1, np.max(np.abs(fA.imag)),
                     np.max(np.abs(symbols_from_kernels(f, C.conj().T) - symbols_from_kernels(f, C).conj())))
            s3 = max(s3, abs(np.sum(w * symbols_from_kernels(f, C)) - np.trace(C)))
        g = groups[i % len(groups)]
        U = space.unitary(g)
        moved = sw_kernel_field(space, field_s.s, space.act(g, space.points))
        s2 = max(s2, np.max(np.abs(symbols_from_kernels(field_s, U.conj().T @ A @ U)
                                    - symbols_from_kernels(moved, A))))
        lhs = np.sum(w * symbols_from_kernels(field_s, A) * symbols_from_kernels(field_minus_s, B))
        s4 = max(s4, abs(lhs - np.trace(A @ B)))

    return [
        _check("K.1", herm, tol["K.1"]),
        _check("K.2", cov, tol["K.2"]),
        _check("K.3", trace, tol["K.3"]),
        _check("K.4", complete, tol["K.4"]),
        _check("K.5'", dual, tol["K.5'"]),
        _check("S.1", s1, tol["S.1"]),
        _check("S.2", s2, tol["S.2"]),
        _check("S.3", s3, tol["S.3"]),
        _check("S.4'", s4, tol["S.4'"]),
    ]


def weak_value(A, pre, post, floor: float = WEAK_VALUE_FLOOR) -> complex:
    """<post|A|pre> / <post|pre>."""
    pre = np.asarray(pre, dtype=complex)
    post = np.asarray(post, dtype=complex)
    overlap = np.vdot(post, pre)
    if abs(overlap) < floor:
        raise OrthogonalSelection(f"pre- and post-selected states nearly orthogonal (|overlap| = {abs(overlap):.2e})")
    return complex(np.vdot(post, as_matrix(A) @ pre) / overlap)


def qpd_via_weak_values(space, A, s: float, xi) -> np.ndarray:
    """Order-s symbol at ``xi`` assembled from weak values.

    The Husimi symbol at a node zeta is the Delta-weighted average of weak
    values with pre-selection zeta and post-selection eta over the grid,
    int dmu(eta) W_{zeta,eta}(A) |K(zeta,eta)|^2; the result is then carried
    to order s with Delta^{(s-1)/2}. Pairs with |K| below the floor carry
    weight |K|^2 ~ 0 and are skipped.
    """
    a = as_matrix(A)
    t = (s - 1) / 2
    space.check_power(t)
    vecs = space.coherent_states()
    w = space.weights
    post_pre = vecs.conj() @ vecs.T             # [eta, zeta] -> <eta|zeta>
    num = vecs.conj() @ a @ vecs.T              # [eta, zeta] -> <eta|A|zeta>
    ok = np.abs(post_pre) >= WEAK_VALUE_FLOOR
    weak = np.where(ok, num / np.where(ok, post_pre, 1.0), 0.0)
    husimi = np.sum(w[:, None] * weak * np.abs(post_pre) ** 2, axis=0)
    xi = np.atleast_1d(xi) if space.name == "ccr" else np.atleast_2d(xi)
    return (space.kernel(t, xi, space.points) * w) @ husimi
