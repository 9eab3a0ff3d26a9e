r"""Band-limited observables on the 2n-torus.

A symbol is a finite Fourier series on T^{2n} = (R/Z)^{2n},

    f(x, xi) = sum_{l,m in Z^n} fhat(l, m) exp(2 pi i (<l, x> + <m, xi>)),

stored spectrally as a map (l, m) -> fhat(l, m) with max-norm truncation
|l|_inf, |m|_inf <= L.  Storing coefficients (never grid samples) keeps
quantization and trace identities exact, with no aliasing decisions.

Conventions:
    * coordinates w = (x, xi) with components in [0, 1);
    * the Poisson bracket is {f, g} = sum_j (d_xi_j f d_x_j g - d_x_j f d_xi_j g);
    * a symbol is "real" when fhat(-l, -m) = conj(fhat(l, m)) for all indices,
      i.e. it takes real values; this is detected by a direct coefficient scan.

Symbols are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TorusPoint",
    "TorusSymbol",
    "scottish_flag",
    "cos_x",
    "cos_xi",
    "constant",
    "poisson_bracket",
    "random_band_limited",
    "builtin_symbol",
    "symbol_to_doc",
    "symbol_from_doc",
    "symbol_digest",
]

# coefficients below this modulus are dropped after arithmetic (pure
# bookkeeping, far below any test tolerance)
PRUNE_MODULUS = 1e-300

Index = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class TorusPoint:
    """A point w = (x, xi) on T^{2n}, components reduced mod 1."""

    x: tuple[float, ...]
    xi: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.xi):
            raise ValueError("x and xi must have the same dimension")
        object.__setattr__(self, "x", tuple(float(v) % 1.0 for v in self.x))
        object.__setattr__(self, "xi", tuple(float(v) % 1.0 for v in self.xi))

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def of(cls, x, xi) -> "TorusPoint":
        """Build a point from scalars (n=1) or sequences."""
        if np.isscalar(x):
            x = (x,)
        if np.isscalar(xi):
            xi = (xi,)
        return cls(tuple(x), tuple(xi))


def _normalize_coeffs(n: int, coeffs) -> dict[Index, complex]:
    out: dict[Index, complex] = {}
    for (l, m), c in coeffs.items():
        l = tuple(int(v) for v in l)
        m = tuple(int(v) for v in m)
        if len(l) != n or len(m) != n:
            raise ValueError(f"index {(l, m)} does not match dimension n={n}")
        c = complex(c)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)):
            raise ValueError(f"non-finite amplitude at index {(l, m)}")
        if abs(c) < PRUNE_MODULUS:
            continue
        out[(l, m)] = out.get((l, m), 0j) + c
    return {k: v for k, v in out.items() if abs(v) >= PRUNE_MODULUS}


@dataclass(frozen=True)
class TorusSymbol:
    """Finitely supported Fourier series on T^{2n}.

    ``coeffs`` maps (l, m) index pairs (tuples of n ints each) to complex
    amplitudes.  ``truncation_radius`` bounds |l|_inf and |m|_inf of every
    stored index; operations that grow support (products, brackets) grow the
    radius and never silently drop terms.
    """

    n: int
    coeffs: dict[Index, complex] = field(default_factory=dict)
    truncation_radius: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")
        clean = _normalize_coeffs(self.n, self.coeffs)
        radius = 0
        for l, m in clean:
            radius = max(radius, max(map(abs, l), default=0), max(map(abs, m), default=0))
        radius = max(radius, int(self.truncation_radius))
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "truncation_radius", radius)

    # -- evaluation ---------------------------------------------------------

    def eval(self, w: TorusPoint) -> complex:
        """Direct Fourier sum at a single point; exact for the truncated series."""
        if w.n != self.n:
            raise ValueError(f"point dimension {w.n} != symbol dimension {self.n}")
        x = np.array(w.x)
        xi = np.array(w.xi)
        total = 0j
        for (l, m), c in self.coeffs.items():
            total += c * np.exp(2j * np.pi * (np.dot(l, x) + np.dot(m, xi)))
        return complex(total)

    def eval_points(self, x, xi) -> np.ndarray:
        """Vectorized evaluation; ``x`` and ``xi`` have shape (..., n).

        For n = 1 plain float arrays are accepted and treated as (..., 1).
        """
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if self.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
            xi = xi[..., None]
        out = np.zeros(np.broadcast(x[..., 0], xi[..., 0]).shape, dtype=complex)
        for (l, m), c in self.coeffs.items():
            phase = x @ np.asarray(l, dtype=float) + xi @ np.asarray(m, dtype=float)
            out += c * np.exp(2j * np.pi * phase)
        return out

    def __call__(self, w: TorusPoint) -> complex:
        return self.eval(w)

    # -- structure ----------------------------------------------------------

    def is_real(self, tol: float = 1e-14) -> bool:
        """Coefficient scan for the reality condition fhat(-l,-m) = conj(fhat(l,m))."""
        scale = max((abs(c) for c in self.coeffs.values()), default=1.0)
        atol = tol * max(1.0, scale)
        for (l, m), c in self.coeffs.items():
            neg = (tuple(-v for v in l), tuple(-v for v in m))
            if abs(np.conj(self.coeffs.get(neg, 0j)) - c) > atol:
                return False
        return True

    def conjugate(self) -> "TorusSymbol":
        return TorusSymbol(
            self.n,
            {(tuple(-v for v in l), tuple(-v for v in m)): np.conj(c)
             for (l, m), c in self.coeffs.items()},
        )

    def real_part(self) -> "TorusSymbol":
        return 0.5 * (self + self.conjugate())

    def imag_part(self) -> "TorusSymbol":
        return (self - self.conjugate()) * (-0.5j)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if np.isscalar(other):
            other = constant(self.n, other)
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        merged = dict(self.coeffs)
        for k, c in other.coeffs.items():
            merged[k] = merged.get(k, 0j) + c
        return TorusSymbol(self.n, merged)

    __radd__ = __add__

    def __neg__(self):
        return TorusSymbol(self.n, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if np.isscalar(other):
            other = constant(self.n, other)
        return self + (-other)

    def __mul__(self, other):
        if np.isscalar(other):
            return TorusSymbol(self.n, {k: c * other for k, c in self.coeffs.items()})
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        # pointwise product = coefficient convolution
        out: dict[Index, complex] = {}
        for (l1, m1), c1 in self.coeffs.items():
            for (l2, m2), c2 in other.coeffs.items():
                key = (tuple(a + b for a, b in zip(l1, l2)),
                       tuple(a + b for a, b in zip(m1, m2)))
                out[key] = out.get(key, 0j) + c1 * c2
        return TorusSymbol(self.n, out)

    __rmul__ = __mul__

    def sup_bound(self) -> float:
        """sum |fhat| — an upper bound for sup |f|."""
        return float(sum(abs(c) for c in self.coeffs.values()))


# -- constructors -----------------------------------------------------------


def constant(n: int, value: complex) -> TorusSymbol:
    return TorusSymbol(n, {((0,) * n, (0,) * n): complex(value)})


def cos_x() -> TorusSymbol:
    """f(x, xi) = cos(2 pi x) on T^2."""
    return TorusSymbol(1, {((1,), (0,)): 0.5, ((-1,), (0,)): 0.5})


def cos_xi() -> TorusSymbol:
    """f(x, xi) = cos(2 pi xi) on T^2."""
    return TorusSymbol(1, {((0,), (1,)): 0.5, ((0,), (-1,)): 0.5})


def scottish_flag() -> TorusSymbol:
    """f(x, xi) = cos(2 pi x) + i cos(2 pi xi), the Scottish flag observable."""
    return cos_x() + cos_xi() * 1j


_BUILTINS = {
    "scottish_flag": scottish_flag,
    "cos_x": cos_x,
    "cos_xi": cos_xi,
}

# loose spellings accepted on the command line
_ALIASES = {
    "f(x)=cos(2pix)": "cos_x",
    "g(xi)=cos(2pixi)": "cos_xi",
    "cos(2pix)": "cos_x",
    "cos(2pixi)": "cos_xi",
}


def builtin_symbol(name: str) -> TorusSymbol:
    key = name.strip().lower()
    squashed = key.replace(" ", "")
    if key in _BUILTINS:
        return _BUILTINS[key]()
    if squashed in _ALIASES:
        return _BUILTINS[_ALIASES[squashed]]()
    raise KeyError(f"unknown builtin symbol {name!r}; known: {sorted(_BUILTINS)}")


def random_band_limited(n: int, radius: int, rng: np.random.Generator,
                        terms: int = 6, real: bool = False) -> TorusSymbol:
    """Random symbol with ``terms`` coefficient pairs inside the given radius."""
    coeffs: dict[Index, complex] = {}
    for _ in range(terms):
        l = tuple(int(v) for v in rng.integers(-radius, radius + 1, size=n))
        m = tuple(int(v) for v in rng.integers(-radius, radius + 1, size=n))
        c = complex(rng.standard_normal(), rng.standard_normal())
        coeffs[(l, m)] = coeffs.get((l, m), 0j) + c
        if real:
            neg = (tuple(-v for v in l), tuple(-v for v in m))
            coeffs[neg] = coeffs.get(neg, 0j) + np.conj(c)
    return TorusSymbol(n, coeffs)


# -- Poisson bracket --------------------------------------------------------


def poisson_bracket(f: TorusSymbol, g: TorusSymbol) -> TorusSymbol:
    r"""Exact bracket {f, g} = sum_j (d_xi_j f d_x_j g - d_x_j f d_xi_j g).

    Fourier differentiation turns each term into a coefficient convolution:
    the (l1+l2, m1+m2) amplitude picks up
    -4 pi^2 sum_j (m1_j l2_j - l1_j m2_j) fhat(l1,m1) ghat(l2,m2).
    The result radius is the sum of the input radii.
    """
    if f.n != g.n:
        raise ValueError("dimension mismatch in Poisson bracket")
    out: dict[Index, complex] = {}
    four_pi2 = 4.0 * np.pi ** 2
    for (l1, m1), c1 in f.coeffs.items():
        for (l2, m2), c2 in g.coeffs.items():
            sym = sum(m1[j] * l2[j] - l1[j] * m2[j] for j in range(f.n))
            if sym == 0:
                continue
            key = (tuple(a + b for a, b in zip(l1, l2)),
                   tuple(a + b for a, b in zip(m1, m2)))
            out[key] = out.get(key, 0j) - four_pi2 * sym * c1 * c2
    return TorusSymbol(f.n, out,
                       truncation_radius=f.truncation_radius + g.truncation_radius)


# -- serialization ----------------------------------------------------------


def symbol_to_doc(f: TorusSymbol) -> dict:
    """JSON-ready document: {"n": n, "coeffs": [[l..., m..., re, im], ...]}."""
    rows = []
    for (l, m), c in sorted(f.coeffs.items()):
        rows.append([*l, *m, float(c.real), float(c.imag)])
    return {"n": f.n, "coeffs": rows}


def symbol_from_doc(doc: dict) -> TorusSymbol:
    if "builtin" in doc:
        return builtin_symbol(doc["builtin"])
    n = int(doc["n"])
    coeffs: dict[Index, complex] = {}
    for row in doc["coeffs"]:
        if len(row) != 2 * n + 2:
            raise ValueError(f"coefficient row must have 2n+2 = {2*n+2} entries, got {len(row)}")
        l = tuple(int(v) for v in row[:n])
        m = tuple(int(v) for v in row[n:2 * n])
        c = complex(float(row[2 * n]), float(row[2 * n + 1]))
        coeffs[(l, m)] = coeffs.get((l, m), 0j) + c
    return TorusSymbol(n, coeffs)


def symbol_digest(f: TorusSymbol) -> str:
    """Short content hash used for provenance in manifests and CSV headers."""
    doc = symbol_to_doc(f)
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
