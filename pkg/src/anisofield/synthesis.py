"""Random generation: exact fractional Gaussian noise / fractional
Brownian motion in 1D, and approximate anisotropic fields in 2D.

The 1D route embeds the fGn autocovariance in a circulant matrix
(Davies-Harte / Dietrich-Newsam) whose FFT diagonalization gives an exact
Gaussian sample in O(n log n).  The 2D route discretizes the spectral
representation of the field: complex white noise is shaped by the square
root of the density on a (2M) x (2M) frequency grid and pushed through one
inverse-style FFT; the real part, re-anchored at the origin, is the field
on the (M+1) x (M+1) unit grid.

All generators are pure functions of (parameters, seed).  Seeds go through
numpy's SeedSequence / PCG64 machinery, and replicate i of a Monte Carlo
batch draws from the stream spawned with key (i,), so output never depends
on scheduling and is stable when the replicate count changes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as sp_fft

from .errors import EmbeddingNotPSD
from .spectral import SpectralModel, density

__all__ = [
    "SampledPath",
    "GridField2D",
    "derived_stream",
    "fgn_autocovariance",
    "fgn_exact",
    "fbm_path",
    "afb_sra",
    "afb_sra_direct",
    "write_field",
    "read_field",
    "field_to_csv",
    "write_path_csv",
    "read_path_csv",
]

# Eigenvalues of the embedding below -_CLAMP_REL * max are treated as
# float noise and clamped; anything more negative triggers a doubling.
_CLAMP_REL = 1e-8
_MAX_DOUBLINGS = 2

_NO_SEED = 0xFFFFFFFFFFFFFFFF  # header sentinel for "seed unknown"


@dataclass(frozen=True)
class SampledPath:
    """Process values at k/N for k = 0..N, plus optional ground truth."""

    values: np.ndarray
    hurst_true: float | None = None

    @property
    def n_steps(self) -> int:
        return self.values.size - 1

    @property
    def step(self) -> float:
        return 1.0 / self.n_steps


@dataclass(frozen=True)
class GridField2D:
    """(M+1) x (M+1) samples of a field on the unit grid {(k1/M, k2/M)}."""

    values: np.ndarray
    params_true: tuple[float, float] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError("field values must be a square matrix")

    @property
    def grid_size(self) -> int:
        return self.values.shape[0] - 1


def derived_stream(base_seed: int, *key: int) -> np.random.SeedSequence:
    """Child stream for one replicate; stable under growing batch sizes."""
    return np.random.SeedSequence(base_seed, spawn_key=tuple(key))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def fgn_autocovariance(H: float, lags) -> np.ndarray:
    """Autocovariance of unit-step fGn: (|k+1|^2H - 2|k|^2H + |k-1|^2H)/2."""
    k = np.asarray(lags, dtype=float)
    two_h = 2.0 * H
    return 0.5 * (
        np.abs(k + 1.0) ** two_h
        - 2.0 * np.abs(k) ** two_h
        + np.abs(k - 1.0) ** two_h
    )


@lru_cache(maxsize=32)
def _embedding_sqrt(H: float, n: int) -> np.ndarray:
    """sqrt(eigenvalues / m) of the circulant embedding for n fGn values.

    The first row periodizes the autocovariance over m = 2(n-1) points.
    fGn embeddings are nonnegative definite in theory; tiny negative
    eigenvalues are clamped and real failures retried on a doubled grid.
    """
    size = n
    for _ in range(_MAX_DOUBLINGS + 1):
        r = fgn_autocovariance(H, np.arange(size))
        row = np.concatenate([r, r[size - 2 : 0 : -1]])
        lam = np.fft.fft(row).real
        top = lam.max()
        floor = lam.min()
        if floor >= -_CLAMP_REL * top:
            lam = np.maximum(lam, 0.0)
            out = np.sqrt(lam / lam.size)
            out.flags.writeable = False
            return out
        size = 2 * size - 1  # doubles the embedding size 2(size-1)
    raise EmbeddingNotPSD(
        f"negative embedding eigenvalues persist for H={H} after "
        f"{_MAX_DOUBLINGS} doublings"
    )


def fgn_exact(H: float, n: int, seed) -> np.ndarray:
    """Exact sample of n stationary fractional Gaussian noise increments.

    The covariance of the output is the fGn autocovariance itself, not an
    approximation: the circulant eigen-decomposition shapes complex white
    noise whose transformed real part has exactly the embedded covariance.
    """
    if not 0.0 < H < 1.0:
        raise ValueError("H must lie in (0, 1)")
    if n < 2:
        raise ValueError("need n >= 2 samples")
    amp = _embedding_sqrt(float(H), int(n))
    rng = _rng(seed)
    z = rng.standard_normal((amp.size, 2)).view(np.complex128)[:, 0]
    spectrum = np.fft.fft(amp * z)
    return np.ascontiguousarray(spectrum.real[:n])


def fbm_path(H: float, N: int, seed) -> SampledPath:
    """Fractional Brownian motion sampled at k/N, k = 0..N, with X(0) = 0.

    Cumulative sums of exact fGn scaled by N^{-H}, so Var X(k/N) = (k/N)^2H
    holds in law exactly.
    """
    fgn = fgn_exact(H, N, seed)
    values = np.empty(N + 1)
    values[0] = 0.0
    np.cumsum(fgn, out=values[1:])
    values[1:] *= float(N) ** (-H)
    values.flags.writeable = False
    return SampledPath(values=values, hurst_true=float(H))


def _fft_order_frequencies(M: int) -> np.ndarray:
    """Frequency indices n in FFT storage order, covering -M+1..M.

    Index M holds the Nyquist term; n = +M and n = -M give identical
    complex exponentials on the half-integer grid, so the wrap is exact.
    """
    n = np.arange(2 * M)
    return np.where(n <= M, n, n - 2 * M)


@lru_cache(maxsize=8)
def _sra_amplitude(model: SpectralModel, M: int) -> np.ndarray:
    """Square root of the density on the (2M) x (2M) frequency grid.

    Frequencies are pi * n for n in -M+1..M on both axes (FFT storage
    order); the origin amplitude is set to zero.
    """
    n = _fft_order_frequencies(M).astype(float)
    xi = np.pi * n
    pts = np.stack(np.broadcast_arrays(xi[:, None], xi[None, :]), axis=-1)
    flat = pts.reshape(-1, 2)
    nonzero = np.any(flat != 0.0, axis=1)
    vals = np.zeros(flat.shape[0])
    vals[nonzero] = density(model, flat[nonzero])
    g = np.sqrt(vals).reshape(2 * M, 2 * M)
    g.flags.writeable = False
    return g


def _draw_complex_noise(rng: np.random.Generator, M: int) -> np.ndarray:
    """(2M) x (2M) i.i.d. complex normals, unit variance per component."""
    return rng.standard_normal((2 * M, 2 * M, 2)).view(np.complex128)[..., 0]


def _field_params(model: SpectralModel) -> tuple[float, float]:
    return (model.index.h_h, model.index.h_v)


def _power_of_two(M: int) -> bool:
    return M >= 2 and (M & (M - 1)) == 0


def afb_sra(model: SpectralModel, M: int, seed) -> GridField2D:
    """Approximate anisotropic fractional Brownian field on the unit grid.

    Shapes (2M)^2 complex white-noise draws by the density square root on
    the frequency grid pi * {-M+1..M}^2 and evaluates the discretized
    spectral sum by one 2M x 2M FFT, in O(M^2 log M).  The output is the
    real part anchored so that the origin value is exactly zero.  The
    overall amplitude carries an arbitrary calibration; every downstream
    estimator is invariant under global scaling.
    """
    if model.dim != 2:
        raise ValueError("field synthesis requires a 2-d model")
    if not _power_of_two(M) or M < 4:
        raise ValueError("grid size must be a power of two >= 4")
    g = _sra_amplitude(model, int(M))
    rng = _rng(seed)
    z = _draw_complex_noise(rng, M)
    y = sp_fft.fft2(z * g)
    block = np.pi * y[: M + 1, : M + 1].real
    values = block - block[0, 0]
    values[0, 0] = 0.0
    values.flags.writeable = False
    return GridField2D(
        values=values,
        params_true=_field_params(model),
        seed=seed if isinstance(seed, int) else None,
    )


def afb_sra_direct(model: SpectralModel, M: int, seed) -> GridField2D:
    """Reference evaluation of the discretized spectral sum, term by term.

    Same noise draw and frequency grid as :func:`afb_sra` but the double
    sum over n1, n2 in -M+1..M is evaluated literally, at O(M^4) cost.
    Intended for small M as an oracle for the FFT path.
    """
    if model.dim != 2:
        raise ValueError("field synthesis requires a 2-d model")
    if not _power_of_two(M) or M < 4:
        raise ValueError("grid size must be a power of two >= 4")
    g = _sra_amplitude(model, int(M))
    rng = _rng(seed)
    z = _draw_complex_noise(rng, M)
    weighted = z * g
    n = _fft_order_frequencies(M)
    k = np.arange(M + 1)
    phase = np.exp(-2j * np.pi * np.outer(n, k) / (2 * M))
    y = np.pi * np.einsum("ab,ak,bl->kl", weighted, phase, phase)
    values = y.real - y[0, 0].real
    values[0, 0] = 0.0
    values.flags.writeable = False
    return GridField2D(
        values=values,
        params_true=_field_params(model),
        seed=seed if isinstance(seed, int) else None,
    )


# --- field file format ------------------------------------------------------
#
# Binary header: magic "AFB1", u32 grid size M, f64 h_h, f64 h_v, u64 seed,
# all little-endian, followed by row-major f64 field values.

_HEADER = struct.Struct("<4sIddQ")


def write_field(field: GridField2D, path) -> None:
    """Serialize a field to the AFB1 binary format."""
    if field.params_true is not None:
        h_h, h_v = field.params_true
    else:
        h_h = h_v = float("nan")
    seed = field.seed if field.seed is not None else _NO_SEED
    header = _HEADER.pack(b"AFB1", field.grid_size, h_h, h_v, seed)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_field(path) -> GridField2D:
    """Read a field written by :func:`write_field`."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        magic, M, h_h, h_v, seed = _HEADER.unpack(raw)
        if magic != b"AFB1":
            raise ValueError(f"{path}: not an AFB1 field file")
        count = (M + 1) * (M + 1)
        data = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
    values = data.reshape(M + 1, M + 1).copy()
    values.flags.writeable = False
    params = None if np.isnan(h_h) or np.isnan(h_v) else (h_h, h_v)
    return GridField2D(
        values=values,
        params_true=params,
        seed=None if seed == _NO_SEED else int(seed),
    )


def field_to_csv(field: GridField2D, path) -> None:
    """Plain CSV dump of the field values, for debugging."""
    np.savetxt(path, field.values, delimiter=",", fmt="%.17g")


def write_path_csv(path_obj: SampledPath, path, seed: int | None = None) -> None:
    """Two-column CSV (t, value) with ground truth carried in comments."""
    n = path_obj.n_steps
    with open(path, "w", newline="") as fh:
        if path_obj.hurst_true is not None:
            fh.write(f"# hurst = {path_obj.hurst_true!r}\n")
        if seed is not None:
            fh.write(f"# seed = {seed}\n")
        fh.write("t,value\n")
        for k, val in enumerate(path_obj.values):
            fh.write(f"{k / n!r},{float(val)!r}\n")


def read_path_csv(path) -> tuple[SampledPath, int | None]:
    """Read a path written by :func:`write_path_csv`; returns (path, seed)."""
    hurst = None
    seed = None
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line.lstrip("#").partition("=")
                key = key.strip().lower()
                if key == "hurst":
                    hurst = float(val)
                elif key == "seed":
                    seed = int(val)
                continue
            if line.lower().startswith("t,"):
                continue
            values.append(float(line.split(",")[-1]))
    arr = np.asarray(values)
    arr.flags.writeable = False
    return SampledPath(values=arr, hurst_true=hurst), seed
