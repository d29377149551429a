"""Heat kernels by inverse FFT of e^{-t psi} on a grid."""

import itertools
import logging
from typing import Callable, Optional

import numpy as np
from scipy.special import zeta

from ..convolve.fourier import inverse
from ..convolve.grid import CLIP_THRESHOLD, DensityField, Grid
from ..core.exceptions import ConfigException, InsufficientDecay
from ..models.levy_model import LevyModel
from ..symbol.exponent import restricted_phi
from .exponent_grid import GridExponent, grid_exponent, small_exponent
from .field import Atom, KernelField

logger = logging.getLogger(__name__)

NYQUIST_FLOOR = 1e-12
IMAGE_SHELLS = 8
SMALL_GRID_POINTS = 2**12
MAX_SMALL_GRID_POINTS = 2**16
SMALL_GRID_RADII = 32.0


def nyquist_shell(values: np.ndarray) -> np.ndarray:
    """Entries with some frequency index at the Nyquist position."""
    n = values.shape[0]
    mask = np.zeros(values.shape, dtype=bool)
    for axis in range(values.ndim):
        index = [slice(None)] * values.ndim
        index[axis] = n // 2
        mask[tuple(index)] = True
    return values[mask]


def check_decay(transform: np.ndarray, grid: Grid, label: str) -> None:
    """Raise InsufficientDecay if |transform| on the Nyquist shell exceeds 1e-12 of its peak."""
    peak = np.abs(transform).max()
    edge = np.abs(nyquist_shell(transform)).max()
    if peak > 0 and edge > NYQUIST_FLOOR * peak:
        raise InsufficientDecay(
            f"{label}: transform is {edge / peak:.2e} of its peak at the Nyquist frequency "
            f"{np.pi / grid.spacing:.4g}; refine the spacing (N={grid.n}, L={grid.length})"
        )


def stable_images(model: LevyModel, t: float, grid: Grid) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    """First-order periodization error t sum_{k != 0} nu(x + 2Lk) of heavy-tailed kernels.

    In d = 1 the image sums of a stable density are Hurwitz zeta values; in
    higher dimensions the lattice shells |k_i| <= 8 are summed explicitly.
    """
    if model.family != "stable" or model.kappa > 0:
        return None
    period = 2.0 * grid.length
    if model.d == 1:
        g_plus, g_minus = model.g(np.array([[1.0], [-1.0]]))
        s = 1.0 + model.alpha

        def correction(points: np.ndarray) -> np.ndarray:
            q = points[:, 0] / period
            return t * period**-s * (g_plus * zeta(s, 1.0 + q) + g_minus * zeta(s, 1.0 - q))

        return correction

    shifts = np.array(
        [k for k in itertools.product(range(-IMAGE_SHELLS, IMAGE_SHELLS + 1), repeat=model.d) if any(k)],
        dtype=float,
    )

    def correction(points: np.ndarray) -> np.ndarray:
        total = np.zeros(len(points))
        for shift in shifts:
            total += model.nu(points + period * shift[None, :])
        return t * total

    return correction


def invert(transform: np.ndarray, grid: Grid, label: str) -> DensityField:
    """Inverse DFT clipped at CLIP_THRESHOLD * max; larger negatives raise AliasingError."""
    check_decay(transform, grid, label)
    return DensityField(grid, inverse(transform, grid, label)).clipped(threshold=CLIP_THRESHOLD)


def heat_kernel_spectral(
    model: LevyModel,
    t: float,
    grid: Grid,
    exponent: Optional[GridExponent] = None,
) -> KernelField:
    """Inverse discrete Fourier transform of e^{-t psi} on the dual grid.

    For a finite Levy measure without Gaussian part the atom e^{-t|nu|} at
    t * b~ is removed spectrally and returned separately.

    Args:
        model: Levy model
        t: Time > 0
        grid: Target grid
        exponent: Precomputed GridExponent (valid for times >= its build time)

    Returns:
        KernelField with provenance "spectral"

    Raises:
        InsufficientDecay: If e^{-t psi} has not decayed at the Nyquist shell
        AliasingError: If the inverted field has significant negative values
    """
    if t <= 0:
        raise ConfigException(f"Time must be positive, got {t}")
    exponent = exponent if exponent is not None else grid_exponent(model, grid, t)
    grid.check_same(exponent.grid)
    transform = np.exp(-t * exponent.values)
    atom = None
    if exponent.jump_mass is not None and not model.elliptic:
        weight = float(np.exp(-t * exponent.jump_mass))
        location = t * exponent.atom_drift
        mesh = grid.frequency_mesh()
        phase = np.exp(1j * sum(location[i] * mesh[i] for i in range(grid.d)))
        transform = transform - weight * phase
        atom = Atom(weight=weight, location=location)
    field = invert(transform, grid, f"p_t for {model.family}")
    kernel = KernelField(
        field=field,
        t=t,
        provenance="spectral",
        atom=atom,
        image_correction=stable_images(model, t, grid),
    )
    if not kernel.mass_ok:
        logger.warning(f"Spectral kernel mass {kernel.mass:.10g} deviates from 1 (t={t})")
    logger.debug(f"Spectral kernel {model.family} t={t} on N={grid.n}, L={grid.length} ({exponent.method})")
    return kernel


def small_jump_grid(model: LevyModel, r: float, t: float) -> Grid:
    """d = 1 grid of half-width 32 max(r, sqrt(t A)) fine enough for e^{-t Phi_small} to decay."""
    if model.d != 1:
        raise ConfigException("Small-jump kernels are computed in d = 1")
    length = SMALL_GRID_RADII * max(r, 4.0 * np.sqrt(t * model.A[0, 0]))
    n = SMALL_GRID_POINTS
    while n < MAX_SMALL_GRID_POINTS:
        nyquist = np.pi * n / (2.0 * length)
        real = restricted_phi(model, np.array([nyquist]), 0.0, r, compensation=r)[0].real
        real += model.A[0, 0] * nyquist**2
        if t * real > -np.log(NYQUIST_FLOOR):
            break
        n *= 2
    return Grid(d=1, n=n, length=length)


def small_jump_kernel(
    model: LevyModel,
    r: float,
    t: float,
    grid: Optional[Grid] = None,
    include_gaussian: bool = False,
) -> KernelField:
    """Kernel of exp(t int_{|y|<r} (e^{i xi y} - 1 - i xi y) nu(y) dy) (d = 1).

    With `include_gaussian` the factor e^{-t <xi, A xi>} is applied in the
    same inversion, giving lambda_t = small-jump kernel * g_t.

    Raises:
        ConfigException: If d != 1, r <= 0 or the model has no jumps
        InsufficientDecay: If the transform has not decayed at the Nyquist shell
    """
    if r <= 0 or not model.has_jumps:
        raise ConfigException("Small-jump kernels need r > 0 and a jump part")
    grid = grid if grid is not None else small_jump_grid(model, r, t)
    if grid.d != 1:
        raise ConfigException("Small-jump kernels are computed in d = 1")
    xi = grid.frequency_axis()
    exponent = small_exponent(model, r, t, float(np.abs(xi).max()))(xi)
    if include_gaussian:
        exponent = exponent + model.A[0, 0] * xi**2
    field = invert(np.exp(-t * exponent), grid, f"small-jump kernel r={r:.4g}")
    kernel = KernelField(field=field, t=t, provenance="small-jump")
    if not kernel.mass_ok:
        logger.warning(f"Small-jump kernel mass {kernel.mass:.10g} deviates from 1")
    return kernel
