"""Random test games with a positive definite, non-symmetric Jacobian."""
from __future__ import annotations

import numpy as np

from .model import PlayerData, Problem


def _check_ranges(players, vars_per_player, b_range, bounds, h, eig_range):
    if players < 1 or vars_per_player < 1:
        raise ValueError("need at least one player with at least one variable")
    if h < 0:
        raise ValueError("asymmetry h must be nonnegative")
    lam_min, lam_max = eig_range
    if not 0 < lam_min <= lam_max:
        raise ValueError("eigenvalue range must satisfy 0 < min <= max")
    if b_range[0] > b_range[1]:
        raise ValueError("b range is reversed")
    lo, hi = bounds
    if int(lo) != lo or int(hi) != hi or lo > hi:
        raise ValueError("bounds must be integers with l <= u")


def _random_spd(rng, n, lam_min, lam_max) -> np.ndarray:
    """``V diag(lam) V'`` with a Haar orthogonal ``V``; extreme eigenvalues pinned."""
    A = rng.standard_normal((n, n))
    V, R = np.linalg.qr(A)
    V = V * np.sign(np.diag(R))
    lam = rng.uniform(lam_min, lam_max, size=n)
    lam[0] = lam_min
    if n > 1:
        lam[-1] = lam_max
    M = (V * lam) @ V.T
    return 0.5 * (M + M.T)


def _cross_pairs(owner):
    n = owner.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    keep = owner[rows] != owner[cols]
    return rows[keep], cols[keep]


def _split(M, bhat, owner, n_players, vars_per_player, lo, hi) -> Problem:
    players = []
    idx = np.arange(M.shape[0])
    for nu in range(n_players):
        own = idx[owner == nu]
        oth = idx[owner != nu]
        players.append(PlayerData(
            Q=M[np.ix_(own, own)].copy(),
            C=M[np.ix_(own, oth)].copy(),
            b=bhat[own].copy(),
            l=np.full(vars_per_player, int(lo), dtype=np.int64),
            u=np.full(vars_per_player, int(hi), dtype=np.int64),
        ))
    return Problem(players)


def generate(players: int, vars_per_player: int, b_range=(-1.0, 1.0), bounds=(-5, 5), h: float = 0.1,
             eig_range=(0.1, 2.0), seed=None) -> Problem:
    """Random game: SPD base matrix, then antisymmetric noise on cross-player entries.

    For every pair ``(i, j)`` of variables owned by different players a draw
    ``v ~ U[-h * Mmax, h * Mmax]`` is added to ``M[i, j]`` and subtracted from
    ``M[j, i]``; the symmetric part, and hence its spectrum, is untouched.
    """
    _check_ranges(players, vars_per_player, b_range, bounds, h, eig_range)
    rng = np.random.default_rng(seed)
    n = players * vars_per_player
    owner = np.repeat(np.arange(players), vars_per_player)
    M = _random_spd(rng, n, *eig_range)
    m_max = np.abs(M).max()
    rows, cols = _cross_pairs(owner)
    v = rng.uniform(-h * m_max, h * m_max, size=rows.shape[0])
    M[rows, cols] += v
    M[cols, rows] -= v
    bhat = rng.uniform(b_range[0], b_range[1], size=n)
    return _split(M, bhat, owner, players, vars_per_player, *bounds)


def generate_two_groups(players: int, vars_per_player: int, b_range=(-1.0, 1.0), bounds=(-5, 5),
                        h: float = 0.1, eig_range=(0.1, 2.0), seed=None, density: float = 1.0,
                        return_partition: bool = False):
    """Random game whose variables admit a valid two-group split.

    A symmetric matrix with nonpositive off-diagonal entries and the requested
    spectrum is built first, then antisymmetric noise is added to cross-player
    pairs without flipping any sign, and finally the matrix is conjugated by
    ``D = diag(+-1)`` drawn from a random partition.  Same-group entries keep
    their nonpositive sign and cross-group entries become nonnegative, while
    the spectrum of the symmetric part is unchanged.
    """
    _check_ranges(players, vars_per_player, b_range, bounds, h, eig_range)
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    n = players * vars_per_player
    owner = np.repeat(np.arange(players), vars_per_player)
    lam_min, lam_max = eig_range

    A = rng.uniform(0.0, 1.0, size=(n, n))
    A = np.triu(A, k=1) * (rng.uniform(size=(n, n)) < density)
    A = A + A.T
    if n == 1:
        S = np.array([[lam_min]])
    else:
        mu = np.linalg.eigvalsh(A)
        spread = mu[-1] - mu[0]
        if spread <= 0:
            S = np.diag(rng.uniform(lam_min, lam_max, size=n))
            S[0, 0], S[-1, -1] = lam_min, lam_max
        else:
            alpha = (lam_max - lam_min) / spread
            sigma = mu[-1] + lam_min / alpha if alpha > 0 else mu[-1] + 1.0
            alpha = alpha if alpha > 0 else lam_min
            S = alpha * (sigma * np.eye(n) - A)

    m_max = np.abs(S).max()
    rows, cols = _cross_pairs(owner)
    mag = -S[rows, cols]  # >= 0
    v = np.clip(rng.uniform(-h * m_max, h * m_max, size=rows.shape[0]), -mag, mag)
    S[rows, cols] += v
    S[cols, rows] -= v

    sign = np.where(rng.uniform(size=n) < 0.5, 1.0, -1.0)
    sign[0] = 1.0
    M = sign[:, None] * S * sign[None, :]
    bhat = rng.uniform(b_range[0], b_range[1], size=n)
    problem = _split(M, bhat, owner, players, vars_per_player, *bounds)
    if return_partition:
        from .jacobi import Partition

        return problem, Partition(tuple(1 if s > 0 else 2 for s in sign))
    return problem
