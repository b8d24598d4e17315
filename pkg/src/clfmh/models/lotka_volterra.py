"""Predator-prey birth-death process simulated with the Gillespie algorithm.

theta = (pred_birth, pred_death, prey_birth, prey_death) sets the four
reaction rates

    r1 = theta1 X Y   predator born        (X -> X+1)
    r2 = theta2 X     predator dies        (X -> X-1)
    r3 = theta3 Y     prey born            (Y -> Y+1)
    r4 = theta4 X Y   prey dies            (Y -> Y-1)

for predator count X and prey count Y.  The state is recorded on a regular
grid and each dataset row stacks the two recorded series [X_1..X_T, Y_1..Y_T].

Randomness protocol (fixed so that recorded streams replay exactly): the
simulator consumes uniforms in blocks of shape (4096, 2); each event uses one
row, u[0] for the exponential waiting time and u[1] for the reaction choice,
with reactions ordered r1, r2, r3, r4 in the cumulative-rate comparison.
If every rate hits zero the remaining grid is padded with the absorbing
state; if X + Y exceeds the cap the simulation aborts with the partial
trajectory length attached.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from clfmh.errors import ExplosionError
from clfmh.models.base import Dataset, Model, SeedLatent
from clfmh.rng import RngStream

UNIFORM_BLOCK = 4096

_DONE, _NEED_BLOCK, _EXPLODED = 0, 1, 2


@njit(cache=True)
def _gillespie_core(t, x, y, gi, grid, out_x, out_y, th1, th2, th3, th4, cap, u):
    n_grid = grid.shape[0]
    n_u = u.shape[0]
    used = 0
    while True:
        if gi >= n_grid:
            return t, x, y, gi, used, _DONE
        r1 = th1 * x * y
        r2 = th2 * x
        r3 = th3 * y
        r4 = th4 * x * y
        rtot = r1 + r2 + r3 + r4
        if rtot <= 0.0:
            while gi < n_grid:
                out_x[gi] = x
                out_y[gi] = y
                gi += 1
            return t, x, y, gi, used, _DONE
        if used >= n_u:
            return t, x, y, gi, used, _NEED_BLOCK
        t_next = t - np.log1p(-u[used, 0]) / rtot
        while gi < n_grid and grid[gi] < t_next:
            out_x[gi] = x
            out_y[gi] = y
            gi += 1
        if gi >= n_grid:
            return t, x, y, gi, used, _DONE
        pick = u[used, 1] * rtot
        used += 1
        t = t_next
        if pick < r1:
            x += 1.0
        elif pick < r1 + r2:
            x -= 1.0
        elif pick < r1 + r2 + r3:
            y += 1.0
        else:
            y -= 1.0
        if x + y > cap:
            return t, x, y, gi, used, _EXPLODED


class LotkaVolterraModel(Model):
    name = "lotka_volterra"
    param_names = ("pred_birth", "pred_death", "prey_birth", "prey_death")
    layout = "two_series"
    has_oracle = False

    def __init__(
        self,
        horizon: float = 20.0,
        dt_record: float = 0.1,
        x0: int = 50,
        y0: int = 100,
        cap: float = 1e7,
    ):
        if horizon <= 0 or dt_record <= 0 or x0 < 0 or y0 < 0 or cap <= 0:
            raise ValueError("invalid structural constants")
        self.horizon = float(horizon)
        self.dt_record = float(dt_record)
        self.x0 = int(x0)
        self.y0 = int(y0)
        self.cap = float(cap)
        self.T = int(round(horizon / dt_record)) + 1
        self.grid = np.linspace(0.0, self.horizon, self.T)
        self.theta_true = np.array([0.01, 0.5, 1.0, 0.01])

    def in_support(self, theta) -> bool:
        return bool(np.all(theta >= 0.0))

    def draw_latent(self, m: int, stream: RngStream) -> SeedLatent:
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return SeedLatent(stream.child().descriptor(), m)

    def _run_one(self, theta, gen: RngStream):
        out_x = np.empty(self.T)
        out_y = np.empty(self.T)
        t, x, y, gi = 0.0, float(self.x0), float(self.y0), 0
        while True:
            block = gen.uniform(size=(UNIFORM_BLOCK, 2))
            t, x, y, gi, _, status = _gillespie_core(
                t, x, y, gi, self.grid, out_x, out_y,
                theta[0], theta[1], theta[2], theta[3], self.cap, block,
            )
            if status == _DONE:
                return out_x, out_y
            if status == _EXPLODED:
                raise ExplosionError(
                    f"population exceeded cap {self.cap:g} at t={t:.3f}",
                    theta=np.array(theta),
                    partial_length=gi,
                )

    def simulate_given(self, theta, latent: SeedLatent) -> Dataset:
        theta = self.validate_theta(theta)
        gen = latent.replay()
        rows = np.empty((latent.m, 2 * self.T))
        for i in range(latent.m):
            out_x, out_y = self._run_one(theta, gen)
            rows[i, : self.T] = out_x
            rows[i, self.T :] = out_y
        return Dataset(rows, "two_series")
