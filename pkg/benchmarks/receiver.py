from jax import config

config.update("jax_enable_x64", True)
import jax.numpy as jnp

import rijax as rx
from rijax.beliefs import uniform_benchmark
from rijax.receiver import stage2_choice


class Stage2Kernel:
    param_names = ["n_beliefs"]
    params = [[100, 1000, 10000]]

    def setup(self, n_beliefs: int):
        self.x = jnp.linspace(0.0, 1.0, n_beliefs)

    def time_choice(self, n_beliefs: int):
        stage2_choice(self.x, 0.5, 1.0, 0.0, 1.0).y1.block_until_ready()


class BestResponse:
    param_names = ["grid_points", "profile"]
    params = [[401, 2001], ["full", "uniform"]]

    def setup(self, grid_points: int, profile: str):
        self.params = rx.ModelParams(k=1.5, mu=0.4, grid_points=grid_points)
        if profile == "full":
            self.p = rx.DiscreteBeliefDistribution.full_information(0.4)
        else:
            self.p = uniform_benchmark(0.4, n_points=200)

    def time_best_response(self, grid_points: int, profile: str):
        rx.best_response(self.p, self.p, self.params)
