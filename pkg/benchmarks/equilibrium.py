from jax import config

config.update("jax_enable_x64", True)

import rijax as rx


class FullInformation:
    param_names = ["grid_points", "step"]
    params = [[401, 2001], [0.02, 0.005]]

    def setup(self, grid_points: int, step: float):
        self.params = rx.ModelParams(k=1.0, mu=0.5, grid_points=grid_points)
        self.search = rx.DeviationSearchConfig(step=step)

    def time_check(self, grid_points: int, step: float):
        rx.check_full_info(self.params, self.search)


class PublicExperiments:
    param_names = ["public_grid_points"]
    params = [[101, 401]]

    def setup(self, public_grid_points: int):
        self.p = rx.DiscreteBeliefDistribution.full_information(0.5)
        self.params = rx.ModelParams(grid_points=401)
        self.search = rx.DeviationSearchConfig(
            step=0.05, public_grid_points=public_grid_points
        )

    def time_check(self, public_grid_points: int):
        rx.check_public(self.p, self.params, self.search)
