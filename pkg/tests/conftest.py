import numpy as np
import pytest
from hypothesis import settings

import polygamy_lab as pl

settings.register_profile("numeric", deadline=None, max_examples=60)
settings.load_profile("numeric")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Trigger JIT compilation (cached after the first ever run) so that
    # runtime-budget assertions never time the compiler.
    pl.hermitian_eig(np.eye(2))
    rho = pl.w_state(3).reduced((0, 1))  # rank 2, so the climb kernel compiles
    pl.assisted_measure(rho, "entropy", pl.OptimizerOptions(restarts=1, iterations=5, seed=0))
    pl.assisted_measure(rho, "tangle", pl.OptimizerOptions(restarts=1, iterations=5, seed=0))
