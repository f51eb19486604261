import pytest

from sdnsched.model import LOCAL, Association, CostModel, QueueState

# Worked three-switch / two-controller example: controllers serve 2,
# switches serve 1, alpha = 2, arrivals (3, 2, 2). Hop counts not pinned
# by the setup (s2-c2, s3-c1) are chosen above alpha so they never win.
FIG1_COST = CostModel.uniform_alpha(((1, 3), (1, 4), (4, 3)), 2)
FIG1_ARRIVALS = (3, 2, 2)
FIG1_CTRL_SERVICE = (2, 2)
FIG1_SWITCH_SERVICE = (1, 1, 1)
FIG1_X1 = Association(target=(0, 0, LOCAL))
FIG1_X2 = Association(target=(0, LOCAL, 1))


@pytest.fixture
def fig1_queues():
    return QueueState.zeros(3, 2)
