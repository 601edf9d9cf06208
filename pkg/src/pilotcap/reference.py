"""Channel covariances used in the published numerical examples."""

import numpy as np

EXAMPLE1_COVARIANCE = np.array(
    [
        [0.7426, -0.7222],
        [-0.7222, 6.4075],
    ]
)

EXAMPLE2_COVARIANCE = np.array(
    [
        [12.618, -2.5315, -2.2424, 1.1965, -1.5896, 2.5086, -4.5906, -1.398, 1.9345, -4.0798],
        [-2.5315, 8.7639, 2.0577, -4.3889, 2.0117, -0.011, -0.499, 3.1713, 2.1956, 0.2636],
        [-2.2424, 2.0577, 6.0997, 0.2384, -1.1894, -1.6082, -4.5764, -2.319, -0.6284, -0.5846],
        [1.1965, -4.3889, 0.2384, 7.327, 1.1523, 0.3583, 0.705, -5.3612, -2.2747, -0.7751],
        [-1.5896, 2.0117, -1.1894, 1.1523, 10.2643, 1.3222, -0.1717, -2.361, -0.6889, 1.2117],
        [2.5086, -0.011, -1.6082, 0.3583, 1.3222, 2.1366, 0.2868, -0.8628, 1.2528, -1.1311],
        [-4.5906, -0.499, -4.5764, 0.705, -0.1717, 0.2868, 18.4323, 10.9609, 2.3883, 2.0394],
        [-1.398, 3.1713, -2.319, -5.3612, -2.361, -0.8628, 10.9609, 20.4969, 10.5705, 1.3217],
        [1.9345, 2.1956, -0.6284, -2.2747, -0.6889, 1.2528, 2.3883, 10.5705, 9.7425, -0.307],
        [-4.0798, 0.2636, -0.5846, -0.7751, 1.2117, -1.1311, 2.0394, 1.3217, -0.307, 3.3511],
    ]
)

for _c in (EXAMPLE1_COVARIANCE, EXAMPLE2_COVARIANCE):
    _c.setflags(write=False)
del _c
