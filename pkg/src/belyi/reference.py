"""Published reference values the pipeline is checked against.

Coefficient lists are lowest power first.
"""

# defining polynomials of z_{-1} for the tritronquee maps f_k^{0,0}
RESULTANTS = {
    0: [-3, 2],
    1: [-7, 4],
    2: [693, -2310, 2772, -1416, 256],
    3: [1859, -6006, 6864, -3328, 576],
    4: [-23056709, 187166226, -667288284, 1371124664, -1788975552, 1536508416,
        -868265344, 311072256, -64052736, 5767168],
    5: [-16232365, 129858920, -454506220, 913469840, -1161895600, 970042112,
        -531587776, 184365056, -36708352, 3194880],
}

# harmonic maps f_{n,k} = P/Q, keyed by (n, k)
HARMONIC_MAPS = {
    (0, 1): ([1, -3, -3, 2, 3, -3, -1],
             [-1, -3, 3, 2, -3, -3, 1]),
    (0, 2): ([4, -15, -20, 20, 40, -58, -40, 20, 20, -15, -4],
             [-4, -15, 20, 20, -40, -58, 40, 20, -20, -15, 4]),
    (1, 1): ([3, 16, -36, -48, 50, 48, -36, -16, 3],
             [3, -16, -36, 48, 50, -48, -36, 16, 3]),
    (2, 1): ([2, -15, -50, 100, 140, -154, -140, 100, 50, -15, -2],
             [-2, -15, 50, 100, -140, -154, 140, 100, -50, -15, 2]),
}

# pole estimates a_k^{0,0} (two decimals) and the limit they approach
POLES = {3: -2.57, 4: -2.53, 5: -2.50}
POLE_TOLERANCE = 0.005
POLE_LIMIT = -2.38
EXTRAPOLATION_WINDOW = (-2.45, -2.30)

BASE_CUBIC = [0, 0, 3, -2]
