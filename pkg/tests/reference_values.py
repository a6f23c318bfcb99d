"""Reference values, columns ordered uniform, c=sqrt2, c=2^(3/4), c=2."""

MEANS = {
    2: (1.414, 1.414, 1.399, 1.366),
    3: (1.732, 1.707, 1.636, 1.549),
    4: (2.000, 1.914, 1.777, 1.641),
    5: (2.236, 2.061, 1.860, 1.686),
    6: (2.449, 2.164, 1.910, 1.709),
    7: (2.646, 2.237, 1.940, 1.721),
    8: (2.828, 2.289, 1.957, 1.726),
    9: (3.000, 2.326, 1.968, 1.729),
    10: (3.162, 2.352, 1.974, 1.730),
    11: (3.317, 2.370, 1.978, 1.731),
    12: (3.464, 2.383, 1.980, 1.732),
}

TMAX = {
    2: (0.707, 0.707, 0.688, 0.640),
    3: (1.154, 1.122, 1.027, 0.909),
    4: (1.500, 1.385, 1.199, 1.014),
    5: (1.789, 1.556, 1.289, 1.060),
    6: (2.041, 1.669, 1.340, 1.083),
    7: (2.268, 1.745, 1.370, 1.095),
    8: (2.475, 1.797, 1.388, 1.100),
    9: (2.667, 1.834, 1.398, 1.103),
    10: (2.846, 1.860, 1.404, 1.104),
    11: (3.015, 1.879, 1.408, 1.105),
    12: (3.175, 1.892, 1.410, 1.106),
}

# alpha_1, keyed by (tau, K)
ALPHA1 = {
    (1, 2): (.744, .744, .737, .723), (1, 3): (.805, .794, .765, .736),
    (1, 4): (.847, .814, .771, .737), (1, 5): (.877, .821, .772, .738),
    (1, 6): (.901, .823, .772, .738), (1, 7): (.920, .823, .772, .738),
    (1, 8): (.935, .823, .772, .738), (1, 16): (.998, .823, .772, .738),
    (16, 2): (3.056, 3.056, 3.016, 2.938), (16, 3): (3.398, 3.341, 3.210, 3.041),
    (16, 4): (3.553, 3.432, 3.223, 3.068), (16, 5): (3.642, 3.442, 3.227, 3.071),
    (16, 6): (3.731, 3.452, 3.228, 3.071), (16, 7): (3.744, 3.457, 3.228, 3.071),
    (16, 8): (3.809, 3.459, 3.228, 3.071), (16, 16): (3.891, 3.460, 3.338, 3.071),
    (256, 2): (12.270, 12.270, 12.084, 11.711), (256, 3): (13.612, 13.420, 12.835, 12.147),
    (256, 4): (14.242, 13.732, 12.932, 12.162), (256, 5): (14.610, 13.815, 12.930, 12.155),
    (256, 6): (14.850, 13.816, 12.927, 12.152), (256, 7): (15.018, 13.817, 12.922, 12.151),
    (256, 8): (15.145, 13.817, 12.922, 12.151), (256, 16): (15.583, 13.816, 12.922, 12.151),
}

ALPHA2 = {
    (1, 2): (.617, .617, .606, .586), (1, 3): (.711, .694, .649, .607),
    (1, 4): (.738, .718, .659, .609), (1, 5): (.755, .721, .660, .609),
    (1, 6): (.768, .722, .660, .609), (1, 7): (.779, .722, .660, .609),
    (1, 8): (.787, .722, .660, .609), (1, 16): (.824, .722, .660, .609),
    (16, 2): (4.622, 4.622, 4.472, 4.172), (16, 3): (8.429, 8.017, 6.897, 5.701),
    (16, 4): (10.184, 9.160, 7.885, 6.208), (16, 5): (11.363, 9.698, 7.871, 6.296),
    (16, 6): (12.241, 10.022, 7.864, 6.305), (16, 7): (12.690, 10.088, 7.862, 6.305),
    (16, 8): (13.106, 10.068, 7.862, 6.305), (16, 16): (14.575, 10.058, 7.862, 6.305),
    (256, 2): (58.95, 58.95, 56.63, 51.84), (256, 3): (133.37, 127.68, 112.66, 94.71),
    (256, 4): (165.14, 148.96, 124.04, 101.16), (256, 5): (183.75, 156.04, 126.42, 101.13),
    (256, 6): (195.99, 158.69, 126.65, 101.12), (256, 7): (204.71, 159.17, 126.56, 101.12),
    (256, 8): (211.10, 159.23, 126.55, 101.12), (256, 16): (233.78, 159.28, 126.55, 101.12),
}

# relative deviation from the many-stage reference at tau = 256, keyed by (n, K)
DEVIATION = {
    (1, 2): (.233, 1.1e-1, 6.5e-2, 3.6e-2),
    (1, 4): (.110, 6.1e-3, 8.5e-4, 8.6e-4),
    (1, 8): (.053, 4.9e-4, 1.1e-5, 2.0e-7),
    (1, 16): (.026, 1.2e-7, 9.0e-13, 1.5e-15),
    (1, 32): (.013, 3.1e-14, 2.9e-14, 3.4e-14),
    (2, 2): (.770, 6.3e-1, 5.5e-1, 4.9e-1),
    (2, 4): (.354, 6.5e-2, 2.0e-2, 4.1e-2),
    (2, 8): (.174, 3.2e-4, 1.3e-5, 1.6e-8),
    (2, 16): (.085, 1.8e-7, 1.0e-12, 9.6e-15),
    (2, 32): (.042, 1.2e-13, 6.2e-14, 4.0e-14),
}

G_CONSTANTS = {1: 0.797885, 2: 0.967883, 3: 1.51003, 4: 2.8006}
