"""Published reference values and case specifications for the reproduction runs.

Values are transcribed from the tables of the original study of this method
and are used only for comparison; nothing in the library depends on them.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["CaseSpec", "CASES", "TABLE1", "TABLE3", "R2_CASE", "R2_SMALL", "DETERMINANT"]


@dataclass(frozen=True)
class CaseSpec:
    number: int
    norm: str          # "sigma" or "dirichlet"
    target: str        # built-in target name
    basis: str         # "pole" or "log_origin"
    radius: str        # exact decimal string
    ring_count: int
    inverse_z: bool = False

    @property
    def n_basis(self):
        return self.ring_count + int(self.inverse_z)


def _c(n, norm, target, basis, radius, count=16, inv=False):
    return CaseSpec(n, norm, target, basis, radius, count, inv)


CASES = [
    _c(1, "dirichlet", "f1", "pole", "0.6", 8),
    _c(2, "dirichlet", "f1", "pole", "0.6"),
    _c(3, "dirichlet", "f1", "pole", "0.5"),
    _c(4, "dirichlet", "f1", "pole", "0.27"),
    _c(5, "sigma", "f1", "pole", "0.5"),
    _c(6, "dirichlet", "f1", "log_origin", "0.5"),
    _c(7, "dirichlet", "f2", "pole", "0.5"),
    _c(8, "dirichlet", "f2", "pole", "0.7"),
    _c(9, "dirichlet", "f3", "pole", "0.5"),
    _c(10, "dirichlet", "f3", "pole", "0.7"),
    _c(11, "dirichlet", "f2", "log_origin", "0.5"),
    _c(12, "dirichlet", "f2", "log_origin", "0.7"),
    _c(13, "dirichlet", "f3", "log_origin", "0.5"),
    _c(14, "dirichlet", "f3", "log_origin", "0.7"),
    _c(15, "dirichlet", "f4", "pole", "0.5"),
    _c(16, "dirichlet", "f4", "log_origin", "0.5"),
    _c(17, "dirichlet", "f5", "pole", "0.5"),
    _c(18, "dirichlet", "f5", "log_origin", "0.5"),
    _c(19, "dirichlet", "f6", "pole", "0.5"),
    _c(20, "dirichlet", "f6", "log_origin", "0.5"),
    _c(21, "sigma", "f1", "pole", "0.5", inv=True),
    _c(22, "dirichlet", "f1", "pole", "0.5", inv=True),
    _c(23, "dirichlet", "f1", "log_origin", "0.5", inv=True),
]

# average magnitude, maximum magnitude, standard norm on the unit circle
TABLE1 = {
    "f1": (0.87, 2.23, 1.07),
    "f2": (0.97, 1.38, 0.99),
    "f3": (0.90, 1.08, 0.91),
    "f4": (1.01, 1.18, 1.01),
    "f5": (1.00, 1.09, 1.00),
    "f6": (1.01, 1.72, 1.13),
}

# condition number, std and max at R_E = 1, std and max at R_E = 2
TABLE3 = {
    1: (0.160e3, 0.180e-1, 0.377e-1, 0.916e-3, 0.116e-2),
    2: (0.283e6, 0.302e-3, 0.643e-3, 0.488e-6, 0.605e-6),
    3: (0.671e8, 0.163e-4, 0.348e-4, 0.143e-8, 0.189e-8),
    4: (0.701e16, 0.123e-8, 0.223e-8, 0.105e-12, 0.118e-12),
    5: (0.107e10, 0.163e-4, 0.349e-4, 0.125e-9, 0.257e-9),
    6: (0.172e11, 0.214e-5, 0.469e-5, 0.881e-11, 0.225e-10),
    7: (0.671e8, 0.995e-2, 0.138e-1, 0.123e-5, 0.130e-5),
    8: (0.277e4, 0.667e-2, 0.889e-2, 0.179e-3, 0.179e-3),
    9: (0.671e7, 0.185e-2, 0.243e-2, 0.866e-8, 0.103e-7),
    10: (0.277e4, 0.118e-2, 0.122e-2, 0.123e-5, 0.123e-5),
    11: (0.172e11, 0.997e-2, 0.138e-1, 0.102e-6, 0.146e-6),
    12: (0.710e6, 0.971e-2, 0.132e-1, 0.154e-4, 0.157e-4),
    13: (0.172e11, 0.186e-2, 0.244e-2, 0.242e-8, 0.349e-8),
    14: (0.710e6, 0.124e-2, 0.163e-2, 0.249e-6, 0.253e-6),
    15: (0.671e7, 0.155e-4, 0.179e-4, 0.198e-8, 0.213e-8),
    16: (0.172e11, 0.984e-6, 0.133e-5, 0.975e-11, 0.151e-10),
    17: (0.671e8, 0.153e-4, 0.166e-4, 0.527e-9, 0.589e-9),
    18: (0.172e11, 0.172e-5, 0.196e-5, 0.916e-11, 0.134e-10),
    19: (0.671e8, 0.173e-4, 0.262e-4, 0.200e-8, 0.242e-8),
    20: (0.172e11, 0.131e-5, 0.231e-5, 0.108e-10, 0.218e-10),
    21: (0.776e11, 0.122e-4, 0.241e-4, 0.452e-10, 0.955e-10),
    22: (0.456e10, 0.122e-4, 0.241e-4, 0.276e-9, 0.417e-9),
    23: (0.456e10, 0.204e-5, 0.406e-5, 0.554e-11, 0.131e-10),
}

# real-plane logarithmic case, ring radius 2/5 with 16 sources
R2_CASE = {
    "radius": "0.4",
    "count": 16,
    "condition_number": 0.6939e13,
    "std_RE1": 0.4124e-4,
    "max_RE1": 0.6053e-4,
    "std_RE2": 0.4342e-7,
    "max_RE2": 0.759784e-7,
    "retained_condition_drop1": 0.1490e7,
    "target_max": 1.785,
    "target_avg": 1.130,
}

# same with ring radius 0.01
R2_SMALL = {
    "radius": "0.01",
    "count": 16,
    "condition_number": 0.7517e31,
    "std_RE1": 0.3834e-4,
    "max_RE1": 0.5469e-4,
}

# Case 5 determinant by the two routes
DETERMINANT = {
    "case": 5,
    "eigen_route": 0.1044048746849805e-52,
    "product_route": complex(0.1044048714876914949e-52, -0.52161e-68),
    "leading_digits": "1044048",
}
