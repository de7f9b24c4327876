import math
import warnings

from scipy.stats import chi2

DEFAULT_C = 5.0


class ShellSpec:
    """Radii of the Gaussian shell in dimension `dim`

    A standard normal Z in R^d satisfies

        P(r_in <= |Z| <= r_out) >= 1 - 2 exp(-c)

    with r_in^2 = d - 2 sqrt(c d) and r_out^2 = d + 2 sqrt(c d) + 2 c.
    When d < 4 c the inner radicand is negative; r_in is clamped to 0 and
    the shell degenerates into a ball.

    Parameters
    ----------
    dim : int
        at least 2
    c : float, default is 5
    """

    def __init__(self, dim, c=DEFAULT_C):
        if int(dim) != dim or dim < 2:
            raise ValueError(f"Shells need an integer dimension dim >= 2, got {dim}.")
        c = float(c)
        if not (math.isfinite(c) and c > 0):
            raise ValueError(f"The concentration parameter c should be positive, got {c}.")
        self.dim = int(dim)
        self.c = c
        root = 2 * math.sqrt(c * self.dim)
        self.degenerate = self.dim - root < 0
        self.r_in_sq = max(self.dim - root, 0.0)
        self.r_out_sq = self.dim + root + 2 * c

    @property
    def r_in(self):
        return math.sqrt(self.r_in_sq)

    @property
    def r_out(self):
        return math.sqrt(self.r_out_sq)

    @property
    def guaranteed_mass(self):
        """Lower bound 1 - 2 exp(-c) on the shell probability"""
        return 1 - 2 * math.exp(-self.c)

    def exact_mass(self):
        """P(r_in <= |Z| <= r_out) from the chi-square distribution with `dim` degrees of freedom"""
        return float(chi2.cdf(self.r_out_sq, self.dim) - chi2.cdf(self.r_in_sq, self.dim))

    def contains_sq(self, squared_norms):
        """Elementwise r_in^2 <= s <= r_out^2 for squared norms s"""
        return (squared_norms >= self.r_in_sq) & (squared_norms <= self.r_out_sq)

    def __repr__(self):
        return f"ShellSpec(dim={self.dim}, c={self.c}, r_in={self.r_in:.6g}, r_out={self.r_out:.6g})"

    def __eq__(self, other):
        if not isinstance(other, ShellSpec):
            return NotImplemented
        return self.dim == other.dim and self.c == other.c

    def __hash__(self):
        return hash((self.dim, self.c))

    def to_dict(self):
        return {
            "dim": self.dim,
            "c": self.c,
            "r_in": self.r_in,
            "r_out": self.r_out,
            "degenerate": self.degenerate,
        }


def shell_radii(dim, c=DEFAULT_C):
    """Shell radii for dimension `dim` and concentration parameter `c`

    Parameters
    ----------
    dim : int
    c : float, default is 5

    Returns
    -------
    ShellSpec

    Warns
    -----
    RuntimeWarning
        if dim < 4 c, in which case r_in is clamped to 0
    """
    spec = ShellSpec(dim, c)
    if spec.degenerate:
        warnings.warn(
            f"dim={spec.dim} is below 4c={4 * spec.c:g}: the inner shell radius is "
            "clamped to 0 and the shell is a ball.",
            RuntimeWarning,
        )
    return spec
