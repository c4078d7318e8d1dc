from pydantic import BaseModel, ConfigDict, Field

__all__ = ["RankPolicy", "DEFAULT_POLICY"]


class RankPolicy(BaseModel):
    """Decides which eigenvalues count as strictly positive.

    An eigenvalue is retained iff it exceeds ``max(rel_tol * lambda_1, abs_floor)``.
    """

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-10, gt=0, lt=1)
    """Eigenvalues below rel_tol times the largest eigenvalue count as zero."""

    abs_floor: float = Field(default=0.0, ge=0)
    """Absolute lower bound of the retention threshold."""

    def threshold(self, lambda_1: float) -> float:
        """Return the retention threshold for a spectrum whose top eigenvalue is lambda_1."""
        return max(self.rel_tol * max(lambda_1, 0.0), self.abs_floor)


DEFAULT_POLICY = RankPolicy()
