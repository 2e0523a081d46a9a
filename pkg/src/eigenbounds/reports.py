"""Result records shared by every check in the package.

Two record shapes cover everything: residuals of two-sided identities and
slacks of one-sided bounds.  Identity checks compare both sides at a relative
tolerance; inequality checks only penalize violations (lhs exceeding rhs), so
a large positive slack never fails.
"""

from dataclasses import dataclass, field


def _scale(lhs: float, rhs: float) -> float:
    return max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class IdentityResidualReport:
    """Outcome of evaluating both sides of an identity or one-sided bound.

    ``residual`` is always ``lhs - rhs``.  For identities the relative
    residual is ``|lhs - rhs| / max(1, |lhs|, |rhs|)``; for inequalities
    (``lhs <= rhs`` expected) only the positive part of the residual counts,
    so ``slack = rhs - lhs`` may be arbitrarily large without failing.
    """

    lhs: float
    rhs: float
    residual: float
    relative_residual: float
    tolerance: float
    passed: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def identity_report(lhs, rhs, tolerance: float) -> IdentityResidualReport:
    """Two-sided check: lhs and rhs must agree to the relative tolerance."""
    l, r = complex(lhs), complex(rhs)
    rel = abs(l - r) / _scale(abs(l), abs(r))
    return IdentityResidualReport(
        lhs=l.real,
        rhs=r.real,
        residual=(l - r).real,
        relative_residual=rel,
        tolerance=tolerance,
        passed=rel <= tolerance,
    )


def inequality_report(lhs, rhs, tolerance: float) -> IdentityResidualReport:
    """One-sided check: lhs <= rhs up to tolerance relative to the scale."""
    l, r = complex(lhs), complex(rhs)
    violation = max((l - r).real, 0.0) + abs(l.imag) + abs(r.imag)
    rel = violation / _scale(abs(l), abs(r))
    return IdentityResidualReport(
        lhs=l.real,
        rhs=r.real,
        residual=(l - r).real,
        relative_residual=rel,
        tolerance=tolerance,
        passed=rel <= tolerance,
    )


@dataclass(frozen=True)
class BoundReport:
    """An evaluated closed-form bound against a known (or absent) actual value.

    ``slack = bound - actual`` when the actual value is known; the check
    passes when the slack is not more negative than the tolerance allows.
    """

    name: str
    bound: float
    actual: float | None = None
    slack: float | None = None
    tolerance: float = 1e-12
    passed: bool = True
    inputs: dict = field(default_factory=dict)


def bound_report(name: str, bound: float, actual: float | None = None,
                 tolerance: float = 1e-12, inputs: dict | None = None) -> BoundReport:
    slack = None if actual is None else bound - actual
    if slack is None:
        passed = True
    else:
        passed = slack >= -tolerance * max(1.0, abs(bound), abs(actual))
    return BoundReport(name=name, bound=float(bound),
                       actual=None if actual is None else float(actual),
                       slack=None if slack is None else float(slack),
                       tolerance=tolerance, passed=passed,
                       inputs=dict(inputs or {}))
