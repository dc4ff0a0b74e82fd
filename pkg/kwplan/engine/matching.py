"""
Alternating secant search for a pair of error probabilities.

Both the Lagrange multipliers and the SPRT endpoints are found the same
way: two log-scale coordinates x0, x1 whose residuals
r_i = ln(value_i / target_i) decrease in their own coordinate. The search
solves one coordinate at a time with the other held fixed, always the one
whose value is furthest off. Each one-dimensional solve takes secant steps
clipped to ``max_step`` and bisects whenever a bracket is known and the
step leaves it (and on every third step, so brackets keep shrinking).
Brackets and slopes only use points measured within the current solve,
i.e. at the current value of the other coordinate.

Once both values are within tolerance the search keeps refining for a
few more evaluations and returns the closest pair it has measured: the
smallest maximum relative error, the earliest one on ties.
"""
import logging
import math
from collections import namedtuple


log = logging.getLogger(__name__)

MATCHED = 'matched'
NEAREST = 'nearest'
CAPPED = 'capped'

Iterate = namedtuple('Iterate', ['x', 'values', 'error', 'payload'])
MatchResult = namedtuple('MatchResult', ['status', 'best', 'iterations'])

DEFAULT_SLOPE = -1.0
MIN_SLOPE = -1e-3
# A bracket narrower than this (log scale) counts as collapsed.
BRACKET_TOL = 1e-6
INNER_UPDATES = 16
REFINE_UPDATES = 12


class _Budget(Exception):
    pass


def _residual(value, target):
    return math.log(max(value, 1e-300) / target)


def _relative_error(value, target):
    return abs(value / target - 1.0)


class _Search(object):
    def __init__(self, evaluate, targets, bounds, max_updates, max_step,
                 tied, label):
        self.evaluate = evaluate
        self.targets = targets
        self.low, self.high = bounds
        self.max_updates = max_updates
        self.max_step = max_step
        self.tied = tied
        self.label = label
        self.count = 0
        self.best = None

    def clip(self, value):
        return min(max(value, self.low), self.high)

    def measure(self, x):
        if self.count >= self.max_updates:
            raise _Budget()
        v0, v1, payload = self.evaluate(x[0], x[1])
        self.count += 1
        errors = (_relative_error(v0, self.targets[0]),
                  _relative_error(v1, self.targets[1]))
        current = Iterate(tuple(x), (v0, v1), max(errors), payload)
        if self.best is None or current.error < self.best.error:
            self.best = current
        log.info('{} update {}: x=({:.6f}, {:.6f}) values=({:.6g}, {:.6g}) '
                 'error={:.3g}'.format(self.label, self.count - 1, x[0],
                                       x[1], v0, v1, current.error))
        r = (_residual(v0, self.targets[0]), _residual(v1, self.targets[1]))
        return r, errors

    def score(self, i, errors):
        return max(errors) if self.tied else errors[i]

    def solve_coordinate(self, x, r, errors, i, tol, limit):
        """
        Move coordinate ``i`` alone until its error is within ``tol``, its
        bracket collapses, it cannot move or ``limit`` evaluations are
        spent. Returns the closest point seen as ``(x, r, errors)``.
        """
        lo, hi = -math.inf, math.inf
        points = []
        closest = (x, r, errors)

        for step_index in range(limit):
            if r[i] > 0.0:
                lo = max(lo, x[i])
            elif r[i] < 0.0:
                hi = min(hi, x[i])
            points.append((x[i], r[i]))
            if self.score(i, errors) <= tol or hi - lo < BRACKET_TOL:
                break

            slope = DEFAULT_SLOPE
            for xi, ri in reversed(points[:-1]):
                if xi != x[i]:
                    candidate = (r[i] - ri) / (x[i] - xi)
                    if candidate < MIN_SLOPE:
                        slope = candidate
                    break
            step = -r[i] / slope
            proposal = x[i] + max(-self.max_step, min(self.max_step, step))
            if math.isfinite(lo) and math.isfinite(hi) and \
                    (not lo < proposal < hi or step_index % 3 == 2):
                proposal = 0.5 * (lo + hi)
            proposal = self.clip(proposal)
            if proposal == x[i]:
                break

            x = list(x)
            x[i] = proposal
            if self.tied:
                x[1] = proposal
            r, errors = self.measure(x)
            if self.score(i, errors) < self.score(i, closest[2]):
                closest = (x, r, errors)
        return closest


def match_pair(evaluate, start, targets, rel_tol, bounds, max_updates,
               max_step=1.0, tied=False, label='match',
               refine=REFINE_UPDATES):
    """
    Drive ``evaluate(x0, x1) -> (value0, value1, payload)`` until both
    values are within ``rel_tol`` of ``targets``.

    :param start: Initial (x0, x1)
    :param bounds: (low, high) for both coordinates
    :param max_updates: Cap on the number of evaluations
    :param tied: Keep x1 == x0 and move only x0 (symmetric problems)
    :param refine: Evaluations spent improving the pair after the first
                   match
    :return: MatchResult with status "matched", "nearest" (neither
             coordinate can get closer) or "capped" (evaluation budget
             exhausted before a match)
    """
    search = _Search(evaluate, targets, bounds, max_updates, max_step, tied,
                     label)
    x = [search.clip(v) for v in start]
    if tied:
        x[1] = x[0]

    try:
        r, errors = search.measure(x)
        matched_at = None
        stalled = None
        stalls = 0
        while True:
            if matched_at is None and max(errors) <= rel_tol:
                matched_at = search.count
            if matched_at is None:
                tol, limit = rel_tol, INNER_UPDATES
            else:
                remaining = matched_at + refine - search.count
                if remaining <= 0:
                    break
                share = refine if tied else max(1, refine // 2)
                tol, limit = 0.0, min(INNER_UPDATES, share, remaining)

            i = 0 if tied or errors[0] >= errors[1] else 1
            if i == stalled and not tied:
                i = 1 - i
            before, worst, best = (search.score(i, errors), max(errors),
                                   search.best.error)
            x, r, errors = search.solve_coordinate(x, r, errors, i, tol,
                                                   limit)
            # progress: a closer pair overall, or coordinate i closer
            # without raising the larger of the two errors
            if search.best.error < best or (
                    search.score(i, errors) < before and
                    max(errors) <= worst):
                stalls, stalled = 0, None
            else:
                stalls, stalled = stalls + 1, i
                if stalls >= (1 if tied else 2):
                    break
    except _Budget:
        status = MATCHED if search.best.error <= rel_tol else CAPPED
        return MatchResult(status, search.best, search.count)

    if search.best.error <= rel_tol:
        return MatchResult(MATCHED, search.best, search.count)
    log.warning('{}: neither coordinate can get closer, keeping nearest '
                'iterate with error {:.3g}'.format(label, search.best.error))
    return MatchResult(NEAREST, search.best, search.count)
