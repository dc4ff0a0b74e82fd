import enum
from functools import cached_property

import numpy as np

from kwplan.common.errors import (
    DomainError,
    HORIZON_INVALID,
    PLAN_ROW_LENGTH,
    PLAN_LAST_ROW,
    PLAN_ROW_ALPHABET,
    STATE_OUT_OF_RANGE
)


class Action(enum.IntEnum):
    CONTINUE = 0
    ACCEPT = 1
    REJECT = 2

    @property
    def code(self):
        return _CODES[self]

    def swapped(self):
        return _SWAP[self]


_CODES = {Action.CONTINUE: 'C', Action.ACCEPT: 'A', Action.REJECT: 'R'}
_SWAP = {
    Action.CONTINUE: Action.CONTINUE,
    Action.ACCEPT: Action.REJECT,
    Action.REJECT: Action.ACCEPT
}
_BY_CODE = {v: k for k, v in _CODES.items()}

CONTINUE = np.uint8(Action.CONTINUE)
ACCEPT = np.uint8(Action.ACCEPT)
REJECT = np.uint8(Action.REJECT)


def row_offset(n):
    """Position of row n (1-based stage) in the flat triangular table."""
    return (n - 1) * (n + 2) // 2


class Plan(object):
    """
    A truncated sequential plan: one action per lattice state (n, s),
    1 <= n <= horizon, 0 <= s <= n, stored row by row in one byte array.

    Instances are immutable; the action table is read-only.
    """

    def __init__(self, config, horizon, actions, lagrangian_value=None):
        if int(horizon) != horizon or horizon < 1:
            raise DomainError(HORIZON_INVALID.format(horizon))
        actions = np.asarray(actions, dtype=np.uint8)
        if actions.size != row_offset(horizon + 1):
            raise DomainError(
                PLAN_ROW_LENGTH.format(
                    horizon, row_offset(horizon + 1), actions.size
                )
            )
        if np.any(actions > REJECT):
            raise DomainError(PLAN_ROW_ALPHABET.format('*', 'codes > 2'))
        last = actions[row_offset(horizon):]
        if np.any(last == CONTINUE):
            raise DomainError(PLAN_LAST_ROW.format(horizon))
        actions = actions.copy()
        actions.flags.writeable = False

        self.config = config
        self.horizon = int(horizon)
        self.actions = actions
        self.lagrangian_value = lagrangian_value

    def __repr__(self):
        return '<Plan H=%r theta*=%r>' % (
            self.horizon, self.config.theta_star
        )

    @classmethod
    def from_rows(cls, config, rows, lagrangian_value=None):
        """
        Build a plan from per-stage rows, either strings over {C, A, R} or
        sequences of Action codes.
        """
        chunks = []
        for n, row in enumerate(rows, start=1):
            if len(row) != n + 1:
                raise DomainError(PLAN_ROW_LENGTH.format(n, n + 1, len(row)))
            if isinstance(row, str):
                bad = sorted(set(row) - set(_BY_CODE))
                if bad:
                    raise DomainError(
                        PLAN_ROW_ALPHABET.format(n, ''.join(bad))
                    )
                row = [_BY_CODE[c] for c in row]
            chunks.append(np.asarray(row, dtype=np.uint8))
        if not chunks:
            raise DomainError(HORIZON_INVALID.format(0))
        return cls(config, len(chunks), np.concatenate(chunks),
                   lagrangian_value)

    def row(self, n):
        """Actions at stage n, indexed by s."""
        if not 1 <= n <= self.horizon:
            raise DomainError(STATE_OUT_OF_RANGE.format(n, 0))
        start = row_offset(n)
        return self.actions[start:start + n + 1]

    def action(self, state):
        return Action(self.row(state.n)[state.s])

    def rows_as_strings(self):
        lookup = np.array([c for _, c in sorted(_CODES.items())])
        return [''.join(lookup[self.row(n)])
                for n in range(1, self.horizon + 1)]

    @cached_property
    def reachable(self):
        """
        Flat boolean table marking states reached with positive probability:
        both stage-1 states, and every child of a reachable Continue state.
        """
        mask = np.zeros(self.actions.size, dtype=bool)
        reach = np.ones(2, dtype=bool)
        for n in range(1, self.horizon + 1):
            start = row_offset(n)
            mask[start:start + n + 1] = reach
            cont = reach & (self.actions[start:start + n + 1] == CONTINUE)
            if not cont.any():
                break
            reach = np.zeros(n + 2, dtype=bool)
            reach[:-1] |= cont
            reach[1:] |= cont
        mask.flags.writeable = False
        return mask

    @cached_property
    def effective_horizon(self):
        """
        Largest n reached with positive probability: one past the last stage
        holding a reachable Continue state, or 1 if the plan always stops at
        stage 1.
        """
        last = 1
        for n in range(1, self.horizon + 1):
            start = row_offset(n)
            if not self.reachable[start:start + n + 1].any():
                break
            last = n
        return last

    def reachable_row(self, n):
        start = row_offset(n)
        return self.reachable[start:start + n + 1]

    def padded_table(self, horizon=None):
        """
        Square (horizon + 1) x (horizon + 1) copy of the action table for
        vectorized lookups; row 0 and cells with s > n are never read.
        """
        horizon = horizon or self.horizon
        table = np.full((horizon + 1, horizon + 1), ACCEPT, dtype=np.uint8)
        for n in range(1, horizon + 1):
            table[n, :n + 1] = self.row(n)
        return table


class ValueTable(object):
    """
    Values of the backward recursion, one array per stage n = 1..horizon.

    In the scaled form entry s of stage n is C(n, s) * U_n(s).
    """

    def __init__(self, stages, scaled=True):
        self._stages = stages
        self.scaled = scaled

    @property
    def horizon(self):
        return len(self._stages)

    def values(self, n):
        return self._stages[n - 1]

    def __getitem__(self, state):
        return self._stages[state.n - 1][state.s]
