"""
Policies built from other policies: batch truncation, level truncation and concatenation.

Limits are counted relative to the run state at the moment the wrapper
starts, so wrappers compose with each other and with concatenation.
"""
from __future__ import annotations

from pasm.impl.branching import Chooser
from pasm.impl.marginals import MarginalEngine
from pasm.policies.base import Policy, RunState, _Halt, _Limit
from pasm.types.errors import ConfigurationError
from pasm.types.trace import TerminationReason


class _LimitedPolicy(Policy):
    def __init__(self, inner: Policy):
        self.inner = inner

    def _limit(self, state: RunState) -> _Limit:
        raise NotImplementedError

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        limit = state.push_limit(self._limit(state))
        try:
            return self.inner.run(state, chooser, engine)
        except _Halt as halt:
            if halt.limit is not limit:
                raise
            return limit.reason
        finally:
            state.pop_limit(limit)


class TruncatedPolicy(_LimitedPolicy):
    """Stops the moment the inner policy would open batch T + 1."""

    def __init__(self, inner: Policy, max_batches: int):
        super().__init__(inner)
        self.max_batches = max_batches
        self.name = f"{inner.name}[T={max_batches}]"

    def _limit(self, state: RunState) -> _Limit:
        return _Limit(TerminationReason.TRUNCATED_AT_T, max_batches=state.batch_count + self.max_batches)


class LevelTruncatedPolicy(_LimitedPolicy):
    """Stops once the inner policy has selected `level` items."""

    def __init__(self, inner: Policy, level: int):
        super().__init__(inner)
        self.level = level
        self.name = f"{inner.name}[t={level}]"

    def _limit(self, state: RunState) -> _Limit:
        return _Limit(TerminationReason.LEVEL_TRUNCATED, max_selections=state.selection_count + self.level)


class ConcatenatedPolicy(Policy):
    """Runs `first` to completion, then `second` from an empty information state.

    The second policy computes marginals on top of everything already
    selected and never reselects it.
    """

    def __init__(self, first: Policy, second: Policy):
        self.first = first
        self.second = second
        self.name = f"{first.name}@{second.name}"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        self.first.run(state, chooser, engine)
        state.forget()
        return self.second.run(state, chooser, engine)


def truncate_batches(policy: Policy, max_batches: int) -> Policy:
    if max_batches < 1:
        raise ConfigurationError(f"batch truncation needs T >= 1, got {max_batches}")
    return TruncatedPolicy(policy, max_batches)


def level_truncate(policy: Policy, level: int) -> Policy:
    if level < 0:
        raise ConfigurationError(f"level truncation needs t >= 0, got {level}")
    return LevelTruncatedPolicy(policy, level)


def concatenate(first: Policy, second: Policy) -> Policy:
    return ConcatenatedPolicy(first, second)
