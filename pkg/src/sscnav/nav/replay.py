"""Uniform replay over compact states."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .state import CompactStates


@dataclass
class Transition:
    state: CompactStates  # batch of one
    action: int
    reward: float
    next_state: CompactStates
    done: bool


@dataclass
class TransitionBatch:
    states: CompactStates
    actions: np.ndarray
    rewards: np.ndarray
    next_states: CompactStates
    dones: np.ndarray

    def __len__(self):
        return len(self.actions)


class ReplayBuffer:
    """Ring buffer; storage is allocated on the first push.

    Safe for one producer and one consumer thread.
    """

    def __init__(self, capacity: int = 50_000):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._n = 0
        self._head = 0
        self._lock = threading.Lock()
        self._store = None

    def __len__(self):
        return self._n

    def _alloc(self, s: CompactStates):
        cap = self.capacity
        self._store = {
            "maps": np.zeros((cap,) + s.maps.shape[1:], np.uint8),
            "conf": np.zeros((cap,) + s.confidence.shape[1:], np.uint8),
            "goal": np.zeros(cap, np.int64),
            "next_maps": np.zeros((cap,) + s.maps.shape[1:], np.uint8),
            "next_conf": np.zeros((cap,) + s.confidence.shape[1:], np.uint8),
            "action": np.zeros(cap, np.int64),
            "reward": np.zeros(cap, np.float64),
            "done": np.zeros(cap, bool),
        }

    def push(self, t: Transition) -> None:
        self.push_batch(t.state, np.array([t.action]), np.array([t.reward]), t.next_state,
                        np.array([t.done]))

    def push_batch(self, states: CompactStates, actions, rewards, next_states: CompactStates, dones):
        rewards = np.asarray(rewards, dtype=np.float64)
        if not np.all(np.isfinite(rewards)):
            raise ValueError("non-finite reward")
        with self._lock:
            if self._store is None:
                self._alloc(states)
            st = self._store
            for b in range(len(states)):
                h = self._head
                st["maps"][h] = states.maps[b]
                st["conf"][h] = states.confidence[b]
                st["goal"][h] = states.goals[b]
                st["next_maps"][h] = next_states.maps[b]
                st["next_conf"][h] = next_states.confidence[b]
                st["action"][h] = actions[b]
                st["reward"][h] = rewards[b]
                st["done"][h] = dones[b]
                self._head = (h + 1) % self.capacity
                self._n = min(self._n + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> TransitionBatch:
        with self._lock:
            if self._n < batch_size:
                raise ValueError(f"buffer holds {self._n} < {batch_size} transitions")
            idx = rng.integers(self._n, size=batch_size)
            st = self._store
            goals = st["goal"][idx].copy()
            return TransitionBatch(
                CompactStates(st["maps"][idx], st["conf"][idx], goals),
                st["action"][idx].copy(),
                st["reward"][idx].copy(),
                CompactStates(st["next_maps"][idx], st["next_conf"][idx], goals),
                st["done"][idx].copy(),
            )
