"""Sliding window over the goal-directed motion error.

The error is the one-sided shortfall max(0, expert_speed - actual_speed):
exceeding the expert is not a navigation failure. The mean is the
trapezoidal time-integral over the window span, and it reads 0 until a
full window of data has accumulated, so a momentary stall cannot trigger a
switch on its own. The window resets on every LOA switch and goal change.
"""

from collections import deque


class MotionErrorWindow:
    def __init__(self, window_s: float = 5.0):
        self.window_s = window_s
        self._entries: deque[tuple[float, float]] = deque()
        self._integral = 0.0

    def __len__(self) -> int:
        return len(self._entries)

    def push(self, t: float, expert_speed: float, actual_speed: float) -> float:
        """Append one sample and return the current mean error."""
        err = max(0.0, expert_speed - actual_speed)
        if self._entries:
            t_prev, e_prev = self._entries[-1]
            self._integral += 0.5 * (e_prev + err) * (t - t_prev)
        self._entries.append((t, err))
        horizon = t - self.window_s - 1e-9
        while len(self._entries) > 1 and self._entries[0][0] < horizon:
            t0, e0 = self._entries.popleft()
            t1, e1 = self._entries[0]
            self._integral -= 0.5 * (e0 + e1) * (t1 - t0)
        return self.mean_error

    @property
    def span(self) -> float:
        if len(self._entries) < 2:
            return 0.0
        return self._entries[-1][0] - self._entries[0][0]

    @property
    def mean_error(self) -> float:
        """Trapezoidal mean over the window; 0 until the window is full."""
        span = self.span
        if span < self.window_s - 1e-6:
            return 0.0
        return max(0.0, self._integral / span)

    def reset(self) -> None:
        self._entries.clear()
        self._integral = 0.0
