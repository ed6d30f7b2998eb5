"""Operator cognitive-availability estimation from head yaw.

A head-pose stream (yaw degrees, 0 = facing the control GUI) is low-pass
filtered with an exponential moving average and mapped onto an attending
degree in [0, 1] through a calibrated dead-band/ramp. The upstream vision
system is out of scope; samples come from traces, the scripted operator,
or live console messages.

Trace file format: one ``timestamp_s yaw_deg`` pair per line.
"""

import math
from dataclasses import dataclass

import numpy as np


class CalibrationError(ValueError):
    """Attending/away yaw distributions overlap too much to calibrate."""


@dataclass(frozen=True)
class HeadPoseSample:
    timestamp: float
    yaw: float  # degrees, positive toward the secondary-task screen


@dataclass(frozen=True)
class YawCalibration:
    attend_band: float = 15.0  # |yaw| below this: fully attending
    away_band: float = 30.0  # |yaw| above this: fully away

    def __post_init__(self):
        if not 0.0 < self.attend_band < self.away_band <= 90.0:
            raise ValueError("need 0 < attend_band < away_band <= 90")


@dataclass(frozen=True)
class AvailabilityEstimate:
    filtered_yaw: float
    degree: float

    @property
    def attending(self) -> bool:
        return self.degree >= 0.5


def ema_update(prev_filtered: float, yaw: float, alpha: float) -> float:
    """One exponential-moving-average step: alpha*yaw + (1-alpha)*prev."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    return alpha * yaw + (1.0 - alpha) * prev_filtered


def classify(filtered_yaw: float, cal: YawCalibration = YawCalibration()) -> AvailabilityEstimate:
    """Map filtered yaw to an attending degree (even in yaw, linear ramp)."""
    mag = abs(filtered_yaw)
    if mag <= cal.attend_band:
        degree = 1.0
    elif mag >= cal.away_band:
        degree = 0.0
    else:
        degree = (cal.away_band - mag) / (cal.away_band - cal.attend_band)
    return AvailabilityEstimate(filtered_yaw, degree)


def calibrate(
    baseline_attending,
    baseline_away,
    min_attend_band: float = 5.0,
) -> YawCalibration:
    """Derive bands from pilot baselines.

    attend_band = mean|attending| + 2*std (population std), floored at
    min_attend_band; away_band = midpoint between attend_band and
    mean|away|. Overlapping distributions raise CalibrationError.
    """
    att = np.abs(np.asarray(baseline_attending, dtype=np.float64))
    away = np.abs(np.asarray(baseline_away, dtype=np.float64))
    if att.size == 0 or away.size == 0:
        raise CalibrationError("both baseline sets must be non-empty")
    if away.mean() <= att.mean():
        raise CalibrationError("away baseline must have larger mean |yaw| than attending")
    attend_band = max(float(att.mean() + 2.0 * att.std()), min_attend_band)
    away_band = 0.5 * (attend_band + float(away.mean()))
    if attend_band >= away_band:
        raise CalibrationError(
            f"distributions overlap: attend_band {attend_band:.2f} >= away_band {away_band:.2f}"
        )
    return YawCalibration(attend_band, min(away_band, 90.0))


class AttentionMonitor:
    """Stateful per-trial filter over an incoming yaw sample stream.

    Missing samples (no face in frame / silent live stream) hold the filter
    for dropout_grace seconds since the last real sample and are then fed
    as yaw = dropout_yaw, failing toward "not attending".
    """

    def __init__(
        self,
        alpha: float = 0.2,
        cal: YawCalibration = YawCalibration(),
        dropout_grace: float = 0.5,
        dropout_yaw: float = 90.0,
    ):
        self.alpha = alpha
        self.cal = cal
        self.dropout_grace = dropout_grace
        self.dropout_yaw = dropout_yaw
        self._filtered: float | None = None
        self._last_sample_t: float | None = None

    @property
    def filtered(self) -> float:
        return 0.0 if self._filtered is None else self._filtered

    def update(self, t: float, yaw: float | None) -> AvailabilityEstimate:
        if yaw is not None:
            self._last_sample_t = t
            if self._filtered is None:
                self._filtered = yaw
            else:
                self._filtered = ema_update(self._filtered, yaw, self.alpha)
        else:
            since = t - self._last_sample_t if self._last_sample_t is not None else math.inf
            if since > self.dropout_grace:
                if self._filtered is None:
                    self._filtered = self.dropout_yaw
                else:
                    self._filtered = ema_update(self._filtered, self.dropout_yaw, self.alpha)
        return classify(self.filtered, self.cal)


def load_yaw_trace(path) -> list[HeadPoseSample]:
    samples = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            ts, yaw = line.split()
            samples.append(HeadPoseSample(float(ts), float(yaw)))
    for a, b in zip(samples, samples[1:]):
        if b.timestamp <= a.timestamp:
            raise ValueError("trace timestamps must be strictly increasing")
    return samples


def save_yaw_trace(path, samples) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in samples:
            f.write(f"{s.timestamp:.3f} {s.yaw:.4f}\n")
