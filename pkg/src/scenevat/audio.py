"""Self-contained audio front end.

WAV decoding (PCM 16/24/32-bit and float32, mono or stereo), windowed-sinc
resampling, a centered Hann STFT, a mel filterbank, and log-mel features
pooled to one vector per recording by a feature-wise mean over time.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True)
class AudioClip:
    """Mono samples (nominally in [-1, 1]) at a fixed rate in Hz."""

    samples: np.ndarray
    rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise InputError(f"clip samples must be 1-D, got {samples.ndim}-D")
        if not self.rate > 0:
            raise InputError(f"sample rate must be positive, got {self.rate}")
        if not np.isfinite(samples).all():
            raise InputError("clip contains non-finite samples")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return self.samples.shape[0]

    def duration(self) -> float:
        return len(self) / self.rate


@dataclass(frozen=True)
class AudioConfig:
    """STFT / mel parameters.  Defaults give 431 frames for a 10 s clip.

    The log is natural with an additive floor; set ``db_scale`` for
    10*log10 instead.  The mel scale is linear below 1 kHz and logarithmic
    above; ``htk_mel`` switches to the purely logarithmic HTK variant.
    """

    target_rate: int = 22050
    n_fft: int = 2048
    hop: int = 512
    n_mels: int = 128
    fmin: float = 0.0
    fmax: Optional[float] = None  # None -> target_rate / 2
    log_floor: float = 1e-10
    htk_mel: bool = False
    db_scale: bool = False

    def resolved_fmax(self) -> float:
        return self.target_rate / 2 if self.fmax is None else self.fmax

    def validate(self) -> None:
        if self.target_rate <= 0:
            raise InputError(f"target_rate must be positive, got {self.target_rate}")
        if self.n_fft < 2:
            raise InputError(f"n_fft must be >= 2, got {self.n_fft}")
        if not 1 <= self.hop <= self.n_fft:
            raise InputError(f"hop={self.hop} must satisfy 1 <= hop <= n_fft")
        if self.n_mels < 1:
            raise InputError(f"n_mels must be >= 1, got {self.n_mels}")
        fmax = self.resolved_fmax()
        if not 0 <= self.fmin < fmax <= self.target_rate / 2:
            raise InputError(
                f"need 0 <= fmin < fmax <= rate/2, got fmin={self.fmin} fmax={fmax}"
            )
        if not self.log_floor > 0:
            raise InputError(f"log_floor must be positive, got {self.log_floor}")

    def cache_key(self) -> str:
        doc = json.dumps(
            {
                "target_rate": self.target_rate,
                "n_fft": self.n_fft,
                "hop": self.hop,
                "n_mels": self.n_mels,
                "fmin": self.fmin,
                "fmax": self.resolved_fmax(),
                "log_floor": self.log_floor,
                "htk_mel": self.htk_mel,
                "db_scale": self.db_scale,
            },
            sort_keys=True,
        )
        return hashlib.sha256(doc.encode("ascii")).hexdigest()[:16]


# --------------------------------------------------------------------------
# WAV decoding


def decode_wav(data: bytes) -> AudioClip:
    """Decode a RIFF/WAVE byte string to a mono clip at its native rate.

    Supports PCM 16/24/32-bit and IEEE float32, 1 or 2 channels (averaged
    to mono).  Integer samples are scaled by 1 / 2^(bits-1).  Malformed or
    unsupported containers raise InputError naming the offending chunk.
    """
    if len(data) < 12 or data[:4] != b"RIFF":
        raise InputError("not a RIFF container (missing 'RIFF' chunk)")
    if data[8:12] != b"WAVE":
        raise InputError("RIFF form type is not 'WAVE'")

    fmt: Optional[dict] = None
    payload: Optional[bytes] = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if cid == b"fmt ":
            fmt = _parse_fmt(body)
        elif cid == b"data":
            if len(body) < size:
                raise InputError("truncated 'data' chunk")
            payload = body
        pos += 8 + size + (size & 1)

    if fmt is None:
        raise InputError("missing 'fmt ' chunk")
    if payload is None:
        raise InputError("missing 'data' chunk")

    channels = fmt["channels"]
    bits = fmt["bits"]
    block = channels * (bits // 8)
    if block == 0 or len(payload) % block:
        raise InputError(
            f"'data' chunk size {len(payload)} is not a whole number of "
            f"{block}-byte frames"
        )

    if fmt["format"] == WAVE_FORMAT_PCM:
        if bits == 16:
            samples = np.frombuffer(payload, dtype="<i2").astype(np.float64)
            samples /= 2.0**15
        elif bits == 24:
            raw = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3)
            ints = (
                raw[:, 0].astype(np.int64)
                | (raw[:, 1].astype(np.int64) << 8)
                | (raw[:, 2].astype(np.int64) << 16)
            )
            ints -= (ints & 0x800000) << 1  # sign extension
            samples = ints.astype(np.float64) / 2.0**23
        elif bits == 32:
            samples = np.frombuffer(payload, dtype="<i4").astype(np.float64)
            samples /= 2.0**31
        else:
            raise InputError(f"unsupported PCM bit depth {bits} in 'fmt ' chunk")
    elif fmt["format"] == WAVE_FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise InputError(f"unsupported float bit depth {bits} in 'fmt ' chunk")
        samples = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    else:
        raise InputError(
            f"unsupported codec 0x{fmt['format']:04x} in 'fmt ' chunk"
        )

    if channels == 1:
        mono = samples
    elif channels == 2:
        mono = samples.reshape(-1, 2).mean(axis=1)
    else:
        raise InputError(f"unsupported channel count {channels} in 'fmt ' chunk")
    return AudioClip(mono, fmt["rate"])


def _parse_fmt(body: bytes) -> dict:
    if len(body) < 16:
        raise InputError("truncated 'fmt ' chunk")
    tag, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", body)
    if tag == WAVE_FORMAT_EXTENSIBLE:
        # Effective format is the first two bytes of the SubFormat GUID.
        if len(body) < 26:
            raise InputError("truncated extensible 'fmt ' chunk")
        (tag,) = struct.unpack_from("<H", body, 24)
    if rate <= 0:
        raise InputError(f"invalid sample rate {rate} in 'fmt ' chunk")
    return {"format": tag, "channels": channels, "rate": rate, "bits": bits}


def read_wav(path) -> AudioClip:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read WAV file {path}: {exc}") from exc
    try:
        return decode_wav(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# Resampling


def resample(clip: AudioClip, target_rate: int, *, taps: int = 32,
             chunk: int = 4096) -> AudioClip:
    """Band-limited rate conversion by windowed-sinc interpolation.

    Output length is round(len * target / native).  The kernel is a
    Hann-windowed sinc with ``taps`` zero crossings per side, widened and
    scaled by the rate ratio when downsampling; per-sample coefficient
    normalization keeps DC gain exactly 1 even at the edges.
    """
    if target_rate <= 0:
        raise InputError(f"target rate must be positive, got {target_rate}")
    native = clip.rate
    if target_rate == native:
        return AudioClip(clip.samples.copy(), native)
    x = clip.samples
    n_in = len(x)
    n_out = (2 * n_in * target_rate + native) // (2 * native)  # round half up
    if n_in == 0 or n_out == 0:
        return AudioClip(np.zeros(0), target_rate)

    ratio = target_rate / native
    cutoff = min(1.0, ratio)  # fraction of the input Nyquist
    radius = int(np.ceil(taps / cutoff))
    rel = np.arange(-radius, radius + 1, dtype=np.float64)

    out = np.empty(n_out, dtype=np.float64)
    for c0 in range(0, n_out, chunk):
        c1 = min(c0 + chunk, n_out)
        k = np.arange(c0, c1, dtype=np.float64)
        center = k * (native / target_rate)
        base = np.floor(center).astype(np.int64)
        idx = base[:, None] + rel[None, :].astype(np.int64)
        offset = idx - center[:, None]
        h = cutoff * np.sinc(cutoff * offset)
        h *= np.where(
            np.abs(offset) <= radius,
            0.5 + 0.5 * np.cos(np.pi * offset / radius),
            0.0,
        )
        valid = (idx >= 0) & (idx < n_in)
        h *= valid
        gathered = x[np.clip(idx, 0, n_in - 1)]
        out[c0:c1] = (gathered * h).sum(axis=1) / h.sum(axis=1)
    return AudioClip(out, target_rate)


# --------------------------------------------------------------------------
# STFT and mel features


def hann_window(n: int) -> np.ndarray:
    """Periodic Hann window (the DFT-even convention)."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def stft_power(clip: AudioClip, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Power spectrogram, shape (frames, n_fft // 2 + 1).

    Frames are Hann-windowed and centered via reflect padding, one every
    ``hop`` samples; the frame count is 1 + len // hop.
    """
    cfg.validate()
    if clip.rate != cfg.target_rate:
        raise InputError(
            f"clip rate {clip.rate} does not match configured rate "
            f"{cfg.target_rate}; resample first"
        )
    n = len(clip)
    if n == 0:
        raise InputError("cannot compute an STFT of an empty clip")
    pad = cfg.n_fft // 2
    padded = np.pad(clip.samples, pad, mode="reflect")
    n_frames = 1 + n // cfg.hop
    frames = np.lib.stride_tricks.sliding_window_view(padded, cfg.n_fft)
    frames = frames[:: cfg.hop][:n_frames]
    spec = np.fft.rfft(frames * hann_window(cfg.n_fft), axis=1)
    return np.abs(spec) ** 2


def hz_to_mel(freq, htk: bool = False) -> np.ndarray:
    f = np.asarray(freq, dtype=np.float64)
    if htk:
        return 2595.0 * np.log10(1.0 + f / 700.0)
    f_sp = 200.0 / 3.0
    min_log_hz = 1000.0
    min_log_mel = min_log_hz / f_sp
    logstep = np.log(6.4) / 27.0
    return np.where(
        f < min_log_hz,
        f / f_sp,
        min_log_mel + np.log(np.maximum(f, min_log_hz) / min_log_hz) / logstep,
    )


def mel_to_hz(mel, htk: bool = False) -> np.ndarray:
    m = np.asarray(mel, dtype=np.float64)
    if htk:
        return 700.0 * (10.0 ** (m / 2595.0) - 1.0)
    f_sp = 200.0 / 3.0
    min_log_hz = 1000.0
    min_log_mel = min_log_hz / f_sp
    logstep = np.log(6.4) / 27.0
    return np.where(
        m < min_log_mel,
        f_sp * m,
        min_log_hz * np.exp(logstep * (np.maximum(m, min_log_mel) - min_log_mel)),
    )


def _mel_breakpoints(cfg: AudioConfig) -> np.ndarray:
    mels = np.linspace(
        hz_to_mel(cfg.fmin, cfg.htk_mel),
        hz_to_mel(cfg.resolved_fmax(), cfg.htk_mel),
        cfg.n_mels + 2,
    )
    return mel_to_hz(mels, cfg.htk_mel)


def mel_center_frequencies(cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Center frequency in Hz of each triangular filter."""
    cfg.validate()
    return _mel_breakpoints(cfg)[1:-1]


def mel_filterbank(cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Triangular filters, shape (n_mels, n_fft // 2 + 1).

    Centers are equally spaced on the mel scale between fmin and fmax; each
    filter is divided by its bandwidth in Hz so wide filters do not dominate.
    Raises if any filter covers no FFT bin.
    """
    cfg.validate()
    pts = _mel_breakpoints(cfg)
    fft_freqs = np.arange(cfg.n_fft // 2 + 1) * (cfg.target_rate / cfg.n_fft)
    lower = pts[:-2]
    center = pts[1:-1]
    upper = pts[2:]
    up = (fft_freqs[np.newaxis, :] - lower[:, np.newaxis]) / np.maximum(
        center - lower, np.finfo(np.float64).tiny
    )[:, np.newaxis]
    down = (upper[:, np.newaxis] - fft_freqs[np.newaxis, :]) / np.maximum(
        upper - center, np.finfo(np.float64).tiny
    )[:, np.newaxis]
    weights = np.maximum(0.0, np.minimum(up, down))
    bandwidth = upper - lower
    weights /= bandwidth[:, np.newaxis]
    empty = np.flatnonzero((weights <= 0).all(axis=1))
    if empty.size:
        raise InputError(
            f"mel filter {int(empty[0])} covers no FFT bin; lower n_mels or "
            f"raise n_fft"
        )
    return weights


def mel_power(clip: AudioClip, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Mel-band power per frame, shape (n_mels, frames).  Pre-log."""
    power = stft_power(clip, cfg)
    return mel_filterbank(cfg) @ power.T


def log_mel_mean(clip: AudioClip, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """One feature vector per recording: log mel power averaged over frames."""
    mel = mel_power(clip, cfg)
    if cfg.db_scale:
        logged = 10.0 * np.log10(mel + cfg.log_floor)
    else:
        logged = np.log(mel + cfg.log_floor)
    return logged.mean(axis=1)


def extract_features(data: bytes, cfg: AudioConfig = AudioConfig()) -> np.ndarray:
    """Decode, resample to the configured rate, and pool to one vector."""
    clip = decode_wav(data)
    clip = resample(clip, cfg.target_rate)
    return log_mel_mean(clip, cfg)
