"""Waveform <-> log-mel conversion and Griffin-Lim phase reconstruction.

Analysis configuration: 16 kHz audio, 128 mel bands, 10 ms hop (160 samples),
62.5 ms Hann window (1000 samples) zero-padded to a 1024-point FFT, mel range
0-8000 Hz, log floor 1e-5. Framing starts at sample 0 with no centering, so
shifting the input by one hop shifts frames by exactly one index.
"""

import wave
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .autodiff.container import load_container, save_container
from .errors import InputError

SAMPLE_RATE = 16000
N_MELS = 128
HOP = 160
WIN = 1000
N_FFT = 1024
FMIN = 0.0
FMAX = 8000.0
LOG_FLOOR = 1e-5

HOP_SECONDS = HOP / SAMPLE_RATE
WIN_SECONDS = WIN / SAMPLE_RATE


@dataclass(eq=False)
class MelSpectrogram:
    """Log-mel energy frames, (T, 128)."""

    frames: np.ndarray
    hop: float = HOP_SECONDS
    win: float = WIN_SECONDS

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 2 or self.frames.shape[1] != N_MELS:
            raise InputError(f"mel frames must be (T, {N_MELS}), got {self.frames.shape}")
        if not np.isfinite(self.frames).all():
            raise InputError("mel frames contain non-finite values")

    @property
    def num_frames(self):
        return self.frames.shape[0]


def hann_window(n=WIN):
    # periodic Hann
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


@lru_cache(maxsize=None)
def mel_filterbank(n_mels=N_MELS, n_fft=N_FFT, sample_rate=SAMPLE_RATE, fmin=FMIN, fmax=FMAX):
    """Triangular mel filters, rows (n_mels) x FFT bins (1 + n_fft/2)."""
    n_bins = 1 + n_fft // 2
    bin_freqs = np.arange(n_bins) * (sample_rate / n_fft)
    corners = _mel_to_hz(np.linspace(_hz_to_mel(fmin), _hz_to_mel(fmax), n_mels + 2))
    fb = np.zeros((n_mels, n_bins))
    for j in range(n_mels):
        lo, mid, hi = corners[j], corners[j + 1], corners[j + 2]
        rising = (bin_freqs - lo) / max(mid - lo, 1e-12)
        falling = (hi - bin_freqs) / max(hi - mid, 1e-12)
        fb[j] = np.maximum(0.0, np.minimum(rising, falling))
    return fb


@lru_cache(maxsize=None)
def mel_filter_centers(n_mels=N_MELS, fmin=FMIN, fmax=FMAX):
    """Apex frequency (Hz) of each triangular filter."""
    corners = _mel_to_hz(np.linspace(_hz_to_mel(fmin), _hz_to_mel(fmax), n_mels + 2))
    return corners[1:-1]


def num_frames(n_samples):
    if n_samples < WIN:
        raise InputError(f"need at least {WIN} samples, got {n_samples}")
    return (n_samples - WIN) // HOP + 1


def _frame(samples):
    t = num_frames(samples.size)
    idx = np.arange(WIN)[None, :] + HOP * np.arange(t)[:, None]
    return samples[idx]


def stft(samples):
    """Complex STFT, (T, 1 + N_FFT/2); no centering, window zero-padded to N_FFT."""
    frames = _frame(np.asarray(samples, dtype=np.float64)) * hann_window()
    return np.fft.rfft(frames, n=N_FFT, axis=1)


def mel_analyze(samples, sample_rate=SAMPLE_RATE):
    """Waveform -> log-mel spectrogram with floor-clamped energies."""
    samples = np.asarray(samples, dtype=np.float64)
    if sample_rate != SAMPLE_RATE:
        raise InputError(f"expected {SAMPLE_RATE} Hz audio, got {sample_rate}")
    if not np.isfinite(samples).all():
        raise InputError("waveform contains non-finite samples")
    power = np.abs(stft(samples)) ** 2
    mel = power @ mel_filterbank().T
    return MelSpectrogram(np.log(np.maximum(mel, LOG_FLOOR)))


@lru_cache(maxsize=None)
def _mel_pinv():
    return np.linalg.pinv(mel_filterbank())


def _istft(spec):
    """Overlap-add inverse of `stft` with squared-window normalization."""
    t = spec.shape[0]
    window = hann_window()
    segs = np.fft.irfft(spec, n=N_FFT, axis=1)[:, :WIN] * window
    n_out = (t - 1) * HOP + WIN
    out = np.zeros(n_out)
    wsum = np.zeros(n_out)
    wsq = window * window
    for i in range(t):
        out[i * HOP : i * HOP + WIN] += segs[i]
        wsum[i * HOP : i * HOP + WIN] += wsq
    # clamped normalizer: frame-edge samples taper instead of amplifying
    return out / np.maximum(wsum, 0.01)


def griffin_lim(mel, iters=32, seed=0, return_residuals=False):
    """Invert a log-mel spectrogram to a waveform via Griffin-Lim.

    The mel energies are lifted to the linear-frequency power spectrum with
    the filterbank pseudo-inverse, then `iters` rounds of phase projection
    run from a seeded random phase. Residuals are the per-iteration
    Frobenius distance between the target magnitude and the re-analyzed one.
    """
    if iters < 1:
        raise InputError("griffin_lim needs iters >= 1")
    if not isinstance(mel, MelSpectrogram):
        mel = MelSpectrogram(np.asarray(mel))
    mel_power = np.exp(mel.frames)
    mag = np.sqrt(_lift_to_linear(mel_power))

    # replicate edge frames so the true signal span gets full overlap
    # coverage; the padding is trimmed off after reconstruction
    pad = max(WIN // HOP - 1, 0)
    mag = np.concatenate([np.repeat(mag[:1], pad, axis=0), mag, np.repeat(mag[-1:], pad, axis=0)])

    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=mag.shape)
    spec = mag * np.exp(1j * phase)
    residuals = []
    wave_out = _istft(spec)
    for _ in range(iters):
        reana = stft(wave_out)
        residuals.append(float(np.linalg.norm(mag - np.abs(reana))))
        spec = mag * np.exp(1j * np.angle(reana))
        wave_out = _istft(spec)
    wave_out = wave_out[pad * HOP : pad * HOP + (mel.num_frames - 1) * HOP + WIN]
    peak = np.max(np.abs(wave_out))
    if peak > 1.0:
        wave_out = wave_out / peak
    if return_residuals:
        return wave_out, np.array(residuals)
    return wave_out


def save_wav(path, samples, sample_rate=SAMPLE_RATE):
    """Write mono 16-bit PCM RIFF."""
    samples = np.asarray(samples, dtype=np.float64)
    pcm = np.round(np.clip(samples, -1.0, 1.0) * 32767.0).astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(sample_rate)
        fh.writeframes(pcm.tobytes())


def load_wav(path):
    """Read mono 16-bit PCM RIFF -> (float64 samples in [-1, 1], sample_rate)."""
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1 or fh.getsampwidth() != 2:
            raise InputError(f"{path}: expected mono 16-bit PCM")
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    return samples, rate


def save_mel(path, mel):
    if not isinstance(mel, MelSpectrogram):
        mel = MelSpectrogram(np.asarray(mel))
    save_container(
        path,
        {"mel": mel.frames},
        meta={"kind": "mel", "hop": mel.hop, "win": mel.win},
    )


def load_mel(path):
    arrays, meta = load_container(path)
    return MelSpectrogram(arrays["mel"], hop=meta.get("hop", HOP_SECONDS), win=meta.get("win", WIN_SECONDS))
