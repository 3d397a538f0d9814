import numpy as np


def direct_dft(x):
    """O(N^2) DFT, frequency-ordered so index 0 is -fs/2."""
    x = np.asarray(x, dtype=complex)
    n = len(x)
    k = np.arange(n) - n // 2
    m = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, m) / n) @ x


def instantaneous_frequency(samples, fs):
    """Mean frequency from sample-to-sample phase increments."""
    samples = np.asarray(samples)
    return float(np.mean(np.angle(samples[1:] * np.conj(samples[:-1])))) * fs / (2 * np.pi)
