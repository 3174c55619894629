"""scikit-learn style front end.

:class:`AfdmImModem` is a transformer from bit rows to transmitted
time-domain blocks (with prefix and power scaling) and back.  The detectors
are fitted on an effective channel and ``predict`` bit rows from received
DAFT-domain vectors.  Only the estimator conventions are borrowed: there is
nothing to learn, ``fit`` just freezes the derived operators.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bits, check_channel, check_signal
from .codec import ModemConfig, PowerStrategy, demap_batch, encode_batch
from .daft import add_cpp, build_daft, daft_fft, idaft_fft, remove_cpp
from .detection import Codebook, check_ml_feasible, ml_detect_batch, mmse_detect_batch
from .power import allocate_power

__all__ = ["AfdmImModem", "MLDetector", "MMSEDetector"]


class AfdmImModem(TransformerMixin, BaseEstimator):
    """Bits ``(n_blocks, b)`` <-> time-domain blocks ``(n_blocks, n_total + cpp_len)``."""

    def __init__(
        self,
        n_total=32,
        n_sub=8,
        k_active=1,
        mod_order=2,
        c1=0.0,
        c2=0.0,
        cpp_len=0,
        power_strategy="pr",
        e_total=None,
    ):
        self.n_total = n_total
        self.n_sub = n_sub
        self.k_active = k_active
        self.mod_order = mod_order
        self.c1 = c1
        self.c2 = c2
        self.cpp_len = cpp_len
        self.power_strategy = power_strategy
        self.e_total = e_total

    def fit(self, X=None, y=None):
        self.config_ = ModemConfig(
            self.n_total,
            self.n_sub,
            self.k_active,
            self.mod_order,
            self.c1,
            self.c2,
            self.cpp_len,
            PowerStrategy.parse(self.power_strategy),
        )
        e_total = float(self.n_total) if self.e_total is None else float(self.e_total)
        self.op_ = build_daft(self.n_total, self.c1, self.c2)
        self.plan_ = allocate_power(self.config_.power_strategy, e_total, self.config_)
        self.n_features_in_ = self.config_.b
        return self

    def encode(self, X) -> np.ndarray:
        """DAFT-domain blocks ``x`` before power scaling."""
        check_is_fitted(self)
        return encode_batch(check_bits(X, self.config_.b), self.config_)

    def transform(self, X) -> np.ndarray:
        x = self.encode(X) * np.sqrt(self.plan_.rho)
        return add_cpp(idaft_fft(x, self.op_), self.cpp_len, self.c1)

    def receive(self, R) -> np.ndarray:
        """Strip the prefix (if still present) and return to the DAFT domain."""
        check_is_fitted(self)
        width = np.shape(R)[-1] if np.ndim(R) else 0
        if width == self.n_total + self.cpp_len:
            r = remove_cpp(check_signal(R, width, "R"), self.cpp_len)
        else:
            r = check_signal(R, self.n_total, "R")
        return daft_fft(r, self.op_)

    def inverse_transform(self, R) -> np.ndarray:
        """Noiseless decode of transmitted blocks back to bits."""
        y = self.receive(R)
        return demap_batch(y / np.sqrt(self.plan_.rho), self.config_)


class _Detector(BaseEstimator):
    def __init__(self, modem=None):
        self.modem = modem

    def _fitted_modem(self) -> AfdmImModem:
        modem = self.modem if self.modem is not None else AfdmImModem()
        try:
            check_is_fitted(modem)
        except Exception:
            modem = modem.fit()
        return modem

    def fit(self, H, y=None):
        """Freeze the effective channel, ``(N, N)`` shared or ``(T, N, N)`` per row."""
        self.modem_ = self._fitted_modem()
        self.h_eff_ = check_channel(H, self.modem_.n_total)
        self.n_features_in_ = self.modem_.n_total
        return self

    def _inputs(self, Y):
        check_is_fitted(self)
        y = check_signal(Y, self.n_features_in_, "Y")
        h = self.h_eff_
        if h.ndim == 2:
            h = np.broadcast_to(h, (len(y),) + h.shape)
        elif len(h) != len(y):
            raise ValueError(f"{len(h)} fitted channels for {len(y)} received rows")
        return y, h


class MLDetector(_Detector):
    """Exhaustive maximum-likelihood search over every legal block."""

    def fit(self, H, y=None):
        super().fit(H, y)
        check_ml_feasible(self.modem_.config_)
        self.codebook_ = Codebook(self.modem_.config_)
        return self

    def predict(self, Y) -> np.ndarray:
        y, h = self._inputs(Y)
        return ml_detect_batch(y, h, self.modem_.plan_.rho, self.codebook_)


class MMSEDetector(_Detector):
    """Linear MMSE equalisation followed by per-subblock nearest-pattern demapping.

    ``noise_var`` is the noise variance of the received DAFT-domain vector.
    """

    def __init__(self, modem=None, noise_var=1e-2):
        super().__init__(modem)
        self.noise_var = noise_var

    def fit(self, H, y=None):
        if self.noise_var < 0:
            raise ValueError(f"noise_var must be >= 0, got {self.noise_var}")
        return super().fit(H, y)

    def predict(self, Y) -> np.ndarray:
        y, h = self._inputs(Y)
        return mmse_detect_batch(y, h, self.noise_var, self.modem_.plan_.rho, self.modem_.config_)
