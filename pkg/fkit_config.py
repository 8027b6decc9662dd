import os
from typing import Optional


def _env_flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default) not in ("0", "false", "False", "")


def _default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class FkitConfig:
    def __init__(
        self,
        workers: Optional[int] = None,
        seed: Optional[int] = None,
        trials: Optional[int] = None,
        levi_samples: Optional[int] = None,
        exhaustive_limit: Optional[int] = None,
        out_dir: Optional[str] = None,
        report_format: Optional[str] = None,
        debug: Optional[bool] = None,
        log_level: Optional[str] = None,
    ):
        if workers is None:
            workers = os.getenv("FKIT_WORKERS") or _default_workers()
        self.workers = max(1, int(workers))
        if seed is None:
            seed = os.getenv("FKIT_SEED") or 0
        self.seed = int(seed)
        if trials is None:
            trials = os.getenv("FKIT_TRIALS") or 10_000
        self.trials = max(1, int(trials))
        if levi_samples is None:
            levi_samples = os.getenv("FKIT_LEVI_SAMPLES") or 64
        self.levi_samples = int(levi_samples)
        if exhaustive_limit is None:
            exhaustive_limit = os.getenv("FKIT_EXHAUSTIVE_LIMIT") or 10**8
        self.exhaustive_limit = int(exhaustive_limit)
        if out_dir is None:
            out_dir = os.getenv("FKIT_OUT_DIR") or "reports"
        self.out_dir = str(out_dir)
        if report_format is None:
            report_format = os.getenv("FKIT_REPORT_FORMAT") or "json"
        self.report_format = str(report_format).lower()
        if self.report_format not in ("json", "csv", "both"):
            self.report_format = "json"
        if debug is None:
            debug = _env_flag("FKIT_DEBUG")
        self.debug = bool(debug)
        if log_level is None:
            log_level = os.getenv("FKIT_LOG_LEVEL") or "INFO"
        self.log_level = str(log_level).upper()

    def replace(self, **overrides) -> "FkitConfig":
        """Копия с переопределёнными полями (None = оставить как есть)."""
        base = dict(
            workers=self.workers,
            seed=self.seed,
            trials=self.trials,
            levi_samples=self.levi_samples,
            exhaustive_limit=self.exhaustive_limit,
            out_dir=self.out_dir,
            report_format=self.report_format,
            debug=self.debug,
            log_level=self.log_level,
        )
        base.update({k: v for k, v in overrides.items() if v is not None})
        return FkitConfig(**base)


def debug_enabled() -> bool:
    # читается на каждый вызов: тесты переключают FKIT_DEBUG через monkeypatch
    return _env_flag("FKIT_DEBUG")
