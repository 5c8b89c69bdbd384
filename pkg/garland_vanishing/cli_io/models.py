import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from sqlalchemy import Column, DateTime, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

from ..core.constants import DEFAULT_GROUP_CAP, EIGEN_ZERO_TOL, IDENTITY_TOL, RANK_TOL
from ..core.errors import ConfigError
from .constants import ENV_PREFIX, EXIT_OK, VALID_FORMATS

Base = declarative_base()


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


# --------------------------------------------------------------
# Run configuration
# --------------------------------------------------------------
@dataclass(frozen=True)
class AnalysisConfig:
    complex_path: str | None = None
    group_path: str | None = None
    representation_path: str | None = None
    p: float = 2.0
    seed: int = 0
    samples: int = 20
    output_format: str = "human"
    cap: int = DEFAULT_GROUP_CAP
    tol_rank: float = RANK_TOL
    tol_eig: float = EIGEN_ZERO_TOL
    tol_identity: float = IDENTITY_TOL
    archive_url: str | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ConfigError(f"p must be at least 1, got {self.p}")
        if self.samples < 1:
            raise ConfigError(f"samples must be at least 1, got {self.samples}")
        if self.cap < 1:
            raise ConfigError(f"cap must be at least 1, got {self.cap}")
        if self.output_format not in VALID_FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}")
        for name in ("tol_rank", "tol_eig", "tol_identity"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "AnalysisConfig":
        """
        Defaults come from ``GARLAND_VANISHING_*`` variables; keyword
        overrides (CLI flags) win when they are not None.
        """

        def env(name: str, default: str) -> str:
            return os.getenv(ENV_PREFIX + name, default)

        try:
            values = {
                "seed": int(env("SEED", "0")),
                "samples": int(env("SAMPLES", "20")),
                "cap": int(env("CAP", str(DEFAULT_GROUP_CAP))),
                "output_format": env("FORMAT", "human").lower(),
                "tol_rank": float(env("TOL_RANK", str(RANK_TOL))),
                "tol_eig": float(env("TOL_EIG", str(EIGEN_ZERO_TOL))),
                "tol_identity": float(env("TOL_IDENTITY", str(IDENTITY_TOL))),
                "archive_url": os.getenv(ENV_PREFIX + "ARCHIVE_URL") or None,
            }
        except ValueError as exc:
            raise ConfigError(f"invalid environment value: {exc}") from exc
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# --------------------------------------------------------------
# Report
# --------------------------------------------------------------
@dataclass
class RunReport:
    command: str
    provenance: dict
    spectral: dict | None = None
    cohomology: dict | None = None
    inequality: dict | None = None
    identities: list[dict] = field(default_factory=list)
    exit_code: int = EXIT_OK
    notes: list[str] = field(default_factory=list)
    timestamp: str = field(default_factory=lambda: _utcnow().isoformat())

    @property
    def failed_identities(self) -> list[str]:
        return [r["name"] for r in self.identities if r["status"] == "fail"]

    def to_dict(self, include_timestamp: bool = True) -> dict:
        out = asdict(self)
        if not include_timestamp:
            out.pop("timestamp")
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "RunReport":
        return cls(**payload)


# --------------------------------------------------------------
# Run archive
# --------------------------------------------------------------
class AnalysisRun(Base):
    __tablename__ = "analysis_run"
    id = Column(Integer, primary_key=True)
    # sha256 over the input files, in complex/group/representation order
    input_digest = Column(String(64), nullable=False, index=True)
    command = Column(String(40), nullable=False)
    created_at = Column(DateTime, default=_utcnow, nullable=False)
    updated_at = Column(DateTime, default=_utcnow, onupdate=_utcnow, nullable=False)

    versions = relationship(
        "RunVersion",
        backref="run",
        cascade="all, delete-orphan",
        order_by="RunVersion.version",
    )

    def __repr__(self):
        return f"<AnalysisRun {self.command} {self.input_digest[:12]}>"


class RunVersion(Base):
    __tablename__ = "run_version"
    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("analysis_run.id"), nullable=False)
    version = Column(Integer, nullable=False)
    created_at = Column(DateTime, default=_utcnow, nullable=False)
    note = Column(String(200), default="")
    json_blob = Column(Text, nullable=False)
