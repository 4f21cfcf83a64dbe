"""
settings.py

Environment-driven configuration for tessellab.
Values are read from a .env file (python-dotenv) or the shell, validated by pydantic,
and can be overridden from the command line (--budget-vertices, --tol-profile).
"""

import os
from typing import Literal, Optional

import logfire
from dotenv import load_dotenv
from pydantic import BaseModel, Field

from parsers import parse_bool, parse_int

ToleranceProfile = Literal["default", "strict", "loose"]


class Tolerances(BaseModel):
    """
    Numeric tolerances used wherever floating point enters.

    Attributes:
        quoted_decimal (float): Agreement with quoted four-digit decimals.
        algebraic (float): Float renderings of exact algebraic identities.
        eigen_residual (float): Accepted residual ||Sx - lambda x|| / ||x|| of an eigensolve.
        bishop_slack (float): Allowance for finite-radius growth estimates above the comparison value.
        kernel_singular (float): Smallest singular value treated as zero when filtering eigenvalue candidates.
    """
    quoted_decimal: float = 1e-3
    algebraic: float = 1e-12
    eigen_residual: float = 1e-8
    bishop_slack: float = 1e-2
    kernel_singular: float = 1e-8


TOLERANCE_PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(algebraic=1e-13, eigen_residual=1e-10, bishop_slack=5e-3, kernel_singular=1e-10),
    "loose": Tolerances(quoted_decimal=5e-3, algebraic=1e-9, eigen_residual=1e-6, bishop_slack=5e-2,
                        kernel_singular=1e-6),
}


class Settings(BaseModel):
    budget_vertices: int = Field(default=2_000_000, ge=1)
    enumeration_limit: int = Field(default=5_000_000, ge=1)
    tol_profile: ToleranceProfile = "default"
    log_console: bool = False

    # Report store
    mongo_uri: Optional[str] = None
    db_username: Optional[str] = None
    db_password: Optional[str] = None
    db_host: Optional[str] = None
    db_name: str = "tessellab"
    db_collection: str = "Reports"

    @property
    def tolerances(self) -> Tolerances:
        return TOLERANCE_PROFILES[self.tol_profile]

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from environment variables (after loading .env).
        Unset or malformed values fall back to the defaults.
        """
        load_dotenv()
        values = {
            "budget_vertices": parse_int(os.getenv("TESSELLAB_BUDGET_VERTICES")),
            "enumeration_limit": parse_int(os.getenv("TESSELLAB_ENUMERATION_LIMIT")),
            "tol_profile": os.getenv("TESSELLAB_TOL_PROFILE") or None,
            "log_console": parse_bool(os.getenv("TESSELLAB_LOG_CONSOLE")),
            "mongo_uri": os.getenv("MONGO_URI") or None,
            "db_username": os.getenv("DB_USERNAME") or None,
            "db_password": os.getenv("DB_PASSWORD") or None,
            "db_host": os.getenv("DB_HOST") or None,
            "db_name": os.getenv("DB_NAME") or None,
            "db_collection": os.getenv("DB_COLLECTION") or None,
        }
        return cls(**{key: value for key, value in values.items() if value is not None})

    def resolved_mongo_uri(self) -> Optional[str]:
        """
        Return MONGO_URI when set, otherwise an Atlas URI assembled from DB_USERNAME/DB_PASSWORD/DB_HOST.
        Returns None when neither is configured.
        """
        if self.mongo_uri:
            return self.mongo_uri
        if self.db_username and self.db_password and self.db_host:
            return (f"mongodb+srv://{self.db_username}:{self.db_password}@{self.db_host}/"
                    "?retryWrites=true&w=majority")
        return None


_logging_configured = False


def configure_logging(settings: Settings) -> None:
    """
    Start the logfire session once per process.
    Console output stays off unless TESSELLAB_LOG_CONSOLE is set, so stdout carries only reports.
    """
    global _logging_configured
    if _logging_configured:
        return
    logfire.configure(
        send_to_logfire="if-token-present",
        service_name="tessellab",
        console=None if settings.log_console else False,
    )
    _logging_configured = True
