"""Application configuration."""

from os import getenv

from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()


class Settings(BaseModel):
    """Runtime settings for the toolkit."""

    app_name: str = getenv("SEMIQFT_APP_NAME", "Semiclassical QFT toolkit")
    app_env: str = getenv("APP_ENV", "dev")
    log_level: str = getenv("LOG_LEVEL", "WARNING").upper()
    max_qubits: int = int(getenv("SEMIQFT_MAX_QUBITS", "15"))
    prune_threshold: float = float(getenv("SEMIQFT_PRUNE_THRESHOLD", "1e-15"))
    norm_tolerance: float = float(getenv("SEMIQFT_NORM_TOLERANCE", "1e-12"))
    default_seed: int = int(getenv("SEMIQFT_DEFAULT_SEED", "0"))
    random_inputs: int = int(getenv("SEMIQFT_RANDOM_INPUTS", "20"))

    @property
    def max_s(self) -> int:
        """Largest QFT index s accepted by the CLI and API."""
        return self.max_qubits - 1


settings: Settings = Settings()
