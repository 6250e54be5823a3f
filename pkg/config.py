import os
from dataclasses import dataclass
from dotenv import load_dotenv

TOOL_NAME = "quivercert"
TOOL_VERSION = "0.1.0"

OUTPUT_FORMATS = ("json", "text")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    output_format: str = "json"
    box_bound: int = 100
    modulus_cap: int = 16
    seed: int = 0
    resolution_bound: int = 16
    candidate_bound: int = 10
    residue_limit: int = 200_000
    workers: int = 1
    log_level: str = "WARNING"

    @staticmethod
    def from_env() -> "Settings":
        load_dotenv()
        env = os.getenv

        output_format = env("QUIVERCERT_FORMAT", "json").strip().lower()
        if output_format not in OUTPUT_FORMATS:
            raise RuntimeError(
                f"QUIVERCERT_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}, got {output_format!r}"
            )

        integers = {}
        for name, default in [
            ("QUIVERCERT_BOX_BOUND", "100"),
            ("QUIVERCERT_MODULUS_CAP", "16"),
            ("QUIVERCERT_SEED", "0"),
            ("QUIVERCERT_RESOLUTION_BOUND", "16"),
            ("QUIVERCERT_CANDIDATE_BOUND", "10"),
            ("QUIVERCERT_RESIDUE_LIMIT", "200000"),
            ("QUIVERCERT_WORKERS", "1"),
        ]:
            raw = env(name, default)
            try:
                integers[name] = int(raw)
            except ValueError as exc:
                raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc

        invalid = [
            f"{name} >= {minimum}"
            for name, minimum in [
                ("QUIVERCERT_BOX_BOUND", 1),
                ("QUIVERCERT_MODULUS_CAP", 2),
                ("QUIVERCERT_RESOLUTION_BOUND", 1),
                ("QUIVERCERT_CANDIDATE_BOUND", 1),
                ("QUIVERCERT_RESIDUE_LIMIT", 1),
                ("QUIVERCERT_WORKERS", 1),
            ]
            if integers[name] < minimum
        ]
        if invalid:
            raise RuntimeError(f"Invalid environment configuration, expected: {', '.join(invalid)}")

        log_level = env("QUIVERCERT_LOG_LEVEL", "WARNING").strip().upper()
        if log_level not in LOG_LEVELS:
            raise RuntimeError(f"QUIVERCERT_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {log_level!r}")

        return Settings(
            output_format=output_format,
            box_bound=integers["QUIVERCERT_BOX_BOUND"],
            modulus_cap=integers["QUIVERCERT_MODULUS_CAP"],
            seed=integers["QUIVERCERT_SEED"],
            resolution_bound=integers["QUIVERCERT_RESOLUTION_BOUND"],
            candidate_bound=integers["QUIVERCERT_CANDIDATE_BOUND"],
            residue_limit=integers["QUIVERCERT_RESIDUE_LIMIT"],
            workers=integers["QUIVERCERT_WORKERS"],
            log_level=log_level,
        )
